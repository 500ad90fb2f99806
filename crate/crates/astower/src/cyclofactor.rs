//! Factorization of X^d - 1 over F_p via p-cyclotomic cosets, with the
//! canonical ordering: f_1 = X - 1 first, then ascending smallest coset
//! representative.

use crate::gf::FieldTower;
use crate::poly::FpPoly;
use crate::{gcd_u64, is_prime, Error, Result};

#[derive(Debug, Clone)]
pub struct FactorTable {
    pub p: u64,
    pub d: u64,
    /// Monic irreducible factors, f_1 = X - 1 first.
    pub factors: Vec<FpPoly>,
    /// Degrees l(i), 1-based position i.
    pub degrees: Vec<u32>,
    /// The p-cyclotomic coset mod d backing each factor.
    pub cosets: Vec<Vec<u64>>,
}

/// Multiplicative order of p mod d (requires gcd(p, d) = 1).
fn ord_mod(p: u64, d: u64) -> u32 {
    if d == 1 {
        return 1;
    }
    let mut acc = p % d;
    let mut k = 1;
    while acc != 1 {
        acc = acc * (p % d) % d;
        k += 1;
    }
    k
}

fn cyclotomic_cosets(p: u64, d: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; d as usize];
    let mut cosets = Vec::new();
    for start in 0..d {
        if seen[start as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut s = start;
        while !seen[s as usize] {
            seen[s as usize] = true;
            coset.push(s);
            s = s * (p % d) % d;
        }
        cosets.push(coset);
    }
    cosets
}

impl FactorTable {
    /// Complete squarefree factorization of X^d - 1 over F_p.
    pub fn build(p: u64, d: u64) -> Result<FactorTable> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 {
            return Err(Error::Invalid("d must be positive".into()));
        }
        if gcd_u64(p, d) != 1 {
            return Err(Error::CharDivides {
                p,
                what: format!("d = {d} (X^d - 1 is not squarefree)"),
            });
        }

        let cosets = cyclotomic_cosets(p, d); // coset of 0 comes first
        let factors = if d == 1 {
            vec![FpPoly::x_pow_minus(p, 1, 1)]
        } else {
            let m = ord_mod(p, d);
            let tower = FieldTower::build(p, m, 1)?;
            let zeta = tower.gen_pow(((tower.size() - 1) / d) as i128);
            debug_assert_eq!(tower.order(zeta), d);
            cosets
                .iter()
                .map(|coset| minimal_polynomial(&tower, zeta, coset))
                .collect::<Result<Vec<_>>>()?
        };

        let degrees: Vec<u32> = factors.iter().map(|g| g.degree().unwrap() as u32).collect();
        debug_assert_eq!(degrees.iter().map(|&x| x as u64).sum::<u64>(), d);

        let product = factors
            .iter()
            .fold(FpPoly::one(p), |acc, g| acc.mul(g));
        if product != FpPoly::x_pow_minus(p, d as usize, 1) {
            return Err(Error::Internal(
                "factor product does not reproduce X^d - 1".into(),
            ));
        }

        Ok(FactorTable {
            p,
            d,
            factors,
            degrees,
            cosets,
        })
    }

    /// Number of irreducible factors.
    pub fn count(&self) -> usize {
        self.factors.len()
    }

    /// l(i) for a 1-based factor index.
    pub fn ell(&self, i: usize) -> u32 {
        self.degrees[i - 1]
    }

    /// l(I) = sum of the degrees over a set of 1-based indices.
    pub fn ell_of(&self, indices: &[usize]) -> u32 {
        indices.iter().map(|&i| self.ell(i)).sum()
    }

    /// Product of the factors indexed by I (1-based).
    pub fn product_of(&self, indices: &[usize]) -> FpPoly {
        indices
            .iter()
            .fold(FpPoly::one(self.p), |acc, &i| acc.mul(&self.factors[i - 1]))
    }
}

/// prod_{j in coset} (X - zeta^j), checked to have F_p coefficients.
fn minimal_polynomial(tower: &FieldTower, zeta: crate::gf::Elem, coset: &[u64]) -> Result<FpPoly> {
    use crate::gf::Elem;
    let p = tower.p();
    // coefficients over the big field, constant first
    let mut coeffs = vec![Elem::ZERO; coset.len() + 1];
    coeffs[0] = Elem::ONE;
    let mut deg = 0usize;
    for &j in coset {
        let root = tower.pow(zeta, j as i128);
        // multiply by (X - root): new[i] = old[i-1] - root*old[i]
        for i in (0..=deg + 1).rev() {
            let prev = if i > 0 { coeffs[i - 1] } else { Elem::ZERO };
            let cur = if i <= deg { coeffs[i] } else { Elem::ZERO };
            coeffs[i] = tower.sub(prev, tower.mul(cur, root));
        }
        deg += 1;
    }
    let mut out = Vec::with_capacity(deg + 1);
    for c in &coeffs[..=deg] {
        match tower.as_fp(*c) {
            Some(v) if tower.frobenius(*c, 1) == *c => out.push(v),
            _ => {
                return Err(Error::Internal(
                    "coset polynomial has a coefficient outside F_p".into(),
                ))
            }
        }
    }
    Ok(FpPoly::new(p, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x3_minus_1_over_f2() {
        let t = FactorTable::build(2, 3).unwrap();
        assert_eq!(t.factors.len(), 2);
        assert_eq!(t.factors[0], FpPoly::new(2, vec![1, 1])); // X + 1
        assert_eq!(t.factors[1], FpPoly::new(2, vec![1, 1, 1])); // X^2+X+1
        assert_eq!(t.degrees, vec![1, 2]);
        // multiply-back and irreducibility oracle
        let prod = t.factors[0].mul(&t.factors[1]);
        assert_eq!(prod, FpPoly::new(2, vec![1, 0, 0, 1]));
        assert!(t.factors.iter().all(|g| g.is_irreducible()));
    }

    #[test]
    fn x2_minus_1_over_f3() {
        let t = FactorTable::build(3, 2).unwrap();
        assert_eq!(t.factors[0], FpPoly::new(3, vec![2, 1])); // X - 1
        assert_eq!(t.factors[1], FpPoly::new(3, vec![1, 1])); // X + 1
        assert_eq!(t.degrees, vec![1, 1]);
    }

    #[test]
    fn x7_minus_1_over_f2() {
        // oracle: cyclotomic cosets mod 7 are {0}, {1,2,4}, {3,6,5}
        let t = FactorTable::build(2, 7).unwrap();
        assert_eq!(t.cosets, vec![vec![0], vec![1, 2, 4], vec![3, 6, 5]]);
        assert_eq!(t.degrees, vec![1, 3, 3]);
        assert_eq!(t.factors[0], FpPoly::new(2, vec![1, 1]));
        let cubics: Vec<&FpPoly> = t.factors[1..].iter().collect();
        let a = FpPoly::new(2, vec![1, 1, 0, 1]); // X^3+X+1
        let b = FpPoly::new(2, vec![1, 0, 1, 1]); // X^3+X^2+1
        assert!(cubics.contains(&&a) && cubics.contains(&&b));
        assert_eq!(
            t.product_of(&[1, 2, 3]),
            FpPoly::x_pow_minus(2, 7, 1)
        );
    }

    #[test]
    fn degenerate_d_1() {
        let t = FactorTable::build(3, 1).unwrap();
        assert_eq!(t.factors.len(), 1);
        assert_eq!(t.factors[0], FpPoly::new(3, vec![2, 1]));
    }

    #[test]
    fn subset_degree_agrees_with_product_degree() {
        let t = FactorTable::build(3, 4).unwrap();
        let n = t.count();
        for mask in 1u32..(1 << n) {
            let indices: Vec<usize> =
                (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            assert_eq!(
                t.ell_of(&indices) as usize,
                t.product_of(&indices).degree().unwrap()
            );
        }
    }

    #[test]
    fn rejects_p_dividing_d() {
        assert!(FactorTable::build(2, 6).is_err());
        assert!(FactorTable::build(3, 9).is_err());
    }

    #[test]
    fn coset_count_matches_factor_count() {
        for (p, d) in [(2u64, 15u64), (3, 8), (5, 12), (7, 10)] {
            let t = FactorTable::build(p, d).unwrap();
            assert_eq!(t.cosets.len(), t.factors.len());
            let total: u64 = t.cosets.iter().map(|c| c.len() as u64).sum();
            assert_eq!(total, d);
        }
    }
}
