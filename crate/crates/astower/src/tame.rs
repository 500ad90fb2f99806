//! Tamely ramified extensions of F = F_q((t)): enumeration of the
//! conjugacy classes, Galois/abelian/cyclic classification, and the
//! explicit generator action for the cyclic ones.
//!
//! A cyclic degree-d extension L = F_{q^f}((pi_L)) with pi_L an e-th
//! root of omega^twist * t is carried around as label data plus the
//! generator action sigma(lambda) = lambda^q on constants and
//! sigma(pi_L) = omega^a * pi_L. No roots are ever adjoined.

use crate::gf::FieldTower;
use crate::{gcd_u64, is_prime, prime_factors, Error, Result};

/// Conjugacy-class label (e, f, twist) from the tame classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TameLabel {
    pub e: u64,
    pub f: u32,
    pub twist: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TameClassification {
    pub galois: bool,
    pub abelian: bool,
    pub cyclic: bool,
    /// gcd(e, q^f - 1), the number of classes with this (e, f).
    pub g: u64,
    /// twist*(q-1)/e, defined when the extension is Galois.
    pub k: Option<u64>,
    /// (q^f - 1)/e, defined when the extension is Galois.
    pub l: Option<u64>,
    /// Power correction N making sigma_1^N sigma_2 a generator.
    pub n_scale: u64,
}

fn pow_u128(base: u64, exp: u32) -> u128 {
    (base as u128).pow(exp)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// All conjugacy classes of tame extensions with invariants (e, f):
/// exactly g = gcd(e, q^f - 1) of them, twist = 0..g.
pub fn enumerate_tame(p: u64, r: u32, e: u64, f: u32) -> Result<Vec<TameLabel>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 || f == 0 {
        return Err(Error::Invalid("e and f must be positive".into()));
    }
    if e % p == 0 {
        return Err(Error::CharDivides { p, what: format!("e = {e}") });
    }
    if f as u64 % p == 0 {
        return Err(Error::CharDivides { p, what: format!("f = {f}") });
    }
    let q = pow_u128(p, r);
    let qf_minus_1 = q.pow(f) - 1;
    let g = gcd_u128(e as u128, qf_minus_1) as u64;
    Ok((0..g).map(|twist| TameLabel { e, f, twist }).collect())
}

/// Case split for N: product of the primes dividing e but not the
/// twist when gcd(e, twist) > 1, otherwise 0. For twist = 0 with e > 1
/// every prime divides the twist, leaving the empty product 1.
fn n_scale(e: u64, twist: u64) -> u64 {
    if gcd_u64(e, twist) <= 1 {
        return 0;
    }
    prime_factors(e)
        .into_iter()
        .filter(|&ell| twist % ell != 0)
        .product()
}

/// Classify a tame label over F_q, q = p^r.
pub fn classify(p: u64, r: u32, label: TameLabel) -> TameClassification {
    let TameLabel { e, f, twist } = label;
    let q = p.pow(r);
    let qf_minus_1 = pow_u128(q, f) - 1;
    let g = gcd_u128(e as u128, qf_minus_1) as u64;
    let galois = qf_minus_1 % e as u128 == 0 && (twist as u128 * (q as u128 - 1)) % e as u128 == 0;
    let abelian = (q - 1) % e == 0;
    let cyclic = abelian && gcd_u64(gcd_u64(e, f as u64), twist) == 1;
    debug_assert!(!abelian || galois);
    let (k, l) = if galois {
        (
            Some(twist * (q - 1) / e),
            u64::try_from(qf_minus_1 / e as u128).ok(),
        )
    } else {
        (None, None)
    };
    TameClassification {
        galois,
        abelian,
        cyclic,
        g,
        k,
        l,
        n_scale: n_scale(e, twist),
    }
}

/// A cyclic C_d-extension L/F with its sigma-action fully built.
pub struct CyclicExtension {
    pub e: u64,
    pub f: u32,
    pub twist: u64,
    pub k: u64,
    pub l: u64,
    pub n_scale: u64,
    /// sigma(pi_L) = omega^a * pi_L.
    pub a: u64,
    pub q: u64,
    /// q^f, the size of the residue field of L.
    pub big_q: u64,
    /// Discriminant exponent of L/F: f*(e-1).
    pub disc_lf: u64,
    pub tower: FieldTower,
    /// Precision window: Laurent inputs may not go below -window*p.
    pub window: i64,
}

pub const DEFAULT_WINDOW: i64 = 1 << 12;

impl CyclicExtension {
    pub fn build(p: u64, r: u32, label: TameLabel) -> Result<CyclicExtension> {
        let cls = classify(p, r, label);
        if !cls.cyclic {
            return Err(Error::Invalid(format!(
                "label (e={}, f={}, twist={}) is not cyclic over F_{}^{}",
                label.e, label.f, label.twist, p, r
            )));
        }
        let tower = FieldTower::build(p, r, label.f)?;
        let q = tower.q();
        let big_q = tower.size();
        let k = cls.k.unwrap();
        let l = cls.l.unwrap();
        let group = big_q - 1;
        let a = ((k as u128 + cls.n_scale as u128 * l as u128) % group.max(1) as u128) as u64;
        let ext = CyclicExtension {
            e: label.e,
            f: label.f,
            twist: label.twist,
            k,
            l,
            n_scale: cls.n_scale,
            a,
            q,
            big_q,
            disc_lf: label.f as u64 * (label.e - 1),
            tower,
            window: DEFAULT_WINDOW,
        };
        let d = ext.degree();
        let ord = ext.sigma_order();
        if ord != d {
            return Err(Error::Internal(format!(
                "sigma action on (e={}, f={}, twist={}) has order {ord}, expected {d}",
                label.e, label.f, label.twist
            )));
        }
        Ok(ext)
    }

    pub fn p(&self) -> u64 {
        self.tower.p()
    }

    /// d = e*f.
    pub fn degree(&self) -> u64 {
        self.e * self.f as u64
    }

    pub fn label(&self) -> TameLabel {
        TameLabel { e: self.e, f: self.f, twist: self.twist }
    }

    /// Order of the composite action (constants to the q, pi scaled by
    /// omega^a), computed directly from the exponent arithmetic.
    pub fn sigma_order(&self) -> u64 {
        let group = (self.big_q - 1).max(1) as u128;
        let q = self.q as u128;
        let mut geo = 0u128; // 1 + q + ... + q^(j-1) mod group
        let mut qpow = 1u128; // q^j mod group
        for j in 1..=self.degree() {
            geo = (geo + qpow) % group;
            qpow = qpow * (q % group) % group;
            let constants_fixed = j % self.f as u64 == 0;
            let pi_fixed = (self.a as u128 * geo) % group == 0;
            if constants_fixed && pi_fixed {
                return j;
            }
        }
        unreachable!("sigma^d is always the identity")
    }

    /// The seed of the sigma action: constants map lambda -> lambda^q,
    /// and pi_L scales by omega^a.
    pub fn sigma_seed(&self) -> (u32, u64) {
        (self.tower.r(), self.a)
    }
}

/// Brute-force F-automorphism count of the labeled extension: an
/// automorphism sends omega to omega^(q^i) and pi to u*pi with
/// u^e = omega^(twist*(q^i - 1)); solutions are counted by scanning
/// the residue field. The label is Galois exactly when this equals
/// e*f.
pub fn automorphism_count(p: u64, r: u32, label: TameLabel) -> Result<u64> {
    let tower = FieldTower::build(p, r, label.f)?;
    let omega = tower.generator();
    let q = tower.q();
    let mut count = 0;
    for i in 0..label.f {
        let rhs = tower.pow(omega, label.twist as i128 * (q.pow(i) as i128 - 1));
        for u in tower.elements() {
            if !u.is_zero() && tower.pow(u, label.e as i128) == rhs {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// All cyclic C_d-extensions of F_q((t)), ordered by ascending e then
/// ascending twist. Requires gcd(p, d) = 1.
pub fn cyclic_extensions(p: u64, r: u32, d: u64) -> Result<Vec<CyclicExtension>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d == 0 || gcd_u64(p, d) != 1 {
        return Err(Error::CharDivides { p, what: format!("d = {d}") });
    }
    let mut out = Vec::new();
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let f = (d / e) as u32;
        for label in enumerate_tame(p, r, e, f)? {
            if classify(p, r, label).cyclic {
                out.push(CyclicExtension::build(p, r, label)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_counts() {
        // g = gcd(e, q^f - 1)
        let labels = enumerate_tame(3, 1, 2, 1).unwrap();
        assert_eq!(labels.len(), 2);
        assert_eq!(labels[1].twist, 1);
        assert_eq!(enumerate_tame(2, 1, 3, 1).unwrap().len(), 1);
        assert_eq!(enumerate_tame(2, 1, 1, 3).unwrap().len(), 1);
        assert!(enumerate_tame(2, 1, 2, 1).is_err()); // p | e
        assert!(enumerate_tame(3, 1, 1, 3).is_err()); // p | f
    }

    #[test]
    fn classify_examples() {
        // q=2, e=3, f=1: 3 does not divide q^f - 1 = 1, not Galois
        let c = classify(2, 1, TameLabel { e: 3, f: 1, twist: 0 });
        assert!(!c.galois);

        // q=3, e=2, f=1, twist=0: cyclic with N = 1 (empty product)
        let c = classify(3, 1, TameLabel { e: 2, f: 1, twist: 0 });
        assert!(c.cyclic);
        assert_eq!(c.n_scale, 1);
        assert_eq!((c.k, c.l), (Some(0), Some(1)));

        // q=5, e=4, f=1, twist=2: cyclic, N = 1 (2 | e and 2 | twist)
        let c = classify(5, 1, TameLabel { e: 4, f: 1, twist: 2 });
        assert!(c.cyclic);
        assert_eq!(c.n_scale, 1);

        // gcd(e, twist) = 1 gives N = 0
        let c = classify(5, 1, TameLabel { e: 4, f: 1, twist: 1 });
        assert_eq!(c.n_scale, 0);
    }

    #[test]
    fn galois_iff_automorphism_count_full() {
        for (p, r, d) in [(3u64, 1u32, 2u64), (2, 1, 3)] {
            for e in 1..=d {
                if d % e != 0 || e % p == 0 {
                    continue;
                }
                let f = (d / e) as u32;
                if f as u64 % p == 0 {
                    continue;
                }
                for label in enumerate_tame(p, r, e, f).unwrap() {
                    let c = classify(p, r, label);
                    let n_aut = automorphism_count(p, r, label).unwrap();
                    assert_eq!(
                        c.galois,
                        n_aut == d,
                        "label {label:?}: {n_aut} automorphisms"
                    );
                }
            }
        }
    }

    #[test]
    fn cyclic_extension_counts() {
        // Kummer: F_3((t)) has |F^x / (F^x)^2| - 1 = 3 quadratic exts
        let exts = cyclic_extensions(3, 1, 2).unwrap();
        let labels: Vec<(u64, u32, u64)> =
            exts.iter().map(|x| (x.e, x.f, x.twist)).collect();
        assert_eq!(labels, vec![(1, 2, 0), (2, 1, 0), (2, 1, 1)]);

        // q=2: e=3 fails e | q-1, only the unramified cubic remains
        let exts = cyclic_extensions(2, 1, 3).unwrap();
        assert_eq!(exts.len(), 1);
        assert_eq!((exts[0].e, exts[0].f), (1, 3));

        // q=4: 3 | q-1, so the ramified twists appear as well
        let exts = cyclic_extensions(2, 2, 3).unwrap();
        assert_eq!(exts.len(), 4);
    }

    #[test]
    fn sigma_seeds() {
        // (2,1,0) over q=3: k=0, l=1, N=1, a=1, sigma(pi) = -pi
        let ext = CyclicExtension::build(3, 1, TameLabel { e: 2, f: 1, twist: 0 }).unwrap();
        assert_eq!((ext.k, ext.l, ext.n_scale, ext.a), (0, 1, 1, 1));
        assert_eq!(ext.tower.gen_pow(ext.a as i128), crate::gf::Elem(2));
        assert_eq!(ext.sigma_order(), 2);

        // (1,3,0) over q=2: unramified, a = 0, sigma = Frobenius
        let ext = CyclicExtension::build(2, 1, TameLabel { e: 1, f: 3, twist: 0 }).unwrap();
        assert_eq!(ext.a, 0);
        assert_eq!(ext.sigma_order(), 3);

        // (2,1,1) over q=3: k=1, N=0, a=1
        let ext = CyclicExtension::build(3, 1, TameLabel { e: 2, f: 1, twist: 1 }).unwrap();
        assert_eq!((ext.k, ext.n_scale, ext.a), (1, 0, 1));
        assert_eq!(ext.sigma_order(), 2);
    }

    #[test]
    fn sigma_order_is_degree_everywhere() {
        for (p, r, d) in [(3u64, 1u32, 2u64), (2, 1, 3), (2, 2, 3), (5, 1, 2), (5, 1, 4), (3, 1, 4)] {
            for ext in cyclic_extensions(p, r, d).unwrap() {
                assert_eq!(ext.sigma_order(), d, "({p},{r},{d}) {:?}", ext.label());
            }
        }
    }

    #[test]
    fn disc_lf_zero_iff_unramified() {
        for ext in cyclic_extensions(3, 1, 4).unwrap() {
            assert_eq!(ext.disc_lf, ext.f as u64 * (ext.e - 1));
            assert_eq!(ext.disc_lf == 0, ext.e == 1);
        }
    }
}
