//! The finite field tower F_p <= F_q <= F_{q^f} with deterministic,
//! reproducible construction.
//!
//! Elements of F_{p^m} (m = r*f) are indices 0..p^m encoding the
//! coefficient vector in the power basis of the defining polynomial:
//! index n has digits c_i = (n / p^i) % p, so constants are exactly the
//! indices below p. Multiplication goes through log/exp tables built
//! from the chosen generator, which caps the field size but makes all
//! downstream enumeration loops cheap.

use crate::poly::FpPoly;
use crate::{is_prime, prime_factors, Error, Result};

/// Largest supported field size for table construction.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element of the top field, as an index into the tower's tables.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// F_p <= F_q = F_{p^r} <= F_{q^f}, with everything needed to act on it.
pub struct FieldTower {
    p: u64,
    r: u32,
    f: u32,
    m: u32,
    size: u64,
    q: u64,
    modulus: FpPoly,
    exp: Vec<u32>,
    log: Vec<u32>,
    omega: Elem,
    omega0: Option<Elem>,
    fq_root: Elem,
    wp_pre: Vec<u32>,
}

const NO_PREIMAGE: u32 = u32::MAX;

/// Digit-reversed value of `n` in base `p` with `m` digits. Iterating
/// `digit_reverse(k)` for ascending k walks the elements in the
/// constant-term-first lexicographic order used for all "smallest"
/// searches.
fn digit_reverse(mut n: u64, p: u64, m: u32) -> u64 {
    let mut rev = 0;
    for _ in 0..m {
        rev = rev * p + n % p;
        n /= p;
    }
    rev
}

fn poly_from_index(p: u64, m: u32, mut n: u64) -> FpPoly {
    let mut coeffs = Vec::with_capacity(m as usize);
    for _ in 0..m {
        coeffs.push(n % p);
        n /= p;
    }
    FpPoly::new(p, coeffs)
}

fn index_from_poly(p: u64, m: u32, poly: &FpPoly) -> u64 {
    let mut n = 0u64;
    for i in (0..m as usize).rev() {
        n = n * p + poly.coeff(i);
    }
    n
}

/// Lexicographically smallest monic irreducible of the given degree,
/// coefficients compared constant term first.
fn smallest_irreducible(p: u64, degree: u32) -> FpPoly {
    let total = (p as u128).pow(degree);
    for t in 0..total {
        // decode with c_0 as the most significant digit so ascending t
        // is ascending lex order
        let mut coeffs = vec![0u64; degree as usize + 1];
        let mut rest = t;
        for i in (0..degree as usize).rev() {
            coeffs[i] = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        coeffs[degree as usize] = 1;
        let g = FpPoly::new(p, coeffs);
        if g.is_irreducible() {
            return g;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl FieldTower {
    /// Build the tower for F_p <= F_{p^r} <= F_{p^{r f}}.
    pub fn build(p: u64, r: u32, f: u32) -> Result<FieldTower> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 || f == 0 {
            return Err(Error::Invalid("r and f must be positive".into()));
        }
        let m = r * f;
        let size128 = (p as u128).pow(m);
        if size128 > MAX_FIELD_SIZE as u128 {
            return Err(Error::FieldTooLarge {
                size: size128,
                limit: MAX_FIELD_SIZE,
            });
        }
        let size = size128 as u64;
        let q = p.pow(r);
        let modulus = smallest_irreducible(p, m);

        // bootstrap arithmetic on polynomial representatives to locate
        // the generator, then switch to log/exp tables
        let mul_poly = |a: u64, b: u64| -> u64 {
            let pa = poly_from_index(p, m, a);
            let pb = poly_from_index(p, m, b);
            index_from_poly(p, m, &pa.mul(&pb).rem(&modulus))
        };
        let pow_poly = |mut base: u64, mut e: u64| -> u64 {
            let mut acc = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_poly(acc, base);
                }
                base = mul_poly(base, base);
                e >>= 1;
            }
            acc
        };
        let group = size - 1;
        let primes = prime_factors(group);
        let mut omega = None;
        for key in 0..size {
            let x = digit_reverse(key, p, m);
            if x == 0 {
                continue;
            }
            if primes.iter().all(|&ell| pow_poly(x, group / ell) != 1) {
                omega = Some(x);
                break;
            }
        }
        let omega = omega.expect("the multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; group as usize];
        let mut log = vec![0u32; size as usize];
        let mut acc = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = acc as u32;
            log[acc as usize] = i as u32;
            acc = mul_poly(acc, omega);
        }
        debug_assert_eq!(acc, 1, "generator order must be q^f - 1");

        let mut tower = FieldTower {
            p,
            r,
            f,
            m,
            size,
            q,
            modulus,
            exp,
            log,
            omega: Elem(omega as u32),
            omega0: None,
            fq_root: Elem(1),
            wp_pre: Vec::new(),
        };

        // embedding witness: smallest root of the subfield's own
        // defining polynomial (canonical 1 for the prime field)
        if r > 1 {
            let sub = smallest_irreducible(p, r);
            let mut root = None;
            for key in 0..size {
                let x = Elem(digit_reverse(key, p, m) as u32);
                if tower.eval_fp_poly(&sub, x).is_zero() {
                    root = Some(x);
                    break;
                }
            }
            tower.fq_root = root.expect("the subfield polynomial splits in the top field");
        }

        // omega_0: smallest element of the embedded F_q^x with nonzero
        // absolute trace
        for key in 0..size {
            let x = Elem(digit_reverse(key, p, m) as u32);
            if x.is_zero() || !tower.in_base_field(x) {
                continue;
            }
            if tower.absolute_trace(x) != 0 {
                tower.omega0 = Some(x);
                break;
            }
        }

        let mut wp_pre = vec![NO_PREIMAGE; size as usize];
        for key in 0..size {
            let y = Elem(digit_reverse(key, p, m) as u32);
            let img = tower.wp_elem(y);
            if wp_pre[img.0 as usize] == NO_PREIMAGE {
                wp_pre[img.0 as usize] = y.0;
            }
        }
        tower.wp_pre = wp_pre;
        Ok(tower)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    /// Degree of the top field over F_p.
    pub fn degree(&self) -> u32 {
        self.m
    }
    /// Number of elements of the top field F_{q^f}.
    pub fn size(&self) -> u64 {
        self.size
    }
    /// Size of the base residue field F_q.
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }
    pub fn generator(&self) -> Elem {
        self.omega
    }
    /// Root realizing the F_q-embedding (1 when r = 1).
    pub fn subfield_root(&self) -> Elem {
        self.fq_root
    }

    pub fn omega0(&self) -> Result<Elem> {
        self.omega0.ok_or(Error::NoOmega0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size as u32).map(Elem)
    }

    pub fn digit(&self, x: Elem, i: u32) -> u64 {
        (x.0 as u64 / self.p.pow(i)) % self.p
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let mut out = 0u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut mult = 1u64;
        while x != 0 || y != 0 {
            out += (x % self.p + y % self.p) % self.p * mult;
            x /= self.p;
            y /= self.p;
            mult *= self.p;
        }
        Elem(out as u32)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut out = 0u64;
        let mut x = a.0 as u64;
        let mut mult = 1u64;
        while x != 0 {
            out += (self.p - x % self.p) % self.p * mult;
            x /= self.p;
            mult *= self.p;
        }
        Elem(out as u32)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let g = self.size - 1;
        let i = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % g;
        Elem(self.exp[i as usize])
    }

    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let g = self.size - 1;
        let i = (g - self.log[a.0 as usize] as u64) % g;
        Elem(self.exp[i as usize])
    }

    /// x^e for a signed exponent (x != 0 when e < 0).
    pub fn pow(&self, x: Elem, e: i128) -> Elem {
        if x.is_zero() {
            if e == 0 {
                return Elem::ONE;
            }
            assert!(e > 0, "negative power of zero");
            return Elem::ZERO;
        }
        let g = (self.size - 1) as i128;
        let i = (self.log[x.0 as usize] as i128 * e).rem_euclid(g);
        Elem(self.exp[i as usize])
    }

    /// omega^e for a signed exponent.
    pub fn gen_pow(&self, e: i128) -> Elem {
        let g = (self.size - 1) as i128;
        Elem(self.exp[e.rem_euclid(g) as usize])
    }

    /// Scalar action of F_p: c*x.
    pub fn scalar_mul(&self, c: u64, x: Elem) -> Elem {
        self.mul(Elem((c % self.p) as u32), x)
    }

    /// Embed c in F_p into the tower.
    pub fn from_fp(&self, c: u64) -> Elem {
        Elem((c % self.p) as u32)
    }

    /// Constant-field value of x when x lies in the prime field.
    pub fn as_fp(&self, x: Elem) -> Option<u64> {
        if (x.0 as u64) < self.p {
            Some(x.0 as u64)
        } else {
            None
        }
    }

    /// x^(p^j).
    pub fn frobenius(&self, x: Elem, j: u32) -> Elem {
        if x.is_zero() {
            return x;
        }
        let g = (self.size - 1) as u128;
        let mut e = 1u128;
        for _ in 0..j {
            e = e * self.p as u128 % g;
        }
        self.pow(x, e as i128)
    }

    /// The q-power map; fixes exactly the embedded F_q.
    pub fn q_power(&self, x: Elem) -> Elem {
        self.frobenius(x, self.r)
    }

    /// Membership in the embedded residue field F_q.
    pub fn in_base_field(&self, x: Elem) -> bool {
        self.q_power(x) == x
    }

    /// Absolute trace down to F_p, as an integer in [0, p).
    pub fn absolute_trace(&self, x: Elem) -> u64 {
        let mut acc = Elem::ZERO;
        let mut t = x;
        for _ in 0..self.m {
            acc = self.add(acc, t);
            t = self.frobenius(t, 1);
        }
        self.as_fp(acc)
            .expect("trace lands in the prime field")
    }

    /// wp(x) = x^p - x on constants.
    pub fn wp_elem(&self, x: Elem) -> Elem {
        self.sub(self.frobenius(x, 1), x)
    }

    /// A preimage under wp on constants, when one exists (iff trace 0).
    pub fn wp_preimage(&self, x: Elem) -> Option<Elem> {
        match self.wp_pre[x.0 as usize] {
            NO_PREIMAGE => None,
            y => Some(Elem(y)),
        }
    }

    /// Evaluate an F_p[X] polynomial at a tower element.
    pub fn eval_fp_poly(&self, poly: &FpPoly, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        for i in (0..poly.coeffs().len()).rev() {
            acc = self.add(self.mul(acc, x), self.from_fp(poly.coeff(i)));
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: Elem) -> u64 {
        assert!(!x.is_zero());
        let g = self.size - 1;
        let mut ord = g;
        for ell in prime_factors(g) {
            while ord % ell == 0 && self.pow(x, (ord / ell) as i128) == Elem::ONE {
                ord /= ell;
            }
        }
        ord
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f8_tower_basics() {
        let t = FieldTower::build(2, 1, 3).unwrap();
        assert_eq!(t.size(), 8);
        // |F_8^x| = 7
        assert_eq!(t.order(t.generator()), 7);
        // Tr(1) = 1 + 1 + 1 = 1, and 1 is the smallest candidate
        assert_eq!(t.omega0().unwrap(), Elem::ONE);
        assert_eq!(t.absolute_trace(Elem::ONE), 1);
    }

    #[test]
    fn f3_prime_field() {
        let t = FieldTower::build(3, 1, 1).unwrap();
        // 2 is the unique generator of F_3^x; trace is the identity so
        // omega_0 is the smallest nonzero element
        assert_eq!(t.generator(), Elem(2));
        assert_eq!(t.omega0().unwrap(), Elem(1));
    }

    #[test]
    fn f8_trace_table_and_cubic_roots() {
        // oracle: evaluate x + x^2 + x^4 for all eight elements
        let t = FieldTower::build(2, 1, 3).unwrap();
        let mut zero_trace = Vec::new();
        for x in t.elements() {
            let direct = t.add(t.add(x, t.pow(x, 2)), t.pow(x, 4));
            assert_eq!(t.as_fp(direct).unwrap(), t.absolute_trace(x));
            if t.absolute_trace(x) == 0 {
                zero_trace.push(x);
            }
        }
        assert_eq!(zero_trace.len(), 4); // p^(m-1)
        // the roots of X^3 + X + 1 are exactly the nonzero trace-zero
        // elements
        let cubic = FpPoly::new(2, vec![1, 1, 0, 1]);
        let roots: Vec<Elem> = t
            .elements()
            .filter(|&x| t.eval_fp_poly(&cubic, x).is_zero())
            .collect();
        assert_eq!(roots.len(), 3);
        for x in roots {
            assert_eq!(t.absolute_trace(x), 0);
            assert!(!x.is_zero());
            // F_8 is fixed by the 8-power map
            assert_eq!(t.frobenius(x, 3), x);
        }
    }

    #[test]
    fn f9_trace_of_one() {
        let t = FieldTower::build(3, 1, 2).unwrap();
        assert_eq!(t.absolute_trace(Elem::ONE), 2);
    }

    #[test]
    fn frobenius_fixes_subfield() {
        let t = FieldTower::build(2, 2, 3).unwrap(); // F_4 in F_64
        assert_eq!(t.q(), 4);
        let subfield: Vec<Elem> = t.elements().filter(|&x| t.in_base_field(x)).collect();
        assert_eq!(subfield.len(), 4);
        for &x in &subfield {
            assert_eq!(t.q_power(x), x);
        }
        let w0 = t.omega0().unwrap();
        assert!(t.in_base_field(w0));
        assert_ne!(t.absolute_trace(w0), 0);
    }

    #[test]
    fn trace_kernel_is_wp_image() {
        for (p, r, f) in [(2, 1, 3), (3, 1, 2), (5, 1, 2), (2, 2, 1)] {
            let t = FieldTower::build(p, r, f).unwrap();
            let mut kernel = 0u64;
            for x in t.elements() {
                let wp = t.wp_elem(x);
                assert_eq!(t.absolute_trace(wp), 0);
                if t.absolute_trace(x) == 0 {
                    kernel += 1;
                    assert!(t.wp_preimage(x).is_some());
                } else {
                    assert!(t.wp_preimage(x).is_none());
                }
            }
            assert_eq!(kernel, t.size() / p);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(FieldTower::build(4, 1, 1), Err(Error::NotPrime(4))));
        assert!(matches!(
            FieldTower::build(2, 1, 40),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    proptest! {
        #[test]
        fn frobenius_is_ring_hom(a in 0u32..125, b in 0u32..125, j in 0u32..3) {
            let t = FieldTower::build(5, 1, 3).unwrap();
            let (a, b) = (Elem(a), Elem(b));
            let fr = |x| t.frobenius(x, j);
            prop_assert_eq!(fr(t.add(a, b)), t.add(fr(a), fr(b)));
            prop_assert_eq!(fr(t.mul(a, b)), t.mul(fr(a), fr(b)));
        }

        #[test]
        fn field_axioms_sampled(a in 0u32..81, b in 0u32..81, c in 0u32..81) {
            let t = FieldTower::build(3, 2, 2).unwrap();
            let (a, b, c) = (Elem(a), Elem(b), Elem(c));
            prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
            prop_assert_eq!(t.mul(a, b), t.mul(b, a));
            if !a.is_zero() {
                prop_assert_eq!(t.mul(a, t.inv(a)), Elem::ONE);
            }
        }
    }
}
