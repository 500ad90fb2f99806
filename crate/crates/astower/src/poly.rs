//! Dense univariate polynomials over a prime field F_p.
//!
//! Coefficients are stored constant term first and kept reduced mod p
//! with no trailing zeros; the zero polynomial has an empty vector.

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    pub p: u64,
    coeffs: Vec<u64>,
}

impl std::fmt::Debug for FpPoly {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(fm, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(fm, " + ")?;
            }
            first = false;
            match i {
                0 => write!(fm, "{c}")?,
                1 if c == 1 => write!(fm, "X")?,
                1 => write!(fm, "{c}*X")?,
                _ if c == 1 => write!(fm, "X^{i}")?,
                _ => write!(fm, "{c}*X^{i}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime
    let (mut r0, mut r1) = (a as i128 % p as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        let r = r0 - q * r1;
        r0 = r1;
        r1 = r;
        let s = s0 - q * s1;
        s0 = s1;
        s1 = s;
    }
    debug_assert_eq!(r0.rem_euclid(p as i128), 1 % p as i128);
    s0.rem_euclid(p as i128) as u64
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut out = FpPoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        out.trim();
        out
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly { p, coeffs: vec![1] }
    }

    pub fn x(p: u64) -> Self {
        FpPoly { p, coeffs: vec![0, 1] }
    }

    /// X^k - c
    pub fn x_pow_minus(p: u64, k: usize, c: u64) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[0] = (p - c % p) % p;
        coeffs[k] = 1;
        FpPoly::new(p, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = (self.coeff(i) + other.coeff(i)) % p;
        }
        let mut out = FpPoly { p, coeffs };
        out.trim();
        out
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = (self.coeff(i) + p - other.coeff(i)) % p;
        }
        let mut out = FpPoly { p, coeffs };
        out.trim();
        out
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let c = c % self.p;
        let coeffs = self.coeffs.iter().map(|&a| a * c % self.p).collect();
        let mut out = FpPoly { p: self.p, coeffs };
        out.trim();
        out
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + a * b) % p;
            }
        }
        let mut out = FpPoly { p, coeffs };
        out.trim();
        out
    }

    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = divisor.degree().unwrap();
        if self.degree().map_or(true, |d| d < dd) {
            return (FpPoly::zero(p), self.clone());
        }
        let lead_inv = mod_inv(*divisor.coeffs.last().unwrap(), p);
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i] * lead_inv % p;
            if c == 0 {
                continue;
            }
            quo[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = (rem[i - dd + j] + p - c * b % p) % p;
            }
        }
        let mut q = FpPoly { p, coeffs: quo };
        q.trim();
        let mut r = FpPoly { p, coeffs: rem };
        r.trim();
        (q, r)
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.div_rem(divisor).1
    }

    pub fn make_monic(&self) -> FpPoly {
        match self.coeffs.last() {
            None | Some(&1) => self.clone(),
            Some(&c) => self.scale(mod_inv(c, self.p)),
        }
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*other = g, g monic.
    pub fn ext_gcd(&self, other: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        if let Some(&lead) = r0.coeffs.last() {
            if lead != 1 {
                let inv = mod_inv(lead, p);
                r0 = r0.scale(inv);
                s0 = s0.scale(inv);
                t0 = t0.scale(inv);
            }
        }
        (r0, s0, t0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let x = x % p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c) % p;
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &FpPoly) -> FpPoly {
        let mut base = self.rem(modulus);
        let mut acc = FpPoly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// X^(p^k) mod self, by k successive p-th powers.
    fn frobenius_of_x(&self, k: u32) -> FpPoly {
        let mut t = FpPoly::x(self.p).rem(self);
        for _ in 0..k {
            t = t.pow_mod(self.p, self);
        }
        t
    }

    /// Irreducibility over F_p (Rabin's test).
    pub fn is_irreducible(&self) -> bool {
        let m = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(m) => m,
        };
        let x = FpPoly::x(self.p).rem(self);
        if self.frobenius_of_x(m as u32) != x {
            return false;
        }
        for ell in crate::prime_factors(m as u64) {
            let t = self.frobenius_of_x((m as u64 / ell) as u32);
            if self.gcd(&t.sub(&x)).degree() != Some(0) {
                return false;
            }
        }
        true
    }
}
