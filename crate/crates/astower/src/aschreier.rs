//! Laurent-series elements of L = F_{q^f}((pi_L)) at finite precision,
//! the operator wp(x) = x^p - x, canonical reduction into the
//! representative system R_L(pi_L, omega_0), valuations and conductors.

use std::collections::BTreeMap;

use crate::gf::Elem;
use crate::poly::mod_inv;
use crate::tame::CyclicExtension;
use crate::{Error, Result};

/// A finite Laurent tail: exponent -> nonzero coefficient in F_{q^f}.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentElem {
    terms: BTreeMap<i64, Elem>,
}

impl LaurentElem {
    pub fn zero() -> Self {
        LaurentElem::default()
    }

    pub fn monomial(exp: i64, coeff: Elem) -> Self {
        let mut out = LaurentElem::zero();
        if !coeff.is_zero() {
            out.terms.insert(exp, coeff);
        }
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Elem)>) -> Self {
        let mut out = LaurentElem::zero();
        for (e, c) in terms {
            if !c.is_zero() {
                out.terms.insert(e, c);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Elem {
        self.terms.get(&exp).copied().unwrap_or(Elem::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Elem)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    fn set(&mut self, exp: i64, coeff: Elem) {
        if coeff.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, coeff);
        }
    }
}

/// Canonical representative of a class in L / wp(L): mu_0 * omega_0
/// plus coefficients at negative exponents coprime to p.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClassRep {
    pub mu0: u64,
    tail: BTreeMap<i64, Elem>,
}

impl ClassRep {
    pub fn zero() -> Self {
        ClassRep::default()
    }

    pub fn constant(mu0: u64) -> Self {
        ClassRep { mu0, tail: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.mu0 == 0 && self.tail.is_empty()
    }

    pub fn tail(&self) -> impl Iterator<Item = (i64, Elem)> + '_ {
        self.tail.iter().map(|(&e, &c)| (e, c))
    }

    pub fn tail_coeff(&self, exp: i64) -> Elem {
        self.tail.get(&exp).copied().unwrap_or(Elem::ZERO)
    }

    pub fn set_tail(&mut self, exp: i64, coeff: Elem) {
        assert!(exp < 0, "tail exponents must be negative");
        if coeff.is_zero() {
            self.tail.remove(&exp);
        } else {
            self.tail.insert(exp, coeff);
        }
    }

    /// Most negative exponent present, 0 when only the constant part
    /// remains. Meaningless for the zero class.
    pub fn nu_star(&self) -> i64 {
        self.tail.keys().next().copied().unwrap_or(0)
    }
}

/// (nu*, conductor) of a nonzero class.
pub fn nu_and_cond(rep: &ClassRep) -> Result<(i64, u64)> {
    if rep.is_zero() {
        return Err(Error::ZeroClass);
    }
    let nu = rep.nu_star();
    let cond = if nu == 0 { 0 } else { nu.unsigned_abs() + 1 };
    Ok((nu, cond))
}

/// Leftover data from a reduction: x - rep = wp(solved) + dropped,
/// where dropped collects the strictly positive-exponent part that is
/// in wp(L) by Hensel lifting but never solved explicitly.
#[derive(Debug, Clone)]
pub struct ReductionWitness {
    pub solved: LaurentElem,
    pub dropped: LaurentElem,
}

impl CyclicExtension {
    fn fp_scale(&self, c: u64, x: Elem) -> Elem {
        self.tower.scalar_mul(c, x)
    }

    pub fn laurent_add(&self, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        let mut out = a.clone();
        for (e, c) in b.terms() {
            out.set(e, self.tower.add(out.coeff(e), c));
        }
        out
    }

    pub fn laurent_neg(&self, a: &LaurentElem) -> LaurentElem {
        LaurentElem::from_terms(a.terms().map(|(e, c)| (e, self.tower.neg(c))))
    }

    pub fn laurent_sub(&self, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        self.laurent_add(a, &self.laurent_neg(b))
    }

    /// wp(x) = x^p - x. Exponents multiply by p under the p-th power,
    /// so inputs must stay above -window.
    pub fn wp(&self, x: &LaurentElem) -> Result<LaurentElem> {
        if let Some(lo) = x.min_exp() {
            if lo < -self.window {
                return Err(Error::Window(lo));
            }
        }
        let p = self.p();
        let mut out = LaurentElem::zero();
        for (e, c) in x.terms() {
            out.set(e * p as i64, self.tower.frobenius(c, 1));
        }
        for (e, c) in x.terms() {
            out.set(e, self.tower.sub(out.coeff(e), c));
        }
        Ok(out)
    }

    /// sigma on a Laurent element: coefficients to the q, exponent j
    /// picks up omega^(a*j).
    pub fn sigma_laurent(&self, x: &LaurentElem) -> LaurentElem {
        LaurentElem::from_terms(x.terms().map(|(e, c)| {
            let scaled = self.tower.mul(
                self.tower.q_power(c),
                self.tower.gen_pow(self.a as i128 * e as i128),
            );
            (e, scaled)
        }))
    }

    /// sigma restricted to R_L; lands in R_L again, mu_0 is fixed.
    pub fn sigma_rep(&self, rep: &ClassRep) -> ClassRep {
        let mut out = ClassRep::constant(rep.mu0);
        for (e, c) in rep.tail() {
            let scaled = self.tower.mul(
                self.tower.q_power(c),
                self.tower.gen_pow(self.a as i128 * e as i128),
            );
            out.set_tail(e, scaled);
        }
        out
    }

    /// The coefficient map of sigma on V_{-m}: lambda -> lambda^q *
    /// omega^(-a m).
    pub fn sigma_on_stratum(&self, m: u32, lambda: Elem) -> Elem {
        self.tower.mul(
            self.tower.q_power(lambda),
            self.tower.gen_pow(-(self.a as i128) * m as i128),
        )
    }

    pub fn rep_add(&self, a: &ClassRep, b: &ClassRep) -> ClassRep {
        let mut out = ClassRep::constant((a.mu0 + b.mu0) % self.p());
        let exps: std::collections::BTreeSet<i64> =
            a.tail.keys().chain(b.tail.keys()).copied().collect();
        for e in exps {
            out.set_tail(e, self.tower.add(a.tail_coeff(e), b.tail_coeff(e)));
        }
        out
    }

    pub fn rep_scale(&self, c: u64, rep: &ClassRep) -> ClassRep {
        let mut out = ClassRep::constant(rep.mu0 * (c % self.p()) % self.p());
        for (e, v) in rep.tail() {
            out.set_tail(e, self.fp_scale(c, v));
        }
        out
    }

    /// The representative as an actual Laurent element.
    pub fn rep_to_laurent(&self, rep: &ClassRep) -> LaurentElem {
        let mut out = LaurentElem::from_terms(rep.tail());
        if rep.mu0 != 0 {
            let w0 = self.tower.omega0().expect("cyclic extensions have omega_0");
            out.set(0, self.fp_scale(rep.mu0, w0));
        }
        out
    }

    /// Canonical reduction of x modulo wp(L): strictly positive
    /// exponents are dropped (they lie in wp(L)), exponents divisible
    /// by p are folded down by one p-th root at a time, and the
    /// constant is projected onto the omega_0 line through the trace.
    pub fn reduce(&self, x: &LaurentElem) -> Result<(ClassRep, ReductionWitness)> {
        let p = self.p() as i64;
        if let Some(lo) = x.min_exp() {
            if lo < -self.window * p {
                return Err(Error::Window(lo));
            }
        }
        let mut dropped = LaurentElem::zero();
        let mut work: BTreeMap<i64, Elem> = BTreeMap::new();
        for (e, c) in x.terms() {
            if e > 0 {
                dropped.set(e, c);
            } else {
                work.insert(e, c);
            }
        }
        let mut solved = LaurentElem::zero();
        // fold c*pi^(pj) into c^(1/p)*pi^j, most negative first
        loop {
            let target = work
                .iter()
                .find(|(&e, _)| e < 0 && e % p == 0)
                .map(|(&e, &c)| (e, c));
            let Some((e, c)) = target else { break };
            work.remove(&e);
            // p-th root = inverse Frobenius = c^(p^(m-1))
            let root = self.tower.frobenius(c, self.tower.degree() - 1);
            debug_assert_eq!(self.tower.frobenius(root, 1), c);
            let new_e = e / p;
            solved = self.laurent_add(&solved, &LaurentElem::monomial(new_e, root));
            let prev = work.get(&new_e).copied().unwrap_or(Elem::ZERO);
            let merged = self.tower.add(prev, root);
            if merged.is_zero() {
                work.remove(&new_e);
            } else {
                work.insert(new_e, merged);
            }
        }
        // constant part: mu_0 = Tr(c_0) / Tr(omega_0) in F_p
        let c0 = work.remove(&0).unwrap_or(Elem::ZERO);
        let w0 = self.tower.omega0()?;
        let mu0 = if c0.is_zero() {
            0
        } else {
            let t = self.tower.absolute_trace(c0);
            t * mod_inv(self.tower.absolute_trace(w0), self.p()) % self.p()
        };
        let diff = self.tower.sub(c0, self.fp_scale(mu0, w0));
        if !diff.is_zero() {
            let y0 = self
                .tower
                .wp_preimage(diff)
                .ok_or_else(|| Error::Internal("trace-zero constant has no wp preimage".into()))?;
            solved = self.laurent_add(&solved, &LaurentElem::monomial(0, y0));
        }
        let mut rep = ClassRep::constant(mu0);
        for (e, c) in work {
            rep.set_tail(e, c);
        }
        Ok((rep, ReductionWitness { solved, dropped }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tame::{cyclic_extensions, CyclicExtension, TameLabel};

    fn base_field(p: u64) -> CyclicExtension {
        CyclicExtension::build(p, 1, TameLabel { e: 1, f: 1, twist: 0 }).unwrap()
    }

    #[test]
    fn wp_examples() {
        let l = base_field(3);
        // wp(t^-1) = t^-3 - t^-1
        let x = LaurentElem::monomial(-1, Elem::ONE);
        let w = l.wp(&x).unwrap();
        assert_eq!(w.coeff(-3), Elem::ONE);
        assert_eq!(w.coeff(-1), Elem(2));
        assert!(w.terms().count() == 2);

        // constants in F_p are the kernel
        for c in 0..3u32 {
            let x = LaurentElem::monomial(0, Elem(c));
            assert!(l.wp(&x).unwrap().is_zero());
        }

        // omega*pi^-1 over F_8: square is omega^2 pi^-2
        let l8 = CyclicExtension::build(2, 1, TameLabel { e: 1, f: 3, twist: 0 }).unwrap();
        let om = l8.tower.generator();
        let w = l8.wp(&LaurentElem::monomial(-1, om)).unwrap();
        assert_eq!(w.coeff(-2), l8.tower.mul(om, om));
        assert_eq!(w.coeff(-1), om);
    }

    #[test]
    fn wp_is_additive() {
        let l = CyclicExtension::build(3, 1, TameLabel { e: 2, f: 1, twist: 0 }).unwrap();
        let xs = [
            LaurentElem::from_terms([(-4, Elem(1)), (-1, Elem(2))]),
            LaurentElem::from_terms([(-3, Elem(2)), (0, Elem(1)), (2, Elem(1))]),
            LaurentElem::from_terms([(-2, Elem(1))]),
        ];
        for a in &xs {
            for b in &xs {
                let lhs = l.wp(&l.laurent_add(a, b)).unwrap();
                let rhs = l.laurent_add(&l.wp(a).unwrap(), &l.wp(b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn reduce_folds_p_powers() {
        let l = base_field(3);
        let x = LaurentElem::monomial(-3, Elem::ONE);
        let (rep, wit) = l.reduce(&x).unwrap();
        assert_eq!(rep.tail_coeff(-1), Elem::ONE);
        assert_eq!(rep.mu0, 0);
        assert_eq!(wit.solved, LaurentElem::monomial(-1, Elem::ONE));
        // soundness: x - rep = wp(solved) + dropped
        let back = l.laurent_add(&l.wp(&wit.solved).unwrap(), &wit.dropped);
        assert_eq!(l.laurent_sub(&x, &l.rep_to_laurent(&rep)), back);
    }

    #[test]
    fn reduce_constant_by_trace() {
        // a trace-zero constant reduces to the zero class
        let l = CyclicExtension::build(2, 1, TameLabel { e: 1, f: 3, twist: 0 }).unwrap();
        for x in l.tower.elements() {
            let (rep, _) = l.reduce(&LaurentElem::monomial(0, x)).unwrap();
            assert_eq!(rep.is_zero(), l.tower.absolute_trace(x) == 0);
        }
    }

    #[test]
    fn reduce_example_with_double_fold() {
        // t^-9 + t^-2 over F_3 reduces to t^-2 + t^-1
        let l = base_field(3);
        let x = LaurentElem::from_terms([(-9, Elem::ONE), (-2, Elem::ONE)]);
        let (rep, wit) = l.reduce(&x).unwrap();
        assert_eq!(rep.tail_coeff(-1), Elem::ONE);
        assert_eq!(rep.tail_coeff(-2), Elem::ONE);
        assert_eq!(rep.mu0, 0);
        let back = l.laurent_add(&l.wp(&wit.solved).unwrap(), &wit.dropped);
        assert_eq!(l.laurent_sub(&x, &l.rep_to_laurent(&rep)), back);

        // oracle: search all y supported on [-3, 0] for one with
        // x - wp(y) in R_L, and compare
        let mut found = None;
        let exps = [-3i64, -2, -1, 0];
        let size = l.tower.size() as usize;
        for combo in 0..size.pow(4) {
            let mut y = LaurentElem::zero();
            let mut rest = combo;
            for &e in &exps {
                y = l.laurent_add(&y, &LaurentElem::monomial(e, Elem((rest % size) as u32)));
                rest /= size;
            }
            let diff = l.laurent_sub(&x, &l.wp(&y).unwrap());
            let in_rl = diff.terms().all(|(e, c)| {
                (e < 0 && e % 3 != 0) || (e == 0 && l.tower.as_fp(c).is_some())
            });
            if in_rl {
                found = Some(diff);
                break;
            }
        }
        assert_eq!(found.unwrap(), l.rep_to_laurent(&rep));
    }

    #[test]
    fn reduce_is_idempotent() {
        let l = CyclicExtension::build(3, 1, TameLabel { e: 2, f: 1, twist: 1 }).unwrap();
        let x = LaurentElem::from_terms([(-5, Elem(2)), (-2, Elem(1)), (0, Elem(1))]);
        let (rep, _) = l.reduce(&x).unwrap();
        let (rep2, wit2) = l.reduce(&l.rep_to_laurent(&rep)).unwrap();
        assert_eq!(rep, rep2);
        assert!(wit2.solved.is_zero() && wit2.dropped.is_zero());
    }

    #[test]
    fn sigma_rep_examples() {
        // (2,1,0) over F_3: pi^-1 -> -pi^-1
        let l = CyclicExtension::build(3, 1, TameLabel { e: 2, f: 1, twist: 0 }).unwrap();
        let mut rep = ClassRep::zero();
        rep.set_tail(-1, Elem::ONE);
        let img = l.sigma_rep(&rep);
        assert_eq!(img.tail_coeff(-1), Elem(2));

        // unramified (1,3,0) over F_2: coefficients get squared
        let l8 = CyclicExtension::build(2, 1, TameLabel { e: 1, f: 3, twist: 0 }).unwrap();
        let om = l8.tower.generator();
        let mut rep = ClassRep::zero();
        rep.set_tail(-1, om);
        assert_eq!(l8.sigma_rep(&rep).tail_coeff(-1), l8.tower.mul(om, om));

        // omega_0 is fixed
        let rep = ClassRep::constant(1);
        assert_eq!(l8.sigma_rep(&rep), rep);
    }

    #[test]
    fn sigma_commutes_with_wp() {
        for (p, r, d) in [(3u64, 1u32, 2u64), (2, 1, 3)] {
            for l in cyclic_extensions(p, r, d).unwrap() {
                for seed in 0..40u64 {
                    let size = l.tower.size();
                    let x = LaurentElem::from_terms([
                        (-5, Elem((seed * 7 % size) as u32)),
                        (-2, Elem((seed * 13 % size) as u32)),
                        (-1, Elem((seed % size) as u32)),
                        (1, Elem((seed * 3 % size) as u32)),
                    ]);
                    let lhs = l.sigma_laurent(&l.wp(&x).unwrap());
                    let rhs = l.wp(&l.sigma_laurent(&x)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn reduce_commutes_with_sigma() {
        for l in cyclic_extensions(3, 1, 2).unwrap() {
            let size = l.tower.size();
            for seed in 0..60u64 {
                let x = LaurentElem::from_terms([
                    (-6, Elem((seed * 5 % size) as u32)),
                    (-3, Elem((seed * 2 % size) as u32)),
                    (-1, Elem((seed % size) as u32)),
                    (0, Elem((seed * 11 % size) as u32)),
                ]);
                let (rep_then_sigma, _) = l.reduce(&x).unwrap();
                let (sigma_then_rep, _) = l.reduce(&l.sigma_laurent(&x)).unwrap();
                assert_eq!(l.sigma_rep(&rep_then_sigma), sigma_then_rep);
            }
        }
    }

    #[test]
    fn nu_and_cond_values() {
        let mut rep = ClassRep::zero();
        rep.set_tail(-2, Elem::ONE);
        assert_eq!(nu_and_cond(&rep).unwrap(), (-2, 3));

        let rep = ClassRep::constant(1);
        assert_eq!(nu_and_cond(&rep).unwrap(), (0, 0));

        let mut rep = ClassRep::zero();
        rep.set_tail(-5, Elem::ONE);
        rep.set_tail(-1, Elem::ONE);
        assert_eq!(nu_and_cond(&rep).unwrap(), (-5, 6));

        assert!(matches!(
            nu_and_cond(&ClassRep::zero()),
            Err(Error::ZeroClass)
        ));
    }

    #[test]
    fn window_is_enforced() {
        let l = base_field(3);
        let deep = LaurentElem::monomial(-(l.window * 3 + 3), Elem::ONE);
        assert!(matches!(l.reduce(&deep), Err(Error::Window(_))));
        let too_low_for_wp = LaurentElem::monomial(-(l.window + 1), Elem::ONE);
        assert!(matches!(l.wp(&too_low_for_wp), Err(Error::Window(_))));
    }
}
