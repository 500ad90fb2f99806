//! Exact rational Dirichlet series in u = q^(-s) for the
//! splitting-field counting functions: the nested-geometric product
//! formula, the per-ordering chain series, their average over all
//! orderings, and exact pole locations.

use itertools::Itertools;
use num::{BigInt, BigRational, BigUint, One, Signed, ToPrimitive, Zero};

use crate::modstruct::ModuleContext;
use crate::{Error, Result};

/// One summand c * u^a / prod_j (1 - b_j u^(m_j)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigRational,
    pub u_pow: u64,
    /// (b, m) pairs, each denoting a factor 1/(1 - b u^m) with m >= 1.
    pub denominators: Vec<(BigRational, u64)>,
}

/// A finite sum of geometric-product terms; exact arithmetic in the
/// indeterminate u = q^(-s).
#[derive(Debug, Clone, Default)]
pub struct RationalFn {
    pub terms: Vec<Term>,
}

fn rational_pow(base: u64, exp: i64) -> BigRational {
    let b = BigRational::from(BigInt::from(base));
    if exp >= 0 {
        b.pow(exp as i32)
    } else {
        b.pow(exp as i32)
    }
}

impl RationalFn {
    pub fn zero() -> Self {
        RationalFn { terms: Vec::new() }
    }

    pub fn monomial(coeff: BigRational, u_pow: u64) -> Self {
        RationalFn {
            terms: vec![Term { coeff, u_pow, denominators: Vec::new() }],
        }
    }

    pub fn add(&mut self, other: RationalFn) {
        self.terms.extend(other.terms);
    }

    pub fn scale(&mut self, c: &BigRational) {
        for t in &mut self.terms {
            t.coeff *= c;
        }
    }

    /// Multiply every term by c * u^a / prod (1 - b u^m).
    pub fn mul_term(&mut self, factor: &Term) {
        for t in &mut self.terms {
            t.coeff *= &factor.coeff;
            t.u_pow += factor.u_pow;
            t.denominators.extend(factor.denominators.iter().cloned());
        }
    }

    /// Taylor coefficients at u = 0 through u^n, by exact convolution.
    pub fn coefficients(&self, n: u64) -> Vec<BigRational> {
        let n = n as usize;
        let mut out = vec![BigRational::zero(); n + 1];
        for term in &self.terms {
            if term.u_pow as usize > n {
                continue;
            }
            let mut acc = vec![BigRational::zero(); n + 1];
            acc[term.u_pow as usize] = term.coeff.clone();
            for (b, m) in &term.denominators {
                let m = *m as usize;
                assert!(m >= 1, "denominator with constant term");
                // multiply by 1/(1 - b u^m): forward recurrence
                for idx in m..=n {
                    let add = &acc[idx - m] * b;
                    acc[idx] += add;
                }
            }
            for (slot, v) in out.iter_mut().zip(acc) {
                *slot += v;
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "variable": "u",
            "terms": self.terms.iter().map(|t| serde_json::json!({
                "coeff": format!("{}/{}", t.coeff.numer(), t.coeff.denom()),
                "u_pow": t.u_pow,
                "denominators": t.denominators.iter().map(|(b, m)| serde_json::json!({
                    "b": format!("{}/{}", b.numer(), b.denom()),
                    "m": m,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The product formula for a nested descending geometric sum: for
/// affine forms alpha_j(s) = A_j - B_j s with B_j > 0, evaluated at
/// X = q so X^(alpha_j) = q^(A_j) u^(B_j),
///
///   sum_{k_1 >= 0} X^(a_1 k_1) sum_{k_2 = 0}^{k_1 - 1} X^(a_2 k_2) ...
///     = 1/(1 - X^(b_J)) * prod_{i < J} X^(b_i)/(1 - X^(b_i))
///
/// with b_i the prefix sums of the alpha.
pub fn nested_geometric_product(q: u64, alphas: &[(i64, i64)]) -> Result<RationalFn> {
    if alphas.is_empty() {
        return Ok(RationalFn::monomial(BigRational::one(), 0));
    }
    for &(_, b) in alphas {
        if b <= 0 {
            return Err(Error::Invalid(format!(
                "exponent form with nonpositive s-coefficient {b}: series diverges"
            )));
        }
    }
    let mut prefix_a = 0i64;
    let mut prefix_b = 0i64;
    let mut coeff = BigRational::one();
    let mut u_pow = 0u64;
    let mut denominators = Vec::with_capacity(alphas.len());
    for (idx, &(a, b)) in alphas.iter().enumerate() {
        prefix_a += a;
        prefix_b += b;
        denominators.push((rational_pow(q, prefix_a), prefix_b as u64));
        if idx + 1 < alphas.len() {
            coeff *= rational_pow(q, prefix_a);
            u_pow += prefix_b as u64;
        }
    }
    Ok(RationalFn {
        terms: vec![Term { coeff, u_pow, denominators }],
    })
}

/// Slot data for one component of a conductor chain, in ordering
/// position j: degree r_j, the within-block levels, and the exponent
/// weights tied to the prefix sums R_{j-1}, R_j.
#[derive(Debug, Clone)]
struct Slot {
    /// Factor degree r_j = l(tau(j)).
    degree: u32,
    /// l~_j(v) for v = 1..p-1.
    levels: Vec<u64>,
    /// u-weight of the conductor: f*(p^(R_j) - p^(R_{j-1})).
    disc_weight: u64,
    /// u-weight of one full block step: pd*(p^(R_j) - p^(R_{j-1})).
    block_weight: u64,
    /// q-exponent of one block step: (p-1)*r_j.
    block_gain: u32,
}

/// Compositions of n as ordered tuples of positive parts.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The chain series over the given slots: the sum over compositions
/// (tie patterns of the block indices) and level vectors of the
/// feasible chains, weighted by the increment counts, divided by the
/// ordering multiplicity, against the nested geometric block sums.
fn chain_series(
    q: u64,
    p: u64,
    base_exp: u64,
    slots: &[Slot],
    extra: &BigRational,
) -> Result<RationalFn> {
    let j_total = slots.len();
    if j_total == 0 {
        return Ok(RationalFn::monomial(extra.clone(), base_exp));
    }
    let mut out = RationalFn::zero();
    let weight_per_slot: Vec<BigRational> = slots
        .iter()
        .map(|s| {
            // (q^(r_j) - 1) * q^(-r_j)
            let qr = BigInt::from(q).pow(s.degree);
            BigRational::new(&qr - BigInt::one(), qr)
        })
        .collect();

    for omega in compositions(j_total) {
        // block boundaries: slots grouped by equal block index
        let mut block_of = Vec::with_capacity(j_total);
        for (bi, &width) in omega.iter().enumerate() {
            block_of.extend(std::iter::repeat(bi).take(width));
        }
        // the nested geometric factor: ascending blocks, reversed for
        // the descending product formula
        let mut forms: Vec<(i64, i64)> = Vec::with_capacity(omega.len());
        for bi in (0..omega.len()).rev() {
            let gain: i64 = slots
                .iter()
                .zip(&block_of)
                .filter(|(_, &b)| b == bi)
                .map(|(s, _)| s.block_gain as i64)
                .sum();
            let weight: i64 = slots
                .iter()
                .zip(&block_of)
                .filter(|(_, &b)| b == bi)
                .map(|(s, _)| s.block_weight as i64)
                .sum();
            forms.push((gain, weight));
        }
        let psi_omega = nested_geometric_product(q, &forms)?;

        // level vectors v in {1..p-1}^J
        let arity = (p - 1) as usize;
        let mut v = vec![1u32; j_total];
        'vloop: loop {
            let levels: Vec<u64> = slots
                .iter()
                .zip(&v)
                .map(|(s, &vi)| s.levels[vi as usize - 1])
                .collect();
            // feasibility: within a block, levels must not descend
            let feasible = (0..j_total.saturating_sub(1)).all(|j| {
                block_of[j] != block_of[j + 1] || levels[j] <= levels[j + 1]
            });
            if feasible {
                // ordering multiplicity: equal (block, level) pairs
                let mut lambda = 1u64;
                let mut run = 1usize;
                for j in 1..j_total {
                    if block_of[j] == block_of[j - 1] && levels[j] == levels[j - 1] {
                        run += 1;
                    } else {
                        lambda *= factorial(run);
                        run = 1;
                    }
                }
                lambda *= factorial(run);

                let mut coeff = extra.clone();
                let mut u_pow = base_exp;
                let mut q_gain = 0i64;
                for ((slot, &vi), w) in slots.iter().zip(&v).zip(&weight_per_slot) {
                    coeff *= w;
                    q_gain += slot.degree as i64 * vi as i64;
                    u_pow += slot.disc_weight * (slot.levels[vi as usize - 1] + 1);
                }
                coeff *= rational_pow(q, q_gain);
                coeff /= BigRational::from(BigInt::from(lambda));

                let mut part = psi_omega.clone();
                part.mul_term(&Term { coeff, u_pow, denominators: Vec::new() });
                out.add(part);
            }
            // odometer over v
            let mut pos = 0;
            loop {
                if pos == j_total {
                    break 'vloop;
                }
                v[pos] += 1;
                if v[pos] as usize <= arity {
                    break;
                }
                v[pos] = 1;
                pos += 1;
            }
        }
    }
    Ok(out)
}

fn slots_for(ctx: &ModuleContext, tau: &[usize]) -> Vec<Slot> {
    let ext = ctx.ext();
    let p = ext.p();
    let f = ext.f as u64;
    let pd = p * ext.degree();
    let mut slots = Vec::with_capacity(tau.len());
    let mut r_prev = 0u32;
    for &i in tau {
        let r_next = r_prev + ctx.factors().ell(i);
        let step = p.pow(r_next) - p.pow(r_prev);
        slots.push(Slot {
            degree: ctx.factors().ell(i),
            levels: (1..p as u32).map(|v| ctx.level(i, v)).collect(),
            disc_weight: f * step,
            block_weight: pd * step,
            block_gain: (p as u32 - 1) * ctx.factors().ell(i),
        });
        r_prev = r_next;
    }
    slots
}

/// The series of splitting-field counts for one fixed ordering tau of
/// the components (conductors sorted along tau). All components
/// ramified gives the main chain sum; when tau starts with factor 1
/// the conductor-zero line contributes a reduced chain over the
/// remaining slots.
pub fn ordering_series(ctx: &ModuleContext, tau: &[usize]) -> Result<RationalFn> {
    let ext = ctx.ext();
    let p = ext.p();
    let q = ext.q;
    let ell_total = ctx.factors().ell_of(tau);
    let base_exp = p.pow(ell_total) * ext.f as u64 * (ext.e - 1);
    let kappa = tau.contains(&1) as u32;
    let slots = slots_for(ctx, tau);

    let mut out = chain_series(
        q,
        p,
        base_exp,
        &slots,
        &BigRational::from(BigInt::from(p.pow(kappa))),
    )?;
    if tau[0] == 1 {
        // the omega_0 line: conductor 0 in the first slot, weight p-1
        let reduced = chain_series(
            q,
            p,
            base_exp,
            &slots[1..],
            &BigRational::from(BigInt::from(p - 1)),
        )?;
        out.add(reduced);
    }
    Ok(out)
}

/// The splitting-field Dirichlet series over one L: the average of the
/// per-ordering series over all bijections, divided by the generator
/// count Psi(I). Its u^n coefficient is the exact number of splitting
/// fields over this L with discriminant exponent n.
pub fn splitting_series(ctx: &ModuleContext, indices: &[usize]) -> Result<RationalFn> {
    if indices.is_empty() {
        return Err(Error::Invalid("the index set must be nonempty".into()));
    }
    let mut out = RationalFn::zero();
    for tau in indices.iter().copied().permutations(indices.len()) {
        out.add(ordering_series(ctx, &tau)?);
    }
    let psi = BigRational::from(BigInt::from(ctx.psi(indices)));
    out.scale(&psi.recip());
    Ok(out)
}

/// Exact pole data of the counting series for one ordering.
#[derive(Debug, Clone)]
pub struct PoleReport {
    pub p: u64,
    pub d: u64,
    /// Component degrees r_1..r_J along the ordering.
    pub degrees: Vec<u32>,
    /// sigma_j(tau) = (p-1) S_j / (pd (p^(R_J) - p^(R_{J-j}))),
    /// strictly increasing.
    pub sigmas: Vec<BigRational>,
    /// The maximal real pole, independent of the ordering.
    pub sigma_max: BigRational,
    /// Denominators D_j = pd (p^(R_J) - p^(R_{J-j})) of the vertical
    /// pole spacings 2 pi / (D_j log q).
    pub spacing_denominators: Vec<BigUint>,
}

impl PoleReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "d": self.d,
            "degrees": self.degrees,
            "sigmas": self.sigmas.iter()
                .map(|s| format!("{}/{}", s.numer(), s.denom()))
                .collect::<Vec<_>>(),
            "sigma_max": format!("{}/{}", self.sigma_max.numer(), self.sigma_max.denom()),
            "vertical_spacing_denominators": self.spacing_denominators.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>(),
        })
    }
}

/// Exact real pole candidates for the ordering with component degrees
/// r_1..r_J; checks strict increase and that the maximum matches
/// (p-1) l(I) / (pd (p^l(I) - 1)).
pub fn pole_report(p: u64, d: u64, degrees: &[u32]) -> Result<PoleReport> {
    if degrees.is_empty() || degrees.iter().any(|&r| r == 0) {
        return Err(Error::Invalid("degrees must be positive".into()));
    }
    let j_total = degrees.len();
    let ell: u32 = degrees.iter().sum();
    let pd = BigInt::from(p * d);
    let p_big = BigInt::from(p);
    let mut sigmas = Vec::with_capacity(j_total);
    let mut spacing = Vec::with_capacity(j_total);
    for j in 1..=j_total {
        // S_j = r_J + ... + r_(J-j+1), R_(J-j) = r_1 + ... + r_(J-j)
        let s_j: u32 = degrees[j_total - j..].iter().sum();
        let r_jj: u32 = degrees[..j_total - j].iter().sum();
        let denom = &pd * (p_big.pow(ell) - p_big.pow(r_jj));
        sigmas.push(BigRational::new(
            BigInt::from(p - 1) * BigInt::from(s_j),
            denom.clone(),
        ));
        spacing.push(denom.to_biguint().expect("positive spacing denominator"));
    }
    for w in sigmas.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Internal(format!(
                "pole candidates not strictly increasing: {} >= {}",
                w[0], w[1]
            )));
        }
    }
    let sigma_max = sigmas.last().unwrap().clone();
    let expected = BigRational::new(
        BigInt::from((p - 1) as i64 * ell as i64),
        &pd * (p_big.pow(ell) - BigInt::one()),
    );
    if sigma_max != expected {
        return Err(Error::Internal(format!(
            "maximal pole {sigma_max} differs from the closed form {expected}"
        )));
    }
    Ok(PoleReport {
        p,
        d,
        degrees: degrees.to_vec(),
        sigmas,
        sigma_max,
        spacing_denominators: spacing,
    })
}

/// Growth exponent of the cumulative count implied by the maximal
/// pole, as a sanity hook for the estimator targets.
pub fn split_growth_exponent(p: u64, d: u64, ell: u32) -> BigRational {
    BigRational::new(
        BigInt::from((p - 1) as i64 * ell as i64),
        BigInt::from(p * d) * (BigInt::from(p).pow(ell) - BigInt::one()),
    )
}
