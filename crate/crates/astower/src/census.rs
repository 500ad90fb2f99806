//! Exact counting of tower extensions by discriminant exponent: the
//! closed-form counts N_i / N_I and their per-exponent increments, the
//! closed census for degree-pd fields, the conductor-tuple census for
//! splitting fields, the independent brute-force enumeration oracle,
//! and growth-exponent extraction from count tables.

use std::collections::BTreeMap;

use num::{BigRational, BigUint, One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::modstruct::ModuleContext;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Convention {
    /// Degree-pd fields M = L(theta_alpha).
    DegreePd,
    /// Galois splitting fields of degree p^l(I) * d.
    Split,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::DegreePd => "pd",
            Convention::Split => "split",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Tuple,
    Oracle,
    Series,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Tuple => "tuple",
            Method::Oracle => "oracle",
            Method::Series => "series",
        }
    }
}

/// Identifying metadata of a count table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMeta {
    pub p: u64,
    pub r: u32,
    pub d: u64,
    /// 1-based factor indices of I, sorted.
    pub indices: Vec<usize>,
    pub ell: u32,
    /// (e, f, twist) of the fixed L, or None for the sum over all L.
    pub l_label: Option<(u64, u32, u64)>,
    pub convention: Convention,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub x: u64,
    pub count: BigUint,
    pub cumulative: BigUint,
}

/// Dense per-discriminant-exponent counts with cumulative sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub meta: CountMeta,
    pub rows: Vec<CountRow>,
}

impl CountTable {
    fn from_counts(meta: CountMeta, counts: Vec<BigUint>) -> Self {
        let mut rows = Vec::with_capacity(counts.len());
        let mut cum = BigUint::zero();
        for (x, count) in counts.into_iter().enumerate() {
            cum += &count;
            rows.push(CountRow { x: x as u64, count, cumulative: cum.clone() });
        }
        CountTable { meta, rows }
    }

    pub fn x_max(&self) -> u64 {
        self.rows.last().map_or(0, |r| r.x)
    }

    pub fn count_at(&self, x: u64) -> BigUint {
        self.rows
            .get(x as usize)
            .map_or_else(BigUint::zero, |r| r.count.clone())
    }

    pub fn cumulative_at(&self, x: u64) -> BigUint {
        if self.rows.is_empty() {
            return BigUint::zero();
        }
        let idx = (x as usize).min(self.rows.len() - 1);
        self.rows[idx].cumulative.clone()
    }

    /// Sum of aligned tables (same convention and index set).
    pub fn merge_sum(tables: &[CountTable]) -> Result<CountTable> {
        let first = tables
            .first()
            .ok_or_else(|| Error::Invalid("cannot merge zero tables".into()))?;
        let x_max = tables.iter().map(|t| t.x_max()).max().unwrap();
        let mut counts = vec![BigUint::zero(); x_max as usize + 1];
        for t in tables {
            if t.meta.convention != first.meta.convention
                || t.meta.indices != first.meta.indices
            {
                return Err(Error::Invalid("mismatched tables in merge".into()));
            }
            for row in &t.rows {
                counts[row.x as usize] += &row.count;
            }
        }
        let mut meta = first.meta.clone();
        meta.l_label = None;
        Ok(CountTable::from_counts(meta, counts))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,count,cumulative,method\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.x,
                row.count,
                row.cumulative,
                self.meta.method.as_str()
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let l = match self.meta.l_label {
            Some((e, f, twist)) => serde_json::json!([e, f, twist]),
            None => serde_json::json!("all"),
        };
        serde_json::json!({
            "p": self.meta.p,
            "r": self.meta.r,
            "d": self.meta.d,
            "I": self.meta.indices,
            "L": l,
            "convention": self.meta.convention.as_str(),
            "method": self.meta.method.as_str(),
            "rows": self.rows.iter().map(|row| serde_json::json!({
                "x": row.x,
                "count": row.count.to_string(),
                "cumulative": row.cumulative.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    /// First x <= x_max where the tables disagree.
    pub fn first_mismatch(&self, other: &CountTable, x_max: u64) -> Option<u64> {
        (0..=x_max).find(|&x| self.count_at(x) != other.count_at(x))
    }
}

fn exact_div(n: BigUint, divisor: u64, what: &str) -> Result<BigUint> {
    let d = BigUint::from(divisor);
    let (q, r) = num::Integer::div_rem(&n, &d);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "{what}: {n} not divisible by {divisor}"
        )));
    }
    Ok(q)
}

/// Closed-form counts at one bound x.
#[derive(Debug, Clone)]
pub struct ClosedCounts {
    /// N_i(L, x) per index of I, aligned with the input slice.
    pub per_factor: Vec<BigUint>,
    /// N_i(L, x) - N_i(L, x - 1) per index of I.
    pub per_factor_delta: Vec<BigUint>,
    /// N_I(L, x), the product.
    pub total: BigUint,
}

/// N_i(L, x) = p^kappa(i) * q^(n(p-1)l(i) + gamma_i(y)l(i)) - 1 for
/// x = n*ep + y.
pub fn closed_n_i(ctx: &ModuleContext, i: usize, x: u64) -> BigUint {
    let ext = ctx.ext();
    let p = ext.p();
    let q = BigUint::from(ext.q);
    let ep = ext.e * p;
    let (n, y) = (x / ep, x % ep);
    let ell = ctx.factors().ell(i) as u64;
    let exponent = n * (p - 1) * ell + ctx.gamma(i, y) * ell;
    let count = BigUint::from(p).pow(ctx.kappa(i)) * q.pow(exponent as u32);
    count - BigUint::one()
}

/// The per-exponent increment N_i(L, x) - N_i(L, x - 1); nonzero only
/// on the valid residues.
pub fn closed_n_tilde_i(ctx: &ModuleContext, i: usize, x: u64) -> BigUint {
    let prev = if x == 0 {
        BigUint::zero()
    } else {
        closed_n_i(ctx, i, x - 1)
    };
    closed_n_i(ctx, i, x) - prev
}

/// (N_I, per-factor N_i, per-factor increments) at bound x.
pub fn closed_counts(ctx: &ModuleContext, indices: &[usize], x: u64) -> ClosedCounts {
    let per_factor: Vec<BigUint> = indices.iter().map(|&i| closed_n_i(ctx, i, x)).collect();
    let per_factor_delta: Vec<BigUint> = indices
        .iter()
        .map(|&i| closed_n_tilde_i(ctx, i, x))
        .collect();
    let total = per_factor.iter().product();
    ClosedCounts { per_factor, per_factor_delta, total }
}

fn meta_for(ctx: &ModuleContext, indices: &[usize], convention: Convention, method: Method) -> CountMeta {
    let ext = ctx.ext();
    CountMeta {
        p: ext.p(),
        r: ext.tower.r(),
        d: ext.degree(),
        indices: indices.to_vec(),
        ell: ctx.factors().ell_of(indices),
        l_label: Some((ext.e, ext.f as u32, ext.twist)),
        convention: Convention::DegreePd,
        method,
    }
    .with_convention(convention)
}

impl CountMeta {
    fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }
}

/// Closed census of degree-pd extensions containing this L: cumulative
/// count at x is N_I(L, z)/Psi(I) with z the depth admitted by x, and
/// zero below the tame floor p*f*(e-1).
pub fn count_degree_pd_single(
    ctx: &ModuleContext,
    indices: &[usize],
    x_max: u64,
) -> Result<CountTable> {
    let ext = ctx.ext();
    let p = ext.p();
    let f = ext.f as u64;
    let pd = p * ext.degree();
    let floor = p * ext.disc_lf;
    let psi = ctx.psi(indices);
    let mut cumulative = Vec::with_capacity(x_max as usize + 1);
    for x in 0..=x_max {
        if x < floor {
            cumulative.push(BigUint::zero());
            continue;
        }
        let z = if x + f >= pd { (x + f - pd) / ((p - 1) * f) } else { 0 };
        let n_total = closed_counts(ctx, indices, z).total;
        cumulative.push(exact_div(n_total, psi, "degree-pd census")?);
    }
    let mut counts = Vec::with_capacity(cumulative.len());
    let mut prev = BigUint::zero();
    for c in cumulative {
        counts.push(&c - &prev);
        prev = c;
    }
    Ok(CountTable::from_counts(
        meta_for(ctx, indices, Convention::DegreePd, Method::Closed),
        counts,
    ))
}

/// Sum of the closed degree-pd census over all given L.
pub fn count_degree_pd(
    ctxs: &[ModuleContext],
    indices: &[usize],
    x_max: u64,
) -> Result<CountTable> {
    let tables: Vec<CountTable> = ctxs
        .iter()
        .map(|ctx| count_degree_pd_single(ctx, indices, x_max))
        .collect::<Result<_>>()?;
    CountTable::merge_sum(&tables)
}

/// Conductor values component i can take, ascending, up to cap.
fn conductor_support(ctx: &ModuleContext, i: usize, cap: u64) -> Vec<u64> {
    let ext = ctx.ext();
    let p = ext.p();
    let e = ext.e;
    let rho = ctx.rho(i) as u64;
    let mut out = Vec::new();
    if i == 1 {
        out.push(0); // the omega_0 line
    }
    let mut m = if rho == 0 { e } else { rho };
    while m + 1 <= cap {
        if m % p != 0 {
            out.push(m + 1);
        }
        m += e;
    }
    out
}

/// Number of alpha_i with Cond(alpha_i) = c.
fn conductor_weight(ctx: &ModuleContext, i: usize, c: u64) -> BigUint {
    if c == 0 {
        debug_assert_eq!(i, 1);
        BigUint::from(ctx.ext().p() - 1)
    } else {
        closed_n_tilde_i(ctx, i, c - 1)
    }
}

/// Exact splitting-field census over one L by enumeration of
/// per-factor conductor tuples, weighted by the increment counts and
/// divided by Psi(I) tuple by tuple.
pub fn count_splitting_single(
    ctx: &ModuleContext,
    indices: &[usize],
    x_max: u64,
) -> Result<CountTable> {
    let ext = ctx.ext();
    let p = ext.p();
    let f = ext.f as u64;
    let ell_total = ctx.factors().ell_of(indices);
    let base = p.pow(ell_total) * f * (ext.e - 1);
    let psi = ctx.psi(indices);
    let mut counts = vec![BigUint::zero(); x_max as usize + 1];
    if base <= x_max {
        // cap: a conductor c at the cheapest slot still costs
        // f*(p^l(i) - 1)*c
        let supports: Vec<Vec<u64>> = indices
            .iter()
            .map(|&i| {
                let w = f * (p.pow(ctx.factors().ell(i)) - 1);
                conductor_support(ctx, i, (x_max - base) / w)
            })
            .collect();
        if supports.iter().any(|s| s.is_empty()) {
            return Ok(CountTable::from_counts(
                meta_for(ctx, indices, Convention::Split, Method::Tuple),
                counts,
            ));
        }
        let mut tuple = vec![0usize; indices.len()];
        'outer: loop {
            let conds: Vec<(usize, u64)> = indices
                .iter()
                .enumerate()
                .map(|(slot, &i)| (i, supports[slot][tuple[slot]]))
                .collect();
            // discriminant from the sorted conductor chain
            let mut sorted = conds.clone();
            sorted.sort_by_key(|&(i, c)| (c, i));
            let mut disc = base;
            let mut r_prev = 0u32;
            for &(i, c) in &sorted {
                let r_next = r_prev + ctx.factors().ell(i);
                disc += f * (p.pow(r_next) - p.pow(r_prev)) * c;
                r_prev = r_next;
            }
            if disc <= x_max {
                let weight: BigUint = conds
                    .iter()
                    .map(|&(i, c)| conductor_weight(ctx, i, c))
                    .product();
                counts[disc as usize] += exact_div(weight, psi, "splitting census tuple")?;
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == tuple.len() {
                    break 'outer;
                }
                tuple[pos] += 1;
                if tuple[pos] < supports[pos].len() {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }
    Ok(CountTable::from_counts(
        meta_for(ctx, indices, Convention::Split, Method::Tuple),
        counts,
    ))
}

/// Sum of the splitting-field census over all given L.
pub fn count_splitting(
    ctxs: &[ModuleContext],
    indices: &[usize],
    x_max: u64,
) -> Result<CountTable> {
    let tables: Vec<CountTable> = ctxs
        .iter()
        .map(|ctx| count_splitting_single(ctx, indices, x_max))
        .collect::<Result<_>>()?;
    CountTable::merge_sum(&tables)
}

/// Result of one oracle enumeration run over a fixed L.
#[derive(Debug)]
pub struct OracleCensus {
    pub val_bound: u32,
    /// Elements visited, including the zero class.
    pub elements: u128,
    /// Per index set: degree-pd tables.
    pub pd: BTreeMap<Vec<usize>, CountTable>,
    /// Per index set: splitting-field tables.
    pub split: BTreeMap<Vec<usize>, CountTable>,
}

type Buckets = BTreeMap<(u32, u64), u64>;

struct OracleScan<'a> {
    ms: Vec<u32>,
    tabs: Vec<Vec<&'a [u32]>>,
    q_size: u64,
    p: u64,
    f: u64,
    disc_lf: u64,
    ell: Vec<u32>,
    base_mask: Vec<u64>,
}

impl OracleScan<'_> {
    /// Classify one coefficient tuple (both mu_0 variants) into the
    /// (support mask, disc) buckets.
    #[inline]
    fn visit(&self, tail: &[u32], pd: &mut Buckets, split: &mut Buckets) {
        let nf = self.tabs.len();
        let k = tail.len();
        let mut nu_all = 0u64;
        for pos in (0..k).rev() {
            if tail[pos] != 0 {
                nu_all = self.ms[pos] as u64;
                break;
            }
        }
        let mut mask = 0u32;
        let mut conds = [0u64; 16];
        for i in 0..nf {
            for pos in (0..k).rev() {
                let c = tail[pos];
                if c != 0 && self.tabs[i][pos][c as usize] != 0 {
                    conds[i] = self.ms[pos] as u64 + 1;
                    mask |= 1 << i;
                    break;
                }
            }
        }
        let p = self.p;
        let f = self.f;
        if mask != 0 {
            // mu_0 = 0
            let disc_pd = p * self.disc_lf + (p - 1) * f * (nu_all + 1);
            *pd.entry((mask, disc_pd)).or_insert(0) += 1;
            let disc_sp = self.split_disc(mask, &conds);
            *split.entry((mask, disc_sp)).or_insert(0) += 1;
        }
        // mu_0 != 0: p - 1 elements sharing all invariants
        let mask_b = mask | 1;
        let cond_total = if nu_all > 0 { nu_all + 1 } else { 0 };
        let disc_pd = p * self.disc_lf + (p - 1) * f * cond_total;
        *pd.entry((mask_b, disc_pd)).or_insert(0) += p - 1;
        let disc_sp = self.split_disc(mask_b, &conds);
        *split.entry((mask_b, disc_sp)).or_insert(0) += p - 1;
    }

    fn split_disc(&self, mask: u32, conds: &[u64; 16]) -> u64 {
        let p = self.p;
        let mut pairs: Vec<(u64, u32)> = Vec::with_capacity(4);
        for (i, &ell) in self.ell.iter().enumerate() {
            if mask >> i & 1 == 1 {
                pairs.push((conds[i], ell));
            }
        }
        pairs.sort_unstable();
        let mut disc = self.base_mask[mask as usize];
        let mut r_prev = 0u32;
        for &(c, ell) in &pairs {
            let r_next = r_prev + ell;
            disc += self.f * (p.pow(r_next) - p.pow(r_prev)) * c;
            r_prev = r_next;
        }
        disc
    }
}

fn merge_buckets(mut a: Buckets, b: Buckets) -> Buckets {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

pub fn indices_of_mask(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// Brute-force census: enumerate every canonical representative with
/// |nu| <= val_bound, classify each into its support and discriminant
/// buckets, and convert element counts to field counts by the exact
/// division by Psi(I). Uses only the component lookup tables, never
/// the closed-form counting formulas.
pub fn enumerate_census(ctx: &ModuleContext, val_bound: u32, budget: u64) -> Result<OracleCensus> {
    if val_bound > ctx.val_bound() {
        return Err(Error::Invalid(format!(
            "oracle bound {val_bound} exceeds the context bound {}",
            ctx.val_bound()
        )));
    }
    let ext = ctx.ext();
    let p = ext.p();
    let q_size = ext.tower.size();
    let nf = ctx.factors().count();
    if nf > 16 {
        return Err(Error::Invalid("more than 16 factors is unsupported".into()));
    }
    let ms: Vec<u32> = (1..=val_bound).filter(|&m| m as u64 % p != 0).collect();
    let k = ms.len();
    let required = p as u128 * (q_size as u128).pow(k as u32);
    if required > budget as u128 {
        return Err(Error::Budget { required, budget });
    }

    let tabs: Vec<Vec<&[u32]>> = (1..=nf)
        .map(|i| {
            ms.iter()
                .map(|&m| ctx.idem_table(i, m).expect("valid stratum").as_slice())
                .collect()
        })
        .collect();
    let ell: Vec<u32> = (1..=nf).map(|i| ctx.factors().ell(i)).collect();
    let base_mask: Vec<u64> = (0..1u32 << nf)
        .map(|mask| {
            let ell_total: u32 = indices_of_mask(mask).iter().map(|&i| ctx.factors().ell(i)).sum();
            p.pow(ell_total) * ext.f as u64 * (ext.e - 1)
        })
        .collect();
    let scan = OracleScan {
        ms,
        tabs,
        q_size,
        p,
        f: ext.f as u64,
        disc_lf: ext.disc_lf,
        ell,
        base_mask,
    };

    let (pd_buckets, split_buckets) = if k == 0 {
        let mut pd = Buckets::new();
        let mut split = Buckets::new();
        scan.visit(&[], &mut pd, &mut split);
        (pd, split)
    } else {
        // partition on the deepest coordinate
        let results: Vec<(Buckets, Buckets)> = (0..q_size as u32)
            .into_par_iter()
            .map(|top| {
                let mut pd = Buckets::new();
                let mut split = Buckets::new();
                let mut tail = vec![0u32; k];
                tail[k - 1] = top;
                'all: loop {
                    scan.visit(&tail, &mut pd, &mut split);
                    let mut pos = 0;
                    loop {
                        if pos + 1 >= k {
                            break 'all;
                        }
                        tail[pos] += 1;
                        if (tail[pos] as u64) < scan.q_size {
                            break;
                        }
                        tail[pos] = 0;
                        pos += 1;
                    }
                }
                (pd, split)
            })
            .collect();
        results.into_iter().fold(
            (Buckets::new(), Buckets::new()),
            |(pa, sa), (pb, sb)| (merge_buckets(pa, pb), merge_buckets(sa, sb)),
        )
    };

    // orbit partition sanity: every nonzero representative was binned
    let binned: u128 = pd_buckets.values().map(|&v| v as u128).sum();
    if binned + 1 != required {
        return Err(Error::Internal(format!(
            "oracle binned {binned} elements out of {required}"
        )));
    }

    let build_tables = |buckets: &Buckets, convention: Convention| -> Result<BTreeMap<Vec<usize>, CountTable>> {
        let mut per_mask: BTreeMap<u32, BTreeMap<u64, u64>> = BTreeMap::new();
        for (&(mask, disc), &count) in buckets {
            per_mask.entry(mask).or_default().insert(disc, count);
        }
        let mut out = BTreeMap::new();
        for (mask, discs) in per_mask {
            let indices = indices_of_mask(mask);
            let psi = ctx.psi(&indices);
            let x_max = *discs.keys().next_back().unwrap();
            let mut counts = vec![BigUint::zero(); x_max as usize + 1];
            for (disc, count) in discs {
                counts[disc as usize] =
                    exact_div(BigUint::from(count), psi, "oracle orbit division")?;
            }
            let meta = meta_for(ctx, &indices, convention, Method::Oracle);
            out.insert(indices, CountTable::from_counts(meta, counts));
        }
        Ok(out)
    };

    Ok(OracleCensus {
        val_bound,
        elements: required,
        pd: build_tables(&pd_buckets, Convention::DegreePd)?,
        split: build_tables(&split_buckets, Convention::Split)?,
    })
}

/// Growth-exponent extraction from a count table.
#[derive(Debug, Clone)]
pub struct ExponentEstimate {
    /// Mean of log_q(count(x)/count(x-P))/P over the deepest windows.
    pub a_hat: f64,
    /// The exact target exponent.
    pub target: BigRational,
    pub rel_err: f64,
    /// Relative residuals |count(x+P)/count(x) - q^(aP)| / q^(aP) for
    /// x at and beyond x_start.
    pub residuals: Vec<(u64, f64)>,
    /// Whether every residual vanished exactly (BigUint arithmetic).
    pub residuals_exactly_zero: bool,
    pub period: u64,
}

/// Period and target for a table's convention.
pub fn period_and_target(meta: &CountMeta) -> (u64, BigRational) {
    let p = meta.p;
    let pd = p * meta.d;
    let ell = meta.ell as u64;
    match meta.convention {
        Convention::DegreePd => (
            (p - 1) * pd,
            BigRational::new(ell.into(), pd.into()),
        ),
        Convention::Split => {
            let pl = p.pow(meta.ell) - 1;
            (
                pl * pd,
                BigRational::new(((p - 1) * ell).into(), (pd * pl).into()),
            )
        }
    }
}

/// Estimate the growth exponent of a per-exponent count table and
/// check periodic-ratio residuals from x_start on. The table must
/// cover at least three full periods past x_start.
pub fn growth_exponent_estimate(table: &CountTable, x_start: u64) -> Result<ExponentEstimate> {
    let (period, target) = period_and_target(&table.meta);
    let x_max = table.x_max();
    if x_max < x_start + 3 * period {
        return Err(Error::Invalid(format!(
            "table reaches x={x_max}, need {} for three periods past {x_start}",
            x_start + 3 * period
        )));
    }
    let q = BigUint::from(table.meta.p.pow(table.meta.r));
    // q^(aP) is integral for both conventions: q^((p-1) l(I))
    let ratio_exact = q.pow((table.meta.p as u32 - 1) * table.meta.ell);
    let ratio_f = ratio_exact.to_f64().unwrap();

    let mut residuals = Vec::new();
    let mut all_zero = true;
    for x in x_start..=x_max - period {
        let low = table.count_at(x);
        let high = table.count_at(x + period);
        if low.is_zero() && high.is_zero() {
            continue;
        }
        let exact = high == &low * &ratio_exact;
        if !exact {
            all_zero = false;
        }
        let rel = if low.is_zero() {
            1.0
        } else {
            let r = high.to_f64().unwrap_or(f64::MAX) / low.to_f64().unwrap_or(1.0);
            (r - ratio_f).abs() / ratio_f
        };
        residuals.push((x, rel));
    }

    // a_hat from the deepest nonzero pair in each residue class
    let ln_q = (table.meta.p.pow(table.meta.r) as f64).ln();
    let mut estimates = Vec::new();
    for class in 0..period {
        let mut x = x_max - (x_max - class) % period.max(1);
        if x < class {
            continue;
        }
        while x >= x_start + period {
            let high = table.count_at(x);
            let low = table.count_at(x - period);
            if !high.is_zero() && !low.is_zero() {
                let ratio = BigRational::new(high.into(), low.into());
                estimates.push(ratio.to_f64().unwrap().ln() / (period as f64 * ln_q));
                break;
            }
            x -= period;
        }
    }
    if estimates.is_empty() {
        return Err(Error::Invalid("no nonzero period pairs in the window".into()));
    }
    let a_hat = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let target_f = target.to_f64().unwrap();
    Ok(ExponentEstimate {
        a_hat,
        rel_err: (a_hat - target_f).abs() / target_f,
        target,
        residuals,
        residuals_exactly_zero: all_zero,
        period,
    })
}

/// All nonempty subsets of 1..=n, by ascending mask.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..1 << n).map(indices_of_mask).collect()
}
