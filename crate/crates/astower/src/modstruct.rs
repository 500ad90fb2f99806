//! The F_p[H]-module structure of R_L for H = <sigma> of order d:
//! per-stratum sigma action, eigenspace kernels Y_i = Ker f_i(sigma),
//! CRT component splitting, Galois-group labels, and the stratum
//! offsets (rho_L(i), gamma_i) that drive all the counting formulas.

use crate::aschreier::ClassRep;
use crate::cyclofactor::FactorTable;
use crate::gf::Elem;
use crate::poly::FpPoly;
use crate::tame::CyclicExtension;
use crate::{Error, Result};

/// The label (d, I) of the group M_I x| C_d together with its derived
/// invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLabel {
    pub p: u64,
    pub d: u64,
    /// 1-based factor indices, sorted.
    pub indices: Vec<usize>,
    /// l(I), the F_p-dimension of M_I.
    pub ell: u32,
    /// |G| = d * p^l(I).
    pub order: u64,
    /// Permutation degree of the degree-pd field.
    pub degree_pd: u64,
    /// Permutation degree of the splitting field.
    pub degree_split: u64,
    /// 1 when 1 is in I, else 0.
    pub kappa: u32,
}

/// Everything computed once per (L, factorization, valuation bound).
pub struct ModuleContext {
    ext: CyclicExtension,
    factors: FactorTable,
    val_bound: u32,
    /// CRT idempotents e_i with e_i = 1 mod f_i, 0 mod f_j.
    idempotents: Vec<FpPoly>,
    /// e_i(sigma) on V_{-m} as coefficient lookups: [i][m].
    idem_tab: Vec<Vec<Option<Vec<u32>>>>,
    /// Kernel dimension of f_i(sigma) on V_{-m}: [i][m].
    kernel_dim: Vec<Vec<u32>>,
    /// rho_L(i): common residue of m mod e over nonzero strata.
    rho: Vec<u32>,
    /// z_i with rho~_L(i) = e*z_i + rho_L(i), the skipped level.
    z_off: Vec<u32>,
    /// Primitive e-th root of unity realizing the stratum periodicity.
    zeta_e: Elem,
}

/// Apply an F_p-linear map given by a coefficient table.
#[inline]
fn tab(table: &[u32], x: Elem) -> Elem {
    Elem(table[x.0 as usize])
}

impl ModuleContext {
    pub fn build(ext: CyclicExtension, factors: &FactorTable, val_bound: u32) -> Result<Self> {
        let p = ext.p();
        let d = ext.degree();
        if factors.p != p || factors.d != d {
            return Err(Error::Invalid(
                "factor table does not match the extension".into(),
            ));
        }
        if (val_bound as i64) > ext.window {
            return Err(Error::Window(-(val_bound as i64)));
        }
        // the single-residue stratum form behind all counting formulas
        // needs every d-th root of unity to have f(p-1)-th power 1,
        // i.e. e | p - 1 (automatic for q = p)
        if (p - 1) % ext.e != 0 {
            return Err(Error::Invalid(format!(
                "counting context requires e | p - 1, got e = {} over p = {p}",
                ext.e
            )));
        }
        let size = ext.tower.size() as usize;
        let nf = factors.count();

        // CRT idempotents by extended Euclid over F_p[X]
        let whole = FpPoly::x_pow_minus(p, d as usize, 1);
        let mut idempotents = Vec::with_capacity(nf);
        for i in 0..nf {
            let f_i = &factors.factors[i];
            let (h, _) = whole.div_rem(f_i);
            let (g, s, _) = h.ext_gcd(f_i);
            if g != FpPoly::one(p) {
                return Err(Error::Internal("cofactor not invertible mod f_i".into()));
            }
            idempotents.push(s.mul(&h).rem(&whole));
        }
        let idem_sum = idempotents
            .iter()
            .fold(FpPoly::zero(p), |acc, e| acc.add(e))
            .rem(&whole);
        if idem_sum != FpPoly::one(p) {
            return Err(Error::Internal("idempotents do not sum to 1".into()));
        }

        // per-stratum sigma tables and polynomial-in-sigma tables
        let mut idem_tab: Vec<Vec<Option<Vec<u32>>>> =
            vec![vec![None; val_bound as usize + 1]; nf];
        let mut kernel_dim = vec![vec![0u32; val_bound as usize + 1]; nf];
        let expected_dim = |i: usize| factors.ell(i + 1) * ext.tower.r();

        for m in 1..=val_bound {
            if m as u64 % p == 0 {
                continue;
            }
            let mut sig = vec![0u32; size];
            for x in ext.tower.elements() {
                sig[x.0 as usize] = ext.sigma_on_stratum(m, x).0;
            }
            for (i, f_i) in factors.factors.iter().enumerate() {
                let ftab = poly_table(&ext, &sig, f_i);
                let zeros = ftab.iter().filter(|&&v| v == 0).count() as u64;
                let dim = zeros.ilog(p);
                if p.pow(dim) != zeros {
                    return Err(Error::Internal(format!(
                        "kernel of f_{} on V_(-{m}) is not a subspace",
                        i + 1
                    )));
                }
                if dim != 0 && dim != expected_dim(i) {
                    return Err(Error::Internal(format!(
                        "kernel dimension {dim} on V_(-{m}) violates the 0/l(i)r dichotomy",
                    )));
                }
                kernel_dim[i][m as usize] = dim;
                idem_tab[i][m as usize] = Some(poly_table(&ext, &sig, &idempotents[i]));
            }
        }

        // rho_L(i) from the nonzero strata
        let mut rho = Vec::with_capacity(nf);
        let mut z_off = Vec::with_capacity(nf);
        for i in 0..nf {
            let hits: Vec<u32> = (1..=val_bound)
                .filter(|&m| kernel_dim[i][m as usize] != 0)
                .collect();
            let Some(&first) = hits.first() else {
                return Err(Error::ValBound { bound: val_bound, factor: i + 1 });
            };
            let r_i = first % ext.e as u32;
            if hits.iter().any(|&m| m % ext.e as u32 != r_i) {
                return Err(Error::Internal(format!(
                    "nonzero strata of factor {} not in one residue class mod e",
                    i + 1
                )));
            }
            // the skipped level: the unique multiple of p in the class
            let z = (0..p as u32)
                .find(|&z| (ext.e as u32 * z + r_i) as u64 % p == 0)
                .expect("p and e are coprime");
            rho.push(r_i);
            z_off.push(z);
        }

        let zeta_e = stratum_zeta(&ext);
        let zeta_ok = ext.tower.in_base_field(zeta_e)
            && if ext.e == 1 {
                zeta_e == Elem::ONE
            } else {
                ext.tower.order(zeta_e) == ext.e
            };
        if !zeta_ok {
            return Err(Error::Internal(
                "zeta_e is not a primitive e-th root in F_q".into(),
            ));
        }

        Ok(ModuleContext {
            ext,
            factors: factors.clone(),
            val_bound,
            idempotents,
            idem_tab,
            kernel_dim,
            rho,
            z_off,
            zeta_e,
        })
    }

    pub fn ext(&self) -> &CyclicExtension {
        &self.ext
    }
    pub fn factors(&self) -> &FactorTable {
        &self.factors
    }
    pub fn val_bound(&self) -> u32 {
        self.val_bound
    }
    pub fn zeta_e(&self) -> Elem {
        self.zeta_e
    }
    pub fn idempotent(&self, i: usize) -> &FpPoly {
        &self.idempotents[i - 1]
    }
    pub fn kernel_dim(&self, i: usize, m: u32) -> u32 {
        self.kernel_dim[i - 1][m as usize]
    }
    pub fn rho(&self, i: usize) -> u32 {
        self.rho[i - 1]
    }
    /// z_i: rho~_L(i) = e*z_i + rho_L(i) is the p-divisible level.
    pub fn z_offset(&self, i: usize) -> u32 {
        self.z_off[i - 1]
    }
    pub fn kappa(&self, i: usize) -> u32 {
        (i == 1) as u32
    }

    /// Lookup table of e_i(sigma) on V_{-m} (None when p | m).
    pub(crate) fn idem_table(&self, i: usize, m: u32) -> Option<&Vec<u32>> {
        self.idem_tab[i - 1][m as usize].as_ref()
    }

    /// Number of cyclic generators of M_I.
    pub fn psi(&self, indices: &[usize]) -> u64 {
        let p = self.ext.p();
        indices
            .iter()
            .map(|&i| p.pow(self.factors.ell(i)) - 1)
            .product()
    }

    /// Apply g(sigma) to a representative, term by term.
    pub fn apply_poly_sigma(&self, g: &FpPoly, rep: &ClassRep) -> ClassRep {
        let mut acc = ClassRep::zero();
        let mut power = rep.clone();
        for j in 0..g.coeffs().len() {
            let c = g.coeff(j);
            if c != 0 {
                acc = self.ext.rep_add(&acc, &self.ext.rep_scale(c, &power));
            }
            power = self.ext.sigma_rep(&power);
        }
        acc
    }

    /// CRT component split: alpha_i = e_i(sigma)(rep), using the
    /// per-stratum lookup tables. Components sum back to rep and
    /// f_i(sigma) kills component i.
    pub fn split(&self, rep: &ClassRep) -> Result<Vec<ClassRep>> {
        let nf = self.factors.count();
        let mut out = vec![ClassRep::zero(); nf];
        out[0].mu0 = rep.mu0;
        for (exp, c) in rep.tail() {
            let m = exp.unsigned_abs() as u32;
            if m > self.val_bound {
                return Err(Error::Window(exp));
            }
            for (i, comp) in out.iter_mut().enumerate() {
                let table = self.idem_tab[i][m as usize].as_ref().ok_or_else(|| {
                    Error::Invalid(format!(
                        "exponent {exp} divisible by p: not a canonical representative"
                    ))
                })?;
                let v = tab(table, c);
                if !v.is_zero() {
                    comp.set_tail(exp, v);
                }
            }
        }
        Ok(out)
    }

    /// Support I of a representative: the 1-based factor indices with
    /// nonzero component.
    pub fn support(&self, rep: &ClassRep) -> Result<Vec<usize>> {
        Ok(self
            .split(rep)?
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i + 1)
            .collect())
    }

    pub fn label_for(&self, indices: &[usize]) -> GroupLabel {
        let p = self.ext.p();
        let d = self.ext.degree();
        let ell = self.factors.ell_of(indices);
        GroupLabel {
            p,
            d,
            indices: indices.to_vec(),
            ell,
            order: d * p.pow(ell),
            degree_pd: p * d,
            degree_split: p.pow(ell) * d,
            kappa: indices.contains(&1) as u32,
        }
    }

    /// Galois label of the tower step generated by rep.
    pub fn group_label(&self, rep: &ClassRep) -> Result<GroupLabel> {
        if rep.is_zero() {
            return Err(Error::ZeroClass);
        }
        Ok(self.label_for(&self.support(rep)?))
    }

    /// The full F_p[H]-module generated by rep, together with its
    /// cyclic generators (the elements with the same support).
    pub fn orbit(&self, rep: &ClassRep) -> Result<(Vec<ClassRep>, Vec<ClassRep>)> {
        let d = self.ext.degree() as usize;
        let p = self.ext.p();
        let mut basis = Vec::with_capacity(d);
        let mut power = rep.clone();
        for _ in 0..d {
            basis.push(power.clone());
            power = self.ext.sigma_rep(&power);
        }
        let mut module: std::collections::BTreeSet<ClassRep> = std::collections::BTreeSet::new();
        let total = (p as u128).pow(d as u32);
        for mut combo in 0..total {
            let mut acc = ClassRep::zero();
            for b in &basis {
                let c = (combo % p as u128) as u64;
                combo /= p as u128;
                if c != 0 {
                    acc = self.ext.rep_add(&acc, &self.ext.rep_scale(c, b));
                }
            }
            module.insert(acc);
        }
        let indices = self.support(rep)?;
        let mut generators = Vec::new();
        for m in &module {
            if !m.is_zero() && self.support(m)? == indices {
                generators.push(m.clone());
            }
        }
        Ok((module.into_iter().collect(), generators))
    }

    /// gamma_i(L, y) for y in [0, ep): the number of valid dimension
    /// increments in (0, y]. The floor-difference form is kept as a
    /// cross-check.
    pub fn gamma(&self, i: usize, y: u64) -> u64 {
        let e = self.ext.e;
        let p = self.ext.p();
        assert!(y < e * p, "gamma is defined on one block");
        let rho = self.rho(i) as u64;
        let count = (1..=y).filter(|&m| m % e == rho % e && m % p != 0).count() as u64;
        let rho_tilde = e * self.z_offset(i) as u64 + rho;
        let floor_form = (y as i64 - rho as i64).div_euclid(e as i64)
            - (y as i64 - rho_tilde as i64).div_euclid((e * p) as i64);
        debug_assert_eq!(count as i64, floor_form, "gamma mismatch at y={y}");
        count
    }

    /// The v-th conductor level inside one block: l~_i(v) for v in
    /// 1..=p-1 lists the residues in [0, ep) congruent to rho mod e and
    /// not divisible by p, ascending.
    pub fn level(&self, i: usize, v: u32) -> u64 {
        let e = self.ext.e;
        let p = self.ext.p();
        debug_assert!(v >= 1 && (v as u64) < p);
        let rho = self.rho(i) as u64;
        let z = self.z_offset(i) as u64;
        if (v as u64) <= z {
            (v as u64 - 1) * e + rho
        } else {
            v as u64 * e + rho
        }
    }
}

/// zeta_e = omega^(a*(q^f-1)/(q-1)): sigma^f scales V_z by zeta_e^z.
pub fn stratum_zeta(ext: &CyclicExtension) -> Elem {
    let group = (ext.big_q - 1).max(1) as u128;
    let scale = (ext.big_q as u128 - 1) / (ext.q as u128 - 1).max(1);
    ext.tower.gen_pow((ext.a as u128 * scale % group) as i128)
}

/// Table of g(sigma) acting on one stratum, from the sigma table.
fn poly_table(ext: &CyclicExtension, sig: &[u32], g: &FpPoly) -> Vec<u32> {
    let size = sig.len();
    let mut out = vec![0u32; size];
    for x0 in 0..size as u32 {
        // Horner: g(S)x = c_0 x + S(c_1 x + S(c_2 x + ...))
        let mut acc = Elem::ZERO;
        for j in (0..g.coeffs().len()).rev() {
            acc = tab(sig, acc);
            let c = g.coeff(j);
            if c != 0 {
                acc = ext.tower.add(acc, ext.tower.scalar_mul(c, Elem(x0)));
            }
        }
        out[x0 as usize] = acc.0;
    }
    out
}
