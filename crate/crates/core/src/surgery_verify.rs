//! Exact checks of the surgery identities against computed model data.
//!
//! A check passes iff lhs − rhs is exactly zero for every case in its sweep.
//! A failing check carries that residual and the first failing index tuple
//! in sweep order, so reports do not depend on the thread count.

use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;

use crate::complexes::builtin;
use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::groupcohomology::{check_cocycle, CocycleCheck};
use crate::model::Model;
use crate::modular2d::{identity, verlinde_fusion, Fusion, ModularData2D};
use crate::modular3p1d::{Data3p1D, SparseMat};
use crate::mono::{Acc, Mono, Q};
use crate::statesum::{gsd, partition_function};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: CycNum,
    pub witness: Vec<usize>,
    pub cases: u64,
    pub note: Option<String>,
}

impl Check {
    fn from_sweep(name: &str, cases: u64, failure: Option<(Vec<usize>, CycNum)>) -> Self {
        let (passed, witness, residual) = match failure {
            None => (true, vec![], CycNum::zero()),
            Some((w, r)) => (false, w, r),
        };
        Check { name: name.into(), passed, residual, witness, cases, note: None }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurgeryReport {
    pub model: String,
    pub spec_hash: String,
    pub checks: Vec<Check>,
}

impl SurgeryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn acc_of(x: &Mono) -> Acc {
    let mut a = Acc::new(x.m());
    a.add(x);
    a
}

/// lhs − rhs when it is nonzero.
fn residual(lhs: &Acc, rhs: &Acc) -> Option<CycNum> {
    let mut d = lhs.clone();
    for t in rhs.monomials() {
        d.sub_mono(&t);
    }
    if d.term_count() == 0 {
        return None;
    }
    let c = d.to_cyc();
    (!c.is_zero()).then_some(c)
}

/// First failure over a flat index range, in index order.
fn sweep<F>(cases: usize, f: F) -> Option<(Vec<usize>, CycNum)>
where
    F: Fn(usize) -> Option<(Vec<usize>, CycNum)> + Sync + Send,
{
    (0..cases).into_par_iter().find_map_first(f)
}

/// Four glued manifolds of the identity
/// Z(M_U ∪_B M_D) Z(N_U ∪_B N_D) = Z(N_U ∪_B M_D) Z(M_U ∪_B N_D).
#[derive(Clone, Debug, PartialEq)]
pub struct GluingScenario {
    pub m_u: String,
    pub m_d: String,
    pub n_u: String,
    pub n_d: String,
    pub cut: String,
    pub z_mm: CycNum,
    pub z_nn: CycNum,
    pub z_nm: CycNum,
    pub z_mn: CycNum,
    /// Dimension of the state space on the cut with its punctures.
    pub gsd_at_cut: u64,
}

pub fn verify_gluing_identity(s: &GluingScenario) -> Result<Check> {
    if s.gsd_at_cut != 1 {
        return Err(Error::Inconsistent(format!(
            "cut {} carries a {}-dimensional state space; the gluing identity needs 1",
            s.cut, s.gsd_at_cut
        )));
    }
    let d = &s.z_mm * &s.z_nn - &s.z_nm * &s.z_mn;
    if d.is_zero() {
        return Ok(Check::from_sweep("gluing", 1, None));
    }
    let note = format!("M_U = {}, M_D = {}, N_U = {}, N_D = {}, cut {}", s.m_u, s.m_d, s.n_u, s.n_d, s.cut);
    Ok(Check::from_sweep("gluing", 1, Some((vec![], d))).with_note(note))
}

/// The Verlinde configuration on S³ = D³ ∪_{S²} D³ for labels (σ₁, σ₂, σ₃).
pub fn verlinde_scenario(
    md: &ModularData2D,
    conj: &[usize],
    fusion: &Fusion,
    gsd_s2: u64,
    s1: usize,
    s2: usize,
    s3: usize,
) -> GluingScenario {
    let n = md.len();
    let b = conj[s1];
    let mut sum = Acc::new(md.order);
    for s4 in 0..n {
        let k = fusion[s4][s2][s3];
        if k > 0 {
            sum.add(&md.s[b][s4].scale((k as i64).into()));
        }
    }
    GluingScenario {
        m_u: format!("D3 with {s1} around the {s2},{s3} pair"),
        m_d: format!("D3 with the {s2},{s3} pair"),
        n_u: format!("D3 with {s1} unlinked"),
        n_d: "D3 empty".into(),
        cut: "S2 with a particle pair".into(),
        z_mm: sum.to_cyc(),
        z_nn: md.s[b][0].to_cyc(),
        z_nm: md.s[b][s2].to_cyc(),
        z_mn: md.s[b][s3].to_cyc(),
        gsd_at_cut: gsd_s2 * fusion[0][s1][b],
    }
}

/// S_{σ̄₁0} Σ_{σ₄} S_{σ̄₁σ₄} N^{σ₄}_{σ₂σ₃} = S_{σ̄₁σ₂} S_{σ̄₁σ₃} for every triple.
pub fn verify_verlinde(s: &[Vec<Mono>], conj: &[usize], fusion: &Fusion) -> Check {
    let n = s.len();
    let failure = sweep(n * n * n, |idx| {
        let (s1, s2, s3) = (idx / (n * n), (idx / n) % n, idx % n);
        let b = conj[s1];
        if fusion[0][s1][b] != 1 {
            return Some((vec![s1, s2, s3], CycNum::from_int(fusion[0][s1][b] as i64 - 1)));
        }
        let mut lhs = Acc::new(s[0][0].m());
        for s4 in 0..n {
            let k = fusion[s4][s2][s3];
            if k > 0 {
                lhs.add(&s[b][0].mul(&s[b][s4]).scale((k as i64).into()));
            }
        }
        let rhs = acc_of(&s[b][s2].mul(&s[b][s3]));
        residual(&lhs, &rhs).map(|r| (vec![s1, s2, s3], r))
    });
    Check::from_sweep("verlinde", (n * n * n) as u64, failure)
}

/// A mapping-class action K and its inverse on a label basis.
#[derive(Clone, Debug)]
pub struct MCGRep {
    pub name: String,
    pub k: SparseMat,
    pub k_inv: SparseMat,
}

impl MCGRep {
    pub fn new(name: &str, k: SparseMat, k_inv: SparseMat, m: u64) -> Result<Self> {
        let one = k.mul(&k_inv, m)?;
        if let Some((i, j)) = one.first_difference(&SparseMat::identity(k.n, m)) {
            return Err(Error::Inconsistent(format!("{name}·{name}⁻¹ differs from 1 at ({i},{j})")));
        }
        Ok(MCGRep { name: name.into(), k, k_inv })
    }
}

/// Re-gluing by K: b = a·K and a = b·K⁻¹ row by row, where a holds the
/// amplitudes Z(M; α, β) and b the amplitudes Z(M ∪_K; α, Φ).
pub fn verify_regluing(rep: &MCGRep, a: &[Vec<Mono>], b: &[Vec<Mono>], m: u64) -> Check {
    let n = rep.k.n;
    let rows = a.len().min(b.len());
    let to_acc = |r: &[Mono]| r.iter().map(acc_of).collect::<Vec<_>>();
    let failure = (0..2 * rows).into_par_iter().find_map_first(|t| {
        let (dir, r) = (t / rows, t % rows);
        let (src, dst, mat) = if dir == 0 { (&a[r], &b[r], &rep.k) } else { (&b[r], &a[r], &rep.k_inv) };
        let got = mat.apply_row(&to_acc(src), m);
        (0..n).find_map(|j| residual(&got[j], &acc_of(&dst[j])).map(|x| (vec![dir, r, j], x)))
    });
    Check::from_sweep(&format!("regluing-{}", rep.name), (2 * rows * n) as u64, failure)
}

/// L_{μ₁0} Σ_{σ₄} L_{μ₁σ₄} (F^{S¹})^{σ₄}_{σ₂σ₃} = L_{μ₁σ₂} L_{μ₁σ₃} over fluxes μ₁.
pub fn verify_particle_string(d: &Data3p1D) -> Check {
    let (nf, np) = (d.link_s2s1.len(), d.particles.len());
    let l = &d.link_s2s1;
    let failure = sweep(nf * np * np, |idx| {
        let (mu, s2, s3) = (idx / (np * np), (idx / np) % np, idx % np);
        let mut lhs = Acc::new(d.order);
        for &(s4, f) in d.f_s1.get(s2, s3) {
            lhs.add(&l[mu][0].mul(&l[mu][s4 as usize]).mul(&f));
        }
        let rhs = acc_of(&l[mu][s2].mul(&l[mu][s3]));
        residual(&lhs, &rhs).map(|r| (vec![mu, s2, s3], r))
    });
    Check::from_sweep("particle-string", (nf * np * np) as u64, failure)
}

/// L_{0σ₁} Σ_{μ₄} L_{μ₄σ₁} (F^{S²})^{μ₄}_{μ₂μ₃} = L_{μ₂σ₁} L_{μ₃σ₁}.
pub fn verify_string_particle(d: &Data3p1D) -> Check {
    let (nf, np) = (d.link_s2s1.len(), d.particles.len());
    let l = &d.link_s2s1;
    let failure = sweep(np * nf * nf, |idx| {
        let (s1, m2, m3) = (idx / (nf * nf), (idx / nf) % nf, idx % nf);
        let mut lhs = Acc::new(d.order);
        for &(m4, f) in d.f_s2.get(m2, m3) {
            lhs.add(&l[0][s1].mul(&l[m4 as usize][s1]).mul(&f));
        }
        let rhs = acc_of(&l[m2][s1].mul(&l[m3][s1]));
        residual(&lhs, &rhs).map(|r| (vec![s1, m2, m3], r))
    });
    Check::from_sweep("string-particle", (np * nf * nf) as u64, failure)
}

/// Sparse vector with repeated indices merged; exact zeros dropped.
fn merge(mut v: Vec<(u32, Mono)>, m: u64) -> Vec<(u32, Acc)> {
    v.sort_by_key(|e| e.0);
    let mut out: Vec<(u32, Acc)> = Vec::new();
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1.add(&x),
            _ => {
                let mut a = Acc::new(m);
                a.add(&x);
                out.push((i, a));
            }
        }
    }
    out.retain(|e| e.1.term_count() > 0);
    out
}

/// First index where two merged sparse vectors differ.
fn sparse_residual(a: &[(u32, Acc)], b: &[(u32, Acc)], m: u64) -> Option<(usize, CycNum)> {
    let mut idx: Vec<u32> = a.iter().chain(b).map(|e| e.0).collect();
    idx.sort_unstable();
    idx.dedup();
    let zero = Acc::new(m);
    let find = |v: &[(u32, Acc)], i: u32| v.iter().find(|e| e.0 == i).map_or(zero.clone(), |e| e.1.clone());
    idx.into_iter().find_map(|i| residual(&find(a, i), &find(b, i)).map(|r| (i as usize, r)))
}

/// Σ_{σ₃} (F^{S¹})^{σ₃}_{σ₁σ₂} (F^{T²})^{μ₃}_{σ₃μ₂} = Σ_{μ₁} (F^{T²})^{μ₁}_{σ₂μ₂} (F^{T²})^{μ₃}_{σ₁μ₁}.
pub fn verify_fusion_consistency(d: &Data3p1D) -> Check {
    let (np, n, m) = (d.particles.len(), d.len(), d.order);
    let failure = sweep(np * np * n, |idx| {
        let (s1, s2, mu2) = (idx / (np * n), (idx / n) % np, idx % n);
        let mut lhs = Vec::new();
        for &(s3, f) in d.f_s1.get(s1, s2) {
            for &(mu3, g) in &d.f_particle[s3 as usize][mu2] {
                lhs.push((mu3, f.mul(&g)));
            }
        }
        let mut rhs = Vec::new();
        for &(mu1, f) in &d.f_particle[s2][mu2] {
            for &(mu3, g) in &d.f_particle[s1][mu1 as usize] {
                rhs.push((mu3, f.mul(&g)));
            }
        }
        sparse_residual(&merge(lhs, m), &merge(rhs, m), m).map(|(mu3, r)| (vec![s1, s2, mu2, mu3], r))
    });
    Check::from_sweep("fusion-consistency", (np * np * n * n) as u64, failure)
}

/// ℓ_{μ₁} Σ_Γ (F^{T²})^Γ_{ζ₂ζ₄} X_Γ = X_{ζ₂} X_{ζ₄} with X = ℓᵀ S F_{μ₁} S⁻¹.
///
/// For fixed μ₁ only pairs with ζ₂, ζ₄ both in supp X, or fusing into supp X,
/// can have a nonzero side; the rest are skipped, so the sweep is complete.
// q·ζ_m^k with an unreduced fraction, compared by cross-multiplication
#[derive(Clone, Copy)]
struct Phase {
    num: i128,
    den: i128,
    k: u64,
}

impl Phase {
    fn of(v: &Mono, m: u64) -> Phase {
        let v = if v.m() == m { *v } else { v.lift(m) };
        Phase { num: *v.q().numer() as i128, den: *v.q().denom() as i128, k: v.k() }
    }

    fn is_zero(&self) -> bool {
        self.num == 0
    }

    fn mul(&self, o: &Phase, m: u64) -> Phase {
        let (mut num, mut den) = (self.num * o.num, self.den * o.den);
        let g = if den.unsigned_abs() > 1 << 40 { num.gcd(&den).abs() } else { 1 };
        if g > 1 {
            num /= g;
            den /= g;
        }
        let mut k = (self.k + o.k) % m;
        if m.is_multiple_of(2) && k >= m / 2 {
            k -= m / 2;
            num = -num;
        }
        if num == 0 {
            k = 0;
        }
        Phase { num, den, k }
    }

    fn same(&self, o: &Phase) -> bool {
        self.k == o.k && self.num * o.den == o.num * self.den
    }
}

pub fn verify_three_loop(d: &Data3p1D) -> Check {
    let (n, m) = (d.len(), d.order);
    let mut rev: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for z2 in 0..n {
        for z4 in 0..n {
            for &(g, _) in d.f_t2.get(z2, z4) {
                rev[g as usize].push((z2 as u32, z4 as u32));
            }
        }
    }
    let ell: Vec<Acc> = d.ltri_base.iter().map(acc_of).collect();
    let base = d.s_xyz.apply_row(&ell, m);
    let failure = (0..n).into_par_iter().find_map_first(|mu1| {
        let r = d.apply_fusion_row(mu1, &base);
        let mut x = Vec::with_capacity(n);
        for (j, col) in d.s_xyz_inv.cols.iter().enumerate() {
            let mut a = Acc::new(m);
            for &(i, v) in col {
                for t in r[i as usize].monomials() {
                    a.add(&t.mul(&v));
                }
            }
            match a.to_mono() {
                Ok(v) => x.push(v),
                Err(_) => return Some((vec![mu1, j], a.to_cyc())),
            }
        }
        let in_supp: Vec<bool> = x.iter().map(|v| !v.is_zero()).collect();
        let supp: Vec<usize> = (0..n).filter(|&i| in_supp[i]).collect();
        let l1 = d.ltri_base[mu1];
        let xp: Vec<Phase> = x.iter().map(|v| Phase::of(v, m)).collect();
        let lp = Phase::of(&l1, m);
        let check = |z2: usize, z4: usize| -> Option<(Vec<usize>, CycNum)> {
            let rhs = xp[z2].mul(&xp[z4], m);
            let fast = match d.f_t2.get(z2, z4) {
                [] => rhs.is_zero(),
                [(g, f)] => lp.mul(&Phase::of(f, m), m).mul(&xp[*g as usize], m).same(&rhs),
                _ => false,
            };
            if fast {
                return None;
            }
            let mut lhs = Acc::new(m);
            for &(g, f) in d.f_t2.get(z2, z4) {
                lhs.add(&l1.mul(&f).mul(&x[g as usize]));
            }
            residual(&lhs, &acc_of(&x[z2].mul(&x[z4]))).map(|r| (vec![mu1, z2, z4], r))
        };
        for &a in &supp {
            for &b in &supp {
                if let Some(f) = check(a, b) {
                    return Some(f);
                }
            }
        }
        for &g in &supp {
            for &(z2, z4) in &rev[g] {
                let (z2, z4) = (z2 as usize, z4 as usize);
                if in_supp[z2] && in_supp[z4] {
                    continue;
                }
                // visit each pair once, from its first supported channel
                let first = d.f_t2.get(z2, z4).iter().find(|e| in_supp[e.0 as usize]).map(|e| e.0 as usize);
                if first != Some(g) {
                    continue;
                }
                if let Some(f) = check(z2, z4) {
                    return Some(f);
                }
            }
        }
        None
    });
    Check::from_sweep("three-loop", (n * n * n) as u64, failure)
}

/// δω = 1 on every tuple.
pub fn verify_cocycle(model: &Model) -> Result<Check> {
    Ok(match check_cocycle(&model.cocycle)? {
        CocycleCheck::Pass { checked } => Check::from_sweep("cocycle", checked, None),
        CocycleCheck::Fail { witness, exponent } => {
            let r = CycNum::root_of_unity(exponent as i64, model.cocycle.order()) - CycNum::one();
            Check::from_sweep("cocycle", 0, Some((witness, r)))
        }
    })
}

type AccMat = Vec<Vec<Acc>>;

fn to_accs(a: &[Vec<Mono>]) -> AccMat {
    a.iter().map(|r| r.iter().map(acc_of).collect()).collect()
}

// products of corrupted matrices need not be monomials, so they stay as sums
fn acc_mul(a: &AccMat, b: &AccMat, m: u64) -> AccMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| {
                    let mut out = Acc::new(m);
                    for (k, x) in r.iter().enumerate() {
                        for s in x.monomials() {
                            for t in b[k][j].monomials() {
                                out.add(&s.mul(&t));
                            }
                        }
                    }
                    out
                })
                .collect()
        })
        .collect()
}

fn first_residual(a: &AccMat, b: &AccMat) -> Option<(usize, usize, CycNum)> {
    a.iter()
        .zip(b)
        .enumerate()
        .find_map(|(i, (r, t))| r.iter().zip(t).enumerate().find_map(|(j, (x, y))| residual(x, y).map(|d| (i, j, d))))
}

/// S S⁻¹ = 1, S² a permutation, (ST)³ = S², T unit diagonal with T₀ = 1, and
/// a positive rational vacuum row. The witness is [relation, i, j].
pub fn verify_modular(md: &ModularData2D) -> Result<Check> {
    let (n, m) = (md.len(), md.order);
    let s = to_accs(&md.s);
    let s2 = acc_mul(&s, &s, m);
    let st = acc_mul(&s, &to_accs(&md.t_matrix()), m);
    let st3 = acc_mul(&acc_mul(&st, &st, m), &st, m);
    let unitary = || first_residual(&acc_mul(&s, &to_accs(&md.s_inverse()), m), &to_accs(&identity(n, m)));
    let nonzero = |x: &Acc| !x.to_cyc().is_zero();
    let permutation = || {
        (0..n).find_map(|i| {
            let nz: Vec<usize> = (0..n).filter(|&j| nonzero(&s2[i][j])).collect();
            match nz.as_slice() {
                [j] => residual(&s2[i][*j], &acc_of(&Mono::one(m))).map(|d| (i, *j, d)),
                _ => Some((i, 0, CycNum::from_int(nz.len() as i64 - 1))),
            }
        })
    };
    let column = || {
        (0..n).find_map(|j| {
            let k = s2.iter().filter(|r| nonzero(&r[j])).count();
            (k != 1).then(|| (0, j, CycNum::from_int(k as i64 - 1)))
        })
    };
    let twist = || {
        let r0 = md.t[0].to_cyc() - CycNum::one();
        if !r0.is_zero() {
            return Some((0, 0, r0));
        }
        md.t.iter().enumerate().find_map(|(i, x)| {
            let r = x.mul(&x.conj()).to_cyc() - CycNum::one();
            (!r.is_zero()).then_some((i, i, r))
        })
    };
    let vacuum = || {
        md.s[0].iter().enumerate().find_map(|(j, x)| {
            let ok = x.k() == 0 && x.q() > Q::from(0);
            (!ok).then(|| (0, j, x.to_cyc() - Mono::rational(x.q().abs(), m).to_cyc()))
        })
    };
    let failure = unitary()
        .map(|w| (0, w))
        .or_else(|| permutation().or_else(column).map(|w| (1, w)))
        .or_else(|| first_residual(&st3, &s2).map(|w| (2, w)))
        .or_else(|| twist().map(|w| (3, w)))
        .or_else(|| vacuum().map(|w| (4, w)));
    let names = ["unitary", "S² permutation", "(ST)³ = S²", "T diagonal", "vacuum row positive"];
    let note = failure.as_ref().map(|(k, _)| names[*k]);
    let check = Check::from_sweep("modular", 5, failure.map(|(k, (i, j, r))| (vec![k, i, j], r)));
    Ok(match note {
        Some(n) => check.with_note(n),
        None => check,
    })
}

fn diag(v: &[Mono]) -> Vec<Vec<Mono>> {
    let n = v.len();
    (0..n).map(|i| (0..n).map(|j| if i == j { v[i] } else { Mono::zero(v[i].m()) }).collect()).collect()
}

/// All 2+1D checks in verification order.
pub fn checks_2d(model: &Model) -> Result<Vec<Check>> {
    let md = ModularData2D::new(model)?;
    let m = md.order;
    let mut out = vec![verify_modular(&md)?];
    let verlinde = match (verlinde_fusion(&md.s), md.conjugation()) {
        (Ok(fusion), Ok(conj)) => {
            // admissibility of the cut: a particle pair on S² spans one state
            let scenario = verlinde_scenario(&md, &conj, &fusion, gsd("S2", model)?, 0, 0, 0);
            match verify_gluing_identity(&scenario) {
                Ok(_) => verify_verlinde(&md.s, &conj, &fusion),
                Err(e) => Check::from_sweep("verlinde", 0, Some((vec![], CycNum::one()))).with_note(e.to_string()),
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            Check::from_sweep("verlinde", 0, Some((vec![], CycNum::one()))).with_note(e.to_string())
        }
    };
    out.push(verlinde);
    let ident = diag(&vec![Mono::one(m); md.len()]);
    let s = MCGRep::new("S", SparseMat::from_dense(&md.s), SparseMat::from_dense(&md.s_inverse()), m)?;
    out.push(verify_regluing(&s, &ident, &md.s, m));
    let t_inv: Vec<Mono> = md.t.iter().map(|x| x.conj()).collect();
    let t = MCGRep::new("T", SparseMat::from_dense(&diag(&md.t)), SparseMat::from_dense(&diag(&t_inv)), m)?;
    out.push(verify_regluing(&t, &ident, &diag(&md.t), m));
    Ok(out)
}

/// Z(S³×S¹) = (S^{xyz})_{00} · Z(S²×T²), both sides from the state sum.
pub fn verify_normalization_3d(model: &Model, d: &Data3p1D) -> Result<Check> {
    let z31 = partition_function(&builtin("S3xS1")?, model)?;
    let z22 = partition_function(&builtin("S2xT2")?, model)?;
    let s00 = d.s_xyz.get(0, 0).to_cyc();
    let r = &s00 * &z22 - z31.clone();
    let fail =
        if !z31.is_one() { Some((vec![], z31 - CycNum::one())) } else { (!r.is_zero()).then(|| (vec![0, 0], r)) };
    Ok(Check::from_sweep("normalization", 2, fail))
}

/// (S^{xyz})³ = 1 as S·S = S⁻¹, witness the first differing entry.
pub fn verify_s_cube(d: &Data3p1D) -> Result<Check> {
    let s2 = d.s_xyz.mul(&d.s_xyz, d.order)?;
    let failure = s2
        .first_difference(&d.s_xyz_inv)
        .map(|(i, j)| (vec![i, j], s2.get(i, j).to_cyc() - d.s_xyz_inv.get(i, j).to_cyc()));
    Ok(Check::from_sweep("sxyz-cube", (d.len() * d.len()) as u64, failure))
}

/// All 3+1D checks in verification order.
pub fn checks_3d(model: &Model) -> Result<Vec<Check>> {
    let d = Data3p1D::new(model)?;
    let m = d.order;
    let mut out = vec![
        verify_fusion_consistency(&d),
        verify_particle_string(&d),
        verify_string_particle(&d),
        verify_three_loop(&d),
    ];
    let s = MCGRep::new("Sxyz", d.s_xyz.clone(), d.s_xyz_inv.clone(), m)?;
    let ell: Vec<Acc> = d.ltri_base.iter().map(acc_of).collect();
    let glued = d.s_xyz.apply_row(&ell, m).iter().map(|a| a.to_mono()).collect::<Result<Vec<_>>>()?;
    out.push(verify_regluing(&s, std::slice::from_ref(&d.ltri_base), &[glued], m));
    out.push(verify_s_cube(&d)?);
    out.push(verify_normalization_3d(model, &d)?);
    Ok(out)
}

/// Runs every check for the model, or the one named by `only`.
pub fn verify_model(model: &Model, only: Option<&str>) -> Result<SurgeryReport> {
    let mut checks = vec![verify_cocycle(model)?];
    if checks[0].passed {
        let rest = match model.dimension() {
            3 => checks_2d(model)?,
            4 => checks_3d(model)?,
            d => return Err(Error::Degree(format!("no checks for cocycle degree {d}"))),
        };
        checks.extend(rest);
    } else {
        checks[0].note = Some("the remaining checks need a valid cocycle".into());
    }
    if let Some(name) = only {
        checks.retain(|c| c.name == name);
        if checks.is_empty() {
            return Err(Error::UnknownName(name.to_string()));
        }
    }
    Ok(SurgeryReport { model: model.name().to_string(), spec_hash: model.spec.hash(), checks })
}
