//! Modular data of a twisted abelian 2+1D model: anyon labels, S, T,
//! Verlinde fusion and the Borromean table obtained from T³.

use num_traits::Signed;
use rayon::prelude::*;

use crate::complexes::builtin;
use crate::error::{Error, Result};
use crate::groupcohomology::{slant, CocycleTable, GroupData};
use crate::model::Model;
use crate::mono::{as_count, is_positive_rational, Acc, Mono, Q};
use crate::statesum::{partition_with_charge_lines, torus_axis_edges, ChargeLine};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnyonLabel {
    pub flux: usize,
    /// Index of the group character whose restriction to the regular subgroup
    /// twists the base projective character.
    pub char_index: usize,
    pub dim: u64,
    /// Exponents mod `order` of the projective character on the regular
    /// subgroup, `None` elsewhere.
    pub charge: Vec<Option<u64>>,
    pub order: u64,
}

impl AnyonLabel {
    pub fn value(&self, b: usize) -> Option<Mono> {
        self.charge[b].map(|k| Mono::root(k, self.order))
    }

    /// Trace of the projective irrep: dim·χ on the regular subgroup, 0 elsewhere.
    pub fn trace(&self, b: usize) -> Mono {
        match self.charge[b] {
            Some(k) => Mono::new(Q::from(self.dim as i64), k, self.order),
            None => Mono::zero(self.order),
        }
    }

    pub fn name(&self, g: &GroupData) -> String {
        format!("{}:{}", g.fmt_elem(self.flux), g.fmt_elem(self.char_index))
    }
}

#[derive(Clone, Debug)]
pub struct ModularData2D {
    pub group: GroupData,
    pub labels: Vec<AnyonLabel>,
    pub s: Vec<Vec<Mono>>,
    pub t: Vec<Mono>,
    pub order: u64,
}

/// The ε-regular subgroup {b : ε(b,c) = ε(c,b) for all c}.
pub fn regular_subgroup(eps: &CocycleTable) -> Vec<bool> {
    let n = eps.group().size();
    (0..n).map(|b| (0..n).all(|c| eps.exp(&[b, c]) == eps.exp(&[c, b]))).collect()
}

fn order_of(g: &GroupData, a: usize) -> u64 {
    let mut x = a;
    let mut n = 1;
    while x != 0 {
        x = g.add(x, a);
        n += 1;
    }
    n
}

fn span_with(g: &GroupData, span: &[usize], z: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = 0usize;
    loop {
        for &s in span {
            out.push(g.add(s, m));
        }
        m = g.add(m, z);
        if m == 0 {
            break;
        }
    }
    out
}

/// Generators z_1..z_r with Z = ⟨z_1⟩ ⊕ … ⊕ ⟨z_r⟩.
pub fn cyclic_decomposition(g: &GroupData, members: &[bool]) -> Result<Vec<usize>> {
    let mut elems: Vec<usize> = (0..g.size()).filter(|&x| members[x] && x != 0).collect();
    elems.sort_by_key(|&x| std::cmp::Reverse(order_of(g, x)));
    let target = members.iter().filter(|&&b| b).count();
    fn search(g: &GroupData, elems: &[usize], span: Vec<usize>, gens: &mut Vec<usize>, target: usize) -> bool {
        if span.len() == target {
            return true;
        }
        for &z in elems {
            let o = order_of(g, z) as usize;
            let next = span_with(g, &span, z);
            let mut uniq = next.clone();
            uniq.sort_unstable();
            uniq.dedup();
            if uniq.len() != span.len() * o || uniq.len() > target {
                continue;
            }
            gens.push(z);
            if search(g, elems, uniq, gens, target) {
                return true;
            }
            gens.pop();
        }
        false
    }
    let mut gens = Vec::new();
    if search(g, &elems, vec![0], &mut gens, target) {
        Ok(gens)
    } else {
        Err(Error::Inconsistent("regular set is not a subgroup".into()))
    }
}

/// A projective character λ of the regular subgroup with
/// λ(x)λ(y) = ε(x,y)λ(x+y), as exponents mod L·e.
pub fn projective_base(eps: &CocycleTable, members: &[bool]) -> Result<(Vec<Option<u64>>, u64)> {
    let g = eps.group();
    let l = eps.order();
    let m = l * g.exponent();
    let up = m / l;
    let e = |x: usize, y: usize| eps.exp(&[x, y]) * up;
    let gens = cyclic_decomposition(g, members)?;
    let mut lam: Vec<Option<u64>> = vec![None; g.size()];
    lam[0] = Some(0);
    let mut span = vec![0usize];
    for &z in &gens {
        let n = order_of(g, z);
        // λ(z)^n = Π_{j=1}^{n-1} ε(jz, z)
        let mut p = 0u64;
        let mut jz = z;
        for _ in 1..n {
            p += e(jz, z);
            jz = g.add(jz, z);
        }
        let p = p % m;
        if !p.is_multiple_of(n) {
            return Err(Error::Inconsistent(format!("no root for generator {}", g.fmt_elem(z))));
        }
        let lz = p / n;
        // multiples of z
        let mut mult = vec![(0usize, 0u64)];
        let (mut cur, mut lc) = (z, lz);
        for _ in 1..n {
            mult.push((cur, lc));
            lc = (lc + lz + m - e(cur, z)) % m;
            cur = g.add(cur, z);
        }
        let mut next = Vec::new();
        for &s in &span {
            let ls = lam[s].unwrap();
            for &(y, ly) in &mult {
                let x = g.add(s, y);
                if y == 0 {
                    next.push(s);
                    continue;
                }
                lam[x] = Some((ls + ly + m - e(s, y)) % m);
                next.push(x);
            }
        }
        span = next;
    }
    for x in 0..g.size() {
        for y in 0..g.size() {
            if let (Some(a), Some(b)) = (lam[x], lam[y]) {
                let s = lam[g.add(x, y)].ok_or_else(|| Error::Inconsistent("regular set not closed".into()))?;
                if (a + b) % m != (e(x, y) + s) % m {
                    return Err(Error::Inconsistent(format!(
                        "projective character fails at ({}, {})",
                        g.fmt_elem(x),
                        g.fmt_elem(y)
                    )));
                }
            }
        }
    }
    Ok((lam, m))
}

/// Linear characters of a subgroup, as (index of the first group character
/// with that restriction, exponents mod e on the subgroup).
pub fn subgroup_characters(g: &GroupData, members: &[bool]) -> Vec<(usize, Vec<Option<u64>>)> {
    let mut out: Vec<(usize, Vec<Option<u64>>)> = Vec::new();
    for k in 0..g.size() {
        let tab: Vec<Option<u64>> = (0..g.size()).map(|b| members[b].then(|| g.char_exp(k, b))).collect();
        if !out.iter().any(|(_, t)| *t == tab) {
            out.push((k, tab));
        }
    }
    out
}

fn isqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r * r == n).then_some(r)
}

/// Anyon labels of the twisted double, vacuum first, then by (flux, character).
pub fn anyons(model: &Model) -> Result<Vec<AnyonLabel>> {
    if model.dimension() != 3 {
        return Err(Error::Degree("anyons need a 3-cocycle model".into()));
    }
    let g = &model.group;
    let e = g.exponent();
    let m = model.cocycle.order() * e;
    let mut labels = Vec::new();
    for a in 0..g.size() {
        let eps = slant(&model.cocycle, a)?;
        let z = regular_subgroup(&eps);
        let zs = z.iter().filter(|&&b| b).count() as u64;
        if !z[a] {
            return Err(Error::Inconsistent(format!("flux {} is not regular for its own slant", g.fmt_elem(a))));
        }
        let dim = isqrt(g.size() as u64 / zs)
            .filter(|_| (g.size() as u64).is_multiple_of(zs))
            .ok_or_else(|| Error::Inconsistent(format!("non-integer dimension for flux {}", g.fmt_elem(a))))?;
        let (lam, ml) = projective_base(&eps, &z)?;
        let (up_l, up_c) = (m / ml, m / e);
        for (k, psi) in subgroup_characters(g, &z) {
            let charge = (0..g.size())
                .map(|b| match (lam[b], psi[b]) {
                    (Some(x), Some(y)) => Some((x * up_l + y * up_c) % m),
                    _ => None,
                })
                .collect();
            labels.push(AnyonLabel { flux: a, char_index: k, dim, charge, order: m });
        }
    }
    Ok(labels)
}

impl ModularData2D {
    pub fn new(model: &Model) -> Result<Self> {
        let labels = anyons(model)?;
        let g = model.group.clone();
        let n = labels.len();
        let order = labels[0].order;
        let inv_g = Q::new(1, g.size() as i64);
        let s: Vec<Vec<Mono>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let (x, y) = (&labels[i], &labels[j]);
                        x.trace(y.flux).conj().mul(&y.trace(x.flux).conj()).scale(inv_g)
                    })
                    .collect()
            })
            .collect();
        let t = labels.iter().map(|x| x.value(x.flux).expect("flux is regular")).collect();
        Ok(ModularData2D { group: g, labels, s, t, order })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn s_inverse(&self) -> Vec<Vec<Mono>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.s[j][i].conj()).collect()).collect()
    }

    pub fn t_matrix(&self) -> Vec<Vec<Mono>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| if i == j { self.t[i] } else { Mono::zero(self.order) }).collect()).collect()
    }

    /// Index of the conjugate label, read off S².
    /// The charge conjugation σ ↦ σ̄ read from S².
    pub fn conjugation(&self) -> Result<Vec<usize>> {
        let s2 = mat_mul(&self.s, &self.s)?;
        (0..self.len())
            .map(|i| {
                let hits: Vec<usize> = (0..self.len()).filter(|&j| !s2[i][j].is_zero()).collect();
                match hits.as_slice() {
                    [j] if s2[i][*j].same(&Mono::one(self.order)) => Ok(*j),
                    _ => Err(Error::Inconsistent(format!("S² row {i} is not a permutation row"))),
                }
            })
            .collect()
    }

    pub fn conjugate(&self, i: usize) -> Result<usize> {
        let s2 = mat_mul(&self.s, &self.s)?;
        let hits: Vec<usize> = (0..self.len()).filter(|&j| !s2[i][j].is_zero()).collect();
        match hits.as_slice() {
            [j] if s2[i][*j].same(&Mono::one(self.order)) => Ok(*j),
            _ => Err(Error::Inconsistent(format!("S² row {i} is not a permutation row"))),
        }
    }

    pub fn trace_s(&self) -> Acc {
        let mut a = Acc::new(self.order);
        for i in 0..self.len() {
            a.add(&self.s[i][i]);
        }
        a
    }

    pub fn trace_t(&self) -> Acc {
        let mut a = Acc::new(self.order);
        for x in &self.t {
            a.add(x);
        }
        a
    }
}

/// Exact product of monomial matrices; entries must stay monomial.
pub fn mat_mul(a: &[Vec<Mono>], b: &[Vec<Mono>]) -> Result<Vec<Vec<Mono>>> {
    let n = a.len();
    let k = b.len();
    let w = b.first().map_or(0, |r| r.len());
    let m = a.first().and_then(|r| r.first()).map_or(1, |x| x.m());
    (0..n)
        .into_par_iter()
        .map(|i| {
            (0..w)
                .map(|j| {
                    let mut acc = Acc::new(m);
                    for l in 0..k {
                        if !a[i][l].is_zero() && !b[l][j].is_zero() {
                            acc.add(&a[i][l].mul(&b[l][j]));
                        }
                    }
                    acc.to_mono()
                })
                .collect()
        })
        .collect()
}

pub fn identity(n: usize, m: u64) -> Vec<Vec<Mono>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Mono::one(m) } else { Mono::zero(m) }).collect()).collect()
}

pub fn mat_eq(a: &[Vec<Mono>], b: &[Vec<Mono>]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(r, s)| r.len() == s.len() && r.iter().zip(s).all(|(x, y)| x.same(y)))
}

#[derive(Clone, Debug, Default)]
pub struct ModularChecks {
    pub unitary: bool,
    pub s_squared_permutation: bool,
    pub st_cubed: bool,
    pub t_diagonal_unit: bool,
    pub vacuum_row_positive: bool,
}

impl ModularChecks {
    pub fn all(&self) -> bool {
        self.unitary && self.s_squared_permutation && self.st_cubed && self.t_diagonal_unit && self.vacuum_row_positive
    }
}

pub fn modular_checks(md: &ModularData2D) -> Result<ModularChecks> {
    let n = md.len();
    let m = md.order;
    let id = identity(n, m);
    let unitary = mat_eq(&mat_mul(&md.s, &md.s_inverse())?, &id);
    let s2 = mat_mul(&md.s, &md.s)?;
    let s_squared_permutation = (0..n).all(|i| {
        let nz: Vec<&Mono> = s2[i].iter().filter(|x| !x.is_zero()).collect();
        nz.len() == 1 && nz[0].same(&Mono::one(m))
    }) && (0..n).all(|j| s2.iter().filter(|r| !r[j].is_zero()).count() == 1);
    let st = mat_mul(&md.s, &md.t_matrix())?;
    let st3 = mat_mul(&mat_mul(&st, &st)?, &st)?;
    let st_cubed = mat_eq(&st3, &s2);
    let t_diagonal_unit = md.t[0].same(&Mono::one(m)) && md.t.iter().all(|x| x.q().abs() == Q::from(1));
    let vacuum_row_positive = md.s[0].iter().all(is_positive_rational);
    Ok(ModularChecks { unitary, s_squared_permutation, st_cubed, t_diagonal_unit, vacuum_row_positive })
}

/// N[a][b][c] = N^a_{bc}.
pub type Fusion = Vec<Vec<Vec<u64>>>;

/// N^a_{bc} = Σ_σ S_{σb} S_{σc} (S⁻¹)_{σa} / S_{σ0}, with S⁻¹ = S†.
pub fn verlinde_fusion(s: &[Vec<Mono>]) -> Result<Fusion> {
    let n = s.len();
    let m = s[0][0].m();
    for (x, row) in s.iter().enumerate() {
        if row[0].is_zero() {
            return Err(Error::Inconsistent(format!("S[{x},0] = 0")));
        }
    }
    let inv0: Vec<Mono> = (0..n).map(|x| s[x][0].inv()).collect::<Result<_>>()?;
    (0..n)
        .into_par_iter()
        .map(|a| {
            let mut out = vec![vec![0u64; n]; n];
            for b in 0..n {
                for c in b..n {
                    let mut acc = Acc::new(m);
                    for x in 0..n {
                        let sinv = s[a][x].conj();
                        if s[x][b].is_zero() || s[x][c].is_zero() || sinv.is_zero() {
                            continue;
                        }
                        acc.add(&s[x][b].mul(&s[x][c]).mul(&sinv).mul(&inv0[x]));
                    }
                    let v = acc.to_mono()?;
                    let k = as_count(&v).ok_or_else(|| {
                        Error::Inconsistent(format!(
                            "fusion coefficient N^{a}_{{{b},{c}}} = {v} is not a nonnegative integer"
                        ))
                    })?;
                    out[b][c] = k;
                    out[c][b] = k;
                }
            }
            Ok(out)
        })
        .collect()
}

/// Z[T³; σ₁,σ₂,σ₃] with σᵢ on the three axes. Lines with nonzero flux give 0
/// for abelian groups (the meridian of each line is a commutator); pure charges
/// come from the state sum.
pub fn t3_table(md: &ModularData2D, model: &Model) -> Result<Vec<Mono>> {
    let n = md.len();
    let t3 = builtin("T3")?;
    let axes = torus_axis_edges(&t3);
    let pure: Vec<usize> = (0..n).filter(|&i| md.labels[i].flux == 0).collect();
    let mut table = vec![Mono::zero(md.order); n * n * n];
    let mut jobs = Vec::new();
    for &i in &pure {
        for &j in &pure {
            for &k in &pure {
                jobs.push((i, j, k));
            }
        }
    }
    let vals: Vec<((usize, usize, usize), Mono)> = jobs
        .into_par_iter()
        .map(|(i, j, k)| {
            let lines: Vec<ChargeLine> = [(i, 0), (j, 1), (k, 2)]
                .iter()
                .map(|&(l, ax)| ChargeLine { path: vec![(axes[ax], 1)], charge: md.labels[l].char_index })
                .collect();
            let z = partition_with_charge_lines(&t3, model, &lines)?;
            Ok(((i, j, k), cyc_to_mono(&z, md.order)?))
        })
        .collect::<Result<_>>()?;
    for ((i, j, k), v) in vals {
        table[(i * n + j) * n + k] = v;
    }
    Ok(table)
}

pub fn cyc_to_mono(z: &crate::exactnum::CycNum, m: u64) -> Result<Mono> {
    use crate::exactnum::CycNum;
    if z.is_zero() {
        return Ok(Mono::zero(m));
    }
    let l = crate::exactnum::lcm(m, z.order());
    for k in 0..l {
        let r = z * &CycNum::root_of_unity(-(k as i64), l);
        if let Some(q) = r.as_rational() {
            let n: i64 = q.numer().try_into().map_err(|_| Error::Inconsistent("overflow".into()))?;
            let d: i64 = q.denom().try_into().map_err(|_| Error::Inconsistent("overflow".into()))?;
            return Ok(Mono::new(Q::new(n, d), k, l));
        }
    }
    Err(Error::Inconsistent(format!("{z} is not a monomial")))
}

/// Applies S⁻¹ on each index of a table over label triples.
pub fn borromean_from_t3(md: &ModularData2D, z_t3: &[Mono]) -> Result<Vec<Acc>> {
    let n = md.len();
    if z_t3.len() != n * n * n {
        return Err(Error::IndexOutOfRange(format!("expected {} entries, got {}", n * n * n, z_t3.len())));
    }
    let sinv = md.s_inverse();
    let m = md.order;
    let apply = |tab: &[Acc], axis: usize| -> Vec<Acc> {
        let mut out = vec![Acc::new(m); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let idx = [i, j, k];
                    let mut acc = Acc::new(m);
                    for t in 0..n {
                        let mut src = idx;
                        src[axis] = t;
                        let v = &tab[(src[0] * n + src[1]) * n + src[2]];
                        if v.term_count() == 0 || sinv[idx[axis]][t].is_zero() {
                            continue;
                        }
                        let mut scaled = Acc::new(m);
                        scaled.add_acc(v);
                        acc.add_acc(&scale_acc(&scaled, &sinv[idx[axis]][t]));
                    }
                    out[(i * n + j) * n + k] = acc;
                }
            }
        }
        out
    };
    let mut tab: Vec<Acc> = z_t3
        .iter()
        .map(|x| {
            let mut a = Acc::new(m);
            a.add(x);
            a
        })
        .collect();
    for axis in 0..3 {
        tab = apply(&tab, axis);
    }
    Ok(tab)
}

pub fn scale_acc(a: &Acc, x: &Mono) -> Acc {
    let mut out = Acc::new(a.order());
    for t in a.monomials() {
        out.add(&t.mul(x));
    }
    out
}
