//! Dijkgraaf–Witten state sums on triangulated closed 3- and 4-manifolds.
//!
//! Flat colorings are found by backtracking over gauge-fixed edge colorings
//! (a spanning forest carries the identity) with triangle propagation.
//! Weights are accumulated as exponent histograms of ζ_L and converted to an
//! exact number once at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::caps::Caps;
use crate::complexes::{builtin, mapping_torus, mcg_matrix, product, DeltaComplex};
use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::groupcohomology::GroupData;
use crate::model::Model;

/// A closed edge path carrying a character of G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeLine {
    /// (edge id, +1 along the edge orientation or −1 against it)
    pub path: Vec<(u32, i8)>,
    /// character index: χ_k(g) = exp(2πi Σ k_i g_i / N_i)
    pub charge: usize,
}

struct Search<'a> {
    g: &'a GroupData,
    tree: Vec<bool>,
    order: Vec<usize>,
    /// triangles incident to each edge
    incident: Vec<Vec<usize>>,
    tris: Vec<[u32; 3]>,
    components: usize,
}

pub fn edge_ends(c: &DeltaComplex) -> Vec<(u32, u32)> {
    let mut ends = vec![None; c.edge_count()];
    for s in 0..c.simplex_count() {
        for i in 0..=c.dim() {
            for j in i + 1..=c.dim() {
                let e = c.edge(s, i, j) as usize;
                if ends[e].is_none() {
                    ends[e] = Some((c.face(s, 1 << i), c.face(s, 1 << j)));
                }
            }
        }
    }
    ends.into_iter().map(|e| e.unwrap()).collect()
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

impl<'a> Search<'a> {
    fn new(c: &'a DeltaComplex, g: &'a GroupData) -> Self {
        let ends = edge_ends(c);
        let nv = c.vertex_count();
        let mut parent: Vec<usize> = (0..nv).collect();
        let mut tree = vec![false; ends.len()];
        for (e, &(a, b)) in ends.iter().enumerate() {
            let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
                tree[e] = true;
            }
        }
        let components = (0..nv).filter(|&v| find(&mut parent, v) == v).count();
        let tris = c.triangles();
        let mut incident = vec![Vec::new(); ends.len()];
        for (t, tri) in tris.iter().enumerate() {
            for &e in tri {
                if !incident[e as usize].contains(&t) {
                    incident[e as usize].push(t);
                }
            }
        }
        let mut order: Vec<usize> = (0..ends.len()).filter(|&e| !tree[e]).collect();
        order.sort_by_key(|&e| (std::cmp::Reverse(incident[e].len()), e));
        Search { g, tree, order, incident, tris, components }
    }

    /// Assign `e := val` and propagate; returns false on conflict. Every
    /// assignment made is pushed on `trail`.
    fn assign(&self, col: &mut [Option<usize>], trail: &mut Vec<usize>, e: usize, val: usize) -> bool {
        let mut queue = vec![(e, val)];
        while let Some((e, v)) = queue.pop() {
            match col[e] {
                Some(x) if x != v => return false,
                Some(_) => continue,
                None => {
                    col[e] = Some(v);
                    trail.push(e);
                }
            }
            for &t in &self.incident[e] {
                let [a, b, ab] = self.tris[t].map(|x| x as usize);
                match (col[a], col[b], col[ab]) {
                    (Some(x), Some(y), Some(z)) => {
                        if self.g.add(x, y) != z {
                            return false;
                        }
                    }
                    (Some(x), Some(y), None) => queue.push((ab, self.g.add(x, y))),
                    (Some(x), None, Some(z)) => queue.push((b, self.g.sub(z, x))),
                    (None, Some(y), Some(z)) => queue.push((a, self.g.sub(z, y))),
                    _ => {}
                }
            }
        }
        true
    }

    fn initial(&self) -> Option<Vec<Option<usize>>> {
        let mut col = vec![None; self.tree.len()];
        let mut trail = Vec::new();
        for e in 0..self.tree.len() {
            if self.tree[e] && !self.assign(&mut col, &mut trail, e, 0) {
                return None;
            }
        }
        Some(col)
    }

    fn dfs(&self, col: &mut Vec<Option<usize>>, depth: usize, visit: &mut dyn FnMut(&[Option<usize>])) {
        let Some(pos) = (depth..self.order.len()).find(|&k| col[self.order[k]].is_none()) else {
            visit(col);
            return;
        };
        let e = self.order[pos];
        let mut trail = Vec::new();
        for v in 0..self.g.size() {
            if self.assign(col, &mut trail, e, v) {
                self.dfs(col, pos + 1, visit);
            }
            for &u in &trail {
                col[u] = None;
            }
            trail.clear();
        }
    }

    /// Run the search, splitting on the first free edge across threads, and
    /// fold each gauge-fixed flat coloring into an accumulator.
    fn fold<T: Send>(
        &self,
        init: impl Fn() -> T + Sync,
        step: impl Fn(&mut T, &[usize]) + Sync,
        merge: impl Fn(T, T) -> T + Sync + Send,
    ) -> T {
        let Some(start) = self.initial() else {
            return init();
        };
        let first = self.order.iter().position(|&e| start[e].is_none());
        let run = |col: &mut Vec<Option<usize>>, depth: usize, acc: &mut T| {
            let mut buf = vec![0usize; col.len()];
            self.dfs(col, depth, &mut |c| {
                for (b, x) in buf.iter_mut().zip(c) {
                    *b = x.unwrap();
                }
                step(acc, &buf);
            });
        };
        match first {
            None => {
                let mut acc = init();
                let mut col = start;
                run(&mut col, self.order.len(), &mut acc);
                acc
            }
            Some(pos) => {
                let e = self.order[pos];
                (0..self.g.size())
                    .into_par_iter()
                    .map(|v| {
                        let mut acc = init();
                        let mut col = start.clone();
                        let mut trail = Vec::new();
                        if self.assign(&mut col, &mut trail, e, v) {
                            run(&mut col, pos + 1, &mut acc);
                        }
                        acc
                    })
                    .collect::<Vec<T>>()
                    .into_iter()
                    .reduce(&merge)
                    .unwrap_or_else(&init)
            }
        }
    }
}

fn check_edge_cap(c: &DeltaComplex, caps: Caps) -> Result<()> {
    let cap = caps.enumeration.min(1 << 16);
    if c.edge_count() as u128 > cap {
        return Err(Error::CapExceeded { what: "edges".into(), needed: c.edge_count() as u128, cap });
    }
    Ok(())
}

/// All flat colorings, gauge copies included, as edge → element index vectors.
pub fn flat_colorings(c: &DeltaComplex, g: &GroupData) -> Result<Vec<Vec<usize>>> {
    flat_colorings_with_caps(c, g, Caps::current())
}

pub fn flat_colorings_with_caps(c: &DeltaComplex, g: &GroupData, caps: Caps) -> Result<Vec<Vec<usize>>> {
    check_edge_cap(c, caps)?;
    let s = Search::new(c, g);
    let fixed: Vec<Vec<usize>> = s.fold(
        Vec::new,
        |acc, col| acc.push(col.to_vec()),
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    let ends = edge_ends(c);
    let nv = c.vertex_count();
    // vertex potentials, one root per component held at 0
    let mut parent: Vec<usize> = (0..nv).collect();
    for &(a, b) in &ends {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let free: Vec<usize> = (0..nv).filter(|&v| find(&mut parent, v) != v).collect();
    let copies = (g.size() as u128).pow(free.len() as u32);
    let total = copies * fixed.len() as u128;
    if total > caps.enumeration {
        return Err(Error::CapExceeded { what: "flat colorings".into(), needed: total, cap: caps.enumeration });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut h = vec![0usize; nv];
    for col in &fixed {
        for idx in 0..copies {
            let mut r = idx;
            for &v in &free {
                h[v] = (r % g.size() as u128) as usize;
                r /= g.size() as u128;
            }
            out.push(ends.iter().zip(col).map(|(&(a, b), &x)| g.add(g.sub(x, h[a as usize]), h[b as usize])).collect());
        }
    }
    out.sort();
    Ok(out)
}

fn closed_path(ends: &[(u32, u32)], path: &[(u32, i8)]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::OpenPath("empty path".into()));
    }
    let step = |&(e, s): &(u32, i8)| -> Result<(u32, u32)> {
        let &(a, b) = ends.get(e as usize).ok_or_else(|| Error::OpenPath(format!("no edge {e}")))?;
        Ok(if s > 0 { (a, b) } else { (b, a) })
    };
    let mut cur = step(&path[0])?;
    let start = cur.0;
    for p in &path[1..] {
        let nxt = step(p)?;
        if nxt.0 != cur.1 {
            return Err(Error::OpenPath(format!("edge {} does not start where the previous edge ends", p.0)));
        }
        cur = nxt;
    }
    if cur.1 != start {
        return Err(Error::OpenPath("path does not return to its start".into()));
    }
    Ok(())
}

fn weigh(c: &DeltaComplex, model: &Model, lines: &[ChargeLine], caps: Caps) -> Result<CycNum> {
    let d = c.dim();
    if model.dimension() != d {
        return Err(Error::Degree(format!(
            "cocycle degree {} does not match complex dimension {d}",
            model.dimension()
        )));
    }
    check_edge_cap(c, caps)?;
    let ends = edge_ends(c);
    for l in lines {
        closed_path(&ends, &l.path)?;
        if l.charge >= model.group.size() {
            return Err(Error::IndexOutOfRange(format!("charge {}", l.charge)));
        }
    }
    let g = &model.group;
    let w = &model.cocycle;
    let ge = g.exponent();
    let l = w.order().lcm(&ge);
    let (sw, sc) = (l / w.order(), l / ge);
    let simplices: Vec<(Vec<usize>, i64)> = (0..c.simplex_count())
        .map(|s| ((0..d).map(|i| c.edge(s, i, i + 1) as usize).collect(), c.sign(s) as i64))
        .collect();
    let search = Search::new(c, g);
    let n = w.group().size();
    let hist = search.fold(
        || vec![0u64; l as usize],
        |acc, col| {
            let mut e: i64 = 0;
            for (edges, sign) in &simplices {
                let off = edges.iter().fold(0usize, |a, &x| a * n + col[x]);
                e += sign * w.exps()[off] as i64 * sw as i64;
            }
            for line in lines {
                let hol = line.path.iter().fold(0usize, |h, &(x, s)| {
                    if s > 0 {
                        g.add(h, col[x as usize])
                    } else {
                        g.sub(h, col[x as usize])
                    }
                });
                e += (g.char_exp(line.charge, hol) * sc) as i64;
            }
            acc[e.rem_euclid(l as i64) as usize] += 1;
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    let counts: Vec<BigInt> = hist.into_iter().map(BigInt::from).collect();
    let sum = CycNum::from_exponents(l, &counts);
    let norm = BigRational::new(BigInt::one(), BigInt::from(g.size()).pow(search.components as u32));
    Ok(sum.scale(&norm))
}

/// Z = |G|^{−V} Σ_flat ∏ ω^{±}.
pub fn partition_function(c: &DeltaComplex, model: &Model) -> Result<CycNum> {
    weigh(c, model, &[], Caps::current())
}

pub fn partition_with_charge_lines(c: &DeltaComplex, model: &Model, lines: &[ChargeLine]) -> Result<CycNum> {
    if c.dim() != 3 {
        return Err(Error::Degree("charge lines need a 3-complex".into()));
    }
    weigh(c, model, lines, Caps::current())
}

/// GSD on a spatial manifold Y: Z(Y × S¹), required to be a nonnegative integer.
pub fn gsd(spatial: &str, model: &Model) -> Result<u64> {
    let y = builtin(spatial)?;
    let c = product(&y, &builtin("S1")?)?;
    let z = partition_function(&c, model)?;
    match z.as_integer() {
        Some(n) if !n.is_negative() => Ok(n.try_into().map_err(|_| Error::Inconsistent("GSD overflow".into()))?),
        _ => Err(Error::Inconsistent(format!("Z({spatial}xS1) = {z} is not a nonnegative integer"))),
    }
}

/// Z of the mapping torus of a named generator on T^d.
pub fn mcg_trace(generator: &str, d: usize, model: &Model) -> Result<CycNum> {
    let base = builtin(&format!("T{d}"))?;
    let c = mapping_torus(&base, &mcg_matrix(generator, d)?)?;
    partition_function(&c, model)
}

/// Axis edges of a one-vertex Freudenthal torus: the edge from vertex k to k+1
/// of the identity-ordered simplex 0 runs along axis k.
pub fn torus_axis_edges(c: &DeltaComplex) -> Vec<u32> {
    (0..c.dim()).map(|k| c.edge(0, k, k + 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: &str) -> Model {
        Model::builtin(n).unwrap()
    }

    #[test]
    fn sphere_and_torus_counts() {
        let z2 = GroupData::new(&[2]).unwrap();
        assert_eq!(flat_colorings(&builtin("S3").unwrap(), &z2).unwrap().len(), 16);
        assert_eq!(flat_colorings(&builtin("T3").unwrap(), &z2).unwrap().len(), 8);
        let triv = GroupData::trivial();
        assert_eq!(flat_colorings(&builtin("T3").unwrap(), &triv).unwrap().len(), 1);
        assert_eq!(partition_function(&builtin("S3").unwrap(), &m("toric")).unwrap(), CycNum::frac(1, 2));
        assert_eq!(partition_function(&builtin("T3").unwrap(), &m("toric")).unwrap(), CycNum::from_int(4));
    }

    #[test]
    fn gsd_values() {
        assert_eq!(gsd("S2", &m("toric")).unwrap(), 1);
        assert_eq!(gsd("T2", &m("toric")).unwrap(), 4);
        assert_eq!(gsd("T3", &m("z2_3d")).unwrap(), 8);
    }

    #[test]
    fn charge_line_on_t3() {
        let t3 = builtin("T3").unwrap();
        let ax = torus_axis_edges(&t3);
        let line = ChargeLine { path: vec![(ax[0], 1)], charge: 1 };
        let z = partition_with_charge_lines(&t3, &m("toric"), &[line]).unwrap();
        assert!(z.is_zero());
        let s3 = builtin("S3").unwrap();
        let open = ChargeLine { path: vec![(0, 1)], charge: 1 };
        assert!(matches!(partition_with_charge_lines(&s3, &m("toric"), &[open]), Err(Error::OpenPath(_))));
    }

    #[test]
    fn degree_mismatch() {
        assert!(matches!(partition_function(&builtin("T4").unwrap(), &m("toric")), Err(Error::Degree(_))));
    }
}
