//! Ordered triangulations (Δ-complexes with a branching structure) of closed
//! oriented 3- and 4-manifolds.
//!
//! Every top simplex stores, for each nonempty subset of its vertices given as
//! a bitmask, the id of the face class that subset spans. Face identifications
//! always preserve vertex order, so edges carry the low→high orientation.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    name: String,
    dim: usize,
    faces: Vec<Vec<u32>>,
    signs: Vec<i8>,
    counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub euler: i64,
    pub f_vector: Vec<usize>,
    pub problems: Vec<String>,
}

fn popcount(m: usize) -> usize {
    m.count_ones() as usize
}

fn bits(m: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&i| m >> i & 1 == 1).collect()
}

/// Renumber class ids per dimension by first appearance, scanning simplices
/// then masks in increasing order.
fn canonicalize(dim: usize, raw: &[Vec<usize>]) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut maps: Vec<HashMap<usize, u32>> = vec![HashMap::new(); dim + 1];
    let mut out = Vec::with_capacity(raw.len());
    for row in raw {
        let mut f = vec![u32::MAX; row.len()];
        for (mask, &id) in row.iter().enumerate().skip(1) {
            let k = popcount(mask) - 1;
            let next = maps[k].len() as u32;
            f[mask] = *maps[k].entry(id).or_insert(next);
        }
        out.push(f);
    }
    (out, maps.iter().map(|m| m.len()).collect())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi] = lo;
        }
    }
}

/// Builds a complex from separate simplices by identifying faces in vertex order.
pub struct Gluer {
    dim: usize,
    uf: UnionFind,
    signs: Vec<i8>,
}

impl Gluer {
    pub fn new(dim: usize) -> Self {
        Gluer { dim, uf: UnionFind(Vec::new()), signs: Vec::new() }
    }

    fn width(&self) -> usize {
        1 << (self.dim + 1)
    }

    pub fn from_complex(c: &DeltaComplex) -> Self {
        let mut g = Gluer::new(c.dim);
        for &s in &c.signs {
            g.add_simplex(s);
        }
        let w = g.width();
        let mut first: HashMap<(usize, u32), usize> = HashMap::new();
        for (s, row) in c.faces.iter().enumerate() {
            for mask in 1..w {
                let key = (popcount(mask), row[mask]);
                let here = s * w + mask;
                match first.get(&key) {
                    Some(&r) => g.uf.union(r, here),
                    None => {
                        first.insert(key, here);
                    }
                }
            }
        }
        g
    }

    pub fn add_simplex(&mut self, sign: i8) -> usize {
        let w = self.width();
        let base = self.uf.0.len();
        self.uf.0.extend(base..base + w);
        self.signs.push(sign);
        self.signs.len() - 1
    }

    pub fn simplex_count(&self) -> usize {
        self.signs.len()
    }

    /// Identify face `ms` of simplex `s` with face `mt` of simplex `t`, matching
    /// vertices in increasing order, together with all their subfaces.
    pub fn identify(&mut self, s: usize, ms: usize, t: usize, mt: usize) {
        assert_eq!(popcount(ms), popcount(mt));
        let (bs, bt) = (bits(ms), bits(mt));
        let w = self.width();
        for sub in 1..(1usize << bs.len()) {
            let mut a = 0;
            let mut b = 0;
            for k in 0..bs.len() {
                if sub >> k & 1 == 1 {
                    a |= 1 << bs[k];
                    b |= 1 << bt[k];
                }
            }
            self.uf.union(s * w + a, t * w + b);
        }
    }

    pub fn finish(mut self, name: &str) -> DeltaComplex {
        let w = self.width();
        let n = self.signs.len();
        let raw: Vec<Vec<usize>> =
            (0..n).map(|s| (0..w).map(|m| if m == 0 { 0 } else { self.uf.find(s * w + m) }).collect()).collect();
        let (faces, counts) = canonicalize(self.dim, &raw);
        DeltaComplex { name: name.to_string(), dim: self.dim, faces, signs: self.signs, counts }
    }
}

impl DeltaComplex {
    /// Build from a face key function: faces with equal keys are one class.
    pub fn from_keys<K: Hash + Eq>(name: &str, dim: usize, signs: Vec<i8>, key: impl Fn(usize, usize) -> K) -> Self {
        let w = 1usize << (dim + 1);
        let mut ids: HashMap<K, usize> = HashMap::new();
        let raw: Vec<Vec<usize>> = (0..signs.len())
            .map(|s| {
                (0..w)
                    .map(|m| {
                        if m == 0 {
                            return 0;
                        }
                        let next = ids.len();
                        *ids.entry(key(s, m)).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        let (faces, counts) = canonicalize(dim, &raw);
        DeltaComplex { name: name.to_string(), dim, faces, signs, counts }
    }

    /// Simplicial complex from vertex tuples; each tuple must be strictly increasing.
    pub fn from_simplicial(name: &str, dim: usize, simplices: &[(Vec<usize>, i8)]) -> Result<Self> {
        for (v, _) in simplices {
            if v.len() != dim + 1 || v.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::Construction(format!("simplex {v:?} is not an increasing {dim}-simplex")));
            }
        }
        let signs = simplices.iter().map(|(_, s)| *s).collect();
        Ok(Self::from_keys(name, dim, signs, |s, m| bits(m).iter().map(|&i| simplices[s].0[i]).collect::<Vec<_>>()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Equal up to the name.
    pub fn same_cells(&self, o: &DeltaComplex) -> bool {
        self.dim == o.dim && self.faces == o.faces && self.signs == o.signs && self.counts == o.counts
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simplex_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.counts[0]
    }

    pub fn edge_count(&self) -> usize {
        self.counts.get(1).copied().unwrap_or(0)
    }

    /// Number of face classes of each dimension.
    pub fn f_vector(&self) -> &[usize] {
        &self.counts
    }

    pub fn sign(&self, s: usize) -> i8 {
        self.signs[s]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn face(&self, s: usize, mask: usize) -> u32 {
        self.faces[s][mask]
    }

    pub fn vertices(&self, s: usize) -> Vec<u32> {
        (0..=self.dim).map(|i| self.faces[s][1 << i]).collect()
    }

    /// Edge class from vertex i to vertex j (i < j) of simplex s.
    pub fn edge(&self, s: usize, i: usize, j: usize) -> u32 {
        self.faces[s][(1 << i) | (1 << j)]
    }

    pub fn euler(&self) -> i64 {
        self.counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Triangle classes as (edge 01, edge 12, edge 02), one entry per class.
    pub fn triangles(&self) -> Vec<[u32; 3]> {
        if self.dim < 2 {
            return Vec::new();
        }
        let mut out = vec![None; self.counts[2]];
        for s in 0..self.faces.len() {
            for mask in 0..(1usize << (self.dim + 1)) {
                if popcount(mask) != 3 {
                    continue;
                }
                let id = self.faces[s][mask] as usize;
                if out[id].is_none() {
                    let b = bits(mask);
                    out[id] = Some([
                        self.faces[s][(1 << b[0]) | (1 << b[1])],
                        self.faces[s][(1 << b[1]) | (1 << b[2])],
                        self.faces[s][(1 << b[0]) | (1 << b[2])],
                    ]);
                }
            }
        }
        out.into_iter().map(|t| t.unwrap()).collect()
    }

    /// Facet incidences: for each (d−1)-class, the (simplex, omitted vertex) pairs.
    fn facet_incidences(&self) -> Vec<Vec<(usize, usize)>> {
        let full = (1usize << (self.dim + 1)) - 1;
        let mut inc = vec![Vec::new(); self.counts[self.dim - 1]];
        for s in 0..self.faces.len() {
            for i in 0..=self.dim {
                inc[self.faces[s][full ^ (1 << i)] as usize].push((s, i));
            }
        }
        inc
    }

    pub fn validate(&self) -> Validation {
        let mut problems = Vec::new();
        if self.dim == 0 {
            problems.push("dimension 0".into());
        } else {
            for (f, inc) in self.facet_incidences().iter().enumerate() {
                if inc.len() != 2 {
                    let (s, i) = inc[0];
                    let verts: Vec<u32> = (0..=self.dim).filter(|&k| k != i).map(|k| self.faces[s][1 << k]).collect();
                    problems.push(format!(
                        "face {f} (vertices {verts:?}, simplex {s} without vertex {i}) lies in {} simplices",
                        inc.len()
                    ));
                    continue;
                }
                let (s, i) = inc[0];
                let (t, j) = inc[1];
                let a = self.signs[s] as i64 * if i % 2 == 0 { 1 } else { -1 };
                let b = self.signs[t] as i64 * if j % 2 == 0 { 1 } else { -1 };
                if a + b != 0 {
                    problems.push(format!("orientation clash on face {f} between simplices {s} and {t}"));
                }
            }
        }
        Validation { ok: problems.is_empty(), euler: self.euler(), f_vector: self.counts.clone(), problems }
    }

    /// Recompute orientation signs by propagation, keeping the first simplex
    /// of each component as given.
    pub fn orient(&self) -> Result<Self> {
        let inc = self.facet_incidences();
        let full = (1usize << (self.dim + 1)) - 1;
        let n = self.faces.len();
        let mut sign: Vec<Option<i8>> = vec![None; n];
        for root in 0..n {
            if sign[root].is_some() {
                continue;
            }
            sign[root] = Some(self.signs[root]);
            let mut queue = VecDeque::from([root]);
            while let Some(s) = queue.pop_front() {
                for i in 0..=self.dim {
                    let f = self.faces[s][full ^ (1 << i)] as usize;
                    for &(t, j) in &inc[f] {
                        if (t, j) == (s, i) {
                            continue;
                        }
                        let want = -sign[s].unwrap() * if (i + j) % 2 == 0 { 1 } else { -1 };
                        match sign[t] {
                            None => {
                                sign[t] = Some(want);
                                queue.push_back(t);
                            }
                            Some(x) if x != want => {
                                return Err(Error::Construction(format!("{} is not orientable", self.name)))
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        Ok(DeltaComplex { signs: sign.into_iter().map(|s| s.unwrap()).collect(), ..self.clone() })
    }

    pub fn reversed(&self) -> Self {
        DeltaComplex { signs: self.signs.iter().map(|s| -s).collect(), ..self.clone() }
    }

    pub fn without_simplex(&self, s: usize) -> Self {
        let mut c = self.clone();
        c.faces.remove(s);
        c.signs.remove(s);
        c
    }

    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Construction("disjoint union of different dimensions".into()));
        }
        let n = self.faces.len();
        let signs = self.signs.iter().chain(&other.signs).copied().collect();
        Ok(Self::from_keys(&format!("{}+{}", self.name, other.name), self.dim, signs, |s, m| {
            if s < n {
                (0u8, self.faces[s][m])
            } else {
                (1u8, other.faces[s - n][m])
            }
        }))
    }

    pub fn is_simplicial(&self) -> bool {
        let tuples: Vec<(Vec<usize>, i8)> = (0..self.faces.len())
            .map(|s| (self.vertices(s).iter().map(|&v| v as usize).collect(), self.signs[s]))
            .collect();
        match Self::from_simplicial(&self.name, self.dim, &tuples) {
            Ok(c) => c.faces == self.faces,
            Err(_) => false,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let simplicial = self.is_simplicial();
        let full = (1usize << (self.dim + 1)) - 1;
        writeln!(out, "# name: {}", self.name).unwrap();
        writeln!(out, "dim {}; vertices {};", self.dim, self.counts[0]).unwrap();
        for s in 0..self.faces.len() {
            let vs: Vec<String> = self.vertices(s).iter().map(|v| v.to_string()).collect();
            write!(out, "{} {}", vs.join(" "), self.signs[s]).unwrap();
            if !simplicial {
                let fs: Vec<String> = (0..=self.dim).map(|i| self.faces[s][full ^ (1 << i)].to_string()).collect();
                write!(out, " : {}", fs.join(" ")).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parse the text format without validating.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse(m);
        let mut name = String::from("unnamed");
        let mut header: Option<(usize, usize)> = None;
        let mut rows: Vec<(Vec<usize>, i8, Option<Vec<usize>>)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                if let Some(n) = c.trim().strip_prefix("name:") {
                    name = n.trim().to_string();
                }
                continue;
            }
            if header.is_none() {
                let mut dim = None;
                let mut verts = None;
                for part in line.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                    let (k, v) = part.split_once(' ').ok_or_else(|| bad(format!("line {}: bad header", ln + 1)))?;
                    let v: usize = v.trim().parse().map_err(|_| bad(format!("line {}: bad number", ln + 1)))?;
                    match k {
                        "dim" => dim = Some(v),
                        "vertices" => verts = Some(v),
                        _ => return Err(bad(format!("line {}: unknown header field {k}", ln + 1))),
                    }
                }
                match (dim, verts) {
                    (Some(d), Some(v)) if (1..=4).contains(&d) => header = Some((d, v)),
                    _ => return Err(bad(format!("line {}: header needs dim in 1..=4 and vertices", ln + 1))),
                }
                continue;
            }
            let (d, nv) = header.unwrap();
            let (main, facets) = match line.split_once(':') {
                Some((a, b)) => (a, Some(b)),
                None => (line, None),
            };
            let nums = |s: &str| -> Result<Vec<i64>> {
                s.split_whitespace()
                    .map(|t| t.parse::<i64>().map_err(|_| bad(format!("line {}: bad integer `{t}`", ln + 1))))
                    .collect()
            };
            let m = nums(main)?;
            if m.len() != d + 2 {
                return Err(bad(format!("line {}: expected {} vertices and a sign", ln + 1, d + 1)));
            }
            let sign = m[d + 1];
            if sign != 1 && sign != -1 {
                return Err(bad(format!("line {}: sign must be 1 or -1", ln + 1)));
            }
            let vs: Vec<usize> = m[..=d].iter().map(|&v| v as usize).collect();
            if m[..=d].iter().any(|&v| v < 0 || v as usize >= nv) {
                return Err(bad(format!("line {}: vertex out of range", ln + 1)));
            }
            let fs = match facets {
                Some(f) => {
                    let f = nums(f)?;
                    if f.len() != d + 1 || f.iter().any(|&x| x < 0) {
                        return Err(bad(format!("line {}: expected {} facet ids", ln + 1, d + 1)));
                    }
                    Some(f.iter().map(|&x| x as usize).collect())
                }
                None => None,
            };
            rows.push((vs, sign as i8, fs));
        }
        let (dim, _) = header.ok_or_else(|| bad("missing header".into()))?;
        if rows.iter().all(|r| r.2.is_none()) {
            let simp: Vec<(Vec<usize>, i8)> = rows.into_iter().map(|(v, s, _)| (v, s)).collect();
            return Self::from_simplicial(&name, dim, &simp);
        }
        if rows.iter().any(|r| r.2.is_none()) {
            return Err(bad("facet ids must be given for every simplex or none".into()));
        }
        let mut g = Gluer::new(dim);
        let full = (1usize << (dim + 1)) - 1;
        let mut vfirst: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut ffirst: HashMap<usize, (usize, usize)> = HashMap::new();
        for (s, (vs, sign, fs)) in rows.iter().enumerate() {
            g.add_simplex(*sign);
            for (i, &v) in vs.iter().enumerate() {
                match vfirst.get(&v) {
                    Some(&(t, j)) => g.identify(s, 1 << i, t, 1 << j),
                    None => {
                        vfirst.insert(v, (s, i));
                    }
                }
            }
            for (i, &f) in fs.as_ref().unwrap().iter().enumerate() {
                match ffirst.get(&f) {
                    Some(&(t, j)) => g.identify(s, full ^ (1 << i), t, full ^ (1 << j)),
                    None => {
                        ffirst.insert(f, (s, i));
                    }
                }
            }
        }
        Ok(g.finish(&name))
    }

    /// Parse and validate.
    pub fn load(text: &str) -> Result<Self> {
        let c = Self::parse(text)?;
        let v = c.validate();
        if !v.ok {
            return Err(Error::Construction(format!("{}: {}", c.name, v.problems.join("; "))));
        }
        Ok(c)
    }
}

fn lattice_paths(p: usize, q: usize) -> Vec<Vec<bool>> {
    // true = step in the second factor
    let mut out = Vec::new();
    let n = p + q;
    for m in 0..(1usize << n) {
        if popcount(m) == q {
            out.push((0..n).map(|k| m >> k & 1 == 1).collect());
        }
    }
    out.sort();
    out
}

/// Staircase (Eilenberg–Zilber) triangulation of a product.
pub fn product(a: &DeltaComplex, b: &DeltaComplex) -> Result<DeltaComplex> {
    let (p, q) = (a.dim, b.dim);
    if p + q > 4 {
        return Err(Error::Construction(format!("product dimension {} exceeds 4", p + q)));
    }
    let paths = lattice_paths(p, q);
    let mut cells: Vec<(usize, usize, Vec<(usize, usize)>)> = Vec::new();
    let mut signs = Vec::new();
    for sa in 0..a.simplex_count() {
        for sb in 0..b.simplex_count() {
            for path in &paths {
                let mut verts = vec![(0usize, 0usize)];
                let (mut i, mut j) = (0, 0);
                let mut inv = 0;
                let mut ups = 0;
                for &up in path {
                    if up {
                        j += 1;
                        ups += 1;
                    } else {
                        i += 1;
                        inv += ups;
                    }
                    verts.push((i, j));
                }
                let sh: i8 = if inv % 2 == 0 { 1 } else { -1 };
                signs.push(a.signs[sa] * b.signs[sb] * sh);
                cells.push((sa, sb, verts));
            }
        }
    }
    let name = format!("{}x{}", a.name, b.name);
    let c = DeltaComplex::from_keys(&name, p + q, signs, |s, m| {
        let (sa, sb, ref verts) = cells[s];
        let sel: Vec<(usize, usize)> = bits(m).iter().map(|&k| verts[k]).collect();
        let mut is: Vec<usize> = sel.iter().map(|v| v.0).collect();
        let mut js: Vec<usize> = sel.iter().map(|v| v.1).collect();
        is.dedup();
        js.dedup();
        let ma = is.iter().fold(0, |acc, &i| acc | 1 << i);
        let mb = js.iter().fold(0, |acc, &j| acc | 1 << j);
        let pa: Vec<usize> = sel.iter().map(|v| is.iter().position(|&x| x == v.0).unwrap()).collect();
        let pb: Vec<usize> = sel.iter().map(|v| js.iter().position(|&x| x == v.1).unwrap()).collect();
        (a.faces[sa][ma], pa, b.faces[sb][mb], pb)
    });
    Ok(c)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn perm_sign(p: &[usize]) -> i8 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// One-vertex Freudenthal torus T^d: simplices are axis orderings; a face is
/// the sequence of axis blocks between its chosen vertices.
pub fn freudenthal_torus(d: usize) -> DeltaComplex {
    let perms = permutations(d);
    let signs = perms.iter().map(|p| perm_sign(p)).collect();
    DeltaComplex::from_keys(&format!("T{d}"), d, signs, |s, m| torus_face_key(&perms[s], m))
}

fn torus_face_key(perm: &[usize], mask: usize) -> Vec<u32> {
    let b = bits(mask);
    b.windows(2).map(|w| (w[0]..w[1]).fold(0u32, |acc, k| acc | 1 << perm[k])).collect()
}

/// Boundary of the standard n-simplex.
pub fn simplex_boundary(n: usize) -> DeltaComplex {
    let simp: Vec<(Vec<usize>, i8)> =
        (0..=n).map(|i| ((0..=n).filter(|&k| k != i).collect(), if i % 2 == 0 { 1 } else { -1 })).collect();
    DeltaComplex::from_simplicial(&format!("S{}", n - 1), n - 1, &simp).unwrap()
}

pub fn interval() -> DeltaComplex {
    DeltaComplex::from_simplicial("I", 1, &[(vec![0, 1], 1)]).unwrap()
}

pub const BUILTIN_NAMES: [&str; 11] = ["S1", "S2", "S3", "S4", "T2", "T3", "T4", "S2xS1", "S3xS1", "S2xS2", "S2xT2"];

pub fn builtin(name: &str) -> Result<DeltaComplex> {
    let c = match name {
        "S1" => freudenthal_torus(1).with_name("S1"),
        "S2" => simplex_boundary(3),
        "S3" => simplex_boundary(4),
        "S4" => simplex_boundary(5),
        "T2" => freudenthal_torus(2),
        "T3" => freudenthal_torus(3),
        "T4" => freudenthal_torus(4),
        "S2xS1" => product(&simplex_boundary(3), &builtin("S1")?)?,
        "S3xS1" => product(&simplex_boundary(4), &builtin("S1")?)?,
        "S2xS2" => product(&simplex_boundary(3), &simplex_boundary(3))?,
        "S2xT2" => product(&simplex_boundary(3), &freudenthal_torus(2))?,
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    let v = c.validate();
    if !v.ok {
        return Err(Error::Construction(format!("builtin {name}: {}", v.problems.join("; "))));
    }
    Ok(c)
}

type Vec2 = [i64; 2];

fn add2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm_basis(a: Vec2, b: Vec2) -> (Vec2, Vec2) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A layer move on a one-vertex T² triangulation with triangles [x,y], [y,x].
#[derive(Clone, Copy, Debug)]
struct Flip {
    /// tet edges g01, g12, g23
    edges: (Vec2, Vec2, Vec2),
    /// true: faces 012/123 glue down, 013/023 form the new top
    up: bool,
}

fn flips_from(basis: (Vec2, Vec2)) -> Vec<((Vec2, Vec2), Flip)> {
    let (u, v) = basis;
    let mut out = Vec::new();
    for (x, y) in [(u, v), (v, u)] {
        // up: {x,y} -> {x, x+y}
        out.push((norm_basis(x, add2(x, y)), Flip { edges: (x, y, x), up: true }));
        // down: {x,y} -> {x, y-x}; the tet of the up-move from {x, y-x}
        let yp = sub2(y, x);
        out.push((norm_basis(x, yp), Flip { edges: (x, yp, x), up: false }));
    }
    out
}

fn flip_sequence(target: (Vec2, Vec2), bound: i64) -> Result<Vec<Flip>> {
    let start = norm_basis([1, 0], [0, 1]);
    let target = norm_basis(target.0, target.1);
    let mut prev: HashMap<(Vec2, Vec2), Option<((Vec2, Vec2), Flip)>> = HashMap::new();
    prev.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(b) = queue.pop_front() {
        if b == target {
            let mut seq = Vec::new();
            let mut cur = b;
            while let Some(Some((p, f))) = prev.get(&cur) {
                seq.push(*f);
                cur = *p;
            }
            seq.reverse();
            return Ok(seq);
        }
        for (nb, f) in flips_from(b) {
            if nb.0.iter().chain(nb.1.iter()).any(|x| x.abs() > bound) || prev.contains_key(&nb) {
                continue;
            }
            prev.insert(nb, Some((b, f)));
            queue.push_back(nb);
        }
    }
    Err(Error::CapExceeded { what: "mapping torus layer search".into(), needed: 0, cap: bound as u128 })
}

const ENTRY_BOUND: i64 = 6;

fn check_unimodular(m: &[Vec<i64>], d: usize) -> Result<()> {
    if m.len() != d || m.iter().any(|r| r.len() != d) {
        return Err(Error::Construction(format!("expected a {d}x{d} matrix")));
    }
    let det = match d {
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!(),
    };
    if det.abs() != 1 {
        return Err(Error::Construction(format!("determinant {det} is not ±1")));
    }
    if m.iter().flatten().any(|x| x.abs() > ENTRY_BOUND) {
        return Err(Error::CapExceeded {
            what: "mapping torus matrix entry".into(),
            needed: m.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap() as u128,
            cap: ENTRY_BOUND as u128,
        });
    }
    Ok(())
}

/// Mapping torus of the Freudenthal T^d (d = 2, 3) under the linear map m.
/// Mapping torus of the lattice map `m` on the standard torus `base`.
pub fn mapping_torus(base: &DeltaComplex, m: &[Vec<i64>]) -> Result<DeltaComplex> {
    let d = base.dim();
    // the map acts on the lattice triangulation, so no other base makes sense
    if (d == 2 || d == 3) && !base.same_cells(&freudenthal_torus(d)) {
        return Err(Error::Construction(format!("{} is not the standard {d}-torus", base.name())));
    }
    match d {
        2 => {
            check_unimodular(m, 2)?;
            mapping_torus_2d(m)
        }
        3 => {
            check_unimodular(m, 3)?;
            mapping_torus_3d(m)
        }
        _ => Err(Error::Construction(format!("mapping tori need d in {{2, 3}}, got {d}"))),
    }
}

fn apply2(m: &[Vec<i64>], x: Vec2) -> Vec2 {
    [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

fn mapping_torus_2d(m: &[Vec<i64>]) -> Result<DeltaComplex> {
    let (e1, e2) = ([1, 0], [0, 1]);
    let target = (apply2(m, e1), apply2(m, e2));
    let seq = flip_sequence(target, ENTRY_BOUND * 2)?;
    let torus = freudenthal_torus(2);
    let prism = product(&torus, &interval())?;
    // prism simplices: torus simplex σ in order, paths sorted; path "URR" is
    // [true,false,false] (last), "RRU" is [false,false,true] (first)
    let paths = lattice_paths(2, 1);
    let up_first = paths.iter().position(|p| p == &vec![true, false, false]).unwrap();
    let up_last = paths.iter().position(|p| p == &vec![false, false, true]).unwrap();
    let np = paths.len();
    let mut g = Gluer::from_complex(&prism);
    // labelled triangles [x,y] -> (simplex, mask with 3 bits in vertex order)
    let mut top: HashMap<(Vec2, Vec2), (usize, usize)> = HashMap::new();
    let mut bottom: HashMap<(Vec2, Vec2), (usize, usize)> = HashMap::new();
    // Freudenthal perm [0,1] is [e1,e2], [1,0] is [e2,e1]
    for (sigma, lab) in [(0usize, (e1, e2)), (1usize, (e2, e1))] {
        top.insert(lab, (sigma * np + up_first, 0b1110));
        bottom.insert(lab, (sigma * np + up_last, 0b0111));
    }
    for f in &seq {
        let (a, b, c) = f.edges;
        let s = g.add_simplex(1);
        // faces as labelled triangles
        let f012 = ((a, b), 0b0111);
        let f123 = ((b, c), 0b1110);
        let f013 = ((a, add2(b, c)), 0b1011);
        let f023 = ((add2(a, b), c), 0b1101);
        let (glue, fresh) = if f.up { ([f012, f123], [f013, f023]) } else { ([f013, f023], [f012, f123]) };
        for (lab, mask) in glue {
            let (t, mt) = top
                .remove(&lab)
                .ok_or_else(|| Error::Construction(format!("layer move expects triangle {lab:?} on top")))?;
            g.identify(s, mask, t, mt);
        }
        if !top.is_empty() {
            return Err(Error::Construction("layer move left stale top triangles".into()));
        }
        for (lab, mask) in fresh {
            top.insert(lab, (s, mask));
        }
    }
    for (lab, (s, ms)) in &bottom {
        let img = (apply2(m, lab.0), apply2(m, lab.1));
        let (t, mt) = top.get(&img).ok_or_else(|| Error::Construction(format!("top triangle {img:?} missing")))?;
        g.identify(*t, *mt, *s, *ms);
    }
    let name = format!("MT2[{},{};{},{}]", m[0][0], m[0][1], m[1][0], m[1][1]);
    let c = g.finish(&name).orient()?;
    let v = c.validate();
    if !v.ok {
        return Err(Error::Construction(format!("{name}: {}", v.problems.join("; "))));
    }
    Ok(c)
}

fn mapping_torus_3d(m: &[Vec<i64>]) -> Result<DeltaComplex> {
    let is_perm = m.iter().all(|r| r.iter().filter(|&&x| x == 1).count() == 1 && r.iter().all(|&x| x == 0 || x == 1))
        && (0..3).all(|j| m.iter().filter(|r| r[j] == 1).count() == 1);
    let fixes_z = m[2] == vec![0, 0, 1] && m[0][2] == 0 && m[1][2] == 0;
    let name = format!(
        "MT3[{}]",
        m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";")
    );
    if is_perm {
        // axis j goes to axis p[j]
        let p: Vec<usize> = (0..3).map(|j| (0..3).find(|&i| m[i][j] == 1).unwrap()).collect();
        let perms = permutations(3);
        let torus = freudenthal_torus(3);
        let prism = product(&torus, &interval())?;
        let paths = lattice_paths(3, 1);
        let np = paths.len();
        let up_first = paths.iter().position(|q| q[0]).unwrap();
        let up_last = paths.iter().position(|q| q[3]).unwrap();
        let mut g = Gluer::from_complex(&prism);
        for (si, sigma) in perms.iter().enumerate() {
            let image: Vec<usize> = sigma.iter().map(|&ax| p[ax]).collect();
            let ti = perms.iter().position(|q| q == &image).unwrap();
            g.identify(ti * np + up_first, 0b11110, si * np + up_last, 0b01111);
        }
        let c = g.finish(&name).orient()?;
        let v = c.validate();
        if !v.ok {
            return Err(Error::Construction(format!("{name}: {}", v.problems.join("; "))));
        }
        return Ok(c);
    }
    if fixes_z {
        let m2 = vec![vec![m[0][0], m[0][1]], vec![m[1][0], m[1][1]]];
        let c = product(&mapping_torus_2d(&m2)?, &builtin("S1")?)?.with_name(&name);
        let v = c.validate();
        if !v.ok {
            return Err(Error::Construction(format!("{name}: {}", v.problems.join("; "))));
        }
        return Ok(c);
    }
    Err(Error::Construction(format!("{name}: only axis permutations and maps fixing the third axis are supported")))
}

/// Named mapping-class generators.
pub fn mcg_matrix(name: &str, d: usize) -> Result<Vec<Vec<i64>>> {
    Ok(match (name, d) {
        ("id", 2) => vec![vec![1, 0], vec![0, 1]],
        ("Sxy", 2) => vec![vec![0, -1], vec![1, 0]],
        ("Txy", 2) => vec![vec![1, 1], vec![0, 1]],
        ("id", 3) => vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        ("Sxy", 3) => vec![vec![0, -1, 0], vec![1, 0, 0], vec![0, 0, 1]],
        ("Txy", 3) => vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]],
        ("Sxyz", 3) => vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]],
        _ => return Err(Error::UnknownName(format!("{name} in dimension {d}"))),
    })
}
