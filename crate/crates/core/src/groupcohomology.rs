//! Finite abelian groups ∏ Z_{N_i}, twist cocycles, the cocycle condition and
//! slant products.
//!
//! Cochains are inhomogeneous. Cocycle values are roots of unity and are
//! stored as exponents k of ζ_L for one ambient order L per table.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exactnum::CycNum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupData {
    orders: Vec<u32>,
    size: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
}

pub fn bracket(x: i64, n: i64) -> i64 {
    x.rem_euclid(n)
}

fn gcd_all(xs: impl IntoIterator<Item = u64>) -> u64 {
    xs.into_iter().fold(0, |a, b| a.gcd(&b))
}

impl GroupData {
    pub fn new(orders: &[u32]) -> Result<Self> {
        Self::with_caps(orders, Caps::current())
    }

    pub fn with_caps(orders: &[u32], caps: Caps) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::Parse("group orders must be positive".into()));
        }
        let size: u128 = orders.iter().map(|&n| n as u128).product();
        if size > caps.group_order as u128 {
            return Err(Error::CapExceeded { what: "group order".into(), needed: size, cap: caps.group_order as u128 });
        }
        let size = size as usize;
        let mut g = GroupData { orders: orders.to_vec(), size, add: vec![0; size * size], neg: vec![0; size] };
        for a in 0..size {
            let ta = g.tuple(a);
            let inv: Vec<u32> = ta.iter().zip(orders).map(|(&x, &n)| (n - x) % n).collect();
            g.neg[a] = g.index(&inv);
            for b in 0..size {
                let tb = g.tuple(b);
                let s: Vec<u32> = ta.iter().zip(&tb).zip(orders).map(|((&x, &y), &n)| (x + y) % n).collect();
                g.add[a * size + b] = g.index(&s);
            }
        }
        Ok(g)
    }

    pub fn trivial() -> Self {
        Self::with_caps(&[], Caps::default()).unwrap()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Lexicographic index, first component most significant.
    pub fn index(&self, t: &[u32]) -> usize {
        t.iter().zip(&self.orders).fold(0usize, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
    }

    pub fn tuple(&self, mut i: usize) -> Vec<u32> {
        let mut t = vec![0u32; self.orders.len()];
        for (k, &n) in self.orders.iter().enumerate().rev() {
            t[k] = (i % n as usize) as u32;
            i /= n as usize;
        }
        t
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b])
    }

    /// Exponent n with lcm of all N_i; every character value is ζ_n^k.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |a, &n| a.lcm(&(n as u64)))
    }

    /// χ_k(g) = ζ_e^{Σ k_i g_i e/N_i} with e the group exponent; returns the power.
    pub fn char_exp(&self, k: usize, g: usize) -> u64 {
        let e = self.exponent();
        let tk = self.tuple(k);
        let tg = self.tuple(g);
        let mut s = 0u64;
        for i in 0..self.orders.len() {
            s += tk[i] as u64 * tg[i] as u64 * (e / self.orders[i] as u64);
        }
        s % e
    }

    pub fn char_value(&self, k: usize, g: usize) -> CycNum {
        CycNum::root_of_unity(self.char_exp(k, g) as i64, self.exponent())
    }

    pub fn fmt_elem(&self, a: usize) -> String {
        let t = self.tuple(a);
        let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermKind {
    /// exp(2πi p/(N_I N_J) a_I (b_J + c_J − [b_J + c_J]))
    #[serde(rename = "pair")]
    Pair,
    /// exp(2πi p/N_IJK a_I b_J c_K)
    #[serde(rename = "triple")]
    Triple,
    /// exp(2πi p/(N_IJ N_K) a_I b_J (c_K + d_K − [c_K + d_K]))
    #[serde(rename = "triple4")]
    Triple4,
    /// exp(2πi p/N_IJKL a_I b_J c_K d_L)
    #[serde(rename = "quad")]
    Quad,
}

impl TermKind {
    pub fn arity(self) -> usize {
        match self {
            TermKind::Pair => 2,
            TermKind::Triple | TermKind::Triple4 => 3,
            TermKind::Quad => 4,
        }
    }

    pub fn dimension(self) -> u32 {
        match self {
            TermKind::Pair | TermKind::Triple => 3,
            TermKind::Triple4 | TermKind::Quad => 4,
        }
    }

    fn distinct(self) -> bool {
        matches!(self, TermKind::Triple | TermKind::Quad)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistTerm {
    pub kind: TermKind,
    /// 1-based subgroup indices.
    pub indices: Vec<usize>,
    pub p: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistSpec {
    pub dimension: u32,
    #[serde(default)]
    pub terms: Vec<TwistTerm>,
}

impl TwistSpec {
    pub fn trivial(dimension: u32) -> Self {
        TwistSpec { dimension, terms: vec![] }
    }

    pub fn with(dimension: u32, kind: TermKind, indices: &[usize], p: i64) -> Self {
        TwistSpec { dimension, terms: vec![TwistTerm { kind, indices: indices.to_vec(), p }] }
    }
}

/// Reduced numerator/denominator data of one term on a concrete group.
struct Term {
    kind: TermKind,
    idx: Vec<usize>,
    p: u64,
    den: u64,
}

fn prepare(group: &GroupData, twist: &TwistSpec, dim: u32) -> Result<Vec<Term>> {
    if twist.dimension != dim {
        return Err(Error::Degree(format!("twist dimension {} where {} is required", twist.dimension, dim)));
    }
    let s = group.rank();
    let mut out = Vec::new();
    for t in &twist.terms {
        if t.kind.dimension() != dim {
            return Err(Error::Degree(format!("term {:?} does not belong to dimension {}", t.kind, dim)));
        }
        if t.indices.len() != t.kind.arity() {
            return Err(Error::IndexOutOfRange(format!("{:?} needs {} indices", t.kind, t.kind.arity())));
        }
        if let Some(&i) = t.indices.iter().find(|&&i| i == 0 || i > s) {
            return Err(Error::IndexOutOfRange(format!("index {i} outside 1..={s}")));
        }
        if t.kind.distinct() {
            let mut v = t.indices.clone();
            v.sort();
            v.dedup();
            if v.len() != t.indices.len() {
                return Err(Error::IndexOutOfRange(format!("{:?} needs distinct indices", t.kind)));
            }
        }
        let idx: Vec<usize> = t.indices.iter().map(|i| i - 1).collect();
        let n = |i: usize| group.orders()[idx[i]] as u64;
        let (modulus, den) = match t.kind {
            TermKind::Pair => (gcd_all([n(0), n(1)]), n(0) * n(1)),
            TermKind::Triple => {
                let g = gcd_all([n(0), n(1), n(2)]);
                (g, g)
            }
            TermKind::Triple4 => (gcd_all([n(0), n(1), n(2)]), gcd_all([n(0), n(1)]) * n(2)),
            TermKind::Quad => {
                let g = gcd_all([n(0), n(1), n(2), n(3)]);
                (g, g)
            }
        };
        let p = t.p.rem_euclid(modulus as i64) as u64;
        out.push(Term { kind: t.kind, idx, p, den });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleTable {
    group: GroupData,
    degree: usize,
    order: u64,
    exps: Vec<u32>,
}

fn ipow(b: usize, e: usize) -> usize {
    (0..e).fold(1, |a, _| a * b)
}

impl CocycleTable {
    pub fn from_fn(group: &GroupData, degree: usize, order: u64, f: impl Fn(&[usize]) -> u64) -> Self {
        let n = group.size();
        let len = ipow(n, degree);
        let mut args = vec![0usize; degree];
        let mut exps = Vec::with_capacity(len);
        for i in 0..len {
            let mut r = i;
            for k in (0..degree).rev() {
                args[k] = r % n;
                r /= n;
            }
            exps.push((f(&args) % order) as u32);
        }
        CocycleTable { group: group.clone(), degree, order, exps }
    }

    pub fn trivial(group: &GroupData, degree: usize) -> Self {
        Self::from_fn(group, degree, 1, |_| 0)
    }

    pub fn group(&self) -> &GroupData {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Ambient order L: all values are powers of ζ_L.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn offset(&self, args: &[usize]) -> usize {
        let n = self.group.size();
        args.iter().fold(0, |a, &x| a * n + x)
    }

    pub fn exp(&self, args: &[usize]) -> u64 {
        self.exps[self.offset(args)] as u64
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn value(&self, args: &[usize]) -> CycNum {
        CycNum::root_of_unity(self.exp(args) as i64, self.order)
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Overwrite one entry (used to build corrupted inputs).
    pub fn set_exp(&mut self, args: &[usize], e: u64) {
        let o = self.offset(args);
        self.exps[o] = (e % self.order) as u32;
    }

    /// Re-express with ambient order a multiple of the current one.
    pub fn lifted(&self, order: u64) -> Self {
        assert_eq!(order % self.order, 0);
        let m = (order / self.order) as u32;
        CocycleTable { exps: self.exps.iter().map(|&e| e * m).collect(), order, ..self.clone() }
    }

    /// Drop the ambient order to the smallest one that still holds every value.
    pub fn normalized(&self) -> Self {
        let g = self.exps.iter().fold(self.order, |a, &e| a.gcd(&(e as u64)));
        let g = g.max(1);
        CocycleTable { exps: self.exps.iter().map(|&e| e / g as u32).collect(), order: self.order / g, ..self.clone() }
    }

    pub fn fmt_args(&self, args: &[usize]) -> String {
        let parts: Vec<String> = args.iter().map(|&a| self.group.fmt_elem(a)).collect();
        parts.join(" ")
    }
}

fn build(group: &GroupData, twist: &TwistSpec, dim: u32) -> Result<CocycleTable> {
    let terms = prepare(group, twist, dim)?;
    let order = terms.iter().fold(1u64, |a, t| a.lcm(&t.den));
    let tuples: Vec<Vec<u32>> = (0..group.size()).map(|i| group.tuple(i)).collect();
    let orders = group.orders().to_vec();
    let table = CocycleTable::from_fn(group, dim as usize, order, |args| {
        let mut e = 0u64;
        for t in &terms {
            let comp = |pos: usize, which: usize| tuples[args[pos]][t.idx[which]] as u64;
            let num = match t.kind {
                TermKind::Pair => {
                    let j = t.idx[1];
                    let (b, c) = (comp(1, 1), comp(2, 1));
                    let carry = b + c - bracket((b + c) as i64, orders[j] as i64) as u64;
                    comp(0, 0) * carry
                }
                TermKind::Triple => comp(0, 0) * comp(1, 1) * comp(2, 2),
                TermKind::Triple4 => {
                    let k = t.idx[2];
                    let (c, d) = (comp(2, 2), comp(3, 2));
                    let carry = c + d - bracket((c + d) as i64, orders[k] as i64) as u64;
                    comp(0, 0) * comp(1, 1) * carry
                }
                TermKind::Quad => comp(0, 0) * comp(1, 1) * comp(2, 2) * comp(3, 3),
            };
            e += (t.p * num % t.den) * (order / t.den);
        }
        e % order
    });
    Ok(table)
}

pub fn build_cocycle_2p1d(group: &GroupData, twist: &TwistSpec) -> Result<CocycleTable> {
    build(group, twist, 3)
}

pub fn build_cocycle_3p1d(group: &GroupData, twist: &TwistSpec) -> Result<CocycleTable> {
    build(group, twist, 4)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleCheck {
    Pass { checked: u64 },
    Fail { witness: Vec<usize>, exponent: u64 },
}

impl CocycleCheck {
    pub fn passed(&self) -> bool {
        matches!(self, CocycleCheck::Pass { .. })
    }
}

/// Evaluate δω on every (n+1)-tuple.
pub fn check_cocycle(t: &CocycleTable) -> Result<CocycleCheck> {
    check_cocycle_with_caps(t, Caps::current())
}

pub fn check_cocycle_with_caps(t: &CocycleTable, caps: Caps) -> Result<CocycleCheck> {
    let g = &t.group;
    let n = t.degree;
    let size = g.size();
    let total = (size as u128).pow(n as u32 + 1);
    if total > caps.enumeration {
        return Err(Error::CapExceeded { what: "cocycle check tuples".into(), needed: total, cap: caps.enumeration });
    }
    let l = t.order;
    let mut args = vec![0usize; n + 1];
    let mut sub = vec![0usize; n];
    for i in 0..total as usize {
        let mut r = i;
        for k in (0..=n).rev() {
            args[k] = r % size;
            r /= size;
        }
        let mut e: i64 = t.exp(&args[1..]) as i64;
        for i in 1..=n {
            // merge slots i-1 and i (0-based)
            let mut w = 0;
            for k in 0..=n {
                if k == i {
                    continue;
                }
                sub[w] = if k == i - 1 { g.add(args[i - 1], args[i]) } else { args[k] };
                w += 1;
            }
            let v = t.exp(&sub) as i64;
            e += if i % 2 == 1 { -v } else { v };
        }
        let last = t.exp(&args[..n]) as i64;
        e += if (n + 1) % 2 == 1 { -last } else { last };
        let e = e.rem_euclid(l as i64) as u64;
        if e != 0 {
            return Ok(CocycleCheck::Fail { witness: args.clone(), exponent: e });
        }
    }
    Ok(CocycleCheck::Pass { checked: total as u64 })
}

/// Slant product i_a ω. Degree 3: ε_a(b,c) = ω(a,b,c)ω(b,c,a)/ω(b,a,c).
/// Degree 4: ω(a,b,c,d)ω(b,a,c,d)⁻¹ω(b,c,a,d)ω(b,c,d,a)⁻¹.
pub fn slant(t: &CocycleTable, a: usize) -> Result<CocycleTable> {
    let l = t.order;
    match t.degree {
        3 => Ok(CocycleTable::from_fn(&t.group, 2, l, |x| {
            let (b, c) = (x[0], x[1]);
            (t.exp(&[a, b, c]) + t.exp(&[b, c, a]) + l - t.exp(&[b, a, c])) % l
        })),
        4 => Ok(CocycleTable::from_fn(&t.group, 3, l, |x| {
            let (b, c, d) = (x[0], x[1], x[2]);
            (t.exp(&[a, b, c, d]) + l - t.exp(&[b, a, c, d]) + t.exp(&[b, c, a, d]) + l - t.exp(&[b, c, d, a])) % l
        })),
        d => Err(Error::Degree(format!("slant needs degree 3 or 4, got {d}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(o: &[u32]) -> GroupData {
        GroupData::new(o).unwrap()
    }

    #[test]
    fn groups() {
        assert_eq!(g(&[2]).size(), 2);
        assert_eq!(g(&[2, 2]).size(), 4);
        let z6 = g(&[2, 3]);
        assert_eq!(z6.size(), 6);
        // (1,1) generates
        let mut x = 0;
        let gen = z6.index(&[1, 1]);
        let mut seen = vec![];
        for _ in 0..6 {
            x = z6.add(x, gen);
            seen.push(x);
        }
        seen.sort();
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
        assert!(matches!(GroupData::new(&[4, 4, 5]), Err(Error::CapExceeded { .. })));
        assert_eq!(GroupData::trivial().size(), 1);
    }

    #[test]
    fn brackets() {
        assert_eq!(bracket(1 + 1, 2), 0);
        assert_eq!(bracket(3, 2), 1);
        assert_eq!(bracket(-1, 4), 3);
    }

    #[test]
    fn table_values() {
        let z2 = g(&[2]);
        let t = build_cocycle_2p1d(&z2, &TwistSpec::trivial(3)).unwrap();
        assert!(t.is_trivial());
        let t = build_cocycle_2p1d(&z2, &TwistSpec::with(3, TermKind::Pair, &[1, 1], 1)).unwrap();
        assert_eq!(t.value(&[1, 1, 1]), CycNum::from_int(-1));
        let g3 = g(&[2, 2, 2]);
        let t = build_cocycle_2p1d(&g3, &TwistSpec::with(3, TermKind::Triple, &[1, 2, 3], 1)).unwrap();
        let e = |v: &[u32]| g3.index(v);
        assert_eq!(t.value(&[e(&[1, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 1])]), CycNum::from_int(-1));
        let g2 = g(&[2, 2]);
        let t = build_cocycle_3p1d(&g2, &TwistSpec::with(4, TermKind::Triple4, &[1, 1, 2], 1)).unwrap();
        let (a, c) = (g2.index(&[1, 0]), g2.index(&[0, 1]));
        assert_eq!(t.value(&[a, a, c, c]), CycNum::from_int(-1));
        let g4 = g(&[2, 2, 2, 2]);
        let t = build_cocycle_3p1d(&g4, &TwistSpec::with(4, TermKind::Quad, &[1, 2, 3, 4], 1)).unwrap();
        let es: Vec<usize> = (0..4).map(|i| 1usize << (3 - i)).collect();
        assert_eq!(t.value(&es), CycNum::from_int(-1));
    }

    #[test]
    fn twist_errors() {
        let z2 = g(&[2]);
        assert!(matches!(
            build_cocycle_2p1d(&z2, &TwistSpec::with(3, TermKind::Pair, &[1, 2], 1)),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            build_cocycle_2p1d(&z2, &TwistSpec::with(4, TermKind::Quad, &[1, 1, 1, 1], 1)),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn corrupted_fails() {
        let g2 = g(&[2, 2]);
        let mut t = build_cocycle_2p1d(&g2, &TwistSpec::with(3, TermKind::Pair, &[1, 2], 1)).unwrap();
        assert!(check_cocycle(&t).unwrap().passed());
        let e = t.exp(&[1, 2, 3]);
        t.set_exp(&[1, 2, 3], e + 1);
        assert!(matches!(check_cocycle(&t).unwrap(), CocycleCheck::Fail { .. }));
    }

    #[test]
    fn slant_degree_errors() {
        let z2 = g(&[2]);
        let t = CocycleTable::trivial(&z2, 2);
        assert!(slant(&t, 1).is_err());
        let t4 = CocycleTable::trivial(&z2, 4);
        let s = slant(&slant(&t4, 1).unwrap(), 1).unwrap();
        assert_eq!(s.degree(), 2);
        assert!(s.is_trivial());
    }
}
