//! Exact arithmetic in cyclotomic fields Q(ζ_L).
//!
//! An element is stored in the power basis of ζ_L, reduced modulo the
//! L-th cyclotomic polynomial, so equal elements of equal order have equal
//! coefficient vectors.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

struct Field {
    degree: usize,
    /// `powers[k]` holds x^k mod Φ_L for 0 <= k < L.
    powers: Vec<Vec<i64>>,
}

fn int_poly_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    // exact division by a monic polynomial; coefficients low to high
    let mut rem = num.to_vec();
    let dl = den.len();
    let mut q = vec![0i64; num.len() + 1 - dl];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1];
        q[i] = c;
        for j in 0..dl {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

fn cyclotomic_poly(n: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_poly(d, memo);
            p = int_poly_div(&p, &q);
        }
    }
    memo.insert(n, p.clone());
    p
}

fn build_field(l: u64) -> Field {
    let mut memo = HashMap::new();
    let phi = cyclotomic_poly(l, &mut memo);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(l as usize);
    let mut cur = vec![0i64; degree];
    cur[0] = 1;
    for _ in 0..l {
        powers.push(cur.clone());
        // multiply by x and reduce with the monic Φ_L
        let top = cur[degree - 1];
        for j in (1..degree).rev() {
            cur[j] = cur[j - 1] - top * phi[j];
        }
        cur[0] = -top * phi[0];
    }
    Field { degree, powers }
}

fn field(l: u64) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(l).or_insert_with(|| Arc::new(build_field(l))).clone()
}

/// Degree of the L-th cyclotomic polynomial.
pub fn totient(l: u64) -> usize {
    field(l).degree
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[derive(Clone, Debug)]
pub struct CycNum {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycNum { order: 1, coeffs: vec![q] }
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(p.into(), q.into()))
    }

    /// ζ_n^k with k reduced mod n.
    pub fn root_of_unity(k: i64, n: u64) -> Self {
        assert!(n >= 1, "root_of_unity needs n >= 1");
        let e = k.rem_euclid(n as i64) as usize;
        let f = field(n);
        let coeffs = f.powers[e].iter().map(|&c| BigRational::from_integer(c.into())).collect();
        CycNum { order: n, coeffs }
    }

    /// Σ_k counts[k] ζ_L^k.
    pub fn from_exponents(l: u64, counts: &[BigInt]) -> Self {
        let f = field(l);
        let mut acc = vec![BigInt::zero(); f.degree];
        for (k, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, &p) in f.powers[k % l as usize].iter().enumerate() {
                if p != 0 {
                    acc[j] += c * p;
                }
            }
        }
        CycNum { order: l, coeffs: acc.into_iter().map(BigRational::from_integer).collect() }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// Some(q) iff the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn lift_order(&self, target: u64) -> Result<Self> {
        if target == 0 || !target.is_multiple_of(self.order) {
            return Err(Error::IncompatibleOrder { from: self.order, to: target });
        }
        Ok(self.lift_unchecked(target))
    }

    fn lift_unchecked(&self, target: u64) -> Self {
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let f = field(target);
        let mut acc = vec![BigRational::zero(); f.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &f.powers[(i * step) % target as usize];
            for (j, &p) in row.iter().enumerate() {
                if p != 0 {
                    acc[j] += c * BigRational::from_integer(p.into());
                }
            }
        }
        CycNum { order: target, coeffs: acc }
    }

    /// Express the element in the smallest field Q(ζ_d), d | order, that contains it.
    pub fn reduce_order(&self) -> Self {
        let mut best = self.clone();
        let l = self.order;
        for d in 1..l {
            if !l.is_multiple_of(d) {
                continue;
            }
            if let Some(c) = self.try_descend(d) {
                best = c;
                break;
            }
        }
        best
    }

    fn try_descend(&self, d: u64) -> Option<Self> {
        // solve for coefficients in Q(ζ_d) by lifting its basis
        let fd = field(d);
        let n = fd.degree;
        if n > self.coeffs.len() {
            return None;
        }
        let basis: Vec<CycNum> =
            (0..n).map(|i| CycNum::root_of_unity(i as i64, d).lift_unchecked(self.order)).collect();
        // the lifted basis vectors of Q(ζ_d) have a pivot structure we exploit
        // by Gaussian elimination over Q
        let m = self.coeffs.len();
        let mut rows: Vec<Vec<BigRational>> = (0..m)
            .map(|r| {
                let mut row: Vec<BigRational> = basis.iter().map(|b| b.coeffs[r].clone()).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let sol = solve_overdetermined(&mut rows, n)?;
        Some(CycNum { order: d, coeffs: sol })
    }

    pub fn conj(&self) -> Self {
        let l = self.order as usize;
        let f = field(self.order);
        let mut acc = vec![BigRational::zero(); f.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &f.powers[(l - i) % l];
            for (j, &p) in row.iter().enumerate() {
                if p != 0 {
                    acc[j] += c * BigRational::from_integer(p.into());
                }
            }
        }
        CycNum { order: self.order, coeffs: acc }
    }

    fn align(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = lcm(a.order, b.order);
        (a.lift_unchecked(l), b.lift_unchecked(l))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycNum { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // multiplication-by-self matrix, solve M x = e_0
        let n = self.coeffs.len();
        let mut rows: Vec<Vec<BigRational>> = vec![Vec::with_capacity(n + 1); n];
        for i in 0..n {
            let col = self.mul_ref(&CycNum::basis(self.order, i));
            for (r, row) in rows.iter_mut().enumerate() {
                row.push(col.coeffs[r].clone());
            }
        }
        for (r, row) in rows.iter_mut().enumerate() {
            row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
        }
        let sol = solve_overdetermined(&mut rows, n).ok_or(Error::DivisionByZero)?;
        Ok(CycNum { order: self.order, coeffs: sol })
    }

    fn basis(order: u64, i: usize) -> Self {
        let d = field(order).degree;
        let mut coeffs = vec![BigRational::zero(); d];
        coeffs[i] = BigRational::one();
        CycNum { order, coeffs }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CycNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let (a, b) = Self::align(self, other);
        let l = a.order as usize;
        let mut prod = vec![BigRational::zero(); l];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[(i + j) % l] += x * y;
            }
        }
        let f = field(a.order);
        let mut acc = vec![BigRational::zero(); f.degree];
        for (k, c) in prod.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, &p) in f.powers[k].iter().enumerate() {
                if p != 0 {
                    acc[j] += c * BigRational::from_integer(p.into());
                }
            }
        }
        CycNum { order: a.order, coeffs: acc }
    }

    /// Floating-point value at ζ_L = exp(2πi/L). Reporting only.
    pub fn approx(&self) -> (f64, f64) {
        let l = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * i as f64 / l;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }
}

/// Gaussian elimination on an augmented m x (n+1) system with m >= n.
/// Returns None if inconsistent or rank deficient.
fn solve_overdetermined(rows: &mut [Vec<BigRational>], n: usize) -> Option<Vec<BigRational>> {
    let m = rows.len();
    let mut r = 0;
    let mut pivots = Vec::with_capacity(n);
    for c in 0..n {
        let p = (r..m).find(|&i| !rows[i][c].is_zero())?;
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for k in c..=n {
            rows[r][k] = &rows[r][k] * &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in c..=n {
                    let t = &rows[r][k] * &f;
                    rows[i][k] -= t;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| rows[i][n].clone()).collect())
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::align(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNum {}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        let (mut a, b) = CycNum::align(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        let (mut a, b) = CycNum::align(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.mul_ref(rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_op {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl std::iter::Sum for CycNum {
    fn sum<I: Iterator<Item = CycNum>>(iter: I) -> CycNum {
        iter.fold(CycNum::zero(), |a, b| &a + &b)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce_order();
        write!(f, "cyc({})[", r.order)?;
        for (i, c) in r.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rational(c))?;
        }
        write!(f, "]")
    }
}

impl FromStr for CycNum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad cyclotomic literal `{s}`"));
        let s = s.trim();
        let rest = s.strip_prefix("cyc(").ok_or_else(bad)?;
        let (ord, rest) = rest.split_once(")[").ok_or_else(bad)?;
        let body = rest.strip_suffix(']').ok_or_else(bad)?;
        let order: u64 = ord.trim().parse().map_err(|_| bad())?;
        if order == 0 {
            return Err(bad());
        }
        let mut coeffs = Vec::new();
        for tok in body.split(',') {
            let tok = tok.trim();
            let q = match tok.split_once('/') {
                Some((p, q)) => {
                    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                    if q.is_zero() {
                        return Err(bad());
                    }
                    BigRational::new(p, q)
                }
                None => BigRational::from_integer(tok.parse().map_err(|_| bad())?),
            };
            coeffs.push(q);
        }
        if coeffs.len() != totient(order) {
            return Err(bad());
        }
        Ok(CycNum { order, coeffs })
    }
}

/// Field operation selector used by the command-line layer and tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Conj,
}

pub fn field_ops(a: &CycNum, b: &CycNum, op: FieldOp) -> Result<CycNum> {
    Ok(match op {
        FieldOp::Add => a + b,
        FieldOp::Sub => a - b,
        FieldOp::Mul => a * b,
        FieldOp::Div => a.div(b)?,
        FieldOp::Conj => a.conj(),
    })
}

/// Sign of a rational-valued element, if it is rational.
pub fn rational_sign(a: &CycNum) -> Option<i32> {
    a.as_rational().map(|q| {
        if q.is_zero() {
            0
        } else if q.is_positive() {
            1
        } else {
            -1
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_degrees() {
        for (l, d) in [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4), (6, 2), (8, 4), (12, 4), (24, 8)] {
            assert_eq!(totient(l), d, "phi({l})");
        }
    }

    #[test]
    fn roots() {
        assert!(CycNum::root_of_unity(0, 5).is_one());
        assert_eq!(CycNum::root_of_unity(1, 2), CycNum::from_int(-1));
        let i = CycNum::root_of_unity(1, 4);
        assert_eq!(&i * &i, CycNum::from_int(-1));
        assert_eq!(CycNum::root_of_unity(-1, 4), CycNum::root_of_unity(3, 4));
    }

    #[test]
    fn division() {
        let z8 = CycNum::root_of_unity(1, 8);
        assert_eq!(CycNum::one().div(&z8).unwrap(), CycNum::root_of_unity(7, 8));
        assert!(matches!(CycNum::one().div(&CycNum::zero()), Err(Error::DivisionByZero)));
        let x = &CycNum::frac(1, 2) + &CycNum::root_of_unity(1, 5);
        assert_eq!(&x * &x.inverse().unwrap(), CycNum::one());
    }

    #[test]
    fn lifting() {
        let m1 = CycNum::root_of_unity(1, 2).lift_order(4).unwrap();
        assert_eq!(m1, CycNum::root_of_unity(2, 4));
        assert_eq!(m1.order(), 4);
        assert!(CycNum::one().lift_order(12).unwrap().is_one());
        let z3 = CycNum::root_of_unity(1, 3).lift_order(6).unwrap();
        assert_eq!(z3.coeffs(), CycNum::root_of_unity(2, 6).coeffs());
        assert!(CycNum::root_of_unity(1, 3).lift_order(4).is_err());
    }

    #[test]
    fn reduce_and_text() {
        let x = CycNum::root_of_unity(2, 4);
        assert_eq!(x.to_string(), "cyc(1)[-1]");
        let y = &CycNum::frac(1, 2) + &CycNum::root_of_unity(1, 3);
        assert_eq!(y.to_string(), "cyc(3)[1/2, 1]");
        assert_eq!(y.to_string().parse::<CycNum>().unwrap(), y);
        let z6 = CycNum::root_of_unity(1, 6);
        assert_eq!(z6.to_string(), "cyc(3)[1, 1]");
    }

    #[test]
    fn approx_values() {
        assert_eq!(CycNum::from_int(-1).approx(), (-1.0, 0.0));
        let (re, im) = CycNum::root_of_unity(1, 4).approx();
        assert!(re.abs() < 1e-15 && (im - 1.0).abs() < 1e-15);
    }
}
