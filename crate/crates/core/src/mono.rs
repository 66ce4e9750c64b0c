//! Monomials q·ζ_m^k and short sums of them.
//!
//! The modular data of abelian twisted models is almost entirely monomial,
//! so the heavy contractions run on this representation and only fall back
//! to [`CycNum`] when a sum has to be decided.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::CycNum;

pub type Q = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    q: Q,
    k: u64,
    m: u64,
}

impl Mono {
    pub fn new(q: Q, k: u64, m: u64) -> Self {
        assert!(m > 0);
        let mut r = Mono { q, k: k % m, m };
        r.fold();
        r
    }

    pub fn zero(m: u64) -> Self {
        Mono::new(Q::zero(), 0, m)
    }

    pub fn one(m: u64) -> Self {
        Mono::new(Q::one(), 0, m)
    }

    pub fn rational(q: Q, m: u64) -> Self {
        Mono::new(q, 0, m)
    }

    pub fn root(k: u64, m: u64) -> Self {
        Mono::new(Q::one(), k, m)
    }

    // canonical form: k in [0, m/2) for even m, zero has k = 0
    fn fold(&mut self) {
        if self.q.is_zero() {
            self.k = 0;
        } else if self.m.is_multiple_of(2) && self.k >= self.m / 2 {
            self.k -= self.m / 2;
            self.q = -self.q;
        }
    }

    pub fn q(&self) -> Q {
        self.q
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn lift(&self, m: u64) -> Self {
        assert!(m.is_multiple_of(self.m), "lift to a non-multiple order");
        Mono::new(self.q, self.k * (m / self.m), m)
    }

    fn common(a: &Mono, b: &Mono) -> (Mono, Mono) {
        if a.m == b.m {
            (*a, *b)
        } else {
            let m = a.m.lcm(&b.m);
            (a.lift(m), b.lift(m))
        }
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (a, b) = Mono::common(self, o);
        Mono::new(a.q * b.q, a.k + b.k, a.m)
    }

    pub fn scale(&self, q: Q) -> Mono {
        Mono::new(self.q * q, self.k, self.m)
    }

    pub fn conj(&self) -> Mono {
        Mono::new(self.q, self.m - self.k, self.m)
    }

    pub fn neg(&self) -> Mono {
        Mono::new(-self.q, self.k, self.m)
    }

    pub fn inv(&self) -> Result<Mono> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Mono::new(self.q.recip(), self.m - self.k, self.m))
    }

    pub fn div(&self, o: &Mono) -> Result<Mono> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn to_cyc(&self) -> CycNum {
        let q = BigRational::new(BigInt::from(*self.q.numer()), BigInt::from(*self.q.denom()));
        CycNum::root_of_unity(self.k as i64, self.m).scale(&q)
    }

    /// Same value, compared across orders.
    pub fn same(&self, o: &Mono) -> bool {
        let (a, b) = Mono::common(self, o);
        a == b
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cyc())
    }
}

/// A finite sum Σ q_k ζ_m^k.
#[derive(Clone, Debug, Default)]
pub struct Acc {
    m: u64,
    terms: Vec<(u64, Ratio<i128>)>,
}

impl Acc {
    pub fn new(m: u64) -> Self {
        Acc { m, terms: Vec::new() }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn add(&mut self, x: &Mono) {
        if x.is_zero() {
            return;
        }
        let x = if x.m == self.m {
            *x
        } else {
            let m = self.m.lcm(&x.m);
            if m != self.m {
                self.relift(m);
            }
            x.lift(m)
        };
        let q = Ratio::new(*x.q.numer() as i128, *x.q.denom() as i128);
        match self.terms.iter().position(|t| t.0 == x.k) {
            Some(i) => {
                self.terms[i].1 += q;
                if self.terms[i].1.is_zero() {
                    self.terms.swap_remove(i);
                }
            }
            None => self.terms.push((x.k, q)),
        }
    }

    pub fn add_acc(&mut self, o: &Acc) {
        for (k, q) in &o.terms {
            let x = Mono::new(Q::new(*q.numer() as i64, *q.denom() as i64), *k, o.m);
            self.add(&x);
        }
    }

    pub fn sub_mono(&mut self, x: &Mono) {
        self.add(&x.neg());
    }

    fn relift(&mut self, m: u64) {
        let f = m / self.m;
        let old = std::mem::take(&mut self.terms);
        self.m = m;
        for (k, q) in old {
            self.terms.push((k * f, q));
        }
    }

    pub fn monomials(&self) -> Vec<Mono> {
        self.terms.iter().map(|(k, q)| Mono::new(Q::new(*q.numer() as i64, *q.denom() as i64), *k, self.m)).collect()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn to_cyc(&self) -> CycNum {
        let mut s = CycNum::zero();
        for (k, q) in &self.terms {
            let r = BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()));
            s = s + CycNum::root_of_unity(*k as i64, self.m).scale(&r);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.to_cyc().is_zero()
    }

    /// The sum as a single monomial, if it is one.
    pub fn to_mono(&self) -> Result<Mono> {
        let narrow = |q: &Ratio<i128>| -> Result<Q> {
            let n = i64::try_from(*q.numer()).map_err(|_| Error::Inconsistent("coefficient overflow".into()))?;
            let d = i64::try_from(*q.denom()).map_err(|_| Error::Inconsistent("coefficient overflow".into()))?;
            Ok(Q::new(n, d))
        };
        match self.terms.len() {
            0 => return Ok(Mono::zero(self.m)),
            1 => {
                let (k, q) = &self.terms[0];
                return Ok(Mono::new(narrow(q)?, *k, self.m));
            }
            _ => {}
        }
        let c = self.to_cyc();
        if c.is_zero() {
            return Ok(Mono::zero(self.m));
        }
        for k in 0..self.m {
            let r = &c * &CycNum::root_of_unity(-(k as i64), self.m);
            if let Some(q) = r.as_rational() {
                let n: i64 = q.numer().try_into().map_err(|_| Error::Inconsistent("coefficient overflow".into()))?;
                let d: i64 = q.denom().try_into().map_err(|_| Error::Inconsistent("coefficient overflow".into()))?;
                return Ok(Mono::new(Q::new(n, d), k, self.m));
            }
        }
        Err(Error::Inconsistent(format!("sum {c} is not a monomial")))
    }

    /// Exact equality with a monomial.
    pub fn equals(&self, x: &Mono) -> bool {
        let mut d = self.clone();
        d.sub_mono(x);
        d.is_zero()
    }
}

/// Exact positivity of a rational monomial.
pub fn is_positive_rational(x: &Mono) -> bool {
    x.k == 0 && x.q.is_positive()
}

/// Nonnegative integer value of a monomial, if it is one.
pub fn as_count(x: &Mono) -> Option<u64> {
    if x.is_zero() {
        return Some(0);
    }
    if x.k == 0 && x.q.is_integer() && x.q.is_positive() {
        Some(*x.q.numer() as u64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_and_mul() {
        let i = Mono::root(1, 4);
        assert_eq!(i.mul(&i), Mono::rational(Q::from(-1), 4));
        assert_eq!(i.mul(&i.conj()), Mono::one(4));
        assert!(Mono::root(1, 2).same(&Mono::rational(Q::from(-1), 6)));
        let mut a = Acc::new(3);
        for k in 0..3 {
            a.add(&Mono::root(k, 3));
        }
        assert!(a.is_zero());
        assert_eq!(a.to_mono().unwrap(), Mono::zero(3));
        let mut b = Acc::new(4);
        b.add(&Mono::root(1, 4));
        b.add(&Mono::root(1, 4));
        assert_eq!(b.to_mono().unwrap(), Mono::new(Q::from(2), 1, 4));
    }
}
