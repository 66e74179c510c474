use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use super::{QAlgebra, Rational, Ring};
use crate::{Error, Result};

/// Exponent vector over `x₁..x_R`, ordered by total degree and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(alloc::vec![0; arity])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients.
///
/// The representation is canonical: terms are kept in a sorted map and zero
/// coefficients are never stored, so `==` decides polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked arithmetic; fails only if the arities differ.
pub fn mpoly_arith(a: &MPoly, b: &MPoly, op: PolyOp) -> Result<MPoly> {
    if a.arity != b.arity {
        return Err(Error::input(alloc::format!("polynomial arity mismatch: {} vs {}", a.arity, b.arity)));
    }
    Ok(match op {
        PolyOp::Add => a.add_ref(b),
        PolyOp::Sub => a.add_ref(&b.neg_ref()),
        PolyOp::Mul => a.mul_ref(b),
    })
}

impl MPoly {
    pub fn zero(arity: usize) -> Self {
        MPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.insert(Monomial::one(arity), c);
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    /// The indeterminate `x_i` (1-based, matching the usual x₁..x_R naming).
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= arity, "variable x{i} outside arity {arity}");
        let mut e = alloc::vec![0; arity];
        e[i - 1] = 1;
        let mut p = Self::zero(arity);
        p.insert(Monomial(e), Rational::one());
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::input("exponent vector has the wrong arity"));
            }
            p.insert(Monomial(e), c);
        }
        Ok(p)
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Embeds into a ring with more indeterminates, padding exponents with zeros.
    pub fn extend_arity(&self, arity: usize) -> Result<Self> {
        if arity < self.arity {
            return Err(Error::input("cannot shrink polynomial arity"));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(arity, 0);
                (Monomial(e), c.clone())
            })
            .collect();
        Ok(MPoly { arity, terms })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.arity);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        MPoly { arity: self.arity, terms }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    fn neg_ref(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        MPoly { arity: self.arity, terms }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert(ma.times(mb), ca * cb);
            }
        }
        out
    }

    /// Exact evaluation at rational points.
    pub fn eval(&self, xs: &[Rational]) -> Result<Rational> {
        if xs.len() != self.arity {
            return Err(Error::input("evaluation point has the wrong arity"));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in xs.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluation in any ring containing the rationals, e.g. to substitute
    /// floating-point values; `proto` supplies the zero when the arity is 0.
    pub fn eval_in<T: QAlgebra>(&self, xs: &[T], proto: &T) -> Result<T> {
        if xs.len() != self.arity {
            return Err(Error::input("evaluation point has the wrong arity"));
        }
        let mut acc = proto.zero_like();
        for (m, c) in &self.terms {
            let mut t = proto.from_rational_like(c);
            for (x, &e) in xs.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// The constant coefficient if the polynomial has no indeterminates in it.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: Self) -> MPoly {
        mpoly_arith(&self, &rhs, PolyOp::Add).expect("arity mismatch")
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: Self) -> MPoly {
        mpoly_arith(&self, &rhs, PolyOp::Sub).expect("arity mismatch")
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: Self) -> MPoly {
        mpoly_arith(&self, &rhs, PolyOp::Mul).expect("arity mismatch")
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        mpoly_arith(self, rhs, PolyOp::Add).expect("arity mismatch")
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        mpoly_arith(self, rhs, PolyOp::Sub).expect("arity mismatch")
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        mpoly_arith(self, rhs, PolyOp::Mul).expect("arity mismatch")
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.neg_ref()
    }
}

impl Ring for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.arity)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        MPoly::constant(self.arity, super::rat(n))
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn from_bigint_like(&self, n: &num_bigint::BigInt) -> Self {
        MPoly::constant(self.arity, Rational::from_integer(n.clone()))
    }
}

impl QAlgebra for MPoly {
    fn from_rational_like(&self, q: &Rational) -> Self {
        MPoly::constant(self.arity, q.clone())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", v + 1)?,
                    _ => write!(f, "*x{}^{e}", v + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn product_of_two_variables() {
        let p = MPoly::var(2, 1) * MPoly::var(2, 2);
        let expect = MPoly::from_terms(2, [(alloc::vec![1, 1], rat(1))]).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn difference_with_itself_is_zero() {
        let a = MPoly::var(2, 1) + MPoly::var(2, 2);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn square_expands_and_evaluates() {
        let a = MPoly::var(1, 1) + MPoly::one(1);
        let sq = &a * &a;
        let expect =
            MPoly::from_terms(1, [(alloc::vec![2], rat(1)), (alloc::vec![1], rat(2)), (alloc::vec![0], rat(1))])
                .unwrap();
        assert_eq!(sq, expect);
        assert_eq!(sq.eval(&[rat(3)]).unwrap(), rat(16));
    }

    #[test]
    fn arity_mismatch_is_an_input_error() {
        let r = mpoly_arith(&MPoly::var(1, 1), &MPoly::var(2, 1), PolyOp::Add);
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn term_order_is_degree_then_lex() {
        let p = MPoly::var(2, 1) * MPoly::var(2, 1) + MPoly::var(2, 2) + MPoly::one(2);
        let degs: Vec<u32> = p.terms().map(|(m, _)| m.degree()).collect();
        assert_eq!(degs, alloc::vec![0, 1, 2]);
    }
}
