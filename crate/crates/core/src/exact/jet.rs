use core::ops::{Add, Mul, Neg, Sub};

use alloc::vec::Vec;

use super::{Analytic, Field, QAlgebra, Rational, Ring};
use crate::{Error, Result};

/// Truncated Taylor series `Σ_{k≤K} a_k t^k` with a fixed order `K`.
///
/// Binary operations between jets of different order truncate to the smaller
/// one. Jets are themselves [`Ring`]/[`Field`]/[`Analytic`] scalars, so a
/// `Jet<Jet<Complex64>>` is a bivariate expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Jet<T> {
    /// Panics if `coeffs` is empty; a jet always has a constant term.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        Jet { coeffs }
    }

    pub fn constant(value: T, order: usize) -> Self {
        let z = value.zero_like();
        let mut coeffs = alloc::vec![z; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// The expansion of `value + t`.
    pub fn variable(value: T, order: usize) -> Self {
        Self::linear(value.clone(), value.one_like(), order)
    }

    /// The expansion of `value + slope·t`.
    pub fn linear(value: T, slope: T, order: usize) -> Self {
        let mut j = Self::constant(value, order);
        if order >= 1 {
            j.coeffs[1] = slope;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn value(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coeffs.len());
        Jet { coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn scale(&self, s: &T) -> Self {
        Jet { coeffs: self.coeffs.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn add_scalar(&self, s: &T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + s.clone();
        out
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul_ref(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[0].clone() * rhs.coeffs[k].clone();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * rhs.coeffs[k - j].clone();
            }
            out.push(acc);
        }
        Jet { coeffs: out }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.coeffs[0].one_like(), self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates the truncated series at `t`.
    pub fn eval(&self, t: &T) -> T {
        let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = acc * t.clone() + a.clone();
        }
        acc
    }

    /// Coefficients of `d/dt`, one order lower (order 0 stays order 0).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Jet { coeffs: alloc::vec![self.coeffs[0].zero_like()] };
        }
        let coeffs =
            self.coeffs[1..].iter().enumerate().map(|(k, a)| a.clone() * a.from_i64_like(k as i64 + 1)).collect();
        Jet { coeffs }
    }

    fn zip(&self, rhs: &Self, f: impl Fn(T, T) -> T) -> Self {
        let coeffs = self.coeffs.iter().zip(rhs.coeffs.iter()).map(|(a, b)| f(a.clone(), b.clone())).collect();
        Jet { coeffs }
    }
}

impl<T: Field> Jet<T> {
    pub fn try_div_ref(&self, rhs: &Self) -> Result<Self> {
        let b0 = &rhs.coeffs[0];
        if b0.is_exact_zero() {
            return Err(Error::singular("division by a jet with zero constant term"));
        }
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut q: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc - rhs.coeffs[j].clone() * q[k - j].clone();
            }
            q.push(acc.try_div(b0)?);
        }
        Ok(Jet { coeffs: q })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::constant(self.coeffs[0].one_like(), self.order()).try_div_ref(self)
    }

    pub fn div_scalar(&self, s: &T) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.try_div(s)).collect::<Result<_>>()?;
        Ok(Jet { coeffs })
    }

    /// Antiderivative with zero constant term, one order higher.
    pub fn integral(&self) -> Self {
        let z = self.coeffs[0].zero_like();
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(z);
        for (k, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a.try_div(&a.from_i64_like(k as i64 + 1)).expect("k+1 is nonzero"));
        }
        Jet { coeffs }
    }
}

impl<T: Analytic> Jet<T> {
    pub fn sqrt(&self) -> Result<Self> {
        let a = &self.coeffs;
        let s0 = a[0].sqrt()?;
        if s0.is_exact_zero() {
            return Err(Error::domain("sqrt of a jet with zero constant term"));
        }
        let two_s0 = s0.clone() + s0.clone();
        let mut s = alloc::vec![s0];
        for k in 1..a.len() {
            let mut acc = a[k].clone();
            for j in 1..k {
                acc = acc - s[j].clone() * s[k - j].clone();
            }
            s.push(acc.try_div(&two_s0)?);
        }
        Ok(Jet { coeffs: s })
    }

    /// Real power `self^alpha` on the principal branch.
    pub fn powf(&self, alpha: f64) -> Result<Self> {
        let a = &self.coeffs;
        let a0 = &a[0];
        let p0 = a0.powf(alpha)?;
        let mut p = alloc::vec![p0];
        for k in 1..a.len() {
            let mut acc = a0.zero_like();
            for j in 1..=k {
                let w = a0.from_f64_like((alpha + 1.0) * j as f64 - k as f64);
                acc = acc + w * a[j].clone() * p[k - j].clone();
            }
            let den = a0.clone() * a0.from_i64_like(k as i64);
            p.push(acc.try_div(&den)?);
        }
        Ok(Jet { coeffs: p })
    }

    pub fn ln(&self) -> Result<Self> {
        let a = &self.coeffs;
        let a0 = &a[0];
        let mut l = alloc::vec![a0.ln()?];
        for k in 1..a.len() {
            let mut acc = a0.zero_like();
            for j in 1..k {
                acc = acc + a0.from_i64_like(j as i64) * l[j].clone() * a[k - j].clone();
            }
            let corr = acc.try_div(&a0.from_i64_like(k as i64))?;
            l.push((a[k].clone() - corr).try_div(a0)?);
        }
        Ok(Jet { coeffs: l })
    }

    pub fn exp(&self) -> Self {
        let a = &self.coeffs;
        let mut e = alloc::vec![a[0].exp()];
        for k in 1..a.len() {
            let mut acc = a[0].zero_like();
            for j in 1..=k {
                acc = acc + a[0].from_i64_like(j as i64) * a[j].clone() * e[k - j].clone();
            }
            e.push(acc.try_div(&a[0].from_i64_like(k as i64)).expect("k is nonzero"));
        }
        Jet { coeffs: e }
    }
}

impl<T: Ring> Add for Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl<T: Ring> Sub for Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl<T: Ring> Mul for Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a, T: Ring> Add<&'a Jet<T>> for &'a Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: &Jet<T>) -> Jet<T> {
        self.zip(rhs, |a, b| a + b)
    }
}

impl<'a, T: Ring> Sub<&'a Jet<T>> for &'a Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: &Jet<T>) -> Jet<T> {
        self.zip(rhs, |a, b| a - b)
    }
}

impl<'a, T: Ring> Mul<&'a Jet<T>> for &'a Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: &Jet<T>) -> Jet<T> {
        self.mul_ref(rhs)
    }
}

impl<T: Ring> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Self {
        Jet { coeffs: self.coeffs.into_iter().map(|a| -a).collect() }
    }
}

impl<T: Ring> Ring for Jet<T> {
    fn zero_like(&self) -> Self {
        Jet::constant(self.coeffs[0].zero_like(), self.order())
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Jet::constant(self.coeffs[0].from_i64_like(n), self.order())
    }
    fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_exact_zero())
    }
    fn from_bigint_like(&self, n: &num_bigint::BigInt) -> Self {
        Jet::constant(self.coeffs[0].from_bigint_like(n), self.order())
    }
}

impl<T: QAlgebra> QAlgebra for Jet<T> {
    fn from_rational_like(&self, q: &Rational) -> Self {
        Jet::constant(self.coeffs[0].from_rational_like(q), self.order())
    }
}

impl<T: Field> Field for Jet<T> {
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.try_div_ref(rhs)
    }
}

impl<T: Analytic> Analytic for Jet<T> {
    fn from_f64_like(&self, x: f64) -> Self {
        Jet::constant(self.coeffs[0].from_f64_like(x), self.order())
    }
    fn sqrt(&self) -> Result<Self> {
        Jet::sqrt(self)
    }
    fn ln(&self) -> Result<Self> {
        Jet::ln(self)
    }
    fn exp(&self) -> Self {
        Jet::exp(self)
    }
    fn powf(&self, alpha: f64) -> Result<Self> {
        Jet::powf(self, alpha)
    }
}
