//! Exact and truncated arithmetic shared by the rest of the crate.
//!
//! Scalars are described by three small traits. [`Ring`] and [`Field`] carry a
//! "like" context (`zero_like`, `from_i64_like`) so that types whose zero
//! depends on a shape, such as a jet of given order or a polynomial of given
//! arity, fit the same generic code as `f64`. [`Analytic`] adds the principal
//! branches of `sqrt`, `ln`, `exp` and real powers.

mod jet;
mod mpoly;

pub use jet::Jet;
pub use mpoly::{mpoly_arith, MPoly, Monomial, PolyOp};

use core::ops::{Add, Mul, Neg, Sub};

use alloc::format;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub trait Ring: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn zero_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn is_exact_zero(&self) -> bool;

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        match n.to_i64() {
            Some(v) => self.from_i64_like(v),
            None => {
                // Horner in base 2^32 keeps exact types exact.
                let base = self.from_i64_like(1 << 32);
                let (sign, digits) = n.to_u32_digits();
                let mut acc = self.zero_like();
                for d in digits.iter().rev() {
                    acc = acc * base.clone() + self.from_i64_like(*d as i64);
                }
                if sign == num_bigint::Sign::Minus {
                    -acc
                } else {
                    acc
                }
            }
        }
    }
}

/// Rings containing the rationals.
pub trait QAlgebra: Ring {
    fn from_rational_like(&self, q: &Rational) -> Self;

    fn from_ratio_like(&self, num: i64, den: i64) -> Self {
        self.from_rational_like(&rat_frac(num, den))
    }
}

pub trait Field: QAlgebra {
    fn try_div(&self, rhs: &Self) -> Result<Self>;
}

/// Principal-branch elementary functions, cut along (−∞, 0].
pub trait Analytic: Field {
    fn from_f64_like(&self, x: f64) -> Self;
    fn sqrt(&self) -> Result<Self>;
    fn ln(&self) -> Result<Self>;
    fn exp(&self) -> Self;
    fn powf(&self, alpha: f64) -> Result<Self>;
}

impl Ring for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn from_i64_like(&self, n: i64) -> Self {
        n as f64
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
}

impl QAlgebra for f64 {
    fn from_rational_like(&self, q: &Rational) -> Self {
        rat_to_f64(q)
    }
}

impl Field for f64 {
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0.0 {
            return Err(Error::singular("division by zero"));
        }
        Ok(self / rhs)
    }
}

impl Analytic for f64 {
    fn from_f64_like(&self, x: f64) -> Self {
        x
    }
    fn sqrt(&self) -> Result<Self> {
        if *self < 0.0 {
            return Err(Error::domain(format!("sqrt of negative real {self}")));
        }
        Ok(Float::sqrt(*self))
    }
    fn ln(&self) -> Result<Self> {
        if *self <= 0.0 {
            return Err(Error::domain(format!("log of non-positive real {self}")));
        }
        Ok(Float::ln(*self))
    }
    fn exp(&self) -> Self {
        Float::exp(*self)
    }
    fn powf(&self, alpha: f64) -> Result<Self> {
        if *self <= 0.0 {
            return Err(Error::domain(format!("power of non-positive real {self}")));
        }
        Ok(Float::powf(*self, alpha))
    }
}

impl Ring for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl QAlgebra for Complex64 {
    fn from_rational_like(&self, q: &Rational) -> Self {
        Complex64::new(rat_to_f64(q), 0.0)
    }
}

impl Field for Complex64 {
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_exact_zero() {
            return Err(Error::singular("division by zero"));
        }
        Ok(self / rhs)
    }
}

fn on_cut(z: &Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

impl Analytic for Complex64 {
    fn from_f64_like(&self, x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn sqrt(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Ok(*self);
        }
        if on_cut(self) {
            return Err(Error::domain(format!("sqrt on the branch cut at {self}")));
        }
        Ok(Complex64::sqrt(*self))
    }
    fn ln(&self) -> Result<Self> {
        if on_cut(self) {
            return Err(Error::domain(format!("log on the branch cut at {self}")));
        }
        Ok(Complex64::ln(*self))
    }
    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }
    fn powf(&self, alpha: f64) -> Result<Self> {
        if on_cut(self) {
            return Err(Error::domain(format!("power on the branch cut at {self}")));
        }
        Ok(Complex64::exp(Complex64::ln(*self) * alpha))
    }
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }
}

impl QAlgebra for Rational {
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
}

impl Field for Rational {
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if Zero::is_zero(rhs) {
            return Err(Error::singular("division by zero"));
        }
        Ok(self / rhs)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Integer as an exact rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let s = if q.is_negative() { -1.0 } else { 1.0 };
        s * f64::INFINITY
    })
}
