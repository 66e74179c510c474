//! Partial Bell polynomials and the exact identities built on them.
//!
//! [`BellTable`] evaluates `B_{n,k}(x₁, x₂, …)` by the recurrence
//! `B_{n,k} = Σ_j C(n−1, j−1) x_j B_{n−j,k−1}` over any [`Ring`], so the same
//! code produces exact polynomials in symbolic `x_r`, rationals, or floats.
//! [`bell_partial_enumerated`] is the slow multi-index sum kept as a check.

mod conjecture;
mod footnote;
mod gamma;

pub use conjecture::{conjecture_sides, count_tuples, verify_conjecture, ConjectureVariant};
pub use footnote::{footnote_sides, verify_footnote_identity};
pub use gamma::{gamma_closed, gamma_numeric, gamma_recursive, x_from_moments, GammaTable};

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{binomial, factorial, rat, MPoly, QAlgebra, Rational, Ring};
use crate::{Error, Result};

/// `n!!` for `n ≥ −1`, with `(−1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::input(alloc::format!("double factorial of {n} < -1")));
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

/// Triangle of partial Bell polynomials in the variables `xs = [x₁, x₂, …]`.
///
/// Entry `(n, k)` is available whenever `n − k + 1 ≤ xs.len()`, which is
/// exactly the set of variables the polynomial depends on.
#[derive(Clone, Debug)]
pub struct BellTable<T> {
    xs: Vec<T>,
    rows: Vec<Vec<Option<T>>>,
}

impl<T: Ring> BellTable<T> {
    /// `proto` fixes the shape of the zero (arity of a polynomial, order of a jet).
    pub fn new(xs: Vec<T>, nmax: usize, proto: &T) -> Self {
        let zero = proto.zero_like();
        let one = proto.one_like();
        let avail = |n: usize, k: usize| k > n || n == 0 || k == 0 || n + 1 - k <= xs.len();
        let mut rows: Vec<Vec<Option<T>>> = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax {
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let v = if n == 0 {
                    Some(one.clone())
                } else if k == 0 {
                    Some(zero.clone())
                } else if !avail(n, k) {
                    None
                } else {
                    let mut acc = zero.clone();
                    for j in 1..=(n + 1 - k) {
                        let prev = if k - 1 > n - j { Some(&zero) } else { rows[n - j][k - 1].as_ref() };
                        let prev = prev.expect("recurrence only touches available entries");
                        if prev.is_exact_zero() {
                            continue;
                        }
                        let c = proto.from_bigint_like(&binomial(n as i64 - 1, j as i64 - 1));
                        acc = acc + c * xs[j - 1].clone() * prev.clone();
                    }
                    Some(acc)
                };
                row.push(v);
            }
            rows.push(row);
        }
        BellTable { xs, rows }
    }

    pub fn nmax(&self) -> usize {
        self.rows.len() - 1
    }

    /// `B_{n,k}`; zero for `k > n` and for `n < 0` or `k < 0` treated as absent terms.
    pub fn get(&self, n: i64, k: i64) -> Result<T> {
        let proto = self.rows[0][0].as_ref().expect("B_00 always present");
        if n < 0 || k < 0 || k > n {
            return Ok(proto.zero_like());
        }
        let (n, k) = (n as usize, k as usize);
        if n > self.nmax() {
            return Err(Error::input(alloc::format!("B_{{{n},{k}}} beyond table size {}", self.nmax())));
        }
        self.rows[n][k].clone().ok_or_else(|| {
            Error::input(alloc::format!("B_{{{n},{k}}} needs x_1..x_{} but only {} given", n + 1 - k, self.xs.len()))
        })
    }
}

/// Symbolic `x₁..x_R` as polynomials of arity `R`.
pub fn symbolic_vars(arity: usize) -> Vec<MPoly> {
    (1..=arity).map(|i| MPoly::var(arity, i)).collect()
}

/// Bell table over the symbolic variables `x₁..x_R`, rows up to `nmax`.
pub fn symbolic_table(arity: usize, nmax: usize) -> BellTable<MPoly> {
    BellTable::new(symbolic_vars(arity), nmax, &MPoly::zero(arity))
}

/// `B_{n,k}(x₁, …, x_{n−k+1})` via the recurrence.
pub fn bell_partial<T: Ring>(n: i64, k: i64, xs: &[T], proto: &T) -> Result<T> {
    if n < 0 || k < 0 {
        return Err(Error::input("Bell polynomial indices must be non-negative"));
    }
    if k > n || (n >= 1 && k == 0) {
        return Ok(proto.zero_like());
    }
    if n == 0 {
        return Ok(proto.one_like());
    }
    let need = (n - k + 1) as usize;
    if xs.len() < need {
        return Err(Error::input(alloc::format!("B_{{{n},{k}}} needs {need} variables, got {}", xs.len())));
    }
    BellTable::new(xs[..need].to_vec(), n as usize, proto).get(n, k)
}

/// `B_{n,k}` straight from the defining multi-index sum.
pub fn bell_partial_enumerated<T: QAlgebra>(n: i64, k: i64, xs: &[T], proto: &T) -> Result<T> {
    if n < 0 || k < 0 {
        return Err(Error::input("Bell polynomial indices must be non-negative"));
    }
    if n == 0 {
        return Ok(if k == 0 { proto.one_like() } else { proto.zero_like() });
    }
    if k > n || k == 0 {
        return Ok(proto.zero_like());
    }
    let m = (n - k + 1) as usize;
    if xs.len() < m {
        return Err(Error::input("not enough variables for the enumerated Bell sum"));
    }
    let nfact = factorial(n as u32);
    let mut acc = proto.zero_like();
    let mut js = alloc::vec![0u32; m];
    enumerate(&mut js, 0, k as u32, n as u32, &mut |js: &[u32]| {
        let mut den = BigInt::one();
        for (i, &j) in js.iter().enumerate() {
            den *= factorial(j) * num_traits::pow(factorial(i as u32 + 1), j as usize);
        }
        let mut term = proto.from_rational_like(&Rational::new(nfact.clone(), den));
        for (i, &j) in js.iter().enumerate() {
            for _ in 0..j {
                term = term * xs[i].clone();
            }
        }
        acc = acc.clone() + term;
    });
    Ok(acc)
}

// Distributes `count` parts of total weight `weight` over sizes pos+1..len.
fn enumerate(js: &mut [u32], pos: usize, count: u32, weight: u32, f: &mut impl FnMut(&[u32])) {
    if pos == js.len() {
        if count == 0 && weight == 0 {
            f(js);
        }
        return;
    }
    let size = pos as u32 + 1;
    let mut j = 0;
    while j <= count && j * size <= weight {
        js[pos] = j;
        enumerate(js, pos + 1, count - j, weight - j * size, f);
        j += 1;
    }
    js[pos] = 0;
}

/// Both sides of the linear Bell identity
/// `Σ_{j=1}^{n−k} (αj+β) C(n,j) x_j B_{n−j,k} = (αn + β(k+1)) B_{n,k+1}`
/// as polynomials in `x₁..x_{n−k}`.
pub fn bell_identity_1_sides(n: i64, k: i64, alpha: &Rational, beta: &Rational) -> Result<(MPoly, MPoly)> {
    if n < 1 || k < 0 || k > n - 1 {
        return Err(Error::input(alloc::format!("need n ≥ 1 and 0 ≤ k ≤ n−1, got n={n}, k={k}")));
    }
    let arity = (n - k) as usize;
    let table = symbolic_table(arity, n as usize);
    let xs = symbolic_vars(arity);
    let mut lhs = MPoly::zero(arity);
    for j in 1..=(n - k) {
        let w = alpha * rat(j) + beta.clone();
        let c = w * Rational::from_integer(binomial(n, j));
        if c.is_zero() {
            continue;
        }
        lhs = lhs + (&xs[j as usize - 1] * &table.get(n - j, k)?).scale(&c);
    }
    let c = alpha * rat(n) + beta * rat(k + 1);
    let rhs = table.get(n, k + 1)?.scale(&c);
    Ok((lhs, rhs))
}

pub fn verify_bell_identity_1(n: i64, k: i64, alpha: &Rational, beta: &Rational) -> Result<bool> {
    let (lhs, rhs) = bell_identity_1_sides(n, k, alpha, beta)?;
    Ok(lhs == rhs)
}

// Factorial as a rational, zero for negative arguments (reciprocal Gamma convention
// is applied by the callers that divide by it).
pub(crate) fn fact_q(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::from_integer(factorial(n as u32))
    }
}

/// `1/n!`, which vanishes at negative integers.
pub(crate) fn inv_fact_q(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::one(), factorial(n as u32))
    }
}

pub(crate) fn dfact_q(n: i64) -> Rational {
    Rational::from_integer(double_factorial(n).expect("callers pass n ≥ −1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_frac;

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(5).unwrap(), BigInt::from(15));
        assert_eq!(double_factorial(-1).unwrap(), BigInt::one());
        assert_eq!(double_factorial(0).unwrap(), BigInt::one());
        assert_eq!(double_factorial(9).unwrap(), BigInt::from(945));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn empty_bell_polynomials() {
        let p = MPoly::zero(1);
        assert_eq!(bell_partial(0, 0, &[] as &[MPoly], &p).unwrap(), MPoly::one(1));
        assert!(bell_partial(0, 1, &[] as &[MPoly], &p).unwrap().is_zero());
        assert!(bell_partial(2, 5, &symbolic_vars(1), &p).unwrap().is_zero());
    }

    #[test]
    fn diagonal_is_power_of_x1() {
        let xs = symbolic_vars(1);
        let b = bell_partial(4, 4, &xs, &MPoly::zero(1)).unwrap();
        let x = &xs[0];
        assert_eq!(b, &(x * x) * &(x * x));
    }

    #[test]
    fn b32_counts_set_partitions() {
        let xs = symbolic_vars(2);
        let b = bell_partial(3, 2, &xs, &MPoly::zero(2)).unwrap();
        assert_eq!(b, (&xs[0] * &xs[1]).scale(&rat(3)));
    }

    #[test]
    fn recurrence_matches_definition() {
        for n in 0..=7 {
            let xs = symbolic_vars(n.max(1) as usize);
            let proto = MPoly::zero(xs.len());
            for k in 0..=n {
                let a = bell_partial(n, k, &xs, &proto).unwrap();
                let b = bell_partial_enumerated(n, k, &xs, &proto).unwrap();
                assert_eq!(a, b, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn identity_1_small_cases() {
        assert!(verify_bell_identity_1(1, 0, &rat(1), &rat(0)).unwrap());
        assert!(verify_bell_identity_1(4, 1, &rat(2), &rat(3)).unwrap());
        let (lhs, rhs) = bell_identity_1_sides(5, 2, &rat(1), &rat(1)).unwrap();
        let x1 = MPoly::var(3, 1);
        let x1_5 = (0..4).fold(x1.clone(), |acc, _| &acc * &x1);
        assert_eq!(lhs, rhs);
        assert_ne!(lhs, rhs + x1_5);
        assert!(verify_bell_identity_1(6, 3, &rat_frac(-1, 2), &rat(3)).unwrap());
    }
}
