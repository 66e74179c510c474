//! Spectral data: eigenvalue function, induced measure, moments and the map λ̃² ↦ c.
//!
//! The measure is linear in the coupling, `ρ(T) = λ̃² ρ̂(T)`, so the two
//! integrals
//!
//! ```text
//! I₁(c) = ½ ∫₁^∞ ρ̂(T) dT / ((√(1+c) + √(T+c)) √(T+c))
//! I₀(c) = ½ ∫₁^∞ ρ̂(T) dT / √(T+c)³
//! ```
//!
//! carry all of the c-dependence: the normalisation `W(1) = 1` reads
//! `√(1+c) + λ̃² I₁(c) = 1` and `ρ₀ = 1 − λ̃² I₀(c)`. For `e(x) = x` both have
//! closed forms; any other `e` goes through quadrature.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;

use crate::exact::Jet;
use crate::quad::{integrate_to_inf, QuadOpts, TailMap};
use crate::{Error, Result};

type C = Complex64;

const LN2: f64 = core::f64::consts::LN_2;

/// A user-supplied eigenvalue function `e: ℝ₊ → ℝ₊` with `e(0) = 0`.
pub trait CustomEigenvalue: Send + Sync + fmt::Debug {
    fn e(&self, x: f64) -> f64;
    fn de(&self, x: f64) -> f64;
    fn inv(&self, y: f64) -> f64;
}

#[derive(Clone, Debug, Default)]
pub enum EigenvalueFunction {
    /// `e(x) = x`, the case with closed forms throughout.
    #[default]
    Linear,
    Custom(Arc<dyn CustomEigenvalue>),
}

impl PartialEq for EigenvalueFunction {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (EigenvalueFunction::Linear, EigenvalueFunction::Linear) => true,
            (EigenvalueFunction::Custom(a), EigenvalueFunction::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl EigenvalueFunction {
    pub fn is_linear(&self) -> bool {
        matches!(self, EigenvalueFunction::Linear)
    }

    pub fn e(&self, x: f64) -> f64 {
        match self {
            EigenvalueFunction::Linear => x,
            EigenvalueFunction::Custom(f) => f.e(x),
        }
    }

    /// Samples monotonicity, `e(0) = 0` and the inverse on a geometric grid.
    pub fn validate(&self) -> Result<()> {
        let EigenvalueFunction::Custom(f) = self else {
            return Ok(());
        };
        if f.e(0.0).abs() > 1e-12 {
            return Err(Error::input("custom eigenvalue function must satisfy e(0) = 0"));
        }
        let mut x = 1e-6;
        while x < 1e6 {
            if !(f.de(x) > 0.0) {
                return Err(Error::input(alloc::format!("e'({x}) is not positive")));
            }
            let back = f.inv(f.e(x));
            if (back - x).abs() > 1e-10 * x.max(1.0) {
                return Err(Error::input(alloc::format!("e⁻¹(e({x})) = {back}")));
            }
            x *= 1.7;
        }
        Ok(())
    }

    /// `ρ̂(Y) = 2 / (√Y · e′(e⁻¹((√Y − 1)/2)))`, the measure per unit λ̃².
    pub fn rho_hat(&self, y: f64) -> f64 {
        let sy = Float::sqrt(y);
        match self {
            EigenvalueFunction::Linear => 2.0 / sy,
            EigenvalueFunction::Custom(f) => 2.0 / (sy * f.de(f.inv(0.5 * (sy - 1.0)))),
        }
    }
}

/// The induced measure `ρ(Y) = λ̃² ρ̂(Y)` on `[1, ∞)`.
#[derive(Clone, Debug)]
pub struct Measure {
    pub e: EigenvalueFunction,
    pub lambda2: C,
}

impl Measure {
    pub fn rho(&self, y: f64) -> C {
        self.lambda2 * self.e.rho_hat(y)
    }
}

/// A solved model point. `Z = 1` and `ν = 0` throughout.
#[derive(Clone, Debug)]
pub struct Coupling {
    /// λ̃ itself; odd correlators depend on its sign, not just on λ̃².
    pub lambda: C,
    pub lambda2: C,
    pub c: C,
    /// `c/λ̃²`, finite at λ̃ = 0 and free of cancellation for small couplings.
    pub c_over_lambda2: C,
    pub rho0: C,
    pub e: EigenvalueFunction,
}

impl Coupling {
    pub fn free() -> Self {
        Coupling {
            lambda: C::new(0.0, 0.0),
            lambda2: C::new(0.0, 0.0),
            c: C::new(0.0, 0.0),
            c_over_lambda2: C::new(-4.0 * LN2, 0.0),
            rho0: C::new(1.0, 0.0),
            e: EigenvalueFunction::Linear,
        }
    }

    /// Solves for a given λ̃ (real, imaginary or complex).
    pub fn from_lambda(lambda: C, e: EigenvalueFunction) -> Result<Self> {
        let mut k = solve_c(lambda * lambda, e)?;
        k.lambda = lambda;
        Ok(k)
    }

    pub fn from_real_lambda(lambda: f64) -> Result<Self> {
        Self::from_lambda(C::new(lambda, 0.0), EigenvalueFunction::Linear)
    }

    pub fn sqrt_1pc(&self) -> C {
        (C::new(1.0, 0.0) + self.c).sqrt()
    }

    pub fn measure(&self) -> Measure {
        Measure { e: self.e.clone(), lambda2: self.lambda2 }
    }

    /// `1 − √(1+c) − λ̃² I₁(c)`.
    pub fn residual(&self) -> Result<f64> {
        let ints = integrals(&self.e, self.c)?;
        Ok((C::new(1.0, 0.0) - self.sqrt_1pc() - self.lambda2 * ints.i1).norm())
    }

    pub fn is_free(&self) -> bool {
        self.lambda2.norm() == 0.0
    }
}

/// Values and c-derivatives of `I₁` and `I₀`.
#[derive(Clone, Copy, Debug)]
pub struct Integrals {
    pub i1: C,
    pub di1: C,
    pub i0: C,
    pub di0: C,
}

fn check_c(c: C) -> Result<()> {
    if c.im == 0.0 && c.re <= -1.0 {
        return Err(Error::domain(alloc::format!("c = {c} lies on the cut (−∞, −1]")));
    }
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::domain("c is not finite"));
    }
    Ok(())
}

fn tail_opts() -> QuadOpts {
    QuadOpts { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 2000 }
}

pub fn integrals(e: &EigenvalueFunction, c: C) -> Result<Integrals> {
    check_c(c)?;
    let one = C::new(1.0, 0.0);
    match e {
        EigenvalueFunction::Linear => {
            let s = (one + c).sqrt();
            let sp1 = s + one;
            Ok(Integrals {
                i1: (one + one / s).ln() * 2.0,
                di1: -one / (s * s * sp1),
                i0: C::new(2.0, 0.0) / (s * sp1),
                di0: -(s * 2.0 + one) / (s * s * s * sp1 * sp1),
            })
        }
        EigenvalueFunction::Custom(_) => {
            let jet_c = Jet::variable(c, 1);
            let one_j = Jet::constant(one, 1);
            let s = (one_j.clone() + jet_c.clone()).sqrt()?;
            let k1 = |t: f64| -> Result<Jet<C>> {
                let tau = Jet::variable(c, 1).add_scalar(&C::new(t, 0.0)).sqrt()?;
                Ok((&(&s + &tau) * &tau).recip()?.scale(&C::new(0.5 * e.rho_hat(t), 0.0)))
            };
            let k0 = |t: f64| -> Result<Jet<C>> {
                let tau = Jet::variable(c, 1).add_scalar(&C::new(t, 0.0));
                Ok(tau.powf(-1.5)?.scale(&C::new(0.5 * e.rho_hat(t), 0.0)))
            };
            let part = |f: &dyn Fn(f64) -> Result<Jet<C>>, k: usize| {
                integrate_to_inf(
                    |t| f(t).map(|j| *j.coeff(k)).unwrap_or(C::new(f64::NAN, 0.0)),
                    1.0,
                    TailMap::InverseSquare,
                    tail_opts(),
                )
                .and_then(|(v, err)| {
                    if v.re.is_finite() && v.im.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::Quadrature { estimate: err, wanted: 1e-13 })
                    }
                })
            };
            Ok(Integrals { i1: part(&k1, 0)?, di1: part(&k1, 1)?, i0: part(&k0, 0)?, di0: part(&k0, 1)? })
        }
    }
}

fn coupling_at(lambda2: C, c: C, e: &EigenvalueFunction) -> Result<Coupling> {
    let ints = integrals(e, c)?;
    let one = C::new(1.0, 0.0);
    let s = (one + c).sqrt();
    Ok(Coupling {
        lambda: lambda2.sqrt(),
        lambda2,
        c,
        c_over_lambda2: -ints.i1 * (s + one),
        rho0: one - lambda2 * ints.i0,
        e: e.clone(),
    })
}

/// Solves `W(1) = 1` for c on the branch through `c(0) = 0`.
///
/// Complex and negative λ̃² use Newton continuation along the ray from 0; real
/// positive λ̃² falls back to bisection in `√(1+c)` when Newton misbehaves.
/// λ̃ is taken as the principal root of λ̃²; use [`Coupling::from_lambda`] to fix its sign.
pub fn solve_c(lambda2: C, e: EigenvalueFunction) -> Result<Coupling> {
    e.validate()?;
    if !(lambda2.re.is_finite() && lambda2.im.is_finite()) {
        return Err(Error::input("λ̃² must be finite"));
    }
    if lambda2.norm() == 0.0 {
        let mut k = coupling_at(lambda2, C::new(0.0, 0.0), &e)?;
        k.c = C::new(0.0, 0.0);
        return Ok(k);
    }
    if lambda2.im == 0.0 && lambda2.re > 0.0 {
        let (lc, _) = critical_point(&e)?;
        if Float::sqrt(lambda2.re) >= lc {
            return Err(Error::NoSolution { lambda: Float::sqrt(lambda2.re), critical: lc });
        }
        if let Ok(k) = newton_continuation(lambda2, &e) {
            if k.c.re.is_finite() {
                return Ok(k);
            }
        }
        return bisect_real(lambda2.re, &e);
    }
    if lambda2.im == 0.0 {
        if let Ok(k) = newton_continuation(lambda2, &e) {
            return Ok(k);
        }
        return bisect_real(lambda2.re, &e);
    }
    newton_continuation(lambda2, &e)
}

fn newton_step_c(lambda2: C, c: C, e: &EigenvalueFunction) -> Result<(C, f64)> {
    let one = C::new(1.0, 0.0);
    let ints = integrals(e, c)?;
    let s = (one + c).sqrt();
    let f = s + lambda2 * ints.i1 - one;
    let df = one / (s * 2.0) + lambda2 * ints.di1;
    if df.norm() == 0.0 {
        return Err(Error::singular("vanishing derivative of the normalisation condition"));
    }
    Ok((c - f / df, f.norm()))
}

fn newton_continuation(lambda2: C, e: &EigenvalueFunction) -> Result<Coupling> {
    let steps = if e.is_linear() { 8 } else { 4 };
    let mut c = C::new(-4.0 * LN2, 0.0) * (lambda2 / steps as f64);
    let mut trace = Vec::new();
    for k in 1..=steps {
        let l2 = lambda2 * (k as f64 / steps as f64);
        let mut converged = false;
        for _ in 0..60 {
            let (next, res) = newton_step_c(l2, c, e)?;
            trace.push(res);
            let mut cand = next;
            // Damp steps that would cross the cut.
            let mut damp = 1.0;
            while check_c(cand).is_err() && damp > 1e-6 {
                damp *= 0.5;
                cand = c + (next - c) * damp;
            }
            let dc = (cand - c).norm();
            c = cand;
            if dc <= 1e-15 * (1.0 + c.norm()) || res < 1e-16 {
                converged = true;
                break;
            }
        }
        if !converged {
            let tail = trace.iter().rev().take(8).copied().collect();
            return Err(Error::Convergence { message: alloc::format!("Newton for c at λ̃² = {l2}"), trace: tail });
        }
        if k < steps {
            c *= (k + 1) as f64 / k as f64;
        }
    }
    let k = coupling_at(lambda2, c, e)?;
    if k.residual()? > 1e-12 {
        return Err(Error::Convergence {
            message: alloc::format!("normalisation residual {} too large", k.residual()?),
            trace: trace.iter().rev().take(8).copied().collect(),
        });
    }
    Ok(k)
}

/// Real λ̃²: λ̃²(s) = (1 − s)/I₁(s²−1) is monotone on the relevant stretch of `s = √(1+c)`.
fn bisect_real(lambda2: f64, e: &EigenvalueFunction) -> Result<Coupling> {
    let l2_of = |s: f64| -> Result<f64> {
        let ints = integrals(e, C::new(s * s - 1.0, 0.0))?;
        Ok((1.0 - s) / ints.i1.re)
    };
    let (mut lo, mut hi) = if lambda2 > 0.0 {
        let (_, cc) = critical_point(e)?;
        (Float::sqrt(1.0 + cc), 1.0)
    } else {
        let mut hi = 2.0;
        while l2_of(hi)? > lambda2 {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::domain("λ̃² too negative"));
            }
        }
        (1.0, hi)
    };
    // λ̃²(s) decreases in s on both stretches.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if l2_of(mid)? > lambda2 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    let mut c = C::new(s * s - 1.0, 0.0);
    for _ in 0..3 {
        c = newton_step_c(C::new(lambda2, 0.0), c, e)?.0;
    }
    coupling_at(C::new(lambda2, 0.0), c, e)
}

/// The 2×2 system `{normalisation residual, ρ₀}` in `(λ̃², c)` and its Jacobian.
pub fn critical_system(e: &EigenvalueFunction, lambda2: f64, c: f64) -> Result<([f64; 2], [[f64; 2]; 2])> {
    let ints = integrals(e, C::new(c, 0.0))?;
    let s = Float::sqrt(1.0 + c);
    let f = [s + lambda2 * ints.i1.re - 1.0, 1.0 - lambda2 * ints.i0.re];
    let j = [[ints.i1.re, 0.5 / s + lambda2 * ints.di1.re], [-ints.i0.re, -lambda2 * ints.di0.re]];
    Ok((f, j))
}

/// `(λ̃_c, c_c)`: the largest real coupling with a solution, where ρ₀ vanishes.
pub fn critical_point(e: &EigenvalueFunction) -> Result<(f64, f64)> {
    // On the real branch ρ₀ changes sign once in s = √(1+c) ∈ (0, 1).
    let rho0_of = |s: f64| -> Result<f64> {
        let ints = integrals(e, C::new(s * s - 1.0, 0.0))?;
        let l2 = (1.0 - s) / ints.i1.re;
        Ok(1.0 - l2 * ints.i0.re)
    };
    let mut lo = 0.05;
    while rho0_of(lo)? > 0.0 {
        lo *= 0.5;
        if lo < 1e-4 {
            return Err(Error::Convergence {
                message: "no sign change of ρ₀ on the real branch".into(),
                trace: Vec::new(),
            });
        }
    }
    let mut hi = 1.0 - 1e-9;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if rho0_of(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let mut x = [(1.0 - s) / integrals(e, C::new(s * s - 1.0, 0.0))?.i1.re, s * s - 1.0];
    let mut trace = Vec::new();
    for _ in 0..50 {
        let (f, j) = critical_system(e, x[0], x[1])?;
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 {
            return Err(Error::singular("critical-point Jacobian is singular"));
        }
        let d0 = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let d1 = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        x[0] -= d0;
        x[1] -= d1;
        let step = d0.abs() + d1.abs();
        trace.push(step);
        if step < 1e-15 {
            break;
        }
    }
    let (f, _) = critical_system(e, x[0], x[1])?;
    if f[0].abs() + f[1].abs() > 1e-12 {
        return Err(Error::Convergence { message: "critical point Newton".into(), trace });
    }
    Ok((Float::sqrt(x[0]), x[1]))
}

/// `ρ_l = δ_{l,0} − ½ ∫₁^∞ ρ(T) / √(T+c)^{3+2l} dT` for `l = 0..=L`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub values: Vec<C>,
}

impl MomentTable {
    pub fn get(&self, l: usize) -> C {
        self.values[l]
    }
}

pub fn moments(k: &Coupling, max_order: usize) -> Result<MomentTable> {
    check_c(k.c)?;
    let mut values = Vec::with_capacity(max_order + 1);
    let opts = QuadOpts { abs_tol: 1e-15, rel_tol: 1e-14, max_panels: 2000 };
    for l in 0..=max_order {
        let delta = if l == 0 { 1.0 } else { 0.0 };
        if k.is_free() {
            values.push(C::new(delta, 0.0));
            continue;
        }
        let p = -1.5 - l as f64;
        let f = |t: f64| (C::new(t, 0.0) + k.c).powf(p) * (0.5 * k.e.rho_hat(t));
        let map = if k.e.is_linear() { TailMap::Rational } else { TailMap::InverseSquare };
        let (v, err) = integrate_to_inf(f, 1.0, map, opts)?;
        if err > 1e-11 {
            return Err(Error::Quadrature { estimate: err, wanted: 1e-11 });
        }
        values.push(C::new(delta, 0.0) - k.lambda2 * v);
    }
    Ok(MomentTable { values })
}

/// Taylor coefficients of `c` in powers of λ̃² (index 0 is the constant 0), for `e(x) = x`.
pub fn c_series(order: usize) -> Result<Vec<f64>> {
    if order > 10 {
        return Err(Error::input("c_series supports order ≤ 10"));
    }
    let g = Jet::variable(0.0, order);
    let one = Jet::constant(1.0, order);
    let mut c = Jet::constant(0.0, order);
    for _ in 0..=order + 1 {
        let s = (&one + &c).sqrt()?;
        let l = (&one + &s.recip()?).ln()?;
        let f = &(&s + &(&g * &l).scale(&2.0)) - &one;
        let sp1 = &s + &one;
        let df = &s.scale(&2.0).recip()? - &g.try_div_ref(&(&(&s * &s) * &sp1))?;
        c = &c - &f.try_div_ref(&df)?;
    }
    Ok(c.into_coeffs())
}

/// The series through λ̃⁶ as printed: `−4λ̃² log2 − 4λ̃⁴(log2 − log²2) − 2λ̃⁶(2log2 − log²2)`.
pub fn c_series_printed(lambda2: f64) -> f64 {
    let l = LN2;
    -4.0 * lambda2 * l - 4.0 * lambda2 * lambda2 * (l - l * l) - 2.0 * lambda2 * lambda2 * lambda2 * (2.0 * l - l * l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_point() {
        let k = solve_c(C::new(0.0, 0.0), EigenvalueFunction::Linear).unwrap();
        assert_eq!(k.c, C::new(0.0, 0.0));
        assert_eq!(k.rho0, C::new(1.0, 0.0));
    }

    #[test]
    fn critical_values() {
        let (lc, cc) = critical_point(&EigenvalueFunction::Linear).unwrap();
        assert!((lc - 0.490686).abs() < 1e-5, "{lc}");
        assert!((cc + 0.873759).abs() < 1e-5, "{cc}");
        let ints = integrals(&EigenvalueFunction::Linear, C::new(cc, 0.0)).unwrap();
        assert!((1.0 - lc * lc * ints.i0.re).abs() < 1e-9);
    }

    #[test]
    fn supercritical_is_rejected() {
        let r = solve_c(C::new(0.36, 0.0), EigenvalueFunction::Linear);
        assert!(matches!(r, Err(Error::NoSolution { .. })));
    }

    #[test]
    fn imaginary_coupling_gives_positive_c() {
        let k = solve_c(C::new(-0.04, 0.0), EigenvalueFunction::Linear).unwrap();
        assert!(k.c.re > 0.0 && k.c.im.abs() < 1e-15);
        assert!(k.residual().unwrap() < 1e-12);
        assert!((k.lambda - C::new(0.0, 0.2)).norm() < 1e-15);
    }

    #[test]
    fn series_coefficients() {
        let s = c_series(4).unwrap();
        assert_eq!(s[0], 0.0);
        assert!((s[1] + 4.0 * LN2).abs() < 1e-14);
        assert!((s[2] + 4.0 * (LN2 - LN2 * LN2)).abs() < 1e-14);
        assert!((s[3] + 2.0 * (2.0 * LN2 - LN2 * LN2)).abs() < 1e-13);
    }

    #[test]
    fn rho0_closed_form_matches_quadrature() {
        let k = Coupling::from_real_lambda(0.3).unwrap();
        let m = moments(&k, 2).unwrap();
        let s = k.sqrt_1pc();
        let closed = C::new(1.0, 0.0) - k.lambda2 * 2.0 / (s * (s + 1.0));
        assert!((m.get(0) - closed).norm() < 1e-10);
        assert!((k.rho0 - closed).norm() < 1e-14);
    }
}
