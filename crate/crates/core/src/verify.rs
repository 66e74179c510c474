//! Perturbative cross-checks.
//!
//! The correlators are analytic in λ̃² near the origin, so their Taylor
//! coefficients follow from the Cauchy integral over a small circle in the
//! λ̃² plane. The trapezoidal rule is spectrally accurate there. The
//! coefficients are compared with small Feynman graphs of the toy model,
//! where every edge between faces `z₁, z₂` weighs `1/(z₁+z₂+1)`.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use num_traits::Float;

use crate::correlators::{g1, g2, g_1plus1, w};
use crate::quad::{integrate, QuadOpts};
use crate::spectral::{critical_point, Coupling, EigenvalueFunction};
use crate::{Error, Result};

type C = Complex64;

fn cz(x: f64) -> C {
    C::new(x, 0.0)
}

/// Default circle radius in the λ̃² plane.
pub const DEFAULT_RADIUS: f64 = 0.01;
/// Default number of trapezoidal nodes on the circle.
pub const DEFAULT_NODES: usize = 64;

/// A correlator with fixed arguments. `W`, `G2` and the cylinder take house
/// variables `X = (2x+1)²`; `G1` takes the eigenvalue-space `x`.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesTarget {
    W { x: C },
    G1 { x: f64 },
    G2 { x: C, y: C },
    Cylinder { x: C, y: C },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl SeriesTarget {
    pub fn parity(&self) -> Parity {
        match self {
            SeriesTarget::G1 { .. } => Parity::Odd,
            _ => Parity::Even,
        }
    }

    pub fn eval(&self, k: &Coupling) -> Result<C> {
        match *self {
            SeriesTarget::W { x } => w(k, x),
            SeriesTarget::G1 { x } => g1(k, x),
            SeriesTarget::G2 { x, y } => g2(k, x, y),
            SeriesTarget::Cylinder { x, y } => g_1plus1(k, x, y),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesExtract {
    pub target: SeriesTarget,
    pub radius: f64,
    pub order: usize,
    /// Entry `k` multiplies `λ̃^{2k}`, or `λ̃^{2k+1}` for odd targets.
    pub coefficients: Vec<C>,
    /// Largest change in any coefficient when the node count is doubled.
    pub doubling_change: f64,
}

fn check_radius(e: &EigenvalueFunction, radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::input("radius must be positive"));
    }
    let (lc, _) = critical_point(e)?;
    if radius >= 0.5 * lc * lc {
        return Err(Error::domain(alloc::format!(
            "radius {radius} reaches beyond half the critical λ̃² = {:.6}",
            lc * lc
        )));
    }
    Ok(())
}

/// Trapezoidal Cauchy coefficients of `g(t)` on `|t| = r`, `M` nodes.
fn cauchy(g: &dyn Fn(C) -> Result<C>, r: f64, m: usize, order: usize) -> Result<Vec<C>> {
    let mut coeffs = alloc::vec![cz(0.0); order + 1];
    for j in 0..m {
        let t = C::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / m as f64);
        let v = g(t)?;
        let mut tk = cz(1.0);
        for c in coeffs.iter_mut() {
            *c += v / tk;
            tk *= t;
        }
    }
    Ok(coeffs.into_iter().map(|c| c / m as f64).collect())
}

fn coupling_at(lambda: C, e: &EigenvalueFunction) -> Result<Coupling> {
    Coupling::from_lambda(lambda, e.clone())
}

fn extract_with(target: &SeriesTarget, e: &EigenvalueFunction, order: usize, radius: f64, m: usize) -> Result<Vec<C>> {
    let odd = target.parity() == Parity::Odd;
    let g = |s: C| -> Result<C> {
        let lambda = s.sqrt();
        let v = target.eval(&coupling_at(lambda, e)?)?;
        Ok(if odd { v / lambda } else { v })
    };
    cauchy(&g, radius, m, order)
}

/// Taylor coefficients in λ̃² by the Cauchy integral; odd targets have their
/// factor λ̃ peeled off first.
pub fn extract_series(
    target: SeriesTarget,
    e: &EigenvalueFunction,
    order: usize,
    radius: f64,
) -> Result<SeriesExtract> {
    check_radius(e, radius)?;
    let coefficients = extract_with(&target, e, order, radius, DEFAULT_NODES)?;
    let doubled = extract_with(&target, e, order, radius, 2 * DEFAULT_NODES)?;
    let doubling_change = coefficients.iter().zip(&doubled).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(SeriesExtract { target, radius, order, coefficients, doubling_change })
}

/// Coefficients of `λ̃ⁿ`, `n = 0..=order`, from a circle of radius `√radius`
/// in the λ̃ plane; used to confirm the parity of a target.
pub fn extract_in_lambda(target: &SeriesTarget, e: &EigenvalueFunction, order: usize, radius: f64) -> Result<Vec<C>> {
    check_radius(e, radius)?;
    let g = |lambda: C| -> Result<C> { target.eval(&coupling_at(lambda, e)?) };
    cauchy(&g, Float::sqrt(radius), DEFAULT_NODES, order)
}

/// Ratio of the largest wrong-parity coefficient to the largest right-parity one.
pub fn parity_defect(target: &SeriesTarget, e: &EigenvalueFunction, order: usize, radius: f64) -> Result<f64> {
    let cs = extract_in_lambda(target, e, order, radius)?;
    let want = match target.parity() {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let (mut good, mut bad) = (0.0f64, 0.0f64);
    for (n, c) in cs.iter().enumerate() {
        if n % 2 == want {
            good = good.max(c.norm());
        } else {
            bad = bad.max(c.norm());
        }
    }
    Ok(if good > 0.0 { bad / good } else { bad })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyGraph {
    Gamma1,
    Gamma2,
    Gamma3,
}

/// `∫₀^Λ² dy/((a+y)(b+y))` for `a, b > 0`, with `Λ² = ∞` when `cutoff` is `None`.
pub fn face_integral(a: f64, b: f64, cutoff: Option<f64>) -> f64 {
    let near = (a - b).abs() <= 1e-6 * a.max(b);
    match (cutoff, near) {
        (None, false) => (Float::ln(a) - Float::ln(b)) / (a - b),
        (None, true) => {
            // series of the divided difference of log around the midpoint
            let m = 0.5 * (a + b);
            let d = 0.5 * (a - b);
            (1.0 + d * d / (3.0 * m * m)) / m
        }
        (Some(l), false) => (Float::ln((l + b) / b) - Float::ln((l + a) / a)) / (a - b),
        (Some(l), true) => {
            let m = 0.5 * (a + b);
            let d = 0.5 * (a - b);
            let f = |z: f64| (1.0 + d * d / (3.0 * z * z)) / z;
            f(m) - f(m + l)
        }
    }
}

/// Renormalised, `Λ → ∞` values of the three toy graphs. `Γ₁` takes `x[0]`,
/// `Γ₂` the two faces of one boundary, `Γ₃` one face on each of two boundaries.
pub fn toy_graph_values(graph: ToyGraph, x: &[f64], lambda: f64) -> Result<f64> {
    let need = match graph {
        ToyGraph::Gamma1 => 1,
        _ => 2,
    };
    if x.len() != need {
        return Err(Error::input(alloc::format!("{graph:?} takes {need} arguments")));
    }
    if x.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::input("face variables must be ≥ 0"));
    }
    Ok(match graph {
        ToyGraph::Gamma1 => lambda * Float::ln_1p(x[0]) / (2.0 * x[0] + 1.0),
        ToyGraph::Gamma2 => {
            let s = x[0] + x[1] + 1.0;
            lambda * lambda / (s * s) * face_integral(x[0] + 1.0, x[1] + 1.0, None)
        }
        ToyGraph::Gamma3 => {
            let s = x[0] + x[1] + 1.0;
            lambda * lambda / ((2.0 * x[0] + 1.0) * (2.0 * x[1] + 1.0) * s * s)
        }
    })
}

/// Order-λ̃² part of the two-point function from graphs: `Γ₂` plus the two
/// tadpole insertions on the outer edges.
pub fn two_point_graphs_order2(x1: f64, x2: f64) -> Result<f64> {
    let s = x1 + x2 + 1.0;
    let g2 = toy_graph_values(ToyGraph::Gamma2, &[x1, x2], 1.0)?;
    let tad = |x: f64| Float::ln_1p(x) / (2.0 * x + 1.0);
    Ok(g2 - (tad(x1) + tad(x2)) / (s * s))
}

/// Coefficient of λ̃³ in `G̃(x)` from the four order-3 graphs.
pub fn one_point_graphs_order3(x: f64) -> f64 {
    let l2 = LN_2 * LN_2;
    let u = 2.0 * x + 1.0;
    l2 / u - l2 / (u * u * u)
}

/// Coefficient of λ̃⁵ in `G̃(x)` as obtained from the perturbative solution.
pub fn one_point_order5(x: f64) -> f64 {
    let (l2, l3) = (LN_2 * LN_2, LN_2 * LN_2 * LN_2);
    let u = 2.0 * x + 1.0;
    l2 / u + (2.0 * l3 - l2) / u.powi(3) - 2.0 * l3 / u.powi(5)
}

pub const SERIES_TOL: f64 = 1e-7;

/// Checks the λ̃³ coefficient of the exact `G̃(x)` against the graph sum.
pub fn check_order3_onepoint(x: f64) -> Result<bool> {
    if !(x >= 0.0) {
        return Err(Error::input("x must be ≥ 0"));
    }
    let s = extract_series(SeriesTarget::G1 { x }, &EigenvalueFunction::Linear, 2, DEFAULT_RADIUS)?;
    Ok((s.coefficients[1] - one_point_graphs_order3(x)).norm() < SERIES_TOL)
}

/// Checks the λ̃² coefficient of `G̃(x₁,x₂) = G2((2x₁+1)², (2x₂+1)²)` against the graph sum.
pub fn check_order2_twopoint(x1: f64, x2: f64) -> Result<bool> {
    if !(x1 >= 0.0 && x2 >= 0.0) {
        return Err(Error::input("x must be ≥ 0"));
    }
    let hx = |x: f64| cz((2.0 * x + 1.0) * (2.0 * x + 1.0));
    let s = extract_series(SeriesTarget::G2 { x: hx(x1), y: hx(x2) }, &EigenvalueFunction::Linear, 2, DEFAULT_RADIUS)?;
    let free = 1.0 / (x1 + x2 + 1.0);
    Ok((s.coefficients[0] - free).norm() < SERIES_TOL
        && (s.coefficients[1] - two_point_graphs_order2(x1, x2)?).norm() < SERIES_TOL)
}

/// `Γ₂`'s face integral with a finite cutoff by adaptive quadrature, for testing the closed form.
pub fn face_integral_quadrature(a: f64, b: f64, cutoff: f64) -> Result<f64> {
    // y = e^u − 1 spreads the decades evenly
    let top = Float::ln_1p(cutoff);
    let f = |u: f64| {
        let y = Float::exp_m1(u);
        cz((y + 1.0) / ((a + y) * (b + y)))
    };
    let opts = QuadOpts { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 4000 };
    Ok(integrate(f, 0.0, top, opts)?.0.re)
}
