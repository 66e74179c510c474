//! Direct discretisation of the Schwinger–Dyson integral equations on `[1, Ξ]`.
//!
//! Two equations are covered:
//!
//! ```text
//! W(X)² + ∫₁^Ξ ρ(Y) (W(X)−W(Y))/(X−Y) dY = X + ∫₁^Ξ ρ(Y) (W(1)−W(Y))/(1−Y) dY
//! W(X) G(X|Y) + ½∫₁^Ξ ρ(T) (G(X|Y)−G(T|Y))/(X−T) dT = −λ̃ G(X,Y,Y)
//! ```
//!
//! The closed forms solve them for `Ξ → ∞`. At finite `Ξ` the omitted range
//! `[Ξ, ∞)` leaves a bias of order `λ̃² (W(X)−1)/√Ξ`. [`Tail::Analytic`] adds
//! that range back. Closed-form candidates are used directly there. Sampled
//! candidates use their large-argument asymptotics, matched at the last node.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::correlators::{gn_single_boundary, sqrt_singular_distance, w, w_jet, w_singular_distance};
use crate::exact::Jet;
use crate::linalg::{Lu, Matrix};
use crate::quad::{gauss_legendre, integrate_to_inf, QuadOpts, TailMap};
use crate::spectral::{Coupling, EigenvalueFunction};
use crate::{Error, Result};

type C = Complex64;

fn cz(x: f64) -> C {
    C::new(x, 0.0)
}

pub const DEFAULT_CUTOFF: f64 = 1e8;
pub const DEFAULT_NODES: usize = 2000;
const PANEL: usize = 10;
const JET_ORDER: usize = 24;
const JET_RADIUS: f64 = 0.25;

/// Composite Gauss–Legendre grid on `[1, Ξ]` with geometrically growing panels.
#[derive(Clone, Debug)]
pub struct Grid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub cutoff: f64,
    per_panel: usize,
    half_widths: Vec<f64>,
    diff: Vec<f64>,
}

impl Grid {
    /// About `n` nodes, rounded up to whole panels of ten.
    pub fn geometric(cutoff: f64, n: usize) -> Result<Self> {
        if !(cutoff > 1.0) || !cutoff.is_finite() {
            return Err(Error::input("cutoff Ξ must be finite and > 1"));
        }
        if n < PANEL {
            return Err(Error::input(alloc::format!("need at least {PANEL} nodes")));
        }
        let panels = n.div_ceil(PANEL);
        let (x, wt) = gauss_legendre(PANEL);
        let mut nodes = Vec::with_capacity(panels * PANEL);
        let mut weights = Vec::with_capacity(panels * PANEL);
        let mut half_widths = Vec::with_capacity(panels);
        let ln_xi = Float::ln(cutoff);
        for p in 0..panels {
            let a = Float::exp(ln_xi * p as f64 / panels as f64);
            let b = if p + 1 == panels { cutoff } else { Float::exp(ln_xi * (p + 1) as f64 / panels as f64) };
            let (mid, h) = (0.5 * (a + b), 0.5 * (b - a));
            half_widths.push(h);
            for (xi, wi) in x.iter().zip(&wt) {
                nodes.push(mid + h * xi);
                weights.push(h * wi);
            }
        }
        // Differentiation matrix of the Lagrange interpolant on the reference nodes.
        let bary: Vec<f64> =
            (0..PANEL).map(|i| 1.0 / (0..PANEL).filter(|&k| k != i).map(|k| x[i] - x[k]).product::<f64>()).collect();
        let mut diff = alloc::vec![0.0; PANEL * PANEL];
        for i in 0..PANEL {
            let mut row = 0.0;
            for k in 0..PANEL {
                if k != i {
                    let d = bary[k] / bary[i] / (x[i] - x[k]);
                    diff[i * PANEL + k] = d;
                    row += d;
                }
            }
            diff[i * PANEL + i] = -row;
        }
        Ok(Grid { nodes, weights, cutoff, per_panel: PANEL, half_widths, diff })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Derivative at node `i` of the panel interpolant through `values`.
    pub fn derivative(&self, values: &[C], i: usize) -> C {
        let p = i / self.per_panel;
        let r = i % self.per_panel;
        let base = p * self.per_panel;
        let s: C = (0..self.per_panel).map(|k| values[base + k] * self.diff[r * self.per_panel + k]).sum();
        s / self.half_widths[p]
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid::geometric(DEFAULT_CUTOFF, DEFAULT_NODES).expect("default grid is valid")
    }
}

/// How the range `[Ξ, ∞)` is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// The literal finite-Ξ equation.
    Truncated,
    /// `[Ξ, ∞)` added back.
    Analytic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Equation {
    /// The equation for `W`.
    OnePoint,
    /// The equation for `G(·|Y)`.
    Cylinder { y: C },
}

/// A candidate solution to insert into an equation.
#[derive(Clone, Copy, Debug)]
pub enum Candidate<'a> {
    /// The closed form belonging to the equation.
    Closed,
    /// Values on the grid nodes; `at_one` is `W(1)` (ignored for the cylinder equation).
    Sampled { values: &'a [C], at_one: C },
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub points: Vec<C>,
    pub residuals: Vec<C>,
    pub sup: f64,
    pub l2: f64,
    /// Largest contribution of `[Ξ, ∞)` at the evaluation points.
    pub tail_estimate: f64,
}

fn tail_opts() -> QuadOpts {
    QuadOpts { abs_tol: 1e-15, rel_tol: 1e-10, max_panels: 4000 }
}

fn tail_integral(cutoff: f64, f: impl Fn(f64) -> C) -> Result<C> {
    Ok(integrate_to_inf(f, cutoff, TailMap::InverseSquare, tail_opts())?.0)
}

/// A function together with exact difference quotients near the diagonal.
struct ClosedFn<'a> {
    jet: &'a dyn Fn(C, usize) -> Result<Jet<C>>,
    dist: &'a dyn Fn(C) -> f64,
}

impl ClosedFn<'_> {
    /// `(f(X)−f(Y_j))/(X−Y_j)` for every node, with `fx = f(X)` and `fy[j] = f(Y_j)`.
    fn quotients(&self, x: C, fx: C, nodes: &[f64], fy: &[C]) -> Result<Vec<C>> {
        let radius = JET_RADIUS * (self.dist)(x);
        let mut jet: Option<Jet<C>> = None;
        let mut out = Vec::with_capacity(nodes.len());
        for (&y, &v) in nodes.iter().zip(fy) {
            let h = cz(y) - x;
            if h.norm() < radius {
                if jet.is_none() {
                    jet = Some((self.jet)(x, JET_ORDER)?);
                }
                let j = jet.as_ref().expect("jet just built");
                let mut acc = cz(0.0);
                for k in (1..=JET_ORDER).rev() {
                    acc = acc * h + j.coeff(k);
                }
                out.push(acc);
            } else {
                out.push((fx - v) / (x - cz(y)));
            }
        }
        Ok(out)
    }
}

fn rho_nodes(k: &Coupling, grid: &Grid) -> Vec<C> {
    grid.nodes.iter().zip(&grid.weights).map(|(&y, &wt)| k.lambda2 * (wt * k.e.rho_hat(y))).collect()
}

/// Inserts a candidate into the discretised equation. Closed candidates can
/// be evaluated at arbitrary `at` points; sampled ones only at the nodes.
pub fn residual_report(
    k: &Coupling,
    eq: Equation,
    cand: Candidate<'_>,
    grid: &Grid,
    at: Option<&[C]>,
    tail: Tail,
) -> Result<ResidualReport> {
    let wr = rho_nodes(k, grid);
    let xi = grid.cutoff;
    let mut residuals = Vec::new();
    let mut tails = Vec::new();
    let points: Vec<C> = match (at, cand) {
        (Some(p), Candidate::Closed) => p.to_vec(),
        (Some(_), Candidate::Sampled { .. }) => {
            return Err(Error::input("sampled candidates can only be evaluated at the grid nodes"))
        }
        (None, _) => grid.nodes.iter().map(|&y| cz(y)).collect(),
    };
    match (eq, cand) {
        (Equation::OnePoint, Candidate::Closed) => {
            let f = |z: C| w(k, z);
            let jet = |z: C, o: usize| w_jet(k, z, o);
            let dist = |z: C| w_singular_distance(k, z);
            let cf = ClosedFn { jet: &jet, dist: &dist };
            let fy: Vec<C> = grid.nodes.iter().map(|&y| f(cz(y))).collect::<Result<_>>()?;
            let w1 = f(cz(1.0))?;
            let q1 = cf.quotients(cz(1.0), w1, &grid.nodes, &fy)?;
            let rhs_int: C = q1.iter().zip(&wr).map(|(a, b)| a * b).sum();
            for &x in &points {
                let fx = f(x)?;
                let q = cf.quotients(x, fx, &grid.nodes, &fy)?;
                let lhs_int: C = q.iter().zip(&wr).map(|(a, b)| a * b).sum();
                let mut r = fx * fx + lhs_int - x - rhs_int;
                if tail == Tail::Analytic || at.is_some() {
                    let t = tail_integral(xi, |y| {
                        let wy = f(cz(y)).unwrap_or(cz(f64::NAN));
                        k.lambda2 * k.e.rho_hat(y) * ((fx - wy) / (x - y) - (w1 - wy) / (1.0 - y))
                    })?;
                    tails.push(t.norm());
                    if tail == Tail::Analytic {
                        r += t;
                    }
                }
                residuals.push(r);
            }
        }
        (Equation::OnePoint, Candidate::Sampled { values, at_one }) => {
            check_len(values, grid)?;
            let rhs_int: C = (0..grid.len()).map(|j| wr[j] * (at_one - values[j]) / (1.0 - grid.nodes[j])).sum();
            let model = OnePointTail::new(k, grid)?;
            let delta = model.delta(values);
            for i in 0..grid.len() {
                let lhs_int = sampled_quotient_sum(grid, values, &wr, i);
                let t = model.tail(i, values[i], delta);
                tails.push(t.norm());
                let mut r = values[i] * values[i] + lhs_int - grid.nodes[i] - rhs_int;
                if tail == Tail::Analytic {
                    r += t;
                }
                residuals.push(r);
            }
        }
        (Equation::Cylinder { y }, Candidate::Closed) => {
            let f = |z: C| crate::correlators::g_1plus1(k, z, y);
            let jet = |z: C, o: usize| cylinder_jet(k, z, y, o);
            let dist = |z: C| sqrt_singular_distance(k, z);
            let cf = ClosedFn { jet: &jet, dist: &dist };
            let fy: Vec<C> = grid.nodes.iter().map(|&t| f(cz(t))).collect::<Result<_>>()?;
            for &x in &points {
                let fx = f(x)?;
                let q = cf.quotients(x, fx, &grid.nodes, &fy)?;
                let int: C = q.iter().zip(&wr).map(|(a, b)| a * b).sum();
                let mut r = w(k, x)? * fx + int * 0.5 + k.lambda * gn_single_boundary(k, &[x, y, y])?;
                if tail == Tail::Analytic || at.is_some() {
                    let t = tail_integral(xi, |tt| {
                        let gt = f(cz(tt)).unwrap_or(cz(f64::NAN));
                        k.lambda2 * (0.5 * k.e.rho_hat(tt)) * (fx - gt) / (x - tt)
                    })?;
                    tails.push(t.norm());
                    if tail == Tail::Analytic {
                        r += t;
                    }
                }
                residuals.push(r);
            }
        }
        (Equation::Cylinder { y }, Candidate::Sampled { values, .. }) => {
            check_len(values, grid)?;
            let model = CylinderTail::new(k, grid)?;
            for i in 0..grid.len() {
                let x = cz(grid.nodes[i]);
                let int = sampled_quotient_sum(grid, values, &wr, i);
                let t = model.tail(i, values[i], values[grid.len() - 1]);
                tails.push(t.norm());
                let mut r = w(k, x)? * values[i] + int * 0.5 + k.lambda * gn_single_boundary(k, &[x, y, y])?;
                if tail == Tail::Analytic {
                    r += t;
                }
                residuals.push(r);
            }
        }
    }
    let sup = residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let l2 = Float::sqrt(residuals.iter().map(|r| r.norm_sqr()).sum::<f64>());
    let tail_estimate = tails.iter().copied().fold(0.0, f64::max);
    Ok(ResidualReport { points, residuals, sup, l2, tail_estimate })
}

fn check_len(values: &[C], grid: &Grid) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::input(alloc::format!("{} samples for {} nodes", values.len(), grid.len())));
    }
    Ok(())
}

/// `Σ_j ρ_j w_j (f_i − f_j)/(X_i − X_j)` with the diagonal from the panel derivative.
fn sampled_quotient_sum(grid: &Grid, f: &[C], wr: &[C], i: usize) -> C {
    let xi = grid.nodes[i];
    let mut s = cz(0.0);
    for j in 0..grid.len() {
        if j == i {
            s += wr[j] * grid.derivative(f, i);
        } else {
            s += wr[j] * (f[i] - f[j]) / (xi - grid.nodes[j]);
        }
    }
    s
}

/// `G(X|Y)` as a jet in `X`.
fn cylinder_jet(k: &Coupling, x: C, y: C, order: usize) -> Result<Jet<C>> {
    let sx = Jet::variable(x + k.c, order).sqrt()?;
    let sy = (y + k.c).sqrt();
    let sum = sx.add_scalar(&sy);
    let den = &(&sx * &sum) * &sum;
    Ok(den.recip()?.scale(&(k.lambda2 * 4.0 / sy)))
}

/// Tail of the `W` equation for sampled `W`, using `W(Y) ≈ √Y + δ√(X_n/Y)` beyond `Ξ`.
struct OnePointTail {
    p: Vec<C>,
    q: Vec<C>,
    r: Vec<C>,
    last: f64,
}

impl OnePointTail {
    fn new(k: &Coupling, grid: &Grid) -> Result<Self> {
        let xi = grid.cutoff;
        let last = *grid.nodes.last().expect("grid is never empty");
        let rho = |y: f64| k.lambda2 * k.e.rho_hat(y);
        let (mut p, mut q, mut r) = (Vec::new(), Vec::new(), Vec::new());
        for &x in &grid.nodes {
            if k.lambda2.norm() == 0.0 {
                p.push(cz(0.0));
                q.push(cz(0.0));
                r.push(cz(0.0));
                continue;
            }
            p.push(tail_integral(xi, |y| rho(y) / (x - y))?);
            q.push(tail_integral(xi, |y| rho(y) * (((x - 1.0) * Float::sqrt(y) + y - x) / ((y - x) * (y - 1.0))))?);
            r.push(tail_integral(xi, |y| rho(y) * (Float::sqrt(last / y) * (x - 1.0) / ((y - x) * (y - 1.0))))?);
        }
        Ok(OnePointTail { p, q, r, last })
    }

    fn delta(&self, values: &[C]) -> C {
        values[values.len() - 1] - Float::sqrt(self.last)
    }

    fn tail(&self, i: usize, wi: C, delta: C) -> C {
        wi * self.p[i] + self.q[i] + delta * self.r[i]
    }
}

/// Tail of the cylinder equation for sampled `G`, using `G(T) ≈ G_n (X_n/T)^{3/2}` beyond `Ξ`.
struct CylinderTail {
    p: Vec<C>,
    q: Vec<C>,
}

impl CylinderTail {
    fn new(k: &Coupling, grid: &Grid) -> Result<Self> {
        let xi = grid.cutoff;
        let last = *grid.nodes.last().expect("grid is never empty");
        let rho = |t: f64| k.lambda2 * (0.5 * k.e.rho_hat(t));
        let (mut p, mut q) = (Vec::new(), Vec::new());
        for &x in &grid.nodes {
            if k.lambda2.norm() == 0.0 {
                p.push(cz(0.0));
                q.push(cz(0.0));
                continue;
            }
            p.push(tail_integral(xi, |t| rho(t) / (x - t))?);
            q.push(tail_integral(xi, |t| rho(t) * Float::powf(last / t, 1.5) / (x - t))?);
        }
        Ok(CylinderTail { p, q })
    }

    fn tail(&self, i: usize, gi: C, g_last: C) -> C {
        gi * self.p[i] - g_last * self.q[i]
    }
}

/// Result of an iterative or direct solve on a grid.
#[derive(Clone, Debug)]
pub struct InteqSolution {
    pub values: Vec<C>,
    pub iterations: usize,
    /// Sup-norm change per iteration (empty for direct solves).
    pub history: Vec<f64>,
    pub condition: Option<f64>,
}

/// Damped fixed-point iteration `W ← ½W + ½√(X + ∫… − ∫…)`, seeded with `√X`.
pub fn solve_w_inteq(lambda2: C, e: &EigenvalueFunction, grid: &Grid, tail: Tail) -> Result<InteqSolution> {
    let k = Coupling { lambda2, lambda: lambda2.sqrt(), ..Coupling::free() };
    let k = Coupling { e: e.clone(), ..k };
    let wr = rho_nodes(&k, grid);
    let model = if tail == Tail::Analytic { Some(OnePointTail::new(&k, grid)?) } else { None };
    let n = grid.len();
    let mut wv: Vec<C> = grid.nodes.iter().map(|&x| cz(Float::sqrt(x))).collect();
    let mut history = Vec::new();
    for it in 1..=2000 {
        let rhs_int: C = (0..n).map(|j| wr[j] * (cz(1.0) - wv[j]) / (1.0 - grid.nodes[j])).sum();
        let delta = model.as_ref().map(|m| m.delta(&wv));
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = cz(grid.nodes[i]) + rhs_int - sampled_quotient_sum(grid, &wv, &wr, i);
            if let (Some(m), Some(d)) = (&model, delta) {
                s -= m.tail(i, wv[i], d);
            }
            next.push((wv[i] + s.sqrt()) * 0.5);
        }
        let change = wv.iter().zip(&next).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        history.push(change);
        wv = next;
        if !change.is_finite() || change > 1e6 {
            break;
        }
        if change < 1e-10 {
            return Ok(InteqSolution { values: wv, iterations: it, history, condition: None });
        }
    }
    let trace = history.iter().rev().take(10).copied().collect();
    Err(Error::Convergence { message: "fixed-point iteration for W did not settle".into(), trace })
}

/// Solves the linear cylinder equation for `G(·|Y)` on the grid by LU.
pub fn solve_g11_inteq(k: &Coupling, y: C, grid: &Grid, tail: Tail) -> Result<InteqSolution> {
    let n = grid.len();
    let wr = rho_nodes(k, grid);
    let model = if tail == Tail::Analytic { Some(CylinderTail::new(k, grid)?) } else { None };
    let mut a = Matrix::zeros(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let xi = grid.nodes[i];
        let x = cz(xi);
        b.push(-k.lambda * gn_single_boundary(k, &[x, y, y])?);
        let mut diag = w(k, x)?;
        for j in 0..n {
            if j == i {
                continue;
            }
            let q = wr[j] * 0.5 / (xi - grid.nodes[j]);
            diag += q;
            a.set(i, j, -q);
        }
        // Panel derivative at the diagonal node.
        let p = i / grid.per_panel;
        let r = i % grid.per_panel;
        let scale = wr[i] * 0.5 / grid.half_widths[p];
        for kk in 0..grid.per_panel {
            let col = p * grid.per_panel + kk;
            let v = a.at(i, col) + scale * grid.diff[r * grid.per_panel + kk];
            a.set(i, col, v);
        }
        if let Some(m) = &model {
            diag += m.p[i];
            let v = a.at(i, n - 1) - m.q[i];
            a.set(i, n - 1, v);
        }
        let v = a.at(i, i) + diag;
        a.set(i, i, v);
    }
    let lu = Lu::factor(a)?;
    let condition = lu.condition_estimate();
    if !(condition < 1e13) {
        return Err(Error::Conditioning { condition });
    }
    Ok(InteqSolution { values: lu.solve(&b), iterations: 1, history: Vec::new(), condition: Some(condition) })
}
