//! The induced Euclidean two-point function on ℝ² and its analytic structure.
//!
//! With `q = p²/μ² + 1` the momentum-space function is
//! `Ŝ₂(p²) = 2W′(q²)/μ² = (dW/dq)/(q μ²)`. Off the physical axis `√(q²+c)`
//! is always taken as the factored product `√(q−a)·√(q+a)` with `a = √(−c)`,
//! which is the holomorphic extension. The unfactored root never appears.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::correlators::{g_multi_boundary, BoundarySpec};
use crate::exact::Jet;
use crate::quad::{integrate, integrate_to_inf, QuadOpts, TailMap};
use crate::spectral::Coupling;
use crate::{Error, Result};

type C = Complex64;

fn cz(x: f64) -> C {
    C::new(x, 0.0)
}

/// `a = √(−c)` on the principal branch; real for `−1 < c < 0`, `i√c` for `c > 0`.
fn root_a(k: &Coupling) -> C {
    (-k.c).sqrt()
}

/// The two points `p² = μ²(−1 ± a)` where the factored root degenerates.
pub fn branch_points(k: &Coupling, mu2: f64) -> [C; 2] {
    let a = root_a(k);
    [(a - 1.0) * mu2, (-a - 1.0) * mu2]
}

fn cut_error(k: &Coupling, mu2: f64, p2: C, cause: &Error) -> Error {
    let [b1, b2] = branch_points(k, mu2);
    Error::domain(alloc::format!("p² = {p2} lies on a cut of Ŝ₂ (branch points {b1}, {b2}): {cause}"))
}

/// `μ² Ŝ₂` as a function of `q`. At `q = 0` the quotient `W_q/q` is a
/// removable 0/0 and is replaced by a fourth-order symmetric average.
fn s2_scaled(k: &Coupling, q: C) -> Result<C> {
    if q.norm() < 1e-6 {
        let h = 1e-3;
        let near = |d: f64| -> Result<C> { Ok(s2_scaled(k, q + d)? + s2_scaled(k, q - d)?) };
        return Ok((near(h)? * 4.0 - near(2.0 * h)?) / 6.0);
    }
    let a = root_a(k);
    let qj = Jet::variable(q, 1);
    let s = &qj.add_scalar(&-a).sqrt()? * &qj.add_scalar(&a).sqrt()?;
    if k.is_free() {
        return Ok(*s.coeff(1) / q);
    }
    if k.e.is_linear() {
        let s1 = k.sqrt_1pc();
        let num = &(&s + &qj) * &qj.add_scalar(&cz(1.0));
        let den = &qj.scale(&s1) + &s;
        let log = num.try_div_ref(&den)?.ln()?;
        let w = &s + &log.try_div_ref(&qj)?.scale(&(k.lambda2 * 2.0));
        return Ok(*w.coeff(1) / q);
    }
    // dW/dq = (q/S)(1 − λ̃² ½∫ρ̂/((S+τ)²τ)) for a general measure.
    let sv = *s.value();
    let opts = QuadOpts { abs_tol: 1e-15, rel_tol: 1e-12, max_panels: 3000 };
    let f = |t: f64| {
        let tau = (cz(t) + k.c).sqrt();
        let d = sv + tau;
        cz(0.5 * k.e.rho_hat(t)) / (d * d * tau)
    };
    let (j, _) = integrate_to_inf(f, 1.0, TailMap::InverseSquare, opts)?;
    Ok((cz(1.0) - k.lambda2 * j) / sv)
}

/// Momentum-space two-point function `Ŝ₂(p²)` for mass scale `μ²`.
pub fn s2_hat(k: &Coupling, mu2: f64, p2: C) -> Result<C> {
    if !(mu2 > 0.0 && mu2.is_finite()) {
        return Err(Error::input("μ² must be positive"));
    }
    if !(p2.re.is_finite() && p2.im.is_finite()) {
        return Err(Error::input("p² is not finite"));
    }
    let q = p2 / mu2 + 1.0;
    let v = s2_scaled(k, q).map_err(|e| match e {
        Error::Domain(_) => cut_error(k, mu2, p2, &e),
        other => other,
    })?;
    Ok(v / mu2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Nonnegative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    StieltjesViolated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::StieltjesViolated => "stieltjes_violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub test_point: C,
    pub value: C,
    pub imaginary_part_sign: Sign,
    pub branch_points: Vec<C>,
    pub verdict: Verdict,
    pub note: String,
}

/// Tests whether `Ŝ₂` can be a Stieltjes function of `p²`.
///
/// A Stieltjes function is holomorphic off `(−∞, 0]` and its imaginary part
/// has the opposite sign to `Im p²`. Real coupling is probed with that sign
/// rule at `p² = (−3 − i|c|/10)μ²`. Imaginary coupling is caught by branch
/// points off the real axis.
pub fn positivity_check(k: &Coupling, mu2: f64) -> Result<PositivityReport> {
    let test_point = C::new(-3.0, -k.c.norm() / 10.0) * mu2;
    let branch_points = branch_points(k, mu2).to_vec();
    if k.is_free() {
        let value = 1.0 / (test_point + mu2);
        return Ok(PositivityReport {
            test_point,
            value,
            imaginary_part_sign: if value.im < 0.0 { Sign::Negative } else { Sign::Nonnegative },
            branch_points,
            verdict: Verdict::Inconclusive,
            note: "free theory, trivially Stieltjes".into(),
        });
    }
    let value = s2_hat(k, mu2, test_point)?;
    let sign = if value.im < 0.0 { Sign::Negative } else { Sign::Nonnegative };
    let off_axis = branch_points.iter().any(|b| b.im.abs() > 1e-12 * b.norm().max(mu2));
    let (verdict, note) = if off_axis {
        (Verdict::StieltjesViolated, "branch points off the real axis".into())
    } else if sign == Sign::Negative {
        (Verdict::StieltjesViolated, "Im Ŝ₂ has the sign of Im p² below the real axis".into())
    } else {
        (Verdict::Inconclusive, "no violation found at the test point".into())
    };
    Ok(PositivityReport { test_point, value, imaginary_part_sign: sign, branch_points, verdict, note })
}

/// `K₀(x) = ∫₀^∞ exp(−x cosh t) dt` by the trapezoidal rule.
pub fn bessel_k0(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::INFINITY;
    }
    let h = 0.05;
    let mut sum = 0.5 * Float::exp(-x);
    let mut t = h;
    loop {
        let v = Float::exp(-x * Float::cosh(t));
        sum += v;
        if v < 1e-18 * sum {
            break;
        }
        t += h;
    }
    h * sum
}

/// Wynn's ε algorithm applied to a sequence of partial sums.
fn wynn(s: &[f64]) -> f64 {
    let n = s.len();
    if n < 3 {
        return s[n - 1];
    }
    let mut prev = alloc::vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = s[n - 1];
    for col in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let v = if d == 0.0 { f64::INFINITY } else { prev[i + 1] + 1.0 / d };
            next.push(v);
        }
        if col % 2 == 0 {
            if let Some(&v) = next.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
        prev = cur;
        cur = next;
        if cur.len() < 2 {
            break;
        }
    }
    best
}

fn real_coupling(k: &Coupling) -> bool {
    k.lambda.im == 0.0 && k.c.im == 0.0 && k.c.re < 0.0 && k.c.re > -1.0
}

/// Position-space two-point function at separation `r`.
///
/// Uses the spectral representation over the cuts of `Ŝ₂` when the coupling
/// is real and `μr` is large, and the oscillatory Hankel integral otherwise.
pub fn s2_position(k: &Coupling, mu2: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::input("separation must be positive"));
    }
    if !(mu2 > 0.0 && mu2.is_finite()) {
        return Err(Error::input("μ² must be positive"));
    }
    if k.is_free() {
        return Ok(bessel_k0(Float::sqrt(mu2) * r) / (2.0 * PI * mu2));
    }
    if real_coupling(k) && Float::sqrt(mu2) * r >= 3.0 {
        s2_position_spectral(k, mu2, r)
    } else {
        s2_position_oscillatory(k, mu2, r)
    }
}

/// `(1/2πμ²)[K₀(μr) + ∫₀^∞ p (Ŝ₂ − 1/(p²+μ²)) J₀(pr) dp]` with the integral
/// split at the approximate Bessel zeros and the partial sums accelerated.
pub fn s2_position_oscillatory(k: &Coupling, mu2: f64, r: f64) -> Result<f64> {
    let opts = QuadOpts { abs_tol: 1e-16, rel_tol: 1e-12, max_panels: 2000 };
    let mut err: Option<Error> = None;
    let mut g = |p: f64| -> C {
        let p2 = p * p;
        match s2_hat(k, mu2, cz(p2)) {
            Ok(v) => cz(p * (v.re - 1.0 / (p2 + mu2)) * libm::j0(p * r)),
            Err(e) => {
                err.get_or_insert(e);
                cz(0.0)
            }
        }
    };
    let mut partial = Vec::new();
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut last = f64::NAN;
    let mut settled = 0;
    for j in 1..=600 {
        let hi = (j as f64 - 0.25) * PI / r;
        let (v, _) = integrate(&mut g, lo, hi, opts)?;
        total += v.re;
        partial.push(total);
        lo = hi;
        if partial.len() >= 8 {
            let tail = &partial[partial.len().saturating_sub(24)..];
            let est = wynn(tail);
            let scale = bessel_k0(Float::sqrt(mu2) * r) + est.abs();
            if (est - last).abs() < 1e-12 * scale {
                settled += 1;
                if settled >= 3 {
                    last = est;
                    break;
                }
            } else {
                settled = 0;
            }
            last = est;
        }
    }
    if let Some(e) = err {
        return Err(e);
    }
    if !last.is_finite() {
        return Err(Error::Quadrature { estimate: f64::NAN, wanted: 1e-12 });
    }
    Ok((bessel_k0(Float::sqrt(mu2) * r) + last) / (2.0 * PI * mu2))
}

/// Residue of `Ŝ₂` at its pole `p² = −2μ²`, which sits where the factor
/// `log(q+1)` of the closed form is singular.
pub fn pole_residue(k: &Coupling) -> C {
    if k.e.is_linear() {
        k.lambda2 * 2.0
    } else {
        cz(0.0)
    }
}

/// Continuous part of the spectral density, `Im Ŝ₂(−κ − i0)/π` with the
/// pole at `κ = 2μ²` removed.
pub fn spectral_density(k: &Coupling, mu2: f64, kappa: f64) -> Result<f64> {
    let eta = 1e-13 * kappa.abs().max(mu2);
    let p2 = C::new(-kappa, -eta);
    let pole = pole_residue(k) / (p2 + 2.0 * mu2);
    Ok((s2_hat(k, mu2, p2)? - pole).im / PI)
}

/// `(1/2πμ²)∫ρ(κ) K₀(√κ r) dκ`, valid for real coupling where the cuts of
/// `Ŝ₂` lie on the negative `p²` axis. The support is `[μ²(1−a), μ²(1+a)]`
/// from the square root, `[2μ², ∞)` from the logarithm, and the pole at `2μ²`.
pub fn s2_position_spectral(k: &Coupling, mu2: f64, r: f64) -> Result<f64> {
    if !real_coupling(k) {
        return Err(Error::domain("the spectral representation needs real coupling"));
    }
    let a = root_a(k).re;
    let opts = QuadOpts { abs_tol: 1e-18, rel_tol: 1e-11, max_panels: 2000 };
    let density = |kappa: f64| spectral_density(k, mu2, kappa).unwrap_or(f64::NAN);
    let inner = |th: f64| {
        let kappa = mu2 * (1.0 - a * Float::cos(th));
        cz(density(kappa) * bessel_k0(Float::sqrt(kappa) * r) * mu2 * a * Float::sin(th))
    };
    let (i1, _) = integrate(inner, 0.0, PI, opts)?;
    let outer = |kappa: f64| cz(density(kappa) * bessel_k0(Float::sqrt(kappa) * r));
    let (i2, _) = integrate_to_inf(outer, 2.0 * mu2, TailMap::Rational, opts)?;
    if !(i1.re.is_finite() && i2.re.is_finite()) {
        return Err(Error::domain("spectral density could not be evaluated on the cut"));
    }
    let pole = pole_residue(k).re * bessel_k0(Float::sqrt(2.0 * mu2) * r);
    Ok((i1.re + i2.re + pole) / (2.0 * PI * mu2))
}

/// One summand of the connected `N`-point Schwinger function in momentum space.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwingerIntegrand {
    pub value: C,
    /// Set when some boundary has an odd number of points; the value is then exactly zero.
    pub odd_part: bool,
    pub symmetry_factor: u64,
}

/// `Π ν_i!` over the multiplicities of equal valences.
pub fn symmetry_factor(partition: &[usize]) -> u64 {
    let mut sorted = partition.to_vec();
    sorted.sort_unstable();
    let mut s = 1u64;
    let mut run = 0u64;
    for (i, &n) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == n { run + 1 } else { 1 };
        s *= run;
    }
    s
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm.
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = alloc::vec![a.clone()];
    let mut c = alloc::vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Largest `N` accepted by [`schwinger_n_integrand`]; the permutation sum has `N!` terms.
pub const MAX_POINTS: usize = 10;

/// Integrand of the connected `N`-point function for boundary valences
/// `partition`, one 2D momentum per boundary and `N` insertion points.
///
/// The house arguments are `X^β = (‖p^β‖²/μ² + 1)²`, repeated `N_β` times.
pub fn schwinger_n_integrand(
    k: &Coupling,
    mu2: f64,
    partition: &[usize],
    momenta: &[[f64; 2]],
    points: &[[f64; 2]],
) -> Result<SchwingerIntegrand> {
    if partition.is_empty() || partition.contains(&0) {
        return Err(Error::input("partition parts must be positive"));
    }
    if !(mu2 > 0.0) {
        return Err(Error::input("μ² must be positive"));
    }
    let n: usize = partition.iter().sum();
    if momenta.len() != partition.len() {
        return Err(Error::input("need one momentum per boundary"));
    }
    if points.len() != n {
        return Err(Error::input(alloc::format!("need {n} points")));
    }
    if n > MAX_POINTS {
        return Err(Error::input(alloc::format!("at most {MAX_POINTS} points")));
    }
    let symmetry = symmetry_factor(partition);
    if partition.iter().any(|nb| nb % 2 == 1) {
        return Ok(SchwingerIntegrand { value: cz(0.0), odd_part: true, symmetry_factor: symmetry });
    }
    let args: Vec<Vec<C>> = partition
        .iter()
        .zip(momenta)
        .map(|(&nb, p)| {
            let q = (p[0] * p[0] + p[1] * p[1]) / mu2 + 1.0;
            alloc::vec![cz(q * q); nb]
        })
        .collect();
    let g = g_multi_boundary(k, &BoundarySpec::new(args)?)?.value;
    let weight: f64 = partition.iter().map(|&nb| Float::powi(2f64, nb as i32) / nb as f64 / (2.0 * PI * mu2)).product();
    let mut phase_sum = cz(0.0);
    for sigma in permutations(n) {
        let mut arg = 0.0;
        let mut s = 0;
        for (&nb, p) in partition.iter().zip(momenta) {
            for j in 0..nb {
                let xi = points[sigma[s + j]];
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                arg += sign * (p[0] * xi[0] + p[1] * xi[1]);
            }
            s += nb;
        }
        phase_sum += C::from_polar(1.0, arg);
    }
    let value = phase_sum * weight * g / (8.0 * PI * symmetry as f64);
    Ok(SchwingerIntegrand { value, odd_part: false, symmetry_factor: symmetry })
}
