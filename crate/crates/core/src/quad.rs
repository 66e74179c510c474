//! Adaptive Gauss–Kronrod quadrature for complex integrands, plus
//! Gauss–Legendre rules for the fixed grids of the integral-equation oracle.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_64, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
pub fn gk15(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOpts {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts { abs_tol: 1e-13, rel_tol: 1e-12, max_panels: 4000 }
    }
}

/// Globally adaptive bisection on `[a, b]`; returns the value and error estimate.
pub fn integrate(mut f: impl FnMut(f64) -> Complex64, a: f64, b: f64, opts: QuadOpts) -> Result<(Complex64, f64)> {
    let (v, e) = gk15(&mut f, a, b);
    let mut panels: Vec<(f64, f64, Complex64, f64)> = alloc::vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > opts.abs_tol.max(opts.rel_tol * total.norm()) {
        if panels.len() >= opts.max_panels {
            return Err(Error::Quadrature { estimate: err, wanted: opts.abs_tol.max(opts.rel_tol * total.norm()) });
        }
        let (idx, _) =
            panels.iter().enumerate().fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (pa, pb, pv, pe) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if !(mid > pa && mid < pb) {
            return Err(Error::Quadrature { estimate: err, wanted: opts.abs_tol });
        }
        let (v1, e1) = gk15(&mut f, pa, mid);
        let (v2, e2) = gk15(&mut f, mid, pb);
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
        if panels.len().is_multiple_of(64) {
            // Re-sum to stop rounding drift in the running totals.
            total = panels.iter().map(|p| p.2).sum();
            err = panels.iter().map(|p| p.3).sum();
        }
    }
    Ok((total, err))
}

/// Change of variables used to map `[a, ∞)` onto a finite interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMap {
    /// `T = a + u/(1−u)`, `u ∈ [0, 1)`; smooth for integrands decaying like integer powers.
    Rational,
    /// `T = a/v²`, `v ∈ (0, 1]`; smooth for half-integer power decay.
    InverseSquare,
}

/// `∫_a^∞ f(T) dT` for `a > 0`.
pub fn integrate_to_inf(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    map: TailMap,
    opts: QuadOpts,
) -> Result<(Complex64, f64)> {
    let zero = Complex64::new(0.0, 0.0);
    match map {
        TailMap::Rational => integrate(
            |u| {
                if u >= 1.0 {
                    return zero;
                }
                let w = 1.0 - u;
                f(a + u / w) / (w * w)
            },
            0.0,
            1.0,
            opts,
        ),
        TailMap::InverseSquare => integrate(
            |v| {
                if v <= 0.0 {
                    return zero;
                }
                f(a / (v * v)) * (2.0 * a / (v * v * v))
            },
            0.0,
            1.0,
            opts,
        ),
    }
}

/// `n`-point Gauss–Legendre nodes and weights on `[−1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = Float::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let (v, _) = gk15(&mut |x| c(x.powi(10)), 0.0, 1.0);
        assert!((v.re - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let (v, _) = integrate(|x| c(x.sqrt()), 0.0, 1.0, QuadOpts::default()).unwrap();
        assert!((v.re - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tails() {
        let opts = QuadOpts::default();
        let (v, _) = integrate_to_inf(|t| c(1.0 / (t * t)), 1.0, TailMap::Rational, opts).unwrap();
        assert!((v.re - 1.0).abs() < 1e-13);
        let (v, _) = integrate_to_inf(|t| c(t.powf(-1.5)), 4.0, TailMap::InverseSquare, opts).unwrap();
        assert!((v.re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn gauss_legendre_integrates_degree_2n_minus_1() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((s - 2.0 / 23.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = QuadOpts { max_panels: 4, ..QuadOpts::default() };
        let r = integrate(|x| c((1e4 * x).sin()), 0.0, 1.0, opts);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
