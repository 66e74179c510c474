//! Planar correlation functions in the variables `X = (2e(x)+1)²`.
//!
//! Everything is expressed through `W(X) = √(X+c) + λ̃² A(X)`. For `e(x) = x`,
//! `A(X) = (2/√X) log((√(X+c)+√X)(√X+1)/(√X√(1+c)+√(X+c)))`. Otherwise it is
//! the integral `½∫₁^∞ ρ̂(T) dT/((√(X+c)+√(T+c))√(T+c))`.

pub mod divdiff;
pub mod tower;

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::exact::Jet;
use crate::quad::{integrate_to_inf, QuadOpts, TailMap};
use crate::spectral::Coupling;
use crate::{Error, Result};

pub use divdiff::{dist_to_cut, divided_difference};
pub use tower::{
    denominator_jet, denominator_quadrature, g_1plus_ansatz, g_1plus_tower, TowerEvaluator, DEFAULT_MAX_B,
};

type C = Complex64;

fn cz(x: f64) -> C {
    C::new(x, 0.0)
}

/// `X = (2e(x)+1)²`.
pub fn house_variable(k: &Coupling, x: f64) -> C {
    let v = 2.0 * k.e.e(x) + 1.0;
    cz(v * v)
}

fn check_arg(k: &Coupling, x: C) -> Result<()> {
    let z = x + k.c;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::input("argument is not finite"));
    }
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::domain(alloc::format!("X = {x} puts X + c on the cut")));
    }
    if k.e.is_linear() && x.im == 0.0 && x.re <= 0.0 {
        return Err(Error::domain(alloc::format!("X = {x} is outside the domain of the closed form")));
    }
    Ok(())
}

/// Distance from `X` to the nearest branch point or cut of `W`.
pub fn w_singular_distance(k: &Coupling, x: C) -> f64 {
    let d = dist_to_cut(x + k.c, 0.0);
    if k.e.is_linear() {
        d.min(dist_to_cut(x, 0.0))
    } else {
        d
    }
}

/// Distance from `X` to the cut of `√(X+c)`.
pub fn sqrt_singular_distance(k: &Coupling, x: C) -> f64 {
    dist_to_cut(x + k.c, 0.0)
}

/// Taylor jet of `A` around `X`.
fn a_jet(k: &Coupling, x: C, order: usize) -> Result<Jet<C>> {
    check_arg(k, x)?;
    if k.e.is_linear() {
        let xj = Jet::variable(x, order);
        let sx = xj.sqrt()?;
        let sxc = xj.add_scalar(&k.c).sqrt()?;
        let s1 = k.sqrt_1pc();
        let num = &(&sxc + &sx) * &sx.add_scalar(&cz(1.0));
        let den = &sx.scale(&s1) + &sxc;
        let arg = num.try_div_ref(&den)?;
        return Ok(arg.ln()?.try_div_ref(&sx)?.scale(&cz(2.0)));
    }
    a_integral_jet(k, x, order)
}

/// `½∫₁^∞ ρ̂(T) dT/((√(X+c)+√(T+c))√(T+c))` as a jet in `X`, by quadrature.
pub fn a_integral_jet(k: &Coupling, x: C, order: usize) -> Result<Jet<C>> {
    let sxc = Jet::variable(x, order).add_scalar(&k.c).sqrt()?;
    let opts = QuadOpts { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 3000 };
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let f = |t: f64| {
            let tau = (cz(t) + k.c).sqrt();
            let inv = sxc.add_scalar(&tau).recip().map(|j| *j.coeff(n)).unwrap_or(C::new(f64::NAN, 0.0));
            inv * (0.5 * k.e.rho_hat(t)) / tau
        };
        let (v, err) = integrate_to_inf(f, 1.0, TailMap::InverseSquare, opts)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Quadrature { estimate: err, wanted: opts.abs_tol });
        }
        coeffs.push(v);
    }
    Ok(Jet::new(coeffs))
}

/// Taylor expansion of `W` around `X` to order `K`.
pub fn w_jet(k: &Coupling, x: C, order: usize) -> Result<Jet<C>> {
    let sxc = Jet::variable(x, order).add_scalar(&k.c).sqrt()?;
    if k.is_free() {
        check_arg(k, x)?;
        return Ok(sxc);
    }
    Ok(&sxc + &a_jet(k, x, order)?.scale(&k.lambda2))
}

/// The planar 1-point function in house variables.
pub fn w(k: &Coupling, x: C) -> Result<C> {
    Ok(*w_jet(k, x, 0)?.value())
}

/// The `W` of the integral representation regardless of `e`; used as an oracle for the closed form.
pub fn w_integral(k: &Coupling, x: C) -> Result<C> {
    check_arg(k, x)?;
    Ok((x + k.c).sqrt() + k.lambda2 * a_integral_jet(k, x, 0)?.value())
}

/// Renormalised 1-point function `(W((2x+1)²) − (2x+1))/(2λ̃)`, with `x` the
/// eigenvalue-space argument. Written as `λ̃·[(c/λ̃²)/(2(√(X+c)+√X)) + A/2]`
/// so that it is regular at λ̃ = 0.
pub fn g1(k: &Coupling, x: f64) -> Result<C> {
    if !(x >= 0.0) {
        return Err(Error::input("G1 needs x ≥ 0"));
    }
    let xx = house_variable(k, x);
    check_arg(k, xx)?;
    if k.lambda.norm() == 0.0 {
        return Ok(cz(0.0));
    }
    let sx = xx.sqrt();
    let sxc = (xx + k.c).sqrt();
    let a = *a_jet(k, xx, 0)?.value();
    Ok(k.lambda * (k.c_over_lambda2 / ((sxc + sx) * 2.0) + a * 0.5))
}

/// `W[X₁,…,X_N]`.
pub fn w_divided(k: &Coupling, xs: &[C]) -> Result<C> {
    for &x in xs {
        check_arg(k, x)?;
    }
    divided_difference(&|z| w(k, z), xs, &|z| w_singular_distance(k, z))
}

/// `2(W(X)−W(Y))/(X−Y)`, continued to the diagonal.
pub fn g2(k: &Coupling, x: C, y: C) -> Result<C> {
    Ok(w_divided(k, &[x, y])? * 2.0)
}

/// `Σ_k W(X_k)/(2λ̃) Π_{l≠k} 4λ̃/(X_k−X_l) = 2^{2N−3} λ̃^{N−2} W[X₁,…,X_N]`.
pub fn gn_single_boundary(k: &Coupling, xs: &[C]) -> Result<C> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::input("the N-point function needs N ≥ 2"));
    }
    let pre = k.lambda.powi(n as i32 - 2) * Float::powi(2f64, 2 * n as i32 - 3);
    if pre.norm() == 0.0 {
        for &x in xs {
            check_arg(k, x)?;
        }
        return Ok(pre);
    }
    Ok(w_divided(k, xs)? * pre)
}

/// The cylinder amplitude `4λ̃²/(√(X+c)√(Y+c)(√(X+c)+√(Y+c))²)`.
pub fn g_1plus1(k: &Coupling, x: C, y: C) -> Result<C> {
    check_arg(k, x)?;
    check_arg(k, y)?;
    let (a, b) = ((x + k.c).sqrt(), (y + k.c).sqrt());
    Ok(k.lambda2 * 4.0 / (a * b * (a + b) * (a + b)))
}

/// `−32λ̃⁵/(ρ₀ √(X+c)³ √(Y+c)³ √(Z+c)³)`.
pub fn g_1plus1plus1(k: &Coupling, x: C, y: C, z: C) -> Result<C> {
    for v in [x, y, z] {
        check_arg(k, v)?;
    }
    if k.rho0.norm() < 1e-14 {
        return Err(Error::singular("ρ₀ = 0 at the critical point"));
    }
    let p: C = [x, y, z].iter().map(|&v| (v + k.c).sqrt().powi(3)).product();
    Ok(-k.lambda.powi(5) * 32.0 / (k.rho0 * p))
}

/// Arguments of a multi-boundary correlator, one list per boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySpec {
    pub args: Vec<Vec<C>>,
}

impl BoundarySpec {
    pub fn new(args: Vec<Vec<C>>) -> Result<Self> {
        if args.is_empty() || args.iter().any(|b| b.is_empty()) {
            return Err(Error::input("every boundary needs at least one argument"));
        }
        Ok(BoundarySpec { args })
    }

    pub fn partition(&self) -> Vec<usize> {
        self.args.iter().map(Vec::len).collect()
    }
}

/// Which closed form produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    OnePoint,
    SingleBoundary,
    Cylinder,
    Tower,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarFunctionValue {
    pub value: C,
    pub provenance: Provenance,
}

/// Multivariate divided difference of `kernel` taken slot by slot.
fn nested_divided(
    kernel: &dyn Fn(&[C]) -> Result<C>,
    args: &[Vec<C>],
    fixed: &[C],
    dist: &dyn Fn(C) -> f64,
) -> Result<C> {
    let slot = fixed.len();
    if slot == args.len() {
        return kernel(fixed);
    }
    let f = |z: C| -> Result<C> {
        let mut inner = fixed.to_vec();
        inner.push(z);
        nested_divided(kernel, args, &inner, dist)
    };
    divided_difference(&f, &args[slot], dist)
}

/// The genus-zero `(N₁+…+N_B)`-point function.
pub fn g_multi_boundary(k: &Coupling, spec: &BoundarySpec) -> Result<PlanarFunctionValue> {
    let b = spec.args.len();
    for &x in spec.args.iter().flatten() {
        check_arg(k, x)?;
    }
    if b == 1 {
        let xs = &spec.args[0];
        return if xs.len() == 1 {
            Ok(PlanarFunctionValue { value: w(k, xs[0])?, provenance: Provenance::OnePoint })
        } else {
            Ok(PlanarFunctionValue { value: gn_single_boundary(k, xs)?, provenance: Provenance::SingleBoundary })
        };
    }
    let n_total: usize = spec.args.iter().map(Vec::len).sum();
    let pre = k.lambda.powi((n_total - b) as i32) * Float::powi(4f64, (n_total - b) as i32);
    let dist = |z: C| sqrt_singular_distance(k, z);
    let (value, provenance) = if b == 2 {
        let kernel = |xs: &[C]| g_1plus1(k, xs[0], xs[1]);
        (nested_divided(&kernel, &spec.args, &[], &dist)?, Provenance::Cylinder)
    } else {
        let ev = TowerEvaluator::new(k, b)?;
        let kernel = |xs: &[C]| ev.eval(xs);
        (nested_divided(&kernel, &spec.args, &[], &dist)?, Provenance::Tower)
    };
    Ok(PlanarFunctionValue { value: value * pre, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::EigenvalueFunction;

    #[test]
    fn normalisation() {
        for l in [0.0, 0.1, 0.3, 0.45] {
            let k = Coupling::from_real_lambda(l).unwrap();
            assert!((w(&k, cz(1.0)).unwrap() - 1.0).norm() < 1e-12, "λ̃ = {l}");
        }
    }

    #[test]
    fn free_w_is_sqrt() {
        let k = Coupling::free();
        assert_eq!(w(&k, cz(9.0)).unwrap(), cz(3.0));
        assert!((w_jet(&k, cz(4.0), 2).unwrap().coeff(1) - 0.25).norm() < 1e-16);
        assert!((g2(&k, cz(1.0), cz(1.0)).unwrap() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn closed_form_matches_integral() {
        let k = Coupling::from_real_lambda(0.3).unwrap();
        let a = w(&k, cz(4.0)).unwrap();
        let b = w_integral(&k, cz(4.0)).unwrap();
        assert!((a - b).norm() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn g1_low_order_series() {
        let l: f64 = 0.1;
        let k = Coupling::from_real_lambda(l).unwrap();
        let ln2 = core::f64::consts::LN_2;
        let (a, b) = (ln2, ln2 * ln2);
        let series = l * a / 3.0
            + l.powi(3) * (b / 3.0 - b / 27.0)
            + l.powi(5) * (b / 3.0 + (2.0 * a * b - b) / 27.0 - 2.0 * a * b / 243.0);
        let v = g1(&k, 1.0).unwrap();
        assert!((v.re - series).abs() < 1e-6, "{v} vs {series}");
        assert!(g1(&k, 0.0).unwrap().norm() < 1e-15);
        assert_eq!(g1(&Coupling::free(), 1.0).unwrap(), cz(0.0));
    }

    #[test]
    fn invalid_arguments() {
        let k = Coupling::from_real_lambda(0.2).unwrap();
        assert!(matches!(w(&k, cz(-2.0)), Err(Error::Domain(_))));
        assert!(matches!(gn_single_boundary(&k, &[cz(1.0)]), Err(Error::Input(_))));
    }

    #[test]
    fn cylinder_at_unit_root() {
        let k = Coupling::from_real_lambda(0.3).unwrap();
        let x = cz(1.0) - k.c;
        assert!((g_1plus1(&k, x, x).unwrap() - k.lambda2).norm() < 1e-15);
    }

    #[test]
    fn three_point_diagonal_limit() {
        let k = Coupling::from_real_lambda(0.2).unwrap();
        let (x, y) = (cz(4.0), cz(2.0));
        let v = gn_single_boundary(&k, &[x, y, y]).unwrap();
        let wx = w(&k, x).unwrap();
        let wy = w_jet(&k, y, 1).unwrap();
        let d = (wx - wy.coeff(0)) / ((x - y) * (x - y)) - wy.coeff(1) / (x - y);
        assert!((v - d * 8.0 * 0.2).norm() < 1e-12, "{v}");
    }

    #[test]
    fn two_by_one_by_hand() {
        let k = Coupling::from_real_lambda(0.25).unwrap();
        let (a, b, y) = (cz(2.0), cz(7.0), cz(3.0));
        let spec = BoundarySpec::new(alloc::vec![alloc::vec![a, b], alloc::vec![y]]).unwrap();
        let v = g_multi_boundary(&k, &spec).unwrap();
        let hand = k.lambda * (g_1plus1(&k, a, y).unwrap() - g_1plus1(&k, b, y).unwrap()) * 4.0 / (a - b);
        assert!((v.value - hand).norm() < 1e-15);
        assert_eq!(v.provenance, Provenance::Cylinder);
    }

    #[test]
    fn custom_identity_matches_linear() {
        #[derive(Debug)]
        struct Id;
        impl crate::spectral::CustomEigenvalue for Id {
            fn e(&self, x: f64) -> f64 {
                x
            }
            fn de(&self, _: f64) -> f64 {
                1.0
            }
            fn inv(&self, y: f64) -> f64 {
                y
            }
        }
        let e = EigenvalueFunction::Custom(alloc::sync::Arc::new(Id));
        let kc = Coupling::from_lambda(cz(0.3), e).unwrap();
        let kl = Coupling::from_real_lambda(0.3).unwrap();
        assert!((kc.c - kl.c).norm() < 1e-11);
        assert!((g1(&kc, 2.0).unwrap() - g1(&kl, 2.0).unwrap()).norm() < 1e-10);
    }
}
