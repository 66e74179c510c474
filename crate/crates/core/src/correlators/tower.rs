//! The `(1+…+1)`-point functions with `B ≥ 3` single-argument boundaries.
//!
//! ```text
//! G(X¹|…|X^B) = (−2λ̃)^{3B−4} (B−3)! [t^{B−3}] Π_β (X^β+c−2t)^{−3/2} / D(t)^{B−2}
//! D(t) = ρ₀ + Σ_{r≥1} (2r+1)!!/(r+1)! ρ_r t^r
//! ```
//!
//! `D` is the Taylor series of `1 − ∫ρ(T)/√(T+c) dT/((√(T+c)+√(T+c−2t))√(T+c−2t))`,
//! see [`denominator_quadrature`].

use num_complex::Complex64;

use crate::bell::{gamma_numeric, gamma_recursive};
use crate::exact::{factorial, rat_to_f64, Jet, Rational};
use crate::quad::{integrate_to_inf, QuadOpts, TailMap};
use crate::spectral::{moments, Coupling, MomentTable};
use crate::{Error, Result};

type C = Complex64;

pub const DEFAULT_MAX_B: usize = 12;

/// `D(t)` to order `L` from the moments `ρ₀..ρ_L`.
pub fn denominator_jet(table: &MomentTable, order: usize) -> Result<Jet<C>> {
    if table.values.len() <= order {
        return Err(Error::input("moment table too short for the requested order"));
    }
    let coeffs = (0..=order)
        .map(|r| {
            let w = crate::bell::double_factorial(2 * r as i64 + 1)?;
            let q = Rational::new(w, factorial(r as u32 + 1));
            Ok(table.get(r) * rat_to_f64(&q))
        })
        .collect::<Result<_>>()?;
    Ok(Jet::new(coeffs))
}

/// `D(t)` by direct quadrature, for `t` with `T + c − 2t` off the cut on `[1, ∞)`.
pub fn denominator_quadrature(k: &Coupling, t: C) -> Result<C> {
    let f = |tt: f64| {
        let a = (C::new(tt, 0.0) + k.c).sqrt();
        let b = (C::new(tt, 0.0) + k.c - t * 2.0).sqrt();
        k.lambda2 * k.e.rho_hat(tt) / (a * (a + b) * b)
    };
    let opts = QuadOpts { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 3000 };
    let (v, _) = integrate_to_inf(f, 1.0, TailMap::Rational, opts)?;
    Ok(C::new(1.0, 0.0) - v)
}

/// Holds `D(t)` for one coupling and boundary count so that repeated
/// evaluations reuse the moment quadratures.
#[derive(Clone, Debug)]
pub struct TowerEvaluator {
    b: usize,
    lambda: C,
    c: C,
    denominator: Jet<C>,
}

impl TowerEvaluator {
    pub fn new(k: &Coupling, b: usize) -> Result<Self> {
        Self::with_max(k, b, DEFAULT_MAX_B)
    }

    pub fn with_max(k: &Coupling, b: usize, max_b: usize) -> Result<Self> {
        if b < 3 {
            return Err(Error::input("the tower formula needs B ≥ 3"));
        }
        if b > max_b {
            return Err(Error::input(alloc::format!("B = {b} exceeds the configured maximum {max_b}")));
        }
        if k.rho0.norm() < 1e-14 {
            return Err(Error::singular("ρ₀ = 0 at the critical point"));
        }
        let table = moments(k, b - 3)?;
        Ok(TowerEvaluator { b, lambda: k.lambda, c: k.c, denominator: denominator_jet(&table, b - 3)? })
    }

    pub fn denominator(&self) -> &Jet<C> {
        &self.denominator
    }

    pub fn eval(&self, xs: &[C]) -> Result<C> {
        if xs.len() != self.b {
            return Err(Error::input(alloc::format!("expected {} arguments, got {}", self.b, xs.len())));
        }
        let order = self.b - 3;
        let mut num = Jet::constant(C::new(1.0, 0.0), order);
        for &x in xs {
            let z = x + self.c;
            if z.im == 0.0 && z.re <= 0.0 {
                return Err(Error::domain(alloc::format!("X = {x} puts X + c on the cut")));
            }
            num = &num * &Jet::linear(z, C::new(-2.0, 0.0), order).powf(-1.5)?;
        }
        let q = num.try_div_ref(&self.denominator.powi(self.b as u32 - 2))?;
        let fact = rat_to_f64(&Rational::from_integer(factorial(order as u32)));
        Ok(*q.coeff(order) * fact * (self.lambda * -2.0).powi(3 * self.b as i32 - 4))
    }
}

pub fn g_1plus_tower(k: &Coupling, xs: &[C]) -> Result<C> {
    TowerEvaluator::new(k, xs.len())?.eval(xs)
}

/// The factorised ansatz `(−2λ̃)^{3B−4}/ρ₀ Σ_M γ^M_B ∂_t^M Π_β (X^β+c−2t)^{−3/2}|_{t=0}`
/// with `γ` from the exact recursion. Independent of [`TowerEvaluator`] apart
/// from the moments.
pub fn g_1plus_ansatz(k: &Coupling, xs: &[C]) -> Result<C> {
    let b = xs.len();
    if b < 3 {
        return Err(Error::input("the ansatz needs B ≥ 3"));
    }
    if k.rho0.norm() < 1e-14 {
        return Err(Error::singular("ρ₀ = 0 at the critical point"));
    }
    let order = b - 3;
    let table = gamma_recursive(b)?;
    let gammas = gamma_numeric(&table, &moments(k, order)?.values)?;
    let mut prod = Jet::constant(C::new(1.0, 0.0), order);
    for &x in xs {
        let z = x + k.c;
        if z.im == 0.0 && z.re <= 0.0 {
            return Err(Error::domain(alloc::format!("X = {x} puts X + c on the cut")));
        }
        prod = &prod * &Jet::linear(z, C::new(-2.0, 0.0), order).powf(-1.5)?;
    }
    let mut sum = C::new(0.0, 0.0);
    for (m, g) in gammas.iter().enumerate() {
        sum += g * prod.coeff(m) * rat_to_f64(&Rational::from_integer(factorial(m as u32)));
    }
    Ok(sum * (k.lambda * -2.0).powi(3 * b as i32 - 4) / k.rho0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::g_1plus1plus1;

    #[test]
    fn three_boundaries_match_direct_formula() {
        let k = Coupling::from_real_lambda(0.2).unwrap();
        let xs = [C::new(1.5, 0.0), C::new(2.0, 0.0), C::new(4.0, 0.0)];
        let a = g_1plus_tower(&k, &xs).unwrap();
        let b = g_1plus1plus1(&k, xs[0], xs[1], xs[2]).unwrap();
        assert!((a - b).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn denominator_constant_term_is_rho0() {
        let k = Coupling::from_real_lambda(0.3).unwrap();
        let d0 = denominator_quadrature(&k, C::new(0.0, 0.0)).unwrap();
        assert!((d0 - k.rho0).norm() < 1e-12);
    }

    #[test]
    fn ansatz_matches_tower() {
        let k = Coupling::from_real_lambda(0.3).unwrap();
        let xs = [C::new(1.5, 0.0), C::new(2.0, 0.3), C::new(4.0, 0.0), C::new(9.0, 0.0), C::new(1.2, 0.0)];
        for b in 3..=5 {
            let a = g_1plus_ansatz(&k, &xs[..b]).unwrap();
            let t = g_1plus_tower(&k, &xs[..b]).unwrap();
            assert!((a - t).norm() < 1e-12 * t.norm(), "B={b}: {a} {t}");
        }
    }

    #[test]
    fn cap_and_lower_bound() {
        let k = Coupling::from_real_lambda(0.2).unwrap();
        assert!(TowerEvaluator::new(&k, 2).is_err());
        assert!(TowerEvaluator::new(&k, 13).is_err());
    }
}
