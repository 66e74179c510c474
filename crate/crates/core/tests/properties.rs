use std::f64::consts::PI;

use num_complex::Complex64 as C;
use phi3_core::bell::bell_partial;
use phi3_core::correlators::{g2, g_1plus1, g_multi_boundary, gn_single_boundary, w, BoundarySpec};
use phi3_core::exact::{rat, rat_frac, Jet, MPoly, Rational};
use phi3_core::schwinger::{positivity_check, s2_hat};
use phi3_core::spectral::{solve_c, Coupling, EigenvalueFunction};
use proptest::prelude::*;

fn cz(x: f64) -> C {
    C::new(x, 0.0)
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Taylor coefficients of `f` at `z0` from a circle of radius `r`.
fn contour_coeffs(f: &dyn Fn(C) -> C, z0: C, r: f64, order: usize) -> Vec<C> {
    let m = 64;
    let mut out = vec![cz(0.0); order + 1];
    for j in 0..m {
        let h = C::from_polar(r, 2.0 * PI * j as f64 / m as f64);
        let v = f(z0 + h);
        for (k, o) in out.iter_mut().enumerate() {
            *o += v / h.powi(k as i32);
        }
    }
    out.into_iter().map(|c| c / m as f64).collect()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat_frac(n, d))
}

fn mpoly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), small_rational()), 0..5)
        .prop_map(|terms| MPoly::from_terms(3, terms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_coefficients_match_contour_derivatives(x in 0.6f64..3.0, which in 0usize..5) {
        let order = 4;
        let z0 = cz(x);
        let t = Jet::variable(z0, order);
        let (jet, f): (Jet<C>, fn(C) -> C) = match which {
            0 => (t.sqrt().unwrap(), |z| z.sqrt()),
            1 => (t.ln().unwrap(), |z| z.ln()),
            2 => (t.exp(), |z| z.exp()),
            3 => (t.powf(-1.5).unwrap(), |z| z.powf(-1.5)),
            _ => (t.recip().unwrap(), |z| 1.0 / z),
        };
        let want = contour_coeffs(&f, z0, 0.25, order);
        for (k, want) in want.iter().enumerate() {
            prop_assert!(rel(*jet.coeff(k), *want) < 1e-6, "k = {k}: {} vs {want}", jet.coeff(k));
        }
    }

    #[test]
    fn mpoly_ring_axioms(a in mpoly(), b in mpoly(), c in mpoly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn bell_generating_function(xs in prop::collection::vec(small_rational(), 4), u in small_rational(), n in 1usize..=4) {
        // e^{u f(t)} with f = Σ x_j t^j / j!, via e' = u f' e.
        let mut f = vec![rat(0)];
        let mut fact = rat(1);
        for (j, x) in xs.iter().enumerate() {
            fact *= rat(j as i64 + 1);
            f.push(x.clone() / fact.clone());
        }
        let mut e = vec![rat(1)];
        for m in 1..=n {
            let mut acc = rat(0);
            for k in 1..=m {
                acc += rat(k as i64) * f[k].clone() * e[m - k].clone();
            }
            e.push(acc * u.clone() / rat(m as i64));
        }
        let n_fact: Rational = (1..=n as i64).map(rat).fold(rat(1), |a, b| a * b);
        let mut lhs = rat(0);
        let mut up = rat(1);
        for k in 0..=n as i64 {
            lhs += bell_partial(n as i64, k, &xs, &rat(0)).unwrap() * up.clone();
            up *= u.clone();
        }
        prop_assert_eq!(lhs, e[n].clone() * n_fact);
    }

    #[test]
    fn normalisation_residual_in_small_disk(r in 0.0f64..0.2, th in 0.0f64..(2.0 * PI)) {
        let k = solve_c(C::from_polar(r, th), EigenvalueFunction::Linear).unwrap();
        prop_assert!(k.residual().unwrap() < 1e-12);
        let k = Coupling::from_lambda(C::from_polar(r, th).sqrt(), EigenvalueFunction::Linear).unwrap();
        prop_assert!((w(&k, cz(1.0)).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn single_boundary_is_symmetric(xs in prop::collection::vec((1.0f64..20.0, -2.0f64..2.0), 3..=5), l in 0.05f64..0.4) {
        let k = Coupling::from_real_lambda(l).unwrap();
        let xs: Vec<C> = xs.into_iter().map(|(a, b)| C::new(a, b)).collect();
        let base = gn_single_boundary(&k, &xs).unwrap();
        let mut rev = xs.clone();
        rev.reverse();
        let mut rot = xs.clone();
        rot.rotate_left(1);
        prop_assert!(rel(gn_single_boundary(&k, &rev).unwrap(), base) < 1e-10);
        prop_assert!(rel(gn_single_boundary(&k, &rot).unwrap(), base) < 1e-10);
    }

    #[test]
    fn multi_boundary_is_symmetric(a in 1.0f64..10.0, b in 1.0f64..10.0, c in 1.0f64..10.0, d in 1.0f64..10.0, l in 0.05f64..0.4) {
        let k = Coupling::from_real_lambda(l).unwrap();
        let (a, b, c, d) = (cz(a), cz(b), cz(c), cz(d));
        let eval = |args: Vec<Vec<C>>| g_multi_boundary(&k, &BoundarySpec::new(args).unwrap()).unwrap().value;
        let base = eval(vec![vec![a, b, c], vec![d]]);
        prop_assert!(rel(eval(vec![vec![b, c, a], vec![d]]), base) < 1e-12);
        prop_assert!(rel(eval(vec![vec![d], vec![a, b, c]]), base) < 1e-12);
        let three = eval(vec![vec![a, b], vec![c], vec![d]]);
        prop_assert!(rel(eval(vec![vec![d], vec![b, a], vec![c]]), three) < 1e-12);
        prop_assert!(rel(eval(vec![vec![c], vec![d], vec![a, b]]), three) < 1e-12);
    }

    #[test]
    fn two_point_functions_are_symmetric(x in 1.0f64..50.0, y in 1.0f64..50.0, l in 0.0f64..0.45) {
        let k = Coupling::from_real_lambda(l).unwrap();
        let (x, y) = (cz(x), cz(y));
        prop_assert!(rel(g2(&k, x, y).unwrap(), g2(&k, y, x).unwrap()) < 1e-13);
        if l > 0.0 {
            prop_assert!(rel(g_1plus1(&k, x, y).unwrap(), g_1plus1(&k, y, x).unwrap()) < 1e-13);
        }
    }

    #[test]
    fn s2_obeys_schwarz_reflection(re in -10.0f64..10.0, im in 0.05f64..5.0, l in 0.05f64..0.45) {
        let k = Coupling::from_real_lambda(l).unwrap();
        let p2 = C::new(re, im);
        let up = s2_hat(&k, 1.0, p2).unwrap();
        let down = s2_hat(&k, 1.0, p2.conj()).unwrap();
        prop_assert!((up.conj() - down).norm() < 1e-12 * up.norm().max(1.0));
    }

    #[test]
    fn s2_is_real_on_the_physical_axis(p2 in 0.0f64..1e4, l in 0.0f64..0.45, mu2 in 0.2f64..5.0) {
        let k = Coupling::from_real_lambda(l).unwrap();
        prop_assert!(s2_hat(&k, mu2, cz(p2)).unwrap().im.abs() < 1e-12);
    }

    #[test]
    fn verdict_does_not_depend_on_mass(l in 0.05f64..0.45) {
        let k = Coupling::from_real_lambda(l).unwrap();
        let v: Vec<_> = [0.5, 1.0, 2.0].iter().map(|&m| positivity_check(&k, m).unwrap().verdict).collect();
        prop_assert!(v.iter().all(|x| *x == v[0]));
    }
}
