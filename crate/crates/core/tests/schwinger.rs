use num_complex::Complex64 as C;
use phi3_core::schwinger::{
    bessel_k0, branch_points, positivity_check, s2_hat, s2_position, schwinger_n_integrand, symmetry_factor, Sign,
    Verdict,
};
use phi3_core::spectral::Coupling;
use phi3_core::Error;

fn cz(x: f64) -> C {
    C::new(x, 0.0)
}

#[test]
fn free_propagator_values() {
    let k = Coupling::free();
    assert!((s2_hat(&k, 1.0, cz(0.0)).unwrap() - 1.0).norm() < 1e-15);
    assert!((s2_hat(&k, 2.0, cz(3.0)).unwrap() - 0.2).norm() < 1e-15);
}

#[test]
fn physical_axis_and_ultraviolet() {
    let k = Coupling::from_real_lambda(0.3).unwrap();
    for p2 in [0.0, 0.5, 3.0, 40.0] {
        let v = s2_hat(&k, 1.0, cz(p2)).unwrap();
        assert!(v.re > 0.0 && v.im.abs() < 1e-12);
    }
    let p2 = 1e6;
    let v = s2_hat(&k, 1.0, cz(p2)).unwrap();
    assert!((v.re * p2 - 1.0).abs() < 1e-3);
}

#[test]
fn positivity_reports() {
    let k = Coupling::from_real_lambda(0.3).unwrap();
    let r = positivity_check(&k, 1.0).unwrap();
    assert_eq!(r.imaginary_part_sign, Sign::Negative);
    assert_eq!(r.verdict, Verdict::StieltjesViolated);
    assert!((r.test_point - C::new(-3.0, -k.c.re.abs() / 10.0)).norm() < 1e-15);

    let ki = Coupling::from_lambda(C::new(0.0, 0.2), Default::default()).unwrap();
    let bp = branch_points(&ki, 1.0);
    let sc = ki.c.re.sqrt();
    assert!(ki.c.re > 0.0);
    assert!(bp.iter().any(|b| (b - C::new(-1.0, sc)).norm() < 1e-12));
    assert!(bp.iter().any(|b| (b - C::new(-1.0, -sc)).norm() < 1e-12));
    assert_eq!(positivity_check(&ki, 1.0).unwrap().verdict, Verdict::StieltjesViolated);

    assert_eq!(positivity_check(&Coupling::free(), 1.0).unwrap().verdict, Verdict::Inconclusive);
}

#[test]
fn real_branch_points_bound_the_cut() {
    let k = Coupling::from_real_lambda(0.3).unwrap();
    let a = (-k.c.re).sqrt();
    let bp = branch_points(&k, 2.0);
    assert!(bp.iter().any(|b| (b - cz(2.0 * (-1.0 + a))).norm() < 1e-12));
    let inside = cz(-2.0);
    assert!(matches!(s2_hat(&k, 2.0, inside), Err(Error::Domain(_))));
}

#[test]
fn free_position_profile_is_k0() {
    let k = Coupling::free();
    let v = s2_position(&k, 1.0, 1.0).unwrap();
    assert!((v - 0.42102443824070834 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);
    assert!((bessel_k0(1.0) - 0.42102443824070834).abs() < 1e-14);
}

#[test]
fn position_profile_decays() {
    let k = Coupling::from_real_lambda(0.2).unwrap();
    let s1 = s2_position(&k, 1.0, 1.0).unwrap();
    let s2 = s2_position(&k, 1.0, 2.0).unwrap();
    assert!(s1 > 0.0 && s2 > 0.0 && s2 < s1);
}

#[test]
fn mass_gap_matches_nearest_branch_point() {
    let k = Coupling::from_real_lambda(0.2).unwrap();
    let m = (1.0 - (-k.c.re).sqrt()).sqrt();
    let (r1, r2) = (15.0, 25.0);
    let slope = (s2_position(&k, 1.0, r2).unwrap().ln() - s2_position(&k, 1.0, r1).unwrap().ln()) / (r2 - r1);
    assert!((slope + m).abs() < 0.1 * m, "slope {slope}, mass {m}");
}

#[test]
fn n_point_integrands() {
    assert_eq!(symmetry_factor(&[2, 2]), 2);
    assert_eq!(symmetry_factor(&[4, 2, 2, 2]), 6);
    let k = Coupling::from_real_lambda(0.2).unwrap();
    let odd = schwinger_n_integrand(&k, 1.0, &[1, 1], &[[0.3, 0.1], [-0.3, -0.1]], &[[0.0, 0.0], [1.0, 0.0]]).unwrap();
    assert!(odd.odd_part);
    assert_eq!(odd.value, cz(0.0));
}

#[test]
fn free_two_point_integrand() {
    let k = Coupling::free();
    let p = [0.6, 0.8];
    let v = schwinger_n_integrand(&k, 1.0, &[2], &[p], &[[0.0, 0.0], [0.5, 0.0]]).unwrap();
    // 1/(p² + μ²) = ½ at |p| = 1.
    let phase = (p[0] * 0.5f64).cos();
    let want = 0.5 * phase / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    assert!((v.value - want).norm() < 1e-12, "{} vs {want}", v.value);
}
