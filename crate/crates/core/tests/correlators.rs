use std::f64::consts::PI;

use num_complex::Complex64 as C;
use phi3_core::correlators::{
    denominator_jet, denominator_quadrature, g1, g2, g_1plus1, g_1plus1plus1, g_1plus_ansatz, g_1plus_tower,
    g_multi_boundary, gn_single_boundary, w, w_jet, BoundarySpec, Provenance,
};
use phi3_core::inteq::{solve_w_inteq, Grid, Tail};
use phi3_core::spectral::{moments, Coupling, EigenvalueFunction};
use phi3_core::Error;

fn cz(x: f64) -> C {
    C::new(x, 0.0)
}

fn lambda(l: f64) -> Coupling {
    Coupling::from_real_lambda(l).unwrap()
}

#[test]
fn w_derivative_matches_central_difference() {
    let k = lambda(0.3);
    let h = 1e-4;
    let fd = (w(&k, cz(2.0 + h)).unwrap() - w(&k, cz(2.0 - h)).unwrap()) / (2.0 * h);
    let jet = w_jet(&k, cz(2.0), 3).unwrap();
    assert!((jet.coeff(1) - fd).norm() < 1e-7);
    assert_eq!(*jet.coeff(0), w(&k, cz(2.0)).unwrap());
}

#[test]
fn one_point_function_matches_integral_equation_solution() {
    let k = lambda(0.3);
    let grid = Grid::geometric(1e8, 2000).unwrap();
    let sol = solve_w_inteq(k.lambda2, &EigenvalueFunction::Linear, &grid, Tail::Analytic).unwrap();
    // Lagrange interpolation through the ten nodes nearest to X = 25.
    let target = 25.0;
    let i = grid.nodes.partition_point(|&x| x < target);
    let lo = i.saturating_sub(5);
    let idx: Vec<usize> = (lo..lo + 10).collect();
    let mut w25 = cz(0.0);
    for &a in &idx {
        let mut basis = 1.0;
        for &b in &idx {
            if a != b {
                basis *= (target - grid.nodes[b]) / (grid.nodes[a] - grid.nodes[b]);
            }
        }
        w25 += sol.values[a] * basis;
    }
    let oracle = (w25 - 5.0) / (2.0 * 0.3);
    assert!((g1(&k, 2.0).unwrap() - oracle).norm() < 1e-6);
}

#[test]
fn diagonal_two_point_is_twice_the_derivative() {
    let k = lambda(0.3);
    let h = 1e-4;
    let fd = (w(&k, cz(4.0 + h)).unwrap() - w(&k, cz(4.0 - h)).unwrap()) / h;
    assert!((g2(&k, cz(4.0), cz(4.0)).unwrap() - fd).norm() < 1e-7);
    let free = Coupling::free();
    assert!((g2(&free, cz(1.0), cz(4.0)).unwrap() - 2.0 / 3.0).norm() < 1e-15);
}

#[test]
fn n2_single_boundary_is_g2() {
    let k = lambda(0.25);
    let (x, y) = (C::new(3.0, 1.0), cz(7.0));
    assert!((gn_single_boundary(&k, &[x, y]).unwrap() - g2(&k, x, y).unwrap()).norm() < 1e-14);
}

#[test]
fn repeated_argument_three_point() {
    let l = 0.2;
    let k = lambda(l);
    let (x, y) = (cz(4.0), cz(2.0));
    let wy = w_jet(&k, y, 1).unwrap();
    let wx = w(&k, x).unwrap();
    let d = ((wx - wy.coeff(0)) - wy.coeff(1) * (x - y)) / ((x - y) * (x - y));
    let want = d * 8.0 * l;
    assert!((gn_single_boundary(&k, &[x, y, y]).unwrap() - want).norm() < 1e-8);
}

#[test]
fn cylinder_examples() {
    let k = lambda(0.3);
    let x = cz(1.0) - k.c;
    assert!((g_1plus1(&k, x, x).unwrap() - k.lambda2).norm() < 1e-15);
    assert_eq!(g_1plus1(&Coupling::free(), cz(2.0), cz(5.0)).unwrap(), cz(0.0));
}

#[test]
fn three_boundary_at_unit_arguments() {
    let l: f64 = 0.2;
    let k = lambda(l);
    let one = cz(1.0);
    let want = -32.0 * l.powi(5) / (k.rho0 * (1.0 + k.c).powf(4.5));
    let got = g_1plus1plus1(&k, one, one, one).unwrap();
    assert!((got - want).norm() < 1e-14 * want.norm());
    assert!((g_1plus_tower(&k, &[one, one, one]).unwrap() - got).norm() < 1e-12 * got.norm());
}

#[test]
fn tower_b4_matches_ansatz_at_unit_arguments() {
    let k = lambda(0.2);
    let xs = [cz(1.0); 4];
    let t = g_1plus_tower(&k, &xs).unwrap();
    let a = g_1plus_ansatz(&k, &xs).unwrap();
    assert!((t - a).norm() < 1e-10 * a.norm());
}

#[test]
fn denominator_jet_matches_quadrature() {
    let k = lambda(0.3);
    let jet = denominator_jet(&moments(&k, 4).unwrap(), 3).unwrap();
    let (m, r) = (32, 0.05);
    for order in 0..=3 {
        let mut c = cz(0.0);
        for j in 0..m {
            let t = C::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / m as f64);
            c += denominator_quadrature(&k, t).unwrap() / t.powi(order);
        }
        c /= m as f64;
        let got = jet.coeff(order as usize);
        assert!((got - c).norm() < 1e-6 * got.norm().max(1.0), "order {order}: {got} vs {c}");
    }
}

#[test]
fn two_plus_one_written_out() {
    let l = 0.3;
    let k = lambda(l);
    let (a, b, z) = (cz(2.0), cz(6.0), cz(3.0));
    let spec = BoundarySpec::new(vec![vec![a, b], vec![z]]).unwrap();
    let v = g_multi_boundary(&k, &spec).unwrap();
    let want = (g_1plus1(&k, a, z).unwrap() - g_1plus1(&k, b, z).unwrap()) * 4.0 * l / (a - b);
    assert_eq!(v.provenance, Provenance::Cylinder);
    assert!((v.value - want).norm() < 1e-14 * want.norm());
}

#[test]
fn single_boundary_spec_routes_to_single_boundary_formula() {
    let k = lambda(0.2);
    let xs = vec![cz(2.0), cz(3.0), cz(9.0)];
    let v = g_multi_boundary(&k, &BoundarySpec::new(vec![xs.clone()]).unwrap()).unwrap();
    assert_eq!(v.provenance, Provenance::SingleBoundary);
    assert_eq!(v.value, gn_single_boundary(&k, &xs).unwrap());
}

#[test]
fn free_multi_boundary_vanishes() {
    let spec = BoundarySpec::new(vec![vec![cz(1.0), cz(2.0), cz(3.0)], vec![cz(4.0), cz(5.0)]]).unwrap();
    assert_eq!(g_multi_boundary(&Coupling::free(), &spec).unwrap().value.norm(), 0.0);
}

#[test]
fn errors() {
    let k = lambda(0.2);
    assert!(matches!(w(&k, cz(-5.0)), Err(Error::Domain(_))));
    assert!(matches!(BoundarySpec::new(vec![vec![]]), Err(Error::Input(_))));
    assert!(matches!(gn_single_boundary(&k, &[cz(2.0)]), Err(Error::Input(_))));
}
