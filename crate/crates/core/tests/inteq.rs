use num_complex::Complex64 as C;
use phi3_core::correlators::{g_1plus1, w};
use phi3_core::inteq::{residual_report, solve_g11_inteq, solve_w_inteq, Candidate, Equation, Grid, Tail};
use phi3_core::spectral::{Coupling, EigenvalueFunction};

fn cz(x: f64) -> C {
    C::new(x, 0.0)
}

fn sup_error(k: &Coupling, grid: &Grid, values: &[C]) -> f64 {
    grid.nodes.iter().zip(values).map(|(&x, v)| (w(k, cz(x)).unwrap() - v).norm()).fold(0.0, f64::max)
}

#[test]
fn free_equation_gives_square_root() {
    let grid = Grid::geometric(1e6, 400).unwrap();
    let sol = solve_w_inteq(cz(0.0), &EigenvalueFunction::Linear, &grid, Tail::Truncated).unwrap();
    for (&x, v) in grid.nodes.iter().zip(&sol.values) {
        assert!((v - x.sqrt()).norm() < 1e-10);
    }
}

#[test]
fn fixed_point_converges_under_refinement() {
    let k = Coupling::from_real_lambda(0.3).unwrap();
    let errs: Vec<f64> = [250, 500, 1000, 2000]
        .iter()
        .map(|&n| {
            let grid = Grid::geometric(1e8, n).unwrap();
            let sol = solve_w_inteq(k.lambda2, &EigenvalueFunction::Linear, &grid, Tail::Analytic).unwrap();
            sup_error(&k, &grid, &sol.values)
        })
        .collect();
    let order = (errs[0] / errs[2]).log2() / 2.0;
    assert!(order >= 2.0, "errors {errs:?}");
    assert!(errs[3] < 1e-5, "errors {errs:?}");
}

#[test]
fn closed_form_residual_shrinks_with_cutoff() {
    let k = Coupling::from_real_lambda(0.3).unwrap();
    let sup = |xi: f64| {
        let grid = Grid::geometric(xi, 2000).unwrap();
        let at = [cz(2.0), cz(10.0), cz(100.0)];
        residual_report(&k, Equation::OnePoint, Candidate::Closed, &grid, Some(&at), Tail::Truncated).unwrap()
    };
    let (a, b) = (sup(1e6), sup(2e6));
    assert!(b.sup < a.sup, "{} then {}", a.sup, b.sup);
    // The neglected tail decays like 1/√Ξ.
    let ratio = a.sup / b.sup;
    let expected = 2f64.sqrt();
    assert!(ratio > expected / 2.0 && ratio < expected * 2.0, "ratio {ratio}");
    assert!(a.tail_estimate > 0.0);
}

#[test]
fn zero_candidate_leaves_minus_x() {
    let grid = Grid::geometric(1e4, 100).unwrap();
    let zeros = vec![cz(0.0); grid.len()];
    let r = residual_report(
        &Coupling::free(),
        Equation::OnePoint,
        Candidate::Sampled { values: &zeros, at_one: cz(0.0) },
        &grid,
        None,
        Tail::Truncated,
    )
    .unwrap();
    for (p, v) in r.points.iter().zip(&r.residuals) {
        assert!((v.norm() - p.norm()).abs() < 1e-12 * p.norm());
    }
}

#[test]
fn cylinder_solution_matches_closed_form() {
    let k = Coupling::from_real_lambda(0.05).unwrap();
    let grid = Grid::geometric(1e8, 2000).unwrap();
    let y = cz(3.0);
    let sol = solve_g11_inteq(&k, y, &grid, Tail::Analytic).unwrap();
    let n = grid.len();
    for i in n / 10..9 * n / 10 {
        let want = g_1plus1(&k, cz(grid.nodes[i]), y).unwrap();
        assert!((sol.values[i] - want).norm() < 1e-6, "node {}: {} vs {want}", grid.nodes[i], sol.values[i]);
    }
    let free = solve_g11_inteq(&Coupling::free(), y, &grid, Tail::Analytic).unwrap();
    assert!(free.values.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn cylinder_residual_at_off_grid_points() {
    let k = Coupling::from_real_lambda(0.3).unwrap();
    let grid = Grid::geometric(1e8, 2000).unwrap();
    let r = residual_report(
        &k,
        Equation::Cylinder { y: cz(5.0) },
        Candidate::Closed,
        &grid,
        Some(&[cz(2.0)]),
        Tail::Analytic,
    )
    .unwrap();
    assert!(r.sup < 1e-8);
}
