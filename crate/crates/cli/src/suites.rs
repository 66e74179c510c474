//! Verification suites behind `phi3 verify`.

use num_complex::Complex64 as C;
use phi3_core::bell::{
    count_tuples, gamma_closed, gamma_recursive, verify_bell_identity_1, verify_conjecture, verify_footnote_identity,
};
use phi3_core::correlators::w;
use phi3_core::exact::rat;
use phi3_core::inteq::{residual_report, solve_w_inteq, Candidate, Equation, Grid, Tail};
use phi3_core::schwinger::{positivity_check, s2_hat, Verdict};
use phi3_core::spectral::{Coupling, EigenvalueFunction};
use phi3_core::verify::{
    check_order2_twopoint, extract_in_lambda, extract_series, one_point_graphs_order3, one_point_order5,
    two_point_graphs_order2, SeriesTarget, DEFAULT_RADIUS,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: &'static str,
    pub observed: Value,
    pub expected: Value,
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn exact(name: String, failures: Vec<String>) -> Self {
        let ok = failures.is_empty();
        Check {
            name,
            status: if ok { "pass" } else { "fail" },
            observed: json!(if ok { "equal" } else { "different" }),
            expected: json!("equal"),
            tolerance: None,
            detail: (!ok).then(|| failures.join("; ")),
        }
    }

    fn close(name: String, observed: f64, expected: f64, tolerance: f64) -> Self {
        let ok = (observed - expected).abs() < tolerance;
        Check {
            name,
            status: pass(ok),
            observed: json!(observed),
            expected: json!(expected),
            tolerance: Some(tolerance),
            detail: None,
        }
    }

    fn below(name: String, observed: f64, bound: f64) -> Self {
        Check {
            name,
            status: pass(observed < bound),
            observed: json!(observed),
            expected: json!(0.0),
            tolerance: Some(bound),
            detail: None,
        }
    }

    fn error(name: String, e: phi3_core::Error) -> Self {
        Check {
            name,
            status: "fail",
            observed: Value::Null,
            expected: Value::Null,
            tolerance: None,
            detail: Some(e.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn bell(max_n: i64) -> Vec<Check> {
    let vals = [0, 1, -1, 2, 3];
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut failures = Vec::new();
        for k in 0..n {
            for &a in &vals {
                for &b in &vals {
                    match verify_bell_identity_1(n, k, &rat(a), &rat(b)) {
                        Ok(true) => {}
                        Ok(false) => failures.push(format!("n={n} k={k} α={a} β={b}")),
                        Err(e) => failures.push(format!("n={n} k={k} α={a} β={b}: {e}")),
                    }
                }
            }
        }
        out.push(Check::exact(format!("bell_identity n={n}"), failures));
    }
    for m in 0..=4 {
        let mut failures = Vec::new();
        for p in 1..=4usize {
            for counts in all_counts(p.saturating_sub(1), 3) {
                match verify_footnote_identity(m, &counts) {
                    Ok(true) => {}
                    Ok(false) => failures.push(format!("m={m} n={counts:?}")),
                    Err(e) => failures.push(format!("m={m} n={counts:?}: {e}")),
                }
            }
        }
        out.push(Check::exact(format!("footnote_identity m={m}"), failures));
    }
    out
}

/// Every tuple of `slots` entries in `0..=max`, including all zeros.
fn all_counts(slots: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; slots];
    loop {
        out.push(cur.clone());
        let mut i = 0;
        while i < slots && cur[i] == max {
            cur[i] = 0;
            i += 1;
        }
        if i == slots {
            return out;
        }
        cur[i] += 1;
    }
}

pub fn conjecture(max_l: i64, max_p: usize, max_n: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for l in 0..=max_l {
        for p in 0..=max_p {
            let mut failures = Vec::new();
            for counts in count_tuples(p, max_n) {
                match verify_conjecture(l, &counts) {
                    Ok(true) => {}
                    Ok(false) => failures.push(format!("l={l} n={counts:?}")),
                    Err(e) => failures.push(format!("l={l} n={counts:?}: {e}")),
                }
            }
            out.push(Check::exact(format!("conjecture l={l} p={p}"), failures));
        }
    }
    out
}

pub fn gamma(max_b: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for b in 3..=max_b {
        let name = format!("gamma B={b}");
        let table = match gamma_recursive(b) {
            Ok(t) => t,
            Err(e) => {
                out.push(Check::error(name, e));
                continue;
            }
        };
        let mut failures = Vec::new();
        for m in 0..=b - 3 {
            match gamma_closed(b, m) {
                Ok((p, pow)) if table.entries[m] == p && pow == table.rho0_power => {}
                Ok(_) => failures.push(format!("M={m}")),
                Err(e) => failures.push(format!("M={m}: {e}")),
            }
        }
        out.push(Check::exact(name, failures));
    }
    out
}

pub struct InteqSettings {
    pub lambdas: Vec<f64>,
    pub cutoff: f64,
    pub nodes: usize,
    pub tail: Tail,
}

pub fn inteq(s: &InteqSettings) -> Vec<Check> {
    let mut out = Vec::new();
    let grid = match Grid::geometric(s.cutoff, s.nodes) {
        Ok(g) => g,
        Err(e) => return vec![Check::error("grid".into(), e)],
    };
    let tag = match s.tail {
        Tail::Analytic => "analytic tail",
        Tail::Truncated => "truncated",
    };
    for &l in &s.lambdas {
        let k = match Coupling::from_real_lambda(l) {
            Ok(k) => k,
            Err(e) => {
                out.push(Check::error(format!("coupling λ̃={l}"), e));
                continue;
            }
        };
        let name = format!("W residual λ̃={l} ({tag})");
        match residual_report(&k, Equation::OnePoint, Candidate::Closed, &grid, None, s.tail) {
            Ok(r) => out.push(Check::below(name, r.sup, 1e-6)),
            Err(e) => out.push(Check::error(name, e)),
        }
        let name = format!("W fixed point vs closed form λ̃={l} ({tag})");
        match solve_w_inteq(k.lambda2, &EigenvalueFunction::Linear, &grid, s.tail) {
            Ok(sol) => {
                let err = grid
                    .nodes
                    .iter()
                    .zip(&sol.values)
                    .map(|(&x, v)| w(&k, C::new(x, 0.0)).map(|c| (c - v).norm()).unwrap_or(f64::INFINITY))
                    .fold(0.0, f64::max);
                out.push(Check::below(name, err, 1e-5));
            }
            Err(e) => out.push(Check::error(name, e)),
        }
        let xs: Vec<C> = [1.5, 3.0, 10.0, 100.0, 1e4].iter().map(|&x| C::new(x, 0.0)).collect();
        let mut sup = 0.0f64;
        let mut failed = None;
        for y in [1.2, 2.0, 5.0, 50.0, 1e3] {
            match residual_report(
                &k,
                Equation::Cylinder { y: C::new(y, 0.0) },
                Candidate::Closed,
                &grid,
                Some(&xs),
                s.tail,
            ) {
                Ok(r) => sup = sup.max(r.sup),
                Err(e) => failed = Some(e),
            }
        }
        let name = format!("cylinder residual 5x5 λ̃={l} ({tag})");
        out.push(match failed {
            Some(e) => Check::error(name, e),
            None => Check::below(name, sup, 1e-6),
        });
    }
    out
}

pub fn series() -> Vec<Check> {
    let lin = EigenvalueFunction::Linear;
    let mut out = Vec::new();
    for x in [0.5, 1.0, 2.0] {
        match extract_series(SeriesTarget::G1 { x }, &lin, 2, DEFAULT_RADIUS) {
            Ok(s) => {
                let u = 2.0 * x + 1.0;
                let first = x.ln_1p() / u;
                out.push(Check::close(format!("G1 λ̃¹ x={x}"), s.coefficients[0].re, first, 1e-7));
                out.push(Check::close(format!("G1 λ̃³ x={x}"), s.coefficients[1].re, one_point_graphs_order3(x), 1e-7));
                out.push(Check::close(format!("G1 λ̃⁵ x={x}"), s.coefficients[2].re, one_point_order5(x), 1e-7));
            }
            Err(e) => out.push(Check::error(format!("G1 series x={x}"), e)),
        }
    }
    let hx = |x: f64| C::new((2.0 * x + 1.0) * (2.0 * x + 1.0), 0.0);
    for (x1, x2) in [(1.0, 2.0), (0.5, 3.0), (1.0, 1.0)] {
        let name = format!("G2 λ̃² ({x1},{x2})");
        match extract_series(SeriesTarget::G2 { x: hx(x1), y: hx(x2) }, &lin, 1, DEFAULT_RADIUS) {
            Ok(s) => {
                let want = two_point_graphs_order2(x1, x2).unwrap_or(f64::NAN);
                out.push(Check::close(name, s.coefficients[1].re, want, 1e-7));
            }
            Err(e) => out.push(Check::error(name, e)),
        }
    }
    match check_order2_twopoint(1.0, 2.0) {
        Ok(ok) => {
            out.push(Check::exact("two-point display (1,2)".into(), if ok { vec![] } else { vec!["mismatch".into()] }))
        }
        Err(e) => out.push(Check::error("two-point display (1,2)".into(), e)),
    }
    let t = SeriesTarget::G2 { x: C::new(9.0, 0.0), y: C::new(4.0, 0.0) };
    match extract_in_lambda(&t, &lin, 1, DEFAULT_RADIUS) {
        Ok(cs) => out.push(Check::below("G2(9,4) λ̃¹ parity".into(), cs[1].norm(), 1e-10)),
        Err(e) => out.push(Check::error("G2(9,4) parity".into(), e)),
    }
    out
}

pub fn schwinger(lambda: f64, mu2: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let verdict_check = |name: String, k: Result<Coupling, phi3_core::Error>, mu2: f64| -> Check {
        match k.and_then(|k| positivity_check(&k, mu2)) {
            Ok(r) => Check {
                name,
                status: pass(r.verdict == Verdict::StieltjesViolated),
                observed: json!(r.verdict.as_str()),
                expected: json!("stieltjes_violated"),
                tolerance: None,
                detail: Some(format!("Ŝ₂({}) = {}", r.test_point, r.value)),
            },
            Err(e) => Check::error(name, e),
        }
    };
    for m in [0.5, 1.0, 2.0] {
        if m == mu2 {
            continue;
        }
        out.push(verdict_check(format!("verdict λ̃={lambda} μ²={m}"), Coupling::from_real_lambda(lambda), m));
    }
    out.push(verdict_check(format!("verdict λ̃={lambda} μ²={mu2}"), Coupling::from_real_lambda(lambda), mu2));
    match Coupling::from_real_lambda(lambda).and_then(|k| positivity_check(&k, mu2)) {
        Ok(r) => out.push(Check::below(format!("Im Ŝ₂ at test point λ̃={lambda}"), r.value.im, 0.0)),
        Err(e) => out.push(Check::error("Im Ŝ₂ at test point".into(), e)),
    }
    let imag = Coupling::from_lambda(C::new(0.0, 0.2), EigenvalueFunction::Linear);
    match imag.clone().and_then(|k| positivity_check(&k, mu2).map(|r| (k, r))) {
        Ok((k, r)) => {
            let sc = k.c.re.sqrt();
            let want = [C::new(-mu2, mu2 * sc), C::new(-mu2, -mu2 * sc)];
            let miss = want
                .iter()
                .map(|w| r.branch_points.iter().map(|b| (b - w).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max);
            out.push(Check::below("branch points λ̃²=-0.04".into(), miss, 1e-8));
        }
        Err(e) => out.push(Check::error("branch points λ̃²=-0.04".into(), e)),
    }
    out.push(verdict_check("verdict λ̃²=-0.04".into(), imag, mu2));
    let free = Coupling::free();
    let mut sup = 0.0f64;
    for p2 in [C::new(0.0, 0.0), C::new(2.0, 0.0), C::new(-3.0, 0.5), C::new(10.0, -4.0)] {
        match s2_hat(&free, mu2, p2) {
            Ok(v) => sup = sup.max((v - 1.0 / (p2 + mu2)).norm()),
            Err(_) => sup = f64::INFINITY,
        }
    }
    out.push(Check::below("free Ŝ₂ = 1/(p²+μ²)".into(), sup, 1e-12));
    out
}

pub fn summarize(suite: &str, checks: Vec<Check>) -> Result<(Value, usize), CliError> {
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let json = json!({ "suite": suite, "passed": failed == 0, "checks": checks });
    Ok((json, failed))
}
