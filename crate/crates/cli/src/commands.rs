use num_complex::Complex64 as C;
use phi3_core::correlators::{g1, g2, g_multi_boundary, house_variable, w, BoundarySpec, Provenance};
use phi3_core::inteq::Tail;
use phi3_core::schwinger::{positivity_check, s2_hat, s2_position, Sign};
use phi3_core::spectral::{critical_point, solve_c, Coupling};
use serde_json::{json, Value};

use crate::cli::{parse_complex, Suite, TableTarget, TailArg};
use crate::config::{CouplingChoice, GridChoice};
use crate::error::CliError;
use crate::output::{cx, num, Report};
use crate::suites;

pub fn coupling(choice: &CouplingChoice) -> Result<Coupling, CliError> {
    Ok(match choice.lambda {
        Some(l) => Coupling::from_lambda(C::new(l, 0.0), choice.e.clone())?,
        None => solve_c(choice.lambda2, choice.e.clone())?,
    })
}

pub fn solve(choice: &CouplingChoice) -> Result<Report, CliError> {
    let k = coupling(choice)?;
    let (lc, cc) = critical_point(&k.e)?;
    let residual = k.residual()?;
    let json = json!({
        "lambda2": cx(k.lambda2),
        "lambda": cx(k.lambda),
        "c": cx(k.c),
        "rho0": cx(k.rho0),
        "critical": { "lambda_c": lc, "c_c": cc },
        "residual": residual,
    });
    let row = vec![
        num(k.lambda2.re),
        num(k.lambda2.im),
        num(k.c.re),
        num(k.c.im),
        num(k.rho0.re),
        num(k.rho0.im),
        num(lc),
        num(cc),
        num(residual),
    ];
    let header = vec!["lambda2_re", "lambda2_im", "c_re", "c_im", "rho0_re", "rho0_im", "lambda_c", "c_c", "residual"];
    Ok(Report { json, table: Some((header, vec![row])) })
}

/// Splits `"a,b|c"` into boundaries of complex arguments.
pub fn parse_boundaries(spec: &str) -> Result<Vec<Vec<C>>, CliError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(CliError::input("empty boundary specification"));
    }
    spec.split('|')
        .map(|b| {
            let b = b.trim();
            if b.is_empty() {
                return Err(CliError::input(format!("empty boundary in {spec:?}")));
            }
            b.split(',').map(|a| parse_complex(a).map_err(CliError::input)).collect()
        })
        .collect()
}

fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::OnePoint => "one_point",
        Provenance::SingleBoundary => "single_boundary",
        Provenance::Cylinder => "cylinder",
        Provenance::Tower => "tower",
    }
}

fn eval_one(k: &Coupling, spec: &str, x_space: bool) -> Result<(C, &'static str), CliError> {
    let args = parse_boundaries(spec)?;
    if !x_space {
        let v = g_multi_boundary(k, &BoundarySpec::new(args)?)?;
        return Ok((v.value, provenance_name(v.provenance)));
    }
    let mut house = Vec::with_capacity(args.len());
    for b in &args {
        let mut row = Vec::with_capacity(b.len());
        for a in b {
            if a.im != 0.0 || !(a.re >= 0.0) {
                return Err(CliError::input(format!("eigenvalue-space arguments must be real and ≥ 0, got {a}")));
            }
            row.push(house_variable(k, a.re));
        }
        house.push(row);
    }
    if args.len() == 1 && args[0].len() == 1 {
        return Ok((g1(k, args[0][0].re)?, provenance_name(Provenance::OnePoint)));
    }
    let v = g_multi_boundary(k, &BoundarySpec::new(house)?)?;
    Ok((v.value, provenance_name(v.provenance)))
}

pub fn eval(choice: &CouplingChoice, xs: &[String], big_xs: &[String]) -> Result<Report, CliError> {
    if xs.is_empty() && big_xs.is_empty() {
        return Err(CliError::input("give --boundaries or --big-x"));
    }
    let k = coupling(choice)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for (spec, x_space) in xs.iter().map(|s| (s, true)).chain(big_xs.iter().map(|s| (s, false))) {
        let (v, prov) = eval_one(&k, spec, x_space)?;
        let space = if x_space { "x" } else { "X" };
        items.push(json!({ "spec": spec, "space": space, "value": cx(v), "provenance": prov }));
        rows.push(vec![spec.clone(), space.into(), num(v.re), num(v.im), prov.into()]);
    }
    let json = json!({ "coupling": choice.label(), "c": cx(k.c), "values": items });
    Ok(Report { json, table: Some((vec!["spec", "space", "value_re", "value_im", "provenance"], rows)) })
}

fn grid_points(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(from.is_finite() && to.is_finite()) || !(from < to) {
        return Err(CliError::input(format!("range [{from}, {to}] must be finite and increasing")));
    }
    if steps < 2 {
        return Err(CliError::input("need at least 2 steps"));
    }
    Ok((0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect())
}

pub fn table(
    choice: &CouplingChoice,
    target: TableTarget,
    from: f64,
    to: f64,
    steps: usize,
    mu2: f64,
) -> Result<Report, CliError> {
    let k = coupling(choice)?;
    let args = grid_points(from, to, steps)?;
    let mut rows = Vec::with_capacity(args.len());
    let mut items = Vec::with_capacity(args.len());
    for a in args {
        let v = match target {
            TableTarget::W => w(&k, C::new(a, 0.0))?,
            TableTarget::G1 => g1(&k, a)?,
            TableTarget::G2diag => {
                if !(a >= 0.0) {
                    return Err(CliError::input("G̃(x,x) needs x ≥ 0"));
                }
                let x = house_variable(&k, a);
                g2(&k, x, x)?
            }
            TableTarget::S2 => s2_hat(&k, mu2, C::new(a, 0.0))?,
        };
        items.push(json!({ "arg": a, "value": cx(v) }));
        rows.push(vec![num(a), num(v.re), num(v.im)]);
    }
    Ok(Report {
        json: json!({ "coupling": choice.label(), "rows": items }),
        table: Some((vec!["arg", "re", "im"], rows)),
    })
}

pub struct VerifyLimits {
    pub max_b: usize,
    pub max_l: i64,
    pub max_p: usize,
    pub max_n: u32,
}

pub fn verify(
    suite: Suite,
    lambda: Option<f64>,
    limits: &VerifyLimits,
    grid: &GridChoice,
    mu2: f64,
) -> Result<(Report, usize), CliError> {
    let tail = match grid.tail {
        TailArg::Analytic => Tail::Analytic,
        TailArg::Truncated => Tail::Truncated,
    };
    let inteq = suites::InteqSettings {
        lambdas: lambda.map(|l| vec![l]).unwrap_or_else(|| vec![0.1, 0.3]),
        cutoff: grid.cutoff,
        nodes: grid.nodes,
        tail,
    };
    let run = |s: Suite| -> Vec<suites::Check> {
        match s {
            Suite::Bell => suites::bell(8),
            Suite::Conjecture => suites::conjecture(limits.max_l, limits.max_p, limits.max_n),
            Suite::Gamma => suites::gamma(limits.max_b),
            Suite::Inteq => suites::inteq(&inteq),
            Suite::Series => suites::series(),
            Suite::Schwinger => suites::schwinger(lambda.unwrap_or(0.3), mu2),
            Suite::All => Vec::new(),
        }
    };
    let (name, checks) = match suite {
        Suite::All => {
            let all = [Suite::Bell, Suite::Conjecture, Suite::Gamma, Suite::Inteq, Suite::Series, Suite::Schwinger];
            ("all", all.into_iter().flat_map(run).collect())
        }
        Suite::Bell => ("bell", run(suite)),
        Suite::Conjecture => ("conjecture", run(suite)),
        Suite::Gamma => ("gamma", run(suite)),
        Suite::Inteq => ("inteq", run(suite)),
        Suite::Series => ("series", run(suite)),
        Suite::Schwinger => ("schwinger", run(suite)),
    };
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.status.into(),
                value_text(&c.observed),
                value_text(&c.expected),
                c.tolerance.map(num).unwrap_or_default(),
            ]
        })
        .collect();
    let (json, failed) = suites::summarize(name, checks)?;
    let header = vec!["name", "status", "observed", "expected", "tolerance"];
    Ok((Report { json, table: Some((header, rows)) }, failed))
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn parse_rect(s: &str) -> Result<[f64; 4], CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::input(format!("bad scan bound {t:?}"))))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c, d] if a < b && c < d && v.iter().all(|x| x.is_finite()) => Ok([a, b, c, d]),
        _ => Err(CliError::input("scan needs RE_MIN,RE_MAX,IM_MIN,IM_MAX with MIN < MAX")),
    }
}

pub fn schwinger(
    choice: &CouplingChoice,
    mu2: f64,
    separations: &[f64],
    scan: Option<&str>,
    steps: usize,
) -> Result<Report, CliError> {
    if !(mu2 > 0.0 && mu2.is_finite()) {
        return Err(CliError::input("μ² must be positive"));
    }
    let k = coupling(choice)?;
    if let Some(rect) = scan {
        let [r0, r1, i0, i1] = parse_rect(rect)?;
        let res = grid_points(r0, r1, steps)?;
        let ims = grid_points(i0, i1, steps)?;
        let mut rows = Vec::new();
        let mut items = Vec::new();
        for &im in &ims {
            for &re in &res {
                let p2 = C::new(re, im);
                let (v, status) = match s2_hat(&k, mu2, p2) {
                    Ok(v) => (Some(v), "ok"),
                    Err(phi3_core::Error::Domain(_)) => (None, "cut"),
                    Err(e) => return Err(e.into()),
                };
                let (vr, vi) = v.map(|v| (v.re, v.im)).unwrap_or((f64::NAN, f64::NAN));
                items.push(json!({ "p2": cx(p2), "value": v.map(cx), "status": status }));
                rows.push(vec![num(re), num(im), num(vr), num(vi), status.into()]);
            }
        }
        let json = json!({ "coupling": choice.label(), "mu2": mu2, "scan": items });
        return Ok(Report { json, table: Some((vec!["p2_re", "p2_im", "re", "im", "status"], rows)) });
    }
    let r = positivity_check(&k, mu2)?;
    let mut positions = Vec::new();
    for &s in separations {
        positions.push(json!({ "separation": s, "value": s2_position(&k, mu2, s)? }));
    }
    let sign = match r.imaginary_part_sign {
        Sign::Negative => "negative",
        Sign::Nonnegative => "nonnegative",
    };
    let json = json!({
        "lambda": cx(k.lambda),
        "c": cx(k.c),
        "mu2": mu2,
        "test_point": cx(r.test_point),
        "S2_value": cx(r.value),
        "imaginary_part_sign": sign,
        "verdict": r.verdict.as_str(),
        "note": r.note,
        "branch_points": r.branch_points.iter().map(|b| cx(*b)).collect::<Vec<_>>(),
        "position": positions,
    });
    let row = vec![
        num(r.test_point.re),
        num(r.test_point.im),
        num(r.value.re),
        num(r.value.im),
        sign.into(),
        r.verdict.as_str().into(),
    ];
    let header = vec!["test_point_re", "test_point_im", "S2_re", "S2_im", "imaginary_part_sign", "verdict"];
    Ok(Report { json, table: Some((header, vec![row])) })
}
