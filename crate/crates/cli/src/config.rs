//! Optional TOML defaults. Every key mirrors a command-line flag.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use phi3_core::spectral::{CustomEigenvalue, EigenvalueFunction};
use serde::Deserialize;

use crate::cli::{parse_complex, CouplingArgs, Format, GridArgs, TailArg};
use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lambda: Option<f64>,
    pub lambda2: Option<String>,
    pub eigenvalue: Option<String>,
    pub format: Option<Format>,
    pub mu2: Option<f64>,
    pub cutoff: Option<f64>,
    pub nodes: Option<usize>,
    pub tail: Option<TailArg>,
    pub steps: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::input(format!("bad config {}: {e}", path.display())))
    }
}

/// `e(x) = s·x`; exercises the quadrature path with a known answer.
#[derive(Debug)]
struct Scaled(f64);

impl CustomEigenvalue for Scaled {
    fn e(&self, x: f64) -> f64 {
        self.0 * x
    }
    fn de(&self, _x: f64) -> f64 {
        self.0
    }
    fn inv(&self, y: f64) -> f64 {
        y / self.0
    }
}

pub fn parse_eigenvalue(s: &str) -> Result<EigenvalueFunction, CliError> {
    match s.trim() {
        "linear" => Ok(EigenvalueFunction::Linear),
        other => {
            let scale = other
                .strip_prefix("scaled:")
                .and_then(|v| v.parse::<f64>().ok())
                .filter(|v| *v > 0.0 && v.is_finite())
                .ok_or_else(|| CliError::input(format!("unknown eigenvalue function {other:?}")))?;
            Ok(EigenvalueFunction::Custom(Arc::new(Scaled(scale))))
        }
    }
}

/// The coupling as requested: `lambda` fixes the sign of λ̃, `lambda2` only its square.
#[derive(Clone, Debug)]
pub struct CouplingChoice {
    pub lambda: Option<f64>,
    pub lambda2: Complex64,
    pub e: EigenvalueFunction,
}

impl CouplingChoice {
    pub fn label(&self) -> String {
        match self.lambda {
            Some(l) => format!("lambda={l}"),
            None => format!("lambda2={}", self.lambda2),
        }
    }
}

pub fn resolve_coupling(
    args: &CouplingArgs,
    file: &FileConfig,
    default: Option<f64>,
) -> Result<CouplingChoice, CliError> {
    let e = parse_eigenvalue(args.eigenvalue.as_deref().or(file.eigenvalue.as_deref()).unwrap_or("linear"))?;
    let (lambda, lambda2) = if args.lambda.is_some() || args.lambda2.is_some() {
        (args.lambda, args.lambda2)
    } else {
        if file.lambda.is_some() && file.lambda2.is_some() {
            return Err(CliError::input("config sets both lambda and lambda2"));
        }
        let l2 = file.lambda2.as_deref().map(parse_complex).transpose().map_err(CliError::input)?;
        (file.lambda.or(if l2.is_none() { default } else { None }), l2)
    };
    match (lambda, lambda2) {
        (Some(l), _) => {
            if !l.is_finite() {
                return Err(CliError::input("λ̃ must be finite"));
            }
            Ok(CouplingChoice { lambda: Some(l), lambda2: Complex64::new(l * l, 0.0), e })
        }
        (None, Some(l2)) => Ok(CouplingChoice { lambda: None, lambda2: l2, e }),
        (None, None) => Err(CliError::input("give --lambda or --lambda2")),
    }
}

pub struct GridChoice {
    pub cutoff: f64,
    pub nodes: usize,
    pub tail: TailArg,
}

pub fn resolve_grid(args: &GridArgs, file: &FileConfig) -> GridChoice {
    GridChoice {
        cutoff: args.cutoff.or(file.cutoff).unwrap_or(phi3_core::inteq::DEFAULT_CUTOFF),
        nodes: args.nodes.or(file.nodes).unwrap_or(phi3_core::inteq::DEFAULT_NODES),
        tail: args.tail.or(file.tail).unwrap_or(TailArg::Analytic),
    }
}
