use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Parser, Debug)]
#[command(name = "phi3", version, about = "Exact planar correlators of the matricial Φ³₂ model")]
pub struct Cli {
    /// TOML file with defaults for any flag below; flags win.
    #[arg(long, global = true, env = "PHI3_CONFIG")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.trim().replace(' ', "").parse::<Complex64>().map_err(|_| format!("cannot read {s:?} as a complex number"))
}

#[derive(Args, Debug, Clone, Default)]
pub struct CouplingArgs {
    /// Real coupling λ̃.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda2")]
    pub lambda: Option<f64>,

    /// Coupling squared, possibly complex, e.g. "-0.04" or "0.01+0.02i".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub lambda2: Option<Complex64>,

    /// `linear` (default) or `scaled:S` for e(x) = S·x.
    #[arg(long)]
    pub eigenvalue: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve W(1) = 1 for c and report ρ₀ and the critical point.
    Solve {
        #[command(flatten)]
        coupling: CouplingArgs,
    },
    /// Evaluate correlators; boundaries separated by `|`, arguments by `,`.
    Eval {
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Arguments in eigenvalue space x ≥ 0, e.g. "1,2|3".
        #[arg(long)]
        boundaries: Vec<String>,
        /// Arguments in house variables X = (2e(x)+1)².
        #[arg(long = "big-x", visible_alias = "big-X")]
        big_x: Vec<String>,
    },
    /// Tabulate one function over an argument range.
    Table {
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long, value_enum)]
        target: TableTarget,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        mu2: Option<f64>,
    },
    /// Run a verification suite; exits with 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long)]
        max_b: Option<usize>,
        #[arg(long)]
        max_l: Option<i64>,
        #[arg(long)]
        max_p: Option<usize>,
        #[arg(long)]
        max_n: Option<u32>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        mu2: Option<f64>,
    },
    /// Positivity diagnostics of the induced two-point function.
    Schwinger {
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long)]
        mu2: Option<f64>,
        /// Position-space separations to evaluate.
        #[arg(long)]
        separation: Vec<f64>,
        /// Scan Ŝ₂ over the rectangle "RE_MIN,RE_MAX,IM_MIN,IM_MAX" of p².
        #[arg(long, allow_hyphen_values = true)]
        scan: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct GridArgs {
    /// Cutoff Ξ of the integral-equation grid.
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Number of grid nodes.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long, value_enum)]
    pub tail: Option<TailArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailArg {
    Analytic,
    Truncated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableTarget {
    /// W(X) over X.
    W,
    /// G̃(x) over x.
    G1,
    /// G̃(x,x) over x.
    G2diag,
    /// Ŝ₂(p²) over real p².
    S2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bell,
    Conjecture,
    Gamma,
    Inteq,
    Series,
    Schwinger,
    All,
}
