//! Command-line frontend: parses a symbol and a computation request,
//! runs the corresponding module, and emits a CSV or JSON report.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::measure::{self, CarlesonWindow, ModelRegion, QuadratureGrid};
use crate::series::SymbolMap;
use crate::space::WeightedSpace;
use crate::spectral;
use crate::{adjoint, faa_di_bruno, operators};

/// Failure modes mapped to process exit codes: usage errors exit 2,
/// computation failures exit 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("computation failed: {0}")]
    Compute(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "compdiff",
    version,
    about = "Numerical reports for composition-differentiation operators on the Dirichlet space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Hex seed for Monte-Carlo fallbacks.
    #[arg(long, global = true)]
    pub seed: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Operator norm of D_(a z^M) as a function of |a|.
    NormCurve {
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long, default_value_t = 0.05)]
        a_min: f64,
        #[arg(long, default_value_t = 0.95)]
        a_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Also compute the matrix norm on a reduced grid (every 10th point).
        #[arg(long)]
        with_matrix: bool,
        /// Truncation for the matrix norm.
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// Eigenvalues of the truncated operator next to the predicted spectrum.
    Spectrum {
        /// Symbol: "0.3z", "0.3z^2", "0.3z+0.2", or "(a,b,c,d)".
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Values below this modulus are reported as 0.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Carleson window ratios for a symbol, or model-region closed forms.
    Carleson {
        #[arg(long, conflicts_with = "model")]
        symbol: Option<String>,
        /// Model region exponent 2, 3 or 4 instead of a symbol.
        #[arg(long)]
        model: Option<u8>,
        /// Single window height; default is a dyadic sweep.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// Hilbert-Schmidt norm: basis-image series against the disk integral.
    Hs {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// Residual of the adjoint intertwining identity for a linear-fractional symbol.
    Adjoint {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Partial Bell polynomial B_(n,k) at the given arguments.
    Bell {
        n: usize,
        k: usize,
        /// Comma-separated values x_1,...,x_(n-k+1).
        xs: String,
    },
}

/// Configuration echoed into every report for provenance.
#[derive(Serialize)]
struct RunConfig {
    command: String,
    parameters: serde_json::Value,
    format: Format,
    version: &'static str,
    seed: u64,
}

fn parse_seed(seed: &Option<String>) -> Result<u64, CliError> {
    match seed {
        None => Ok(measure::MC_SEED),
        Some(s) => {
            let t = s.trim_start_matches("0x");
            u64::from_str_radix(t, 16)
                .map_err(|_| CliError::Usage(format!("seed must be hex, got {s:?}")))
        }
    }
}

/// Parses "az^M", "az", "az+b", or "(a,b,c,d)" with real parameters.
pub fn parse_symbol(s: &str) -> Result<SymbolMap, CliError> {
    let s = s.trim().replace(' ', "");
    let num = r"[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?";
    let monomial = regex::Regex::new(&format!(r"^({num})z(?:\^(\d+))?$")).unwrap();
    let affine = regex::Regex::new(&format!(r"^({num})z({num})$")).unwrap();
    let tuple = regex::Regex::new(&format!(r"^\(({num}),({num}),({num}),({num})\)$")).unwrap();
    let usage = || CliError::Usage(format!("unrecognized symbol {s:?}"));
    let real = |m: &str| Complex64::new(m.parse::<f64>().unwrap(), 0.0);
    if let Some(c) = monomial.captures(&s) {
        let a = real(&c[1]);
        let degree: u32 = c.get(2).map_or(Ok(1), |m| m.as_str().parse()).unwrap();
        return SymbolMap::monomial(a, degree).map_err(CliError::Compute);
    }
    if let Some(c) = affine.captures(&s) {
        return SymbolMap::affine(real(&c[1]), real(&c[2])).map_err(CliError::Compute);
    }
    if let Some(c) = tuple.captures(&s) {
        return SymbolMap::linear_fractional(real(&c[1]), real(&c[2]), real(&c[3]), real(&c[4]))
            .map_err(CliError::Compute);
    }
    Err(usage())
}

/// A report is a list of named columns plus rows, rendered as CSV or JSON.
struct Report {
    config: RunConfig,
    columns: Vec<&'static str>,
    rows: Vec<Vec<serde_json::Value>>,
}

fn fnum(x: f64) -> serde_json::Value {
    json!(x)
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = json!({
                    "config": self.config,
                    "columns": self.columns,
                    "rows": self.rows,
                });
                let mut s = serde_json::to_string_pretty(&v).unwrap();
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut out = String::new();
                let cfg = serde_json::to_string(&self.config).unwrap();
                writeln!(out, "# {cfg}").unwrap();
                writeln!(out, "{}", self.columns.join(",")).unwrap();
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|v| match v {
                            serde_json::Value::Number(n) => {
                                if let Some(f) = n.as_f64() {
                                    if n.is_f64() {
                                        format!("{f:.17e}")
                                    } else {
                                        n.to_string()
                                    }
                                } else {
                                    n.to_string()
                                }
                            }
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        })
                        .collect();
                    writeln!(out, "{}", cells.join(",")).unwrap();
                }
                out
            }
        }
    }
}

/// Runs a parsed invocation and returns the rendered report.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let seed = parse_seed(&cli.seed)?;
    let config = |command: &str, parameters: serde_json::Value| RunConfig {
        command: command.into(),
        parameters,
        format: cli.format,
        version: env!("CARGO_PKG_VERSION"),
        seed,
    };
    let report = match &cli.command {
        Command::NormCurve {
            degree,
            a_min,
            a_max,
            steps,
            with_matrix,
            n,
        } => {
            if !(0.0 < *a_min && a_min <= a_max && *a_max < 1.0) {
                return Err(CliError::Usage(format!(
                    "need 0 < a_min <= a_max < 1, got [{a_min}, {a_max}]"
                )));
            }
            if *steps == 0 {
                return Err(CliError::Usage("steps must be positive".into()));
            }
            let grid: Vec<f64> = if *steps == 1 {
                vec![*a_min]
            } else {
                (0..*steps)
                    .map(|i| a_min + (a_max - a_min) * i as f64 / (*steps - 1) as f64)
                    .collect()
            };
            let rows = spectral::norm_curve(*degree, &grid)?;
            let mut out = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                let matrix = if *with_matrix && i % 10 == 0 {
                    let phi = SymbolMap::monomial(Complex64::new(row.a_abs, 0.0), *degree)?;
                    let m = operators::build_dphi(&phi, WeightedSpace::Dirichlet, *n)?;
                    Some(spectral::matrix_norm(&m)?)
                } else {
                    None
                };
                out.push(vec![
                    fnum(row.a_abs),
                    json!(row.nu),
                    fnum(row.norm),
                    matrix.map_or(json!(""), fnum),
                ]);
            }
            Report {
                config: config(
                    "norm-curve",
                    json!({"degree": degree, "a_min": a_min, "a_max": a_max,
                           "steps": steps, "with_matrix": with_matrix, "n": n}),
                ),
                columns: vec!["a_abs", "nu", "norm_closed_form", "norm_matrix"],
                rows: out,
            }
        }
        Command::Spectrum { symbol, n, tol } => {
            let phi = parse_symbol(symbol)?;
            let m = operators::build_dphi(&phi, WeightedSpace::Dirichlet, *n)?;
            let mut s = spectral::matrix_spectrum(&m, *tol)?;
            let mut warning = serde_json::Value::Null;
            match spectral::closed_form_spectrum(&phi) {
                Ok(p) => s.predicted = Some(p),
                Err(e) => warning = json!(e.to_string()),
            }
            let deviation = s.predicted.as_ref().map(|p| {
                s.eigenvalues
                    .iter()
                    .map(|e| {
                        p.iter()
                            .map(|q| (e - q).norm())
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max)
            });
            let rows = s
                .eigenvalues
                .iter()
                .map(|e| vec![fnum(e.re), fnum(e.im), fnum(e.norm())])
                .collect();
            Report {
                config: config(
                    "spectrum",
                    json!({"symbol": phi.describe(), "n": n, "tol": s.zero_tol,
                           "predicted": s.predicted.as_ref().map(|p| p.iter()
                               .map(|z| [z.re, z.im]).collect::<Vec<_>>()),
                           "max_deviation": deviation,
                           "warning": warning}),
                ),
                columns: vec!["re", "im", "abs"],
                rows,
            }
        }
        Command::Carleson {
            symbol,
            model,
            h,
            theta,
        } => {
            let heights: Vec<f64> = match h {
                Some(h) if *h > 0.0 && *h <= 1.0 => vec![*h],
                Some(h) => {
                    return Err(CliError::Usage(format!(
                        "window height must lie in (0,1], got {h}"
                    )))
                }
                None => (1..=10).map(|k| 0.5f64.powi(k)).collect(),
            };
            match (symbol, model) {
                (None, Some(p)) => {
                    let region = ModelRegion::new(*p)?;
                    let rows = heights
                        .iter()
                        .map(|&h| Ok(vec![fnum(h), fnum(measure::model_ratio(region, h)?)]))
                        .collect::<Result<Vec<_>, Error>>()?;
                    Report {
                        config: config("carleson", json!({"model": p, "heights": heights})),
                        columns: vec!["h", "ratio"],
                        rows,
                    }
                }
                (Some(sym), None) => {
                    let phi = parse_symbol(sym)?;
                    let grid = QuadratureGrid::indicator();
                    let mut rows = Vec::new();
                    for &h in &heights {
                        if h >= 1.0 {
                            return Err(CliError::Usage(
                                "symbol windows require h < 1".into(),
                            ));
                        }
                        let w = CarlesonWindow::new(*theta, h)?;
                        let est = measure::carleson_ratio(&phi, w, grid)?;
                        rows.push(vec![
                            fnum(*theta),
                            fnum(h),
                            fnum(est.value),
                            fnum(est.error_estimate),
                        ]);
                    }
                    Report {
                        config: config(
                            "carleson",
                            json!({"symbol": phi.describe(), "theta": theta,
                                   "heights": heights}),
                        ),
                        columns: vec!["theta", "h", "ratio", "error_estimate"],
                        rows,
                    }
                }
                _ => {
                    return Err(CliError::Usage(
                        "provide exactly one of --symbol or --model".into(),
                    ))
                }
            }
        }
        Command::Hs { symbol, n } => {
            let phi = parse_symbol(symbol)?;
            let series = spectral::hilbert_schmidt_norm(&phi, WeightedSpace::Dirichlet, *n)?;
            let integral = measure::hs_integral(&phi, QuadratureGrid::smooth())?;
            // series^2 - 1 and the integral agree up to the proof's constants
            let s = series.value * series.value - 1.0;
            let gap = if integral.value > 0.0 {
                s / integral.value
            } else {
                f64::NAN
            };
            Report {
                config: config("hs", json!({"symbol": phi.describe(), "n": n})),
                columns: vec![
                    "series_norm",
                    "series_tail_estimate",
                    "integral",
                    "integral_error_estimate",
                    "seminorm_to_integral_ratio",
                ],
                rows: vec![vec![
                    fnum(series.value),
                    fnum(series.tail_estimate),
                    fnum(integral.value),
                    fnum(integral.error_estimate),
                    fnum(gap),
                ]],
            }
        }
        Command::Adjoint { symbol, n } => {
            let phi = parse_symbol(symbol)?;
            let pair = adjoint::companion(&phi)?;
            let residual = adjoint::verify_identity(&phi, *n)?;
            Report {
                config: config(
                    "adjoint",
                    json!({"symbol": phi.describe(), "sigma": pair.sigma.describe(), "n": n}),
                ),
                columns: vec!["n", "residual"],
                rows: vec![vec![json!(n), fnum(residual)]],
            }
        }
        Command::Bell { n, k, xs } => {
            let parsed: Result<Vec<f64>, _> = xs.split(',').map(|p| p.trim().parse()).collect();
            let xs_vals =
                parsed.map_err(|_| CliError::Usage(format!("bad argument list {xs:?}")))?;
            let args: Vec<Complex64> = xs_vals.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            let v = faa_di_bruno::bell(*n, *k, &args)?;
            Report {
                config: config("bell", json!({"n": n, "k": k, "xs": xs_vals})),
                columns: vec!["re", "im"],
                rows: vec![vec![fnum(v.re), fnum(v.im)]],
            }
        }
    };
    Ok(report.render(cli.format))
}
