//! The `leaf-ldp` command line: flag parsing, config files and dispatch.
//!
//! Settings come from an optional TOML file (`--config`) and from flags;
//! a flag always wins. Every table echoes the resolved settings in its
//! header.

mod commands;

use crate::chain::ModelSpec;
use crate::error::{Error, Result};
use crate::output::Format;
use crate::verify::{Budget, Suite};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub use commands::execute;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_MODEL: &str = "plane_oriented";
pub const DEFAULT_LAMBDA_GRID: &str = "-5:5:0.1";
pub const DEFAULT_X_GRID: &str = "0.05:0.95:0.05";

#[derive(Debug, Parser)]
#[command(
    name = "leaf-ldp",
    version,
    about = "Pressure, rate functions, optimal paths and simulators for leaf-counting chains"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Clone, Args)]
pub struct Common {
    /// TOML file with default settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Model preset, e.g. `plane_oriented` or `pa:beta=1/2`.
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Replaces the model's initial state.
    #[arg(long, global = true)]
    pub k0: Option<u64>,
    #[arg(long, global = true)]
    pub n: Option<u64>,
    #[arg(long, global = true)]
    pub reps: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub no_header_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Auto,
    Closed,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Object {
    /// The Markov chain itself.
    Chain,
    /// The tree or graph behind the model.
    Tree,
    /// Plateaux of a Stirling permutation of order `n - 1`.
    Stirling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PmfMode {
    /// `(n, k, log_prob)` rows.
    Law,
    /// Pressure estimators over a lambda grid.
    Estimators,
    /// Real-rootedness certificate of the generating polynomial.
    Roots,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Pressure and its derivatives on a lambda grid.
    Pressure {
        #[arg(long, allow_hyphen_values = true)]
        lambda_grid: Option<String>,
        #[arg(long, value_enum)]
        method: Option<MethodChoice>,
        #[arg(long)]
        quad_tol: Option<f64>,
    },
    /// Rate function by Legendre duality.
    Rate {
        #[arg(long, allow_hyphen_values = true)]
        x_grid: Option<String>,
        #[arg(long = "x")]
        x: Vec<f64>,
    },
    /// Optimal paths from the Euler equation.
    Path {
        #[arg(long = "x")]
        x: Vec<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Exact law of `Z_n`.
    Pmf {
        #[arg(long, value_enum)]
        mode: Option<PmfMode>,
        #[arg(long, allow_hyphen_values = true)]
        lambda_grid: Option<String>,
        /// Largest `n` for exact rational arithmetic in `--mode roots`.
        #[arg(long)]
        max_exact: Option<u64>,
    },
    /// Monte Carlo replicates of the chain or of the combinatorial object.
    Simulate {
        #[arg(long, value_enum)]
        object: Option<Object>,
    },
    /// Runs the property suite and prints a pass/fail table.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        budget: Option<String>,
    },
}

/// Subcommand-specific flags, flattened.
#[derive(Debug, Default)]
struct Flags {
    lambda_grid: Option<String>,
    method: Option<MethodChoice>,
    quad_tol: Option<f64>,
    x_grid: Option<String>,
    x: Vec<f64>,
    tol: Option<f64>,
    samples: Option<usize>,
    mode: Option<PmfMode>,
    max_exact: Option<u64>,
    object: Option<Object>,
    suite: Option<String>,
    budget: Option<String>,
}

impl Command {
    fn flags(&self) -> (CommandName, Flags) {
        match self.clone() {
            Command::Pressure {
                lambda_grid,
                method,
                quad_tol,
            } => (
                CommandName::Pressure,
                Flags {
                    lambda_grid,
                    method,
                    quad_tol,
                    ..Flags::default()
                },
            ),
            Command::Rate { x_grid, x } => (
                CommandName::Rate,
                Flags {
                    x_grid,
                    x,
                    ..Flags::default()
                },
            ),
            Command::Path { x, tol, samples } => (
                CommandName::Path,
                Flags {
                    x,
                    tol,
                    samples,
                    ..Flags::default()
                },
            ),
            Command::Pmf {
                mode,
                lambda_grid,
                max_exact,
            } => (
                CommandName::Pmf,
                Flags {
                    mode,
                    lambda_grid,
                    max_exact,
                    ..Flags::default()
                },
            ),
            Command::Simulate { object } => (
                CommandName::Simulate,
                Flags {
                    object,
                    ..Flags::default()
                },
            ),
            Command::Verify { suite, budget } => (
                CommandName::Verify,
                Flags {
                    suite,
                    budget,
                    ..Flags::default()
                },
            ),
        }
    }
}

/// Keys accepted in a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub alpha: Option<f64>,
    pub k0: Option<u64>,
    pub n: Option<u64>,
    pub reps: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub no_header_timestamp: Option<bool>,
    pub lambda_grid: Option<String>,
    pub x_grid: Option<String>,
    pub x: Option<Vec<f64>>,
    pub method: Option<MethodChoice>,
    pub quad_tol: Option<f64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub mode: Option<PmfMode>,
    pub max_exact: Option<u64>,
    pub object: Option<Object>,
    pub suite: Option<String>,
    pub budget: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            field: "config".into(),
            reason: format!("{}: {e}", path.display()),
        })?;
        toml::from_str(&text).map_err(|e| Error::Config {
            field: "config".into(),
            reason: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandName {
    Pressure,
    Rate,
    Path,
    Pmf,
    Simulate,
    Verify,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Pressure => "pressure",
            CommandName::Rate => "rate",
            CommandName::Path => "path",
            CommandName::Pmf => "pmf",
            CommandName::Simulate => "simulate",
            CommandName::Verify => "verify",
        }
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandName,
    pub model: ModelSpec,
    pub alpha: f64,
    pub n: u64,
    pub reps: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timestamp: bool,
    pub lambda_grid: Vec<f64>,
    pub lambda_grid_spec: String,
    pub x: Vec<f64>,
    pub method: MethodChoice,
    pub quad_tol: f64,
    pub tol: f64,
    pub samples: usize,
    pub mode: PmfMode,
    pub max_exact: u64,
    pub object: Object,
    pub suite: Suite,
    pub budget: Budget,
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Parses `start:stop:step` into an increasing grid that includes `stop`
/// when it lies on the lattice.
pub fn parse_grid(field: &str, spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, h] = parts.as_slice() else {
        return Err(config_err(
            field,
            format!("expected start:stop:step, got `{spec}`"),
        ));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| config_err(field, format!("`{s}` is not a finite number")))
    };
    let (start, stop, step) = (num(a)?, num(b)?, num(h)?);
    if !(step > 0.0) {
        return Err(config_err(field, "step must be positive"));
    }
    if stop < start {
        return Err(config_err(field, "stop is below start"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    if count > 10_000_000 {
        return Err(config_err(field, format!("{count} points is too many")));
    }
    Ok((0..count)
        .map(|i| {
            let v = start + i as f64 * step;
            // Snap lattice points such as 0.30000000000000004 back to 0.3.
            let r = (v / step).round() * step;
            let v = if (v - r).abs() < 1e-9 * step {
                (r * 1e12).round() / 1e12
            } else {
                v
            };
            if v == 0.0 {
                0.0
            } else {
                v
            }
        })
        .collect())
}

impl RunConfig {
    /// Merges flags over the config file.
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.common.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let c = &cli.common;
        let pick = |flag: Option<String>, file: &Option<String>| flag.or_else(|| file.clone());

        let (command, f) = cli.command.flags();
        let alpha_flag = c.alpha.or(file.alpha);
        let model_text = pick(c.model.clone(), &file.model);
        let mut model = match (&model_text, alpha_flag) {
            (Some(m), _) => m
                .parse::<ModelSpec>()
                .map_err(|e| config_err("model", e.to_string()))?,
            (None, Some(a)) => format!("linear:alpha={a},k0=1")
                .parse::<ModelSpec>()
                .map_err(|e| config_err("alpha", e.to_string()))?,
            (None, None) => DEFAULT_MODEL
                .parse::<ModelSpec>()
                .map_err(|e| config_err("model", e.to_string()))?,
        };
        if let Some(k0) = c.k0.or(file.k0) {
            model = ModelSpec::new(model.slopes().clone(), k0)
                .map_err(|e| config_err("k0", e.to_string()))?;
        }
        let model_alpha = model.alpha().to_f64();
        let alpha = alpha_flag.unwrap_or(model_alpha);
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(config_err(
                "alpha",
                format!("{alpha} must be positive and finite"),
            ));
        }
        if model_text.is_some() && alpha_flag.is_some() && (alpha - model_alpha).abs() > 1e-12 {
            return Err(config_err(
                "alpha",
                format!("--alpha {alpha} contradicts model `{model}` with alpha {model_alpha}"),
            ));
        }

        let format = match pick(c.format.clone(), &file.format) {
            Some(f) => f.parse::<Format>()?,
            None => Format::Csv,
        };
        let lambda_grid_spec = f
            .lambda_grid
            .or_else(|| file.lambda_grid.clone())
            .unwrap_or_else(|| DEFAULT_LAMBDA_GRID.to_string());
        let lambda_grid = parse_grid("lambda_grid", &lambda_grid_spec)?;

        let mut x = if !f.x.is_empty() {
            f.x
        } else if let Some(g) = &f.x_grid {
            parse_grid("x_grid", g)?
        } else if let Some(v) = &file.x {
            v.clone()
        } else if let Some(g) = &file.x_grid {
            parse_grid("x_grid", g)?
        } else if command == CommandName::Path {
            vec![0.13, 2.0 / 3.0, 0.85]
        } else {
            parse_grid("x_grid", DEFAULT_X_GRID)?
        };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(config_err("x", "values must be finite"));
        }
        x.sort_by(f64::total_cmp);
        x.dedup();

        let n = c.n.or(file.n).unwrap_or(match command {
            CommandName::Pmf => 1000,
            _ => 10_000,
        });
        if n == 0 {
            return Err(config_err("n", "must be at least 1"));
        }
        let reps = c.reps.or(file.reps).unwrap_or(100);
        if reps == 0 {
            return Err(config_err("reps", "must be at least 1"));
        }
        let quad_tol = f
            .quad_tol
            .or(file.quad_tol)
            .unwrap_or(crate::pressure::DEFAULT_QUAD_TOL);
        if !(quad_tol > 0.0) {
            return Err(config_err("quad_tol", "must be positive"));
        }
        let tol = f.tol.or(file.tol).unwrap_or(1e-10);
        if !(tol > 0.0) {
            return Err(config_err("tol", "must be positive"));
        }
        let samples = f
            .samples
            .or(file.samples)
            .unwrap_or(crate::path::DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(config_err("samples", "must be at least 2"));
        }
        let suite = match f.suite.or_else(|| file.suite.clone()) {
            Some(s) => s.parse::<Suite>()?,
            None => Suite::All,
        };
        let budget = match f.budget.or_else(|| file.budget.clone()) {
            Some(s) => s.parse::<Budget>()?,
            None => Budget::Quick,
        };

        Ok(RunConfig {
            command,
            model,
            alpha,
            n,
            reps,
            seed: c.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: c.out.clone().or(file.out),
            format,
            timestamp: !(c.no_header_timestamp || file.no_header_timestamp.unwrap_or(false)),
            lambda_grid,
            lambda_grid_spec,
            x,
            method: f.method.or(file.method).unwrap_or(MethodChoice::Auto),
            quad_tol,
            tol,
            samples,
            mode: f.mode.or(file.mode).unwrap_or(PmfMode::Law),
            max_exact: f
                .max_exact
                .or(file.max_exact)
                .unwrap_or(crate::dist::DEFAULT_MAX_EXACT),
            object: f.object.or(file.object).unwrap_or(Object::Chain),
            suite,
            budget,
        })
    }
}

/// Process exit code for an error: 2 for bad configuration, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::Preset { .. } => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests;
