//! `lpconj` — build, evaluate, invert and verify topological conjugacies of
//! diagonal operators on ℓ^p from the command line.

mod io;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lpconj_core::conjugacy::{build_doubling_conjugacy, build_halving_conjugacy, ConjugacyMap};
use lpconj_core::lp::{FinSeq, WeightSeq};
use lpconj_core::probe::escape_profile;
use lpconj_core::rotation::{rotation_forward, rotation_inverse};
use lpconj_core::selftest::{run_selftest, SelftestConfig};
use lpconj_core::warp::WarpMap;

use io::CliError;
use output::{fmt_f64, to_csv, to_json, write_report, Format};

#[derive(Parser)]
#[command(
    name = "lpconj",
    about = "Topological conjugacies of diagonal operators on lp sequence spaces",
    long_about = "Builds and evaluates the warp and phase-warp homeomorphisms of lp, \
assembles certified conjugacies between diagonal operators and their scalar normal \
forms, measures conjugacy defects, probes escape times, and self-tests every \
inequality the constructions rely on.\n\n\
Weight descriptors: constant:C | list:V1,V2,.../TAIL | harmonic:C,A (complex \
literals like 2, -0.5i, 1+2i), or inline JSON / @file in the documented schema. \
Exponent descriptors use the same shapes with real scalars. Vectors are JSON \
objects {\"p\":1.0,\"entries\":{\"1\":[re,im],...}}, inline or @file.",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Report destination (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the tail-sum warp to a vector
    Warp {
        /// Exponent descriptor (s_n >= 1)
        #[arg(long)]
        exponents: String,
        /// Space exponent p, 1 <= p < infinity
        #[arg(long)]
        p: f64,
        /// Input vector (inline JSON or @file)
        #[arg(long)]
        input: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply the inverse warp to a vector
    Unwarp {
        #[arg(long)]
        exponents: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        input: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply the coordinatewise phase warp (or its inverse) to a vector
    Rotate {
        /// Weight descriptor; every nonzero w_n must have |w_n| != 1
        #[arg(long)]
        weights: String,
        #[arg(long)]
        input: String,
        /// Apply the inverse phase warp instead
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build the conjugacy between a diagonal operator and its scalar normal form
    Build {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Measure the conjugacy defect of the built map on random vectors
    Verify {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        p: f64,
        /// Number of random sample vectors
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Seed for the deterministic sampler
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Smallest sampled norm
        #[arg(long, default_value_t = 1e-3)]
        norm_min: f64,
        /// Largest sampled norm
        #[arg(long, default_value_t = 1e3)]
        norm_max: f64,
        /// Fail (exit 1) when max_defect exceeds this
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Measure escape times of basis directions against an exit radius
    Probe {
        /// Weight descriptor with inf |w_n| >= 1
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Start norm of each probe vector
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Exit radius as a multiple of epsilon (> 1)
        #[arg(long, default_value_t = 2.0)]
        radius_factor: f64,
        /// Comma-separated basis indices to probe
        #[arg(long, default_value = "1,10,100,1000")]
        indices: String,
        /// Iteration cap before an orbit is declared non-escaping
        #[arg(long, default_value_t = 100_000)]
        cap: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the deterministic property suite and report per-property results
    Selftest {
        /// Seed for every randomized property
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Serialize)]
struct VectorReport {
    result: FinSeq,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditions: Option<Vec<lpconj_core::warp::RadicandCondition>>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: ErrorDetail<'a>,
}

#[derive(Serialize)]
struct ErrorDetail<'a> {
    code: i32,
    kind: &'a str,
    message: &'a str,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let body = ErrorBody {
                error: ErrorDetail {
                    code: err.exit_code(),
                    kind: err.kind(),
                    message: err.message(),
                },
            };
            let json = serde_json::to_string(&body)
                .unwrap_or_else(|_| format!("{{\"error\":{{\"code\":{}}}}}", err.exit_code()));
            eprintln!("{json}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Warp { exponents, p, input, output } => {
            let map = WarpMap::new(io::parse_exponents(&exponents)?, p)?;
            let x = io::parse_vector(&input)?;
            let (result, conditions) = map.forward_with_conditions(&x)?;
            emit_vector(&output, result, Some(conditions))
        }
        Command::Unwarp { exponents, p, input, output } => {
            let map = WarpMap::new(io::parse_exponents(&exponents)?, p)?;
            let y = io::parse_vector(&input)?;
            emit_vector(&output, map.inverse(&y)?, None)
        }
        Command::Rotate { weights, input, inverse, output } => {
            let w = io::parse_weights(&weights)?;
            let x = io::parse_vector(&input)?;
            let result = if inverse {
                rotation_inverse(&w, &x)?
            } else {
                rotation_forward(&w, &x)?
            };
            emit_vector(&output, result, None)
        }
        Command::Build { weights, p, output } => {
            let map = build_normal_form(io::parse_weights(&weights)?, p)?;
            write_report(&output.out, &to_json(&map)?)
        }
        Command::Verify {
            weights,
            p,
            samples,
            seed,
            norm_min,
            norm_max,
            tolerance,
            output,
        } => {
            if tolerance <= 0.0 || tolerance.is_nan() {
                return Err(CliError::Parse(format!("tolerance must be positive, got {tolerance}")));
            }
            let map = build_normal_form(io::parse_weights(&weights)?, p)?;
            let report = map.defect(samples, seed, (norm_min, norm_max))?;
            let body = match output.format {
                Format::Json => to_json(&report)?,
                Format::Csv => to_csv(
                    &["samples", "max_defect", "mean_defect"],
                    &[vec![
                        report.samples.to_string(),
                        fmt_f64(report.max_defect),
                        fmt_f64(report.mean_defect),
                    ]],
                ),
            };
            write_report(&output.out, &body)?;
            if report.max_defect > tolerance {
                return Err(CliError::Verification(format!(
                    "max_defect {} exceeds tolerance {tolerance}",
                    report.max_defect
                )));
            }
            Ok(())
        }
        Command::Probe { weights, p, epsilon, radius_factor, indices, cap, output } => {
            if cap == 0 {
                return Err(CliError::Parse("cap must be at least 1".into()));
            }
            let w = io::parse_weights(&weights)?;
            let idx = io::parse_indices(&indices)?;
            let profile = escape_profile(&w, p, epsilon, &idx, radius_factor, cap)?;
            let body = match output.format {
                Format::Json => to_json(&profile)?,
                Format::Csv => to_csv(
                    &["index", "escape_time", "sentinel_flag"],
                    &profile
                        .rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.index.to_string(),
                                r.escape_time.to_string(),
                                r.sentinel.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
            };
            write_report(&output.out, &body)
        }
        Command::Selftest { seed, output } => {
            let precision = match std::env::var("LPCONJ_PRECISION") {
                Ok(v) if !v.is_empty() => Some(v.parse::<u32>().map_err(|_| {
                    CliError::Parse(format!("LPCONJ_PRECISION must be a digit count, got {v:?}"))
                })?),
                _ => None,
            };
            let report = run_selftest(&SelftestConfig { seed, precision });
            for p in &report.properties {
                println!(
                    "{} {} (samples={}, max_violation={:.3e}, tolerance={:.1e})",
                    if p.pass { "PASS" } else { "FAIL" },
                    p.name,
                    p.samples,
                    p.max_violation,
                    p.tolerance
                );
            }
            let body = match output.format {
                Format::Json => to_json(&report)?,
                Format::Csv => to_csv(
                    &["name", "samples", "tolerance", "max_violation", "pass"],
                    &report
                        .properties
                        .iter()
                        .map(|p| {
                            vec![
                                p.name.clone(),
                                p.samples.to_string(),
                                fmt_f64(p.tolerance),
                                fmt_f64(p.max_violation),
                                p.pass.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
            };
            write_report(&output.out, &body)?;
            if !report.pass {
                return Err(CliError::Verification("selftest has failing properties".into()));
            }
            Ok(())
        }
    }
}

fn emit_vector(
    output: &OutputArgs,
    result: FinSeq,
    conditions: Option<Vec<lpconj_core::warp::RadicandCondition>>,
) -> Result<(), CliError> {
    let body = match output.format {
        Format::Json => to_json(&VectorReport { result, conditions })?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = result
                .iter()
                .map(|(n, z)| vec![n.to_string(), fmt_f64(z.re), fmt_f64(z.im)])
                .collect();
            to_csv(&["index", "re", "im"], &rows)
        }
    };
    write_report(&output.out, &body)
}

/// Picks the normal form the weights admit: doubling when `inf |w_n| > 1`,
/// halving when the moduli sit strictly inside the unit disk.
fn build_normal_form(weights: WeightSeq, p: f64) -> Result<ConjugacyMap, CliError> {
    if weights.inf_modulus() > 1.0 {
        return Ok(build_doubling_conjugacy(weights, p)?);
    }
    if weights.sup_modulus() < 1.0 && weights.inf_modulus() > 0.0 {
        return Ok(build_halving_conjugacy(weights, p)?);
    }
    Err(CliError::Hypothesis(format!(
        "weights with inf |w_n| = {} and sup |w_n| = {} admit neither the doubling \
(inf > 1) nor the halving (0 < inf, sup < 1) normal form",
        weights.inf_modulus(),
        weights.sup_modulus()
    )))
}
