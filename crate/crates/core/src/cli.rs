//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a computation
//! fails (overflow, no invertible sample, singular matrix).

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::approx::pade_approximant;
use crate::dimension::{jacobian_report, scan_each, taylor_dimension, DimensionReport, SampleConfig, ScanOptions};
use crate::error::Error;
use crate::field::PrimeField;
use crate::froberg::{exceptional_pairs_with_jobs, froberg_report};
use crate::hessian::hessian_rank;
use crate::monomial::TieBreak;
use crate::pade::{PadeLayout, PadeParams};
use crate::series::parse_poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ColumnOrder {
    /// x2 before x1 among equal-degree columns
    Standard,
    /// x1 before x2 among equal-degree columns
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DimMethod {
    Pade,
    Jacobian,
}

#[derive(Parser, Debug)]
#[command(name = "taylorvar", version, about = "Padé matrices and dimensions of Taylor varieties over a prime field")]
pub struct Cli {
    /// Odd prime below 2^31 for all field arithmetic
    #[arg(long, global = true, env = "TAYLORVAR_PRIME", default_value_t = crate::field::DEFAULT_PRIME)]
    pub prime: u64,
    /// Base seed; 0 draws one from entropy (echoed in the output)
    #[arg(long, global = true, env = "TAYLORVAR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Random points per evaluation
    #[arg(long, global = true, default_value_t = 3)]
    pub trials: usize,
    /// Worker threads for scan and census
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Shape {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub e: u32,
    #[arg(long)]
    pub m: u32,
}

impl Shape {
    fn params(&self) -> PadeParams {
        PadeParams::new(self.n, self.d, self.e, self.m)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Symbolic layout of the Padé matrix
    Matrix {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_enum, default_value_t = ColumnOrder::Standard)]
        columns: ColumnOrder,
    },
    /// Dimension of one Taylor variety
    Dim {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_enum, default_value_t = DimMethod::Pade)]
        method: DimMethod,
    },
    /// Defective triples (d, e, m) with m up to a bound
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m_max: u32,
        /// Start at this triple, given as d,e,m
        #[arg(long)]
        resume_from: Option<String>,
    },
    /// Padé approximant of a series
    Approx {
        #[command(flatten)]
        shape: Shape,
        /// Polynomial such as "1 + 2*x1 - x1*x2^2"
        #[arg(long)]
        series: String,
    },
    /// Fröberg quantities or the exceptional-pair census
    Froberg {
        #[arg(long)]
        n: usize,
        #[arg(long, requires = "e", conflicts_with = "census")]
        d: Option<u32>,
        #[arg(long, requires = "d")]
        e: Option<u32>,
        #[arg(long)]
        census: bool,
    },
    /// Generic Hessian rank of det(P_T)
    Hessian {
        #[command(flatten)]
        shape: Shape,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPrime(_)
            | Error::InvalidArgument(_)
            | Error::Parse(_)
            | Error::NotSquare { .. }
            | Error::EmptyRowSet { .. }
            | Error::NotUnit
            | Error::VariableMismatch { .. }
            | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(format!("write failed: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Compute(format!("serialization failed: {e}"))
    }
}

/// Resolved run settings, echoed with every result.
#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub jobs: usize,
    pub format: Format,
}

impl Config {
    fn sample(&self) -> Result<SampleConfig, Failure> {
        Ok(SampleConfig::new(PrimeField::new(self.prime)?, self.seed, self.trials))
    }

    fn comment(&self) -> String {
        format!("# prime={} seed={} trials={} jobs={}", self.prime, self.seed, self.trials, self.jobs)
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    PrimeField::new(cli.prime)?;
    if cli.trials == 0 {
        return Err(Failure::Usage("--trials must be positive".into()));
    }
    let seed = if cli.seed == 0 { rand::random::<u64>().max(1) } else { cli.seed };
    let config = Config { prime: cli.prime, seed, trials: cli.trials, jobs: cli.jobs.max(1), format: cli.format };
    match cli.command {
        Command::Matrix { shape, columns } => matrix(&config, shape, columns, out),
        Command::Dim { shape, method } => dim(&config, shape, method, out),
        Command::Scan { n, m_max, resume_from } => scan(&config, n, m_max, resume_from.as_deref(), out),
        Command::Approx { shape, series } => approx(&config, shape, &series, out),
        Command::Froberg { n, d, e, census } => froberg(&config, n, d.zip(e), census, out),
        Command::Hessian { shape } => hessian(&config, shape, out),
    }
}

fn emit_json(config: &Config, command: &str, body: Value, out: &mut dyn Write) -> Result<(), Failure> {
    let mut obj = json!({ "command": command, "config": config });
    if let (Some(map), Value::Object(extra)) = (obj.as_object_mut(), body) {
        map.extend(extra);
    }
    writeln!(out, "{}", serde_json::to_string(&obj)?)?;
    Ok(())
}

fn params_json(p: &PadeParams) -> Value {
    json!({ "n": p.n, "d": p.d, "e": p.e, "m": p.m })
}

fn matrix(config: &Config, shape: Shape, columns: ColumnOrder, out: &mut dyn Write) -> Result<(), Failure> {
    let tie = match columns {
        ColumnOrder::Standard => TieBreak::Standard,
        ColumnOrder::Reversed => TieBreak::Reversed,
    };
    let layout = PadeLayout::with_tie_break(shape.params(), tie)?;
    let cells = layout.symbolic();
    let rows: Vec<String> = layout.row_labels().iter().map(|e| e.to_string()).collect();
    let cols: Vec<String> = layout.col_labels().iter().map(|e| e.to_string()).collect();
    match config.format {
        Format::Json => emit_json(
            config,
            "matrix",
            json!({ "params": params_json(&shape.params()), "rows": rows, "cols": cols, "cells": cells }),
            out,
        ),
        Format::Csv => {
            writeln!(out, "{}", config.comment())?;
            writeln!(out, "row,{}", cols.join(","))?;
            for (label, row) in rows.iter().zip(&cells) {
                writeln!(out, "{label},{}", row.join(","))?;
            }
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{}", config.comment())?;
            writeln!(out, "{} x {} Padé matrix for n={} d={} e={} m={}", rows.len(), cols.len(), shape.n, shape.d, shape.e, shape.m)?;
            let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
            for row in &cells {
                let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                writeln!(out, "{}", line.join(" ").trim_end())?;
            }
            Ok(())
        }
    }
}

fn dim_json(r: &DimensionReport) -> Value {
    json!({
        "params": params_json(&r.params),
        "dim": r.actual_dim,
        "expected": r.expected_dim,
        "parameter_count": r.parameter_count,
        "ambient": r.ambient_dim,
        "defect": r.defect,
        "defective": r.is_defective(),
        "fiber_dim": r.fiber_dim,
        "fills_ambient": r.fills_ambient,
        "method": r.method,
    })
}

fn csv_row(r: &DimensionReport) -> String {
    let p = r.params;
    format!("{},{},{},{},{},{},{}", p.n, p.d, p.e, p.m, r.actual_dim, r.parameter_count, r.ambient_dim)
}

fn text_row(r: &DimensionReport) -> String {
    let p = r.params;
    format!(
        "n={} d={} e={} m={}: dim {} (expected {}, parameters {}, ambient {}, defect {}, fiber {})",
        p.n, p.d, p.e, p.m, r.actual_dim, r.expected_dim, r.parameter_count, r.ambient_dim, r.defect, r.fiber_dim
    )
}

const CSV_HEADER: &str = "n,d,e,m,dim,params,ambient";

fn dim(config: &Config, shape: Shape, method: DimMethod, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = config.sample()?;
    let report = match method {
        DimMethod::Pade => taylor_dimension(shape.params(), &cfg)?,
        DimMethod::Jacobian => jacobian_report(shape.params(), &cfg)?,
    };
    match config.format {
        Format::Json => emit_json(config, "dim", dim_json(&report), out),
        Format::Csv => {
            writeln!(out, "{}", config.comment())?;
            writeln!(out, "{CSV_HEADER}")?;
            writeln!(out, "{}", csv_row(&report))?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{}", config.comment())?;
            writeln!(out, "{}", text_row(&report))?;
            Ok(())
        }
    }
}

fn parse_triple(text: &str) -> Result<(u32, u32, u32), Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Failure::Usage(format!("--resume-from expects d,e,m, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = [0u32; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| bad())?;
    }
    Ok((v[0], v[1], v[2]))
}

fn scan(config: &Config, n: usize, m_max: u32, resume_from: Option<&str>, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = config.sample()?;
    let resume = match resume_from {
        Some(text) => {
            let (d, e, m) = parse_triple(text)?;
            Some(PadeParams::new(n, d, e, m))
        }
        None => None,
    };
    let opts = ScanOptions { jobs: config.jobs, resume_from: resume };
    match config.format {
        Format::Csv => {
            writeln!(out, "{}", config.comment())?;
            writeln!(out, "{CSV_HEADER}")?;
        }
        Format::Text => writeln!(out, "{}", config.comment())?,
        Format::Json => {}
    }
    out.flush()?;
    let mut io_error = None;
    let result = scan_each(n, m_max, &cfg, opts, |r| {
        if !r.is_defective() {
            return Ok(());
        }
        let line = match config.format {
            Format::Csv => csv_row(r),
            Format::Text => text_row(r),
            Format::Json => {
                let mut v = dim_json(r);
                v["command"] = json!("scan");
                v["config"] = serde_json::to_value(config).expect("config serializes");
                v.to_string()
            }
        };
        if let Err(e) = writeln!(out, "{line}").and_then(|_| out.flush()) {
            io_error = Some(e);
            return Err(Error::InvalidArgument("output closed".into()));
        }
        Ok(())
    });
    if let Some(e) = io_error {
        return Err(e.into());
    }
    result.map_err(Failure::from)
}

fn approx(config: &Config, shape: Shape, series: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let field = PrimeField::new(config.prime)?;
    let t = parse_poly(field, shape.n, shape.m, series)?;
    let r = pade_approximant(&t, shape.d, shape.e)?;
    let s = r.summary();
    match config.format {
        Format::Json => emit_json(config, "approx", serde_json::to_value(&s)?, out),
        Format::Csv => {
            writeln!(out, "{}", config.comment())?;
            writeln!(out, "found,P,Q,fiber_dim")?;
            writeln!(out, "{},{},{},{}", s.found, s.p.unwrap_or_default(), s.q.unwrap_or_default(), s.fiber_dim)?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{}", config.comment())?;
            match (&s.p, &s.q) {
                (Some(p), Some(q)) => writeln!(out, "P = {p}\nQ = {q}\nfiber dimension {}", s.fiber_dim)?,
                _ => writeln!(out, "no approximant with Q(0) = 1; fiber dimension {}", s.fiber_dim)?,
            }
            Ok(())
        }
    }
}

fn froberg(config: &Config, n: usize, de: Option<(u32, u32)>, census: bool, out: &mut dyn Write) -> Result<(), Failure> {
    match (de, census) {
        (Some((d, e)), false) => {
            let r = froberg_report(n, d, e)?;
            match config.format {
                Format::Json => emit_json(config, "froberg", serde_json::to_value(&r)?, out),
                Format::Csv => {
                    writeln!(out, "{}", config.comment())?;
                    writeln!(out, "n,d,e,alpha,beta,W,defective_predicted")?;
                    writeln!(out, "{},{},{},{},{},{},{}", r.n, r.d, r.e, r.alpha, r.beta, r.w, r.defective_predicted)?;
                    Ok(())
                }
                Format::Text => {
                    writeln!(out, "{}", config.comment())?;
                    writeln!(out, "n={} d={} e={}: alpha {} beta {} W {}", r.n, r.d, r.e, r.alpha, r.beta, r.w)?;
                    Ok(())
                }
            }
        }
        (None, true) => {
            let c = exceptional_pairs_with_jobs(n, config.jobs)?;
            match config.format {
                Format::Json => emit_json(config, "froberg", serde_json::to_value(&c)?, out),
                Format::Csv => {
                    writeln!(out, "{}", config.comment())?;
                    writeln!(out, "# d0={} count={}", c.d0, c.count)?;
                    writeln!(out, "d,e")?;
                    for (d, e) in &c.pairs {
                        writeln!(out, "{d},{e}")?;
                    }
                    Ok(())
                }
                Format::Text => {
                    writeln!(out, "{}", config.comment())?;
                    writeln!(out, "n={}: d0 = {}, {} exceptional pairs", c.n, c.d0, c.count)?;
                    let pairs: Vec<String> = c.pairs.iter().map(|(d, e)| format!("({d},{e})")).collect();
                    writeln!(out, "{}", pairs.join(" "))?;
                    Ok(())
                }
            }
        }
        _ => Err(Failure::Usage("froberg needs either --d and --e, or --census".into())),
    }
}

fn hessian(config: &Config, shape: Shape, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = config.sample()?;
    let r = hessian_rank(shape.params(), &cfg)?;
    match config.format {
        Format::Json => emit_json(
            config,
            "hessian",
            json!({
                "params": params_json(&r.params),
                "vars": r.vars,
                "rank": r.rank,
                "corank": r.corank,
                "vanishing": r.vanishing(),
                "conjectured_corank": r.conjectured_corank,
                "conjecture_holds": r.conjecture_holds,
            }),
            out,
        ),
        Format::Csv => {
            writeln!(out, "{}", config.comment())?;
            writeln!(out, "n,d,e,m,vars,rank,corank")?;
            let p = r.params;
            writeln!(out, "{},{},{},{},{},{},{}", p.n, p.d, p.e, p.m, r.vars.len(), r.rank, r.corank)?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{}", config.comment())?;
            writeln!(out, "Hessian rank {} of {} (corank {})", r.rank, r.vars.len(), r.corank)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("taylorvar").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, out, err) = run_str(&["dim", "--n", "3", "--bogus"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("Usage"));
    }

    #[test]
    fn bad_prime_is_rejected() {
        let (code, _, err) = run_str(&["--prime", "15", "dim", "--n", "1", "--d", "1", "--e", "1", "--m", "3"]);
        assert_eq!(code, 1);
        assert!(err.contains("not an odd prime"));
    }

    #[test]
    fn exhausted_samples_are_computation_errors() {
        // det(P_T) vanishes identically for (3, 2, 2, 3)
        let (code, _, err) = run_str(&["--seed", "5", "hessian", "--n", "3", "--d", "2", "--e", "2", "--m", "3"]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn resume_triple_parsing() {
        assert_eq!(parse_triple("2, 3,4").unwrap(), (2, 3, 4));
        assert!(parse_triple("2,3").is_err());
        assert!(parse_triple("a,b,c").is_err());
    }

    #[test]
    fn froberg_needs_a_mode() {
        assert_eq!(run_str(&["froberg", "--n", "3"]).0, 1);
        assert_eq!(run_str(&["froberg", "--n", "3", "--d", "2"]).0, 1);
    }
}
