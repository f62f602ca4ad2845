//! Command-line front end: `solve`, `verify`, `table`, `estimate`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 structure failure, 3 verification
//! failure, 4 parse or file error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::certify::{verify_certificate, Certificate};
use crate::construct::FormSpec;
use crate::error::{Error, Result};
use crate::lp;
use crate::numeric::{fmt_fixed, fmt_sci, parse_rational, Precision, DEFAULT_PRECISION_BITS};
use crate::pipeline::{solve, SolveOptions};
use crate::tables::{self, MatchStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_STRUCTURE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "delsarte", version, about = "Delsarte LP bounds for antipodal spherical codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct, certify and write a certificate for one dimension.
    Solve(SolveArgs),
    /// Re-check a certificate file.
    Verify(VerifyArgs),
    /// Bounds over a range of dimensions with registry comparison.
    Table(TableArgs),
    /// Discretized LP estimate and structure guess.
    Estimate(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Inner-product bound as an exact rational.
    #[arg(long, default_value = "1/2")]
    pub s: String,
    #[arg(long, env = "DELSARTE_PRECISION_BITS", default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub m: u32,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, requires = "k")]
    pub form: Option<u8>,
    #[arg(long, requires = "form")]
    pub k: Option<usize>,
    /// LP degree cap, used when the structure is guessed.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Certificate path [default: certificate-m<m>.json].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub certificate: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Inclusive range `A..B`.
    #[arg(long)]
    pub range: String,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long, default_value = "1/2")]
    pub s: String,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.stage() {
        "input" => EXIT_INPUT,
        "structure" => EXIT_STRUCTURE,
        "verification" => EXIT_VERIFY,
        _ => EXIT_PARSE,
    }
}

/// Parses `A..B` (inclusive).
pub fn parse_range(text: &str) -> Result<(u32, u32)> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| Error::InvalidArgument(format!("range `{text}` is not of the form A..B")))?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad range bound `{x}`")));
    let (a, b) = (p(a)?, p(b)?);
    if a > b {
        return Err(Error::InvalidArgument(format!("empty range {a}..{b}")));
    }
    Ok((a, b))
}

fn parse_s(text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|_| Error::InvalidArgument(format!("s must be an exact rational p/q, got `{text}`")))
}

/// Runs the CLI on `args` and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Table(a) => cmd_table(&a, out),
        Command::Estimate(a) => cmd_estimate(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error [{}]: {e}", e.stage());
            exit_code(&e)
        }
    }
}

fn solve_options(m: u32, common: &Common) -> Result<SolveOptions> {
    let mut o = SolveOptions::new(m).with_precision(Precision::new(common.precision_bits)?);
    o.s = parse_s(&common.s)?;
    Ok(o)
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let mut opts = solve_options(a.m, &a.common)?;
    if let (Some(f), Some(k)) = (a.form, a.k) {
        opts.spec = Some(FormSpec::new(f, k).map_err(|e| Error::InvalidArgument(e.to_string()))?);
    }
    opts.degree_cap = a.degree;
    opts.grid = a.grid;
    let solved = solve(&opts)?;
    let path = a.out.clone().unwrap_or_else(|| PathBuf::from(format!("certificate-m{}.json", a.m)));
    std::fs::write(&path, solved.certificate.to_json()?)?;
    writeln!(out, "{}", solved.summary())?;
    Ok(EXIT_OK)
}

pub fn read_certificate(path: &Path) -> Result<Certificate> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    Certificate::from_json(&text)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let cert = read_certificate(&a.certificate)?;
    let checks = verify_certificate(&cert)?;
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    if failed.is_empty() {
        writeln!(out, "certificate m={} verified: w={}", cert.m, cert.bound.w_exact.as_deref().unwrap_or(&cert.bound.w))?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "verification failed: {}", failed.join(", "))?;
        Ok(EXIT_VERIFY)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub m: u32,
    pub form: Option<u8>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub degree: Option<usize>,
    pub w: Option<String>,
    pub w_exact: Option<String>,
    pub even_floor: Option<String>,
    pub registry_w: Option<String>,
    pub rel_diff: Option<String>,
    pub status: String,
}

/// Solves one `m` and compares with the registry; failures become the row status.
pub fn table_row(m: u32, common: &Common) -> TableRow {
    let registry = tables::known_bound(m);
    let mut row = TableRow {
        m,
        form: None,
        k: None,
        degree: None,
        w: None,
        w_exact: None,
        even_floor: None,
        registry_w: registry.map(|e| e.w.to_string()),
        rel_diff: None,
        status: String::new(),
    };
    let solved = solve_options(m, common).and_then(|o| solve(&o));
    match solved {
        Ok(s) => {
            row.form = Some(s.spec.form);
            row.k = Some(s.spec.k);
            row.degree = Some(s.spec.degree());
            row.w = Some(fmt_fixed(&s.bound.w, 10));
            row.w_exact = s.bound.w_exact.as_ref().map(|q| q.to_string());
            row.even_floor = Some(s.bound.even_floor.to_string());
            row.status = match tables::compare(m, &s.bound) {
                None => "no-registry".into(),
                Some(c) => {
                    row.rel_diff = Some(fmt_sci(&c.rel_diff, 3));
                    match c.status {
                        MatchStatus::Exact => "exact".into(),
                        MatchStatus::Printed => "printed".into(),
                        MatchStatus::Mismatch => "mismatch".into(),
                    }
                }
            };
        }
        Err(e) => {
            row.status = if registry.is_none() {
                format!("no-registry; error [{}]: {e}", e.stage())
            } else {
                format!("error [{}]: {e}", e.stage())
            };
        }
    }
    row
}

pub fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32> {
    let (lo, hi) = parse_range(&a.range)?;
    parse_s(&a.common.s)?;
    Precision::new(a.common.precision_bits)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let rows: Vec<TableRow> = pool.install(|| (lo..=hi).into_par_iter().map(|m| table_row(m, &a.common)).collect());
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("csv output is utf-8")
        }
    };
    match &a.out {
        Some(p) => std::fs::write(p, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_estimate(a: &EstimateArgs, out: &mut dyn Write) -> Result<i32> {
    let s = parse_s(&a.s)?;
    let est = lp::estimate(a.m, &s, a.degree, a.grid)?;
    writeln!(
        out,
        "m={} w_estimate={} degree_cap={} grid={} pivots={}",
        a.m,
        fmt_fixed(&est.solution.w_estimate, 6),
        est.degree_cap,
        est.grid_size,
        est.solution.iterations
    )?;
    for (i, g) in est.guesses.iter().enumerate() {
        writeln!(out, "guess {}: form={} K={} degree={} ({})", i + 1, g.spec.form, g.spec.k, g.spec.degree(), g.notes)?;
    }
    Ok(EXIT_OK)
}
