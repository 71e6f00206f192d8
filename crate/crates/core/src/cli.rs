//! The `verify` command: argument parsing, the run itself, and report output.
//!
//! Exit codes: 0 when every record passes, 1 when any fails, 2 for usage
//! errors, 3 for I/O or internal arithmetic errors.

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::congruences::{run_suite, CongruenceId, Verdict};
use crate::error::{Error, Result};
use crate::exactnum::primes_in;
use crate::identities::{check_identity_range, IdentityId};
use crate::wz::{check_closed_form, check_full_sums, check_half_sums, check_pair_identity, GridVerdict};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "supercong", version, about = "Exact prime-by-prime verification of supercongruences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check congruences, identities and WZ relations, one record per check
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Inclusive prime range LO:HI; composites are skipped
    #[arg(long, value_name = "LO:HI")]
    primes: PrimeRange,
    /// Comma-separated ids, or `all`
    #[arg(long, value_delimiter = ',', default_value = "all")]
    ids: Vec<String>,
    /// Largest exponent r for rows indexed by p^r
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    r_max: u32,
    /// Grid bound for the WZ checks
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    wz_grid: u64,
    /// Largest n for the identity checks
    #[arg(long, default_value_t = 200)]
    identities_n_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    /// Worker threads, or `auto`
    #[arg(long, default_value = "auto")]
    jobs: Jobs,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report 0 in the timing field
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for PrimeRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| format!("`{v}` is not a nonnegative integer"))
        };
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo > hi {
            return Err(format!("empty range {lo}:{hi}"));
        }
        Ok(PrimeRange { lo, hi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Jobs {
    Auto,
    Fixed(usize),
}

impl FromStr for Jobs {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Jobs::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Jobs::Fixed(n)),
            _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Table,
}

/// Prime-independent checks reported alongside the congruences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WzCheck {
    Pair,
    TelescopeHalf,
    TelescopeFull,
    ClosedForm,
}

impl WzCheck {
    pub const ALL: [WzCheck; 4] = [
        WzCheck::Pair,
        WzCheck::TelescopeHalf,
        WzCheck::TelescopeFull,
        WzCheck::ClosedForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WzCheck::Pair => "wz-pair",
            WzCheck::TelescopeHalf => "wz-telescope-half",
            WzCheck::TelescopeFull => "wz-telescope-full",
            WzCheck::ClosedForm => "wz-closed-form",
        }
    }

    /// Runs the check at grid bound `n`: the pair identity on `n x n`, half
    /// sums to `n`, full sums to `2n`, the closed form for odd `p <= n`.
    pub fn run(self, n: u64) -> GridVerdict {
        match self {
            WzCheck::Pair => check_pair_identity(n, n),
            WzCheck::TelescopeHalf => check_half_sums(n),
            WzCheck::TelescopeFull => check_full_sums(2 * n),
            WzCheck::ClosedForm => check_closed_form(n),
        }
    }
}

/// Anything that can be named in `--ids`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Congruence(CongruenceId),
    Identity(IdentityId),
    Wz(WzCheck),
}

impl CheckId {
    /// Every id, in report order.
    pub fn all() -> Vec<CheckId> {
        CongruenceId::all()
            .map(CheckId::Congruence)
            .chain(IdentityId::ALL.into_iter().map(CheckId::Identity))
            .chain(WzCheck::ALL.into_iter().map(CheckId::Wz))
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Congruence(id) => id.name(),
            CheckId::Identity(id) => id.name(),
            CheckId::Wz(id) => id.name(),
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::all()
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub range: PrimeRange,
    /// Primes in the range with `p > 3`, ascending.
    pub primes: Vec<u64>,
    /// Primes in the range that were dropped for being `<= 3`.
    pub skipped: Vec<u64>,
    pub r_max: u32,
    /// Selected ids, deduplicated, in report order.
    pub ids: Vec<CheckId>,
    pub wz_grid: u64,
    pub identities_n_max: u64,
    pub format: Format,
    pub jobs: Jobs,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

/// Parses a full argument vector, program name first.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let Command::Verify(args) = Cli::try_parse_from(argv)?.command;
    let invalid = |msg: String| Cli::command().error(ErrorKind::ValueValidation, msg);

    let mut ids = Vec::new();
    for name in args.ids.iter().map(|s| s.trim()) {
        if name == "all" {
            ids.extend(CheckId::all());
        } else {
            ids.push(name.parse::<CheckId>().map_err(|e| invalid(e.to_string()))?);
        }
    }
    ids.sort_unstable();
    ids.dedup();

    let (skipped, primes) = primes_in(args.primes.lo, args.primes.hi)
        .into_iter()
        .partition(|&p| p <= 3);
    Ok(RunConfig {
        range: args.primes,
        primes,
        skipped,
        r_max: args.r_max,
        ids,
        wz_grid: args.wz_grid,
        identities_n_max: args.identities_n_max,
        format: args.format,
        jobs: args.jobs,
        out: args.out,
        timing: !args.no_timing,
    })
}

/// One report line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub id: String,
    pub p: u64,
    pub r: u32,
    pub modulus: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub micros: u64,
    #[serde(skip)]
    pub detail: String,
}

impl Record {
    pub fn from_verdict(v: &Verdict) -> Self {
        let show = |r: &Option<crate::Residue>| r.as_ref().map(|r| r.value().to_string()).unwrap_or_default();
        Record {
            id: v.id.name().to_string(),
            p: v.p,
            r: v.r,
            modulus: v.modulus_label(),
            lhs: show(&v.lhs),
            rhs: show(&v.rhs),
            pass: v.pass,
            micros: v.micros,
            detail: v.detail.clone().unwrap_or_default(),
        }
    }

    /// Exact checks have no prime: `p = r = 0`, and the two sides are the
    /// number of cases checked and the number that held.
    pub fn from_grid(id: CheckId, v: &GridVerdict, micros: u64) -> Self {
        let failed = v.failures().len() as u64;
        let detail = match v.failures() {
            [] => String::new(),
            [first, ..] => format!("{failed} failures, first at {first:?}"),
        };
        Record {
            id: id.name().to_string(),
            p: 0,
            r: 0,
            modulus: "exact".to_string(),
            lhs: v.checked().to_string(),
            rhs: (v.checked() - failed).to_string(),
            pass: v.pass(),
            micros,
            detail,
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed().as_micros() as u64)
}

/// Runs every selected check; congruences first, then identities, then WZ.
pub fn execute(config: &RunConfig) -> Result<Vec<Record>> {
    let congruences: Vec<CongruenceId> = config
        .ids
        .iter()
        .filter_map(|id| match id {
            CheckId::Congruence(c) => Some(*c),
            _ => None,
        })
        .collect();
    let mut records: Vec<Record> = run_suite(&congruences, &config.primes, config.r_max)?
        .iter()
        .map(Record::from_verdict)
        .collect();

    let exact: Vec<CheckId> = config
        .ids
        .iter()
        .copied()
        .filter(|id| !matches!(id, CheckId::Congruence(_)))
        .collect();
    let exact_records: Result<Vec<Record>> = exact
        .into_par_iter()
        .map(|id| {
            let (verdict, micros) = match id {
                CheckId::Identity(i) => {
                    let (v, t) = timed(|| check_identity_range(i, config.identities_n_max));
                    (v?, t)
                }
                CheckId::Wz(w) => timed(|| w.run(config.wz_grid)),
                CheckId::Congruence(_) => unreachable!("filtered above"),
            };
            Ok(Record::from_grid(id, &verdict, micros))
        })
        .collect();
    records.extend(exact_records?);

    if !config.timing {
        for r in &mut records {
            r.micros = 0;
        }
    }
    Ok(records)
}

fn write_table(records: &[Record], out: &mut dyn Write) -> io::Result<()> {
    let header = ["id", "p", "r", "modulus", "lhs", "rhs", "pass", "micros", "detail"];
    let rows: Vec<[String; 9]> = records
        .iter()
        .map(|r| {
            [
                r.id.clone(),
                r.p.to_string(),
                r.r.to_string(),
                r.modulus.clone(),
                r.lhs.clone(),
                r.rhs.clone(),
                r.pass.to_string(),
                r.micros.to_string(),
                r.detail.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>, out: &mut dyn Write| -> io::Result<()> {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        writeln!(out, "{}", padded.join("  ").trim_end())
    };
    line(header.to_vec(), out)?;
    for row in &rows {
        line(row.iter().map(String::as_str).collect(), out)?;
    }
    Ok(())
}

fn write_records(records: &[Record], format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Jsonl => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            if records.is_empty() {
                w.write_record(["id", "p", "r", "modulus", "lhs", "rhs", "pass", "micros"])?;
            }
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Table => write_table(records, out)?,
    }
    out.flush()
}

/// Writes the report and returns the exit code: 0 all pass, 1 any fail, 3 on I/O error.
pub fn emit_report(records: &[Record], format: Format, out: Option<&PathBuf>) -> i32 {
    let written = match out {
        Some(path) => File::create(path).and_then(|f| write_records(records, format, &mut BufWriter::new(f))),
        None => write_records(records, format, &mut io::stdout().lock()),
    };
    match written {
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            EXIT_ERROR
        }
        Ok(()) if records.iter().all(|r| r.pass) => EXIT_PASS,
        Ok(()) => EXIT_FAIL,
    }
}

/// Entry point for the binary.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    for p in &config.skipped {
        eprintln!("warning: skipping p = {p}; congruences are checked for p > 3");
    }
    let threads = match config.jobs {
        Jobs::Auto => 0,
        Jobs::Fixed(n) => n,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_ERROR;
        }
    };
    match pool.install(|| execute(&config)) {
        Ok(records) => emit_report(&records, config.format, config.out.as_ref()),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
