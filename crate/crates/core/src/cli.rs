//! The `locc` command line: argument parsing, report assembly and rendering.
//!
//! Every command builds a serializable report first and renders it as text,
//! JSON or CSV afterwards, so the formats never disagree about content.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bell::{equivalence_classes, BellSet};
use crate::bounds::{ens2_post_ensemble, ens2_set, holevo_like_bound, Ens2Params, Ensemble};
use crate::constraints::{condition_r_for_set, Outcome, SideDims, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::protocol::{classify_all, find_protocol, ClassReport, Tally};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILS_R: i32 = 3;
pub const EXIT_NO_PROTOCOL: i32 = 4;

/// Largest number of sets `classes` will enumerate.
pub const MAX_ENUMERATION: u128 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "locc", version, about = "Local distinguishability of maximally entangled states")]
struct Cli {
    /// Local dimension.
    #[arg(long, global = true, default_value_t = 4)]
    d: usize,
    /// Set size.
    #[arg(long, global = true, default_value_t = 4)]
    k: usize,
    /// Relative rank tolerance for nullspace computations.
    #[arg(long, global = true, env = "LOCC_TOL", default_value_t = DEFAULT_RANK_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count equivalence classes of k-subsets of Bell states.
    Classes,
    /// Decide condition R for one set and search for a protocol.
    Check {
        /// Comma-separated indices, e.g. 00,11,31,32.
        set: String,
    },
    /// Classify every class of four Bell states in dimension four.
    ClassifyAll,
    /// Holevo-like bound before, and optionally after, Alice's measurement.
    Bound {
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        a0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        mu0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        mu1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        zeta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<f64>,
    },
}

/// Validated global options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub d: usize,
    pub k: usize,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { d: 4, k: 4, tol: DEFAULT_RANK_TOL, format: Format::Text, out: None, threads: None }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=8).contains(&self.d) {
            return Err(Error::Config(format!("d = {} outside 2..=8", self.d)));
        }
        if self.k < 1 || self.k > self.d * self.d {
            return Err(Error::Config(format!("k = {} outside 1..={}", self.k, self.d * self.d)));
        }
        if !(1e-14..=1e-3).contains(&self.tol) {
            return Err(Error::Config(format!("tol = {:e} outside [1e-14, 1e-3]", self.tol)));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub representative: String,
    pub member_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesReport {
    pub schema: String,
    pub d: usize,
    pub k: usize,
    pub classes: usize,
    pub total_sets: usize,
    pub entries: Vec<ClassEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: String,
    pub d: usize,
    pub set: String,
    pub verdict: Outcome,
    pub alice: Option<SideDims>,
    pub bob: Option<SideDims>,
    pub protocol: Option<String>,
}

/// One CSV/JSON row of `classify-all`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub representative: String,
    pub member_count: usize,
    pub verdict: Outcome,
    pub alice_op_dim: Option<usize>,
    pub alice_opr_dim: Option<usize>,
    pub bob_op_dim: Option<usize>,
    pub bob_opr_dim: Option<usize>,
    pub protocol: Option<String>,
}

impl From<&ClassReport> for ClassRow {
    fn from(r: &ClassReport) -> Self {
        ClassRow {
            representative: r.representative.to_string(),
            member_count: r.member_count,
            verdict: r.verdict,
            alice_op_dim: r.alice.map(|s| s.op_only),
            alice_opr_dim: r.alice.map(|s| s.op_plus_r),
            bob_op_dim: r.bob.map(|s| s.op_only),
            bob_opr_dim: r.bob.map(|s| s.op_plus_r),
            protocol: r.protocol.map(|p| p.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema: String,
    pub d: usize,
    pub k: usize,
    pub fails_r: usize,
    pub passes_r: usize,
    pub passes_r_with_protocol: usize,
    pub classes: Vec<ClassRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostMeasurementBound {
    pub params: Ens2Params,
    pub bits: f64,
    pub closed_form_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub schema: String,
    pub d: usize,
    pub set: String,
    pub pre_measurement_bits: f64,
    pub post_measurement: Option<PostMeasurementBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Report {
    Classes(ClassesReport),
    Check(CheckReport),
    Classify(ClassifyReport),
    Bound(BoundReport),
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

pub fn cmd_classes(cfg: &RunConfig) -> Result<ClassesReport> {
    cfg.validate()?;
    let total = binomial((cfg.d * cfg.d) as u128, cfg.k as u128);
    if total > MAX_ENUMERATION {
        return Err(Error::Config(format!("C({}, {}) = {total} sets exceeds the enumeration limit", cfg.d * cfg.d, cfg.k)));
    }
    let classes = equivalence_classes(cfg.d, cfg.k);
    let entries: Vec<ClassEntry> =
        classes.iter().map(|c| ClassEntry { representative: c.representative.to_string(), member_count: c.size() }).collect();
    Ok(ClassesReport {
        schema: "locc-classes/1".into(),
        d: cfg.d,
        k: cfg.k,
        classes: entries.len(),
        total_sets: entries.iter().map(|e| e.member_count).sum(),
        entries,
    })
}

pub fn cmd_check(cfg: &RunConfig, set_spec: &str) -> Result<CheckReport> {
    cfg.validate()?;
    let set = BellSet::parse(cfg.d, set_spec)?;
    let verdict = condition_r_for_set(&set, cfg.tol)?;
    let protocol = match verdict.outcome {
        Outcome::PassesR => find_protocol(&set)?.map(|p| p.summary().to_string()),
        _ => None,
    };
    Ok(CheckReport {
        schema: "locc-check/1".into(),
        d: cfg.d,
        set: set.to_string(),
        verdict: verdict.outcome,
        alice: verdict.alice_dims(),
        bob: verdict.bob_dims(),
        protocol,
    })
}

pub fn cmd_classify_all(cfg: &RunConfig) -> Result<ClassifyReport> {
    cfg.validate()?;
    let reports = classify_all(cfg.d, cfg.k, cfg.tol)?;
    let tally = Tally::of(&reports);
    Ok(ClassifyReport {
        schema: "locc-classify/1".into(),
        d: cfg.d,
        k: cfg.k,
        fails_r: tally.fails_r,
        passes_r: tally.passes_r,
        passes_r_with_protocol: tally.passes_r_with_protocol,
        classes: reports.iter().map(ClassRow::from).collect(),
    })
}

pub fn cmd_bound(cfg: &RunConfig, set_spec: &str, params: Option<Ens2Params>) -> Result<BoundReport> {
    cfg.validate()?;
    let set = BellSet::parse(cfg.d, set_spec)?;
    let pre = holevo_like_bound(&Ensemble::from_set(&set)?)?;
    let post_measurement = match params {
        None => None,
        Some(p) => {
            if set != ens2_set() {
                return Err(Error::Config(format!("measurement parameters apply only to {}, not {set}", ens2_set())));
            }
            let bits = holevo_like_bound(&ens2_post_ensemble(&p)?)?;
            Some(PostMeasurementBound { params: p, bits, closed_form_bits: p.closed_form_bound() })
        }
    };
    Ok(BoundReport { schema: "locc-bound/1".into(), d: cfg.d, set: set.to_string(), pre_measurement_bits: pre, post_measurement })
}

fn dims_text(d: Option<SideDims>) -> String {
    match d {
        Some(s) => format!("op_only={} op_plus_r={} r_only={}", s.op_only, s.op_plus_r, s.r_only),
        None => "n/a".into(),
    }
}

fn csv_text<T: Serialize>(rows: &[T], trailer: Option<String>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let mut s = String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?).expect("csv is utf-8");
    if let Some(t) = trailer {
        let _ = writeln!(s, "# {t}");
    }
    Ok(s)
}

/// Render a report in the requested format.
pub fn render(report: &Report, format: Format) -> Result<String> {
    if format == Format::Json {
        let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))?;
        s.push('\n');
        return Ok(s);
    }
    let mut s = String::new();
    match (report, format) {
        (Report::Classes(r), Format::Csv) => return csv_text(&r.entries, None),
        (Report::Classes(r), _) => {
            let _ = writeln!(s, "classes: {}, total_sets: {}", r.classes, r.total_sets);
            for e in &r.entries {
                let _ = writeln!(s, "{}  members={}", e.representative, e.member_count);
            }
        }
        (Report::Check(r), Format::Csv) => return csv_text(&[CheckRow::from(r)], None),
        (Report::Check(r), _) => {
            let _ = writeln!(s, "set: {}", r.set);
            let _ = writeln!(s, "verdict: {}", r.verdict);
            let _ = writeln!(s, "alice: {}", dims_text(r.alice));
            let _ = writeln!(s, "bob: {}", dims_text(r.bob));
            let _ = writeln!(s, "protocol: {}", r.protocol.as_deref().unwrap_or("none"));
        }
        (Report::Classify(r), Format::Csv) => {
            return csv_text(&r.classes, Some(format!("fails_r={} passes_r={}", r.fails_r, r.passes_r)));
        }
        (Report::Classify(r), _) => {
            for c in &r.classes {
                let _ = writeln!(
                    s,
                    "{}  members={}  {}  alice={}/{}  bob={}/{}  protocol={}",
                    c.representative,
                    c.member_count,
                    c.verdict,
                    c.alice_op_dim.map_or("-".into(), |x| x.to_string()),
                    c.alice_opr_dim.map_or("-".into(), |x| x.to_string()),
                    c.bob_op_dim.map_or("-".into(), |x| x.to_string()),
                    c.bob_opr_dim.map_or("-".into(), |x| x.to_string()),
                    c.protocol.as_deref().unwrap_or("none"),
                );
            }
            let _ = writeln!(s, "fails_r={} passes_r={}", r.fails_r, r.passes_r);
        }
        (Report::Bound(r), Format::Csv) => return csv_text(&[BoundRow::from(r)], None),
        (Report::Bound(r), _) => {
            let _ = writeln!(s, "set: {}", r.set);
            let _ = writeln!(s, "pre_measurement: {:.10} bits", r.pre_measurement_bits);
            if let Some(p) = &r.post_measurement {
                let _ = writeln!(s, "post_measurement: {:.10} bits", p.bits);
                let _ = writeln!(s, "closed_form: {:.10} bits", p.closed_form_bits);
            }
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct CheckRow<'a> {
    set: &'a str,
    verdict: Outcome,
    alice_op_dim: Option<usize>,
    alice_opr_dim: Option<usize>,
    bob_op_dim: Option<usize>,
    bob_opr_dim: Option<usize>,
    protocol: Option<&'a str>,
}

impl<'a> From<&'a CheckReport> for CheckRow<'a> {
    fn from(r: &'a CheckReport) -> Self {
        CheckRow {
            set: &r.set,
            verdict: r.verdict,
            alice_op_dim: r.alice.map(|s| s.op_only),
            alice_opr_dim: r.alice.map(|s| s.op_plus_r),
            bob_op_dim: r.bob.map(|s| s.op_only),
            bob_opr_dim: r.bob.map(|s| s.op_plus_r),
            protocol: r.protocol.as_deref(),
        }
    }
}

#[derive(Serialize)]
struct BoundRow<'a> {
    set: &'a str,
    pre_measurement_bits: f64,
    post_measurement_bits: Option<f64>,
    closed_form_bits: Option<f64>,
}

impl<'a> From<&'a BoundReport> for BoundRow<'a> {
    fn from(r: &'a BoundReport) -> Self {
        BoundRow {
            set: &r.set,
            pre_measurement_bits: r.pre_measurement_bits,
            post_measurement_bits: r.post_measurement.as_ref().map(|p| p.bits),
            closed_form_bits: r.post_measurement.as_ref().map(|p| p.closed_form_bits),
        }
    }
}

fn exit_code(report: &Report) -> i32 {
    match report {
        Report::Check(r) => match (r.verdict, &r.protocol) {
            (Outcome::PassesR, Some(_)) => EXIT_OK,
            (Outcome::PassesR, None) => EXIT_NO_PROTOCOL,
            // more states than dimension is a proof of indistinguishability too
            (Outcome::FailsR | Outcome::TriviallyIndistinguishable, _) => EXIT_FAILS_R,
        },
        _ => EXIT_OK,
    }
}

fn params_from(a0: Option<f64>, mu0: Option<f64>, mu1: Option<f64>, zeta: Option<f64>, eta: Option<f64>) -> Result<Option<Ens2Params>> {
    if [a0, mu0, mu1, zeta, eta].iter().all(Option::is_none) {
        return Ok(None);
    }
    let a0 = a0.ok_or_else(|| Error::Config("--a0 is required with measurement parameters".into()))?;
    Ok(Some(Ens2Params::new(a0, mu0.unwrap_or(0.0), mu1.unwrap_or(0.0), zeta.unwrap_or(0.0), eta.unwrap_or(0.0))?))
}

fn execute(cli: Cli) -> Result<(RunConfig, Report)> {
    let cfg = RunConfig { d: cli.d, k: cli.k, tol: cli.tol, format: cli.format, out: cli.out, threads: cli.threads };
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    let report = pool.install(|| -> Result<Report> {
        Ok(match &cli.command {
            Command::Classes => Report::Classes(cmd_classes(&cfg)?),
            Command::Check { set } => Report::Check(cmd_check(&cfg, set)?),
            Command::ClassifyAll => Report::Classify(cmd_classify_all(&cfg)?),
            Command::Bound { set, a0, mu0, mu1, zeta, eta } => {
                Report::Bound(cmd_bound(&cfg, set, params_from(*a0, *mu0, *mu1, *zeta, *eta)?)?)
            }
        })
    })?;
    Ok((cfg, report))
}

/// Parse `args` (including the program name), run, and return the exit code.
/// Reports go to `out` (or `--out`), diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let (cfg, report) = match execute(cli) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = match render(&report, cfg.format) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &text),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    exit_code(&report)
}
