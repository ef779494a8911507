//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning                                                      |
//! |------|--------------------------------------------------------------|
//! | 0    | command completed; for checks, every check passed            |
//! | 1    | a check failed (signature trial, invalid line configuration)  |
//! | 2    | bad input: unreadable or malformed file, bad arguments        |
//! | 3    | search stopped because a level exceeded the survivor cap      |

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_code;
use crate::catalog;
use crate::forbidden::ForbiddenFamily;
use crate::geometry::{self, LineConfig};
use crate::graph::Graph;
use crate::search::{self, SearchError, SearchOptions};
use crate::signature::{self, AnyMatrix, MatrixJson, PatternKind, PatternReport, Signature, SymMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_SURVIVOR_CAP: i32 = 3;

/// Environment variable that overrides `--jobs`.
pub const JOBS_ENV: &str = "RAMSEY_JOBS";

#[derive(Debug, Parser)]
#[command(name = "touching-lines", version, about = "Ramsey search, signature checks and equidistant line tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build feasible colorings level by level until a level is empty
    Search(SearchArgs),
    /// Sample the cycle and H7 sign patterns and check signatures and determinants
    VerifySignatures(VerifyArgs),
    /// Check distances, chirality and the T-matrix properties of a line configuration
    CheckLines(CheckLinesArgs),
    /// Print the 2n-2 equidistant lines in R^n as a configuration file
    GenLowerBound(GenArgs),
    /// List the named graphs
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
pub struct JobsArg {
    /// Worker threads [default: logical cores; RAMSEY_JOBS overrides]
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl JobsArg {
    pub fn resolve(&self) -> Result<usize, String> {
        let jobs = match std::env::var(JOBS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| format!("{JOBS_ENV}={v:?} is not a worker count"))?,
            Err(_) => self
                .jobs
                .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        };
        if jobs == 0 {
            return Err("worker count must be at least 1".into());
        }
        Ok(jobs)
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// `default` or a family JSON file
    #[arg(long, default_value = "default")]
    pub family: PathBuf,
    /// Largest vertex count to reach
    #[arg(long = "n", short = 'n', value_parser = clap::value_parser!(u64).range(1..=16))]
    pub n_max: u64,
    #[command(flatten)]
    pub jobs: JobsArg,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the last non-empty level as graph6, one per line
    #[arg(long)]
    pub witnesses: Option<PathBuf>,
    /// Abort when a level has more survivors than this
    #[arg(long, default_value_t = search::DEFAULT_MAX_SURVIVORS)]
    pub max_survivors: usize,
    /// Suppress progress lines
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub jobs: JobsArg,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Check this matrix file against `--pattern` instead of sampling
    #[arg(long, requires = "pattern")]
    pub matrix: Option<PathBuf>,
    /// cycle3, cycle5, cycle7, cycle9, ... or h7
    #[arg(long)]
    pub pattern: Option<PatternKind>,
}

#[derive(Debug, Args)]
pub struct CheckLinesArgs {
    /// Configuration file, or `-` for standard input
    pub config: PathBuf,
    /// Only check that every pair is at distance 1
    #[arg(long)]
    pub distances_only: bool,
    /// Overrides the tolerance stored in the file
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Ambient dimension n (at least 3)
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long)]
    pub json: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            code
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Search(a) => cmd_search(&a, out, err),
        Command::VerifySignatures(a) => cmd_verify_signatures(&a, out),
        Command::CheckLines(a) => cmd_check_lines(&a, out),
        Command::GenLowerBound(a) => cmd_gen_lower_bound(&a, out),
        Command::Catalog(a) => cmd_catalog(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_BAD_INPUT,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self::input(format!("{}: {e}", path.display()))
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => match out.write_all(text.as_bytes()).and_then(|_| out.write_all(b"\n")) {
            // the reader went away (e.g. `| head`); nothing left to report to
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| CliError::input(format!("writing output: {e}"))),
        },
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::input(format!("reading standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::io(path, e))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("value serializes")
}

pub fn cmd_search(a: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let fam = ForbiddenFamily::load(&a.family).map_err(|e| CliError::input(format!("{}: {e}", a.family.display())))?;
    let jobs = a.jobs.resolve().map_err(CliError::input)?;
    let opts = SearchOptions {
        jobs,
        max_survivors: a.max_survivors,
        witnesses: a.witnesses.is_some(),
        progress: !a.quiet,
    };
    let n_max = a.n_max as usize;
    match search::run_search(&fam, n_max, &opts) {
        Ok(report) => {
            if let Some(path) = &a.witnesses {
                let mut text = String::new();
                for line in report.witnesses.iter().flatten() {
                    text.push_str(line);
                    text.push('\n');
                }
                fs::write(path, text).map_err(|e| CliError::io(path, e))?;
            }
            let mut shown = report;
            // the graph6 file carries the survivors
            if a.witnesses.is_some() {
                shown.witnesses = None;
            }
            write_output(a.report.as_deref(), &shown.to_json(), out)?;
            Ok(EXIT_OK)
        }
        Err(SearchError::SurvivorCap { k, count, cap, partial }) => {
            write_output(a.report.as_deref(), &partial.to_json(), out)?;
            let _ = writeln!(err, "error: level {k} has {count} survivors, above the cap of {cap}");
            Ok(EXIT_SURVIVOR_CAP)
        }
        Err(e) => Err(CliError::input(e.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyCheck {
    pub name: String,
    pub expected: Signature,
    pub signature: Signature,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureRunReport {
    pub seed: u64,
    pub trials: usize,
    pub lemmas: Vec<PatternReport>,
    pub adjacency_checks: Vec<AdjacencyCheck>,
    pub all_passed: bool,
}

/// Matrices whose signatures the non-realizability arguments rely on, with
/// the signature each must have.
pub fn adjacency_checks() -> Vec<AdjacencyCheck> {
    let pad = |g: Graph, extra: usize| g.disjoint_union(&Graph::empty(extra).expect("small")).expect("small");
    let cases: Vec<(&str, Graph, Signature)> = vec![
        ("C5", catalog::cycle(5), Signature::new(3, 0, 2)),
        ("C7", catalog::cycle(7), Signature::new(3, 0, 4)),
        ("C9", catalog::cycle(9), Signature::new(5, 0, 4)),
        ("H7", catalog::h7(), Signature::new(4, 0, 3)),
        // non-edges of K7-C5 and K8-H7 as 7x7 and 8x8 patterns
        ("C5 + 2K1", pad(catalog::cycle(5), 2), Signature::new(3, 2, 2)),
        ("H7 + K1", pad(catalog::h7(), 1), Signature::new(4, 1, 3)),
        // |T| of a complete configuration
        ("K5", catalog::complete(5), Signature::new(1, 0, 4)),
        ("K7", catalog::complete(7), Signature::new(1, 0, 6)),
        ("K8", catalog::complete(8), Signature::new(1, 0, 7)),
    ];
    cases
        .into_iter()
        .map(|(name, g, expected)| {
            let m = SymMatrix::from_integers(&g.adjacency_matrix()).expect("adjacency is symmetric");
            let sig = signature::signature_exact(&m);
            AdjacencyCheck {
                name: name.to_string(),
                expected,
                signature: sig,
                passed: sig == expected,
            }
        })
        .collect()
}

/// Pattern lemmas checked by `verify-signatures`.
pub const LEMMA_PATTERNS: [PatternKind; 4] =
    [PatternKind::Cycle(5), PatternKind::Cycle(7), PatternKind::Cycle(9), PatternKind::H7];

pub fn run_signature_checks(trials: usize, seed: u64) -> Result<SignatureRunReport, signature::SignatureError> {
    let lemmas = LEMMA_PATTERNS
        .iter()
        .map(|&k| signature::verify_pattern_lemma(k, trials, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let adjacency_checks = adjacency_checks();
    let all_passed = lemmas.iter().all(|r| r.all_passed()) && adjacency_checks.iter().all(|c| c.passed);
    Ok(SignatureRunReport {
        seed,
        trials,
        lemmas,
        adjacency_checks,
        all_passed,
    })
}

pub fn cmd_verify_signatures(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if let (Some(path), Some(kind)) = (&a.matrix, a.pattern) {
        let text = read_input(path)?;
        let json: MatrixJson =
            serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let m = match AnyMatrix::try_from(json).map_err(|e| CliError::input(format!("{}: {e}", path.display())))? {
            AnyMatrix::Exact(m) => m,
            AnyMatrix::Float(m) => {
                let rows = m
                    .rows()
                    .into_iter()
                    .map(|r| {
                        r.into_iter()
                            .map(|x| BigRational::from_float(x).ok_or_else(|| CliError::input("non-finite entry")))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SymMatrix::from_rows(rows).map_err(|e| CliError::input(e.to_string()))?
            }
        };
        let check = signature::verify_matrix(kind, &m).map_err(|e| CliError::input(e.to_string()))?;
        write_output(a.report.as_deref(), &to_json(&check), out)?;
        return Ok(if check.passed() { EXIT_OK } else { EXIT_CHECK_FAILED });
    }
    let jobs = a.jobs.resolve().map_err(CliError::input)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::input(e.to_string()))?;
    let report = pool
        .install(|| run_signature_checks(a.trials as usize, a.seed))
        .map_err(|e| CliError::input(e.to_string()))?;
    write_output(a.report.as_deref(), &to_json(&report), out)?;
    Ok(if report.all_passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLinesReport {
    pub chirality: geometry::ChiralityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<geometry::RealizationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub passed: bool,
}

pub fn cmd_check_lines(a: &CheckLinesArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = read_input(&a.config)?;
    let mut cfg =
        LineConfig::from_json_str(&text).map_err(|e| CliError::input(format!("{}: {e}", a.config.display())))?;
    if let Some(t) = a.tolerance {
        if !(t > 0.0) {
            return Err(CliError::input("tolerance must be positive"));
        }
        cfg.tolerance = t;
    }
    let chirality = geometry::chirality_graph(&cfg);
    let (realization, error, passed) = if a.distances_only {
        (None, None, chirality.distances_ok)
    } else if !chirality.valid {
        let mut problems = Vec::new();
        if !chirality.distances_ok {
            problems.push("some pair is not at distance 1".to_string());
        }
        for [i, j] in &chirality.parallel_pairs {
            problems.push(format!("lines {i} and {j} are parallel"));
        }
        (None, Some(problems.join("; ")), false)
    } else {
        match geometry::check_realization(&cfg, cfg.tolerance) {
            Ok(r) => {
                let ok = r.all_passed();
                (Some(r), None, ok)
            }
            Err(e) => (None, Some(e.to_string()), false),
        }
    };
    let report = CheckLinesReport {
        chirality,
        realization,
        error,
        passed,
    };
    write_output(a.report.as_deref(), &to_json(&report), out)?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn cmd_gen_lower_bound(a: &GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = geometry::lower_bound_config(a.dim).map_err(|e| CliError::input(e.to_string()))?;
    write_output(a.output.as_deref(), &cfg.to_json(), out)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub vertices: usize,
    /// 1-based labels.
    pub edges: Vec<[usize; 2]>,
    pub graph6: String,
    pub canonical_code: String,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    catalog::catalog()
        .into_iter()
        .map(|e| CatalogEntry {
            vertices: e.graph.n(),
            edges: e.graph.edges().into_iter().map(|(u, v)| [u + 1, v + 1]).collect(),
            graph6: e.graph.to_string(),
            canonical_code: canonical_code(&e.graph).to_string(),
            name: e.name,
        })
        .collect()
}

pub fn cmd_catalog(a: &CatalogArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let entries = catalog_entries();
    let text = if a.json {
        to_json(&entries)
    } else {
        let mut s = String::new();
        for e in &entries {
            let edges: Vec<String> = e.edges.iter().map(|[u, v]| format!("{u}{v}")).collect();
            s.push_str(&format!(
                "{:<6} n={:<2} m={:<2} graph6={:<8} code={:<14} edges={{{}}}\n",
                e.name,
                e.vertices,
                e.edges.len(),
                e.graph6,
                e.canonical_code,
                edges.join(",")
            ));
        }
        s.trim_end().to_string()
    };
    write_output(None, &text, out)?;
    Ok(EXIT_OK)
}
