//! Level-by-level generation of colorings with no forbidden subgraph.
//!
//! Level `k` holds one canonical representative of every isomorphism class
//! of graphs on `k` vertices that the family does not forbid. Level `k + 1`
//! is obtained by attaching a new vertex to every representative in all
//! `2^k` possible ways, discarding forbidden extensions (only subsets through
//! the new vertex need checking, since the parent is clean), and
//! deduplicating the survivors by canonical code. Every clean graph on
//! `k + 1` vertices restricts to a clean graph on `k` vertices, so nothing is
//! missed.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_code, CanonicalCode};
use crate::forbidden::{EntryDescription, ForbiddenFamily};
use crate::graph::{Graph, VertexSet, MAX_VERTICES};

pub const DEFAULT_MAX_SURVIVORS: usize = 50_000_000;
pub const BRUTE_FORCE_MAX_N: usize = 7;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("n_max must be between 1 and {MAX_VERTICES}, got {0}")]
    BadN(usize),
    #[error("level {k} has {count} survivors, above the cap of {cap}")]
    SurvivorCap {
        k: usize,
        count: usize,
        cap: usize,
        partial: Box<SearchReport>,
    },
    #[error("brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {0}")]
    BruteForceTooLarge(usize),
    #[error("building worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Canonical representatives of the clean graphs on `k` vertices, sorted by
/// code with no repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleLevel {
    pub k: usize,
    pub graphs: Vec<CanonicalCode>,
}

impl FeasibleLevel {
    /// The single graph on one vertex.
    pub fn first() -> Self {
        let k1 = Graph::empty(1).expect("one vertex");
        FeasibleLevel {
            k: 1,
            graphs: vec![canonical_code(&k1)],
        }
    }

    pub fn count(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub k: usize,
    /// Extensions generated from level `k - 1`.
    pub expanded: u64,
    /// Extensions that passed the forbidden check.
    pub kept: u64,
    /// Isomorphism classes among the kept extensions.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelTiming {
    pub k: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// Level `k` is empty: every coloring of `K_k` is forbidden.
    EmptyAt { k: usize },
    /// Level `k = n_max` still has `count` survivors.
    FeasibleSurvivors { k: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub family: Vec<EntryDescription>,
    pub n_max: usize,
    pub levels: Vec<LevelStats>,
    pub timings: Vec<LevelTiming>,
    pub verdict: Verdict,
    /// graph6 strings of the last non-empty level, in code order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<String>>,
}

impl SearchReport {
    /// The report with wall-clock data cleared, for byte comparisons.
    pub fn without_timings(&self) -> SearchReport {
        SearchReport {
            timings: Vec::new(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub jobs: usize,
    pub max_survivors: usize,
    pub witnesses: bool,
    /// Emit `level=.. expanded=..` lines on standard error.
    pub progress: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            jobs: 1,
            max_survivors: DEFAULT_MAX_SURVIVORS,
            witnesses: false,
            progress: false,
        }
    }
}

/// Result of expanding one level.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub level: FeasibleLevel,
    pub expanded: u64,
    pub kept: u64,
}

/// All clean one-vertex extensions of `parent`, canonicalized and
/// deduplicated. Also returns how many extensions passed the filter.
fn extend_graph(parent: &Graph, fam: &ForbiddenFamily) -> (Vec<CanonicalCode>, u64) {
    let k = parent.n();
    let mut out = Vec::new();
    let mut kept = 0;
    for mask in 0..(1u32 << k) {
        let child = parent.extend(mask as VertexSet).expect("k < 16");
        if !fam.is_forbidden_incremental(&child, k) {
            kept += 1;
            out.push(canonical_code(&child));
        }
    }
    out.sort_unstable();
    out.dedup();
    (out, kept)
}

/// Expands `level` by one vertex on the current rayon pool.
pub fn extend_level(level: &FeasibleLevel, fam: &ForbiddenFamily) -> Expansion {
    assert!(level.k < MAX_VERTICES, "cannot extend past {MAX_VERTICES} vertices");
    let per_parent: Vec<(Vec<CanonicalCode>, u64)> = level
        .graphs
        .par_iter()
        .map(|code| extend_graph(&code.graph(), fam))
        .collect();
    let kept = per_parent.iter().map(|(_, kept)| kept).sum();
    let mut graphs: Vec<CanonicalCode> = per_parent.into_iter().flat_map(|(codes, _)| codes).collect();
    graphs.par_sort_unstable();
    graphs.dedup();
    Expansion {
        level: FeasibleLevel { k: level.k + 1, graphs },
        expanded: (level.count() as u64) << level.k,
        kept,
    }
}

/// Like [`extend_level`] but on a dedicated pool of `jobs` workers.
pub fn extend_level_with_jobs(level: &FeasibleLevel, fam: &ForbiddenFamily, jobs: usize) -> Result<Expansion, SearchError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    Ok(pool.install(|| extend_level(level, fam)))
}

/// Runs the level pipeline from one vertex up to `n_max` vertices, stopping
/// early at the first empty level.
pub fn run_search(fam: &ForbiddenFamily, n_max: usize, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    let (report, _) = run_search_levels(fam, n_max, opts)?;
    Ok(report)
}

/// [`run_search`] that also hands back every computed level.
pub fn run_search_levels(
    fam: &ForbiddenFamily,
    n_max: usize,
    opts: &SearchOptions,
) -> Result<(SearchReport, Vec<FeasibleLevel>), SearchError> {
    if !(1..=MAX_VERTICES).contains(&n_max) {
        return Err(SearchError::BadN(n_max));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.max(1)).build()?;
    let start = Instant::now();
    let first = FeasibleLevel::first();
    let mut report = SearchReport {
        family: fam.describe(),
        n_max,
        levels: vec![LevelStats {
            k: 1,
            expanded: 1,
            kept: 1,
            count: 1,
        }],
        timings: vec![LevelTiming { k: 1, seconds: 0.0 }],
        verdict: Verdict::FeasibleSurvivors { k: 1, count: 1 },
        witnesses: None,
    };
    let mut levels = vec![first];
    progress(opts, 1, 1, 1, 1, start);

    while levels.last().map(|l| l.k).unwrap_or(0) < n_max {
        let current = levels.last().expect("at least one level");
        if current.is_empty() {
            break;
        }
        let level_start = Instant::now();
        let exp = pool.install(|| extend_level(current, fam));
        let k = exp.level.k;
        let count = exp.level.count();
        report.levels.push(LevelStats {
            k,
            expanded: exp.expanded,
            kept: exp.kept,
            count,
        });
        report.timings.push(LevelTiming {
            k,
            seconds: level_start.elapsed().as_secs_f64(),
        });
        progress(opts, k, exp.expanded, exp.kept, count, start);
        if count > opts.max_survivors {
            report.verdict = Verdict::FeasibleSurvivors { k, count };
            return Err(SearchError::SurvivorCap {
                k,
                count,
                cap: opts.max_survivors,
                partial: Box::new(report),
            });
        }
        levels.push(exp.level);
    }

    let last = levels.last().expect("at least one level");
    report.verdict = if last.is_empty() {
        Verdict::EmptyAt { k: last.k }
    } else {
        Verdict::FeasibleSurvivors {
            k: last.k,
            count: last.count(),
        }
    };
    if opts.witnesses {
        let survivors = levels.iter().rev().find(|l| !l.is_empty()).expect("level 1 is non-empty");
        report.witnesses = Some(survivors.graphs.iter().map(|c| c.graph().to_string()).collect());
    }
    Ok((report, levels))
}

fn progress(opts: &SearchOptions, k: usize, expanded: u64, kept: u64, deduped: usize, start: Instant) {
    if opts.progress {
        let mut err = std::io::stderr().lock();
        let _ = writeln!(
            err,
            "level={k} expanded={expanded} kept={kept} deduped={deduped} elapsed={:.3}",
            start.elapsed().as_secs_f64()
        );
    }
}

/// Whether every labeled coloring of `K_n` is forbidden, by direct
/// enumeration of all `2^(n(n-1)/2)` graphs.
pub fn brute_force_check(fam: &ForbiddenFamily, n: usize) -> Result<bool, SearchError> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(SearchError::BruteForceTooLarge(n));
    }
    let slots = crate::graph::slot_count(n);
    Ok((0u128..1 << slots).all(|bits| {
        let g = Graph::from_edge_bits(n, bits).expect("bits fit");
        fam.is_forbidden(&g)
    }))
}

/// Canonical codes of all clean graphs on `n` vertices, by direct
/// enumeration, full (non-incremental) filtering and deduplication.
pub fn brute_force_level(fam: &ForbiddenFamily, n: usize) -> Result<FeasibleLevel, SearchError> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(SearchError::BruteForceTooLarge(n));
    }
    let slots = crate::graph::slot_count(n);
    let mut graphs: Vec<CanonicalCode> = (0u128..1 << slots)
        .into_par_iter()
        .filter_map(|bits| {
            let g = Graph::from_edge_bits(n, bits).expect("bits fit");
            (!fam.is_forbidden(&g)).then(|| canonical_code(&g))
        })
        .collect();
    graphs.par_sort_unstable();
    graphs.dedup();
    Ok(FeasibleLevel { k: n, graphs })
}
