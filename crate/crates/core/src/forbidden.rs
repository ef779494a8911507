//! Forbidden monochromatic induced subgraphs.
//!
//! A graph is read as a 2-coloring of the complete graph: edges are red,
//! non-edges blue. A family entry with scope `red` is forbidden as an induced
//! subgraph of the graph, `blue` as an induced subgraph of its complement,
//! and `both` in either.
//!
//! Membership tests go through per-size lookup tables holding every labeled
//! copy of every pattern (and of the complements of blue-scoped patterns).
//! The subsets of a host graph are walked in increasing vertex order, and a
//! partial subset is abandoned as soon as the graph it induces is not the
//! prefix of some labeled copy.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_code, CanonicalCode};
use crate::catalog;
use crate::graph::{full_set, slot_count, Graph, GraphError, GraphJson, VertexSet};

pub const MIN_PATTERN_VERTICES: usize = 2;
pub const MAX_PATTERN_VERTICES: usize = 8;

/// Largest slot count kept as a dense bitmap (7 vertices).
const DENSE_SLOTS: usize = 21;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("reading family file: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing family JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown catalog graph {0:?}")]
    UnknownName(String),
    #[error("pattern has {0} vertices; patterns must have {MIN_PATTERN_VERTICES} to {MAX_PATTERN_VERTICES}")]
    PatternSize(usize),
    #[error("family has no entries")]
    Empty,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Both,
    Red,
    Blue,
}

impl Scope {
    fn red(self) -> bool {
        matches!(self, Scope::Both | Scope::Red)
    }

    fn blue(self) -> bool {
        matches!(self, Scope::Both | Scope::Blue)
    }
}

#[derive(Debug, Clone)]
pub struct FamilyEntry {
    pub name: Option<String>,
    pub pattern: Graph,
    pub scope: Scope,
    pub code: CanonicalCode,
}

impl FamilyEntry {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.pattern.to_string())
    }
}

/// Serializable summary of one entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDescription {
    pub pattern: String,
    pub graph6: String,
    pub vertices: usize,
    pub scope: Scope,
}

#[derive(Debug, Clone)]
enum Table {
    Dense(Vec<u64>),
    Sparse(HashSet<u32>),
}

impl Table {
    fn new(slots: usize) -> Self {
        if slots <= DENSE_SLOTS {
            Table::Dense(vec![0; ((1usize << slots) / 64).max(1)])
        } else {
            Table::Sparse(HashSet::new())
        }
    }

    fn insert(&mut self, bits: u32) {
        match self {
            Table::Dense(v) => v[(bits >> 6) as usize] |= 1 << (bits & 63),
            Table::Sparse(s) => {
                s.insert(bits);
            }
        }
    }

    #[inline]
    fn contains(&self, bits: u32) -> bool {
        match self {
            Table::Dense(v) => v[(bits >> 6) as usize] >> (bits & 63) & 1 == 1,
            Table::Sparse(s) => s.contains(&bits),
        }
    }
}

/// Labeled copies of all patterns of one size, plus their prefixes.
#[derive(Debug, Clone)]
struct SizeTable {
    k: usize,
    /// `prefixes[j]` holds the graphs induced on the first `j` vertices of
    /// some labeled copy; `prefixes[k]` holds the copies themselves.
    prefixes: Vec<Table>,
}

impl SizeTable {
    fn build(k: usize, copies: &HashSet<u32>) -> Self {
        let mut prefixes: Vec<Table> = (0..=k).map(|j| Table::new(slot_count(j))).collect();
        for &bits in copies {
            for (j, table) in prefixes.iter_mut().enumerate() {
                let width = slot_count(j);
                table.insert(bits & ((1u64 << width) - 1) as u32);
            }
        }
        SizeTable { k, prefixes }
    }
}

#[derive(Debug, Clone)]
pub struct ForbiddenFamily {
    entries: Vec<FamilyEntry>,
    tables: Vec<SizeTable>,
}

impl ForbiddenFamily {
    pub fn new(entries: Vec<(Option<String>, Graph, Scope)>) -> Result<Self, FamilyError> {
        if entries.is_empty() {
            return Err(FamilyError::Empty);
        }
        let mut copies: BTreeMap<usize, HashSet<u32>> = BTreeMap::new();
        let mut built = Vec::with_capacity(entries.len());
        for (name, pattern, scope) in entries {
            let k = pattern.n();
            if !(MIN_PATTERN_VERTICES..=MAX_PATTERN_VERTICES).contains(&k) {
                return Err(FamilyError::PatternSize(k));
            }
            let set = copies.entry(k).or_default();
            if scope.red() {
                labeled_copies(&pattern, set);
            }
            if scope.blue() {
                labeled_copies(&pattern.complement(), set);
            }
            built.push(FamilyEntry {
                name,
                code: canonical_code(&pattern),
                pattern,
                scope,
            });
        }
        let tables = copies.iter().map(|(&k, set)| SizeTable::build(k, set)).collect();
        Ok(ForbiddenFamily {
            entries: built,
            tables,
        })
    }

    /// K4, K3,2, K6-C5, K6-H6 and K7-H7, each forbidden in both colors.
    pub fn default_family() -> Self {
        let names = ["K4", "K3,2", "K6-C5", "K6-H6", "K7-H7"];
        let entries = names
            .iter()
            .map(|&name| {
                let g = catalog::lookup(name).expect("default pattern is in the catalog");
                (Some(name.to_string()), g, Scope::Both)
            })
            .collect();
        Self::new(entries).expect("default family is valid")
    }

    /// No red `K_s` and no blue `K_t`; its feasible colorings are the
    /// Ramsey `(s, t)` graphs.
    pub fn ramsey(s: usize, t: usize) -> Result<Self, FamilyError> {
        Self::new(vec![
            (Some(format!("K{s}")), Graph::complete(s)?, Scope::Red),
            (Some(format!("K{t}")), Graph::complete(t)?, Scope::Blue),
        ])
    }

    pub fn from_json_str(s: &str) -> Result<Self, FamilyError> {
        let raw: Vec<EntryJson> = serde_json::from_str(s)?;
        let mut entries = Vec::with_capacity(raw.len());
        for e in raw {
            let (name, g) = match e.pattern {
                PatternJson::Name(name) => {
                    let g = catalog::lookup(&name).ok_or_else(|| FamilyError::UnknownName(name.clone()))?;
                    (Some(name), g)
                }
                PatternJson::Graph(j) => (None, Graph::try_from(j)?),
            };
            entries.push((name, g, e.scope));
        }
        Self::new(entries)
    }

    /// Loads a family file; the literal path `default` selects the default
    /// family.
    pub fn load(path: &Path) -> Result<Self, FamilyError> {
        if path.as_os_str() == "default" {
            return Ok(Self::default_family());
        }
        Self::from_json_str(&fs::read_to_string(path)?)
    }

    pub fn entries(&self) -> &[FamilyEntry] {
        &self.entries
    }

    /// Whether every entry is forbidden in both colors.
    pub fn is_color_symmetric(&self) -> bool {
        self.entries.iter().all(|e| e.scope == Scope::Both)
    }

    pub fn describe(&self) -> Vec<EntryDescription> {
        self.entries
            .iter()
            .map(|e| EntryDescription {
                pattern: e.label(),
                graph6: e.pattern.to_string(),
                vertices: e.pattern.n(),
                scope: e.scope,
            })
            .collect()
    }

    /// Whether some entry occurs induced in `g` (red scopes) or in its
    /// complement (blue scopes).
    pub fn is_forbidden(&self, g: &Graph) -> bool {
        let n = g.n();
        self.tables
            .iter()
            .filter(|t| t.k <= n)
            .any(|t| matches_any(g.rows(), t, full_set(n), t.k, 0, 0, 0, None))
    }

    /// Same answer as [`Self::is_forbidden`] provided `g` minus `v_new` is
    /// not forbidden; only subsets containing `v_new` are examined.
    pub fn is_forbidden_incremental(&self, g: &Graph, v_new: usize) -> bool {
        let n = g.n();
        assert!(v_new < n, "vertex {v_new} out of range");
        if v_new == n - 1 {
            return self.forbidden_through_last(g);
        }
        // Move v_new to the end, keeping the other vertices in order.
        let perm: Vec<usize> = (0..n)
            .map(|v| match v.cmp(&v_new) {
                std::cmp::Ordering::Less => v,
                std::cmp::Ordering::Equal => n - 1,
                std::cmp::Ordering::Greater => v - 1,
            })
            .collect();
        let h = g.permute(&perm).expect("valid permutation");
        self.forbidden_through_last(&h)
    }

    fn forbidden_through_last(&self, g: &Graph) -> bool {
        let n = g.n();
        let last = n - 1;
        let pool = full_set(last);
        self.tables
            .iter()
            .filter(|t| t.k <= n)
            .any(|t| matches_any(g.rows(), t, pool, t.k - 1, 0, 0, 0, Some(last)))
    }
}

/// Depth-first walk over subsets of `pool` in increasing vertex order.
/// `chosen` (of size `depth`) induces the labeled graph `bits`. When `last`
/// is set, that vertex is appended after `remaining` more picks.
#[allow(clippy::too_many_arguments)]
fn matches_any(
    rows: &[VertexSet],
    table: &SizeTable,
    pool: VertexSet,
    remaining: usize,
    depth: usize,
    chosen: VertexSet,
    bits: u32,
    last: Option<usize>,
) -> bool {
    if remaining == 0 {
        return match last {
            None => table.prefixes[depth].contains(bits),
            Some(v) => {
                let col = crate::graph::compress(rows[v], chosen) as u32;
                table.prefixes[depth + 1].contains(bits | col << slot_count(depth))
            }
        };
    }
    let mut rest = pool;
    while rest.count_ones() as usize >= remaining {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let col = crate::graph::compress(rows[v], chosen) as u32;
        let next = bits | col << slot_count(depth);
        if table.prefixes[depth + 1].contains(next)
            && matches_any(rows, table, rest, remaining - 1, depth + 1, chosen | 1 << v, next, last)
        {
            return true;
        }
    }
    false
}

fn labeled_copies(pattern: &Graph, out: &mut HashSet<u32>) {
    let k = pattern.n();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut push = |perm: &[usize]| {
        out.insert(pattern.permute(perm).expect("valid permutation").edge_bits() as u32);
    };
    push(&perm);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            push(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryJson {
    pattern: PatternJson,
    scope: Scope,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PatternJson {
    Name(String),
    Graph(GraphJson),
}

/// Vertex set of some induced copy of `pattern` in `g`, if any.
///
/// Walks all subsets of the right size, filters by edge count and degree
/// multiset, then compares canonical codes.
pub fn find_induced(g: &Graph, pattern: &Graph) -> Option<VertexSet> {
    let (n, k) = (g.n(), pattern.n());
    if k > n {
        return None;
    }
    if k == 0 {
        return Some(0);
    }
    let edges = pattern.edge_count();
    let degrees = pattern.degree_multiset();
    let code = canonical_code(pattern);
    let limit = 1u32 << n;
    // Gosper's hack over k-subsets of 0..n
    let mut subset: u32 = (1 << k) - 1;
    while subset < limit {
        let s = subset as VertexSet;
        let h = g.induced_subgraph(s);
        if h.edge_count() == edges && h.degree_multiset() == degrees && canonical_code(&h) == code {
            return Some(s);
        }
        let low = subset & subset.wrapping_neg();
        let ripple = subset + low;
        subset = (((ripple ^ subset) >> 2) / low) | ripple;
    }
    None
}

pub fn contains_induced(g: &Graph, pattern: &Graph) -> bool {
    find_induced(g, pattern).is_some()
}

/// Reference check built on [`contains_induced`], entry by entry.
pub fn is_forbidden_reference(g: &Graph, fam: &ForbiddenFamily) -> bool {
    let complement = g.complement();
    fam.entries().iter().any(|e| {
        (e.scope.red() && contains_induced(g, &e.pattern)) || (e.scope.blue() && contains_induced(&complement, &e.pattern))
    })
}
