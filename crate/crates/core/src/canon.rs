//! Canonical labeling.
//!
//! The canonical code of a graph is its pair-slot bitset after the relabeling
//! that makes the slot sequence (slot 0 first) lexicographically smallest.
//! Because slot `v(v-1)/2 + u` only involves positions `<= v`, fixing the
//! vertices at positions `0..p` fixes a prefix of the code. [`canonical_form`]
//! places vertices one position at a time, keeps only the candidates whose
//! new column is minimal, prunes branches whose prefix is already larger than
//! the best leaf, and skips candidates equivalent to an explored sibling
//! under automorphisms fixing the placed prefix (twin transpositions plus
//! automorphisms discovered from leaves with equal codes).

use std::cmp::Ordering;
use std::fmt;

use crate::graph::{full_set, Graph, VertexSet, MAX_VERTICES};

/// Isomorphism-class identifier: vertex count plus canonical edge bitset.
///
/// Ordering is by vertex count, then lexicographic over the slot sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalCode {
    n: u8,
    bits: u128,
}

impl CanonicalCode {
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Canonical edge bitset (slot `s` at bit `s`).
    pub fn bits(&self) -> u128 {
        self.bits
    }

    /// The canonical representative.
    pub fn graph(&self) -> Graph {
        Graph::from_edge_bits(self.n(), self.bits).expect("canonical code is a valid bitset")
    }

    #[inline]
    fn lex_key(&self) -> u128 {
        self.bits.reverse_bits()
    }
}

impl Ord for CanonicalCode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then(self.lex_key().cmp(&other.lex_key()))
    }
}

impl PartialOrd for CanonicalCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode(n={}, bits={:#x})", self.n, self.bits)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:x}", self.n, self.bits)
    }
}

/// Canonical code together with a relabeling that achieves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub code: CanonicalCode,
    /// `g.permute(&witness)` is the canonical graph.
    pub witness: Vec<usize>,
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    let mut s = Search::new(g);
    if n > 0 {
        let rel = [0; MAX_VERTICES];
        s.dfs(0, full_set(n), &rel);
    }
    let mut witness = vec![0; n];
    for (pos, &v) in s.best_order[..n].iter().enumerate() {
        witness[v as usize] = pos;
    }
    let code = code_from_cols(n, &s.best_cols);
    debug_assert_eq!(g.permute(&witness).unwrap().edge_bits(), code);
    CanonicalForm {
        code: CanonicalCode { n: n as u8, bits: code },
        witness,
    }
}

/// Canonical code only.
pub fn canonical_code(g: &Graph) -> CanonicalCode {
    let n = g.n();
    let mut s = Search::new(g);
    if n > 0 {
        s.dfs(0, full_set(n), &[0; MAX_VERTICES]);
    }
    CanonicalCode {
        n: n as u8,
        bits: code_from_cols(n, &s.best_cols),
    }
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.n() == h.n()
        && g.edge_count() == h.edge_count()
        && g.degree_multiset() == h.degree_multiset()
        && canonical_code(g) == canonical_code(h)
}

/// Minimum code over all `n!` relabelings, by exhaustive enumeration.
///
/// Independent of [`canonical_form`]; intended as a test oracle.
/// Panics if `g` has more than 8 vertices.
pub fn canonical_form_brute_force(g: &Graph) -> CanonicalForm {
    let n = g.n();
    assert!(n <= 8, "brute-force canonical form is limited to 8 vertices");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = CanonicalForm {
        code: CanonicalCode {
            n: n as u8,
            bits: g.edge_bits(),
        },
        witness: perm.clone(),
    };
    let mut consider = |perm: &[usize]| {
        let code = CanonicalCode {
            n: n as u8,
            bits: g.permute(perm).unwrap().edge_bits(),
        };
        if code < best.code {
            best = CanonicalForm {
                code,
                witness: perm.to_vec(),
            };
        }
    };
    // Heap's algorithm, iterative form.
    let mut c = vec![0usize; n];
    consider(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            consider(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Assembles the code from per-position columns. Column `p` holds the
/// adjacency of position `p` to positions `0..p`, position 0 in the most
/// significant of its `p` bits.
fn code_from_cols(n: usize, cols: &[VertexSet; MAX_VERTICES]) -> u128 {
    let mut bits = 0u128;
    for (p, &col) in cols.iter().enumerate().take(n).skip(1) {
        let base = p * (p - 1) / 2;
        let reversed = (col.reverse_bits() >> (16 - p)) as u128;
        bits |= reversed << base;
    }
    bits
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    order: [u8; MAX_VERTICES],
    cols: [VertexSet; MAX_VERTICES],
    best_order: [u8; MAX_VERTICES],
    best_cols: [VertexSet; MAX_VERTICES],
    have_best: bool,
    autos: Vec<[u8; MAX_VERTICES]>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph) -> Self {
        Search {
            g,
            n: g.n(),
            order: [0; MAX_VERTICES],
            cols: [0; MAX_VERTICES],
            best_order: [0; MAX_VERTICES],
            best_cols: [0; MAX_VERTICES],
            have_best: false,
            autos: Vec::new(),
        }
    }

    fn prefix_cmp(&self, p: usize) -> Ordering {
        if !self.have_best {
            return Ordering::Less;
        }
        self.cols[1..p].cmp(&self.best_cols[1..p])
    }

    /// `rel[w]` is the column vertex `w` would get at position `p`.
    fn dfs(&mut self, p: usize, unplaced: VertexSet, rel: &[VertexSet; MAX_VERTICES]) {
        if p == self.n {
            self.leaf();
            return;
        }
        let state = self.prefix_cmp(p);
        if state == Ordering::Greater {
            return;
        }
        let mut min = VertexSet::MAX;
        let mut rest = unplaced;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            min = min.min(rel[w]);
        }
        if state == Ordering::Equal && min > self.best_cols[p] {
            return;
        }
        let mut candidates: VertexSet = 0;
        let mut rest = unplaced;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if rel[w] == min {
                candidates |= 1 << w;
            }
        }

        let mut explored: VertexSet = 0;
        let mut rest = candidates;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if explored != 0 && self.equivalent_to_explored(p, unplaced, explored, w) {
                continue;
            }
            self.order[p] = w as u8;
            self.cols[p] = min;
            let row = self.g.neighbors(w);
            let mut next = [0; MAX_VERTICES];
            let mut others = unplaced & !(1 << w);
            let remaining = others;
            while others != 0 {
                let x = others.trailing_zeros() as usize;
                others &= others - 1;
                next[x] = (rel[x] << 1) | (row >> x & 1);
            }
            self.dfs(p + 1, remaining, &next);
            explored |= 1 << w;
        }
    }

    fn leaf(&mut self) {
        let n = self.n;
        let ord = if self.have_best {
            self.cols[1..n].cmp(&self.best_cols[1..n])
        } else {
            Ordering::Less
        };
        match ord {
            Ordering::Less => {
                self.best_cols = self.cols;
                self.best_order = self.order;
                self.have_best = true;
            }
            Ordering::Equal => {
                // best_order[i] -> order[i] is an automorphism
                let mut map = [0u8; MAX_VERTICES];
                for i in 0..n {
                    map[self.best_order[i] as usize] = self.order[i];
                }
                if (0..n).any(|v| map[v] as usize != v) {
                    self.autos.push(map);
                }
            }
            Ordering::Greater => {}
        }
    }

    /// Whether `w` lies in the orbit of an explored sibling under the known
    /// automorphisms that fix positions `0..p`.
    fn equivalent_to_explored(&self, p: usize, unplaced: VertexSet, explored: VertexSet, w: usize) -> bool {
        let prefix = &self.order[..p];
        let fixing: Vec<&[u8; MAX_VERTICES]> = self
            .autos
            .iter()
            .filter(|a| prefix.iter().all(|&v| a[v as usize] == v))
            .collect();
        let mut reach = explored;
        loop {
            let mut grown = reach;
            let mut rest = reach;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                for a in &fixing {
                    grown |= 1 << a[v];
                }
                let mut cand = unplaced & !grown;
                while cand != 0 {
                    let u = cand.trailing_zeros() as usize;
                    cand &= cand - 1;
                    if self.twins(u, v) {
                        grown |= 1 << u;
                    }
                }
            }
            if grown >> w & 1 == 1 {
                return true;
            }
            if grown == reach {
                return false;
            }
            reach = grown;
        }
    }

    /// Transposing `u` and `v` is an automorphism.
    #[inline]
    fn twins(&self, u: usize, v: usize) -> bool {
        let nu = self.g.neighbors(u) & !(1 << v);
        let nv = self.g.neighbors(v) & !(1 << u);
        nu == nv
    }
}
