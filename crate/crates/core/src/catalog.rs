//! Named graphs used throughout the non-realizability argument.
//!
//! Edge lists below are written with 1-based labels exactly as in the
//! figures they come from; vertex `i` is stored internally as `i - 1`.
//! `Kn-X` denotes the complement of `X` (padded with isolated vertices) in
//! the complete graph `Kn`, so the vertices outside `X` are adjacent to all.

use serde::Serialize;

use crate::graph::Graph;

/// 1-based edges of H6.
pub const H6_EDGES: [(usize, usize); 7] = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (2, 6), (5, 6)];

/// 1-based edges of H7.
pub const H7_EDGES: [(usize, usize); 9] = [
    (1, 2),
    (2, 3),
    (3, 1),
    (1, 4),
    (2, 5),
    (3, 6),
    (4, 7),
    (5, 7),
    (6, 7),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedGraph {
    pub name: String,
    pub graph: Graph,
}

fn one_based(n: usize, edges: &[(usize, usize)]) -> Graph {
    let shifted: Vec<_> = edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
    Graph::from_edges(n, &shifted).expect("catalog edge list is valid")
}

pub fn complete(m: usize) -> Graph {
    Graph::complete(m).expect("catalog size is within range")
}

/// `C_n` on vertices `1..n` in cycle order.
pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
    one_based(n, &edges)
}

/// `K_{3,2}` with parts `{1,2,3}` and `{4,5}`.
pub fn k32() -> Graph {
    one_based(5, &[(1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5)])
}

pub fn h6() -> Graph {
    one_based(6, &H6_EDGES)
}

pub fn h7() -> Graph {
    one_based(7, &H7_EDGES)
}

/// Complement of `g` inside `K_m`, with `g` occupying vertices `1..=g.n()`.
pub fn complete_minus(m: usize, g: &Graph) -> Graph {
    assert!(g.n() <= m);
    let pad = Graph::empty(m - g.n()).expect("catalog size is within range");
    g.disjoint_union(&pad).expect("catalog size is within range").complement()
}

/// Every catalog entry, in a fixed order.
pub fn catalog() -> Vec<NamedGraph> {
    let mut out = Vec::new();
    let mut push = |name: String, graph: Graph| out.push(NamedGraph { name, graph });
    for m in 1..=8 {
        push(format!("K{m}"), complete(m));
    }
    push("K3,2".into(), k32());
    for n in 3..=7 {
        push(format!("C{n}"), cycle(n));
    }
    push("H6".into(), h6());
    push("H7".into(), h7());
    push("K6-C5".into(), complete_minus(6, &cycle(5)));
    push("K6-H6".into(), complete_minus(6, &h6()));
    push("K7-H7".into(), complete_minus(7, &h7()));
    push("K7-C5".into(), complete_minus(7, &cycle(5)));
    push("K7-H6".into(), complete_minus(7, &h6()));
    push("K8-H7".into(), complete_minus(8, &h7()));
    out
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !matches!(c, '_' | '{' | '}' | ' ' | '₍' | '₎'))
        .map(|c| match c {
            '\\' | '∖' => '-',
            'k' => 'K',
            'c' => 'C',
            'h' => 'H',
            _ => c,
        })
        .collect()
}

/// Looks up a catalog entry. Accepts `K6-C5`, `K6\C5`, `K_{3,2}` and similar
/// spellings.
pub fn lookup(name: &str) -> Option<Graph> {
    let key = normalize(name);
    catalog().into_iter().find(|e| e.name == key).map(|e| e.graph)
}
