//! Shared helpers and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use serde_json::Value;
use touching_lines::{Graph, Scope};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_touching-lines")
}

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

/// Runs the binary with `args`, feeding `stdin` if given.
pub fn run_cli(args: &[&str], stdin: Option<&str>) -> Output {
    use std::io::Write;
    let mut child = Command::new(bin())
        .args(args)
        .env_remove("RAMSEY_JOBS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("binary finishes")
}

fn load_schema(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    let mut v: Value = serde_json::from_str(&text).unwrap();
    inline_refs(&mut v);
    v
}

/// Replaces `{"$ref": "file.schema.json"}` with that file's contents.
fn inline_refs(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("$id");
            if let Some(Value::String(target)) = map.get("$ref").cloned() {
                let mut inner = load_schema(&target);
                if let Value::Object(m) = &mut inner {
                    m.remove("$schema");
                }
                *v = inner;
                return;
            }
            map.values_mut().for_each(inline_refs);
        }
        Value::Array(items) => items.iter_mut().for_each(inline_refs),
        _ => {}
    }
}

/// Panics with every violation if `instance` does not match the schema.
pub fn assert_schema(schema: &str, instance: &Value) {
    let schema_value = load_schema(schema);
    let validator = jsonschema::validator_for(&schema_value).unwrap_or_else(|e| panic!("{schema}: {e}"));
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{schema}: {errors:#?}");
}

/// Random graph on `0..=max_n` vertices.
pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let slots = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), slots).prop_map(move |bits| {
            let mut word = 0u128;
            for (i, b) in bits.into_iter().enumerate() {
                word |= (b as u128) << i;
            }
            Graph::from_edge_bits(n, word).unwrap()
        })
    })
}

pub fn arb_graph_with_perm(min_n: usize, max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_graph(min_n, max_n).prop_flat_map(|g| {
        let perm = Just((0..g.n()).collect::<Vec<_>>()).prop_shuffle();
        (Just(g), perm)
    })
}

/// Every ordering of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Adjacency matrix as plain booleans, independent of the library's bitsets.
pub fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect()
}

/// Whether the vertices `sub` (in order) induce exactly `pattern` under
/// `sub[i] -> i`.
fn induces(adj: &[Vec<bool>], sub: &[usize], pattern: &[Vec<bool>]) -> bool {
    let m = sub.len();
    (0..m).all(|i| (i + 1..m).all(|j| adj[sub[i]][sub[j]] == pattern[i][j]))
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            go(v + 1, n, m, cur, out);
            cur.pop();
        }
    }
    go(0, n, m, &mut cur, &mut out);
    out
}

/// Induced containment by trying every subset and every bijection.
pub fn naive_contains_induced(g: &Graph, pattern: &Graph) -> bool {
    let m = pattern.n();
    if m > g.n() {
        return false;
    }
    let adj = matrix(g);
    let pat = matrix(pattern);
    let perms = permutations(m);
    subsets(g.n(), m).iter().any(|s| {
        perms.iter().any(|p| {
            let ordered: Vec<usize> = p.iter().map(|&i| s[i]).collect();
            induces(&adj, &ordered, &pat)
        })
    })
}

/// Forbidden check built on [`naive_contains_induced`].
pub fn naive_is_forbidden(g: &Graph, family: &[(Graph, Scope)]) -> bool {
    let comp = g.complement();
    family.iter().any(|(p, scope)| {
        let red = matches!(scope, Scope::Both | Scope::Red) && naive_contains_induced(g, p);
        red || (matches!(scope, Scope::Both | Scope::Blue) && naive_contains_induced(&comp, p))
    })
}

/// Minimum slot sequence over all relabelings, computed from scratch.
pub fn naive_canonical_bits(g: &Graph) -> Vec<bool> {
    let n = g.n();
    let adj = matrix(g);
    permutations(n)
        .into_iter()
        .map(|p| {
            // position i holds vertex p[i]; slots ordered by (v, u) with u < v
            let mut seq = Vec::with_capacity(n * n.saturating_sub(1) / 2);
            for v in 1..n {
                for u in 0..v {
                    seq.push(adj[p[u]][p[v]]);
                }
            }
            seq
        })
        .min()
        .unwrap_or_default()
}

/// Isomorphism classes of a list of graphs, by [`naive_canonical_bits`].
pub fn naive_classes<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> HashSet<Vec<bool>> {
    graphs.into_iter().map(naive_canonical_bits).collect()
}

pub fn default_patterns() -> Vec<(Graph, Scope)> {
    ["K4", "K3,2", "K6-C5", "K6-H6", "K7-H7"]
        .iter()
        .map(|n| (touching_lines::catalog::lookup(n).unwrap(), Scope::Both))
        .collect()
}

pub fn r34_patterns() -> Vec<(Graph, Scope)> {
    vec![(Graph::complete(3).unwrap(), Scope::Red), (Graph::complete(4).unwrap(), Scope::Blue)]
}
