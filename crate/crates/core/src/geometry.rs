//! Directed lines, pairwise distances and chirality.
//!
//! A directed line is `R x + y` with unit direction `x` and base point `y`.
//! For two non-parallel lines in R^3 the signed quantity
//! `<x_a × x_b, y_a - y_b>` equals the distance times `|x_a × x_b|` up to
//! sign, and its sign is the chirality of the pair.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphJson, MAX_VERTICES};
use crate::signature::{self, Signature, SignatureError, SymMatrix};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Below this, `|x_a × x_b|` counts as parallel and `<x_a × x_b, Δy>` as
/// coplanar.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("lines must live in dimension at least 2, got {0}")]
    BadDimension(usize),
    #[error("base has dimension {base} but direction has dimension {dir}")]
    DimensionMismatch { base: usize, dir: usize },
    #[error("direction vector is zero or not finite")]
    ZeroDirection,
    #[error("line {index} lives in dimension {got}, configuration is {expected}-dimensional")]
    WrongDimension { index: usize, got: usize, expected: usize },
    #[error("chirality is only defined in dimension 3, got {0}")]
    ChiralityUndefined(usize),
    #[error("lines {0} and {1} are parallel")]
    Parallel(usize, usize),
    #[error("lines {0} and {1} are coplanar")]
    Coplanar(usize, usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("need at least {need} lines, got {got}")]
    TooFewLines { need: usize, got: usize },
    #[error("lower-bound construction needs n >= 3, got {0}")]
    LowerBoundTooSmall(usize),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

type Vector = Vec<f64>;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &[f64]) -> Vector {
    x.iter().zip(y).map(|(xi, yi)| alpha * xi + yi).collect()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `R * dir + base`, `dir` of unit length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectedLine {
    base: Vector,
    dir: Vector,
}

impl DirectedLine {
    /// Normalizes `dir`.
    pub fn new(base: Vector, dir: Vector) -> Result<Self, GeometryError> {
        if base.len() != dir.len() {
            return Err(GeometryError::DimensionMismatch {
                base: base.len(),
                dir: dir.len(),
            });
        }
        if base.len() < 2 {
            return Err(GeometryError::BadDimension(base.len()));
        }
        let len = norm(&dir);
        if !(len > 0.0 && len.is_finite()) {
            return Err(GeometryError::ZeroDirection);
        }
        let dir = dir.iter().map(|x| x / len).collect();
        Ok(DirectedLine { base, dir })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn dir(&self) -> &[f64] {
        &self.dir
    }

    /// Same line, opposite direction.
    pub fn reversed(&self) -> Self {
        DirectedLine {
            base: self.base.clone(),
            dir: self.dir.iter().map(|x| -x).collect(),
        }
    }

    /// Applies `p -> rotation * p + shift` (`rotation` row-major, d x d).
    pub fn transformed(&self, rotation: &[Vector], shift: &[f64]) -> Self {
        let apply = |v: &[f64]| -> Vector { rotation.iter().map(|row| dot(row, v)).collect() };
        DirectedLine {
            base: apply(&self.base).iter().zip(shift).map(|(a, b)| a + b).collect(),
            dir: apply(&self.dir),
        }
    }
}

impl<'de> Deserialize<'de> for DirectedLine {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            base: Vector,
            dir: Vector,
        }
        let raw = Raw::deserialize(d)?;
        DirectedLine::new(raw.base, raw.dir).map_err(serde::de::Error::custom)
    }
}

/// Distance between two lines in any dimension.
///
/// `y_a - y_b` is projected onto the orthogonal complement of
/// `span{x_a, x_b}` (Gram-Schmidt); parallel lines reduce to a
/// point-to-line distance.
pub fn line_distance(a: &DirectedLine, b: &DirectedLine) -> f64 {
    assert_eq!(a.dim(), b.dim(), "lines of different dimension");
    let delta = sub(&a.base, &b.base);
    let e1 = &a.dir;
    let residual = axpy(-dot(&b.dir, e1), e1, &b.dir);
    let mut r = axpy(-dot(&delta, e1), e1, &delta);
    let len = norm(&residual);
    if len > DEGENERACY_THRESHOLD {
        let e2: Vector = residual.iter().map(|x| x / len).collect();
        r = axpy(-dot(&r, &e2), &e2, &r);
    }
    norm(&r)
}

/// `<x_a × x_b, y_a - y_b>` in R^3.
pub fn triple_product(a: &DirectedLine, b: &DirectedLine) -> f64 {
    let c = cross(&a.dir, &b.dir);
    dot(&c, &sub(&a.base, &b.base))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn sign(&self) -> i8 {
        match self {
            Chirality::Plus => 1,
            Chirality::Minus => -1,
        }
    }
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::Plus => "+1",
            Chirality::Minus => "-1",
        })
    }
}

/// Sign of `<x_a × x_b, y_a - y_b>`; symmetric in `a` and `b`.
pub fn chirality(a: &DirectedLine, b: &DirectedLine) -> Result<Chirality, GeometryError> {
    chirality_indexed(a, b, 0, 1)
}

fn chirality_indexed(a: &DirectedLine, b: &DirectedLine, i: usize, j: usize) -> Result<Chirality, GeometryError> {
    if a.dim() != 3 || b.dim() != 3 {
        return Err(GeometryError::ChiralityUndefined(a.dim()));
    }
    if norm(&cross(&a.dir, &b.dir)) < DEGENERACY_THRESHOLD {
        return Err(GeometryError::Parallel(i, j));
    }
    let t = triple_product(a, b);
    if t.abs() < DEGENERACY_THRESHOLD {
        return Err(GeometryError::Coplanar(i, j));
    }
    Ok(if t > 0.0 { Chirality::Plus } else { Chirality::Minus })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineConfig {
    pub dim: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub lines: Vec<DirectedLine>,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl LineConfig {
    pub fn new(dim: usize, lines: Vec<DirectedLine>) -> Result<Self, GeometryError> {
        let cfg = LineConfig {
            dim,
            tolerance: DEFAULT_TOLERANCE,
            lines,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.dim < 2 {
            return Err(GeometryError::BadDimension(self.dim));
        }
        for (index, l) in self.lines.iter().enumerate() {
            if l.dim() != self.dim {
                return Err(GeometryError::WrongDimension {
                    index,
                    got: l.dim(),
                    expected: self.dim,
                });
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(GeometryError::InvalidConfig("tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self, GeometryError> {
        let cfg: LineConfig = serde_json::from_str(s).map_err(|e| GeometryError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Three pairwise unit-distance lines in R^3: the x-axis, the line
    /// through (0,0,1) along y, and the line through (1,1,0) along z.
    pub fn three_line_example() -> Self {
        let line = |b: [f64; 3], d: [f64; 3]| DirectedLine::new(b.to_vec(), d.to_vec()).expect("valid line");
        LineConfig::new(
            3,
            vec![
                line([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]),
                line([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]),
                line([1.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
            ],
        )
        .expect("valid config")
    }

    /// The configuration with line `w` reversed.
    pub fn reversing(&self, w: usize) -> Self {
        let mut out = self.clone();
        out.lines[w] = out.lines[w].reversed();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    pub distance_ok: bool,
    pub parallel: bool,
    /// `+1`, `-1`, or absent when undefined for this pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chirality: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiralityReport {
    pub lines: usize,
    pub dim: usize,
    pub tolerance: f64,
    pub pairs: Vec<PairReport>,
    pub distances_ok: bool,
    pub parallel_pairs: Vec<[usize; 2]>,
    /// All distances within tolerance of 1 and no parallel pair.
    pub valid: bool,
    /// Edge where the chirality is `+1`. Absent outside R^3 or above 16
    /// lines.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ChiralityReport {
    pub fn graph(&self) -> Option<Graph> {
        self.graph.clone().map(|g| Graph::try_from(g).expect("report graph is valid"))
    }
}

/// Pairwise distances, parallelism and chirality of a configuration.
pub fn chirality_graph(cfg: &LineConfig) -> ChiralityReport {
    let n = cfg.len();
    let three = cfg.dim == 3;
    let mut pairs = Vec::new();
    let mut graph = (three && n <= MAX_VERTICES).then(|| Graph::empty(n).expect("n <= 16"));
    let mut notes = Vec::new();
    if !three {
        notes.push(format!("chirality undefined in dimension {}", cfg.dim));
    }
    if three && n > MAX_VERTICES {
        notes.push(format!("chirality graph omitted for more than {MAX_VERTICES} lines"));
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&cfg.lines[i], &cfg.lines[j]);
            let distance = line_distance(a, b);
            let parallel = parallel(a, b);
            let (chirality, problem) = if three {
                match chirality_indexed(a, b, i, j) {
                    Ok(c) => (Some(c.sign()), None),
                    Err(e) => (None, Some(e.to_string())),
                }
            } else {
                (None, None)
            };
            if chirality == Some(1) {
                if let Some(g) = graph.as_mut() {
                    g.add_edge(i, j).expect("in range");
                }
            }
            pairs.push(PairReport {
                i,
                j,
                distance,
                distance_ok: (distance - 1.0).abs() <= cfg.tolerance,
                parallel,
                chirality,
                problem,
            });
        }
    }
    let distances_ok = pairs.iter().all(|p| p.distance_ok);
    let parallel_pairs: Vec<[usize; 2]> = pairs.iter().filter(|p| p.parallel).map(|p| [p.i, p.j]).collect();
    ChiralityReport {
        lines: n,
        dim: cfg.dim,
        tolerance: cfg.tolerance,
        valid: distances_ok && parallel_pairs.is_empty(),
        distances_ok,
        parallel_pairs,
        graph: graph.as_ref().map(GraphJson::from),
        pairs,
        notes,
    }
}

/// Directions agree up to sign.
fn parallel(a: &DirectedLine, b: &DirectedLine) -> bool {
    let c = dot(&a.dir, &b.dir);
    (1.0 - c * c).max(0.0).sqrt() < DEGENERACY_THRESHOLD
}

/// The matrix `a_vw = <x_v × x_w, y_v - y_w>` of a configuration in R^3,
/// with the vectors `q_v = y_v × x_v` and `x_v` that factor it.
#[derive(Debug, Clone, PartialEq)]
pub struct TMatrix {
    pub matrix: SymMatrix<f64>,
    pub q: Vec<[f64; 3]>,
    pub x: Vec<[f64; 3]>,
}

impl TMatrix {
    /// `<q_v, x_w> + <x_v, q_w>`, the bilinear form of signature (3,3)
    /// applied to the stacked vectors `(q_v, x_v)`.
    pub fn gram(&self) -> SymMatrix<f64> {
        let n = self.x.len();
        SymMatrix::from_fn(n, |v, w| dot(&self.q[v], &self.x[w]) + dot(&self.x[v], &self.q[w]))
    }

    /// Entrywise absolute values.
    pub fn abs(&self) -> SymMatrix<f64> {
        let n = self.matrix.n();
        SymMatrix::from_fn(n, |v, w| self.matrix.get(v, w).abs())
    }
}

pub fn t_matrix(cfg: &LineConfig) -> Result<TMatrix, GeometryError> {
    if cfg.dim != 3 {
        return Err(GeometryError::ChiralityUndefined(cfg.dim));
    }
    let n = cfg.len();
    for i in 0..n {
        for j in i + 1..n {
            if norm(&cross(&cfg.lines[i].dir, &cfg.lines[j].dir)) < DEGENERACY_THRESHOLD {
                return Err(GeometryError::Parallel(i, j));
            }
        }
    }
    let x: Vec<[f64; 3]> = cfg.lines.iter().map(|l| [l.dir[0], l.dir[1], l.dir[2]]).collect();
    let q: Vec<[f64; 3]> = cfg.lines.iter().map(|l| cross(&l.base, &l.dir)).collect();
    let matrix = SymMatrix::from_fn(n, |v, w| {
        if v == w {
            0.0
        } else {
            triple_product(&cfg.lines[v], &cfg.lines[w])
        }
    });
    Ok(TMatrix { matrix, q, x })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// How far the checked quantity is from failing.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationReport {
    pub lines: usize,
    pub tolerance: f64,
    pub max_distance_error: f64,
    pub graph: GraphJson,
    pub t_eigenvalues: Vec<f64>,
    pub abs_signature: Signature,
    pub properties: Vec<PropertyCheck>,
}

impl RealizationReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }
}

/// Checks the four properties of the T-matrix of a unit-distance,
/// pairwise non-parallel configuration in R^3:
/// off-diagonal entries are nonzero, their signs are the chiralities, T has
/// at most three negative eigenvalues, and `(|a_vw|)` has signature
/// `(1, 0, n-1)`.
///
/// `tol` bounds the distance error only; zero tests on entries and
/// eigenvalues use [`signature::DEFAULT_TOLERANCE`].
pub fn check_realization(cfg: &LineConfig, tol: f64) -> Result<RealizationReport, GeometryError> {
    if cfg.dim != 3 {
        return Err(GeometryError::ChiralityUndefined(cfg.dim));
    }
    let n = cfg.len();
    if n < 2 {
        return Err(GeometryError::TooFewLines { need: 2, got: n });
    }
    if n > MAX_VERTICES {
        return Err(GeometryError::InvalidConfig(format!("at most {MAX_VERTICES} lines are supported")));
    }
    let report = chirality_graph(&LineConfig {
        tolerance: tol,
        ..cfg.clone()
    });
    let bad: Vec<String> = report
        .pairs
        .iter()
        .filter(|p| !p.distance_ok || p.parallel || p.chirality.is_none())
        .map(|p| {
            let why = p.problem.clone().unwrap_or_else(|| format!("distance {}", p.distance));
            format!("lines {} and {}: {why}", p.i, p.j)
        })
        .collect();
    if !bad.is_empty() {
        return Err(GeometryError::InvalidConfig(bad.join("; ")));
    }
    let graph = report.graph().expect("3-dimensional, at most 16 lines");
    let t = t_matrix(cfg)?;
    let zero_tol = signature::DEFAULT_TOLERANCE;
    let max_distance_error = report.pairs.iter().map(|p| (p.distance - 1.0).abs()).fold(0.0, f64::max);

    let off_diag: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|v| (v + 1..n).map(move |w| (v, w)))
        .map(|(v, w)| (v, w, *t.matrix.get(v, w)))
        .collect();
    let min_abs = off_diag.iter().map(|&(_, _, a)| a.abs()).fold(f64::INFINITY, f64::min);
    let diag_max = (0..n).map(|v| t.matrix.get(v, v).abs()).fold(0.0, f64::max);

    let mut properties = Vec::new();
    properties.push(PropertyCheck {
        name: "entries vanish exactly on the diagonal".into(),
        passed: diag_max == 0.0 && min_abs > zero_tol,
        detail: format!("min off-diagonal |a_vw| = {min_abs:.3e}"),
        margin: min_abs - zero_tol,
    });

    let mismatches: Vec<String> = off_diag
        .iter()
        .filter(|&&(v, w, a)| (a > 0.0) != graph.has_edge(v, w))
        .map(|&(v, w, _)| format!("({v},{w})"))
        .collect();
    properties.push(PropertyCheck {
        name: "positive entries are exactly the chirality +1 pairs".into(),
        passed: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            "all signs match".into()
        } else {
            format!("mismatched pairs {}", mismatches.join(" "))
        },
        margin: min_abs,
    });

    let t_eigenvalues = signature::eigenvalues(&t.matrix)?;
    let t_sig = signature::signature_float(&t.matrix, zero_tol)?;
    let negatives = t_sig.n_minus;
    properties.push(PropertyCheck {
        name: "T has at most 3 negative eigenvalues".into(),
        passed: negatives <= 3,
        detail: format!("signature of T = {t_sig}"),
        margin: 3.0 - negatives as f64,
    });

    let abs = t.abs();
    let abs_signature = signature::signature_float(&abs, zero_tol)?;
    let abs_eig = signature::normalized_eigenvalues(&abs)?;
    let smallest_gap = abs_eig.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    properties.push(PropertyCheck {
        name: "(|a_vw|) has signature (1, n-1)".into(),
        passed: abs_signature == Signature::new(1, 0, n - 1),
        detail: format!("signature of |T| = {abs_signature}"),
        margin: smallest_gap,
    });

    Ok(RealizationReport {
        lines: n,
        tolerance: tol,
        max_distance_error,
        graph: GraphJson::from(&graph),
        t_eigenvalues,
        abs_signature,
        properties,
    })
}

/// Vertices of a regular simplex with unit edges: `k` points in R^(k-1).
pub fn unit_simplex(k: usize) -> Vec<Vector> {
    let dim = k.saturating_sub(1);
    let mut pts: Vec<Vector> = Vec::with_capacity(k);
    if k == 0 {
        return pts;
    }
    pts.push(vec![0.0; dim]);
    for m in 1..k {
        // centroid of the first m points, then rise along axis m-1 so every
        // distance becomes 1; the circumradius of m unit-edge points is
        // sqrt((m-1)/(2m))
        let mut c = vec![0.0; dim];
        for p in &pts {
            for (ci, pi) in c.iter_mut().zip(p) {
                *ci += pi / m as f64;
            }
        }
        let r2 = (m as f64 - 1.0) / (2.0 * m as f64);
        c[m - 1] = (1.0 - r2).sqrt();
        pts.push(c);
    }
    pts
}

/// `2n - 2` pairwise unit-distance lines in R^n.
///
/// Takes a unit simplex `v_1..v_{n-1}` in R^(n-2) and, for each `i`, two
/// parallel lines in the plane at distance 1 with direction angle
/// `(i-1) pi / (n-1)`. The lines `{v_i} × L` then pair up at distance 1:
/// same-`i` lines are parallel in the plane, and different-`i` lines cross
/// in the plane so only the simplex edge separates them.
pub fn lower_bound_config(n: usize) -> Result<LineConfig, GeometryError> {
    if n < 3 {
        return Err(GeometryError::LowerBoundTooSmall(n));
    }
    let k = n - 1;
    let simplex = unit_simplex(k);
    let mut lines = Vec::with_capacity(2 * k);
    for (i, v) in simplex.iter().enumerate() {
        let theta = i as f64 * std::f64::consts::PI / k as f64;
        let (s, c) = theta.sin_cos();
        for offset in [[0.0, 0.0], [-s, c]] {
            let mut base = v.clone();
            base.extend_from_slice(&offset);
            let mut dir = vec![0.0; n - 2];
            dir.extend_from_slice(&[c, s]);
            lines.push(DirectedLine::new(base, dir)?);
        }
    }
    LineConfig::new(n, lines)
}
