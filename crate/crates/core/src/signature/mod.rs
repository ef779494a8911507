//! Inertia of real symmetric matrices, exact and floating point, and
//! randomized checks of the two sign-pattern lemmas.

pub mod exact;
pub mod jacobi;
pub mod pattern;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use exact::{det_bareiss, det_char_poly, signature_exact};
pub use pattern::{
    cycle_eigenvalues, cycle_pattern_sample, h7_pattern_sample, trial_rng, verify_matrix, verify_pattern_lemma, PatternKind,
    PatternReport, SignPattern,
};

/// Default zero threshold for floating-point inertia.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("bad matrix entry {0:?}")]
    BadEntry(String),
    #[error("cycle patterns need an odd size of at least 3, got {0}")]
    BadCycleSize(usize),
}

/// Counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl Signature {
    pub const fn new(n_plus: usize, n_zero: usize, n_minus: usize) -> Self {
        Signature { n_plus, n_zero, n_minus }
    }

    pub fn total(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n_plus, self.n_zero, self.n_minus)
    }
}

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone + PartialEq> SymMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, SignatureError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(SignatureError::NotSquare);
        }
        let data: Vec<T> = rows.into_iter().flatten().collect();
        for i in 0..n {
            for j in i + 1..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(SignatureError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymMatrix { n, data })
    }

    /// Builds from a function of `(i, j)` evaluated for `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data: Vec<Option<T>> = vec![None; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[j * n + i] = Some(v.clone());
                data[i * n + j] = Some(v);
            }
        }
        SymMatrix {
            n,
            data: data.into_iter().map(|x| x.expect("filled")).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }
}

impl SymMatrix<BigRational> {
    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, SignatureError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }
}

/// Inertia from the Jacobi eigenvalues of `m` scaled to unit max-norm;
/// eigenvalues in `(-tol, tol)` count as zero.
pub fn signature_float(m: &SymMatrix<f64>, tol: f64) -> Result<Signature, SignatureError> {
    let eig = normalized_eigenvalues(m)?;
    count_signs(&eig, tol)
}

/// Eigenvalues of `m / max|m_ij|`, ascending.
pub fn normalized_eigenvalues(m: &SymMatrix<f64>) -> Result<Vec<f64>, SignatureError> {
    let scale = m.data.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let scaled: Vec<f64> = if scale > 0.0 {
        m.data.iter().map(|x| x / scale).collect()
    } else {
        m.data.clone()
    };
    jacobi::jacobi_eigenvalues(m.n, &scaled)
}

pub fn count_signs(eigenvalues: &[f64], tol: f64) -> Result<Signature, SignatureError> {
    if tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(SignatureError::BadTolerance);
    }
    let mut sig = Signature::new(0, 0, 0);
    for &x in eigenvalues {
        if x >= tol {
            sig.n_plus += 1;
        } else if x <= -tol {
            sig.n_minus += 1;
        } else {
            sig.n_zero += 1;
        }
    }
    Ok(sig)
}

/// Unscaled eigenvalues of `m`, ascending.
pub fn eigenvalues(m: &SymMatrix<f64>) -> Result<Vec<f64>, SignatureError> {
    jacobi::jacobi_eigenvalues(m.n, &m.data)
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, SignatureError> {
    let bad = || SignatureError::BadEntry(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        let numer = if negative { -numer } else { numer };
        return Ok(BigRational::new(numer, num_traits::pow(BigInt::from(10), frac.len())));
    }
    Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
}

pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// JSON form: `{"mode": "exact", "entries": [["1/2", ..], ..]}` or
/// `{"mode": "float", "entries": [[0.5, ..], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum MatrixJson {
    Exact { entries: Vec<Vec<String>> },
    Float { entries: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Exact(SymMatrix<BigRational>),
    Float(SymMatrix<f64>),
}

impl AnyMatrix {
    pub fn n(&self) -> usize {
        match self {
            AnyMatrix::Exact(m) => m.n(),
            AnyMatrix::Float(m) => m.n(),
        }
    }

    pub fn signature(&self, tol: f64) -> Result<Signature, SignatureError> {
        match self {
            AnyMatrix::Exact(m) => Ok(signature_exact(m)),
            AnyMatrix::Float(m) => signature_float(m, tol),
        }
    }
}

impl TryFrom<MatrixJson> for AnyMatrix {
    type Error = SignatureError;

    fn try_from(j: MatrixJson) -> Result<Self, Self::Error> {
        match j {
            MatrixJson::Exact { entries } => {
                let rows = entries
                    .iter()
                    .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(AnyMatrix::Exact(SymMatrix::from_rows(rows)?))
            }
            MatrixJson::Float { entries } => Ok(AnyMatrix::Float(SymMatrix::from_rows(entries)?)),
        }
    }
}

impl From<&AnyMatrix> for MatrixJson {
    fn from(m: &AnyMatrix) -> Self {
        match m {
            AnyMatrix::Exact(m) => MatrixJson::Exact {
                entries: m.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
            },
            AnyMatrix::Float(m) => MatrixJson::Float { entries: m.rows() },
        }
    }
}

impl From<&SymMatrix<BigRational>> for MatrixJson {
    fn from(m: &SymMatrix<BigRational>) -> Self {
        MatrixJson::from(&AnyMatrix::Exact(m.clone()))
    }
}

/// Sign of a rational as -1, 0 or 1.
pub(crate) fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
