//! Sign patterns with forced signature.
//!
//! Two patterns matter: the odd cycle band (`a_ij > 0` iff `i - j = ±1 mod
//! n`) and the edge set of H7. Every symmetric matrix with either pattern is
//! non-singular with a closed-form determinant, so the signature is constant
//! over the pattern. Sampling here is evidence for that, not a proof.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{det_char_poly, signature_exact};
use super::{sign, MatrixJson, Signature, SignatureError, SymMatrix};
use crate::catalog::H7_EDGES;

/// Denominator of sampled entries.
pub const SAMPLE_DENOMINATOR: i64 = 1 << 16;
/// Sampled numerators lie in `[SAMPLE_MIN_NUMERATOR, SAMPLE_MAX_NUMERATOR)`,
/// so entries lie strictly inside `(0.1, 10)`.
pub const SAMPLE_MIN_NUMERATOR: i64 = 6554;
pub const SAMPLE_MAX_NUMERATOR: i64 = 10 * SAMPLE_DENOMINATOR;

/// Positions that must be positive; every other entry must be zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    n: usize,
    positive: Vec<(usize, usize)>,
}

impl SignPattern {
    /// Band `i - j = ±1 (mod n)` for odd `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self, SignatureError> {
        if n < 3 || n % 2 == 0 {
            return Err(SignatureError::BadCycleSize(n));
        }
        let positive = (0..n).map(|i| ordered(i, (i + 1) % n)).collect();
        Ok(SignPattern { n, positive })
    }

    /// Edge slots of H7 with the figure's labeling.
    pub fn h7() -> Self {
        SignPattern {
            n: 7,
            positive: H7_EDGES.iter().map(|&(u, v)| ordered(u - 1, v - 1)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Positive slots `(i, j)` with `i < j`.
    pub fn positive_slots(&self) -> &[(usize, usize)] {
        &self.positive
    }

    fn is_positive_slot(&self, i: usize, j: usize) -> bool {
        self.positive.contains(&ordered(i, j))
    }

    /// Matrix with `value(slot)` on each positive slot and zero elsewhere.
    pub fn fill(&self, mut value: impl FnMut(usize) -> BigRational) -> SymMatrix<BigRational> {
        let values: Vec<BigRational> = (0..self.positive.len()).map(&mut value).collect();
        SymMatrix::from_fn(self.n, |i, j| {
            self.positive
                .iter()
                .position(|&s| s == ordered(i, j))
                .map(|k| values[k].clone())
                .unwrap_or_else(BigRational::zero)
        })
    }

    /// The 0/1 matrix of the pattern.
    pub fn indicator(&self) -> SymMatrix<BigRational> {
        self.fill(|_| BigRational::one())
    }

    /// Independent entries `k / 2^16` with `k` uniform on
    /// `[SAMPLE_MIN_NUMERATOR, SAMPLE_MAX_NUMERATOR)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SymMatrix<BigRational> {
        self.fill(|_| {
            let k = rng.random_range(SAMPLE_MIN_NUMERATOR..SAMPLE_MAX_NUMERATOR);
            BigRational::new(BigInt::from(k), BigInt::from(SAMPLE_DENOMINATOR))
        })
    }

    /// Checks that `m` has exactly this pattern.
    pub fn check(&self, m: &SymMatrix<BigRational>) -> Result<(), String> {
        if m.n() != self.n {
            return Err(format!("expected a {0}x{0} matrix, got {1}x{1}", self.n, m.n()));
        }
        for i in 0..self.n {
            for j in i..self.n {
                let s = sign(m.get(i, j));
                if self.is_positive_slot(i, j) {
                    if s <= 0 {
                        return Err(format!("entry ({i},{j}) must be positive"));
                    }
                } else if s != 0 {
                    return Err(format!("entry ({i},{j}) must be zero"));
                }
            }
        }
        Ok(())
    }
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Cycle(usize),
    H7,
}

impl PatternKind {
    pub fn pattern(&self) -> Result<SignPattern, SignatureError> {
        match *self {
            PatternKind::Cycle(n) => SignPattern::cycle(n),
            PatternKind::H7 => Ok(SignPattern::h7()),
        }
    }

    /// `((n+1)/2, 0, (n-1)/2)` for `n = 1 mod 4`, `((n-1)/2, 0, (n+1)/2)`
    /// for `n = 3 mod 4`, and `(4, 0, 3)` for H7.
    pub fn expected_signature(&self) -> Signature {
        match *self {
            PatternKind::Cycle(n) if n % 4 == 1 => Signature::new(n.div_ceil(2), 0, n / 2),
            PatternKind::Cycle(n) => Signature::new(n / 2, 0, n.div_ceil(2)),
            PatternKind::H7 => Signature::new(4, 0, 3),
        }
    }

    /// Closed-form determinant for a matrix with this pattern.
    pub fn det_formula(&self, m: &SymMatrix<BigRational>) -> BigRational {
        match *self {
            PatternKind::Cycle(n) => {
                let product: BigRational = (0..n).map(|i| m.get(i, (i + 1) % n).clone()).product();
                product * BigRational::from_integer(2.into())
            }
            PatternKind::H7 => {
                let a = |i: usize, j: usize| m.get(i - 1, j - 1).clone();
                let inner = a(1, 2) * a(3, 6) * a(4, 7) * a(5, 7)
                    + a(1, 3) * a(2, 5) * a(4, 7) * a(6, 7)
                    + a(1, 4) * a(2, 3) * a(5, 7) * a(6, 7);
                -(BigRational::from_integer(2.into()) * a(1, 4) * a(2, 5) * a(3, 6) * inner)
            }
        }
    }

    /// Required sign of the determinant.
    pub fn det_sign(&self) -> i8 {
        match self {
            PatternKind::Cycle(_) => 1,
            PatternKind::H7 => -1,
        }
    }

    pub fn det_rule(&self) -> &'static str {
        match self {
            PatternKind::Cycle(_) => "det = 2 * prod a_{i,i+1} > 0",
            PatternKind::H7 => "det = -2 a14 a25 a36 (a12 a36 a47 a57 + a13 a25 a47 a67 + a14 a23 a57 a67) < 0",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternKind::Cycle(n) => write!(f, "cycle{n}"),
            PatternKind::H7 => f.write_str("h7"),
        }
    }
}

impl FromStr for PatternKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "h7" {
            return Ok(PatternKind::H7);
        }
        let digits = t
            .strip_prefix("cycle")
            .or_else(|| t.strip_prefix('c'))
            .map(|d| d.trim_matches(['(', ')']))
            .ok_or_else(|| format!("unknown pattern {s:?}"))?;
        let n: usize = digits.parse().map_err(|_| format!("unknown pattern {s:?}"))?;
        SignPattern::cycle(n).map_err(|e| e.to_string())?;
        Ok(PatternKind::Cycle(n))
    }
}

impl Serialize for PatternKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PatternKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn cycle_pattern_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SymMatrix<BigRational>, SignatureError> {
    Ok(SignPattern::cycle(n)?.sample(rng))
}

pub fn h7_pattern_sample<R: Rng + ?Sized>(rng: &mut R) -> SymMatrix<BigRational> {
    SignPattern::h7().sample(rng)
}

/// `2 cos(2 pi k / n)` for `k = 0..n`, ascending.
pub fn cycle_eigenvalues(n: usize) -> Vec<f64> {
    let mut out: Vec<f64> = (0..n)
        .map(|k| 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Outcome of checking one matrix against a pattern lemma.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCheck {
    pub pattern_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_error: Option<String>,
    pub signature: Signature,
    pub signature_ok: bool,
    /// Exact determinant as `p/q`.
    pub det: String,
    pub det_formula: String,
    pub det_ok: bool,
}

impl MatrixCheck {
    pub fn passed(&self) -> bool {
        self.pattern_ok && self.signature_ok && self.det_ok
    }
}

/// Checks the pattern, the determinant identity and sign, and the expected
/// signature for one matrix.
pub fn verify_matrix(kind: PatternKind, m: &SymMatrix<BigRational>) -> Result<MatrixCheck, SignatureError> {
    let pattern = kind.pattern()?;
    let pattern_error = pattern.check(m).err();
    let signature = signature_exact(m);
    let det = det_char_poly(m);
    let (formula, det_ok) = if m.n() == pattern.n() {
        let formula = kind.det_formula(m);
        let ok = det == formula && sign(&det) == kind.det_sign();
        (formula, ok)
    } else {
        (BigRational::zero(), false)
    };
    Ok(MatrixCheck {
        pattern_ok: pattern_error.is_none(),
        pattern_error,
        signature,
        signature_ok: signature == kind.expected_signature(),
        det: super::format_rational(&det),
        det_formula: super::format_rational(&formula),
        det_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub check: MatrixCheck,
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    pub pattern: PatternKind,
    pub trials: usize,
    pub seed: u64,
    pub expected_signature: Signature,
    pub det_rule: String,
    pub passed: usize,
    pub failures: Vec<TrialFailure>,
    pub note: String,
}

impl PatternReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.trials
    }
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Samples `trials` matrices with the pattern and checks each exactly.
/// Trials run on the current rayon pool; trial `t` always uses
/// [`trial_rng`]`(seed, t)`.
pub fn verify_pattern_lemma(kind: PatternKind, trials: usize, seed: u64) -> Result<PatternReport, SignatureError> {
    let pattern = kind.pattern()?;
    let outcomes: Vec<(usize, SymMatrix<BigRational>, MatrixCheck)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let m = pattern.sample(&mut trial_rng(seed, t));
            let check = verify_matrix(kind, &m)?;
            Ok((t, m, check))
        })
        .collect::<Result<_, SignatureError>>()?;
    let passed = outcomes.iter().filter(|(_, _, c)| c.passed()).count();
    let failures = outcomes
        .into_iter()
        .filter(|(_, _, c)| !c.passed())
        .map(|(trial, m, check)| TrialFailure {
            trial,
            check,
            matrix: MatrixJson::from(&m),
        })
        .collect();
    Ok(PatternReport {
        pattern: kind,
        trials,
        seed,
        expected_signature: kind.expected_signature(),
        det_rule: kind.det_rule().to_string(),
        passed,
        failures,
        note: "random samples from the sign pattern; evidence for constancy of the signature, not a proof".into(),
    })
}
