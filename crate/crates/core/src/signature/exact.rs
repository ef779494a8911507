//! Exact characteristic polynomials and determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Signature, SymMatrix};

/// Smallest positive `L` with `L * m` integral, and that integer matrix.
pub fn clear_denominators(m: &SymMatrix<BigRational>) -> (BigInt, Vec<BigInt>) {
    let lcm = m.data().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = m
        .data()
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    (lcm, ints)
}

/// Coefficients `c_0..=c_n` of `det(xI - A)` for an integer matrix, by the
/// Faddeev-LeVerrier recurrence. Every division is exact.
pub fn char_poly_int(n: usize, a: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(a.len(), n * n);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // m holds M_k; M_0 = 0
    let mut m = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(n, a, &m);
        for i in 0..n {
            next[i * n + i] += &coeffs[n - k + 1];
        }
        // c_{n-k} = -tr(A M_k) / k
        let am = mat_mul(n, a, &next);
        let trace: BigInt = (0..n).map(|i| &am[i * n + i]).sum();
        let (q, r) = trace.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "inexact Faddeev-LeVerrier division");
        coeffs[n - k] = -q;
        m = next;
    }
    coeffs
}

fn mat_mul(n: usize, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                let bkj = &b[k * n + j];
                if !bkj.is_zero() {
                    out[i * n + j] += aik * bkj;
                }
            }
        }
    }
    out
}

/// Coefficients `c_0..=c_n` of `det(xI - A)`.
pub fn char_poly(m: &SymMatrix<BigRational>) -> Vec<BigRational> {
    let n = m.n();
    let (scale, ints) = clear_denominators(m);
    // det(xI - B/L) = L^{-n} det(LxI - B): c_i(A) = c_i(B) / L^{n-i}
    let int_coeffs = char_poly_int(n, &ints);
    let mut power = BigInt::one();
    let mut out = vec![BigRational::zero(); n + 1];
    for i in (0..=n).rev() {
        out[i] = BigRational::new(int_coeffs[i].clone(), power.clone());
        power *= &scale;
    }
    out
}

/// Inertia of a matrix whose characteristic polynomial has only real roots,
/// read off the coefficient signs.
///
/// Descartes' rule counts positive roots exactly for real-rooted
/// polynomials, and negative roots are the positive roots of `p(-x)`.
pub fn inertia_from_char_poly<T: Signed>(coeffs: &[T]) -> Signature {
    let n = coeffs.len() - 1;
    let n_zero = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(n);
    let signs: Vec<(usize, bool)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.is_positive()))
        .collect();
    let changes = |flip: bool| {
        signs
            .windows(2)
            .filter(|w| {
                let s0 = w[0].1 ^ (flip && w[0].0 % 2 == 1);
                let s1 = w[1].1 ^ (flip && w[1].0 % 2 == 1);
                s0 != s1
            })
            .count()
    };
    Signature {
        n_plus: changes(false),
        n_zero,
        n_minus: changes(true),
    }
}

/// Exact inertia of a symmetric rational matrix.
pub fn signature_exact(m: &SymMatrix<BigRational>) -> Signature {
    let (_, ints) = clear_denominators(m);
    let sig = inertia_from_char_poly(&char_poly_int(m.n(), &ints));
    debug_assert_eq!(sig.total(), m.n());
    sig
}

/// Determinant as `(-1)^n c_0` of the characteristic polynomial.
pub fn det_char_poly(m: &SymMatrix<BigRational>) -> BigRational {
    let c0 = char_poly(m).swap_remove(0);
    if m.n() % 2 == 1 {
        -c0
    } else {
        c0
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination with row pivoting.
pub fn det_bareiss_int(n: usize, a: &[BigInt]) -> BigInt {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !m[r * n + k].is_zero()) {
                Some(r) => {
                    for j in 0..n {
                        m.swap(k * n + j, r * n + j);
                    }
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                m[i * n + j] = v / &prev;
            }
        }
        prev = m[k * n + k].clone();
    }
    sign * &m[n * n - 1]
}

/// Rational determinant through [`det_bareiss_int`].
pub fn det_bareiss(m: &SymMatrix<BigRational>) -> BigRational {
    let (scale, ints) = clear_denominators(m);
    let det = det_bareiss_int(m.n(), &ints);
    BigRational::new(det, num_traits::pow(scale, m.n()))
}
