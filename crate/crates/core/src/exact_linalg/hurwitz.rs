use num_traits::{Signed, Zero};

use super::{determinant, LinalgError, Polynomial, Rational, RationalMatrix};

fn descending_coeff(p: &Polynomial, k: isize) -> Rational {
    let deg = p.degree().unwrap_or(0) as isize;
    if k < 0 || k > deg {
        Rational::zero()
    } else {
        p.coeff((deg - k) as usize)
    }
}

/// Leading principal minors Δ₁…Δₙ of the Hurwitz matrix of `p`, after
/// scaling `p` to a positive leading coefficient.
pub fn hurwitz_minors(p: &Polynomial) -> Result<Vec<Rational>, LinalgError> {
    if p.is_zero() {
        return Err(LinalgError::ZeroPolynomial);
    }
    let p = p.with_positive_leading();
    let n = p.degree().unwrap_or(0);
    // H[i][j] = a_{2j - i} in 1-based indices, a_k the descending coefficients
    let h = RationalMatrix::from_fn(n, n, |i, j| {
        descending_coeff(&p, 2 * (j as isize + 1) - (i as isize + 1))
    });
    (1..=n)
        .map(|k| {
            let minor = RationalMatrix::from_fn(k, k, |i, j| h[(i, j)].clone());
            determinant(&minor)
        })
        .collect()
}

/// Routh–Hurwitz: true iff every root of `p` has strictly negative real part.
/// A nonzero constant has no roots and is reported stable.
pub fn hurwitz_stable(p: &Polynomial) -> Result<bool, LinalgError> {
    Ok(hurwitz_minors(p)?.iter().all(Signed::is_positive))
}
