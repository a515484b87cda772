use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{dot, Field, LinalgError, Matrix, Rational, RationalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSide {
    /// `m x = 0`
    Right,
    /// `xᵀ m = 0`
    Left,
}

/// Reduced row echelon form over an exact field. Returns the reduced matrix
/// and its pivot columns.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = F::one() / a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank by plain field elimination. Used for symbolic matrices and as an
/// independent cross-check of [`rank_exact`].
pub fn rank_over_field<F: Field>(m: &Matrix<F>) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel of `m` (or of `mᵀ` for [`KernelSide::Left`]),
/// each vector scaled so its first nonzero entry is one.
pub fn nullspace<F: Field>(m: &Matrix<F>, side: KernelSide) -> Vec<Vec<F>> {
    let m = match side {
        KernelSide::Right => m.clone(),
        KernelSide::Left => m.transpose(),
    };
    let (reduced, pivots) = rref(&m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); cols];
            v[fc] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -reduced[(r, fc)].clone();
            }
            normalize_first_nonzero(v)
        })
        .collect()
}

fn normalize_first_nonzero<F: Field>(v: Vec<F>) -> Vec<F> {
    match v.iter().find(|x| !x.is_zero()).cloned() {
        Some(lead) if !lead.is_one() => v.into_iter().map(|x| x / lead.clone()).collect(),
        _ => v,
    }
}

/// Unique solution of `m x = y` with `(x, c) = 0`, for square `m` with a
/// one-dimensional kernel.
pub fn solve_constrained<F: Field>(
    m: &Matrix<F>,
    y: &[F],
    c: &[F],
) -> Result<Vec<F>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if y.len() != n || c.len() != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "system of size {n} with rhs {} and constraint {}",
            y.len(),
            c.len()
        )));
    }
    let kernel = nullspace(m, KernelSide::Right);
    if kernel.len() != 1 {
        return Err(LinalgError::KernelDimension(kernel.len()));
    }
    if dot(&kernel[0], c).is_zero() {
        return Err(LinalgError::DegenerateConstraint);
    }

    // [m | y] stacked on [cᵀ | 0]
    let aug = Matrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => m[(i, j)].clone(),
        (true, false) => y[i].clone(),
        (false, true) => c[j].clone(),
        (false, false) => F::zero(),
    });
    let (reduced, pivots) = rref(&aug);
    if pivots.contains(&n) {
        return Err(LinalgError::InconsistentSystem);
    }
    debug_assert_eq!(pivots.len(), n);
    Ok((0..n).map(|r| reduced[(r, n)].clone()).collect())
}

/// Inverse of a square matrix, or `None` when it is singular.
pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            F::one()
        } else {
            F::zero()
        }
    });
    let (reduced, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| reduced[(i, j + n)].clone()))
}

fn lcm_of_denominators(row: &[Rational]) -> BigInt {
    row.iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales each row by the lcm of its denominators, giving an integer matrix
/// with the same rank, and returns the product of the scale factors.
fn integer_image(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = lcm_of_denominators(row);
            let out = row
                .iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect();
            scale *= &l;
            out
        })
        .collect();
    (rows, scale)
}

/// Fraction-free (Bareiss) forward elimination on an integer matrix, with
/// row exchanges and column skipping. Every division is exact because each
/// intermediate entry is a minor of the input. Returns the number of pivots
/// and the sign of the row permutation.
fn bareiss_echelon(a: &mut [Vec<BigInt>]) -> (usize, bool) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut negated = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            negated = !negated;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, negated)
}

/// Rank over ℚ by fraction-free elimination. Exact; no thresholds.
pub fn rank_exact(m: &RationalMatrix) -> usize {
    let (mut a, _) = integer_image(m);
    bareiss_echelon(&mut a).0
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &RationalMatrix) -> Result<Rational, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut a, scale) = integer_image(m);
    let (rank, negated) = bareiss_echelon(&mut a);
    if rank < n {
        return Ok(Rational::zero());
    }
    // the last pivot of a full-rank Bareiss run is the determinant
    let mut det = a[n - 1][n - 1].clone();
    if negated {
        det = -det;
    }
    Ok(Rational::new(det, scale))
}
