//! Exact linear algebra over the rationals.
//!
//! Everything that makes an exact claim in this crate (ranks, kernels, the
//! constrained pseudo-inverse, characteristic polynomials, stability) is
//! computed here without floating point. The elimination kernels are generic
//! over [`Field`] so the same code runs on concrete rationals and on the
//! rational functions of the [`symbolic`](crate::symbolic) module.

mod elimination;
mod hurwitz;
mod matrix;
mod polynomial;
mod rational;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

pub use elimination::{
    determinant, inverse, nullspace, rank_exact, rank_over_field, rref, solve_constrained, KernelSide,
};
pub use hurwitz::{hurwitz_minors, hurwitz_stable};
pub use matrix::{dot, Matrix, RationalMatrix, RationalVector};
pub use polynomial::{charpoly_exact, Polynomial, CHARPOLY_SIZE_LIMIT};
pub use rational::{format_rational, parse_rational, ParseRationalError, Rational};

/// Exact field arithmetic needed by the elimination kernels.
///
/// Implementors must have exact equality: `is_zero` decides whether a pivot
/// can be used, so a representation with non-canonical zeros breaks rank.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `Σ uₖ vₖ`. Representations that can defer normalization should
    /// override this; it is the inner loop of every product.
    fn dot(u: &[Self], v: &[Self]) -> Self {
        u.iter()
            .zip(v)
            .fold(Self::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

impl Field for Rational {
    // Accumulate over the lcm of the term denominators and reduce once,
    // instead of a gcd after every addition.
    fn dot(u: &[Self], v: &[Self]) -> Self {
        let mut terms = Vec::with_capacity(u.len());
        let mut common = BigInt::one();
        for (a, b) in u.iter().zip(v) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let den = a.denom() * b.denom();
            common = common.lcm(&den);
            terms.push((a.numer() * b.numer(), den));
        }
        let sum = terms
            .into_iter()
            .fold(BigInt::zero(), |acc, (num, den)| acc + num * (&common / den));
        Rational::new(sum, common)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("right-hand side is not in the range of the matrix")]
    InconsistentSystem,
    #[error("constraint vector annihilates the kernel direction")]
    DegenerateConstraint,
    #[error("kernel has dimension {0}, expected 1")]
    KernelDimension(usize),
    #[error("matrix size {size} exceeds the limit {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("zero polynomial has no stability verdict")]
    ZeroPolynomial,
}
