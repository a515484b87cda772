use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{LinalgError, Rational, RationalMatrix};

/// Guard for [`charpoly_exact`]; larger inputs are almost certainly misuse.
pub const CHARPOLY_SIZE_LIMIT: usize = 32;

/// Univariate polynomial with exact rational coefficients in ascending degree.
/// The zero polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Multiplicity of the root at zero.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `λ^k`, where `k` is the multiplicity of the zero root.
    pub fn deflate_zero_roots(&self) -> Self {
        Self::new(self.coeffs[self.zero_root_multiplicity()..].to_vec())
    }

    /// Same polynomial scaled to a positive leading coefficient.
    pub fn with_positive_leading(&self) -> Self {
        match self.leading() {
            Some(l) if l.is_negative() => Self::new(self.coeffs.iter().map(|c| -c).collect()),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "λ")?,
                _ => write!(f, "λ^{k}")?,
            }
        }
        Ok(())
    }
}

/// `det(λI − m)` by the Faddeev–LeVerrier recurrence, exact over ℚ.
pub fn charpoly_exact(m: &RationalMatrix) -> Result<Polynomial, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n > CHARPOLY_SIZE_LIMIT {
        return Err(LinalgError::SizeLimitExceeded {
            size: n,
            limit: CHARPOLY_SIZE_LIMIT,
        });
    }
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    // N_k = m N_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(m N_k) / k
    let mut aux = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&aux)?;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        let tr = m.mul(&next)?.trace();
        coeffs[n - k] = -tr / Rational::from_integer(k.into());
        aux = next;
    }
    Ok(Polynomial::new(coeffs))
}
