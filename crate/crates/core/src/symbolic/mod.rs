//! Exact parametric computation for the two-equation family
//!
//! ```text
//! Dᵢ = diag(dᵢ₁, dᵢ₂),   A = ( −a    b  )
//!                             ( k a  −k b )
//! ```
//!
//! over the field of rational functions in `a, b, k, dᵢⱼ`. The pipeline is the
//! one in [`asymptotics`](crate::asymptotics), run on [`RatFunc`] entries.
//! For every `K` the result is `M = −c ΔΔᵀ` with `Δᵢ = dᵢ₁ − dᵢ₂`, so `M` has
//! the single nonzero eigenvalue `−c Σ Δᵢ²` and a `(K−1)`-fold zero.

mod expr;
mod poly;
mod ratfunc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::asymptotics::{transfer_structure_in, TransferStructure};
use crate::exact_linalg::{dot, LinalgError, Matrix, Rational, RationalMatrix};
use crate::model::SystemSpec;

pub use expr::{Expr, PolyRing};
pub use poly::{gcd, Monomial, MultiPoly};
pub use ratfunc::{ratfunc_normalize, RatFunc};

/// Largest `K` accepted by [`build_m_parametric`].
pub const MAX_PARAMETRIC_AXES: usize = 6;

pub const VAR_A: usize = 0;
pub const VAR_B: usize = 1;
pub const VAR_K: usize = 2;

/// Index of `d_{axis+1, component+1}` in the variable list.
pub fn transport_var(axis: usize, component: usize) -> usize {
    3 + 2 * axis + component
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("K = {k} outside the supported range 2..={limit}")]
    SizeLimitExceeded { k: usize, limit: usize },
    #[error("M is not -c ΔΔᵀ; the rank-one identity failed")]
    RankIdentityFailed,
    #[error("symbolic check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicStructure {
    pub ring: PolyRing,
    pub k: usize,
    pub a: Matrix<RatFunc>,
    pub h1: Vec<RatFunc>,
    pub h1_star: Vec<RatFunc>,
    pub transfer: TransferStructure<RatFunc>,
    /// `M` as a `K×K` matrix of rational functions.
    pub m_sym: Matrix<RatFunc>,
    /// Proportionality constant: `M = −c ΔΔᵀ`.
    pub c_sym: RatFunc,
    pub delta_sym: Vec<RatFunc>,
}

/// Variable names `a, b, k, d1_1, d1_2, …, dK_2`.
pub fn family_ring(k: usize) -> PolyRing {
    let mut names = vec!["a".to_string(), "b".to_string(), "k".to_string()];
    for i in 1..=k {
        names.push(format!("d{i}_1"));
        names.push(format!("d{i}_2"));
    }
    PolyRing::new(names)
}

fn check_axes(k: usize) -> Result<(), SymbolicError> {
    if (2..=MAX_PARAMETRIC_AXES).contains(&k) {
        Ok(())
    } else {
        Err(SymbolicError::SizeLimitExceeded {
            k,
            limit: MAX_PARAMETRIC_AXES,
        })
    }
}

/// Runs the transfer pipeline on the symbolic two-equation family with `K`
/// spatial variables.
pub fn build_m_parametric(k: usize) -> Result<SymbolicStructure, SymbolicError> {
    check_axes(k)?;
    let var = RatFunc::var;
    let (a, b, kk) = (var(VAR_A), var(VAR_B), var(VAR_K));
    let a_mat = Matrix::from_rows(vec![
        vec![-a.clone(), b.clone()],
        vec![kk.clone() * a.clone(), -(kk.clone() * b.clone())],
    ])?;
    let d: Vec<Vec<RatFunc>> = (0..k)
        .map(|i| vec![var(transport_var(i, 0)), var(transport_var(i, 1))])
        .collect();

    let h1 = vec![b.clone(), a.clone()];
    let left = vec![kk.clone(), RatFunc::one()];
    let pairing = dot(&h1, &left);
    let h1_star: Vec<RatFunc> = left.into_iter().map(|x| x / pairing.clone()).collect();
    if !a_mat.mul_vec(&h1)?.iter().all(Zero::is_zero)
        || !a_mat.vec_mul(&h1_star)?.iter().all(Zero::is_zero)
        || !dot(&h1, &h1_star).is_one()
    {
        return Err(SymbolicError::Internal("(b, a), (k, 1)/(a + bk) is not a normalized kernel pair".into()));
    }

    let transfer = transfer_structure_in(&a_mat, &d, &h1, &h1_star)?;
    let delta_sym: Vec<RatFunc> = d.iter().map(|x| x[0].clone() - x[1].clone()).collect();
    let m_sym = transfer.m.clone();
    let c_sym = -(m_sym[(0, 0)].clone() / delta_sym[0].pow(2));
    Ok(SymbolicStructure {
        ring: family_ring(k),
        k,
        a: a_mat,
        h1,
        h1_star,
        transfer,
        m_sym,
        c_sym,
        delta_sym,
    })
}

/// True iff `M + c ΔΔᵀ` is identically zero.
pub fn verify_rank_one_identity(ss: &SymbolicStructure) -> bool {
    let k = ss.m_sym.rows();
    ss.m_sym.cols() == k
        && ss.delta_sym.len() == k
        && (0..k).all(|i| {
            (0..k).all(|j| {
                let outer = ss.c_sym.clone() * ss.delta_sym[i].clone() * ss.delta_sym[j].clone();
                (ss.m_sym[(i, j)].clone() + outer).is_zero()
            })
        })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSpectrum {
    /// The only nonzero eigenvalue, `tr M = −c Σ Δᵢ²`.
    pub nonzero_eigenvalue: RatFunc,
    pub zero_multiplicity: usize,
}

pub fn eigen_closed_form_n2(ss: &SymbolicStructure) -> Result<ClosedFormSpectrum, SymbolicError> {
    if !verify_rank_one_identity(ss) {
        return Err(SymbolicError::RankIdentityFailed);
    }
    let trace = ss.m_sym.trace();
    let sum_sq = ss
        .delta_sym
        .iter()
        .fold(RatFunc::zero(), |acc, d| acc + d.pow(2));
    if trace != -(ss.c_sym.clone() * sum_sq) {
        return Err(SymbolicError::Internal("trace differs from -c Σ Δ²".into()));
    }
    Ok(ClosedFormSpectrum {
        nonzero_eigenvalue: trace,
        zero_multiplicity: ss.k - 1,
    })
}

/// `ab/(a + bk)²`, the constant quoted for this family when the kernel pair
/// is not normalized by `(h₁, h₁*) = 1`.
pub fn unnormalized_constant() -> RatFunc {
    let (a, b, k) = (RatFunc::var(VAR_A), RatFunc::var(VAR_B), RatFunc::var(VAR_K));
    let s = a.clone() + b.clone() * k;
    a * b / s.pow(2)
}

/// Numeric values for every symbol of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyPoint {
    pub a: Rational,
    pub b: Rational,
    pub k: Rational,
    pub d: Vec<[Rational; 2]>,
}

impl FamilyPoint {
    pub fn coordinates(&self) -> Vec<Rational> {
        let mut out = vec![self.a.clone(), self.b.clone(), self.k.clone()];
        for [d1, d2] in &self.d {
            out.push(d1.clone());
            out.push(d2.clone());
        }
        out
    }

    pub fn to_system_spec(&self) -> Result<SystemSpec, crate::model::ModelError> {
        let a = RationalMatrix::from_rows(vec![
            vec![-self.a.clone(), self.b.clone()],
            vec![&self.k * &self.a, -(&self.k * &self.b)],
        ])?;
        let d = self.d.iter().map(|x| x.to_vec()).collect();
        SystemSpec::new(a, d, "two-equation family")
    }
}

impl SymbolicStructure {
    /// `M` at a numeric point; `None` if the point hits a pole.
    pub fn substitute(&self, point: &FamilyPoint) -> Option<RationalMatrix> {
        let coords = point.coordinates();
        let rows = (0..self.k)
            .map(|i| (0..self.k).map(|j| self.m_sym[(i, j)].eval(&coords)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        RationalMatrix::from_rows(rows).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family_constant() -> RatFunc {
        let (a, b, k) = (RatFunc::var(VAR_A), RatFunc::var(VAR_B), RatFunc::var(VAR_K));
        let s = a.clone() + b.clone() * k.clone();
        a * b * k / s.pow(3)
    }

    #[test]
    fn k2_closed_form() {
        let ss = build_m_parametric(2).unwrap();
        assert!(verify_rank_one_identity(&ss));
        assert_eq!(ss.c_sym, family_constant());
        let spec = eigen_closed_form_n2(&ss).unwrap();
        assert_eq!(spec.zero_multiplicity, 1);
        // a = b = k = 1, Δ = (1, −1): eigenvalue −1/4
        let point = FamilyPoint {
            a: Rational::one(),
            b: Rational::one(),
            k: Rational::one(),
            d: vec![
                [Rational::one(), Rational::zero()],
                [Rational::zero(), Rational::one()],
            ],
        };
        assert_eq!(
            spec.nonzero_eigenvalue.eval(&point.coordinates()).unwrap(),
            Rational::new((-1).into(), 4.into())
        );
        assert_eq!(
            ss.c_sym.eval(&point.coordinates()).unwrap(),
            Rational::new(1.into(), 8.into())
        );
    }

    #[test]
    fn mutated_structure_fails_identity() {
        let mut ss = build_m_parametric(2).unwrap();
        ss.m_sym[(0, 1)] = -ss.m_sym[(0, 1)].clone();
        assert!(!verify_rank_one_identity(&ss));
        assert_eq!(eigen_closed_form_n2(&ss), Err(SymbolicError::RankIdentityFailed));
    }

    #[test]
    fn axis_guard() {
        assert!(matches!(build_m_parametric(1), Err(SymbolicError::SizeLimitExceeded { .. })));
        assert!(matches!(build_m_parametric(7), Err(SymbolicError::SizeLimitExceeded { .. })));
    }

    #[test]
    fn constants_differ_by_normalization_factor() {
        let (b, k) = (RatFunc::var(VAR_B), RatFunc::var(VAR_K));
        let a = RatFunc::var(VAR_A);
        let ratio = family_constant() / unnormalized_constant();
        assert_eq!(ratio, k.clone() / (a + b * k));
    }
}
