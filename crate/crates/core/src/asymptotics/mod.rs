//! Transfer structure of the leading-order asymptotics.
//!
//! Given the normalized kernel pair `(h₁, h₁*)` of `A`:
//!
//! ```text
//! vᵢ   = (Dᵢ h₁, h₁*)
//! Ψᵢ   = Dᵢ − vᵢ E
//! G    : A G = E − h₁ h₁*ᵀ,  h₁*ᵀ G = 0
//! M_ij = ((Ψᵢ G Ψⱼ + Ψⱼ G Ψᵢ) h₁, h₁*) / 2
//! ```
//!
//! The construction is generic over [`Field`] so the symbolic module runs the
//! very same code on rational functions.

mod jacobi;
mod profile;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_linalg::{
    dot, nullspace, rank_exact, solve_constrained, Field, KernelSide, LinalgError, Matrix,
    Rational, RationalMatrix, RationalVector,
};
use crate::model::{SpectralData, SystemSpec};

pub use jacobi::{symmetric_eigenvalues, JACOBI_MAX_SWEEPS, JACOBI_TOLERANCE};
pub use profile::{
    leading_term_eval, pde_residual, phi0_eval, DiffusionProfile, ProfileQuery,
};

/// Eigenvalues with `|λ| > NUMERIC_RANK_TOLERANCE · max|M|` count toward the
/// numeric rank.
pub const NUMERIC_RANK_TOLERANCE: f64 = 1e-8;
/// A numeric eigenvalue above `DISSIPATIVITY_TOLERANCE · max|M|` breaks the
/// fixed sign of the diffusion form.
pub const DISSIPATIVITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("M has eigenvalue {max_eigenvalue:e} > 0: the diffusion form is not dissipative")]
    NotDissipative { max_eigenvalue: f64 },
    #[error("covariance matrix is not positive definite")]
    SingularCovariance,
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferStructure<F = Rational> {
    /// Drift velocities `vᵢ`.
    pub v: Vec<F>,
    /// `Ψᵢ = Dᵢ − vᵢ E`.
    pub psi: Vec<Matrix<F>>,
    /// `Ψᵢ h₁`, one vector per axis.
    pub psi_h1: Vec<Vec<F>>,
    /// Constrained pseudo-inverse of `A`.
    pub g: Matrix<F>,
    /// Symmetric `K×K` diffusion matrix.
    pub m: Matrix<F>,
}

pub fn velocities_in<F: Field>(d: &[Vec<F>], h1: &[F], h1_star: &[F]) -> Vec<F> {
    d.iter()
        .map(|diag| {
            let dh: Vec<F> = diag.iter().zip(h1).map(|(x, h)| x.clone() * h.clone()).collect();
            dot(&dh, h1_star)
        })
        .collect()
}

/// Canonical pseudo-inverse: column `j` solves `A x = (E − h₁h₁*ᵀ) eⱼ` with
/// `(x, h₁*) = 0`.
pub fn group_inverse_in<F: Field>(
    a: &Matrix<F>,
    h1: &[F],
    h1_star: &[F],
) -> Result<Matrix<F>, LinalgError> {
    let n = a.rows();
    let projector = Matrix::identity(n).sub(&Matrix::outer(h1, h1_star))?;
    let columns = (0..n)
        .map(|j| solve_constrained(a, &projector.column(j), h1_star))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_fn(n, n, |i, j| columns[j][i].clone()))
}

/// `M` for given `Ψᵢ` and any particular-solution operator `g`.
pub fn diffusion_matrix<F: Field>(
    psi: &[Matrix<F>],
    g: &Matrix<F>,
    h1: &[F],
    h1_star: &[F],
) -> Result<Matrix<F>, LinalgError> {
    let k = psi.len();
    // p[i][j] = (Ψᵢ G Ψⱼ h₁, h₁*) = (G Ψⱼ h₁, Ψᵢᵀ h₁*)
    let g_psi_h1 = psi
        .iter()
        .map(|p| p.mul_vec(h1).and_then(|w| g.mul_vec(&w)))
        .collect::<Result<Vec<_>, _>>()?;
    let psi_t_h1_star = psi
        .iter()
        .map(|p| p.vec_mul(h1_star))
        .collect::<Result<Vec<_>, _>>()?;
    let p: Vec<Vec<F>> = psi_t_h1_star
        .iter()
        .map(|left| g_psi_h1.iter().map(|x| dot(x, left)).collect())
        .collect();
    let two = F::one() + F::one();
    Ok(Matrix::from_fn(k, k, |i, j| {
        if i == j {
            p[i][i].clone()
        } else {
            (p[i][j].clone() + p[j][i].clone()) / two.clone()
        }
    }))
}

/// Full pipeline `v → Ψ → G → M` over any exact field.
pub fn transfer_structure_in<F: Field>(
    a: &Matrix<F>,
    d: &[Vec<F>],
    h1: &[F],
    h1_star: &[F],
) -> Result<TransferStructure<F>, LinalgError> {
    let n = a.rows();
    let v = velocities_in(d, h1, h1_star);
    let psi: Vec<Matrix<F>> = d
        .iter()
        .zip(&v)
        .map(|(diag, vi)| {
            let shifted: Vec<F> = diag.iter().map(|x| x.clone() - vi.clone()).collect();
            Matrix::diagonal(&shifted)
        })
        .collect();
    debug_assert!(psi.iter().all(|p| p.rows() == n));
    let psi_h1 = psi
        .iter()
        .map(|p| p.mul_vec(h1))
        .collect::<Result<Vec<_>, _>>()?;
    let g = group_inverse_in(a, h1, h1_star)?;
    let m = diffusion_matrix(&psi, &g, h1, h1_star)?;
    Ok(TransferStructure { v, psi, psi_h1, g, m })
}

/// `vᵢ = (Dᵢ h₁, h₁*)`.
pub fn velocities(s: &SystemSpec, sd: &SpectralData) -> Vec<Rational> {
    velocities_in(&s.d, &sd.h1, &sd.h1_star)
}

pub fn group_inverse(a: &RationalMatrix, sd: &SpectralData) -> Result<RationalMatrix, LinalgError> {
    group_inverse_in(a, &sd.h1, &sd.h1_star)
}

pub fn build_m(s: &SystemSpec, sd: &SpectralData) -> Result<TransferStructure, LinalgError> {
    transfer_structure_in(&s.a, &s.d, &sd.h1, &sd.h1_star)
}

/// Exact and numeric description of `M` for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub rank_exact: usize,
    /// Numeric eigenvalues of `M`, ascending.
    pub eigenvalues: Vec<f64>,
    pub predicted_rank: usize,
    pub rank_matches_prediction: bool,
    /// Some `Ψᵢ h₁` vanishes, or every `Dᵢ` is the same matrix.
    pub degenerate: bool,
    /// Exact basis of `ker M`: directions without diffusion.
    pub kernel_directions: Vec<RationalVector>,
    /// Eigenvalues with `|λ| > NUMERIC_RANK_TOLERANCE · max|M|`.
    pub numeric_rank: usize,
    pub max_abs_entry: f64,
}

impl StructureReport {
    /// Largest eigenvalue relative to `max|M|` (zero for `M = 0`).
    pub fn max_eigenvalue_ratio(&self) -> f64 {
        let top = self.eigenvalues.last().copied().unwrap_or(0.0);
        if self.max_abs_entry == 0.0 {
            top
        } else {
            top / self.max_abs_entry
        }
    }

    pub fn dissipative(&self) -> bool {
        self.eigenvalues
            .iter()
            .all(|&l| l <= DISSIPATIVITY_TOLERANCE * self.max_abs_entry)
    }
}

pub fn predicted_rank(n: usize, k: usize) -> usize {
    (n - 1).min(k)
}

pub fn analyze_structure(ts: &TransferStructure, s: &SystemSpec) -> StructureReport {
    let rank = rank_exact(&ts.m);
    let m_f64 = ts.m.to_f64_rows();
    let eigenvalues = symmetric_eigenvalues(&m_f64);
    let max_abs_entry = m_f64.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let numeric_rank = eigenvalues
        .iter()
        .filter(|l| l.abs() > NUMERIC_RANK_TOLERANCE * max_abs_entry)
        .count();
    let predicted = predicted_rank(s.n, s.k);
    let all_equal = s.k >= 2 && s.d.windows(2).all(|w| w[0] == w[1]);
    let degenerate = all_equal || ts.psi_h1.iter().any(|w| w.iter().all(Zero::is_zero));
    StructureReport {
        rank_exact: rank,
        eigenvalues,
        predicted_rank: predicted,
        rank_matches_prediction: rank == predicted,
        degenerate,
        kernel_directions: nullspace(&ts.m, KernelSide::Right),
        numeric_rank,
        max_abs_entry,
    }
}

pub(crate) fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
