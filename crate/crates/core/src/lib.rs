//! Exact structure of the leading-order asymptotics of singularly perturbed
//! linear transfer systems
//!
//! ```text
//! ε² (U_t + Σᵢ Dᵢ U_{xᵢ}) = A U
//! ```
//!
//! For a system with a simple, stable zero eigenvalue of `A` the leading term
//! of the solution is `φ₀(ζ, t) h₁`, where `φ₀` solves a (possibly degenerate)
//! parabolic equation `φ₀_t + Σ M_ij φ₀_{ζᵢζⱼ} = 0` in the moving frame
//! `ζᵢ = (xᵢ − vᵢ t)/ε`. This crate builds `M` exactly, measures its rank and
//! spectrum, checks the rank law `rank M = min(n − 1, K)` on random instances,
//! reproduces the closed forms of the two-equation family symbolically, and
//! evaluates the Gaussian leading-order profile.
//!
//! Modules:
//!
//! * [`exact_linalg`]: rationals, exact rank, kernels, constrained solves,
//!   characteristic polynomials and the Routh–Hurwitz test.
//! * [`model`]: problem instances, spectral validation, random generators.
//! * [`asymptotics`]: velocities, the pseudo-inverse `G`, the matrix `M`,
//!   structure reports and the φ₀ evaluators.
//! * [`symbolic`]: multivariate rational functions and the parametric n = 2
//!   family.
//! * [`search`]: deterministic randomized campaigns over `(n, K)` cells.
//! * [`cli`]: file formats and the command-line front end.

pub mod asymptotics;
pub mod cli;
pub mod exact_linalg;
pub mod model;
pub mod search;
pub mod symbolic;

pub use asymptotics::{analyze_structure, build_m, StructureReport, TransferStructure};
pub use exact_linalg::{Rational, RationalMatrix};
pub use model::{validate_system, SpectralData, SystemSpec};
