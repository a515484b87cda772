//! Problem instances: the transport diagonals `Dᵢ`, the interaction matrix
//! `A`, the spectral checks on `A` and random instance generators.

use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_linalg::{
    charpoly_exact, dot, hurwitz_stable, inverse, nullspace, KernelSide, LinalgError, Rational,
    RationalMatrix, RationalVector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid system: {0}")]
    Dimension(String),
    #[error("zero eigenvalue of A is not simple (right kernel {right}, left kernel {left}, zero-root multiplicity {algebraic})")]
    KernelDimension {
        right: usize,
        left: usize,
        algebraic: usize,
    },
    #[error("nonzero spectrum of A is not in the open left half-plane")]
    NotStable,
    #[error("kernel vectors of A are orthogonal; the zero eigenvalue is defective")]
    NonNormalizable,
    #[error("instance generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One instance of the transfer system: `n` equations, `K` spatial variables,
/// diagonal transport matrices `Dᵢ` (stored as their diagonals) and the
/// interaction matrix `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub n: usize,
    pub k: usize,
    pub d: Vec<RationalVector>,
    pub a: RationalMatrix,
    /// Direction `H` of the initial splash, carried along but not used.
    pub initial_direction: Option<RationalVector>,
    pub label: String,
}

impl SystemSpec {
    pub fn new(
        a: RationalMatrix,
        d: Vec<RationalVector>,
        label: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let spec = Self {
            n: a.rows(),
            k: d.len(),
            d,
            a,
            initial_direction: None,
            label: label.into(),
        };
        spec.check_shape()?;
        Ok(spec)
    }

    pub fn check_shape(&self) -> Result<(), ModelError> {
        if self.n < 2 {
            return Err(ModelError::Dimension(format!("n = {} but at least 2 equations are required", self.n)));
        }
        if self.k < 1 {
            return Err(ModelError::Dimension("K must be at least 1".into()));
        }
        if self.a.rows() != self.n || self.a.cols() != self.n {
            return Err(ModelError::Dimension(format!(
                "A is {}x{}, expected {n}x{n}",
                self.a.rows(),
                self.a.cols(),
                n = self.n
            )));
        }
        if self.d.len() != self.k {
            return Err(ModelError::Dimension(format!(
                "{} transport diagonals for K = {}",
                self.d.len(),
                self.k
            )));
        }
        if let Some(i) = self.d.iter().position(|d| d.len() != self.n) {
            return Err(ModelError::Dimension(format!(
                "D[{i}] has {} entries, expected {}",
                self.d[i].len(),
                self.n
            )));
        }
        if let Some(h) = &self.initial_direction {
            if h.len() != self.n {
                return Err(ModelError::Dimension(format!(
                    "H has {} entries, expected {}",
                    h.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// `Dᵢ` as a full matrix.
    pub fn transport_matrix(&self, i: usize) -> RationalMatrix {
        RationalMatrix::diagonal(&self.d[i])
    }
}

/// Normalized kernel pair of `A` and the stability verdict on the rest of
/// its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub h1: RationalVector,
    pub h1_star: RationalVector,
    pub normalized: bool,
    pub stable: bool,
}

/// Right and left kernel vectors of `A`, scaled so `(h₁, h₁*) = 1`. `h₁`
/// keeps its first nonzero entry equal to one.
pub fn null_pair_normalized(
    a: &RationalMatrix,
) -> Result<(RationalVector, RationalVector), ModelError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let right = nullspace(a, KernelSide::Right);
    let left = nullspace(a, KernelSide::Left);
    if right.len() != 1 || left.len() != 1 {
        return Err(ModelError::KernelDimension {
            right: right.len(),
            left: left.len(),
            algebraic: charpoly_exact(a)?.zero_root_multiplicity(),
        });
    }
    let h1 = right.into_iter().next().unwrap();
    let left = left.into_iter().next().unwrap();
    let pairing = dot(&h1, &left);
    if pairing.is_zero() {
        return Err(ModelError::NonNormalizable);
    }
    let h1_star = left.into_iter().map(|x| x / &pairing).collect();
    Ok((h1, h1_star))
}

/// Kernel pair and stability verdict without rejecting unstable matrices.
pub fn spectral_data(a: &RationalMatrix) -> Result<SpectralData, ModelError> {
    let (h1, h1_star) = null_pair_normalized(a)?;
    let charpoly = charpoly_exact(a)?;
    let algebraic = charpoly.zero_root_multiplicity();
    if algebraic != 1 {
        return Err(ModelError::KernelDimension {
            right: 1,
            left: 1,
            algebraic,
        });
    }
    let stable = hurwitz_stable(&charpoly.deflate_zero_roots())?;
    Ok(SpectralData {
        h1,
        h1_star,
        normalized: true,
        stable,
    })
}

/// Checks that zero is a simple eigenvalue of `A` and that every other
/// eigenvalue has negative real part.
pub fn validate_system(s: &SystemSpec) -> Result<SpectralData, ModelError> {
    s.check_shape()?;
    let sd = spectral_data(&s.a)?;
    if !sd.stable {
        return Err(ModelError::NotStable);
    }
    Ok(sd)
}

/// `Ψᵢ h₁ = (Dᵢ − vᵢ) h₁` for every axis.
pub(crate) fn psi_h1(s: &SystemSpec, sd: &SpectralData) -> Vec<RationalVector> {
    s.d.iter()
        .map(|diag| {
            let dh: RationalVector = diag.iter().zip(&sd.h1).map(|(d, h)| d * h).collect();
            let v = dot(&dh, &sd.h1_star);
            dh.iter().zip(&sd.h1).map(|(x, h)| x - &v * h).collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorFamily {
    /// Irreducible generator: positive off-diagonal entries, zero column sums.
    MarkovGenerator,
    /// `T A₀ T⁻¹` with `T` a permutation times a positive diagonal and `A₀`
    /// a Markov generator. Column sums are no longer zero and `h₁*` is not
    /// uniform.
    SimilarityTransformed,
    /// `T A₀ T⁻¹` with a dense random invertible `T`. Same spectrum as `A₀`,
    /// but `M` is frequently indefinite: this family leaves the class in which
    /// the diffusion form has a fixed sign and is meant for exploration only.
    DenseSimilarity,
}

impl GeneratorFamily {
    pub const ALL: [GeneratorFamily; 3] = [
        GeneratorFamily::MarkovGenerator,
        GeneratorFamily::SimilarityTransformed,
        GeneratorFamily::DenseSimilarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorFamily::MarkovGenerator => "markov_generator",
            GeneratorFamily::SimilarityTransformed => "similarity_transformed",
            GeneratorFamily::DenseSimilarity => "dense_similarity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for GeneratorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub seed: u64,
    pub family: GeneratorFamily,
    /// Cap on numerator and denominator magnitudes of sampled entries.
    pub entry_bound: u32,
}

impl GeneratorConfig {
    pub fn new(n: usize, k: usize, seed: u64, family: GeneratorFamily) -> Self {
        Self {
            n,
            k,
            seed,
            family,
            entry_bound: 9,
        }
    }

    fn check(&self) -> Result<(), ModelError> {
        if self.n < 2 || self.k < 2 || self.entry_bound < 1 {
            return Err(ModelError::Dimension(format!(
                "generator needs n >= 2, K >= 2, entry_bound >= 1 (got {}, {}, {})",
                self.n, self.k, self.entry_bound
            )));
        }
        Ok(())
    }
}

const GENERATION_ATTEMPTS: usize = 64;

fn positive_rational(rng: &mut ChaCha8Rng, bound: u32) -> Rational {
    let p: i64 = rng.gen_range(1..=bound as i64);
    let q: i64 = rng.gen_range(1..=bound as i64);
    Rational::new(p.into(), q.into())
}

fn signed_rational(rng: &mut ChaCha8Rng, bound: u32) -> Rational {
    let b = bound as i64;
    let p: i64 = rng.gen_range(-b..=b);
    let q: i64 = rng.gen_range(1..=b);
    Rational::new(p.into(), q.into())
}

fn markov_generator(rng: &mut ChaCha8Rng, n: usize, bound: u32) -> RationalMatrix {
    let mut a = RationalMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Rational::zero()
        } else {
            positive_rational(rng, bound)
        }
    });
    for j in 0..n {
        let col_sum = (0..n).fold(Rational::zero(), |acc, i| acc + &a[(i, j)]);
        a[(j, j)] = -col_sum;
    }
    a
}

fn monomial_transform(rng: &mut ChaCha8Rng, n: usize, bound: u32) -> RationalMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let scales: Vec<Rational> = (0..n).map(|_| positive_rational(rng, bound)).collect();
    RationalMatrix::from_fn(n, n, |i, j| {
        if perm[i] == j {
            scales[i].clone()
        } else {
            Rational::zero()
        }
    })
}

fn dense_transform(rng: &mut ChaCha8Rng, n: usize, bound: u32) -> (RationalMatrix, RationalMatrix) {
    loop {
        let t = RationalMatrix::from_fn(n, n, |_, _| signed_rational(rng, bound));
        if let Some(inv) = inverse(&t) {
            return (t, inv);
        }
    }
}

fn sample_interaction(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> RationalMatrix {
    let a0 = markov_generator(rng, cfg.n, cfg.entry_bound);
    let (t, t_inv) = match cfg.family {
        GeneratorFamily::MarkovGenerator => return a0,
        GeneratorFamily::SimilarityTransformed => {
            let t = monomial_transform(rng, cfg.n, cfg.entry_bound);
            let inv = inverse(&t).expect("monomial matrix with nonzero scales is invertible");
            (t, inv)
        }
        GeneratorFamily::DenseSimilarity => dense_transform(rng, cfg.n, cfg.entry_bound),
    };
    t.mul(&a0)
        .and_then(|ta| ta.mul(&t_inv))
        .expect("square matrices of equal size")
}

/// Diagonals with pairwise distinct entries, pairwise distinct across axes.
fn sample_transport(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> Option<Vec<RationalVector>> {
    let mut out: Vec<RationalVector> = Vec::with_capacity(cfg.k);
    for _ in 0..cfg.k {
        let mut found = None;
        for _ in 0..GENERATION_ATTEMPTS {
            let mut diag: RationalVector = Vec::with_capacity(cfg.n);
            for _ in 0..GENERATION_ATTEMPTS * cfg.n {
                if diag.len() == cfg.n {
                    break;
                }
                let x = signed_rational(rng, cfg.entry_bound);
                if !diag.contains(&x) {
                    diag.push(x);
                }
            }
            if diag.len() == cfg.n && !out.contains(&diag) {
                found = Some(diag);
                break;
            }
        }
        out.push(found?);
    }
    Some(out)
}

/// Deterministic random instance. Rejects and resamples until the instance
/// validates and no `Ψᵢ h₁` vanishes.
pub fn generate_instance(cfg: &GeneratorConfig) -> Result<SystemSpec, ModelError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..GENERATION_ATTEMPTS {
        let a = sample_interaction(&mut rng, cfg);
        let Some(d) = sample_transport(&mut rng, cfg) else {
            continue;
        };
        let spec = SystemSpec::new(
            a,
            d,
            format!("{}-n{}-K{}-seed{}", cfg.family, cfg.n, cfg.k, cfg.seed),
        )?;
        let Ok(sd) = validate_system(&spec) else {
            continue;
        };
        if psi_h1(&spec, &sd).iter().any(|w| w.iter().all(Zero::is_zero)) {
            continue;
        }
        return Ok(spec);
    }
    Err(ModelError::GenerationFailed {
        attempts: GENERATION_ATTEMPTS,
    })
}

/// `(1, …, 1)ᵀ A`; zero for Markov generators.
pub fn column_sums(a: &RationalMatrix) -> RationalVector {
    a.vec_mul(&vec![Rational::one(); a.rows()])
        .expect("row count matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::charpoly_exact;
    use crate::test_support::{qm, qv};

    fn w1() -> SystemSpec {
        SystemSpec::new(
            qm(&[&["-1", "1"], &["1", "-1"]]),
            vec![qv(&["1", "0"]), qv(&["0", "1"])],
            "W1",
        )
        .unwrap()
    }

    #[test]
    fn validate_two_state_generator() {
        let sd = validate_system(&w1()).unwrap();
        assert_eq!(sd.h1, qv(&["1", "1"]));
        assert_eq!(sd.h1_star, qv(&["1/2", "1/2"]));
        assert!(sd.stable && sd.normalized);
    }

    #[test]
    fn validate_doubly_stochastic_generator() {
        let a = qm(&[&["-2", "1", "1"], &["1", "-2", "1"], &["1", "1", "-2"]]);
        let s = SystemSpec::new(a, vec![qv(&["1", "2", "3"])], "sym3").unwrap();
        let sd = validate_system(&s).unwrap();
        assert_eq!(sd.h1, qv(&["1", "1", "1"]));
        assert_eq!(sd.h1_star, qv(&["1/3", "1/3", "1/3"]));
        assert_eq!(dot(&sd.h1, &sd.h1_star), Rational::one());
        assert!(sd.stable);
    }

    #[test]
    fn rejects_bad_kernels() {
        let zero = SystemSpec::new(RationalMatrix::zeros(2, 2), vec![qv(&["1", "0"])], "0").unwrap();
        assert!(matches!(
            validate_system(&zero),
            Err(ModelError::KernelDimension { right: 2, left: 2, .. })
        ));
        let nonsingular =
            SystemSpec::new(RationalMatrix::identity(2), vec![qv(&["1", "0"])], "I").unwrap();
        assert!(matches!(
            validate_system(&nonsingular),
            Err(ModelError::KernelDimension { right: 0, .. })
        ));
        // nilpotent Jordan block: one-dimensional kernels that are orthogonal
        let jordan = qm(&[&["0", "1"], &["0", "0"]]);
        assert_eq!(null_pair_normalized(&jordan), Err(ModelError::NonNormalizable));
        // simple kernel with λ² | charpoly: 3x3 with a 2x2 Jordan block at zero
        let block = qm(&[&["0", "1", "0"], &["0", "0", "0"], &["0", "0", "-1"]]);
        assert!(validate_system(&SystemSpec::new(block, vec![qv(&["1", "2", "3"])], "j").unwrap()).is_err());
    }

    #[test]
    fn rejects_unstable() {
        // eigenvalues 0 and +1
        let a = qm(&[&["1", "0"], &["0", "0"]]);
        let s = SystemSpec::new(a.clone(), vec![qv(&["1", "0"])], "u").unwrap();
        assert_eq!(validate_system(&s), Err(ModelError::NotStable));
        assert!(!spectral_data(&a).unwrap().stable);
    }

    #[test]
    fn null_pair_examples() {
        let (h, hs) = null_pair_normalized(&qm(&[&["-1", "1"], &["1", "-1"]])).unwrap();
        assert_eq!((h, hs), (qv(&["1", "1"]), qv(&["1/2", "1/2"])));
        // a = 2, b = 1, k = 1
        let (h, hs) = null_pair_normalized(&qm(&[&["-2", "1"], &["2", "-1"]])).unwrap();
        assert_eq!((h, hs), (qv(&["1", "2"]), qv(&["1/3", "1/3"])));
    }

    #[test]
    fn shape_errors() {
        let a = qm(&[&["-1", "1"], &["1", "-1"]]);
        assert!(SystemSpec::new(a.clone(), vec![qv(&["1"])], "x").is_err());
        assert!(SystemSpec::new(a, vec![], "x").is_err());
        let one = qm(&[&["0"]]);
        assert!(SystemSpec::new(one, vec![qv(&["1"])], "x").is_err());
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        for family in GeneratorFamily::ALL {
            let cfg = GeneratorConfig::new(3, 2, 7, family);
            let s1 = generate_instance(&cfg).unwrap();
            let s2 = generate_instance(&cfg).unwrap();
            assert_eq!(s1, s2);
            assert!(validate_system(&s1).unwrap().stable);
        }
        let markov = generate_instance(&GeneratorConfig::new(2, 2, 7, GeneratorFamily::MarkovGenerator)).unwrap();
        assert!(column_sums(&markov.a).iter().all(Zero::is_zero));
    }

    #[test]
    fn similarity_preserves_charpoly() {
        let cfg = GeneratorConfig::new(5, 5, 11, GeneratorFamily::SimilarityTransformed);
        let s = generate_instance(&cfg).unwrap();
        // rebuild the underlying generator from the same stream
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let a0 = markov_generator(&mut rng, cfg.n, cfg.entry_bound);
        assert_eq!(charpoly_exact(&s.a).unwrap(), charpoly_exact(&a0).unwrap());
        assert!(validate_system(&s).is_ok());
    }

    #[test]
    fn transport_diagonals_are_distinct() {
        let s = generate_instance(&GeneratorConfig::new(4, 6, 3, GeneratorFamily::MarkovGenerator)).unwrap();
        for (i, d) in s.d.iter().enumerate() {
            for j in 0..d.len() {
                for l in 0..j {
                    assert_ne!(d[j], d[l]);
                }
            }
            for e in &s.d[..i] {
                assert_ne!(d, e);
            }
        }
    }

    #[test]
    fn bad_generator_config() {
        let cfg = GeneratorConfig::new(1, 2, 0, GeneratorFamily::MarkovGenerator);
        assert!(generate_instance(&cfg).is_err());
        let cfg = GeneratorConfig { entry_bound: 0, ..GeneratorConfig::new(2, 2, 0, GeneratorFamily::MarkovGenerator) };
        assert!(generate_instance(&cfg).is_err());
    }
}
