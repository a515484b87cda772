#![allow(dead_code)]

use std::path::Path;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use perturb_rank::asymptotics::diffusion_matrix;
use perturb_rank::cli::files::parse_instance;
use perturb_rank::exact_linalg::{dot, Matrix, Rational, RationalMatrix};
use perturb_rank::model::{generate_instance, GeneratorConfig, GeneratorFamily};
use perturb_rank::search::{classify_instance, Counterexample};
use perturb_rank::symbolic::{build_m_parametric, FamilyPoint, SymbolicStructure};
use perturb_rank::{build_m, validate_system, SystemSpec};

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn w1() -> SystemSpec {
    let a = RationalMatrix::from_rows(vec![vec![r(-1, 1), r(1, 1)], vec![r(1, 1), r(-1, 1)]]).unwrap();
    SystemSpec::new(a, vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]], "W1").unwrap()
}

pub fn w1_json() -> &'static str {
    r#"{"format_version": 1, "n": 2, "K": 2, "A": [["-1","1"],["1","-1"]], "D": [["1","0"],["0","1"]], "label": "W1"}"#
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    r(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

fn positive_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    r(rng.gen_range(1..=bound), rng.gen_range(1..=bound))
}

/// Checks every exact identity of the transfer structure on one instance,
/// including invariance of `M` under `G ↦ G + h₁cᵀ` for `c_count` random `c`.
pub fn check_identities(s: &SystemSpec, c_count: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let sd = validate_system(s).map_err(|e| e.to_string())?;
    let ts = build_m(s, &sd).map_err(|e| e.to_string())?;
    let n = s.n;
    let zero = vec![r(0, 1); n];
    if s.a.mul_vec(&sd.h1).unwrap() != zero {
        return Err("A h1 != 0".into());
    }
    if s.a.vec_mul(&sd.h1_star).unwrap() != zero {
        return Err("h1*^T A != 0".into());
    }
    if dot(&sd.h1, &sd.h1_star) != r(1, 1) {
        return Err("(h1, h1*) != 1".into());
    }
    for (i, p) in ts.psi_h1.iter().enumerate() {
        if dot(p, &sd.h1_star) != r(0, 1) {
            return Err(format!("(Psi_{i} h1, h1*) != 0"));
        }
    }
    let projector = Matrix::identity(n).sub(&Matrix::outer(&sd.h1, &sd.h1_star)).unwrap();
    if s.a.mul(&ts.g).unwrap() != projector {
        return Err("A G != I - h1 h1*^T".into());
    }
    if ts.m != ts.m.transpose() {
        return Err("M not symmetric".into());
    }
    for _ in 0..c_count {
        let c: Vec<Rational> = (0..n).map(|_| random_rational(rng, 9)).collect();
        let shifted = ts.g.add(&Matrix::outer(&sd.h1, &c)).unwrap();
        let m = diffusion_matrix(&ts.psi, &shifted, &sd.h1, &sd.h1_star).unwrap();
        if m != ts.m {
            return Err(format!("M changed under G + h1 c^T with c = {c:?}"));
        }
    }
    Ok(())
}

/// Runs [`check_identities`] on `count` generated instances with `n, K` in
/// `2..=max_dim`, cycling through every generator family.
pub fn identity_suite(count: usize, c_count: usize, max_dim: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let n = rng.gen_range(2..=max_dim);
        let k = rng.gen_range(2..=max_dim);
        let family = GeneratorFamily::ALL[i % GeneratorFamily::ALL.len()];
        let cfg = GeneratorConfig::new(n, k, rng.gen(), family);
        let s = generate_instance(&cfg).map_err(|e| format!("instance {i}: {e}"))?;
        check_identities(&s, c_count, &mut rng).map_err(|e| format!("instance {i} ({cfg:?}): {e}"))?;
    }
    Ok(())
}

pub fn random_family_point(rng: &mut ChaCha8Rng, k: usize) -> FamilyPoint {
    FamilyPoint {
        a: positive_rational(rng, 9),
        b: positive_rational(rng, 9),
        k: positive_rational(rng, 9),
        d: (0..k)
            .map(|_| [positive_rational(rng, 9), positive_rational(rng, 9)])
            .collect(),
    }
}

/// Substitutes `count` random positive points into the symbolic `M` and
/// compares with the numeric pipeline on the same instance.
pub fn symbolic_commutation(ss: &SymbolicStructure, count: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let point = random_family_point(&mut rng, ss.k);
        let symbolic = ss.substitute(&point).ok_or_else(|| format!("point {i} hits a pole"))?;
        let s = point.to_system_spec().map_err(|e| e.to_string())?;
        let sd = validate_system(&s).map_err(|e| format!("point {i}: {e}"))?;
        let numeric = build_m(&s, &sd).map_err(|e| e.to_string())?;
        if symbolic != numeric.m {
            return Err(format!("point {i}: symbolic {symbolic:?} != numeric {:?}", numeric.m));
        }
    }
    Ok(())
}

pub fn symbolic_structure(k: usize) -> SymbolicStructure {
    build_m_parametric(k).expect("parametric build")
}

/// Re-reads a counterexample artifact and checks it classifies the same way.
pub fn replay(ce: &Counterexample, path: &Path) -> Result<(), String> {
    let s = parse_instance(path).map_err(|e| e.to_string())?;
    if s != ce.instance {
        return Err(format!("{}: instance differs after round trip", path.display()));
    }
    let again = classify_instance(&s).map_err(|e| e.to_string())?;
    if again.report() != &ce.report {
        return Err(format!("{}: replayed report differs", path.display()));
    }
    Ok(())
}
