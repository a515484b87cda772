// Closed form of `M` for the parametric two-equation family
//
// `A = [[-a, b], [ka, -kb]]`, `Dᵢ = diag(dᵢ₁, dᵢ₂)`, with every parameter kept
// symbolic. The engine proves `M = -c ΔΔᵀ` identically over ℚ(a, b, k, d).
//
// ```bash
// cargo run --example symbolic_family
// ```

use std::error::Error;
use std::time::Instant;

use perturb_rank::exact_linalg::parse_rational;
use perturb_rank::symbolic::{build_m_parametric, eigen_closed_form_n2, unnormalized_constant, FamilyPoint};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for k in 2..=4 {
        let started = Instant::now();
        let ss = build_m_parametric(k)?;
        let spectrum = eigen_closed_form_n2(&ss)?;
        println!(
            "K = {k}: c = {}, nonzero eigenvalue = {}, zero multiplicity = {} ({:.1?})",
            ss.ring.format_ratfunc(&ss.c_sym),
            ss.ring.format_ratfunc(&spectrum.nonzero_eigenvalue),
            spectrum.zero_multiplicity,
            started.elapsed()
        );
    }

    let ss = build_m_parametric(2)?;
    let ratio = ss.c_sym.clone() / unnormalized_constant();
    println!("c / (ab/(a+bk)^2) = {}", ss.ring.format_ratfunc(&ratio));

    // Substituting numbers commutes with building M numerically.
    let q = |s: &str| parse_rational(s).expect("literal");
    let point = FamilyPoint {
        a: q("2"),
        b: q("3"),
        k: q("1/2"),
        d: vec![[q("1"), q("-1")], [q("5/2"), q("0")]],
    };
    let m = ss.substitute(&point).ok_or("pole")?;
    let system = point.to_system_spec()?;
    let sd = perturb_rank::validate_system(&system)?;
    let numeric = perturb_rank::build_m(&system, &sd)?;
    assert_eq!(m, numeric.m);
    println!("substitution at (a, b, k) = (2, 3, 1/2) matches the exact pipeline");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
