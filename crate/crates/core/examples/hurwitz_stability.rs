// Exact stability of an interaction matrix.
//
// A valid `A` has a simple zero eigenvalue and the rest in the open left
// half-plane. We deflate the zero root from the characteristic polynomial
// and run the Routh-Hurwitz test on what remains.
//
// ```bash
// cargo run --example hurwitz_stability
// ```

use std::error::Error;

use perturb_rank::exact_linalg::{
    charpoly_exact, format_rational, hurwitz_minors, hurwitz_stable, parse_rational, RationalMatrix,
};

fn matrix(rows: &[&[&str]]) -> RationalMatrix {
    RationalMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| parse_rational(s).expect("literal")).collect())
            .collect(),
    )
    .expect("rectangular")
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cases = [
        ("three-state chain", matrix(&[&["-1", "1", "0"], &["1", "-2", "1"], &["0", "1", "-1"]])),
        ("rotation about 0", matrix(&[&["0", "0", "0"], &["0", "0", "-1"], &["0", "1", "0"]])),
    ];
    for (name, a) in cases {
        let p = charpoly_exact(&a)?;
        let reduced = p.deflate_zero_roots();
        let minors: Vec<String> = hurwitz_minors(&reduced)?.iter().map(format_rational).collect();
        println!("{name}: det(λI - A) = {p}");
        println!("  zero roots: {}, Hurwitz minors of the rest: [{}]", p.zero_root_multiplicity(), minors.join(", "));
        println!("  remaining roots strictly stable: {}", hurwitz_stable(&reduced)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
