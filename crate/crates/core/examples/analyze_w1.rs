// Exact transfer structure of the smallest two-species system.
//
// `A = [[-1, 1], [1, -1]]` with one species moving along `x` and the other
// along `y`. Every quantity below is an exact rational.
//
// ```bash
// cargo run --example analyze_w1
// ```

use std::error::Error;

use perturb_rank::exact_linalg::{format_rational, parse_rational, RationalMatrix};
use perturb_rank::{analyze_structure, build_m, validate_system, Rational, SystemSpec};

fn q(s: &str) -> Rational {
    parse_rational(s).expect("valid rational literal")
}

fn show(m: &RationalMatrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(", "))
        .map(|r| format!("[{r}]"))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = RationalMatrix::from_rows(vec![vec![q("-1"), q("1")], vec![q("1"), q("-1")]])?;
    let d = vec![vec![q("1"), q("0")], vec![q("0"), q("1")]];
    let system = SystemSpec::new(a, d, "W1")?;

    let sd = validate_system(&system)?;
    let ts = build_m(&system, &sd)?;
    let report = analyze_structure(&ts, &system);

    let v: Vec<String> = ts.v.iter().map(format_rational).collect();
    println!("v = ({})", v.join(", "));
    println!("G = {}", show(&ts.g));
    println!("M = {}", show(&ts.m));
    println!("rank M = {} (predicted {})", report.rank_exact, report.predicted_rank);
    println!("eigenvalues = {:?}", report.eigenvalues);

    assert_eq!(ts.m[(0, 0)], q("-1/8"));
    assert_eq!(ts.m[(0, 1)], q("1/8"));
    assert_eq!(report.rank_exact, 1);
    assert!((report.eigenvalues[0] + 0.25).abs() < 1e-10);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
