// Instance files and the command-line entry point.
//
// Writes an instance as JSON, then drives `analyze` and `residual` through
// the same function the `perturb-rank` binary calls.
//
// ```bash
// cargo run --example instance_files
// ```

use std::error::Error;

use perturb_rank::cli::files::{parse_instance, write_instance, ReportFile};
use perturb_rank::cli::run_command_with;
use perturb_rank::exact_linalg::parse_rational;
use perturb_rank::{RationalMatrix, SystemSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let q = |s: &str| parse_rational(s).expect("literal");
    let a = RationalMatrix::from_rows(vec![
        vec![q("-2"), q("1"), q("1")],
        vec![q("1"), q("-1"), q("0")],
        vec![q("1"), q("0"), q("-1")],
    ])?;
    let d = vec![vec![q("1"), q("0"), q("-1")], vec![q("0"), q("2"), q("1/2")]];
    let system = SystemSpec::new(a, d, "three-species")?;

    let dir = std::env::temp_dir().join(format!("perturb-rank-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let instance = dir.join("instance.json");
    let report = dir.join("report.json");
    write_instance(&instance, &system)?;
    assert_eq!(parse_instance(&instance)?, system);

    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = ["perturb-rank", "analyze", instance.to_str().ok_or("path")?, "--out", report.to_str().ok_or("path")?];
    let code = run_command_with(argv, &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));

    let written = ReportFile::read(&report)?;
    println!("report rank: {:?}", written.structure.map(|s| s.rank_exact));

    out.clear();
    let argv = ["perturb-rank", "residual", "--instance", instance.to_str().ok_or("path")?, "--t", "0.5", "--zeta", "0.1,-0.2", "--h", "0.001"];
    let code = run_command_with(argv, &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    assert_eq!(code, 0);

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
