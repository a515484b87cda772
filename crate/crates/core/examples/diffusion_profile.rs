// The Gaussian leading term and the parabolic equation it solves.
//
// With initial data `exp(-|ζ|²/(2σ₀²))`, the profile stays Gaussian with
// covariance `σ₀² E - 2tM`. The central-difference residual of
// `φ_t = Σ M_ij φ_ζiζj` shrinks by about 4 each time `h` halves.
//
// ```bash
// cargo run --example diffusion_profile
// ```

use std::error::Error;

use perturb_rank::asymptotics::{leading_term_eval, DiffusionProfile, ProfileQuery};
use perturb_rank::exact_linalg::parse_rational;
use perturb_rank::{build_m, validate_system, RationalMatrix, SystemSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let q = |s: &str| parse_rational(s).expect("literal");
    let a = RationalMatrix::from_rows(vec![vec![q("-1"), q("1")], vec![q("1"), q("-1")]])?;
    let system = SystemSpec::new(a, vec![vec![q("1"), q("0")], vec![q("0"), q("1")]], "W1")?;
    let sd = validate_system(&system)?;
    let ts = build_m(&system, &sd)?;

    let profile = DiffusionProfile::new(&ts.m, 1.0, 1.0)?;
    let (t, zeta) = (0.7, [0.3, -0.4]);
    println!("phi0(0, 1) = {:.12}", profile.eval(1.0, &[0.0, 0.0])?);
    println!("mass(0) = {:.12}, mass(2) = {:.12}", profile.mass(0.0)?, profile.mass(2.0)?);

    let mut previous = None;
    for h in [1e-2, 5e-3, 2.5e-3] {
        let r = profile.residual(t, &zeta, h)?;
        match previous {
            Some(p) => println!("h = {h:.1e}: residual = {r:.3e}, ratio = {:.3}", p / r),
            None => println!("h = {h:.1e}: residual = {r:.3e}"),
        }
        previous = Some(r);
    }

    let query = ProfileQuery::new(0.05, 0.7, vec![0.36, 0.33], 1.0, 1.0)?;
    let u = leading_term_eval(&system, &sd, &ts, &query)?;
    println!("U(x = (0.36, 0.33), t = 0.7, eps = 0.05) = {u:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
