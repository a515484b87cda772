// What happens outside the sign-preserving families.
//
// Conjugating a Markov generator by a dense invertible `T` keeps the
// spectrum of `A` but not the sign structure, and `M` often stops being
// negative semidefinite. The rank law still holds on these samples; only
// dissipativity fails.
//
// ```bash
// cargo run --release --example dense_similarity
// ```

use std::error::Error;

use perturb_rank::model::GeneratorFamily;
use perturb_rank::search::{run_campaign, CampaignConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut cfg = CampaignConfig::new((3, 3), (2, 2), 20, 7);
    cfg.families = vec![GeneratorFamily::DenseSimilarity];
    let report = run_campaign(&cfg)?;
    let cell = &report.cells[0];
    println!(
        "n = 3, K = 2: {} samples, {} rank matches, {} with a positive eigenvalue",
        cell.samples,
        cell.matches,
        cell.dissipativity_violations.len()
    );
    if let Some(ce) = cell.dissipativity_violations.first() {
        println!(
            "first one: sample {} (seed {}), eigenvalues {:?}",
            ce.index, ce.seed, ce.report.eigenvalues
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
