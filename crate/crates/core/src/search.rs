//! Randomized exact campaigns over `(n, K)` cells.
//!
//! Each cell draws `samples_per_cell` instances from the configured
//! generator families, builds `M` exactly and compares its rank with
//! `min(n − 1, K)`. Per-instance seeds are derived from
//! `(seed, n, K, index)`, so a campaign is a pure function of its
//! configuration no matter how the work is scheduled. A campaign is evidence
//! for the rank law on the sampled instances; it is not a proof.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::{analyze_structure, build_m, predicted_rank, StructureReport};
use crate::cli::files::{write_instance, FileError};
use crate::exact_linalg::LinalgError;
use crate::model::{
    generate_instance, validate_system, GeneratorConfig, GeneratorFamily, ModelError, SystemSpec,
};

pub const MIN_CELL_DIMENSION: usize = 2;
pub const MAX_CELL_DIMENSION: usize = 8;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid campaign configuration: {0}")]
    Config(String),
    #[error("cell n = {n}, K = {k}, sample {index}: {source}")]
    Generation {
        n: usize,
        k: usize,
        index: usize,
        #[source]
        source: ModelError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    File(#[from] FileError),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub n_range: (usize, usize),
    #[serde(rename = "K_range")]
    pub k_range: (usize, usize),
    pub samples_per_cell: usize,
    pub seed: u64,
    pub families: Vec<GeneratorFamily>,
    /// Zero uses every available core.
    pub worker_count: usize,
    pub entry_bound: u32,
    /// Where counterexample instance files are written, if anywhere.
    #[serde(skip)]
    pub artifact_dir: Option<PathBuf>,
}

impl CampaignConfig {
    pub fn new(n_range: (usize, usize), k_range: (usize, usize), samples_per_cell: usize, seed: u64) -> Self {
        Self {
            n_range,
            k_range,
            samples_per_cell,
            seed,
            families: vec![GeneratorFamily::MarkovGenerator, GeneratorFamily::SimilarityTransformed],
            worker_count: 0,
            entry_bound: 9,
            artifact_dir: None,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        for (name, (lo, hi)) in [("n", self.n_range), ("K", self.k_range)] {
            if lo > hi || lo < MIN_CELL_DIMENSION || hi > MAX_CELL_DIMENSION {
                return Err(SearchError::Config(format!(
                    "{name} range {lo}..={hi} must lie within {MIN_CELL_DIMENSION}..={MAX_CELL_DIMENSION}"
                )));
            }
        }
        if self.samples_per_cell == 0 {
            return Err(SearchError::Config("samples_per_cell must be at least 1".into()));
        }
        if self.families.is_empty() {
            return Err(SearchError::Config("at least one generator family is required".into()));
        }
        if self.entry_bound == 0 {
            return Err(SearchError::Config("entry_bound must be at least 1".into()));
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<(usize, usize)> {
        (self.n_range.0..=self.n_range.1)
            .flat_map(|n| (self.k_range.0..=self.k_range.1).map(move |k| (n, k)))
            .collect()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of sample `index` in cell `(n, K)`.
pub fn instance_seed(seed: u64, n: usize, k: usize, index: usize) -> u64 {
    [n as u64, k as u64, index as u64]
        .into_iter()
        .fold(splitmix64(seed), |h, x| splitmix64(h ^ x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleKind {
    /// `rank M ≠ min(n − 1, K)` on a non-degenerate instance.
    RankMismatch,
    /// `M` has a positive eigenvalue beyond tolerance.
    NotDissipative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub kind: CounterexampleKind,
    pub index: usize,
    pub seed: u64,
    pub family: Option<GeneratorFamily>,
    pub instance: SystemSpec,
    pub report: StructureReport,
    pub artifact: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Match(StructureReport),
    Degenerate(StructureReport),
    Violation(StructureReport),
}

impl Classification {
    pub fn report(&self) -> &StructureReport {
        match self {
            Classification::Match(r) | Classification::Degenerate(r) | Classification::Violation(r) => r,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::Match(_) => "match",
            Classification::Degenerate(_) => "degenerate",
            Classification::Violation(_) => "violation",
        }
    }
}

/// Degenerate if some `Ψᵢ h₁` vanishes; otherwise a match iff
/// `rank M = min(n − 1, K)`.
pub fn classify_instance(s: &SystemSpec) -> Result<Classification, SearchError> {
    let sd = validate_system(s)?;
    let ts = build_m(s, &sd)?;
    let report = analyze_structure(&ts, s);
    Ok(if report.degenerate {
        Classification::Degenerate(report)
    } else if report.rank_matches_prediction {
        Classification::Match(report)
    } else {
        Classification::Violation(report)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub matches: usize,
    pub degenerate: usize,
    /// Rank counterexamples, ordered by sample index.
    pub violations: Vec<Counterexample>,
    /// Instances whose `M` is not negative semidefinite (counted apart from
    /// the rank tally).
    pub dissipativity_violations: Vec<Counterexample>,
    /// Instances where the numeric rank differs from the exact rank.
    pub numeric_rank_mismatches: usize,
    /// Instances with `rank M > min(n − 1, K)`.
    pub ceiling_breaches: usize,
    /// Largest `λ_max / max|M|` seen in the cell.
    pub max_eigenvalue_ratio: f64,
}

impl CellResult {
    pub fn predicted_rank(&self) -> usize {
        predicted_rank(self.n, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AllMatch,
    ViolationsFound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub config: CampaignConfig,
    pub cells: Vec<CellResult>,
    pub runtime_seconds: f64,
    pub verdict: Verdict,
}

impl SearchReport {
    pub fn total_samples(&self) -> usize {
        self.cells.iter().map(|c| c.samples).sum()
    }

    pub fn violation_count(&self) -> usize {
        self.cells.iter().map(|c| c.violations.len()).sum()
    }

    pub fn dissipativity_violation_count(&self) -> usize {
        self.cells.iter().map(|c| c.dissipativity_violations.len()).sum()
    }

    /// Any counterexample of either kind.
    pub fn has_findings(&self) -> bool {
        self.violation_count() + self.dissipativity_violation_count() > 0
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Counterexample> {
        self.cells
            .iter()
            .flat_map(|c| c.violations.iter().chain(&c.dissipativity_violations))
    }
}

struct Outcome {
    index: usize,
    seed: u64,
    family: GeneratorFamily,
    instance: SystemSpec,
    classification: Classification,
}

fn run_sample(cfg: &CampaignConfig, n: usize, k: usize, index: usize) -> Result<Outcome, SearchError> {
    let seed = instance_seed(cfg.seed, n, k, index);
    let family = cfg.families[index % cfg.families.len()];
    let gen = GeneratorConfig {
        n,
        k,
        seed,
        family,
        entry_bound: cfg.entry_bound,
    };
    let wrap = |source| SearchError::Generation { n, k, index, source };
    let instance = generate_instance(&gen).map_err(wrap)?;
    let classification = match classify_instance(&instance) {
        Ok(c) => c,
        Err(SearchError::Model(e)) => return Err(wrap(e)),
        Err(e) => return Err(e),
    };
    Ok(Outcome {
        index,
        seed,
        family,
        instance,
        classification,
    })
}

fn counterexample(kind: CounterexampleKind, o: &Outcome) -> Counterexample {
    Counterexample {
        kind,
        index: o.index,
        seed: o.seed,
        family: Some(o.family),
        instance: o.instance.clone(),
        report: o.classification.report().clone(),
        artifact: None,
    }
}

fn aggregate(n: usize, k: usize, outcomes: &[Outcome]) -> CellResult {
    let mut cell = CellResult {
        n,
        k,
        samples: outcomes.len(),
        matches: 0,
        degenerate: 0,
        violations: Vec::new(),
        dissipativity_violations: Vec::new(),
        numeric_rank_mismatches: 0,
        ceiling_breaches: 0,
        max_eigenvalue_ratio: f64::NEG_INFINITY,
    };
    for o in outcomes {
        let report = o.classification.report();
        match &o.classification {
            Classification::Match(_) => cell.matches += 1,
            Classification::Degenerate(_) => cell.degenerate += 1,
            Classification::Violation(_) => {
                cell.violations.push(counterexample(CounterexampleKind::RankMismatch, o))
            }
        }
        if !report.dissipative() {
            cell.dissipativity_violations
                .push(counterexample(CounterexampleKind::NotDissipative, o));
        }
        if report.numeric_rank != report.rank_exact {
            cell.numeric_rank_mismatches += 1;
        }
        if report.rank_exact > report.predicted_rank {
            cell.ceiling_breaches += 1;
        }
        cell.max_eigenvalue_ratio = cell.max_eigenvalue_ratio.max(report.max_eigenvalue_ratio());
    }
    cell
}

fn artifact_name(cell: &CellResult, c: &Counterexample) -> String {
    let kind = match c.kind {
        CounterexampleKind::RankMismatch => "rank-violation",
        CounterexampleKind::NotDissipative => "not-dissipative",
    };
    format!("{kind}-n{}-K{}-i{}.json", cell.n, cell.k, c.index)
}

/// Writes each counterexample as a standalone instance file in `dir`.
pub fn write_counterexamples(report: &mut SearchReport, dir: &Path) -> Result<(), SearchError> {
    if !report.has_findings() {
        return Ok(());
    }
    fs::create_dir_all(dir).map_err(|e| FileError::io(dir, e))?;
    for cell in &mut report.cells {
        let snapshot = cell.clone();
        for c in cell.violations.iter_mut().chain(cell.dissipativity_violations.iter_mut()) {
            let path = dir.join(artifact_name(&snapshot, c));
            write_instance(&path, &c.instance)?;
            c.artifact = Some(path);
        }
    }
    Ok(())
}

/// Runs every cell of the campaign. Results are ordered by `(n, K)` and,
/// inside a cell, by sample index.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    let started = Instant::now();
    let cells = cfg.cells();
    let tasks: Vec<(usize, usize, usize)> = cells
        .iter()
        .flat_map(|&(n, k)| (0..cfg.samples_per_cell).map(move |i| (n, k, i)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(n, k, i)| run_sample(cfg, n, k, i))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let cell_results: Vec<CellResult> = outcomes
        .chunks(cfg.samples_per_cell)
        .zip(&cells)
        .map(|(chunk, &(n, k))| aggregate(n, k, chunk))
        .collect();
    let verdict = if cell_results.iter().all(|c| c.violations.is_empty()) {
        Verdict::AllMatch
    } else {
        Verdict::ViolationsFound
    };
    let mut report = SearchReport {
        config: cfg.clone(),
        cells: cell_results,
        runtime_seconds: 0.0,
        verdict,
    };
    if let Some(dir) = &cfg.artifact_dir {
        write_counterexamples(&mut report, dir)?;
    }
    report.runtime_seconds = started.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{qm, qv};

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a = instance_seed(42, 2, 3, 0);
        assert_eq!(a, instance_seed(42, 2, 3, 0));
        assert_ne!(a, instance_seed(42, 3, 2, 0));
        assert_ne!(a, instance_seed(42, 2, 3, 1));
        assert_ne!(a, instance_seed(43, 2, 3, 0));
    }

    #[test]
    fn classify_examples() {
        let w1 = SystemSpec::new(
            qm(&[&["-1", "1"], &["1", "-1"]]),
            vec![qv(&["1", "0"]), qv(&["0", "1"])],
            "W1",
        )
        .unwrap();
        assert_eq!(classify_instance(&w1).unwrap().label(), "match");

        let flat = SystemSpec::new(
            qm(&[&["-1", "1"], &["1", "-1"]]),
            vec![qv(&["3", "3"]), qv(&["3", "3"])],
            "flat",
        )
        .unwrap();
        let c = classify_instance(&flat).unwrap();
        assert_eq!(c.label(), "degenerate");
        assert_eq!(c.report().rank_exact, 0);

        // parallel transport directions: rank 1 < min(2, 2) with every Ψᵢh₁ ≠ 0
        let parallel = SystemSpec::new(
            qm(&[&["-2", "1", "1"], &["1", "-2", "1"], &["1", "1", "-2"]]),
            vec![qv(&["1", "2", "3"]), qv(&["2", "4", "6"])],
            "parallel",
        )
        .unwrap();
        let c = classify_instance(&parallel).unwrap();
        assert_eq!(c.label(), "violation");
        assert_eq!(c.report().rank_exact, 1);
        assert_eq!(c.report().predicted_rank, 2);
    }

    #[test]
    fn config_validation() {
        assert!(CampaignConfig::new((1, 3), (2, 2), 1, 0).validate().is_err());
        assert!(CampaignConfig::new((2, 9), (2, 2), 1, 0).validate().is_err());
        assert!(CampaignConfig::new((3, 2), (2, 2), 1, 0).validate().is_err());
        assert!(CampaignConfig::new((2, 2), (2, 2), 0, 0).validate().is_err());
        let mut cfg = CampaignConfig::new((2, 2), (2, 2), 1, 0);
        cfg.families.clear();
        assert!(cfg.validate().is_err());
        assert_eq!(CampaignConfig::new((2, 3), (4, 5), 1, 0).cells(), vec![(2, 4), (2, 5), (3, 4), (3, 5)]);
    }

    #[test]
    fn small_campaign_partitions_samples() {
        let mut cfg = CampaignConfig::new((2, 3), (2, 3), 12, 5);
        cfg.worker_count = 2;
        let r = run_campaign(&cfg).unwrap();
        assert_eq!(r.cells.len(), 4);
        assert_eq!(r.total_samples(), 48);
        for c in &r.cells {
            assert_eq!(c.matches + c.degenerate + c.violations.len(), c.samples);
            assert_eq!(c.matches, c.samples);
            assert_eq!(c.ceiling_breaches, 0);
        }
        assert_eq!(r.verdict, Verdict::AllMatch);
    }
}
