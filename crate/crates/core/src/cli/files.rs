//! Instance and report files: UTF-8 JSON with stable key names. Exact values
//! are always `"p/q"` strings; only eigenvalues and profile values are floats.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::{StructureReport, TransferStructure};
use crate::exact_linalg::{format_rational, parse_rational, Rational, RationalMatrix};
use crate::model::{ModelError, SpectralData, SystemSpec};
use crate::search::{CampaignConfig, Counterexample, CounterexampleKind, SearchReport, Verdict};
use crate::symbolic::{
    eigen_closed_form_n2, unnormalized_constant, verify_rank_one_identity, Expr, SymbolicStructure,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension error: {0}")]
    Dimension(String),
}

impl FileError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        FileError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }
}

impl From<ModelError> for FileError {
    fn from(e: ModelError) -> Self {
        FileError::Dimension(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format_version: u32,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<String>>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<String>>,
    #[serde(default)]
    pub label: String,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn matrix_strings(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

fn parse_vec(field: &str, v: &[String], len: usize) -> Result<Vec<Rational>, FileError> {
    if v.len() != len {
        return Err(FileError::Dimension(format!(
            "{field}: {} entries, expected {len}",
            v.len()
        )));
    }
    v.iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|e| FileError::Parse(format!("{field}[{i}]: {e}"))))
        .collect()
}

impl InstanceFile {
    pub fn from_spec(s: &SystemSpec) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            n: s.n,
            k: s.k,
            a: matrix_strings(&s.a),
            d: s.d.iter().map(|d| strings(d)).collect(),
            h: s.initial_direction.as_ref().map(|h| strings(h)),
            label: s.label.clone(),
        }
    }

    pub fn to_spec(&self) -> Result<SystemSpec, FileError> {
        if self.format_version == 0 || self.format_version > FORMAT_VERSION {
            return Err(FileError::Parse(format!(
                "format_version {} is not supported (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.a.len() != self.n {
            return Err(FileError::Dimension(format!("A: {} rows, expected n = {}", self.a.len(), self.n)));
        }
        if self.d.len() != self.k {
            return Err(FileError::Dimension(format!("D: {} diagonals, expected K = {}", self.d.len(), self.k)));
        }
        let rows = self
            .a
            .iter()
            .enumerate()
            .map(|(i, r)| parse_vec(&format!("A[{i}]"), r, self.n))
            .collect::<Result<Vec<_>, _>>()?;
        let d = self
            .d
            .iter()
            .enumerate()
            .map(|(i, r)| parse_vec(&format!("D[{i}]"), r, self.n))
            .collect::<Result<Vec<_>, _>>()?;
        let h = self.h.as_ref().map(|h| parse_vec("H", h, self.n)).transpose()?;
        let a = RationalMatrix::from_rows(rows).map_err(|e| FileError::Dimension(e.to_string()))?;
        let mut spec = SystemSpec::new(a, d, self.label.clone())?;
        spec.initial_direction = h;
        spec.check_shape()?;
        Ok(spec)
    }
}

pub fn parse_instance_str(text: &str) -> Result<SystemSpec, FileError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| FileError::Parse(e.to_string()))?;
    file.to_spec()
}

pub fn parse_instance(path: &Path) -> Result<SystemSpec, FileError> {
    let text = fs::read_to_string(path).map_err(|e| FileError::io(path, e))?;
    parse_instance_str(&text)
}

pub fn instance_to_string(s: &SystemSpec) -> String {
    let mut text = serde_json::to_string_pretty(&InstanceFile::from_spec(s)).expect("serializable");
    text.push('\n');
    text
}

pub fn write_instance(path: &Path, s: &SystemSpec) -> Result<(), FileError> {
    fs::write(path, instance_to_string(s)).map_err(|e| FileError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSection {
    pub h1: Vec<String>,
    pub h1_star: Vec<String>,
    pub normalized: bool,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferSection {
    pub v: Vec<String>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<String>>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<String>>,
    pub psi_h1: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureSection {
    pub rank_exact: usize,
    pub predicted_rank: usize,
    pub rank_matches_prediction: bool,
    pub numeric_rank: usize,
    pub eigenvalues: Vec<f64>,
    pub kernel_directions: Vec<Vec<String>>,
    pub degenerate: bool,
    pub dissipative: bool,
    pub max_eigenvalue_ratio: f64,
}

impl StructureSection {
    pub fn from_report(r: &StructureReport) -> Self {
        Self {
            rank_exact: r.rank_exact,
            predicted_rank: r.predicted_rank,
            rank_matches_prediction: r.rank_matches_prediction,
            numeric_rank: r.numeric_rank,
            eigenvalues: r.eigenvalues.clone(),
            kernel_directions: r.kernel_directions.iter().map(|v| strings(v)).collect(),
            degenerate: r.degenerate,
            dissipative: r.dissipative(),
            max_eigenvalue_ratio: r.max_eigenvalue_ratio(),
        }
    }
}

/// A symbolic value printed as text and as an operator tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolicValue {
    pub text: String,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolicSection {
    #[serde(rename = "K")]
    pub k: usize,
    pub variables: Vec<String>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<SymbolicValue>>,
    pub h1: Vec<SymbolicValue>,
    pub h1_star: Vec<SymbolicValue>,
    pub v: Vec<SymbolicValue>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<SymbolicValue>>,
    pub delta: Vec<SymbolicValue>,
    /// `M = −c ΔΔᵀ` under `(h₁, h₁*) = 1`.
    pub c: SymbolicValue,
    pub identity_verified: bool,
    pub nonzero_eigenvalue: Option<SymbolicValue>,
    pub zero_multiplicity: Option<usize>,
    /// `ab/(a + bk)²`, the same constant without the normalization.
    pub unnormalized_constant: SymbolicValue,
    pub constant_ratio: SymbolicValue,
}

impl SymbolicSection {
    pub fn from_structure(ss: &SymbolicStructure) -> Self {
        let val = |f: &crate::symbolic::RatFunc| SymbolicValue {
            text: ss.ring.format_ratfunc(f),
            expr: ss.ring.ratfunc_expr(f),
        };
        let vals = |v: &[crate::symbolic::RatFunc]| v.iter().map(val).collect::<Vec<_>>();
        let closed = eigen_closed_form_n2(ss).ok();
        let p = unnormalized_constant();
        Self {
            k: ss.k,
            variables: ss.ring.names().to_vec(),
            a: ss.a.to_rows().iter().map(|r| vals(r)).collect(),
            h1: vals(&ss.h1),
            h1_star: vals(&ss.h1_star),
            v: vals(&ss.transfer.v),
            m: ss.m_sym.to_rows().iter().map(|r| vals(r)).collect(),
            delta: vals(&ss.delta_sym),
            c: val(&ss.c_sym),
            identity_verified: verify_rank_one_identity(ss),
            nonzero_eigenvalue: closed.as_ref().map(|c| val(&c.nonzero_eigenvalue)),
            zero_multiplicity: closed.as_ref().map(|c| c.zero_multiplicity),
            constant_ratio: val(&(ss.c_sym.clone() / p.clone())),
            unnormalized_constant: val(&p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSection {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub predicted_rank: usize,
    pub samples: usize,
    pub matches: usize,
    pub degenerate: usize,
    pub violations: usize,
    pub dissipativity_violations: usize,
    pub numeric_rank_mismatches: usize,
    pub ceiling_breaches: usize,
    pub max_eigenvalue_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSection {
    pub kind: CounterexampleKind,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub index: usize,
    pub seed: u64,
    pub family: Option<String>,
    pub structure: StructureSection,
    pub artifact: Option<String>,
    pub instance: InstanceFile,
}

impl CounterexampleSection {
    fn from_counterexample(c: &Counterexample) -> Self {
        Self {
            kind: c.kind,
            n: c.instance.n,
            k: c.instance.k,
            index: c.index,
            seed: c.seed,
            family: c.family.map(|f| f.name().to_string()),
            structure: StructureSection::from_report(&c.report),
            artifact: c.artifact.as_ref().map(|p| p.display().to_string()),
            instance: InstanceFile::from_spec(&c.instance),
        }
    }
}

pub const EVIDENCE_NOTE: &str = "Randomized exact-arithmetic evidence on sampled instances; this is not a proof of the rank law.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSection {
    pub config: CampaignConfig,
    pub note: String,
    pub verdict: Verdict,
    pub total_samples: usize,
    pub violations: usize,
    pub dissipativity_violations: usize,
    pub cells: Vec<CellSection>,
    pub counterexamples: Vec<CounterexampleSection>,
    pub runtime_seconds: f64,
}

impl CampaignSection {
    pub fn from_report(r: &SearchReport) -> Self {
        Self {
            config: r.config.clone(),
            note: EVIDENCE_NOTE.into(),
            verdict: r.verdict,
            total_samples: r.total_samples(),
            violations: r.violation_count(),
            dissipativity_violations: r.dissipativity_violation_count(),
            cells: r
                .cells
                .iter()
                .map(|c| CellSection {
                    n: c.n,
                    k: c.k,
                    predicted_rank: c.predicted_rank(),
                    samples: c.samples,
                    matches: c.matches,
                    degenerate: c.degenerate,
                    violations: c.violations.len(),
                    dissipativity_violations: c.dissipativity_violations.len(),
                    numeric_rank_mismatches: c.numeric_rank_mismatches,
                    ceiling_breaches: c.ceiling_breaches,
                    max_eigenvalue_ratio: c.max_eigenvalue_ratio,
                })
                .collect(),
            counterexamples: r.counterexamples().map(CounterexampleSection::from_counterexample).collect(),
            runtime_seconds: r.runtime_seconds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transfer: Option<TransferSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<SymbolicSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub campaign: Option<CampaignSection>,
}

impl ReportFile {
    pub fn empty() -> Self {
        Self {
            format_version: FORMAT_VERSION,
            instance: None,
            spectral: None,
            transfer: None,
            structure: None,
            symbolic: None,
            campaign: None,
        }
    }

    pub fn analysis(s: &SystemSpec, sd: &SpectralData, ts: &TransferStructure, r: &StructureReport) -> Self {
        Self {
            instance: Some(InstanceFile::from_spec(s)),
            spectral: Some(SpectralSection {
                h1: strings(&sd.h1),
                h1_star: strings(&sd.h1_star),
                normalized: sd.normalized,
                stable: sd.stable,
            }),
            transfer: Some(TransferSection {
                v: strings(&ts.v),
                g: matrix_strings(&ts.g),
                m: matrix_strings(&ts.m),
                psi_h1: ts.psi_h1.iter().map(|w| strings(w)).collect(),
            }),
            structure: Some(StructureSection::from_report(r)),
            ..Self::empty()
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }

    pub fn write(&self, path: &Path) -> Result<(), FileError> {
        fs::write(path, self.to_json()).map_err(|e| FileError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = fs::read_to_string(path).map_err(|e| FileError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| FileError::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W1: &str = r#"{
      "format_version": 1,
      "n": 2,
      "K": 2,
      "A": [["-1", "1"], ["1", "-1"]],
      "D": [["1", "0"], ["0", "1"]],
      "label": "W1"
    }"#;

    #[test]
    fn parses_w1() {
        let s = parse_instance_str(W1).unwrap();
        assert_eq!((s.n, s.k), (2, 2));
        assert_eq!(s.label, "W1");
        assert_eq!(parse_instance_str(&instance_to_string(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_bad_instances() {
        let bad_shape = W1.replace(r#"[["-1", "1"], ["1", "-1"]]"#, r#"[["-1", "1", "0"], ["1", "-1", "0"]]"#);
        assert!(matches!(parse_instance_str(&bad_shape), Err(FileError::Dimension(_))));
        let zero_den = W1.replace(r#""-1", "1"]"#, r#""1/0", "1"]"#);
        let err = parse_instance_str(&zero_den).unwrap_err();
        assert!(matches!(&err, FileError::Parse(m) if m.contains("A[0][0]")), "{err}");
        let bad_k = W1.replace(r#""K": 2"#, r#""K": 3"#);
        assert!(matches!(parse_instance_str(&bad_k), Err(FileError::Dimension(_))));
        let bad_json = W1.replace("\"n\": 2,", "\"n\": 2");
        assert!(matches!(parse_instance_str(&bad_json), Err(FileError::Parse(m)) if m.contains("line")));
        let bad_version = W1.replace("\"format_version\": 1", "\"format_version\": 9");
        assert!(parse_instance_str(&bad_version).is_err());
        let bad_h = W1.replace("\"label\"", "\"H\": [\"1\"], \"label\"");
        assert!(matches!(parse_instance_str(&bad_h), Err(FileError::Dimension(_))));
    }

    #[test]
    fn keeps_initial_direction() {
        let with_h = W1.replace("\"label\"", "\"H\": [\"1/2\", \"-3\"], \"label\"");
        let s = parse_instance_str(&with_h).unwrap();
        assert!(s.initial_direction.is_some());
        assert!(instance_to_string(&s).contains("\"H\""));
    }
}
