//! Command-line front end.
//!
//! Exit codes: `0` success, `1` invalid input or any other failure, `2` when
//! a search produced counterexamples.

pub mod files;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::asymptotics::{
    analyze_structure, build_m, leading_term_eval, to_f64, DiffusionProfile, ProfileQuery,
};
use crate::exact_linalg::{format_rational, Rational, RationalMatrix};
use crate::model::{validate_system, GeneratorFamily};
use crate::search::{run_campaign, CampaignConfig, Verdict};
use crate::symbolic::build_m_parametric;
use files::{parse_instance, CampaignSection, ReportFile, SymbolicSection, EVIDENCE_NOTE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FINDINGS: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "perturb-rank", version, about = "Exact structure of the diffusion matrix M")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate an instance, build M and report its rank and spectrum.
    Analyze {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized exact campaign over (n, K) cells.
    Search(SearchArgs),
    /// Parametric two-equation family with K spatial variables.
    Symbolic {
        #[arg(long = "k")]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leading term φ₀(ζ, t) h₁ at a physical point.
    Phi0 {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<f64>,
    },
    /// Finite-difference residual of the limit parabolic equation.
    Residual {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        zeta: Vec<f64>,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long)]
    k_min: usize,
    #[arg(long)]
    k_max: usize,
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    /// Comma-separated generator families.
    #[arg(long, value_delimiter = ',', default_value = "markov_generator,similarity_transformed")]
    families: Vec<String>,
    #[arg(long, env = "PERTURB_RANK_WORKERS", default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = 9)]
    entry_bound: u32,
    #[arg(long)]
    out: PathBuf,
    /// Directory for counterexample instance files (default: next to --out).
    #[arg(long)]
    artifacts: Option<PathBuf>,
}

fn join(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

fn format_matrix(m: &RationalMatrix) -> String {
    let rows: Vec<String> = m.to_rows().iter().map(|r| format!("[{}]", join(r))).collect();
    format!("[{}]", rows.join(", "))
}

fn default_artifact_dir(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "search".into());
    out.with_file_name(format!("{stem}-counterexamples"))
}

type CmdResult = Result<i32, String>;

fn analyze(instance: &Path, out: Option<&Path>, w: &mut dyn Write) -> CmdResult {
    let s = parse_instance(instance).map_err(|e| e.to_string())?;
    let sd = validate_system(&s).map_err(|e| e.to_string())?;
    let ts = build_m(&s, &sd).map_err(|e| e.to_string())?;
    let r = analyze_structure(&ts, &s);
    let class = if r.degenerate {
        "degenerate"
    } else if r.rank_matches_prediction {
        "match"
    } else {
        "violation"
    };
    let eig: Vec<String> = r.eigenvalues.iter().map(|x| format!("{x:.12}")).collect();
    let kernel: Vec<String> = r.kernel_directions.iter().map(|v| format!("({})", join(v))).collect();
    let lines = [
        format!("instance: {} (n = {}, K = {})", s.label, s.n, s.k),
        format!("h1 = ({}), h1* = ({}), stable = {}", join(&sd.h1), join(&sd.h1_star), sd.stable),
        format!("v = ({})", join(&ts.v)),
        format!("G = {}", format_matrix(&ts.g)),
        format!("M = {}", format_matrix(&ts.m)),
        format!("rank M = {} (predicted min(n-1, K) = {}): {class}", r.rank_exact, r.predicted_rank),
        format!("eigenvalues: {}", eig.join(", ")),
        format!("kernel directions: {}", if kernel.is_empty() { "none".into() } else { kernel.join(", ") }),
        format!("dissipative: {}", r.dissipative()),
    ];
    for l in lines {
        writeln!(w, "{l}").map_err(|e| e.to_string())?;
    }
    if let Some(path) = out {
        ReportFile::analysis(&s, &sd, &ts, &r).write(path).map_err(|e| e.to_string())?;
    }
    Ok(EXIT_OK)
}

fn search(args: &SearchArgs, w: &mut dyn Write) -> CmdResult {
    let families = args
        .families
        .iter()
        .map(|f| GeneratorFamily::parse(f.trim()).ok_or_else(|| format!("unknown family {f:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = CampaignConfig {
        families,
        worker_count: args.workers,
        entry_bound: args.entry_bound,
        artifact_dir: Some(args.artifacts.clone().unwrap_or_else(|| default_artifact_dir(&args.out))),
        ..CampaignConfig::new((args.n_min, args.n_max), (args.k_min, args.k_max), args.samples, args.seed)
    };
    let report = run_campaign(&cfg).map_err(|e| e.to_string())?;
    let io = |e: std::io::Error| e.to_string();
    writeln!(w, "{:>3} {:>3} {:>5} {:>8} {:>8} {:>10} {:>12}", "n", "K", "rank", "samples", "matches", "violations", "nondissip.").map_err(io)?;
    for c in &report.cells {
        writeln!(
            w,
            "{:>3} {:>3} {:>5} {:>8} {:>8} {:>10} {:>12}",
            c.n,
            c.k,
            c.predicted_rank(),
            c.samples,
            c.matches,
            c.violations.len(),
            c.dissipativity_violations.len()
        )
        .map_err(io)?;
    }
    let verdict = match report.verdict {
        Verdict::AllMatch => "all_match",
        Verdict::ViolationsFound => "violations_found",
    };
    writeln!(w, "verdict: {verdict} ({} instances)", report.total_samples()).map_err(io)?;
    writeln!(w, "{EVIDENCE_NOTE}").map_err(io)?;
    for c in report.counterexamples() {
        if let Some(p) = &c.artifact {
            writeln!(w, "counterexample ({:?}): {}", c.kind, p.display()).map_err(io)?;
        }
    }
    let file = ReportFile {
        campaign: Some(CampaignSection::from_report(&report)),
        ..ReportFile::empty()
    };
    file.write(&args.out).map_err(|e| e.to_string())?;
    Ok(if report.has_findings() { EXIT_FINDINGS } else { EXIT_OK })
}

fn symbolic(k: usize, out: Option<&Path>, w: &mut dyn Write) -> CmdResult {
    let ss = build_m_parametric(k).map_err(|e| e.to_string())?;
    let section = SymbolicSection::from_structure(&ss);
    let io = |e: std::io::Error| e.to_string();
    writeln!(w, "two-equation family, K = {k}").map_err(io)?;
    writeln!(w, "c = {}", section.c.text).map_err(io)?;
    writeln!(
        w,
        "M = -c Δ Δᵀ with Δ_i = d_i1 - d_i2: {}",
        if section.identity_verified { "identity verified" } else { "identity FAILED" }
    )
    .map_err(io)?;
    match (&section.nonzero_eigenvalue, section.zero_multiplicity) {
        (Some(l), Some(z)) => {
            let terms: Vec<String> = (1..=k).map(|i| format!("Δ{i}^2")).collect();
            writeln!(w, "eigenvalues: 0 (multiplicity {z}), -c({}) = {}", terms.join(" + "), l.text).map_err(io)?;
        }
        _ => writeln!(w, "eigenvalues: closed form unavailable").map_err(io)?,
    }
    writeln!(
        w,
        "unnormalized constant ab/(a+bk)^2 = {}; c / that = {}",
        section.unnormalized_constant.text, section.constant_ratio.text
    )
    .map_err(io)?;
    if let Some(path) = out {
        let file = ReportFile {
            symbolic: Some(section.clone()),
            ..ReportFile::empty()
        };
        file.write(path).map_err(|e| e.to_string())?;
    }
    Ok(if section.identity_verified { EXIT_OK } else { EXIT_ERROR })
}

#[allow(clippy::too_many_arguments)]
fn phi0(instance: &Path, sigma: f64, t: f64, eps: f64, amplitude: f64, point: &[f64], w: &mut dyn Write) -> CmdResult {
    let s = parse_instance(instance).map_err(|e| e.to_string())?;
    let sd = validate_system(&s).map_err(|e| e.to_string())?;
    let ts = build_m(&s, &sd).map_err(|e| e.to_string())?;
    let q = ProfileQuery::new(eps, t, point.to_vec(), sigma, amplitude).map_err(|e| e.to_string())?;
    let u = leading_term_eval(&s, &sd, &ts, &q).map_err(|e| e.to_string())?;
    let zeta: Vec<f64> = point
        .iter()
        .zip(&ts.v)
        .map(|(x, v)| (x - to_f64(v) * t) / eps)
        .collect();
    let io = |e: std::io::Error| e.to_string();
    writeln!(w, "zeta = ({})", fmt_floats(&zeta)).map_err(io)?;
    writeln!(w, "U = ({})", fmt_floats(&u)).map_err(io)?;
    Ok(EXIT_OK)
}

fn fmt_floats(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.15e}")).collect::<Vec<_>>().join(", ")
}

fn residual(instance: &Path, t: f64, zeta: &[f64], h: f64, sigma: f64, amplitude: f64, w: &mut dyn Write) -> CmdResult {
    let s = parse_instance(instance).map_err(|e| e.to_string())?;
    let sd = validate_system(&s).map_err(|e| e.to_string())?;
    let ts = build_m(&s, &sd).map_err(|e| e.to_string())?;
    let profile = DiffusionProfile::new(&ts.m, sigma, amplitude).map_err(|e| e.to_string())?;
    let value = profile.eval(t, zeta).map_err(|e| e.to_string())?;
    let r = profile.residual(t, zeta, h).map_err(|e| e.to_string())?;
    let io = |e: std::io::Error| e.to_string();
    writeln!(w, "phi0 = {value:.15e}").map_err(io)?;
    writeln!(w, "residual = {r:.6e}").map_err(io)?;
    Ok(EXIT_OK)
}

/// Parses `argv` (program name first) and runs the subcommand, writing normal
/// output to `out` and diagnostics to `err`.
pub fn run_command_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Analyze { instance, out: o } => analyze(instance, o.as_deref(), out),
        Command::Search(args) => search(args, out),
        Command::Symbolic { k, out: o } => symbolic(*k, o.as_deref(), out),
        Command::Phi0 {
            instance,
            sigma,
            t,
            eps,
            amplitude,
            point,
        } => phi0(instance, *sigma, *t, *eps, *amplitude, point, out),
        Command::Residual {
            instance,
            t,
            zeta,
            h,
            sigma,
            amplitude,
        } => residual(instance, *t, zeta, *h, *sigma, *amplitude, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

/// [`run_command_with`] on the process streams.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_command_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
