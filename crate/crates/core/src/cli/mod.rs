//! Command-line front end: file-based analyses and the seeded suite.
//!
//! Every subcommand writes one JSON [`report::Report`] to standard output. Exit codes are
//! 0 when the principal verdict holds, 2 when the analysis ran and the verdict is false,
//! 1 on parse, I/O or analysis errors and 64 on usage errors.

pub mod matfile;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::Error;
use crate::numcore::{ComplexMatrix, HermitianMatrix, ToleranceProfile};
use crate::projector::{compatibility, p_as, selfadjoint_residual, Projection};
use crate::shorted::{compare_routes, is_admissible, ShortedResult};
use crate::subspace::{friedrichs_cos, Subspace};
use crate::twoproj::{decompose, equivalence_battery, norm_report};
use matfile::{parse_matrix_bytes, ParseError};
use report::{float, matrix_value, InputDigest, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FALSE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Analysis(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_ERROR,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "oblique",
    version,
    about = "A-selfadjoint projections and shorted operators"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Relative threshold for rank decisions.
    #[arg(long, global = true, value_name = "X")]
    tol_rank: Option<f64>,
    /// Relative threshold for matrix residuals.
    #[arg(long, global = true, value_name = "X")]
    tol_eq: Option<f64>,
    /// Threshold for scalar comparisons.
    #[arg(long, global = true, value_name = "X")]
    tol_norm: Option<f64>,
    /// Print a human-readable summary to standard error.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compatibility of a Hermitian A with a subspace S.
    Compat { a: PathBuf, s: PathBuf },
    /// The minimal-norm A-selfadjoint projection P_{A,S}.
    Pas { a: PathBuf, s: PathBuf },
    /// The shorted operator of a positive A to S^perp by all three routes.
    Shorted { a: PathBuf, s: PathBuf },
    /// P_{Q,P} for orthogonal projections Q and P.
    Twoproj { q: PathBuf, p: PathBuf },
    /// Cosine of the Friedrichs angle between two subspaces.
    Angle { s: PathBuf, t: PathBuf },
    /// The seeded property suite.
    Suite {
        #[arg(long, env = "OBLIQUE_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: u64,
        /// Largest ambient dimension; each case draws its dimension from 2..=DIM.
        #[arg(long, default_value_t = 8)]
        dim: usize,
    },
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stderr) {
        Ok((report, verdict)) => {
            if stdout.write_all(report.to_json().as_bytes()).is_err() {
                return EXIT_ERROR;
            }
            if verdict {
                EXIT_OK
            } else {
                EXIT_FALSE
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn tolerance(global: &GlobalArgs) -> Result<ToleranceProfile, CliError> {
    let d = ToleranceProfile::default();
    ToleranceProfile::new(
        global.tol_rank.unwrap_or(d.tol_rank),
        global.tol_eq.unwrap_or(d.tol_eq),
        global.tol_norm.unwrap_or(d.tol_norm),
    )
    .map_err(|e| CliError::Usage(e.to_string()))
}

struct Loaded {
    matrix: ComplexMatrix,
    digest: InputDigest,
}

fn load(role: &str, path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file = parse_matrix_bytes(path, &bytes)?;
    Ok(Loaded {
        matrix: file.matrix,
        digest: InputDigest::new(role, path, &bytes),
    })
}

fn square(loaded: &Loaded, path: &Path) -> Result<(), CliError> {
    let (r, c) = loaded.matrix.shape();
    if r != c {
        return Err(CliError::Analysis(Error::ShapeMismatch(format!(
            "{} must be square, got {r}x{c}",
            path.display()
        ))));
    }
    Ok(())
}

fn hermitian(path: &Path, tol: &ToleranceProfile) -> Result<(HermitianMatrix, InputDigest), CliError> {
    let loaded = load("A", path)?;
    square(&loaded, path)?;
    Ok((HermitianMatrix::new(loaded.matrix, tol)?, loaded.digest))
}

fn subspace(role: &str, path: &Path, tol: &ToleranceProfile) -> Result<(Subspace, InputDigest), CliError> {
    let loaded = load(role, path)?;
    Ok((Subspace::from_spanning(&loaded.matrix, tol)?, loaded.digest))
}

fn orth_projection(
    role: &str,
    path: &Path,
    tol: &ToleranceProfile,
) -> Result<(Projection, InputDigest), CliError> {
    let loaded = load(role, path)?;
    square(&loaded, path)?;
    let p = Projection::new(loaded.matrix, tol)?;
    p.require_orthogonal(tol)?;
    Ok((p, loaded.digest))
}

fn subspace_value(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "basis": matrix_value(s.basis()) })
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<(Report, bool), CliError> {
    let tol = tolerance(&cli.global)?;
    let verbose = cli.global.verbose;
    let (report, verdict) = match &cli.command {
        Command::Compat { a, s } => compat_cmd(a, s, &tol)?,
        Command::Pas { a, s } => pas_cmd(a, s, &tol)?,
        Command::Shorted { a, s } => shorted_cmd(a, s, &tol)?,
        Command::Twoproj { q, p } => twoproj_cmd(q, p, &tol)?,
        Command::Angle { s, t } => angle_cmd(s, t, &tol)?,
        Command::Suite { seed, cases, dim } => suite_cmd(*seed, *cases, *dim, &tol, verbose, stderr)?,
    };
    if verbose {
        let _ = writeln!(stderr, "{}", report.command);
        for v in &report.verdicts {
            let _ = writeln!(stderr, "  {:<28} {}", v.name, v.value);
        }
    }
    Ok((report, verdict))
}

fn compat_cmd(a: &Path, s: &Path, tol: &ToleranceProfile) -> Result<(Report, bool), CliError> {
    let (a, da) = hermitian(a, tol)?;
    let (s, ds) = subspace("S", s, tol)?;
    let c = compatibility(&a, &s, tol)?;
    let mut report = Report::new("compat", vec![da, ds], *tol);
    report.result = json!({
        "compatible": c.compatible,
        "cond_range_pa": c.cond_range_pa,
        "cond_block": c.cond_block,
        "cond_sum": c.cond_sum,
        "unique": c.unique,
        "n_dim": c.n_dim,
        "leak": float(c.witnesses.leak),
        "d": c.witnesses.d.as_ref().map(matrix_value),
    });
    report.verdict("compatible", c.compatible);
    report.verdict("conditions_agree", c.conditions_agree());
    report.verdict("unique", c.unique);
    Ok((report, c.compatible))
}

fn pas_cmd(a: &Path, s: &Path, tol: &ToleranceProfile) -> Result<(Report, bool), CliError> {
    let (a, da) = hermitian(a, tol)?;
    let (s, ds) = subspace("S", s, tol)?;
    let mut report = Report::new("pas", vec![da, ds], *tol);
    match p_as(&a, &s, tol) {
        Ok(q) => {
            let m = q.matrix();
            let idempotency = crate::numcore::operator_norm(&(m * m - m));
            let selfadjoint = selfadjoint_residual(&a, &q)?;
            let range_ok = q.range().approx_eq(&s);
            report.result = json!({
                "compatible": true,
                "p_as": matrix_value(m),
                "norm": float(q.norm()),
                "idempotency_residual": float(idempotency),
                "selfadjoint_residual": float(selfadjoint),
                "range_is_s": range_ok,
            });
            report.verdict("compatible", true);
            report.verdict("a_selfadjoint", selfadjoint <= tol.eq_threshold(a.norm()));
            report.verdict("range_is_s", range_ok);
            Ok((report, true))
        }
        Err(Error::NotCompatible) => {
            report.result = json!({ "compatible": false });
            report.verdict("compatible", false);
            Ok((report, false))
        }
        Err(e) => Err(e.into()),
    }
}

fn route_value(r: &ShortedResult) -> Value {
    json!({ "route": r.route, "sigma": matrix_value(r.sigma.matrix()) })
}

fn shorted_cmd(a: &Path, s: &Path, tol: &ToleranceProfile) -> Result<(Report, bool), CliError> {
    let (a, da) = hermitian(a, tol)?;
    let a = a.require_psd(tol)?;
    let (s, ds) = subspace("S", s, tol)?;
    let routes = compare_routes(&a, &s, tol)?;
    let admissible = is_admissible(&a, &s, tol)?;
    let agree = routes.agree(&a, tol);
    let mut report = Report::new("shorted", vec![da, ds], *tol);
    report.result = json!({
        "sigma": matrix_value(routes.block.sigma.matrix()),
        "routes": [
            route_value(&routes.block),
            route_value(&routes.projection),
            route_value(&routes.compatible),
        ],
        "residuals": {
            "block_vs_projection": float(routes.block_vs_projection),
            "block_vs_compatible": float(routes.block_vs_compatible),
            "projection_vs_compatible": float(routes.projection_vs_compatible),
        },
        "d_witness": routes.block.d_witness.as_ref().map(matrix_value),
        "range_identity": routes.range_identity,
        "admissible": admissible,
    });
    report.verdict("routes_agree", agree);
    report.verdict("range_identity", routes.range_identity);
    report.verdict("admissible", admissible);
    Ok((report, agree && routes.range_identity))
}

fn twoproj_cmd(q: &Path, p: &Path, tol: &ToleranceProfile) -> Result<(Report, bool), CliError> {
    let (q, dq) = orth_projection("Q", q, tol)?;
    let (p, dp) = orth_projection("P", p, tol)?;
    if q.dim() != p.dim() {
        return Err(Error::AmbientMismatch {
            left: q.dim(),
            right: p.dim(),
        }
        .into());
    }
    let r = norm_report(&q, &p, tol)?;
    let dec = decompose(&q, &p, tol)?;
    let battery = equivalence_battery(&q, &p, tol)?;
    let formulas_apply = r.n_dim < p.range().dim();
    let norms_agree = !formulas_apply || r.norms_agree(tol);
    let decomposition_ok = dec.holds(tol);
    let mut report = Report::new("twoproj", vec![dq, dp], *tol);
    report.result = json!({
        "p_qp": matrix_value(r.p_qp.matrix()),
        "norm": float(r.norm),
        "norm_via_inverse": float(r.norm_via_inverse),
        "norm_via_defect": float(r.norm_via_defect),
        "norm_via_restriction": float(r.norm_via_restriction),
        "n_dim": r.n_dim,
        "kernel_characterization": r.kernel_ok,
        "generic_position": r.generic,
        "decomposition": {
            "p_n": matrix_value(dec.p_n.matrix()),
            "p_qp0": matrix_value(dec.p_qp0.matrix()),
            "residual": float(dec.residual),
            "norm_full": float(dec.norm_full),
            "norm_reduced": float(dec.norm_reduced),
            "norm_formula": dec.norm_formula.map(float),
        },
        "battery": battery,
    });
    report.verdict("norms_agree", norms_agree);
    report.verdict("kernel_characterization", r.kernel_ok);
    report.verdict("decomposition", decomposition_ok);
    report.verdict("generic_position", r.generic);
    Ok((report, norms_agree && r.kernel_ok && decomposition_ok))
}

fn angle_cmd(s: &Path, t: &Path, tol: &ToleranceProfile) -> Result<(Report, bool), CliError> {
    let (s, ds) = subspace("S", s, tol)?;
    let (t, dt) = subspace("T", t, tol)?;
    let cos = friedrichs_cos(&s, &t)?;
    let intersection = s.intersect(&t)?;
    let below_one = cos < 1.0 - tol.tol_rank;
    let mut report = Report::new("angle", vec![ds, dt], *tol);
    report.result = json!({
        "cos": float(cos),
        "angle": float(cos.clamp(0.0, 1.0).acos()),
        "s": subspace_value(&s),
        "t": subspace_value(&t),
        "intersection_dim": intersection.dim(),
    });
    report.verdict("cos_below_one", below_one);
    Ok((report, below_one))
}

fn suite_cmd(
    seed: u64,
    cases: u64,
    dim: usize,
    tol: &ToleranceProfile,
    verbose: bool,
    stderr: &mut dyn Write,
) -> Result<(Report, bool), CliError> {
    if dim < 2 {
        return Err(CliError::Usage(format!("--dim must be at least 2, got {dim}")));
    }
    let summary = suite::run_suite(seed, cases, dim, tol);
    if verbose {
        let _ = writeln!(stderr, "{:<18} {:>7} {:>7}", "family", "passed", "failed");
        for f in &summary.families {
            let _ = writeln!(stderr, "{:<18} {:>7} {:>7}", f.name, f.passed, f.failed);
        }
    }
    let mut report = Report::new("suite", Vec::new(), *tol);
    let passed = summary.all_passed();
    for f in &summary.families {
        report.verdict(f.name, f.failed == 0);
    }
    report.verdict("all_passed", passed);
    report.result = serde_json::to_value(&summary).expect("summary serializes");
    Ok((report, passed))
}
