//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 usage/IO, 2 a symmetry or factorization check failed,
//! 3 the spectrum is complex or degenerate, 4 the quasiparity cannot be made
//! involutive.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::biortho::{renormalize, solve_biorthogonal, BiorthogonalSystem};
use crate::error::Error;
use crate::io::{self, format_num, pairs, IoError, MatrixFileOut, Num};
use crate::linalg::{c64, eig, ComplexMatrix, Tolerance, C64};
use crate::metric::{self, build_bundle, involutive_normalization, MetricBundle};
use crate::models::{self, PseudoMetric};
use crate::symmetry::{
    pseudo_hermiticity_residual, quasi_hermiticity_residual, weak_triplet_check, SymmetryVerdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERDICT: i32 = 2;
pub const EXIT_SPECTRUM: i32 = 3;
pub const EXIT_NONREAL_Q: i32 = 4;

pub const SCHEMA: u32 = 1;
/// Involution residual bound used by `metric --kappa involutive`.
pub const INVOLUTION_LIMIT: f64 = 1e-10;
/// Relative eigenvalue gap below which `diagnose` warns about a nearby exceptional point.
pub const PROXIMITY_WARNING: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "cryptoherm", version, about = "Metric operators for quasi-Hermitian matrix models")]
pub struct Cli {
    /// Relative tolerance for residual checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_rel: f64,
    /// Absolute tolerance floor.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_abs: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every symmetry check on H with pseudo-metric P and build the metric.
    Diagnose { hamiltonian: PathBuf, pseudometric: PathBuf },
    /// Write Θ, Q and C (and the κ used) as matrix files.
    Metric {
        hamiltonian: PathBuf,
        pseudometric: PathBuf,
        /// Path to a κ file, or `involutive` to choose κ with Q² = C² = I.
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Classify a grid of two-level models against the exceptional-point boundary (CSV).
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepModel::H2)]
        model: SweepModel,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        d: f64,
        /// `value` or `min:max:steps`
        #[arg(long, allow_hyphen_values = true)]
        b_re: String,
        /// `value` or `min:max:steps`
        #[arg(long, allow_hyphen_values = true)]
        b_im: String,
    },
    /// Report invertibility of the Hermitian partners P + P† and i[P e^{iθ} − P† e^{−iθ}].
    Hermitize {
        pseudometric: PathBuf,
        /// Comma-separated angles, or `scan` for a uniform grid over [0, 2π).
        #[arg(long, default_value = "scan", allow_hyphen_values = true)]
        theta: String,
        #[arg(long, default_value_t = 64)]
        scan_points: usize,
    },
    /// Write a model matrix file.
    Generate {
        #[arg(long, value_enum)]
        model: GenModel,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        d: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b_im: f64,
        /// Dimension for `cyclic`, `identity` and `random`.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepModel {
    H2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenModel {
    H2,
    H3,
    Parity2,
    Swap2,
    Cyclic,
    Identity,
    Random,
}

/// A command that could not produce a report.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
/// The report goes to `out`, diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let tol = match Tolerance::new(cli.tol_rel, cli.tol_abs) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Diagnose { hamiltonian, pseudometric } => cmd_diagnose(&hamiltonian, &pseudometric, tol, out),
        Command::Metric { hamiltonian, pseudometric, kappa, out_dir } => {
            cmd_metric(&hamiltonian, &pseudometric, kappa.as_deref(), &out_dir, tol, out)
        }
        Command::Sweep { model: SweepModel::H2, a, d, b_re, b_im } => cmd_sweep(a, d, &b_re, &b_im, out),
        Command::Hermitize { pseudometric, theta, scan_points } => {
            cmd_hermitize(&pseudometric, &theta, scan_points, out)
        }
        Command::Generate { model, out: path, a, d, b_re, b_im, dim, seed } => {
            cmd_generate(model, &path, a, d, c64(b_re, b_im), dim, seed)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, report: &T) -> Result<(), Failure> {
    let text = io::to_json_pretty(report);
    write!(out, "{text}").map_err(|e| Failure::usage(format!("writing report: {e}")))
}

fn load_pair(h_path: &Path, p_path: &Path) -> Result<(ComplexMatrix, PseudoMetric), Failure> {
    let h = io::read_matrix(h_path)?;
    let p = io::read_matrix(p_path)?;
    if h.dim() != p.dim() {
        return Err(Failure::usage(format!(
            "dimension mismatch: hamiltonian is {}x{}, pseudo-metric is {}x{}",
            h.dim(),
            h.dim(),
            p.dim(),
            p.dim()
        )));
    }
    Ok((h, PseudoMetric::new(p)))
}

#[derive(Debug, Serialize)]
struct ToleranceOut {
    rel: Num,
    abs: Num,
}

#[derive(Debug, Serialize)]
struct PseudoMetricOut {
    self_adjoint: bool,
    unitary: bool,
    involutive: bool,
    invertible: bool,
    smallest_singular_value: Num,
}

impl From<&PseudoMetric> for PseudoMetricOut {
    fn from(p: &PseudoMetric) -> Self {
        Self {
            self_adjoint: p.self_adjoint,
            unitary: p.unitary,
            involutive: p.involutive,
            invertible: p.invertible,
            smallest_singular_value: Num(p.smallest_singular_value),
        }
    }
}

#[derive(Debug, Serialize)]
struct SpectrumOut {
    eigenvalues: Vec<[Num; 2]>,
    real: bool,
    max_abs_imag: Num,
    min_gap: Num,
}

#[derive(Debug, Serialize)]
struct VerdictOut {
    name: &'static str,
    residual: Num,
    threshold: Num,
    holds: bool,
    detail: BTreeMap<&'static str, Num>,
    notes: Vec<String>,
}

impl From<&SymmetryVerdict> for VerdictOut {
    fn from(v: &SymmetryVerdict) -> Self {
        Self {
            name: v.name.as_str(),
            residual: Num(v.residual),
            threshold: Num(v.threshold),
            holds: v.holds,
            detail: v.detail.iter().map(|(k, x)| (*k, Num(*x))).collect(),
            notes: v.notes.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct MetricOut {
    kappa: Vec<[Num; 2]>,
    q: Vec<[Num; 2]>,
    c: Vec<[Num; 2]>,
    residuals: BTreeMap<&'static str, Num>,
    theta_min_eigenvalue: Num,
    valid: bool,
    involution: BTreeMap<&'static str, Num>,
    theta: MatrixFileOut,
}

impl MetricOut {
    fn new(sys: &BiorthogonalSystem, b: &MetricBundle) -> Self {
        let (q2, c2) = involution_residuals(b);
        let mut involution = BTreeMap::new();
        involution.insert("q_squared", Num(q2));
        involution.insert("c_squared", Num(c2));
        Self {
            kappa: pairs(sys.kappa()),
            q: pairs(&b.coeffs.q),
            c: pairs(&b.coeffs.c),
            residuals: b.residuals.iter().map(|(k, x)| (*k, Num(*x))).collect(),
            theta_min_eigenvalue: Num(b.theta_min_eigenvalue),
            valid: b.valid,
            involution,
            theta: MatrixFileOut::from(&b.theta),
        }
    }
}

fn involution_residuals(b: &MetricBundle) -> (f64, f64) {
    let id = ComplexMatrix::identity(b.theta.dim());
    let q2 = (&b.quasiparity * &b.quasiparity).distance(&id).expect("same dim");
    let c2 = (&b.charge * &b.charge).distance(&id).expect("same dim");
    (q2, c2)
}

#[derive(Debug, Serialize)]
struct DiagnoseReport {
    schema: u32,
    command: &'static str,
    status: &'static str,
    exit_code: i32,
    model_fingerprint: String,
    dim: usize,
    tolerance: ToleranceOut,
    pseudometric: PseudoMetricOut,
    spectrum: Option<SpectrumOut>,
    verdicts: Vec<VerdictOut>,
    metric: Option<MetricOut>,
    warnings: Vec<String>,
}

fn spectrum_status(e: &Error) -> &'static str {
    match e {
        Error::ComplexSpectrum { .. } => "complex_spectrum",
        Error::DegenerateSpectrum { .. } => "degenerate_spectrum",
        _ => "spectrum_obstruction",
    }
}

fn min_gap(values: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

fn summarize_spectrum(h: &ComplexMatrix, tol: Tolerance) -> Option<SpectrumOut> {
    let e = eig(h).ok()?;
    let max_abs_imag = e.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Some(SpectrumOut {
        eigenvalues: pairs(&e.values),
        real: max_abs_imag <= tol.bound(h.frobenius_norm()),
        max_abs_imag: Num(max_abs_imag),
        min_gap: Num(min_gap(&e.values)),
    })
}

fn nonreal_indices(q: &[C64]) -> Vec<usize> {
    q.iter()
        .enumerate()
        .filter(|(_, z)| z.im.abs() > metric::REALITY_THRESHOLD * z.norm())
        .map(|(n, _)| n)
        .collect()
}

/// Runs the full diagnostic pipeline and prints a JSON report.
pub fn cmd_diagnose(h_path: &Path, p_path: &Path, tol: Tolerance, out: &mut dyn Write) -> Result<i32, Failure> {
    let (h, p) = load_pair(h_path, p_path)?;
    let mut warnings = Vec::new();
    let mut verdicts = Vec::new();
    let mut failed = false;

    let spectrum = summarize_spectrum(&h, tol);
    if let Some(s) = &spectrum {
        let gap = s.min_gap.0;
        if gap.is_finite() && gap < PROXIMITY_WARNING * h.frobenius_norm() {
            warnings.push(format!("eigenvalue gap {} is close to an exceptional point", format_num(gap)));
        }
    }

    if p.invertible {
        let v = pseudo_hermiticity_residual(&h, &p, tol).map_err(|e| Failure::usage(e.to_string()))?;
        failed |= !v.holds;
        verdicts.push(v);
        if !p.self_adjoint {
            let v = weak_triplet_check(&h, &p, tol).map_err(|e| Failure::usage(e.to_string()))?;
            failed |= !v.holds;
            verdicts.push(v);
        }
    } else {
        warnings.push("pseudo-metric is singular; pseudo-Hermiticity is undefined".to_string());
        failed = true;
    }
    if !p.self_adjoint && !models::hermitian_sum(&p).invertible {
        warnings.push("Hermitian partner P + P† is singular".to_string());
    }

    let mut metric_out = None;
    let mut status = "ok";
    let mut code = EXIT_OK;
    match solve_biorthogonal(&h, tol) {
        Err(e) => {
            warnings.push(e.to_string());
            status = spectrum_status(&e);
            code = EXIT_SPECTRUM;
        }
        Ok(sys) => {
            let theta = metric::build_metric(&sys);
            match quasi_hermiticity_residual(&h, &theta, tol) {
                Ok(v) => {
                    failed |= !v.holds;
                    verdicts.push(v);
                }
                Err(e) => {
                    warnings.push(format!("metric check failed: {e}"));
                    failed = true;
                }
            }
            match build_bundle(&sys, &p, tol) {
                Ok(bundle) => {
                    failed |= !bundle.valid;
                    let idx = nonreal_indices(&bundle.coeffs.q);
                    if !idx.is_empty() {
                        warnings.push(format!("non-real quasiparity at indices {idx:?}"));
                    }
                    metric_out = Some(MetricOut::new(&sys, &bundle));
                }
                Err(e) => {
                    warnings.push(format!("metric bundle unavailable: {e}"));
                    failed = true;
                }
            }
        }
    }
    if code == EXIT_OK && failed {
        status = "verdict_failed";
        code = EXIT_VERDICT;
    }

    let report = DiagnoseReport {
        schema: SCHEMA,
        command: "diagnose",
        status,
        exit_code: code,
        model_fingerprint: io::fingerprint(&[&h, p.matrix()], &[tol.rel, tol.abs]),
        dim: h.dim(),
        tolerance: ToleranceOut { rel: Num(tol.rel), abs: Num(tol.abs) },
        pseudometric: PseudoMetricOut::from(&p),
        spectrum,
        verdicts: verdicts.iter().map(VerdictOut::from).collect(),
        metric: metric_out,
        warnings,
    };
    emit(out, &report)?;
    Ok(code)
}

#[derive(Debug, Serialize)]
struct MetricReport {
    schema: u32,
    command: &'static str,
    status: &'static str,
    exit_code: i32,
    model_fingerprint: String,
    dim: usize,
    kappa_mode: &'static str,
    metric: Option<MetricOut>,
    nonreal_indices: Vec<usize>,
    files: Vec<&'static str>,
    warnings: Vec<String>,
}

/// Builds Θ, Q, C for a chosen κ and writes them to `out_dir`.
pub fn cmd_metric(
    h_path: &Path,
    p_path: &Path,
    kappa: Option<&str>,
    out_dir: &Path,
    tol: Tolerance,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (h, p) = load_pair(h_path, p_path)?;
    let kappa_file = match kappa {
        Some(k) if k != "involutive" => Some(io::read_kappa(Path::new(k))?),
        _ => None,
    };
    let kappa_mode = match kappa {
        None => "unit",
        Some("involutive") => "involutive",
        Some(_) => "file",
    };
    let mut extra = vec![tol.rel, tol.abs];
    if let Some(k) = &kappa_file {
        extra.extend(k.iter().flat_map(|z| [z.re, z.im]));
    }
    let mut report = MetricReport {
        schema: SCHEMA,
        command: "metric",
        status: "ok",
        exit_code: EXIT_OK,
        model_fingerprint: io::fingerprint(&[&h, p.matrix()], &extra),
        dim: h.dim(),
        kappa_mode,
        metric: None,
        nonreal_indices: Vec::new(),
        files: Vec::new(),
        warnings: Vec::new(),
    };
    let finish = |mut report: MetricReport, status, code, out: &mut dyn Write| {
        report.status = status;
        report.exit_code = code;
        emit(out, &report).map(|_| code)
    };

    let sys = match solve_biorthogonal(&h, tol) {
        Ok(sys) => sys,
        Err(e) => {
            report.warnings.push(e.to_string());
            return finish(report, spectrum_status(&e), EXIT_SPECTRUM, out);
        }
    };
    let sys = match (kappa_mode, kappa_file) {
        ("involutive", _) => match involutive_normalization(&sys, &p) {
            Ok((_, renormalized)) => renormalized,
            Err(Error::NonRealQuasiparity { indices }) => {
                report.warnings.push(format!("non-real quasiparity at indices {indices:?}"));
                report.nonreal_indices = indices;
                return finish(report, "nonreal_quasiparity", EXIT_NONREAL_Q, out);
            }
            Err(e) => {
                report.warnings.push(e.to_string());
                return finish(report, "verdict_failed", EXIT_VERDICT, out);
            }
        },
        (_, Some(k)) => renormalize(&sys, &k).map_err(|e| Failure::usage(format!("{}: {e}", kappa.unwrap())))?,
        _ => sys,
    };

    let bundle = match build_bundle(&sys, &p, tol) {
        Ok(b) => b,
        Err(e) => {
            report.warnings.push(e.to_string());
            return finish(report, "verdict_failed", EXIT_VERDICT, out);
        }
    };

    std::fs::create_dir_all(out_dir).map_err(|e| Failure::usage(format!("{}: {e}", out_dir.display())))?;
    io::write_text(&out_dir.join("theta.json"), &io::matrix_to_json(&bundle.theta))?;
    io::write_text(&out_dir.join("q.json"), &io::matrix_to_json(&bundle.quasiparity))?;
    io::write_text(&out_dir.join("c.json"), &io::matrix_to_json(&bundle.charge))?;
    io::write_text(&out_dir.join("kappa.json"), &io::kappa_to_json(sys.kappa()))?;
    report.files = vec!["theta.json", "q.json", "c.json", "kappa.json"];

    let (q2, c2) = involution_residuals(&bundle);
    let mut ok = bundle.valid;
    if kappa_mode == "involutive" && (q2 > INVOLUTION_LIMIT || c2 > INVOLUTION_LIMIT) {
        report.warnings.push("involutive normalization left Q² or C² away from I".to_string());
        ok = false;
    }
    report.metric = Some(MetricOut::new(&sys, &bundle));
    if ok {
        finish(report, "ok", EXIT_OK, out)
    } else {
        finish(report, "verdict_failed", EXIT_VERDICT, out)
    }
}

/// Parses `value` or `min:max:steps` into grid points.
pub fn parse_axis(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("invalid number {s:?} in {spec:?}"));
    match parts.as_slice() {
        [v] => {
            let v = num(v)?;
            if !v.is_finite() {
                return Err(format!("non-finite value in {spec:?}"));
            }
            Ok(vec![v])
        }
        [lo, hi, steps] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            let steps: usize = steps.trim().parse().map_err(|_| format!("invalid step count in {spec:?}"))?;
            if steps < 2 {
                return Err(format!("range {spec:?} needs at least 2 steps"));
            }
            if !(lo.is_finite() && hi.is_finite()) || hi < lo {
                return Err(format!("invalid range {spec:?}"));
            }
            let last = (steps - 1) as f64;
            Ok((0..steps).map(|i| lo + (hi - lo) * (i as f64) / last).collect())
        }
        _ => Err(format!("expected `value` or `min:max:steps`, got {spec:?}")),
    }
}

pub const SWEEP_HEADER: &str = "b_re,b_im,discriminant,class,min_gap";

/// Writes one CSV row per `(b_re, b_im)` grid point, `b_re` outermost.
pub fn cmd_sweep(a: f64, d: f64, b_re: &str, b_im: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    if !(a.is_finite() && d.is_finite()) {
        return Err(Failure::usage("a and d must be finite"));
    }
    let re_axis = parse_axis(b_re).map_err(Failure::usage)?;
    let im_axis = parse_axis(b_im).map_err(Failure::usage)?;
    let io_err = |e: std::io::Error| Failure::usage(format!("writing CSV: {e}"));
    writeln!(out, "{SWEEP_HEADER}").map_err(io_err)?;
    for &re in &re_axis {
        for &im in &im_axis {
            let b = c64(re, im);
            let class = models::classify_h2(a, d, b, models::default_boundary_band(a, d, b));
            let gap = eig(&models::build_h2(a, d, b)).map(|e| min_gap(&e.values)).unwrap_or(f64::NAN);
            writeln!(
                out,
                "{},{},{},{},{}",
                format_num(re),
                format_num(im),
                format_num(class.discriminant),
                class.tag.as_str(),
                format_num(gap)
            )
            .map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct PartnerOut {
    theta: Option<Num>,
    smallest_singular_value: Num,
    invertible: bool,
    matrix: MatrixFileOut,
}

impl PartnerOut {
    fn new(theta: Option<f64>, p: &PseudoMetric) -> Self {
        Self {
            theta: theta.map(Num),
            smallest_singular_value: Num(p.smallest_singular_value),
            invertible: p.invertible,
            matrix: MatrixFileOut::from(p.matrix()),
        }
    }
}

#[derive(Debug, Serialize)]
struct HermitizeReport {
    schema: u32,
    command: &'static str,
    dim: usize,
    pseudometric: PseudoMetricOut,
    hermitian_sum: PartnerOut,
    rotations: Vec<PartnerOut>,
}

pub fn theta_grid(spec: &str, scan_points: usize) -> Result<Vec<f64>, String> {
    if spec.trim() == "scan" {
        if scan_points == 0 {
            return Err("scan needs at least one point".to_string());
        }
        let n = scan_points as f64;
        return Ok((0..scan_points).map(|j| 2.0 * std::f64::consts::PI * j as f64 / n).collect());
    }
    spec.split(',')
        .map(|s| {
            let t: f64 = s.trim().parse().map_err(|_| format!("invalid angle {s:?}"))?;
            if t.is_finite() { Ok(t) } else { Err(format!("non-finite angle {s:?}")) }
        })
        .collect()
}

pub fn cmd_hermitize(p_path: &Path, theta: &str, scan_points: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = PseudoMetric::new(io::read_matrix(p_path)?);
    let angles = theta_grid(theta, scan_points).map_err(Failure::usage)?;
    let report = HermitizeReport {
        schema: SCHEMA,
        command: "hermitize",
        dim: p.dim(),
        pseudometric: PseudoMetricOut::from(&p),
        hermitian_sum: PartnerOut::new(None, &models::hermitian_sum(&p)),
        rotations: angles
            .iter()
            .map(|&t| PartnerOut::new(Some(t), &models::hermitian_rotation(&p, t)))
            .collect(),
    };
    emit(out, &report)?;
    Ok(EXIT_OK)
}

/// Random dense matrix with entries uniform in the unit square.
pub fn random_matrix(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<C64> =
        (0..dim * dim).map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    ComplexMatrix::from_row_major(dim, &entries).expect("finite entries")
}

pub fn cmd_generate(model: GenModel, path: &Path, a: f64, d: f64, b: C64, dim: usize, seed: u64) -> Result<i32, Failure> {
    let core = |e: Error| Failure::usage(e.to_string());
    if dim == 0 {
        return Err(Failure::usage("dim must be positive"));
    }
    let m = match model {
        GenModel::H2 => models::build_h2(a, d, b),
        GenModel::H3 => models::build_h3(a, b),
        GenModel::Parity2 => models::parity2().matrix().clone(),
        GenModel::Swap2 => models::swap2().matrix().clone(),
        GenModel::Cyclic => models::cyclic_p(dim).map_err(core)?.matrix().clone(),
        GenModel::Identity => ComplexMatrix::identity(dim),
        GenModel::Random => random_matrix(dim, seed),
    };
    io::write_text(path, &io::matrix_to_json(&m))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        assert_eq!(parse_axis("0").unwrap(), vec![0.0]);
        assert_eq!(parse_axis("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_axis("-1:1:5").unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(parse_axis("0:1:1").is_err());
        assert!(parse_axis("1:0:5").is_err());
        assert!(parse_axis("0:1").is_err());
        assert!(parse_axis("x").is_err());
    }

    #[test]
    fn scan_hits_quarter_turns_exactly() {
        let g = theta_grid("scan", 64).unwrap();
        assert_eq!(g.len(), 64);
        assert_eq!(g[16], std::f64::consts::FRAC_PI_2);
        assert_eq!(g[32], std::f64::consts::PI);
        assert_eq!(theta_grid("0, 1.5", 0).unwrap(), vec![0.0, 1.5]);
        assert!(theta_grid("a", 0).is_err());
    }

    #[test]
    fn bad_flags_are_usage_errors() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["cryptoherm", "frobnicate"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["cryptoherm", "--tol-rel", "-1", "sweep", "--a", "1", "--d", "0", "--b-re", "0", "--b-im", "0"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["cryptoherm", "--help"], &mut o, &mut e), EXIT_OK);
    }
}
