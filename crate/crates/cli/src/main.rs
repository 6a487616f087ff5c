//! `nevlab` — command-line front end for the exponential-polynomial
//! value-distribution laboratory.
//!
//! Exit codes: `0` for PASS/CONSISTENT outcomes, `1` for verifier
//! failures (or `NotEntire` under `--expect-entire`, or structural
//! degeneracies), `2` for usage and parse errors, `3` for numerical
//! non-convergence. Every error is also emitted as one-line JSON
//! `{error, detail}` on stderr.

mod emit;
mod grid;
mod instance;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use nevlab_core::quad::CircleQuad;
use nevlab_core::{
    construct_auxiliary_map, corollary_check, divides_report, locate_zeros_disk, parse_exact,
    parse_float, profile, rational_dependence_exact, rational_dependence_heuristic, sig12,
    theorem_bounds, verify_fmt, verify_jensen, verify_moving_smt, verify_moving_truncation,
    verify_truncated_borel, verify_vojta_smt, BorelOutcome, CorollaryVerdict, DividesVerdict,
    Error as CoreError, ExpShape, GrowthScale, LocateOptions, RadiusRow, Scalar, Target,
    VerifierReport,
};

use emit::{emit, emit_error, render_json};
use grid::parse_radii;
use instance::{constant_value, InstanceFile};

/// CLI-level error: either a core library error or plumbing trouble.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// `(exit code, machine-readable kind, human detail)`.
    fn parts(&self) -> (i32, &'static str, String) {
        match self {
            CliError::Usage(msg) => (2, "usage", msg.clone()),
            CliError::Io(msg) => (2, "io", msg.clone()),
            CliError::Core(e) => {
                let kind = match e {
                    CoreError::Parse { .. } => "parse",
                    CoreError::InvalidInput(_) => "invalid-input",
                    CoreError::ZeroOnContour { .. } => "zero-on-contour",
                    CoreError::NonConvergent(_) => "non-convergent",
                    CoreError::ClusterUnresolved { .. } => "cluster-unresolved",
                    CoreError::Degenerate(_) => "degenerate",
                    CoreError::EpsWindowEmpty(_) => "eps-window-empty",
                    CoreError::ResourceLimit(_) => "resource-limit",
                    CoreError::OutsideSpan { .. } => "outside-span",
                };
                let code = match e {
                    CoreError::Parse { .. } | CoreError::InvalidInput(_) => 2,
                    CoreError::ZeroOnContour { .. }
                    | CoreError::NonConvergent(_)
                    | CoreError::ClusterUnresolved { .. } => 3,
                    _ => 1,
                };
                (code, kind, e.to_string())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "nevlab", version, about = "Value-distribution laboratory for exponential polynomials", max_term_width = 100)]
struct Cli {
    /// Seed for quadrature jitter and contour phase nudges.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report to this file (atomic temp-file + rename)
    /// instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Proximity/counting/characteristic profile m, N, T over a radius grid
    Analyze {
        /// Expression, e.g. "exp(z)" or "(z+1)*exp(2*z) - 1"
        expr: String,
        /// Radius grid min:max:count[:linear|log]
        #[arg(long)]
        radii: String,
        /// Target value ("inf" or a complex constant like "1", "2i")
        #[arg(long, default_value = "inf")]
        target: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Certified zeros of an expression in a disk
    Zeros {
        expr: String,
        /// Disk radius around the center
        #[arg(long)]
        radius: f64,
        /// Disk center as a complex constant
        #[arg(long, default_value = "0")]
        center: String,
        /// Isolation radius below which clusters are reported unresolved
        #[arg(long, default_value_t = 1e-8)]
        resolution: f64,
    },
    /// Divisibility certificate and frequency-relation report for F/G
    Quotient {
        numerator: String,
        denominator: String,
        /// Disk radius for the certificate
        #[arg(long)]
        radius: f64,
        /// |F(z*)| threshold when promoting a NotEntire witness
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Exit 1 when the verdict is NotEntire
        #[arg(long)]
        expect_entire: bool,
    },
    /// Jensen-formula residuals over a radius grid
    VerifyJensen {
        expr: String,
        #[arg(long)]
        radii: String,
        /// Maximum admissible residual
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// First-main-theorem defect oscillation over a radius grid
    VerifyFmt {
        expr: String,
        /// Target value a (complex constant)
        #[arg(long, default_value = "0")]
        target: String,
        #[arg(long)]
        radii: String,
        /// Maximum admissible oscillation of m + N − T
        #[arg(long, default_value_t = 2.0)]
        bound: f64,
    },
    /// Second-main-theorem margins against fixed hyperplanes
    VerifySmt {
        /// Instance file with "curve" and constant-coefficient "hyperplanes"
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long)]
        radii: String,
    },
    /// Second-main-theorem margins against moving hyperplanes
    VerifyMovingSmt {
        /// Instance file with "curve", "hyperplanes" (function coefficients), optional "t"
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Radius grid (required unless --truncation-at is used)
        #[arg(long)]
        radii: Option<String>,
        /// Coefficient-space degree override
        #[arg(long)]
        t: Option<usize>,
        /// Run the truncated counting inequality at this single radius
        /// instead of the proximity inequality
        #[arg(long)]
        truncation_at: Option<f64>,
    },
    /// Truncated Borel-type bound for a vanishing sum of entire functions
    VerifyBorel {
        /// Instance file with "summands" (must sum to zero identically)
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        radii: String,
        /// Constant C in the bound T ≤ Σ N^(n) + C·log⁺T + C
        #[arg(long, default_value_t = 50.0)]
        c_const: f64,
    },
    /// Combinatorial bound report at (l, m, s, t, a)
    Bounds {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Evaluation ε (default: eps_max / 2)
        #[arg(long)]
        eps: Option<f64>,
        /// Coefficient-space dimension w (default 1)
        #[arg(long)]
        w: Option<u64>,
    },
    /// Auxiliary map and hyperplane system for a quotient instance
    AuxMap {
        numerator: String,
        denominator: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
    },
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    if let Err(e) = configure_threads() {
        let (code, kind, detail) = e.parts();
        emit_error(kind, &detail);
        return code;
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            emit_error("usage", &e.to_string());
            return 2;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let (code, kind, detail) = e.parts();
            emit_error(kind, &detail);
            code
        }
    }
}

/// `NEVLAB_THREADS` caps the rayon pool; unset means rayon's default.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("NEVLAB_THREADS") else { return Ok(()) };
    let n: usize = raw.parse().map_err(|_| {
        CliError::Usage(format!("NEVLAB_THREADS must be a positive integer, got {raw:?}"))
    })?;
    if n == 0 {
        return Err(CliError::Usage("NEVLAB_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Io(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let cfg = CircleQuad { seed: cli.seed, ..CircleQuad::default() };
    let opts = LocateOptions { seed: cli.seed, ..LocateOptions::default() };
    let out = cli.out.as_deref();

    match cli.command {
        Command::Analyze { expr, radii, target, format } => {
            let f = parse_float(&expr)?;
            let grid = parse_radii(&radii)?;
            let target = if target == "inf" {
                Target::Infinity
            } else {
                Target::Value(constant_value(&target)?)
            };
            let prof = profile(&f, target, &grid, &cfg, &opts)?;
            match format {
                Format::Csv => emit(out, &prof.to_csv())?,
                Format::Json => {
                    let rows: Vec<_> = (0..prof.radii.len())
                        .map(|i| {
                            json!({
                                "r": sig12(prof.radii[i]),
                                "m": sig12(prof.m_vals[i]),
                                "N": sig12(prof.n_vals[i]),
                                "T": sig12(prof.t_vals[i]),
                            })
                        })
                        .collect();
                    let v = json!({
                        "schema": 1,
                        "name": "analyze",
                        "expr": expr,
                        "target": prof.target,
                        "rows": rows,
                        "quadrature_nodes": prof.quadrature_nodes,
                    });
                    emit(out, &render_json(&v))?;
                }
            }
            Ok(0)
        }

        Command::Zeros { expr, radius, center, resolution } => {
            let f = parse_float(&expr)?;
            let center = constant_value(&center)?;
            let opts = LocateOptions { resolution, ..opts };
            let set = locate_zeros_disk(&f, center, radius, &opts)?;
            let zeros: Vec<_> = set
                .zeros
                .iter()
                .map(|z| {
                    json!({
                        "z": [sig12(z.location.re), sig12(z.location.im)],
                        "multiplicity": z.multiplicity,
                        "radius": sig12(z.radius),
                        "resolved": z.resolved,
                    })
                })
                .collect();
            let v = json!({
                "schema": 1,
                "name": "zeros",
                "expr": expr,
                "center": [sig12(center.re), sig12(center.im)],
                "disk_radius": sig12(set.disk_radius),
                "total_count": set.total_count,
                "zeros": zeros,
            });
            emit(out, &render_json(&v))?;
            Ok(0)
        }

        Command::Quotient { numerator, denominator, radius, tol, expect_entire } => {
            let (report, not_entire, counterexample) =
                quotient_report(&numerator, &denominator, radius, tol, &opts)?;
            emit(out, &render_json(&report))?;
            let fail = (expect_entire && not_entire) || counterexample;
            Ok(if fail { 1 } else { 0 })
        }

        Command::VerifyJensen { expr, radii, tol } => {
            let f = parse_exact(&expr)?;
            let grid = parse_radii(&radii)?;
            let mut report = VerifierReport::new("jensen", json!({ "expr": expr, "tol": tol }));
            let mut max_residual: f64 = 0.0;
            for &r in &grid {
                let check = verify_jensen(&f, r, &cfg, &opts)?;
                max_residual = max_residual.max(check.residual);
                report.per_radius.push(RadiusRow::new(r, check.lhs, check.rhs));
            }
            report.params["max_residual"] = json!(sig12(max_residual));
            report.pass = max_residual <= tol;
            finish_report(out, &report)
        }

        Command::VerifyFmt { expr, target, radii, bound } => {
            let f = parse_float(&expr)?;
            let a = constant_value(&target)?;
            let grid = parse_radii(&radii)?;
            let report = verify_fmt(&f, a, &grid, bound, &cfg, &opts)?;
            finish_report(out, &report)
        }

        Command::VerifySmt { instance, eps, radii } => {
            let inst = InstanceFile::load(&instance)?;
            let curve = inst.exact_curve()?;
            let hs = inst.fixed_hyperplanes()?;
            let grid = parse_radii(&radii)?;
            let report = verify_vojta_smt(&curve, &hs, eps, &grid, &cfg, &opts)?;
            finish_report(out, &report)
        }

        Command::VerifyMovingSmt { instance, eps, radii, t, truncation_at } => {
            let inst = InstanceFile::load(&instance)?;
            let curve = inst.exact_curve()?;
            let scale = GrowthScale::of_components(curve.components())?;
            let hs = inst.moving_hyperplanes(&scale)?;
            let t = t.or(inst.t).unwrap_or(0);
            let report = match truncation_at {
                Some(r) => verify_moving_truncation(&curve, &hs, t, r, &cfg, &opts)?,
                None => {
                    let spec = radii.ok_or_else(|| {
                        CliError::Usage(
                            "--radii is required unless --truncation-at is given".into(),
                        )
                    })?;
                    let grid = parse_radii(&spec)?;
                    verify_moving_smt(&curve, &hs, t, eps, &grid, &cfg, &opts)?
                }
            };
            finish_report(out, &report)
        }

        Command::VerifyBorel { instance, radii, c_const } => {
            let inst = InstanceFile::load(&instance)?;
            let fs = inst.exact_summands()?;
            let grid = parse_radii(&radii)?;
            match verify_truncated_borel(&fs, &grid, c_const, &cfg, &opts)? {
                BorelOutcome::NotApplicable { reason } => {
                    let v = json!({
                        "schema": 1,
                        "name": "truncated-borel",
                        "outcome": "not-applicable",
                        "reason": reason,
                    });
                    emit(out, &render_json(&v))?;
                    Ok(0)
                }
                BorelOutcome::Checked(report) => finish_report(out, &report),
            }
        }

        Command::Bounds { l, m, s, t, a, eps, w } => {
            let report = theorem_bounds(l, m, s, t, a, eps, w)?;
            let mut v = report.to_json();
            v["name"] = json!("bounds");
            emit(out, &render_json(&v))?;
            Ok(0)
        }

        Command::AuxMap { numerator, denominator, n, s, t } => {
            let f = parse_exact(&numerator)?;
            let g = parse_exact(&denominator)?;
            let aux = construct_auxiliary_map(&f, &g, n, s, t)?;
            let mut v = aux.to_json();
            v["name"] = json!("aux-map");
            emit(out, &render_json(&v))?;
            Ok(0)
        }
    }
}

/// Serializes a verifier report and converts its PASS/FAIL into the
/// exit code.
fn finish_report(out: Option<&std::path::Path>, report: &VerifierReport) -> Result<i32, CliError> {
    let v = serde_json::to_value(report)
        .map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))?;
    emit(out, &render_json(&v))?;
    Ok(if report.pass { 0 } else { 1 })
}

/// Quotient command body: prefers the exact pipeline (certificate +
/// exact frequency relation + consistency verdict); expressions outside
/// the exact domain (e.g. sqrt2 frequencies) fall back to the float
/// certificate plus a lattice-reduction relation search.
///
/// Returns `(report, verdict was NotEntire, verdict was a candidate
/// counterexample)`.
fn quotient_report(
    numerator: &str,
    denominator: &str,
    radius: f64,
    tol: f64,
    opts: &LocateOptions,
) -> Result<(serde_json::Value, bool, bool), CliError> {
    if let (Ok(f), Ok(g)) = (parse_exact(numerator), parse_exact(denominator)) {
        let shapes_ok = ExpShape::of(&f).is_ok()
            && ExpShape::of(&g).is_ok_and(|sh| !sh.constant_coeff().is_zero());
        if shapes_ok {
            let rep = corollary_check(&f, &g, radius, opts)?;
            let mut v = rep.to_json();
            v["schema"] = json!(1);
            v["name"] = json!("quotient");
            let not_entire = rep.certificate.verdict == DividesVerdict::NotEntire;
            let counterexample = rep.verdict == CorollaryVerdict::CandidateCounterexample;
            return Ok((v, not_entire, counterexample));
        }
        // Exact inputs outside the corollary shape: certificate plus
        // the exact relation among the nonzero frequencies.
        let cert = divides_report(&f, &g, radius, tol, opts)?;
        let freqs: Vec<_> = f
            .terms()
            .iter()
            .chain(g.terms())
            .filter(|t| !Scalar::is_zero(&t.freq))
            .map(|t| t.freq.clone())
            .collect();
        let relation = rational_dependence_exact(&freqs)?;
        let v = json!({
            "schema": 1,
            "name": "quotient",
            "certificate": cert.to_json(),
            "relation": relation.to_json(),
            "note": "denominator has no constant term, so only the certificate and the \
                     frequency relation are reported",
        });
        let not_entire = cert.verdict == DividesVerdict::NotEntire;
        return Ok((v, not_entire, false));
    }
    let f = parse_float(numerator)?;
    let g = parse_float(denominator)?;
    let cert = divides_report(&f, &g, radius, tol, opts)?;
    let freqs: Vec<Complex64> = f
        .terms()
        .iter()
        .chain(g.terms())
        .filter(|t| t.freq.norm() > 0.0)
        .map(|t| t.freq)
        .collect();
    let relation = rational_dependence_heuristic(
        &freqs,
        nevlab_core::quotient_lab::HEURISTIC_COEFF_CAP,
        nevlab_core::quotient_lab::HEURISTIC_RESIDUAL_TOL,
    )?;
    let v = json!({
        "schema": 1,
        "name": "quotient",
        "certificate": cert.to_json(),
        "relation": relation.to_json(),
        "note": "float-frequency inputs: the relation search is heuristic and its absence \
                 proves nothing",
    });
    let not_entire = cert.verdict == DividesVerdict::NotEntire;
    Ok((v, not_entire, false))
}
