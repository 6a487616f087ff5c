//! Quadrature kernels.
//!
//! Two engines live here:
//!
//! - [`circle_mean`]: uniform trapezoid rule for 2π-periodic integrands,
//!   returning the θ-average `(1/2π)∫₀^{2π} g(θ) dθ`. The node count
//!   doubles until two successive levels agree; integrands may report
//!   individual samples as skipped (excluded from the average, tracked)
//!   or singular (the whole grid is re-seated on a jittered phase).
//!   Hitting the node cap returns the best value with `converged =
//!   false` — the caller decides whether that is acceptable.
//! - [`adaptive_gl`]: composite 16-point Gauss–Legendre on an interval
//!   with recursive bisection, used for contour integrals whose
//!   integrands are smooth away from isolated trouble spots.
//!
//! The trapezoid rule is spectrally accurate for smooth periodic
//! integrands, which is exactly the situation on circles away from
//! zeros; near-circle zeros degrade it gracefully rather than fatally.

use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// One integrand sample on the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sample {
    /// A finite value.
    Value(f64),
    /// Sample excluded from the average (tracked in `skipped_fraction`).
    Skip,
    /// Non-finite value (−∞/NaN); forces a jittered re-seat of the grid.
    Singular,
}

/// Configuration for [`circle_mean`].
#[derive(Clone, Copy, Debug)]
pub struct CircleQuad {
    /// Absolute agreement tolerance between doubling levels.
    pub abs_tol: f64,
    /// Relative agreement tolerance between doubling levels.
    pub rel_tol: f64,
    /// Initial node count.
    pub start: usize,
    /// Node cap; reaching it yields `converged = false`, not an error.
    pub cap: usize,
    /// Seed for the deterministic jitter phases.
    pub seed: u64,
}

impl Default for CircleQuad {
    fn default() -> Self {
        CircleQuad { abs_tol: 1e-10, rel_tol: 1e-8, start: 64, cap: 1 << 14, seed: 0 }
    }
}

/// Result of a circle average.
#[derive(Clone, Copy, Debug)]
pub struct QuadOutcome {
    /// The θ-average of the integrand.
    pub value: f64,
    /// Nodes used at the final level.
    pub nodes: usize,
    /// Whether two successive levels agreed within tolerance.
    pub converged: bool,
    /// Fraction of nodes the integrand asked to skip at the final level.
    pub skipped_fraction: f64,
}

const JITTER_ATTEMPTS: usize = 4;

/// splitmix64: tiny deterministic PRNG step for jitter phases.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Phase offsets (as a fraction of node spacing) tried when the grid
/// lands on a singular point. Attempt 0 is the unjittered grid.
fn jitter_phases(seed: u64) -> [f64; JITTER_ATTEMPTS] {
    let mut phases = [0.0; JITTER_ATTEMPTS];
    let mut state = seed ^ 0xa0761d6478bd642f;
    for p in phases.iter_mut().skip(1) {
        // Keep phases well inside (0, 1) so jittered grids never
        // coincide with the original nodes.
        *p = 0.05 + 0.9 * (splitmix64(&mut state) as f64 / u64::MAX as f64);
    }
    phases
}

struct Scan {
    mean: f64,
    skipped: usize,
    singular: bool,
}

fn scan<F: FnMut(f64) -> Sample>(f: &mut F, n: usize, phase: f64) -> Scan {
    let step = std::f64::consts::TAU / n as f64;
    let mut sum = 0.0;
    let mut comp = 0.0; // Kahan compensation
    let mut kept = 0usize;
    let mut skipped = 0usize;
    for j in 0..n {
        let theta = (j as f64 + phase) * step;
        match f(theta) {
            Sample::Value(v) if v.is_finite() => {
                let y = v - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
                kept += 1;
            }
            Sample::Value(_) | Sample::Singular => {
                return Scan { mean: f64::NAN, skipped, singular: true }
            }
            Sample::Skip => skipped += 1,
        }
    }
    let mean = if kept == 0 { 0.0 } else { sum / kept as f64 };
    Scan { mean, skipped, singular: false }
}

/// Computes `(1/2π)∫₀^{2π} g(θ) dθ` by doubling trapezoid levels.
///
/// Grids that land on singular samples are re-seated on deterministic
/// jittered phases (derived from `cfg.seed`); if every jitter attempt
/// still hits a singularity the integrand is treated as genuinely
/// non-integrable on this circle and an error is returned.
pub fn circle_mean<F: FnMut(f64) -> Sample>(mut f: F, cfg: &CircleQuad) -> Result<QuadOutcome> {
    let phases = jitter_phases(cfg.seed);
    let start = cfg.start.max(4);
    'phase: for &phase in &phases {
        let mut n = start;
        let mut prev = scan(&mut f, n, phase);
        if prev.singular {
            continue 'phase;
        }
        while n < cfg.cap {
            let n2 = n * 2;
            let cur = scan(&mut f, n2, phase);
            if cur.singular {
                continue 'phase;
            }
            let diff = (cur.mean - prev.mean).abs();
            if diff <= cfg.abs_tol.max(cfg.rel_tol * cur.mean.abs()) {
                return Ok(QuadOutcome {
                    value: cur.mean,
                    nodes: n2,
                    converged: true,
                    skipped_fraction: cur.skipped as f64 / n2 as f64,
                });
            }
            n = n2;
            prev = cur;
        }
        return Ok(QuadOutcome {
            value: prev.mean,
            nodes: n,
            converged: false,
            skipped_fraction: prev.skipped as f64 / n as f64,
        });
    }
    Err(Error::NonConvergent(
        "circle integrand stayed singular through every jittered grid".into(),
    ))
}

/// 16-point Gauss–Legendre nodes and weights on [-1, 1].
static GL16: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_legendre(16));

/// Computes Gauss–Legendre nodes and weights on [-1, 1] by Newton
/// iteration on the Legendre polynomial.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            // Evaluate P_n and P_n' by the three-term recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn gl16_panel<F: FnMut(f64) -> Result<Complex64>>(
    f: &mut F,
    a: f64,
    b: f64,
) -> Result<Complex64> {
    let (nodes, weights) = (&GL16.0, &GL16.1);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights) {
        let v = f(mid + half * x)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonConvergent(format!(
                "contour integrand is non-finite at parameter {:.6}",
                mid + half * x
            )));
        }
        acc += v * *w;
    }
    Ok(acc * half)
}

/// Adaptive composite Gauss–Legendre integral of `f` over `[a, b]`.
///
/// Each panel is accepted when the 16-point estimate agrees with the
/// sum over its two halves within `tol` (split geometrically across
/// recursion). `panel_cap` bounds the total number of half-panels; it
/// is exhausted only by genuinely hostile integrands, and doing so is
/// an error rather than a silent inaccuracy.
pub fn adaptive_gl<F: FnMut(f64) -> Result<Complex64>>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    panel_cap: usize,
) -> Result<Complex64> {
    let mut budget = panel_cap;
    adaptive_gl_inner(f, a, b, tol, &mut budget)
}

fn adaptive_gl_inner<F: FnMut(f64) -> Result<Complex64>>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    budget: &mut usize,
) -> Result<Complex64> {
    let whole = gl16_panel(f, a, b)?;
    if *budget < 2 {
        return Err(Error::NonConvergent(
            "contour quadrature exhausted its subdivision budget".into(),
        ));
    }
    *budget -= 2;
    let mid = 0.5 * (a + b);
    let left = gl16_panel(f, a, mid)?;
    let right = gl16_panel(f, mid, b)?;
    let refined = left + right;
    if (refined - whole).norm() <= tol {
        return Ok(refined);
    }
    let l = adaptive_gl_inner(f, a, mid, 0.5 * tol, budget)?;
    let r = adaptive_gl_inner(f, mid, b, 0.5 * tol, budget)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_handles_smooth_periodic() {
        let cfg = CircleQuad::default();
        let out = circle_mean(|t| Sample::Value(t.cos() * t.cos()), &cfg).unwrap();
        assert!(out.converged);
        assert!((out.value - 0.5).abs() < 1e-12);
        let c = circle_mean(|_| Sample::Value(3.25), &cfg).unwrap();
        assert!((c.value - 3.25).abs() < 1e-15);
    }

    #[test]
    fn jensen_mean_for_linear_map() {
        // (1/2π)∫ log|2e^{iθ} − 1| dθ = log 2: one zero of 2z−1 inside
        // the unit circle at 1/2, and log|f(0)| = 0.
        let cfg = CircleQuad::default();
        let out = circle_mean(
            |t| {
                let z = Complex64::from_polar(1.0, t);
                Sample::Value((2.0 * z - 1.0).norm().ln())
            },
            &cfg,
        )
        .unwrap();
        assert!(out.converged);
        assert!((out.value - 2f64.ln()).abs() < 1e-9, "got {}", out.value);
    }

    #[test]
    fn singular_grid_is_reseated() {
        // log|e^{iθ} − 1| is −∞ at θ = 0, which every unjittered grid
        // contains. The jittered phases must dodge it; the average is 0.
        let cfg = CircleQuad { rel_tol: 1e-6, abs_tol: 5e-4, ..CircleQuad::default() };
        let out = circle_mean(
            |t| {
                let z = Complex64::from_polar(1.0, t);
                let m = (z - 1.0).norm();
                if m == 0.0 {
                    Sample::Singular
                } else {
                    Sample::Value(m.ln())
                }
            },
            &cfg,
        )
        .unwrap();
        assert!(out.value.abs() < 5e-3, "got {}", out.value);
    }

    #[test]
    fn skip_fraction_is_reported() {
        let cfg = CircleQuad::default();
        let out = circle_mean(
            |t| if t < 0.1 { Sample::Skip } else { Sample::Value(1.0) },
            &cfg,
        )
        .unwrap();
        assert!(out.skipped_fraction > 0.0 && out.skipped_fraction < 0.05);
        assert!((out.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hopeless_singularity_errors() {
        let cfg = CircleQuad::default();
        let res = circle_mean(|_| Sample::Singular, &cfg);
        assert!(matches!(res, Err(Error::NonConvergent(_))));
    }

    #[test]
    fn cap_exit_is_not_an_error() {
        // A discontinuous integrand converges too slowly for the cap.
        let cfg = CircleQuad { cap: 256, ..CircleQuad::default() };
        let out = circle_mean(
            |t| Sample::Value(if t < 1.0 { 1.0 } else { 0.0 }),
            &cfg,
        )
        .unwrap();
        assert!(!out.converged);
        assert_eq!(out.nodes, 256);
    }

    #[test]
    fn gauss_legendre_panel_is_spectral() {
        let mut f = |t: f64| Ok(Complex64::new(t.sin(), 0.0));
        let v = gl16_panel(&mut f, 0.0, std::f64::consts::PI).unwrap();
        assert!((v.re - 2.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_gl_resolves_kink() {
        let mut f = |t: f64| Ok(Complex64::new((t - 1.0 / 3.0).abs(), 0.0));
        let v = adaptive_gl(&mut f, 0.0, 1.0, 1e-10, 1 << 16).unwrap();
        assert!((v.re - 5.0 / 18.0).abs() < 1e-9, "got {}", v.re);
    }

    #[test]
    fn adaptive_gl_budget_exhaustion_errors() {
        let mut f = |t: f64| Ok(Complex64::new((t - 0.37).abs().sqrt().sqrt(), 0.0));
        let res = adaptive_gl(&mut f, 0.0, 1.0, 1e-14, 8);
        assert!(matches!(res, Err(Error::NonConvergent(_))));
    }
}
