//! Certified zero location by the argument principle.
//!
//! Zeros of an exponential polynomial inside a disk are counted by the
//! winding number `(1/2πi)∮ f'/f dz` and located by recursive
//! quadrisection of a bounding box, with each box's zero count again
//! certified by a boundary winding integral. Candidate zeros are
//! polished by damped Newton iteration and their multiplicities
//! confirmed by a small probe circle.
//!
//! Contours that pass through (or graze) a zero make the winding
//! integral non-convergent. Two defenses are layered:
//!
//! - circle radii walk a geometric nudge ladder `r·(1 + 2⁻ᵏ·10⁻³)`,
//!   outward so boundary zeros stay included, finest nudge first;
//! - box subdivisions use deterministically jittered split lines, so
//!   zeros on symmetry axes (the common case) never coincide with an
//!   edge; failed splits are retried with fresh jitter.
//!
//! Boxes that still hold ≥ 2 zeros at the subdivision floor are
//! reported as clusters: the count is certified but the individual
//! points are not split apart (`resolved = false`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exp_poly::FloatExpPoly;
use crate::quad::adaptive_gl;

/// Highest multiplicity the prober will attempt to confirm.
pub const MULTIPLICITY_CAP: usize = 16;

/// Absolute winding-integral tolerance; counts are snapped to integers
/// only when within [`WINDING_SNAP`] of one.
const WINDING_TOL: f64 = 1e-6;
const WINDING_SNAP: f64 = 0.25;

/// Per-edge subdivision budget for boundary integrals.
const EDGE_PANEL_CAP: usize = 1 << 12;

/// Zeros this close to the origin (relative to the disk scale) are
/// snapped onto it, so the counting function's origin term is exact.
const ORIGIN_SNAP: f64 = 1e-9;

#[derive(Serialize, Deserialize)]
struct CertifiedZeroJson {
    re: f64,
    im: f64,
    mult: usize,
    cert_radius: f64,
    resolved: bool,
}

/// One zero (or unresolved cluster) with a certified count.
///
/// Serializes as `{re, im, mult, cert_radius, resolved}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(from = "CertifiedZeroJson", into = "CertifiedZeroJson")]
pub struct CertifiedZero {
    /// Refined location (cluster centroid when `resolved` is false).
    pub location: Complex64,
    /// Number of zeros, with multiplicity, in the certification disk.
    pub multiplicity: usize,
    /// Radius of the disk around `location` certified to contain
    /// exactly `multiplicity` zeros.
    pub radius: f64,
    /// True when the entry is a single point of the stated
    /// multiplicity; false for an unsplit cluster.
    pub resolved: bool,
}

impl From<CertifiedZeroJson> for CertifiedZero {
    fn from(j: CertifiedZeroJson) -> Self {
        CertifiedZero {
            location: Complex64::new(j.re, j.im),
            multiplicity: j.mult,
            radius: j.cert_radius,
            resolved: j.resolved,
        }
    }
}

impl From<CertifiedZero> for CertifiedZeroJson {
    fn from(z: CertifiedZero) -> Self {
        CertifiedZeroJson {
            re: z.location.re,
            im: z.location.im,
            mult: z.multiplicity,
            cert_radius: z.radius,
            resolved: z.resolved,
        }
    }
}

/// All zeros of a function inside a disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroSet {
    /// Disk radius actually certified (after any boundary nudge).
    #[serde(rename = "radius")]
    pub disk_radius: f64,
    /// Total number of zeros in the disk, with multiplicity.
    #[serde(rename = "total")]
    pub total_count: usize,
    /// Individual zeros, sorted by modulus then argument.
    pub zeros: Vec<CertifiedZero>,
}

/// Tuning knobs for [`locate_zeros_disk`].
#[derive(Clone, Copy, Debug)]
pub struct LocateOptions {
    /// Subdivision floor as a fraction of the disk scale; boxes are not
    /// split below this size.
    pub resolution: f64,
    /// Error out on unresolved clusters instead of flagging them.
    pub require_resolved: bool,
    /// Seed for the deterministic split-line jitter.
    pub seed: u64,
}

impl Default for LocateOptions {
    fn default() -> Self {
        LocateOptions { resolution: 1e-8, require_resolved: false, seed: 0 }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn unit_fraction(state: &mut u64) -> f64 {
    splitmix64(state) as f64 / u64::MAX as f64
}

/// Logarithmic derivative `f'(z)/f(z)` with a shared overflow shift.
fn log_derivative(f: &FloatExpPoly, fp: &FloatExpPoly, z: Complex64) -> Complex64 {
    let shift = f.max_exponent(z);
    let den = f.eval_shifted(z, shift);
    let num = fp.eval_shifted(z, shift);
    num / den
}

/// `(1/2πi)∮ f'/f dz` around the circle `|z − center| = radius`.
fn winding_circle(
    f: &FloatExpPoly,
    fp: &FloatExpPoly,
    center: Complex64,
    radius: f64,
) -> Result<Complex64> {
    let mut integrand = |t: f64| -> Result<Complex64> {
        let dir = Complex64::from_polar(radius, t);
        Ok(log_derivative(f, fp, center + dir) * dir)
    };
    let total = adaptive_gl(&mut integrand, 0.0, std::f64::consts::TAU, WINDING_TOL, EDGE_PANEL_CAP)?;
    Ok(total / std::f64::consts::TAU)
}

/// Winding integral around an axis-aligned box, counterclockwise.
fn winding_box(
    f: &FloatExpPoly,
    fp: &FloatExpPoly,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
) -> Result<Complex64> {
    let corners = [
        Complex64::new(x0, y0),
        Complex64::new(x1, y0),
        Complex64::new(x1, y1),
        Complex64::new(x0, y1),
    ];
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..4 {
        let (p, q) = (corners[k], corners[(k + 1) % 4]);
        let dir = q - p;
        let mut integrand =
            |t: f64| -> Result<Complex64> { Ok(log_derivative(f, fp, p + dir * t) * dir) };
        total += adaptive_gl(&mut integrand, 0.0, 1.0, WINDING_TOL, EDGE_PANEL_CAP)?;
    }
    Ok(total / Complex64::new(0.0, std::f64::consts::TAU))
}

fn snap_count(w: Complex64) -> Option<usize> {
    let n = w.re.round();
    if (w.re - n).abs() <= WINDING_SNAP && w.im.abs() <= WINDING_SNAP && n >= 0.0 {
        Some(n as usize)
    } else {
        None
    }
}

/// Counts zeros (with multiplicity) in the closed disk
/// `|z − center| ≤ radius`, returning `(count, effective_radius)`.
///
/// Zeros sitting on the boundary circle are absorbed by nudging the
/// radius outward along a geometric ladder; the effective radius
/// actually certified is returned. Exhausting the ladder means a zero
/// clings to every nudged contour, which is reported as such.
pub fn count_zeros_disk(
    f: &FloatExpPoly,
    center: Complex64,
    radius: f64,
) -> Result<(usize, f64)> {
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot count zeros of the zero function".into()));
    }
    if radius <= 0.0 || !radius.is_finite() {
        return Err(Error::InvalidInput(format!("disk radius must be positive, got {radius}")));
    }
    if f.is_polynomial() && f.max_poly_degree() == 0 {
        return Ok((0, radius)); // nonzero constant
    }
    let fp = f.derivative();
    let attempt = |r: f64| -> Result<usize> {
        let w = winding_circle(f, &fp, center, r)?;
        snap_count(w).ok_or_else(|| {
            Error::NonConvergent(format!(
                "winding number {:.6}+{:.6}i did not snap to an integer at radius {r}",
                w.re, w.im
            ))
        })
    };
    if let Ok(n) = attempt(radius) {
        return Ok((n, radius));
    }
    // Finest nudge first: stay as close to the requested disk as the
    // boundary zero allows.
    for k in (0..=20).rev() {
        let r = radius * (1.0 + 1e-3 * 2f64.powi(-k));
        if let Ok(n) = attempt(r) {
            return Ok((n, r));
        }
    }
    Err(Error::ZeroOnContour { radius })
}

/// Damped Newton refinement; magnitudes are compared through
/// `log_abs` so overflow-scale values stay ordered correctly.
fn newton_refine(
    f: &FloatExpPoly,
    fp: &FloatExpPoly,
    start: Complex64,
    tol: f64,
) -> Option<Complex64> {
    let mut z = start;
    let mut fz_log = f.log_abs(z);
    for _ in 0..80 {
        if fz_log == f64::NEG_INFINITY {
            return Some(z); // exact zero in floating point
        }
        let g = log_derivative(f, fp, z);
        if !g.re.is_finite() || !g.im.is_finite() || g.norm() == 0.0 {
            return None;
        }
        let mut step = 1.0 / g; // Newton step f/f'
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        let mut accepted = false;
        for _ in 0..24 {
            let cand = z - step;
            let cand_log = f.log_abs(cand);
            if cand_log < fz_log {
                if (z - cand).norm() <= tol {
                    return Some(cand);
                }
                z = cand;
                fz_log = cand_log;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return if fz_log < (tol.ln() * 2.0).max(-600.0) { Some(z) } else { None };
        }
    }
    None
}

struct Locator {
    f: FloatExpPoly,
    /// Derivative chain: `derivs[k]` is the k-th derivative of `f`.
    derivs: Vec<FloatExpPoly>,
    scale: f64,
    floor: f64,
    jitter: u64,
    found: Vec<CertifiedZero>,
}

impl Locator {
    fn deriv(&mut self, k: usize) -> &FloatExpPoly {
        while self.derivs.len() <= k {
            let next = self.derivs.last().expect("nonempty chain").derivative();
            self.derivs.push(next);
        }
        &self.derivs[k]
    }

    /// Certify that the disk `(center, radius)` holds exactly `m`
    /// zeros of `f`.
    fn probe(&mut self, center: Complex64, radius: f64, m: usize) -> bool {
        let fp = self.deriv(1).clone();
        matches!(
            winding_circle(&self.derivs[0], &fp, center, radius).map(snap_count),
            Ok(Some(n)) if n == m
        )
    }

    /// Attempts to collapse a box known to hold `m` zeros into a single
    /// certified point of multiplicity `m`.
    fn try_resolve(&mut self, cx: f64, cy: f64, half: f64, m: usize) -> bool {
        if m > MULTIPLICITY_CAP {
            return false;
        }
        let center = Complex64::new(cx, cy);
        // An m-fold zero of f is a simple zero of f^(m-1); Newton on
        // that derivative converges quadratically to it.
        let target = self.deriv(m - 1).clone();
        let tp = self.deriv(m).clone();
        let tol = 1e-13 * self.scale;
        let Some(mut z) = newton_refine(&target, &tp, center, tol) else { return false };
        if (z - center).norm() > half * 1.5 {
            return false; // Newton escaped the box: not this box's zero
        }
        if z.norm() <= ORIGIN_SNAP * self.scale {
            z = Complex64::new(0.0, 0.0);
        }
        let probe_radius = (half * 0.5).max(1e-11 * self.scale).min(half * 0.9 + 1e-300);
        if !self.probe(z, probe_radius, m) {
            return false;
        }
        self.found.push(CertifiedZero {
            location: z,
            multiplicity: m,
            radius: probe_radius,
            resolved: true,
        });
        true
    }

    /// Recursive quadrisection of the box `[x0,x1]×[y0,y1]` known to
    /// hold `count` zeros.
    fn subdivide(&mut self, x0: f64, x1: f64, y0: f64, y1: f64, count: usize) -> Result<()> {
        debug_assert!(count > 0);
        let half = 0.5 * (x1 - x0).max(y1 - y0);
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        // Collapse attempts start once the box is modestly small; on a
        // huge box a multiplicity probe would be meaningless.
        if half <= 1e-2 * self.scale && self.try_resolve(cx, cy, half, count) {
            return Ok(());
        }
        if half <= self.floor {
            // Subdivision floor: certify the count, flag the cluster.
            self.found.push(CertifiedZero {
                location: Complex64::new(cx, cy),
                multiplicity: count,
                radius: half * std::f64::consts::SQRT_2,
                resolved: false,
            });
            return Ok(());
        }
        let fp = self.deriv(1).clone();
        'attempt: for _ in 0..6 {
            // Jittered split lines: never exactly the midline, so zeros
            // on symmetry axes miss every edge.
            let fx = 0.42 + 0.16 * unit_fraction(&mut self.jitter);
            let fy = 0.42 + 0.16 * unit_fraction(&mut self.jitter);
            let sx = x0 + fx * (x1 - x0);
            let sy = y0 + fy * (y1 - y0);
            let quads = [(x0, sx, y0, sy), (sx, x1, y0, sy), (x0, sx, sy, y1), (sx, x1, sy, y1)];
            let mut counts = [0usize; 4];
            let mut remaining = count;
            for (i, &(a, b, c, d)) in quads.iter().enumerate() {
                let n = match winding_box(&self.derivs[0], &fp, a, b, c, d) {
                    Ok(w) => match snap_count(w) {
                        Some(n) => n,
                        None => continue 'attempt,
                    },
                    Err(_) => continue 'attempt, // edge grazed a zero: re-jitter
                };
                if n > remaining {
                    continue 'attempt; // inconsistent with the parent count
                }
                counts[i] = n;
                remaining -= n;
            }
            if remaining != 0 {
                continue 'attempt;
            }
            let saved = self.found.len();
            for (&(a, b, c, d), &n) in quads.iter().zip(&counts) {
                if n > 0 {
                    if let Err(e) = self.subdivide(a, b, c, d, n) {
                        // A deeper split failed; rewind and re-jitter here.
                        self.found.truncate(saved);
                        if matches!(e, Error::NonConvergent(_)) {
                            continue 'attempt;
                        }
                        return Err(e);
                    }
                }
            }
            return Ok(());
        }
        Err(Error::NonConvergent(format!(
            "could not split a box at ({cx:.6}, {cy:.6}) holding {count} zeros: every jittered \
             boundary grazed a zero"
        )))
    }
}

/// Locates all zeros of `f` in the closed disk `|z − center| ≤
/// radius`, certifying both the total and each individual entry by
/// winding integrals.
pub fn locate_zeros_disk(
    f: &FloatExpPoly,
    center: Complex64,
    radius: f64,
    opts: &LocateOptions,
) -> Result<ZeroSet> {
    let (total, r_eff) = count_zeros_disk(f, center, radius)?;
    if total == 0 {
        return Ok(ZeroSet { disk_radius: r_eff, total_count: 0, zeros: Vec::new() });
    }
    let scale = radius.max(1.0) + center.norm();
    let mut loc = Locator {
        f: f.clone(),
        derivs: vec![f.clone(), f.derivative()],
        scale,
        floor: opts.resolution * scale,
        jitter: opts.seed ^ 0x5bf0_3635_dae3_9f2d,
        found: Vec::new(),
    };
    // Bounding box of the disk, slightly inflated so boundary zeros
    // (already absorbed by the circle's nudge ladder) fall inside; if a
    // zero grazes the box itself, grow a little more and retry.
    let mut box_count = None;
    let fp = loc.derivs[1].clone();
    let mut hw = r_eff * (1.0 + 1e-6);
    for _ in 0..8 {
        let w = winding_box(
            &loc.f,
            &fp,
            center.re - hw,
            center.re + hw,
            center.im - hw,
            center.im + hw,
        );
        if let Ok(Some(n)) = w.map(snap_count) {
            box_count = Some((n, hw));
            break;
        }
        hw *= 1.0 + 1e-4;
    }
    let Some((box_total, hw)) = box_count else {
        return Err(Error::NonConvergent(
            "no bounding box for the disk produced a stable winding number".into(),
        ));
    };
    debug_assert!(box_total >= total);
    if box_total > 0 {
        loc.subdivide(center.re - hw, center.re + hw, center.im - hw, center.im + hw, box_total)?;
    }
    // Keep only zeros inside the certified disk (the box corners may
    // hold extras), then reconcile against the circle count.
    let keep_r = r_eff * (1.0 + 1e-12);
    let located = std::mem::take(&mut loc.found);
    let mut zeros: Vec<CertifiedZero> =
        located.into_iter().filter(|z| (z.location - center).norm() <= keep_r).collect();
    let kept: usize = zeros.iter().map(|z| z.multiplicity).sum();
    if kept != total {
        return Err(Error::NonConvergent(format!(
            "zero count mismatch: circle certifies {total} but located {kept} inside the disk"
        )));
    }
    if opts.require_resolved {
        if let Some(c) = zeros.iter().find(|z| !z.resolved) {
            return Err(Error::ClusterUnresolved {
                re: c.location.re,
                im: c.location.im,
                count: c.multiplicity as i64,
            });
        }
    }
    // Shrink overlapping certification disks so they are pairwise
    // disjoint; every shrink is re-verified by a fresh winding probe.
    let n = zeros.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = (zeros[i].location - zeros[j].location).norm();
            if dist > 0.0 && zeros[i].radius + zeros[j].radius >= dist {
                for k in [i, j] {
                    let shrunk = (0.45 * dist).min(zeros[k].radius);
                    let m = zeros[k].multiplicity;
                    let p = zeros[k].location;
                    if zeros[k].resolved && !loc.probe(p, shrunk, m) {
                        zeros[k].resolved = false;
                    }
                    zeros[k].radius = shrunk;
                }
            }
        }
    }
    zeros.sort_by(|a, b| {
        let (ma, mb) = (a.location.norm(), b.location.norm());
        ma.total_cmp(&mb).then(a.location.arg().total_cmp(&b.location.arg()))
    });
    Ok(ZeroSet { disk_radius: r_eff, total_count: total, zeros })
}

/// Integrated counting function from a located zero set:
/// `N(r) = Σ_{0<|z_k|≤r} m_k·log(r/|z_k|) + m₀·log r`,
/// with multiplicities clipped at `truncation` when given.
///
/// `zeros` must come from a disk of radius ≥ `r`; entries outside `r`
/// are ignored, so one location pass at the largest radius serves a
/// whole radius grid.
pub fn counting_from_zeros(zeros: &[CertifiedZero], r: f64, truncation: Option<usize>) -> f64 {
    let clip = |m: usize| truncation.map_or(m, |q| m.min(q)) as f64;
    let mut acc = 0.0;
    for z in zeros {
        let rho = z.location.norm();
        if rho == 0.0 {
            acc += clip(z.multiplicity) * r.ln();
        } else if rho <= r {
            acc += clip(z.multiplicity) * (r / rho).ln();
        }
    }
    acc
}

/// Integrated counting function `N_f(a, r)` of the a-points of `f`:
/// zeros of `f − a` are located and certified, then log-weighted.
pub fn counting_n(f: &FloatExpPoly, a: Complex64, r: f64, opts: &LocateOptions) -> Result<f64> {
    let g = f.sub(&FloatExpPoly::constant(a));
    if g.is_zero() {
        return Err(Error::InvalidInput(
            "counting function undefined: the function is identically equal to the target".into(),
        ));
    }
    let set = locate_zeros_disk(&g, Complex64::new(0.0, 0.0), r, opts)?;
    Ok(counting_from_zeros(&set.zeros, r, None))
}

/// Truncated counting function `N^(Q)_f(a, r)`: each multiplicity is
/// clipped at `Q ≥ 1`.
pub fn counting_n_truncated(
    f: &FloatExpPoly,
    a: Complex64,
    r: f64,
    q: usize,
    opts: &LocateOptions,
) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidInput("truncation level must be at least 1".into()));
    }
    let g = f.sub(&FloatExpPoly::constant(a));
    if g.is_zero() {
        return Err(Error::InvalidInput(
            "counting function undefined: the function is identically equal to the target".into(),
        ));
    }
    let set = locate_zeros_disk(&g, Complex64::new(0.0, 0.0), r, opts)?;
    Ok(counting_from_zeros(&set.zeros, r, Some(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_float;

    const TAU: f64 = std::f64::consts::TAU;

    fn opts() -> LocateOptions {
        LocateOptions::default()
    }

    #[test]
    fn counts_zeros_of_shifted_exponential() {
        // e^z − 1 vanishes at 2πik; |k| ≤ 1 lands in the disk of radius 10.
        let f = parse_float("exp(z) - 1").unwrap();
        let (n, r) = count_zeros_disk(&f, Complex64::new(0.0, 0.0), 10.0).unwrap();
        assert_eq!(n, 3);
        assert_eq!(r, 10.0);
    }

    #[test]
    fn locates_zeros_of_shifted_exponential() {
        let f = parse_float("exp(z) - 1").unwrap();
        let set = locate_zeros_disk(&f, Complex64::new(0.0, 0.0), 10.0, &opts()).unwrap();
        assert_eq!(set.total_count, 3);
        assert_eq!(set.zeros.len(), 3);
        assert!(set.zeros.iter().all(|z| z.resolved && z.multiplicity == 1));
        // Sorted by modulus: origin first (snapped exactly), then ±2πi.
        assert_eq!(set.zeros[0].location, Complex64::new(0.0, 0.0));
        let z1 = set.zeros[1].location;
        let z2 = set.zeros[2].location;
        assert!((z1.norm() - TAU).abs() < 1e-8);
        assert!((z2.norm() - TAU).abs() < 1e-8);
        assert!((z1.re).abs() < 1e-8 && (z2.re).abs() < 1e-8);
        assert!(z1.im * z2.im < 0.0, "conjugate pair");
    }

    #[test]
    fn certifies_multiplicities() {
        // (e^z − 1)² has double zeros on the 2πi lattice.
        let f = parse_float("(exp(z) - 1)^2").unwrap();
        let set = locate_zeros_disk(&f, Complex64::new(0.0, 0.0), 7.0, &opts()).unwrap();
        assert_eq!(set.total_count, 6);
        assert_eq!(set.zeros.len(), 3);
        assert!(set.zeros.iter().all(|z| z.multiplicity == 2 && z.resolved));
    }

    #[test]
    fn polynomial_zero_with_multiplicity_at_origin() {
        let f = parse_float("z^2*exp(z)").unwrap();
        let set = locate_zeros_disk(&f, Complex64::new(0.0, 0.0), 2.0, &opts()).unwrap();
        assert_eq!(set.total_count, 2);
        assert_eq!(set.zeros.len(), 1);
        assert_eq!(set.zeros[0].location, Complex64::new(0.0, 0.0));
        assert_eq!(set.zeros[0].multiplicity, 2);
    }

    #[test]
    fn unit_has_no_zeros() {
        let f = parse_float("3*exp(2*z)").unwrap();
        let set = locate_zeros_disk(&f, Complex64::new(0.0, 0.0), 50.0, &opts()).unwrap();
        assert_eq!(set.total_count, 0);
        assert!(set.zeros.is_empty());
    }

    #[test]
    fn boundary_zero_is_absorbed_by_the_nudge_ladder() {
        // z − 1 has its only zero exactly on the circle of radius 1.
        let f = parse_float("z - 1").unwrap();
        let (n, r_eff) = count_zeros_disk(&f, Complex64::new(0.0, 0.0), 1.0).unwrap();
        assert_eq!(n, 1);
        assert!(r_eff > 1.0 && r_eff < 1.0 + 2e-3, "nudged radius {r_eff}");
    }

    #[test]
    fn distinct_close_zeros_are_separated() {
        // Zeros at ±0.01, well below the default cluster floor scale.
        let f = parse_float("z^2 - 1/10000").unwrap();
        let set = locate_zeros_disk(&f, Complex64::new(0.0, 0.0), 1.0, &opts()).unwrap();
        assert_eq!(set.total_count, 2);
        assert_eq!(set.zeros.len(), 2);
        for z in &set.zeros {
            assert!(z.resolved && z.multiplicity == 1);
            assert!((z.location.norm() - 0.01).abs() < 1e-10);
        }
        // Certification disks must not overlap.
        let d = (set.zeros[0].location - set.zeros[1].location).norm();
        assert!(set.zeros[0].radius + set.zeros[1].radius < d);
    }

    #[test]
    fn counting_function_from_zero_list() {
        let zeros = [
            CertifiedZero {
                location: Complex64::new(0.0, 0.0),
                multiplicity: 1,
                radius: 1e-6,
                resolved: true,
            },
            CertifiedZero {
                location: Complex64::new(0.5, 0.0),
                multiplicity: 3,
                radius: 1e-6,
                resolved: true,
            },
            CertifiedZero {
                location: Complex64::new(0.0, 2.0),
                multiplicity: 1,
                radius: 1e-6,
                resolved: true,
            },
        ];
        let r = 1.0;
        let expected = 3.0 * (1.0f64 / 0.5).ln(); // origin: log 1 = 0; z=2i outside
        assert!((counting_from_zeros(&zeros, r, None) - expected).abs() < 1e-15);
        let truncated = 2.0 * (1.0f64 / 0.5).ln();
        assert!((counting_from_zeros(&zeros, r, Some(2)) - truncated).abs() < 1e-15);
        // Larger radius picks up the outer zero and the origin term.
        let r2 = 4.0;
        let expected2 = 4.0f64.ln() + 3.0 * (4.0f64 / 0.5).ln() + (4.0f64 / 2.0).ln();
        assert!((counting_from_zeros(&zeros, r2, None) - expected2).abs() < 1e-12);
    }

    #[test]
    fn counting_function_examples() {
        let o = opts();
        let ez = parse_float("exp(z)").unwrap();
        assert_eq!(counting_n(&ez, Complex64::new(0.0, 0.0), 25.0, &o).unwrap(), 0.0);

        let z = parse_float("z").unwrap();
        let e = std::f64::consts::E;
        assert!((counting_n(&z, Complex64::new(0.0, 0.0), e, &o).unwrap() - 1.0).abs() < 1e-12);

        // Zeros of e^z − 1 within radius 7: origin plus ±2πi.
        let f = parse_float("exp(z) - 1").unwrap();
        let expected = 7f64.ln() + 2.0 * (7.0 / TAU).ln();
        let got = counting_n(&f, Complex64::new(0.0, 0.0), 7.0, &o).unwrap();
        assert!((got - expected).abs() < 1e-8, "got {got}, expected {expected}");

        let z2 = parse_float("z^2").unwrap();
        let zero = Complex64::new(0.0, 0.0);
        assert!((counting_n_truncated(&z2, zero, e, 1, &o).unwrap() - 1.0).abs() < 1e-12);
        assert!((counting_n_truncated(&z2, zero, e, 5, &o).unwrap() - 2.0).abs() < 1e-12);
        let g = parse_float("(z - 1)^2").unwrap();
        let t = counting_n_truncated(&g, zero, 2.0, 1, &o).unwrap();
        assert!((t - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn zero_set_serializes_with_documented_field_names() {
        let f = parse_float("z^2").unwrap();
        let set = locate_zeros_disk(&f, Complex64::new(0.0, 0.0), 1.0, &opts()).unwrap();
        let json = serde_json::to_value(&set).unwrap();
        assert_eq!(json["total"], 2);
        assert!(json["radius"].as_f64().unwrap() >= 1.0);
        assert_eq!(json["zeros"][0]["mult"], 2);
        assert!(json["zeros"][0]["cert_radius"].as_f64().unwrap() > 0.0);
        assert_eq!(json["zeros"][0]["re"], 0.0);
        let back: ZeroSet = serde_json::from_value(json).unwrap();
        assert_eq!(back.total_count, 2);
        assert_eq!(back.zeros[0].multiplicity, 2);
    }

    #[test]
    fn dense_zero_line_in_larger_disk() {
        // e^{2z} − 1: zeros at πik, five of them within radius 7.
        let f = parse_float("exp(2*z) - 1").unwrap();
        let set = locate_zeros_disk(&f, Complex64::new(0.0, 0.0), 7.0, &opts()).unwrap();
        assert_eq!(set.total_count, 5);
        for (z, expect) in set.zeros.iter().zip([0.0, TAU / 2.0, TAU / 2.0, TAU, TAU]) {
            assert!((z.location.norm() - expect).abs() < 1e-8);
        }
    }
}
