//! Moving hyperplane targets: coefficient spaces, lifted curves, and
//! the second-main-theorem verifiers for targets whose coefficients
//! grow slowly relative to the curve.
//!
//! A moving hyperplane is a linear form `L = γ₀X₀ + … + γ_nX_n` whose
//! coefficients are exponential polynomials of slow growth. The
//! verification strategy is constructive: build the finite-dimensional
//! coefficient space `V(t)` spanned by bounded-degree monomials in the
//! γ's, pick a monomial basis `h₁ = 1, h₂, …, h_w` of `V(t+1)`, lift
//! the curve `[f₀ : … : f_n]` to `[h₁f₀ : … : h_wf_n]`, and re-express
//! each product `h_i·L_j` as a fixed hyperplane in the lifted
//! coordinates. All constructions are exact (Gaussian-rational);
//! integrals run in floats with explicit tolerances.

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::contour_zeros::{counting_from_zeros, locate_zeros_disk, LocateOptions};
use crate::error::{Error, Result};
use crate::exp_poly::{determinant, wronskian, ExactExpPoly, ExpPoly, FloatExpPoly};
use crate::linalg::{combinations, rank, solve, FloatRankAccumulator};
use crate::nevanlinna::{
    common_zeros, curve_characteristic, on_circle, proximity_m, validate_radii, HoloCurve, Target,
    GREEDY_RANK_TOL,
};
use crate::quad::{circle_mean, CircleQuad, QuadOutcome, Sample};
use crate::report::{RadiusRow, VerifierReport};
use crate::scalar::{GaussianRational, Scalar};

/// Hard cap on the number of coefficient monomials enumerated while
/// building `V(t)`; beyond this the construction refuses loudly.
const VT_MONOMIAL_CAP: u128 = 10_000;

/// Multiplicative slack (times `T(r)`) for the moving truncation
/// inequality.
const MOVING_TRUNCATION_SLACK: f64 = 0.05;

/// Radii at which a freshly lifted curve is sanity-checked against the
/// characteristic sandwich `T_base ≤ T_lift ≤ T_base + Σ T_{h}`.
const SANDWICH_RADII: [f64; 2] = [2.0, 10.0];

/// Growth scale of a reference curve, used to decide slow-growth
/// ("coefficient field") membership for exponential polynomials.
///
/// The characteristic of `p(z)·e^{λz}` grows like `|λ|·r/π` when
/// `λ ≠ 0` and like `deg(p)·log r` otherwise, so growth comparison
/// reduces to comparing frequency magnitudes, with polynomials below
/// every exponential and constants below every nonconstant function.
#[derive(Clone, Copy, Debug)]
pub struct GrowthScale {
    freq_scale: f64,
}

impl GrowthScale {
    /// Extracts the scale of a reference curve: the largest frequency
    /// modulus over its components. The reference must be nonconstant —
    /// nothing has slow growth relative to a bounded function.
    pub fn of_components<S: Scalar>(comps: &[ExpPoly<S>]) -> Result<GrowthScale> {
        let freq_scale = comps.iter().map(|c| c.max_freq_abs()).fold(0.0, f64::max);
        if freq_scale == 0.0 && comps.iter().all(|c| c.is_polynomial() && c.max_poly_degree() == 0)
        {
            return Err(Error::InvalidInput(
                "reference curve is constant; its growth scale admits no slow-growth \
                 coefficients"
                    .into(),
            ));
        }
        Ok(GrowthScale { freq_scale })
    }

    pub fn freq_scale(&self) -> f64 {
        self.freq_scale
    }

    /// Whether `a` has slow growth relative to this scale: its largest
    /// frequency modulus is strictly below the reference's, or `a` is a
    /// polynomial while the reference is exponential. Against a purely
    /// polynomial reference only constants (and zero) qualify.
    pub fn dominates<S: Scalar>(&self, a: &ExpPoly<S>) -> bool {
        if a.is_zero() {
            return true;
        }
        let af = a.max_freq_abs();
        if self.freq_scale > 0.0 {
            af < self.freq_scale
        } else {
            a.is_polynomial() && a.max_poly_degree() == 0
        }
    }
}

/// A hyperplane `γ₀X₀ + … + γ_nX_n = 0` with slowly growing
/// exponential-polynomial coefficients.
#[derive(Clone, Debug)]
pub struct MovingHyperplane {
    coeffs: Vec<ExactExpPoly>,
}

impl MovingHyperplane {
    /// Validates that the coefficients are not all zero and that every
    /// nonzero coefficient has slow growth relative to `scale`.
    pub fn new(coeffs: Vec<ExactExpPoly>, scale: &GrowthScale) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidInput(
                "moving hyperplane needs at least one nonzero coefficient".into(),
            ));
        }
        for (k, c) in coeffs.iter().enumerate() {
            if !scale.dominates(c) {
                return Err(Error::InvalidInput(format!(
                    "moving coefficient {k} does not have slow growth relative to the \
                     reference curve (frequency scale {})",
                    scale.freq_scale
                )));
            }
        }
        Ok(MovingHyperplane { coeffs })
    }

    /// A hyperplane with constant coefficients; constants are slowly
    /// growing against every nonconstant reference, so no scale is
    /// needed.
    pub fn from_constants(coeffs: Vec<GaussianRational>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidInput(
                "moving hyperplane needs at least one nonzero coefficient".into(),
            ));
        }
        Ok(MovingHyperplane { coeffs: coeffs.into_iter().map(ExpPoly::constant).collect() })
    }

    pub fn coeffs(&self) -> &[ExactExpPoly] {
        &self.coeffs
    }

    /// Pullback `Σ γ_k·f_k` of the moving form through a curve.
    pub fn pullback(&self, curve: &HoloCurve<GaussianRational>) -> Result<ExactExpPoly> {
        if self.coeffs.len() != curve.components().len() {
            return Err(Error::InvalidInput(format!(
                "moving hyperplane has {} coefficients but the curve has {} components",
                self.coeffs.len(),
                curve.components().len()
            )));
        }
        let mut acc = ExpPoly::zero();
        for (g, f) in self.coeffs.iter().zip(curve.components()) {
            acc = acc.add(&g.mul(f));
        }
        Ok(acc)
    }
}

/// Monomial basis data for the coefficient spaces `V(t) ⊂ V(t+1)`
/// spanned by products of the moving coefficients of total degree at
/// most `t` (resp. `t+1`).
#[derive(Clone, Debug)]
pub struct VtBasis {
    t: usize,
    generators: Vec<ExactExpPoly>,
    /// Basis monomials `h₁ = 1, …, h_w` of `V(t+1)`; the first `u` of
    /// them span `V(t)`.
    extended: Vec<ExactExpPoly>,
    u: usize,
}

impl VtBasis {
    pub fn t(&self) -> usize {
        self.t
    }

    /// `dim V(t)`.
    pub fn u(&self) -> usize {
        self.u
    }

    /// `dim V(t+1)`.
    pub fn w(&self) -> usize {
        self.extended.len()
    }

    /// Basis of `V(t)`: the first `u` extended-basis elements.
    pub fn basis(&self) -> &[ExactExpPoly] {
        &self.extended[..self.u]
    }

    /// Basis `h₁..h_w` of `V(t+1)`, with `h₁ = 1` first.
    pub fn extended_basis(&self) -> &[ExactExpPoly] {
        &self.extended
    }

    pub fn generators(&self) -> &[ExactExpPoly] {
        &self.generators
    }
}

/// Canonical coordinate keys `(frequency, z-power)` for a family of
/// exact exponential polynomials. Coordinates in this key order are a
/// faithful ℂ-linear representation: `z^p·e^{λz}` are independent.
fn collect_keys(fs: &[ExactExpPoly]) -> Vec<(GaussianRational, usize)> {
    let mut keys: Vec<(GaussianRational, usize)> = Vec::new();
    for f in fs {
        for term in f.terms() {
            for (p, c) in term.coef.coeffs().iter().enumerate() {
                if !Scalar::is_zero(c) {
                    keys.push((term.freq.clone(), p));
                }
            }
        }
    }
    keys.sort_by(key_cmp);
    keys.dedup();
    keys
}

fn key_cmp(a: &(GaussianRational, usize), b: &(GaussianRational, usize)) -> Ordering {
    a.0.freq_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Coordinates of `f` over `keys`; `None` when `f` involves a
/// frequency–power pair outside the key set (hence outside the span).
fn coordinates(f: &ExactExpPoly, keys: &[(GaussianRational, usize)]) -> Option<Vec<GaussianRational>> {
    let mut row = vec![GaussianRational::zero(); keys.len()];
    for term in f.terms() {
        for (p, c) in term.coef.coeffs().iter().enumerate() {
            if Scalar::is_zero(c) {
                continue;
            }
            let idx = keys
                .binary_search_by(|k| k.0.freq_cmp(&term.freq).then(k.1.cmp(&p)))
                .ok()?;
            row[idx] = c.clone();
        }
    }
    Some(row)
}

/// Exact ℂ-linear rank of a family of exponential polynomials via
/// frequency-monomial coordinates.
fn exact_rank(fs: &[ExactExpPoly]) -> Result<usize> {
    let keys = collect_keys(fs);
    let rows: Vec<Vec<GaussianRational>> = fs
        .iter()
        .map(|f| coordinates(f, &keys).expect("keys were collected from this family"))
        .collect();
    rank(&rows)
}

/// Incremental exact row reducer (Gauss–Jordan): stored rows are
/// normalized to pivot 1 and zeroed at every other pivot column, so
/// membership tests are order-independent.
struct ExactRowReducer {
    rows: Vec<(usize, Vec<GaussianRational>)>,
}

impl ExactRowReducer {
    fn new() -> Self {
        ExactRowReducer { rows: Vec::new() }
    }

    /// Adds `row` if it enlarges the span; returns whether it did.
    fn try_add(&mut self, mut row: Vec<GaussianRational>) -> Result<bool> {
        for (p, r) in &self.rows {
            if !Scalar::is_zero(&row[*p]) {
                let f = row[*p].clone();
                for (a, b) in row.iter_mut().zip(r) {
                    *a = a.sub(&f.mul(b));
                }
            }
        }
        let Some(p) = row.iter().position(|c| !Scalar::is_zero(c)) else {
            return Ok(false);
        };
        let piv = row[p].clone();
        for a in &mut row {
            *a = a.div(&piv)?;
        }
        for (_, r) in &mut self.rows {
            if !Scalar::is_zero(&r[p]) {
                let f = r[p].clone();
                for (a, b) in r.iter_mut().zip(&row) {
                    *a = a.sub(&f.mul(b));
                }
            }
        }
        self.rows.push((p, row));
        Ok(true)
    }
}

/// Number of monomials of total degree ≤ `deg` in `k` generators:
/// `C(k + deg, deg)`, or `None` on overflow.
fn simplex_count(k: usize, deg: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 1..=deg {
        acc = acc.checked_mul((k + i) as u128)?;
        acc /= i as u128;
    }
    Some(acc)
}

/// All exponent vectors of total degree exactly `d` over `k`
/// generators, in ascending lexicographic order.
pub(crate) fn compositions(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if d == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if k == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=d {
            prefix.push(first);
            rec(d - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, &mut Vec::new(), &mut out);
    out
}

/// Builds the monomial bases of `V(t)` and `V(t+1)` for a generator
/// set: enumerate products `Π γᵢ^{nᵢ}` with `Σn ≤ t+1` in graded
/// lexicographic order and keep those that enlarge the exact span.
/// The empty product pins `h₁ = 1` first. Zero generators are ignored.
pub fn build_vt(gammas: &[ExactExpPoly], t: usize) -> Result<VtBasis> {
    let gens: Vec<ExactExpPoly> = gammas.iter().filter(|g| !g.is_zero()).cloned().collect();
    let k = gens.len();
    match simplex_count(k, t + 1) {
        Some(count) if count <= VT_MONOMIAL_CAP => {}
        _ => {
            return Err(Error::ResourceLimit(format!(
                "V({}) over {k} generators needs more than {VT_MONOMIAL_CAP} monomials",
                t + 1
            )));
        }
    }
    let mut candidates: Vec<(usize, ExactExpPoly)> = Vec::new();
    for d in 0..=t + 1 {
        for expvec in compositions(d, k) {
            let mut m = ExpPoly::one();
            for (g, &e) in gens.iter().zip(&expvec) {
                if e > 0 {
                    m = m.mul(&g.pow_int(e as u32));
                }
            }
            candidates.push((d, m));
        }
    }
    let all: Vec<ExactExpPoly> = candidates.iter().map(|(_, m)| m.clone()).collect();
    let keys = collect_keys(&all);
    let mut reducer = ExactRowReducer::new();
    let mut extended = Vec::new();
    let mut u = 0;
    for (d, m) in candidates {
        let row = coordinates(&m, &keys).expect("keys were collected from the candidates");
        if reducer.try_add(row)? {
            if d <= t {
                u += 1;
            }
            extended.push(m);
        }
    }
    Ok(VtBasis { t, generators: gens, extended, u })
}

/// A curve lifted through a coefficient basis: `[h₁f₀ : … : h_wf_n]`,
/// component-major (all `w` products of `f₀` first).
#[derive(Clone, Debug)]
pub struct LiftedCurve {
    base: HoloCurve<GaussianRational>,
    basis: VtBasis,
    components: Vec<ExactExpPoly>,
}

impl LiftedCurve {
    pub fn base(&self) -> &HoloCurve<GaussianRational> {
        &self.base
    }

    pub fn basis(&self) -> &VtBasis {
        &self.basis
    }

    /// The `w(n+1)` products `h_ν·f_k`, indexed by `k·w + ν`.
    pub fn components(&self) -> &[ExactExpPoly] {
        &self.components
    }

    pub fn to_float(&self) -> Vec<FloatExpPoly> {
        self.components.iter().map(|c| c.to_float()).collect()
    }
}

/// Lifts `curve` through the extended basis of `vb` and verifies the
/// characteristic sandwich `T_base ≤ T_lift ≤ T_base + Σᵥ T_{hᵥ}`
/// numerically at fixed sample radii. The caller is responsible for
/// passing a reduced curve (no common zeros among components); since
/// `h₁ = 1`, the lift is then reduced as well.
pub fn lift_curve(curve: &HoloCurve<GaussianRational>, vb: &VtBasis) -> Result<LiftedCurve> {
    let mut components = Vec::with_capacity(vb.w() * curve.components().len());
    for f in curve.components() {
        for h in vb.extended_basis() {
            components.push(h.mul(f));
        }
    }
    let lifted =
        LiftedCurve { base: curve.clone(), basis: vb.clone(), components };
    let cfg = CircleQuad::default();
    let base_f = curve.to_float();
    let lift_f = lifted.to_float();
    for r in SANDWICH_RADII {
        let t_base = curve_characteristic(&base_f, &[], r, &cfg)?;
        let t_lift = curve_characteristic(&lift_f, &[], r, &cfg)?;
        let mut h_sum = 0.0;
        for h in vb.extended_basis() {
            h_sum += proximity_m(&h.to_float(), Target::Infinity, r, &cfg)?.value;
        }
        let tol = 1e-4 * (1.0 + t_base.abs() + h_sum.abs());
        if t_lift < t_base - tol || t_lift > t_base + h_sum + tol {
            return Err(Error::NonConvergent(format!(
                "lifted-curve characteristic at r = {r} violates its sandwich bound: \
                 {t_lift} outside [{t_base}, {}]",
                t_base + h_sum
            )));
        }
    }
    Ok(lifted)
}

/// A fixed hyperplane on the lifted space expressing `h_i·L_j`: the
/// identity `h_i·L_j(x₀, …, x_n) = Σ_k Σ_ν c_{kν}·h_ν·x_k` holds
/// exactly, with `c` indexed by `k·w + ν` to match `LiftedCurve`.
#[derive(Clone, Debug)]
pub struct HatHyperplane {
    /// 1-based index of `h_i` in the `V(t)` basis (`1..=u`).
    pub i: usize,
    /// 0-based index of the moving hyperplane `L_j`.
    pub j: usize,
    pub c: Vec<GaussianRational>,
}

/// Re-expresses every product `h_i·L_j` (for `h_i` in the `V(t)` basis)
/// as a fixed hyperplane in the lifted coordinates, by solving the
/// exact linear systems `h_i·γ_{jk} = Σ_ν c·h_ν` and re-verifying each
/// resulting identity symbolically.
pub fn express_hat_hyperplanes(
    vb: &VtBasis,
    hs: &[MovingHyperplane],
) -> Result<Vec<HatHyperplane>> {
    if hs.is_empty() {
        return Err(Error::InvalidInput("no moving hyperplanes given".into()));
    }
    let w = vb.w();
    let keys = collect_keys(vb.extended_basis());
    // Column ν of `a` holds the coordinates of h_{ν+1}.
    let basis_coords: Vec<Vec<GaussianRational>> = vb
        .extended_basis()
        .iter()
        .map(|h| coordinates(h, &keys).expect("keys cover the basis"))
        .collect();
    let a: Vec<Vec<GaussianRational>> = (0..keys.len())
        .map(|row| (0..w).map(|col| basis_coords[col][row].clone()).collect())
        .collect();
    let mut hats = Vec::new();
    for (i0, h) in vb.basis().iter().enumerate() {
        let i = i0 + 1;
        for (j, hyper) in hs.iter().enumerate() {
            let mut c = Vec::with_capacity(w * hyper.coeffs().len());
            for (k, gamma) in hyper.coeffs().iter().enumerate() {
                let product = h.mul(gamma);
                let rhs = coordinates(&product, &keys)
                    .ok_or(Error::OutsideSpan { i, j, k })?;
                let sol =
                    solve(&a, &rhs)?.ok_or(Error::OutsideSpan { i, j, k })?;
                // Symbolic re-verification of the defining identity.
                let mut recombined = ExpPoly::zero();
                for (cv, hv) in sol.iter().zip(vb.extended_basis()) {
                    recombined = recombined.add(&hv.scale(cv));
                }
                if recombined != product {
                    return Err(Error::Degenerate(format!(
                        "derived hyperplane failed its defining identity at \
                         (i = {i}, j = {j}, k = {k})"
                    )));
                }
                c.extend(sol);
            }
            hats.push(HatHyperplane { i, j, c });
        }
    }
    Ok(hats)
}

/// Independence of a set of moving forms over the coefficient field:
/// the rows span full rank iff some maximal minor of the coefficient
/// matrix is a nonzero exponential polynomial.
fn forms_independent(rows: &[&MovingHyperplane], n: usize) -> Result<bool> {
    let k = rows.len();
    for cols in combinations(n + 1, k) {
        let mat: Vec<Vec<ExactExpPoly>> = rows
            .iter()
            .map(|h| cols.iter().map(|&c| h.coeffs()[c].clone()).collect())
            .collect();
        if !determinant(&mat)?.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn validate_hyperplane_dims(hs: &[MovingHyperplane], n: usize) -> Result<()> {
    if hs.is_empty() {
        return Err(Error::InvalidInput("no moving hyperplanes given".into()));
    }
    for h in hs {
        if h.coeffs().len() != n + 1 {
            return Err(Error::InvalidInput(format!(
                "moving hyperplane has {} coefficients; ambient dimension needs {}",
                h.coeffs().len(),
                n + 1
            )));
        }
    }
    Ok(())
}

/// General position over the coefficient field: every subset of
/// `min(#H, n+1)` moving forms is linearly independent over it,
/// decided by exact symbolic determinants.
pub fn general_position_moving(hs: &[MovingHyperplane], n: usize) -> Result<bool> {
    validate_hyperplane_dims(hs, n)?;
    let k = hs.len().min(n + 1);
    for subset in combinations(hs.len(), k) {
        let rows: Vec<&MovingHyperplane> = subset.iter().map(|&j| &hs[j]).collect();
        if !forms_independent(&rows, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the structural guarantee behind the lifted construction: for
/// every subset of moving forms that is independent over the
/// coefficient field, the derived hyperplanes `{Ĥ_{ij}}` (all `i`, `j`
/// in the subset) must be linearly independent as fixed hyperplanes.
pub fn verify_hat_claim(
    vb: &VtBasis,
    hs: &[MovingHyperplane],
    hats: &[HatHyperplane],
) -> Result<()> {
    if hs.is_empty() {
        return Err(Error::InvalidInput("no moving hyperplanes given".into()));
    }
    let n = hs[0].coeffs().len() - 1;
    validate_hyperplane_dims(hs, n)?;
    let k = hs.len().min(n + 1);
    for subset in combinations(hs.len(), k) {
        let rows: Vec<&MovingHyperplane> = subset.iter().map(|&j| &hs[j]).collect();
        if !forms_independent(&rows, n)? {
            continue;
        }
        let family: Vec<Vec<GaussianRational>> = hats
            .iter()
            .filter(|hat| subset.contains(&hat.j))
            .map(|hat| hat.c.clone())
            .collect();
        let expected = vb.u() * subset.len();
        debug_assert!(expected <= vb.w() * (n + 1));
        if family.len() != expected || rank(&family)? != expected {
            return Err(Error::Degenerate(format!(
                "derived hyperplanes for the independent subset {subset:?} have rank {} \
                 instead of {expected}",
                rank(&family)?
            )));
        }
    }
    Ok(())
}

/// Float data of one moving target: coefficient functions and the
/// exact pullback, both converted once.
struct MovingTargetFloat {
    gammas: Vec<FloatExpPoly>,
    pull: FloatExpPoly,
}

/// Weil function of a moving hyperplane at a point on the circle,
/// normalized by both the coordinate max and the coefficient max:
/// `λ = log max_k|f_k| + log max_k|γ_k(z)| − log|Σ γ_k(z)f_k(z)|`.
fn moving_weil_sample(
    comps: &[FloatExpPoly],
    gammas: &[FloatExpPoly],
    pull: &FloatExpPoly,
    z: Complex64,
) -> Sample {
    let maxlog_x = comps.iter().map(|c| c.log_abs(z)).fold(f64::NEG_INFINITY, f64::max);
    if maxlog_x == f64::NEG_INFINITY {
        return Sample::Singular;
    }
    let maxlog_g = gammas.iter().map(|g| g.log_abs(z)).fold(f64::NEG_INFINITY, f64::max);
    if maxlog_g == f64::NEG_INFINITY {
        // Every coefficient vanishes here: the form degenerates on a
        // measure-zero set; skip the node and account for it.
        return Sample::Skip;
    }
    let pl = pull.log_abs(z);
    if pl == f64::NEG_INFINITY {
        return Sample::Singular;
    }
    Sample::Value(maxlog_x + maxlog_g - pl)
}

/// Circle average of the moving Weil function for a single target.
/// `pull` must be the float image of the exact pullback `Σ γ_k·f_k`.
pub fn proximity_moving(
    comps: &[FloatExpPoly],
    gammas: &[FloatExpPoly],
    pull: &FloatExpPoly,
    r: f64,
    cfg: &CircleQuad,
) -> Result<QuadOutcome> {
    if pull.is_zero() {
        return Err(Error::InvalidInput("curve is contained in the moving hyperplane".into()));
    }
    if gammas.iter().all(|g| g.is_zero()) {
        return Err(Error::InvalidInput("all moving coefficients are zero".into()));
    }
    circle_mean(|theta| moving_weil_sample(comps, gammas, pull, on_circle(r, theta)), cfg)
}

/// The coefficient vector `(γ_0(z), …, γ_n(z))` evaluated in a common
/// log scale and sup-normalized; `None` when it is numerically zero.
fn normalized_gamma_row(gammas: &[FloatExpPoly], z: Complex64) -> Option<Vec<Complex64>> {
    let shift = gammas
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.max_exponent(z))
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return None;
    }
    let mut vals: Vec<Complex64> =
        gammas.iter().map(|g| g.eval_shifted(z, shift)).collect();
    let mx = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if mx == 0.0 || !mx.is_finite() {
        return None;
    }
    for v in &mut vals {
        *v /= mx;
    }
    Some(vals)
}

/// Per-θ integrand of the moving SMT left side: greedy maximum of
/// `Σ λ_{H_j(z)}` over subsets whose evaluated coefficient vectors
/// stay numerically independent.
fn moving_greedy_sum(
    comps: &[FloatExpPoly],
    targets: &[MovingTargetFloat],
    z: Complex64,
) -> Sample {
    let mut lam: Vec<(f64, usize)> = Vec::with_capacity(targets.len());
    for (j, tgt) in targets.iter().enumerate() {
        match moving_weil_sample(comps, &tgt.gammas, &tgt.pull, z) {
            Sample::Value(l) => lam.push((l, j)),
            other => return other,
        }
    }
    lam.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut acc = FloatRankAccumulator::new(GREEDY_RANK_TOL);
    let mut sum = 0.0;
    for (l, j) in lam {
        if l <= 0.0 {
            break;
        }
        if let Some(row) = normalized_gamma_row(&targets[j].gammas, z) {
            if acc.try_add(&row) {
                sum += l;
            }
        }
    }
    Sample::Value(sum)
}

/// Exact construction shared by the moving verifiers: coefficient
/// space, lifted curve, nondegeneracy, derived hyperplanes, and the
/// Wronskian of the lifted family.
struct MovingSetup {
    vb: VtBasis,
    lifted: LiftedCurve,
    w_zeros_source: ExactExpPoly,
}

fn moving_setup(
    curve: &HoloCurve<GaussianRational>,
    hs: &[MovingHyperplane],
    t: usize,
) -> Result<MovingSetup> {
    let n = curve.n();
    validate_hyperplane_dims(hs, n)?;
    let scale = GrowthScale::of_components(curve.components())?;
    for (j, h) in hs.iter().enumerate() {
        for (k, g) in h.coeffs().iter().enumerate() {
            if !scale.dominates(g) {
                return Err(Error::InvalidInput(format!(
                    "coefficient {k} of moving hyperplane {j} does not have slow growth \
                     relative to this curve"
                )));
            }
        }
    }
    let gammas: Vec<ExactExpPoly> =
        hs.iter().flat_map(|h| h.coeffs().iter().cloned()).collect();
    let vb = build_vt(&gammas, t)?;
    let lifted = lift_curve(curve, &vb)?;
    let dim = lifted.components().len();
    if exact_rank(lifted.components())? != dim {
        return Err(Error::Degenerate(
            "curve components are linearly dependent over the moving coefficient field \
             (the lifted family is degenerate)"
                .into(),
        ));
    }
    let hats = express_hat_hyperplanes(&vb, hs)?;
    verify_hat_claim(&vb, hs, &hats)?;
    let w = wronskian(lifted.components())?;
    if w.is_zero() {
        return Err(Error::Degenerate(
            "the lifted family has an identically zero Wronskian".into(),
        ));
    }
    Ok(MovingSetup { vb, lifted, w_zeros_source: w })
}

/// Second-main-theorem margin report for moving targets: per radius,
/// `∫ max_J Σ λ_{H_j(re^{iθ})} dθ/2π + (1/u)·N_W(0, r) ≤ (n+1+ε)·T(r)`
/// with `W` the Wronskian of the lifted family `{h_ν f_k}`.
pub fn verify_moving_smt(
    curve: &HoloCurve<GaussianRational>,
    hs: &[MovingHyperplane],
    t: usize,
    eps: f64,
    radii: &[f64],
    cfg: &CircleQuad,
    opts: &LocateOptions,
) -> Result<VerifierReport> {
    validate_radii(radii)?;
    let n = curve.n();
    let setup = moving_setup(curve, hs, t)?;
    let (u, w) = (setup.vb.u(), setup.vb.w());
    let base_f = curve.to_float();
    let r_max = *radii.last().expect("nonempty");
    if !common_zeros(&base_f, r_max, opts)?.is_empty() {
        return Err(Error::InvalidInput(
            "curve components share a zero in the working disk; pass a reduced representation"
                .into(),
        ));
    }
    let targets: Vec<MovingTargetFloat> = hs
        .iter()
        .map(|h| -> Result<MovingTargetFloat> {
            let pull = h.pullback(curve)?;
            if pull.is_zero() {
                return Err(Error::InvalidInput(
                    "curve is contained in one of the moving hyperplanes".into(),
                ));
            }
            Ok(MovingTargetFloat {
                gammas: h.coeffs().iter().map(|g| g.to_float()).collect(),
                pull: pull.to_float(),
            })
        })
        .collect::<Result<_>>()?;
    let w_zeros = locate_zeros_disk(
        &setup.w_zeros_source.to_float(),
        Complex64::new(0.0, 0.0),
        r_max,
        opts,
    )?
    .zeros;
    let rows: Result<Vec<(RadiusRow, f64)>> = radii
        .par_iter()
        .map(|&r| {
            let mean =
                circle_mean(|theta| moving_greedy_sum(&base_f, &targets, on_circle(r, theta)), cfg)?;
            let lhs = mean.value + counting_from_zeros(&w_zeros, r, None) / u as f64;
            let t_f = curve_characteristic(&base_f, &[], r, cfg)?;
            Ok((RadiusRow::new(r, lhs, (n as f64 + 1.0 + eps) * t_f), mean.skipped_fraction))
        })
        .collect();
    let rows = rows?;
    let max_skip = rows.iter().map(|x| x.1).fold(0.0, f64::max);
    let rows: Vec<RadiusRow> = rows.into_iter().map(|x| x.0).collect();
    let violations = rows.iter().filter(|row| row.margin < 0.0).count();
    let fraction = violations as f64 / rows.len() as f64;
    let outliers: Vec<f64> =
        rows.iter().filter(|row| row.margin < 0.0).map(|row| row.r).collect();
    let mut report = VerifierReport::new(
        "moving-smt",
        serde_json::json!({
            "n": n,
            "t": t,
            "eps": eps,
            "u": u,
            "w": w,
            "hyperplanes": hs.len(),
            "lifted_components": setup.lifted.components().len(),
        }),
    );
    report.per_radius = rows;
    report.violation_fraction = Some(fraction);
    report.pass = fraction <= 0.1;
    if !outliers.is_empty() {
        report.notes.push(format!("negative margins at radii {outliers:?}"));
    }
    if max_skip > 0.0 {
        report.notes.push(format!(
            "skipped up to {max_skip:.3e} of circle nodes where every moving coefficient \
             underflowed"
        ));
    }
    Ok(report)
}

/// Moving truncation check at one radius: for moving targets in
/// general position, `Σ N(H_j, r) − (1/u)·N_W(0, r) ≤ Σ N^{(Q)}(H_j, r)
/// + slack·T(r)` with `Q = w(n+1) − 1`.
pub fn verify_moving_truncation(
    curve: &HoloCurve<GaussianRational>,
    hs: &[MovingHyperplane],
    t: usize,
    r: f64,
    cfg: &CircleQuad,
    opts: &LocateOptions,
) -> Result<VerifierReport> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    let n = curve.n();
    if !general_position_moving(hs, n)? {
        return Err(Error::InvalidInput(
            "moving hyperplanes are not in general position over the coefficient field".into(),
        ));
    }
    let setup = moving_setup(curve, hs, t)?;
    let (u, w) = (setup.vb.u(), setup.vb.w());
    let q_trunc = setup.lifted.components().len() - 1;
    let mut sum_n = 0.0;
    let mut sum_trunc = 0.0;
    for h in hs {
        let pull = h.pullback(curve)?;
        if pull.is_zero() {
            return Err(Error::InvalidInput(
                "curve is contained in one of the moving hyperplanes".into(),
            ));
        }
        let zeros =
            locate_zeros_disk(&pull.to_float(), Complex64::new(0.0, 0.0), r, opts)?.zeros;
        sum_n += counting_from_zeros(&zeros, r, None);
        sum_trunc += counting_from_zeros(&zeros, r, Some(q_trunc));
    }
    let w_zeros =
        locate_zeros_disk(&setup.w_zeros_source.to_float(), Complex64::new(0.0, 0.0), r, opts)?
            .zeros;
    let n_w = counting_from_zeros(&w_zeros, r, None);
    let t_f = curve_characteristic(&curve.to_float(), &[], r, cfg)?;
    let mut report = VerifierReport::new(
        "moving-truncation",
        serde_json::json!({
            "n": n,
            "t": t,
            "Q": q_trunc,
            "u": u,
            "w": w,
            "hyperplanes": hs.len(),
            "slack": MOVING_TRUNCATION_SLACK,
        }),
    );
    report.per_radius.push(RadiusRow::new(
        r,
        sum_n - n_w / u as f64,
        sum_trunc + MOVING_TRUNCATION_SLACK * t_f,
    ));
    report.pass = report.per_radius[0].margin >= 0.0;
    Ok(report)
}
