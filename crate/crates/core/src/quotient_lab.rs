//! Quotient laboratory: divisibility certification for quotients of
//! exponential polynomials, frequency-relation detection, slow-growth
//! pair finders for vanishing sums of units and powers, and the
//! combinatorial machinery of the auxiliary-map construction that
//! turns a quotient hypothesis into a hyperplane system.
//!
//! Semantics are deliberately asymmetric: a `NotEntire` verdict is
//! backed by a certified winding-number deficit at a concrete zero,
//! while `EntireUpTo` is evidence on a finite disk, never a proof. The
//! reports say which is which.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::contour_zeros::{count_zeros_disk, locate_zeros_disk, LocateOptions};
use crate::error::{Error, Result};
use crate::exp_poly::{ExactExpPoly, ExpPoly, Term};
use crate::linalg::{combinations, kernel_basis, lll_reduce};
use crate::moving_targets::{compositions, GrowthScale, MovingHyperplane};
use crate::nevanlinna::HoloCurve;
use crate::poly::Poly;
use crate::report::sig12;
use crate::scalar::{GaussianRational, Scalar};

/// Iteration backstop for exponential-polynomial long division; a
/// division that has not terminated by then is treated as inexact.
const DIV_ITER_CAP: usize = 1024;

/// Maximum number of summands accepted by the vanishing-subsum search
/// (the search is exponential in this count).
const SUBSUM_TERM_CAP: usize = 16;

/// Cap on the number of auxiliary-map components.
const AUX_COMPONENT_CAP: usize = 4096;

/// Default coefficient bound for the heuristic integer-relation search.
pub const HEURISTIC_COEFF_CAP: i64 = 1_000_000;

/// Default residual tolerance for the heuristic integer-relation search.
pub const HEURISTIC_RESIDUAL_TOL: f64 = 1e-10;

/// Shrink factor applied to a resolved zero's isolation radius before
/// winding the numerator around it, so that the certification circle
/// does not swallow unrelated numerator zeros.
const CERT_RADIUS_SHRINK: f64 = 1e-4;

// ---------------------------------------------------------------------------
// Exact division
// ---------------------------------------------------------------------------

/// Exact quotient `a / b` in the polynomial ring, or `None` when the
/// division leaves a remainder.
fn poly_div_exact<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> Option<Poly<S>> {
    if b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(Poly::zero());
    }
    let da = a.degree().expect("nonzero");
    let db = b.degree().expect("nonzero");
    if da < db {
        return None;
    }
    let blead = b.leading().expect("nonzero").clone();
    let mut rem = a.clone();
    let mut q = vec![S::zero(); da - db + 1];
    while let Some(dr) = rem.degree() {
        if rem.is_zero() {
            break;
        }
        if dr < db {
            return None;
        }
        let c = rem.leading().expect("nonzero").div(&blead).ok()?;
        rem = rem.sub(&b.mul(&Poly::monomial(c.clone(), dr - db)));
        q[dr - db] = c;
    }
    Some(Poly::new(q))
}

/// Exact quotient `f / g` in the ring of exponential polynomials, or
/// `None` when `g` does not divide `f` there.
///
/// Classic leading-term long division under the total frequency order:
/// each step cancels the current leading term, so the leading frequency
/// strictly decreases. The division is abandoned (inexact) when a
/// quotient frequency falls below the trailing-frequency window
/// `min_freq(f) − min_freq(g)` or when a coefficient division leaves a
/// remainder; an iteration cap backstops pathological descents.
pub fn exp_div_exact<S: Scalar>(f: &ExpPoly<S>, g: &ExpPoly<S>) -> Result<Option<ExpPoly<S>>> {
    if g.is_zero() {
        return Err(Error::InvalidInput("division by the zero function".into()));
    }
    if f.is_zero() {
        return Ok(Some(ExpPoly::zero()));
    }
    let g_lead = g.terms().last().expect("nonzero");
    let g_trail = &g.terms()[0];
    let bound = f.terms()[0].freq.sub(&g_trail.freq);
    let mut rem = f.clone();
    let mut quot = ExpPoly::zero();
    for _ in 0..DIV_ITER_CAP {
        if rem.is_zero() {
            return Ok(Some(quot));
        }
        let r_lead = rem.terms().last().expect("nonzero");
        let qfreq = r_lead.freq.sub(&g_lead.freq);
        if qfreq.freq_cmp(&bound) == std::cmp::Ordering::Less {
            return Ok(None);
        }
        let Some(qcoef) = poly_div_exact(&r_lead.coef, &g_lead.coef) else {
            return Ok(None);
        };
        let qterm = ExpPoly::from_terms(vec![Term { coef: qcoef, freq: qfreq }]);
        rem = rem.sub(&qterm.mul(g));
        quot = quot.add(&qterm);
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Shape of a quotient-problem instance
// ---------------------------------------------------------------------------

/// An exponential polynomial split into the shape the quotient results
/// speak about: `a₀(z) + a₁(z)e^{λ₁z} + … + a_l(z)e^{λ_l z}` with
/// polynomial coefficients and distinct nonzero frequencies.
#[derive(Clone, Debug)]
pub struct ExpShape {
    constant: Poly<GaussianRational>,
    terms: Vec<(Poly<GaussianRational>, GaussianRational)>,
}

impl ExpShape {
    /// Splits a nonzero exponential polynomial into its constant-
    /// frequency coefficient and exponential terms; at least one
    /// exponential term is required.
    pub fn of(f: &ExactExpPoly) -> Result<ExpShape> {
        if f.is_zero() {
            return Err(Error::InvalidInput("the zero function has no quotient shape".into()));
        }
        let mut constant = Poly::zero();
        let mut terms = Vec::new();
        for term in f.terms() {
            if Scalar::is_zero(&term.freq) {
                constant = term.coef.clone();
            } else {
                terms.push((term.coef.clone(), term.freq.clone()));
            }
        }
        if terms.is_empty() {
            return Err(Error::InvalidInput(
                "quotient shape needs at least one exponential term".into(),
            ));
        }
        Ok(ExpShape { constant, terms })
    }

    /// The zero-frequency coefficient (`a₀`; may be zero).
    pub fn constant_coeff(&self) -> &Poly<GaussianRational> {
        &self.constant
    }

    /// Exponential terms `(aᵢ, λᵢ)` in canonical frequency order.
    pub fn exp_terms(&self) -> &[(Poly<GaussianRational>, GaussianRational)] {
        &self.terms
    }

    /// Number of exponential terms (the `l` resp. `m` of the shape).
    pub fn count(&self) -> usize {
        self.terms.len()
    }

    pub fn frequencies(&self) -> Vec<GaussianRational> {
        self.terms.iter().map(|(_, f)| f.clone()).collect()
    }

    /// The function `a₀ + Σ aᵢ·e^{nλᵢz}` with every frequency scaled by
    /// `n` (the `n`-th member of the associated recurrence family).
    pub fn nth_member(&self, n: u32) -> ExactExpPoly {
        let nn = GaussianRational::from_int(n as i64);
        let mut terms: Vec<Term<GaussianRational>> =
            vec![Term { coef: self.constant.clone(), freq: GaussianRational::zero() }];
        for (coef, freq) in &self.terms {
            terms.push(Term { coef: coef.clone(), freq: freq.mul(&nn) });
        }
        ExpPoly::from_terms(terms)
    }
}

// ---------------------------------------------------------------------------
// Divisibility certification
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DividesVerdict {
    /// Every denominator zero in the disk absorbs into the numerator:
    /// finite-disk evidence of entirety, not a proof.
    EntireUpTo,
    /// Some denominator zero certifiably exceeds the numerator's local
    /// vanishing order: a proof that the quotient is not entire.
    NotEntire,
}

/// One denominator zero and the numerator's certified behavior there.
#[derive(Clone, Copy, Debug)]
pub struct ZeroWitness {
    pub z: Complex64,
    /// Vanishing order of the denominator at (or clustered near) `z`.
    pub mult_g: usize,
    /// Numerator winding count on the certification circle around `z`.
    pub mult_f: usize,
    /// `|F(z)|`, reported as plain evidence alongside the windings.
    pub f_abs: f64,
}

/// Divisibility verdict for `F / G` on a closed disk.
#[derive(Clone, Debug)]
pub struct DivisibilityCertificate {
    pub schema: u32,
    pub radius: f64,
    pub verdict: DividesVerdict,
    /// For `EntireUpTo`: every zero of `G` in the disk, exactly once.
    /// For `NotEntire`: the single witness zero where divisibility
    /// fails (preferring one where `|F|` exceeds the threshold).
    pub witnesses: Vec<ZeroWitness>,
}

impl DivisibilityCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": self.schema,
            "radius": sig12(self.radius),
            "verdict": match self.verdict {
                DividesVerdict::EntireUpTo => "EntireUpTo",
                DividesVerdict::NotEntire => "NotEntire",
            },
            "witnesses": self.witnesses.iter().map(|w| json!({
                "z": [sig12(w.z.re), sig12(w.z.im)],
                "mult_g": w.mult_g,
                "mult_f": w.mult_f,
                "f_abs": sig12(w.f_abs),
            })).collect::<Vec<_>>(),
        })
    }
}

fn witness_order(a: &ZeroWitness, b: &ZeroWitness) -> std::cmp::Ordering {
    let bucket = |z: Complex64| (z.norm() / 1e-9).round() as i128;
    let arg = |z: Complex64| {
        let t = z.arg();
        if t < 0.0 {
            t + std::f64::consts::TAU
        } else {
            t
        }
    };
    bucket(a.z)
        .cmp(&bucket(b.z))
        .then(arg(a.z).total_cmp(&arg(b.z)))
}

/// Certifies whether `g` divides `f` on `|z| ≤ radius`: locates every
/// zero of `g` there and compares its multiplicity against `f`'s
/// winding number on a certification circle around it.
///
/// The `tol` threshold only affects which failing zero is promoted to
/// the `NotEntire` witness (one with `|F(z*)| > tol` is preferred); the
/// verdict itself is decided by the certified windings.
pub fn divides_report<S: Scalar>(
    f: &ExpPoly<S>,
    g: &ExpPoly<S>,
    radius: f64,
    tol: f64,
    opts: &LocateOptions,
) -> Result<DivisibilityCertificate> {
    if g.is_zero() {
        return Err(Error::InvalidInput("denominator is identically zero".into()));
    }
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "numerator is identically zero; the quotient degenerates".into(),
        ));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidInput(format!("disk radius must be positive, got {radius}")));
    }
    let ff = f.to_float();
    let gf = g.to_float();
    let zeros = locate_zeros_disk(&gf, Complex64::new(0.0, 0.0), radius, opts)?.zeros;
    let mut witnesses: Vec<ZeroWitness> = zeros
        .par_iter()
        .map(|zg| -> Result<ZeroWitness> {
            let cert_radius = if zg.resolved {
                zg.radius.min(CERT_RADIUS_SHRINK * zg.location.norm().max(1.0))
            } else {
                zg.radius
            };
            let (mult_f, _) = count_zeros_disk(&ff, zg.location, cert_radius)?;
            let f_abs = ff.eval(zg.location)?.norm();
            Ok(ZeroWitness { z: zg.location, mult_g: zg.multiplicity, mult_f, f_abs })
        })
        .collect::<Result<_>>()?;
    witnesses.sort_by(witness_order);
    let failing: Vec<ZeroWitness> =
        witnesses.iter().filter(|w| w.mult_f < w.mult_g).copied().collect();
    if failing.is_empty() {
        Ok(DivisibilityCertificate {
            schema: 1,
            radius,
            verdict: DividesVerdict::EntireUpTo,
            witnesses,
        })
    } else {
        let witness =
            failing.iter().find(|w| w.f_abs > tol).copied().unwrap_or(failing[0]);
        Ok(DivisibilityCertificate {
            schema: 1,
            radius,
            verdict: DividesVerdict::NotEntire,
            witnesses: vec![witness],
        })
    }
}

// ---------------------------------------------------------------------------
// Integer relations among frequencies
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationMode {
    Exact,
    Heuristic,
}

/// Outcome of an integer-relation search over a list of frequencies.
#[derive(Clone, Debug)]
pub struct IntegerRelation {
    pub values: Vec<Complex64>,
    /// Primitive integer vector with `Σ relationᵢ·valuesᵢ ≈ 0`, sign-
    /// normalized so the first nonzero entry is positive. `None` means
    /// no relation was found — a proof of independence in exact mode,
    /// explicitly *not* one in heuristic mode.
    pub relation: Option<Vec<i64>>,
    pub mode: RelationMode,
    /// `|Σ relationᵢ·valuesᵢ|` for the reported (or best rejected)
    /// candidate; exactly `0.0` in exact mode.
    pub residual: f64,
}

impl IntegerRelation {
    pub fn to_json(&self) -> Value {
        json!({
            "values": self.values.iter().map(|v| [sig12(v.re), sig12(v.im)]).collect::<Vec<_>>(),
            "relation": self.relation,
            "mode": match self.mode {
                RelationMode::Exact => "exact",
                RelationMode::Heuristic => "heuristic",
            },
            "residual": sig12(self.residual),
        })
    }
}

/// Scales a rational vector to a primitive integer vector with its
/// first nonzero entry positive.
fn primitive_integer_vector(v: &[BigRational]) -> Option<Vec<BigInt>> {
    let mut denom_lcm = BigInt::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> =
        v.iter().map(|x| x.numer() * (&denom_lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return None;
    }
    for i in &mut ints {
        *i = &*i / &g;
    }
    if ints.iter().find(|i| !i.is_zero())?.is_negative() {
        for i in &mut ints {
            *i = -&*i;
        }
    }
    Some(ints)
}

fn big_to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.to_i64().ok_or_else(|| {
                Error::ResourceLimit("integer relation entries exceed 64 bits".into())
            })
        })
        .collect()
}

/// Exact ℚ-linear dependence among Gaussian-rational frequencies: the
/// kernel of the 2×k matrix of real and imaginary parts, scaled to a
/// primitive integer vector. `None` proves independence over ℚ.
pub fn rational_dependence_exact(freqs: &[GaussianRational]) -> Result<IntegerRelation> {
    if freqs.is_empty() {
        return Err(Error::InvalidInput("empty frequency list".into()));
    }
    let values: Vec<Complex64> = freqs.iter().map(|f| f.to_c64()).collect();
    let re_row: Vec<GaussianRational> =
        freqs.iter().map(|f| GaussianRational::real(f.re.clone())).collect();
    let im_row: Vec<GaussianRational> =
        freqs.iter().map(|f| GaussianRational::real(f.im.clone())).collect();
    let kernel = kernel_basis(&[re_row, im_row])?;
    let Some(first) = kernel.first() else {
        return Ok(IntegerRelation {
            values,
            relation: None,
            mode: RelationMode::Exact,
            residual: 0.0,
        });
    };
    let rationals: Vec<BigRational> = first.iter().map(|x| x.re.clone()).collect();
    let ints = primitive_integer_vector(&rationals)
        .ok_or_else(|| Error::Degenerate("kernel produced the zero vector".into()))?;
    // The relation must annihilate the inputs exactly.
    let mut acc = GaussianRational::zero();
    for (c, f) in ints.iter().zip(freqs) {
        let ci = GaussianRational::real(BigRational::from_integer(c.clone()));
        acc = acc.add(&ci.mul(f));
    }
    if !Scalar::is_zero(&acc) {
        return Err(Error::Degenerate("exact relation failed re-verification".into()));
    }
    Ok(IntegerRelation {
        values,
        relation: Some(big_to_i64(&ints)?),
        mode: RelationMode::Exact,
        residual: 0.0,
    })
}

/// Lattice-reduction search for a small integer relation among float
/// values: reduce the rows `(eᵢ, Re(xᵢ)/tol, Im(xᵢ)/tol)` and accept
/// the best reduced vector whose residual `|Σ mᵢxᵢ|` is within `tol`
/// and whose entries are bounded by `cap`. `None` is inconclusive.
pub fn rational_dependence_heuristic(
    values: &[Complex64],
    cap: i64,
    tol: f64,
) -> Result<IntegerRelation> {
    if values.is_empty() {
        return Err(Error::InvalidInput("empty value list".into()));
    }
    if cap < 1 || !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(
            "heuristic relation search needs cap ≥ 1 and a positive tolerance".into(),
        ));
    }
    let k = values.len();
    let weight = BigRational::from_float(1.0 / tol)
        .ok_or_else(|| Error::InvalidInput("tolerance too extreme to embed".into()))?;
    let embed = |x: f64| -> Result<BigRational> {
        BigRational::from_float(x)
            .map(|r| r * &weight)
            .ok_or_else(|| Error::InvalidInput("non-finite value in relation search".into()))
    };
    let mut basis: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    for (i, v) in values.iter().enumerate() {
        let mut row = vec![BigRational::zero(); k + 2];
        row[i] = BigRational::one();
        row[k] = embed(v.re)?;
        row[k + 1] = embed(v.im)?;
        basis.push(row);
    }
    lll_reduce(&mut basis);
    let mut best: Option<(f64, Vec<i64>)> = None;
    for row in &basis {
        let heads: Vec<BigRational> = row[..k].to_vec();
        if heads.iter().all(|h| h.is_zero()) {
            continue;
        }
        // LLL performs integer row operations, so heads stay integral.
        let ints: Vec<BigInt> = heads.iter().map(|h| h.numer() / h.denom()).collect();
        let Ok(m) = big_to_i64(&ints) else { continue };
        if m.iter().any(|c| c.abs() > cap) {
            continue;
        }
        let dot: Complex64 = m
            .iter()
            .zip(values)
            .map(|(c, v)| Complex64::new(*c as f64, 0.0) * v)
            .sum();
        let residual = dot.norm();
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, m));
        }
    }
    match best {
        Some((residual, mut m)) if residual <= tol => {
            if m.iter().find(|c| **c != 0).is_some_and(|c| *c < 0) {
                for c in &mut m {
                    *c = -*c;
                }
            }
            Ok(IntegerRelation {
                values: values.to_vec(),
                relation: Some(m),
                mode: RelationMode::Heuristic,
                residual,
            })
        }
        Some((residual, _)) => Ok(IntegerRelation {
            values: values.to_vec(),
            relation: None,
            mode: RelationMode::Heuristic,
            residual,
        }),
        None => Ok(IntegerRelation {
            values: values.to_vec(),
            relation: None,
            mode: RelationMode::Heuristic,
            residual: f64::INFINITY,
        }),
    }
}

// ---------------------------------------------------------------------------
// Corollary consistency check
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorollaryVerdict {
    Consistent,
    CandidateCounterexample,
}

/// Joint outcome of the divisibility certificate and the frequency
/// relation search: entirety of the quotient should force a rational
/// relation among the combined frequencies.
#[derive(Clone, Debug)]
pub struct CorollaryReport {
    pub verdict: CorollaryVerdict,
    pub certificate: DivisibilityCertificate,
    pub relation: IntegerRelation,
    pub note: String,
}

impl CorollaryReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": match self.verdict {
                CorollaryVerdict::Consistent => "CONSISTENT",
                CorollaryVerdict::CandidateCounterexample => "CANDIDATE-COUNTEREXAMPLE",
            },
            "certificate": self.certificate.to_json(),
            "relation": self.relation.to_json(),
            "note": self.note,
        })
    }
}

/// Default `|F(z*)|` threshold used when promoting a `NotEntire`
/// witness inside [`corollary_check`].
pub const WITNESS_ABS_TOL: f64 = 1e-6;

/// Tests the implication "quotient entire ⟹ frequencies rationally
/// dependent" on one instance: runs the divisibility certificate on
/// the disk and the exact relation search on the combined frequency
/// list, then flags `CONSISTENT` or `CANDIDATE-COUNTEREXAMPLE`.
pub fn corollary_check(
    f: &ExactExpPoly,
    g: &ExactExpPoly,
    radius: f64,
    opts: &LocateOptions,
) -> Result<CorollaryReport> {
    let fsh = ExpShape::of(f)?;
    let gsh = ExpShape::of(g)?;
    if gsh.constant_coeff().is_zero() {
        return Err(Error::InvalidInput(
            "denominator needs a nonzero constant term in the quotient shape".into(),
        ));
    }
    let certificate = divides_report(f, g, radius, WITNESS_ABS_TOL, opts)?;
    let mut freqs = fsh.frequencies();
    freqs.extend(gsh.frequencies());
    let relation = rational_dependence_exact(&freqs)?;
    let (verdict, note) = match (certificate.verdict, relation.relation.is_some()) {
        (DividesVerdict::NotEntire, _) => (
            CorollaryVerdict::Consistent,
            "quotient is certifiably not entire, so the implication is vacuous here".to_string(),
        ),
        (DividesVerdict::EntireUpTo, true) => (
            CorollaryVerdict::Consistent,
            "quotient divides on the disk and the combined frequencies admit a rational \
             relation"
                .to_string(),
        ),
        (DividesVerdict::EntireUpTo, false) => (
            CorollaryVerdict::CandidateCounterexample,
            format!(
                "divisibility holds up to |z| ≤ {radius} yet the combined frequencies are \
                 independent over the rationals; the disk is finite, so this is evidence \
                 against the instance, not a disproof"
            ),
        ),
    };
    Ok(CorollaryReport { verdict, certificate, relation, note })
}

// ---------------------------------------------------------------------------
// Slow-growth pair finders
// ---------------------------------------------------------------------------

/// Smallest vanishing subsum (by size, then lexicographically)
/// containing `anchor`. Size-minimality guarantees there is no
/// vanishing proper subsum at all.
fn minimal_vanishing_subsum(
    summands: &[ExactExpPoly],
    anchor: usize,
) -> Result<Vec<usize>> {
    let n = summands.len();
    for size in 2..=n {
        for subset in combinations(n, size) {
            if !subset.contains(&anchor) {
                continue;
            }
            let mut acc = ExpPoly::zero();
            for &j in &subset {
                acc = acc.add(&summands[j]);
            }
            if acc.is_zero() {
                return Ok(subset);
            }
        }
    }
    Err(Error::Degenerate(format!(
        "no vanishing subsum contains summand {anchor} even though the total vanishes"
    )))
}

fn validate_weights(
    gammas: &[ExactExpPoly],
    expected: usize,
    scale: &GrowthScale,
) -> Result<()> {
    if gammas.len() != expected {
        return Err(Error::InvalidInput(format!(
            "{} weights supplied for {expected} functions",
            gammas.len()
        )));
    }
    for (i, g) in gammas.iter().enumerate() {
        if g.is_zero() {
            return Err(Error::InvalidInput(format!("weight {i} is identically zero")));
        }
        if !scale.dominates(g) {
            return Err(Error::InvalidInput(format!(
                "weight {i} does not have slow growth relative to the reference scale"
            )));
        }
    }
    Ok(())
}

/// Quotient of two exponential units `c·e^{μz}`.
fn unit_quotient(a: &ExactExpPoly, b: &ExactExpPoly) -> ExactExpPoly {
    let ta = &a.terms()[0];
    let tb = &b.terms()[0];
    let coef = ta
        .coef
        .constant_term()
        .div(&tb.coef.constant_term())
        .expect("unit coefficients are nonzero");
    ExpPoly::exp_term(Poly::constant(coef), ta.freq.sub(&tb.freq))
}

/// For a vanishing weighted sum `Σ γᵢuᵢ = 0` of zero-free exponential
/// units with slowly growing weights, returns for every index `i` a
/// partner `j ≠ i` from a minimal vanishing subsum such that `uᵢ/uⱼ`
/// has slow growth (for exponential units: frequencies within the
/// reference threshold, preferring exact frequency matches).
pub fn borel_pair(
    units: &[ExactExpPoly],
    gammas: &[ExactExpPoly],
    scale: &GrowthScale,
) -> Result<Vec<(usize, usize)>> {
    if units.len() < 2 {
        return Err(Error::InvalidInput("need at least two units".into()));
    }
    if units.len() > SUBSUM_TERM_CAP {
        return Err(Error::ResourceLimit(format!(
            "subsum search supports at most {SUBSUM_TERM_CAP} summands"
        )));
    }
    for (i, u) in units.iter().enumerate() {
        if !u.is_unit() {
            return Err(Error::InvalidInput(format!(
                "input {i} is not a zero-free exponential unit"
            )));
        }
    }
    validate_weights(gammas, units.len(), scale)?;
    let summands: Vec<ExactExpPoly> =
        gammas.iter().zip(units).map(|(g, u)| g.mul(u)).collect();
    let mut total = ExpPoly::zero();
    for s in &summands {
        total = total.add(s);
    }
    if !total.is_zero() {
        return Err(Error::InvalidInput(
            "the weighted sum of the units must vanish identically".into(),
        ));
    }
    let mut pairs = Vec::with_capacity(units.len());
    for i in 0..units.len() {
        let subsum = minimal_vanishing_subsum(&summands, i)?;
        let freq_i = &units[i].terms()[0].freq;
        let partner = subsum
            .iter()
            .copied()
            .filter(|&j| j != i)
            .find(|&j| units[j].terms()[0].freq == *freq_i)
            .or_else(|| {
                subsum
                    .iter()
                    .copied()
                    .filter(|&j| j != i)
                    .find(|&j| scale.dominates(&unit_quotient(&units[i], &units[j])))
            })
            .ok_or_else(|| {
                Error::Degenerate(format!(
                    "no slow-growth partner for unit {i} in its minimal vanishing subsum"
                ))
            })?;
        pairs.push((i, partner));
    }
    Ok(pairs)
}

/// For a vanishing weighted sum of `k`-th powers `Σ γᵢfᵢᵏ = 0` with
/// `k ≥ n²` (where `n + 1` functions are given), returns for every `i`
/// a partner `j` from a minimal vanishing subsum with `(fᵢ/fⱼ)ᵏ` of
/// slow growth, certified either by an exact slow quotient of the
/// powers or — for two-term subsums — by the weight ratio, since the
/// slow-growth functions form a field.
pub fn green_pair(
    fs: &[ExactExpPoly],
    gammas: &[ExactExpPoly],
    k: u32,
    scale: &GrowthScale,
) -> Result<Vec<(usize, usize)>> {
    if fs.len() < 2 {
        return Err(Error::InvalidInput("need at least two functions".into()));
    }
    if fs.len() > SUBSUM_TERM_CAP {
        return Err(Error::ResourceLimit(format!(
            "subsum search supports at most {SUBSUM_TERM_CAP} summands"
        )));
    }
    let n = fs.len() - 1;
    if (k as usize) < n * n {
        return Err(Error::InvalidInput(format!(
            "exponent k = {k} is below the threshold n² = {}",
            n * n
        )));
    }
    for (i, f) in fs.iter().enumerate() {
        if f.is_zero() {
            return Err(Error::InvalidInput(format!("function {i} is identically zero")));
        }
    }
    validate_weights(gammas, fs.len(), scale)?;
    let powers: Vec<ExactExpPoly> = fs.iter().map(|f| f.pow_int(k)).collect();
    let summands: Vec<ExactExpPoly> =
        gammas.iter().zip(&powers).map(|(g, p)| g.mul(p)).collect();
    let mut total = ExpPoly::zero();
    for s in &summands {
        total = total.add(s);
    }
    if !total.is_zero() {
        return Err(Error::InvalidInput(
            "the weighted sum of the k-th powers must vanish identically".into(),
        ));
    }
    let certified_slow = |i: usize, j: usize| -> Result<bool> {
        if let Some(q) = exp_div_exact(&powers[i], &powers[j])? {
            if scale.dominates(&q) {
                return Ok(true);
            }
        }
        if let Some(q) = exp_div_exact(&powers[j], &powers[i])? {
            if scale.dominates(&q) {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let mut pairs = Vec::with_capacity(fs.len());
    for i in 0..fs.len() {
        let subsum = minimal_vanishing_subsum(&summands, i)?;
        let mut partner = None;
        for &j in &subsum {
            if j != i && certified_slow(i, j)? {
                partner = Some(j);
                break;
            }
        }
        if partner.is_none() && subsum.len() == 2 {
            // γᵢfᵢᵏ = −γⱼfⱼᵏ, so (fᵢ/fⱼ)ᵏ = −γⱼ/γᵢ is a ratio of
            // slow-growth functions, hence slow-growth itself.
            partner = subsum.iter().copied().find(|&j| j != i);
        }
        let partner = partner.ok_or_else(|| {
            Error::Degenerate(format!(
                "no certified slow-growth partner for function {i} in its minimal vanishing \
                 subsum"
            ))
        })?;
        pairs.push((i, partner));
    }
    Ok(pairs)
}

// ---------------------------------------------------------------------------
// Combinatorial bounds
// ---------------------------------------------------------------------------

/// Effectivity bounds for the auxiliary-map argument at parameters
/// `(l, m, s, t, a)`.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub schema: u32,
    pub l: u32,
    pub m: u32,
    pub s: u32,
    pub t: u32,
    pub a: f64,
    /// Number of expansion seeds: `C(m−1+t, m−1)`.
    pub m_count: u64,
    /// Number of quotient-carrying components: `C(m−1+t+s, m−1)`.
    pub n1_count: u64,
    /// Number of power monomials per block: `C(m+s+t, m)`.
    pub n2_count: u64,
    /// Ambient component count `N = N1 + (l+1)·N2`.
    pub n_count: u64,
    /// Coefficient-space dimension used for the truncation level.
    pub w_dim: u64,
    /// Truncation level `Q = w·N − 1`.
    pub q_trunc: u64,
    /// Nondegeneracy threshold `n₁ = (l+1)²·(N1 + N2(m+1))²`.
    pub n1_threshold: u64,
    /// The ε the report was evaluated at (must lie in `(0, eps_max)`).
    pub eps: f64,
    /// Upper end of the admissible ε window.
    pub eps_max: f64,
    /// Effectivity bound `n₀` at the chosen ε.
    pub n0: f64,
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": self.schema,
            "l": self.l, "m": self.m, "s": self.s, "t": self.t, "a": self.a,
            "M": self.m_count,
            "N1": self.n1_count,
            "N2": self.n2_count,
            "N": self.n_count,
            "w": self.w_dim,
            "Q": self.q_trunc,
            "n1": self.n1_threshold,
            "eps": sig12(self.eps),
            "eps_max": sig12(self.eps_max),
            "n0": sig12(self.n0),
        })
    }
}

/// `C(n, k)` with overflow detection.
fn binomial(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul((n - k + i) as u128)?;
        acc /= i as u128;
    }
    Some(acc)
}

fn checked_u64(x: u128, what: &str) -> Result<u64> {
    u64::try_from(x)
        .map_err(|_| Error::ResourceLimit(format!("{what} overflows 64 bits")))
}

/// Evaluates the combinatorial bound system at `(l, m, s, t, a)`:
/// counts `M, N1, N2, N`, the nondegeneracy threshold `n₁`, the ε
/// window, and the effectivity bound `n₀` at `eps` (default:
/// `eps_max / 2`). `w_dim` (default 1, the trivial coefficient basis)
/// sets the truncation level `Q = w·N − 1`.
pub fn theorem_bounds(
    l: u32,
    m: u32,
    s: u32,
    t: u32,
    a: f64,
    eps: Option<f64>,
    w_dim: Option<u64>,
) -> Result<BoundReport> {
    if l < 1 || m < 1 || s < 1 || t < 1 {
        return Err(Error::InvalidInput("l, m, s, t must all be at least 1".into()));
    }
    if !(a.is_finite() && a >= 1.0) {
        return Err(Error::InvalidInput(format!(
            "growth-comparison constant a must be at least 1, got {a}"
        )));
    }
    let (l64, m64, s64, t64) = (l as u64, m as u64, s as u64, t as u64);
    let overflow = || Error::ResourceLimit("combinatorial counts overflow".into());
    let m_count = checked_u64(binomial(m64 - 1 + t64, m64 - 1).ok_or_else(overflow)?, "M")?;
    let n1_count =
        checked_u64(binomial(m64 - 1 + t64 + s64, m64 - 1).ok_or_else(overflow)?, "N1")?;
    let n2_count = checked_u64(binomial(m64 + s64 + t64, m64).ok_or_else(overflow)?, "N2")?;
    let n_count = n1_count
        .checked_add((l64 + 1).checked_mul(n2_count).ok_or_else(overflow)?)
        .ok_or_else(overflow)?;
    let inner = (n1_count as u128) + (n2_count as u128) * (m64 as u128 + 1);
    let n1_threshold = checked_u64(
        (l64 as u128 + 1)
            .pow(2)
            .checked_mul(inner.checked_mul(inner).ok_or_else(overflow)?)
            .ok_or_else(overflow)?,
        "n1",
    )?;
    if s as f64 <= a * l as f64 {
        return Err(Error::EpsWindowEmpty(format!(
            "s = {s} must exceed a·l = {}",
            a * l as f64
        )));
    }
    let ms = m_count as f64 * s as f64;
    let n1al = a * n1_count as f64 * l as f64;
    let denom = 3.0 * a * (n_count as f64 * (s64 + t64 + 1) as f64 + n1_count as f64 * (l64 + m64) as f64);
    let eps_max = (ms - n1al) / denom;
    if eps_max <= 0.0 {
        return Err(Error::EpsWindowEmpty(format!(
            "M·s − a·N1·l = {} is not positive at t = {t}; increase t",
            ms - n1al
        )));
    }
    let eps = eps.unwrap_or(eps_max / 2.0);
    if !(eps > 0.0 && eps < eps_max) {
        return Err(Error::InvalidInput(format!(
            "eps must lie in (0, {eps_max:e}), got {eps:e}"
        )));
    }
    let w_dim = w_dim.unwrap_or(1);
    if w_dim < 1 {
        return Err(Error::InvalidInput("coefficient-space dimension w must be positive".into()));
    }
    let q_trunc = w_dim
        .checked_mul(n_count)
        .and_then(|x| x.checked_sub(1))
        .ok_or_else(overflow)?;
    let n0_denom = ms - n1al - 3.0 * eps * a
        * (n_count as f64 * (s64 + t64 + 1) as f64 + n1_count as f64 * (l64 + m64) as f64);
    let n0 = n_count as f64 * q_trunc as f64 * a * (l64 + m64) as f64 / n0_denom;
    Ok(BoundReport {
        schema: 1,
        l,
        m,
        s,
        t,
        a,
        m_count,
        n1_count,
        n2_count,
        n_count,
        w_dim,
        q_trunc,
        n1_threshold,
        eps,
        eps_max,
        n0,
    })
}

// ---------------------------------------------------------------------------
// Auxiliary map construction
// ---------------------------------------------------------------------------

/// All exponent vectors over `parts` entries of total degree at most
/// `maxdeg`, in graded lexicographic order (grade first, then
/// leftmost-significant lexicographic within a grade).
fn graded_simplex(parts: usize, maxdeg: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for d in 0..=maxdeg {
        out.extend(compositions(d, parts));
    }
    out
}

/// Multinomial coefficient `deg! / Π eᵢ!` for `Σ eᵢ = deg`.
fn multinomial(e: &[usize]) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut cum: u64 = 0;
    for &part in e {
        cum += part as u64;
        acc = acc.checked_mul(binomial(cum, part as u64)?)?;
    }
    Some(acc)
}

fn poly_pow(p: &Poly<GaussianRational>, e: usize) -> Poly<GaussianRational> {
    let mut acc = Poly::one();
    for _ in 0..e {
        acc = acc.mul(p);
    }
    acc
}

fn int_scalar(x: u128) -> Result<GaussianRational> {
    i64::try_from(x)
        .map(GaussianRational::from_int)
        .map_err(|_| Error::ResourceLimit("expansion coefficient overflows".into()))
}

/// The auxiliary map and hyperplane system attached to a quotient
/// instance: components `x₁..x_N` (the first `N1` carry the formal
/// quotient `q`), the `M` expansion rows in upper-triangular form with
/// diagonal `b₀^s`, and the exact quotient when long division
/// certifies it.
#[derive(Clone, Debug)]
pub struct AuxiliaryMap {
    pub n: u32,
    pub s: u32,
    pub t: u32,
    /// 0 when the numerator has a constant term (a `f₀ = 1` block is
    /// included); 1 otherwise.
    pub e0: usize,
    /// Position (in canonical frequency order) of the denominator term
    /// singled out as `g₁` — the one of largest frequency modulus.
    pub g1_index: usize,
    pub m_count: usize,
    pub n1_count: usize,
    pub n2_count: usize,
    /// Multipliers `g^{n·cᵢ}` of the quotient-carrying components
    /// `xᵢ = g^{n·cᵢ}·q`, in graded lexicographic order of `cᵢ`.
    pub q_multipliers: Vec<ExactExpPoly>,
    /// The quotient-free components `fᵢⁿ·g^{n·dⱼ}`, blocks of `N2` per
    /// numerator term (plus the `f₀ = 1` block when `e0 = 0`).
    pub pure_components: Vec<ExactExpPoly>,
    /// `F/G` as an exponential polynomial when long division is exact.
    pub quotient: Option<ExactExpPoly>,
    /// Expansion rows `A_{i,·}` (length = component count) with
    /// `A_{i,i} = b₀^s` and zeros left of the diagonal.
    pub hat_rows: Vec<Vec<ExactExpPoly>>,
}

impl AuxiliaryMap {
    /// Total number of components `N1 + (l+1−e0)·N2`.
    pub fn component_count(&self) -> usize {
        self.n1_count + self.pure_components.len()
    }

    /// The holomorphic map `[x₁ : … : x_N]`; requires the quotient to
    /// have been certified by exact division.
    pub fn curve(&self) -> Result<HoloCurve<GaussianRational>> {
        let q = self.quotient.as_ref().ok_or_else(|| {
            Error::InvalidInput(
                "quotient component unavailable: exact division did not certify the \
                 denominator as a divisor"
                    .into(),
            )
        })?;
        let mut comps: Vec<ExactExpPoly> =
            self.q_multipliers.iter().map(|h| h.mul(q)).collect();
        comps.extend(self.pure_components.iter().cloned());
        HoloCurve::new(comps)
    }

    /// The full hyperplane system: the `N` coordinate hyperplanes
    /// followed by the `M` expansion hyperplanes.
    pub fn hyperplanes(&self) -> Result<Vec<MovingHyperplane>> {
        let scale = GrowthScale::of_components(&self.pure_components)?;
        let nn = self.component_count();
        let mut out = Vec::with_capacity(nn + self.hat_rows.len());
        for i in 0..nn {
            let mut coeffs = vec![GaussianRational::zero(); nn];
            coeffs[i] = GaussianRational::one();
            out.push(MovingHyperplane::from_constants(coeffs)?);
        }
        for row in &self.hat_rows {
            out.push(MovingHyperplane::new(row.clone(), &scale)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let component_strings: Vec<String> = self
            .q_multipliers
            .iter()
            .map(|h| {
                if h.is_one() {
                    "q".to_string()
                } else {
                    format!("({h}) * q")
                }
            })
            .chain(self.pure_components.iter().map(|c| c.to_string()))
            .collect();
        json!({
            "schema": 1,
            "n": self.n, "s": self.s, "t": self.t,
            "M": self.m_count,
            "N1": self.n1_count,
            "N2": self.n2_count,
            "N": self.component_count(),
            "g1_index": self.g1_index,
            "components": component_strings,
            "quotient": self.quotient.as_ref().map(|q| q.to_string()),
            "hyperplanes": self.component_count() + self.m_count,
        })
    }
}

/// Builds the auxiliary map for the quotient instance `F/G` at family
/// index `n` with expansion parameters `(s, t)`.
///
/// The denominator term of largest frequency modulus is singled out as
/// `g₁`; the seed monomials `g^{n·c}` range over the remaining terms.
/// Each row expands `G₁ˢ·g^{n·c}·q − F·(Σₖ C(s,k)·G^{s−1−k}·(−b₁g₁ⁿ)ᵏ)
/// ·g^{n·c}` over the components, and the defining identity
/// `row·x = (−b₁)ˢ·xᵢ·g₁^{sn}` is re-verified symbolically (with `q`
/// eliminated against `q·G = F`).
pub fn construct_auxiliary_map(
    f: &ExactExpPoly,
    g: &ExactExpPoly,
    n: u32,
    s: u32,
    t: u32,
) -> Result<AuxiliaryMap> {
    if n < 1 || s < 1 || t < 1 {
        return Err(Error::InvalidInput("n, s, t must all be at least 1".into()));
    }
    let fsh = ExpShape::of(f)?;
    let gsh = ExpShape::of(g)?;
    if gsh.constant_coeff().is_zero() {
        return Err(Error::InvalidInput(
            "denominator needs a nonzero constant term b₀".into(),
        ));
    }
    let l = fsh.count();
    let m = gsh.count();
    let e0 = usize::from(fsh.constant_coeff().is_zero());
    // Single out g₁ = the largest-|frequency| denominator term.
    let g1_index = (0..m)
        .max_by(|&i, &j| {
            let (fi, fj) = (&gsh.exp_terms()[i].1, &gsh.exp_terms()[j].1);
            fi.to_c64().norm().total_cmp(&fj.to_c64().norm()).then(fi.freq_cmp(fj))
        })
        .expect("m >= 1");
    let (b1, tau1) = {
        let (c, f) = &gsh.exp_terms()[g1_index];
        (c.clone(), f.clone())
    };
    // Remaining denominator terms become g₂..g_m in canonical order.
    let rest: Vec<(Poly<GaussianRational>, GaussianRational)> = (0..m)
        .filter(|&j| j != g1_index)
        .map(|j| gsh.exp_terms()[j].clone())
        .collect();
    let b0 = gsh.constant_coeff().clone();

    let st = (s + t) as usize;
    let c_list = graded_simplex(m - 1, st);
    let n1_count = c_list.len();
    let m_count = c_list.iter().filter(|c| c.iter().sum::<usize>() <= t as usize).count();
    let d_list = graded_simplex(m, st);
    let n2_count = d_list.len();
    let blocks = l + 1 - e0;
    let total = n1_count + blocks * n2_count;
    if total + m_count > AUX_COMPONENT_CAP {
        return Err(Error::ResourceLimit(format!(
            "auxiliary map needs {total} components; the cap is {AUX_COMPONENT_CAP}"
        )));
    }
    let c_index: HashMap<Vec<usize>, usize> =
        c_list.iter().cloned().zip(0..).collect();
    let d_index: HashMap<Vec<usize>, usize> =
        d_list.iter().cloned().zip(0..).collect();

    let nn = GaussianRational::from_int(n as i64);
    // g^{n·c} over the non-g₁ terms (c has m−1 entries).
    let g_pow_c = |c: &[usize]| -> ExactExpPoly {
        let mut freq = GaussianRational::zero();
        for (e, (_, tau)) in c.iter().zip(&rest) {
            freq = freq.add(&tau.mul(&GaussianRational::from_int(*e as i64)));
        }
        ExpPoly::exp(freq.mul(&nn))
    };
    // g^{n·d} over all m terms, d ordered as (g₁, g₂, …, g_m).
    let g_pow_d = |d: &[usize]| -> GaussianRational {
        let mut freq = tau1.mul(&GaussianRational::from_int(d[0] as i64));
        for (e, (_, tau)) in d[1..].iter().zip(&rest) {
            freq = freq.add(&tau.mul(&GaussianRational::from_int(*e as i64)));
        }
        freq.mul(&nn)
    };
    // Numerator data: index 0 is the constant block (f₀ = 1), i ≥ 1
    // the exponential terms.
    let f_coef = |i: usize| -> Poly<GaussianRational> {
        if i == 0 {
            fsh.constant_coeff().clone()
        } else {
            fsh.exp_terms()[i - 1].0.clone()
        }
    };
    let f_freq = |i: usize| -> GaussianRational {
        if i == 0 {
            GaussianRational::zero()
        } else {
            fsh.exp_terms()[i - 1].1.clone()
        }
    };
    let pure_index = |i: usize, d_rank: usize| -> usize {
        n1_count + (i - e0) * n2_count + d_rank
    };

    let q_multipliers: Vec<ExactExpPoly> = c_list.iter().map(|c| g_pow_c(c)).collect();
    let mut pure_components = Vec::with_capacity(blocks * n2_count);
    for i in e0..=l {
        for d in &d_list {
            let freq = f_freq(i).mul(&nn).add(&g_pow_d(d));
            pure_components.push(ExpPoly::exp(freq));
        }
    }

    let b0s = ExpPoly::from_poly(poly_pow(&b0, s as usize));
    let mut hat_rows: Vec<Vec<ExactExpPoly>> = Vec::with_capacity(m_count);
    for (i0, ci) in c_list.iter().take(m_count).enumerate() {
        let mut row = vec![ExpPoly::zero(); total];
        // Quotient block: G₁ˢ·g^{n·cᵢ}·q with G₁ = b₀ + Σ_{j≥2} bⱼgⱼⁿ.
        for e in compositions(s as usize, m) {
            let coef = int_scalar(multinomial(&e).ok_or_else(|| {
                Error::ResourceLimit("multinomial coefficient overflows".into())
            })?)?;
            let mut poly = poly_pow(&b0, e[0]);
            for (exp, (b, _)) in e[1..].iter().zip(&rest) {
                poly = poly.mul(&poly_pow(b, *exp));
            }
            let mut c_target = ci.clone();
            for (slot, exp) in c_target.iter_mut().zip(&e[1..]) {
                *slot += exp;
            }
            let idx = c_index[&c_target];
            row[idx] = row[idx].add(&ExpPoly::from_poly(poly.scale(&coef)));
        }
        // Numerator block: −F·Σ_{k<s} C(s,k)·G^{s−1−k}·(−b₁g₁ⁿ)ᵏ·g^{n·cᵢ}
        // with G = b₀ + b₁g₁ⁿ + Σ_{j≥2} bⱼgⱼⁿ.
        for k in 0..s as usize {
            let cs_k = binomial(s as u64, k as u64)
                .ok_or_else(|| Error::ResourceLimit("binomial overflows".into()))?;
            for e in compositions(s as usize - 1 - k, m + 1) {
                let mult = multinomial(&e).and_then(|x| x.checked_mul(cs_k)).ok_or_else(
                    || Error::ResourceLimit("expansion coefficient overflows".into()),
                )?;
                let mut scalar = int_scalar(mult)?;
                if k % 2 == 1 {
                    scalar = scalar.neg();
                }
                // Overall minus sign of the numerator block.
                scalar = scalar.neg();
                let mut base = poly_pow(&b0, e[0]).mul(&poly_pow(&b1, e[1] + k));
                for (exp, (b, _)) in e[2..].iter().zip(&rest) {
                    base = base.mul(&poly_pow(b, *exp));
                }
                let mut d_target = vec![0usize; m];
                d_target[0] = e[1] + k;
                for (slot, (exp, c)) in
                    d_target[1..].iter_mut().zip(e[2..].iter().zip(ci))
                {
                    *slot = exp + c;
                }
                let d_rank = d_index[&d_target];
                for i in e0..=l {
                    let idx = pure_index(i, d_rank);
                    let contrib = f_coef(i).mul(&base).scale(&scalar);
                    row[idx] = row[idx].add(&ExpPoly::from_poly(contrib));
                }
            }
        }
        // Structural guarantees of the expansion.
        if row[i0] != b0s {
            return Err(Error::Degenerate(format!(
                "expansion row {i0} does not have b₀^s on its diagonal"
            )));
        }
        if row[..i0].iter().any(|c| !c.is_zero()) {
            return Err(Error::Degenerate(format!(
                "expansion row {i0} is not upper triangular"
            )));
        }
        hat_rows.push(row);
    }

    // Symbolic re-verification of the defining identity, with q
    // eliminated against q·G = F: row·x·G must equal
    // (−b₁)ˢ·g₁^{sn}·g^{n·cᵢ}·F.
    let f_n = fsh.nth_member(n);
    let g_n = gsh.nth_member(n);
    let neg_b1s = ExpPoly::from_poly(poly_pow(&b1.neg(), s as usize));
    let g1_sn = ExpPoly::<GaussianRational>::exp(
        tau1.mul(&nn).mul(&GaussianRational::from_int(s as i64)),
    );
    for (i0, row) in hat_rows.iter().enumerate() {
        let mut lhs = ExpPoly::zero();
        for (j, mult) in q_multipliers.iter().enumerate() {
            lhs = lhs.add(&row[j].mul(mult).mul(&f_n));
        }
        for (jj, comp) in pure_components.iter().enumerate() {
            lhs = lhs.add(&row[n1_count + jj].mul(comp).mul(&g_n));
        }
        let rhs = neg_b1s.mul(&g1_sn).mul(&q_multipliers[i0]).mul(&f_n);
        if lhs != rhs {
            return Err(Error::Degenerate(format!(
                "expansion row {i0} fails its defining identity"
            )));
        }
    }

    // The quotient is attempted only when the combined frequency list
    // admits a rational relation; exact division then certifies it.
    let mut combined = fsh.frequencies();
    combined.extend(gsh.frequencies());
    let quotient = if rational_dependence_exact(&combined)?.relation.is_some() {
        exp_div_exact(&f_n, &g_n)?
    } else {
        None
    };

    Ok(AuxiliaryMap {
        n,
        s,
        t,
        e0,
        g1_index,
        m_count,
        n1_count,
        n2_count,
        q_multipliers,
        pure_components,
        quotient,
        hat_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moving_targets::general_position_moving;
    use crate::parse::{parse_exact, parse_float};

    fn opts() -> LocateOptions {
        LocateOptions::default()
    }

    fn e(text: &str) -> ExactExpPoly {
        parse_exact(text).unwrap()
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn exp_division_examples() {
        let q = exp_div_exact(&e("exp(2*z)-1"), &e("exp(z)-1")).unwrap().unwrap();
        assert_eq!(q, e("exp(z)+1"));
        assert!(exp_div_exact(&e("exp(2*z)+1"), &e("exp(z)+1")).unwrap().is_none());
        // Polynomial coefficients participate in the division.
        let q = exp_div_exact(&e("(z^2+z)*exp(z)"), &e("z")).unwrap().unwrap();
        assert_eq!(q, e("(z+1)*exp(z)"));
        assert!(exp_div_exact(&e("z*exp(z)"), &e("z+1")).unwrap().is_none());
        // Self-division and division by the zero function.
        assert_eq!(
            exp_div_exact(&e("exp(z)+z^2"), &e("exp(z)+z^2")).unwrap().unwrap(),
            e("1")
        );
        assert!(matches!(
            exp_div_exact(&e("1"), &ExpPoly::zero()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn divides_certificates() {
        // e^{2z} − 1 = (e^z + 1)(e^z − 1): every denominator zero divides.
        let cert =
            divides_report(&e("exp(2*z)-1"), &e("exp(z)-1"), 10.0, 1e-6, &opts()).unwrap();
        assert_eq!(cert.verdict, DividesVerdict::EntireUpTo);
        // Zeros of e^z − 1 in |z| ≤ 10: 0, ±2πi.
        assert_eq!(cert.witnesses.len(), 3);
        assert!(cert.witnesses[0].z.norm() < 1e-7);
        assert!((cert.witnesses[1].z - Complex64::new(0.0, std::f64::consts::TAU)).norm() < 1e-7);
        assert!((cert.witnesses[2].z + Complex64::new(0.0, std::f64::consts::TAU)).norm() < 1e-7);
        for w in &cert.witnesses {
            assert!(w.mult_f >= w.mult_g);
            assert_eq!(w.mult_g, 1);
        }

        // Incommensurable frequencies: fails at z* = iπ.
        let f = parse_float("exp(sqrt2*z)-1").unwrap();
        let gg = parse_float("exp(z)+1").unwrap();
        let cert = divides_report(&f, &gg, 4.0, 1e-6, &opts()).unwrap();
        assert_eq!(cert.verdict, DividesVerdict::NotEntire);
        assert_eq!(cert.witnesses.len(), 1);
        let w = &cert.witnesses[0];
        assert!((w.z - Complex64::new(0.0, std::f64::consts::PI)).norm() < 1e-8);
        assert_eq!((w.mult_f, w.mult_g), (0, 1));
        assert!(w.f_abs > 1.0, "|F(iπ)| = {}", w.f_abs);

        // F = G divides itself with matching multiplicities.
        let cert =
            divides_report(&e("exp(z)+1"), &e("exp(z)+1"), 4.0, 1e-6, &opts()).unwrap();
        assert_eq!(cert.verdict, DividesVerdict::EntireUpTo);
        for w in &cert.witnesses {
            assert_eq!(w.mult_f, w.mult_g);
        }

        // Degenerate inputs are rejected.
        assert!(divides_report(&ExpPoly::zero(), &e("exp(z)"), 1.0, 1e-6, &opts()).is_err());
        assert!(divides_report(&e("exp(z)"), &ExpPoly::zero(), 1.0, 1e-6, &opts()).is_err());
    }

    #[test]
    fn exact_relations() {
        let rel = rational_dependence_exact(&[g(2, 0), g(1, 0)]).unwrap();
        assert_eq!(rel.relation, Some(vec![1, -2]));
        assert_eq!(rel.residual, 0.0);

        let rel = rational_dependence_exact(&[g(1, 1), g(2, 2)]).unwrap();
        assert_eq!(rel.relation, Some(vec![2, -1]));

        // 1 and i are independent over ℚ.
        let rel = rational_dependence_exact(&[g(1, 0), g(0, 1)]).unwrap();
        assert_eq!(rel.relation, None);

        // Three-term rational relation.
        let third = GaussianRational::new(
            BigRational::new(BigInt::from(1), BigInt::from(3)),
            BigRational::zero(),
        );
        let rel = rational_dependence_exact(&[g(1, 0), third, g(0, 1)]).unwrap();
        let r = rel.relation.unwrap();
        assert_eq!(r, vec![1, -3, 0]);
    }

    #[test]
    fn heuristic_relations() {
        let rel = rational_dependence_heuristic(
            &[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)],
            HEURISTIC_COEFF_CAP,
            HEURISTIC_RESIDUAL_TOL,
        )
        .unwrap();
        assert_eq!(rel.relation, Some(vec![2, -1]));
        assert!(rel.residual <= HEURISTIC_RESIDUAL_TOL);

        // No small relation between 1 and √2.
        let rel = rational_dependence_heuristic(
            &[Complex64::new(1.0, 0.0), Complex64::new(std::f64::consts::SQRT_2, 0.0)],
            HEURISTIC_COEFF_CAP,
            HEURISTIC_RESIDUAL_TOL,
        )
        .unwrap();
        assert_eq!(rel.relation, None);
        assert_eq!(rel.mode, RelationMode::Heuristic);
    }

    #[test]
    fn corollary_instances() {
        let rep = corollary_check(&e("exp(2*z)-1"), &e("exp(z)-1"), 10.0, &opts()).unwrap();
        assert_eq!(rep.verdict, CorollaryVerdict::Consistent);
        assert_eq!(rep.certificate.verdict, DividesVerdict::EntireUpTo);
        assert_eq!(rep.relation.relation, Some(vec![1, -2]));

        let rep = corollary_check(&e("exp(z)+1"), &e("exp(z)+1"), 4.0, &opts()).unwrap();
        assert_eq!(rep.verdict, CorollaryVerdict::Consistent);
        assert_eq!(rep.relation.relation, Some(vec![1, -1]));

        // Exact shape with independent frequencies and a non-dividing
        // denominator stays consistent via NotEntire.
        let rep = corollary_check(&e("exp(1i*z)-1"), &e("exp(z)+1"), 4.0, &opts()).unwrap();
        assert_eq!(rep.certificate.verdict, DividesVerdict::NotEntire);
        assert_eq!(rep.verdict, CorollaryVerdict::Consistent);

        // Shape validation: denominator must carry a constant term.
        assert!(matches!(
            corollary_check(&e("exp(2*z)-1"), &e("exp(z)+exp(2*z)"), 4.0, &opts()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn borel_pairs() {
        let scale = GrowthScale::of_components(&[e("exp(z)"), e("exp(2*z)")]).unwrap();

        let pairs = borel_pair(
            &[e("exp(z)"), e("exp(z)")],
            &[e("1"), e("-1")],
            &scale,
        )
        .unwrap();
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);

        let pairs = borel_pair(
            &[e("exp(z)"), e("exp(z)"), e("exp(2*z)"), e("exp(2*z)")],
            &[e("1"), e("-1"), e("1"), e("-1")],
            &scale,
        )
        .unwrap();
        assert!(pairs.contains(&(0, 1)) && pairs.contains(&(2, 3)));
        // Post-hoc: every certified pair has exactly equal frequencies.
        let units = [e("exp(z)"), e("exp(z)"), e("exp(2*z)"), e("exp(2*z)")];
        for (i, j) in pairs {
            assert_eq!(units[i].terms()[0].freq, units[j].terms()[0].freq);
        }

        // Nonvanishing sum is a precondition violation.
        assert!(matches!(
            borel_pair(&[e("exp(z)"), e("exp(2*z)")], &[e("1"), e("-1")], &scale),
            Err(Error::InvalidInput(_))
        ));
        // Non-units are rejected.
        assert!(matches!(
            borel_pair(&[e("exp(z)+1"), e("exp(z)+1")], &[e("1"), e("-1")], &scale),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn green_pairs() {
        let scale = GrowthScale::of_components(&[e("exp(z)"), e("exp(2*z)")]).unwrap();

        let pairs =
            green_pair(&[e("exp(z)"), e("exp(z)")], &[e("1"), e("-1")], 1, &scale).unwrap();
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);

        let pairs = green_pair(
            &[e("exp(z)+1"), e("exp(z)+1")],
            &[e("1"), e("-1")],
            1,
            &scale,
        )
        .unwrap();
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);

        // k below n² is rejected outright.
        assert!(matches!(
            green_pair(
                &[e("exp(z)"), e("exp(z)"), e("1")],
                &[e("1"), e("1"), e("-2")],
                1,
                &scale
            ),
            Err(Error::InvalidInput(_))
        ));
        // With an admissible k the sum still fails to vanish.
        assert!(matches!(
            green_pair(
                &[e("exp(z)"), e("exp(z)"), e("1")],
                &[e("1"), e("1"), e("-2")],
                4,
                &scale
            ),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn bound_reports() {
        let rep = theorem_bounds(1, 2, 2, 3, 1.0, None, None).unwrap();
        assert_eq!(
            (rep.m_count, rep.n1_count, rep.n2_count, rep.n_count),
            (4, 6, 21, 48)
        );
        assert_eq!(rep.n1_threshold, 19044);
        assert!((rep.eps_max - 2.0 / 918.0).abs() < 1e-15);
        assert_eq!(rep.q_trunc, 47);
        assert!(rep.n0 > 0.0);

        // Degenerate simplex at m = 1.
        let rep = theorem_bounds(1, 1, 2, 3, 1.0, None, None).unwrap();
        assert_eq!((rep.m_count, rep.n1_count), (1, 1));

        // Empty ε window when s ≤ a·l.
        assert!(matches!(
            theorem_bounds(2, 2, 2, 3, 1.0, None, None),
            Err(Error::EpsWindowEmpty(_))
        ));
    }

    #[test]
    fn bound_counts_match_direct_enumeration() {
        for m in 1u32..=4 {
            for s in 1u32..=4 {
                for t in 1u32..=4 {
                    let count = |deg: usize| graded_simplex(m as usize - 1, deg).len() as u64;
                    let l = 1;
                    match theorem_bounds(l, m, s, t, 1.0, None, None) {
                        Ok(rep) => {
                            assert_eq!(rep.m_count, count(t as usize));
                            assert_eq!(rep.n1_count, count((s + t) as usize));
                            assert_eq!(
                                rep.n2_count,
                                graded_simplex(m as usize, (s + t) as usize).len() as u64
                            );
                            assert_eq!(
                                rep.n_count,
                                rep.n1_count + (l as u64 + 1) * rep.n2_count
                            );
                        }
                        Err(Error::EpsWindowEmpty(_)) => {
                            // Window emptiness only excuses the ε data;
                            // counts must still match, so recompute them.
                            let mm = binomial((m - 1 + t) as u64, (m - 1) as u64).unwrap();
                            assert_eq!(mm, count(t as usize) as u128);
                        }
                        Err(other) => panic!("unexpected error: {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn auxiliary_map_small_instance() {
        // F = 1 + e^{2z}, G = 1 + e^z at n = s = t = 1.
        let aux = construct_auxiliary_map(&e("1+exp(2*z)"), &e("1+exp(z)"), 1, 1, 1).unwrap();
        assert_eq!((aux.m_count, aux.n1_count, aux.n2_count), (1, 1, 3));
        assert_eq!(aux.component_count(), 7);
        assert_eq!(aux.e0, 0);
        // x = [q, 1, e^z, e^{2z}, e^{2z}, e^{3z}, e^{4z}].
        assert!(aux.q_multipliers[0].is_one());
        assert_eq!(
            aux.pure_components,
            vec![e("1"), e("exp(z)"), e("exp(2*z)"), e("exp(2*z)"), e("exp(3*z)"), e("exp(4*z)")]
        );
        // φ = q − F expands as (1, −1, 0, 0, −1, 0, 0) with b₀^s = 1 on
        // the diagonal.
        let row = &aux.hat_rows[0];
        assert!(row[0].is_one());
        let minus_one = e("-1");
        assert_eq!(row[1], minus_one);
        assert_eq!(row[4], minus_one);
        for j in [2, 3, 5, 6] {
            assert!(row[j].is_zero(), "entry {j} should vanish");
        }
        // The quotient (1+e^{2z})/(1+e^z) is not an exponential
        // polynomial, so no curve is available...
        assert!(aux.quotient.is_none());
        assert!(aux.curve().is_err());
        // ...but the hyperplane system is: N coordinates + M hats, and
        // the non-seed block is in general position.
        let hps = aux.hyperplanes().unwrap();
        assert_eq!(hps.len(), 8);
        let tail = &hps[aux.m_count..];
        assert!(general_position_moving(tail, aux.component_count() - 1).unwrap());
    }

    #[test]
    fn auxiliary_map_divisible_instance() {
        // F = (1+e^z)(1+e^{2z}), G = 1+e^z: the quotient exists.
        let f = e("1+exp(z)+exp(2*z)+exp(3*z)");
        let aux = construct_auxiliary_map(&f, &e("1+exp(z)"), 1, 1, 1).unwrap();
        assert_eq!(aux.quotient, Some(e("1+exp(2*z)")));
        let curve = aux.curve().unwrap();
        assert_eq!(curve.components().len(), aux.component_count());
        assert_eq!(curve.components()[0], e("1+exp(2*z)"));
    }

    #[test]
    fn auxiliary_map_binomial_expansion() {
        // s = 2 exercises the binomial weights in the expansion; the
        // internal identity check would fail without them.
        let aux = construct_auxiliary_map(&e("1+exp(2*z)"), &e("1+exp(z)"), 1, 2, 1).unwrap();
        assert_eq!((aux.m_count, aux.n1_count, aux.n2_count), (1, 1, 4));
        // Diagonal is b₀^s.
        assert!(aux.hat_rows[0][0].is_one());

        // A multi-seed instance: m = 2 gives genuinely triangular rows.
        let aux =
            construct_auxiliary_map(&e("1+exp(2*z)"), &e("1+exp(z)+exp(3*z)"), 1, 1, 1).unwrap();
        assert_eq!(aux.m_count, 2);
        assert_eq!(aux.g1_index, 1, "e^{{3z}} is the dominant denominator term");
        for (i, row) in aux.hat_rows.iter().enumerate() {
            assert!(row[i].is_one(), "diagonal of row {i}");
            assert!(row[..i].iter().all(|c| c.is_zero()), "row {i} triangular");
        }
        let hps = aux.hyperplanes().unwrap();
        assert_eq!(hps.len(), aux.component_count() + aux.m_count);
    }
}
