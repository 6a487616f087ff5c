//! Exponential polynomials: finite sums `sum_k p_k(z) * exp(lambda_k * z)`
//! with polynomial coefficients `p_k` and pairwise distinct frequencies
//! `lambda_k`.
//!
//! The representation is canonical: terms are sorted by the frequency order
//! of the scalar domain, frequencies are merged (exact equality in the exact
//! domain, tolerance-bucketed in the float domain), and terms with an exactly
//! zero coefficient are dropped. The zero function is the empty term list.
//! All operations are pure: nothing mutates in place.

use std::collections::HashMap;
use std::fmt;

use num::rational::BigRational;
use num::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{GaussianRational, Scalar};

/// One canonical term `coef(z) * exp(freq * z)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Term<S: Scalar> {
    pub coef: Poly<S>,
    pub freq: S,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ExpPoly<S: Scalar> {
    terms: Vec<Term<S>>,
}

/// Exact-domain exponential polynomial (structural decisions happen here).
pub type ExactExpPoly = ExpPoly<GaussianRational>;
/// Float-domain exponential polynomial (quadrature and contour kernels).
pub type FloatExpPoly = ExpPoly<Complex64>;

/// Exponent (in units of `Re(freq * z)`) beyond which float evaluation is
/// reported as overflow instead of producing infinities.
const OVERFLOW_EXPONENT: f64 = 700.0;

/// Cap on the repeated differentiation used to find the vanishing order at
/// the origin; generously above anything a desk-scale input can produce.
const ORIGIN_ORDER_CAP: usize = 512;

/// Largest dense matrix dimension accepted by the determinant expansion.
const DET_DENSE_CAP: usize = 20;

impl<S: Scalar> ExpPoly<S> {
    /// Builds a canonical exponential polynomial from arbitrary terms.
    pub fn from_terms(terms: Vec<Term<S>>) -> Self {
        let mut terms: Vec<Term<S>> = terms.into_iter().filter(|t| !t.coef.is_zero()).collect();
        terms.sort_by(|a, b| a.freq.freq_cmp(&b.freq));
        let mut merged: Vec<Term<S>> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.freq.freq_merge(&t.freq) => {
                    last.coef = last.coef.add(&t.coef);
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coef.is_zero());
        ExpPoly { terms: merged }
    }

    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        ExpPoly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        ExpPoly::from_poly(Poly::constant(c))
    }

    /// The identity function `z` as a zero-frequency term.
    pub fn z() -> Self {
        ExpPoly::from_poly(Poly::z())
    }

    /// Embeds a polynomial as the zero-frequency term.
    pub fn from_poly(p: Poly<S>) -> Self {
        ExpPoly::from_terms(vec![Term { coef: p, freq: S::zero() }])
    }

    /// `exp(freq * z)`.
    pub fn exp(freq: S) -> Self {
        ExpPoly::exp_term(Poly::one(), freq)
    }

    /// `coef(z) * exp(freq * z)`.
    pub fn exp_term(coef: Poly<S>, freq: S) -> Self {
        ExpPoly::from_terms(vec![Term { coef, freq }])
    }

    pub fn terms(&self) -> &[Term<S>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].freq.is_zero() && self.terms[0].coef.is_one()
    }

    /// True for `c * exp(lambda z)` with constant `c != 0`: the nowhere-zero
    /// exponential polynomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].coef.is_constant() && !self.terms[0].coef.is_zero()
    }

    /// True when the function is a plain polynomial (single zero-frequency
    /// term, or zero).
    pub fn is_polynomial(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms[0].freq.is_zero(),
            _ => false,
        }
    }

    /// The distinct frequencies in canonical order.
    pub fn freq_support(&self) -> Vec<S> {
        self.terms.iter().map(|t| t.freq.clone()).collect()
    }

    /// Largest frequency modulus (0 for polynomials and for the zero
    /// function); the growth-scale surrogate.
    pub fn max_freq_abs(&self) -> f64 {
        self.terms.iter().map(|t| t.freq.to_c64().norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient polynomial degree (0 for the zero function).
    pub fn max_poly_degree(&self) -> usize {
        self.terms.iter().filter_map(|t| t.coef.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        ExpPoly::from_terms(terms)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coef: t.coef.neg(), freq: t.freq.clone() })
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(Term { coef: a.coef.mul(&b.coef), freq: a.freq.add(&b.freq) });
            }
        }
        ExpPoly::from_terms(terms)
    }

    pub fn scale(&self, c: &S) -> Self {
        ExpPoly::from_terms(
            self.terms
                .iter()
                .map(|t| Term { coef: t.coef.scale(c), freq: t.freq.clone() })
                .collect(),
        )
    }

    pub fn scale_poly(&self, p: &Poly<S>) -> Self {
        ExpPoly::from_terms(
            self.terms
                .iter()
                .map(|t| Term { coef: t.coef.mul(p), freq: t.freq.clone() })
                .collect(),
        )
    }

    /// Integer power by repeated squaring; `f^0 = 1`.
    pub fn pow_int(&self, e: u32) -> Self {
        let mut acc = ExpPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Termwise differentiation: `(p, lambda) -> (p' + lambda p, lambda)`.
    pub fn derivative(&self) -> Self {
        ExpPoly::from_terms(
            self.terms
                .iter()
                .map(|t| Term {
                    coef: t.coef.derivative().add(&t.coef.scale(&t.freq)),
                    freq: t.freq.clone(),
                })
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        let mut g = self.clone();
        for _ in 0..n {
            g = g.derivative();
        }
        g
    }

    /// One-way conversion into the float domain.
    pub fn to_float(&self) -> FloatExpPoly {
        ExpPoly::from_terms(
            self.terms
                .iter()
                .map(|t| Term { coef: t.coef.to_float(), freq: t.freq.to_c64() })
                .collect(),
        )
    }
}

impl FloatExpPoly {
    /// Drops terms and polynomial coefficients of magnitude `<= tol`.
    /// Near-zero pruning never happens implicitly; this is the explicit knob.
    pub fn prune(&self, tol: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let coeffs = t
                    .coef
                    .coeffs()
                    .iter()
                    .map(|c| if c.norm() <= tol { Complex64::new(0.0, 0.0) } else { *c })
                    .collect();
                Term { coef: Poly::new(coeffs), freq: t.freq }
            })
            .collect();
        ExpPoly::from_terms(terms)
    }

    /// `max_k Re(freq_k * z)`: the dominant exponent scale at `z`. Zero for
    /// the zero function.
    pub fn max_exponent(&self, z: Complex64) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        self.terms.iter().map(|t| (t.freq * z).re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Evaluates `f(z) * exp(-shift)`. With `shift >= max_exponent(z)` no
    /// term can overflow; term values are summed largest-magnitude first with
    /// compensated (Kahan) accumulation.
    pub fn eval_shifted(&self, z: Complex64, shift: f64) -> Complex64 {
        let mut vals: Vec<Complex64> = self
            .terms
            .iter()
            .map(|t| t.coef.eval_c64(z) * (t.freq * z - Complex64::new(shift, 0.0)).exp())
            .collect();
        vals.sort_by(|a, b| b.norm_sqr().total_cmp(&a.norm_sqr()));
        let mut sum = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        for v in vals {
            let y = v - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Plain evaluation. Exponents beyond the float range are reported as an
    /// explicit overflow error — never as silent NaN or infinity.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if self.terms.iter().any(|t| (t.freq * z).re > OVERFLOW_EXPONENT) {
            return Err(Error::NonConvergent(format!(
                "evaluation overflow: Re(freq*z) exceeds the float exponent range at z = {z}"
            )));
        }
        let v = self.eval_shifted(z, 0.0);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonConvergent(format!("evaluation produced a non-finite value at z = {z}")))
        }
    }

    /// `log |f(z)|`, computed through the shifted evaluation so it never
    /// overflows; `-inf` exactly at zeros of `f`.
    pub fn log_abs(&self, z: Complex64) -> f64 {
        if self.terms.is_empty() {
            return f64::NEG_INFINITY;
        }
        let shift = self.max_exponent(z);
        shift + self.eval_shifted(z, shift).norm().ln()
    }
}

impl ExactExpPoly {
    /// Exact value at the origin: `sum_k p_k(0)`.
    pub fn eval_origin(&self) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for t in &self.terms {
            acc = acc.add(&t.coef.constant_term());
        }
        acc
    }

    /// Vanishing order `m` at the origin together with the leading Taylor
    /// coefficient `f^(m)(0) / m!`. Fails on the zero function.
    pub fn origin_order(&self) -> Result<(usize, GaussianRational)> {
        if self.is_zero() {
            return Err(Error::InvalidInput("vanishing order of the zero function".into()));
        }
        let mut g = self.clone();
        let mut factorial = BigRational::from_integer(BigInt::from(1));
        for m in 0..ORIGIN_ORDER_CAP {
            if m > 0 {
                factorial *= BigRational::from_integer(BigInt::from(m as i64));
            }
            let v = g.eval_origin();
            if !Scalar::is_zero(&v) {
                let inv = GaussianRational::real(factorial.recip());
                return Ok((m, v.mul(&inv)));
            }
            g = g.derivative();
        }
        Err(Error::ResourceLimit(format!(
            "vanishing order at the origin exceeds the cap of {ORIGIN_ORDER_CAP}"
        )))
    }
}

/// Determinant of a square matrix of exponential polynomials.
///
/// Rows and columns with a single structurally nonzero entry are peeled off
/// first (this collapses triangular systems at linear cost); the dense
/// remainder is expanded with a subset-sum dynamic program over columns.
pub fn determinant<S: Scalar>(mat: &[Vec<ExpPoly<S>>]) -> Result<ExpPoly<S>> {
    let n = mat.len();
    if mat.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(ExpPoly::one());
    }

    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut prefactor = ExpPoly::one();
    let mut sign_neg = false;

    // Peel single-entry rows and columns.
    loop {
        let mut peeled = false;
        'scan_rows: for (ri, &r) in rows.iter().enumerate() {
            let nonzero: Vec<usize> =
                (0..cols.len()).filter(|&ci| !mat[r][cols[ci]].is_zero()).collect();
            match nonzero.len() {
                0 => return Ok(ExpPoly::zero()),
                1 => {
                    let ci = nonzero[0];
                    if (ri + ci) % 2 == 1 {
                        sign_neg = !sign_neg;
                    }
                    prefactor = prefactor.mul(&mat[r][cols[ci]]);
                    let ri_copy = ri;
                    rows.remove(ri_copy);
                    cols.remove(ci);
                    peeled = true;
                    break 'scan_rows;
                }
                _ => {}
            }
        }
        if peeled {
            continue;
        }
        'scan_cols: for (ci, &c) in cols.iter().enumerate() {
            let nonzero: Vec<usize> =
                (0..rows.len()).filter(|&ri| !mat[rows[ri]][c].is_zero()).collect();
            match nonzero.len() {
                0 => return Ok(ExpPoly::zero()),
                1 => {
                    let ri = nonzero[0];
                    if (ri + ci) % 2 == 1 {
                        sign_neg = !sign_neg;
                    }
                    prefactor = prefactor.mul(&mat[rows[ri]][c]);
                    rows.remove(ri);
                    let ci_copy = ci;
                    cols.remove(ci_copy);
                    peeled = true;
                    break 'scan_cols;
                }
                _ => {}
            }
        }
        if !peeled {
            break;
        }
    }

    let k = rows.len();
    if k == 0 {
        return Ok(if sign_neg { prefactor.neg() } else { prefactor });
    }
    if k > DET_DENSE_CAP {
        return Err(Error::ResourceLimit(format!(
            "dense determinant block of dimension {k} exceeds the cap of {DET_DENSE_CAP}"
        )));
    }

    // dp[mask] = det of the submatrix on rows 0..popcount(mask) and the
    // column subset `mask`, built by expanding along the last row.
    let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut dp: HashMap<u32, ExpPoly<S>> = HashMap::new();
    dp.insert(0, ExpPoly::one());
    for level in 0..k {
        let mut next: HashMap<u32, ExpPoly<S>> = HashMap::new();
        for (mask, sub) in dp {
            if sub.is_zero() {
                continue;
            }
            let mut parity_below = 0usize;
            for ci in 0..k {
                let bit = 1u32 << ci;
                if mask & bit != 0 {
                    parity_below += 1;
                    continue;
                }
                let entry = &mat[rows[level]][cols[ci]];
                if entry.is_zero() {
                    continue;
                }
                // Sign of placing column `ci` as pivot of row `level`:
                // (-1)^(level + rank of ci within mask|bit).
                let rank = parity_below;
                let neg = (level + rank) % 2 == 1;
                let contrib = entry.mul(&sub);
                let contrib = if neg { contrib.neg() } else { contrib };
                next.entry(mask | bit)
                    .and_modify(|acc| *acc = acc.add(&contrib))
                    .or_insert(contrib);
            }
        }
        dp = next;
    }
    let dense = dp.remove(&full).unwrap_or_else(ExpPoly::zero);
    let out = prefactor.mul(&dense);
    Ok(if sign_neg { out.neg() } else { out })
}

/// Wronskian determinant `W(f_0, ..., f_{n-1})` with rows of increasing
/// derivative order, computed exactly in the scalar domain.
pub fn wronskian<S: Scalar>(fs: &[ExpPoly<S>]) -> Result<ExpPoly<S>> {
    if fs.is_empty() {
        return Err(Error::InvalidInput("Wronskian of an empty family".into()));
    }
    let n = fs.len();
    let mut rows: Vec<Vec<ExpPoly<S>>> = Vec::with_capacity(n);
    let mut current: Vec<ExpPoly<S>> = fs.to_vec();
    for i in 0..n {
        if i > 0 {
            current = current.iter().map(ExpPoly::derivative).collect();
        }
        rows.push(current.clone());
    }
    determinant(&rows)
}

// ---------------------------------------------------------------------------
// Pretty-printing: emits exactly the grammar accepted by the parser, so
// `parse(format(f)) == f` structurally in the exact domain.
// ---------------------------------------------------------------------------

fn freq_arg<S: Scalar>(freq: &S) -> String {
    if freq.is_one() {
        return "z".to_string();
    }
    if freq.neg().is_one() {
        return "-z".to_string();
    }
    format!("{}*z", freq.literal())
}

/// Renders `c * z^k` for a presentation-positive `c`.
fn mono_string<S: Scalar>(c: &S, k: usize) -> String {
    let pow = match k {
        0 => return c.literal(),
        1 => "z".to_string(),
        _ => format!("z^{k}"),
    };
    if c.is_one() {
        pow
    } else {
        format!("{}*{}", c.literal(), pow)
    }
}

/// Sign-extracted piece of output: (`negative`, magnitude text).
type Piece = (bool, String);

fn poly_pieces<S: Scalar>(p: &Poly<S>, out: &mut Vec<Piece>) {
    for k in (0..p.coeffs().len()).rev() {
        let c = p.coeff(k);
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative_presentation();
        let mag = if neg { c.neg() } else { c };
        out.push((neg, mono_string(&mag, k)));
    }
}

fn poly_string<S: Scalar>(p: &Poly<S>) -> String {
    let mut pieces = Vec::new();
    poly_pieces(p, &mut pieces);
    join_pieces(&pieces)
}

fn exp_term_piece<S: Scalar>(t: &Term<S>) -> Piece {
    let expf = format!("exp({})", freq_arg(&t.freq));
    let n_monomials = t.coef.coeffs().iter().filter(|c| !c.is_zero()).count();
    if n_monomials >= 2 {
        return (false, format!("({})*{}", poly_string(&t.coef), expf));
    }
    // Single monomial c * z^k.
    let k = t.coef.degree().unwrap_or(0);
    let c = t.coef.coeff(k);
    let neg = c.is_negative_presentation();
    let mag = if neg { c.neg() } else { c };
    if k == 0 && mag.is_one() {
        (neg, expf)
    } else {
        (neg, format!("{}*{}", mono_string(&mag, k), expf))
    }
}

fn join_pieces(pieces: &[Piece]) -> String {
    let mut out = String::new();
    for (idx, (neg, mag)) in pieces.iter().enumerate() {
        if idx == 0 {
            if *neg {
                out.push('-');
            }
            out.push_str(mag);
        } else {
            out.push_str(if *neg { " - " } else { " + " });
            out.push_str(mag);
        }
    }
    out
}

impl<S: Scalar> fmt::Display for ExpPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut pieces = Vec::new();
        for t in &self.terms {
            if t.freq.is_zero() {
                poly_pieces(&t.coef, &mut pieces);
            } else {
                pieces.push(exp_term_piece(t));
            }
        }
        f.write_str(&join_pieces(&pieces))
    }
}
