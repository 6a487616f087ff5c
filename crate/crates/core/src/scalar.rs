//! Scalar coefficient domains.
//!
//! Every algebraic object in this crate is generic over a [`Scalar`], with two
//! concrete domains:
//!
//! * [`GaussianRational`] — exact complex rationals (a pair of arbitrary
//!   precision rationals). All structural decisions (term merging, zero
//!   tests, linear algebra ranks, Wronskian vanishing) are made here, where
//!   they are decidable.
//! * [`FloatComplex`] (= `num_complex::Complex64`) — double-precision complex
//!   numbers, used by the quadrature and contour kernels.
//!
//! Conversion is one-way: [`Scalar::to_c64`] maps any scalar into the float
//! domain, and nothing maps back. Float-domain normalization drops
//! coefficients that are *exactly* zero only; near-zero pruning is always an
//! explicit caller decision.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Bucket width used when the float domain decides whether two term
/// frequencies coincide. Exact-domain merging uses true equality.
pub const FREQ_MERGE_TOL: f64 = 1e-12;

/// Coefficient/frequency domain for polynomials and exponential polynomials.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Whether arithmetic in this domain is exact (no rounding).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn imaginary() -> Self;
    fn from_int(n: i64) -> Self;
    /// Build `num/den`; fails on a zero denominator.
    fn from_ratio(num: BigInt, den: BigInt) -> Result<Self>;
    /// Build from a decimal literal such as `12.25` (always representable:
    /// decimals are rationals).
    fn from_decimal(text: &str) -> Result<Self>;
    /// `sqrt(2)`, available only where it is representable.
    fn sqrt2() -> Result<Self>;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Fails on a zero divisor.
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    /// One-way bridge into the float domain.
    fn to_c64(&self) -> Complex64;

    /// Canonical frequency order: lexicographic on (Re, Im).
    fn freq_cmp(&self, other: &Self) -> Ordering;
    /// Merge predicate used during normalization: exact equality in the
    /// exact domain, [`FREQ_MERGE_TOL`]-bucketing in the float domain.
    fn freq_merge(&self, other: &Self) -> bool;

    /// True when the canonical rendering of this value starts with a minus
    /// sign (used by the pretty-printer to pick `+`/`-` joiners).
    fn is_negative_presentation(&self) -> bool;
    /// Grammar-conformant literal text for this value.
    fn literal(&self) -> String;
    /// Whether [`Scalar::literal`] can stand as a factor without parentheses.
    fn literal_is_atomic(&self) -> bool;
}

/// Exact complex rational: `re + im * i` with arbitrary-precision parts.
///
/// The derived `Ord` (lexicographic on `(re, im)`) doubles as the canonical
/// frequency order for exact exponential polynomials.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

/// Double-precision complex scalar used by all numerical kernels.
pub type FloatComplex = Complex64;

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `re^2 + im^2`, the square of the modulus.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }
}

fn rational_literal(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders `r * i` (callers guarantee `r != 0`).
fn imaginary_literal(r: &BigRational) -> String {
    if r.is_one() {
        "i".to_string()
    } else if (-r).is_one() {
        "-i".to_string()
    } else {
        format!("{}i", rational_literal(r))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaussianRational({})", self.literal())
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussianRational::from_ints(0, 0)
    }

    fn one() -> Self {
        GaussianRational::from_ints(1, 0)
    }

    fn imaginary() -> Self {
        GaussianRational::from_ints(0, 1)
    }

    fn from_int(n: i64) -> Self {
        GaussianRational::from_ints(n, 0)
    }

    fn from_ratio(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("rational literal with zero denominator".into()));
        }
        Ok(GaussianRational::real(BigRational::new(num, den)))
    }

    fn from_decimal(text: &str) -> Result<Self> {
        let (int_part, frac_part) = match text.split_once('.') {
            Some(parts) => parts,
            None => (text, ""),
        };
        let digits: String = [int_part, frac_part].concat();
        let numer: BigInt = digits
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad decimal literal `{text}`")))?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        Ok(GaussianRational::real(BigRational::new(numer, denom)))
    }

    fn sqrt2() -> Result<Self> {
        Err(Error::InvalidInput(
            "sqrt2 is not representable in the exact domain; parse in float mode".into(),
        ))
    }

    fn add(&self, rhs: &Self) -> Self {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    fn sub(&self, rhs: &Self) -> Self {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    fn mul(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        let n = rhs.norm_sq();
        if n.is_zero() {
            return Err(Error::InvalidInput("division by zero scalar".into()));
        }
        let num = self.mul(&rhs.conj());
        Ok(GaussianRational { re: num.re / &n, im: num.im / &n })
    }

    fn neg(&self) -> Self {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn freq_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn freq_merge(&self, other: &Self) -> bool {
        self == other
    }

    fn is_negative_presentation(&self) -> bool {
        if !self.re.is_zero() {
            self.re.is_negative()
        } else {
            self.im.is_negative()
        }
    }

    fn literal(&self) -> String {
        if self.is_zero() {
            "0".to_string()
        } else if self.im.is_zero() {
            rational_literal(&self.re)
        } else if self.re.is_zero() {
            imaginary_literal(&self.im)
        } else if self.im.is_negative() {
            format!("({}-{})", rational_literal(&self.re), imaginary_literal(&-self.im.clone()))
        } else {
            format!("({}+{})", rational_literal(&self.re), imaginary_literal(&self.im))
        }
    }

    fn literal_is_atomic(&self) -> bool {
        self.re.is_zero() || self.im.is_zero()
    }
}

fn f64_literal(x: f64) -> String {
    // `Display` for f64 is the shortest decimal that round-trips, so
    // re-parsing the literal recovers the identical value.
    format!("{x}")
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn imaginary() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_ratio(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("rational literal with zero denominator".into()));
        }
        let (n, d) = (num.to_f64().unwrap_or(f64::NAN), den.to_f64().unwrap_or(f64::NAN));
        Ok(Complex64::new(n / d, 0.0))
    }

    fn from_decimal(text: &str) -> Result<Self> {
        let x: f64 = text
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad decimal literal `{text}`")))?;
        Ok(Complex64::new(x, 0.0))
    }

    fn sqrt2() -> Result<Self> {
        Ok(Complex64::new(std::f64::consts::SQRT_2, 0.0))
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.re == 0.0 && rhs.im == 0.0 {
            return Err(Error::InvalidInput("division by zero scalar".into()));
        }
        Ok(self / rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_one(&self) -> bool {
        self.re == 1.0 && self.im == 0.0
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn freq_cmp(&self, other: &Self) -> Ordering {
        self.re.total_cmp(&other.re).then_with(|| self.im.total_cmp(&other.im))
    }

    fn freq_merge(&self, other: &Self) -> bool {
        (self.re - other.re).abs() <= FREQ_MERGE_TOL && (self.im - other.im).abs() <= FREQ_MERGE_TOL
    }

    fn is_negative_presentation(&self) -> bool {
        if self.re != 0.0 {
            self.re < 0.0
        } else {
            self.im < 0.0
        }
    }

    fn literal(&self) -> String {
        if self.re == 0.0 && self.im == 0.0 {
            "0".to_string()
        } else if self.im == 0.0 {
            f64_literal(self.re)
        } else if self.re == 0.0 {
            if self.im == 1.0 {
                "i".to_string()
            } else if self.im == -1.0 {
                "-i".to_string()
            } else {
                format!("{}i", f64_literal(self.im))
            }
        } else if self.im < 0.0 {
            let mag = -self.im;
            let istr = if mag == 1.0 { "i".to_string() } else { format!("{}i", f64_literal(mag)) };
            format!("({}-{})", f64_literal(self.re), istr)
        } else {
            let istr =
                if self.im == 1.0 { "i".to_string() } else { format!("{}i", f64_literal(self.im)) };
            format!("({}+{})", f64_literal(self.re), istr)
        }
    }

    fn literal_is_atomic(&self) -> bool {
        self.re == 0.0 || self.im == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn exact_field_ops() {
        let a = gr(1, 2);
        let b = gr(3, -1);
        let prod = a.mul(&b);
        assert_eq!(prod, gr(5, 5));
        let back = prod.div(&b).unwrap();
        assert_eq!(back, a);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_decimal_is_rational() {
        let x = GaussianRational::from_decimal("2.50").unwrap();
        assert_eq!(x, GaussianRational::from_ratio(5.into(), 2.into()).unwrap());
    }

    #[test]
    fn sqrt2_exact_mode_rejected() {
        assert!(GaussianRational::sqrt2().is_err());
        assert!((Complex64::sqrt2().unwrap().re - 2f64.sqrt()).abs() == 0.0);
    }

    #[test]
    fn freq_order_is_lexicographic() {
        assert_eq!(gr(0, 1).freq_cmp(&gr(1, -5)), Ordering::Less);
        assert_eq!(gr(1, -5).freq_cmp(&gr(1, 2)), Ordering::Less);
    }

    #[test]
    fn float_freq_bucketing() {
        let a = Complex64::new(1.0, 0.0);
        let b = Complex64::new(1.0 + 0.5e-12, 0.0);
        let c = Complex64::new(1.0 + 1.0e-9, 0.0);
        assert!(a.freq_merge(&b));
        assert!(!a.freq_merge(&c));
    }

    #[test]
    fn literals() {
        assert_eq!(gr(3, 0).literal(), "3");
        assert_eq!(gr(0, -1).literal(), "-i");
        assert_eq!(gr(1, 2).literal(), "(1+2i)");
        assert_eq!(gr(1, -2).literal(), "(1-2i)");
        assert_eq!(
            GaussianRational::new(
                BigRational::new(3.into(), 2.into()),
                BigRational::from_integer(0.into())
            )
            .literal(),
            "3/2"
        );
        assert_eq!(Complex64::new(0.5, 0.0).literal(), "0.5");
        assert_eq!(Complex64::new(0.0, 2.0).literal(), "2i");
    }
}
