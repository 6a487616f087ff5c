//! Numerical and symbolic laboratory for the value distribution of
//! exponential polynomials — finite sums `f(z) = Σ pᵢ(z)·exp(λᵢz)` with
//! polynomial coefficients.
//!
//! The crate provides:
//!
//! - exact (Gaussian-rational) and float symbolic algebra on exponential
//!   polynomials, including derivatives, Wronskians, and determinants;
//! - certified zero location in disks via argument-principle winding
//!   numbers with adaptive quadrature;
//! - Nevanlinna-style growth functionals: proximity `m(a, r)`, integrated
//!   counting `N(a, r)`, characteristic `T(r)`, and identity checks
//!   (Jensen's formula, the first main theorem) against closed forms;
//! - second-main-theorem style inequalities for curves against fixed and
//!   moving hyperplane targets, with truncation-lemma and Borel-type
//!   verifiers;
//! - a quotient laboratory: divisibility certificates for quotients of
//!   exponential polynomials, integer-relation detection among
//!   frequencies, and effectivity bounds for an auxiliary-map
//!   construction.
//!
//! Everything exact is done over `ℚ(i)`; float paths are explicit and
//! carry their own tolerances.

pub mod error;
pub mod scalar;
pub mod poly;
pub mod exp_poly;
pub mod parse;
pub mod linalg;
pub mod quad;
pub mod contour_zeros;
pub mod report;
pub mod nevanlinna;
pub mod moving_targets;
pub mod quotient_lab;

pub use contour_zeros::{
    count_zeros_disk, counting_from_zeros, locate_zeros_disk, CertifiedZero, LocateOptions,
    ZeroSet,
};
pub use error::{Error, Result};
pub use exp_poly::{determinant, wronskian, ExactExpPoly, ExpPoly, FloatExpPoly, Term};
pub use moving_targets::{
    build_vt, express_hat_hyperplanes, general_position_moving, lift_curve, proximity_moving,
    verify_hat_claim, verify_moving_smt, verify_moving_truncation, GrowthScale, HatHyperplane,
    LiftedCurve, MovingHyperplane, VtBasis,
};
pub use nevanlinna::{
    characteristic_pure_exp, characteristic_t, curve_characteristic, profile, proximity_m,
    verify_fmt, verify_jensen, verify_truncated_borel, verify_truncation_lemma, verify_vojta_smt,
    BorelOutcome, FixedHyperplane, HoloCurve, JensenCheck, NevanlinnaProfile, Target,
};
pub use parse::{parse, parse_exact, parse_float};
pub use quotient_lab::{
    borel_pair, construct_auxiliary_map, corollary_check, divides_report, exp_div_exact,
    green_pair, rational_dependence_exact, rational_dependence_heuristic, theorem_bounds,
    AuxiliaryMap, BoundReport, CorollaryReport, CorollaryVerdict, DividesVerdict,
    DivisibilityCertificate, ExpShape, IntegerRelation, RelationMode, ZeroWitness,
};
pub use poly::Poly;
pub use quad::{CircleQuad, QuadOutcome};
pub use report::{sig12, RadiusRow, VerifierReport};
pub use scalar::{FloatComplex, GaussianRational, Scalar};
