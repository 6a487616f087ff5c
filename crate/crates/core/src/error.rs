//! Crate-wide error type.
//!
//! Numerical routines distinguish *non-convergence* (quadrature or winding
//! estimates that never stabilize) from *invalid input* (empty curves,
//! identically-zero functions, malformed expressions): callers map the former
//! to retry/nudge logic and the latter to hard failures.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Expression text rejected by the grammar. `pos` is a byte offset.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A precondition on the inputs does not hold.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Every nudged contour radius left a zero (numerically) on the contour.
    #[error("zero on contour: winding integral failed to snap to an integer at radius {radius} after all nudge attempts")]
    ZeroOnContour { radius: f64 },

    /// An adaptive integral or iteration hit its hard cap without stabilizing.
    #[error("failed to converge: {0}")]
    NonConvergent(String),

    /// Zero cluster that could not be separated at the subdivision floor.
    #[error("unresolved zero cluster near ({re}, {im}) with winding count {count} at the subdivision floor")]
    ClusterUnresolved { re: f64, im: f64, count: i64 },

    /// Structurally degenerate input (identically-zero Wronskian, dependent
    /// curve components, vanishing determinant, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The admissible epsilon window of the combinatorial bounds is empty.
    #[error("epsilon window empty: {0}")]
    EpsWindowEmpty(String),

    /// A documented resource cap (monomial count, subset enumeration, node
    /// budget) was exceeded; caps exist so failures are loud, not silent.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A coefficient product fell outside the spanned function space when
    /// expressing lifted hyperplanes.
    #[error("product h_{i} * coeff[{j}][{k}] lies outside the spanned basis")]
    OutsideSpan { i: usize, j: usize, k: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
