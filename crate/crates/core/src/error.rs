use thiserror::Error;

use crate::geometry::{BoundaryCurveId, Variant};
use crate::params::ParityRule;

/// Errors raised across the toolkit.
///
/// Every variant names the violated invariant or hypothesis so that the CLI
/// can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate denominator: m1 + m2 + m1*m2 = 0 for (m1, m2) = ({m1}, {m2}); no finite critical exponent")]
    DegenerateDenominator { m1: u32, m2: u32 },

    #[error("parity violation: {variant} requires {rule} but (m1, m2) = ({m1}, {m2})")]
    ParityViolation {
        variant: Variant,
        rule: ParityRule,
        m1: u32,
        m2: u32,
    },

    #[error("invalid anchor {anchor} for {variant}: {expected}")]
    InvalidAnchor {
        variant: Variant,
        anchor: f64,
        expected: &'static str,
    },

    #[error("parameter {value} outside [{lo}, {hi}] for {what}")]
    OutOfRange {
        what: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("corner point: the normal of {id} is undefined at parameter {s}")]
    CornerPoint { id: BoundaryCurveId, s: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point ({x}, {y}) lies on the degeneracy line x = 0")]
    DegeneracyLine { x: f64, y: f64 },

    #[error("point ({x}, {y}) is outside the closed hyperbolic region (y <= 0 required)")]
    NotHyperbolic { x: f64, y: f64 },

    #[error("quadrature did not converge: fine {fine}, coarse {coarse} (tolerance {tol})")]
    NonConvergence { fine: f64, coarse: f64, tol: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("orientation self-test failed on {variant}: rel_err {rel_err:e}")]
    OrientationSelfTest { variant: Variant, rel_err: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
