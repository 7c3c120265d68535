//! Error type shared across the crate.

use crate::family::Family;
use thiserror::Error;

/// Everything that can go wrong in exact land.
///
/// Construction errors (`ClosednessViolation`, `NonConstantMetric`,
/// `SingularMetric`) indicate that input data fails a structural hypothesis;
/// they carry the offending indices so a caller can report precisely.
/// Range errors (`OutOfStabilizationRange`, `InvalidDimension`, `CapTooLarge`)
/// are refusals: the requested quantity is outside the window in which the
/// answer is guaranteed well-defined, and we do not extrapolate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A gradient handed to [`crate::poly::euler_integrate`] is not closed:
    /// `d(g_alpha)/dt_beta != d(g_beta)/dt_alpha`.
    #[error("gradient is not closed at component pair ({alpha}, {beta})")]
    ClosednessViolation { alpha: u32, beta: u32 },

    /// A gradient component has a nonzero constant term, or a series handed to
    /// `log` does not have constant term 1.
    #[error("{context}: constant term must be {expected}")]
    BadConstantTerm {
        context: &'static str,
        expected: &'static str,
    },

    /// Two truncated biseries with different caps were combined.
    #[error("cap mismatch: {left} vs {right}")]
    CapMismatch { left: u32, right: u32 },

    /// `exp` of a biseries whose constant term is nonzero (the exponential
    /// would not terminate in the truncated ring).
    #[error("exp argument must have zero constant term")]
    NonNilpotentArgument,

    /// A metric entry `dF/dt_1 dt_alpha dt_beta` came out non-constant.
    #[error("metric entry ({alpha}, {beta}) is not constant")]
    NonConstantMetric { alpha: u32, beta: u32 },

    /// The constant metric is degenerate.
    #[error("metric is singular")]
    SingularMetric,

    /// Dimension below the family's minimum.
    #[error("family {family} requires N >= {min}, got {n}")]
    InvalidDimension { family: Family, n: u32, min: u32 },

    /// A stabilization / extraction request outside the guaranteed window.
    #[error("indices ({alpha}, {beta}) out of stabilization range for {family} at N = {n}")]
    OutOfStabilizationRange {
        family: Family,
        alpha: u32,
        beta: u32,
        n: u32,
    },

    /// A truncation cap above the family's guaranteed-exact default.
    #[error("cap {cap} exceeds the guaranteed-exact cap {max} for this identity")]
    CapTooLarge { cap: u32, max: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
