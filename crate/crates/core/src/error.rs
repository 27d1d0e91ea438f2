//! Crate-wide error type.
//!
//! Contract violations (bad concurrence, non-unit axes) are separated from
//! genuinely degenerate inputs: a direction construction that collapses to
//! the zero vector, conditioning on a null event, or geometry that exists
//! only as a limit. Callers that scan parameter grids typically map the
//! degenerate variants to flagged zero rows instead of aborting.

use crate::frame::DegenerateGeometry;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("concurrence {0} outside [0, 1]")]
    ConcurrenceOutOfRange(f64),

    #[error("measurement axis must be unit length, got norm {norm}")]
    NonUnitVector { norm: f64 },

    #[error("conditioning event has probability {marginal:e}, below the null-event threshold {threshold:e}")]
    ConditioningOnNullEvent { marginal: f64, threshold: f64 },

    #[error("direction construction collapsed: |{which}| = {norm:e}")]
    DegenerateDirection { which: &'static str, norm: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(DegenerateGeometry),

    #[error("{what} = {value} outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
}
