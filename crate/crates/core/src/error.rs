use thiserror::Error;

use crate::cubic::RegimeTag;
use crate::dynamics::Trajectory;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cubic analysis is matter-only; radiation coefficient delta = {delta} must be 0")]
    RadiationNotSupported { delta: f64 },

    /// The discriminant is zero to within the degeneracy tolerance.
    /// The computed value is kept so callers can still report it.
    #[error("degenerate discriminant D = {d:e} (|D| <= {tolerance:e})")]
    DegenerateDiscriminant { d: f64, tolerance: f64 },

    #[error("operation requires {expected}, but parameters are {found}")]
    WrongRegime {
        expected: &'static str,
        found: RegimeTag,
    },

    #[error("start value R = {r_start} lies in the forbidden interval ({lower}, {upper})")]
    ForbiddenStart {
        r_start: f64,
        lower: f64,
        upper: f64,
    },

    #[error("step size underflow at t = {t}, R = {r}, R' = {rdot}")]
    StepFailure { t: f64, r: f64, rdot: f64 },

    /// Contraction reached the configured floor. The trajectory up to the
    /// floor (with a `SingularityApproach` event) is attached.
    #[error("R fell below the floor {floor:e} at t = {t}")]
    SingularityFloor {
        t: f64,
        floor: f64,
        trajectory: Box<Trajectory>,
    },

    #[error("no extremum in the integrated span")]
    NoExtremumInSpan,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
