use thiserror::Error;

/// Errors raised while building measures or evaluating survival quantities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("measure has no mass (empty atom list or component list)")]
    EmptyMeasure,

    #[error("measure is not normalized: total mass {total} (tolerance {tolerance})")]
    NonNormalized { total: f64, tolerance: f64 },

    #[error("negative density {value} at node {index}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("oscillatory quadrature did not converge at t = {t} within {nodes} nodes")]
    QuadratureFailure { t: f64, nodes: usize },

    #[error("cantor product truncated at depth {depth} has error bound {bound} at t = {t}")]
    CantorTruncation { depth: u32, t: f64, bound: f64 },

    #[error("survival probability {value} exceeds 1 beyond rounding tolerance")]
    ProbabilityExceedsOne { value: f64 },

    #[error("survival probability is zero within floating underflow")]
    ZeroProbability,

    #[error("Zeno time is undefined: the state has infinite energy variance")]
    UndefinedZenoTime,

    #[error("spectrum is incommensurable within the requested denominator bound")]
    Incommensurable,

    #[error("single-atom measure is an eigenstate; no finite return time")]
    SingleAtom,

    #[error("exponent must be an exact rational for this operation")]
    ApproximateAlpha,

    #[error("convolution exceeds atom budget: {count} atoms")]
    AtomBudgetExceeded { count: usize },
}

impl Error {
    /// True for errors caused by malformed input rather than numerical breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::EmptyMeasure
                | Error::NonNormalized { .. }
                | Error::NegativeDensity { .. }
                | Error::InvalidParameter(_)
                | Error::ApproximateAlpha
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
