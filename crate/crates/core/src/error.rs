use thiserror::Error;

use crate::modcurve::Cusp;
use crate::series::SeriesError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: {source}")]
    Series {
        op: &'static str,
        #[source]
        source: SeriesError,
    },

    #[error("invalid family spec: {0}")]
    InvalidSpec(String),

    #[error("{op}: search exhausted ({detail})")]
    SearchExhausted { op: &'static str, detail: String },

    #[error("{op}: {function} has a pole at {cusp} where t(lτ) has no zero")]
    Unbounded {
        op: &'static str,
        function: String,
        cusp: Cusp,
    },

    #[error("mw_reduce: reduction stalled at pole order {order}")]
    Stall { order: i64 },

    #[error("{op}: coefficient {value} is not divisible by leading coefficient {lead}")]
    NonIntegral {
        op: &'static str,
        value: String,
        lead: String,
    },

    #[error("mw_reduce: residual does not vanish at q^{exponent}")]
    Residual { exponent: i64 },

    #[error("verify: t-support [{j_min}, {j_max}] at step {alpha} exceeds the ceiling {ceiling}")]
    SupportOverflow {
        alpha: usize,
        j_min: i64,
        j_max: i64,
        ceiling: i64,
    },

    #[error("image cache: {0}")]
    Cache(String),
}

impl Error {
    pub(crate) fn series(op: &'static str) -> impl FnOnce(SeriesError) -> Error {
        move |source| Error::Series { op, source }
    }

    /// Process exit code for the command-line front end: 2 for bad input,
    /// 1 for an unsuccessful search, 3 for everything that indicates a
    /// broken invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidSpec(_) => 2,
            Error::Series {
                source: SeriesError::Parse(_) | SeriesError::NotADivisor { .. },
                ..
            } => 2,
            Error::SearchExhausted { .. } => 1,
            _ => 3,
        }
    }
}
