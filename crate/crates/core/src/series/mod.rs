//! Truncated Laurent q-series over exact and modular coefficient rings,
//! and expansion of Dedekind eta quotients.

mod eta;
mod qseries;
mod ring;

use thiserror::Error;

pub use eta::{divisors, euler_product, euler_product_in, eta_expand, eta_expand_at, eta_expand_in, expand_by_divisor_sums, EtaQuotient};
pub use qseries::QSeries;
pub use ring::{is_prime, Integers, ModPrimePower, Rationals, Ring, RingKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("coefficient rings differ ({left} vs {right})")]
    RingMismatch { left: RingKind, right: RingKind },
    #[error("q-offsets {left}/24 and {right}/24 differ by a fractional power")]
    OffsetMismatch { left: i64, right: i64 },
    #[error("leading coefficient is not a unit")]
    NonUnitLeading,
    #[error("series carries the fractional prefactor q^({offset24}/24)")]
    FractionalExponent { offset24: i64 },
    #[error("need coefficients below q^{needed} but series is only known below q^{available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("{divisor} does not divide the level {level}")]
    NotADivisor { divisor: u64, level: u64 },
    #[error("invalid eta quotient: {0}")]
    Parse(String),
}
