pub mod basis;
pub mod cli;
pub mod error;
pub mod modcurve;
pub mod series;
pub mod tfinder;
pub mod ujump;
pub mod verifier;

pub use error::{Error, Result};
