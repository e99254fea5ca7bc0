//! Special functions: Airy Ai, log-gamma, and the Hermite function.

pub mod airy;
pub mod gamma;
pub mod hermite;

pub use airy::airy;
pub use gamma::log_gamma;
pub use hermite::{
    hermite_fn, hermite_fn_asymptotic, hermite_fn_clenshaw, AsymptoticContext,
    AsymptoticSeriesCoeffs, DEFAULT_DISPATCH_THRESHOLD,
};
