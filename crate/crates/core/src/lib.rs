//! Decoherence of a free particle by environmental scattering, in the
//! Gaussian closed form, with independent grid oracles.

pub mod averaging;
mod error;
pub mod evolution;
pub mod model;
pub mod observation;
pub mod oracle;
pub mod scenarios;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};
