pub mod correlations;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod xstate;

pub use error::{Error, Result};
