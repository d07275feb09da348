pub mod edge;
pub mod eigensolver;
pub mod error;
pub mod estimators;
pub mod quadrature;
pub mod sampler;
pub mod simulation;

pub use error::{Error, Result};
