pub mod error;
pub mod expr;
pub mod fefferman;
pub mod chains;
pub mod cli;
pub mod flatness;
pub mod frame;
pub mod heisenberg;
pub mod jet;
pub mod linalg;
pub mod poly;
pub mod rescaling;
pub mod scalar;
pub mod structure;

pub use error::{Error, Result};
