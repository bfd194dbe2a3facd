pub mod embedding;
pub mod error;
pub mod format;
pub mod lattice;
pub mod linalg;
pub mod rootdatum;
pub mod rootsystem;
pub mod spectrum;

pub use error::{Error, Result};
