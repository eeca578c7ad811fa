//! File formats and the command line for `clark-core`.

pub mod cli;
pub mod curves;
pub mod error;
pub mod figures;
pub mod output;
pub mod schema;

pub use error::{CliError, Result};
