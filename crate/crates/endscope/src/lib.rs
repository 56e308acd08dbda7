//! File formats, exporters and the command-line front end for `endscope-core`.

pub mod error;
pub mod export;
pub mod run;
pub mod source;

pub use error::{Failure, EXIT_BUDGET, EXIT_PRECONDITION, EXIT_USAGE};
pub use run::{run, Command, Format, RunConfig};
