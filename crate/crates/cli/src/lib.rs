//! Command-line layer over `quadstat-core`: CSV loaders, argument parsing,
//! command dispatch and JSON/CSV reports.
//!
//! Reports are byte-identical for identical arguments (wall time is only
//! added with `--timing`). Errors are printed to stderr as one JSON object
//! and map to a distinct exit status per kind, see [`CliError::exit_code`].

pub mod config;
pub mod error;
pub mod load;
pub mod report;
pub mod run;

pub use config::RunConfig;
pub use error::CliError;
pub use report::{Format, Report};
pub use run::run;
