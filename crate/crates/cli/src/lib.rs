//! Command-line front end of `cheeger-core`: JSON domain and field specs,
//! CSV reports and SVG figures.

pub mod commands;
pub mod error;
pub mod output;
pub mod spec;
pub mod svg;

pub use commands::{run, Cli, Outcome};
pub use error::{exit, CliError};
pub use spec::{DomainSpec, FieldSpec};
