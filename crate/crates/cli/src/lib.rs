//! Batch front-end for `sophase`: every computation as a command driven by
//! flags or a flat `key = value` file, writing CSV or JSON datasets.

pub mod config;
pub mod coverage;
pub mod figures;
pub mod run;

pub use config::{plan, validate, Command, Diagnostic, RunConfig};
pub use run::{run, Failure, Report};
