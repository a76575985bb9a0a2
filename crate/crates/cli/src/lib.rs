//! File formats, sample ingestion and the `infolattice` command line.
//!
//! Inputs are delimited sample files (header row of variable names, one
//! sample per row) or JSON documents: distributions carry `schema` and
//! `probs`, graphs carry `nodes`, `cardinalities`, `edges` and optionally
//! `parents`. Reports are JSON (`--format doc`) or plain text tables, both
//! starting with the resolved run configuration.

pub mod docs;
pub mod error;
pub mod input;
pub mod number;
pub mod render;
pub mod run;
pub mod samples;

pub use error::{CliError, CliResult};
pub use run::{run, Outcome, RunConfig};
pub use samples::{load_dataset, LabeledSchema, RawTable};
