//! Configuration-driven experiment runner, figure emission, and the pieces
//! shared by the command-line interface.

mod config;
mod records;
mod svg;
mod sweep;

pub use config::ExperimentConfig;
pub use records::{records_to_csv, TrialRecord, CSV_HEADER};
pub use svg::{render_figure1, render_figure2};
pub use sweep::{emit_figure1, emit_figure2, figure1_table, run_sweep, Figure1Row};
