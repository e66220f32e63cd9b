//! Parameter sweeps over two axes, evaluated cell by cell in parallel and
//! written as long-format CSV with a JSON sidecar.

mod job;
mod output;
mod run;

pub use job::{Axis, JobConfig, Quantity, SweepJob};
pub use output::{emit_csv, emit_meta, render_csv, Provenance};
pub use run::{run_job, run_job_with, Cell, CellStatus, Execution, GridResult};
