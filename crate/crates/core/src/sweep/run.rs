use rayon::prelude::*;

use super::job::{Quantity, SweepJob};
use crate::{metrics, pointers, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    ChiUndefined,
    TruncationInsufficient,
    OrthogonalSelection,
    DegenerateNoise,
    DerivativeMismatch,
    Invalid,
}

impl CellStatus {
    pub fn name(self) -> &'static str {
        match self {
            CellStatus::Ok => "ok",
            CellStatus::ChiUndefined => "chi_undefined",
            CellStatus::TruncationInsufficient => "truncation_insufficient",
            CellStatus::OrthogonalSelection => "orthogonal_selection",
            CellStatus::DegenerateNoise => "degenerate_noise",
            CellStatus::DerivativeMismatch => "derivative_mismatch",
            CellStatus::Invalid => "invalid",
        }
    }

    fn from_error(e: &Error) -> Self {
        match e {
            Error::ChiUndefined => CellStatus::ChiUndefined,
            Error::TruncationInsufficient { .. } => CellStatus::TruncationInsufficient,
            Error::OrthogonalSelection { .. } => CellStatus::OrthogonalSelection,
            Error::DegenerateNoise { .. } => CellStatus::DegenerateNoise,
            Error::DerivativeMismatch { .. } => CellStatus::DerivativeMismatch,
            _ => CellStatus::Invalid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub status: CellStatus,
    /// Oracle basis dimension, for oracle-backed quantities.
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub axis1_name: String,
    pub axis2_name: String,
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    /// Row-major, `axis1` indexes rows.
    pub cells: Vec<Cell>,
}

impl GridResult {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.axis2.len() + j]
    }

    pub fn dim_range(&self) -> Option<(usize, usize)> {
        let dims = self.cells.iter().filter_map(|c| c.dim);
        let min = dims.clone().min()?;
        Some((min, dims.max()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

fn evaluate(job: &SweepJob, v1: f64, v2: f64) -> Result<(f64, Option<usize>)> {
    let (sel, pointer, cfg) = job.point(v1, v2)?;
    match job.quantity {
        Quantity::ShiftX => Ok((pointers::shift(&sel, &pointer, &cfg)?.x, None)),
        Quantity::ShiftP => Ok((pointers::shift(&sel, &pointer, &cfg)?.p, None)),
        Quantity::SnrNon => Ok((metrics::snr_nonpostselected(&sel, &pointer, &cfg)?, None)),
        Quantity::SnrPost | Quantity::Chi | Quantity::ChiPrime => {
            let r = metrics::snr_report(&sel, &pointer, &cfg)?;
            let v = match job.quantity {
                Quantity::SnrPost => r.snr_post,
                Quantity::Chi => r.chi.ok_or(Error::ChiUndefined)?,
                _ => r.chi_prime.ok_or(Error::ChiUndefined)?,
            };
            Ok((v, Some(r.dim)))
        }
        Quantity::Qfi | Quantity::FisherPost => {
            let r = metrics::fisher_report(&sel, &pointer, &cfg, job.evolution)?;
            let v = if job.quantity == Quantity::Qfi {
                r.qfi
            } else {
                r.fisher_post
            };
            Ok((v, Some(r.dim)))
        }
    }
}

fn cell(job: &SweepJob, v1: f64, v2: f64) -> Cell {
    match evaluate(job, v1, v2) {
        Ok((value, dim)) => Cell {
            value,
            status: CellStatus::Ok,
            dim,
        },
        Err(e) => Cell {
            value: f64::NAN,
            status: CellStatus::from_error(&e),
            dim: None,
        },
    }
}

pub fn run_job(job: &SweepJob) -> Result<GridResult> {
    run_job_with(job, Execution::Parallel)
}

/// Every cell is an independent pure computation; failures are recorded in
/// the cell's status.
pub fn run_job_with(job: &SweepJob, execution: Execution) -> Result<GridResult> {
    job.validate()?;
    let a1 = job.axis1.values();
    let a2 = job.axis2.values();
    let points: Vec<(f64, f64)> = a1.iter().flat_map(|&x| a2.iter().map(move |&y| (x, y))).collect();
    let cells = match execution {
        Execution::Serial => points.iter().map(|&(x, y)| cell(job, x, y)).collect(),
        Execution::Parallel => points.par_iter().map(|&(x, y)| cell(job, x, y)).collect(),
    };
    Ok(GridResult {
        axis1_name: job.axis1.name.clone(),
        axis2_name: job.axis2.name.clone(),
        axis1: a1,
        axis2: a2,
        cells,
    })
}
