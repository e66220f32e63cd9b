use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::json;

use super::job::SweepJob;
use super::run::{CellStatus, GridResult};
use crate::{Error, Result};

/// Run facts recorded next to the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub wall_time: Duration,
    pub dim_range: Option<(usize, usize)>,
    pub cells: usize,
    pub failed_cells: usize,
}

impl Provenance {
    pub fn from_result(result: &GridResult, wall_time: Duration) -> Self {
        Self {
            wall_time,
            dim_range: result.dim_range(),
            cells: result.cells.len(),
            failed_cells: result.cells.iter().filter(|c| c.status != CellStatus::Ok).count(),
        }
    }
}

/// `{:.16e}` keeps 17 significant digits, enough to round-trip any f64.
fn number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Long-format CSV: header `<axis1>,<axis2>,value,status`, one row per cell.
pub fn render_csv(result: &GridResult) -> String {
    let mut out = format!("{},{},value,status\n", result.axis1_name, result.axis2_name);
    for (i, x) in result.axis1.iter().enumerate() {
        for (j, y) in result.axis2.iter().enumerate() {
            let c = result.cell(i, j);
            out.push_str(&format!(
                "{},{},{},{}\n",
                number(*x),
                number(*y),
                number(c.value),
                c.status.name()
            ));
        }
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    Ok(())
}

pub fn emit_csv(result: &GridResult, path: &Path) -> Result<PathBuf> {
    write(path, &render_csv(result))?;
    Ok(path.to_path_buf())
}

/// JSON sidecar. Its `job` object is a complete config and can be fed back
/// to `sweep --config`.
pub fn emit_meta(job: &SweepJob, provenance: &Provenance, path: &Path) -> Result<PathBuf> {
    let dims = provenance
        .dim_range
        .map(|(lo, hi)| json!({ "min": lo, "max": hi }))
        .unwrap_or(serde_json::Value::Null);
    let meta = json!({
        "job": job.to_config(),
        "library": "weaklab",
        "version": crate::VERSION,
        "truncation_dims": dims,
        "cells": provenance.cells,
        "failed_cells": provenance.failed_cells,
        "wall_time_s": provenance.wall_time.as_secs_f64(),
    });
    let text = serde_json::to_string_pretty(&meta).expect("sidecar serializes");
    write(path, &(text + "\n"))?;
    Ok(path.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::run::Cell;

    fn grid() -> GridResult {
        let ok = |v| Cell {
            value: v,
            status: CellStatus::Ok,
            dim: Some(32),
        };
        GridResult {
            axis1_name: "r".into(),
            axis2_name: "phi-c".into(),
            axis1: vec![0.0, 1.0],
            axis2: vec![0.5, 0.1],
            cells: vec![
                ok(1.0),
                ok(0.1 + 0.2),
                Cell {
                    value: f64::NAN,
                    status: CellStatus::ChiUndefined,
                    dim: None,
                },
                ok(-3e-300),
            ],
        }
    }

    #[test]
    fn two_by_two_has_five_lines() {
        let csv = render_csv(&grid());
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "r,phi-c,value,status");
        assert!(lines[3].ends_with(",NaN,chi_undefined"));
    }

    #[test]
    fn values_round_trip() {
        let csv = render_csv(&grid());
        let row: Vec<_> = csv.lines().nth(2).unwrap().split(',').collect();
        assert_eq!(row[2].parse::<f64>().unwrap(), 0.1 + 0.2);
        let row: Vec<_> = csv.lines().nth(4).unwrap().split(',').collect();
        assert_eq!(row[2].parse::<f64>().unwrap(), -3e-300);
    }

    #[test]
    fn io_errors_carry_path() {
        let err = emit_csv(&grid(), Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
