//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration or usage error,
//! 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::sweep::{self, Execution, JobConfig, Provenance};
use crate::{metrics, pointers, selftest, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "weaklab",
    version,
    about = "Postselected weak measurement with non-classical pointer states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form pointer means and shifts after postselection.
    Shift(Params),
    /// Postselected and non-postselected signal-to-noise ratios.
    Snr(Params),
    /// SNR ratio χ and the offset χ′.
    Chi(Params),
    /// Quantum and postselected Fisher information, with the Cramér-Rao bound.
    Qfi(Params),
    /// Evaluate a quantity over a two-axis grid and write CSV + JSON.
    Sweep(SweepArgs),
    /// Run the invariant suite.
    Selftest,
}

#[derive(Debug, Clone, Default, Args)]
struct Params {
    /// Preselection polar angle θ.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Relative phase φ.
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Coupling strength s = g/σ.
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Coupling g (alternative to --s).
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Pointer width σ.
    #[arg(long)]
    sigma: Option<f64>,
    /// Number of runs N.
    #[arg(long)]
    n_runs: Option<u64>,
    /// coherent | squeezed | cat
    #[arg(long)]
    pointer: Option<String>,
    /// Coherent or cat amplitude |α|.
    #[arg(long)]
    r: Option<f64>,
    /// Coherent or cat phase.
    #[arg(long, allow_negative_numbers = true)]
    phi_c: Option<f64>,
    /// Squeezing magnitude η.
    #[arg(long)]
    eta: Option<f64>,
    /// Squeezing phase δ.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// full | first-order (Fisher quantities only).
    #[arg(long)]
    evolution: Option<String>,
}

impl Params {
    fn config(&self) -> JobConfig {
        JobConfig {
            pointer: self.pointer.clone(),
            theta: self.theta,
            phi: self.phi,
            s: self.s,
            g: self.g,
            sigma: self.sigma,
            n_runs: self.n_runs,
            r: self.r,
            phi_c: self.phi_c,
            eta: self.eta,
            delta: self.delta,
            evolution: self.evolution.clone(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Flat key-value config (TOML) or a previous JSON sidecar.
    #[arg(long)]
    config: Option<PathBuf>,
    /// shift_x | shift_p | snr_post | snr_non | chi | chi_prime | qfi | fisher_post
    #[arg(long)]
    quantity: Option<String>,
    /// Rows, as name:min:max:steps.
    #[arg(long)]
    axis1: Option<String>,
    /// Columns, as name:min:max:steps.
    #[arg(long)]
    axis2: Option<String>,
    /// Output path stem; writes <stem>.csv and <stem>.json.
    #[arg(long)]
    output: Option<String>,
    /// Evaluate cells on one thread.
    #[arg(long)]
    serial: bool,
    #[command(flatten)]
    params: Params,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::ConfigInvalid { .. }
        | Error::InvalidParameter { .. }
        | Error::InvalidObservable { .. }
        | Error::OrthogonalSelection { .. } => EXIT_CONFIG,
        Error::TruncationInsufficient { .. }
        | Error::DerivativeMismatch { .. }
        | Error::DegenerateNoise { .. }
        | Error::ChiUndefined
        | Error::BoundUndefined { .. } => EXIT_NUMERICAL,
    }
}

fn line(out: &mut dyn Write, key: &str, v: f64) {
    let _ = writeln!(out, "{key:<20} {v:.16e}");
}

fn point(p: &Params) -> Result<(crate::SelectionPair, crate::Pointer, crate::Coupling)> {
    let c = p.config();
    Ok((c.selection()?, c.pointer()?, c.coupling()?))
}

fn shift(p: &Params, out: &mut dyn Write) -> Result<()> {
    let (sel, ptr, cfg) = point(p)?;
    let m = pointers::means(&sel, &ptr, &cfg)?;
    let d = pointers::shift(&sel, &ptr, &cfg)?;
    let aw = sel.weak_value()?;
    line(out, "weak_value_re", aw.re);
    line(out, "weak_value_im", aw.im);
    line(out, "p_s", sel.postselection_probability());
    line(out, "norm", pointers::norm_coefficient(&sel, &ptr, &cfg)?);
    line(out, "mean_x", m.x);
    line(out, "mean_x_over_sigma", m.x_over_sigma);
    line(out, "mean_p", m.p);
    line(out, "shift_x", d.x);
    line(out, "shift_x_over_sigma", d.x_over_sigma);
    line(out, "shift_p", d.p);
    Ok(())
}

fn snr(p: &Params, out: &mut dyn Write) -> Result<()> {
    let (sel, ptr, cfg) = point(p)?;
    let r = metrics::snr_report(&sel, &ptr, &cfg)?;
    line(out, "snr_post", r.snr_post);
    line(out, "snr_non", r.snr_non);
    line(out, "signal_post", r.signal_post);
    line(out, "noise_post", r.noise_post);
    line(out, "signal_non", r.signal_non);
    line(out, "noise_non", r.noise_non);
    line(out, "p_s", r.p_s);
    let _ = writeln!(out, "{:<20} {}", "dim", r.dim);
    Ok(())
}

fn chi(p: &Params, out: &mut dyn Write) -> Result<()> {
    let (sel, ptr, cfg) = point(p)?;
    let r = metrics::snr_report(&sel, &ptr, &cfg)?;
    let chi = r.chi.ok_or(Error::ChiUndefined)?;
    line(out, "chi", chi);
    line(out, "chi_prime", r.chi_prime.unwrap_or(f64::NAN));
    line(out, "snr_post", r.snr_post);
    line(out, "snr_non", r.snr_non);
    Ok(())
}

fn qfi(p: &Params, out: &mut dyn Write) -> Result<()> {
    let c = p.config();
    let (sel, ptr, cfg) = point(p)?;
    let r = metrics::fisher_report(&sel, &ptr, &cfg, c.evolution()?)?;
    line(out, "qfi", r.qfi);
    line(out, "fisher_post", r.fisher_post);
    line(out, "p_s", r.p_s);
    line(
        out,
        "cramer_rao_bound",
        metrics::cramer_rao_bound(r.fisher_post, cfg.n_runs())?,
    );
    let _ = writeln!(out, "{:<20} {}", "dim", r.dim);
    Ok(())
}

fn run_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let base = match &a.config {
        Some(path) => JobConfig::from_file(path)?,
        None => JobConfig::default(),
    };
    let mut flags = a.params.config();
    flags.quantity = a.quantity.clone();
    flags.axis1 = a.axis1.clone();
    flags.axis2 = a.axis2.clone();
    flags.output = a.output.clone();
    let job = base.overlay(&flags).into_job()?;
    let execution = if a.serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let start = Instant::now();
    let grid = sweep::run_job_with(&job, execution)?;
    let provenance = Provenance::from_result(&grid, start.elapsed());
    let csv = sweep::emit_csv(&grid, &PathBuf::from(format!("{}.csv", job.output)))?;
    let meta = sweep::emit_meta(&job, &provenance, &PathBuf::from(format!("{}.json", job.output)))?;
    let _ = writeln!(
        out,
        "{} cells ({} flagged) in {:.2}s -> {}, {}",
        provenance.cells,
        provenance.failed_cells,
        provenance.wall_time.as_secs_f64(),
        csv.display(),
        meta.display()
    );
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Shift(p) => shift(p, out),
        Command::Snr(p) => snr(p, out),
        Command::Chi(p) => chi(p, out),
        Command::Qfi(p) => qfi(p, out),
        Command::Sweep(a) => run_sweep(a, out),
        Command::Selftest => {
            let outcomes = selftest::run();
            let _ = write!(out, "{}", selftest::render(&outcomes));
            return if selftest::all_passed(&outcomes) {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            };
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main_with_args() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
