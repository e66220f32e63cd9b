//! Invariant suite behind `weaklab selftest`.
//!
//! Each check evaluates one invariant over a parameter grid and reports the
//! worst deviation against its tolerance. A panic inside a check counts as a
//! failure, not a crash.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::fock_oracle::{self, Evolution, FockVector};
use crate::pointers::{self, Family, Pointer};
use crate::selection::{self, Spinor};
use crate::sweep::{self, Execution, JobConfig};
use crate::{metrics, Complex, Coupling, Result, SelectionPair};

/// One point of the closed-form/oracle cross-validation grid.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub sel: SelectionPair,
    pub pointer: Pointer,
    pub s: f64,
}

pub const GRID_THETAS: [f64; 3] = [FRAC_PI_6, FRAC_PI_2, 7.0 * PI / 9.0];
pub const GRID_PHIS: [f64; 3] = [0.0, FRAC_PI_4, FRAC_PI_2];
pub const GRID_STRENGTHS: [f64; 5] = [1e-5, 0.1, 0.5, 1.0, 2.0];
pub const GRID_MODULI: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const GRID_ANGLES: [f64; 4] = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4];

/// θ × φ × s × family × modulus × angle, 2160 points.
pub fn cross_validation_grid() -> Vec<GridPoint> {
    let mut out = Vec::new();
    for &theta in &GRID_THETAS {
        for &phi in &GRID_PHIS {
            let sel = SelectionPair::new(theta, phi).expect("grid angles are valid");
            for &s in &GRID_STRENGTHS {
                for family in [Family::Coherent, Family::Squeezed, Family::Cat] {
                    for &m in &GRID_MODULI {
                        for &a in &GRID_ANGLES {
                            let pointer = Pointer::from_family(family, m, a).expect("grid pointers are valid");
                            out.push(GridPoint { sel, pointer, s });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Worst-case deviations of the closed-form means from the oracle at one
/// grid point, in units where σ = 1.
#[derive(Debug, Clone, Copy)]
pub struct OracleComparison {
    pub point: GridPoint,
    pub dx: f64,
    pub dp: f64,
    /// Same as `dp`, for the unit-prefactor squeezed momentum form.
    pub dp_unit_prefactor: Option<f64>,
    pub dim: usize,
}

pub fn compare_with_oracle(point: &GridPoint) -> Result<OracleComparison> {
    let cfg = Coupling::from_strength(point.s, 1.0, 1)?;
    let m = pointers::means(&point.sel, &point.pointer, &cfg)?;
    let literal = match &point.pointer {
        Pointer::SqueezedVacuum(q) => Some(pointers::squeezed_mean_p_with(
            &point.sel,
            q,
            &cfg,
            pointers::SqueezedMomentum::UnitPrefactor,
        )?),
        _ => None,
    };
    let (fin, dim) = fock_oracle::solve(&point.pointer, point.s, |v| {
        let out = fock_oracle::evolve_and_postselect(v, &point.sel, point.s)?;
        Ok(fock_oracle::moments(&out.postselected_state, 1.0))
    })?;
    Ok(OracleComparison {
        point: *point,
        dx: (m.x - fin.mean_x).abs(),
        dp: (m.p - fin.mean_p).abs(),
        dp_unit_prefactor: literal.map(|p| (p - fin.mean_p).abs()),
        dim,
    })
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type CheckResult = std::result::Result<String, String>;

/// Passes when `worst ≤ tol`.
fn bound(worst: f64, tol: f64) -> CheckResult {
    let msg = format!("max deviation {worst:.2e} (tol {tol:.0e})");
    if worst <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn fold_max(
    values: impl ParallelIterator<Item = std::result::Result<f64, String>>,
) -> std::result::Result<f64, String> {
    values.try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

fn sel(theta: f64, phi: f64) -> SelectionPair {
    SelectionPair::new(theta, phi).expect("valid angles")
}

fn coupling(s: f64) -> Coupling {
    Coupling::from_strength(s, 1.0, 1).expect("valid coupling")
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

// selection

fn weak_value_modulus_phase() -> CheckResult {
    let mut worst = 0.0f64;
    for i in 0..200 {
        let theta = PI * i as f64 / 200.0;
        for j in 0..16 {
            let phi = 2.0 * PI * j as f64 / 16.0;
            let aw = sel(theta, phi).weak_value().map_err(err)?;
            let t = (theta / 2.0).tan();
            worst = worst.max((aw.norm() - t).abs() / t.max(1.0));
            if t > 1e-3 {
                let d = (aw.arg() - phi).rem_euclid(2.0 * PI);
                worst = worst.max(d.min(2.0 * PI - d));
            }
        }
    }
    bound(worst, 1e-13)
}

fn weak_value_general_reduces() -> CheckResult {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let theta = 0.95 * PI * i as f64 / 19.0;
        for j in 0..20 {
            let phi = 2.0 * PI * j as f64 / 20.0;
            let sp = sel(theta, phi);
            let pre: Spinor = sp.pre_state();
            let post: Spinor = sp.post_state();
            let general = selection::weak_value_general(&pre, &post, &selection::pauli_x()).map_err(err)?;
            worst = worst.max((general - sp.weak_value().map_err(err)?).norm());
        }
    }
    bound(worst, 1e-13)
}

fn postselection_complement() -> CheckResult {
    let mut worst = 0.0f64;
    for i in 0..=100 {
        let theta = PI * i as f64 / 100.0;
        let a = sel(theta, 0.0).postselection_probability();
        let b = sel(PI - theta, 0.0).postselection_probability();
        worst = worst.max((a + b - 1.0).abs());
    }
    bound(worst, 1e-15)
}

// pointers

fn final_state_normalization() -> CheckResult {
    let grid = cross_validation_grid();
    let closed = fold_max(grid.par_iter().map(|pt| {
        let c = pointers::norm_coefficient(&pt.sel, &pt.pointer, &coupling(pt.s)).map_err(err)?;
        let n = pointers::branch_norm_sq(&pt.sel, &pt.pointer, pt.s).map_err(err)?;
        Ok((c * c * n - 1.0).abs())
    }))?;
    let oracle = fold_max(grid.par_iter().map(|pt| {
        let (dev, _) = fock_oracle::solve(&pt.pointer, pt.s, |v| {
            let out = fock_oracle::evolve_and_postselect(v, &pt.sel, pt.s)?;
            Ok((out.postselected_state.norm_sqr().sqrt() - 1.0).abs())
        })
        .map_err(err)?;
        Ok(dev)
    }))?;
    bound(closed.max(oracle), 1e-12)
}

fn gaussian_limit_reduction() -> CheckResult {
    let mut worst = 0.0f64;
    for &theta in &GRID_THETAS {
        for &phi in &[0.0, FRAC_PI_4, FRAC_PI_2] {
            let sp = sel(theta, phi);
            for k in 0..10 {
                let cfg = coupling(2.0 * k as f64 / 9.0);
                let x = pointers::gaussian_limit_mean_x(&sp, &cfg).map_err(err)?;
                let p = pointers::gaussian_limit_mean_p(&sp, &cfg).map_err(err)?;
                for family in [Family::Coherent, Family::Squeezed, Family::Cat] {
                    let ptr = Pointer::from_family(family, 0.0, 0.7).map_err(err)?;
                    let m = pointers::means(&sp, &ptr, &cfg).map_err(err)?;
                    worst = worst.max((m.x - x).abs()).max((m.p - p).abs());
                }
            }
        }
    }
    bound(worst, 1e-12)
}

fn oracle_equivalence() -> CheckResult {
    let grid = cross_validation_grid();
    let worst = fold_max(grid.par_iter().map(|pt| {
        let c = compare_with_oracle(pt).map_err(err)?;
        Ok(c.dx.max(c.dp))
    }))?;
    bound(worst, 1e-8).map(|m| format!("{m} over {} points", grid.len()))
}

// fock_oracle

fn parity_exact() -> CheckResult {
    let mut checked = 0;
    for &m in &[0.3, 1.0, 2.0] {
        for &a in &GRID_ANGLES {
            let mut vs = Vec::new();
            for ptr in [Pointer::squeezed(m, a), Pointer::even_cat(m, a)] {
                let (v, _) = fock_oracle::solve(&ptr.map_err(err)?, 0.0, |v| Ok(v.clone())).map_err(err)?;
                vs.push(v);
            }
            for v in &vs {
                for (n, c) in v.amps().iter().enumerate().skip(1).step_by(2) {
                    if c.re.to_bits() != 0 || c.im.to_bits() != 0 {
                        return Err(format!("odd amplitude {n} = {c}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} odd amplitudes are +0.0"))
}

fn commutator_interior() -> CheckResult {
    let mut worst = 0.0f64;
    for &(dim, sigma) in &[(16, 1.0), (64, 1.0), (64, 0.3)] {
        let (x, p) = fock_oracle::ladder_matrices(dim, sigma);
        let c = &x * &p - &p * &x;
        for i in 0..dim - 2 {
            for j in 0..dim - 2 {
                let want = if i == j {
                    Complex::new(0.0, 1.0)
                } else {
                    Complex::new(0.0, 0.0)
                };
                worst = worst.max((c[(i, j)] - want).norm());
            }
        }
    }
    bound(worst, 1e-12)
}

fn uncertainty_bound() -> CheckResult {
    let grid = cross_validation_grid();
    let lowest = grid
        .par_iter()
        .map(|pt| {
            let (m, _) = fock_oracle::solve(&pt.pointer, pt.s, |v| {
                let out = fock_oracle::evolve_and_postselect(v, &pt.sel, pt.s)?;
                let a = fock_oracle::moments(&out.postselected_state, 1.0);
                let b = fock_oracle::moments(v, 1.0);
                Ok(a.uncertainty_product().min(b.uncertainty_product()))
            })
            .map_err(err)?;
            Ok::<f64, String>(m)
        })
        .try_reduce(|| f64::INFINITY, |a, b| Ok(a.min(b)))?;
    let floor = 0.25 * (1.0 - 1e-9);
    let msg = format!("min var_x·var_p = {lowest:.12} (floor {floor:.12})");
    if lowest >= floor {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn norm_preservation() -> CheckResult {
    let grid = cross_validation_grid();
    let worst = fold_max(grid.par_iter().map(|pt| {
        let c = pointers::norm_coefficient(&pt.sel, &pt.pointer, &coupling(pt.s)).map_err(err)?;
        let (prob, _) = fock_oracle::solve(&pt.pointer, pt.s, |v| {
            Ok(fock_oracle::evolve_and_postselect(v, &pt.sel, pt.s)?.postselection_prob_exact)
        })
        .map_err(err)?;
        Ok((prob * c * c - pt.sel.postselection_probability()).abs())
    }))?;
    bound(worst, 1e-10)
}

fn truncation_doubling() -> CheckResult {
    let grid: Vec<_> = cross_validation_grid().into_iter().filter(|p| p.s >= 0.1).collect();
    let worst = fold_max(grid.par_iter().map(|pt| {
        let run = |v: &FockVector| {
            let out = fock_oracle::evolve_and_postselect(v, &pt.sel, pt.s)?;
            Ok(fock_oracle::moments(&out.postselected_state, 1.0))
        };
        let (a, dim) = fock_oracle::solve(&pt.pointer, pt.s, run).map_err(err)?;
        let v = fock_oracle::pointer_vector(&pt.pointer, 2 * dim).map_err(err)?;
        let b = run(&v).map_err(err)?;
        Ok([
            a.mean_x - b.mean_x,
            a.mean_p - b.mean_p,
            a.mean_x2 - b.mean_x2,
            a.mean_p2 - b.mean_p2,
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs())))
    }))?;
    bound(worst, 1e-10)
}

fn qfi_generator_variance() -> CheckResult {
    let sp = sel(FRAC_PI_2, 0.0);
    let mut worst = 0.0f64;
    for (ptr, s) in [
        (Pointer::coherent(0.0, 0.0), 0.01),
        (Pointer::coherent(1.0, 0.3), 0.5),
        (Pointer::coherent(2.0, 1.2), 1.0),
        (Pointer::squeezed(0.5, 0.0), 0.1),
        (Pointer::squeezed(1.0, 0.0), 0.1),
    ] {
        let ptr = ptr.map_err(err)?;
        let (dev, _) = fock_oracle::solve(&ptr, s, |v| {
            let f = fock_oracle::qfi_postselected(v, &sp, s, Evolution::Full)?;
            let want = 4.0 * fock_oracle::moments(v, 1.0).var_p;
            Ok((f - want).abs() / want.max(1.0))
        })
        .map_err(err)?;
        worst = worst.max(dev);
    }
    bound(worst, 1e-6)
}

fn qfi_routes_agree() -> CheckResult {
    let grid: Vec<_> = cross_validation_grid()
        .into_iter()
        .filter(|p| p.s != 0.5 && p.pointer_angle_index() % 2 == 0)
        .collect();
    let failures: Vec<String> = grid
        .par_iter()
        .filter_map(|pt| {
            let r = fock_oracle::solve(&pt.pointer, pt.s, |v| {
                fock_oracle::qfi_report(v, &pt.sel, pt.s, Evolution::Full)
            });
            match r {
                Ok((rep, _)) if rep.agrees() && rep.analytic >= 0.0 => None,
                Ok((rep, _)) => Some(format!("{pt:?}: {} vs {}", rep.analytic, rep.numeric)),
                Err(e) => Some(format!("{pt:?}: {e}")),
            }
        })
        .collect();
    match failures.first() {
        None => Ok(format!(
            "{} points, F ≥ 0 and routes within max(1e-6, 1e-4·F)",
            grid.len()
        )),
        Some(f) => Err(format!("{} failures, first {f}", failures.len())),
    }
}

impl GridPoint {
    fn pointer_angle_index(&self) -> usize {
        let angle = match self.pointer {
            Pointer::Coherent(c) => c.phi_c,
            Pointer::EvenCat(c) => c.phi_c,
            Pointer::SqueezedVacuum(q) => q.delta,
        };
        GRID_ANGLES.iter().position(|&a| (a - angle).abs() < 1e-12).unwrap_or(0)
    }
}

// metrics

fn chi_run_invariance() -> CheckResult {
    for (ptr, sp) in [
        (Pointer::coherent(1.0, FRAC_PI_3), sel(7.0 * PI / 9.0, FRAC_PI_4)),
        (Pointer::squeezed(1.0, 1.0), sel(FRAC_PI_2, 0.3)),
        (Pointer::even_cat(1.5, 0.4), sel(2.0, 0.0)),
    ] {
        let ptr = ptr.map_err(err)?;
        let base = metrics::ratio_chi(&sp, &ptr, &coupling(1e-3)).map_err(err)?;
        for n in [2, 7, 1000] {
            let cfg = Coupling::from_strength(1e-3, 1.0, n).map_err(err)?;
            let chi = metrics::ratio_chi(&sp, &ptr, &cfg).map_err(err)?;
            if chi != base {
                return Err(format!("chi(N=1) = {base} but chi(N={n}) = {chi}"));
            }
        }
    }
    Ok("bitwise equal for N ∈ {1, 2, 7, 1000}".into())
}

fn chi_coupling_scaling() -> CheckResult {
    let mut worst = 0.0f64;
    for (ptr, sp) in [
        (Pointer::coherent(1.0, FRAC_PI_3), sel(7.0 * PI / 9.0, FRAC_PI_4)),
        (Pointer::squeezed(1.0, FRAC_PI_4), sel(7.0 * PI / 9.0, FRAC_PI_4)),
        (Pointer::even_cat(1.0, FRAC_PI_4), sel(FRAC_PI_2, 0.2)),
    ] {
        let ptr = ptr.map_err(err)?;
        let cfg = coupling(1e-5);
        let a = metrics::ratio_chi(&sp, &ptr, &cfg).map_err(err)?;
        let b = metrics::ratio_chi(&sp, &ptr, &cfg.with_g(cfg.g() / 10.0).map_err(err)?).map_err(err)?;
        worst = worst.max((a - b).abs());
    }
    bound(worst, 1e-4)
}

fn chi_coherent_weak_limit() -> CheckResult {
    let mut worst = 0.0f64;
    for &theta in &[FRAC_PI_3, FRAC_PI_2, 7.0 * PI / 9.0] {
        for &(r, phi_c) in &[(0.0, 0.0), (1.0, FRAC_PI_3), (2.0, 2.5)] {
            let sp = sel(theta, FRAC_PI_4);
            let ptr = Pointer::coherent(r, phi_c).map_err(err)?;
            let chi = metrics::ratio_chi(&sp, &ptr, &coupling(1e-5)).map_err(err)?;
            worst = worst.max((chi - 1.0 / (2.0 * (theta / 2.0).cos())).abs());
        }
    }
    bound(worst, 1e-3)
}

fn fisher_ordering() -> CheckResult {
    let grid: Vec<_> = cross_validation_grid()
        .into_iter()
        .filter(|p| p.s == 0.1 && p.pointer_angle_index() == 1)
        .collect();
    let worst = fold_max(grid.par_iter().map(|pt| {
        let r = metrics::fisher_report(&pt.sel, &pt.pointer, &coupling(pt.s), Evolution::Full).map_err(err)?;
        if r.fisher_post < 0.0 {
            return Err(format!("negative F_p {}", r.fisher_post));
        }
        Ok((r.fisher_post - r.qfi).max(0.0))
    }))?;
    let bound_ok = metrics::cramer_rao_bound(2.0, 5).map_err(err)?;
    if (bound_ok - 0.1).abs() > 1e-15 {
        return Err(format!("cramer_rao_bound(2, 5) = {bound_ok}"));
    }
    bound(worst, 0.0).map(|m| format!("F_p − F ≤ 0 ({m})"))
}

// sweeps

fn sweep_order_independence() -> CheckResult {
    let job = JobConfig {
        quantity: Some("chi".into()),
        pointer: Some("cat".into()),
        axis1: Some("r:0:2:4".into()),
        axis2: Some("phi-c:0:3.141592653589793:5".into()),
        ..Default::default()
    }
    .into_job()
    .map_err(err)?;
    let a = sweep::render_csv(&sweep::run_job_with(&job, Execution::Serial).map_err(err)?);
    let b = sweep::render_csv(&sweep::run_job_with(&job, Execution::Parallel).map_err(err)?);
    if a != b {
        return Err("serial and parallel CSV differ".into());
    }
    let json = serde_json::to_string(&job.to_config()).map_err(|e| e.to_string())?;
    let back: JobConfig = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    if back.into_job().map_err(err)? != job {
        return Err("sidecar config does not reproduce the job".into());
    }
    Ok(format!("{} bytes identical; config round-trips", a.len()))
}

type CheckFn = fn() -> CheckResult;

const CHECKS: &[(&str, &str, CheckFn)] = &[
    (
        "selection",
        "weak value modulus tan(θ/2), phase φ",
        weak_value_modulus_phase,
    ),
    (
        "selection",
        "general weak value reduces (20×20)",
        weak_value_general_reduces,
    ),
    ("selection", "P_s(θ) + P_s(π−θ) = 1", postselection_complement),
    ("pointers", "final states normalized", final_state_normalization),
    ("pointers", "Gaussian-limit reduction", gaussian_limit_reduction),
    ("pointers", "closed forms match oracle", oracle_equivalence),
    ("fock_oracle", "even parity exact", parity_exact),
    ("fock_oracle", "[X,P] = i on interior block", commutator_interior),
    ("fock_oracle", "uncertainty product ≥ 1/4", uncertainty_bound),
    ("fock_oracle", "branch norm matches closed form", norm_preservation),
    ("fock_oracle", "truncation doubling stable", truncation_doubling),
    ("fock_oracle", "QFI equals generator variance", qfi_generator_variance),
    ("fock_oracle", "QFI analytic vs finite difference", qfi_routes_agree),
    ("metrics", "chi invariant under N", chi_run_invariance),
    ("metrics", "chi invariant under g → g/10", chi_coupling_scaling),
    ("metrics", "coherent chi weak limit", chi_coherent_weak_limit),
    ("metrics", "0 ≤ F_p ≤ F", fisher_ordering),
    (
        "sweeps",
        "serial = parallel, config round-trip",
        sweep_order_independence,
    ),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.1).collect()
}

pub fn run() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(module, name, f)| {
            let start = Instant::now();
            let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Err(format!("panicked: {msg}"))
            });
            let (passed, detail) = match result {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome {
                module,
                name,
                passed,
                detail,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

pub fn render(outcomes: &[CheckOutcome]) -> String {
    let name_w = outcomes.iter().map(|o| o.name.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for o in outcomes {
        let pad = name_w - o.name.chars().count();
        let _ = writeln!(
            out,
            "{} {:<12} {}{}  {:>7.2}s  {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.module,
            o.name,
            " ".repeat(pad),
            o.elapsed.as_secs_f64(),
            o.detail
        );
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", outcomes.len());
    out
}
