//! Quantum Fisher information of the normalized postselected pointer with
//! respect to `s`, `F = 4[⟨∂ψ|∂ψ⟩ − |⟨ψ|∂ψ⟩|²]`.
//!
//! The analytic route differentiates the branch superposition using
//! `∂_s D(±s/2) = ±½(a† − a) D(±s/2)` with the same truncated generator that
//! builds `D`, so both routes see identical truncation. The finite-difference
//! route is a plain central difference of the normalized amplitudes.

use super::displacement::displace;
use super::evolve::{postselected_branch, Evolution};
use super::ladder::apply_generator;
use super::vector::{inner, FockVector};
use crate::{Complex, Error, Result, SelectionPair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiReport {
    pub analytic: f64,
    pub numeric: f64,
    pub step: f64,
}

impl QfiReport {
    pub fn tolerance(&self) -> f64 {
        1e-6f64.max(1e-4 * self.analytic.abs())
    }

    pub fn agrees(&self) -> bool {
        (self.analytic - self.numeric).abs() <= self.tolerance()
    }
}

/// `F` from a normalized state and its derivative.
fn fisher(psi: &[Complex], dpsi: &[Complex]) -> f64 {
    let dd = inner(dpsi, dpsi).re;
    let overlap = inner(psi, dpsi);
    4.0 * (dd - overlap.norm_sqr())
}

fn analytic(pointer: &FockVector, sel: &SelectionPair, s: f64, evolution: Evolution) -> Result<f64> {
    let u = postselected_branch(pointer, sel, s, evolution)?;
    let half = sel.theta() / 2.0;
    let c = Complex::new(half.cos(), 0.0);
    let e = Complex::from_polar(half.sin(), sel.phi());
    let (cp, cm) = (0.5 * (c + e), 0.5 * (c - e));
    let one = Complex::new(1.0, 0.0);

    let du = match evolution {
        Evolution::Full => {
            let plus = displace(pointer, Complex::new(s / 2.0, 0.0))?;
            let minus = displace(pointer, Complex::new(-s / 2.0, 0.0))?;
            let gp = FockVector::from_amplitudes(apply_generator(plus.amps(), one));
            let gm = FockVector::from_amplitudes(apply_generator(minus.amps(), one));
            FockVector::combine(cp * 0.5, &gp, -cm * 0.5, &gm)
        }
        Evolution::FirstOrder => {
            let g = FockVector::from_amplitudes(apply_generator(pointer.amps(), one));
            g.scaled((cp - cm) * 0.5)
        }
    };

    // ψ = u/‖u‖, ∂ψ = u'/‖u‖ − u Re⟨u|u'⟩/‖u‖³
    let n2 = u.norm_sqr();
    let n = n2.sqrt();
    let re = u.inner(&du).re;
    let psi: Vec<Complex> = u.amps().iter().map(|a| a / n).collect();
    let dpsi: Vec<Complex> = (0..u.dim().max(du.dim()))
        .map(|k| {
            let uk = u.amps().get(k).copied().unwrap_or_default();
            let dk = du.amps().get(k).copied().unwrap_or_default();
            dk / n - uk * (re / (n2 * n))
        })
        .collect();
    Ok(fisher(&psi, &dpsi))
}

fn numeric(pointer: &FockVector, sel: &SelectionPair, s: f64, h: f64, evolution: Evolution) -> Result<f64> {
    let psi = postselected_branch(pointer, sel, s, evolution)?.normalized();
    let up = postselected_branch(pointer, sel, s + h, evolution)?.normalized();
    let down = postselected_branch(pointer, sel, s - h, evolution)?.normalized();
    let dpsi = FockVector::combine(Complex::new(0.5 / h, 0.0), &up, Complex::new(-0.5 / h, 0.0), &down);
    let mut amps = psi.amps().to_vec();
    amps.resize(dpsi.dim(), Complex::default());
    Ok(fisher(&amps, dpsi.amps()))
}

/// Both routes, without enforcing agreement.
pub fn qfi_report(pointer: &FockVector, sel: &SelectionPair, s: f64, evolution: Evolution) -> Result<QfiReport> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::param("s", format!("QFI needs s >= 0, got {s}")));
    }
    let step = 1e-6f64.max(1e-3 * s);
    Ok(QfiReport {
        analytic: analytic(pointer, sel, s, evolution)?,
        numeric: numeric(pointer, sel, s, step, evolution)?,
        step,
    })
}

/// QFI of the postselected pointer, cross-checked between the analytic and
/// finite-difference derivatives.
pub fn qfi_postselected(pointer: &FockVector, sel: &SelectionPair, s: f64, evolution: Evolution) -> Result<f64> {
    let report = qfi_report(pointer, sel, s, evolution)?;
    if !report.agrees() {
        return Err(Error::DerivativeMismatch {
            analytic: report.analytic,
            numeric: report.numeric,
        });
    }
    Ok(report.analytic.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_oracle::{coherent_vector, moments, squeezed_vacuum_vector};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn sel(t: f64, p: f64) -> SelectionPair {
        SelectionPair::new(t, p).unwrap()
    }

    #[test]
    fn coherent_unit_weak_value_gives_one() {
        for r in [0.0, 1.0, 2.0] {
            let v = coherent_vector(Complex::from_polar(r, 0.7), 64).unwrap();
            let f = qfi_postselected(&v, &sel(FRAC_PI_2, 0.0), 0.3, Evolution::Full).unwrap();
            assert!((f - 1.0).abs() < 1e-6, "r={r}: {f}");
        }
    }

    #[test]
    fn squeezed_unit_weak_value_is_generator_variance() {
        let mut last = 0.0;
        for eta in [0.0, 0.5, 1.0] {
            let v = squeezed_vacuum_vector(Complex::new(eta, 0.0), 200).unwrap();
            let f = qfi_postselected(&v, &sel(FRAC_PI_2, 0.0), 0.2, Evolution::Full).unwrap();
            // (a − a†)/(2i) = −σP for σ = 1
            let var = moments(&v, 1.0).var_p;
            assert!((f - 4.0 * var).abs() < 1e-8, "eta={eta}");
            assert!(f > last);
            last = f;
        }
    }

    #[test]
    fn routes_agree_and_nonnegative() {
        let v = squeezed_vacuum_vector(Complex::from_polar(1.0, FRAC_PI_4), 200).unwrap();
        for theta in [PI / 6.0, FRAC_PI_2, 7.0 * PI / 9.0] {
            for s in [0.0, 0.01, 0.5, 2.0] {
                for ev in [Evolution::Full, Evolution::FirstOrder] {
                    let r = qfi_report(&v, &sel(theta, FRAC_PI_4), s, ev).unwrap();
                    assert!(r.agrees(), "{theta} {s} {ev:?}: {r:?}");
                    assert!(r.analytic >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn negative_strength_rejected() {
        let v = FockVector::vacuum(32);
        assert!(qfi_postselected(&v, &sel(1.0, 0.0), -0.1, Evolution::Full).is_err());
    }
}
