//! Signal-to-noise ratios with and without postselection, their ratio χ,
//! and the postselected Fisher information.
//!
//! The signal is the shift of `⟨X⟩` from its value in the initial pointer,
//! and the noise is the standard deviation of `X` in the final pointer, both
//! taken from the Fock-space oracle:
//!
//! ```text
//! R_p = √(N P_s) |Δ⟨X⟩_post| / ΔX_post,   P_s = cos²(θ/2)
//! R_n = √N |Δ⟨X⟩_mix| / ΔX_mix
//! ```

use crate::fock_oracle::{self, Evolution, FockVector, MomentSet};
use crate::pointers::Pointer;
use crate::{Coupling, Error, Result, SelectionPair};

/// Reference level of χ for a coherent pointer at θ = 7π/9, φ = π/4,
/// s = 1e-5, subtracted in χ′ = (χ − 1.4618)·10⁵. Weak-limit analysis gives
/// 1/(2cos(θ/2)) ≈ 1.46190 there.
pub const CHI_REFERENCE: f64 = 1.4618;

/// Scale applied to `χ − CHI_REFERENCE`.
pub const CHI_PRIME_SCALE: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrReport {
    pub snr_post: f64,
    pub snr_non: f64,
    /// `None` when the non-postselected signal vanishes.
    pub chi: Option<f64>,
    pub chi_prime: Option<f64>,
    pub p_s: f64,
    pub signal_post: f64,
    pub signal_non: f64,
    pub noise_post: f64,
    pub noise_non: f64,
    /// Basis dimension the oracle settled on.
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherReport {
    pub qfi: f64,
    pub fisher_post: f64,
    pub p_s: f64,
    pub dim: usize,
}

fn noise(var: f64, sigma: f64) -> Result<f64> {
    if var < 1e-18 * sigma * sigma {
        return Err(Error::DegenerateNoise { variance: var });
    }
    Ok(var.sqrt())
}

/// `sin θ cos φ`, the non-postselected mean shift in units of `g`.
fn mixture_bias(sel: &SelectionPair) -> f64 {
    sel.theta().sin() * sel.phi().cos()
}

struct NonPost {
    snr: f64,
    signal: f64,
    noise: f64,
}

fn non_postselected(v: &FockVector, initial: &MomentSet, sel: &SelectionPair, cfg: &Coupling) -> Result<NonPost> {
    let sigma = cfg.sigma();
    let mix = fock_oracle::nonpostselected_moments(v, sel, cfg.strength(), sigma)?;
    let noise = noise(mix.var_x, sigma)?;
    if mixture_bias(sel).abs() <= 1e-14 {
        return Ok(NonPost {
            snr: 0.0,
            signal: 0.0,
            noise,
        });
    }
    let signal = mix.mean_x - initial.mean_x;
    Ok(NonPost {
        snr: (cfg.n_runs() as f64).sqrt() * signal.abs() / noise,
        signal,
        noise,
    })
}

/// Both SNRs and their ratio from one oracle run.
pub fn snr_report(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<SnrReport> {
    let sigma = cfg.sigma();
    let s = cfg.strength();
    let p_s = sel.postselection_probability();
    let n = cfg.n_runs() as f64;
    let (report, dim) = fock_oracle::solve(pointer, s, |v| {
        let initial = fock_oracle::moments(v, sigma);
        let outcome = fock_oracle::evolve_and_postselect(v, sel, s)?;
        let fin = fock_oracle::moments(&outcome.postselected_state, sigma);
        let noise_post = noise(fin.var_x, sigma)?;
        let signal_post = fin.mean_x - initial.mean_x;
        let snr_post = (n * p_s).sqrt() * signal_post.abs() / noise_post;
        let non = non_postselected(v, &initial, sel, cfg)?;
        // Built from the single-run SNRs so that N cancels exactly.
        let chi = (non.snr > 0.0).then(|| {
            let post1 = p_s.sqrt() * signal_post.abs() / noise_post;
            let non1 = non.signal.abs() / non.noise;
            post1 / non1
        });
        Ok(SnrReport {
            snr_post,
            snr_non: non.snr,
            chi,
            chi_prime: chi.map(|c| (c - CHI_REFERENCE) * CHI_PRIME_SCALE),
            p_s,
            signal_post,
            signal_non: non.signal,
            noise_post,
            noise_non: non.noise,
            dim: 0,
        })
    })?;
    Ok(SnrReport { dim, ..report })
}

pub fn snr_postselected(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<f64> {
    Ok(snr_report(sel, pointer, cfg)?.snr_post)
}

/// Defined for every θ, including θ = π.
pub fn snr_nonpostselected(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<f64> {
    let sigma = cfg.sigma();
    let (non, _) = fock_oracle::solve(pointer, cfg.strength(), |v| {
        let initial = fock_oracle::moments(v, sigma);
        non_postselected(v, &initial, sel, cfg)
    })?;
    Ok(non.snr)
}

/// `χ = R_p / R_n`.
pub fn ratio_chi(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<f64> {
    snr_report(sel, pointer, cfg)?.chi.ok_or(Error::ChiUndefined)
}

/// `χ′ = (χ − 1.4618)·10⁵`.
pub fn ratio_chi_prime(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<f64> {
    snr_report(sel, pointer, cfg)?.chi_prime.ok_or(Error::ChiUndefined)
}

/// QFI of the postselected pointer and `F_p = P_s F`.
pub fn fisher_report(
    sel: &SelectionPair,
    pointer: &Pointer,
    cfg: &Coupling,
    evolution: Evolution,
) -> Result<FisherReport> {
    let s = cfg.strength();
    let p_s = sel.postselection_probability();
    let (qfi, dim) = fock_oracle::solve(pointer, s, |v| fock_oracle::qfi_postselected(v, sel, s, evolution))?;
    Ok(FisherReport {
        qfi,
        fisher_post: p_s * qfi,
        p_s,
        dim,
    })
}

pub fn qfi(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<f64> {
    Ok(fisher_report(sel, pointer, cfg, Evolution::Full)?.qfi)
}

/// `F_p = cos²(θ/2) F`.
pub fn fisher_postselected(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<f64> {
    Ok(fisher_report(sel, pointer, cfg, Evolution::Full)?.fisher_post)
}

/// `1/(N F)`.
///
/// This is the bound in the form it is usually quoted for this setting. The
/// conventional Cramér-Rao inequality bounds the variance, `Var(s) ≥ 1/(N F)`,
/// so the standard deviation bound is the square root of this value.
pub fn cramer_rao_bound(fisher: f64, n_runs: u64) -> Result<f64> {
    if fisher.is_nan() || fisher <= 0.0 || !fisher.is_finite() || n_runs == 0 {
        return Err(Error::BoundUndefined { fisher, n_runs });
    }
    Ok(1.0 / (n_runs as f64 * fisher))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn sel(t: f64, p: f64) -> SelectionPair {
        SelectionPair::new(t, p).unwrap()
    }

    fn cfg(s: f64) -> Coupling {
        Coupling::from_strength(s, 1.0, 1).unwrap()
    }

    #[test]
    fn zero_strength_has_zero_signal() {
        let p = Pointer::coherent(1.0, 0.3).unwrap();
        let r = snr_report(&sel(2.0, 0.4), &p, &cfg(0.0)).unwrap();
        assert!(r.snr_post < 1e-12);
    }

    #[test]
    fn unit_weak_value_postselected_snr() {
        let s = 0.4;
        let p = Pointer::coherent(0.7, 1.1).unwrap();
        let r = snr_postselected(&sel(FRAC_PI_2, 0.0), &p, &cfg(s)).unwrap();
        assert!((r - s / 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn nonpostselected_examples() {
        let vac = Pointer::coherent(0.0, 0.0).unwrap();
        assert_eq!(snr_nonpostselected(&sel(0.0, 0.0), &vac, &cfg(0.3)).unwrap(), 0.0);
        assert_eq!(snr_nonpostselected(&sel(1.3, FRAC_PI_2), &vac, &cfg(0.3)).unwrap(), 0.0);
        let s = 1e-3;
        let r = snr_nonpostselected(&sel(FRAC_PI_2, 0.0), &vac, &cfg(s)).unwrap();
        assert!((r - s).abs() < 1e-9);
        // still defined at θ = π
        assert!(snr_nonpostselected(&sel(PI, 0.0), &vac, &cfg(s)).unwrap().abs() < 1e-9);
    }

    #[test]
    fn chi_undefined_without_signal() {
        let p = Pointer::coherent(1.0, 0.0).unwrap();
        assert!(matches!(
            ratio_chi(&sel(1.0, FRAC_PI_2), &p, &cfg(1e-3)),
            Err(Error::ChiUndefined)
        ));
    }

    #[test]
    fn coherent_plateau() {
        let p = Pointer::coherent(1.0, PI / 3.0).unwrap();
        let theta = 7.0 * PI / 9.0;
        let chi = ratio_chi(&sel(theta, FRAC_PI_4), &p, &cfg(1e-5)).unwrap();
        assert!((chi - CHI_REFERENCE).abs() < 2e-3);
        assert!((chi - 1.0 / (2.0 * (theta / 2.0).cos())).abs() < 2e-3);
    }

    #[test]
    fn chi_independent_of_runs() {
        let p = Pointer::squeezed(0.8, 1.0).unwrap();
        let sp = sel(2.0, 0.3);
        let a = ratio_chi(&sp, &p, &Coupling::from_strength(1e-3, 1.0, 1).unwrap()).unwrap();
        let b = ratio_chi(&sp, &p, &Coupling::from_strength(1e-3, 1.0, 1000).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fisher_examples() {
        let p = Pointer::coherent(1.0, 0.5).unwrap();
        let f = fisher_postselected(&sel(FRAC_PI_2, 0.0), &p, &cfg(0.2)).unwrap();
        assert!((f - 0.5).abs() < 1e-6);
        assert!((cramer_rao_bound(f, 1).unwrap() - 2.0).abs() < 1e-5);
        let near = fisher_postselected(&sel(PI - 1e-3, 0.3), &p, &cfg(0.01)).unwrap();
        assert!(near.is_finite() && near >= 0.0);
    }

    #[test]
    fn cramer_rao_examples() {
        assert_eq!(cramer_rao_bound(1.0, 1).unwrap(), 1.0);
        assert!((cramer_rao_bound(2.0, 5).unwrap() - 0.1).abs() < 1e-16);
        assert!(matches!(cramer_rao_bound(0.0, 3), Err(Error::BoundUndefined { .. })));
        assert!(cramer_rao_bound(-1.0, 3).is_err());
        assert!(cramer_rao_bound(f64::NAN, 3).is_err());
    }
}
