//! Spin-1/2 pre- and postselection.
//!
//! The preselected state is `cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩`, the
//! postselected state is `|↑⟩` and the measured observable is `σ_x`, which
//! gives the weak value `e^{iφ} tan(θ/2)` and success probability
//! `cos²(θ/2)`.

use std::f64::consts::{PI, TAU};

use crate::{Complex, Error, Result};

/// Overlaps `|⟨ψ_f|ψ_i⟩|` at or below this are treated as orthogonal.
pub const OVERLAP_EPS: f64 = 1e-12;

/// Canonicalized preselection angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionPair {
    theta: f64,
    phi: f64,
}

impl SelectionPair {
    /// θ is clamped into `[0, π]` and φ wrapped into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::param("theta", "must be finite"));
        }
        if !phi.is_finite() {
            return Err(Error::param("phi", "must be finite"));
        }
        let theta = theta.clamp(0.0, PI);
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `⟨↑|ψ_i⟩ = cos(θ/2)`.
    pub fn overlap(&self) -> f64 {
        (self.theta / 2.0).cos()
    }

    pub fn pre_state(&self) -> [Complex; 2] {
        let half = self.theta / 2.0;
        [Complex::new(half.cos(), 0.0), Complex::from_polar(half.sin(), self.phi)]
    }

    pub fn post_state(&self) -> [Complex; 2] {
        [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]
    }

    /// `e^{iφ} tan(θ/2)`.
    pub fn weak_value(&self) -> Result<Complex> {
        let overlap = self.overlap();
        if overlap.abs() <= OVERLAP_EPS {
            return Err(Error::OrthogonalSelection { overlap });
        }
        Ok(Complex::from_polar((self.theta / 2.0).tan(), self.phi))
    }

    /// `cos²(θ/2)`.
    pub fn postselection_probability(&self) -> f64 {
        (0.5 * (1.0 + self.theta.cos())).clamp(0.0, 1.0)
    }

    /// Weights of the `σ_x = ±1` branches when no postselection is made:
    /// `p± = ½(1 ± sin θ cos φ)`.
    pub fn branch_weights(&self) -> (f64, f64) {
        let bias = self.theta.sin() * self.phi.cos();
        (0.5 * (1.0 + bias), 0.5 * (1.0 - bias))
    }
}

pub type Spinor = [Complex; 2];
pub type Observable = [[Complex; 2]; 2];

pub fn pauli_x() -> Observable {
    let o = Complex::new(0.0, 0.0);
    let l = Complex::new(1.0, 0.0);
    [[o, l], [l, o]]
}

/// `⟨ψ_f|A|ψ_i⟩ / ⟨ψ_f|ψ_i⟩` for an arbitrary qubit observable with `A² = I`.
pub fn weak_value_general(pre: &Spinor, post: &Spinor, observable: &Observable) -> Result<Complex> {
    let mut deviation: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let sq = observable[i][0] * observable[0][j] + observable[i][1] * observable[1][j];
            let id = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((sq - Complex::new(id, 0.0)).norm());
            deviation = deviation.max((observable[i][j] - observable[j][i].conj()).norm());
        }
    }
    if deviation > 1e-12 {
        return Err(Error::InvalidObservable { deviation });
    }

    let overlap = post[0].conj() * pre[0] + post[1].conj() * pre[1];
    if overlap.norm() <= OVERLAP_EPS {
        return Err(Error::OrthogonalSelection {
            overlap: overlap.norm(),
        });
    }
    let a_pre = [
        observable[0][0] * pre[0] + observable[0][1] * pre[1],
        observable[1][0] * pre[0] + observable[1][1] * pre[1],
    ];
    let numerator = post[0].conj() * a_pre[0] + post[1].conj() * a_pre[1];
    Ok(numerator / overlap)
}
