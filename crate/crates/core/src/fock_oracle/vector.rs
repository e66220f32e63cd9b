use crate::{Complex, Error, Result};

/// Largest tail mass for which a truncated state counts as converged.
pub const TAIL_TOL: f64 = 1e-12;

/// Width of the top band whose mass certifies a truncation.
pub fn tail_band(dim: usize) -> usize {
    (dim / 4).max(16).min(dim / 2).max(1)
}

/// Extra basis states added below the top before applying a displacement.
pub fn padding(dim: usize) -> usize {
    (dim / 4).max(16)
}

/// Amplitudes `c_n`, `n = 0..dim`, in the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex>,
    tail_mass: f64,
}

impl FockVector {
    pub fn from_amplitudes(amps: Vec<Complex>) -> Self {
        assert!(!amps.is_empty(), "empty Fock vector");
        let band = tail_band(amps.len());
        let tail_mass = amps[amps.len() - band..].iter().map(|c| c.norm_sqr()).sum();
        Self { amps, tail_mass }
    }

    pub fn vacuum(dim: usize) -> Self {
        let mut amps = vec![Complex::new(0.0, 0.0); dim.max(1)];
        amps[0] = Complex::new(1.0, 0.0);
        Self::from_amplitudes(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex] {
        &self.amps
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn is_converged(&self) -> bool {
        self.tail_mass <= TAIL_TOL
    }

    pub(crate) fn certify(self) -> Result<Self> {
        if self.is_converged() {
            Ok(self)
        } else {
            Err(Error::TruncationInsufficient {
                dim: self.dim(),
                tail_mass: self.tail_mass,
            })
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        self.scaled(Complex::new(1.0 / n, 0.0))
    }

    pub fn scaled(&self, k: Complex) -> Self {
        Self::from_amplitudes(self.amps.iter().map(|c| c * k).collect())
    }

    /// `⟨self|other⟩`; the shorter vector is implicitly zero-padded.
    pub fn inner(&self, other: &FockVector) -> Complex {
        inner(&self.amps, &other.amps)
    }

    /// Copy embedded in a larger basis.
    pub fn padded(&self, dim: usize) -> Self {
        let mut amps = self.amps.clone();
        amps.resize(dim.max(self.dim()), Complex::new(0.0, 0.0));
        Self::from_amplitudes(amps)
    }

    /// `a·self + b·other`, in the larger of the two bases.
    pub fn combine(a: Complex, x: &FockVector, b: Complex, y: &FockVector) -> Self {
        let dim = x.dim().max(y.dim());
        let zero = Complex::new(0.0, 0.0);
        let amps = (0..dim)
            .map(|n| a * x.amps.get(n).copied().unwrap_or(zero) + b * y.amps.get(n).copied().unwrap_or(zero))
            .collect();
        Self::from_amplitudes(amps)
    }

    /// Mean photon number, `Σ n|c_n|² / Σ|c_n|²`.
    pub fn mean_photons(&self) -> f64 {
        let w: f64 = self.amps.iter().enumerate().map(|(n, c)| n as f64 * c.norm_sqr()).sum();
        w / self.norm_sqr()
    }
}

pub(crate) fn inner(x: &[Complex], y: &[Complex]) -> Complex {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// `|α⟩`, via `c_n = c_{n−1} α/√n` from `c_0 = e^{−|α|²/2}`.
pub fn coherent_vector(alpha: Complex, dim: usize) -> Result<FockVector> {
    FockVector::from_amplitudes(coherent_amps(alpha, dim)).certify()
}

fn coherent_amps(alpha: Complex, dim: usize) -> Vec<Complex> {
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        amps.push(c);
    }
    amps
}

/// `S(ξ)|0⟩` with `S(ξ) = exp(½ξ* a² − ½ξ a†²)`:
/// `c_{2n} = (−e^{iδ} tanh η)ⁿ √((2n)!) / (2ⁿ n! √cosh η)`, odd amplitudes zero.
pub fn squeezed_vacuum_vector(xi: Complex, dim: usize) -> Result<FockVector> {
    let eta = xi.norm();
    let ratio = if eta == 0.0 {
        Complex::new(0.0, 0.0)
    } else {
        -Complex::from_polar(eta.tanh(), xi.arg())
    };
    let zero = Complex::new(0.0, 0.0);
    let mut amps = vec![zero; dim.max(1)];
    let mut c = Complex::new(1.0 / eta.cosh().sqrt(), 0.0);
    amps[0] = c;
    let mut n = 1;
    while 2 * n < dim {
        let k = 2 * n;
        c = c * ratio * ((k - 1) as f64 / k as f64).sqrt();
        amps[k] = c;
        n += 1;
    }
    FockVector::from_amplitudes(amps).certify()
}

/// `K(|α⟩ + |−α⟩)`; odd amplitudes are set to exactly zero.
pub fn even_cat_vector(alpha: Complex, dim: usize) -> Result<FockVector> {
    let k = 1.0 / (2.0 + 2.0 * (-2.0 * alpha.norm_sqr()).exp()).sqrt();
    let amps = coherent_amps(alpha, dim.max(1))
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            if n % 2 == 0 {
                c * (2.0 * k)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
        .collect();
    FockVector::from_amplitudes(amps).certify()
}
