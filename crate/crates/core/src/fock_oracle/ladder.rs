//! Quadrature moments through ladder-operator actions on amplitudes.
//!
//! With `X = σ(a + a†)` and `P = i(a† − a)/(2σ)`:
//!
//! ```text
//! ⟨X⟩  = 2σ Re⟨a⟩                 ⟨P⟩  = Im⟨a⟩ / σ
//! ⟨X²⟩ = σ²(2 Re⟨a²⟩ + 2⟨n⟩ + 1)   ⟨P²⟩ = (2⟨n⟩ + 1 − 2 Re⟨a²⟩) / (4σ²)
//! ```
//!
//! The sums treat the state as living in the untruncated space, so they are
//! exact for the given amplitudes.

use nalgebra::DMatrix;

use super::FockVector;
use crate::Complex;

/// First and second quadrature moments of a (possibly mixed) pointer state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
    pub norm: f64,
    pub var_x: f64,
    pub var_p: f64,
}

impl MomentSet {
    pub fn new(mean_x: f64, mean_p: f64, mean_x2: f64, mean_p2: f64, norm: f64) -> Self {
        Self {
            mean_x,
            mean_p,
            mean_x2,
            mean_p2,
            norm,
            var_x: (mean_x2 - mean_x * mean_x).max(0.0),
            var_p: (mean_p2 - mean_p * mean_p).max(0.0),
        }
    }

    /// `p·self + (1−p)·other` for a two-component mixture.
    pub fn mix(p: f64, a: &MomentSet, q: f64, b: &MomentSet) -> Self {
        Self::new(
            p * a.mean_x + q * b.mean_x,
            p * a.mean_p + q * b.mean_p,
            p * a.mean_x2 + q * b.mean_x2,
            p * a.mean_p2 + q * b.mean_p2,
            p * a.norm + q * b.norm,
        )
    }

    pub fn uncertainty_product(&self) -> f64 {
        self.var_x * self.var_p
    }
}

/// Moments of the normalized state `v/‖v‖`; `norm` records `‖v‖²`.
pub fn moments(v: &FockVector, sigma: f64) -> MomentSet {
    let c = v.amps();
    let mut n_mean = 0.0;
    let mut a1 = Complex::new(0.0, 0.0);
    let mut a2 = Complex::new(0.0, 0.0);
    let mut norm = 0.0;
    for n in 0..c.len() {
        let w = c[n].norm_sqr();
        norm += w;
        n_mean += n as f64 * w;
        if n + 1 < c.len() {
            a1 += c[n].conj() * c[n + 1] * ((n + 1) as f64).sqrt();
        }
        if n + 2 < c.len() {
            a2 += c[n].conj() * c[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt();
        }
    }
    let (n_mean, a1, a2) = (n_mean / norm, a1 / norm, a2 / norm);
    MomentSet::new(
        2.0 * sigma * a1.re,
        a1.im / sigma,
        sigma * sigma * (2.0 * a2.re + 2.0 * n_mean + 1.0),
        (2.0 * n_mean + 1.0 - 2.0 * a2.re) / (4.0 * sigma * sigma),
        norm,
    )
}

/// `(μa† − μ*a) v` within the basis of `v` (the top state is not raised out).
pub fn apply_generator(v: &[Complex], mu: Complex) -> Vec<Complex> {
    let dim = v.len();
    let mut out = vec![Complex::new(0.0, 0.0); dim];
    for n in 0..dim {
        let mut acc = Complex::new(0.0, 0.0);
        if n > 0 {
            acc += mu * (n as f64).sqrt() * v[n - 1];
        }
        if n + 1 < dim {
            acc -= mu.conj() * ((n + 1) as f64).sqrt() * v[n + 1];
        }
        out[n] = acc;
    }
    out
}

/// Truncated `X` and `P` as dense matrices.
pub fn ladder_matrices(dim: usize, sigma: f64) -> (DMatrix<Complex>, DMatrix<Complex>) {
    let mut x = DMatrix::zeros(dim, dim);
    let mut p = DMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let k = ((n + 1) as f64).sqrt();
        // a|n+1⟩ = √(n+1)|n⟩, a†|n⟩ = √(n+1)|n+1⟩
        x[(n, n + 1)] = Complex::new(sigma * k, 0.0);
        x[(n + 1, n)] = Complex::new(sigma * k, 0.0);
        p[(n + 1, n)] = Complex::new(0.0, k / (2.0 * sigma));
        p[(n, n + 1)] = Complex::new(0.0, -k / (2.0 * sigma));
    }
    (x, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_oracle::{coherent_vector, squeezed_vacuum_vector};

    #[test]
    fn vacuum_moments() {
        let m = moments(&FockVector::vacuum(32), 0.3);
        assert_eq!(m.mean_x, 0.0);
        assert!((m.var_x - 0.09).abs() < 1e-15);
        assert!((m.var_p - 1.0 / (4.0 * 0.09)).abs() < 1e-12);
    }

    #[test]
    fn coherent_is_minimum_uncertainty() {
        let sigma = 0.7;
        for alpha in [
            Complex::new(1.0, 0.5),
            Complex::from_polar(2.0, std::f64::consts::FRAC_PI_4),
        ] {
            let m = moments(&coherent_vector(alpha, 64).unwrap(), sigma);
            assert!((m.mean_x - 2.0 * sigma * alpha.re).abs() < 1e-10);
            assert!((m.mean_p - alpha.im / sigma).abs() < 1e-10);
            assert!((m.var_x - sigma * sigma).abs() < 1e-10);
            assert!((m.var_p - 1.0 / (4.0 * sigma * sigma)).abs() < 1e-10);
        }
        let m = moments(
            &coherent_vector(Complex::from_polar(2.0, std::f64::consts::FRAC_PI_4), 64).unwrap(),
            1.0,
        );
        assert!((m.mean_x - 2.0 * 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn squeezed_variances() {
        let eta: f64 = 1.0;
        let m = moments(&squeezed_vacuum_vector(Complex::new(eta, 0.0), 200).unwrap(), 1.0);
        // δ = 0 squeezes X under exp(½ξ*a² − ½ξa†²).
        assert!((m.var_x - (-2.0 * eta).exp()).abs() < 1e-10);
        assert!((m.var_p - (2.0 * eta).exp() / 4.0).abs() < 1e-10);
        assert!((m.uncertainty_product() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn commutator_on_interior_block() {
        let dim = 24;
        let (x, p) = ladder_matrices(dim, 0.8);
        let c = &x * &p - &p * &x;
        for i in 0..dim - 2 {
            for j in 0..dim - 2 {
                let expect = if i == j {
                    Complex::new(0.0, 1.0)
                } else {
                    Complex::new(0.0, 0.0)
                };
                assert!((c[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dense_matrices_agree_with_moments() {
        let v = coherent_vector(Complex::new(0.4, -0.9), 40).unwrap();
        let (x, p) = ladder_matrices(40, 1.3);
        let col = nalgebra::DVector::from_column_slice(v.amps());
        let ex = (col.adjoint() * &x * &col)[(0, 0)].re;
        let ep = (col.adjoint() * &p * &col)[(0, 0)].re;
        let m = moments(&v, 1.3);
        assert!((ex - m.mean_x).abs() < 1e-12);
        assert!((ep - m.mean_p).abs() < 1e-12);
    }
}
