//! `D(μ) = exp(μa† − μ*a)` on a truncated basis.
//!
//! Two routes: a dense matrix exponential of the truncated generator
//! ([`displacement_matrix`]), and the action of the exponential on a single
//! vector by scaled Taylor steps ([`displace`]). Both work on a basis padded
//! above the requested dimension; the generator is exactly anti-Hermitian
//! there, so the padded exponential is unitary and the only error is mass
//! reaching the padding.

use nalgebra::DMatrix;

use super::ladder::apply_generator;
use super::vector::{padding, FockVector, TAIL_TOL};
use crate::{Complex, Error, Result};

/// Largest column-norm deviation tolerated on the retained block.
pub const UNITARITY_TOL: f64 = 1e-8;

fn generator(mu: Complex, dim: usize) -> DMatrix<Complex> {
    let mut k = DMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let s = ((n + 1) as f64).sqrt();
        k[(n + 1, n)] = mu * s;
        k[(n, n + 1)] = -mu.conj() * s;
    }
    k
}

/// Max `|‖col_j‖ − 1|` over the leading `retained` columns.
pub fn unitarity_deviation(m: &DMatrix<Complex>, retained: usize) -> f64 {
    (0..retained.min(m.ncols()))
        .map(|j| (m.column(j).norm() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Columns of a cropped displacement matrix that are certified unitary.
pub fn retained_block(dim: usize) -> usize {
    (dim / 2).max(1)
}

/// Dense `dim × dim` displacement matrix, cropped from an exponential on a
/// padded basis. The leading [`retained_block`] columns are certified
/// unitary.
pub fn displacement_matrix(mu: Complex, dim: usize) -> Result<DMatrix<Complex>> {
    let padded = dim + padding(dim);
    let full = generator(mu, padded).exp();
    let cropped = full.view((0, 0), (dim, dim)).into_owned();
    let deviation = unitarity_deviation(&cropped, retained_block(dim));
    if deviation > UNITARITY_TOL {
        return Err(Error::TruncationInsufficient {
            dim,
            tail_mass: deviation,
        });
    }
    Ok(cropped)
}

/// `D(μ)|v⟩`, returned in the padded basis `dim(v) + padding`. Fails if
/// more than [`TAIL_TOL`] of the probability ends up outside the basis of
/// `v`.
pub fn displace(v: &FockVector, mu: Complex) -> Result<FockVector> {
    let dim = v.dim();
    let padded = v.padded(dim + padding(dim));
    let out = FockVector::from_amplitudes(expm_action(padded.amps(), mu));
    let escaped: f64 = out.amps()[dim..].iter().map(|c| c.norm_sqr()).sum();
    if escaped > TAIL_TOL * v.norm_sqr().max(1.0) {
        return Err(Error::TruncationInsufficient {
            dim,
            tail_mass: escaped,
        });
    }
    Ok(out)
}

/// `exp(μa† − μ*a) v` in the basis of `v`.
pub(crate) fn expm_action(v: &[Complex], mu: Complex) -> Vec<Complex> {
    if mu.norm() == 0.0 {
        return v.to_vec();
    }
    let dim = v.len();
    // ‖μa† − μ*a‖ ≤ 2|μ|√(dim−1); keep each step's norm below 1/2.
    let bound = 2.0 * mu.norm() * ((dim.max(2) - 1) as f64).sqrt();
    let steps = (2.0 * bound).ceil().max(1.0) as usize;
    let tau = mu / steps as f64;
    let mut w = v.to_vec();
    for _ in 0..steps {
        let mut term = w.clone();
        let mut acc = w.clone();
        let scale = acc.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for k in 1..64 {
            term = apply_generator(&term, tau);
            let inv = 1.0 / k as f64;
            let mut size = 0.0;
            for (t, a) in term.iter_mut().zip(acc.iter_mut()) {
                *t *= inv;
                *a += *t;
                size += t.norm_sqr();
            }
            if size.sqrt() <= 1e-18 * scale {
                break;
            }
        }
        w = acc;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_oracle::{coherent_vector, squeezed_vacuum_vector};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn zero_displacement_is_identity() {
        let d = displacement_matrix(c(0.0, 0.0), 20).unwrap();
        assert_eq!(d, DMatrix::identity(20, 20));
    }

    #[test]
    fn inverse_on_retained_block() {
        let mu = c(0.3, 0.2);
        let dim = 40;
        let prod = displacement_matrix(mu, dim).unwrap() * displacement_matrix(-mu, dim).unwrap();
        let retained = retained_block(dim);
        for i in 0..retained {
            for j in 0..retained {
                let e = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                assert!((prod[(i, j)] - e).norm() < 1e-10, "({i},{j})");
            }
        }
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let mu = c(0.7, -0.4);
        let d = displacement_matrix(mu, 48).unwrap();
        let exact = coherent_vector(mu, 48).unwrap();
        for n in 0..48 {
            assert!((d[(n, 0)] - exact.amps()[n]).norm() < 1e-10);
        }
    }

    #[test]
    fn oversized_displacement_rejected() {
        assert!(matches!(
            displacement_matrix(c(3.0, 0.0), 20),
            Err(Error::TruncationInsufficient { .. })
        ));
        let v = coherent_vector(c(1.0, 0.0), 32).unwrap();
        assert!(matches!(
            displace(&v, c(4.0, 0.0)),
            Err(Error::TruncationInsufficient { .. })
        ));
    }

    #[test]
    fn action_matches_dense_matrix() {
        let v = squeezed_vacuum_vector(c(0.4, 0.3), 60).unwrap();
        for mu in [c(0.15, 0.0), c(-0.6, 0.25), c(1e-6, 0.0)] {
            let dense = displacement_matrix(mu, 60).unwrap();
            let col = nalgebra::DVector::from_column_slice(v.amps());
            let via_matrix = &dense * col;
            let via_action = displace(&v, mu).unwrap();
            for n in 0..60 {
                assert!((via_matrix[n] - via_action.amps()[n]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn action_composes_and_preserves_norm() {
        let v = coherent_vector(c(0.2, 0.9), 40).unwrap();
        let there = displace(&v, c(0.8, 0.0)).unwrap();
        assert!((there.norm_sqr() - 1.0).abs() < 1e-13);
        let back = displace(&there, c(-0.8, 0.0)).unwrap();
        for n in 0..40 {
            assert!((back.amps()[n] - v.amps()[n]).norm() < 1e-12);
        }
        // D(μ)|α⟩ = e^{i Im(μα*)} |α + μ⟩
        let alpha = c(0.2, 0.9);
        let mu = c(0.8, 0.0);
        let phase = Complex::from_polar(1.0, (mu * alpha.conj()).im);
        let target = coherent_vector(alpha + mu, there.dim()).unwrap();
        for n in 0..there.dim() {
            assert!((there.amps()[n] - phase * target.amps()[n]).norm() < 1e-12);
        }
    }
}
