//! Basis-size policy.
//!
//! The starting dimension is `max(32, ⌈m + 8√(m+1) + 8⌉)`, with the pointer's
//! mean photon number `m` inflated for the displacement as
//! `m ← (√m + |s|/2 + r)²` (`r = |α|` for coherent and cat pointers, 0 for
//! squeezed vacuum). The dimension is doubled until the state and every
//! displaced branch are certified, up to [`max_dim`].

use super::vector::{coherent_vector, even_cat_vector, squeezed_vacuum_vector, FockVector};
use crate::pointers::Pointer;
use crate::{Error, Result};

pub const DEFAULT_MAX_DIM: usize = 4096;
pub const MAX_DIM_ENV: &str = "WEAKLAB_MAX_DIM";

/// Dimension ceiling; `WEAKLAB_MAX_DIM` overrides the default.
pub fn max_dim() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&d| d > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub fn initial_dim(pointer: &Pointer, s: f64) -> usize {
    let (m, r) = match *pointer {
        Pointer::Coherent(c) => (c.r * c.r, c.r),
        Pointer::EvenCat(c) => (c.r * c.r, c.r),
        Pointer::SqueezedVacuum(q) => (q.eta.sinh().powi(2), 0.0),
    };
    let m = (m.sqrt() + s.abs() / 2.0 + r).powi(2);
    let d = (m + 8.0 * (m + 1.0).sqrt() + 8.0).ceil();
    (d as usize).max(32)
}

pub fn pointer_vector(pointer: &Pointer, dim: usize) -> Result<FockVector> {
    match *pointer {
        Pointer::Coherent(c) => coherent_vector(c.alpha(), dim),
        Pointer::SqueezedVacuum(q) => squeezed_vacuum_vector(q.xi(), dim),
        Pointer::EvenCat(c) => even_cat_vector(c.alpha(), dim),
    }
}

/// Builds the pointer at the policy dimension and runs `f` on it, doubling
/// the dimension whenever either step reports an insufficient truncation.
/// Returns the result and the dimension that succeeded.
pub fn solve<T>(pointer: &Pointer, s: f64, mut f: impl FnMut(&FockVector) -> Result<T>) -> Result<(T, usize)> {
    let ceiling = max_dim();
    let mut dim = initial_dim(pointer, s).min(ceiling);
    loop {
        let attempt = pointer_vector(pointer, dim).and_then(|v| f(&v));
        match attempt {
            Ok(value) => return Ok((value, dim)),
            Err(Error::TruncationInsufficient { tail_mass, .. }) if dim < ceiling => {
                let _ = tail_mass;
                dim = (dim * 2).min(ceiling);
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_minimum_and_growth() {
        let vac = Pointer::coherent(0.0, 0.0).unwrap();
        assert_eq!(initial_dim(&vac, 1e-5), 32);
        let big = Pointer::coherent(3.0, 0.0).unwrap();
        // m = (3 + 0.5 + 3)² = 42.25
        assert_eq!(
            initial_dim(&big, 1.0),
            (42.25 + 8.0 * 43.25f64.sqrt() + 8.0).ceil() as usize
        );
        let sq = Pointer::squeezed(2.0, 0.0).unwrap();
        assert!(initial_dim(&sq, 0.0) > 32);
    }

    #[test]
    fn solve_doubles_until_converged() {
        let sq = Pointer::squeezed(1.5, 0.3).unwrap();
        let start = initial_dim(&sq, 0.0);
        let (v, dim) = solve(&sq, 0.0, |v| Ok(v.clone())).unwrap();
        assert!(v.is_converged());
        assert!(dim >= start);
        assert_eq!(dim, v.dim());
    }
}
