//! Numerical laboratory for postselected weak measurements of a spin-1/2
//! observable with `A² = I`, read out by a bosonic pointer prepared in a
//! coherent, squeezed-vacuum or even cat state.
//!
//! Two independent routes are provided for every pointer observable:
//!
//! * [`pointers`] evaluates closed-form first moments of the final pointer,
//!   valid for any coupling strength `s = g/σ`;
//! * [`fock_oracle`] builds the pointer in a truncated number basis, applies
//!   the exact two-branch interaction `½(I+A)⊗D(s/2) + ½(I−A)⊗D(−s/2)`,
//!   postselects, and measures moments and Fisher information directly.
//!
//! [`metrics`] combines them into signal-to-noise ratios, their ratio χ and
//! the postselected Fisher information; [`sweep`] drives parameter grids for
//! the command-line front end.

pub mod cli;
pub mod error;
pub mod fock_oracle;
pub mod metrics;
pub mod pointers;
pub mod selection;
pub mod selftest;
pub mod sweep;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
pub use pointers::{Coupling, Pointer};
pub use selection::SelectionPair;

/// Library version recorded in sweep metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
