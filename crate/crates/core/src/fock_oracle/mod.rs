//! Brute-force number-basis simulator used as the independent oracle for
//! the closed forms in [`crate::pointers`].
//!
//! Pointer states are built amplitude by amplitude in a truncated Fock basis
//! and certified by the probability mass left in the top band of the basis.
//! The interaction is applied through its exact two-branch decomposition
//!
//! ```text
//! exp(−i g A⊗P) = ½(I + A)⊗D(s/2) + ½(I − A)⊗D(−s/2),
//! ```
//!
//! so the postselected pointer is `Σ± ⟨ψ_f|½(I ± A)|ψ_i⟩ D(±s/2)|φ⟩`, with
//! every phase produced by the displacement itself.
//!
//! Without postselection the pointer is the mixture
//! `p₊ D(s/2)|φ⟩⟨φ|D†(s/2) + p₋ D(−s/2)|φ⟩⟨φ|D†(−s/2)`: tracing out the spin
//! removes the cross terms because the two `σ_x` eigenprojectors are
//! orthogonal. Its moments are weighted sums of two pure-state moments, so no
//! density matrix is ever formed.

mod displacement;
mod evolve;
mod ladder;
mod qfi;
mod truncation;
mod vector;

pub use displacement::{displace, displacement_matrix, retained_block, unitarity_deviation};
pub use evolve::{evolve_and_postselect, nonpostselected_moments, postselected_branch, Evolution, JointOutcome};
pub use ladder::{apply_generator, ladder_matrices, moments, MomentSet};
pub use qfi::{qfi_postselected, qfi_report, QfiReport};
pub use truncation::{initial_dim, max_dim, pointer_vector, solve, DEFAULT_MAX_DIM, MAX_DIM_ENV};
pub use vector::{coherent_vector, even_cat_vector, padding, squeezed_vacuum_vector, tail_band, FockVector, TAIL_TOL};
