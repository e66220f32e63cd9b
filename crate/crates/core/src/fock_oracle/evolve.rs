use super::displacement::displace;
use super::ladder::{apply_generator, moments, MomentSet};
use super::vector::FockVector;
use crate::selection::OVERLAP_EPS;
use crate::{Complex, Error, Result, SelectionPair};

/// How the coupling unitary is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evolution {
    /// `½(I+A)⊗D(s/2) + ½(I−A)⊗D(−s/2)`.
    #[default]
    Full,
    /// `I + (s/2) A⊗(a† − a)`, the expansion to first order in `s`.
    FirstOrder,
}

/// Pointer after the coupling, with and without postselection.
#[derive(Debug, Clone)]
pub struct JointOutcome {
    /// Normalized postselected pointer.
    pub postselected_state: FockVector,
    /// `‖⟨ψ_f|U|ψ_i⟩|φ⟩‖²`.
    pub postselection_prob_exact: f64,
    /// `(|⟨+x|ψ_i⟩|², |⟨−x|ψ_i⟩|²)`.
    pub branch_weights: (f64, f64),
    /// `D(±s/2)|φ⟩`, the pure components of the non-postselected mixture.
    pub branches: (FockVector, FockVector),
}

/// `⟨ψ_f|½(I ± σ_x)|ψ_i⟩ = ½(cos(θ/2) ± e^{iφ} sin(θ/2))`.
fn branch_amplitudes(sel: &SelectionPair) -> (Complex, Complex) {
    let half = sel.theta() / 2.0;
    let c = Complex::new(half.cos(), 0.0);
    let e = Complex::from_polar(half.sin(), sel.phi());
    (0.5 * (c + e), 0.5 * (c - e))
}

fn check_overlap(sel: &SelectionPair) -> Result<()> {
    let overlap = sel.overlap();
    if overlap.abs() <= OVERLAP_EPS {
        return Err(Error::OrthogonalSelection { overlap });
    }
    Ok(())
}

/// Unnormalized `⟨ψ_f|U(s)|ψ_i⟩|φ⟩`.
pub fn postselected_branch(
    pointer: &FockVector,
    sel: &SelectionPair,
    s: f64,
    evolution: Evolution,
) -> Result<FockVector> {
    check_overlap(sel)?;
    let (cp, cm) = branch_amplitudes(sel);
    match evolution {
        Evolution::Full => {
            let plus = displace(pointer, Complex::new(s / 2.0, 0.0))?;
            let minus = displace(pointer, Complex::new(-s / 2.0, 0.0))?;
            Ok(FockVector::combine(cp, &plus, cm, &minus))
        }
        Evolution::FirstOrder => {
            let g = FockVector::from_amplitudes(apply_generator(pointer.amps(), Complex::new(1.0, 0.0)));
            Ok(FockVector::combine(cp + cm, pointer, (cp - cm) * (s / 2.0), &g))
        }
    }
}

pub fn evolve_and_postselect(pointer: &FockVector, sel: &SelectionPair, s: f64) -> Result<JointOutcome> {
    check_overlap(sel)?;
    let (cp, cm) = branch_amplitudes(sel);
    let plus = displace(pointer, Complex::new(s / 2.0, 0.0))?;
    let minus = displace(pointer, Complex::new(-s / 2.0, 0.0))?;
    let raw = FockVector::combine(cp, &plus, cm, &minus);
    let prob = raw.norm_sqr();
    Ok(JointOutcome {
        postselected_state: raw.normalized(),
        postselection_prob_exact: prob,
        branch_weights: sel.branch_weights(),
        branches: (plus, minus),
    })
}

/// Moments of the pointer when the spin is traced out instead of
/// postselected. Defined for every θ, including θ = π.
pub fn nonpostselected_moments(pointer: &FockVector, sel: &SelectionPair, s: f64, sigma: f64) -> Result<MomentSet> {
    let (pp, pm) = sel.branch_weights();
    let plus = moments(&displace(pointer, Complex::new(s / 2.0, 0.0))?, sigma);
    let minus = moments(&displace(pointer, Complex::new(-s / 2.0, 0.0))?, sigma);
    Ok(MomentSet::mix(pp, &plus, pm, &minus))
}
