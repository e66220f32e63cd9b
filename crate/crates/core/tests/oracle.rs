//! Closed-form means against the Fock-space oracle at random parameters.

use proptest::prelude::*;
use weaklab::fock_oracle;
use weaklab::pointers::{self, Family};
use weaklab::{Coupling, Pointer, SelectionPair};

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Coherent), Just(Family::Squeezed), Just(Family::Cat)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_match_oracle(
        theta in 0.05f64..3.0,
        phi in 0.0f64..std::f64::consts::TAU,
        s in 0.0f64..2.0,
        sigma in 0.2f64..3.0,
        fam in family(),
        modulus in 0.0f64..1.5,
        angle in 0.0f64..std::f64::consts::TAU,
    ) {
        let sel = SelectionPair::new(theta, phi).unwrap();
        let ptr = Pointer::from_family(fam, modulus, angle).unwrap();
        let cfg = Coupling::from_strength(s, sigma, 1).unwrap();
        let m = pointers::means(&sel, &ptr, &cfg).unwrap();
        let (fin, _) = fock_oracle::solve(&ptr, s, |v| {
            let out = fock_oracle::evolve_and_postselect(v, &sel, s)?;
            Ok(fock_oracle::moments(&out.postselected_state, sigma))
        }).unwrap();
        let scale = 1.0 + m.x.abs().max(m.p.abs());
        prop_assert!((m.x - fin.mean_x).abs() <= 1e-8 * scale, "x {} vs {}", m.x, fin.mean_x);
        prop_assert!((m.p - fin.mean_p).abs() <= 1e-8 * scale, "p {} vs {}", m.p, fin.mean_p);
        prop_assert!(fin.uncertainty_product() >= 0.25 * (1.0 - 1e-9));
    }

    #[test]
    fn postselection_probability_matches_branch_norm(
        theta in 0.05f64..3.0,
        phi in 0.0f64..std::f64::consts::TAU,
        s in 0.0f64..2.0,
        fam in family(),
        modulus in 0.0f64..1.5,
        angle in 0.0f64..std::f64::consts::TAU,
    ) {
        let sel = SelectionPair::new(theta, phi).unwrap();
        let ptr = Pointer::from_family(fam, modulus, angle).unwrap();
        let cfg = Coupling::from_strength(s, 1.0, 1).unwrap();
        let c = pointers::norm_coefficient(&sel, &ptr, &cfg).unwrap();
        let (prob, _) = fock_oracle::solve(&ptr, s, |v| {
            Ok(fock_oracle::evolve_and_postselect(v, &sel, s)?.postselection_prob_exact)
        }).unwrap();
        prop_assert!((prob * c * c - sel.postselection_probability()).abs() <= 1e-10);
    }
}

#[test]
fn max_dim_env_ceiling_is_respected() {
    // Large squeezing needs more than the default ceiling; the failure must
    // be reported, not silently truncated.
    let ptr = Pointer::squeezed(3.5, 0.0).unwrap();
    let err = fock_oracle::solve(&ptr, 0.0, |v| Ok(v.dim())).unwrap_err();
    assert!(err.is_numerical(), "{err}");
}
