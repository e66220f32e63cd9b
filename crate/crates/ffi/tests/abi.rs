use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::ffi::CStr;
use std::ptr;

use weaklab_ffi::*;

struct Handles {
    sel: *mut WeaklabSelection,
    ptr: *mut WeaklabPointer,
    cfg: *mut WeaklabCoupling,
}

impl Handles {
    fn new(theta: f64, phi: f64, family: u32, m: f64, a: f64, g: f64) -> Self {
        let mut h = Handles {
            sel: ptr::null_mut(),
            ptr: ptr::null_mut(),
            cfg: ptr::null_mut(),
        };
        unsafe {
            assert_eq!(weaklab_selection_new(theta, phi, &mut h.sel), WeaklabStatus::Ok);
            assert_eq!(weaklab_pointer_new(family, m, a, &mut h.ptr), WeaklabStatus::Ok);
            assert_eq!(weaklab_coupling_new(g, 1.0, 1, &mut h.cfg), WeaklabStatus::Ok);
        }
        h
    }
}

impl Drop for Handles {
    fn drop(&mut self) {
        unsafe {
            weaklab_selection_free(self.sel);
            weaklab_pointer_free(self.ptr);
            weaklab_coupling_free(self.cfg);
        }
    }
}

fn last_error() -> String {
    let p = weaklab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn weak_value_and_probability() {
    let h = Handles::new(FRAC_PI_2, FRAC_PI_4, WEAKLAB_FAMILY_COHERENT, 1.0, 0.0, 0.1);
    let mut aw = WeaklabComplex::default();
    let mut p = 0.0;
    unsafe {
        assert_eq!(weaklab_weak_value(h.sel, &mut aw), WeaklabStatus::Ok);
        assert_eq!(weaklab_postselection_probability(h.sel, &mut p), WeaklabStatus::Ok);
    }
    assert!((aw.re - FRAC_PI_4.cos()).abs() < 1e-15);
    assert!((aw.im - FRAC_PI_4.sin()).abs() < 1e-15);
    assert!((p - 0.5).abs() < 1e-15);
}

#[test]
fn orthogonal_selection_reports_code_and_message() {
    let h = Handles::new(PI, 0.0, WEAKLAB_FAMILY_COHERENT, 1.0, 0.0, 0.1);
    let mut aw = WeaklabComplex { re: 7.0, im: 7.0 };
    let status = unsafe { weaklab_weak_value(h.sel, &mut aw) };
    assert_eq!(status, WeaklabStatus::OrthogonalSelection);
    assert_eq!(aw.re, 7.0, "out-pointer untouched on failure");
    assert!(last_error().contains("orthogonal"));
}

#[test]
fn chi_plateau_through_abi() {
    let h = Handles::new(7.0 * PI / 9.0, FRAC_PI_4, WEAKLAB_FAMILY_COHERENT, 1.0, PI / 3.0, 1e-5);
    let mut chi = 0.0;
    let mut rep = WeaklabSnrReport::default();
    unsafe {
        assert_eq!(weaklab_chi(h.sel, h.ptr, h.cfg, &mut chi), WeaklabStatus::Ok);
        assert_eq!(weaklab_snr_report(h.sel, h.ptr, h.cfg, &mut rep), WeaklabStatus::Ok);
    }
    assert!((chi - 1.4618).abs() < 2e-3);
    assert!(rep.chi_defined);
    assert_eq!(rep.chi, chi);
    assert!(rep.dim >= 32);
}

#[test]
fn undefined_chi() {
    let h = Handles::new(FRAC_PI_2, FRAC_PI_2, WEAKLAB_FAMILY_SQUEEZED, 0.5, 0.0, 1e-3);
    let mut chi = 0.0;
    let mut rep = WeaklabSnrReport::default();
    unsafe {
        assert_eq!(weaklab_chi(h.sel, h.ptr, h.cfg, &mut chi), WeaklabStatus::ChiUndefined);
        assert_eq!(weaklab_snr_report(h.sel, h.ptr, h.cfg, &mut rep), WeaklabStatus::Ok);
    }
    assert!(!rep.chi_defined);
    assert!(rep.chi.is_nan());
}

#[test]
fn means_match_library() {
    let h = Handles::new(1.2, 0.3, WEAKLAB_FAMILY_CAT, 1.5, 0.4, 0.7);
    let mut m = WeaklabMeans::default();
    let mut d = WeaklabMeans::default();
    unsafe {
        assert_eq!(weaklab_means(h.sel, h.ptr, h.cfg, &mut m), WeaklabStatus::Ok);
        assert_eq!(weaklab_shift(h.sel, h.ptr, h.cfg, &mut d), WeaklabStatus::Ok);
    }
    let sel = weaklab::SelectionPair::new(1.2, 0.3).unwrap();
    let ptr = weaklab::Pointer::even_cat(1.5, 0.4).unwrap();
    let cfg = weaklab::Coupling::new(0.7, 1.0, 1).unwrap();
    let want = weaklab::pointers::means(&sel, &ptr, &cfg).unwrap();
    assert_eq!((m.x, m.p), (want.x, want.p));
    let (x0, p0) = ptr.initial_means(1.0);
    assert!((d.x - (m.x - x0)).abs() < 1e-15 && (d.p - (m.p - p0)).abs() < 1e-15);
}

#[test]
fn fisher_and_bound() {
    let h = Handles::new(FRAC_PI_2, 0.0, WEAKLAB_FAMILY_COHERENT, 1.0, 0.3, 0.2);
    let mut f = WeaklabFisherReport::default();
    let mut b = 0.0;
    unsafe {
        assert_eq!(
            weaklab_fisher_report(h.sel, h.ptr, h.cfg, false, &mut f),
            WeaklabStatus::Ok
        );
        assert_eq!(weaklab_cramer_rao_bound(f.fisher_post, 1, &mut b), WeaklabStatus::Ok);
        assert_eq!(weaklab_cramer_rao_bound(0.0, 1, &mut b), WeaklabStatus::BoundUndefined);
    }
    assert!((f.qfi - 1.0).abs() < 1e-6);
    assert!((f.fisher_post - 0.5).abs() < 1e-6);
    assert!((b - 2.0).abs() < 1e-5);
}

#[test]
fn invalid_input_and_nulls() {
    let mut p: *mut WeaklabPointer = ptr::null_mut();
    let mut c: *mut WeaklabCoupling = ptr::null_mut();
    unsafe {
        assert_eq!(
            weaklab_pointer_new(9, 1.0, 0.0, &mut p),
            WeaklabStatus::InvalidParameter
        );
        assert!(p.is_null());
        assert_eq!(
            weaklab_pointer_new(WEAKLAB_FAMILY_COHERENT, -1.0, 0.0, &mut p),
            WeaklabStatus::InvalidParameter
        );
        assert_eq!(
            weaklab_coupling_new(0.1, 0.0, 1, &mut c),
            WeaklabStatus::InvalidParameter
        );
        assert_eq!(
            weaklab_selection_new(0.1, 0.2, ptr::null_mut()),
            WeaklabStatus::NullPointer
        );
        assert!(last_error().contains("out"));
        let mut aw = WeaklabComplex::default();
        assert_eq!(weaklab_weak_value(ptr::null(), &mut aw), WeaklabStatus::NullPointer);
        weaklab_selection_free(ptr::null_mut());
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(weaklab_version()) };
    assert_eq!(v.to_str().unwrap(), weaklab::VERSION);
}

#[test]
fn header_is_current() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/weaklab.h")).unwrap();
    for sym in [
        "weaklab_selection_new",
        "weaklab_pointer_new",
        "weaklab_coupling_new",
        "weaklab_snr_report",
        "weaklab_fisher_report",
        "weaklab_cramer_rao_bound",
        "weaklab_last_error",
        "WEAKLAB_STATUS_CHI_UNDEFINED",
        "WEAKLAB_FAMILY_SQUEEZED",
        "typedef struct WeaklabPointer WeaklabPointer;",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}
