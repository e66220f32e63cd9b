//! C ABI for weaklab.
//!
//! Conventions:
//! - Every fallible function returns a [`WeaklabStatus`]; results go through
//!   out-pointers, which are left untouched on failure.
//! - Handles are opaque, created by `*_new` functions and released by the
//!   matching `*_free` (which accepts NULL).
//! - After a failure, [`weaklab_last_error`] returns a message for the
//!   calling thread. The pointer stays valid until the next failing call on
//!   that thread.
//! - Panics never cross the boundary; they surface as `WEAKLAB_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use weaklab::fock_oracle::Evolution;
use weaklab::{metrics, pointers, Coupling, Error, Pointer, SelectionPair};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeaklabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    OrthogonalSelection = 3,
    TruncationInsufficient = 4,
    DerivativeMismatch = 5,
    DegenerateNoise = 6,
    ChiUndefined = 7,
    BoundUndefined = 8,
    Internal = 9,
}

impl From<&Error> for WeaklabStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::OrthogonalSelection { .. } => WeaklabStatus::OrthogonalSelection,
            Error::TruncationInsufficient { .. } => WeaklabStatus::TruncationInsufficient,
            Error::DerivativeMismatch { .. } => WeaklabStatus::DerivativeMismatch,
            Error::DegenerateNoise { .. } => WeaklabStatus::DegenerateNoise,
            Error::ChiUndefined => WeaklabStatus::ChiUndefined,
            Error::BoundUndefined { .. } => WeaklabStatus::BoundUndefined,
            Error::InvalidParameter { .. } | Error::InvalidObservable { .. } | Error::ConfigInvalid { .. } => {
                WeaklabStatus::InvalidParameter
            }
            Error::Io { .. } => WeaklabStatus::Internal,
        }
    }
}

/// Values for the `family` argument of [`weaklab_pointer_new`]. Plain
/// integers rather than an enum, so that out-of-range input from C is an
/// error instead of undefined behaviour.
pub const WEAKLAB_FAMILY_COHERENT: u32 = 0;
pub const WEAKLAB_FAMILY_SQUEEZED: u32 = 1;
pub const WEAKLAB_FAMILY_CAT: u32 = 2;

/// Pre- and postselected spin states.
pub struct WeaklabSelection(SelectionPair);

/// Initial pointer state.
pub struct WeaklabPointer(Pointer);

/// Coupling `g`, width `σ` and number of runs.
pub struct WeaklabCoupling(Coupling);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WeaklabComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WeaklabMeans {
    pub x: f64,
    pub x_over_sigma: f64,
    pub p: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WeaklabSnrReport {
    pub snr_post: f64,
    pub snr_non: f64,
    /// NaN when `chi_defined` is false.
    pub chi: f64,
    pub chi_prime: f64,
    pub chi_defined: bool,
    pub p_s: f64,
    pub signal_post: f64,
    pub signal_non: f64,
    pub noise_post: f64,
    pub noise_non: f64,
    pub dim: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WeaklabFisherReport {
    pub qfi: f64,
    pub fisher_post: f64,
    pub p_s: f64,
    pub dim: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), WeaklabFailure>) -> WeaklabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WeaklabStatus::Ok,
        Ok(Err(WeaklabFailure::Null(what))) => {
            set_error(format!("null pointer passed for `{what}`"));
            WeaklabStatus::NullPointer
        }
        Ok(Err(WeaklabFailure::Lib(e))) => {
            set_error(e.to_string());
            WeaklabStatus::from(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            WeaklabStatus::Internal
        }
    }
}

enum WeaklabFailure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for WeaklabFailure {
    fn from(e: Error) -> Self {
        WeaklabFailure::Lib(e)
    }
}

/// # Safety
/// `p` must be NULL or valid for reads of `T`.
unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, WeaklabFailure> {
    p.as_ref().ok_or(WeaklabFailure::Null(what))
}

/// # Safety
/// `p` must be NULL or valid for writes of `T`.
unsafe fn put<T>(p: *mut T, value: T, what: &'static str) -> Result<(), WeaklabFailure> {
    if p.is_null() {
        return Err(WeaklabFailure::Null(what));
    }
    p.write(value);
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL.
#[no_mangle]
pub extern "C" fn weaklab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn weaklab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// Handles

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_selection_new(theta: f64, phi: f64, out: *mut *mut WeaklabSelection) -> WeaklabStatus {
    guard(|| {
        let sel = SelectionPair::new(theta, phi)?;
        put(out, Box::into_raw(Box::new(WeaklabSelection(sel))), "out")
    })
}

/// # Safety
/// `sel` must be NULL or a handle from [`weaklab_selection_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn weaklab_selection_free(sel: *mut WeaklabSelection) {
    if !sel.is_null() {
        drop(Box::from_raw(sel));
    }
}

/// `family` is one of the `WEAKLAB_FAMILY_*` constants: coherent and cat
/// take `modulus` = r, `angle` = φ_c; squeezed vacuum takes `modulus` = η,
/// `angle` = δ.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_pointer_new(
    family: u32,
    modulus: f64,
    angle: f64,
    out: *mut *mut WeaklabPointer,
) -> WeaklabStatus {
    guard(|| {
        let ptr = match family {
            WEAKLAB_FAMILY_COHERENT => Pointer::coherent(modulus, angle)?,
            WEAKLAB_FAMILY_SQUEEZED => Pointer::squeezed(modulus, angle)?,
            WEAKLAB_FAMILY_CAT => Pointer::even_cat(modulus, angle)?,
            other => {
                return Err(Error::ConfigInvalid {
                    path: "family".into(),
                    message: format!("unknown pointer family {other}"),
                }
                .into())
            }
        };
        put(out, Box::into_raw(Box::new(WeaklabPointer(ptr))), "out")
    })
}

/// # Safety
/// `ptr` must be NULL or a handle from [`weaklab_pointer_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn weaklab_pointer_free(ptr: *mut WeaklabPointer) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_coupling_new(
    g: f64,
    sigma: f64,
    n_runs: u64,
    out: *mut *mut WeaklabCoupling,
) -> WeaklabStatus {
    guard(|| {
        let cfg = Coupling::new(g, sigma, n_runs)?;
        put(out, Box::into_raw(Box::new(WeaklabCoupling(cfg))), "out")
    })
}

/// # Safety
/// `cfg` must be NULL or a handle from [`weaklab_coupling_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn weaklab_coupling_free(cfg: *mut WeaklabCoupling) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

// Quantities

/// # Safety
/// `sel` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_weak_value(sel: *const WeaklabSelection, out: *mut WeaklabComplex) -> WeaklabStatus {
    guard(|| {
        let aw = get(sel, "sel")?.0.weak_value()?;
        put(out, WeaklabComplex { re: aw.re, im: aw.im }, "out")
    })
}

/// # Safety
/// `sel` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_postselection_probability(
    sel: *const WeaklabSelection,
    out: *mut f64,
) -> WeaklabStatus {
    guard(|| put(out, get(sel, "sel")?.0.postselection_probability(), "out"))
}

/// Closed-form pointer means after postselection.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_means(
    sel: *const WeaklabSelection,
    ptr: *const WeaklabPointer,
    cfg: *const WeaklabCoupling,
    out: *mut WeaklabMeans,
) -> WeaklabStatus {
    guard(|| {
        let m = pointers::means(&get(sel, "sel")?.0, &get(ptr, "ptr")?.0, &get(cfg, "cfg")?.0)?;
        put(
            out,
            WeaklabMeans {
                x: m.x,
                x_over_sigma: m.x_over_sigma,
                p: m.p,
            },
            "out",
        )
    })
}

/// Final minus initial pointer means.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_shift(
    sel: *const WeaklabSelection,
    ptr: *const WeaklabPointer,
    cfg: *const WeaklabCoupling,
    out: *mut WeaklabMeans,
) -> WeaklabStatus {
    guard(|| {
        let m = pointers::shift(&get(sel, "sel")?.0, &get(ptr, "ptr")?.0, &get(cfg, "cfg")?.0)?;
        put(
            out,
            WeaklabMeans {
                x: m.x,
                x_over_sigma: m.x_over_sigma,
                p: m.p,
            },
            "out",
        )
    })
}

/// Both SNRs and χ. An undefined χ is reported through `chi_defined`, not
/// as an error.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_snr_report(
    sel: *const WeaklabSelection,
    ptr: *const WeaklabPointer,
    cfg: *const WeaklabCoupling,
    out: *mut WeaklabSnrReport,
) -> WeaklabStatus {
    guard(|| {
        let r = metrics::snr_report(&get(sel, "sel")?.0, &get(ptr, "ptr")?.0, &get(cfg, "cfg")?.0)?;
        let report = WeaklabSnrReport {
            snr_post: r.snr_post,
            snr_non: r.snr_non,
            chi: r.chi.unwrap_or(f64::NAN),
            chi_prime: r.chi_prime.unwrap_or(f64::NAN),
            chi_defined: r.chi.is_some(),
            p_s: r.p_s,
            signal_post: r.signal_post,
            signal_non: r.signal_non,
            noise_post: r.noise_post,
            noise_non: r.noise_non,
            dim: r.dim,
        };
        put(out, report, "out")
    })
}

/// χ alone; fails with `WEAKLAB_STATUS_CHI_UNDEFINED` when the
/// non-postselected signal vanishes.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_chi(
    sel: *const WeaklabSelection,
    ptr: *const WeaklabPointer,
    cfg: *const WeaklabCoupling,
    out: *mut f64,
) -> WeaklabStatus {
    guard(|| {
        let chi = metrics::ratio_chi(&get(sel, "sel")?.0, &get(ptr, "ptr")?.0, &get(cfg, "cfg")?.0)?;
        put(out, chi, "out")
    })
}

/// QFI of the postselected pointer and `F_p = P_s·F`. `first_order`
/// selects the linearized coupling.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_fisher_report(
    sel: *const WeaklabSelection,
    ptr: *const WeaklabPointer,
    cfg: *const WeaklabCoupling,
    first_order: bool,
    out: *mut WeaklabFisherReport,
) -> WeaklabStatus {
    guard(|| {
        let evolution = if first_order {
            Evolution::FirstOrder
        } else {
            Evolution::Full
        };
        let r = metrics::fisher_report(&get(sel, "sel")?.0, &get(ptr, "ptr")?.0, &get(cfg, "cfg")?.0, evolution)?;
        put(
            out,
            WeaklabFisherReport {
                qfi: r.qfi,
                fisher_post: r.fisher_post,
                p_s: r.p_s,
                dim: r.dim,
            },
            "out",
        )
    })
}

/// `1/(N·F)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn weaklab_cramer_rao_bound(fisher: f64, n_runs: u64, out: *mut f64) -> WeaklabStatus {
    guard(|| put(out, metrics::cramer_rao_bound(fisher, n_runs)?, "out"))
}
