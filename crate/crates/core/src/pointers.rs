//! Closed-form first moments of the postselected pointer.
//!
//! After the impulsive coupling `exp(−i g A⊗P)` and postselection on `|↑⟩`
//! the pointer is left in
//!
//! ```text
//! |Ψ_f⟩ ∝ ½[(1 + A_w) D(s/2) + (1 − A_w) D(−s/2)] |φ⟩,   s = g/σ,
//! ```
//!
//! with `X = σ(a + a†)` and `P = i(a† − a)/(2σ)`. The expressions below hold
//! for any `s`, not only in the weak regime. Every normalization can be
//! written through the single overlap `⟨φ|D(−s)|φ⟩` (see [`pointer_overlap`]).
//!
//! The squeezed-vacuum momentum mean carries the factor
//! `cosh 2η + sinh 2η cos δ`. A frequently quoted form has `1` in place of
//! `cosh 2η`; it agrees only at η = 0 and is kept behind
//! [`SqueezedMomentum::UnitPrefactor`] for comparison.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Result, SelectionPair};

/// Coherent pointer `|α⟩`, `α = r e^{iφ_c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coherent {
    pub r: f64,
    pub phi_c: f64,
}

/// Squeezed vacuum `S(ξ)|0⟩`, `ξ = η e^{iδ}`, with
/// `S(ξ) = exp(½ξ* a² − ½ξ a†²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeezed {
    pub eta: f64,
    pub delta: f64,
}

/// Even cat `K(|α⟩ + |−α⟩)`, `α = r e^{iφ_c}`. `r = 0` is the vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenCat {
    pub r: f64,
    pub phi_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Coherent,
    Squeezed,
    Cat,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Coherent => "coherent",
            Family::Squeezed => "squeezed",
            Family::Cat => "cat",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coherent" => Ok(Family::Coherent),
            "squeezed" | "squeezed-vacuum" | "squeezed_vacuum" => Ok(Family::Squeezed),
            "cat" | "even-cat" | "even_cat" => Ok(Family::Cat),
            other => Err(Error::config(
                "pointer",
                format!("unknown pointer family `{other}` (expected coherent, squeezed or cat)"),
            )),
        }
    }
}

/// Initial pointer state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pointer {
    Coherent(Coherent),
    SqueezedVacuum(Squeezed),
    EvenCat(EvenCat),
}

fn check_modulus(name: &'static str, v: f64) -> Result<f64> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::param(name, format!("must be finite and non-negative, got {v}")));
    }
    Ok(v)
}

fn canonical_angle(name: &'static str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::param(name, "must be finite"));
    }
    let w = v.rem_euclid(TAU);
    Ok(if w >= TAU { 0.0 } else { w })
}

impl Pointer {
    pub fn coherent(r: f64, phi_c: f64) -> Result<Self> {
        Ok(Pointer::Coherent(Coherent {
            r: check_modulus("r", r)?,
            phi_c: canonical_angle("phi_c", phi_c)?,
        }))
    }

    pub fn squeezed(eta: f64, delta: f64) -> Result<Self> {
        Ok(Pointer::SqueezedVacuum(Squeezed {
            eta: check_modulus("eta", eta)?,
            delta: canonical_angle("delta", delta)?,
        }))
    }

    pub fn even_cat(r: f64, phi_c: f64) -> Result<Self> {
        Ok(Pointer::EvenCat(EvenCat {
            r: check_modulus("r", r)?,
            phi_c: canonical_angle("phi_c", phi_c)?,
        }))
    }

    /// Builds a pointer of `family` from its modulus and angle parameters
    /// (`r, φ_c` or `η, δ`).
    pub fn from_family(family: Family, modulus: f64, angle: f64) -> Result<Self> {
        match family {
            Family::Coherent => Self::coherent(modulus, angle),
            Family::Squeezed => Self::squeezed(modulus, angle),
            Family::Cat => Self::even_cat(modulus, angle),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Pointer::Coherent(_) => Family::Coherent,
            Pointer::SqueezedVacuum(_) => Family::Squeezed,
            Pointer::EvenCat(_) => Family::Cat,
        }
    }

    /// Mean photon number of the initial pointer.
    pub fn mean_photons(&self) -> f64 {
        match *self {
            Pointer::Coherent(c) => c.r * c.r,
            Pointer::SqueezedVacuum(q) => q.eta.sinh().powi(2),
            Pointer::EvenCat(c) => {
                let r2 = c.r * c.r;
                r2 * r2.tanh()
            }
        }
    }

    /// `(⟨X⟩, ⟨P⟩)` of the initial pointer.
    pub fn initial_means(&self, sigma: f64) -> (f64, f64) {
        match *self {
            Pointer::Coherent(c) => {
                let a = c.alpha();
                (2.0 * sigma * a.re, a.im / sigma)
            }
            Pointer::SqueezedVacuum(_) | Pointer::EvenCat(_) => (0.0, 0.0),
        }
    }
}

impl Coherent {
    pub fn alpha(&self) -> Complex {
        Complex::from_polar(self.r, self.phi_c)
    }
}

impl EvenCat {
    pub fn alpha(&self) -> Complex {
        Complex::from_polar(self.r, self.phi_c)
    }
}

impl Squeezed {
    pub fn xi(&self) -> Complex {
        Complex::from_polar(self.eta, self.delta)
    }

    /// `|cosh η + e^{iδ} sinh η|² = cosh 2η + sinh 2η cos δ`.
    pub fn stretch(&self) -> f64 {
        (Complex::new(self.eta.cosh(), 0.0) + Complex::from_polar(self.eta.sinh(), self.delta)).norm_sqr()
    }
}

/// Coupling `g`, beam width `σ` and number of repetitions `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    g: f64,
    sigma: f64,
    n_runs: u64,
}

impl Coupling {
    pub fn new(g: f64, sigma: f64, n_runs: u64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::param("sigma", format!("must be positive, got {sigma}")));
        }
        if !g.is_finite() || !(g / sigma).is_finite() {
            return Err(Error::param("g", format!("must be finite, got {g}")));
        }
        if n_runs == 0 {
            return Err(Error::param("n_runs", "must be at least 1"));
        }
        Ok(Self { g, sigma, n_runs })
    }

    /// Coupling given through its strength `s = g/σ`.
    pub fn from_strength(s: f64, sigma: f64, n_runs: u64) -> Result<Self> {
        Self::new(s * sigma, sigma, n_runs)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n_runs(&self) -> u64 {
        self.n_runs
    }

    /// `s = g/σ`.
    pub fn strength(&self) -> f64 {
        self.g / self.sigma
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(g, self.sigma, self.n_runs)
    }

    pub fn with_runs(&self, n_runs: u64) -> Result<Self> {
        Self::new(self.g, self.sigma, n_runs)
    }
}

/// Postselected-pointer means, with `⟨X⟩` also expressed in units of σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Means {
    pub x: f64,
    pub x_over_sigma: f64,
    pub p: f64,
}

impl Means {
    fn new(x: f64, p: f64, sigma: f64) -> Self {
        Self {
            x,
            x_over_sigma: x / sigma,
            p,
        }
    }
}

/// Which prefactor the squeezed-vacuum momentum mean uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqueezedMomentum {
    /// `cosh 2η + sinh 2η cos δ`, agrees with the Fock-space oracle.
    #[default]
    Exact,
    /// `1 + sinh 2η cos δ`, the literal form; wrong for η > 0.
    UnitPrefactor,
}

fn real(z: Complex) -> f64 {
    assert!(
        z.im.abs() <= 1e-12 * (1.0 + z.re.abs()),
        "residual imaginary part {:e} in a real quantity",
        z.im
    );
    z.re
}

/// `⟨φ|D(−s)|φ⟩` for the initial pointer, the only overlap the two-branch
/// normalization needs.
pub fn pointer_overlap(pointer: &Pointer, s: f64) -> Complex {
    let damp = (-0.5 * s * s).exp();
    match *pointer {
        Pointer::Coherent(c) => {
            let a = c.alpha();
            Complex::from_polar(damp, 2.0 * s * a.im)
        }
        Pointer::SqueezedVacuum(q) => Complex::new((-0.5 * s * s * q.stretch()).exp(), 0.0),
        Pointer::EvenCat(c) => {
            let a = c.alpha();
            let k2 = cat_norm_sq(c.r);
            let (ep, em) = cat_cross(a, s);
            Complex::new(k2 * (2.0 * (2.0 * s * a.im).cos() * damp + ep + em), 0.0)
        }
    }
}

/// Squared norm of `½[(1+A_w)D(s/2) + (1−A_w)D(−s/2)]|φ⟩` from its 2×2 Gram
/// matrix. The closed-form coefficients are `1/√` of this.
pub fn branch_norm_sq(sel: &SelectionPair, pointer: &Pointer, s: f64) -> Result<f64> {
    let aw = sel.weak_value()?;
    let one = Complex::new(1.0, 0.0);
    let (cp, cm) = (one + aw, one - aw);
    let o = pointer_overlap(pointer, s);
    let gram = cp.norm_sqr() + cm.norm_sqr() + cp.conj() * cm * o + cm.conj() * cp * o.conj();
    Ok(0.25 * real(gram))
}

fn cat_norm_sq(r: f64) -> f64 {
    1.0 / (2.0 + 2.0 * (-2.0 * r * r).exp())
}

/// `(e^{−|2α+s|²/2}, e^{−|2α−s|²/2})`.
fn cat_cross(alpha: Complex, s: f64) -> (f64, f64) {
    let two_a = 2.0 * alpha;
    let plus = (two_a + s).norm_sqr();
    let minus = (two_a - s).norm_sqr();
    ((-0.5 * plus).exp(), (-0.5 * minus).exp())
}

// Coherent pointer

/// λ.
pub fn coherent_norm(sel: &SelectionPair, ptr: &Coherent, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let s = cfg.strength();
    let a = ptr.alpha();
    let w = (1.0 - aw.conj()) * (1.0 + aw) * Complex::from_polar(1.0, -2.0 * s * a.im);
    let bracket = 1.0 + aw.norm_sqr() + w.re * (-0.5 * s * s).exp();
    Ok(2f64.sqrt() / bracket.sqrt())
}

pub fn coherent_mean_x(sel: &SelectionPair, ptr: &Coherent, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let lambda = coherent_norm(sel, ptr, cfg)?;
    let s = cfg.strength();
    let a = ptr.alpha();
    let w = (1.0 - aw.conj()) * (1.0 + aw) * Complex::from_polar(1.0, -2.0 * s * a.im);
    let inner = (1.0 + aw.norm_sqr()) * a.re + s * aw.re + w.re * a.re * (-0.5 * s * s).exp();
    Ok(cfg.sigma() * lambda * lambda * inner)
}

pub fn coherent_mean_p(sel: &SelectionPair, ptr: &Coherent, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let lambda = coherent_norm(sel, ptr, cfg)?;
    let s = cfg.strength();
    let a = ptr.alpha();
    let cross =
        (1.0 - aw) * (1.0 + aw.conj()) * Complex::from_polar(1.0, 2.0 * s * a.im) * Complex::new(s, -2.0 * a.im);
    let inner = 2.0 * (1.0 + aw.norm_sqr()) * a.im - cross.im * (-0.5 * s * s).exp();
    Ok(lambda * lambda / (4.0 * cfg.sigma()) * inner)
}

// Squeezed vacuum

/// γ′.
pub fn squeezed_norm(sel: &SelectionPair, ptr: &Squeezed, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let s = cfg.strength();
    let damp = (-0.5 * s * s * ptr.stretch()).exp();
    let bracket = 1.0 + aw.norm_sqr() + (1.0 - aw.norm_sqr()) * damp;
    Ok(2f64.sqrt() / bracket.sqrt())
}

pub fn squeezed_mean_x(sel: &SelectionPair, ptr: &Squeezed, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let gamma = squeezed_norm(sel, ptr, cfg)?;
    let s = cfg.strength();
    let damp = (-0.5 * s * s * ptr.stretch()).exp();
    let g2 = cfg.g() * gamma * gamma;
    Ok(g2 * aw.re - g2 * aw.im * damp * (2.0 * ptr.eta).sinh() * ptr.delta.sin())
}

pub fn squeezed_mean_p(sel: &SelectionPair, ptr: &Squeezed, cfg: &Coupling) -> Result<f64> {
    squeezed_mean_p_with(sel, ptr, cfg, SqueezedMomentum::Exact)
}

pub fn squeezed_mean_p_with(
    sel: &SelectionPair,
    ptr: &Squeezed,
    cfg: &Coupling,
    form: SqueezedMomentum,
) -> Result<f64> {
    let aw = sel.weak_value()?;
    let gamma = squeezed_norm(sel, ptr, cfg)?;
    let s = cfg.strength();
    let sigma = cfg.sigma();
    let damp = (-0.5 * s * s * ptr.stretch()).exp();
    let lead = match form {
        SqueezedMomentum::Exact => (2.0 * ptr.eta).cosh(),
        SqueezedMomentum::UnitPrefactor => 1.0,
    };
    let factor = lead + (2.0 * ptr.eta).sinh() * ptr.delta.cos();
    Ok(cfg.g() * gamma * gamma / (2.0 * sigma * sigma) * aw.im * damp * factor)
}

// Even cat

/// `K = (2 + 2e^{−2|α|²})^{−1/2}`.
pub fn cat_norm(ptr: &EvenCat) -> f64 {
    cat_norm_sq(ptr.r).sqrt()
}

/// κ′.
pub fn cat_final_norm(sel: &SelectionPair, ptr: &EvenCat, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let s = cfg.strength();
    let a = ptr.alpha();
    let k2 = cat_norm_sq(ptr.r);
    let (ep, em) = cat_cross(a, s);
    let off = 1.0 - aw.norm_sqr();
    let bracket = 0.5 * (1.0 + aw.norm_sqr())
        + k2 * off * (2.0 * s * a.im).cos() * (-0.5 * s * s).exp()
        + 0.5 * k2 * off * (ep + em);
    Ok(1.0 / bracket.sqrt())
}

pub fn cat_mean_x(sel: &SelectionPair, ptr: &EvenCat, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let kappa = cat_final_norm(sel, ptr, cfg)?;
    let s = cfg.strength();
    let a = ptr.alpha();
    let k2 = cat_norm_sq(ptr.r);
    let (ep, em) = cat_cross(a, s);
    let damp = (-0.5 * s * s).exp();
    let inner = s * aw.re * (1.0 + (-2.0 * ptr.r * ptr.r).exp()) + 2.0 * aw.im * a.re * (2.0 * s * a.im).sin() * damp
        - aw.im * a.im * (ep - em);
    Ok(2.0 * cfg.sigma() * kappa * kappa * k2 * inner)
}

/// Uses κ′ in the prefactor.
pub fn cat_mean_p(sel: &SelectionPair, ptr: &EvenCat, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let kappa = cat_final_norm(sel, ptr, cfg)?;
    let s = cfg.strength();
    let a = ptr.alpha();
    let k2 = cat_norm_sq(ptr.r);
    let (ep, em) = cat_cross(a, s);
    let damp = (-0.5 * s * s).exp();
    let phase = 2.0 * s * a.im;
    let inner =
        (2.0 * a.re + s) * ep + 4.0 * phase.sin() * a.im * damp + 2.0 * s * phase.cos() * damp - (2.0 * a.re - s) * em;
    Ok(kappa * kappa * k2 * aw.im / (2.0 * cfg.sigma()) * inner)
}

// Zero-mean Gaussian pointer

/// `Z = 1 + ½(1 − |A_w|²)(e^{−s²/2} − 1)`.
pub fn gaussian_limit_z(sel: &SelectionPair, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let s = cfg.strength();
    Ok(1.0 + 0.5 * (1.0 - aw.norm_sqr()) * ((-0.5 * s * s).exp() - 1.0))
}

pub fn gaussian_limit_mean_x(sel: &SelectionPair, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    Ok(cfg.g() * aw.re / gaussian_limit_z(sel, cfg)?)
}

pub fn gaussian_limit_mean_p(sel: &SelectionPair, cfg: &Coupling) -> Result<f64> {
    let aw = sel.weak_value()?;
    let s = cfg.strength();
    let sigma = cfg.sigma();
    Ok(cfg.g() * aw.im * (-0.5 * s * s).exp() / (2.0 * sigma * sigma * gaussian_limit_z(sel, cfg)?))
}

// Dispatch over families

/// Closed-form normalization coefficient (λ, γ′ or κ′), the factor that
/// makes `½[(1+A_w)D(s/2) + (1−A_w)D(−s/2)]|φ⟩` a unit vector.
pub fn norm_coefficient(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<f64> {
    match pointer {
        Pointer::Coherent(c) => coherent_norm(sel, c, cfg),
        Pointer::SqueezedVacuum(q) => squeezed_norm(sel, q, cfg),
        Pointer::EvenCat(c) => cat_final_norm(sel, c, cfg),
    }
}

pub fn mean_x(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<f64> {
    match pointer {
        Pointer::Coherent(c) => coherent_mean_x(sel, c, cfg),
        Pointer::SqueezedVacuum(q) => squeezed_mean_x(sel, q, cfg),
        Pointer::EvenCat(c) => cat_mean_x(sel, c, cfg),
    }
}

pub fn mean_p(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<f64> {
    match pointer {
        Pointer::Coherent(c) => coherent_mean_p(sel, c, cfg),
        Pointer::SqueezedVacuum(q) => squeezed_mean_p(sel, q, cfg),
        Pointer::EvenCat(c) => cat_mean_p(sel, c, cfg),
    }
}

pub fn means(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<Means> {
    Ok(Means::new(
        mean_x(sel, pointer, cfg)?,
        mean_p(sel, pointer, cfg)?,
        cfg.sigma(),
    ))
}

/// Final mean minus initial mean, for both quadratures.
pub fn shift(sel: &SelectionPair, pointer: &Pointer, cfg: &Coupling) -> Result<Means> {
    let m = means(sel, pointer, cfg)?;
    let (x0, p0) = pointer.initial_means(cfg.sigma());
    Ok(Means::new(m.x - x0, m.p - p0, cfg.sigma()))
}
