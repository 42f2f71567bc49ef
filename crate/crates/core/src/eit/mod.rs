//! Spectral response of a surface-polariton probe coupled to a Λ medium of
//! uniform density filling `0 < z < z₀` above the interface.
//!
//! The absorption/dispersion coefficient is the transverse average
//!
//! ```text
//! α(ν)/2π = (|g|²/v₀) ∫dy ∫dz n (γ₂₁ − iν) e^{−2k₁ˢz} / (|Ω|²e^{−2k₁ᶜz} − (ν+iγ₂₁)(ν+iΓ₃₁))
//! ```
//!
//! which integrates to `α = α₀ G` with
//!
//! ```text
//! G = iΓ₃₁/(ν+iΓ₃₁) [F(1/β) − e^{−2k₁ˢz₀} F(e^{−2k₁ᶜz₀}/β)],   F = ₂F₁(1, b; b+1; ·), b = k₁ˢ/k₁ᶜ
//! β = (ν+iγ₂₁)(ν+iΓ₃₁)/|Ω|²,   α₀ = π n L_y |g|² / (k₁ˢ v₀ Γ₃₁).
//! ```
//!
//! [`alpha_closed`] evaluates the hypergeometric form, [`alpha_quadrature`]
//! integrates over `z` directly and is the independent check of the former.

mod hyp2f1;

pub use hyp2f1::{hyp2f1_b1_closed, hyp2f1_special};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::{cx, re, Cx, Real};

/// Parameters of the Λ-medium layer and of the probe/control confinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaMedium<T> {
    /// Emitter density, 1/m³.
    pub density: T,
    /// Layer thickness z₀, m.
    pub thickness: T,
    /// Ground-state coherence decay γ₂₁, rad/s.
    pub gamma21: T,
    /// Optical linewidth Γ₃₁ = Δ_w + γ₃₁, rad/s.
    pub gamma31: T,
    /// Control Rabi amplitude at the interface, rad/s.
    pub rabi: T,
    /// Probe normal decay constant k₁ˢ, 1/m.
    pub k1_probe: T,
    /// Control normal decay constant k₁ᶜ, 1/m.
    pub k1_control: T,
    /// Transverse width L_y, m.
    pub width: T,
}

impl<T: Real> LambdaMedium<T> {
    pub fn validate(&self) -> Result<()> {
        let fin = |v: T| v.is_finite();
        let checks = [
            (self.density >= T::zero() && fin(self.density), "density must be >= 0"),
            (self.thickness > T::zero() && fin(self.thickness), "thickness must be > 0"),
            (self.gamma21 >= T::zero() && fin(self.gamma21), "gamma21 must be >= 0"),
            (self.gamma31 > T::zero() && fin(self.gamma31), "gamma31 must be > 0"),
            (self.rabi >= T::zero() && fin(self.rabi), "rabi must be >= 0"),
            (self.k1_probe > T::zero() && fin(self.k1_probe), "k1_probe must be > 0"),
            (self.k1_control > T::zero() && fin(self.k1_control), "k1_control must be > 0"),
            (self.width > T::zero() && fin(self.width), "width must be > 0"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::Domain(msg.into()));
            }
        }
        if self.gamma21 >= self.gamma31 {
            log::warn!(
                "event=eit_regime gamma21={:e} gamma31={:e} note=gamma21_not_small",
                self.gamma21.as_f64(),
                self.gamma31.as_f64()
            );
        }
        Ok(())
    }

    pub fn with_rabi(mut self, rabi: T) -> Self {
        self.rabi = rabi;
        self
    }

    /// `b = k₁ˢ/k₁ᶜ`.
    pub fn confinement_ratio(&self) -> T {
        self.k1_probe / self.k1_control
    }

    /// `β(ν) = (ν+iγ₂₁)(ν+iΓ₃₁)/|Ω|²`; infinite when the control is off.
    pub fn beta(&self, nu: T) -> Cx<T> {
        let p = cx(nu, self.gamma21) * cx(nu, self.gamma31);
        p / (self.rabi * self.rabi)
    }

    /// `|g|²/v₀` implied by a resonant coefficient α₀ through
    /// `α₀ = π n L_y |g|² / (k₁ˢ v₀ Γ₃₁)`.
    pub fn gsq_over_v0_for(&self, alpha0: T) -> T {
        if self.density == T::zero() {
            return T::zero();
        }
        alpha0 * self.k1_probe * self.gamma31 / (T::PI() * self.density * self.width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EitResponse<T> {
    /// Detuning at which the response was evaluated (after any nudge), rad/s.
    pub nu: T,
    /// Complex absorption/dispersion coefficient, 1/m.
    pub alpha: Cx<T>,
    pub beta: Cx<T>,
    /// Spectral function G.
    pub g: Cx<T>,
    /// The detuning was shifted off the hypergeometric branch cut.
    pub nudged: bool,
}

/// Detuning shift applied when `1/β` falls on the branch cut, in units of Γ₃₁.
pub const CUT_NUDGE: f64 = 1e-6;

/// The bracket `F(1/β) − e^{−2k₁ˢz₀} F(e^{−2k₁ᶜz₀}/β)`.
fn bracket<T: Real>(p: &LambdaMedium<T>, beta: Cx<T>) -> Result<Cx<T>> {
    let b = re(p.confinement_ratio());
    let probe_decay = (-(T::lit(2.0) * p.k1_probe * p.thickness)).exp();
    let control_decay = (-(T::lit(2.0) * p.k1_control * p.thickness)).exp();
    if beta.norm() == T::zero() {
        // Perfect transparency: both F terms vanish as |1/β| → ∞.
        return Ok(re(T::zero()));
    }
    let inv = re(T::one()) / beta;
    let near = hyp2f1_special(b, inv)?;
    let far =
        if probe_decay == T::zero() { re(T::zero()) } else { hyp2f1_special(b, inv * control_decay)? * probe_decay };
    Ok(near - far)
}

fn spectral_function<T: Real>(p: &LambdaMedium<T>, nu: T) -> Result<(Cx<T>, Cx<T>)> {
    let prefactor = cx(T::zero(), p.gamma31) / cx(nu, p.gamma31);
    if p.rabi == T::zero() {
        // Control off: F(0) = 1 for both terms.
        let probe_decay = (-(T::lit(2.0) * p.k1_probe * p.thickness)).exp();
        let beta = cx(T::infinity(), T::zero());
        return Ok((beta, prefactor * (T::one() - probe_decay)));
    }
    let beta = p.beta(nu);
    Ok((beta, prefactor * bracket(p, beta)?))
}

/// `α(ν) = α₀ G(ν)` from the hypergeometric closed form.
///
/// A zero control amplitude is handled as the exact `Ω → 0` limit. If `1/β`
/// lands on the branch cut the detuning is shifted by `10⁻⁶ Γ₃₁` once.
pub fn alpha_closed<T: Real>(p: &LambdaMedium<T>, alpha0: T, nu: T) -> Result<EitResponse<T>> {
    p.validate()?;
    let (nu_eval, (beta, g), nudged) = match spectral_function(p, nu) {
        Ok(r) => (nu, r, false),
        Err(Error::BranchCut(msg)) => {
            let shifted = nu + T::lit(CUT_NUDGE) * p.gamma31;
            log::warn!("event=branch_cut_nudge nu={:e} shifted={:e} detail=\"{msg}\"", nu.as_f64(), shifted.as_f64());
            (shifted, spectral_function(p, shifted)?, true)
        }
        Err(e) => return Err(e),
    };
    Ok(EitResponse { nu: nu_eval, alpha: g * alpha0, beta, g, nudged })
}

/// Direct adaptive quadrature of the transverse average over `0 < z < z₀`.
///
/// `gsq_over_v0` is `|g|²/v₀` in rad²·s⁻²·(s/m). The `y` integral reduces to
/// the factor `L_y` for uniform density.
pub fn alpha_quadrature<T: Real>(p: &LambdaMedium<T>, gsq_over_v0: T, nu: T) -> Result<Cx<T>> {
    p.validate()?;
    if p.density == T::zero() || gsq_over_v0 == T::zero() {
        return Ok(re(T::zero()));
    }
    let two = T::lit(2.0);
    let numerator = cx(p.gamma21, -nu);
    let product = cx(nu, p.gamma21) * cx(nu, p.gamma31);
    let rabi_sq = p.rabi * p.rabi;
    let integrand = |z: T| -> Cx<T> {
        let weight = (-(two * p.k1_probe * z)).exp();
        let control = rabi_sq * (-(two * p.k1_control * z)).exp();
        numerator * weight / (re(control) - product)
    };

    // The denominator is smallest where |Ω|²e^{−2k₁ᶜz} = Re[(ν+iγ₂₁)(ν+iΓ₃₁)].
    let mut breaks = Vec::new();
    if rabi_sq > T::zero() && product.re > T::zero() {
        let zp = -(product.re / rabi_sq).ln() / (two * p.k1_control);
        if zp > T::zero() && zp < p.thickness {
            breaks.push(zp);
        }
    }
    let opts = QuadOptions { abs_tol: T::zero(), rel_tol: T::target_tolerance(), max_segments: 8000 };
    let r = integrate(integrand, T::zero(), p.thickness, &breaks, opts)?;
    Ok(r.value * (two * T::PI() * gsq_over_v0 * p.density * p.width))
}

/// `α₀ = π n L_y |g|² / (k₁ˢ v₀ Γ₃₁)`.
pub fn alpha_resonant<T: Real>(p: &LambdaMedium<T>, gsq: T, v0: T) -> Result<T> {
    if !(p.gamma31 > T::zero() && p.k1_probe > T::zero() && v0 > T::zero()) {
        return Err(Error::Domain(format!(
            "alpha_resonant needs positive gamma31, k1_probe and v0 (got {:e}, {:e}, {:e})",
            p.gamma31.as_f64(),
            p.k1_probe.as_f64(),
            v0.as_f64()
        )));
    }
    if !(p.density >= T::zero() && p.width > T::zero() && gsq >= T::zero()) {
        return Err(Error::Domain("alpha_resonant needs n >= 0, L_y > 0, |g|^2 >= 0".into()));
    }
    Ok(T::PI() * p.density * p.width * gsq / (p.k1_probe * v0 * p.gamma31))
}
