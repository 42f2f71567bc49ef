//! Complex permittivity and permeability of a half-space.
//!
//! Each response function is either a frequency-independent real constant or
//! the Drude form `ς(ω) = 1 − ω_f² / (ω(ω + iγ_f))`.

use crate::constants::{NIMM_MAGNETIC_LOSS_RATE, NIMM_MAGNETIC_RATIO, SILVER_LOSS_RATE, SILVER_PLASMA_FREQUENCY};
use crate::error::{Error, Result};
use crate::scalar::{cx, re, Cx, Real};

/// Plasma frequency and loss rate of a Drude response, both in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams<T> {
    pub plasma_frequency: T,
    pub loss_rate: T,
}

impl<T: Real> DrudeParams<T> {
    pub fn new(plasma_frequency: T, loss_rate: T) -> Result<Self> {
        let p = Self { plasma_frequency, loss_rate };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.plasma_frequency > T::zero() && self.plasma_frequency.is_finite()) {
            return Err(Error::Domain(format!("plasma frequency must be positive, got {:e}", self.plasma_frequency)));
        }
        if !(self.loss_rate >= T::zero() && self.loss_rate.is_finite()) {
            return Err(Error::Domain(format!("loss rate must be non-negative, got {:e}", self.loss_rate)));
        }
        Ok(())
    }

    /// `1 − ω_f²/(ω(ω+iγ))`, split into real and imaginary parts so that the
    /// lossless case is exactly real. Written in `ω_f/ω`, `γ/ω` to stay in
    /// range for `f32`.
    pub fn response(&self, omega: T) -> Cx<T> {
        let r = self.plasma_frequency / omega;
        let q = self.loss_rate / omega;
        let denom = T::one() + q * q;
        cx(T::one() - r * r / denom, r * r * q / denom)
    }

    /// `d(ως)/dω = 1 + ω_f²/(ω + iγ)²`.
    pub fn d_omega_response(&self, omega: T) -> Cx<T> {
        let r = self.plasma_frequency / omega;
        let w = cx(T::one(), self.loss_rate / omega);
        re(T::one()) + re(r * r) / (w * w)
    }
}

/// Frequency dependence of one response function (ε or μ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResponseModel<T> {
    Constant(T),
    Drude(DrudeParams<T>),
}

impl<T: Real> ResponseModel<T> {
    pub fn value(&self, omega: T) -> Cx<T> {
        match self {
            ResponseModel::Constant(v) => re(*v),
            ResponseModel::Drude(p) => p.response(omega),
        }
    }

    pub fn d_omega(&self, omega: T) -> Cx<T> {
        match self {
            ResponseModel::Constant(v) => re(*v),
            ResponseModel::Drude(p) => p.d_omega_response(omega),
        }
    }

    pub fn is_dispersive(&self) -> bool {
        matches!(self, ResponseModel::Drude(_))
    }
}

/// One half-space of the interface.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpaceMaterial<T> {
    pub epsilon: ResponseModel<T>,
    pub mu: ResponseModel<T>,
    pub label: String,
}

impl<T: Real> HalfSpaceMaterial<T> {
    pub fn new(epsilon: ResponseModel<T>, mu: ResponseModel<T>, label: impl Into<String>) -> Result<Self> {
        let m = Self { epsilon, mu, label: label.into() };
        m.validate()?;
        Ok(m)
    }

    /// Non-magnetic, non-dispersive dielectric.
    pub fn dielectric(epsilon: T) -> Result<Self> {
        Self::new(ResponseModel::Constant(epsilon), ResponseModel::Constant(T::one()), format!("dielectric-{epsilon}"))
    }

    /// Drude metal with unit permeability.
    pub fn drude_metal(electric: DrudeParams<T>, label: impl Into<String>) -> Result<Self> {
        Self::new(ResponseModel::Drude(electric), ResponseModel::Constant(T::one()), label)
    }

    /// Negative-index metamaterial: Drude permittivity and Drude permeability.
    pub fn nimm(electric: DrudeParams<T>, magnetic: DrudeParams<T>, label: impl Into<String>) -> Result<Self> {
        Self::new(ResponseModel::Drude(electric), ResponseModel::Drude(magnetic), label)
    }

    /// Silver with `ω_e = 1.37e16 rad/s`, `γ_e = 2.73e13 rad/s`.
    pub fn silver() -> Self {
        let e = DrudeParams { plasma_frequency: T::lit(SILVER_PLASMA_FREQUENCY), loss_rate: T::lit(SILVER_LOSS_RATE) };
        Self { epsilon: ResponseModel::Drude(e), mu: ResponseModel::Constant(T::one()), label: "silver".into() }
    }

    /// Silver-like electric response with a magnetic Drude resonance at
    /// `ω_m = 0.5 ω_e` and the given magnetic loss rate.
    pub fn nimm_default(gamma_m: T) -> Result<Self> {
        let e = DrudeParams::new(T::lit(SILVER_PLASMA_FREQUENCY), T::lit(SILVER_LOSS_RATE))?;
        let m = DrudeParams::new(T::lit(SILVER_PLASMA_FREQUENCY * NIMM_MAGNETIC_RATIO), gamma_m)?;
        Self::nimm(e, m, "nimm-default")
    }

    /// [`Self::nimm_default`] with `γ_m = 1e11 s⁻¹`.
    pub fn nimm_reference() -> Self {
        Self::nimm_default(T::lit(NIMM_MAGNETIC_LOSS_RATE)).expect("preset parameters are valid")
    }

    /// `ε₁ = 1.3`, `μ₁ = 1`.
    pub fn dielectric_1_3() -> Self {
        Self {
            epsilon: ResponseModel::Constant(T::lit(1.3)),
            mu: ResponseModel::Constant(T::one()),
            label: "dielectric-1.3".into(),
        }
    }

    /// Looks up a named preset. `nimm-default` uses `γ_m = 1e11 s⁻¹`.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "silver" => Some(Self::silver()),
            "nimm-default" => Some(Self::nimm_reference()),
            "dielectric-1.3" => Some(Self::dielectric_1_3()),
            _ => None,
        }
    }

    /// The ε ↔ μ exchanged material.
    pub fn dual(&self) -> Self {
        Self { epsilon: self.mu, mu: self.epsilon, label: format!("{}*", self.label) }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, model) in [("epsilon", &self.epsilon), ("mu", &self.mu)] {
            match model {
                ResponseModel::Constant(v) => {
                    if !(*v > T::zero() && v.is_finite()) {
                        return Err(Error::Domain(format!(
                            "{}: constant {name} must be positive, got {v:e}",
                            self.label
                        )));
                    }
                }
                ResponseModel::Drude(p) => p.validate()?,
            }
        }
        Ok(())
    }

    pub fn eval(&self, omega: T) -> Result<MaterialResponse<T>> {
        eval_material(self, omega)
    }
}

/// ε(ω) and μ(ω) of one half-space at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialResponse<T> {
    pub epsilon: Cx<T>,
    pub mu: Cx<T>,
    pub omega: T,
}

fn check_omega<T: Real>(omega: T) -> Result<()> {
    if omega > T::zero() && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("angular frequency must be positive, got {omega:e}")))
    }
}

pub fn eval_material<T: Real>(m: &HalfSpaceMaterial<T>, omega: T) -> Result<MaterialResponse<T>> {
    check_omega(omega)?;
    Ok(MaterialResponse { epsilon: m.epsilon.value(omega), mu: m.mu.value(omega), omega })
}

/// Analytic `(d(ωε)/dω, d(ωμ)/dω)`.
pub fn d_omega_material<T: Real>(m: &HalfSpaceMaterial<T>, omega: T) -> Result<(Cx<T>, Cx<T>)> {
    check_omega(omega)?;
    Ok((m.epsilon.d_omega(omega), m.mu.d_omega(omega)))
}
