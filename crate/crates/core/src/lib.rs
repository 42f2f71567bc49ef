//! Surface polaritons at dielectric–metal and dielectric–metamaterial
//! interfaces: complex dispersion and loss, single-mode normalisation, the
//! spectral response of an EIT (Λ-medium) layer near the interface, and
//! slow-light propagation of a Gaussian probe envelope.
//!
//! Every routine is generic over [`Real`] (`f32` or `f64`). The `f64`
//! aliases below are what most callers want.

// `!(x > 0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dispersion;
pub mod eit;
mod error;
pub mod materials;
pub mod propagation;
pub mod quadrature;
pub mod quantization;
mod scalar;

pub use dispersion::{
    find_abyss, find_abyss_with, group_velocity, polarization_support, sp_wavevector, AbyssSearch, Polarization,
};
pub use eit::{alpha_closed, alpha_quadrature, alpha_resonant, hyp2f1_special};
pub use error::{Error, Result};
pub use materials::{d_omega_material, eval_material, DrudeParams, ResponseModel};
pub use propagation::{delay_vs_control, propagate_pulse, transfer_function, SpectralGrid};
pub use quantization::{coupling_constant, mode_normalization, Dipole};
pub use scalar::{sqrt_forward, Cx, Real};

pub type Material = materials::HalfSpaceMaterial<f64>;
pub type MaterialResponse = materials::MaterialResponse<f64>;
pub type DispersionPoint = dispersion::DispersionPoint<f64>;
pub type AbyssResult = dispersion::AbyssResult<f64>;
pub type ModeNormalization = quantization::ModeNormalization<f64>;
pub type CouplingConstant = quantization::CouplingConstant<f64>;
pub type LambdaMedium = eit::LambdaMedium<f64>;
pub type EitResponse = eit::EitResponse<f64>;
pub type PropagationScenario = propagation::PropagationScenario<f64>;
pub type PulseMetrics = propagation::PulseMetrics<f64>;
pub type PulseProfile = propagation::PulseProfile<f64>;
pub type DelaySweep = propagation::DelaySweep<f64>;
pub type Complex64 = num_complex::Complex<f64>;
