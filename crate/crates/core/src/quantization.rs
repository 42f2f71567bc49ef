//! Single-mode normalisation of a TM surface polariton.
//!
//! ```text
//! D   = ∂ω(ωε₁)(k₁²+k∥²)/k₁³ + ∂ω(ωε₂)(k₂²+k∥²)/k₂³
//! S   = ∂ω(ωμ₁) ε₁²/k₁³     + ∂ω(ωμ₂) ε₂²/k₂³
//! L_z = D + (ω²/c²) S
//! E₀  = √(ħω / (2π ε₀ L_y |L_z|))
//! ```
//!
//! With losses `L_z` is complex; only its modulus enters `E₀` and its phase
//! is kept on [`ModeNormalization`] for diagnostics.

use crate::constants::{HBAR, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::dispersion::{DispersionPoint, Polarization};
use crate::error::{Error, Result};
use crate::materials::{d_omega_material, HalfSpaceMaterial};
use crate::scalar::{cx, re, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeNormalization<T> {
    pub d_term: Cx<T>,
    pub s_term: Cx<T>,
    /// Transverse quantisation length, m.
    pub lz: Cx<T>,
    /// Per-mode field amplitude built from `|L_z|`.
    pub e0: T,
    /// Transverse quantisation width, m.
    pub ly: T,
    pub omega: T,
}

impl<T: Real> ModeNormalization<T> {
    pub fn lz_phase(&self) -> T {
        self.lz.arg()
    }
}

/// Emitter transition dipole: magnitude in C·m and a unit direction in the
/// (x, z) plane of propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dipole<T> {
    pub magnitude: T,
    pub direction: (T, T),
}

impl<T: Real> Dipole<T> {
    pub fn along_x(magnitude: T) -> Self {
        Self { magnitude, direction: (T::one(), T::zero()) }
    }

    pub fn along_z(magnitude: T) -> Self {
        Self { magnitude, direction: (T::zero(), T::one()) }
    }

    /// Normalises `direction`; a zero vector is kept as is.
    pub fn new(magnitude: T, direction: (T, T)) -> Self {
        let n = direction.0.hypot(direction.1);
        let direction = if n > T::zero() { (direction.0 / n, direction.1 / n) } else { direction };
        Self { magnitude, direction }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConstant<T> {
    /// Complex coupling, rad/s.
    pub g: Cx<T>,
    pub dipole: Dipole<T>,
    /// `d̂ · (e_x + i e_z k∥/k₁)`.
    pub polarization_overlap: Cx<T>,
}

impl<T: Real> CouplingConstant<T> {
    pub fn g_squared(&self) -> T {
        self.g.norm_sqr()
    }
}

pub fn mode_normalization<T: Real>(
    m1: &HalfSpaceMaterial<T>,
    m2: &HalfSpaceMaterial<T>,
    dp: &DispersionPoint<T>,
    ly: T,
) -> Result<ModeNormalization<T>> {
    if dp.polarization != Polarization::Tm {
        return Err(Error::Domain("mode normalisation is defined for TM modes only".into()));
    }
    if !dp.bound {
        return Err(Error::Domain(format!("mode at omega={:e} is not bound", dp.omega.as_f64())));
    }
    if !(ly > T::zero() && ly.is_finite()) {
        return Err(Error::Domain(format!("L_y must be positive, got {:e}", ly.as_f64())));
    }
    let omega = dp.omega;
    let (de1, dm1) = d_omega_material(m1, omega)?;
    let (de2, dm2) = d_omega_material(m2, omega)?;
    let kp = dp.k_complex();
    let kp2 = kp * kp;
    let (k1, k2) = (dp.k1, dp.k2);
    let k1c = k1 * k1 * k1;
    let k2c = k2 * k2 * k2;
    let (e1, e2) = (dp.medium1.epsilon, dp.medium2.epsilon);

    let d_term = de1 * (k1 * k1 + kp2) / k1c + de2 * (k2 * k2 + kp2) / k2c;
    let s_term = dm1 * e1 * e1 / k1c + dm2 * e2 * e2 / k2c;
    let k0 = omega / T::lit(SPEED_OF_LIGHT);
    let lz = d_term + s_term * re(k0 * k0);

    let lz_abs = lz.norm();
    if !(lz_abs > T::zero() && lz_abs.is_finite()) {
        return Err(Error::Nonphysical(format!("quantisation length |L_z|={:e}", lz_abs.as_f64())));
    }
    if lz.re <= T::zero() {
        log::debug!("event=lz_phase omega={:e} re_lz={:e} im_lz={:e}", omega.as_f64(), lz.re.as_f64(), lz.im.as_f64());
    }
    let energy = T::lit(HBAR) * omega;
    let e0 = (energy / (T::lit(2.0) * T::PI() * T::lit(VACUUM_PERMITTIVITY) * ly * lz_abs)).sqrt();
    Ok(ModeNormalization { d_term, s_term, lz, e0, ly, omega })
}

/// `g = d·(e_x + i e_z k∥/k₁) E₀ / ħ`.
pub fn coupling_constant<T: Real>(
    mn: &ModeNormalization<T>,
    dp: &DispersionPoint<T>,
    dipole: Dipole<T>,
) -> CouplingConstant<T> {
    let ratio = dp.k_complex() / dp.k1;
    let (dx, dz) = dipole.direction;
    let overlap = re(dx) + cx(T::zero(), T::one()) * ratio * dz;
    // d/ħ first keeps the intermediate within single-precision range.
    let g = overlap * (dipole.magnitude / T::lit(HBAR) * mn.e0);
    CouplingConstant { g, dipole, polarization_overlap: overlap }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{atomic_dipole, SILVER_PLASMA_FREQUENCY as WE};
    use crate::dispersion::sp_wavevector;

    fn operating_point() -> (HalfSpaceMaterial<f64>, HalfSpaceMaterial<f64>, DispersionPoint<f64>) {
        let d = HalfSpaceMaterial::dielectric_1_3();
        let n = HalfSpaceMaterial::nimm_reference();
        let p = sp_wavevector(&d, &n, 0.4093 * WE, Polarization::Tm).unwrap();
        assert!(p.bound);
        (d, n, p)
    }

    #[test]
    fn lz_is_d_plus_s_term() {
        let (d, n, p) = operating_point();
        let mn = mode_normalization(&d, &n, &p, 2.5e-6).unwrap();
        let k0 = p.omega / SPEED_OF_LIGHT;
        assert_eq!(mn.lz, mn.d_term + mn.s_term * k0 * k0);
        assert!(mn.e0.is_finite() && mn.e0 > 0.0);
    }

    #[test]
    fn symmetric_interface_has_no_mode() {
        let d = HalfSpaceMaterial::<f64>::dielectric_1_3();
        assert!(matches!(sp_wavevector(&d, &d, 1e15, Polarization::Tm), Err(Error::Singular { .. })));
    }

    #[test]
    fn unbound_or_te_rejected() {
        let (d, n, p) = operating_point();
        let mut q = p;
        q.bound = false;
        assert!(matches!(mode_normalization(&d, &n, &q, 2.5e-6), Err(Error::Domain(_))));
        let te = sp_wavevector(&d, &n, 0.4092 * WE, Polarization::Te).unwrap();
        assert!(mode_normalization(&d, &n, &te, 2.5e-6).is_err());
        assert!(mode_normalization(&d, &n, &p, 0.0).is_err());
    }

    #[test]
    fn x_dipole_in_grazing_limit() {
        let (d, n, mut p) = operating_point();
        let mn = mode_normalization(&d, &n, &p, 2.5e-6).unwrap();
        // Make k∥/k₁ vanish: overlap collapses to the x component.
        p.k1 *= 1e12;
        let c = coupling_constant(&mn, &p, Dipole::along_x(atomic_dipole()));
        assert!((c.g.norm() - atomic_dipole() * mn.e0 / HBAR).abs() < 1e-12 * c.g.norm());
        let z = coupling_constant(&mn, &p, Dipole::new(0.0, (0.0, 1.0)));
        assert_eq!(z.g, cx(0.0, 0.0));
    }

    #[test]
    fn doubling_ly_halves_g_squared() {
        let (d, n, p) = operating_point();
        let a = mode_normalization(&d, &n, &p, 2.5e-6).unwrap();
        let b = mode_normalization(&d, &n, &p, 5.0e-6).unwrap();
        let dip = Dipole::new(atomic_dipole(), (1.0, 1.0));
        let ga = coupling_constant(&a, &p, dip).g_squared();
        let gb = coupling_constant(&b, &p, dip).g_squared();
        assert!((ga / gb - 2.0).abs() < 1e-12);
    }
}
