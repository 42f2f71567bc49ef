//! CODATA 2018 SI constants and the reference material values used by presets.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

/// Electric plasma frequency of silver, rad/s.
pub const SILVER_PLASMA_FREQUENCY: f64 = 1.37e16;
/// Electric loss rate of silver, rad/s.
pub const SILVER_LOSS_RATE: f64 = 2.73e13;
/// Magnetic-to-electric plasma frequency ratio of the default metamaterial.
pub const NIMM_MAGNETIC_RATIO: f64 = 0.5;
/// Default magnetic loss rate of the metamaterial, rad/s.
pub const NIMM_MAGNETIC_LOSS_RATE: f64 = 1.0e11;
/// Loss normalisation used when reporting κ/κ₀, 1/m.
pub const KAPPA0: f64 = 1.0e4;

/// Atomic-scale transition dipole `e·a₀`, C·m.
pub fn atomic_dipole() -> f64 {
    ELEMENTARY_CHARGE * BOHR_RADIUS
}
