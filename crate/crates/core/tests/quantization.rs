#![allow(clippy::excessive_precision)]

use polariton::constants::{atomic_dipole, HBAR, VACUUM_PERMITTIVITY};
use polariton::materials::DrudeParams;
use polariton::{coupling_constant, mode_normalization, sp_wavevector, Dipole, Material, Polarization};

const WE: f64 = 1.37e16;
const LY: f64 = 2.5e-6;

fn lossless_nimm() -> Material {
    Material::nimm(DrudeParams::new(WE, 0.0).unwrap(), DrudeParams::new(0.5 * WE, 0.0).unwrap(), "lossless").unwrap()
}

fn lossless_metal() -> Material {
    Material::drude_metal(DrudeParams::new(WE, 0.0).unwrap(), "lossless").unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs()
}

#[test]
fn normalisation_matches_high_precision_evaluation() {
    // D, S, L_z, E₀ in 40-digit arithmetic with numerically differentiated ως.
    let table = [
        (
            lossless_nimm(),
            0.45,
            0.000010779074430928816198,
            3.4221033805524122905e-20,
            0.000025250718793603801504,
            13.606093301190190638,
        ),
        (
            lossless_metal(),
            0.5,
            3.2506400670898999609e-7,
            2.0486493249139867232e-22,
            4.320205508519479948e-7,
            109.64702673165612412,
        ),
        (
            lossless_metal(),
            0.6,
            1.5242658394796505879e-7,
            2.1335459933094330269e-23,
            1.6846657932211616929e-7,
            192.34584395001854292,
        ),
    ];
    let host = Material::dielectric_1_3();
    for (m2, x, d, s, lz, e0) in table {
        let p = sp_wavevector(&host, &m2, x * WE, Polarization::Tm).unwrap();
        assert!(p.bound);
        let n = mode_normalization(&host, &m2, &p, LY).unwrap();
        assert!(close(n.d_term.re, d, 1e-8) && n.d_term.im == 0.0, "{x}: D {}", n.d_term);
        assert!(close(n.s_term.re, s, 1e-8) && n.s_term.im == 0.0, "{x}: S {}", n.s_term);
        assert!(close(n.lz.re, lz, 1e-8), "{x}: Lz {}", n.lz);
        assert!(close(n.e0, e0, 1e-8), "{x}: E0 {}", n.e0);
    }
}

#[test]
fn coupling_times_volume_is_invariant() {
    // |g|² L_y |L_z| = d² ω / (2π ε₀ ħ) for an in-plane dipole.
    let w = 0.45 * WE;
    let want = atomic_dipole().powi(2) * w / (2.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * HBAR);
    for (eps1, gm, ly) in [(1.3, 1e11, 2.5e-6), (1.3, 1e13, 2.5e-6), (1.1, 1e11, 1e-6), (1.6, 1e12, 7e-6)] {
        let m1 = Material::dielectric(eps1).unwrap();
        let m2 = Material::nimm_default(gm).unwrap();
        let p = sp_wavevector(&m1, &m2, w, Polarization::Tm).unwrap();
        assert!(p.bound, "eps1={eps1} gm={gm:e}");
        let n = mode_normalization(&m1, &m2, &p, ly).unwrap();
        let g = coupling_constant(&n, &p, Dipole::along_x(atomic_dipole()));
        let got = g.g_squared() * ly * n.lz.norm();
        assert!(close(got, want, 1e-12), "eps1={eps1} gm={gm:e}: {got:e} vs {want:e}");
    }
}

#[test]
fn normal_dipole_picks_up_field_ratio() {
    let host = Material::dielectric_1_3();
    let m2 = Material::nimm_reference();
    let p = sp_wavevector(&host, &m2, 0.45 * WE, Polarization::Tm).unwrap();
    let n = mode_normalization(&host, &m2, &p, LY).unwrap();
    let gx = coupling_constant(&n, &p, Dipole::along_x(1e-29)).g_squared();
    let gz = coupling_constant(&n, &p, Dipole::along_z(1e-29)).g_squared();
    let ratio = (p.k_complex() / p.k1).norm_sqr();
    assert!(close(gz / gx, ratio, 1e-12));
}

#[test]
fn rejects_unsupported_modes() {
    let host = Material::dielectric_1_3();
    let m2 = Material::nimm_reference();
    let te = sp_wavevector(&host, &m2, 0.45 * WE, Polarization::Te).unwrap();
    assert!(mode_normalization(&host, &m2, &te, LY).is_err());
    let below = sp_wavevector(&host, &m2, 0.40 * WE, Polarization::Tm).unwrap();
    assert!(!below.bound && mode_normalization(&host, &m2, &below, LY).is_err());
    let tm = sp_wavevector(&host, &m2, 0.45 * WE, Polarization::Tm).unwrap();
    assert!(mode_normalization(&host, &m2, &tm, 0.0).is_err());
}
