//! Complex surface-polariton wave vector at a two-media interface.
//!
//! For TM polarisation the in-plane wave vector is
//!
//! ```text
//! k∥ + iκ = (ω/c) √( ε₁ε₂(ε₂μ₁ − ε₁μ₂) / (ε₂² − ε₁²) )
//! ```
//!
//! and the TE relation follows by exchanging ε and μ everywhere. The normal
//! decay constants are `k_j = √(k∥² − ω²ε_jμ_j/c²)` and a mode is bound when
//! both decay away from the interface and `k₁ς₂ + k₂ς₁ = 0` holds on the
//! chosen branches (`ς = ε` for TM, `ς = μ` for TE).

use std::fmt;

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::materials::{eval_material, HalfSpaceMaterial, MaterialResponse};
use crate::scalar::{re, sqrt_forward, Cx, Real};

/// Relative boundary-condition mismatch above which a root of the squared
/// dispersion relation is treated as spurious for the chosen branches.
const BOUND_RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    Tm,
    Te,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::Tm, Polarization::Te];
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::Tm => "TM",
            Polarization::Te => "TE",
        })
    }
}

impl std::str::FromStr for Polarization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TM" => Ok(Polarization::Tm),
            "TE" => Ok(Polarization::Te),
            other => Err(Error::Domain(format!("unknown polarization `{other}`"))),
        }
    }
}

/// Solution of the dispersion relation at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint<T> {
    pub omega: T,
    /// Re of the in-plane wave vector, 1/m.
    pub k_par: T,
    /// Im of the in-plane wave vector (propagation loss), 1/m.
    pub kappa: T,
    /// Normal decay constant in medium 1, 1/m.
    pub k1: Cx<T>,
    /// Normal decay constant in medium 2, 1/m.
    pub k2: Cx<T>,
    pub polarization: Polarization,
    pub bound: bool,
    /// `|k₁ς₂ + k₂ς₁| / max(|k₁ς₂|, |k₂ς₁|)`.
    pub bc_residual: T,
    pub medium1: MaterialResponse<T>,
    pub medium2: MaterialResponse<T>,
}

impl<T: Real> DispersionPoint<T> {
    pub fn k_complex(&self) -> Cx<T> {
        Cx::new(self.k_par, self.kappa)
    }
}

fn boundary_response<T: Real>(r: &MaterialResponse<T>, pol: Polarization) -> (Cx<T>, Cx<T>) {
    match pol {
        Polarization::Tm => (r.epsilon, r.mu),
        Polarization::Te => (r.mu, r.epsilon),
    }
}

/// Solves the dispersion relation for one polarisation at one frequency.
pub fn sp_wavevector<T: Real>(
    m1: &HalfSpaceMaterial<T>,
    m2: &HalfSpaceMaterial<T>,
    omega: T,
    pol: Polarization,
) -> Result<DispersionPoint<T>> {
    let r1 = eval_material(m1, omega)?;
    let r2 = eval_material(m2, omega)?;
    let (s1, o1) = boundary_response(&r1, pol);
    let (s2, o2) = boundary_response(&r2, pol);

    let denom = s2 * s2 - s1 * s1;
    if denom.norm() < T::lit(1e-12) * s1.norm_sqr() {
        return Err(Error::Singular { omega: omega.as_f64() });
    }
    let radicand = s1 * s2 * (s2 * o1 - s1 * o2) / denom;
    let k0 = omega / T::lit(SPEED_OF_LIGHT);
    let n_eff = sqrt_forward(radicand);
    let k = n_eff * k0;

    // k_j² = k0²(n_eff² − ε_jμ_j); using the radicand directly avoids
    // squaring n_eff and the associated loss of the small imaginary part.
    let k1 = sqrt_forward(radicand - r1.epsilon * r1.mu) * k0;
    let k2 = sqrt_forward(radicand - r2.epsilon * r2.mu) * k0;

    let a = k1 * s2;
    let b = k2 * s1;
    let scale = a.norm().max(b.norm());
    let bc_residual = if scale > T::zero() { (a + b).norm() / scale } else { T::zero() };
    let bound = k1.re > T::zero() && k2.re > T::zero() && bc_residual < T::lit(BOUND_RESIDUAL_TOL);

    Ok(DispersionPoint {
        omega,
        k_par: k.re,
        kappa: k.im,
        k1,
        k2,
        polarization: pol,
        bound,
        bc_residual,
        medium1: r1,
        medium2: r2,
    })
}

/// Polarisations that admit a bound surface mode at `omega`.
///
/// A polarisation whose dispersion denominator vanishes (e.g. TE at a
/// non-magnetic interface) simply contributes nothing; the call only fails if
/// both polarisations are degenerate.
pub fn polarization_support<T: Real>(
    m1: &HalfSpaceMaterial<T>,
    m2: &HalfSpaceMaterial<T>,
    omega: T,
) -> Result<Vec<Polarization>> {
    let mut out = Vec::with_capacity(2);
    let mut singular = 0;
    for pol in Polarization::ALL {
        match sp_wavevector(m1, m2, omega, pol) {
            Ok(p) if p.bound => out.push(pol),
            Ok(_) => {}
            Err(Error::Singular { .. }) => singular += 1,
            Err(e) => return Err(e),
        }
    }
    if singular == Polarization::ALL.len() {
        return Err(Error::Singular { omega: omega.as_f64() });
    }
    Ok(out)
}

/// Group velocity `dω/dk∥` by centred differences with step halving and
/// Richardson extrapolation.
pub fn group_velocity<T: Real>(
    m1: &HalfSpaceMaterial<T>,
    m2: &HalfSpaceMaterial<T>,
    omega: T,
    pol: Polarization,
) -> Result<T> {
    let center = sp_wavevector(m1, m2, omega, pol)?;
    if !center.bound {
        return Err(Error::Domain(format!("no bound {pol} mode at omega={:e} rad/s", omega.as_f64())));
    }
    let slope = |h: T| -> Result<T> {
        let kp = sp_wavevector(m1, m2, omega + h, pol)?.k_par;
        let km = sp_wavevector(m1, m2, omega - h, pol)?.k_par;
        Ok((kp - km) / (h + h))
    };

    let tol = T::lit(1e-7).max(T::epsilon().sqrt() * T::lit(4.0));
    let mut h = omega * T::lit(1e-4);
    let mut prev = slope(h)?;
    let mut last_rel = T::infinity();
    for _ in 0..12 {
        let half = h * T::lit(0.5);
        let next = slope(half)?;
        // Backward-wave branches have a negative slope; only a sign flip
        // between steps means the stencil is not resolving the curve.
        if next != T::zero() && (next > T::zero()) == (prev > T::zero()) {
            let rel = ((next - prev) / next).abs();
            last_rel = rel;
            if rel < tol {
                let extrapolated = (T::lit(4.0) * next - prev) / T::lit(3.0);
                return Ok(T::one() / extrapolated);
            }
        }
        prev = next;
        h = half;
    }
    Err(Error::NoConvergence(format!(
        "group velocity at omega={:e}: stencil did not settle (last relative change {:e}, slope {:e})",
        omega.as_f64(),
        last_rel.as_f64(),
        prev.as_f64()
    )))
}

/// Minimum-loss point of the dispersion curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbyssResult<T> {
    pub omega0: T,
    pub kappa_at_omega0: T,
    /// Normalised mismatch of the electric/magnetic loss-balance condition at
    /// `omega0`; 0 for exact cancellation, 1 when it cannot hold at all.
    pub residual: T,
    /// `residual ≤ 0.05`: the minimum is a genuine loss cancellation.
    pub cancellation: bool,
    pub bound: bool,
}

/// Search settings for [`find_abyss_with`].
#[derive(Debug, Clone, Copy)]
pub struct AbyssSearch {
    pub coarse_points: usize,
    pub rel_tol: f64,
}

impl Default for AbyssSearch {
    fn default() -> Self {
        Self { coarse_points: 512, rel_tol: 1e-9 }
    }
}

pub const ABYSS_RESIDUAL_WARN: f64 = 0.05;

/// Normalised mismatch of
/// `μ_i/ε_i = (μ_r(ε_r²+ε₁²) − 2ε_rε₁) / (ε_r(ε_r²−ε₁²))`,
/// written cross-multiplied so that it stays bounded in `[0, 1]`.
pub fn loss_balance_residual<T: Real>(medium1_sigma: T, sigma2: Cx<T>, other2: Cx<T>) -> T {
    let (er, ei) = (sigma2.re, sigma2.im);
    let (mr, mi) = (other2.re, other2.im);
    let e1 = medium1_sigma;
    let lhs = mi * er * (er * er - e1 * e1);
    let rhs = ei * (mr * (er * er + e1 * e1) - T::lit(2.0) * er * e1);
    let scale = lhs.abs() + rhs.abs();
    if scale > T::zero() {
        (lhs - rhs).abs() / scale
    } else {
        T::zero()
    }
}

pub fn find_abyss<T: Real>(
    m1: &HalfSpaceMaterial<T>,
    m2: &HalfSpaceMaterial<T>,
    band: (T, T),
    pol: Polarization,
) -> Result<AbyssResult<T>> {
    find_abyss_with(m1, m2, band, pol, AbyssSearch::default())
}

/// Locates the minimum of `|κ(ω)|` in `band`: coarse grid scan, then golden
/// section on the bracketing cell.
pub fn find_abyss_with<T: Real>(
    m1: &HalfSpaceMaterial<T>,
    m2: &HalfSpaceMaterial<T>,
    band: (T, T),
    pol: Polarization,
    search: AbyssSearch,
) -> Result<AbyssResult<T>> {
    let (lo, hi) = band;
    if !(lo > T::zero() && hi > lo) {
        return Err(Error::Domain(format!("invalid search band [{:e}, {:e}]", lo.as_f64(), hi.as_f64())));
    }
    let n = search.coarse_points.max(3);
    let loss = |w: T| -> T {
        match sp_wavevector(m1, m2, w, pol) {
            Ok(p) => p.kappa.abs(),
            Err(_) => T::infinity(),
        }
    };
    let step = (hi - lo) / T::lit((n - 1) as f64);
    let grid: Vec<T> = (0..n).map(|i| lo + step * T::lit(i as f64)).collect();
    let values: Vec<T> = grid.iter().map(|&w| loss(w)).collect();
    let (imin, vmin) =
        values.iter().enumerate().fold((0, T::infinity()), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
    if !vmin.is_finite() {
        return Err(Error::NotFound(format!("no {pol} solution anywhere in band")));
    }
    if imin == 0 || imin == n - 1 {
        return Err(Error::NotFound(format!(
            "|kappa| is minimal at the band edge omega={:e} rad/s; no interior {pol} loss minimum",
            grid[imin].as_f64()
        )));
    }

    let omega0 = golden_section(loss, grid[imin - 1], grid[imin + 1], T::lit(search.rel_tol));
    let p = sp_wavevector(m1, m2, omega0, pol)?;
    let (s2, o2) = boundary_response(&p.medium2, pol);
    let (s1, _) = boundary_response(&p.medium1, pol);
    let residual = loss_balance_residual(s1.re, s2, o2);
    let cancellation = residual <= T::lit(ABYSS_RESIDUAL_WARN);
    if !cancellation {
        log::warn!(
            "event=abyss_residual omega0={:e} residual={:e} note=minimum_is_not_a_loss_cancellation",
            omega0.as_f64(),
            residual.as_f64()
        );
    }
    Ok(AbyssResult { omega0, kappa_at_omega0: p.kappa, residual, cancellation, bound: p.bound })
}

fn golden_section<T: Real, F: Fn(T) -> T>(f: F, mut a: T, mut b: T, rel_tol: T) -> T {
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    let floor = T::epsilon() * T::lit(4.0);
    for _ in 0..200 {
        if (b - a) <= rel_tol.max(floor) * (a.abs() + b.abs()) * T::lit(0.5) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    (a + b) * T::lit(0.5)
}

/// Uniform grid of `points` angular frequencies covering `[lo, hi]`.
pub fn frequency_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::lit((points - 1) as f64);
            (0..points).map(|i| lo + step * T::lit(i as f64)).collect()
        }
    }
}

/// Residual of `k_j² = k∥² − ω²ε_jμ_j/c²` relative to the larger term.
pub fn normal_constant_residual<T: Real>(p: &DispersionPoint<T>, medium: usize) -> T {
    let (kj, r) = if medium == 1 { (p.k1, &p.medium1) } else { (p.k2, &p.medium2) };
    let k0 = p.omega / T::lit(SPEED_OF_LIGHT);
    let kc = p.k_complex();
    let bulk = r.epsilon * r.mu * re(k0 * k0);
    let lhs = kj * kj;
    let rhs = kc * kc - bulk;
    (lhs - rhs).norm() / (kc * kc).norm().max(bulk.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::SILVER_PLASMA_FREQUENCY as WE;
    use crate::materials::{DrudeParams, HalfSpaceMaterial};

    fn pair() -> (HalfSpaceMaterial<f64>, HalfSpaceMaterial<f64>) {
        (HalfSpaceMaterial::dielectric_1_3(), HalfSpaceMaterial::nimm_reference())
    }

    #[test]
    fn metal_interface_is_tm_only_and_lossy() {
        let d = HalfSpaceMaterial::dielectric_1_3();
        let ag = HalfSpaceMaterial::silver();
        let w_sp = WE / (1.0f64 + 1.3).sqrt();
        for w in frequency_grid(0.05 * WE, 0.999 * w_sp, 200) {
            let p = sp_wavevector(&d, &ag, w, Polarization::Tm).unwrap();
            assert!(p.bound, "unbound at {}", w / WE);
            assert!(p.kappa > 0.0);
        }
        assert_eq!(polarization_support(&d, &ag, 0.41 * WE).unwrap(), vec![Polarization::Tm]);
        assert!(matches!(sp_wavevector(&d, &ag, 0.41 * WE, Polarization::Te), Err(Error::Singular { .. })));
    }

    #[test]
    fn nimm_supports_both_polarizations() {
        let (d, n) = pair();
        assert_eq!(polarization_support(&d, &n, 0.4092 * WE).unwrap(), vec![Polarization::Tm, Polarization::Te]);
    }

    #[test]
    fn vacuum_pair_is_degenerate() {
        let v = HalfSpaceMaterial::<f64>::dielectric(1.0).unwrap();
        assert!(matches!(sp_wavevector(&v, &v, 1e15, Polarization::Tm), Err(Error::Singular { .. })));
        assert!(matches!(polarization_support(&v, &v, 1e15), Err(Error::Singular { .. })));
    }

    #[test]
    fn lossless_real_radicand_gives_zero_kappa() {
        let d = HalfSpaceMaterial::dielectric_1_3();
        let n = HalfSpaceMaterial::nimm(
            DrudeParams::new(WE, 0.0).unwrap(),
            DrudeParams::new(0.5 * WE, 0.0).unwrap(),
            "lossless",
        )
        .unwrap();
        let p = sp_wavevector(&d, &n, 0.45 * WE, Polarization::Tm).unwrap();
        assert!(p.k_par > 0.0);
        assert_eq!(p.kappa, 0.0);
    }

    #[test]
    fn decay_constants_satisfy_definition() {
        let (d, n) = pair();
        for w in frequency_grid(0.3 * WE, 0.5 * WE, 101) {
            for pol in Polarization::ALL {
                let p = sp_wavevector(&d, &n, w, pol).unwrap();
                assert!(normal_constant_residual(&p, 1) < 1e-10);
                assert!(normal_constant_residual(&p, 2) < 1e-10);
            }
        }
    }

    #[test]
    fn group_velocity_requires_bound_mode() {
        let (d, n) = pair();
        // Below the loss minimum the TM root is not bound on the decaying branches.
        let p = sp_wavevector(&d, &n, 0.40 * WE, Polarization::Tm).unwrap();
        assert!(!p.bound);
        assert!(matches!(group_velocity(&d, &n, 0.40 * WE, Polarization::Tm), Err(Error::Domain(_))));
    }

    #[test]
    fn metal_has_no_interior_abyss() {
        let d = HalfSpaceMaterial::dielectric_1_3();
        let ag = HalfSpaceMaterial::silver();
        let r = find_abyss(&d, &ag, (0.3 * WE, 0.5 * WE), Polarization::Tm);
        match r {
            Err(Error::NotFound(_)) => {}
            Ok(a) => assert!(!a.cancellation),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn residual_is_one_without_magnetic_loss() {
        let r: f64 = loss_balance_residual(1.3, Cx::new(-5.0, 0.03), Cx::new(1.0, 0.0));
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_band_rejected() {
        let (d, n) = pair();
        assert!(find_abyss(&d, &n, (0.5 * WE, 0.3 * WE), Polarization::Tm).is_err());
    }

    #[test]
    fn polarization_parses() {
        assert_eq!("tm".parse::<Polarization>().unwrap(), Polarization::Tm);
        assert_eq!("TE".parse::<Polarization>().unwrap(), Polarization::Te);
        assert!("TEM".parse::<Polarization>().is_err());
    }
}
