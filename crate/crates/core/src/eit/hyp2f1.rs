//! The Gauss hypergeometric family `₂F₁(1, b; b+1; z)`.
//!
//! Inside `|z| ≤ 0.8` the defining series `b Σ zⁿ/(b+n)` is summed directly.
//! Elsewhere the Euler integral `b ∫₀¹ t^{b−1}/(1 − zt) dt` is used after the
//! substitution `t = e^{−s}`:
//!
//! ```text
//! F = b ∫₀^S e^{−bs}/(1 − z e^{−s}) ds  +  b e^{−bS} Σₖ wᵏ/(b+k),   w = z e^{−S}
//! ```
//!
//! with `S = ln(2|z|)` so the tail series converges geometrically with
//! ratio 1/2. The integrand has a simple pole at `s = ln z`, which nears the
//! real path as `z` approaches the cut `[1, ∞)`; its principal part is then
//! subtracted and integrated in closed form.

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::{re, Cx, Real};

const SERIES_RADIUS: f64 = 0.8;
const MAX_TERMS: usize = 20_000;

/// `₂F₁(1, b; b+1; z)` for `Re b > 0`, `z ∉ [1, ∞)`.
pub fn hyp2f1_special<T: Real>(b: Cx<T>, z: Cx<T>) -> Result<Cx<T>> {
    if !(b.re > T::zero()) || !b.re.is_finite() || !b.im.is_finite() {
        return Err(Error::Domain(format!("hyp2f1 requires Re b > 0, got b={:?}", (b.re.as_f64(), b.im.as_f64()))));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!(
            "hyp2f1 argument must be finite, got z={:?}",
            (z.re.as_f64(), z.im.as_f64())
        )));
    }
    if z.im == T::zero() && z.re >= T::one() {
        return Err(Error::BranchCut(format!("z={:e} lies on [1, inf)", z.re.as_f64())));
    }
    if z.norm() <= T::lit(SERIES_RADIUS) {
        series(b, z)
    } else {
        integral(b, z)
    }
}

fn series<T: Real>(b: Cx<T>, z: Cx<T>) -> Result<Cx<T>> {
    let tol = T::epsilon() * T::lit(16.0);
    let r = z.norm();
    let mut sum = re(T::zero());
    let mut zn = re(T::one());
    for n in 0..MAX_TERMS {
        let denom = b + re(T::lit(n as f64));
        let term = zn / denom;
        sum = sum + term;
        // Remaining terms are bounded by |term|·r/(1−r) since |b+n| grows.
        if n > 0 && term.norm() * r <= tol * (T::one() - r) * sum.norm() {
            return Ok(sum * b);
        }
        zn = zn * z;
    }
    Err(Error::NoConvergence(format!("hyp2f1 series at |z|={:e} did not converge in {MAX_TERMS} terms", r.as_f64())))
}

fn integral<T: Real>(b: Cx<T>, z: Cx<T>) -> Result<Cx<T>> {
    let ln_r = z.norm().ln();
    let upper = ln_r + T::LN_2();
    let scale = (-upper).exp();
    let w = z * scale;

    let opts = QuadOptions { abs_tol: T::zero(), rel_tol: T::target_tolerance(), max_segments: 4000 };

    // Simple pole of the integrand at s* = ln z with unit derivative of the
    // denominator; when it sits close to the real axis its principal part is
    // integrated analytically and only the smooth remainder numerically.
    let pole = z.ln();
    let subtract = pole.im.abs() < T::one();
    let strength = (-(b * pole)).exp();
    let principal = |s: T| if subtract { strength / (re(s) - pole) } else { re(T::zero()) };
    let body =
        integrate(|s: T| (-(b * s)).exp() / -expm1(pole - re(s)) - principal(s), T::zero(), upper, &[ln_r], opts)?;
    let analytic = if subtract {
        // Im(s − s*) keeps one sign along the real path, so the principal
        // logarithm is continuous on it.
        strength * ((re(upper) - pole).ln() - (-pole).ln())
    } else {
        re(T::zero())
    };

    let mut tail = re(T::zero());
    let mut wk = re(T::one());
    let tol = T::epsilon() * T::lit(16.0);
    let mut converged = false;
    for k in 0..MAX_TERMS {
        let term = wk / (b + re(T::lit(k as f64)));
        tail = tail + term;
        if k > 0 && term.norm() <= tol * tail.norm() {
            converged = true;
            break;
        }
        wk = wk * w;
    }
    if !converged {
        return Err(Error::NoConvergence("hyp2f1 tail series did not converge".into()));
    }
    Ok(b * (body.value + analytic + (-(b * upper)).exp() * tail))
}

// e^d − 1 without cancellation for small |d|; `1 − z e^{−s}` is `−expm1(ln z − s)`.
fn expm1<T: Real>(d: Cx<T>) -> Cx<T> {
    let half = (d.im * T::lit(0.5)).sin();
    let real = d.re.exp_m1() * d.im.cos() - T::lit(2.0) * half * half;
    Cx::new(real, d.re.exp() * d.im.sin())
}

/// `−ln(1−z)/z`: the `b = 1` member of the family in closed form.
pub fn hyp2f1_b1_closed<T: Real>(z: Cx<T>) -> Cx<T> {
    if z.norm() == T::zero() {
        return re(T::one());
    }
    -(re(T::one()) - z).ln() / z
}
