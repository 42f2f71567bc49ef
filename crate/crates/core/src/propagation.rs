//! Propagation of a Gaussian probe envelope through the EIT layer.
//!
//! The input envelope `exp[−(t/δt)²/2]` has the analytic spectrum
//! `Â(ν) = δt/√(2π) · exp(−ν²δt²/2)` (convention `Â(ν) = (2π)⁻¹∫dt e^{iνt}A(t)`).
//! After a distance `x` each component is multiplied by
//!
//! ```text
//! H(ν) = exp{[iν/v₀ − α(ν) − κ₃₁] x}
//! ```
//!
//! and the output envelope `A(t, x) = ∫dν e^{−iνt} Â(ν) H(ν)` is sampled by a
//! single FFT on a time window centred on the estimated group delay.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::eit::{alpha_closed, LambdaMedium};
use crate::error::{Error, Result};
use crate::scalar::{cx, re, Cx, Real};

/// Exponent real parts below this are flushed to zero.
const EXP_FLOOR: f64 = -700.0;
/// Envelope magnitude allowed at the window edges, relative to the peak.
const EDGE_LIMIT: f64 = 1e-6;

/// Discrete spectral grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid<T> {
    /// Number of detuning samples (power of two, ≥ 1024).
    pub n_nu: usize,
    /// Total detuning span, rad/s.
    pub nu_span: T,
}

impl<T: Real> SpectralGrid<T> {
    /// 4096 samples over `40/δt`.
    pub fn default_for(delta_t: T) -> Self {
        Self { n_nu: 4096, nu_span: T::lit(40.0) / delta_t }
    }

    pub fn nu_step(&self) -> T {
        self.nu_span / T::lit(self.n_nu as f64)
    }

    /// Sample spacing of the reconstructed time grid, `2π/ν_span`.
    pub fn time_step(&self) -> T {
        T::lit(2.0) * T::PI() / self.nu_span
    }

    pub fn window(&self) -> T {
        self.time_step() * T::lit(self.n_nu as f64)
    }

    pub fn detunings(&self) -> Vec<T> {
        let step = self.nu_step();
        let half = (self.n_nu / 2) as f64;
        (0..self.n_nu).map(|j| step * T::lit(j as f64 - half)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationScenario<T> {
    /// Input envelope duration δt, s.
    pub delta_t: T,
    /// Propagation distance, m.
    pub x: T,
    /// Bare polariton group velocity, m/s.
    pub v0: T,
    /// Background polariton loss κ(ω₃₁), 1/m.
    pub kappa31: T,
    pub medium: LambdaMedium<T>,
    /// Resonant absorption coefficient, 1/m. Ignored when the medium density is zero.
    pub alpha0: T,
    pub grid: SpectralGrid<T>,
}

impl<T: Real> PropagationScenario<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_t > T::zero() && self.delta_t.is_finite()) {
            return Err(Error::Domain("delta_t must be positive".into()));
        }
        if !(self.x >= T::zero() && self.x.is_finite()) {
            return Err(Error::Domain("propagation distance must be >= 0".into()));
        }
        if !(self.v0 > T::zero() && self.v0.is_finite()) {
            return Err(Error::Domain("v0 must be positive".into()));
        }
        if !(self.kappa31.is_finite() && self.alpha0 >= T::zero() && self.alpha0.is_finite()) {
            return Err(Error::Domain("kappa31 must be finite and alpha0 >= 0".into()));
        }
        let n = self.grid.n_nu;
        if n < 1024 || !n.is_power_of_two() {
            return Err(Error::Domain(format!("n_nu must be a power of two >= 1024, got {n}")));
        }
        if !(self.grid.nu_span * self.delta_t >= T::lit(10.0)) {
            return Err(Error::Domain(format!(
                "nu_span*delta_t = {:e} must be >= 10 to cover the pulse spectrum",
                (self.grid.nu_span * self.delta_t).as_f64()
            )));
        }
        self.medium.validate()?;
        if self.kappa31 > T::zero() && self.x > T::lit(10.0) / self.kappa31 {
            log::warn!(
                "event=long_propagation x={:e} kappa31={:e} note=beyond_ten_decay_lengths",
                self.x.as_f64(),
                self.kappa31.as_f64()
            );
        }
        Ok(())
    }

    fn medium_active(&self) -> bool {
        self.medium.density > T::zero() && self.alpha0 > T::zero()
    }

    /// α(ν) of the Λ medium; identically zero when the medium is absent.
    pub fn alpha(&self, nu: T) -> Result<Cx<T>> {
        if !self.medium_active() {
            return Ok(re(T::zero()));
        }
        Ok(alpha_closed(&self.medium, self.alpha0, nu)?.alpha)
    }

    /// Analytic group delay estimate `x (1/v₀ − ∂ν Im α |₀)` by a centred difference.
    pub fn group_delay_estimate(&self) -> Result<T> {
        let h = T::lit(1e-3) / self.delta_t;
        let slope = (self.alpha(h)?.im - self.alpha(-h)?.im) / (h + h);
        Ok(self.x * (T::one() / self.v0 - slope))
    }
}

/// `H(ν) = exp{[iν/v₀ − α(ν) − κ₃₁] x}`.
pub fn transfer_function<T: Real>(s: &PropagationScenario<T>, nu: T) -> Result<Cx<T>> {
    let alpha = s.alpha(nu)?;
    Ok(transfer_from_alpha(s, nu, alpha))
}

fn transfer_from_alpha<T: Real>(s: &PropagationScenario<T>, nu: T, alpha: Cx<T>) -> Cx<T> {
    let exponent = (cx(T::zero(), nu / s.v0) - alpha - re(s.kappa31)) * s.x;
    if exponent.re < T::lit(EXP_FLOOR) {
        return re(T::zero());
    }
    exponent.exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseMetrics<T> {
    /// Time of the output envelope maximum, s (input peak at t = 0).
    pub t_peak: T,
    /// `t_peak`; includes the ballistic term `x/v₀`.
    pub delay: T,
    /// `delay − x/v₀`.
    pub eit_delay: T,
    /// Output peak magnitude over input peak magnitude.
    pub amp_ratio: T,
    /// RMS width of |A|² relative to the input.
    pub width_ratio: T,
    /// `x / t_peak`, m/s.
    pub vg: T,
    /// `vg · δt`, m.
    pub l_sp: T,
    /// Intensity-weighted mean arrival time, s.
    pub centroid_delay: T,
    /// `∫|A_out|²dt / ∫|A_in|²dt`.
    pub energy_ratio: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseProfile<T> {
    pub times: Vec<T>,
    pub envelope: Vec<Cx<T>>,
    pub metrics: PulseMetrics<T>,
}

/// Input envelope `exp[−(t/δt)²/2]`.
pub fn gaussian_input<T: Real>(delta_t: T, t: T) -> T {
    let u = t / delta_t;
    (-(u * u) * T::lit(0.5)).exp()
}

pub fn propagate_pulse<T: Real>(s: &PropagationScenario<T>) -> Result<PulseProfile<T>> {
    s.validate()?;
    let n = s.grid.n_nu;
    let dnu = s.grid.nu_step();
    let dt = s.grid.time_step();
    let nus = s.grid.detunings();

    let t_center = (s.group_delay_estimate()? / dt).round() * dt;
    let spectrum_norm = s.delta_t / (T::lit(2.0) * T::PI()).sqrt();

    let mut buf: Vec<Complex<T>> = Vec::with_capacity(n);
    for (j, &nu) in nus.iter().enumerate() {
        let a_hat = spectrum_norm * (-(nu * s.delta_t) * (nu * s.delta_t) * T::lit(0.5)).exp();
        let h = transfer_function(s, nu)?;
        // e^{−iν t_c} shifts the window; (−1)^j recentres the time index.
        let shift = cx(T::zero(), -nu * t_center).exp();
        let sign = if j % 2 == 0 { T::one() } else { -T::one() };
        buf.push(h * shift * (a_hat * dnu * sign));
    }
    FftPlanner::<T>::new().plan_fft_forward(n).process(&mut buf);

    let half = (n / 2) as f64;
    let times: Vec<T> = (0..n).map(|k| t_center + dt * T::lit(k as f64 - half)).collect();
    let envelope: Vec<Cx<T>> = buf.into_iter().enumerate().map(|(k, v)| if k % 2 == 0 { v } else { -v }).collect();

    let metrics = extract_metrics(s, &times, &envelope, dt)?;
    Ok(PulseProfile { times, envelope, metrics })
}

fn extract_metrics<T: Real>(s: &PropagationScenario<T>, times: &[T], env: &[Cx<T>], dt: T) -> Result<PulseMetrics<T>> {
    let mags: Vec<T> = env.iter().map(|v| v.norm()).collect();
    let (imax, peak) =
        mags.iter().enumerate().fold((0, T::zero()), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    if !(peak > T::zero()) {
        return Err(Error::NoConvergence("propagated envelope vanished identically".into()));
    }
    let edge = mags[0].max(mags[mags.len() - 1]);
    if edge > T::lit(EDGE_LIMIT) * peak || imax == 0 || imax == mags.len() - 1 {
        return Err(Error::GridTooSmall(format!("edge/peak = {:e}; enlarge n_nu or nu_span", (edge / peak).as_f64())));
    }

    // Parabola through the logarithms of the three samples around the
    // discrete maximum; exact for a Gaussian peak.
    let (ym, y0, yp) = (mags[imax - 1], mags[imax], mags[imax + 1]);
    let (offset, peak_interp) = if ym > T::zero() && yp > T::zero() {
        let (lm, l0, lp) = (ym.ln(), y0.ln(), yp.ln());
        let curvature = lm - T::lit(2.0) * l0 + lp;
        if curvature < T::zero() {
            let off = T::lit(0.5) * (lm - lp) / curvature;
            (off, (l0 - T::lit(0.25) * (lm - lp) * off).exp())
        } else {
            (T::zero(), y0)
        }
    } else {
        (T::zero(), y0)
    };
    let t_peak = times[imax] + offset * dt;

    let mut energy = T::zero();
    let mut first = T::zero();
    for (t, m) in times.iter().zip(&mags) {
        let w = *m * *m;
        energy = energy + w;
        first = first + w * *t;
    }
    let centroid = first / energy;
    let mut second = T::zero();
    for (t, m) in times.iter().zip(&mags) {
        let d = *t - centroid;
        second = second + *m * *m * d * d;
    }
    let rms = (second / energy).sqrt();
    let input_rms = s.delta_t / T::SQRT_2();
    let input_energy = s.delta_t * T::PI().sqrt();

    let ballistic = s.x / s.v0;
    let vg = if t_peak > T::zero() { s.x / t_peak } else { T::infinity() };
    Ok(PulseMetrics {
        t_peak,
        delay: t_peak,
        eit_delay: t_peak - ballistic,
        amp_ratio: peak_interp,
        width_ratio: rms / input_rms,
        vg,
        l_sp: vg * s.delta_t,
        centroid_delay: centroid,
        energy_ratio: energy * dt / input_energy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayRow<T> {
    pub rabi: T,
    pub delay: T,
    pub eit_delay: T,
    pub amp_ratio: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelaySweep<T> {
    pub rows: Vec<DelayRow<T>>,
    /// Least-squares slope of `ln(eit_delay)` against `ln Ω`; `None` with
    /// fewer than two usable rows.
    pub slope: Option<T>,
}

/// Runs [`propagate_pulse`] for each control amplitude.
pub fn delay_vs_control<T: Real>(s: &PropagationScenario<T>, rabi_grid: &[T]) -> Result<DelaySweep<T>> {
    let rows = rabi_grid.iter().map(|&rabi| delay_row(s, rabi)).collect::<Result<Vec<_>>>()?;
    let slope = fit_delay_slope(&rows);
    Ok(DelaySweep { rows, slope })
}

pub fn delay_row<T: Real>(s: &PropagationScenario<T>, rabi: T) -> Result<DelayRow<T>> {
    if !(rabi > T::zero()) {
        return Err(Error::Domain(format!("control amplitude must be > 0, got {:e}", rabi.as_f64())));
    }
    let sc = PropagationScenario { medium: s.medium.with_rabi(rabi), ..*s };
    let m = propagate_pulse(&sc)?.metrics;
    Ok(DelayRow { rabi, delay: m.delay, eit_delay: m.eit_delay, amp_ratio: m.amp_ratio })
}

/// Log-log least-squares slope of EIT delay against control amplitude.
pub fn fit_delay_slope<T: Real>(rows: &[DelayRow<T>]) -> Option<T> {
    let pts: Vec<(T, T)> = rows
        .iter()
        .filter(|r| r.eit_delay > T::zero() && r.rabi > T::zero())
        .map(|r| (r.rabi.ln(), r.eit_delay.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = T::lit(pts.len() as f64);
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / n;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / n;
    let sxy = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    let sxx = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    if sxx == T::zero() {
        None
    } else {
        Some(sxy / sxx)
    }
}
