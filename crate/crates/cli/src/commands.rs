//! The four sweep commands. Each returns its tables (and charts); writing
//! happens afterwards on a single thread in a fixed order.

use num_complex::Complex64;
use polariton::constants::SPEED_OF_LIGHT;
use polariton::dispersion::{frequency_grid, AbyssSearch};
use polariton::{
    alpha_closed, alpha_quadrature, alpha_resonant, coupling_constant, find_abyss_with, group_velocity,
    mode_normalization, polarization_support, propagate_pulse, propagation::fit_delay_slope, propagation::DelayRow,
    sp_wavevector, Dipole, Error, LambdaMedium, Material, Polarization, PropagationScenario, SpectralGrid,
};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::config::{Orientation, Scenario};
use crate::error::CliError;
use crate::plot::{Chart, Series};
use crate::table::{Cell, Table};

pub struct Output {
    pub tables: Vec<Table>,
    pub charts: Vec<(String, Chart)>,
}

const NAN: f64 = f64::NAN;

fn par_map<T, R, F>(pool: &ThreadPool, items: &[T], f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, CliError> + Sync + Send,
{
    pool.install(|| items.par_iter().map(f).collect())
}

fn band_grid(s: &Scenario) -> Vec<f64> {
    let we = s.materials.omega_e;
    frequency_grid(s.band.omega_min_ratio * we, s.band.omega_max_ratio * we, s.band.points)
}

fn abyss_search(s: &Scenario) -> AbyssSearch {
    AbyssSearch { coarse_points: s.band.abyss_coarse_points, ..AbyssSearch::default() }
}

fn dispersion_table(s: &Scenario, pool: &ThreadPool, medium2: &Material, name: &str) -> Result<Table, CliError> {
    let m1 = &s.materials.medium1;
    let pol = s.materials.polarization;
    let we = s.materials.omega_e;
    let rows = par_map(pool, &band_grid(s), |&w| {
        let (k_par, kappa, bound) = match sp_wavevector(m1, medium2, w, pol) {
            Ok(p) => (p.k_par, p.kappa, p.bound),
            Err(Error::Singular { .. }) => (NAN, NAN, false),
            Err(e) => return Err(e.into()),
        };
        let v0 = if bound { group_velocity(m1, medium2, w, pol).unwrap_or(NAN) } else { NAN };
        let support = match polarization_support(m1, medium2, w) {
            Ok(v) => v,
            Err(Error::Singular { .. }) => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(vec![
            Cell::from(w / we),
            k_par.into(),
            kappa.into(),
            (kappa / s.band.kappa0).into(),
            v0.into(),
            support.contains(&Polarization::Tm).into(),
            support.contains(&Polarization::Te).into(),
        ])
    })?;
    let mut t = Table::new(
        name,
        &[
            ("omega_over_we", "1"),
            ("k_par", "1/m"),
            ("kappa", "1/m"),
            ("kappa_over_kappa0", "1"),
            ("v0", "m/s"),
            ("bound_TM", "1"),
            ("bound_TE", "1"),
        ],
    );
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

struct Abyss {
    found: bool,
    omega0: f64,
    kappa: f64,
    residual: f64,
    cancellation: bool,
    bound: bool,
}

fn abyss(s: &Scenario, medium2: &Material) -> Result<Abyss, CliError> {
    let we = s.materials.omega_e;
    let band = (s.band.omega_min_ratio * we, s.band.omega_max_ratio * we);
    match find_abyss_with(&s.materials.medium1, medium2, band, s.materials.polarization, abyss_search(s)) {
        Ok(a) => Ok(Abyss {
            found: true,
            omega0: a.omega0,
            kappa: a.kappa_at_omega0,
            residual: a.residual,
            cancellation: a.cancellation,
            bound: a.bound,
        }),
        Err(Error::NotFound(msg)) => {
            log::debug!("event=abyss_not_found detail=\"{msg}\"");
            Ok(Abyss { found: false, omega0: NAN, kappa: NAN, residual: NAN, cancellation: false, bound: false })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn dispersion(s: &Scenario, pool: &ThreadPool) -> Result<Output, CliError> {
    let main = dispersion_table(s, pool, &s.materials.medium2, "dispersion.csv")?;
    let mut tables = vec![];
    let mut charts = vec![];

    let a = abyss(s, &s.materials.medium2)?;
    let we = s.materials.omega_e;
    if a.found {
        log::info!(
            "event=abyss omega0_over_we={:.7} kappa={:e} residual={:.4} cancellation={}",
            a.omega0 / we,
            a.kappa,
            a.residual,
            a.cancellation
        );
    } else {
        log::info!("event=abyss found=false medium2={}", s.materials.medium2.label);
    }
    let mut at = Table::new(
        "abyss.csv",
        &[
            ("found", "1"),
            ("omega0_over_we", "1"),
            ("kappa", "1/m"),
            ("kappa_over_kappa0", "1"),
            ("residual", "1"),
            ("cancellation", "1"),
            ("bound", "1"),
        ],
    );
    at.push(vec![
        a.found.into(),
        (a.omega0 / we).into(),
        a.kappa.into(),
        (a.kappa / s.band.kappa0).into(),
        a.residual.into(),
        a.cancellation.into(),
        a.bound.into(),
    ]);

    let mut series = vec![loss_series(&main, &s.materials.medium2.label)];
    let reference = match &s.materials.reference {
        Some(r) if s.materials.magnetic => Some(dispersion_table(s, pool, r, "dispersion_reference.csv")?),
        _ => None,
    };
    if let Some(r) = &reference {
        series.push(loss_series(r, "silver"));
    }
    if s.output.plot {
        charts.push((
            "fig3.svg".to_string(),
            Chart {
                title: "Polariton loss".into(),
                x_label: "omega / omega_e".into(),
                y_label: "|kappa| / kappa0".into(),
                log_y: true,
                series,
            },
        ));
    }
    tables.push(main);
    if let Some(r) = reference {
        tables.push(r);
    }
    tables.push(at);
    Ok(Output { tables, charts })
}

fn loss_series(t: &Table, label: &str) -> Series {
    let x = t.column("omega_over_we").unwrap_or_default();
    let y = t.column("kappa_over_kappa0").unwrap_or_default();
    Series { label: label.to_string(), points: x.into_iter().zip(y.into_iter().map(f64::abs)).collect() }
}

pub fn lossmap(s: &Scenario, pool: &ThreadPool) -> Result<Output, CliError> {
    if !s.materials.magnetic {
        return Err(CliError::Config("materials.medium2: lossmap needs a magnetic medium (nimm-default)".into()));
    }
    let b = &s.band;
    let ratios: Vec<f64> = if b.gamma_m_points == 1 {
        vec![b.gamma_m_ratio_min]
    } else {
        let (lo, hi) = (b.gamma_m_ratio_min.ln(), b.gamma_m_ratio_max.ln());
        (0..b.gamma_m_points).map(|i| (lo + (hi - lo) * i as f64 / (b.gamma_m_points - 1) as f64).exp()).collect()
    };
    let grid = band_grid(s);
    let we = s.materials.omega_e;
    let pol = s.materials.polarization;

    let rows = par_map(pool, &ratios, |&ratio| {
        let m2 = s.materials.medium2_with_gamma_m(ratio * s.materials.gamma_e)?;
        let mut map = Vec::with_capacity(grid.len());
        for &w in &grid {
            let kappa = match sp_wavevector(&s.materials.medium1, &m2, w, pol) {
                Ok(p) => p.kappa,
                Err(Error::Singular { .. }) => NAN,
                Err(e) => return Err(e.into()),
            };
            map.push(vec![Cell::from(ratio), (w / we).into(), (kappa / b.kappa0).into()]);
        }
        let a = abyss(s, &m2)?;
        let track = vec![
            Cell::from(ratio),
            a.found.into(),
            (a.omega0 / we).into(),
            (a.kappa / b.kappa0).into(),
            a.residual.into(),
            a.cancellation.into(),
        ];
        Ok((map, track))
    })?;

    let mut map =
        Table::new("lossmap.csv", &[("gamma_m_over_gamma_e", "1"), ("omega_over_we", "1"), ("kappa_over_kappa0", "1")]);
    let mut track = Table::new(
        "abyss_track.csv",
        &[
            ("gamma_m_over_gamma_e", "1"),
            ("found", "1"),
            ("omega0_over_we", "1"),
            ("kappa_over_kappa0", "1"),
            ("residual", "1"),
            ("cancellation", "1"),
        ],
    );
    for (m, t) in rows {
        m.into_iter().for_each(|r| map.push(r));
        track.push(t);
    }
    let mut charts = vec![];
    if s.output.plot {
        let x = track.column("gamma_m_over_gamma_e").unwrap_or_default();
        let y = track.column("omega0_over_we").unwrap_or_default();
        charts.push((
            "abyss_track.svg".to_string(),
            Chart {
                title: "Loss minimum against magnetic loss rate".into(),
                x_label: "log10(gamma_m / gamma_e)".into(),
                y_label: "omega0 / omega_e".into(),
                log_y: false,
                series: vec![Series { label: "omega0".into(), points: x.iter().map(|v| v.log10()).zip(y).collect() }],
            },
        ));
    }
    log::info!("event=lossmap gamma_points={} omega_points={}", ratios.len(), grid.len());
    Ok(Output { tables: vec![map, track], charts })
}

/// Dispersion-derived quantities at the probe frequency ω₃₁.
pub struct OperatingPoint {
    pub omega31: f64,
    pub k_par: f64,
    pub kappa: f64,
    pub v0: f64,
    pub k1: Complex64,
    pub lz: Complex64,
    pub e0: f64,
    pub g_abs: f64,
    pub medium: LambdaMedium,
    pub alpha0: f64,
    pub alpha0_derived: f64,
}

pub fn operating_point(s: &Scenario) -> Result<OperatingPoint, CliError> {
    let e = &s.eit;
    let we = s.materials.omega_e;
    let (m1, m2) = (&s.materials.medium1, &s.materials.medium2);
    let omega31 = match e.omega31_ratio {
        crate::config::Auto::Value(r) => r * we,
        crate::config::Auto::Auto => {
            let a = abyss(s, m2)?;
            if !a.found {
                return Err(Error::NotFound("eit.omega31_ratio = auto needs a loss minimum in the band".into()).into());
            }
            a.omega0
        }
    };
    let mut p = sp_wavevector(m1, m2, omega31, Polarization::Tm)?;
    if !p.bound && e.omega31_ratio.is_auto() {
        // κ changes sign at the loss minimum and the mode is bound only on
        // its high-frequency side; the search tolerance can leave ω₀ just below.
        for step in [1e-9, 1e-8, 1e-7, 1e-6] {
            let q = sp_wavevector(m1, m2, omega31 * (1.0 + step), Polarization::Tm)?;
            if q.bound {
                log::warn!("event=operating_point_shift relative_step={step:e} reason=unbound_at_loss_minimum");
                p = q;
                break;
            }
        }
    }
    let omega31 = p.omega;
    if !p.bound {
        return Err(Error::Domain(format!("no bound TM mode at omega31/omega_e = {:.6}", omega31 / we)).into());
    }
    let v0 = group_velocity(m1, m2, omega31, Polarization::Tm)?;
    let k1_probe = e.k1_probe.or(|| p.k1.norm());
    let k1_control = e.k1_control.or(|| k1_probe);
    let medium = LambdaMedium {
        density: e.density,
        thickness: e.thickness.or(|| 1.0 / k1_probe),
        gamma21: e.gamma21,
        gamma31: e.gamma31,
        rabi: e.rabi_ratios[0] * e.gamma31,
        k1_probe,
        k1_control,
        width: e.width,
    };
    medium.validate()?;
    let n = mode_normalization(m1, m2, &p, e.width)?;
    let dipole = match e.orientation {
        Orientation::X => Dipole::along_x(e.dipole),
        Orientation::Z => Dipole::along_z(e.dipole),
    };
    let g = coupling_constant(&n, &p, dipole);
    let alpha0_derived = alpha_resonant(&medium, g.g_squared(), v0)?;
    let alpha0 = e.alpha0.or(|| alpha0_derived);
    log::info!(
        "event=operating_point omega31_over_we={:.7} kappa31={:e} v0_over_c={:.4} k1_re={:e} k1_abs={:e} alpha0_derived={:e} alpha0={:e}",
        omega31 / we,
        p.kappa,
        v0 / SPEED_OF_LIGHT,
        p.k1.re,
        p.k1.norm(),
        alpha0_derived,
        alpha0
    );
    Ok(OperatingPoint {
        omega31,
        k_par: p.k_par,
        kappa: p.kappa,
        v0,
        k1: p.k1,
        lz: n.lz,
        e0: n.e0,
        g_abs: g.g.norm(),
        medium,
        alpha0,
        alpha0_derived,
    })
}

fn operating_point_table(s: &Scenario, op: &OperatingPoint) -> Table {
    let mut t = Table::new(
        "operating_point.csv",
        &[
            ("omega31_over_we", "1"),
            ("k_par", "1/m"),
            ("kappa31", "1/m"),
            ("kappa31_over_kappa0", "1"),
            ("v0", "m/s"),
            ("re_k1", "1/m"),
            ("im_k1", "1/m"),
            ("k1_probe", "1/m"),
            ("k1_control", "1/m"),
            ("thickness", "m"),
            ("re_lz", "m"),
            ("im_lz", "m"),
            ("e0", "V/m"),
            ("g_abs", "rad/s"),
            ("alpha0_derived", "1/m"),
            ("alpha0", "1/m"),
        ],
    );
    let m = &op.medium;
    t.push(
        [
            op.omega31 / s.materials.omega_e,
            op.k_par,
            op.kappa,
            op.kappa / s.band.kappa0,
            op.v0,
            op.k1.re,
            op.k1.im,
            m.k1_probe,
            m.k1_control,
            m.thickness,
            op.lz.re,
            op.lz.im,
            op.e0,
            op.g_abs,
            op.alpha0_derived,
            op.alpha0,
        ]
        .into_iter()
        .map(Cell::from)
        .collect(),
    );
    t
}

pub fn eit_spectrum(s: &Scenario, pool: &ThreadPool) -> Result<Output, CliError> {
    let op = operating_point(s)?;
    let e = &s.eit;
    let gamma = e.gamma31;
    let detunings: Vec<f64> = if e.detuning_points == 1 {
        vec![0.0]
    } else {
        let n = e.detuning_points - 1;
        (0..=n).map(|i| e.detuning_max_ratio * (2.0 * i as f64 / n as f64 - 1.0)).collect()
    };
    let jobs: Vec<(f64, f64)> = e.rabi_ratios.iter().flat_map(|&r| detunings.iter().map(move |&d| (r, d))).collect();
    let gsq_over_v0 = op.medium.gsq_over_v0_for(op.alpha0);
    let x = e.length;

    let rows = par_map(pool, &jobs, |&(ratio, d)| {
        let medium = op.medium.with_rabi(ratio * gamma);
        let closed = alpha_closed(&medium, op.alpha0, d * gamma)?;
        let quad = alpha_quadrature(&medium, gsq_over_v0, closed.nu)?;
        Ok(vec![
            Cell::from(ratio),
            d.into(),
            (closed.alpha.re * x).into(),
            (closed.alpha.im * x).into(),
            closed.g.re.into(),
            closed.g.im.into(),
            (quad.re * x).into(),
            (quad.im * x).into(),
            closed.nudged.into(),
        ])
    })?;
    let mut t = Table::new(
        "eit_spectrum.csv",
        &[
            ("rabi_over_Gamma31", "1"),
            ("nu_over_Gamma31", "1"),
            ("re_alpha_x", "1"),
            ("im_alpha_x", "1"),
            ("re_G", "1"),
            ("im_G", "1"),
            ("re_alpha_x_quadrature", "1"),
            ("im_alpha_x_quadrature", "1"),
            ("nudged", "1"),
        ],
    );
    rows.into_iter().for_each(|r| t.push(r));

    let mut charts = vec![];
    if s.output.plot {
        let series = e
            .rabi_ratios
            .iter()
            .enumerate()
            .map(|(i, r)| Series {
                label: format!("Omega = {r} Gamma31"),
                points: t.rows[i * detunings.len()..(i + 1) * detunings.len()]
                    .iter()
                    .map(|row| match (row[1], row[2]) {
                        (Cell::Float(a), Cell::Float(b)) => (a, b),
                        _ => (NAN, NAN),
                    })
                    .collect(),
            })
            .collect();
        charts.push((
            "eit_spectrum.svg".to_string(),
            Chart {
                title: "EIT absorption".into(),
                x_label: "nu / Gamma31".into(),
                y_label: "Re alpha x".into(),
                log_y: false,
                series,
            },
        ));
    }
    Ok(Output { tables: vec![operating_point_table(s, &op), t], charts })
}

fn mm_label(x: f64) -> String {
    let s = format!("{:.6}", x * 1e3);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Pulse scenario at the first configured distance and Rabi amplitude.
pub fn pulse_scenario(s: &Scenario, op: &OperatingPoint) -> Result<PropagationScenario, CliError> {
    let p = &s.pulse;
    let sc = PropagationScenario {
        delta_t: p.delta_t,
        x: p.distances[0],
        v0: p.v0.or(|| op.v0),
        kappa31: p.kappa31.or(|| op.kappa),
        medium: op.medium,
        alpha0: op.alpha0,
        grid: SpectralGrid { n_nu: p.n_nu, nu_span: p.nu_span_factor / p.delta_t },
    };
    sc.validate()?;
    Ok(sc)
}

pub fn propagate(s: &Scenario, pool: &ThreadPool) -> Result<Output, CliError> {
    let op = operating_point(s)?;
    let p = &s.pulse;
    let gamma = s.eit.gamma31;
    let base = pulse_scenario(s, &op)?;

    // (distance, rabi ratio, medium present)
    let mut jobs = Vec::new();
    for &x in &p.distances {
        for &r in &s.eit.rabi_ratios {
            jobs.push((x, r, true));
        }
        if p.control_row {
            jobs.push((x, 0.0, false));
        }
    }
    let results = par_map(pool, &jobs, |&(x, r, present)| {
        let mut sc = PropagationScenario { x, ..base };
        if present {
            sc.medium = sc.medium.with_rabi(r * gamma);
        } else {
            sc.medium.density = 0.0;
        }
        Ok(propagate_pulse(&sc)?)
    })?;

    let dt = p.delta_t;
    let mut metrics = Table::new(
        "metrics.csv",
        &[
            ("x", "m"),
            ("rabi_over_Gamma31", "1"),
            ("medium", "1"),
            ("t_peak", "s"),
            ("delay_over_delta_t", "1"),
            ("eit_delay_over_delta_t", "1"),
            ("amp_ratio", "1"),
            ("width_ratio", "1"),
            ("vg", "m/s"),
            ("l_sp", "m"),
            ("centroid_delay", "s"),
            ("energy_ratio", "1"),
        ],
    );
    let mut pulses: Vec<Table> = p
        .distances
        .iter()
        .map(|&x| {
            Table::new(
                format!("pulse_x{}mm.csv", mm_label(x)),
                &[("rabi_over_Gamma31", "1"), ("t_Gamma31", "1"), ("t_over_delta_t", "1"), ("abs_envelope", "1")],
            )
        })
        .collect();
    let mut slopes = Table::new("delay_slope.csv", &[("x", "m"), ("slope", "1"), ("points", "1")]);
    let mut chart_series = vec![];
    let plot_ratio =
        s.eit.rabi_ratios.iter().copied().min_by(|a, b| (a.ln().abs()).total_cmp(&b.ln().abs())).unwrap_or(1.0);

    for (xi, &x) in p.distances.iter().enumerate() {
        let mut rows = Vec::new();
        for ((jx, r, present), prof) in jobs.iter().zip(&results) {
            if *jx != x {
                continue;
            }
            let m = &prof.metrics;
            metrics.push(vec![
                Cell::from(x),
                (*r).into(),
                (*present).into(),
                m.t_peak.into(),
                (m.delay / dt).into(),
                (m.eit_delay / dt).into(),
                m.amp_ratio.into(),
                m.width_ratio.into(),
                m.vg.into(),
                m.l_sp.into(),
                m.centroid_delay.into(),
                m.energy_ratio.into(),
            ]);
            if *present {
                rows.push(DelayRow { rabi: r * gamma, delay: m.delay, eit_delay: m.eit_delay, amp_ratio: m.amp_ratio });
                for (t, a) in prof.times.iter().zip(&prof.envelope) {
                    pulses[xi].push(vec![Cell::from(*r), (t * gamma).into(), (t / dt).into(), a.norm().into()]);
                }
                if *r == plot_ratio {
                    chart_series.push(Series {
                        label: format!("x = {} mm", mm_label(x)),
                        points: prof.times.iter().zip(&prof.envelope).map(|(t, a)| (t / dt, a.norm())).collect(),
                    });
                }
            }
            log::info!(
                "event=pulse x={x:e} rabi_over_Gamma31={r} medium={present} eit_delay_over_delta_t={:.4} amp_ratio={:.4} vg={:e}",
                m.eit_delay / dt,
                m.amp_ratio,
                m.vg
            );
        }
        let slope = fit_delay_slope(&rows);
        if let Some(v) = slope {
            log::info!("event=delay_slope x={x:e} slope={v:.4}");
        }
        slopes.push(vec![Cell::from(x), slope.unwrap_or(NAN).into(), rows.len().into()]);
    }

    let mut input =
        Table::new("pulse_input.csv", &[("t_Gamma31", "1"), ("t_over_delta_t", "1"), ("abs_envelope", "1")]);
    let step = base.grid.time_step();
    let half = (p.n_nu / 2) as f64;
    let input_points: Vec<(f64, f64)> = (0..p.n_nu)
        .map(|k| {
            let t = step * (k as f64 - half);
            (t, polariton::propagation::gaussian_input(dt, t))
        })
        .collect();
    for &(t, a) in &input_points {
        input.push(vec![Cell::from(t * gamma), (t / dt).into(), a.into()]);
    }

    let mut charts = vec![];
    if s.output.plot {
        let mut series =
            vec![Series { label: "input".into(), points: input_points.iter().map(|&(t, a)| (t / dt, a)).collect() }];
        series.extend(chart_series);
        charts.push((
            "pulse_profiles.svg".to_string(),
            Chart {
                title: format!("Probe envelope, Omega = {plot_ratio} Gamma31"),
                x_label: "t / delta_t".into(),
                y_label: "|A|".into(),
                log_y: false,
                series,
            },
        ));
    }
    let mut tables = vec![operating_point_table(s, &op), metrics, slopes, input];
    tables.append(&mut pulses);
    Ok(Output { tables, charts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn millimetre_labels() {
        assert_eq!(mm_label(1e-3), "1");
        assert_eq!(mm_label(3e-3), "3");
        assert_eq!(mm_label(0.5e-3), "0.5");
    }
}
