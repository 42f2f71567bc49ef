use num_complex::Complex64 as C;
use polariton::{alpha_closed, alpha_quadrature, alpha_resonant, hyp2f1_special, LambdaMedium};
use rand::{rngs::StdRng, Rng, SeedableRng};

const GAMMA: f64 = 1e9;
const ALPHA0: f64 = 1e7;

fn medium() -> LambdaMedium {
    LambdaMedium {
        density: 1e24,
        thickness: 20.0 / 5.4e6,
        gamma21: 1e3,
        gamma31: GAMMA,
        rabi: GAMMA,
        k1_probe: 5.4e6,
        k1_control: 5.4e6,
        width: 2.5e-6,
    }
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo.log10()..hi.log10()))
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn closed_form_matches_quadrature_on_random_draws() {
    let mut rng = StdRng::seed_from_u64(200);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 200 {
        let k1s = log_uniform(&mut rng, 1e5, 1e7);
        let p = LambdaMedium {
            density: log_uniform(&mut rng, 1e20, 1e26),
            thickness: log_uniform(&mut rng, 0.1, 30.0) / k1s,
            gamma21: GAMMA * log_uniform(&mut rng, 1e-6, 1e-1),
            gamma31: GAMMA,
            rabi: GAMMA * log_uniform(&mut rng, 0.1, 10.0),
            k1_probe: k1s,
            k1_control: k1s / log_uniform(&mut rng, 0.5, 2.0),
            width: 2.5e-6,
        };
        let nu = GAMMA * log_uniform(&mut rng, 1e-3, 10.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let closed = alpha_closed(&p, ALPHA0, nu).unwrap();
        if closed.nudged {
            continue;
        }
        let quad = alpha_quadrature(&p, p.gsq_over_v0_for(ALPHA0), nu).unwrap();
        let e = rel(closed.alpha, quad);
        worst = worst.max(e);
        assert!(e < 1e-6, "{p:?} nu={nu:e}: closed {} vs quadrature {quad}, rel {e:e}", closed.alpha);
        checked += 1;
    }
    eprintln!("alpha closed-vs-quadrature worst relative error: {worst:e}");
}

#[test]
fn quadrature_reproduces_resonant_coefficient() {
    let gsq = 2.9e12;
    let v0 = 1.9e8;
    for kz in [20.5, 25.0, 40.0] {
        let p = LambdaMedium { rabi: 0.0, gamma21: 1e3, thickness: kz / 5.4e6, ..medium() };
        let want = alpha_resonant(&p, gsq, v0).unwrap();
        let got = alpha_quadrature(&p, gsq / v0, 0.0).unwrap();
        assert!(rel(got, C::new(want, 0.0)) < 1e-8, "k1s z0 = {kz}: {got} vs {want:e}");
    }
}

#[test]
fn resonant_coefficient_value() {
    // π n L_y |g|² / (k₁ˢ v₀ Γ₃₁) evaluated by hand.
    let p = medium();
    let want = std::f64::consts::PI * 1e24 * 2.5e-6 * 2.9e12 / (5.4e6 * 1.9e8 * 1e9);
    let got = alpha_resonant(&p, 2.9e12, 1.9e8).unwrap();
    assert!((got - want).abs() <= 1e-15 * want);
}

#[test]
fn transparency_without_ground_decoherence() {
    let p = LambdaMedium { gamma21: 0.0, ..medium() };
    let closed = alpha_closed(&p, ALPHA0, 0.0).unwrap();
    assert!(closed.alpha.re.abs() < 1e-12 * ALPHA0);
    let quad = alpha_quadrature(&p, p.gsq_over_v0_for(ALPHA0), 0.0).unwrap();
    assert!(quad.re.abs() < 1e-12 * ALPHA0);
}

#[test]
fn residual_absorption_grows_with_ground_decoherence() {
    let mut last = 0.0;
    for g21 in [1e-6, 1e-5, 1e-4, 1e-3] {
        let p = LambdaMedium { gamma21: g21 * GAMMA, ..medium() };
        let a = alpha_closed(&p, ALPHA0, 0.0).unwrap().alpha.re;
        assert!(a > last, "gamma21={g21}: {a:e} <= {last:e}");
        last = a;
    }
}

// First positive detuning at which Re α climbs to half of its peak value.
// For strong control the Autler–Townes peaks stay below α₀/2, so the level
// is taken relative to the spectrum's own maximum.
fn half_width(p: &LambdaMedium) -> f64 {
    let f = |nu: f64| alpha_closed(p, ALPHA0, nu).unwrap().alpha.re;
    let (peak_nu, peak) = (1..4000)
        .map(|i| i as f64 * 5e-3 * GAMMA)
        .map(|nu| (nu, f(nu)))
        .fold((0.0, f64::MIN), |b, c| if c.1 > b.1 { c } else { b });
    let level = 0.5 * peak;
    assert!(f(0.0) < level);
    let (mut lo, mut hi) = (0.0, peak_nu);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn transparency_window_power_broadens() {
    let mut last = 0.0;
    for r in [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let w = half_width(&medium().with_rabi(r * GAMMA));
        assert!(w > last, "rabi={r}: half-width {w:e} <= {last:e}");
        last = w;
    }
}

#[test]
fn semi_infinite_limit() {
    let nus = [0.0, 0.1 * GAMMA, -0.7 * GAMMA, 3.0 * GAMMA];
    for b in [1.0, 0.7, 1.6] {
        let base = LambdaMedium { k1_control: 5.4e6 / b, ..medium() };
        for nu in nus {
            // z₀ → ∞ keeps only F(1/β).
            let beta = base.beta(nu);
            let inf =
                C::new(0.0, GAMMA) / C::new(nu, GAMMA) * hyp2f1_special(C::new(b, 0.0), 1.0 / beta).unwrap() * ALPHA0;
            for kz in [20.5, 30.0] {
                let p = LambdaMedium { thickness: kz / 5.4e6, ..base };
                let a = alpha_closed(&p, ALPHA0, nu).unwrap().alpha;
                assert!(rel(a, inf) < 1e-6, "b={b} nu={nu:e} k1s z0={kz}: {a} vs {inf}");
            }
        }
    }
}

#[test]
fn weak_control_recovers_two_level_absorption() {
    let p = LambdaMedium { rabi: 1e-4 * GAMMA, gamma21: 1e-3 * GAMMA, thickness: 40.0 / 5.4e6, ..medium() };
    let g = alpha_closed(&p, ALPHA0, 0.0).unwrap().g;
    assert!((g - 1.0).norm() < 1e-4, "G = {g}");
}

#[test]
fn control_off_is_exact_limit() {
    let p = LambdaMedium { rabi: 0.0, ..medium() };
    let tiny = LambdaMedium { rabi: 1e-7 * GAMMA, ..medium() };
    for nu in [0.0, 0.3 * GAMMA, -2.0 * GAMMA] {
        let a = alpha_closed(&p, ALPHA0, nu).unwrap().alpha;
        let b = alpha_closed(&tiny, ALPHA0, nu).unwrap().alpha;
        assert!(rel(b, a) < 1e-6, "nu={nu:e}: {b} vs {a}");
    }
}

#[test]
fn empty_medium_quadrature_vanishes() {
    let p = LambdaMedium { density: 0.0, ..medium() };
    assert_eq!(alpha_quadrature(&p, 1.0, 0.2 * GAMMA).unwrap(), C::new(0.0, 0.0));
}

#[test]
fn passive_medium_absorbs() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..100 {
        let p = medium().with_rabi(GAMMA * log_uniform(&mut rng, 0.1, 10.0));
        let nu = GAMMA * rng.gen_range(-10.0..10.0);
        assert!(alpha_closed(&p, ALPHA0, nu).unwrap().alpha.re >= -1e-12 * ALPHA0);
    }
}
