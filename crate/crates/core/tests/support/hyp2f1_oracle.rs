//! High-precision series oracle for ₂F₁(1, b; b+1; z), shared by the core
//! tests and the acceptance harness.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::{rngs::StdRng, Rng};

pub const TERMS: usize = 2000;

// Neumaier-compensated sum of a complex series.
pub fn compensated<I: Iterator<Item = C>>(terms: I) -> C {
    let (mut s, mut c) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
    for t in terms {
        let n = s + t;
        let corr = |s: f64, t: f64, n: f64| if s.abs() >= t.abs() { (s - n) + t } else { (t - n) + s };
        c += C::new(corr(s.re, t.re, n.re), corr(s.im, t.im, n.im));
        s = n;
    }
    s + c
}

// b Σ zⁿ/(b+n)
pub fn direct(b: C, z: C) -> C {
    let mut zn = C::new(1.0, 0.0);
    let terms = (0..TERMS).map(move |n| {
        let t = zn / (b + n as f64);
        zn *= z;
        t
    });
    b * compensated(terms)
}

// Pfaff: F(1,b;b+1;z) = (1−z)⁻¹ F(1,1;b+1;w), w = z/(z−1), term ratio (n+1)w/(b+1+n).
pub fn pfaff(b: C, z: C) -> C {
    let w = z / (z - 1.0);
    let mut t = C::new(1.0, 0.0);
    let terms = (0..TERMS).map(move |n| {
        let out = t;
        t = t * w * (n as f64 + 1.0) / (b + 1.0 + n as f64);
        out
    });
    compensated(terms) / (1.0 - z)
}

// Large |z|: F = b(−z)^{−b} π/sin(πb) + b Σ_{n≥0} z^{−(n+1)}/(n+1−b), b ∉ ℤ.
pub fn inverse(b: C, z: C) -> C {
    let pi = std::f64::consts::PI;
    let lead = b * (-z).powc(-b) * pi / (b * pi).sin();
    let iz = 1.0 / z;
    let mut p = iz;
    let terms = (0..TERMS).map(move |n| {
        let t = p / (n as f64 + 1.0 - b);
        p *= iz;
        t
    });
    lead + b * compensated(terms)
}

pub fn oracle(b: C, z: C) -> Option<C> {
    if (z / (z - 1.0)).norm() <= 0.9 {
        Some(pfaff(b, z))
    } else if z.norm() <= 0.9 {
        Some(direct(b, z))
    } else if z.norm() >= 1.2 {
        Some(inverse(b, z))
    } else {
        None
    }
}

pub fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn draw_b(rng: &mut StdRng) -> C {
    loop {
        let b = C::new(rng.gen_range(0.05..4.0), if rng.gen_bool(0.5) { rng.gen_range(-1.0..1.0) } else { 0.0 });
        // The large-|z| connection formula degenerates at integer b.
        if b.im.abs() > 0.05 || (b.re - b.re.round()).abs() > 0.05 {
            return b;
        }
    }
}

pub fn draw_z(rng: &mut StdRng) -> C {
    let r = 10f64.powf(rng.gen_range(-2.0..8.0));
    let th = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    C::from_polar(r, th)
}
