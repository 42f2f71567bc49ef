#![allow(clippy::excessive_precision)]

use num_complex::Complex64 as C;
use polariton::hyp2f1_special;
use rand::{rngs::StdRng, SeedableRng};

#[path = "support/hyp2f1_oracle.rs"]
mod support;
use support::{draw_b, draw_z, oracle, rel};

#[test]
fn oracle_reproduces_reference_values() {
    // mpmath hyp2f1(1, b, b+1, z) at 50 digits.
    let table = [
        (
            [2.0789993594387388, 0.0],
            [1.9935325280491409, -0.8697639481575023],
            [-0.19914027473233882394, -1.1452145583182922191],
        ),
        (
            [0.30258072836639494, -0.81857397331226989],
            [-2912.0814794714394, 5941.952791033155],
            [0.057676909787370579816, 0.04432322821617498044],
        ),
        (
            [0.58282764848361779, 0.0],
            [71.877045533023921, 72.554117138257794],
            [0.035053616927133766989, 0.11550006085513381887],
        ),
    ];
    for (b, z, v) in table {
        let (b, z, v) = (C::new(b[0], b[1]), C::new(z[0], z[1]), C::new(v[0], v[1]));
        assert!(rel(oracle(b, z).unwrap(), v) < 1e-12);
    }
}

#[test]
fn random_arguments_match_series_oracle() {
    let mut rng = StdRng::seed_from_u64(0x2f1);
    let mut checked = 0;
    let mut worst = 0.0f64;
    while checked < 500 {
        let (b, z) = (draw_b(&mut rng), draw_z(&mut rng));
        if z.im.abs() < 1e-6 * z.norm() && z.re > 0.9 {
            continue;
        }
        let Some(want) = oracle(b, z) else { continue };
        let got = hyp2f1_special(b, z).unwrap();
        let e = rel(got, want);
        worst = worst.max(e);
        assert!(e < 1e-10, "b={b} z={z}: got {got}, oracle {want}, rel {e:e}");
        checked += 1;
    }
    eprintln!("hyp2f1 worst relative error over 500 draws: {worst:e}");
}

#[test]
fn unit_b_matches_logarithm() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..500 {
        let z = draw_z(&mut rng);
        if z.im.abs() < 1e-6 * z.norm() && z.re > 0.9 {
            continue;
        }
        let want = -(1.0 - z).ln() / z;
        let got = hyp2f1_special(C::new(1.0, 0.0), z).unwrap();
        assert!(rel(got, want) < 1e-12, "z={z}: {got} vs {want}");
    }
}

#[test]
fn frozen_reference_values() {
    // mpmath hyp2f1(1, b, b+1, z) at 50 digits, including points hugging the cut.
    let table = [
        (
            [1.3629477828493333, 0.0],
            [13.515395971379288, 18.343250372167053],
            [-0.033163535089784540521, 0.11976508085616779812],
        ),
        (
            [0.31006523133587399, 0.071764008613378394],
            [-1799.9917546285389, -763.54193679481311],
            [0.09482983182628010165, -0.06367286755602674522],
        ),
        (
            [2.8483559331253163, 0.15420589723499734],
            [-3650.3677912452205, 697.53834219669363],
            [0.00040832770559874422099, 0.000065730920459888331117],
        ),
        (
            [0.28167245440924948, 0.0],
            [14013922.247610201, -51359726.721280077],
            [0.0066225971717632879208, -0.0037697121671237494191],
        ),
        (
            [0.51833974173656883, -0.76441552384326328],
            [-226.71248816411946, 552.81574109666714],
            [-0.01253468527076482324, -0.044186569088678492984],
        ),
        ([1.0, 0.0], [3.0, 1.0e-8], [-0.23104905669598993964, 1.0471975503000946018]),
        ([0.5, 0.0], [1.0001, -9.9999999999999995e-7], [5.2980532536383110318, -1.56571581070494558]),
        ([2.0, 0.0], [10000000.0, 1.0], [-2.0000032236189645279e-7, 8.2831915544175783646e-14]),
    ];
    for (b, z, v) in table {
        let (b, z, v) = (C::new(b[0], b[1]), C::new(z[0], z[1]), C::new(v[0], v[1]));
        let got = hyp2f1_special(b, z).unwrap();
        assert!(rel(got, v) < 1e-10, "b={b} z={z}: {got} vs {v}");
    }
}

#[test]
fn single_precision_tracks_double() {
    let mut rng = StdRng::seed_from_u64(32);
    for _ in 0..50 {
        let (b, z) = (draw_b(&mut rng), draw_z(&mut rng));
        if z.im.abs() < 1e-3 * z.norm() && z.re > 0.9 {
            continue;
        }
        let want = hyp2f1_special(b, z).unwrap();
        let bf = num_complex::Complex32::new(b.re as f32, b.im as f32);
        let zf = num_complex::Complex32::new(z.re as f32, z.im as f32);
        let got = hyp2f1_special(bf, zf).unwrap();
        let got = C::new(got.re as f64, got.im as f64);
        assert!(rel(got, want) < 1e-3, "b={b} z={z}: {got} vs {want}");
    }
}
