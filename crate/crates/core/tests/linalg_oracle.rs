mod common;

use common::{dense_matvec, dense_solve, max_abs, random_band};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use shcm_core::{band_lu_factor, band_lu_solve, band_matvec, BandedMatrix, Error};

#[test]
fn matvec_agrees_with_dense_product() {
    let mut rng = StdRng::seed_from_u64(11);
    let m = random_band(&mut rng, 10, 3, 3, false);
    let v: Vec<f64> = (0..10).map(|_| rng.random_range(-1.0..1.0)).collect();
    let band = band_matvec(&m, &v).unwrap();
    let dense = dense_matvec(&m.to_dense(), &v);
    for (a, b) in band.iter().zip(&dense) {
        assert!((a - b).abs() <= 1e-14);
    }
}

#[test]
fn dominant_system_residual() {
    let mut rng = StdRng::seed_from_u64(20);
    let m = random_band(&mut rng, 20, 4, 2, true);
    let b: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
    let x = band_lu_solve(&band_lu_factor(&m).unwrap(), &b).unwrap();
    let r: Vec<f64> = m
        .matvec(&x)
        .unwrap()
        .iter()
        .zip(&b)
        .map(|(a, b)| a - b)
        .collect();
    assert!(max_abs(&r) / max_abs(&b) <= 1e-12);
}

#[test]
fn recovers_known_solution() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..10 {
        let n = rng.random_range(5..40);
        let m = random_band(&mut rng, n, 5, 7, true);
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let b = m.matvec(&x0).unwrap();
        let x = m.factor().unwrap().solve(&b).unwrap();
        let err: Vec<f64> = x.iter().zip(&x0).map(|(a, b)| a - b).collect();
        assert!(max_abs(&err) <= 1e-10 * max_abs(&x0));
    }
}

#[test]
fn fifty_random_systems_match_dense_elimination() {
    let mut rng = StdRng::seed_from_u64(2024);
    for case in 0..50 {
        let n = rng.random_range(1..=60);
        let bw = rng.random_range(0..=9);
        let m = random_band(&mut rng, n, bw, bw, true);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let band = m.factor().unwrap().solve(&b).unwrap();
        let dense = dense_solve(&m.to_dense(), &b);
        let scale = max_abs(&dense);
        for (x, y) in band.iter().zip(&dense) {
            assert!((x - y).abs() <= 1e-10 * scale, "case {case}: n={n} bw={bw}");
        }
    }
}

#[test]
fn pivoting_on_non_dominant_systems() {
    // no diagonal dominance, so row interchanges are exercised
    let mut rng = StdRng::seed_from_u64(77);
    for _ in 0..20 {
        let n = rng.random_range(2..=40);
        let (kl, ku) = (rng.random_range(1..=6), rng.random_range(0..=6));
        let m = random_band(&mut rng, n, kl, ku, false);
        let Ok(factors) = m.factor() else { continue };
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let band = factors.solve(&b).unwrap();
        let dense = dense_solve(&m.to_dense(), &b);
        let scale = max_abs(&dense);
        for (x, y) in band.iter().zip(&dense) {
            assert!((x - y).abs() <= 1e-8 * scale);
        }
    }
}

#[test]
fn factorization_is_reusable_bitwise() {
    let mut rng = StdRng::seed_from_u64(5);
    let m = random_band(&mut rng, 30, 8, 8, true);
    let b1: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
    let b2: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
    let shared = m.factor().unwrap();
    let (x1, x2) = (shared.solve(&b1).unwrap(), shared.solve(&b2).unwrap());
    assert_eq!(x1, m.factor().unwrap().solve(&b1).unwrap());
    assert_eq!(x2, m.factor().unwrap().solve(&b2).unwrap());
}

#[test]
fn concurrent_solves_share_one_factorization() {
    let mut rng = StdRng::seed_from_u64(9);
    let m = random_band(&mut rng, 50, 6, 6, true);
    let factors = m.factor().unwrap();
    let rhs: Vec<Vec<f64>> = (0..8)
        .map(|_| (0..50).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let serial: Vec<Vec<f64>> = rhs.iter().map(|b| factors.solve(b).unwrap()).collect();
    let parallel: Vec<Vec<f64>> = std::thread::scope(|s| {
        let handles: Vec<_> = rhs
            .iter()
            .map(|b| s.spawn(|| factors.solve(b).unwrap()))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(serial, parallel);
}

#[test]
fn singular_band_matrix() {
    let mut m = BandedMatrix::zeros(4, 1, 1);
    for i in 0..4 {
        m.set(i, i, 1.0).unwrap();
    }
    m.set(2, 2, 0.0).unwrap();
    m.set(2, 1, 0.0).unwrap();
    m.set(3, 2, 0.0).unwrap();
    assert_eq!(m.factor(), Err(Error::SingularMatrix { index: 3 }));
}
