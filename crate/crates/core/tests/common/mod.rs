//! Oracles shared by the integration suites. Nothing here calls into the
//! solver's own factorization or basis evaluation paths.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use shcm_core::BandedMatrix;

/// Dense solve through nalgebra's LU, independent of the band code.
pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let m = DMatrix::from_fn(n, n, |r, c| a[r][c]);
    let rhs = DVector::from_column_slice(b);
    m.lu()
        .solve(&rhs)
        .expect("oracle matrix is nonsingular")
        .iter()
        .copied()
        .collect()
}

pub fn dense_matvec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Random band matrix with entries in [-1, 1]; when `dominant` the diagonal
/// is raised above the row's off-diagonal sum.
pub fn random_band(
    rng: &mut impl Rng,
    n: usize,
    kl: usize,
    ku: usize,
    dominant: bool,
) -> BandedMatrix {
    let mut m = BandedMatrix::zeros(n, kl, ku);
    for r in 0..n {
        let lo = r.saturating_sub(kl);
        let hi = (r + ku + 1).min(n);
        let mut off = 0.0;
        for c in lo..hi {
            let v: f64 = rng.random_range(-1.0..1.0);
            if c != r {
                off += v.abs();
            }
            m.set(r, c, v).unwrap();
        }
        if dominant {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            m.set(r, r, sign * (off + 1.0 + rng.random_range(0.0..1.0)))
                .unwrap();
        }
    }
    m
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Fourth-order central difference.
pub fn five_point(f: impl Fn(f64) -> f64, x: f64, eps: f64) -> f64 {
    (-f(x + 2.0 * eps) + 8.0 * f(x + eps) - 8.0 * f(x - eps) + f(x - 2.0 * eps)) / (12.0 * eps)
}

/// Relative agreement with an absolute floor for entries that vanish.
pub fn close(actual: f64, expected: f64, rel: f64, floor: f64) -> bool {
    (actual - expected).abs() <= rel * expected.abs().max(floor)
}
