//! Septic Hermite shape functions on the reference element and the
//! six-point collocation rules.
//!
//! Each element carries eight shape functions. Columns 1..8 correspond to
//! the local degrees of freedom
//! `(u_L, u'_L, u''_L, u'''_L, u'''_R, u''_R, u_R, u'_R)`, where the
//! derivative DOFs are taken with respect to `x`. Because the shape
//! functions are written in the local coordinate `xi = (x - x_k) / h`, the
//! derivative columns carry the factors `h`, `h^2` and `h^3`. Those factors
//! are kept inside the tables so the assembled equations can be written
//! directly in terms of the tabulated values.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Number of shape functions per element.
pub const SHAPE_COUNT: usize = 8;
/// Number of collocation points per element.
pub const POINT_COUNT: usize = 6;

// Monomial coefficients (ascending powers of xi) with the h-power factored out.
const VALUE_COEFFS: [[f64; 8]; SHAPE_COUNT] = [
    [1.0, 0.0, 0.0, 0.0, -35.0, 84.0, -70.0, 20.0],
    [0.0, 1.0, 0.0, 0.0, -20.0, 45.0, -36.0, 10.0],
    [0.0, 0.0, 0.5, 0.0, -5.0, 10.0, -15.0 / 2.0, 2.0],
    [
        0.0,
        0.0,
        0.0,
        1.0 / 6.0,
        -2.0 / 3.0,
        1.0,
        -2.0 / 3.0,
        1.0 / 6.0,
    ],
    [
        0.0,
        0.0,
        0.0,
        0.0,
        -1.0 / 6.0,
        1.0 / 2.0,
        -1.0 / 2.0,
        1.0 / 6.0,
    ],
    [0.0, 0.0, 0.0, 0.0, 5.0 / 2.0, -7.0, 13.0 / 2.0, -2.0],
    [0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0],
    [0.0, 0.0, 0.0, 0.0, -15.0, 39.0, -34.0, 10.0],
];

const FIRST_COEFFS: [[f64; 7]; SHAPE_COUNT] = [
    [0.0, 0.0, 0.0, -140.0, 420.0, -420.0, 140.0],
    [1.0, 0.0, 0.0, -80.0, 225.0, -216.0, 70.0],
    [0.0, 1.0, 0.0, -20.0, 50.0, -45.0, 14.0],
    [0.0, 0.0, 1.0 / 2.0, -8.0 / 3.0, 5.0, -4.0, 7.0 / 6.0],
    [0.0, 0.0, 0.0, -2.0 / 3.0, 5.0 / 2.0, -3.0, 7.0 / 6.0],
    [0.0, 0.0, 0.0, 10.0, -35.0, 39.0, -14.0],
    [0.0, 0.0, 0.0, 140.0, -420.0, 420.0, -140.0],
    [0.0, 0.0, 0.0, -60.0, 195.0, -204.0, 70.0],
];

// Row 2 uses -1080 xi^4: the derivative of the first-derivative row above.
const SECOND_COEFFS: [[f64; 6]; SHAPE_COUNT] = [
    [0.0, 0.0, -420.0, 1680.0, -2100.0, 840.0],
    [0.0, 0.0, -240.0, 900.0, -1080.0, 420.0],
    [1.0, 0.0, -60.0, 200.0, -225.0, 84.0],
    [0.0, 1.0, -8.0, 20.0, -20.0, 7.0],
    [0.0, 0.0, -2.0, 10.0, -15.0, 7.0],
    [0.0, 0.0, 30.0, -140.0, 195.0, -84.0],
    [0.0, 0.0, 420.0, -1680.0, 2100.0, -840.0],
    [0.0, 0.0, -180.0, 780.0, -1020.0, 420.0],
];

/// Power of `h` multiplying each shape function.
const H_POWER: [i32; SHAPE_COUNT] = [0, 1, 2, 3, 3, 2, 0, 1];

/// A coordinate on the reference element `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LocalCoordinate(f64);

impl LocalCoordinate {
    pub fn new(xi: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&xi) {
            Ok(Self(xi))
        } else {
            Err(Error::CoordinateOutOfRange(xi))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for LocalCoordinate {
    type Error = Error;

    fn try_from(xi: f64) -> Result<Self> {
        Self::new(xi)
    }
}

#[inline]
fn horner(coeffs: &[f64], xi: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * xi + c)
}

fn check_width(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveWidth(h))
    }
}

#[inline]
fn scaled<const D: usize>(table: &[[f64; D]; SHAPE_COUNT], xi: f64, h: f64) -> [f64; SHAPE_COUNT] {
    let mut out = [0.0; SHAPE_COUNT];
    for (j, row) in table.iter().enumerate() {
        out[j] = horner(row, xi) * h.powi(H_POWER[j]);
    }
    out
}

// Unchecked evaluators for callers that have already validated `xi` and `h`.
#[inline]
pub(crate) fn values_unchecked(xi: f64, h: f64) -> [f64; SHAPE_COUNT] {
    scaled(&VALUE_COEFFS, xi, h)
}

#[inline]
pub(crate) fn first_derivs_unchecked(xi: f64, h: f64) -> [f64; SHAPE_COUNT] {
    scaled(&FIRST_COEFFS, xi, h)
}

#[inline]
pub(crate) fn second_derivs_unchecked(xi: f64, h: f64) -> [f64; SHAPE_COUNT] {
    scaled(&SECOND_COEFFS, xi, h)
}

/// Shape function values `H_1..H_8` at `xi`.
pub fn hermite_values(xi: LocalCoordinate, h: f64) -> Result<[f64; SHAPE_COUNT]> {
    check_width(h)?;
    Ok(values_unchecked(xi.0, h))
}

/// First `xi`-derivatives `A_j = dH_j/dxi`.
pub fn hermite_first_derivs(xi: LocalCoordinate, h: f64) -> Result<[f64; SHAPE_COUNT]> {
    check_width(h)?;
    Ok(first_derivs_unchecked(xi.0, h))
}

/// Second `xi`-derivatives `B_j = dA_j/dxi`.
pub fn hermite_second_derivs(xi: LocalCoordinate, h: f64) -> Result<[f64; SHAPE_COUNT]> {
    check_width(h)?;
    Ok(second_derivs_unchecked(xi.0, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    LegendreRoots,
    ChebyshevRoots,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::LegendreRoots => "legendre",
            RuleKind::ChebyshevRoots => "chebyshev",
        }
    }

    pub fn rule(self) -> CollocationRule {
        match self {
            RuleKind::LegendreRoots => legendre_rule(),
            RuleKind::ChebyshevRoots => chebyshev_rule(),
        }
    }
}

impl std::fmt::Display for RuleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Six interior collocation abscissae on the reference element, ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollocationRule {
    kind: RuleKind,
    points: [f64; POINT_COUNT],
}

impl CollocationRule {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn points(&self) -> &[f64; POINT_COUNT] {
        &self.points
    }

    pub fn local_coordinates(&self) -> [LocalCoordinate; POINT_COUNT] {
        self.points.map(LocalCoordinate)
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = nf * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Roots of the degree-6 Legendre polynomial shifted to `[0, 1]`.
pub fn legendre_rule() -> CollocationRule {
    const N: usize = POINT_COUNT;
    let mut points = [0.0; N];
    // Only the upper half is iterated; the lower half follows by symmetry so
    // that points[i] + points[N - 1 - i] == 1 holds exactly.
    for i in 0..N / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(N, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        // x is the (i+1)-th largest root on [-1, 1]
        let upper = 0.5 * (1.0 + x);
        points[N - 1 - i] = upper;
        points[i] = 1.0 - upper;
    }
    CollocationRule {
        kind: RuleKind::LegendreRoots,
        points,
    }
}

/// Roots of the degree-6 first-kind Chebyshev polynomial shifted to `[0, 1]`.
pub fn chebyshev_rule() -> CollocationRule {
    let mut points = [0.0; POINT_COUNT];
    for (i, p) in points.iter_mut().enumerate() {
        let theta = (2 * i + 1) as f64 * PI / (2 * POINT_COUNT) as f64;
        *p = 0.5 * (1.0 - theta.cos());
    }
    CollocationRule {
        kind: RuleKind::ChebyshevRoots,
        points,
    }
}

/// Shape function values and derivatives tabulated at a rule's points for a
/// fixed element width. Row `i` is a collocation point, column `j` a shape
/// function.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTable {
    pub h: f64,
    pub values: [[f64; SHAPE_COUNT]; POINT_COUNT],
    pub first: [[f64; SHAPE_COUNT]; POINT_COUNT],
    pub second: [[f64; SHAPE_COUNT]; POINT_COUNT],
}

pub fn build_basis_table(rule: &CollocationRule, h: f64) -> Result<BasisTable> {
    check_width(h)?;
    let mut table = BasisTable {
        h,
        values: [[0.0; SHAPE_COUNT]; POINT_COUNT],
        first: [[0.0; SHAPE_COUNT]; POINT_COUNT],
        second: [[0.0; SHAPE_COUNT]; POINT_COUNT],
    };
    for (i, &xi) in rule.points.iter().enumerate() {
        table.values[i] = values_unchecked(xi, h);
        table.first[i] = first_derivs_unchecked(xi, h);
        table.second[i] = second_derivs_unchecked(xi, h);
    }
    Ok(table)
}
