//! Banded storage, LU factorization with partial pivoting, and products.
//!
//! The factorization follows the classic compact band scheme: every row is
//! stored left-justified so that at elimination step `k` all candidate
//! pivot rows start at column `k`. Row interchanges then widen `U` to
//! `kl + ku` super-diagonals, which fits in the same `kl + ku + 1` slots.

use crate::error::{Error, Result};

/// Pivot magnitudes below this are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Square banded matrix with `kl` sub- and `ku` super-diagonals, stored
/// row-major with `kl + ku + 1` slots per row.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0, 0);
        m.data.fill(1.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    #[inline]
    fn in_band(&self, row: usize, col: usize) -> bool {
        row < self.n && col < self.n && col + self.kl >= row && col <= row + self.ku
    }

    #[inline]
    fn offset(&self, row: usize, col: usize) -> usize {
        row * self.width() + col + self.kl - row
    }

    /// Entry `(row, col)`, zero outside the band. Indices are 0-based.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        if self.in_band(row, col) {
            self.data[self.offset(row, col)]
        } else {
            0.0
        }
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) -> Result<()> {
        if !self.in_band(row, col) {
            return Err(Error::OutsideBand { row, col });
        }
        let i = self.offset(row, col);
        self.data[i] = value;
        Ok(())
    }

    pub(crate) fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(self.in_band(row, col));
        let i = self.offset(row, col);
        self.data[i] += value;
    }

    /// Columns of `row` that fall inside the band.
    #[inline]
    fn band_columns(&self, row: usize) -> std::ops::Range<usize> {
        row.saturating_sub(self.kl)..(row + self.ku + 1).min(self.n)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n];
        self.matvec_into(v, &mut out)?;
        Ok(out)
    }

    pub fn matvec_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        for len in [v.len(), out.len()] {
            if len != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: len,
                });
            }
        }
        let w = self.width();
        for (row, y) in out.iter_mut().enumerate() {
            let cols = self.band_columns(row);
            let start = row * w + cols.start + self.kl - row;
            let stored = &self.data[start..start + cols.len()];
            *y = stored.iter().zip(&v[cols]).map(|(a, x)| a * x).sum();
        }
        Ok(())
    }

    /// Dense row-major copy, mainly for inspection and tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn factor(&self) -> Result<LuFactors> {
        LuFactors::new(self)
    }
}

/// `PA = LU` of a banded matrix. Immutable once built, so one factorization
/// can serve any number of concurrent solves.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactors {
    n: usize,
    kl: usize,
    width: usize,
    upper: Vec<f64>,
    lower: Vec<f64>,
    pivots: Vec<usize>,
}

impl LuFactors {
    fn new(m: &BandedMatrix) -> Result<Self> {
        let (n, kl) = (m.n, m.kl);
        let width = m.width();
        let mut upper = vec![0.0; n * width];
        let mut lower = vec![0.0; n * kl];
        let mut pivots = vec![0; n];

        // Left-justify each row.
        for row in 0..n {
            let cols = m.band_columns(row);
            let src = m.offset(row, cols.start);
            upper[row * width..row * width + cols.len()]
                .copy_from_slice(&m.data[src..src + cols.len()]);
        }

        for k in 0..n {
            let last = (k + kl + 1).min(n);
            let mut pivot_row = k;
            let mut pivot = upper[k * width];
            for r in k + 1..last {
                let cand = upper[r * width];
                if cand.abs() > pivot.abs() {
                    pivot = cand;
                    pivot_row = r;
                }
            }
            pivots[k] = pivot_row;
            if !(pivot.abs() >= PIVOT_FLOOR) {
                return Err(Error::SingularMatrix { index: k + 1 });
            }
            if pivot_row != k {
                for j in 0..width {
                    upper.swap(k * width + j, pivot_row * width + j);
                }
            }
            for r in k + 1..last {
                let factor = upper[r * width] / pivot;
                lower[k * kl + (r - k - 1)] = factor;
                for j in 1..width {
                    upper[r * width + j - 1] = upper[r * width + j] - factor * upper[k * width + j];
                }
                upper[r * width + width - 1] = 0.0;
            }
        }

        Ok(Self {
            n,
            kl,
            width,
            upper,
            lower,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// 0-based row swapped into position `k` at elimination step `k`.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, b: &mut [f64]) -> Result<()> {
        let (n, kl, width) = (self.n, self.kl, self.width);
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            let last = (k + kl + 1).min(n);
            for r in k + 1..last {
                b[r] -= self.lower[k * kl + (r - k - 1)] * bk;
            }
        }
        for i in (0..n).rev() {
            let row = &self.upper[i * width..(i + 1) * width];
            let reach = width.min(n - i);
            let mut acc = b[i];
            for j in 1..reach {
                acc -= row[j] * b[i + j];
            }
            b[i] = acc / row[0];
        }
        Ok(())
    }
}

pub fn band_matvec(m: &BandedMatrix, v: &[f64]) -> Result<Vec<f64>> {
    m.matvec(v)
}

pub fn band_lu_factor(m: &BandedMatrix) -> Result<LuFactors> {
    m.factor()
}

pub fn band_lu_solve(f: &LuFactors, b: &[f64]) -> Result<Vec<f64>> {
    f.solve(b)
}
