//! Global collocation systems.
//!
//! Element `k` (1-based) contributes six collocation rows `6(k-1)+1..6k`
//! acting on the eight coefficients `6(k-1)+1..6(k-1)+8`, so neighbouring
//! elements share the value and slope coefficients at their common node.
//! The Dirichlet conditions force coefficients `1` and `6N+1` to zero; those
//! columns are dropped, leaving square `6N x 6N` systems.

use crate::basis::{build_basis_table, BasisTable, CollocationRule, POINT_COUNT, SHAPE_COUNT};
use crate::error::{Error, Result};
use crate::linalg::BandedMatrix;
use crate::problem::{collocation_abscissa, Mesh};

pub type Block = [[f64; SHAPE_COUNT]; POINT_COUNT];

/// Translation between the `6N + 2` full coefficients and the `6N` unknowns
/// left after removing the two boundary values. Indices are 0-based here:
/// full positions `0` and `6N` are the eliminated ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedIndexMap {
    elements: usize,
}

impl ReducedIndexMap {
    pub fn new(elements: usize) -> Self {
        Self { elements }
    }

    pub fn full_len(&self) -> usize {
        6 * self.elements + 2
    }

    pub fn reduced_len(&self) -> usize {
        6 * self.elements
    }

    /// The two full positions pinned to zero.
    pub fn eliminated(&self) -> [usize; 2] {
        [0, 6 * self.elements]
    }

    pub fn to_reduced(&self, full: usize) -> Option<usize> {
        let right = 6 * self.elements;
        match full {
            0 => None,
            f if f < right => Some(f - 1),
            f if f == right => None,
            f if f == right + 1 => Some(right - 1),
            _ => None,
        }
    }

    pub fn to_full(&self, reduced: usize) -> usize {
        if reduced + 1 < self.reduced_len() {
            reduced + 1
        } else {
            reduced + 2
        }
    }

    pub fn scatter(&self, reduced: &[f64], full: &mut [f64]) {
        debug_assert_eq!(reduced.len(), self.reduced_len());
        debug_assert_eq!(full.len(), self.full_len());
        let right = 6 * self.elements;
        full[0] = 0.0;
        full[1..right].copy_from_slice(&reduced[..right - 1]);
        full[right] = 0.0;
        full[right + 1] = reduced[right - 1];
    }

    pub fn gather(&self, full: &[f64], reduced: &mut [f64]) {
        debug_assert_eq!(reduced.len(), self.reduced_len());
        let right = 6 * self.elements;
        reduced[..right - 1].copy_from_slice(&full[1..right]);
        reduced[right - 1] = full[right + 1];
    }
}

/// Crank-Nicolson element blocks: `left` multiplies the new time level,
/// `right` the old one.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementBlocks {
    pub left: Block,
    pub right: Block,
}

pub fn element_blocks(table: &BasisTable, alpha: f64, dt: f64) -> Result<ElementBlocks> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "time step must be positive, got {dt}"
        )));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "diffusivity must be positive, got {alpha}"
        )));
    }
    let diffusion = alpha * alpha / (2.0 * table.h * table.h);
    let mut left = [[0.0; SHAPE_COUNT]; POINT_COUNT];
    let mut right = [[0.0; SHAPE_COUNT]; POINT_COUNT];
    for i in 0..POINT_COUNT {
        for j in 0..SHAPE_COUNT {
            let mass = table.values[i][j] / dt;
            let stiff = diffusion * table.second[i][j];
            left[i][j] = mass - stiff;
            right[i][j] = mass + stiff;
        }
    }
    Ok(ElementBlocks { left, right })
}

/// Band widths of the reduced system, found from the sparsity pattern.
pub fn reduced_bandwidths(elements: usize) -> (usize, usize) {
    let map = ReducedIndexMap::new(elements);
    let (mut kl, mut ku) = (0, 0);
    for e in 0..elements {
        for i in 0..POINT_COUNT {
            let row = 6 * e + i;
            for j in 0..SHAPE_COUNT {
                if let Some(col) = map.to_reduced(6 * e + j) {
                    kl = kl.max(row.saturating_sub(col));
                    ku = ku.max(col.saturating_sub(row));
                }
            }
        }
    }
    (kl, ku)
}

/// Places `block` for every element and drops the eliminated columns.
pub fn assemble_blocks(elements: usize, block: &Block) -> BandedMatrix {
    let map = ReducedIndexMap::new(elements);
    let (kl, ku) = reduced_bandwidths(elements);
    let mut m = BandedMatrix::zeros(map.reduced_len(), kl, ku);
    for e in 0..elements {
        for (i, row_block) in block.iter().enumerate() {
            let row = 6 * e + i;
            for (j, &v) in row_block.iter().enumerate() {
                if let Some(col) = map.to_reduced(6 * e + j) {
                    m.add(row, col, v);
                }
            }
        }
    }
    m
}

/// The time-stepping pair of the recursion `L a^{n+1} = R a^n`.
#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub lhs: BandedMatrix,
    pub rhs: BandedMatrix,
    pub index_map: ReducedIndexMap,
}

pub fn assemble_crank_nicolson(
    mesh: &Mesh,
    rule: &CollocationRule,
    alpha: f64,
    dt: f64,
) -> Result<GlobalSystem> {
    let table = build_basis_table(rule, mesh.h())?;
    let blocks = element_blocks(&table, alpha, dt)?;
    let elements = mesh.element_count();
    Ok(GlobalSystem {
        lhs: assemble_blocks(elements, &blocks.left),
        rhs: assemble_blocks(elements, &blocks.right),
        index_map: ReducedIndexMap::new(elements),
    })
}

/// Collocation of the initial data: `W a^0 = b`.
#[derive(Debug, Clone)]
pub struct InitialSystem {
    pub w: BandedMatrix,
    pub b: Vec<f64>,
}

pub fn assemble_initial_system(
    mesh: &Mesh,
    rule: &CollocationRule,
    f: impl Fn(f64) -> f64,
) -> Result<InitialSystem> {
    let table = build_basis_table(rule, mesh.h())?;
    let elements = mesh.element_count();
    let w = assemble_blocks(elements, &table.values);
    let coords = rule.local_coordinates();
    let mut b = Vec::with_capacity(6 * elements);
    for k in 1..=elements {
        for &xi in &coords {
            b.push(f(collocation_abscissa(mesh, k, xi)?));
        }
    }
    Ok(InitialSystem { w, b })
}
