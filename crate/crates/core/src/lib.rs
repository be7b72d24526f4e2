//! Septic Hermite collocation for the one-dimensional heat equation
//! `u_t = alpha^2 u_xx` with homogeneous Dirichlet boundaries.
//!
//! Space is discretized with eight-parameter septic Hermite elements
//! collocated at six interior points per element (shifted Legendre or
//! Chebyshev roots); time is advanced with Crank-Nicolson. Both the
//! stepping matrices and the initial projection are banded and are solved
//! by a pivoted band LU that is factored once per run.
//!
//! ```
//! use shcm_core::{control_problem, legendre_rule, solve_and_measure, RunConfig};
//!
//! let cfg = RunConfig::new(16, 0.01, 1.0, legendre_rule());
//! let report = solve_and_measure(&control_problem(), &cfg).unwrap();
//! assert!((report.l2 - 7.1591e-7).abs() < 1e-10);
//! ```

pub mod assembly;
pub mod basis;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod problem;
pub mod solver;

pub use assembly::{
    assemble_crank_nicolson, assemble_initial_system, element_blocks, ElementBlocks, GlobalSystem,
    InitialSystem, ReducedIndexMap,
};
pub use basis::{
    build_basis_table, chebyshev_rule, hermite_first_derivs, hermite_second_derivs, hermite_values,
    legendre_rule, BasisTable, CollocationRule, LocalCoordinate, RuleKind,
};
pub use error::{Error, Result};
pub use experiments::{
    convergence_order, error_norms, run_table, solve_and_measure, ErrorReport, ErrorSampling,
    NormKind, Norms, TableEntry, TableId, TableSpec,
};
pub use linalg::{band_lu_factor, band_lu_solve, band_matvec, BandedMatrix, LuFactors};
pub use problem::{build_mesh, collocation_abscissa, control_problem, Mesh, ProblemSpec};
pub use solver::{
    evaluate, evaluate_derivatives, initial_coefficients, run, run_observed, step,
    CoefficientVector, RunConfig, RunOutput,
};
