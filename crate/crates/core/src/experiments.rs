//! Error measurement against the exact solution, observed convergence
//! orders, and the reference-table harness.

use std::time::Instant;

use rayon::prelude::*;

use crate::basis::{CollocationRule, RuleKind};
use crate::error::{Error, Result};
use crate::problem::{collocation_abscissa, Mesh, ProblemSpec};
use crate::solver::{evaluate, evaluate_local, run, CoefficientVector, RunConfig};

/// Where pointwise errors are sampled.
///
/// `CollocationPoints` takes the `6N` collocation abscissae of the rule,
/// each weighted by `h` in the discrete L2 sum. This is the sampling under
/// which the published reference tables are reproduced. `Nodes` takes the
/// mesh nodes `x_1..x_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorSampling {
    CollocationPoints(CollocationRule),
    Nodes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub l2: f64,
    pub linf: f64,
}

impl Norms {
    pub fn get(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::L2 => self.l2,
            NormKind::LInf => self.linf,
        }
    }
}

/// Pointwise absolute errors `(x, |u(x,t) - u_N(x,t)|)` at the sampling points.
pub fn pointwise_errors(
    spec: &ProblemSpec,
    mesh: &Mesh,
    a: &CoefficientVector,
    t: f64,
    sampling: &ErrorSampling,
) -> Result<Vec<(f64, f64)>> {
    if !spec.has_exact_solution() {
        return Err(Error::MissingExactSolution);
    }
    let exact = |x: f64| spec.exact(x, t).expect("checked above");
    match sampling {
        ErrorSampling::Nodes => mesh.nodes()[1..]
            .iter()
            .map(|&x| Ok((x, (exact(x) - evaluate(mesh, a, x)?).abs())))
            .collect(),
        ErrorSampling::CollocationPoints(rule) => {
            let expected = 6 * mesh.element_count() + 2;
            if a.full.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: a.full.len(),
                });
            }
            let mut out = Vec::with_capacity(6 * mesh.element_count());
            for k in 1..=mesh.element_count() {
                for xi in rule.local_coordinates() {
                    let x = collocation_abscissa(mesh, k, xi)?;
                    let u = evaluate_local(a, mesh.h(), k, xi.get());
                    out.push((x, (exact(x) - u).abs()));
                }
            }
            Ok(out)
        }
    }
}

/// Discrete `L2 = sqrt(h * sum e_i^2)` and `Linf = max e_i` over the
/// sampling points.
pub fn error_norms(
    spec: &ProblemSpec,
    mesh: &Mesh,
    a: &CoefficientVector,
    t: f64,
    sampling: &ErrorSampling,
) -> Result<Norms> {
    let errors = pointwise_errors(spec, mesh, a, t, sampling)?;
    Ok(norms_from_errors(mesh.h(), errors.iter().map(|&(_, e)| e)))
}

pub fn norms_from_errors(h: f64, errors: impl IntoIterator<Item = f64>) -> Norms {
    let (sum_sq, linf) = errors
        .into_iter()
        .fold((0.0, 0.0f64), |(s, m), e| (s + e * e, m.max(e)));
    Norms {
        l2: (h * sum_sq).sqrt(),
        linf,
    }
}

/// Result of one measured run.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub l2: f64,
    pub linf: f64,
    pub rule: RuleKind,
    pub elements: usize,
    pub dt: f64,
    pub t_final: f64,
    pub alpha: f64,
    /// Seconds spent in the solve, excluding error evaluation.
    pub wall_time: f64,
}

impl ErrorReport {
    pub fn norms(&self) -> Norms {
        Norms {
            l2: self.l2,
            linf: self.linf,
        }
    }
}

/// Runs `cfg` and measures the final-time error at the rule's collocation points.
pub fn solve_and_measure(spec: &ProblemSpec, cfg: &RunConfig) -> Result<ErrorReport> {
    let start = Instant::now();
    let out = run(spec, cfg)?;
    let wall_time = start.elapsed().as_secs_f64();
    let t = out.coefficients.time_index as f64 * cfg.dt;
    let norms = error_norms(
        spec,
        &out.mesh,
        &out.coefficients,
        t,
        &ErrorSampling::CollocationPoints(cfg.rule),
    )?;
    Ok(ErrorReport {
        l2: norms.l2,
        linf: norms.linf,
        rule: cfg.rule.kind(),
        elements: cfg.elements,
        dt: cfg.dt,
        t_final: cfg.t_final,
        alpha: spec.alpha(),
        wall_time,
    })
}

/// Observed orders `log(e1/e2) / log(s1/s2)` between consecutive
/// `(step, error)` pairs.
pub fn convergence_order(errors: &[(f64, f64)]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(Error::InvalidConvergenceData(format!(
            "need at least two entries, got {}",
            errors.len()
        )));
    }
    for &(s, e) in errors {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidConvergenceData(format!(
                "step {s} is not positive"
            )));
        }
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::InvalidConvergenceData(format!(
                "error {e} is not positive"
            )));
        }
    }
    errors
        .windows(2)
        .map(|w| {
            let ((s1, e1), (s2, e2)) = (w[0], w[1]);
            if s1 == s2 {
                return Err(Error::InvalidConvergenceData(format!("repeated step {s1}")));
            }
            Ok((e1 / e2).ln() / (s1 / s2).ln())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    L2,
    LInf,
}

impl NormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormKind::L2 => "l2",
            NormKind::LInf => "linf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    /// Time-step refinement at `N = 1000`, `T = 1`.
    One,
    /// Element refinement at `dt = 1e-6`, `T = 1`.
    Two,
    /// Element refinement at `dt = 1e-6`, `T = 0.1`.
    Three,
    /// Joint refinement `h = dt`, `T = 1`.
    Four,
    /// `N = 16`, `dt = 0.01` at several final times.
    Five,
}

impl TableId {
    pub fn number(self) -> u8 {
        match self {
            TableId::One => 1,
            TableId::Two => 2,
            TableId::Three => 3,
            TableId::Four => 4,
            TableId::Five => 5,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Some(match n {
            1 => TableId::One,
            2 => TableId::Two,
            3 => TableId::Three,
            4 => TableId::Four,
            5 => TableId::Five,
            _ => return None,
        })
    }
}

/// A published value for one row, rule and norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub rule: RuleKind,
    pub norm: NormKind,
    pub value: f64,
    /// Where the value comes from, e.g. `table 4, h=k=0.2`.
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub elements: usize,
    pub dt: f64,
    pub t_final: f64,
    pub references: Vec<Reference>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableSpec {
    pub id: TableId,
    pub rows: Vec<TableRow>,
}

fn row(
    id: TableId,
    label: String,
    elements: usize,
    dt: f64,
    t_final: f64,
    values: &[(RuleKind, NormKind, f64)],
) -> TableRow {
    TableRow {
        elements,
        dt,
        t_final,
        references: values
            .iter()
            .map(|&(rule, norm, value)| Reference {
                rule,
                norm,
                value,
                citation: format!("table {}, {label}", id.number()),
            })
            .collect(),
    }
}

/// Maps a joint step `h = dt = s` on the unit interval to an element count.
pub fn elements_for_step(s: f64) -> Result<usize> {
    let n = (1.0 / s).round();
    if !(s > 0.0) || (1.0 / s - n).abs() > 1e-9 * n.max(1.0) || n < 1.0 {
        return Err(Error::InvalidConfig(format!(
            "1/{s} is not an integral element count"
        )));
    }
    Ok(n as usize)
}

use NormKind::{LInf, L2};
use RuleKind::{ChebyshevRoots as C, LegendreRoots as L};

impl TableSpec {
    pub fn new(id: TableId) -> Self {
        let rows = match id {
            TableId::One => [
                (0.01, 7.1591e-7, 7.1591e-7),
                (0.005, 1.7931e-7, 1.7932e-7),
                (0.0025, 4.4851e-8, 4.4851e-8),
            ]
            .iter()
            .map(|&(dt, l, c)| {
                row(
                    id,
                    format!("dt={dt}"),
                    1000,
                    dt,
                    1.0,
                    &[(L, L2, l), (C, L2, c)],
                )
            })
            .collect(),
            TableId::Two => [
                (5, 1.2153e-14, 1.0075e-12),
                (10, 1.9449e-15, 2.3323e-14),
                (20, 4.6215e-15, 7.4211e-15),
                (40, 8.1433e-15, 9.6794e-15),
            ]
            .iter()
            .map(|&(n, l, c)| {
                row(
                    id,
                    format!("dx=1/{n}"),
                    n,
                    1e-6,
                    1.0,
                    &[(L, L2, l), (C, L2, c)],
                )
            })
            .collect(),
            TableId::Three => [(10, 6.2482e-13), (20, 3.3280e-12), (40, 5.8595e-12)]
                .iter()
                .map(|&(n, l)| row(id, format!("dx=1/{n}"), n, 1e-6, 0.1, &[(L, L2, l)]))
                .collect(),
            TableId::Four => [
                (0.2, 5.1578e-5, 5.1552e-5),
                (0.1, 3.1586e-5, 3.1587e-5),
                (0.05, 9.7106e-6, 9.7107e-6),
                (0.025, 2.5489e-6, 2.5489e-6),
                (0.0125, 6.4490e-7, 6.4490e-7),
                (0.00625, 1.6171e-7, 1.6171e-7),
                (0.01, 4.1333e-7, 4.1333e-7),
                (0.005, 1.0353e-7, 1.0353e-7),
                (0.0025, 2.5895e-8, 2.5895e-8),
                (0.002, 1.6574e-8, 1.6574e-8),
                (0.001, 4.1437e-9, 4.1437e-9),
            ]
            .iter()
            .map(|&(s, l, c)| {
                let n = elements_for_step(s).expect("tabulated steps divide the unit interval");
                row(
                    id,
                    format!("h=k={s}"),
                    n,
                    s,
                    1.0,
                    &[(L, LInf, l), (C, LInf, c)],
                )
            })
            .collect(),
            TableId::Five => [
                (0.1, 5.1774e-4, 2.9891e-4),
                (0.3, 2.1558e-4, 1.2447e-4),
                (0.5, 4.9872e-5, 2.8793e-5),
                (0.7, 9.6911e-6, 5.5950e-6),
                (0.9, 1.7294e-6, 9.9847e-7),
                (1.0, 7.1591e-7, 4.1332e-7),
            ]
            .iter()
            .map(|&(t, l2, linf)| {
                row(
                    id,
                    format!("t_final={t}"),
                    16,
                    0.01,
                    t,
                    &[(L, L2, l2), (L, LInf, linf)],
                )
            })
            .collect(),
        };
        Self { id, rows }
    }

    /// Rules that have at least one reference value in this table.
    pub fn rules(&self) -> Vec<RuleKind> {
        let mut rules: Vec<RuleKind> = Vec::new();
        for r in self.rows.iter().flat_map(|row| &row.references) {
            if !rules.contains(&r.rule) {
                rules.push(r.rule);
            }
        }
        rules
    }
}

/// Signed relative deviation `(computed - reference) / reference`.
pub fn relative_deviation(computed: f64, reference: f64) -> f64 {
    (computed - reference) / reference
}

#[derive(Debug, Clone)]
pub struct ComparedReference {
    pub reference: Reference,
    pub computed: f64,
    pub relative_deviation: f64,
}

/// Outcome of one `(row, rule)` configuration of a table.
#[derive(Debug, Clone)]
pub struct TableEntry {
    pub table: TableId,
    pub row_index: usize,
    pub rule: RuleKind,
    pub elements: usize,
    pub dt: f64,
    pub t_final: f64,
    pub outcome: Result<ErrorReport>,
    /// Empty when the run failed or the table has no value for this rule.
    pub comparisons: Vec<ComparedReference>,
}

/// Runs every row of `table` for each rule in `rules`. Rows run in parallel;
/// the output is ordered by row, then by the order of `rules`. A failing
/// row does not stop the others.
pub fn run_table(problem: &ProblemSpec, table: &TableSpec, rules: &[RuleKind]) -> Vec<TableEntry> {
    let jobs: Vec<(usize, &TableRow, RuleKind)> = table
        .rows
        .iter()
        .enumerate()
        .flat_map(|(i, row)| rules.iter().map(move |&rule| (i, row, rule)))
        .collect();
    jobs.into_par_iter()
        .map(|(row_index, row, rule)| {
            let cfg = RunConfig::new(row.elements, row.dt, row.t_final, rule.rule());
            let outcome = solve_and_measure(problem, &cfg);
            let comparisons = match &outcome {
                Ok(report) => row
                    .references
                    .iter()
                    .filter(|r| r.rule == rule)
                    .map(|r| {
                        let computed = report.norms().get(r.norm);
                        ComparedReference {
                            reference: r.clone(),
                            computed,
                            relative_deviation: relative_deviation(computed, r.value),
                        }
                    })
                    .collect(),
                Err(_) => Vec::new(),
            };
            TableEntry {
                table: table.id,
                row_index,
                rule,
                elements: row.elements,
                dt: row.dt,
                t_final: row.t_final,
                outcome,
                comparisons,
            }
        })
        .collect()
}
