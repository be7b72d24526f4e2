//! Initial projection, Crank-Nicolson time loop, and evaluation of the
//! piecewise septic approximation.

use crate::assembly::{
    assemble_crank_nicolson, assemble_initial_system, GlobalSystem, ReducedIndexMap,
};
use crate::basis::{self, CollocationRule, SHAPE_COUNT};
use crate::error::{Error, Result};
use crate::linalg::LuFactors;
use crate::problem::{build_mesh, Mesh, ProblemSpec};

/// The `6N + 2` expansion coefficients at time level `time_index`.
/// Entries `0` and `6N` (0-based) are the Dirichlet-pinned values and stay
/// zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub full: Vec<f64>,
    pub time_index: usize,
}

impl CoefficientVector {
    pub fn zeros(elements: usize) -> Self {
        Self {
            full: vec![0.0; 6 * elements + 2],
            time_index: 0,
        }
    }

    pub fn element_count(&self) -> usize {
        (self.full.len() - 2) / 6
    }

    pub fn boundary_values(&self) -> [f64; 2] {
        let right = self.full.len() - 2;
        [self.full[0], self.full[right]]
    }

    /// The eight coefficients acting on element `k` (1-based).
    #[inline]
    fn element(&self, k: usize) -> &[f64] {
        &self.full[6 * (k - 1)..6 * (k - 1) + SHAPE_COUNT]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dt: f64,
    pub t_final: f64,
    pub elements: usize,
    pub rule: CollocationRule,
    /// Keep a copy of the coefficients after every step.
    pub keep_snapshots: bool,
}

impl RunConfig {
    pub fn new(elements: usize, dt: f64, t_final: f64, rule: CollocationRule) -> Self {
        Self {
            dt,
            t_final,
            elements,
            rule,
            keep_snapshots: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements == 0 {
            return Err(Error::EmptyMesh);
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_final must be non-negative, got {}",
                self.t_final
            )));
        }
        Ok(())
    }

    /// `M = t_final / dt`, which must be integral to within `1e-9` relative.
    pub fn step_count(&self) -> Result<usize> {
        self.validate()?;
        let ratio = self.t_final / self.dt;
        let m = ratio.round();
        if (ratio - m).abs() > 1e-9 * m.max(1.0) {
            return Err(Error::NonIntegralStepCount { ratio });
        }
        Ok(m as usize)
    }
}

/// Collocates the initial condition at the rule's points and solves
/// `W a^0 = b`.
pub fn initial_coefficients(
    spec: &ProblemSpec,
    mesh: &Mesh,
    rule: &CollocationRule,
) -> Result<CoefficientVector> {
    let system = assemble_initial_system(mesh, rule, |x| spec.initial(x))?;
    let reduced = system.w.factor()?.solve(&system.b)?;
    let map = ReducedIndexMap::new(mesh.element_count());
    let mut a = CoefficientVector::zeros(mesh.element_count());
    map.scatter(&reduced, &mut a.full);
    Ok(a)
}

/// One step of `L a^{n+1} = R a^n` with a pre-factored `L`.
pub fn step(
    system: &GlobalSystem,
    factors: &LuFactors,
    a: &CoefficientVector,
) -> Result<CoefficientVector> {
    let mut next = a.clone();
    let mut stepper = Stepper::new(system, factors);
    stepper.advance(&mut next)?;
    Ok(next)
}

/// Reusable work buffers for repeated steps.
struct Stepper<'a> {
    system: &'a GlobalSystem,
    factors: &'a LuFactors,
    reduced: Vec<f64>,
    rhs: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(system: &'a GlobalSystem, factors: &'a LuFactors) -> Self {
        let n = system.index_map.reduced_len();
        Self {
            system,
            factors,
            reduced: vec![0.0; n],
            rhs: vec![0.0; n],
        }
    }

    fn advance(&mut self, a: &mut CoefficientVector) -> Result<()> {
        let map = &self.system.index_map;
        if a.full.len() != map.full_len() {
            return Err(Error::DimensionMismatch {
                expected: map.full_len(),
                found: a.full.len(),
            });
        }
        map.gather(&a.full, &mut self.reduced);
        self.system.rhs.matvec_into(&self.reduced, &mut self.rhs)?;
        self.factors.solve_in_place(&mut self.rhs)?;
        map.scatter(&self.rhs, &mut a.full);
        a.time_index += 1;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub mesh: Mesh,
    pub coefficients: CoefficientVector,
    /// Per-step coefficients, only filled when `keep_snapshots` is set.
    pub snapshots: Vec<CoefficientVector>,
}

pub fn run(spec: &ProblemSpec, cfg: &RunConfig) -> Result<RunOutput> {
    let mut snapshots = Vec::new();
    let keep = cfg.keep_snapshots;
    let (mesh, coefficients) = run_observed(spec, cfg, |a| {
        if keep {
            snapshots.push(a.clone());
        }
    })?;
    Ok(RunOutput {
        mesh,
        coefficients,
        snapshots,
    })
}

/// Like [`run`], calling `observe` after every step.
pub fn run_observed(
    spec: &ProblemSpec,
    cfg: &RunConfig,
    mut observe: impl FnMut(&CoefficientVector),
) -> Result<(Mesh, CoefficientVector)> {
    let steps = cfg.step_count()?;
    let mesh = build_mesh(spec, cfg.elements)?;
    let mut a = initial_coefficients(spec, &mesh, &cfg.rule)?;
    if steps == 0 {
        return Ok((mesh, a));
    }
    let system = assemble_crank_nicolson(&mesh, &cfg.rule, spec.alpha(), cfg.dt)?;
    let factors = system.lhs.factor()?;
    let mut stepper = Stepper::new(&system, &factors);
    for _ in 0..steps {
        stepper.advance(&mut a)?;
        observe(&a);
    }
    Ok((mesh, a))
}

fn check_layout(mesh: &Mesh, a: &CoefficientVector) -> Result<()> {
    let expected = 6 * mesh.element_count() + 2;
    if a.full.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: a.full.len(),
        });
    }
    Ok(())
}

/// Value of the approximation on element `k` (1-based) at local `xi`.
/// At the element ends this is exactly the shared nodal coefficient.
pub(crate) fn evaluate_local(a: &CoefficientVector, h: f64, k: usize, xi: f64) -> f64 {
    let coeffs = a.element(k);
    if xi == 0.0 {
        return coeffs[0];
    }
    if xi == 1.0 {
        return coeffs[6];
    }
    let shape = basis::values_unchecked(xi, h);
    coeffs.iter().zip(shape).map(|(c, s)| c * s).sum()
}

pub fn evaluate(mesh: &Mesh, a: &CoefficientVector, x: f64) -> Result<f64> {
    check_layout(mesh, a)?;
    let (k, xi) = mesh.locate(x)?;
    Ok(evaluate_local(a, mesh.h(), k, xi))
}

/// `(u', u'')` with respect to `x`.
pub fn evaluate_derivatives(mesh: &Mesh, a: &CoefficientVector, x: f64) -> Result<(f64, f64)> {
    check_layout(mesh, a)?;
    let (k, xi) = mesh.locate(x)?;
    let h = mesh.h();
    let coeffs = a.element(k);
    let first = basis::first_derivs_unchecked(xi, h);
    let second = basis::second_derivs_unchecked(xi, h);
    let du: f64 = coeffs.iter().zip(first).map(|(c, s)| c * s).sum();
    let d2u: f64 = coeffs.iter().zip(second).map(|(c, s)| c * s).sum();
    Ok((du / h, d2u / (h * h)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::basis::{chebyshev_rule, legendre_rule};
    use crate::problem::control_problem;

    fn parabola() -> ProblemSpec {
        ProblemSpec::new(0.0, 1.0, 1.0, Arc::new(|x| x * (1.0 - x)), None).unwrap()
    }

    #[test]
    fn step_count_rounding() {
        let rule = legendre_rule();
        assert_eq!(
            RunConfig::new(4, 0.0025, 1.0, rule).step_count().unwrap(),
            400
        );
        assert_eq!(
            RunConfig::new(4, 1e-6, 1.0, rule).step_count().unwrap(),
            1_000_000
        );
        assert_eq!(RunConfig::new(4, 0.01, 0.0, rule).step_count().unwrap(), 0);
        assert!(matches!(
            RunConfig::new(4, 0.3, 1.0, rule).step_count(),
            Err(Error::NonIntegralStepCount { .. })
        ));
        assert!(RunConfig::new(0, 0.1, 1.0, rule).step_count().is_err());
        assert!(RunConfig::new(2, 0.0, 1.0, rule).step_count().is_err());
        assert!(RunConfig::new(2, 0.1, -1.0, rule).step_count().is_err());
    }

    #[test]
    fn zero_initial_data_stays_zero() {
        let spec = ProblemSpec::new(0.0, 1.0, 1.0, Arc::new(|_| 0.0), None).unwrap();
        let mesh = build_mesh(&spec, 3).unwrap();
        let a0 = initial_coefficients(&spec, &mesh, &legendre_rule()).unwrap();
        assert!(a0.full.iter().all(|&c| c == 0.0));
        let system = assemble_crank_nicolson(&mesh, &legendre_rule(), 1.0, 0.01).unwrap();
        let factors = system.lhs.factor().unwrap();
        let a1 = step(&system, &factors, &a0).unwrap();
        assert!(a1.full.iter().all(|&c| c == 0.0));
        assert_eq!(a1.time_index, 1);
    }

    #[test]
    fn parabola_is_reproduced() {
        let spec = parabola();
        for n in [1, 3, 8] {
            let mesh = build_mesh(&spec, n).unwrap();
            for rule in [legendre_rule(), chebyshev_rule()] {
                let a = initial_coefficients(&spec, &mesh, &rule).unwrap();
                for i in 0..20 {
                    let x = (i as f64 + 0.37) / 20.0;
                    let u = evaluate(&mesh, &a, x).unwrap();
                    assert!((u - x * (1.0 - x)).abs() < 1e-10);
                    let (du, d2u) = evaluate_derivatives(&mesh, &a, x).unwrap();
                    assert!((du - (1.0 - 2.0 * x)).abs() < 1e-9);
                    assert!((d2u + 2.0).abs() < 1e-9, "u'' = {d2u}");
                }
                let (du, _) = evaluate_derivatives(&mesh, &a, 0.5).unwrap();
                assert!(du.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sine_interpolation_at_midpoint() {
        let spec = control_problem();
        let mesh = build_mesh(&spec, 16).unwrap();
        let a = initial_coefficients(&spec, &mesh, &legendre_rule()).unwrap();
        assert!((evaluate(&mesh, &a, 0.5).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn nodal_cardinality() {
        let spec = control_problem();
        let mesh = build_mesh(&spec, 5).unwrap();
        let a = initial_coefficients(&spec, &mesh, &chebyshev_rule()).unwrap();
        assert_eq!(evaluate(&mesh, &a, 0.0).unwrap(), 0.0);
        assert_eq!(a.boundary_values(), [0.0, 0.0]);
        for m in 1..5 {
            let x = mesh.nodes()[m];
            assert_eq!(evaluate(&mesh, &a, x).unwrap(), a.full[6 * m]);
            // element m at xi = 1 and element m + 1 at xi = 0
            assert_eq!(
                evaluate_local(&a, mesh.h(), m, 1.0),
                evaluate_local(&a, mesh.h(), m + 1, 0.0)
            );
        }
    }

    #[test]
    fn evaluation_errors() {
        let spec = control_problem();
        let mesh = build_mesh(&spec, 2).unwrap();
        let a = CoefficientVector::zeros(2);
        assert!(matches!(
            evaluate(&mesh, &a, 1.5),
            Err(Error::PointOutsideDomain { .. })
        ));
        assert!(evaluate_derivatives(&mesh, &a, -0.1).is_err());
        assert!(matches!(
            evaluate(&mesh, &CoefficientVector::zeros(3), 0.5),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn slope_matches_finite_difference() {
        let spec = control_problem();
        let mesh = build_mesh(&spec, 6).unwrap();
        let a = initial_coefficients(&spec, &mesh, &legendre_rule()).unwrap();
        let eps = 1e-5;
        for x in [0.11, 0.29, 0.5, 0.61, 0.93] {
            let fd = (evaluate(&mesh, &a, x + eps).unwrap()
                - evaluate(&mesh, &a, x - eps).unwrap())
                / (2.0 * eps);
            let (du, _) = evaluate_derivatives(&mesh, &a, x).unwrap();
            assert!(
                (du - fd).abs() <= 1e-6 * du.abs().max(1e-3),
                "{x}: {du} vs {fd}"
            );
        }
    }

    #[test]
    fn one_step_error() {
        let spec = control_problem();
        let mesh = build_mesh(&spec, 16).unwrap();
        let rule = legendre_rule();
        let a0 = initial_coefficients(&spec, &mesh, &rule).unwrap();
        let system = assemble_crank_nicolson(&mesh, &rule, 1.0, 0.01).unwrap();
        let factors = system.lhs.factor().unwrap();
        let a1 = step(&system, &factors, &a0).unwrap();
        let worst = mesh
            .nodes()
            .iter()
            .map(|&x| (evaluate(&mesh, &a1, x).unwrap() - spec.exact(x, 0.01).unwrap()).abs())
            .fold(0.0, f64::max);
        // With spatial error negligible the nodal error is the single-mode
        // Crank-Nicolson amplification error |g - exp(-lambda dt)| at x = 0.5.
        let z = std::f64::consts::PI.powi(2) * 0.01;
        let oracle = ((1.0 - z / 2.0) / (1.0 + z / 2.0) - (-z).exp()).abs();
        assert!(
            (worst - oracle).abs() <= 1e-3 * oracle,
            "{worst} vs {oracle}"
        );
        assert!(worst < 1e-4);
    }

    #[test]
    fn step_is_linear() {
        let spec = control_problem();
        let mesh = build_mesh(&spec, 4).unwrap();
        let rule = legendre_rule();
        let a0 = initial_coefficients(&spec, &mesh, &rule).unwrap();
        let system = assemble_crank_nicolson(&mesh, &rule, 1.0, 0.05).unwrap();
        let factors = system.lhs.factor().unwrap();
        let base = step(&system, &factors, &a0).unwrap();
        let mut scaled = a0.clone();
        scaled.full.iter_mut().for_each(|c| *c *= -3.5);
        let stepped = step(&system, &factors, &scaled).unwrap();
        let scale = base.full.iter().fold(0.0f64, |m, b| m.max(3.5 * b.abs()));
        for (s, b) in stepped.full.iter().zip(&base.full) {
            assert!((s + 3.5 * b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn zero_final_time_returns_initial_state() {
        let spec = control_problem();
        let cfg = RunConfig::new(4, 0.01, 0.0, legendre_rule());
        let out = run(&spec, &cfg).unwrap();
        let a0 = initial_coefficients(&spec, &out.mesh, &cfg.rule).unwrap();
        assert_eq!(out.coefficients, a0);
        assert!(out.snapshots.is_empty());
    }

    #[test]
    fn snapshots_on_request() {
        let spec = control_problem();
        let mut cfg = RunConfig::new(4, 0.1, 0.5, legendre_rule());
        assert!(run(&spec, &cfg).unwrap().snapshots.is_empty());
        cfg.keep_snapshots = true;
        let out = run(&spec, &cfg).unwrap();
        assert_eq!(out.snapshots.len(), 5);
        assert_eq!(out.snapshots.last(), Some(&out.coefficients));
        assert_eq!(out.coefficients.time_index, 5);
    }
}
