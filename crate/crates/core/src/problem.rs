//! Heat equation instance `u_t = alpha^2 u_xx` on `[x_l, x_r]` with
//! homogeneous Dirichlet boundaries, and its uniform mesh.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::basis::LocalCoordinate;
use crate::error::{Error, Result};

pub type InitialCondition = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ExactSolution = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

const COMPATIBILITY_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct ProblemSpec {
    x_left: f64,
    x_right: f64,
    alpha: f64,
    initial: InitialCondition,
    exact: Option<ExactSolution>,
}

impl ProblemSpec {
    /// Fails unless `x_right > x_left`, `alpha > 0` and the initial
    /// condition vanishes at both ends.
    pub fn new(
        x_left: f64,
        x_right: f64,
        alpha: f64,
        initial: InitialCondition,
        exact: Option<ExactSolution>,
    ) -> Result<Self> {
        if !(x_left.is_finite() && x_right.is_finite() && x_right > x_left) {
            return Err(Error::InvalidProblem(format!(
                "domain [{x_left}, {x_right}] is empty or not finite"
            )));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "diffusivity must be positive, got {alpha}"
            )));
        }
        for x in [x_left, x_right] {
            let f = initial(x);
            if !(f.abs() <= COMPATIBILITY_TOL) {
                return Err(Error::InvalidProblem(format!(
                    "initial condition is {f} at boundary x = {x}; homogeneous Dirichlet data required"
                )));
            }
        }
        Ok(Self {
            x_left,
            x_right,
            alpha,
            initial,
            exact,
        })
    }

    /// `sin(m pi x) exp(-alpha^2 m^2 pi^2 t)` on `[0, 1]`.
    pub fn sine_mode(mode: u32, alpha: f64) -> Result<Self> {
        if mode == 0 {
            return Err(Error::InvalidProblem("sine mode must be at least 1".into()));
        }
        let k = mode as f64 * PI;
        let rate = alpha * alpha * k * k;
        Self::new(
            0.0,
            1.0,
            alpha,
            Arc::new(move |x| (k * x).sin()),
            Some(Arc::new(move |x, t| (k * x).sin() * (-rate * t).exp())),
        )
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn initial(&self, x: f64) -> f64 {
        (self.initial)(x)
    }

    pub fn initial_condition(&self) -> &InitialCondition {
        &self.initial
    }

    pub fn exact(&self, x: f64, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|u| u(x, t))
    }

    pub fn has_exact_solution(&self) -> bool {
        self.exact.is_some()
    }
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("x_left", &self.x_left)
            .field("x_right", &self.x_right)
            .field("alpha", &self.alpha)
            .field("has_exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

/// The reference test case: `f(x) = sin(pi x)` on `[0, 1]` with `alpha = 1`.
pub fn control_problem() -> ProblemSpec {
    ProblemSpec::sine_mode(1, 1.0).expect("control problem is well formed")
}

/// Uniform partition into `N` elements; element `k` (1-based) spans
/// `[x_{k-1}, x_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    h: f64,
}

impl Mesh {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn element_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn x_left(&self) -> f64 {
        self.nodes[0]
    }

    pub fn x_right(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Left node of element `k` without range checks (`k` is 1-based).
    #[inline]
    pub(crate) fn element_start(&self, k: usize) -> f64 {
        self.nodes[k - 1]
    }

    /// Element containing `x` and its local coordinate. Interior nodes
    /// belong to the element on their left; the right end belongs to the
    /// last element.
    pub fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let (left, right) = (self.x_left(), self.x_right());
        if !(x >= left && x <= right) {
            return Err(Error::PointOutsideDomain { x, left, right });
        }
        let n = self.element_count();
        let s = (x - left) / self.h;
        let mut k = (s.floor() as usize + 1).clamp(1, n);
        // x sitting exactly on node x_{k-1} belongs to element k - 1
        if k > 1 && x <= self.nodes[k - 1] {
            k -= 1;
        }
        let xi = if x == self.nodes[k] {
            1.0
        } else {
            ((x - self.nodes[k - 1]) / self.h).clamp(0.0, 1.0)
        };
        Ok((k, xi))
    }
}

pub fn build_mesh(spec: &ProblemSpec, elements: usize) -> Result<Mesh> {
    uniform_mesh(spec.x_left, spec.x_right, elements)
}

pub fn uniform_mesh(x_left: f64, x_right: f64, elements: usize) -> Result<Mesh> {
    if elements == 0 {
        return Err(Error::EmptyMesh);
    }
    if !(x_right > x_left) {
        return Err(Error::InvalidProblem(format!(
            "domain [{x_left}, {x_right}] is empty"
        )));
    }
    let n = elements as f64;
    let length = x_right - x_left;
    let mut nodes: Vec<f64> = (0..=elements)
        .map(|j| x_left + j as f64 * length / n)
        .collect();
    nodes[elements] = x_right;
    Ok(Mesh {
        nodes,
        h: length / n,
    })
}

/// Global position of local coordinate `xi` on element `k` (1-based).
pub fn collocation_abscissa(mesh: &Mesh, k: usize, xi: LocalCoordinate) -> Result<f64> {
    let count = mesh.element_count();
    if k == 0 || k > count {
        return Err(Error::ElementOutOfRange { index: k, count });
    }
    Ok(mesh.element_start(k) + mesh.h * xi.get())
}
