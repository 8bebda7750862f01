//! The discrete Poisson problem `-div p = f_T`, `p = ∇_T u`.
//!
//! With the cotangent coefficients `c_a`, the discrete gradient of a
//! piecewise-constant `u` has edge fluxes
//!
//! ```text
//! p_a = (u_L - u_K) / c_a      internal edge (K|L)
//! p_a = (ū_a - u_K) / c_a      boundary edge (K|, trace ū_a
//! ```
//!
//! and the flux balance on each triangle gives a cell-centered system with
//! one unknown per triangle, coupling only neighbors across an edge. It is
//! assembled in its symmetric positive definite form
//!
//! ```text
//! Σ_{a=(K|L)} (u_K - u_L)/c_a + Σ_{a=(K|} u_K/c_a = |K| f_K + Σ_{a=(K|} ū_a/c_a
//! ```
//!
//! and solved with preconditioned conjugate gradients.

mod cg;

use nalgebra::Point2;
use serde::Serialize;
use thiserror::Error;

pub use cg::{conjugate_gradient, CgOutcome, CsrMatrix};

use crate::dual::{cotan_coefficients, DualCoefficients};
use crate::mesh::Mesh;
use crate::quadrature::IntervalRule;
use crate::spaces::{divergence, P0Field, RTField};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("coefficient on edge {edge} is {value:e}; the scheme needs c_a > 0 on every edge")]
    NonPositiveCoefficient { edge: usize, value: f64 },
    #[error("coefficient on edge {edge} vanishes; the discrete gradient is undefined")]
    ZeroCoefficient { edge: usize },
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch { what: &'static str, expected: usize, found: usize },
    #[error("conjugate gradients stopped after {iterations} iterations at relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64, history: Vec<f64> },
}

/// Boundary trace means `ū_a`, one per boundary edge in increasing edge id.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletData {
    edges: Vec<usize>,
    values: Vec<f64>,
}

impl DirichletData {
    pub fn zeros(mesh: &Mesh) -> Self {
        let edges = boundary_edges(mesh);
        let values = vec![0.0; edges.len()];
        Self { edges, values }
    }

    pub fn constant(mesh: &Mesh, value: f64) -> Self {
        let edges = boundary_edges(mesh);
        let values = vec![value; edges.len()];
        Self { edges, values }
    }

    /// `ū_a = (1/|a|) ∫_a g ds` on every boundary edge.
    pub fn from_fn<F: Fn(Point2<f64>) -> f64>(mesh: &Mesh, g: F, rule: &IntervalRule) -> Self {
        let edges = boundary_edges(mesh);
        let values = edges
            .iter()
            .map(|&a| {
                let e = &mesh.edges()[a];
                rule.integrate_segment(mesh.vertices()[e.south], mesh.vertices()[e.north], &g) / e.length
            })
            .collect();
        Self { edges, values }
    }

    pub fn from_values(mesh: &Mesh, values: Vec<f64>) -> Result<Self, SolverError> {
        let edges = boundary_edges(mesh);
        if values.len() != edges.len() {
            return Err(SolverError::LengthMismatch {
                what: "Dirichlet data",
                expected: edges.len(),
                found: values.len(),
            });
        }
        Ok(Self { edges, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Dense per-edge view; internal edges read as zero.
    fn per_edge(&self, num_edges: usize) -> Vec<f64> {
        let mut dense = vec![0.0; num_edges];
        for (&a, &v) in self.edges.iter().zip(&self.values) {
            dense[a] = v;
        }
        dense
    }
}

fn boundary_edges(mesh: &Mesh) -> Vec<usize> {
    mesh.edges().iter().enumerate().filter(|(_, e)| !e.is_internal()).map(|(a, _)| a).collect()
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), SolverError> {
    if expected != found {
        return Err(SolverError::LengthMismatch { what, expected, found });
    }
    Ok(())
}

/// The discrete gradient `∇_T u`.
pub fn discrete_gradient(mesh: &Mesh, coeffs: &DualCoefficients, u: &P0Field, bc: &DirichletData) -> Result<RTField, SolverError> {
    check_len("coefficients", mesh.num_edges(), coeffs.values.len())?;
    check_len("cell field", mesh.num_triangles(), u.len())?;
    check_len("Dirichlet data", mesh.num_boundary_edges(), bc.len())?;
    let trace = bc.per_edge(mesh.num_edges());
    mesh.edges()
        .iter()
        .enumerate()
        .map(|(a, e)| {
            let c = coeffs.values[a];
            if c.abs() < 1e-12 {
                return Err(SolverError::ZeroCoefficient { edge: a });
            }
            let outer = e.l().map_or(trace[a], |l| u[l]);
            Ok((outer - u[e.k()]) / c)
        })
        .collect::<Result<Vec<_>, _>>()
        .map(RTField)
}

/// Symmetric cell-centered system: one row per triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
}

pub fn assemble(mesh: &Mesh, coeffs: &DualCoefficients, f_t: &P0Field, bc: &DirichletData) -> Result<SparseSystem, SolverError> {
    check_len("coefficients", mesh.num_edges(), coeffs.values.len())?;
    check_len("source", mesh.num_triangles(), f_t.len())?;
    check_len("Dirichlet data", mesh.num_boundary_edges(), bc.len())?;
    if let Some((edge, &value)) = coeffs.values.iter().enumerate().find(|(_, c)| c.is_nan() || **c <= 0.0) {
        return Err(SolverError::NonPositiveCoefficient { edge, value });
    }

    let trace = bc.per_edge(mesh.num_edges());
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::with_capacity(4); mesh.num_triangles()];
    let mut rhs: Vec<f64> = (0..mesh.num_triangles()).map(|k| mesh.geometry(k).area * f_t[k]).collect();

    for (a, e) in mesh.edges().iter().enumerate() {
        let t = 1.0 / coeffs.values[a];
        let k = e.k();
        rows[k].push((k, t));
        match e.l() {
            Some(l) => {
                rows[l].push((l, t));
                rows[k].push((l, -t));
                rows[l].push((k, -t));
            }
            None => rhs[k] += trace[a] * t,
        }
    }

    Ok(SparseSystem { matrix: CsrMatrix::from_rows(rows), rhs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub u: P0Field,
    pub p: RTField,
    pub iterations: usize,
    /// Final relative residual `‖A u - b‖ / ‖b‖`.
    pub residual: f64,
}

/// Solves `system` by Jacobi-preconditioned CG and recovers the fluxes with
/// [`discrete_gradient`].
pub fn solve(
    mesh: &Mesh,
    coeffs: &DualCoefficients,
    system: &SparseSystem,
    bc: &DirichletData,
    tol: f64,
    max_iter: usize,
) -> Result<Solution, SolverError> {
    let out = conjugate_gradient(&system.matrix, &system.rhs, tol, max_iter);
    if !out.converged {
        return Err(SolverError::NotConverged { iterations: out.iterations, residual: out.residual, history: out.history });
    }
    let u = P0Field(out.x);
    let p = discrete_gradient(mesh, coeffs, &u, bc)?;
    Ok(Solution { u, p, iterations: out.iterations, residual: out.residual })
}

/// Coefficients, assembly and solve in one call.
pub fn solve_poisson(mesh: &Mesh, f_t: &P0Field, bc: &DirichletData, tol: f64, max_iter: usize) -> Result<Solution, SolverError> {
    let coeffs = cotan_coefficients(mesh);
    let system = assemble(mesh, &coeffs, f_t, bc)?;
    solve(mesh, &coeffs, &system, bc, tol, max_iter)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxBalanceReport {
    /// `|K| (f_K + (div p)_K)` per triangle.
    pub cell_residuals: Vec<f64>,
    pub max_residual: f64,
    /// `Σ_K |K| f_K + Σ_{boundary a} p_a`, zero by the discrete divergence theorem.
    pub global_imbalance: f64,
}

pub fn flux_balance_check(mesh: &Mesh, solution: &Solution, f_t: &P0Field) -> FluxBalanceReport {
    let div = divergence(mesh, &solution.p);
    let cell_residuals: Vec<f64> = (0..mesh.num_triangles())
        .map(|k| mesh.geometry(k).area * (f_t[k] + div[k]))
        .collect();
    let max_residual = cell_residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    let source: f64 = (0..mesh.num_triangles()).map(|k| mesh.geometry(k).area * f_t[k]).sum();
    let outflow: f64 = mesh
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_internal())
        .map(|(a, _)| solution.p[a])
        .sum();
    FluxBalanceReport { cell_residuals, max_residual, global_imbalance: source + outflow }
}
