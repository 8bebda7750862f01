//! Quantities of the dual (test) basis that never require building it.
//!
//! The pairing `c_a = (φ_a, φ*_a)₀` of an RT basis function with its dual
//! depends only on the angles opposite the edge:
//!
//! ```text
//! c_a = (cot θ_{a,K} + cot θ_{a,L}) / 2     internal edge (K|L)
//! c_a =  cot θ_{a,K} / 2                     boundary edge (K|
//! ```
//!
//! The rest of this module concerns the divergence profile `δ_K` of the dual
//! functions and its energy `I = |K| ∫_K δ_K²`, which controls the stability
//! constant of the scheme, together with the edge flux profile `g`.

use nalgebra::{Matrix4, Point2, Vector4};
use thiserror::Error;

use crate::mesh::{quality_report, Mesh, TriangleGeometry};
use crate::quadrature::{IntervalRule, TriangleRule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualError {
    #[error("the divergence Gram system is singular (degenerate triangle)")]
    SingularGram,
}

/// `c_a` for every edge of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCoefficients {
    pub values: Vec<f64>,
    /// Whether the mesh satisfies the angle conditions. When false, some
    /// `c_a` may be zero or negative and the discrete problem is not well posed.
    pub admissible: bool,
    /// Edges failing their angle condition.
    pub flagged: Vec<usize>,
}

impl DualCoefficients {
    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn cotan_coefficients(mesh: &Mesh) -> DualCoefficients {
    let half_cot = |t: usize, edge: usize| 0.5 * mesh.geometry(t).cotangent(mesh.local_index(t, edge));
    let values = mesh
        .edges()
        .iter()
        .enumerate()
        .map(|(a, e)| half_cot(e.k(), a) + e.l().map_or(0.0, |l| half_cot(l, a)))
        .collect();
    let report = quality_report(mesh);
    DualCoefficients { values, admissible: report.admissible, flagged: report.offending_edges }
}

/// `g(s) = 30 s (s - 1) (21 s² - 21 s + 4)`: unit mass, zero second moment,
/// symmetric about `1/2`, vanishing at both ends.
pub fn g_eval(s: f64) -> f64 {
    30.0 * s * (s - 1.0) * (21.0 * s * s - 21.0 * s + 4.0)
}

/// `(∫g, ∫g s, ∫g s²)` over `(0, 1)`, exact up to rounding.
pub fn g_moments() -> [f64; 3] {
    let rule = IntervalRule::gauss4();
    [0, 1, 2].map(|k| rule.integrate(|s| g_eval(s) * s.powi(k)))
}

/// `δ_K = α₀ + Σ_i α_i |x - W_{K,i}|²`, the minimum-norm function of that form
/// with `∫_K δ_K = 1` and `∫_K δ_K |x - W_{K,i}|² = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaK {
    pub vertices: [Point2<f64>; 3],
    pub coefficients: [f64; 4],
    /// `I = |K| ∫_K δ_K²`, dimensionless.
    pub energy: f64,
}

impl DeltaK {
    pub fn eval(&self, x: Point2<f64>) -> f64 {
        let [a0, a1, a2, a3] = self.coefficients;
        a0 + a1 * (x - self.vertices[0]).norm_squared()
            + a2 * (x - self.vertices[1]).norm_squared()
            + a3 * (x - self.vertices[2]).norm_squared()
    }

    /// Residuals of the four moment constraints, computed with `rule`.
    pub fn constraint_residuals(&self, geometry: &TriangleGeometry, rule: &TriangleRule) -> [f64; 4] {
        let mut r = [
            rule.integrate(geometry, |x| self.eval(x)) - 1.0,
            0.0,
            0.0,
            0.0,
        ];
        for i in 0..3 {
            r[i + 1] = rule.integrate(geometry, |x| self.eval(x) * (x - self.vertices[i]).norm_squared());
        }
        r
    }
}

/// Solves for `δ_K` with the 4×4 Gram system of `{1, |x - W_i|²}`.
///
/// The four constraints are inner products against the basis itself, so the
/// coefficients are `M⁻¹ e₀` for the Gram matrix `M`. Quadratics are scaled by
/// `1/|K|` before solving.
pub fn solve_delta_k(geometry: &TriangleGeometry, rule: &TriangleRule) -> Result<DeltaK, DualError> {
    let area = geometry.area;
    let v = geometry.vertices;
    let basis = |x: Point2<f64>| {
        Vector4::new(
            1.0,
            (x - v[0]).norm_squared() / area,
            (x - v[1]).norm_squared() / area,
            (x - v[2]).norm_squared() / area,
        )
    };
    let mut gram = Matrix4::zeros();
    for (x, w) in rule.points(geometry) {
        let b = basis(x);
        gram += b * b.transpose() * w;
    }
    let alpha = gram.lu().solve(&Vector4::new(1.0, 0.0, 0.0, 0.0)).ok_or(DualError::SingularGram)?;
    if !alpha.iter().all(|a| a.is_finite()) {
        return Err(DualError::SingularGram);
    }
    let mut delta = DeltaK {
        vertices: v,
        coefficients: [alpha[0], alpha[1] / area, alpha[2] / area, alpha[3] / area],
        energy: 0.0,
    };
    delta.energy = area * rule.integrate(geometry, |x| delta.eval(x).powi(2));
    Ok(delta)
}

/// `Σ_{n,m,p} = Σ |a_i|^n |a_j|^m |a_k|^p` over the distinct assignments of
/// the exponents `(n, m, p)` to the three edges.
///
/// Repeated exponents do not produce repeated terms: `Σ_{2,2,0}` has three
/// terms, `Σ_{6,4,2}` six and `Σ_{1,1,1} = |a_1||a_2||a_3|` one. With this
/// reading `σ_2² = σ_4 + 2Σ_{2,2,0}` holds and the closed-form energy agrees
/// with the quadrature solve.
pub fn symmetric_sum(lengths: &[f64; 3], n: i32, m: i32, p: i32) -> f64 {
    const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let exponents = [n, m, p];
    let mut assignments: Vec<[i32; 3]> = PERMUTATIONS
        .iter()
        .map(|perm| {
            let mut e = [0; 3];
            for (slot, &edge) in perm.iter().enumerate() {
                e[edge] = exponents[slot];
            }
            e
        })
        .collect();
    assignments.sort_unstable();
    assignments.dedup();
    assignments
        .iter()
        .map(|e| lengths[0].powi(e[0]) * lengths[1].powi(e[1]) * lengths[2].powi(e[2]))
        .sum()
}

/// `σ_p = Σ |a_j|^p`.
pub fn power_sum(lengths: &[f64; 3], p: i32) -> f64 {
    lengths.iter().map(|l| l.powi(p)).sum()
}

/// The degree-12 numerator `N` and degree-4 denominator `D` of the
/// closed-form energy, as functions of the edge lengths.
pub fn energy_polynomials(lengths: &[f64; 3]) -> (f64, f64) {
    let s = |n, m, p| symmetric_sum(lengths, n, m, p);
    let varpi = lengths[0] * lengths[1] * lengths[2];
    let d = 1.75 * power_sum(lengths, 4) - 0.5 * s(2, 2, 0);
    let n = 9.0 * power_sum(lengths, 12) - 15.0 * s(10, 2, 0) + 15.0 * s(8, 4, 0) - 33.0 * s(8, 2, 2)
        - 18.0 * s(6, 6, 0)
        + 48.0 * s(6, 4, 2)
        + 558.0 * varpi.powi(4);
    (n, d)
}

/// `I = N / (128 |K|⁴ D)`.
pub fn delta_energy_closed_form(geometry: &TriangleGeometry) -> f64 {
    let (n, d) = energy_polynomials(&geometry.edge_lengths);
    n / (128.0 * geometry.area.powi(4) * d)
}

/// Upper bound `ν = (8 · 3⁵ · 23 / 5) / tan⁴θ⋆` on `I` for triangles whose
/// smallest angle is at least `θ⋆`.
pub fn nu_bound(theta_star: f64) -> f64 {
    8.0 * 243.0 * 23.0 / 5.0 / theta_star.tan().powi(4)
}
