//! Piecewise-constant and lowest-order Raviart-Thomas spaces.
//!
//! On a triangle `K` with vertices `W_{K,i}`, the local RT basis function
//! attached to the edge opposite `W_{K,i}` is
//!
//! ```text
//! φ_{K,i}(x) = (x - W_{K,i}) / (2|K|)
//! ```
//!
//! which has unit outward flux through that edge and zero flux through the
//! other two. A global field stores one flux `p_a` per edge against the
//! canonical normal `n_a`; the local coefficient is `p_{K,i} = ε p_a`.

use std::ops::{Index, IndexMut};

use nalgebra::{Matrix3, Point2, SymmetricEigen, Vector2, Vector3};

use crate::mesh::{Mesh, TriangleGeometry};
use crate::quadrature::{IntervalRule, TriangleRule};

/// One value per triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct P0Field(pub Vec<f64>);

/// One normal flux per edge, measured against the edge's canonical normal.
#[derive(Debug, Clone, PartialEq)]
pub struct RTField(pub Vec<f64>);

macro_rules! field_impls {
    ($t:ty) => {
        impl $t {
            pub fn zeros(len: usize) -> Self {
                Self(vec![0.0; len])
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn values(&self) -> &[f64] {
                &self.0
            }
        }

        impl Index<usize> for $t {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl IndexMut<usize> for $t {
            fn index_mut(&mut self, i: usize) -> &mut f64 {
                &mut self.0[i]
            }
        }
    };
}

field_impls!(P0Field);
field_impls!(RTField);

/// `φ_{K,i}(x)`; `i` is the local index `0..3`.
pub fn eval_local_basis(geometry: &TriangleGeometry, i: usize, x: Point2<f64>) -> Vector2<f64> {
    (x - geometry.vertices[i]) / (2.0 * geometry.area)
}

/// Local coefficients `p_{K,i} = ε_i p_{a_i}` of `p` on triangle `k`.
pub fn local_fluxes(mesh: &Mesh, p: &RTField, k: usize) -> [f64; 3] {
    let edges = mesh.triangle_edges(k);
    let signs = mesh.triangle_signs(k);
    [signs[0] * p[edges[0]], signs[1] * p[edges[1]], signs[2] * p[edges[2]]]
}

/// Evaluates `p` at `x` using the restriction to triangle `k`.
pub fn eval_rt_field(mesh: &Mesh, p: &RTField, k: usize, x: Point2<f64>) -> Vector2<f64> {
    let geometry = mesh.geometry(k);
    local_fluxes(mesh, p, k)
        .iter()
        .enumerate()
        .map(|(i, c)| eval_local_basis(geometry, i, x) * *c)
        .sum()
}

/// `(div p)_K = (1/|K|) Σ_i p_{K,i}`.
pub fn divergence(mesh: &Mesh, p: &RTField) -> P0Field {
    P0Field(
        (0..mesh.num_triangles())
            .map(|k| local_fluxes(mesh, p, k).iter().sum::<f64>() / mesh.geometry(k).area)
            .collect(),
    )
}

/// Cell means `(1/|K|) ∫_K f`.
pub fn interpolate_p0<F: Fn(Point2<f64>) -> f64>(f: F, mesh: &Mesh, rule: &TriangleRule) -> P0Field {
    P0Field(mesh.geometries().iter().map(|g| rule.integrate(g, &f) / g.area).collect())
}

/// Edge fluxes `p_a = ∫_a v · n_a ds`.
pub fn interpolate_rt<F: Fn(Point2<f64>) -> Vector2<f64>>(v: F, mesh: &Mesh, edge_rule: &IntervalRule) -> RTField {
    let vertices = mesh.vertices();
    RTField(
        mesh.edges()
            .iter()
            .map(|e| edge_rule.integrate_segment(vertices[e.south], vertices[e.north], |x| v(x).dot(&e.normal)))
            .collect(),
    )
}

/// `‖p‖₀²` assembled from the local Gram matrices.
pub fn rt_norm_squared(mesh: &Mesh, p: &RTField) -> f64 {
    (0..mesh.num_triangles())
        .map(|k| {
            let c = Vector3::from(local_fluxes(mesh, p, k));
            let gram = local_gram_closed_form(mesh.geometry(k));
            c.dot(&(gram.0 * c))
        })
        .sum()
}

/// The local RT mass matrix `G_K = [(φ_{K,i}, φ_{K,j})₀]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalGram(pub Matrix3<f64>);

impl LocalGram {
    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Sum of the three principal 2×2 minors, the linear coefficient `R` of
    /// the characteristic polynomial.
    pub fn minor_sum(&self) -> f64 {
        let g = &self.0;
        (0..3)
            .map(|i| {
                let j = (i + 1) % 3;
                g[(i, i)] * g[(j, j)] - g[(i, j)] * g[(i, j)]
            })
            .sum()
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0).eigenvalues.iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2]]
    }
}

/// Closed-form Gram matrix:
/// `‖φ_i‖² = cot θ_i / 6 + (3/4) ρ²/|K|` on the diagonal and
/// `(φ_i, φ_j) = -(3/4) ρ²/|K| + cot θ_k / 6` off it, `k ∉ {i, j}`.
pub fn local_gram_closed_form(geometry: &TriangleGeometry) -> LocalGram {
    let t = geometry.shape_factor();
    let cot = [geometry.cotangent(0), geometry.cotangent(1), geometry.cotangent(2)];
    LocalGram(Matrix3::from_fn(|i, j| {
        if i == j {
            cot[i] / 6.0 + 0.75 * t
        } else {
            -0.75 * t + cot[3 - i - j] / 6.0
        }
    }))
}

/// Gram matrix by quadrature; exact for any rule of degree ≥ 2.
pub fn local_gram_quadrature(geometry: &TriangleGeometry, rule: &TriangleRule) -> LocalGram {
    let mut m = Matrix3::zeros();
    for (x, w) in rule.points(geometry) {
        let phi: [Vector2<f64>; 3] = std::array::from_fn(|i| eval_local_basis(geometry, i, x));
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] += w * phi[i].dot(&phi[j]);
            }
        }
    }
    LocalGram(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_rhombus_equilateral;
    use proptest::prelude::*;

    fn equilateral() -> TriangleGeometry {
        TriangleGeometry::from_points(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, 3f64.sqrt() / 2.0))
    }

    #[test]
    fn basis_values() {
        let g = TriangleGeometry::from_points(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0));
        for i in 0..3 {
            assert_eq!(eval_local_basis(&g, i, g.vertices[i]), Vector2::zeros());
        }
        assert_eq!(eval_local_basis(&g, 0, Point2::new(1.0, 0.0)), Vector2::new(1.0, 0.0));
    }

    #[test]
    fn basis_flux_normalization() {
        let g = TriangleGeometry::from_points(Point2::new(0.1, 0.2), Point2::new(1.7, -0.3), Point2::new(0.6, 1.4));
        let rule = IntervalRule::gauss4();
        for i in 0..3 {
            for b in 0..3 {
                let (s, n) = g.edge_endpoints(b);
                let normal = g.outward_normal(b);
                let flux = rule.integrate_segment(s, n, |x| eval_local_basis(&g, i, x).dot(&normal));
                let expected = if i == b { 1.0 } else { 0.0 };
                assert!((flux - expected).abs() < 1e-13, "i={i} b={b} flux={flux}");
            }
        }
    }

    #[test]
    fn equilateral_gram() {
        let g = local_gram_closed_form(&equilateral());
        let s3 = 3f64.sqrt();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 5.0 / (12.0 * s3) } else { -1.0 / (12.0 * s3) };
                assert!((g.0[(i, j)] - expected).abs() < 1e-15);
            }
        }
        assert!((g.0[(0, 0)] - 0.240563).abs() < 1e-6);
        assert!((g.trace() - 5.0 / (4.0 * s3)).abs() < 1e-15);
        assert!((g.determinant() - 1.0 / (48.0 * s3)).abs() < 1e-15);
        assert!((g.determinant() - 0.0120281).abs() < 1e-7);

        let q = local_gram_quadrature(&equilateral(), TriangleRule::degree6());
        assert!((q.0 - g.0).abs().max() < 1e-15);

        let ev = g.eigenvalues();
        assert!((ev[0] - 1.0 / (4.0 * s3)).abs() < 1e-12);
        assert!((ev[1] - 1.0 / (2.0 * s3)).abs() < 1e-12);
        assert!((ev[2] - 1.0 / (2.0 * s3)).abs() < 1e-12);
    }

    #[test]
    fn gram_is_scale_invariant() {
        let g = TriangleGeometry::from_points(Point2::new(0.1, 0.2), Point2::new(1.7, -0.3), Point2::new(0.6, 1.4));
        let base = local_gram_quadrature(&g, TriangleRule::degree6());
        for scale in [1e-3, 7.0, 1e3] {
            let scaled = local_gram_quadrature(&g.transformed(scale, 0.3, Vector2::new(2.0, -5.0)), TriangleRule::degree6());
            assert!((scaled.0 - base.0).abs().max() < 1e-12 * base.0.abs().max());
        }
    }

    #[test]
    fn constants_and_linear_fields() {
        let mesh = generate_rhombus_equilateral(3).unwrap();
        let rule = IntervalRule::gauss4();
        let p = interpolate_rt(|_| Vector2::new(1.0, 0.0), &mesh, rule);
        for k in 0..mesh.num_triangles() {
            let g = mesh.geometry(k);
            for x in [g.barycenter, g.vertices[0], g.edge_midpoint(1)] {
                assert!((eval_rt_field(&mesh, &p, k, x) - Vector2::new(1.0, 0.0)).norm() < 1e-13);
            }
        }
        assert!(divergence(&mesh, &p).values().iter().all(|d| d.abs() < 1e-12));

        let q = interpolate_rt(|x| x.coords, &mesh, rule);
        assert!(divergence(&mesh, &q).values().iter().all(|d| (d - 2.0).abs() < 1e-12));
        assert!(interpolate_rt(|_| Vector2::zeros(), &mesh, rule).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unit_flux_divergence() {
        let mesh = generate_rhombus_equilateral(2).unwrap();
        let a = mesh.edges().iter().position(|e| e.is_internal()).unwrap();
        let (k, l) = (mesh.edges()[a].k(), mesh.edges()[a].l().unwrap());
        let mut p = RTField::zeros(mesh.num_edges());
        p[a] = 1.0;
        let div = divergence(&mesh, &p);
        for t in 0..mesh.num_triangles() {
            let expected = if t == k {
                1.0 / mesh.geometry(k).area
            } else if t == l {
                -1.0 / mesh.geometry(l).area
            } else {
                0.0
            };
            assert!((div[t] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_continuity_across_edges() {
        let mesh = generate_rhombus_equilateral(3).unwrap();
        for (a, e) in mesh.edges().iter().enumerate().filter(|(_, e)| e.is_internal()) {
            let mut p = RTField::zeros(mesh.num_edges());
            p[a] = 1.0;
            let mid = Point2::from((mesh.vertices()[e.south].coords + mesh.vertices()[e.north].coords) / 2.0);
            let from_k = eval_rt_field(&mesh, &p, e.k(), mid).dot(&e.normal);
            let from_l = eval_rt_field(&mesh, &p, e.l().unwrap(), mid).dot(&e.normal);
            assert!((from_k - from_l).abs() < 1e-13);
        }
    }

    #[test]
    fn p0_means() {
        let reference = Mesh::new(
            vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let rule = TriangleRule::degree6();
        assert!((interpolate_p0(|x| x.x, &reference, rule)[0] - 1.0 / 3.0).abs() < 1e-15);
        let mesh = generate_rhombus_equilateral(4).unwrap();
        assert!(interpolate_p0(|_| 2.5, &mesh, rule).values().iter().all(|v| (v - 2.5).abs() < 1e-14));
        let affine = |x: Point2<f64>| 3.0 * x.x - 2.0 * x.y + 0.5;
        let means = interpolate_p0(affine, &mesh, rule);
        for (k, g) in mesh.geometries().iter().enumerate() {
            assert!((means[k] - affine(g.barycenter)).abs() < 1e-13);
        }
    }

    #[test]
    fn commuting_diagram() {
        let mesh = crate::mesh::Mesh::new(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.1),
                Point2::new(0.45, 0.8),
                Point2::new(1.3, 0.95),
                Point2::new(-0.4, 0.7),
            ],
            vec![[0, 1, 2], [1, 3, 2], [0, 2, 4]],
        )
        .unwrap();
        let p = interpolate_rt(|x| Vector2::new(x.x * x.x, x.x * x.y), &mesh, IntervalRule::gauss4());
        let lhs = divergence(&mesh, &p);
        let rhs = interpolate_p0(|x| 3.0 * x.x, &mesh, TriangleRule::degree6());
        for k in 0..mesh.num_triangles() {
            assert!((lhs[k] - rhs[k]).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn summation_by_parts(n in 1usize..5, seed in proptest::collection::vec(-10.0f64..10.0, 64)) {
            let mesh = generate_rhombus_equilateral(n).unwrap();
            let p = RTField((0..mesh.num_edges()).map(|i| seed[i % seed.len()]).collect());
            let u = P0Field((0..mesh.num_triangles()).map(|i| seed[(7 * i + 3) % seed.len()]).collect());
            let div = divergence(&mesh, &p);
            let lhs: f64 = (0..mesh.num_triangles()).map(|k| mesh.geometry(k).area * div[k] * u[k]).sum();
            let rhs: f64 = mesh.edges().iter().enumerate().map(|(a, e)| {
                let jump = u[e.k()] - e.l().map_or(0.0, |l| u[l]);
                p[a] * jump
            }).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }
    }
}
