//! Built-in manufactured solutions.

use std::f64::consts::PI;

use nalgebra::{Point2, Vector2};

use crate::mesh::{generate_rhombus_equilateral, Mesh, MeshError};

/// An exact solution of `-Δu = f` with `u = 0` on the boundary of the
/// domain produced by `mesh`.
#[derive(Clone, Copy)]
pub struct ManufacturedCase {
    pub id: &'static str,
    pub description: &'static str,
    pub u: fn(Point2<f64>) -> f64,
    pub gradient: fn(Point2<f64>) -> Vector2<f64>,
    pub source: fn(Point2<f64>) -> f64,
    pub mesh: fn(usize) -> Result<Mesh, MeshError>,
}

impl std::fmt::Debug for ManufacturedCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManufacturedCase").field("id", &self.id).finish_non_exhaustive()
    }
}

/// Rhombus coordinates `ξ = x - y/√3`, `η = 2y/√3`, mapping the rhombus of
/// [`generate_rhombus_equilateral`] onto the unit square.
pub fn rhombus_coordinates(x: Point2<f64>) -> (f64, f64) {
    let s3 = 3f64.sqrt();
    (x.x - x.y / s3, 2.0 * x.y / s3)
}

fn sine_u(x: Point2<f64>) -> f64 {
    let (xi, eta) = rhombus_coordinates(x);
    (PI * xi).sin() * (PI * eta).sin()
}

fn sine_gradient(x: Point2<f64>) -> Vector2<f64> {
    let s3 = 3f64.sqrt();
    let (xi, eta) = rhombus_coordinates(x);
    let d_xi = PI * (PI * xi).cos() * (PI * eta).sin();
    let d_eta = PI * (PI * xi).sin() * (PI * eta).cos();
    // ∇ξ = (1, -1/√3), ∇η = (0, 2/√3).
    Vector2::new(d_xi, -d_xi / s3 + 2.0 * d_eta / s3)
}

fn sine_source(x: Point2<f64>) -> f64 {
    // |∇ξ|² = |∇η|² = 4/3 and ∇ξ·∇η = -2/3.
    let (xi, eta) = rhombus_coordinates(x);
    let (s_xi, c_xi) = (PI * xi).sin_cos();
    let (s_eta, c_eta) = (PI * eta).sin_cos();
    4.0 * PI * PI / 3.0 * (2.0 * s_xi * s_eta + c_xi * c_eta)
}

static CASES: [ManufacturedCase; 2] = [
    ManufacturedCase {
        id: "rhombus-sine",
        description: "u = sin(πξ) sin(πη) on the equilateral rhombus",
        u: sine_u,
        gradient: sine_gradient,
        source: sine_source,
        mesh: generate_rhombus_equilateral,
    },
    ManufacturedCase {
        id: "rhombus-zero",
        description: "u = 0, f = 0 on the equilateral rhombus",
        u: |_| 0.0,
        gradient: |_| Vector2::zeros(),
        source: |_| 0.0,
        mesh: generate_rhombus_equilateral,
    },
];

pub fn cases() -> &'static [ManufacturedCase] {
    &CASES
}

pub fn find_case(id: &str) -> Option<&'static ManufacturedCase> {
    CASES.iter().find(|c| c.id == id)
}

pub fn case_ids() -> Vec<&'static str> {
    CASES.iter().map(|c| c.id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn source_matches_finite_difference_laplacian() {
        let case = find_case("rhombus-sine").unwrap();
        let h = 1e-4;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let (xi, eta): (f64, f64) = (rng.random_range(0.01..0.99), rng.random_range(0.01..0.99));
            let s3 = 3f64.sqrt();
            let x = Point2::new(xi + eta / 2.0, eta * s3 / 2.0);
            let u = case.u;
            let lap = (u(x + Vector2::new(h, 0.0)) + u(x - Vector2::new(h, 0.0)) + u(x + Vector2::new(0.0, h))
                + u(x - Vector2::new(0.0, h))
                - 4.0 * u(x))
                / (h * h);
            assert!((lap + (case.source)(x)).abs() <= 1e-5, "residual {}", lap + (case.source)(x));
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let case = find_case("rhombus-sine").unwrap();
        let h = 1e-6;
        for x in [Point2::new(0.4, 0.2), Point2::new(1.1, 0.7), Point2::new(0.8, 0.433)] {
            let fd = Vector2::new(
                ((case.u)(x + Vector2::new(h, 0.0)) - (case.u)(x - Vector2::new(h, 0.0))) / (2.0 * h),
                ((case.u)(x + Vector2::new(0.0, h)) - (case.u)(x - Vector2::new(0.0, h))) / (2.0 * h),
            );
            assert!((fd - (case.gradient)(x)).norm() < 1e-8);
        }
    }

    #[test]
    fn vanishes_on_boundary() {
        let case = find_case("rhombus-sine").unwrap();
        let mesh = (case.mesh)(8).unwrap();
        for e in mesh.edges().iter().filter(|e| !e.is_internal()) {
            for v in [e.south, e.north] {
                assert!((case.u)(mesh.vertices()[v]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn registry() {
        assert_eq!(case_ids(), vec!["rhombus-sine", "rhombus-zero"]);
        assert!(find_case("square").is_none());
    }
}
