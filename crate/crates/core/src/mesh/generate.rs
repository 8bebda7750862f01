//! Structured mesh generators.

use nalgebra::Point2;

use super::{Mesh, MeshError};

/// Tiles the rhombus `(0,0), (1,0), (3/2, √3/2), (1/2, √3/2)` with `2n²`
/// equilateral triangles of side `1/n`.
///
/// Every angle is `π/3`, so the mesh is admissible for the four-point scheme.
pub fn generate_rhombus_equilateral(n: usize) -> Result<Mesh, MeshError> {
    if n == 0 {
        return Err(MeshError::NoTriangles);
    }
    let h = 1.0 / n as f64;
    let half_sqrt3 = 3f64.sqrt() / 2.0;
    let index = |i: usize, j: usize| j * (n + 1) + i;

    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Point2::new((i as f64 + 0.5 * j as f64) * h, half_sqrt3 * j as f64 * h));
        }
    }

    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            triangles.push([index(i, j), index(i + 1, j), index(i, j + 1)]);
            triangles.push([index(i + 1, j), index(i + 1, j + 1), index(i, j + 1)]);
        }
    }
    Mesh::new(vertices, triangles)
}

/// Unit square split into `n × n` cells, each cut by its rising diagonal.
///
/// All triangles are right isosceles, so every diagonal is cocircular and the
/// mesh is not admissible. Useful as a negative test case.
pub fn generate_square_diagonal(n: usize) -> Result<Mesh, MeshError> {
    if n == 0 {
        return Err(MeshError::NoTriangles);
    }
    let h = 1.0 / n as f64;
    let index = |i: usize, j: usize| j * (n + 1) + i;

    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Point2::new(i as f64 * h, j as f64 * h));
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            triangles.push([index(i, j), index(i + 1, j), index(i + 1, j + 1)]);
            triangles.push([index(i, j), index(i + 1, j + 1), index(i, j + 1)]);
        }
    }
    Mesh::new(vertices, triangles)
}
