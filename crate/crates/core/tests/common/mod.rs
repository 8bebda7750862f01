#![allow(dead_code)]

use std::collections::HashSet;

use nalgebra::{Point2, Vector2};
use ptg::mesh::{generate_rhombus_equilateral, Mesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Equilateral rhombus mesh with interior vertices moved by up to
/// `amplitude * h` in each coordinate.
pub fn perturbed_rhombus(n: usize, amplitude: f64, seed: u64) -> Mesh {
    let base = generate_rhombus_equilateral(n).unwrap();
    let boundary: HashSet<usize> = base
        .edges()
        .iter()
        .filter(|e| !e.is_internal())
        .flat_map(|e| [e.south, e.north])
        .collect();
    let h = 1.0 / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = base
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if boundary.contains(&i) {
                *v
            } else {
                let d = Vector2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                v + d * amplitude * h
            }
        })
        .collect();
    let mesh = Mesh::new(vertices, base.triangles().to_vec()).unwrap();
    assert!(ptg::mesh::quality_report(&mesh).admissible);
    mesh
}

pub fn transform_mesh(mesh: &Mesh, scale: f64, rotation: f64, shift: Vector2<f64>) -> Mesh {
    let (s, c) = rotation.sin_cos();
    let vertices = mesh
        .vertices()
        .iter()
        .map(|v| Point2::new(scale * (c * v.x - s * v.y), scale * (s * v.x + c * v.y)) + shift)
        .collect();
    Mesh::new(vertices, mesh.triangles().to_vec()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
