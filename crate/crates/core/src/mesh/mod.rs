//! Conformal triangular meshes with canonical edge orientation.
//!
//! Every edge `a` carries a unit normal `n_a` and a coboundary: the pair
//! `(K, L)` of incident triangles for an internal edge, with `n_a` pointing
//! from `K` to `L`, or the single triangle `K` for a boundary edge, with `n_a`
//! pointing out of the domain. `K` is always the incident triangle with the
//! smaller index. The endpoints `S_a`, `N_a` are ordered so that
//! `(n_a, N_a - S_a)` is a direct frame.

mod generate;
mod geometry;
mod io;
mod quality;

use std::collections::{HashMap, HashSet};

use nalgebra::{Point2, Vector2};
use serde::Serialize;
use thiserror::Error;

pub use generate::{generate_rhombus_equilateral, generate_square_diagonal};
pub use geometry::{signed_double_area, TriangleGeometry};
pub use io::{read_mesh, write_mesh, ReadMeshError};
pub use quality::{quality_report, EdgeCheck, MeshQualityReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("a mesh needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("a mesh needs at least one triangle")]
    NoTriangles,
    #[error("triangle {triangle} references vertex {vertex}, but the mesh has {count} vertices")]
    IndexOutOfRange { triangle: usize, vertex: usize, count: usize },
    #[error("triangle {0} is degenerate (zero area)")]
    Degenerate(usize),
    #[error("triangle {second} duplicates triangle {first}")]
    DuplicateTriangle { first: usize, second: usize },
    #[error("edge ({0}, {1}) is shared by more than two triangles")]
    NonConforming(usize, usize),
    #[error("triangles {0} and {1} overlap across their common edge")]
    Folded(usize, usize),
}

/// Coboundary of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EdgeKind {
    Internal { k: usize, l: usize },
    Boundary { k: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    /// `S_a`.
    pub south: usize,
    /// `N_a`.
    pub north: usize,
    pub normal: Vector2<f64>,
    pub kind: EdgeKind,
    /// `W_a`, the vertex of `K` opposite the edge.
    pub west: usize,
    /// `E_a`, the vertex of `L` opposite the edge (internal edges only).
    pub east: Option<usize>,
    pub length: f64,
}

impl Edge {
    pub fn is_internal(&self) -> bool {
        matches!(self.kind, EdgeKind::Internal { .. })
    }

    /// The triangle `K` on the tail side of the normal.
    pub fn k(&self) -> usize {
        match self.kind {
            EdgeKind::Internal { k, .. } | EdgeKind::Boundary { k } => k,
        }
    }

    pub fn l(&self) -> Option<usize> {
        match self.kind {
            EdgeKind::Internal { l, .. } => Some(l),
            EdgeKind::Boundary { .. } => None,
        }
    }
}

/// Immutable conformal triangulation.
#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<Point2<f64>>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    triangle_edges: Vec<[usize; 3]>,
    triangle_signs: Vec<[f64; 3]>,
    geometry: Vec<TriangleGeometry>,
}

impl Mesh {
    /// Builds a mesh from vertex coordinates and vertex-index triples.
    ///
    /// Clockwise triangles are silently reoriented. Edges are numbered in
    /// order of first appearance when walking triangles in index order.
    pub fn new(vertices: Vec<Point2<f64>>, triangles: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        if vertices.len() < 3 {
            return Err(MeshError::TooFewVertices(vertices.len()));
        }
        if triangles.is_empty() {
            return Err(MeshError::NoTriangles);
        }

        let mut oriented = Vec::with_capacity(triangles.len());
        let mut geometry = Vec::with_capacity(triangles.len());
        let mut seen = HashMap::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= vertices.len() {
                    return Err(MeshError::IndexOutOfRange { triangle: t, vertex: v, count: vertices.len() });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::Degenerate(t));
            }
            let mut key = *tri;
            key.sort_unstable();
            if let Some(&first) = seen.get(&key) {
                return Err(MeshError::DuplicateTriangle { first, second: t });
            }
            seen.insert(key, t);

            let [a, b, c] = *tri;
            let tri = if signed_double_area(&vertices[a], &vertices[b], &vertices[c]) < 0.0 {
                [a, c, b]
            } else {
                [a, b, c]
            };
            let geo = TriangleGeometry::from_points(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if geo.is_degenerate() {
                return Err(MeshError::Degenerate(t));
            }
            oriented.push(tri);
            geometry.push(geo);
        }

        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut triangle_edges = vec![[0usize; 3]; oriented.len()];
        let mut triangle_signs = vec![[1.0f64; 3]; oriented.len()];
        let mut shared: HashSet<usize> = HashSet::new();

        for (t, tri) in oriented.iter().enumerate() {
            for i in 0..3 {
                let s = tri[(i + 1) % 3];
                let n = tri[(i + 2) % 3];
                let key = (s.min(n), s.max(n));
                match edge_of.get(&key) {
                    None => {
                        let id = edges.len();
                        edge_of.insert(key, id);
                        edges.push(Edge {
                            south: s,
                            north: n,
                            normal: geometry[t].outward_normal(i),
                            kind: EdgeKind::Boundary { k: t },
                            west: tri[i],
                            east: None,
                            length: geometry[t].edge_lengths[i],
                        });
                        triangle_edges[t][i] = id;
                        triangle_signs[t][i] = 1.0;
                    }
                    Some(&id) => {
                        if !shared.insert(id) {
                            return Err(MeshError::NonConforming(key.0, key.1));
                        }
                        let edge = &mut edges[id];
                        let k = edge.k();
                        // n_a must point from K towards L.
                        let towards = geometry[t].barycenter - geometry[k].barycenter;
                        if edge.normal.dot(&towards) <= 0.0 || edge.south != n || edge.north != s {
                            return Err(MeshError::Folded(k, t));
                        }
                        edge.kind = EdgeKind::Internal { k, l: t };
                        edge.east = Some(tri[i]);
                        triangle_edges[t][i] = id;
                        triangle_signs[t][i] = -1.0;
                    }
                }
            }
        }

        Ok(Self { vertices, triangles: oriented, edges, triangle_edges, triangle_signs, geometry })
    }

    pub fn vertices(&self) -> &[Point2<f64>] {
        &self.vertices
    }

    /// Vertex triples, counter-clockwise.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_internal_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.is_internal()).count()
    }

    pub fn num_boundary_edges(&self) -> usize {
        self.num_edges() - self.num_internal_edges()
    }

    /// Edge ids of triangle `k`; entry `i` is the edge opposite local vertex `i`.
    pub fn triangle_edges(&self, k: usize) -> [usize; 3] {
        self.triangle_edges[k]
    }

    /// Incidence signs `ε_i = n_a · n_{K,i}` of triangle `k`.
    pub fn triangle_signs(&self, k: usize) -> [f64; 3] {
        self.triangle_signs[k]
    }

    pub fn geometry(&self, k: usize) -> &TriangleGeometry {
        &self.geometry[k]
    }

    pub fn geometries(&self) -> &[TriangleGeometry] {
        &self.geometry
    }

    /// `h_T`, the longest edge of the mesh.
    pub fn max_edge_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    /// The angle `θ_{a,K}` opposite edge `a` in triangle `K`, and `θ_{a,L}` when internal.
    pub fn opposite_angles(&self, edge: usize) -> (f64, Option<f64>) {
        let e = &self.edges[edge];
        let angle_in = |t: usize| {
            let i = self.local_index(t, edge);
            self.geometry[t].angles[i]
        };
        (angle_in(e.k()), e.l().map(angle_in))
    }

    /// Local index of `edge` within triangle `t`.
    ///
    /// Panics if the edge is not incident to the triangle.
    pub fn local_index(&self, t: usize, edge: usize) -> usize {
        self.triangle_edges[t]
            .iter()
            .position(|&e| e == edge)
            .unwrap_or_else(|| panic!("edge {edge} is not incident to triangle {t}"))
    }
}
