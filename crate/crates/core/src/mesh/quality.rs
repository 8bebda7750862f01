use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::Mesh;

/// Guard band for the strict angle inequalities.
pub const ANGLE_GUARD: f64 = 1e-12;

/// Angle condition for one edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeCheck {
    pub edge: usize,
    pub internal: bool,
    /// `θ_{a,K} + θ_{a,L}` for internal edges, `θ_{a,K}` for boundary edges.
    pub opposite_angle: f64,
    /// Strict Delaunay (internal) or strictly acute opposite angle (boundary).
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshQualityReport {
    pub theta_min: f64,
    pub theta_max: f64,
    /// Every angle of every triangle is below `π/2`.
    pub acute: bool,
    pub admissible: bool,
    pub edges: Vec<EdgeCheck>,
    /// Ids of the edges that fail their angle condition.
    pub offending_edges: Vec<usize>,
}

/// Checks the angle conditions under which every transmissibility is positive:
/// `θ_{a,K} + θ_{a,L} < π` on internal edges and `θ_{a,K} < π/2` on boundary
/// edges, both with a guard band of [`ANGLE_GUARD`].
pub fn quality_report(mesh: &Mesh) -> MeshQualityReport {
    let mut theta_min = f64::INFINITY;
    let mut theta_max = f64::NEG_INFINITY;
    for g in mesh.geometries() {
        theta_min = theta_min.min(g.min_angle());
        theta_max = theta_max.max(g.max_angle());
    }

    let edges: Vec<EdgeCheck> = (0..mesh.num_edges())
        .map(|a| {
            let (theta_k, theta_l) = mesh.opposite_angles(a);
            match theta_l {
                Some(theta_l) => {
                    let sum = theta_k + theta_l;
                    EdgeCheck { edge: a, internal: true, opposite_angle: sum, ok: sum < PI - ANGLE_GUARD }
                }
                None => EdgeCheck {
                    edge: a,
                    internal: false,
                    opposite_angle: theta_k,
                    ok: theta_k < FRAC_PI_2 - ANGLE_GUARD,
                },
            }
        })
        .collect();
    let offending_edges: Vec<usize> = edges.iter().filter(|c| !c.ok).map(|c| c.edge).collect();

    MeshQualityReport {
        theta_min,
        theta_max,
        acute: theta_max < FRAC_PI_2 - ANGLE_GUARD,
        admissible: offending_edges.is_empty(),
        edges,
        offending_edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_rhombus_equilateral, generate_square_diagonal};
    use nalgebra::Point2;

    #[test]
    fn rhombus_is_admissible() {
        let r = quality_report(&generate_rhombus_equilateral(4).unwrap());
        assert!(r.admissible);
        assert!(r.acute);
        assert!((r.theta_min - PI / 3.0).abs() < 1e-12);
        assert!((r.theta_max - PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cocircular_diagonal_is_rejected() {
        let m = generate_square_diagonal(1).unwrap();
        let r = quality_report(&m);
        assert!(!r.admissible);
        let diagonal = m.edges().iter().position(|e| e.is_internal()).unwrap();
        assert!(r.offending_edges.contains(&diagonal));
        assert!((r.edges[diagonal].opposite_angle - PI).abs() < 1e-12);
    }

    #[test]
    fn right_angle_opposite_boundary_edge() {
        // Single right triangle: its hypotenuse faces the right angle.
        let m = Mesh::new(
            vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let r = quality_report(&m);
        assert!(!r.admissible);
        assert_eq!(r.offending_edges.len(), 1);
        assert!(!r.acute);
    }
}
