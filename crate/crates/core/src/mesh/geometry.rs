//! Per-triangle geometric quantities.

use nalgebra::{Point2, Vector2};
use serde::Serialize;

/// Geometry of a single triangle, with local numbering tied to its vertices.
///
/// Local index `i` names vertex `W_i = vertices[i]`, the edge `a_i` opposite
/// to it (running from `vertices[i + 1]` to `vertices[i + 2]`), and the angle
/// `θ_i` at `W_i`. Vertices are always stored counter-clockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleGeometry {
    pub vertices: [Point2<f64>; 3],
    pub area: f64,
    /// `edge_lengths[i] = |a_i|`.
    pub edge_lengths: [f64; 3],
    /// `angles[i]` is the interior angle at `vertices[i]`, in radians.
    pub angles: [f64; 3],
    pub circumcenter: Point2<f64>,
    /// Squared gyration radius `ρ²`, i.e. the mean of `|x - G|²` over the triangle.
    pub gyration_sq: f64,
    pub barycenter: Point2<f64>,
}

/// Twice the signed area of `(a, b, c)`; positive when counter-clockwise.
pub fn signed_double_area(a: &Point2<f64>, b: &Point2<f64>, c: &Point2<f64>) -> f64 {
    let u = b - a;
    let v = c - a;
    u.x * v.y - u.y * v.x
}

impl TriangleGeometry {
    /// Builds the geometry of the triangle `(a, b, c)`.
    ///
    /// Clockwise input is reordered to `(a, c, b)`. The caller is responsible
    /// for rejecting degenerate triangles; see [`TriangleGeometry::is_degenerate`].
    pub fn from_points(a: Point2<f64>, b: Point2<f64>, c: Point2<f64>) -> Self {
        let vertices = if signed_double_area(&a, &b, &c) < 0.0 {
            [a, c, b]
        } else {
            [a, b, c]
        };
        let area = 0.5 * signed_double_area(&vertices[0], &vertices[1], &vertices[2]);

        let mut edge_lengths = [0.0; 3];
        let mut angles = [0.0; 3];
        for i in 0..3 {
            let w = vertices[i];
            let s = vertices[(i + 1) % 3];
            let n = vertices[(i + 2) % 3];
            edge_lengths[i] = (n - s).norm();
            let e1 = s - w;
            let e2 = n - w;
            let cos = e1.dot(&e2) / (e1.norm() * e2.norm());
            angles[i] = cos.clamp(-1.0, 1.0).acos();
        }

        let barycenter = Point2::from((vertices[0].coords + vertices[1].coords + vertices[2].coords) / 3.0);
        let gyration_sq = edge_lengths.iter().map(|l| l * l).sum::<f64>() / 36.0;

        Self {
            vertices,
            area,
            edge_lengths,
            angles,
            circumcenter: circumcenter(&vertices),
            gyration_sq,
            barycenter,
        }
    }

    /// True when the area is below `1e-14 · max|a_i|²`.
    pub fn is_degenerate(&self) -> bool {
        let longest = self.edge_lengths.iter().cloned().fold(0.0, f64::max);
        self.area.partial_cmp(&(1e-14 * longest * longest)) != Some(std::cmp::Ordering::Greater)
    }

    /// Cotangent of the angle at vertex `i`, from the dot/cross product of the
    /// two adjacent edge vectors.
    pub fn cotangent(&self, i: usize) -> f64 {
        let w = self.vertices[i];
        let e1 = self.vertices[(i + 1) % 3] - w;
        let e2 = self.vertices[(i + 2) % 3] - w;
        e1.dot(&e2) / (2.0 * self.area)
    }

    pub fn min_angle(&self) -> f64 {
        self.angles.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_angle(&self) -> f64 {
        self.angles.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Endpoints of the edge opposite vertex `i`, in counter-clockwise order.
    pub fn edge_endpoints(&self, i: usize) -> (Point2<f64>, Point2<f64>) {
        (self.vertices[(i + 1) % 3], self.vertices[(i + 2) % 3])
    }

    /// Unit outward normal of the edge opposite vertex `i`.
    pub fn outward_normal(&self, i: usize) -> Vector2<f64> {
        let (s, n) = self.edge_endpoints(i);
        let t = n - s;
        Vector2::new(t.y, -t.x) / t.norm()
    }

    pub fn edge_midpoint(&self, i: usize) -> Point2<f64> {
        let (s, n) = self.edge_endpoints(i);
        Point2::from((s.coords + n.coords) * 0.5)
    }

    /// Signed distance from the circumcenter to the line of edge `i`, positive
    /// when the circumcenter lies on the same side as the triangle.
    pub fn circumcenter_distance(&self, i: usize) -> f64 {
        (self.edge_midpoint(i) - self.circumcenter).dot(&self.outward_normal(i))
    }

    /// Maps barycentric coordinates (weights of `vertices[0..3]`) to a point.
    pub fn map_barycentric(&self, lambda: &[f64; 3]) -> Point2<f64> {
        Point2::from(
            self.vertices[0].coords * lambda[0]
                + self.vertices[1].coords * lambda[1]
                + self.vertices[2].coords * lambda[2],
        )
    }

    /// `ρ² / |K|`, the dimensionless shape factor used throughout the mass
    /// matrix identities.
    pub fn shape_factor(&self) -> f64 {
        self.gyration_sq / self.area
    }

    /// Applies `x ↦ scale · x + shift` to every vertex.
    pub fn transformed(&self, scale: f64, rotation: f64, shift: Vector2<f64>) -> Self {
        let (s, c) = rotation.sin_cos();
        let map = |p: &Point2<f64>| Point2::new(scale * (c * p.x - s * p.y), scale * (s * p.x + c * p.y)) + shift;
        Self::from_points(map(&self.vertices[0]), map(&self.vertices[1]), map(&self.vertices[2]))
    }
}

fn circumcenter(v: &[Point2<f64>; 3]) -> Point2<f64> {
    // Intersection of the perpendicular bisectors, relative to v[0].
    let b = v[1] - v[0];
    let c = v[2] - v[0];
    let d = 2.0 * (b.x * c.y - b.y * c.x);
    let b2 = b.norm_squared();
    let c2 = c.norm_squared();
    let ux = (c.y * b2 - b.y * c2) / d;
    let uy = (b.x * c2 - c.x * b2) / d;
    v[0] + Vector2::new(ux, uy)
}
