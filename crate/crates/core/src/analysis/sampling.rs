//! Seeded random triangles.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mesh::TriangleGeometry;

/// Smallest angle accepted by [`random_triangle`]: 5°.
pub const MIN_SAMPLED_ANGLE: f64 = 5.0 * std::f64::consts::PI / 180.0;

/// Independent generator for item `index` of a run seeded with `seed`.
pub fn item_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A triangle with vertices uniform in the unit square, redrawn until its
/// smallest angle is at least [`MIN_SAMPLED_ANGLE`].
pub fn random_triangle<R: Rng>(rng: &mut R) -> TriangleGeometry {
    loop {
        let mut point = || Point2::new(rng.random::<f64>(), rng.random::<f64>());
        let g = TriangleGeometry::from_points(point(), point(), point());
        if !g.is_degenerate() && g.min_angle() >= MIN_SAMPLED_ANGLE {
            return g;
        }
    }
}

/// Like [`random_triangle`], additionally requiring every angle below `π/2`.
pub fn random_acute_triangle<R: Rng>(rng: &mut R) -> TriangleGeometry {
    loop {
        let g = random_triangle(rng);
        if g.max_angle() < FRAC_PI_2 {
            return g;
        }
    }
}
