//! Fixed quadrature rules on triangles and on the unit interval.
//!
//! Each rule carries its polynomial exactness degree and is checked against
//! exact monomial integrals when it is constructed. The embedded tables are
//! the symmetric 12-point degree-6 triangle rule and the 4-point
//! Gauss-Legendre rule (degree 7), both refined to full double precision.

use std::sync::OnceLock;

use nalgebra::Point2;
use thiserror::Error;

use crate::mesh::TriangleGeometry;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("rule has {points} points but {weights} weights")]
    LengthMismatch { points: usize, weights: usize },
    #[error("weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("rule claims degree {claimed} but fails on a monomial of degree {failed} (error {error:e})")]
    NotExact { claimed: usize, failed: usize, error: f64 },
}

/// A rule on the reference triangle, nodes in barycentric coordinates,
/// weights normalized to unit area.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    degree: usize,
}

/// A rule on `(0, 1)`.
#[derive(Debug, Clone)]
pub struct IntervalRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    degree: usize,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl TriangleRule {
    pub fn new(nodes: Vec<[f64; 3]>, weights: Vec<f64>, degree: usize) -> Result<Self, QuadratureError> {
        if nodes.len() != weights.len() {
            return Err(QuadratureError::LengthMismatch { points: nodes.len(), weights: weights.len() });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-14 {
            return Err(QuadratureError::WeightSum(sum));
        }
        let rule = Self { nodes, weights, degree };
        // λ₁^a λ₂^b over the unit-area reference triangle is 2 a! b! / (a + b + 2)!.
        for total in 0..=degree {
            for a in 0..=total {
                let b = total - a;
                let exact = 2.0 * factorial(a) * factorial(b) / factorial(a + b + 2);
                let approx: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(l, w)| w * l[0].powi(a as i32) * l[1].powi(b as i32))
                    .sum();
                let error = (approx - exact).abs();
                if error > 1e-13 {
                    return Err(QuadratureError::NotExact { claimed: degree, failed: total, error });
                }
            }
        }
        Ok(rule)
    }

    /// Symmetric 12-point rule, exact for total degree 6.
    #[allow(clippy::excessive_precision)]
    pub fn degree6() -> &'static TriangleRule {
        static RULE: OnceLock<TriangleRule> = OnceLock::new();
        RULE.get_or_init(|| {
            const A: f64 = 0.249_286_745_170_910_421_291_638_6;
            const WA: f64 = 0.116_786_275_726_379_366_025_289_6;
            const B: f64 = 0.063_089_014_491_502_228_340_331_6;
            const WB: f64 = 0.050_844_906_370_206_816_920_936_81;
            const C: f64 = 0.053_145_049_844_816_947_353_249_67;
            const D: f64 = 0.310_352_451_033_784_405_416_607_7;
            const WC: f64 = 0.082_851_075_618_373_575_193_553_46;
            let e = 1.0 - C - D;
            let mut nodes = Vec::with_capacity(12);
            let mut weights = Vec::with_capacity(12);
            for (p, w) in [(A, WA), (B, WB)] {
                let q = 1.0 - 2.0 * p;
                nodes.extend([[q, p, p], [p, q, p], [p, p, q]]);
                weights.extend([w; 3]);
            }
            nodes.extend([[C, D, e], [C, e, D], [D, C, e], [D, e, C], [e, C, D], [e, D, C]]);
            weights.extend([WC; 6]);
            TriangleRule::new(nodes, weights, 6).expect("embedded degree-6 rule")
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Physical points and weights (scaled by `|K|`) on `geometry`.
    pub fn points<'a>(&'a self, geometry: &'a TriangleGeometry) -> impl Iterator<Item = (Point2<f64>, f64)> + 'a {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(l, w)| (geometry.map_barycentric(l), w * geometry.area))
    }

    /// `Σ w_q |K| f(x_q)`.
    pub fn integrate<F: FnMut(Point2<f64>) -> f64>(&self, geometry: &TriangleGeometry, mut f: F) -> f64 {
        self.points(geometry).map(|(x, w)| w * f(x)).sum()
    }
}

impl IntervalRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, degree: usize) -> Result<Self, QuadratureError> {
        if nodes.len() != weights.len() {
            return Err(QuadratureError::LengthMismatch { points: nodes.len(), weights: weights.len() });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-14 {
            return Err(QuadratureError::WeightSum(sum));
        }
        let rule = Self { nodes, weights, degree };
        for k in 0..=degree {
            let exact = 1.0 / (k as f64 + 1.0);
            let error = (rule.integrate(|s| s.powi(k as i32)) - exact).abs();
            if error > 1e-13 {
                return Err(QuadratureError::NotExact { claimed: degree, failed: k, error });
            }
        }
        Ok(rule)
    }

    /// 4-point Gauss-Legendre on `(0, 1)`, exact for degree 7.
    #[allow(clippy::excessive_precision)]
    pub fn gauss4() -> &'static IntervalRule {
        static RULE: OnceLock<IntervalRule> = OnceLock::new();
        RULE.get_or_init(|| {
            const X0: f64 = 0.069_431_844_202_973_712_388_026_76;
            const X1: f64 = 0.330_009_478_207_571_867_598_667_1;
            const W0: f64 = 0.173_927_422_568_726_928_686_532;
            const W1: f64 = 0.326_072_577_431_273_071_313_468;
            IntervalRule::new(vec![X0, X1, 1.0 - X1, 1.0 - X0], vec![W0, W1, W1, W0], 7)
                .expect("embedded Gauss rule")
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&s, w)| w * f(s)).sum()
    }

    /// `∫ f ds` along the segment from `a` to `b` (arc length measure).
    pub fn integrate_segment<F: FnMut(Point2<f64>) -> f64>(&self, a: Point2<f64>, b: Point2<f64>, mut f: F) -> f64 {
        let length = (b - a).norm();
        length * self.integrate(|s| f(a + (b - a) * s))
    }
}
