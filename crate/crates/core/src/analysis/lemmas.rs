//! Randomized verification of the per-triangle identities and bounds.
//!
//! Each check draws its own triangles from an independent stream and
//! reports how many samples passed, the worst slack, and the triangle that
//! produced it. For an inequality `lhs ≤ rhs` the slack is `(rhs - lhs)/|rhs|`;
//! for an identity checked at tolerance `tol` it is `tol - error`. Negative
//! slack means failure.

use serde::Serialize;

use super::sampling::{item_rng, random_acute_triangle, random_triangle};
use super::AnalysisError;
use crate::dual::{delta_energy_closed_form, energy_polynomials, nu_bound, power_sum, solve_delta_k};
use crate::mesh::TriangleGeometry;
use crate::quadrature::TriangleRule;
use crate::spaces::{local_gram_closed_form, local_gram_quadrature};

/// Relative rounding allowance on inequalities that are attained with
/// equality by some triangles (the equilateral one for the gyration bound).
pub const INEQUALITY_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub samples: usize,
    /// Number of samples that satisfied the check.
    pub passed: usize,
    pub worst_slack: f64,
    /// Vertices of the triangle with the smallest slack.
    pub witness: Option<[[f64; 2]; 3]>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.passed == self.samples
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

/// Outcome of one check on one triangle.
#[derive(Debug, Clone, Copy)]
pub enum Outcome {
    Identity { error: f64, tol: f64 },
    AtMost { lhs: f64, rhs: f64 },
}

impl Outcome {
    fn slack(&self) -> f64 {
        match *self {
            Outcome::Identity { error, tol } => {
                if error.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    tol - error
                }
            }
            Outcome::AtMost { lhs, rhs } => {
                let s = (rhs - lhs) / rhs.abs();
                if s.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    s
                }
            }
        }
    }

    fn passes(&self) -> bool {
        match *self {
            Outcome::Identity { .. } => self.slack() >= 0.0,
            Outcome::AtMost { .. } => self.slack() >= -INEQUALITY_GUARD,
        }
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn worst(outcomes: &[Outcome]) -> Outcome {
    *outcomes
        .iter()
        .min_by(|a, b| a.slack().total_cmp(&b.slack()))
        .expect("at least one outcome")
}

type Check = fn(&TriangleGeometry, &TriangleRule) -> Vec<Outcome>;

/// Name, sampler and evaluator of every check in the suite.
pub fn checks() -> Vec<(&'static str, bool, Check)> {
    vec![
        ("gyration_bounds", false, |g, _| {
            let t = g.shape_factor();
            vec![
                Outcome::AtMost { lhs: 1.0 / 6.0, rhs: t },
                Outcome::AtMost { lhs: t, rhs: 1.0 / (3.0 * g.min_angle().tan()) },
            ]
        }),
        ("gyration_quadrature", false, |g, rule| {
            let integral = rule.integrate(g, |x| (x - g.barycenter).norm_squared()) / g.area;
            vec![Outcome::Identity { error: relative(g.gyration_sq, integral), tol: 1e-12 }]
        }),
        ("gram_eigenvalue_bounds", false, |g, rule| {
            let tan = g.min_angle().tan();
            let ev = local_gram_quadrature(g, rule).eigenvalues();
            vec![
                Outcome::AtMost { lhs: tan * tan / 48.0, rhs: ev[0] },
                Outcome::AtMost { lhs: ev[2], rhs: 5.0 / (4.0 * tan) },
            ]
        }),
        ("gram_closed_form", false, |g, rule| {
            let closed = local_gram_closed_form(g).0;
            let quad = local_gram_quadrature(g, rule).0;
            // Entrywise relative error, floored at 1e-3 of the largest entry
            // so that near-zero off-diagonal entries do not divide by zero.
            let floor = 1e-3 * quad.abs().max();
            let error = closed
                .iter()
                .zip(quad.iter())
                .map(|(c, q)| (c - q).abs() / q.abs().max(floor))
                .fold(0.0, f64::max);
            vec![Outcome::Identity { error, tol: 1e-11 }]
        }),
        ("gram_trace", false, |g, rule| {
            let trace = local_gram_quadrature(g, rule).trace();
            vec![Outcome::Identity { error: relative(trace, 15.0 * g.shape_factor() / 4.0), tol: 1e-10 }]
        }),
        ("gram_determinant", false, |g, rule| {
            let det = local_gram_quadrature(g, rule).determinant();
            vec![Outcome::Identity { error: relative(det, g.shape_factor() / 16.0), tol: 1e-10 }]
        }),
        ("gram_minor_sum", false, |g, rule| {
            let r = local_gram_quadrature(g, rule).minor_sum();
            let t = g.shape_factor();
            vec![Outcome::Identity { error: relative(r, 1.0 / 12.0 + 2.25 * t * t), tol: 1e-10 }]
        }),
        ("cotangent_sum", false, |g, _| {
            let sum: f64 = (0..3).map(|i| g.cotangent(i)).sum();
            vec![Outcome::Identity { error: relative(sum, 9.0 * g.shape_factor()), tol: 1e-11 }]
        }),
        ("cotangent_product_sum", false, |g, _| {
            let sum: f64 = (0..3).map(|i| g.cotangent(i) * g.cotangent((i + 1) % 3)).sum();
            vec![Outcome::Identity { error: (sum - 1.0).abs(), tol: 1e-11 }]
        }),
        ("circumcenter_distance", true, |g, _| {
            (0..3)
                .map(|i| Outcome::Identity {
                    error: (0.5 * g.cotangent(i) - g.circumcenter_distance(i) / g.edge_lengths[i]).abs(),
                    tol: 1e-11,
                })
                .collect()
        }),
        ("delta_constraints", false, |g, rule| match solve_delta_k(g, rule) {
            Ok(delta) => {
                // Each residual is measured against the integral of its
                // absolute integrand, the scale of the cancellation involved.
                let mut scale = [rule.integrate(g, |x| delta.eval(x).abs()), 0.0, 0.0, 0.0];
                for i in 0..3 {
                    scale[i + 1] = rule.integrate(g, |x| (delta.eval(x) * (x - g.vertices[i]).norm_squared()).abs());
                }
                let error = delta
                    .constraint_residuals(g, rule)
                    .iter()
                    .zip(scale)
                    .map(|(r, s)| r.abs() / s)
                    .fold(0.0, f64::max);
                vec![Outcome::Identity { error, tol: 1e-10 }]
            }
            Err(_) => vec![Outcome::Identity { error: f64::NAN, tol: 1e-10 }],
        }),
        ("delta_energy_bound", false, |g, rule| match solve_delta_k(g, rule) {
            Ok(delta) => vec![Outcome::AtMost { lhs: delta.energy, rhs: nu_bound(g.min_angle()) }],
            Err(_) => vec![Outcome::Identity { error: f64::NAN, tol: 0.0 }],
        }),
        ("delta_energy_closed_form", false, |g, rule| match solve_delta_k(g, rule) {
            Ok(delta) => vec![Outcome::Identity { error: relative(delta_energy_closed_form(g), delta.energy), tol: 1e-8 }],
            Err(_) => vec![Outcome::Identity { error: f64::NAN, tol: 1e-8 }],
        }),
        ("denominator_lower_bound", false, |g, _| {
            let (_, d) = energy_polynomials(&g.edge_lengths);
            let s2 = power_sum(&g.edge_lengths, 2);
            vec![Outcome::AtMost { lhs: 5.0 / 12.0 * s2 * s2, rhs: d }]
        }),
        ("numerator_upper_bound", false, |g, _| {
            let (n, _) = energy_polynomials(&g.edge_lengths);
            let s2 = power_sum(&g.edge_lengths, 2);
            vec![Outcome::AtMost { lhs: n, rhs: 23.0 * s2.powi(6) }]
        }),
    ]
}

fn witness(g: &TriangleGeometry) -> [[f64; 2]; 3] {
    g.vertices.map(|v| [v.x, v.y])
}

/// Runs one check over a fixed list of triangles.
pub fn run_check(name: &str, check: Check, triangles: &[TriangleGeometry]) -> CheckReport {
    let rule = TriangleRule::degree6();
    let mut passed = 0;
    let mut worst_slack = f64::INFINITY;
    let mut witness_triangle = None;
    for g in triangles {
        let outcome = worst(&check(g, rule));
        if outcome.passes() {
            passed += 1;
        }
        let slack = outcome.slack();
        if witness_triangle.is_none() || slack < worst_slack {
            worst_slack = slack;
            witness_triangle = Some(witness(g));
        }
    }
    CheckReport { check: name.to_string(), samples: triangles.len(), passed, worst_slack, witness: witness_triangle }
}

/// Runs every check on `samples` random triangles.
pub fn lemma_suite(samples: usize, seed: u64) -> Result<SuiteReport, AnalysisError> {
    if samples == 0 {
        return Err(AnalysisError::NoSamples);
    }
    let checks = checks()
        .into_iter()
        .enumerate()
        .map(|(index, (name, acute, check))| {
            let mut rng = item_rng(seed, index as u64);
            let triangles: Vec<TriangleGeometry> = (0..samples)
                .map(|_| if acute { random_acute_triangle(&mut rng) } else { random_triangle(&mut rng) })
                .collect();
            run_check(name, check, &triangles)
        })
        .collect::<Vec<_>>();
    Ok(SuiteReport { seed, samples, passed: checks.iter().all(CheckReport::ok), checks })
}
