//! Numerical checks of the stability hypotheses with explicit constants.
//!
//! For a random RT field `p` with per-triangle flux sums `s_K = Σ_i p_{K,i}`:
//!
//! * H1 compares `(p, Πp)₀ = Σ_a c_a p_a²` with `A ‖p‖₀²`.
//! * H3 compares `(div Πp, div p)₀ = Σ_K s_K² ∫_K δ_K / |K|` with `‖div p‖₀² = Σ_K s_K² / |K|`.
//! * H4 compares `‖div Πp‖₀² = Σ_K s_K² I_K / |K|` with `D² ‖div p‖₀²`.

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::lemmas::INEQUALITY_GUARD;
use super::sampling::item_rng;
use super::AnalysisError;
use crate::dual::{cotan_coefficients, nu_bound, solve_delta_k};
use crate::mesh::{quality_report, Mesh};
use crate::quadrature::TriangleRule;
use crate::spaces::{local_fluxes, rt_norm_squared, RTField};

/// Tolerance on `|H3 ratio - 1|`.
pub const H3_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub trials: usize,
    pub seed: u64,
    pub theta_min: f64,
    pub theta_max: f64,
    /// `(2/5) cot θ_max tan θ_min`.
    pub a: f64,
    pub c: f64,
    /// `√ν(θ_min)`.
    pub d: f64,
    pub h1_min_ratio: f64,
    pub h3_max_deviation: f64,
    pub h4_max_ratio: f64,
    /// `max_K I_K`.
    pub max_energy: f64,
    /// `max_K √I_K`.
    pub max_sqrt_energy: f64,
    pub h1_passed: bool,
    pub h3_passed: bool,
    pub h4_passed: bool,
    pub passed: bool,
}

/// Evaluates H1, H3 and H4 on `trials` RT fields with i.i.d. standard normal
/// fluxes. Trial `i` draws from stream `i` of `seed`.
pub fn stability_check(mesh: &Mesh, trials: usize, seed: u64) -> Result<StabilityReport, AnalysisError> {
    if trials == 0 {
        return Err(AnalysisError::NoSamples);
    }
    let quality = quality_report(mesh);
    if !quality.admissible {
        return Err(AnalysisError::Inadmissible { offending_edges: quality.offending_edges });
    }
    let rule = TriangleRule::degree6();
    let coeffs = cotan_coefficients(mesh);

    let mut masses = Vec::with_capacity(mesh.num_triangles());
    let mut energies = Vec::with_capacity(mesh.num_triangles());
    for g in mesh.geometries() {
        let delta = solve_delta_k(g, rule)?;
        masses.push(rule.integrate(g, |x| delta.eval(x)));
        energies.push(delta.energy);
    }
    let max_energy = energies.iter().cloned().fold(0.0, f64::max);

    let a = 0.4 * quality.theta_min.tan() / quality.theta_max.tan();
    let c = 1.0;
    let d = nu_bound(quality.theta_min).sqrt();

    let mut h1_min_ratio = f64::INFINITY;
    let mut h3_max_deviation: f64 = 0.0;
    let mut h4_max_ratio: f64 = 0.0;
    for trial in 0..trials {
        let mut rng = item_rng(seed, trial as u64);
        let p = RTField((0..mesh.num_edges()).map(|_| StandardNormal.sample(&mut rng)).collect());

        let pairing: f64 = coeffs.values.iter().zip(p.values()).map(|(c, v)| c * v * v).sum();
        h1_min_ratio = h1_min_ratio.min(pairing / rt_norm_squared(mesh, &p));

        let (mut div_sq, mut h3_sum, mut h4_sum) = (0.0, 0.0, 0.0);
        for k in 0..mesh.num_triangles() {
            let s: f64 = local_fluxes(mesh, &p, k).iter().sum();
            let w = s * s / mesh.geometry(k).area;
            div_sq += w;
            h3_sum += w * masses[k];
            h4_sum += w * energies[k];
        }
        h3_max_deviation = h3_max_deviation.max((h3_sum / div_sq - 1.0).abs());
        h4_max_ratio = h4_max_ratio.max((h4_sum / div_sq).sqrt());
    }

    let h1_passed = h1_min_ratio >= a * (1.0 - INEQUALITY_GUARD);
    let h3_passed = h3_max_deviation <= H3_TOLERANCE;
    let h4_passed = h4_max_ratio <= d * (1.0 + INEQUALITY_GUARD);
    Ok(StabilityReport {
        trials,
        seed,
        theta_min: quality.theta_min,
        theta_max: quality.theta_max,
        a,
        c,
        d,
        h1_min_ratio,
        h3_max_deviation,
        h4_max_ratio,
        max_energy,
        max_sqrt_energy: max_energy.sqrt(),
        h1_passed,
        h3_passed,
        h4_passed,
        passed: h1_passed && h3_passed && h4_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_rhombus_equilateral, generate_square_diagonal};

    #[test]
    fn equilateral_rhombus() {
        let mesh = generate_rhombus_equilateral(4).unwrap();
        let report = stability_check(&mesh, 100, 42).unwrap();
        assert!((report.a - 0.4).abs() < 1e-12);
        assert!((report.d - nu_bound(std::f64::consts::FRAC_PI_3).sqrt()).abs() < 1e-9);
        assert!(report.passed, "{report:?}");
        assert!((report.max_energy - 128.0 / 3.0).abs() < 1e-9);
        // On a uniform mesh every I_K is equal, so the H4 ratio is exactly √I.
        assert!((report.h4_max_ratio - report.max_sqrt_energy).abs() < 1e-10);
    }

    #[test]
    fn deterministic() {
        let mesh = generate_rhombus_equilateral(2).unwrap();
        assert_eq!(stability_check(&mesh, 10, 1).unwrap(), stability_check(&mesh, 10, 1).unwrap());
    }

    #[test]
    fn rejects_inadmissible_mesh() {
        let mesh = generate_square_diagonal(2).unwrap();
        assert!(matches!(stability_check(&mesh, 10, 1), Err(AnalysisError::Inadmissible { .. })));
    }
}
