//! Error norms and observed convergence rates.

use serde::Serialize;

use super::{AnalysisError, ManufacturedCase};
use crate::mesh::Mesh;
use crate::quadrature::TriangleRule;
use crate::solver::{flux_balance_check, solve_poisson, DirichletData, Solution, DEFAULT_MAX_ITER};
use crate::spaces::{divergence, eval_rt_field, interpolate_p0};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorNorms {
    /// `‖u - u_T‖₀`.
    pub eu: f64,
    /// `‖p - p_T‖₀`.
    pub ep: f64,
    /// `‖div (p - p_T)‖₀`.
    pub ediv: f64,
}

impl ErrorNorms {
    /// `‖u - u_T‖₀ + ‖p - p_T‖_{H(div)}`.
    pub fn combined(&self) -> f64 {
        self.eu + (self.ep * self.ep + self.ediv * self.ediv).sqrt()
    }
}

/// Errors of a discrete solution against the exact one. `div p = -f` is used
/// in place of differentiating the exact gradient.
pub fn error_norms(mesh: &Mesh, solution: &Solution, case: &ManufacturedCase, rule: &TriangleRule) -> ErrorNorms {
    let div = divergence(mesh, &solution.p);
    let (mut eu, mut ep, mut ediv) = (0.0, 0.0, 0.0);
    for (k, g) in mesh.geometries().iter().enumerate() {
        for (x, w) in rule.points(g) {
            eu += w * ((case.u)(x) - solution.u[k]).powi(2);
            ep += w * ((case.gradient)(x) - eval_rt_field(mesh, &solution.p, k, x)).norm_squared();
            ediv += w * (-(case.source)(x) - div[k]).powi(2);
        }
    }
    ErrorNorms { eu: eu.sqrt(), ep: ep.sqrt(), ediv: ediv.sqrt() }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelResult {
    pub n: usize,
    pub h: f64,
    pub cells: usize,
    pub errors: ErrorNorms,
    pub combined: f64,
    pub iterations: usize,
    pub residual: f64,
    pub max_balance_residual: f64,
}

/// Observed orders `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` between two levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rates {
    pub eu: f64,
    pub ep: f64,
    pub ediv: f64,
    pub combined: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub case: String,
    pub levels: Vec<LevelResult>,
    /// `rates[i]` compares `levels[i]` with `levels[i + 1]`.
    pub rates: Vec<Rates>,
}

impl ConvergenceReport {
    /// Rates between the two finest levels.
    pub fn final_rates(&self) -> Rates {
        *self.rates.last().expect("a convergence study has at least two levels")
    }
}

pub fn observed_rate(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (e_coarse / e_fine).ln() / (h_coarse / h_fine).ln()
}

/// Solves one level of `case` and measures its errors.
pub fn run_level(case: &ManufacturedCase, n: usize, tol: f64) -> Result<(Mesh, Solution, LevelResult), AnalysisError> {
    let rule = TriangleRule::degree6();
    let mesh = (case.mesh)(n)?;
    let f_t = interpolate_p0(case.source, &mesh, rule);
    let solution = solve_poisson(&mesh, &f_t, &DirichletData::zeros(&mesh), tol, DEFAULT_MAX_ITER)?;
    let errors = error_norms(&mesh, &solution, case, rule);
    let balance = flux_balance_check(&mesh, &solution, &f_t);
    let level = LevelResult {
        n,
        h: mesh.max_edge_length(),
        cells: mesh.num_triangles(),
        errors,
        combined: errors.combined(),
        iterations: solution.iterations,
        residual: solution.residual,
        max_balance_residual: balance.max_residual,
    };
    Ok((mesh, solution, level))
}

/// Runs `case` on every subdivision count in `levels` (strictly increasing).
pub fn convergence_study(case: &ManufacturedCase, levels: &[usize], tol: f64) -> Result<ConvergenceReport, AnalysisError> {
    if levels.len() < 2 {
        return Err(AnalysisError::TooFewLevels(levels.len()));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) || levels[0] == 0 {
        return Err(AnalysisError::LevelsNotIncreasing(levels.to_vec()));
    }

    let results = levels
        .iter()
        .map(|&n| run_level(case, n, tol).map(|(_, _, level)| level))
        .collect::<Result<Vec<_>, _>>()?;

    let rates = results
        .windows(2)
        .map(|w| {
            let (c, f) = (&w[0], &w[1]);
            let rate = |a: f64, b: f64| observed_rate(a, b, c.h, f.h);
            Rates {
                eu: rate(c.errors.eu, f.errors.eu),
                ep: rate(c.errors.ep, f.errors.ep),
                ediv: rate(c.errors.ediv, f.errors.ediv),
                combined: rate(c.combined, f.combined),
            }
        })
        .collect();

    Ok(ConvergenceReport { case: case.id.to_string(), levels: results, rates })
}
