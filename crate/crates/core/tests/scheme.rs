mod common;

use common::{perturbed_rhombus, rng, transform_mesh};
use nalgebra::{Point2, Vector2};
use ptg::dual::cotan_coefficients;
use ptg::mesh::{generate_rhombus_equilateral, Mesh};
use ptg::quadrature::{IntervalRule, TriangleRule};
use ptg::solver::{
    assemble, discrete_gradient, flux_balance_check, solve, solve_poisson, DirichletData, DEFAULT_MAX_ITER,
};
use ptg::spaces::{divergence, interpolate_p0, interpolate_rt, P0Field, RTField};
use rand::Rng;

const TOL: f64 = 1e-12;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn commuting_diagram_on_random_mesh() {
    let mesh = perturbed_rhombus(8, 0.12, 11);
    let p = interpolate_rt(|x| Vector2::new(x.x * x.x, x.x * x.y), &mesh, IntervalRule::gauss4());
    let div_p = divergence(&mesh, &p);
    let means = interpolate_p0(|x| 3.0 * x.x, &mesh, TriangleRule::degree6());
    for k in 0..mesh.num_triangles() {
        assert!((div_p[k] - means[k]).abs() <= 1e-10);
    }
}

#[test]
fn summation_by_parts_on_random_mesh() {
    let mesh = perturbed_rhombus(6, 0.12, 12);
    let mut r = rng(13);
    let p = RTField((0..mesh.num_edges()).map(|_| r.random_range(-1.0..1.0)).collect());
    let u = P0Field((0..mesh.num_triangles()).map(|_| r.random_range(-1.0..1.0)).collect());
    let div = divergence(&mesh, &p);
    let lhs: f64 = (0..mesh.num_triangles()).map(|k| mesh.geometry(k).area * div[k] * u[k]).sum();
    let rhs: f64 = mesh
        .edges()
        .iter()
        .enumerate()
        .map(|(a, e)| p[a] * (u[e.k()] - e.l().map_or(0.0, |l| u[l])))
        .sum();
    assert!((lhs - rhs).abs() <= 1e-12);
}

#[test]
fn matrix_uses_circumcenter_distances() {
    let mesh = perturbed_rhombus(6, 0.12, 14);
    let coeffs = cotan_coefficients(&mesh);
    let f = P0Field(vec![0.0; mesh.num_triangles()]);
    let system = assemble(&mesh, &coeffs, &f, &DirichletData::zeros(&mesh)).unwrap();
    assert!(system.matrix.is_symmetric());
    for (a, e) in mesh.edges().iter().enumerate() {
        let d = |t: usize| {
            let g = mesh.geometry(t);
            g.circumcenter_distance(mesh.local_index(t, a))
        };
        let voronoi = (d(e.k()) + e.l().map_or(0.0, d)) / e.length;
        assert!((coeffs.values[a] - voronoi).abs() <= 1e-11);
        if let Some(l) = e.l() {
            assert!((system.matrix.get(e.k(), l) + 1.0 / coeffs.values[a]).abs() <= 1e-11 / coeffs.values[a].powi(2));
        }
    }
}

#[test]
fn linear_solutions_are_reproduced_at_circumcenters() {
    // With the cell unknowns located at circumcenters the scheme is exact for
    // affine u, and the fluxes are exact normal fluxes.
    let mesh = perturbed_rhombus(8, 0.12, 15);
    let u = |x: Point2<f64>| 1.5 * x.x - 0.7 * x.y + 0.25;
    let grad = Vector2::new(1.5, -0.7);
    let bc = DirichletData::from_fn(&mesh, u, IntervalRule::gauss4());
    let f = P0Field(vec![0.0; mesh.num_triangles()]);
    let sol = solve_poisson(&mesh, &f, &bc, TOL, DEFAULT_MAX_ITER).unwrap();
    for (k, g) in mesh.geometries().iter().enumerate() {
        assert!((sol.u[k] - u(g.circumcenter)).abs() <= 1e-10);
    }
    for (a, e) in mesh.edges().iter().enumerate() {
        assert!((sol.p[a] - grad.dot(&e.normal) * e.length).abs() <= 1e-9);
    }
}

#[test]
fn random_source_balances_and_conserves() {
    let mesh = generate_rhombus_equilateral(8).unwrap();
    let mut r = rng(16);
    let f = P0Field((0..mesh.num_triangles()).map(|_| r.random_range(-5.0..5.0)).collect());
    let coeffs = cotan_coefficients(&mesh);
    let bc = DirichletData::zeros(&mesh);
    let system = assemble(&mesh, &coeffs, &f, &bc).unwrap();
    let sol = solve(&mesh, &coeffs, &system, &bc, TOL, DEFAULT_MAX_ITER).unwrap();
    let balance = flux_balance_check(&mesh, &sol, &f);
    assert!(balance.max_residual <= 1e-10);
    assert!(balance.max_residual <= 10.0 * TOL * norm(&system.rhs));
    assert!(balance.global_imbalance.abs() <= 1e-10);
    assert_eq!(discrete_gradient(&mesh, &coeffs, &sol.u, &bc).unwrap(), sol.p);
}

#[test]
fn discrete_maximum_principle() {
    for seed in 0..5 {
        let mesh = perturbed_rhombus(8, 0.12, 100 + seed);
        let mut r = rng(seed);
        let f = P0Field((0..mesh.num_triangles()).map(|_| r.random_range(0.0..10.0)).collect());
        let sol = solve_poisson(&mesh, &f, &DirichletData::zeros(&mesh), TOL, DEFAULT_MAX_ITER).unwrap();
        let max = sol.u.values().iter().cloned().fold(0.0, f64::max);
        assert!(sol.u.values().iter().all(|&u| u >= -1e-12 * max));
    }
}

fn solve_scaled(mesh: &Mesh, s: f64) -> Vec<f64> {
    let scaled = transform_mesh(mesh, s, 0.0, Vector2::zeros());
    let f = interpolate_p0(|x| (x.x / s).sin() + 2.0, &scaled, TriangleRule::degree6());
    let f = P0Field(f.values().iter().map(|v| v / (s * s)).collect());
    solve_poisson(&scaled, &f, &DirichletData::zeros(&scaled), TOL, DEFAULT_MAX_ITER).unwrap().u.0
}

#[test]
fn solution_is_invariant_under_scaling() {
    let mesh = perturbed_rhombus(6, 0.12, 17);
    let base = solve_scaled(&mesh, 1.0);
    let scale = base.iter().cloned().fold(0.0, f64::max);
    for s in [1e-2, 10.0] {
        for (a, b) in solve_scaled(&mesh, s).iter().zip(&base) {
            assert!((a - b).abs() <= 1e-9 * scale);
        }
    }
}

#[test]
fn zero_source_gives_zero_solution() {
    let mesh = perturbed_rhombus(5, 0.12, 18);
    let f = P0Field(vec![0.0; mesh.num_triangles()]);
    let sol = solve_poisson(&mesh, &f, &DirichletData::zeros(&mesh), TOL, DEFAULT_MAX_ITER).unwrap();
    assert!(sol.u.values().iter().all(|u| u.abs() <= 1e-12));
}
