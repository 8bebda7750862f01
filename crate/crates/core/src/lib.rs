//! The four-point finite volume scheme for `-Δu = f` on Delaunay
//! triangulations, written as a mixed Petrov-Galerkin method with lowest-order
//! Raviart-Thomas trial fields and dual test fields.
//!
//! The cell unknowns `u_K` and edge fluxes `p_a` are coupled only through the
//! transmissibilities `c_a = (cot θ_K + cot θ_L)/2`, so the discrete problem is
//! a sparse SPD system with one row per triangle.
//!
//! ```
//! use ptg::mesh::generate_rhombus_equilateral;
//! use ptg::solver::{solve_poisson, DirichletData, DEFAULT_MAX_ITER};
//! use ptg::spaces::P0Field;
//!
//! let mesh = generate_rhombus_equilateral(1).unwrap();
//! let f = P0Field(vec![1.0; mesh.num_triangles()]);
//! let sol = solve_poisson(&mesh, &f, &DirichletData::zeros(&mesh), 1e-12, DEFAULT_MAX_ITER).unwrap();
//! assert!((sol.u[0] - 0.0625).abs() < 1e-14);
//! ```
//!
//! Modules, bottom up:
//!
//! * [`mesh`]: triangulations, edge orientation, angle quality, file format.
//! * [`quadrature`]: embedded triangle and interval rules.
//! * [`spaces`]: P0 and RT0 fields, local mass matrices.
//! * [`dual`]: transmissibilities, the edge profile `g` and the divergence
//!   profile `δ_K`.
//! * [`solver`]: discrete gradient, assembly, conjugate gradients.
//! * [`analysis`]: manufactured solutions, convergence studies, randomized
//!   verification of the geometric lemmas and stability constants.
//! * [`cli`]: the `ptg` command line.

pub mod analysis;
pub mod cli;
pub mod dual;
pub mod mesh;
pub mod quadrature;
pub mod solver;
pub mod spaces;
