//! The `ptg` command line.
//!
//! ```text
//! ptg generate --domain rhombus --n 16 --out mesh.txt
//! ptg mesh-info mesh.txt
//! ptg solve --mesh mesh.txt --case rhombus-sine --out solution.csv
//! ptg convergence --case rhombus-sine --levels 8,16,32,64
//! ptg verify --samples 10000 --seed 42 --mesh mesh.txt
//! ```
//!
//! Exit codes: 0 success, 1 usage, 2 I/O or parse error, 3 inadmissible mesh,
//! 4 verification failure. The default seed of `verify` can be overridden
//! with the `PTG_SEED` environment variable.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{
    case_ids, convergence_study, error_norms, find_case, lemma_suite, stability_check, AnalysisError, ManufacturedCase,
};
use crate::dual::cotan_coefficients;
use crate::mesh::{generate_rhombus_equilateral, generate_square_diagonal, quality_report, read_mesh, write_mesh, Mesh};
use crate::quadrature::TriangleRule;
use crate::solver::{assemble, flux_balance_check, solve, DirichletData, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};
use crate::spaces::{interpolate_p0, P0Field};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INADMISSIBLE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "PTG_SEED";

/// Minimum observed combined rate accepted by `convergence`.
pub const MIN_RATE: f64 = 0.9;

#[derive(Debug, Parser)]
#[command(name = "ptg", version, about = "Four-point finite volumes as a mixed Petrov-Galerkin method")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a structured mesh.
    Generate(GenerateArgs),
    /// Print the angle quality report of a mesh as JSON.
    MeshInfo(MeshInfoArgs),
    /// Solve -Δu = f with u = 0 on the boundary.
    Solve(SolveArgs),
    /// Run a convergence study on a manufactured solution.
    Convergence(ConvergenceArgs),
    /// Run the randomized lemma suite and, optionally, the stability checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    /// Equilateral rhombus split into equilateral triangles.
    Rhombus,
    /// Unit square split along one diagonal (right triangles, not admissible).
    Square,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "rhombus")]
    pub domain: Domain,
    /// Subdivisions per side.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeshInfoArgs {
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub mesh: PathBuf,
    /// Manufactured case providing f (and the exact solution for errors).
    #[arg(long, conflicts_with = "rhs_const", required_unless_present = "rhs_const")]
    pub case: Option<String>,
    /// Constant right-hand side.
    #[arg(long, allow_negative_numbers = true)]
    pub rhs_const: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Solution CSV; a JSON summary is written next to it with `.json` appended.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[arg(long, default_value = "rhombus-sine")]
    pub case: String,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    pub levels: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Also write the table to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Defaults to `PTG_SEED` if set, else 42.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Mesh on which to check the stability hypotheses.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Random RT fields for the stability checks.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command, writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(&a, out),
        Command::MeshInfo(a) => cmd_mesh_info(&a, out),
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Convergence(a) => cmd_convergence(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::new(EXIT_IO, e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn load_mesh(path: &Path) -> Result<Mesh, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    read_mesh(&text).map_err(|e| io_failure(path, e))
}

fn lookup_case(id: &str) -> Result<&'static ManufacturedCase, Failure> {
    find_case(id).ok_or_else(|| {
        Failure::new(EXIT_USAGE, format!("unknown case '{id}'; known cases: {}", case_ids().join(", ")))
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn analysis_failure(e: AnalysisError) -> Failure {
    match e {
        AnalysisError::Inadmissible { .. } => Failure::new(EXIT_INADMISSIBLE, e.to_string()),
        AnalysisError::TooFewLevels(_) | AnalysisError::LevelsNotIncreasing(_) | AnalysisError::NoSamples => {
            Failure::new(EXIT_USAGE, e.to_string())
        }
        other => Failure::new(EXIT_VERIFY, other.to_string()),
    }
}

fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> CmdResult {
    let n = args.n as usize;
    let mesh = match args.domain {
        Domain::Rhombus => generate_rhombus_equilateral(n),
        Domain::Square => generate_square_diagonal(n),
    }
    .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    write_file(&args.out, &write_mesh(&mesh))?;
    emit(
        out,
        &format!("cells {}\nedges {}\nh {:.16e}\n", mesh.num_triangles(), mesh.num_edges(), mesh.max_edge_length()),
    )?;
    Ok(EXIT_OK)
}

fn cmd_mesh_info(args: &MeshInfoArgs, out: &mut dyn Write) -> CmdResult {
    let mesh = load_mesh(&args.file)?;
    let quality = quality_report(&mesh);
    let coeffs = cotan_coefficients(&mesh);
    let report = json!({
        "cells": mesh.num_triangles(),
        "edges": mesh.num_edges(),
        "theta_min_deg": quality.theta_min.to_degrees(),
        "theta_max_deg": quality.theta_max.to_degrees(),
        "quality": quality,
        "coefficients": { "min": coeffs.min(), "max": coeffs.max() },
    });
    emit(out, &to_json(&report))?;
    Ok(EXIT_OK)
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> CmdResult {
    let mesh = load_mesh(&args.mesh)?;
    let case = args.case.as_deref().map(lookup_case).transpose()?;
    let coeffs = cotan_coefficients(&mesh);
    if !coeffs.admissible {
        let report = json!({ "admissible": false, "offending_edges": coeffs.flagged });
        emit(out, &to_json(&report))?;
        return Err(Failure::new(EXIT_INADMISSIBLE, format!("mesh is not admissible; offending edges {:?}", coeffs.flagged)));
    }

    let rule = TriangleRule::degree6();
    let f_t = match (case, args.rhs_const) {
        (Some(case), _) => interpolate_p0(case.source, &mesh, rule),
        (None, Some(c)) => P0Field(vec![c; mesh.num_triangles()]),
        (None, None) => unreachable!("clap requires --case or --rhs-const"),
    };
    let bc = DirichletData::zeros(&mesh);
    let system = assemble(&mesh, &coeffs, &f_t, &bc).map_err(|e| Failure::new(EXIT_INADMISSIBLE, e.to_string()))?;
    let solution = solve(&mesh, &coeffs, &system, &bc, args.tol, DEFAULT_MAX_ITER)
        .map_err(|e| Failure::new(EXIT_VERIFY, e.to_string()))?;
    let balance = flux_balance_check(&mesh, &solution, &f_t);
    let balance_tol = 10.0 * args.tol * system.rhs.iter().map(|b| b * b).sum::<f64>().sqrt();
    let balance_ok = balance.max_residual <= balance_tol;

    let mut csv = String::from("cell,u\n");
    for (k, u) in solution.u.values().iter().enumerate() {
        writeln!(csv, "{k},{u:.16e}").unwrap();
    }
    csv.push_str("edge,flux\n");
    for (a, p) in solution.p.values().iter().enumerate() {
        writeln!(csv, "{a},{p:.16e}").unwrap();
    }
    write_file(&args.out, &csv)?;

    let errors = case.map(|c| error_norms(&mesh, &solution, c, rule));
    let summary = json!({
        "mesh_file": args.mesh.display().to_string(),
        "case": args.case,
        "rhs_const": args.rhs_const,
        "tol": args.tol,
        "cells": mesh.num_triangles(),
        "iterations": solution.iterations,
        "residual": solution.residual,
        "max_balance_residual": balance.max_residual,
        "balance_tolerance": balance_tol,
        "errors": errors,
    });
    let mut sidecar = args.out.clone().into_os_string();
    sidecar.push(".json");
    write_file(Path::new(&sidecar), &to_json(&summary))?;

    let mut text = format!(
        "cells {}\niterations {}\nresidual {:.6e}\nmax_balance_residual {:.6e}\n",
        mesh.num_triangles(),
        solution.iterations,
        solution.residual,
        balance.max_residual
    );
    if let Some(e) = errors {
        writeln!(text, "eu {:.6e}\nep {:.6e}\nediv {:.6e}", e.eu, e.ep, e.ediv).unwrap();
    }
    emit(out, &text)?;

    if solution.residual <= args.tol && balance_ok {
        Ok(EXIT_OK)
    } else {
        Err(Failure::new(EXIT_VERIFY, "flux balance check failed"))
    }
}

fn cmd_convergence(args: &ConvergenceArgs, out: &mut dyn Write) -> CmdResult {
    let case = lookup_case(&args.case)?;
    let report = convergence_study(case, &args.levels, args.tol).map_err(analysis_failure)?;

    let mut csv = String::from("n,h,eu,ep,ediv,combined,rate_combined\n");
    for (i, level) in report.levels.iter().enumerate() {
        let rate = if i == 0 { String::new() } else { format!("{:.6}", report.rates[i - 1].combined) };
        let e = &level.errors;
        writeln!(
            csv,
            "{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{}",
            level.n, level.h, e.eu, e.ep, e.ediv, level.combined, rate
        )
        .unwrap();
    }
    if let Some(path) = &args.out {
        write_file(path, &csv)?;
    }
    emit(out, &csv)?;

    let rate = report.final_rates().combined;
    if rate >= MIN_RATE {
        Ok(EXIT_OK)
    } else {
        Err(Failure::new(EXIT_VERIFY, format!("final combined rate {rate:.4} is below {MIN_RATE}")))
    }
}

fn default_seed() -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::new(EXIT_USAGE, format!("{SEED_ENV}='{v}' is not a seed"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let seed = match args.seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let mesh = args.mesh.as_deref().map(load_mesh).transpose()?;
    let lemmas = lemma_suite(args.samples, seed).map_err(analysis_failure)?;
    let stability = mesh.as_ref().map(|m| stability_check(m, args.trials, seed)).transpose().map_err(analysis_failure)?;

    let passed = lemmas.passed && stability.as_ref().is_none_or(|s| s.passed);
    emit(out, &to_json(&json!({ "passed": passed, "lemmas": lemmas, "stability": stability })))?;

    if passed {
        return Ok(EXIT_OK);
    }
    for check in lemmas.checks.iter().filter(|c| !c.ok()) {
        let _ = writeln!(
            err,
            "FAIL {}: {}/{} passed, worst slack {:.3e}, witness {:?}",
            check.check, check.passed, check.samples, check.worst_slack, check.witness
        );
    }
    if let Some(s) = stability.filter(|s| !s.passed) {
        let _ = writeln!(err, "FAIL stability: H1 {} H3 {} H4 {}", s.h1_passed, s.h3_passed, s.h4_passed);
    }
    Ok(EXIT_VERIFY)
}
