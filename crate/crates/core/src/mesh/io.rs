//! The `ptg-mesh 1` text format.
//!
//! ```text
//! ptg-mesh 1
//! <nv> <nt>
//! x y          (nv lines)
//! i j k        (nt lines, 0-based)
//! ```
//!
//! Lines starting with `#` and blank lines are ignored.

use std::fmt::Write as _;

use nalgebra::Point2;
use thiserror::Error;

use super::{Mesh, MeshError};

pub const HEADER: &str = "ptg-mesh 1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReadMeshError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

fn parse_err(line: usize, message: impl Into<String>) -> ReadMeshError {
    ReadMeshError::Parse { line, message: message.into() }
}

fn fields<T: std::str::FromStr>(line_no: usize, line: &str, count: usize, what: &str) -> Result<Vec<T>, ReadMeshError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != count {
        return Err(parse_err(line_no, format!("expected {count} fields for {what}, found {}", tokens.len())));
    }
    tokens
        .iter()
        .map(|t| t.parse::<T>().map_err(|_| parse_err(line_no, format!("invalid {what} field '{t}'"))))
        .collect()
}

pub fn read_mesh(text: &str) -> Result<Mesh, ReadMeshError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let last_line = text.lines().count().max(1);

    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "empty file, expected header 'ptg-mesh 1'"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["ptg-mesh", "1"] {
        return Err(parse_err(line_no, format!("malformed header '{header}', expected '{HEADER}'")));
    }

    let (line_no, counts) = lines.next().ok_or_else(|| parse_err(last_line, "missing '<nv> <nt>' line"))?;
    let counts: Vec<usize> = fields(line_no, counts, 2, "counts")?;
    let (nv, nt) = (counts[0], counts[1]);

    let mut vertices = Vec::with_capacity(nv);
    for v in 0..nv {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(last_line, format!("expected {nv} vertices, found {v}")))?;
        let xy: Vec<f64> = fields(line_no, line, 2, "vertex")?;
        if !xy.iter().all(|c| c.is_finite()) {
            return Err(parse_err(line_no, "vertex coordinates must be finite"));
        }
        vertices.push(Point2::new(xy[0], xy[1]));
    }

    let mut triangles = Vec::with_capacity(nt);
    for t in 0..nt {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(last_line, format!("expected {nt} triangles, found {t}")))?;
        let ijk: Vec<usize> = fields(line_no, line, 3, "triangle")?;
        if let Some(bad) = ijk.iter().find(|&&i| i >= nv) {
            return Err(parse_err(line_no, format!("vertex index {bad} out of range (mesh has {nv} vertices)")));
        }
        triangles.push([ijk[0], ijk[1], ijk[2]]);
    }

    if let Some((line_no, _)) = lines.next() {
        return Err(parse_err(line_no, format!("unexpected data after {nv} vertices and {nt} triangles")));
    }

    Ok(Mesh::new(vertices, triangles)?)
}

/// Serializes a mesh with 17 significant digits per coordinate, which
/// round-trips every `f64` exactly.
pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "{} {}", mesh.num_vertices(), mesh.num_triangles()).unwrap();
    for v in mesh.vertices() {
        writeln!(out, "{:.16e} {:.16e}", v.x, v.y).unwrap();
    }
    for [i, j, k] in mesh.triangles() {
        writeln!(out, "{i} {j} {k}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_rhombus_equilateral;
    use proptest::prelude::*;

    const MINIMAL: &str = "ptg-mesh 1\n# a comment\n3 1\n0 0\n1 0\n0 1\n0 1 2\n";

    #[test]
    fn minimal_file() {
        let m = read_mesh(MINIMAL).unwrap();
        assert_eq!(m.num_vertices(), 3);
        assert_eq!(m.num_triangles(), 1);
    }

    #[test]
    fn round_trip_is_canonical() {
        let m = read_mesh(MINIMAL).unwrap();
        let canonical = write_mesh(&m);
        assert_eq!(write_mesh(&read_mesh(&canonical).unwrap()), canonical);
        assert!(canonical.starts_with("ptg-mesh 1\n3 1\n0.0000000000000000e0 0.0000000000000000e0\n"));
    }

    #[test]
    fn clockwise_input_is_written_ccw() {
        let m = read_mesh("ptg-mesh 1\n3 1\n0 0\n0 1\n1 0\n0 1 2\n").unwrap();
        assert!(write_mesh(&m).ends_with("0 2 1\n"));
    }

    #[test]
    fn out_of_range_names_the_line() {
        let err = read_mesh("ptg-mesh 1\n3 1\n0 0\n1 0\n0 1\n0 1 99\n").unwrap_err();
        assert_eq!(err, parse_err(6, "vertex index 99 out of range (mesh has 3 vertices)"));
        assert!(err.to_string().starts_with("line 6:"));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(read_mesh(""), Err(ReadMeshError::Parse { line: 1, .. })));
        assert!(matches!(read_mesh("ptg-mesh 2\n"), Err(ReadMeshError::Parse { line: 1, .. })));
        assert!(matches!(read_mesh("ptg-mesh 1\n3\n"), Err(ReadMeshError::Parse { line: 2, .. })));
        assert!(matches!(read_mesh("ptg-mesh 1\n3 1\n0 0\n1 0\n"), Err(ReadMeshError::Parse { .. })));
        assert!(matches!(
            read_mesh("ptg-mesh 1\n3 1\n0 0\n1 x\n0 1\n0 1 2\n"),
            Err(ReadMeshError::Parse { line: 4, .. })
        ));
        assert!(matches!(
            read_mesh("ptg-mesh 1\n3 1\n0 0\n1 0\n0 1\n0 1 2\n0 1 2\n"),
            Err(ReadMeshError::Parse { line: 7, .. })
        ));
        assert!(matches!(
            read_mesh("ptg-mesh 1\n3 1\n0 0\n1 0\n2 0\n0 1 2\n"),
            Err(ReadMeshError::Mesh(MeshError::Degenerate(0)))
        ));
    }

    proptest! {
        #[test]
        fn write_read_preserves_coordinates(n in 1usize..6, dx in -1e3f64..1e3, dy in -1e-3f64..1e-3) {
            let m = generate_rhombus_equilateral(n).unwrap();
            let shifted = Mesh::new(
                m.vertices().iter().map(|p| Point2::new(p.x + dx, p.y * (1.0 + dy))).collect(),
                m.triangles().to_vec(),
            ).unwrap();
            let back = read_mesh(&write_mesh(&shifted)).unwrap();
            prop_assert_eq!(back.vertices(), shifted.vertices());
            prop_assert_eq!(back.triangles(), shifted.triangles());
        }
    }
}
