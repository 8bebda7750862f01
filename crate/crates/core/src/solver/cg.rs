//! Compressed-row matrices and Jacobi-preconditioned conjugate gradients.
//!
//! All reductions run serially in index order, so repeated solves are
//! bitwise reproducible.

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from per-row `(column, value)` lists. Columns are
    /// sorted and duplicates summed.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let nrows = rows.len();
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row {
                if col_idx.len() > *row_ptr.last().unwrap() && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self { nrows, row_ptr, col_idx, values }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().cloned().zip(self.values[range].iter().cloned())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nrows).map(|i| self.row(i).map(|(c, v)| v * x[c]).sum()).collect()
    }

    /// Exact structural and numerical symmetry.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nrows).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final true relative residual `‖b - Ax‖ / ‖b‖`.
    pub residual: f64,
    /// Relative residual after each iteration.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Solves `A x = b` for SPD `A`, starting from zero, until the relative
/// residual drops to `tol` or `max_iter` iterations have run.
pub fn conjugate_gradient(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> CgOutcome {
    let n = a.nrows();
    let b_norm = norm(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return CgOutcome { x, iterations: 0, residual: 0.0, history: Vec::new(), converged: true };
    }
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|d| if *d != 0.0 { 1.0 / d } else { 1.0 }).collect();
    let precondition = |r: &[f64]| -> Vec<f64> { r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect() };

    let mut r = b.to_vec();
    let mut z = precondition(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut history = Vec::new();
    let mut iterations = 0;

    while iterations < max_iter {
        let ap = a.mul_vec(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        iterations += 1;
        let relative = norm(&r) / b_norm;
        history.push(relative);

        if relative <= tol {
            // Confirm against the true residual before stopping.
            let ax = a.mul_vec(&x);
            r = b.iter().zip(&ax).map(|(b, ax)| b - ax).collect();
            let true_relative = norm(&r) / b_norm;
            if true_relative <= tol {
                return CgOutcome { x, iterations, residual: true_relative, history, converged: true };
            }
            z = precondition(&r);
            p = z.clone();
            rz = dot(&r, &z);
            continue;
        }

        z = precondition(&r);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    let ax = a.mul_vec(&x);
    let residual = norm(&b.iter().zip(&ax).map(|(b, ax)| b - ax).collect::<Vec<_>>()) / b_norm;
    CgOutcome { x, iterations, residual, history, converged: residual <= tol }
}
