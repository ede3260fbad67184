//! Dense two-phase simplex for standard-form linear programs
//!
//! ```text
//! minimize cᵀλ  subject to  Aλ = b,  λ ≥ 0
//! ```
//!
//! Sized for the desk-scale problems this crate produces: a handful of
//! equality rows and up to a few thousand columns. Leaving-variable ties are
//! always broken by smallest basic index; on degenerate stalls the entering
//! rule falls back to Bland's smallest-index rule, which guarantees
//! termination.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Entering-variable selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pricing {
    /// Smallest-index improving column on every pivot.
    Bland,
    /// Most negative reduced cost, switching to [`Pricing::Bland`] after a run
    /// of degenerate pivots.
    DantzigBlandFallback,
}

#[derive(Debug, Clone)]
pub struct LpOptions {
    pub pricing: Pricing,
    /// Pivot elements at or below this magnitude are never used.
    pub pivot_tol: f64,
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub max_iterations: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            pricing: Pricing::DantzigBlandFallback,
            pivot_tol: 1e-11,
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal point. For unbounded problems, the last basic feasible point.
    pub x: Vec<f64>,
    /// `cᵀx` for optimal solutions, `+∞` if infeasible, `−∞` if unbounded.
    pub objective: f64,
    pub iterations: usize,
}

/// Solves `min cᵀλ s.t. Aλ = b, λ ≥ 0` with default options.
pub fn solve_lp(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    solve_lp_with(c, a, b, &LpOptions::default())
}

pub fn solve_lp_with(c: &[f64], a: &[Vec<f64>], b: &[f64], opts: &LpOptions) -> Result<LpSolution> {
    let n = c.len();
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if let Some(row) = a.iter().find(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: row.len(),
        });
    }
    let finite = c.iter().chain(b).chain(a.iter().flatten()).all(|v| v.is_finite());
    if !finite {
        return Err(Error::NonFiniteInput {
            what: "linear program data".into(),
        });
    }

    match solve_scaled(c, a, b, opts, false) {
        Err(Error::NumericalBreakdown { .. }) => solve_scaled(c, a, b, opts, true),
        other => other,
    }
}

fn solve_scaled(c: &[f64], a: &[Vec<f64>], b: &[f64], opts: &LpOptions, rescale: bool) -> Result<LpSolution> {
    let mut rows: Vec<Vec<f64>> = a.to_vec();
    let mut rhs: Vec<f64> = b.to_vec();
    if rescale {
        for (row, r) in rows.iter_mut().zip(rhs.iter_mut()) {
            let s = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if s > 0.0 {
                row.iter_mut().for_each(|v| *v /= s);
                *r /= s;
            }
        }
    }

    let n = c.len();
    let m = rows.len();
    let mut tab = Tableau::phase_one(&rows, &rhs, n);
    let mut iterations = 0;

    tab.run(n, opts, &mut iterations)?;
    let infeasibility = -tab.obj[tab.rhs_col()];
    let b_scale = rhs.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    if infeasibility > opts.feasibility_tol * b_scale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: tab.primal(n),
            objective: f64::INFINITY,
            iterations,
        });
    }
    tab.expel_artificials(n, opts.pivot_tol);
    tab.set_costs(c);

    let outcome = tab.run(n, opts, &mut iterations)?;
    let mut x = tab.primal(n);
    if outcome == Outcome::Unbounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x,
            objective: f64::NEG_INFINITY,
            iterations,
        });
    }

    if m > 0 {
        refine(&rows, &rhs, &tab.basis, n, &mut x);
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
        iterations,
    })
}

/// Re-solves the basic variables against the original rows to shed the
/// round-off accumulated by tableau updates, keeping whichever point has the
/// smaller residual.
fn refine(rows: &[Vec<f64>], rhs: &[f64], basis: &[usize], n: usize, x: &mut [f64]) {
    let cols: Vec<usize> = basis.iter().copied().filter(|&j| j < n).collect();
    if cols.is_empty() {
        return;
    }
    let m = rows.len();
    let ab = DMatrix::from_fn(m, cols.len(), |i, k| rows[i][cols[k]]);
    let bv = DVector::from_column_slice(rhs);
    let Ok(sol) = ab.svd(true, true).solve(&bv, 1e-14) else {
        return;
    };
    let mut candidate = vec![0.0; n];
    for (k, &j) in cols.iter().enumerate() {
        candidate[j] = sol[k];
    }
    if candidate.iter().any(|v| !v.is_finite() || *v < -1e-9) {
        clamp_nonnegative(x);
        return;
    }
    clamp_nonnegative(&mut candidate);
    clamp_nonnegative(x);
    if residual(rows, rhs, &candidate) <= residual(rows, rhs, x) {
        x.copy_from_slice(&candidate);
    }
}

fn clamp_nonnegative(x: &mut [f64]) {
    x.iter_mut().for_each(|v| {
        if *v < 0.0 {
            *v = 0.0;
        }
    });
}

/// `‖Ax − b‖∞`
pub fn residual(a: &[Vec<f64>], b: &[f64], x: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(row, bi)| (row.iter().zip(x).map(|(r, v)| r * v).sum::<f64>() - bi).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Optimal,
    Unbounded,
}

/// Row-major tableau. Columns `0..n` are structural, `n..n+m` artificial,
/// and the last column holds the right-hand side. `obj` stores reduced costs
/// with `obj[rhs] = −objective`.
struct Tableau {
    rows: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn phase_one(a: &[Vec<f64>], b: &[f64], n: usize) -> Self {
        let m = a.len();
        let width = n + m + 1;
        let mut rows = Vec::with_capacity(m);
        for (i, (row, &bi)) in a.iter().zip(b).enumerate() {
            let sign = if bi < 0.0 { -1.0 } else { 1.0 };
            let mut t = vec![0.0; width];
            for (j, v) in row.iter().enumerate() {
                t[j] = sign * v;
            }
            t[n + i] = 1.0;
            t[width - 1] = sign * bi;
            rows.push(t);
        }
        let mut obj = vec![0.0; width];
        for t in &rows {
            for j in 0..n {
                obj[j] -= t[j];
            }
            obj[width - 1] -= t[width - 1];
        }
        Self {
            rows,
            obj,
            basis: (n..n + m).collect(),
            width,
        }
    }

    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    fn set_costs(&mut self, c: &[f64]) {
        let rhs = self.rhs_col();
        self.obj = vec![0.0; self.width];
        self.obj[..c.len()].copy_from_slice(c);
        for (row, &bj) in self.rows.iter().zip(&self.basis) {
            let cb = c.get(bj).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for (o, r) in self.obj.iter_mut().zip(row) {
                    *o -= cb * r;
                }
            }
        }
        // basic columns have exactly zero reduced cost
        for &bj in &self.basis {
            if bj < rhs {
                self.obj[bj] = 0.0;
            }
        }
    }

    fn primal(&self, n: usize) -> Vec<f64> {
        let rhs = self.rhs_col();
        let mut x = vec![0.0; n];
        for (row, &bj) in self.rows.iter().zip(&self.basis) {
            if bj < n {
                x[bj] = row[rhs];
            }
        }
        x
    }

    /// Pivots basic artificials out after phase one; rows where that is
    /// impossible are linearly dependent and get dropped.
    fn expel_artificials(&mut self, n: usize, pivot_tol: f64) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < n {
                i += 1;
                continue;
            }
            let best = (0..n)
                .map(|j| (j, self.rows[i][j].abs()))
                .filter(|&(_, v)| v > pivot_tol)
                .max_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((j, _)) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rows[r][col] = 1.0;
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[col] = 0.0;
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.obj[col] = 0.0;
        }
        self.basis[r] = col;
        let rhs = self.rhs_col();
        for row in self.rows.iter_mut() {
            if row[rhs] < 0.0 && row[rhs] > -1e-12 {
                row[rhs] = 0.0;
            }
        }
    }

    /// Runs simplex iterations, allowing only columns `< enterable` to enter.
    fn run(&mut self, enterable: usize, opts: &LpOptions, iterations: &mut usize) -> Result<Outcome> {
        const STALL_LIMIT: usize = 50;
        let rhs = self.rhs_col();
        let mut bland = opts.pricing == Pricing::Bland;
        let mut stalled = 0;
        loop {
            if *iterations >= opts.max_iterations {
                return Err(Error::NumericalBreakdown { pivot: 0.0 });
            }
            let entering = if bland {
                (0..enterable).find(|&j| self.obj[j] < -opts.optimality_tol)
            } else {
                (0..enterable)
                    .filter(|&j| self.obj[j] < -opts.optimality_tol)
                    .min_by(|&a, &b| self.obj[a].total_cmp(&self.obj[b]))
            };
            let Some(col) = entering else {
                return Ok(Outcome::Optimal);
            };

            let mut leave: Option<(usize, f64)> = None;
            let mut tiny = 0.0f64;
            for (i, row) in self.rows.iter().enumerate() {
                let aij = row[col];
                if aij > opts.pivot_tol {
                    let ratio = row[rhs].max(0.0) / aij;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((bi, br)) => {
                            let tie = (ratio - br).abs() <= 1e-12 * br.abs().max(1.0);
                            if (tie && self.basis[i] < self.basis[bi]) || (!tie && ratio < br) {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                } else if aij > 0.0 {
                    tiny = tiny.max(aij);
                }
            }
            let Some((r, ratio)) = leave else {
                if tiny > 0.0 {
                    return Err(Error::NumericalBreakdown { pivot: tiny });
                }
                return Ok(Outcome::Unbounded);
            };

            if ratio <= 1e-12 {
                stalled += 1;
                if stalled > STALL_LIMIT {
                    bland = true;
                }
            } else {
                stalled = 0;
            }
            self.pivot(r, col);
            *iterations += 1;
        }
    }
}
