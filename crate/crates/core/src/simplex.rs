//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Solves `min c.x  s.t.  A x = b, x >= 0`. Phase one minimizes the sum of
//! artificial variables; the problem is declared feasible when that sum is
//! at most `feasibility_tol`. Phase two starts from the phase-one basis with
//! artificial columns barred from re-entering.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    /// Constraint rows, each of length `n`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    /// Objective coefficients, length `n`.
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub feasibility_tol: f64,
    /// Entries with magnitude at or below this are treated as zero when pivoting.
    pub pivot_tol: f64,
    pub max_pivots: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            feasibility_tol: 1e-9,
            pivot_tol: 1e-12,
            max_pivots: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        objective: f64,
        /// Artificial mass left after phase one (L1 constraint residual).
        residual: f64,
    },
    Infeasible {
        residual: f64,
    },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>, // m rows of (n_total + 1), last entry is rhs
    cost: Vec<f64>,      // reduced costs (n_total + 1), last entry is -objective
    basis: Vec<usize>,
    n_total: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.n_total]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[col];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                    row[col] = 0.0;
                }
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.cost[col] = 0.0;
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    fn set_objective(&mut self, c: &[f64]) {
        self.cost = c.to_vec();
        self.cost.push(0.0);
        for i in 0..self.rows.len() {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                for (v, rv) in self.cost.iter_mut().zip(&self.rows[i]) {
                    *v -= cb * rv;
                }
            }
        }
    }

    /// Bland iterations over columns `0..allowed`. Returns false if unbounded.
    fn run(&mut self, allowed: usize, opts: &SimplexOptions) -> Result<bool> {
        loop {
            if self.pivots >= opts.max_pivots {
                return Err(Error::LpNotTerminated(opts.max_pivots));
            }
            let Some(col) = (0..allowed).find(|&j| self.cost[j] < -opts.pivot_tol) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let t = self.rows[i][col];
                if t > opts.pivot_tol {
                    let ratio = self.rhs(i).max(0.0) / t;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                            if ratio < best && !tie || tie && self.basis[i] < self.basis[k] {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, col),
                None => return Ok(false),
            }
        }
    }
}

impl LinearProgram {
    pub fn n_vars(&self) -> usize {
        self.c.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_vars();
        if self.a.len() != self.b.len() {
            return Err(Error::Dimension(format!("{} rows but {} right-hand sides", self.a.len(), self.b.len())));
        }
        if let Some(row) = self.a.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension(format!("row of length {} in a {n}-variable program", row.len())));
        }
        Ok(())
    }

    pub fn solve(&self, opts: &SimplexOptions) -> Result<LpOutcome> {
        self.validate()?;
        let n = self.n_vars();
        let m = self.a.len();
        let n_total = n + m;

        let rows = self
            .a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(i, (row, &bi))| {
                let sign = if bi < 0.0 { -1.0 } else { 1.0 };
                let mut t: Vec<f64> = row.iter().map(|v| sign * v).collect();
                t.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
                t.push(sign * bi);
                t
            })
            .collect();
        let mut tab = Tableau {
            rows,
            cost: Vec::new(),
            basis: (n..n_total).collect(),
            n_total,
            pivots: 0,
        };

        let phase1: Vec<f64> = (0..n_total).map(|j| if j < n { 0.0 } else { 1.0 }).collect();
        tab.set_objective(&phase1);
        tab.run(n_total, opts)?;
        let residual = (0..m)
            .filter(|&i| tab.basis[i] >= n)
            .fold(0.0, |acc, i| acc + tab.rhs(i).max(0.0));
        if residual > opts.feasibility_tol {
            return Ok(LpOutcome::Infeasible { residual });
        }

        // Swap zero-level artificials out of the basis where a structural column allows it.
        for i in 0..m {
            if tab.basis[i] >= n && tab.rhs(i).abs() <= opts.pivot_tol {
                if let Some(col) = (0..n).find(|&j| tab.rows[i][j].abs() > 1e-9) {
                    tab.pivot(i, col);
                }
            }
        }

        let mut c = self.c.clone();
        c.extend(std::iter::repeat_n(0.0, m));
        tab.set_objective(&c);
        if !tab.run(n, opts)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![0.0; n];
        for (i, &bv) in tab.basis.iter().enumerate() {
            if bv < n {
                x[bv] = tab.rhs(i).max(0.0);
            }
        }
        let objective = self.c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
        Ok(LpOutcome::Optimal { x, objective, residual })
    }
}
