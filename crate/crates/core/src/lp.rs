//! Dense-tableau simplex method for `maximize ⟨c, x⟩ subject to A x ≤ b`
//! with free variables.
//!
//! Free variables are split as `x = x⁺ - x⁻`. Rows with a negative right-hand
//! side receive an artificial variable and are cleared by a phase-one solve.
//! Both phases pivot with Bland's rule, so degenerate problems cannot cycle.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Result of a linear program.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, witness: Vec<T> },
    Unbounded,
    Infeasible,
}

impl<T: Real> LpOutcome<T> {
    /// Optimal value as an extended real: `+inf` when unbounded, `-inf` when infeasible.
    pub fn value(&self) -> T {
        match self {
            Self::Optimal { value, .. } => *value,
            Self::Unbounded => T::infinity(),
            Self::Infeasible => T::neg_infinity(),
        }
    }

    pub fn witness(&self) -> Option<&[T]> {
        match self {
            Self::Optimal { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Maximizes `⟨objective, x⟩` over `{x : rows[i]·x ≤ rhs[i]}`.
pub fn maximize<T: Real>(objective: &[T], rows: &[Vec<T>], rhs: &[T]) -> Result<LpOutcome<T>> {
    let n = objective.len();
    if rows.len() != rhs.len() {
        return Err(Error::InvalidInput(format!(
            "{} constraint rows but {} right-hand sides",
            rows.len(),
            rhs.len()
        )));
    }
    if let Some(row) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: row.len(),
        });
    }
    let finite = objective
        .iter()
        .chain(rows.iter().flatten())
        .chain(rhs)
        .all(|v| v.is_finite());
    if !finite {
        return Err(Error::InvalidInput("LP data must be finite".into()));
    }
    Ok(Tableau::build(objective, rows, rhs).solve())
}

struct Tableau<T> {
    /// `m` rows of `cols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<T>>,
    /// Objective row in `z - ⟨c, x⟩ = 0` form; last entry is the current value.
    z: Vec<T>,
    basis: Vec<usize>,
    n: usize,
    artificial_start: usize,
    cols: usize,
    objective: Vec<T>,
    tol: T,
}

enum Pivoting {
    Optimal,
    Unbounded,
}

impl<T: Real> Tableau<T> {
    fn build(objective: &[T], a: &[Vec<T>], b: &[T]) -> Self {
        let n = objective.len();
        let m = a.len();
        let negative: Vec<usize> = (0..m).filter(|&i| b[i] < T::zero()).collect();
        let artificial_start = 2 * n + m;
        let cols = artificial_start + negative.len();
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_artificial = artificial_start;
        for i in 0..m {
            let sign = if b[i] < T::zero() {
                -T::one()
            } else {
                T::one()
            };
            let mut row = vec![T::zero(); cols + 1];
            for j in 0..n {
                row[j] = sign * a[i][j];
                row[n + j] = -sign * a[i][j];
            }
            row[2 * n + i] = sign;
            row[cols] = sign * b[i];
            if b[i] < T::zero() {
                row[next_artificial] = T::one();
                basis.push(next_artificial);
                next_artificial += 1;
            } else {
                basis.push(2 * n + i);
            }
            rows.push(row);
        }
        let scale = b.iter().fold(T::one(), |acc, v| acc.max(v.abs()));
        Self {
            rows,
            z: vec![T::zero(); cols + 1],
            basis,
            n,
            artificial_start,
            cols,
            objective: objective.to_vec(),
            tol: T::PIVOT_TOL * scale,
        }
    }

    fn solve(mut self) -> LpOutcome<T> {
        if self.cols > self.artificial_start {
            // phase one: maximize -Σ artificials
            self.z = vec![T::zero(); self.cols + 1];
            for j in self.artificial_start..self.cols {
                self.z[j] = T::one();
            }
            self.canonicalize();
            self.pivot_until_done(self.cols);
            if self.z[self.cols] < -self.tol {
                return LpOutcome::Infeasible;
            }
            self.drop_artificials();
        }
        self.z = vec![T::zero(); self.cols + 1];
        for j in 0..self.n {
            self.z[j] = -self.objective[j];
            self.z[self.n + j] = self.objective[j];
        }
        self.canonicalize();
        match self.pivot_until_done(self.cols) {
            Pivoting::Unbounded => LpOutcome::Unbounded,
            Pivoting::Optimal => {
                let mut plus_minus = vec![T::zero(); 2 * self.n];
                for (i, &bv) in self.basis.iter().enumerate() {
                    if bv < 2 * self.n {
                        plus_minus[bv] = self.rows[i][self.cols];
                    }
                }
                let witness = (0..self.n)
                    .map(|j| plus_minus[j] - plus_minus[self.n + j])
                    .collect();
                LpOutcome::Optimal {
                    value: self.z[self.cols],
                    witness,
                }
            }
        }
    }

    /// Zeroes the objective-row entries of basic columns.
    fn canonicalize(&mut self) {
        for i in 0..self.rows.len() {
            let f = self.z[self.basis[i]];
            if f != T::zero() {
                for (zj, &rj) in self.z.iter_mut().zip(&self.rows[i]) {
                    *zj = *zj - f * rj;
                }
            }
        }
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving basic variable.
    fn pivot_until_done(&mut self, active_cols: usize) -> Pivoting {
        loop {
            let entering = match (0..active_cols).find(|&j| self.z[j] < -self.tol) {
                Some(j) => j,
                None => return Pivoting::Optimal,
            };
            let mut leaving: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let aij = row[entering];
                if aij > T::PIVOT_TOL {
                    let ratio = row[self.cols] / aij;
                    leaving = match leaving {
                        None => Some((i, ratio)),
                        Some((best, best_ratio)) => {
                            let tie = (ratio - best_ratio).abs() <= self.tol;
                            if ratio < best_ratio && !tie || tie && self.basis[i] < self.basis[best]
                            {
                                Some((i, ratio))
                            } else {
                                Some((best, best_ratio))
                            }
                        }
                    };
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, entering),
                None => return Pivoting::Unbounded,
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v = *v / p;
        }
        self.rows[row][col] = T::one();
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != T::zero() {
                for (v, &pv) in r.iter_mut().zip(&pivot_row) {
                    *v = *v - f * pv;
                }
                r[col] = T::zero();
            }
        }
        let f = self.z[col];
        if f != T::zero() {
            for (v, &pv) in self.z.iter_mut().zip(&pivot_row) {
                *v = *v - f * pv;
            }
            self.z[col] = T::zero();
        }
        self.basis[row] = col;
    }

    /// Pivots zero-level artificials out of the basis (or drops their redundant
    /// rows), then deletes the artificial columns.
    fn drop_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.artificial_start {
                let replacement =
                    (0..self.artificial_start).find(|&j| self.rows[i][j].abs() > T::PIVOT_TOL);
                match replacement {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        let keep = self.artificial_start;
        for row in self.rows.iter_mut() {
            let rhs = row[self.cols];
            row.truncate(keep);
            row.push(rhs);
        }
        self.cols = keep;
    }
}
