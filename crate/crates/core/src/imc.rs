//! Sparse interval transition matrices and interval Markov chains.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::PropSet;

/// Tolerance for row feasibility `sum(lo) <= 1 <= sum(hi)`.
pub const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImcError {
    #[error("row {row}: bounds out of order at column {col} (lo={lo}, hi={hi})")]
    BadBounds { row: usize, col: usize, lo: f64, hi: f64 },
    #[error("row {row}: column {col} out of range")]
    ColumnOutOfRange { row: usize, col: usize },
    #[error("row {row}: duplicate entry for column {col}")]
    Duplicate { row: usize, col: usize },
    #[error("row {row} is infeasible (sum lo = {sum_lo}, sum hi = {sum_hi})")]
    Infeasible { row: usize, sum_lo: f64, sum_hi: f64 },
    #[error("expected {expected} proposition sets, got {got}")]
    PropsMismatch { expected: usize, got: usize },
}

/// One nonzero entry of an interval row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub col: usize,
    pub lo: f64,
    pub hi: f64,
}

/// Row-major sparse matrix of transition intervals; absent entries are `[0, 0]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalMatrix {
    rows: Vec<Vec<Entry>>,
}

impl IntervalMatrix {
    /// Validates ranges and feasibility. Rows are sorted by column; entries with
    /// `hi == 0` are dropped.
    pub fn new(mut rows: Vec<Vec<Entry>>) -> Result<Self, ImcError> {
        let n = rows.len();
        for (r, row) in rows.iter_mut().enumerate() {
            row.retain(|e| e.hi != 0.0 || e.lo != 0.0);
            row.sort_by_key(|e| e.col);
            for w in row.windows(2) {
                if w[0].col == w[1].col {
                    return Err(ImcError::Duplicate { row: r, col: w[0].col });
                }
            }
            for e in row.iter() {
                if e.col >= n {
                    return Err(ImcError::ColumnOutOfRange { row: r, col: e.col });
                }
                if !(0.0 <= e.lo && e.lo <= e.hi && e.hi <= 1.0) {
                    return Err(ImcError::BadBounds {
                        row: r,
                        col: e.col,
                        lo: e.lo,
                        hi: e.hi,
                    });
                }
            }
        }
        let m = Self { rows };
        m.check_feasible()?;
        Ok(m)
    }

    /// Point-valued matrix from a list of `(col, p)` rows.
    pub fn from_point_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self, ImcError> {
        Self::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(|(col, p)| Entry { col, lo: p, hi: p }).collect())
                .collect(),
        )
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<Entry>>) -> Self {
        Self { rows }
    }

    pub fn check_feasible(&self) -> Result<(), ImcError> {
        for (r, row) in self.rows.iter().enumerate() {
            let (sum_lo, sum_hi) = row_sums(row);
            if sum_lo > 1.0 + FEAS_TOL || sum_hi < 1.0 - FEAS_TOL {
                return Err(ImcError::Infeasible { row: r, sum_lo, sum_hi });
            }
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, q: usize) -> &[Entry] {
        &self.rows[q]
    }

    pub fn rows(&self) -> &[Vec<Entry>] {
        &self.rows
    }

    pub fn get(&self, q: usize, col: usize) -> (f64, f64) {
        match self.rows[q].binary_search_by_key(&col, |e| e.col) {
            Ok(k) => (self.rows[q][k].lo, self.rows[q][k].hi),
            Err(_) => (0.0, 0.0),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_point_valued(&self) -> bool {
        self.rows.iter().flatten().all(|e| e.lo == e.hi)
    }
}

pub fn row_sums(row: &[Entry]) -> (f64, f64) {
    row.iter().fold((0.0, 0.0), |(l, h), e| (l + e.lo, h + e.hi))
}

/// Interval Markov chain: interval matrix plus per-state propositions.
#[derive(Debug, Clone, PartialEq)]
pub struct Imc {
    matrix: IntervalMatrix,
    props: Vec<PropSet>,
}

impl Imc {
    pub fn new(matrix: IntervalMatrix, props: Vec<PropSet>) -> Result<Self, ImcError> {
        if props.len() != matrix.n_states() {
            return Err(ImcError::PropsMismatch {
                expected: matrix.n_states(),
                got: props.len(),
            });
        }
        Ok(Self { matrix, props })
    }

    pub fn n_states(&self) -> usize {
        self.matrix.n_states()
    }

    pub fn matrix(&self) -> &IntervalMatrix {
        &self.matrix
    }

    pub fn props(&self) -> &[PropSet] {
        &self.props
    }

    pub fn into_parts(self) -> (IntervalMatrix, Vec<PropSet>) {
        (self.matrix, self.props)
    }
}

/// Row-stochastic matrix picked from an interval matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedMc {
    rows: Vec<Vec<(usize, f64)>>,
}

impl InducedMc {
    pub fn new(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|&(_, p)| p > 0.0);
                r.sort_by_key(|&(c, _)| c);
                r
            })
            .collect();
        Self { rows }
    }

    pub fn n_states(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, q: usize) -> &[(usize, f64)] {
        &self.rows[q]
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub fn prob(&self, q: usize, col: usize) -> f64 {
        self.rows[q]
            .iter()
            .find(|&&(c, _)| c == col)
            .map_or(0.0, |&(_, p)| p)
    }

    /// Checks row sums and interval containment against `bounds`.
    pub fn is_induced_by(&self, bounds: &IntervalMatrix, tol: f64) -> bool {
        if self.n_states() != bounds.n_states() {
            return false;
        }
        for q in 0..self.n_states() {
            let s: f64 = self.rows[q].iter().map(|&(_, p)| p).sum();
            if (s - 1.0).abs() > tol {
                return false;
            }
            for &(c, p) in &self.rows[q] {
                let (lo, hi) = bounds.get(q, c);
                if p < lo - tol || p > hi + tol {
                    return false;
                }
            }
            for e in bounds.row(q) {
                if e.lo > tol && self.prob(q, e.col) < e.lo - tol {
                    return false;
                }
            }
        }
        true
    }

    /// Successor lists of the positive-probability graph.
    pub fn graph(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(c, _)| c).collect())
            .collect()
    }
}
