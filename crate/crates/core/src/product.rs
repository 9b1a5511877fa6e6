//! Synchronous product of an IMC with a Rabin automaton.

use std::collections::VecDeque;

use thiserror::Error;

use crate::dra::{Dra, DraError};
use crate::imc::{Entry, Imc, ImcError, IntervalMatrix};

#[derive(Debug, Error)]
pub enum ProductError {
    #[error("cell {cell}: {source}")]
    Labels { cell: usize, source: DraError },
    #[error(transparent)]
    Imc(#[from] ImcError),
    #[error("invalid product: {0}")]
    Invalid(String),
}

/// Membership of product states in the sets of one Rabin pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairLabels {
    pub fin: Vec<bool>,
    pub inf: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductImc {
    matrix: IntervalMatrix,
    origin: Vec<(usize, usize)>,
    pairs: Vec<PairLabels>,
    initial: Vec<usize>,
}

impl ProductImc {
    /// Assembles a product from explicit parts. `initial[j]` is the product
    /// state that starts cell `j`; `origin[q]` is `(cell, automaton state)`.
    pub fn from_parts(
        matrix: IntervalMatrix,
        origin: Vec<(usize, usize)>,
        pairs: Vec<PairLabels>,
        initial: Vec<usize>,
    ) -> Result<Self, ProductError> {
        let n = matrix.n_states();
        if origin.len() != n {
            return Err(ProductError::Invalid("origin length".into()));
        }
        if pairs.is_empty() {
            return Err(ProductError::Invalid("no acceptance pairs".into()));
        }
        if pairs.iter().any(|p| p.fin.len() != n || p.inf.len() != n) {
            return Err(ProductError::Invalid("pair label length".into()));
        }
        if initial.iter().any(|&q| q >= n) {
            return Err(ProductError::Invalid("initial state out of range".into()));
        }
        Ok(Self {
            matrix,
            origin,
            pairs,
            initial,
        })
    }

    pub fn n_states(&self) -> usize {
        self.matrix.n_states()
    }

    pub fn matrix(&self) -> &IntervalMatrix {
        &self.matrix
    }

    pub fn origin(&self, q: usize) -> (usize, usize) {
        self.origin[q]
    }

    pub fn cell(&self, q: usize) -> usize {
        self.origin[q].0
    }

    pub fn pairs(&self) -> &[PairLabels] {
        &self.pairs
    }

    /// Product state `<Q_j, s0>` for each cell `j`.
    pub fn initial_states(&self) -> &[usize] {
        &self.initial
    }

    /// Rabin acceptance of a set of states (some pair meets `inf` and avoids `fin`).
    pub fn is_accepting(&self, states: &[usize]) -> bool {
        self.pairs.iter().any(|p| {
            states.iter().any(|&q| p.inf[q]) && !states.iter().any(|&q| p.fin[q])
        })
    }
}

/// Builds the product, keeping only states reachable from some `<Q_j, s0>`
/// over edges with a positive upper bound. States are numbered by `(cell, automaton state)`.
pub fn build_product(imc: &Imc, dra: &Dra) -> Result<ProductImc, ProductError> {
    let m = imc.n_states();
    let k = dra.n_states();
    let vals: Vec<u32> = imc
        .props()
        .iter()
        .enumerate()
        .map(|(cell, p)| dra.valuation(p).map_err(|source| ProductError::Labels { cell, source }))
        .collect::<Result<_, _>>()?;
    let flat = |j: usize, s: usize| j * k + s;

    let mut seen = vec![false; m * k];
    let mut queue = VecDeque::new();
    for j in 0..m {
        let q = flat(j, dra.initial());
        seen[q] = true;
        queue.push_back((j, dra.initial()));
    }
    while let Some((j, s)) = queue.pop_front() {
        for e in imc.matrix().row(j) {
            let t = dra.step(s, vals[e.col]);
            let q = flat(e.col, t);
            if e.hi > 0.0 && !seen[q] {
                seen[q] = true;
                queue.push_back((e.col, t));
            }
        }
    }

    let mut index = vec![usize::MAX; m * k];
    let mut origin = Vec::new();
    for j in 0..m {
        for s in 0..k {
            if seen[flat(j, s)] {
                index[flat(j, s)] = origin.len();
                origin.push((j, s));
            }
        }
    }
    let rows: Vec<Vec<Entry>> = origin
        .iter()
        .map(|&(j, s)| {
            let mut row: Vec<Entry> = imc
                .matrix()
                .row(j)
                .iter()
                .map(|e| Entry {
                    col: index[flat(e.col, dra.step(s, vals[e.col]))],
                    lo: e.lo,
                    hi: e.hi,
                })
                .collect();
            row.sort_by_key(|e| e.col);
            row
        })
        .collect();
    let pairs = dra
        .pairs()
        .iter()
        .map(|p| PairLabels {
            fin: origin.iter().map(|&(_, s)| p.fin.contains(&s)).collect(),
            inf: origin.iter().map(|&(_, s)| p.inf.contains(&s)).collect(),
        })
        .collect();
    let initial = (0..m).map(|j| index[flat(j, dra.initial())]).collect();
    Ok(ProductImc {
        matrix: IntervalMatrix::from_rows_unchecked(rows),
        origin,
        pairs,
        initial,
    })
}
