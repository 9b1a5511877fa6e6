//! Interval value iteration for maximal reachability probabilities.

use thiserror::Error;

use crate::components::tarjan_scc;
use crate::imc::{Entry, InducedMc, IntervalMatrix};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReachError {
    #[error("value iteration did not converge within {iters} sweeps (residual {residual:e})")]
    NotConverged { iters: usize, residual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueVector {
    pub values: Vec<f64>,
    /// Total sweeps over all components.
    pub iterations: usize,
    /// Largest last-sweep change of any component.
    pub residual: f64,
}

/// Feasible row maximizing `sum p(c) v(c)`: every successor gets its lower
/// bound, the remaining mass goes to successors in decreasing value order
/// (ties by index), each capped at its upper bound.
pub fn greedy_row(row: &[Entry], v: &[f64]) -> Vec<(usize, f64)> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| {
        v[row[b].col]
            .total_cmp(&v[row[a].col])
            .then(row[a].col.cmp(&row[b].col))
    });
    let mut p: Vec<f64> = row.iter().map(|e| e.lo).collect();
    let mut slack = 1.0 - p.iter().sum::<f64>();
    for &k in &order {
        if slack <= 0.0 {
            break;
        }
        let add = (row[k].hi - row[k].lo).min(slack);
        p[k] += add;
        slack -= add;
    }
    row.iter().zip(p).map(|(e, x)| (e.col, x)).collect()
}

fn greedy_value(row: &[Entry], v: &[f64], order: &mut Vec<usize>) -> f64 {
    let mut total = 0.0;
    let mut slack = 1.0;
    for e in row {
        total += e.lo * v[e.col];
        slack -= e.lo;
    }
    if slack <= 0.0 {
        return total;
    }
    order.clear();
    order.extend(0..row.len());
    order.sort_by(|&a, &b| {
        v[row[b].col]
            .total_cmp(&v[row[a].col])
            .then(row[a].col.cmp(&row[b].col))
    });
    for &k in order.iter() {
        let add = (row[k].hi - row[k].lo).min(slack);
        total += add * v[row[k].col];
        slack -= add;
        if slack <= 0.0 {
            break;
        }
    }
    total
}

/// Maximal probability of reaching `target` over all induced chains, and the
/// chain attaining it. Components of the transition graph are solved sinks
/// first with Gauss-Seidel sweeps; `max_iters` caps the sweeps per component.
pub fn max_reach(
    m: &IntervalMatrix,
    target: &[bool],
    tol: f64,
    max_iters: usize,
) -> Result<(ValueVector, InducedMc), ReachError> {
    let n = m.n_states();
    let mut v: Vec<f64> = (0..n).map(|q| if target[q] { 1.0 } else { 0.0 }).collect();
    let graph: Vec<Vec<usize>> = (0..n)
        .map(|q| m.row(q).iter().map(|e| e.col).collect())
        .collect();
    let mut iterations = 0;
    let mut residual: f64 = 0.0;
    let mut order = Vec::new();
    for comp in tarjan_scc(&graph) {
        let free: Vec<usize> = comp.into_iter().filter(|&q| !target[q]).collect();
        if free.is_empty() {
            continue;
        }
        let mut sweeps = 0;
        loop {
            let mut delta: f64 = 0.0;
            for &q in &free {
                let new = greedy_value(m.row(q), &v, &mut order).clamp(0.0, 1.0);
                delta = delta.max((new - v[q]).abs());
                v[q] = new;
            }
            sweeps += 1;
            if delta < tol {
                residual = residual.max(delta);
                break;
            }
            if sweeps >= max_iters {
                return Err(ReachError::NotConverged {
                    iters: sweeps,
                    residual: delta,
                });
            }
        }
        iterations += sweeps;
    }
    let mc = InducedMc::new((0..n).map(|q| greedy_row(m.row(q), &v)).collect());
    Ok((
        ValueVector {
            values: v,
            iterations,
            residual,
        },
        mc,
    ))
}
