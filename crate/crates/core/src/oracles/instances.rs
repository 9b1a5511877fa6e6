//! Seeded random instances for oracle comparisons.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dra::{Dra, Guard, RabinPair};
use crate::geometry::PropSet;
use crate::imc::{Entry, Imc, IntervalMatrix};

const LATTICE: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Row over `n` states with bounds on the quarter lattice and at most
/// `max_succ` successors.
pub fn random_lattice_row(rng: &mut impl Rng, n: usize, max_succ: usize) -> Vec<Entry> {
    loop {
        let k = rng.random_range(1..=max_succ.min(n));
        let mut cols: Vec<usize> = (0..n).collect();
        cols.shuffle(rng);
        cols.truncate(k);
        cols.sort_unstable();
        let row: Vec<Entry> = cols
            .iter()
            .map(|&col| {
                let a = LATTICE[rng.random_range(0..5)];
                let b = LATTICE[rng.random_range(0..5)];
                Entry {
                    col,
                    lo: a.min(b),
                    hi: a.max(b),
                }
            })
            .filter(|e| e.hi > 0.0)
            .collect();
        let lo: f64 = row.iter().map(|e| e.lo).sum();
        let hi: f64 = row.iter().map(|e| e.hi).sum();
        if !row.is_empty() && lo <= 1.0 && hi >= 1.0 {
            return row;
        }
    }
}

/// Interval matrix with quarter-lattice bounds.
pub fn random_lattice_imc(rng: &mut impl Rng, n: usize, max_succ: usize, aps: &[&str]) -> Imc {
    let rows = (0..n).map(|_| random_lattice_row(rng, n, max_succ)).collect();
    let matrix = IntervalMatrix::new(rows).expect("lattice rows are feasible");
    Imc::new(matrix, random_props(rng, n, aps)).expect("sizes match")
}

/// Point-valued chain with random sparse rows.
pub fn random_point_imc(rng: &mut impl Rng, n: usize, max_succ: usize, aps: &[&str]) -> Imc {
    let rows = (0..n)
        .map(|_| {
            let k = rng.random_range(1..=max_succ.min(n));
            let mut cols: Vec<usize> = (0..n).collect();
            cols.shuffle(rng);
            cols.truncate(k);
            let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            cols.into_iter().zip(w).map(|(c, x)| (c, x / s)).collect()
        })
        .collect();
    let matrix = IntervalMatrix::from_point_rows(rows).expect("normalized rows");
    Imc::new(matrix, random_props(rng, n, aps)).expect("sizes match")
}

fn random_props(rng: &mut impl Rng, n: usize, aps: &[&str]) -> Vec<PropSet> {
    (0..n)
        .map(|_| {
            aps.iter()
                .filter(|_| rng.random_bool(0.5))
                .map(|s| s.to_string())
                .collect()
        })
        .collect()
}

/// Complete deterministic automaton over one proposition `a` with random
/// transitions and one or two random Rabin pairs.
pub fn random_dra(rng: &mut impl Rng, n_states: usize) -> Dra {
    let a = Guard::Ap(0);
    let na = Guard::Not(Box::new(Guard::Ap(0)));
    let edges = (0..n_states)
        .map(|_| {
            vec![
                (a.clone(), rng.random_range(0..n_states)),
                (na.clone(), rng.random_range(0..n_states)),
            ]
        })
        .collect();
    let n_pairs = rng.random_range(1..=2);
    let pairs = (0..n_pairs)
        .map(|_| {
            let mut fin = BTreeSet::new();
            let mut inf = BTreeSet::new();
            for s in 0..n_states {
                match rng.random_range(0..3) {
                    0 => {
                        fin.insert(s);
                    }
                    1 => {
                        inf.insert(s);
                    }
                    _ => {}
                }
            }
            RabinPair { fin, inf }
        })
        .collect();
    Dra::new(vec!["a".into()], 0, edges, pairs).expect("complete and deterministic")
}
