//! Brute-force enumeration of induced chains of small interval matrices.

use std::collections::BTreeSet;

use super::markov::{acceptance_probability, bottom_sccs, can_reach, mc_exact_reach, rabin_accepting};
use super::OracleError;
use crate::imc::{Entry, InducedMc, IntervalMatrix};
use crate::product::ProductImc;

const KEY_SCALE: f64 = 1e12;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Extreme points of `{p : lo <= p <= hi, sum p = 1}` for one row: the
/// allocations that fill successors to their upper bound in some order.
pub fn row_vertices(row: &[Entry]) -> Vec<Vec<(usize, f64)>> {
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut out = Vec::new();
    for order in permutations(row.len()) {
        let mut p: Vec<f64> = row.iter().map(|e| e.lo).collect();
        let mut slack = 1.0 - p.iter().sum::<f64>();
        for &k in &order {
            let add = (row[k].hi - row[k].lo).min(slack.max(0.0));
            p[k] += add;
            slack -= add;
        }
        let key: Vec<i64> = p.iter().map(|x| (x * KEY_SCALE).round() as i64).collect();
        if seen.insert(key) {
            out.push(row.iter().zip(&p).map(|(e, &x)| (e.col, x)).collect());
        }
    }
    out
}

/// Successor sets `S` for which some induced row puts positive mass exactly
/// on `S`.
pub fn row_supports(row: &[Entry]) -> Vec<Vec<usize>> {
    let optional: Vec<usize> = (0..row.len()).filter(|&k| row[k].lo == 0.0).collect();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << optional.len()) {
        let chosen: Vec<usize> = (0..row.len())
            .filter(|&k| {
                row[k].lo > 0.0
                    || optional
                        .iter()
                        .position(|&o| o == k)
                        .is_some_and(|i| bits >> i & 1 == 1)
            })
            .collect();
        let lo: f64 = chosen.iter().map(|&k| row[k].lo).sum();
        let hi: f64 = chosen.iter().map(|&k| row[k].hi).sum();
        let has_optional = bits != 0;
        let feasible = hi >= 1.0 && lo <= 1.0 && (!has_optional || lo < 1.0);
        if feasible && !chosen.is_empty() {
            out.push(chosen.iter().map(|&k| row[k].col).collect());
        }
    }
    out
}

fn cartesian_count<T>(choices: &[Vec<T>]) -> f64 {
    choices.iter().map(|c| c.len() as f64).product()
}

fn for_each_combination<T>(choices: &[Vec<T>], mut f: impl FnMut(&[usize])) {
    let n = choices.len();
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut idx = vec![0; n];
    loop {
        f(&idx);
        let mut d = n;
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < choices[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

/// Every induced chain whose rows are vertices of their row polytopes.
/// Fails when there would be more than `limit` of them.
pub fn enumerate_vertex_mcs(m: &IntervalMatrix, limit: usize) -> Result<Vec<InducedMc>, OracleError> {
    let choices: Vec<Vec<Vec<(usize, f64)>>> = m.rows().iter().map(|r| row_vertices(r)).collect();
    let count = cartesian_count(&choices);
    if count > limit as f64 {
        return Err(OracleError::TooLarge { count, limit });
    }
    let mut out = Vec::with_capacity(count as usize);
    for_each_combination(&choices, |idx| {
        out.push(InducedMc::new(
            idx.iter().enumerate().map(|(q, &i)| choices[q][i].clone()).collect(),
        ));
    });
    Ok(out)
}

/// Every support graph of an induced chain. Fails when there would be more
/// than `limit` of them.
pub fn enumerate_support_graphs(
    m: &IntervalMatrix,
    limit: usize,
) -> Result<Vec<Vec<Vec<usize>>>, OracleError> {
    let choices: Vec<Vec<Vec<usize>>> = m.rows().iter().map(|r| row_supports(r)).collect();
    let count = cartesian_count(&choices);
    if count > limit as f64 {
        return Err(OracleError::TooLarge { count, limit });
    }
    let mut out = Vec::with_capacity(count as usize);
    for_each_combination(&choices, |idx| {
        out.push(idx.iter().enumerate().map(|(q, &i)| choices[q][i].clone()).collect());
    });
    Ok(out)
}

/// Qualitative ground truth of a product, from all support graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct QualitativeTruth {
    /// Distinct bottom components over all graphs, with acceptance.
    pub bsccs: BTreeSet<(Vec<usize>, bool)>,
    pub accepting_union: Vec<bool>,
    pub rejecting_union: Vec<bool>,
    pub wc_largest: Vec<bool>,
    pub wc_permanent: Vec<bool>,
    pub lc_largest: Vec<bool>,
    pub lc_permanent: Vec<bool>,
    graphs: Vec<Vec<Vec<usize>>>,
}

impl QualitativeTruth {
    /// A set is a bottom component of the same acceptance in every induced
    /// chain's restriction: no graph leaves it and every bottom component
    /// inside it has acceptance `accepting`.
    pub fn is_permanent(&self, product: &ProductImc, states: &[usize], accepting: bool) -> bool {
        let n = product.n_states();
        let mut inside = vec![false; n];
        for &q in states {
            inside[q] = true;
        }
        self.graphs.iter().all(|g| {
            let closed = states.iter().all(|&q| g[q].iter().all(|&c| inside[c]));
            closed
                && bottom_sccs(g)
                    .iter()
                    .filter(|b| inside[b[0]])
                    .all(|b| rabin_accepting(product.pairs(), b) == accepting)
        })
    }

    pub fn n_graphs(&self) -> usize {
        self.graphs.len()
    }
}

pub fn qualitative_truth(product: &ProductImc, limit: usize) -> Result<QualitativeTruth, OracleError> {
    let n = product.n_states();
    let graphs = enumerate_support_graphs(product.matrix(), limit)?;
    let mut truth = QualitativeTruth {
        bsccs: BTreeSet::new(),
        accepting_union: vec![false; n],
        rejecting_union: vec![false; n],
        wc_largest: vec![false; n],
        wc_permanent: vec![true; n],
        lc_largest: vec![false; n],
        lc_permanent: vec![true; n],
        graphs: Vec::new(),
    };
    for g in &graphs {
        let mut acc = vec![false; n];
        let mut non = vec![false; n];
        for b in bottom_sccs(g) {
            let a = rabin_accepting(product.pairs(), &b);
            for &q in &b {
                if a {
                    acc[q] = true;
                } else {
                    non[q] = true;
                }
            }
            truth.bsccs.insert((b, a));
        }
        // winning: every path ends in an accepting bottom component
        let to_non = can_reach(g, &non);
        let to_acc = can_reach(g, &acc);
        for q in 0..n {
            let win = !to_non[q];
            let lose = !to_acc[q];
            truth.accepting_union[q] |= acc[q];
            truth.rejecting_union[q] |= non[q];
            truth.wc_largest[q] |= win;
            truth.wc_permanent[q] &= win;
            truth.lc_largest[q] |= lose;
            truth.lc_permanent[q] &= lose;
        }
    }
    truth.graphs = graphs;
    Ok(truth)
}

/// Exact extremes over vertex chains of a product.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantitativeTruth {
    /// Per product state.
    pub min_accept: Vec<f64>,
    pub max_accept: Vec<f64>,
    /// Largest `|P(reach accepting) + P(reach rejecting) - 1|` seen.
    pub normalization_error: f64,
    pub chains: usize,
}

pub fn quantitative_truth(product: &ProductImc, limit: usize) -> Result<QuantitativeTruth, OracleError> {
    let n = product.n_states();
    let mcs = enumerate_vertex_mcs(product.matrix(), limit)?;
    let mut t = QuantitativeTruth {
        min_accept: vec![f64::INFINITY; n],
        max_accept: vec![f64::NEG_INFINITY; n],
        normalization_error: 0.0,
        chains: mcs.len(),
    };
    for mc in &mcs {
        let p = acceptance_probability(mc, product.pairs())?;
        let (_, non) = super::markov::bscc_unions(mc, product.pairs());
        let r = mc_exact_reach(mc, &non)?;
        for q in 0..n {
            t.min_accept[q] = t.min_accept[q].min(p[q]);
            t.max_accept[q] = t.max_accept[q].max(p[q]);
            t.normalization_error = t.normalization_error.max((p[q] + r[q] - 1.0).abs());
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(col: usize, lo: f64, hi: f64) -> Entry {
        Entry { col, lo, hi }
    }

    #[test]
    fn vertex_examples() {
        assert_eq!(row_vertices(&[e(0, 0.3, 0.3), e(1, 0.7, 0.7)]).len(), 1);
        let v = row_vertices(&[e(0, 0.0, 1.0), e(1, 0.0, 1.0)]);
        assert_eq!(v, vec![vec![(0, 1.0), (1, 0.0)], vec![(0, 0.0), (1, 1.0)]]);
        let mut v = row_vertices(&[e(0, 0.2, 0.6), e(1, 0.3, 0.8)]);
        v.sort_by(|a, b| a[0].1.total_cmp(&b[0].1));
        assert!((v[0][0].1 - 0.2).abs() < 1e-15 && (v[0][1].1 - 0.8).abs() < 1e-15);
        assert!((v[1][0].1 - 0.6).abs() < 1e-15 && (v[1][1].1 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn support_examples() {
        let s = row_supports(&[e(0, 0.0, 1.0), e(1, 0.0, 1.0)]);
        assert_eq!(s, vec![vec![0], vec![1], vec![0, 1]]);
        let s = row_supports(&[e(0, 1.0, 1.0), e(1, 0.0, 0.5)]);
        assert_eq!(s, vec![vec![0]]);
        let s = row_supports(&[e(0, 0.5, 0.5), e(1, 0.0, 0.5), e(2, 0.0, 0.5)]);
        assert_eq!(s, vec![vec![0, 1], vec![0, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn point_valued_single_chain() {
        let m = IntervalMatrix::from_point_rows(vec![vec![(0, 0.5), (1, 0.5)], vec![(1, 1.0)]]).unwrap();
        assert_eq!(enumerate_vertex_mcs(&m, 10).unwrap().len(), 1);
        assert!(enumerate_vertex_mcs(&m, 0).is_err());
    }
}
