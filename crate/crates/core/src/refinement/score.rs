//! Path-exploration scoring of IMC states over the best-case product chain.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::verifier::VerificationResult;

/// Scores every IMC state by the certainty its refinement could bring to the
/// undecided states.
///
/// From each undecided state, paths of the best-case chain are explored
/// depth first (successors in ascending order, no state repeated on a path,
/// paths below `p_stop` pruned). A path ending in a potential component
/// credits the states with an ambiguous outgoing transition in the potential
/// BSCCs owning it; a path reaching a permanent component stops; any other
/// state credits its own cell and the path continues. Each credit is the path
/// probability times the bound gap at the path's last state. A potential
/// state without an owning potential BSCC credits nothing.
pub fn score_states(result: &VerificationResult, p_stop: f64) -> Vec<f64> {
    score_states_with(result, p_stop, false)
}

/// As [`score_states`], but a potential state without an owning potential
/// BSCC credits its own cell when `credit_unowned` is set.
pub fn score_states_with(result: &VerificationResult, p_stop: f64, credit_unowned: bool) -> Vec<f64> {
    let product = &result.product;
    let n_cells = result.classes.len();
    let ambiguous: Vec<bool> = (0..product.n_states())
        .map(|q| {
            product
                .matrix()
                .row(q)
                .iter()
                .any(|e| e.lo == 0.0 && e.hi > 0.0)
        })
        .collect();
    let sources: Vec<usize> = result
        .undecided()
        .into_iter()
        .map(|j| product.initial_states()[j])
        .collect();
    let partial: Vec<BTreeMap<usize, f64>> = sources
        .par_iter()
        .map(|&src| explore(result, &ambiguous, src, p_stop, credit_unowned))
        .collect();
    let mut scores = vec![0.0; n_cells];
    for part in partial {
        for (j, s) in part {
            scores[j] += s;
        }
    }
    scores
}

struct Frame {
    state: usize,
    prob: f64,
    next: usize,
}

fn explore(
    result: &VerificationResult,
    ambiguous: &[bool],
    src: usize,
    p_stop: f64,
    credit_unowned: bool,
) -> BTreeMap<usize, f64> {
    let product = &result.product;
    let comps = &result.components;
    let mc = &result.extremal.upper;
    let mut out: BTreeMap<usize, f64> = BTreeMap::new();
    let mut on_path = vec![false; product.n_states()];

    let visit = |q: usize, prob: f64, out: &mut BTreeMap<usize, f64>| -> bool {
        if prob < p_stop {
            return false;
        }
        let gain = prob * (result.extremal.p_max(q) - result.extremal.p_min(q)).max(0.0);
        if comps.is_potential(q) {
            let owners = &comps.owners[q];
            if owners.is_empty() && credit_unowned {
                *out.entry(product.cell(q)).or_default() += gain;
            }
            for &k in owners {
                for &r in &comps.bsccs[k].states {
                    if ambiguous[r] {
                        *out.entry(product.cell(r)).or_default() += gain;
                    }
                }
            }
            return false;
        }
        if comps.is_permanent(q) {
            return false;
        }
        *out.entry(product.cell(q)).or_default() += gain;
        true
    };

    let mut stack: Vec<Frame> = Vec::new();
    if visit(src, 1.0, &mut out) {
        on_path[src] = true;
        stack.push(Frame {
            state: src,
            prob: 1.0,
            next: 0,
        });
    }
    while let Some(top) = stack.last_mut() {
        let row = mc.row(top.state);
        let mut pick = None;
        while top.next < row.len() {
            let (c, t) = row[top.next];
            top.next += 1;
            if t > 0.0 && !on_path[c] {
                pick = Some((c, top.prob * t));
                break;
            }
        }
        match pick {
            Some((c, prob)) => {
                if visit(c, prob, &mut out) {
                    on_path[c] = true;
                    stack.push(Frame {
                        state: c,
                        prob,
                        next: 0,
                    });
                }
            }
            None => {
                on_path[top.state] = false;
                stack.pop();
            }
        }
    }
    out
}

/// Indices of cells whose score reaches `theta` times the maximum score, in
/// decreasing score order (ties by index). No cell is selected when every
/// score is zero.
pub fn select_cells(scores: &[f64], theta: f64) -> Vec<usize> {
    let max = scores.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Vec::new();
    }
    let cut = theta * max;
    let mut sel: Vec<usize> = (0..scores.len())
        .filter(|&j| scores[j] > 0.0 && scores[j] >= cut)
        .collect();
    sel.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    sel
}
