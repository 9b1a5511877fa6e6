//! Plain Markov-chain analysis: SCCs, bottom components, exact reachability.

use nalgebra::{DMatrix, DVector};

use super::OracleError;
use crate::imc::InducedMc;
use crate::product::PairLabels;

/// Strongly connected components by two depth-first passes (forward finish
/// order, then the reversed graph). Components are sorted ascending and
/// listed by smallest member.
pub fn kosaraju_scc(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = graph.len();
    let mut rev = vec![Vec::new(); n];
    for (u, succ) in graph.iter().enumerate() {
        for &v in succ {
            rev[v].push(u);
        }
    }
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some((u, i)) = stack.pop() {
            if i < graph[u].len() {
                stack.push((u, i + 1));
                let v = graph[u][i];
                if !visited[v] {
                    visited[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![root];
        comp[root] = id;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &v in &rev[u] {
                if comp[v] == usize::MAX {
                    comp[v] = id;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out.sort();
    out
}

/// Bottom SCCs of a directed graph.
pub fn bottom_sccs(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = graph.len();
    let comps = kosaraju_scc(graph);
    let mut id = vec![0; n];
    for (k, c) in comps.iter().enumerate() {
        for &q in c {
            id[q] = k;
        }
    }
    comps
        .iter()
        .enumerate()
        .filter(|(k, c)| c.iter().all(|&q| graph[q].iter().all(|&t| id[t] == *k)))
        .map(|(_, c)| c.clone())
        .collect()
}

/// Rabin acceptance of a set of product states.
pub fn rabin_accepting(pairs: &[PairLabels], states: &[usize]) -> bool {
    pairs
        .iter()
        .any(|p| states.iter().any(|&q| p.inf[q]) && states.iter().all(|&q| !p.fin[q]))
}

/// States with a path to `target` (target included).
pub fn can_reach(graph: &[Vec<usize>], target: &[bool]) -> Vec<bool> {
    let n = graph.len();
    let mut rev = vec![Vec::new(); n];
    for (u, succ) in graph.iter().enumerate() {
        for &v in succ {
            rev[v].push(u);
        }
    }
    let mut seen = target.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&q| target[q]).collect();
    while let Some(v) = stack.pop() {
        for &u in &rev[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

/// Exact probability of eventually reaching `target` in `mc`, by a dense
/// linear solve over the states that can reach it.
pub fn mc_exact_reach(mc: &InducedMc, target: &[bool]) -> Result<Vec<f64>, OracleError> {
    let n = mc.n_states();
    let graph = mc.graph();
    let reach = can_reach(&graph, target);
    let maybe: Vec<usize> = (0..n).filter(|&q| reach[q] && !target[q]).collect();
    let mut x: Vec<f64> = (0..n).map(|q| if target[q] { 1.0 } else { 0.0 }).collect();
    if maybe.is_empty() {
        return Ok(x);
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &q) in maybe.iter().enumerate() {
        pos[q] = i;
    }
    let k = maybe.len();
    let mut a = DMatrix::<f64>::identity(k, k);
    let mut b = DVector::<f64>::zeros(k);
    for (i, &q) in maybe.iter().enumerate() {
        for &(c, p) in mc.row(q) {
            if target[c] {
                b[i] += p;
            } else if pos[c] != usize::MAX {
                a[(i, pos[c])] -= p;
            }
        }
    }
    let sol = a.lu().solve(&b).ok_or(OracleError::Singular)?;
    for (i, &q) in maybe.iter().enumerate() {
        x[q] = sol[i];
    }
    Ok(x)
}

/// States of accepting and of non-accepting bottom components of `mc`.
pub fn bscc_unions(mc: &InducedMc, pairs: &[PairLabels]) -> (Vec<bool>, Vec<bool>) {
    let n = mc.n_states();
    let mut acc = vec![false; n];
    let mut non = vec![false; n];
    for b in bottom_sccs(&mc.graph()) {
        let mask = if rabin_accepting(pairs, &b) {
            &mut acc
        } else {
            &mut non
        };
        for q in b {
            mask[q] = true;
        }
    }
    (acc, non)
}

/// Probability that `mc` ends in an accepting bottom component, per state.
pub fn acceptance_probability(mc: &InducedMc, pairs: &[PairLabels]) -> Result<Vec<f64>, OracleError> {
    let (acc, _) = bscc_unions(mc, pairs);
    mc_exact_reach(mc, &acc)
}
