//! Graph primitives over interval matrices: SCCs, confinement and the
//! forced/possible reachability operators.

use crate::imc::IntervalMatrix;

/// Slack for "upper bounds inside a set sum to at least one" and for the
/// lower-bound mass test of edge usability.
pub const SUM_TOL: f64 = 1e-12;

/// Strongly connected components in reverse topological order (sinks first).
/// Each component is sorted ascending.
pub fn tarjan_scc(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    scc_masked(graph, None)
}

/// SCCs of the subgraph induced by `mask`.
pub fn scc_within(graph: &[Vec<usize>], mask: &[bool]) -> Vec<Vec<usize>> {
    scc_masked(graph, Some(mask))
}

fn scc_masked(graph: &[Vec<usize>], mask: Option<&[bool]>) -> Vec<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let n = graph.len();
    let inside = |v: usize| mask.is_none_or(|m| m[v]);
    let mut index = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if !inside(root) || index[root] != UNSET {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));
        while let Some(&(v, pos)) = call.last() {
            if pos < graph[v].len() {
                call.last_mut().unwrap().1 += 1;
                let w = graph[v][pos];
                if !inside(w) {
                    continue;
                }
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Edge `q -> c` can carry positive probability in some induced chain: its
/// upper bound is positive and the lower bounds of the other successors leave room.
pub fn is_usable(m: &IntervalMatrix, q: usize, col: usize) -> bool {
    let (lo, hi) = m.get(q, col);
    if hi <= 0.0 {
        return false;
    }
    if lo > 0.0 {
        return true;
    }
    let others: f64 = m.row(q).iter().filter(|e| e.col != col).map(|e| e.lo).sum();
    others < 1.0 - SUM_TOL
}

/// Precomputed adjacency of an interval matrix.
#[derive(Debug, Clone)]
pub struct Analysis<'a> {
    m: &'a IntervalMatrix,
    usable: Vec<Vec<usize>>,
    usable_pred: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl<'a> Analysis<'a> {
    pub fn new(m: &'a IntervalMatrix) -> Self {
        let n = m.n_states();
        let mut usable = vec![Vec::new(); n];
        let mut usable_pred = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (q, out) in usable.iter_mut().enumerate() {
            let row = m.row(q);
            let sum_lo: f64 = row.iter().map(|e| e.lo).sum();
            for e in row {
                pred[e.col].push(q);
                let ok = e.hi > 0.0 && (e.lo > 0.0 || sum_lo - e.lo < 1.0 - SUM_TOL);
                if ok {
                    out.push(e.col);
                    usable_pred[e.col].push(q);
                }
            }
        }
        Self {
            m,
            usable,
            usable_pred,
            pred,
        }
    }

    pub fn matrix(&self) -> &IntervalMatrix {
        self.m
    }

    pub fn n_states(&self) -> usize {
        self.m.n_states()
    }

    /// Successors over usable edges.
    pub fn usable(&self) -> &[Vec<usize>] {
        &self.usable
    }

    pub fn has_usable_self_loop(&self, q: usize) -> bool {
        self.usable[q].binary_search(&q).is_ok()
    }

    /// True iff no lower bound forces mass out of `inside` and the upper
    /// bounds inside sum to at least one.
    pub fn can_confine(&self, q: usize, inside: &[bool]) -> bool {
        let mut hi_in = 0.0;
        for e in self.m.row(q) {
            if inside[e.col] {
                hi_in += e.hi;
            } else if e.lo > 0.0 {
                return false;
            }
        }
        hi_in >= 1.0 - SUM_TOL
    }

    /// States of `universe` from which every induced chain has a path that
    /// reaches `targets` or leaves `universe`.
    pub fn at_question(&self, targets: &[bool], universe: &[bool]) -> Vec<bool> {
        let n = self.n_states();
        let mut avoid: Vec<bool> = (0..n).map(|q| universe[q] && !targets[q]).collect();
        let mut work: Vec<usize> = (0..n).filter(|&q| avoid[q]).collect();
        let mut queued = avoid.clone();
        while let Some(q) = work.pop() {
            queued[q] = false;
            if avoid[q] && !self.can_confine(q, &avoid) {
                avoid[q] = false;
                for &p in &self.pred[q] {
                    if avoid[p] && !queued[p] {
                        queued[p] = true;
                        work.push(p);
                    }
                }
            }
        }
        (0..n).map(|q| universe[q] && !avoid[q]).collect()
    }

    /// States of `universe` with a path of usable edges, through `universe`,
    /// to some state of `targets`.
    pub fn at_permanent(&self, targets: &[bool], universe: &[bool]) -> Vec<bool> {
        let n = self.n_states();
        let mut found = vec![false; n];
        let mut queue: Vec<usize> = (0..n).filter(|&q| targets[q]).collect();
        for &q in &queue {
            found[q] = true;
        }
        while let Some(t) = queue.pop() {
            for &p in &self.usable_pred[t] {
                if universe[p] && !found[p] {
                    found[p] = true;
                    queue.push(p);
                }
            }
        }
        (0..n).map(|q| found[q] && universe[q]).collect()
    }

    /// SCCs of the usable graph restricted to `mask`.
    pub fn sccs_within(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        scc_within(&self.usable, mask)
    }

    /// No usable edge leaves `set`.
    pub fn is_closed(&self, set: &[bool]) -> bool {
        (0..self.n_states())
            .filter(|&q| set[q])
            .all(|q| self.usable[q].iter().all(|&c| set[c]))
    }
}

pub fn mask_of(n: usize, states: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &q in states {
        m[q] = true;
    }
    m
}

pub fn members(mask: &[bool]) -> Vec<usize> {
    (0..mask.len()).filter(|&q| mask[q]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imc::Entry;

    fn e(col: usize, lo: f64, hi: f64) -> Entry {
        Entry { col, lo, hi }
    }

    #[test]
    fn scc_examples() {
        assert_eq!(tarjan_scc(&[vec![0]]), vec![vec![0]]);
        assert_eq!(tarjan_scc(&[vec![1], vec![2], vec![0]]), vec![vec![0, 1, 2]]);
        let dag = vec![vec![1, 2], vec![2], vec![]];
        assert_eq!(tarjan_scc(&dag), vec![vec![2], vec![1], vec![0]]);
        let mixed = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        assert_eq!(tarjan_scc(&mixed), vec![vec![2, 3], vec![0, 1]]);
        assert_eq!(
            scc_within(&mixed, &[true, true, false, true]),
            vec![vec![0, 1], vec![3]]
        );
    }

    #[test]
    fn scc_long_chain_is_iterative() {
        let n = 200_000;
        let g: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n]).collect();
        assert_eq!(tarjan_scc(&g).len(), 1);
    }

    #[test]
    fn confine_examples() {
        let m = IntervalMatrix::new(vec![
            vec![e(0, 0.0, 1.0), e(1, 0.0, 0.5)],
            vec![e(0, 0.1, 0.5), e(1, 0.5, 0.9)],
            vec![e(1, 0.5, 0.5), e(2, 0.4, 0.5)],
        ])
        .unwrap();
        let a = Analysis::new(&m);
        assert!(a.can_confine(0, &[true, false, false]));
        assert!(!a.can_confine(1, &[false, true, false]));
        assert!(!a.can_confine(2, &[false, false, true]));
    }

    #[test]
    fn usable_edges() {
        let m = IntervalMatrix::new(vec![
            vec![e(0, 0.5, 0.5), e(1, 0.5, 0.5), e(2, 0.0, 0.3)],
            vec![e(1, 1.0, 1.0)],
            vec![e(2, 1.0, 1.0)],
        ])
        .unwrap();
        let a = Analysis::new(&m);
        assert_eq!(a.usable()[0], vec![0, 1]);
        assert!(!is_usable(&m, 0, 2));
        assert!(is_usable(&m, 0, 1));
    }

    #[test]
    fn at_question_examples() {
        // 0 -> 1 switchable, 0 -> 0 switchable, 1 -> 2 forced
        let m = IntervalMatrix::new(vec![
            vec![e(0, 0.0, 1.0), e(1, 0.0, 1.0)],
            vec![e(2, 1.0, 1.0)],
            vec![e(2, 1.0, 1.0)],
        ])
        .unwrap();
        let a = Analysis::new(&m);
        let all = [true; 3];
        assert_eq!(a.at_question(&all, &all), vec![true; 3]);
        let target = [false, false, true];
        assert_eq!(a.at_question(&target, &all), vec![false, true, true]);
        assert_eq!(a.at_permanent(&target, &all), vec![true, true, true]);
    }

    #[test]
    fn at_permanent_blocked_by_lower_mass() {
        let m = IntervalMatrix::new(vec![
            vec![e(0, 1.0, 1.0), e(1, 0.0, 0.4)],
            vec![e(1, 1.0, 1.0)],
        ])
        .unwrap();
        let a = Analysis::new(&m);
        assert_eq!(
            a.at_permanent(&[false, true], &[true, true]),
            vec![false, true]
        );
    }
}
