//! Potential and permanent bottom SCCs of a product IMC.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::graph::{mask_of, members, Analysis};
use crate::product::ProductImc;

/// A set of product states that is a BSCC of at least one induced chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bscc {
    pub states: Vec<usize>,
    pub accepting: bool,
    /// BSCC of the same status in every induced chain.
    pub permanent: bool,
}

struct Search<'p, 'a> {
    product: &'p ProductImc,
    an: &'a Analysis<'p>,
    seen: HashSet<Vec<usize>>,
    work: VecDeque<Vec<usize>>,
    found: Vec<(Vec<usize>, bool)>,
}

impl Search<'_, '_> {
    fn push_sccs(&mut self, mask: &[bool]) {
        for c in self.an.sccs_within(mask) {
            if !self.seen.contains(&c) {
                self.work.push_back(c);
            }
        }
    }

    fn drain(&mut self) {
        let n = self.an.n_states();
        while let Some(s) = self.work.pop_front() {
            if !self.seen.insert(s.clone()) {
                continue;
            }
            if s.len() == 1 && !self.an.has_usable_self_loop(s[0]) {
                continue;
            }
            let inside = mask_of(n, &s);
            let outside: Vec<bool> = inside.iter().map(|b| !b).collect();
            let leaky = self.an.at_question(&outside, &inside);
            if leaky.iter().any(|&b| b) {
                let rest: Vec<bool> = (0..n).map(|q| inside[q] && !leaky[q]).collect();
                self.push_sccs(&rest);
                continue;
            }
            let accepting = self.product.is_accepting(&s);
            if accepting {
                // sub-BSCCs that avoid every F state responsible for acceptance
                let mut culprits = vec![false; n];
                for p in self.product.pairs() {
                    if s.iter().all(|&q| !p.fin[q]) {
                        for &q in &s {
                            culprits[q] |= p.inf[q];
                        }
                    }
                }
                self.push_residue(&culprits, &inside);
            } else {
                for k in 0..self.product.pairs().len() {
                    let p = &self.product.pairs()[k];
                    if s.iter().any(|&q| p.inf[q]) {
                        let culprits: Vec<bool> = (0..n).map(|q| inside[q] && p.fin[q]).collect();
                        self.push_residue(&culprits, &inside);
                    }
                }
            }
            self.found.push((s, accepting));
        }
    }

    /// Pushes the SCCs of `inside` minus the states forced to reach `culprits`.
    fn push_residue(&mut self, culprits: &[bool], inside: &[bool]) {
        let forced = self.an.at_question(culprits, inside);
        let rest: Vec<bool> = (0..inside.len()).map(|q| inside[q] && !forced[q]).collect();
        self.push_sccs(&rest);
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let bs: BTreeSet<usize> = b.iter().copied().collect();
    a.iter().all(|q| bs.contains(q))
}

/// Finds every set that is an (accepting or non-accepting) BSCC of some
/// induced chain and flags those that are permanent.
///
/// Candidates are searched on the graph of usable edges. After the main
/// worklist drains, each candidate is also searched for same-status
/// sub-candidates disjoint from the reach of every opposite-status candidate
/// it contains.
pub fn find_bsccs(product: &ProductImc) -> Vec<Bscc> {
    let an = Analysis::new(product.matrix());
    find_bsccs_with(product, &an)
}

pub(crate) fn find_bsccs_with(product: &ProductImc, an: &Analysis<'_>) -> Vec<Bscc> {
    let n = an.n_states();
    let mut search = Search {
        product,
        an,
        seen: HashSet::new(),
        work: VecDeque::new(),
        found: Vec::new(),
    };
    search.push_sccs(&vec![true; n]);
    search.drain();

    let mut done: HashSet<(usize, usize)> = HashSet::new();
    loop {
        let mut pushed = false;
        let count = search.found.len();
        for i in 0..count {
            for j in 0..count {
                if done.contains(&(i, j)) {
                    continue;
                }
                let (outer, acc_o) = &search.found[i];
                let (inner, acc_i) = &search.found[j];
                if acc_o == acc_i || inner.len() >= outer.len() || !is_subset(inner, outer) {
                    continue;
                }
                done.insert((i, j));
                let inside = mask_of(n, outer);
                let target = mask_of(n, inner);
                search.push_residue(&target, &inside);
                pushed = true;
            }
        }
        if !pushed {
            break;
        }
        search.drain();
    }

    let found = search.found;
    let mut out: Vec<Bscc> = found
        .iter()
        .map(|(s, acc)| {
            let closed = an.is_closed(&mask_of(n, s));
            let opposite_inside = found
                .iter()
                .any(|(b, acc_b)| acc_b != acc && is_subset(b, s));
            Bscc {
                states: s.clone(),
                accepting: *acc,
                permanent: closed && !opposite_inside,
            }
        })
        .collect();
    out.sort();
    out
}

/// Union of the states of the listed BSCCs as a mask.
pub fn union_mask(n: usize, bsccs: &[&Bscc]) -> Vec<bool> {
    let mut m = vec![false; n];
    for b in bsccs {
        for &q in &b.states {
            m[q] = true;
        }
    }
    m
}

pub fn union_states(n: usize, bsccs: &[&Bscc]) -> Vec<usize> {
    members(&union_mask(n, bsccs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imc::{Entry, IntervalMatrix};
    use crate::product::PairLabels;

    fn e(col: usize, lo: f64, hi: f64) -> Entry {
        Entry { col, lo, hi }
    }

    fn product(rows: Vec<Vec<Entry>>, fin: &[usize], inf: &[usize]) -> ProductImc {
        let m = IntervalMatrix::new(rows).unwrap();
        let n = m.n_states();
        let pair = PairLabels {
            fin: (0..n).map(|q| fin.contains(&q)).collect(),
            inf: (0..n).map(|q| inf.contains(&q)).collect(),
        };
        ProductImc::from_parts(m, (0..n).map(|q| (q, 0)).collect(), vec![pair], (0..n).collect())
            .unwrap()
    }

    #[test]
    fn point_valued_gives_classical_bsccs() {
        let p = product(
            vec![
                vec![e(1, 0.5, 0.5), e(2, 0.5, 0.5)],
                vec![e(1, 1.0, 1.0)],
                vec![e(3, 1.0, 1.0)],
                vec![e(2, 1.0, 1.0)],
            ],
            &[3],
            &[1, 2],
        );
        let b = find_bsccs(&p);
        assert_eq!(
            b,
            vec![
                Bscc {
                    states: vec![1],
                    accepting: true,
                    permanent: true
                },
                Bscc {
                    states: vec![2, 3],
                    accepting: false,
                    permanent: true
                },
            ]
        );
    }

    #[test]
    fn figure_three_structure() {
        let p = product(
            vec![
                vec![e(1, 1.0, 1.0)],
                vec![e(0, 0.0, 1.0), e(2, 0.0, 1.0)],
                vec![e(0, 0.0, 1.0), e(2, 0.0, 1.0)],
            ],
            &[2],
            &[0],
        );
        let b = find_bsccs(&p);
        let get = |s: &[usize]| b.iter().find(|x| x.states == s).cloned();
        let acc = get(&[0, 1]).expect("{0,1} found");
        assert!(acc.accepting && !acc.permanent);
        let non = get(&[2]).expect("{2} found");
        assert!(!non.accepting && !non.permanent);
        assert!(b.iter().all(|x| !x.permanent));
    }

    #[test]
    fn transient_singleton_skipped() {
        let p = product(
            vec![vec![e(1, 1.0, 1.0)], vec![e(1, 1.0, 1.0)]],
            &[],
            &[1],
        );
        let b = find_bsccs(&p);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].states, vec![1]);
        assert!(b[0].permanent && b[0].accepting);
    }
}
