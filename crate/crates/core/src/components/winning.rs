//! Largest and permanent winning/losing components.

use super::bscc::{union_mask, Bscc};
use super::graph::Analysis;

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSets {
    pub bsccs: Vec<Bscc>,
    pub wc_potential: Vec<bool>,
    pub wc_permanent: Vec<bool>,
    pub lc_potential: Vec<bool>,
    pub lc_permanent: Vec<bool>,
    /// For each product state, indices into `bsccs` of the potential BSCCs
    /// its potential membership stems from.
    pub owners: Vec<Vec<usize>>,
}

impl ComponentSets {
    fn select(&self, accepting: bool, permanent: bool) -> Vec<&Bscc> {
        self.bsccs
            .iter()
            .filter(|b| b.accepting == accepting && b.permanent == permanent)
            .collect()
    }

    pub fn bscc_acc_potential(&self) -> Vec<&Bscc> {
        self.select(true, false)
    }

    pub fn bscc_acc_permanent(&self) -> Vec<&Bscc> {
        self.select(true, true)
    }

    pub fn bscc_nonacc_potential(&self) -> Vec<&Bscc> {
        self.select(false, false)
    }

    pub fn bscc_nonacc_permanent(&self) -> Vec<&Bscc> {
        self.select(false, true)
    }

    pub fn wc_largest(&self) -> Vec<bool> {
        or(&self.wc_potential, &self.wc_permanent)
    }

    pub fn lc_largest(&self) -> Vec<bool> {
        or(&self.lc_potential, &self.lc_permanent)
    }

    pub fn is_potential(&self, q: usize) -> bool {
        self.wc_potential[q] || self.lc_potential[q]
    }

    pub fn is_permanent(&self, q: usize) -> bool {
        self.wc_permanent[q] || self.lc_permanent[q]
    }
}

fn or(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| *x || *y).collect()
}

/// States that reach `targets` with probability one in some induced chain.
pub(crate) fn largest_component(an: &Analysis<'_>, targets: &[bool]) -> Vec<bool> {
    let n = an.n_states();
    let mut cur = vec![true; n];
    loop {
        let tgt: Vec<bool> = (0..n).map(|q| targets[q] && cur[q]).collect();
        let reach = an.at_permanent(&tgt, &cur);
        let trap: Vec<bool> = (0..n).map(|q| cur[q] && !reach[q]).collect();
        let doomed = an.at_question(&trap, &cur);
        if !doomed.iter().any(|&b| b) {
            return cur;
        }
        for q in 0..n {
            cur[q] &= !doomed[q];
        }
    }
}

/// Subset of `largest` that reaches `targets` with probability one in every
/// induced chain; `excluded` holds states losing in some chain.
fn permanent_component(
    an: &Analysis<'_>,
    targets: &[bool],
    largest: &[bool],
    excluded: &[bool],
) -> Vec<bool> {
    let n = an.n_states();
    let mut cur: Vec<bool> = (0..n).map(|q| largest[q] && !excluded[q]).collect();
    loop {
        let tgt: Vec<bool> = (0..n).map(|q| targets[q] && cur[q]).collect();
        let reach = an.at_permanent(&tgt, &cur);
        let bad: Vec<bool> = (0..n).map(|q| !cur[q] || !reach[q]).collect();
        let doomed = an.at_permanent(&bad, &cur);
        if !doomed.iter().any(|&b| b) {
            return cur;
        }
        for q in 0..n {
            cur[q] &= !doomed[q];
        }
    }
}

/// Largest, permanent and potential components, plus ownership of potential
/// states by potential BSCCs.
pub fn find_components_with(an: &Analysis<'_>, bsccs: Vec<Bscc>) -> ComponentSets {
    let n = an.n_states();
    let acc: Vec<&Bscc> = bsccs.iter().filter(|b| b.accepting).collect();
    let non: Vec<&Bscc> = bsccs.iter().filter(|b| !b.accepting).collect();
    let acc_mask = union_mask(n, &acc);
    let non_mask = union_mask(n, &non);

    let wc_l = largest_component(an, &acc_mask);
    let lc_l = largest_component(an, &non_mask);
    let wc_p = permanent_component(an, &acc_mask, &wc_l, &non_mask);
    let lc_p = permanent_component(an, &non_mask, &lc_l, &acc_mask);
    let wc_q: Vec<bool> = (0..n).map(|q| wc_l[q] && !wc_p[q]).collect();
    let lc_q: Vec<bool> = (0..n).map(|q| lc_l[q] && !lc_p[q]).collect();

    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, b) in bsccs.iter().enumerate() {
        if b.permanent {
            continue;
        }
        let mut tgt = vec![false; n];
        for &q in &b.states {
            tgt[q] = true;
        }
        let pot = if b.accepting { &wc_q } else { &lc_q };
        let basin = largest_component(an, &tgt);
        for q in 0..n {
            if basin[q] && pot[q] {
                owners[q].push(k);
            }
        }
    }
    // potential states not in the basin of any single potential BSCC: fall
    // back to the potential BSCCs they can reach inside their component
    let within = or(&wc_l, &lc_l);
    for q in 0..n {
        if !owners[q].is_empty() || !(wc_q[q] || lc_q[q]) {
            continue;
        }
        for (k, b) in bsccs.iter().enumerate() {
            if b.permanent {
                continue;
            }
            let tgt = super::graph::mask_of(n, &b.states);
            if an.at_permanent(&tgt, &within)[q] {
                owners[q].push(k);
            }
        }
    }

    ComponentSets {
        bsccs,
        wc_potential: wc_q,
        wc_permanent: wc_p,
        lc_potential: lc_q,
        lc_permanent: lc_p,
        owners,
    }
}
