//! Qualitative analysis of product IMCs: BSCCs reachable under some or all
//! induced chains, and the winning/losing components built on them.

mod bscc;
mod graph;
mod winning;

pub use bscc::{find_bsccs, union_mask, union_states, Bscc};
pub use graph::{is_usable, mask_of, members, scc_within, tarjan_scc, Analysis, SUM_TOL};
pub use winning::ComponentSets;

use crate::product::ProductImc;

/// Runs the BSCC search and the component search.
pub fn find_components(product: &ProductImc) -> ComponentSets {
    let an = Analysis::new(product.matrix());
    let bsccs = bscc::find_bsccs_with(product, &an);
    winning::find_components_with(&an, bsccs)
}

/// Component search for BSCCs computed elsewhere.
pub fn find_components_from(product: &ProductImc, bsccs: Vec<Bscc>) -> ComponentSets {
    let an = Analysis::new(product.matrix());
    winning::find_components_with(&an, bsccs)
}
