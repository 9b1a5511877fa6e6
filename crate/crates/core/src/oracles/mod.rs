//! Independent reference computations for testing: exhaustive induced-chain
//! enumeration, exact chain analysis, simulation and quadrature.

mod enumerate;
mod instances;
mod markov;
mod quadrature;
mod simulate;

use thiserror::Error;

pub use enumerate::{
    enumerate_support_graphs, enumerate_vertex_mcs, qualitative_truth, quantitative_truth,
    row_supports, row_vertices, QualitativeTruth, QuantitativeTruth,
};
pub use instances::{random_dra, random_lattice_imc, random_lattice_row, random_point_imc};
pub use markov::{
    acceptance_probability, bottom_sccs, bscc_unions, can_reach, kosaraju_scc, mc_exact_reach,
    rabin_accepting,
};
pub use quadrature::{integrate, quadrature_mass};
pub use simulate::{check_mixed_monotone, rng, sample_disturbance, sample_point, simulate, SimRng};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("enumeration of {count} chains exceeds the limit {limit}")]
    TooLarge { count: f64, limit: usize },
    #[error("singular linear system")]
    Singular,
    #[error("quadrature did not converge on [{a}, {b}] (error {err:e})")]
    Quadrature { a: f64, b: f64, err: f64 },
}
