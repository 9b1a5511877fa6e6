//! Interval Markov chain abstraction and ω-regular verification of
//! stochastic mixed-monotone systems.

pub mod abstraction;
pub mod dra;
pub mod geometry;
pub mod hoa;
pub mod imc;
pub mod registry;
pub mod product;
pub mod components;
pub mod reach;
pub mod verifier;
pub mod refinement;
pub mod oracles;
