//! Satisfaction-probability bounds and yes/no/undecided classification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::components::{find_components, ComponentSets};
use crate::dra::Dra;
use crate::geometry::Class;
use crate::imc::{Imc, InducedMc};
use crate::product::{build_product, ProductError, ProductImc};
use crate::reach::{max_reach, ReachError, ValueVector, DEFAULT_MAX_ITERS, DEFAULT_TOL};

const CLAMP_WARN: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Reach(#[from] ReachError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Comparison {
    pub fn holds(self, x: f64, p: f64) -> bool {
        match self {
            Comparison::Lt => x < p,
            Comparison::Le => x <= p,
            Comparison::Gt => x > p,
            Comparison::Ge => x >= p,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Gt => ">",
            Comparison::Ge => ">=",
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Comparison {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "<" => Ok(Comparison::Lt),
            "<=" | "≤" => Ok(Comparison::Le),
            ">" => Ok(Comparison::Gt),
            ">=" | "≥" => Ok(Comparison::Ge),
            other => Err(format!("unknown comparison {other:?}")),
        }
    }
}

/// Probability threshold `P ⋈ p_sat` on the automaton's language.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spec {
    pub comparison: Comparison,
    pub p_sat: f64,
}

impl Spec {
    pub fn new(comparison: Comparison, p_sat: f64) -> Self {
        Self { comparison, p_sat }
    }
}

/// Classifies a probability interval against `spec`.
///
/// The interval is undecided when `p_sat` lies in its interior (`<=`, `>=`)
/// or in its closure (`<`, `>`). A state is also undecided when the interval
/// holds points on both sides of the threshold, which only happens when
/// `p_sat` sits exactly on the far endpoint of a non-strict comparison.
pub fn classify(p_min: f64, p_max: f64, spec: &Spec) -> Class {
    let p = spec.p_sat;
    let c = spec.comparison;
    let straddles = match c {
        Comparison::Le | Comparison::Ge => p_min < p && p < p_max,
        Comparison::Lt | Comparison::Gt => p_min <= p && p <= p_max,
    };
    let lo_ok = c.holds(p_min, p);
    let hi_ok = c.holds(p_max, p);
    if straddles || lo_ok != hi_ok {
        Class::Undecided
    } else if lo_ok {
        Class::Yes
    } else {
        Class::No
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

/// Best-case chain toward winning components and worst-case chain toward
/// losing ones, with their value vectors over product states.
#[derive(Debug, Clone)]
pub struct ExtremalMcs {
    pub upper: InducedMc,
    pub upper_values: ValueVector,
    pub lower: InducedMc,
    pub lower_values: ValueVector,
}

impl ExtremalMcs {
    pub fn p_max(&self, q: usize) -> f64 {
        self.upper_values.values[q]
    }

    pub fn p_min(&self, q: usize) -> f64 {
        1.0 - self.lower_values.values[q]
    }
}

pub fn extremal_product_mcs(
    product: &ProductImc,
    components: &ComponentSets,
    opts: &SolverOptions,
) -> Result<ExtremalMcs, ReachError> {
    let m = product.matrix();
    let wc = components.wc_largest();
    let lc = components.lc_largest();
    let (up, low) = rayon::join(
        || max_reach(m, &wc, opts.tol, opts.max_iters),
        || max_reach(m, &lc, opts.tol, opts.max_iters),
    );
    let (upper_values, upper) = up?;
    let (lower_values, lower) = low?;
    Ok(ExtremalMcs {
        upper,
        upper_values,
        lower,
        lower_values,
    })
}

#[derive(Debug, Clone)]
pub struct VerificationResult {
    pub spec: Spec,
    pub product: ProductImc,
    pub components: ComponentSets,
    pub extremal: ExtremalMcs,
    /// Per IMC state.
    pub p_min: Vec<f64>,
    pub p_max: Vec<f64>,
    pub classes: Vec<Class>,
}

impl VerificationResult {
    pub fn n_states(&self) -> usize {
        self.classes.len()
    }

    pub fn count(&self, class: Class) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn undecided(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&j| self.classes[j] == Class::Undecided)
            .collect()
    }
}

fn clamp_unit(x: f64, what: &str, j: usize) -> f64 {
    let c = x.clamp(0.0, 1.0);
    if (c - x).abs() > CLAMP_WARN {
        log::warn!("{what} of state {j} clamped from {x} to {c}");
    }
    c
}

pub fn verify(imc: &Imc, dra: &Dra, spec: &Spec, opts: &SolverOptions) -> Result<VerificationResult, VerifyError> {
    let product = build_product(imc, dra)?;
    verify_product(product, spec, opts)
}

/// Verification of an already built product.
pub fn verify_product(
    product: ProductImc,
    spec: &Spec,
    opts: &SolverOptions,
) -> Result<VerificationResult, VerifyError> {
    let components = find_components(&product);
    let extremal = extremal_product_mcs(&product, &components, opts)?;
    let mut p_min = Vec::with_capacity(product.initial_states().len());
    let mut p_max = Vec::with_capacity(product.initial_states().len());
    for (j, &q) in product.initial_states().iter().enumerate() {
        let hi = clamp_unit(extremal.p_max(q), "p_max", j);
        let lo = clamp_unit(extremal.p_min(q), "p_min", j);
        if lo > hi + CLAMP_WARN {
            log::warn!("state {j}: p_min {lo} exceeds p_max {hi}");
        }
        p_min.push(lo.min(hi));
        p_max.push(hi);
    }
    let classes = p_min
        .iter()
        .zip(&p_max)
        .map(|(&lo, &hi)| classify(lo, hi, spec))
        .collect();
    Ok(VerificationResult {
        spec: *spec,
        product,
        components,
        extremal,
        p_min,
        p_max,
        classes,
    })
}
