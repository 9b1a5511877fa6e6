//! IMC abstraction of `x+ = F(x) + w` over rectangular partitions.

pub mod disturbance;
pub mod dynamics;
pub mod shifts;

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{Partition, Rect};
use crate::imc::{Entry, Imc, ImcError, IntervalMatrix};

pub use disturbance::{density_registry, Density, Triangular, TruncatedGaussian};
pub use dynamics::{dynamics_registry, BistableSwitch, Dynamics, Linear};
pub use shifts::{optimal_shifts, shifted_mass, ShiftBounds};

#[derive(Debug, Error)]
pub enum AbstractionError {
    #[error("model dimension {model} does not match {what} dimension {other}")]
    Dimension {
        model: usize,
        what: &'static str,
        other: usize,
    },
    #[error("decomposition is inconsistent in dimension {dim}: g(a,b) = {lo} > g(b,a) = {hi}")]
    Decomposition { dim: usize, lo: f64, hi: f64 },
    #[error("partition domain differs from the model domain")]
    DomainMismatch,
    #[error("changed cell index {0} out of range")]
    BadChange(usize),
    #[error(transparent)]
    Imc(#[from] ImcError),
}

/// Stochastic system `x+ = F(x) + w` on a rectangular domain. With boundary
/// clipping the successor is projected back onto the domain.
#[derive(Debug, Clone)]
pub struct SystemModel {
    domain: Rect,
    dynamics: Arc<dyn Dynamics>,
    disturbance: Vec<Arc<dyn Density>>,
    boundary_clipping: bool,
}

impl SystemModel {
    pub fn new(
        domain: Rect,
        dynamics: Arc<dyn Dynamics>,
        disturbance: Vec<Arc<dyn Density>>,
        boundary_clipping: bool,
    ) -> Result<Self, AbstractionError> {
        let n = dynamics.dim();
        if domain.dim() != n {
            return Err(AbstractionError::Dimension {
                model: n,
                what: "domain",
                other: domain.dim(),
            });
        }
        if disturbance.len() != n {
            return Err(AbstractionError::Dimension {
                model: n,
                what: "disturbance",
                other: disturbance.len(),
            });
        }
        Ok(Self {
            domain,
            dynamics,
            disturbance,
            boundary_clipping,
        })
    }

    /// The toggle switch with its reference noise on `[0, 4]^2`, clipped at the boundary.
    pub fn bistable_reference() -> Self {
        let noise: Arc<dyn Density> =
            Arc::new(TruncatedGaussian::new(-0.3, 0.1, -0.4, -0.2).expect("valid noise"));
        Self::new(
            Rect::new(vec![0.0, 0.0], vec![4.0, 4.0]).expect("valid domain"),
            Arc::new(BistableSwitch::default()),
            vec![noise.clone(), noise],
            true,
        )
        .expect("consistent model")
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Rect {
        &self.domain
    }

    pub fn dynamics(&self) -> &dyn Dynamics {
        self.dynamics.as_ref()
    }

    pub fn disturbance(&self, i: usize) -> &dyn Density {
        self.disturbance[i].as_ref()
    }

    pub fn boundary_clipping(&self) -> bool {
        self.boundary_clipping
    }

    /// One step of the clipped (or unclipped) system for a given noise sample.
    pub fn step(&self, x: &[f64], w: &[f64]) -> Vec<f64> {
        let mut y = self.dynamics.nominal(x);
        for i in 0..y.len() {
            y[i] += w[i];
            if self.boundary_clipping {
                y[i] = y[i].clamp(self.domain.lower()[i], self.domain.upper()[i]);
            }
        }
        y
    }
}

/// Box `[g(a, b), g(b, a)]` containing `F(rect)`.
pub fn reach_overapprox(model: &SystemModel, rect: &Rect) -> Result<Rect, AbstractionError> {
    if rect.dim() != model.dim() {
        return Err(AbstractionError::Dimension {
            model: model.dim(),
            what: "rectangle",
            other: rect.dim(),
        });
    }
    let lo = model.dynamics.decomposition(rect.lower(), rect.upper());
    let hi = model.dynamics.decomposition(rect.upper(), rect.lower());
    for i in 0..lo.len() {
        if !(lo[i] <= hi[i]) {
            return Err(AbstractionError::Decomposition {
                dim: i,
                lo: lo[i],
                hi: hi[i],
            });
        }
    }
    Ok(Rect::new(lo, hi).expect("ordered bounds"))
}

/// Shift data of every dimension for a source reach box and a target cell.
pub fn shift_bounds(model: &SystemModel, reach: &Rect, target: &Rect) -> Vec<ShiftBounds> {
    (0..model.dim())
        .map(|i| {
            let (clip_lo, clip_hi) = clip_flags(model, target, i);
            let center = match (clip_lo, clip_hi) {
                (true, false) => f64::NEG_INFINITY,
                (false, true) => f64::INFINITY,
                _ => 0.5 * (target.lower()[i] + target.upper()[i]) - model.disturbance[i].mode(),
            };
            ShiftBounds::new(center, reach.lower()[i], reach.upper()[i])
        })
        .collect()
}

fn clip_flags(model: &SystemModel, target: &Rect, i: usize) -> (bool, bool) {
    if !model.boundary_clipping {
        return (false, false);
    }
    (
        target.lower()[i] == model.domain.lower()[i],
        target.upper()[i] == model.domain.upper()[i],
    )
}

/// Transition interval from a cell whose nominal image lies in `reach` to `target`.
fn bounds_from_reach(model: &SystemModel, reach: &Rect, target: &Rect) -> (f64, f64) {
    let shifts = shift_bounds(model, reach, target);
    let mut hi = 1.0;
    for (i, s) in shifts.iter().enumerate() {
        let (clip_lo, clip_hi) = clip_flags(model, target, i);
        let (a, b) = (target.lower()[i], target.upper()[i]);
        hi *= shifted_mass(model.disturbance(i), a, b, s.s_max_shift, clip_lo, clip_hi);
        if hi == 0.0 {
            return (0.0, 0.0);
        }
    }
    let mut lo = 1.0;
    for (i, s) in shifts.iter().enumerate() {
        let (clip_lo, clip_hi) = clip_flags(model, target, i);
        let (a, b) = (target.lower()[i], target.upper()[i]);
        lo *= shifted_mass(model.disturbance(i), a, b, s.s_min_shift, clip_lo, clip_hi);
        if lo == 0.0 {
            break;
        }
    }
    (lo.min(hi), hi)
}

/// Lower and upper probability of moving from any point of `source` into `target`.
pub fn transition_bounds(
    model: &SystemModel,
    source: &Rect,
    target: &Rect,
) -> Result<(f64, f64), AbstractionError> {
    let reach = reach_overapprox(model, source)?;
    Ok(bounds_from_reach(model, &reach, target))
}

fn check_partition(model: &SystemModel, partition: &Partition) -> Result<(), AbstractionError> {
    if partition.domain() != model.domain() {
        return Err(AbstractionError::DomainMismatch);
    }
    Ok(())
}

fn row_entries(
    model: &SystemModel,
    reach: &Rect,
    cells: &[Rect],
    targets: impl Iterator<Item = usize>,
) -> Vec<Entry> {
    targets
        .filter_map(|l| {
            let (lo, hi) = bounds_from_reach(model, reach, &cells[l]);
            (hi > 0.0).then_some(Entry { col: l, lo, hi })
        })
        .collect()
}

fn reach_sets(model: &SystemModel, cells: &[Rect]) -> Result<Vec<Rect>, AbstractionError> {
    cells
        .par_iter()
        .map(|c| reach_overapprox(model, c))
        .collect()
}

/// Builds the IMC with all pairwise transition bounds of the partition.
pub fn build_imc(model: &SystemModel, partition: &Partition) -> Result<Imc, AbstractionError> {
    check_partition(model, partition)?;
    let cells = partition.cells();
    let reach = reach_sets(model, cells)?;
    let rows: Vec<Vec<Entry>> = reach
        .par_iter()
        .map(|r| row_entries(model, r, cells, 0..cells.len()))
        .collect();
    let matrix = IntervalMatrix::new(rows)?;
    Ok(Imc::new(matrix, partition.all_props().to_vec())?)
}

/// Work done by an incremental update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UpdateStats {
    pub rows_rebuilt: usize,
    pub pairs_evaluated: usize,
}

/// Recomputes the rows of changed cells and the columns into them; every
/// other entry is copied from `imc`. Indices at or beyond the old state count
/// are treated as changed.
pub fn update_imc(
    model: &SystemModel,
    imc: &Imc,
    partition: &Partition,
    changed_cells: &[usize],
) -> Result<(Imc, UpdateStats), AbstractionError> {
    check_partition(model, partition)?;
    let n = partition.len();
    let n_old = imc.n_states();
    let mut changed: BTreeSet<usize> = BTreeSet::new();
    for &c in changed_cells {
        if c >= n {
            return Err(AbstractionError::BadChange(c));
        }
        changed.insert(c);
    }
    changed.extend(n_old..n);
    let changed_list: Vec<usize> = changed.iter().copied().collect();
    let cells = partition.cells();
    let reach = reach_sets(model, cells)?;

    let rows: Vec<Vec<Entry>> = (0..n)
        .into_par_iter()
        .map(|j| {
            if changed.contains(&j) {
                row_entries(model, &reach[j], cells, 0..n)
            } else {
                let mut row: Vec<Entry> = imc
                    .matrix()
                    .row(j)
                    .iter()
                    .filter(|e| !changed.contains(&e.col))
                    .copied()
                    .collect();
                row.extend(row_entries(model, &reach[j], cells, changed_list.iter().copied()));
                row.sort_by_key(|e| e.col);
                row
            }
        })
        .collect();
    let stats = UpdateStats {
        rows_rebuilt: changed.len(),
        pairs_evaluated: changed.len() * n + (n - changed.len()) * changed.len(),
    };
    let matrix = IntervalMatrix::new(rows)?;
    Ok((Imc::new(matrix, partition.all_props().to_vec())?, stats))
}
