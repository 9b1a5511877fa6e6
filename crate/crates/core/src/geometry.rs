//! Axis-aligned boxes, labeled regions and rectangular partitions of a domain.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for cover and disjointness checks.
pub const REL_TOL: f64 = 1e-9;

/// Atomic propositions holding on a region.
pub type PropSet = BTreeSet<String>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("rectangle bounds have different lengths ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("rectangle must have at least one dimension")]
    ZeroDimension,
    #[error("lower bound exceeds upper bound in dimension {0}")]
    Inverted(usize),
    #[error("cannot split a zero-volume rectangle")]
    Degenerate,
    #[error("regions {0} and {1} overlap with positive volume")]
    Overlap(usize, usize),
    #[error("regions do not cover the domain (covered volume {covered}, domain volume {domain})")]
    NotCovered { covered: f64, domain: f64 },
    #[error("region {0} is not contained in the domain")]
    OutsideDomain(usize),
    #[error("grid has {got} entries, domain has {expected} dimensions")]
    GridMismatch { got: usize, expected: usize },
    #[error("grid count must be positive")]
    EmptyGrid,
    #[error("cell {0} is not covered by any labeled region")]
    Unlabeled(usize),
    #[error("class vector has {got} entries for {expected} cells")]
    ClassMismatch { got: usize, expected: usize },
}

/// A compact box `{x : lower <= x <= upper}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Rect {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, GeometryError> {
        if lower.len() != upper.len() {
            return Err(GeometryError::DimensionMismatch(lower.len(), upper.len()));
        }
        if lower.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo <= hi) {
                return Err(GeometryError::Inverted(i));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i)).product()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.iter()
            .enumerate()
            .all(|(i, &v)| self.lower[i] <= v && v <= self.upper[i])
    }

    /// True when `other` lies inside `self` up to the relative tolerance.
    pub fn contains_rect(&self, other: &Rect) -> bool {
        (0..self.dim()).all(|i| {
            let slack = REL_TOL * self.width(i).max(1.0);
            other.lower[i] >= self.lower[i] - slack && other.upper[i] <= self.upper[i] + slack
        })
    }

    /// Volume of the intersection of the two boxes (0 when they only touch).
    pub fn overlap_volume(&self, other: &Rect) -> f64 {
        (0..self.dim())
            .map(|i| {
                let lo = self.lower[i].max(other.lower[i]);
                let hi = self.upper[i].min(other.upper[i]);
                (hi - lo).max(0.0)
            })
            .product()
    }

    /// Splits at the midpoint of the widest dimension, lowest index on ties.
    pub fn split(&self) -> Result<(Rect, Rect), GeometryError> {
        if self.volume() <= 0.0 {
            return Err(GeometryError::Degenerate);
        }
        let mut axis = 0;
        for i in 1..self.dim() {
            if self.width(i) > self.width(axis) {
                axis = i;
            }
        }
        let mid = 0.5 * (self.lower[axis] + self.upper[axis]);
        if !(mid > self.lower[axis] && mid < self.upper[axis]) {
            return Err(GeometryError::Degenerate);
        }
        let mut left = self.clone();
        let mut right = self.clone();
        left.upper[axis] = mid;
        right.lower[axis] = mid;
        Ok((left, right))
    }
}

/// Free-function form of [`Rect::split`].
pub fn split_rect(rect: &Rect) -> Result<(Rect, Rect), GeometryError> {
    rect.split()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledRegion {
    pub rect: Rect,
    #[serde(default)]
    pub props: PropSet,
}

/// Interior-disjoint labeled cover of a rectangular domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    domain: Rect,
    cells: Vec<Rect>,
    cell_props: Vec<PropSet>,
}

impl Partition {
    /// Builds a partition, checking cover and pairwise interior disjointness.
    pub fn new(
        domain: Rect,
        cells: Vec<Rect>,
        cell_props: Vec<PropSet>,
    ) -> Result<Self, GeometryError> {
        if cells.len() != cell_props.len() {
            return Err(GeometryError::ClassMismatch {
                got: cell_props.len(),
                expected: cells.len(),
            });
        }
        check_cover(&domain, &cells)?;
        Ok(Self {
            domain,
            cells,
            cell_props,
        })
    }

    pub fn domain(&self) -> &Rect {
        &self.domain
    }

    pub fn cells(&self) -> &[Rect] {
        &self.cells
    }

    pub fn cell(&self, j: usize) -> &Rect {
        &self.cells[j]
    }

    pub fn props(&self, j: usize) -> &PropSet {
        &self.cell_props[j]
    }

    pub fn all_props(&self) -> &[PropSet] {
        &self.cell_props
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Splits the listed cells in half along their widest dimension.
    ///
    /// The first child keeps the parent's index and the second is appended,
    /// so every other cell keeps its index. Returns the indices of all
    /// replaced or added cells and the cells that could not be split.
    pub fn split_cells(&mut self, which: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut changed = Vec::new();
        let mut skipped = Vec::new();
        let mut sorted: Vec<usize> = which.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for j in sorted {
            match self.cells[j].split() {
                Ok((left, right)) => {
                    self.cells[j] = left;
                    self.cells.push(right);
                    self.cell_props.push(self.cell_props[j].clone());
                    changed.push(j);
                    changed.push(self.cells.len() - 1);
                }
                Err(_) => skipped.push(j),
            }
        }
        changed.sort_unstable();
        (changed, skipped)
    }
}

fn check_cover(domain: &Rect, pieces: &[Rect]) -> Result<(), GeometryError> {
    for (i, r) in pieces.iter().enumerate() {
        if r.dim() != domain.dim() {
            return Err(GeometryError::DimensionMismatch(r.dim(), domain.dim()));
        }
        if !domain.contains_rect(r) {
            return Err(GeometryError::OutsideDomain(i));
        }
    }
    let dom_vol = domain.volume();
    for i in 0..pieces.len() {
        for k in (i + 1)..pieces.len() {
            let ov = pieces[i].overlap_volume(&pieces[k]);
            if ov > REL_TOL * dom_vol {
                return Err(GeometryError::Overlap(i, k));
            }
        }
    }
    let covered: f64 = pieces.iter().map(Rect::volume).sum();
    if (covered - dom_vol).abs() > REL_TOL * dom_vol {
        return Err(GeometryError::NotCovered {
            covered,
            domain: dom_vol,
        });
    }
    Ok(())
}

/// Uniform grid over `domain`, refined by every region boundary so that each
/// cell carries a single proposition set.
pub fn align_partition_to_labels(
    domain: &Rect,
    regions: &[LabeledRegion],
    grid: &[usize],
) -> Result<Partition, GeometryError> {
    let n = domain.dim();
    if grid.len() != n {
        return Err(GeometryError::GridMismatch {
            got: grid.len(),
            expected: n,
        });
    }
    if grid.contains(&0) {
        return Err(GeometryError::EmptyGrid);
    }
    let region_rects: Vec<Rect> = regions.iter().map(|r| r.rect.clone()).collect();
    check_cover(domain, &region_rects)?;

    let mut cuts: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = (domain.lower[i], domain.upper[i]);
        let mut c: Vec<f64> = (0..=grid[i])
            .map(|k| {
                if k == grid[i] {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / grid[i] as f64
                }
            })
            .collect();
        for r in regions {
            for v in [r.rect.lower[i], r.rect.upper[i]] {
                if v > lo && v < hi {
                    c.push(v);
                }
            }
        }
        c.sort_by(f64::total_cmp);
        c.dedup();
        cuts.push(c);
    }

    let mut cells = Vec::new();
    let mut props = Vec::new();
    let counts: Vec<usize> = cuts.iter().map(|c| c.len() - 1).collect();
    let total: usize = counts.iter().product();
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let lower: Vec<f64> = (0..n).map(|i| cuts[i][idx[i]]).collect();
        let upper: Vec<f64> = (0..n).map(|i| cuts[i][idx[i] + 1]).collect();
        let cell = Rect { lower, upper };
        let center = cell.center();
        let owner = regions
            .iter()
            .position(|r| r.rect.contains_point(&center))
            .ok_or(GeometryError::Unlabeled(cells.len()))?;
        props.push(regions[owner].props.clone());
        cells.push(cell);
        // odometer, last dimension fastest
        for i in (0..n).rev() {
            idx[i] += 1;
            if idx[i] < counts[i] {
                break;
            }
            idx[i] = 0;
        }
    }
    Ok(Partition {
        domain: domain.clone(),
        cells,
        cell_props: props,
    })
}

/// Verification outcome of a single cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Yes,
    No,
    Undecided,
}

impl Class {
    pub fn as_str(self) -> &'static str {
        match self {
            Class::Yes => "yes",
            Class::No => "no",
            Class::Undecided => "undecided",
        }
    }
}

/// Fraction of the domain volume covered by undecided cells.
pub fn uncertain_volume(partition: &Partition, classes: &[Class]) -> Result<f64, GeometryError> {
    if classes.len() != partition.len() {
        return Err(GeometryError::ClassMismatch {
            got: classes.len(),
            expected: partition.len(),
        });
    }
    let undecided: f64 = partition
        .cells()
        .iter()
        .zip(classes)
        .filter(|(_, c)| **c == Class::Undecided)
        .fold(0.0, |acc, (r, _)| acc + r.volume());
    Ok((undecided / partition.domain().volume()).clamp(0.0, 1.0))
}
