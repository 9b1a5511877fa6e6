//! Extremal placement of a symmetric unimodal density over a target interval.

use super::disturbance::Density;

/// Per-dimension shift data for one (source, target) cell pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftBounds {
    pub r_lo: f64,
    pub r_hi: f64,
    /// Shift that centers the density mode on the target interval.
    pub s_center: f64,
    /// Maximizer of the captured mass over `[r_lo, r_hi]`.
    pub s_max_shift: f64,
    /// Minimizer of the captured mass over `[r_lo, r_hi]`.
    pub s_min_shift: f64,
}

impl ShiftBounds {
    pub fn new(s_center: f64, r_lo: f64, r_hi: f64) -> Self {
        let (s_max_shift, s_min_shift) = optimal_shifts(s_center, r_lo, r_hi);
        Self {
            r_lo,
            r_hi,
            s_center,
            s_max_shift,
            s_min_shift,
        }
    }
}

/// Returns `(s_max_shift, s_min_shift)`: the point of `[r_lo, r_hi]` nearest to
/// `s_center`, and the endpoint farthest from it (ties go to `r_lo`).
pub fn optimal_shifts(s_center: f64, r_lo: f64, r_hi: f64) -> (f64, f64) {
    let s_max = s_center.clamp(r_lo, r_hi);
    let mid = 0.5 * (r_lo + r_hi);
    let s_min = if s_center < mid { r_hi } else { r_lo };
    (s_max, s_min)
}

/// `F(b - s) - F(a - s)` with the lower term replaced by 0 when `clip_lo` and
/// the upper term by 1 when `clip_hi`.
pub fn shifted_mass(
    dist: &dyn Density,
    a: f64,
    b: f64,
    s: f64,
    clip_lo: bool,
    clip_hi: bool,
) -> f64 {
    let upper = if clip_hi { 1.0 } else { dist.cdf(b - s) };
    let lower = if clip_lo { 0.0 } else { dist.cdf(a - s) };
    (upper - lower).clamp(0.0, 1.0)
}
