//! Sampling of the continuous system.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abstraction::{Dynamics, SystemModel};
use crate::geometry::Rect;

pub type SimRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One disturbance vector by inverse-CDF sampling of each component.
pub fn sample_disturbance(model: &SystemModel, rng: &mut impl Rng) -> Vec<f64> {
    (0..model.dim())
        .map(|i| {
            let d = model.disturbance(i);
            if d.is_point_mass() {
                d.mode()
            } else {
                d.quantile(rng.random::<f64>())
            }
        })
        .collect()
}

/// Trajectory of `horizon` steps from `x0`, including `x0`.
pub fn simulate(model: &SystemModel, x0: &[f64], horizon: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(horizon + 1);
    let mut x = x0.to_vec();
    out.push(x.clone());
    for _ in 0..horizon {
        let w = sample_disturbance(model, rng);
        x = model.step(&x, &w);
        out.push(x.clone());
    }
    out
}

/// Uniform point of a rectangle.
pub fn sample_point(rect: &Rect, rng: &mut impl Rng) -> Vec<f64> {
    (0..rect.dim())
        .map(|i| rect.lower()[i] + rng.random::<f64>() * rect.width(i))
        .collect()
}

/// Checks a decomposition function on random points of `rect`: it must
/// agree with the nominal map on the diagonal, be nondecreasing in its first
/// argument and nonincreasing in its second. Returns the first violation.
pub fn check_mixed_monotone(
    dynamics: &dyn Dynamics,
    rect: &Rect,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<(), String> {
    const TOL: f64 = 1e-12;
    for _ in 0..samples {
        let x = sample_point(rect, rng);
        let y = sample_point(rect, rng);
        let f = dynamics.nominal(&x);
        let g = dynamics.decomposition(&x, &x);
        for i in 0..f.len() {
            if (f[i] - g[i]).abs() > TOL * (1.0 + f[i].abs()) {
                return Err(format!("g(x,x) != F(x) at {x:?}"));
            }
        }
        let (lo, hi): (Vec<f64>, Vec<f64>) = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a.min(*b), a.max(*b)))
            .unzip();
        let z = sample_point(rect, rng);
        let g_lo = dynamics.decomposition(&lo, &z);
        let g_hi = dynamics.decomposition(&hi, &z);
        let h_lo = dynamics.decomposition(&z, &lo);
        let h_hi = dynamics.decomposition(&z, &hi);
        for i in 0..g_lo.len() {
            if g_lo[i] > g_hi[i] + TOL {
                return Err(format!("not increasing in x between {lo:?} and {hi:?}"));
            }
            if h_hi[i] > h_lo[i] + TOL {
                return Err(format!("not decreasing in y between {lo:?} and {hi:?}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::BistableSwitch;

    #[test]
    fn seeded_runs_repeat() {
        let m = SystemModel::bistable_reference();
        let a = simulate(&m, &[1.0, 2.0], 20, &mut rng(7));
        let b = simulate(&m, &[1.0, 2.0], 20, &mut rng(7));
        assert_eq!(a, b);
        assert!(a.iter().all(|x| m.domain().contains_point(x)));
    }

    #[test]
    fn bistable_decomposition() {
        let d = BistableSwitch::default();
        let r = Rect::new(vec![0.0, 0.0], vec![4.0, 4.0]).unwrap();
        check_mixed_monotone(&d, &r, 2000, &mut rng(1)).unwrap();
    }
}
