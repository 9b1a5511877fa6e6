//! Symmetric unimodal one-dimensional disturbance densities.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;
use statrs::function::erf::{erfc, erfc_inv};

use crate::registry::{params, Registry, RegistryError};

/// Symmetry tolerance for the truncation interval about the mean.
pub const SYMMETRY_TOL: f64 = 1e-12;

pub trait Density: Send + Sync + fmt::Debug {
    fn kind(&self) -> &str;
    fn mode(&self) -> f64;
    /// Closed support `[lo, hi]`.
    fn support(&self) -> (f64, f64);
    fn pdf(&self, x: f64) -> f64;
    /// Right-continuous distribution function.
    fn cdf(&self, x: f64) -> f64;
    fn quantile(&self, u: f64) -> f64;

    fn is_point_mass(&self) -> bool {
        let (lo, hi) = self.support();
        lo == hi
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

fn std_normal_quantile(p: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * p)
}

/// Normal density with mean `mean` and variance `variance`, restricted to
/// `[lo, hi]` and renormalized. The interval must be centered on the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedGaussian {
    mean: f64,
    sd: f64,
    lo: f64,
    hi: f64,
    cdf_lo: f64,
    mass: f64,
}

impl TruncatedGaussian {
    pub fn new(mean: f64, variance: f64, lo: f64, hi: f64) -> Result<Self, String> {
        if !(variance >= 0.0) || !variance.is_finite() {
            return Err(format!("variance must be finite and nonnegative, got {variance}"));
        }
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(format!("support [{lo}, {hi}] is not a finite interval"));
        }
        if (lo + hi - 2.0 * mean).abs() > SYMMETRY_TOL.max(SYMMETRY_TOL * mean.abs()) {
            return Err(format!(
                "support [{lo}, {hi}] is not symmetric about the mean {mean}"
            ));
        }
        let sd = variance.sqrt();
        let (cdf_lo, mass) = if sd > 0.0 && hi > lo {
            let a = std_normal_cdf((lo - mean) / sd);
            let b = std_normal_cdf((hi - mean) / sd);
            (a, b - a)
        } else {
            (0.0, 0.0)
        };
        Ok(Self {
            mean,
            sd,
            lo,
            hi,
            cdf_lo,
            mass,
        })
    }

    fn degenerate(&self) -> bool {
        self.mass <= 0.0
    }

    fn left_cdf(&self, x: f64) -> f64 {
        (std_normal_cdf((x - self.mean) / self.sd) - self.cdf_lo) / self.mass
    }
}

impl Density for TruncatedGaussian {
    fn kind(&self) -> &str {
        "truncated-gaussian"
    }

    fn mode(&self) -> f64 {
        self.mean
    }

    fn support(&self) -> (f64, f64) {
        if self.degenerate() {
            (self.mean, self.mean)
        } else {
            (self.lo, self.hi)
        }
    }

    fn pdf(&self, x: f64) -> f64 {
        if self.degenerate() || x < self.lo || x > self.hi {
            return 0.0;
        }
        let z = (x - self.mean) / self.sd;
        (-0.5 * z * z).exp() / (self.sd * (2.0 * std::f64::consts::PI).sqrt() * self.mass)
    }

    fn cdf(&self, x: f64) -> f64 {
        if self.degenerate() {
            return if x >= self.mean { 1.0 } else { 0.0 };
        }
        if x <= self.lo {
            0.0
        } else if x >= self.hi {
            1.0
        } else if x <= self.mean {
            self.left_cdf(x).clamp(0.0, 0.5)
        } else {
            // reflect so that F(c + t) + F(c - t) = 1 holds exactly
            (1.0 - self.left_cdf(2.0 * self.mean - x)).clamp(0.5, 1.0)
        }
    }

    fn quantile(&self, u: f64) -> f64 {
        if self.degenerate() {
            return self.mean;
        }
        let p = self.cdf_lo + u.clamp(0.0, 1.0) * self.mass;
        (self.mean + self.sd * std_normal_quantile(p)).clamp(self.lo, self.hi)
    }
}

/// Symmetric triangular density on `[mode - half_width, mode + half_width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangular {
    mode: f64,
    half_width: f64,
}

impl Triangular {
    pub fn new(mode: f64, half_width: f64) -> Result<Self, String> {
        if !(half_width >= 0.0) || !half_width.is_finite() || !mode.is_finite() {
            return Err(format!("invalid triangular parameters ({mode}, {half_width})"));
        }
        Ok(Self { mode, half_width })
    }
}

impl Density for Triangular {
    fn kind(&self) -> &str {
        "triangular"
    }

    fn mode(&self) -> f64 {
        self.mode
    }

    fn support(&self) -> (f64, f64) {
        (self.mode - self.half_width, self.mode + self.half_width)
    }

    fn pdf(&self, x: f64) -> f64 {
        let h = self.half_width;
        if h == 0.0 {
            return 0.0;
        }
        ((h - (x - self.mode).abs()) / (h * h)).max(0.0)
    }

    fn cdf(&self, x: f64) -> f64 {
        let (c, h) = (self.mode, self.half_width);
        if h == 0.0 {
            return if x >= c { 1.0 } else { 0.0 };
        }
        if x <= c - h {
            0.0
        } else if x >= c + h {
            1.0
        } else if x <= c {
            let t = x - c + h;
            t * t / (2.0 * h * h)
        } else {
            let t = c + h - x;
            1.0 - t * t / (2.0 * h * h)
        }
    }

    fn quantile(&self, u: f64) -> f64 {
        let (c, h) = (self.mode, self.half_width);
        let u = u.clamp(0.0, 1.0);
        if u <= 0.5 {
            c - h + h * (2.0 * u).sqrt()
        } else {
            c + h - h * (2.0 * (1.0 - u)).sqrt()
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianParams {
    mean: f64,
    variance: f64,
    lo: f64,
    hi: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TriangularParams {
    mode: f64,
    half_width: f64,
}

pub fn density_registry() -> Registry<Arc<dyn Density>> {
    let mut r: Registry<Arc<dyn Density>> = Registry::new("disturbance");
    r.register("truncated-gaussian", |v| {
        let p: GaussianParams = params("truncated-gaussian", v)?;
        let d = TruncatedGaussian::new(p.mean, p.variance, p.lo, p.hi)
            .map_err(|e| RegistryError::params("truncated-gaussian", e))?;
        Ok(Arc::new(d))
    });
    r.register("triangular", |v| {
        let p: TriangularParams = params("triangular", v)?;
        let d = Triangular::new(p.mode, p.half_width)
            .map_err(|e| RegistryError::params("triangular", e))?;
        Ok(Arc::new(d))
    });
    r
}
