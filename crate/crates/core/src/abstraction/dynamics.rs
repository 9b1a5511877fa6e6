//! Nominal maps with mixed-monotone decomposition functions.

use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use crate::registry::{params, Registry, RegistryError};

/// Discrete-time nominal map `F` together with a decomposition `g` such that
/// `g(x, x) = F(x)`, `g` is nondecreasing in `x` and nonincreasing in `y`.
pub trait Dynamics: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn nominal(&self, x: &[f64]) -> Vec<f64>;
    fn decomposition(&self, x: &[f64], y: &[f64]) -> Vec<f64>;
}

/// Two-gene toggle switch:
/// `x1+ = x1 + (-a x1 + x2) dt`, `x2+ = x2 + (x1^2 / (x1^2 + 1) - b x2) dt`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BistableSwitch {
    #[serde(default = "BistableSwitch::default_a")]
    pub a: f64,
    #[serde(default = "BistableSwitch::default_b")]
    pub b: f64,
    #[serde(default = "BistableSwitch::default_dt")]
    pub dt: f64,
}

impl BistableSwitch {
    fn default_a() -> f64 {
        1.3
    }
    fn default_b() -> f64 {
        0.25
    }
    fn default_dt() -> f64 {
        0.05
    }

    fn hill(t: f64) -> f64 {
        let t2 = t * t;
        t2 / (t2 + 1.0)
    }
}

impl Default for BistableSwitch {
    fn default() -> Self {
        Self {
            a: 1.3,
            b: 0.25,
            dt: 0.05,
        }
    }
}

impl Dynamics for BistableSwitch {
    fn name(&self) -> &str {
        "bistable_switch"
    }

    fn dim(&self) -> usize {
        2
    }

    fn nominal(&self, x: &[f64]) -> Vec<f64> {
        vec![
            x[0] + (-self.a * x[0] + x[1]) * self.dt,
            x[1] + (Self::hill(x[0]) - self.b * x[1]) * self.dt,
        ]
    }

    fn decomposition(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        // hill = increasing part on [0, inf) + decreasing part on (-inf, 0]
        let h = Self::hill(x[0].max(0.0)) + Self::hill(y[0].min(0.0));
        vec![
            x[0] + (-self.a * x[0] + x[1]) * self.dt,
            x[1] + (h - self.b * x[1]) * self.dt,
        ]
    }
}

/// Affine map `x+ = A x + offset`, decomposed as `A+ x - A- y + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    a: Vec<Vec<f64>>,
    offset: Vec<f64>,
}

impl Linear {
    pub fn new(a: Vec<Vec<f64>>, offset: Option<Vec<f64>>) -> Result<Self, String> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return Err("matrix must be square and nonempty".into());
        }
        let offset = offset.unwrap_or_else(|| vec![0.0; n]);
        if offset.len() != n {
            return Err("offset length must match the matrix".into());
        }
        Ok(Self { a, offset })
    }
}

impl Dynamics for Linear {
    fn name(&self) -> &str {
        "linear"
    }

    fn dim(&self) -> usize {
        self.a.len()
    }

    fn nominal(&self, x: &[f64]) -> Vec<f64> {
        self.decomposition(x, x)
    }

    fn decomposition(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.offset)
            .map(|(row, c)| {
                row.iter()
                    .enumerate()
                    .map(|(k, &m)| if m >= 0.0 { m * x[k] } else { m * y[k] })
                    .sum::<f64>()
                    + c
            })
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearParams {
    a: Vec<Vec<f64>>,
    #[serde(default)]
    offset: Option<Vec<f64>>,
}

pub fn dynamics_registry() -> Registry<Arc<dyn Dynamics>> {
    let mut r: Registry<Arc<dyn Dynamics>> = Registry::new("dynamics");
    r.register("bistable_switch", |v| {
        let p: BistableSwitch = params("bistable_switch", v)?;
        Ok(Arc::new(p))
    });
    r.register("linear", |v| {
        let p: LinearParams = params("linear", v)?;
        let m = Linear::new(p.a, p.offset).map_err(|e| RegistryError::params("linear", e))?;
        Ok(Arc::new(m))
    });
    r
}
