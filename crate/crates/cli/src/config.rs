//! JSON run configuration.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use omega_imc::abstraction::{density_registry, dynamics_registry, Density, SystemModel};
use omega_imc::dra::Dra;
use omega_imc::geometry::{align_partition_to_labels, LabeledRegion, Partition, PropSet, Rect};
use omega_imc::hoa::parse_dra_for_path;
use omega_imc::refinement::{scorer_registry, RefinementConfig, Scorer};
use omega_imc::verifier::{Comparison, SolverOptions, Spec};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelBlock,
    #[serde(default)]
    pub labels: LabelsBlock,
    #[serde(default)]
    pub partition: PartitionBlock,
    pub spec: SpecBlock,
    #[serde(default)]
    pub refinement: RefinementBlock,
    #[serde(default)]
    pub numerics: NumericsBlock,
    #[serde(default)]
    pub output: OutputBlock,
    /// Interval matrix file used instead of the abstraction.
    #[serde(default)]
    pub imc: Option<PathBuf>,
    #[serde(skip)]
    base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxSpec {
    pub fn rect(&self) -> Result<Rect, CliError> {
        Rect::new(self.lower.clone(), self.upper.clone()).map_err(|e| CliError::config(e.to_string()))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedParams {
    pub kind: String,
    #[serde(default)]
    pub params: Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub family: String,
    #[serde(default)]
    pub params: Value,
    pub domain: BoxSpec,
    /// One entry per dimension, or a single entry shared by all.
    pub disturbance: Vec<NamedParams>,
    #[serde(default = "default_true")]
    pub boundary_clipping: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    #[serde(default)]
    pub props: Vec<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelsBlock {
    /// Labeled boxes; the first box containing a point decides its labels.
    #[serde(default)]
    pub regions: Vec<RegionSpec>,
    /// Labels of points outside every box.
    #[serde(default)]
    pub default_props: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionBlock {
    pub grid: Vec<usize>,
}

impl Default for PartitionBlock {
    fn default() -> Self {
        Self { grid: vec![8, 8] }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecBlock {
    pub dra: PathBuf,
    pub comparison: Comparison,
    pub p_sat: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RefinementBlock {
    pub v_stop: f64,
    pub p_stop: f64,
    pub theta: f64,
    pub max_rounds: usize,
    pub max_cells: usize,
    pub scorer: String,
}

impl Default for RefinementBlock {
    fn default() -> Self {
        let c = RefinementConfig::default();
        Self {
            v_stop: c.v_stop,
            p_stop: c.p_stop,
            theta: c.theta,
            max_rounds: c.max_rounds,
            max_cells: c.max_cells,
            scorer: "spec-guided".into(),
        }
    }
}

impl RefinementBlock {
    pub fn loop_config(&self) -> RefinementConfig {
        RefinementConfig {
            v_stop: self.v_stop,
            p_stop: self.p_stop,
            theta: self.theta,
            max_rounds: self.max_rounds,
            max_cells: self.max_cells,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsBlock {
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// Worker threads; all available cores when absent.
    pub threads: Option<usize>,
}

impl Default for NumericsBlock {
    fn default() -> Self {
        let s = SolverOptions::default();
        Self {
            tol: s.tol,
            max_iters: s.max_iters,
            seed: 0,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub plot: bool,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self { plot: true }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(0.0..=1.0).contains(&self.spec.p_sat) {
            return Err(CliError::config(format!("p_sat {} not in [0,1]", self.spec.p_sat)));
        }
        self.refinement
            .loop_config()
            .validate()
            .map_err(|e| CliError::config(e.to_string()))?;
        if !(self.numerics.tol > 0.0) || self.numerics.max_iters == 0 {
            return Err(CliError::config("tol and max_iters must be positive"));
        }
        if !self.resolve(&self.spec.dra).is_file() {
            return Err(CliError::config(format!(
                "automaton file {} not found",
                self.resolve(&self.spec.dra).display()
            )));
        }
        if let Some(p) = &self.imc {
            if !self.resolve(p).is_file() {
                return Err(CliError::config(format!("IMC file {} not found", self.resolve(p).display())));
            }
        }
        Ok(())
    }

    /// Path relative to the directory of the configuration file.
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn imc_path(&self) -> Option<PathBuf> {
        self.imc.as_ref().map(|p| self.resolve(p))
    }

    pub fn build_model(&self) -> Result<SystemModel, CliError> {
        let m = &self.model;
        let domain = m.domain.rect()?;
        let dynamics = dynamics_registry()
            .create(&m.family, &m.params)
            .map_err(|e| CliError::config(e.to_string()))?;
        let dim = domain.dim();
        let densities = density_registry();
        let mut noise: Vec<Arc<dyn Density>> = Vec::with_capacity(dim);
        for d in &m.disturbance {
            noise.push(
                densities
                    .create(&d.kind, &d.params)
                    .map_err(|e| CliError::config(e.to_string()))?,
            );
        }
        if noise.len() == 1 && dim > 1 {
            noise = vec![noise[0].clone(); dim];
        }
        SystemModel::new(domain, dynamics, noise, m.boundary_clipping)
            .map_err(|e| CliError::config(e.to_string()))
    }

    /// Initial grid, cut along every label box so each cell has one label set.
    pub fn build_partition(&self) -> Result<Partition, CliError> {
        let domain = self.model.domain.rect()?;
        let regions = label_cover(&domain, &self.labels)?;
        align_partition_to_labels(&domain, &regions, &self.partition.grid)
            .map_err(|e| CliError::config(e.to_string()))
    }

    pub fn load_dra(&self) -> Result<Dra, CliError> {
        let path = self.resolve(&self.spec.dra);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        parse_dra_for_path(&path, &text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn spec(&self) -> Spec {
        Spec::new(self.spec.comparison, self.spec.p_sat)
    }

    pub fn solver(&self) -> SolverOptions {
        SolverOptions {
            tol: self.numerics.tol,
            max_iters: self.numerics.max_iters,
        }
    }

    pub fn scorer(&self) -> Result<Box<dyn Scorer>, CliError> {
        scorer_registry()
            .create(&self.refinement.scorer, &Value::Null)
            .map_err(|e| CliError::config(e.to_string()))
    }
}

/// Disjoint boxes covering `domain`, labeled by `labels`.
fn label_cover(domain: &Rect, labels: &LabelsBlock) -> Result<Vec<LabeledRegion>, CliError> {
    let n = domain.dim();
    let mut boxes = Vec::with_capacity(labels.regions.len());
    for r in &labels.regions {
        let rect = Rect::new(r.lower.clone(), r.upper.clone()).map_err(|e| CliError::config(e.to_string()))?;
        if rect.dim() != n {
            return Err(CliError::config("label region dimension differs from the domain"));
        }
        let props: PropSet = r.props.iter().cloned().collect();
        boxes.push((rect, props));
    }
    let default: PropSet = labels.default_props.iter().cloned().collect();
    let mut cuts: Vec<Vec<f64>> = (0..n)
        .map(|i| vec![domain.lower()[i], domain.upper()[i]])
        .collect();
    for (r, _) in &boxes {
        for i in 0..n {
            for v in [r.lower()[i], r.upper()[i]] {
                if v > domain.lower()[i] && v < domain.upper()[i] {
                    cuts[i].push(v);
                }
            }
        }
    }
    for c in &mut cuts {
        c.sort_by(f64::total_cmp);
        c.dedup();
    }
    let counts: Vec<usize> = cuts.iter().map(|c| c.len() - 1).collect();
    let total: usize = counts.iter().product();
    let mut idx = vec![0usize; n];
    let mut out = Vec::with_capacity(total);
    for _ in 0..total {
        let lower: Vec<f64> = (0..n).map(|i| cuts[i][idx[i]]).collect();
        let upper: Vec<f64> = (0..n).map(|i| cuts[i][idx[i] + 1]).collect();
        let rect = Rect::new(lower, upper).map_err(|e| CliError::config(e.to_string()))?;
        let c = rect.center();
        let props = boxes
            .iter()
            .find(|(b, _)| b.contains_point(&c))
            .map_or_else(|| default.clone(), |(_, p)| p.clone());
        out.push(LabeledRegion { rect, props });
        for i in (0..n).rev() {
            idx[i] += 1;
            if idx[i] < counts[i] {
                break;
            }
            idx[i] = 0;
        }
    }
    Ok(out)
}
