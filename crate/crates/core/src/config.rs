//! JSON configuration for problems and batch runs: grid and field sources,
//! solver settings, and the one-file-per-run config consumed by `run`.
//! There is deliberately no environment-variable configuration; everything
//! that affects a result lives in the config file or on the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldio::{read_scalar_field_on, read_sym_matrix_field_on};
use crate::grid::{MetricGrid, Polynomial, ScalarField, SymMatrixField};
use crate::linalg::SymMatrix;
use crate::solver::ProblemSpec;
use crate::symfun::OperatorSpec;

/// Where a scalar field comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSource {
    Constant(f64),
    Poly(Polynomial),
    File(PathBuf),
}

impl FieldSource {
    pub fn realize(&self, grid: &MetricGrid, base: &Path) -> Result<ScalarField> {
        match self {
            FieldSource::Constant(c) => Ok(ScalarField::constant(grid, *c)),
            FieldSource::Poly(p) => Ok(ScalarField::from_fn(grid, |x| p.eval(x))),
            FieldSource::File(path) => read_scalar_field_on(base.join(path), grid),
        }
    }
}

/// Where a symmetric-matrix field comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixSource {
    Zero,
    IdentityTimes(f64),
    File(PathBuf),
}

impl MatrixSource {
    pub fn realize(&self, grid: &MetricGrid, base: &Path) -> Result<SymMatrixField> {
        match self {
            MatrixSource::Zero => Ok(SymMatrixField::zeros(grid)),
            MatrixSource::IdentityTimes(c) => Ok(SymMatrixField::constant(
                grid,
                &SymMatrix::scaled_identity(grid.dim(), *c),
            )),
            MatrixSource::File(path) => read_sym_matrix_field_on(base.join(path), grid),
        }
    }
}

/// Metric choice for a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricConfig {
    Flat,
    Conformal(Polynomial),
    TensorFile(PathBuf),
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig::Flat
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridConfig {
    pub shape: Vec<usize>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    #[serde(default)]
    pub periodic: Option<Vec<bool>>,
    #[serde(default)]
    pub metric: MetricConfig,
}

impl GridConfig {
    pub fn realize(&self, base: &Path) -> Result<MetricGrid> {
        let periodic = self
            .periodic
            .clone()
            .unwrap_or_else(|| vec![false; self.shape.len()]);
        match &self.metric {
            MetricConfig::Flat => MetricGrid::flat(&self.shape, &self.lo, &self.hi, &periodic),
            MetricConfig::Conformal(w) => {
                MetricGrid::conformal(&self.shape, &self.lo, &self.hi, &periodic, w.clone())
            }
            MetricConfig::TensorFile(path) => {
                // bootstrap a flat grid to read the tensor payload, then
                // rebuild with the metric attached
                let flat = MetricGrid::flat(&self.shape, &self.lo, &self.hi, &periodic)?;
                let tensors = read_sym_matrix_field_on(base.join(path), &flat)?;
                let ts: Vec<SymMatrix> =
                    (0..flat.num_nodes()).map(|n| tensors.node(n)).collect();
                MetricGrid::from_tensors(&self.shape, &self.lo, &self.hi, &periodic, ts)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_method")]
    pub method: String,
}

fn default_tol() -> f64 {
    1e-10
}
fn default_max_iters() -> usize {
    50
}
fn default_steps() -> usize {
    8
}
fn default_method() -> String {
    "continuity".into()
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: default_tol(),
            max_iters: default_max_iters(),
            steps: default_steps(),
            method: default_method(),
        }
    }
}

/// A Dirichlet problem file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub operator: OperatorSpec,
    pub grid: GridConfig,
    #[serde(default = "default_zero_matrix")]
    pub chi: MatrixSource,
    pub psi: FieldSource,
    pub phi: FieldSource,
    pub ubar: FieldSource,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_zero_matrix() -> MatrixSource {
    MatrixSource::Zero
}

impl ProblemConfig {
    /// Parse a problem file; relative field paths resolve against the file's
    /// directory.
    pub fn load(path: impl AsRef<Path>) -> Result<(ProblemSpec, SolverConfig)> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let cfg: ProblemConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            msg: format!("{e} (line {}, column {})", e.line(), e.column()),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        cfg.realize(&base)
    }

    pub fn realize(&self, base: &Path) -> Result<(ProblemSpec, SolverConfig)> {
        let grid = self.grid.realize(base)?;
        let chi = self.chi.realize(&grid, base)?;
        let psi = self.psi.realize(&grid, base)?;
        let phi = self.phi.realize(&grid, base)?;
        let ubar = self.ubar.realize(&grid, base)?;
        let p = ProblemSpec::new(self.operator, grid, chi, psi, phi, ubar)?;
        Ok((p, self.solver.clone()))
    }
}

/// Parse an operator spec from either inline JSON or a file path.
pub fn load_operator(arg: &str) -> Result<OperatorSpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: arg.to_string(),
        msg: format!("{e} (line {}, column {})", e.line(), e.column()),
    })
}

/// One-file batch configuration for the `run` subcommand: the command name
/// plus the union of per-command parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(default)]
    pub spec: Option<OperatorSpec>,
    #[serde(default)]
    pub problem: Option<PathBuf>,
    #[serde(default)]
    pub conditions: Option<Vec<String>>,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub mu: Option<Vec<f64>>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_samples() -> usize {
    10_000
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            msg: format!("{e} (line {}, column {})", e.line(), e.column()),
        })
    }
}
