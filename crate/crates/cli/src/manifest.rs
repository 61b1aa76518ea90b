//! JSON run and sweep manifests.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use wcd_core::analysis::{KineticSweepConfig, MhdSweepConfig, PlateauConfig};
use wcd_core::scheme::DEFAULT_CFL;
use wcd_core::wcd::DEFAULT_SAFETY_MARGIN;
use wcd_core::{
    BoundaryCondition, CoefficientMode, CubicModel, FieldState, GridSpec, Model, RiemannData,
    RunConfig, SchemeVariant, SystemModel, WcdConfig,
};

/// Parse a JSON document, reporting the path of the offending key on failure.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        anyhow::anyhow!("invalid manifest at key `{path}`: {}", e.inner())
    })
}

pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn one() -> f64 {
    1.0
}

fn default_tau() -> f64 {
    0.1
}

fn default_cfl() -> f64 {
    DEFAULT_CFL
}

fn default_margin() -> f64 {
    DEFAULT_SAFETY_MARGIN
}

fn default_x_max() -> f64 {
    1.0
}

fn vdw_gas_constant() -> f64 {
    wcd_core::models::VDW_GAS_CONSTANT
}

fn vdw_temperature() -> f64 {
    wcd_core::models::VDW_TEMPERATURE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Cubic {
        #[serde(default = "one")]
        delta: f64,
    },
    VdwElasticity {
        #[serde(default = "one")]
        capillarity: f64,
        #[serde(default = "vdw_gas_constant")]
        gas_constant: f64,
        #[serde(default = "vdw_temperature")]
        temperature: f64,
    },
    HallMhd {
        #[serde(default = "one")]
        alpha: f64,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<Model> {
        Ok(match *self {
            ModelSpec::Cubic { delta } => Model::Cubic(CubicModel::new(delta)?),
            ModelSpec::VdwElasticity {
                capillarity,
                gas_constant,
                temperature,
            } => Model::System(SystemModel::vdw_elasticity_with(
                capillarity,
                gas_constant,
                temperature,
            )),
            ModelSpec::HallMhd { alpha } => Model::System(SystemModel::hall_mhd(alpha)),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundarySpec {
    #[default]
    Outflow,
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridManifest {
    #[serde(default)]
    pub x_min: f64,
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    pub n_cells: usize,
    #[serde(default)]
    pub boundary: BoundarySpec,
}

impl GridManifest {
    pub fn build(&self) -> Result<GridSpec> {
        let bc = match self.boundary {
            BoundarySpec::Outflow => BoundaryCondition::OutflowExtrapolation,
            BoundarySpec::Periodic => BoundaryCondition::Periodic,
        };
        Ok(GridSpec::new(self.x_min, self.x_max, self.n_cells, bc)?)
    }
}

/// Initial data: a single jump, a single jump in polar form (angles in
/// multiples of pi), or a table interpolated linearly between its abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSpec {
    Riemann {
        left: Vec<f64>,
        right: Vec<f64>,
        jump: f64,
    },
    Polar {
        r_left: f64,
        theta_left_pi: f64,
        r_right: f64,
        theta_right_pi: f64,
        jump: f64,
    },
    Table {
        x: Vec<f64>,
        /// One row of component values per abscissa.
        values: Vec<Vec<f64>>,
    },
}

impl InitialSpec {
    pub fn build(&self, grid: GridSpec, dim: usize) -> Result<FieldState> {
        match self {
            InitialSpec::Riemann { left, right, jump } => {
                let data = RiemannData::new(left.clone(), right.clone(), *jump)?;
                Ok(FieldState::riemann(grid, &data)?)
            }
            InitialSpec::Polar {
                r_left,
                theta_left_pi,
                r_right,
                theta_right_pi,
                jump,
            } => {
                let data = RiemannData::polar(
                    *r_left,
                    theta_left_pi * PI,
                    *r_right,
                    theta_right_pi * PI,
                    *jump,
                );
                Ok(FieldState::riemann(grid, &data)?)
            }
            InitialSpec::Table { x, values } => {
                if x.len() < 2 || x.len() != values.len() {
                    bail!("table needs at least two abscissae and one row per abscissa");
                }
                if x.windows(2).any(|w| !(w[1] > w[0])) {
                    bail!("table abscissae must increase strictly");
                }
                if values.iter().any(|row| row.len() != dim) {
                    bail!("every table row needs {dim} components");
                }
                Ok(FieldState::from_fn(grid, dim, |xi| {
                    interpolate_row(x, values, xi)
                })?)
            }
        }
    }
}

/// Linear interpolation with constant extension outside the table.
fn interpolate_row(x: &[f64], values: &[Vec<f64>], xi: f64) -> Vec<f64> {
    let k = x.partition_point(|&v| v <= xi);
    if k == 0 {
        return values[0].clone();
    }
    if k == x.len() {
        return values[k - 1].clone();
    }
    let t = (xi - x[k - 1]) / (x[k] - x[k - 1]);
    values[k - 1]
        .iter()
        .zip(&values[k])
        .map(|(a, b)| a + t * (b - a))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantSpec {
    #[default]
    Standard,
    EntropyConservative,
}

/// `adaptive` or `fixed:<value>`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CoefficientSpec {
    #[default]
    Adaptive,
    Fixed(f64),
}

impl TryFrom<String> for CoefficientSpec {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl std::str::FromStr for CoefficientSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "adaptive" {
            return Ok(CoefficientSpec::Adaptive);
        }
        match s.strip_prefix("fixed:").map(str::parse::<f64>) {
            Some(Ok(c)) => Ok(CoefficientSpec::Fixed(c)),
            _ => Err(format!("expected `adaptive` or `fixed:<value>`, got `{s}`")),
        }
    }
}

impl fmt::Display for CoefficientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientSpec::Adaptive => write!(f, "adaptive"),
            CoefficientSpec::Fixed(c) => write!(f, "fixed:{c}"),
        }
    }
}

impl From<CoefficientSpec> for String {
    fn from(c: CoefficientSpec) -> String {
        c.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WcdManifest {
    /// Stencil half-width; the scheme has order `2p`.
    pub p: usize,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default)]
    pub c: CoefficientSpec,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

impl WcdManifest {
    pub fn build(&self) -> WcdConfig {
        WcdConfig {
            tau: self.tau,
            p: self.p,
            mode: match self.c {
                CoefficientSpec::Adaptive => CoefficientMode::Adaptive,
                CoefficientSpec::Fixed(c) => CoefficientMode::Fixed(c),
            },
            safety_margin: self.margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub model: ModelSpec,
    pub grid: GridManifest,
    pub initial: InitialSpec,
    #[serde(default)]
    pub scheme: VariantSpec,
    pub wcd: WcdManifest,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_end: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default)]
    pub max_steps: Option<usize>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl RunManifest {
    pub fn build(&self) -> Result<RunConfig> {
        let model = self.model.build()?;
        let grid = self.grid.build()?;
        let initial = self.initial.build(grid, model.dim())?;
        let mut cfg = RunConfig::new(model, initial, self.wcd.build(), self.t_end);
        cfg.variant = match self.scheme {
            VariantSpec::Standard => SchemeVariant::StandardWcd,
            VariantSpec::EntropyConservative => SchemeVariant::EntropyConservativeWcd,
        };
        cfg.cfl = self.cfl;
        cfg.snapshot_times = self.snapshot_times.clone();
        cfg.max_steps = self.max_steps;
        Ok(cfg)
    }
}

/// Explicit sample list or an evenly (or geometrically) spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Samples {
    List(Vec<f64>),
    Range {
        from: f64,
        to: f64,
        count: usize,
        #[serde(default)]
        spacing: Spacing,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Linear,
    Geometric,
}

impl Samples {
    pub fn values(&self) -> Result<Vec<f64>> {
        match *self {
            Samples::List(ref v) => Ok(v.clone()),
            Samples::Range {
                from,
                to,
                count,
                spacing,
            } => {
                if count == 0 {
                    return Ok(Vec::new());
                }
                if count == 1 {
                    return Ok(vec![from]);
                }
                let last = (count - 1) as f64;
                match spacing {
                    Spacing::Linear => Ok((0..count)
                        .map(|k| from + (to - from) * k as f64 / last)
                        .collect()),
                    Spacing::Geometric => {
                        if !(from > 0.0 && to > 0.0) {
                            bail!("geometric spacing needs positive end points");
                        }
                        let ratio = (to / from).ln();
                        Ok((0..count)
                            .map(|k| from * (ratio * k as f64 / last).exp())
                            .collect())
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateauManifest {
    pub flat_tol: f64,
    pub drift_tol: f64,
    pub min_width: usize,
}

impl From<&PlateauManifest> for PlateauConfig {
    fn from(p: &PlateauManifest) -> Self {
        PlateauConfig {
            flat_tol: p.flat_tol,
            drift_tol: p.drift_tol,
            min_width: p.min_width,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SweepManifest {
    /// Cubic kinetic function: one CSV per dispersion ratio.
    Kinetic {
        deltas: Vec<f64>,
        u_left: Samples,
        u_right: f64,
        n_cells: usize,
        p: Option<usize>,
        tau: Option<f64>,
        jump: Option<f64>,
        cfl: Option<f64>,
        t_end: Option<f64>,
        plateau: Option<PlateauManifest>,
        #[serde(default)]
        output_dir: Option<PathBuf>,
    },
    /// Hall-MHD entropy dissipation: one CSV per Hall parameter.
    Mhd {
        alphas: Vec<f64>,
        r_left: Samples,
        n_cells: usize,
        p: Option<usize>,
        tau: Option<f64>,
        right_ratio: Option<f64>,
        t_ref: Option<f64>,
        cfl: Option<f64>,
        plateau: Option<PlateauManifest>,
        #[serde(default)]
        output_dir: Option<PathBuf>,
    },
}

impl SweepManifest {
    pub fn output_dir(&self) -> Option<&Path> {
        match self {
            SweepManifest::Kinetic { output_dir, .. } | SweepManifest::Mhd { output_dir, .. } => {
                output_dir.as_deref()
            }
        }
    }

    pub fn kinetic_configs(&self) -> Result<Vec<KineticSweepConfig>> {
        let SweepManifest::Kinetic {
            deltas,
            u_left,
            u_right,
            n_cells,
            p,
            tau,
            jump,
            cfl,
            t_end,
            plateau,
            ..
        } = self
        else {
            bail!("not a kinetic sweep");
        };
        let u_left = u_left.values()?;
        if u_left.is_empty() {
            bail!("u_left range is empty");
        }
        if deltas.is_empty() {
            bail!("deltas is empty");
        }
        Ok(deltas
            .iter()
            .map(|&d| {
                let mut c = KineticSweepConfig::new(d, u_left.clone(), *u_right, *n_cells);
                c.p = p.unwrap_or(c.p);
                c.tau = tau.unwrap_or(c.tau);
                c.jump_location = jump.unwrap_or(c.jump_location);
                c.cfl = cfl.unwrap_or(c.cfl);
                c.t_end = t_end.or(c.t_end);
                if let Some(pl) = plateau {
                    c.plateau = pl.into();
                }
                c
            })
            .collect())
    }

    pub fn mhd_configs(&self) -> Result<Vec<MhdSweepConfig>> {
        let SweepManifest::Mhd {
            alphas,
            r_left,
            n_cells,
            p,
            tau,
            right_ratio,
            t_ref,
            cfl,
            plateau,
            ..
        } = self
        else {
            bail!("not an MHD sweep");
        };
        let r_left = r_left.values()?;
        if r_left.is_empty() {
            bail!("r_left range is empty");
        }
        if alphas.is_empty() {
            bail!("alphas is empty");
        }
        Ok(alphas
            .iter()
            .map(|&a| {
                let mut c = MhdSweepConfig::new(a, r_left.clone(), *n_cells);
                c.p = p.unwrap_or(c.p);
                c.tau = tau.unwrap_or(c.tau);
                c.right_ratio = right_ratio.unwrap_or(c.right_ratio);
                c.t_ref = t_ref.unwrap_or(c.t_ref);
                c.cfl = cfl.unwrap_or(c.cfl);
                if let Some(pl) = plateau {
                    c.plateau = pl.into();
                }
                c
            })
            .collect())
    }
}
