//! Scenario files: one JSON document describing the curve, the gauge and
//! every task parameter. Missing fields take the defaults below.

use std::path::PathBuf;
use std::sync::Arc;

use bonnesen_core::integral_geometry::AnnulusSide;
use bonnesen_core::io::{load_curve, load_gauge};
use bonnesen_core::{AngleGrid, FlowConfig, Gauge, Integrator, MCConfig, Point, SupportCurve};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub grid: usize,
    pub seed: u64,
    /// Optional; when present it must name the subcommand being run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    pub curve: CurveSpec,
    pub gauge: GaugeSpec,
    pub flow: FlowSettings,
    pub mc: McSettings,
    pub sweep: SweepSettings,
    pub audit: AuditSettings,
    pub output: OutputSettings,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            grid: bonnesen_core::DEFAULT_GRID,
            seed: 0,
            task: None,
            curve: CurveSpec::default(),
            gauge: GaugeSpec::Euclidean,
            flow: FlowSettings::default(),
            mc: McSettings::default(),
            sweep: SweepSettings::default(),
            audit: AuditSettings::default(),
            output: OutputSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Info,
    Flow,
    Annulus,
    Audit,
    Mc,
    Balance,
    Pipeline,
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    Random {
        /// Defaults to the scenario seed.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default = "default_harmonics")]
        max_harmonic: usize,
        #[serde(default = "default_curve_margin")]
        margin: f64,
    },
    /// The gauge's isoperimetrix scaled by `scale`.
    Isoperimetrix {
        #[serde(default = "one")]
        scale: f64,
    },
    File {
        path: PathBuf,
    },
}

impl Default for CurveSpec {
    fn default() -> Self {
        CurveSpec::Ellipse { a: 2.0, b: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GaugeSpec {
    Euclidean,
    /// `h~ = 1 + sum (a_m cos m t + b_m sin m t)` over even `m`.
    Harmonic {
        terms: Vec<(usize, f64, f64)>,
    },
    Random {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default = "default_gauge_harmonics")]
        max_even_harmonic: usize,
        #[serde(default = "default_gauge_margin")]
        margin: f64,
    },
    File {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}
fn default_harmonics() -> usize {
    6
}
fn default_curve_margin() -> f64 {
    0.3
}
fn default_gauge_harmonics() -> usize {
    4
}
fn default_gauge_margin() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowSettings {
    /// Stop once the area falls to this fraction of the initial area.
    pub area_fraction: f64,
    pub dt_safety: f64,
    pub max_steps: usize,
    pub record_every: usize,
    pub integrator: Integrator,
    pub keep_curves: bool,
}

impl Default for FlowSettings {
    fn default() -> Self {
        let c = FlowConfig::default();
        FlowSettings {
            area_fraction: 0.01,
            dt_safety: c.dt_safety,
            max_steps: c.max_steps,
            record_every: c.record_every,
            integrator: c.integrator,
            keep_curves: c.keep_curves,
        }
    }
}

impl FlowSettings {
    pub fn config(&self, initial_area: f64) -> Result<FlowConfig, CliError> {
        if !(self.area_fraction > 0.0 && self.area_fraction < 1.0) {
            return Err(CliError::Validation(format!(
                "flow.area_fraction must lie in (0, 1), got {}",
                self.area_fraction
            )));
        }
        Ok(FlowConfig {
            dt_safety: self.dt_safety,
            area_stop: self.area_fraction * initial_area,
            max_steps: self.max_steps,
            record_every: self.record_every,
            integrator: self.integrator,
            keep_curves: self.keep_curves,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum McKind {
    /// Poincare, Blaschke and Bonnesen integrands for `r T + c`.
    Translative,
    /// Euclidean rigid motions of `mc.partner` against the curve.
    Kinematic,
    Crofton,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McSettings {
    pub kind: McKind,
    pub n_samples: u64,
    pub probes: usize,
    pub pad_fraction: f64,
    pub workers: usize,
    /// Radius of the moving isoperimetrix; defaults to the midpoint of
    /// inradius and outradius.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    pub partner: CurveSpec,
    /// Number of classified samples written to `samples.csv`.
    pub dump: u64,
}

impl Default for McSettings {
    fn default() -> Self {
        let c = MCConfig::default();
        McSettings {
            kind: McKind::Translative,
            n_samples: c.n_samples,
            probes: c.probes,
            pad_fraction: c.pad_fraction,
            workers: c.workers,
            radius: None,
            partner: CurveSpec::Circle { radius: 1.0, center: [0.0, 0.0] },
            dump: 0,
        }
    }
}

impl McSettings {
    pub fn config(&self, seed: u64) -> MCConfig {
        MCConfig {
            n_samples: self.n_samples,
            seed,
            probes: self.probes,
            pad_fraction: self.pad_fraction,
            workers: self.workers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    /// Radius range; defaults to `[0, 1.25 r+]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    pub steps: usize,
    /// Also estimate each value by translative Monte Carlo.
    pub monte_carlo: bool,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings { r_min: None, r_max: None, steps: 41, monte_carlo: false }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditSettings {
    /// Defaults to the minimal-annulus center.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    pub format: Format,
}

/// Resolved inputs of a run.
pub struct Setup {
    pub grid: AngleGrid,
    pub curve: SupportCurve,
    pub gauge: Arc<Gauge>,
}

impl Scenario {
    pub fn setup(&self) -> Result<Setup, CliError> {
        let grid = AngleGrid::new(self.grid)?;
        let gauge = Arc::new(self.build_gauge(&grid)?);
        let curve = self.build_curve(&self.curve, &grid, &gauge)?;
        Ok(Setup { grid, curve, gauge })
    }

    pub fn build_curve(&self, spec: &CurveSpec, grid: &AngleGrid, gauge: &Gauge) -> Result<SupportCurve, CliError> {
        Ok(match spec {
            CurveSpec::Circle { radius, center } => SupportCurve::circle(grid, *radius, Point::from(*center))?,
            CurveSpec::Ellipse { a, b } => SupportCurve::ellipse(grid, *a, *b)?,
            CurveSpec::Random { seed, max_harmonic, margin } => {
                SupportCurve::random_convex(grid, seed.unwrap_or(self.seed), *max_harmonic, *margin)?
            }
            CurveSpec::Isoperimetrix { scale } => gauge.isoperimetrix(*scale)?,
            CurveSpec::File { path } => {
                let curve = load_curve(path)?;
                if curve.len() != grid.len() {
                    return Err(CliError::Validation(format!(
                        "{}: curve has {} samples but the scenario grid has {}",
                        path.display(),
                        curve.len(),
                        grid.len()
                    )));
                }
                curve
            }
        })
    }

    fn build_gauge(&self, grid: &AngleGrid) -> Result<Gauge, CliError> {
        Ok(match &self.gauge {
            GaugeSpec::Euclidean => Gauge::euclidean(grid),
            GaugeSpec::Harmonic { terms } => Gauge::from_harmonics(grid, terms)?,
            GaugeSpec::Random { seed, max_even_harmonic, margin } => {
                Gauge::random(grid, seed.unwrap_or(self.seed), *max_even_harmonic, *margin)?
            }
            GaugeSpec::File { path } => {
                let gauge = load_gauge(path)?;
                if gauge.grid().len() != grid.len() {
                    return Err(CliError::Validation(format!(
                        "{}: gauge has {} samples but the scenario grid has {}",
                        path.display(),
                        gauge.grid().len(),
                        grid.len()
                    )));
                }
                gauge
            }
        })
    }
}

pub fn side_name(side: AnnulusSide) -> &'static str {
    match side {
        AnnulusSide::Inner => "inner",
        AnnulusSide::Outer => "outer",
    }
}
