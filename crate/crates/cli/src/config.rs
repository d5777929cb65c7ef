//! Run configuration: a strict JSON document describing the stack, the
//! sampling grids and the per-command settings.

use serde::{Deserialize, Serialize};
use stratqed::green::{AzimuthalFrame, GreenOptions, GreenPartLabel};
use stratqed::numerics::Rect;
use stratqed::{DispersionModel, Layer, LayerStack, Polarization, QuadratureSpec, Units};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    /// Malformed document or wrong field type; `path` is the offending field.
    #[error("config parse error at `{path}` (line {line}, column {column}): {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("invalid config:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Grid {
    Values(Vec<f64>),
    Linspace { start: f64, stop: f64, num: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Linspace { start, stop, num } => match num {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
            },
        }
    }

    fn check(&self, name: &str, problems: &mut Vec<String>) -> Vec<f64> {
        let pts = self.points();
        if pts.is_empty() {
            problems.push(format!("{name}: grid is empty"));
        }
        if pts.iter().any(|x| !x.is_finite()) {
            problems.push(format!("{name}: grid values must be finite"));
        }
        if pts.windows(2).any(|w| !(w[1] > w[0])) {
            problems.push(format!("{name}: grid must be strictly increasing"));
        }
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackConfig {
    pub left: DispersionModel,
    #[serde(default)]
    pub layers: Vec<Layer>,
    pub right: DispersionModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenRequest {
    pub field: [f64; 3],
    pub source: [f64; 3],
    /// One decomposition part; the total tensor when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<GreenPartLabel>,
    #[serde(default)]
    pub frame: AzimuthalFrame,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl From<Window> for Rect {
    fn from(w: Window) -> Rect {
        Rect { re_min: w.re_min, re_max: w.re_max, im_min: w.im_min, im_max: w.im_max }
    }
}

/// How the pole window is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowUnits {
    /// Absolute transverse wavenumber [1/m].
    #[default]
    Absolute,
    /// Multiples of the vacuum wavenumber `k0(omega)`, so one window serves a whole frequency grid.
    VacuumWavenumber,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleRequest {
    /// Search rectangle in the complex lambda plane.
    pub window: Window,
    #[serde(default)]
    pub window_units: WindowUnits,
    #[serde(default = "default_pole_tol")]
    pub tol: f64,
}

impl PoleRequest {
    pub fn window_at(&self, omega: f64, units: Units) -> Rect {
        let f = match self.window_units {
            WindowUnits::Absolute => 1.0,
            WindowUnits::VacuumWavenumber => units.k0(omega),
        };
        let w = self.window;
        Rect { re_min: w.re_min * f, re_max: w.re_max * f, im_min: w.im_min * f, im_max: w.im_max * f }
    }
}

fn default_pole_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSettings {
    /// Random point pairs per Green-tensor check.
    #[serde(default = "default_pairs")]
    pub pairs: usize,
}

fn default_pairs() -> usize {
    4
}

impl Default for CheckSettings {
    fn default() -> Self {
        Self { pairs: default_pairs() }
    }
}

fn default_pols() -> Vec<Polarization> {
    Polarization::BOTH.to_vec()
}

fn default_n_max() -> u32 {
    60
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub units: Units,
    pub stack: StackConfig,
    /// Angular frequencies [rad/s].
    pub omega: Grid,
    /// Transverse wavenumbers [1/m]; exclusive with `angle_deg`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Grid>,
    /// Incidence angles in degrees, mapped to `lambda = n k0 sin(theta)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_deg: Option<Grid>,
    /// Refractive index `n` for the angle mapping; defaults to `Re sqrt(eps_left(omega))`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exterior_index: Option<f64>,
    #[serde(default = "default_pols")]
    pub polarizations: Vec<Polarization>,
    #[serde(default = "default_n_max")]
    pub n_max: u32,
    /// Spectral quadrature controls; scaled to the stack when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSpec>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub green: Option<GreenRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<PoleRequest>,
    #[serde(default)]
    pub check: CheckSettings,
}

/// Transverse sample of a spectrum row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPoint {
    pub lambda: f64,
    pub angle_deg: Option<f64>,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        ConfigError::Parse { path, line: inner.line(), column: inner.column(), message: inner.to_string() }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut problems = Vec::new();
        let stack = self.layer_stack_unchecked();
        if let Err(e) = stack.validate() {
            problems.push(e.to_string());
        }
        let omegas = self.omega.check("omega", &mut problems);
        if omegas.iter().any(|&w| !(w > 0.0)) {
            problems.push("omega: frequencies must be > 0".into());
        }
        match (&self.lambda, &self.angle_deg) {
            (Some(_), Some(_)) => problems.push("give either `lambda` or `angle_deg`, not both".into()),
            (Some(g), None) => {
                if g.check("lambda", &mut problems).iter().any(|&l| l < 0.0) {
                    problems.push("lambda: values must be >= 0".into());
                }
            }
            (None, Some(g)) => {
                if g.check("angle_deg", &mut problems).iter().any(|&a| !(0.0..90.0).contains(&a)) {
                    problems.push("angle_deg: angles must lie in [0, 90)".into());
                }
            }
            (None, None) => {}
        }
        if let Some(n) = self.exterior_index {
            if !(n > 0.0 && n.is_finite()) {
                problems.push(format!("exterior_index must be finite and > 0, got {n}"));
            }
            if self.angle_deg.is_none() {
                problems.push("exterior_index is only used together with angle_deg".into());
            }
        }
        if self.polarizations.is_empty() {
            problems.push("polarizations: at least one is required".into());
        }
        let mut seen = self.polarizations.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.polarizations.len() {
            problems.push("polarizations: duplicates are not allowed".into());
        }
        if let Some(q) = &self.quadrature {
            if let Err(e) = q.validate() {
                problems.push(format!("quadrature: {e}"));
            }
        }
        if let Some(g) = &self.green {
            if g.field.iter().chain(&g.source).any(|x| !x.is_finite()) {
                problems.push("green: points must be finite".into());
            }
        }
        if let Some(p) = &self.poles {
            let w = p.window;
            if !(w.re_min < w.re_max && w.im_min < w.im_max) {
                problems.push("poles.window: need re_min < re_max and im_min < im_max".into());
            }
            if !(p.tol > 0.0) {
                problems.push("poles.tol must be > 0".into());
            }
        }
        if self.check.pairs == 0 {
            problems.push("check.pairs must be >= 1".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(problems))
        }
    }

    fn layer_stack_unchecked(&self) -> LayerStack {
        LayerStack {
            left: self.stack.left.clone(),
            layers: self.stack.layers.clone(),
            right: self.stack.right.clone(),
            units: self.units,
        }
    }

    pub fn layer_stack(&self) -> stratqed::Result<LayerStack> {
        let s = self.layer_stack_unchecked();
        s.validate()?;
        Ok(s)
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.omega.points()
    }

    /// Transverse samples at one frequency. Angles use `lambda = n k0 sin(theta)`.
    pub fn lambda_points(&self, omega: f64) -> stratqed::Result<Vec<LambdaPoint>> {
        if let Some(g) = &self.lambda {
            return Ok(g.points().into_iter().map(|lambda| LambdaPoint { lambda, angle_deg: None }).collect());
        }
        let Some(g) = &self.angle_deg else {
            return Err(stratqed::Error::Precondition("config needs a `lambda` or `angle_deg` grid".into()));
        };
        let n = match self.exterior_index {
            Some(n) => n,
            None => self.stack.left.permittivity(omega)?.eps.sqrt().re,
        };
        let k = n * self.units.k0(omega);
        Ok(g.points()
            .into_iter()
            .map(|a| LambdaPoint { lambda: k * a.to_radians().sin(), angle_deg: Some(a) })
            .collect())
    }

    pub fn green_options(&self, stack: &LayerStack, omega: f64) -> stratqed::Result<GreenOptions> {
        let mut o = GreenOptions::for_stack(stack, omega)?;
        if let Some(q) = self.quadrature {
            o.quad = q;
        }
        o.n_max = self.n_max;
        if let Some(g) = &self.green {
            o.frame = g.frame;
        }
        Ok(o)
    }

    /// Canonical JSON text with every default filled in.
    pub fn to_normalized_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
