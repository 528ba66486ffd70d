//! Strict JSON run configuration. Unknown keys are rejected and every
//! numeric range is validated before a simulation is built.

use std::path::Path;

use serde::Deserialize;

use crate::dynamics::{InitialCondition, SimulationConfig, SolverKind};
use crate::grid::Grid;
use crate::lagrangian::BarotropicLaw;

/// Configuration problem: bad file, bad JSON, or bad values. Maps to exit
/// code 1 in the binary.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub grid: GridSection,
    pub law: LawSection,
    pub time: TimeSection,
    pub solver: String,
    pub ic: IcSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    #[serde(default)]
    pub length: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSection {
    pub kind: String,
    pub kappa: f64,
    pub gamma: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_stride")]
    pub output_stride: usize,
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcSection {
    pub name: String,
    #[serde(default)]
    pub params: Option<serde_json::Value>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct AcousticParams {
    amplitude: Option<f64>,
    mode: Option<u32>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct GaussianParams {
    amplitude: Option<f64>,
    width: Option<f64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConstantParams {
    rho: Option<f64>,
    u: Option<f64>,
}

impl RunConfigFile {
    pub fn load(path: &Path) -> Result<RunConfigFile, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError(format!("cannot read config file {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))
    }

    /// Validates ranges and builds the simulation description; `solver`
    /// overrides the file when given.
    pub fn build(&self, solver: Option<&str>) -> Result<SimulationConfig, ConfigError> {
        if self.grid.n < 8 || self.grid.n % 2 != 0 {
            return Err(ConfigError(format!(
                "grid.n must be even and at least 8, got {}",
                self.grid.n
            )));
        }
        let length = self.grid.length.unwrap_or(std::f64::consts::TAU);
        if !(length > 0.0 && length.is_finite()) {
            return Err(ConfigError(format!("grid.length must be positive, got {length}")));
        }
        let grid = Grid::new(self.grid.n, length);

        if self.law.kind != "polytropic" {
            return Err(ConfigError(format!(
                "unknown law kind '{}' (expected 'polytropic')",
                self.law.kind
            )));
        }
        if !(self.law.kappa > 0.0) {
            return Err(ConfigError(format!(
                "law.kappa must be positive, got {}",
                self.law.kappa
            )));
        }
        if !(self.law.gamma > 1.0) {
            return Err(ConfigError(format!(
                "law.gamma must exceed 1, got {}",
                self.law.gamma
            )));
        }
        let law = BarotropicLaw::polytropic(self.law.kappa, self.law.gamma);

        if !(self.time.dt > 0.0 && self.time.dt.is_finite()) {
            return Err(ConfigError(format!("time.dt must be positive, got {}", self.time.dt)));
        }
        if !(self.time.t_end > 0.0 && self.time.t_end.is_finite()) {
            return Err(ConfigError(format!(
                "time.t_end must be positive, got {}",
                self.time.t_end
            )));
        }
        if self.time.output_stride < 1 {
            return Err(ConfigError("time.output_stride must be at least 1".into()));
        }

        let solver_name = solver.unwrap_or(&self.solver);
        let solver = SolverKind::parse(solver_name).ok_or_else(|| {
            ConfigError(format!(
                "unknown solver '{solver_name}' (expected material, euler_poincare, lie_poisson, or flux_form)"
            ))
        })?;

        let ic = self.build_ic(grid)?;

        Ok(
            SimulationConfig::new(grid, law, self.time.dt, self.time.t_end, solver, ic)
                .with_output_stride(self.time.output_stride),
        )
    }

    fn build_ic(&self, grid: Grid) -> Result<InitialCondition, ConfigError> {
        let params = self.ic.params.clone().unwrap_or(serde_json::Value::Null);
        let parse_params = |what: &str| -> Result<serde_json::Value, ConfigError> {
            if params.is_null() || params.is_object() {
                Ok(if params.is_null() {
                    serde_json::json!({})
                } else {
                    params.clone()
                })
            } else {
                Err(ConfigError(format!("ic.params for '{what}' must be an object")))
            }
        };
        match self.ic.name.as_str() {
            "acoustic" => {
                let p: AcousticParams = serde_json::from_value(parse_params("acoustic")?)
                    .map_err(|e| ConfigError(format!("bad acoustic params: {e}")))?;
                let amplitude = p.amplitude.unwrap_or(0.01);
                if !(amplitude.is_finite() && amplitude.abs() < 1.0) {
                    return Err(ConfigError(format!(
                        "acoustic amplitude must satisfy |A| < 1, got {amplitude}"
                    )));
                }
                Ok(InitialCondition::Acoustic {
                    amplitude,
                    mode: p.mode.unwrap_or(1).max(1),
                })
            }
            "gaussian_bump" => {
                let p: GaussianParams = serde_json::from_value(parse_params("gaussian_bump")?)
                    .map_err(|e| ConfigError(format!("bad gaussian_bump params: {e}")))?;
                let width = p.width.unwrap_or(grid.length() / 10.0);
                if !(width > 0.0 && width.is_finite()) {
                    return Err(ConfigError(format!("gaussian width must be positive, got {width}")));
                }
                let amplitude = p.amplitude.unwrap_or(0.01);
                if !(amplitude.is_finite() && amplitude > -1.0) {
                    return Err(ConfigError(format!(
                        "gaussian amplitude must exceed -1, got {amplitude}"
                    )));
                }
                Ok(InitialCondition::GaussianBump { amplitude, width })
            }
            "constant" => {
                let p: ConstantParams = serde_json::from_value(parse_params("constant")?)
                    .map_err(|e| ConfigError(format!("bad constant params: {e}")))?;
                let rho = p.rho.unwrap_or(1.0);
                if !(rho > 0.0 && rho.is_finite()) {
                    return Err(ConfigError(format!("constant rho must be positive, got {rho}")));
                }
                Ok(InitialCondition::Constant {
                    rho,
                    u: p.u.unwrap_or(0.0),
                })
            }
            other => Err(ConfigError(format!(
                "unknown initial condition '{other}' (expected acoustic, gaussian_bump, or constant)"
            ))),
        }
    }
}
