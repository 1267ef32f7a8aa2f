//! Run configuration: a sectioned TOML file with defaults matching the
//! solver ledger, overridable from the command line. Unknown keys are
//! rejected so typos fail loudly, and every output embeds the fully
//! resolved configuration for reproducibility.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operator::{Mode, Operator, OperatorError};
use crate::pdesim::GridSpec;
use crate::reaction::{Reaction, ReactionError};
use crate::shooting::ShootSettings;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Invalid(String),
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Reaction(#[from] ReactionError),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub operator: OperatorConfig,
    #[serde(default)]
    pub reaction: ReactionConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateConfig>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Ok(toml::from_str(&text)?)
    }

    pub fn build_operator(&self) -> Result<Operator, ConfigError> {
        self.operator.build()
    }

    pub fn build_reaction(&self, op: &Operator) -> Result<Reaction, ConfigError> {
        self.reaction.build(op)
    }

    pub fn shoot_settings(&self) -> ShootSettings {
        self.solver.to_shoot_settings()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    #[serde(default = "default_mode")]
    pub mode: Mode,
    /// Required in cooperative and competitive modes; ignored by single_q.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default = "default_q")]
    pub q: f64,
}

fn default_mode() -> Mode {
    Mode::Cooperative
}

fn default_q() -> f64 {
    2.0
}

impl Default for OperatorConfig {
    fn default() -> Self {
        // The reference configuration used throughout the docs: p=4, q=2.
        Self { mode: Mode::Cooperative, p: Some(4.0), q: 2.0 }
    }
}

impl OperatorConfig {
    pub fn build(&self) -> Result<Operator, ConfigError> {
        let p = match (self.mode, self.p) {
            (Mode::SingleQ, _) => self.q,
            (_, Some(p)) => p,
            (mode, None) => {
                return Err(ConfigError::Invalid(format!(
                    "operator.p is required in {mode} mode"
                )))
            }
        };
        Ok(Operator::new(self.mode, p, self.q)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    PowerLogistic,
    ClassicalLogistic,
    Tabulated,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionConfig {
    #[serde(default = "default_family")]
    pub family: FamilyKind,
    /// Exponent of the power-logistic family; defaults to the critical
    /// power q' - 1 used by every figure configuration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_h")]
    pub h: f64,
    /// Two-column CSV (header `u,f`) for the tabulated family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

fn default_family() -> FamilyKind {
    FamilyKind::PowerLogistic
}

fn default_amplitude() -> f64 {
    1.0
}

fn default_h() -> f64 {
    1.0
}

impl Default for ReactionConfig {
    fn default() -> Self {
        Self {
            family: FamilyKind::PowerLogistic,
            gamma: None,
            amplitude: 1.0,
            h: 1.0,
            csv: None,
        }
    }
}

impl ReactionConfig {
    pub fn build(&self, op: &Operator) -> Result<Reaction, ConfigError> {
        let q_conj = op.q_conj();
        match self.family {
            FamilyKind::PowerLogistic => {
                let gamma = self.gamma.unwrap_or(q_conj - 1.0);
                Ok(Reaction::power_logistic(gamma, self.amplitude, self.h, q_conj)?)
            }
            FamilyKind::ClassicalLogistic => {
                Ok(Reaction::classical_logistic(self.amplitude, self.h, q_conj)?)
            }
            FamilyKind::Tabulated => {
                let path = self.csv.as_ref().ok_or_else(|| {
                    ConfigError::Invalid("reaction.csv is required for the tabulated family".into())
                })?;
                Ok(Reaction::tabulated_from_csv(path, q_conj)?)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "d_seed_delta")]
    pub seed_delta: f64,
    #[serde(default = "d_zero_tol")]
    pub zero_tol: f64,
    #[serde(default = "d_promote_tol")]
    pub promote_tol: f64,
    #[serde(default = "d_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "d_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "d_bisect_tol")]
    pub bisect_tol: f64,
    #[serde(default = "d_samples")]
    pub samples: usize,
    #[serde(default = "d_scan_points")]
    pub scan_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_cap: Option<f64>,
    #[serde(default = "d_max_doublings")]
    pub max_doublings: u32,
    #[serde(default = "d_tail_tol")]
    pub tail_tol: f64,
}

fn d_seed_delta() -> f64 {
    1e-12
}
fn d_zero_tol() -> f64 {
    1e-6
}
fn d_promote_tol() -> f64 {
    1e-4
}
fn d_abs_tol() -> f64 {
    1e-12
}
fn d_rel_tol() -> f64 {
    1e-10
}
fn d_bisect_tol() -> f64 {
    1e-4
}
fn d_samples() -> usize {
    2048
}
fn d_scan_points() -> usize {
    33
}
fn d_max_doublings() -> u32 {
    10
}
fn d_tail_tol() -> f64 {
    1e-6
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            seed_delta: d_seed_delta(),
            zero_tol: d_zero_tol(),
            promote_tol: d_promote_tol(),
            abs_tol: d_abs_tol(),
            rel_tol: d_rel_tol(),
            bisect_tol: d_bisect_tol(),
            samples: d_samples(),
            scan_points: d_scan_points(),
            scan_cap: None,
            max_doublings: d_max_doublings(),
            tail_tol: d_tail_tol(),
        }
    }
}

impl SolverConfig {
    pub fn to_shoot_settings(&self) -> ShootSettings {
        ShootSettings {
            seed_delta: self.seed_delta,
            zero_tol: self.zero_tol,
            promote_tol: self.promote_tol,
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            bisect_tol: self.bisect_tol,
            samples: self.samples,
            scan_points: self.scan_points,
            scan_cap: self.scan_cap,
            max_doublings: self.max_doublings,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Profile,
    Step,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default = "default_initial")]
    pub initial: InitialKind,
    /// Front speed used to reconstruct the initial profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

fn default_initial() -> InitialKind {
    InitialKind::Profile
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = r#"
[operator]
mode = "cooperative"
p = 4.0
q = 2.0

[reaction]
family = "power_logistic"
amplitude = 1.0
h = 1.0

[solver]
zero_tol = 1e-6

[grid]
x_min = -40.0
x_max = 40.0
nx = 4000
dt = 1.0
t_end = 6.0
snapshot_stride = 200

[simulate]
initial = "profile"
c = 2.5
"#;
        let cfg: RunConfig = toml::from_str(text).unwrap();
        let op = cfg.build_operator().unwrap();
        assert_eq!(op.p(), 4.0);
        let r = cfg.build_reaction(&op).unwrap();
        assert_eq!(r.h(), 1.0);
        assert_eq!(cfg.shoot_settings().zero_tol, 1e-6);
        assert_eq!(cfg.grid.unwrap().nx, 4000);
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = "[operator]\nq = 2.0\nbogus = 1\n";
        assert!(toml::from_str::<RunConfig>(text).is_err());
        let text = "[solver]\nzerotol = 1e-6\n";
        assert!(toml::from_str::<RunConfig>(text).is_err());
    }

    #[test]
    fn defaults_give_reference_configuration() {
        let cfg = RunConfig::default();
        let op = cfg.build_operator().unwrap();
        assert_eq!((op.p(), op.q()), (4.0, 2.0));
        let r = cfg.build_reaction(&op).unwrap();
        assert_eq!(r.slope_limits(), (1.0, 1.0));
    }

    #[test]
    fn single_q_ignores_p() {
        let text = "[operator]\nmode = \"single_q\"\nq = 2.0\n";
        let cfg: RunConfig = toml::from_str(text).unwrap();
        let op = cfg.build_operator().unwrap();
        assert_eq!(op.mode(), Mode::SingleQ);
        // Cooperative without p is rejected.
        let text = "[operator]\nmode = \"cooperative\"\nq = 2.0\n";
        let cfg: RunConfig = toml::from_str(text).unwrap();
        assert!(cfg.build_operator().is_err());
    }
}
