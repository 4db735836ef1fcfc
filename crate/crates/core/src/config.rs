//! Run configuration: JSON schema, validation and defaults.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::expr;
use crate::ode::{IntegratorConfig, Method};
use crate::scenario::{BuiltinScenario, Scenario, ALL_CHECKS};

fn default_samples() -> usize {
    2001
}

fn default_hbar() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub omega_sq: String,
    pub force: String,
    pub t0: f64,
    pub t1: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(default)]
    pub method: Option<Method>,
    #[serde(default)]
    pub rtol: Option<f64>,
    #[serde(default)]
    pub atol: Option<f64>,
    #[serde(default)]
    pub h0: Option<f64>,
    #[serde(default)]
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedsSection {
    #[serde(default)]
    pub q0: f64,
    #[serde(default)]
    pub p0: f64,
    /// [re, im]
    #[serde(default = "zero_pair")]
    pub beta0: [f64; 2],
    #[serde(default = "unit_pair")]
    pub beta_dot0: [f64; 2],
    #[serde(default)]
    pub gamma0: Option<[f64; 3]>,
    #[serde(default)]
    pub sigma0: Option<[f64; 2]>,
    #[serde(default)]
    pub sigma_dot0: Option<[f64; 2]>,
    #[serde(default)]
    pub w_sq: Option<f64>,
    #[serde(default)]
    pub rho0: Option<f64>,
    #[serde(default)]
    pub rho_dot0: Option<f64>,
}

fn zero_pair() -> [f64; 2] {
    [0.0, 0.0]
}

fn unit_pair() -> [f64; 2] {
    [1.0, 0.0]
}

impl Default for SeedsSection {
    fn default() -> Self {
        SeedsSection {
            q0: 1.0,
            p0: 0.0,
            beta0: zero_pair(),
            beta_dot0: unit_pair(),
            gamma0: None,
            sigma0: None,
            sigma_dot0: None,
            w_sq: None,
            rho0: None,
            rho_dot0: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub omega_sq: String,
    pub force: String,
    pub t0: f64,
    pub t1: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub integrator: Option<IntegratorSection>,
    #[serde(default)]
    pub seeds: Option<SeedsSection>,
    #[serde(default)]
    pub checks: Option<Vec<String>>,
    #[serde(default)]
    pub thresholds: Option<BTreeMap<String, f64>>,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

/// Validated configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub omega_sq: String,
    pub force: String,
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    pub integrator: IntegratorConfig,
    pub seeds: SeedsSection,
    pub checks: Vec<String>,
    pub thresholds: BTreeMap<String, f64>,
    pub hbar: f64,
}

/// Default tolerance per check.
pub fn default_threshold(check: &str) -> f64 {
    match check {
        "linear-drift" | "quadratic-drift" | "takayama-agreement" => 1e-7,
        "wronskian" => 1e-9,
        "first-integral" => 1e-7,
        "product-relation" => 1e-7,
        "coefficient-closure" => 1e-6,
        "ermakov" => 1e-7,
        "quantum-invariance" => 1e-8,
        "quantum-product" => 1e-8,
        _ => 1e-7,
    }
}

impl RunConfig {
    pub fn from_raw(raw: RawConfig) -> Result<RunConfig, Error> {
        // expression fields must parse
        expr::parse(&raw.omega_sq).map_err(|e| {
            Error::Config(format!("field 'omega_sq': {e}"))
        })?;
        expr::parse(&raw.force).map_err(|e| Error::Config(format!("field 'force': {e}")))?;
        if !(raw.t1 > raw.t0) {
            return Err(Error::Config("field 't1': must be greater than t0".into()));
        }
        if raw.samples < 2 {
            return Err(Error::Config("field 'samples': must be >= 2".into()));
        }
        if !(raw.hbar > 0.0) {
            return Err(Error::Config("field 'hbar': must be > 0".into()));
        }

        let mut integrator = IntegratorConfig::default();
        if let Some(sec) = &raw.integrator {
            if let Some(m) = sec.method {
                integrator.method = m;
            }
            if let Some(v) = sec.rtol {
                integrator.rtol = v;
            }
            if let Some(v) = sec.atol {
                integrator.atol = v;
            }
            if let Some(v) = sec.h0 {
                integrator.h0 = v;
            }
            if let Some(v) = sec.max_steps {
                integrator.max_steps = v;
            }
        }
        integrator.validate()?;

        let checks = match raw.checks {
            Some(list) => {
                for name in &list {
                    if !ALL_CHECKS.contains(&name.as_str()) {
                        return Err(Error::Config(format!(
                            "field 'checks': unknown check '{name}'"
                        )));
                    }
                }
                list
            }
            None => default_checks_for(&raw),
        };

        let mut thresholds = BTreeMap::new();
        for name in &checks {
            thresholds.insert(name.clone(), default_threshold(name));
        }
        if let Some(user) = raw.thresholds {
            for (name, value) in user {
                if !ALL_CHECKS.contains(&name.as_str()) {
                    return Err(Error::Config(format!(
                        "field 'thresholds': unknown check '{name}'"
                    )));
                }
                if !(value > 0.0) {
                    return Err(Error::Config(format!(
                        "field 'thresholds.{name}': must be > 0"
                    )));
                }
                thresholds.insert(name, value);
            }
        }

        Ok(RunConfig {
            omega_sq: raw.omega_sq,
            force: raw.force,
            t0: raw.t0,
            t1: raw.t1,
            samples: raw.samples,
            integrator,
            seeds: raw.seeds.unwrap_or_default(),
            checks,
            thresholds,
            hbar: raw.hbar,
        })
    }

    /// Build the run configuration for a built-in scenario over
    /// t in [0, 20] with default integrator settings.
    pub fn from_builtin(builtin: &BuiltinScenario) -> RunConfig {
        let seeds = SeedsSection {
            q0: builtin.q0,
            p0: builtin.p0,
            beta0: [builtin.beta0.0, builtin.beta0.1],
            beta_dot0: [builtin.beta_dot0.0, builtin.beta_dot0.1],
            gamma0: Some([1.0, 0.0, 0.0]),
            sigma0: Some([0.0, 0.0]),
            sigma_dot0: Some([0.0, 0.0]),
            w_sq: builtin.w_sq,
            rho0: Some(builtin.rho0),
            rho_dot0: Some(builtin.rho_dot0),
        };
        let checks: Vec<String> = builtin.checks.iter().map(|s| s.to_string()).collect();
        let mut thresholds = BTreeMap::new();
        for name in &checks {
            thresholds.insert(name.clone(), default_threshold(name));
        }
        RunConfig {
            omega_sq: builtin.omega_sq.to_string(),
            force: builtin.force.to_string(),
            t0: 0.0,
            t1: 20.0,
            samples: default_samples(),
            integrator: IntegratorConfig::default(),
            seeds,
            checks,
            thresholds,
            hbar: 1.0,
        }
    }

    pub fn scenario(&self) -> Result<Scenario, Error> {
        Scenario::from_sources(&self.omega_sq, &self.force, self.t0, self.t1, self.samples)
    }
}

fn default_checks_for(raw: &RawConfig) -> Vec<String> {
    let mut checks: Vec<String> = [
        "linear-drift",
        "quadratic-drift",
        "takayama-agreement",
        "wronskian",
        "first-integral",
        "product-relation",
        "coefficient-closure",
        "quantum-invariance",
        "quantum-product",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let has_ermakov = raw
        .seeds
        .as_ref()
        .map(|s| s.w_sq.is_some())
        .unwrap_or(false);
    if has_ermakov {
        checks.push("ermakov".to_string());
    }
    checks
}

/// Load and validate a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let raw: RawConfig = serde_json::from_str(&text).map_err(|e| {
        Error::Config(format!("{} at line {} column {}", e, e.line(), e.column()))
    })?;
    RunConfig::from_raw(raw)
}
