//! Problem definitions: the coefficient functions omega^2(t) and F(t),
//! the time window and the sample grid, plus the built-in scenario
//! library used by the CLI and the test suites.

use crate::error::Error;
use crate::expr::{self, ExprAst};

/// A driven oscillator problem: q'' + omega^2(t) q = F(t) on [t0, t1],
/// sampled on an ascending grid.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub omega_sq: ExprAst,
    pub force: ExprAst,
    pub t0: f64,
    pub t1: f64,
    pub sample_times: Vec<f64>,
}

impl Scenario {
    /// Build from expression sources with a uniform sample grid.
    pub fn from_sources(
        omega_sq: &str,
        force: &str,
        t0: f64,
        t1: f64,
        samples: usize,
    ) -> Result<Scenario, Error> {
        if !(t1 > t0) {
            return Err(Error::Config("t1 must be greater than t0".into()));
        }
        if samples < 2 {
            return Err(Error::Config("samples must be >= 2".into()));
        }
        let omega_sq = expr::parse(omega_sq)?;
        let force = expr::parse(force)?;
        let n = samples;
        let sample_times = (0..n)
            .map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64)
            .collect();
        Ok(Scenario { omega_sq, force, t0, t1, sample_times })
    }

    pub fn omega_sq_at(&self, t: f64) -> Result<f64, Error> {
        self.omega_sq.eval(t)
    }

    pub fn force_at(&self, t: f64) -> Result<f64, Error> {
        self.force.eval(t)
    }

    pub fn grid(&self) -> &[f64] {
        &self.sample_times
    }
}

/// One entry of the built-in scenario library.
#[derive(Debug, Clone)]
pub struct BuiltinScenario {
    pub name: &'static str,
    pub description: &'static str,
    pub omega_sq: &'static str,
    pub force: &'static str,
    /// Seeds: (q0, p0), beta seeds as (re, im) pairs, Ermakov W^2/rho
    /// seeds where the scenario exercises that sector.
    pub q0: f64,
    pub p0: f64,
    pub beta0: (f64, f64),
    pub beta_dot0: (f64, f64),
    pub w_sq: Option<f64>,
    pub rho0: f64,
    pub rho_dot0: f64,
    pub checks: &'static [&'static str],
}

/// Every check name understood by the runner.
pub const ALL_CHECKS: &[&str] = &[
    "linear-drift",
    "quadratic-drift",
    "takayama-agreement",
    "wronskian",
    "first-integral",
    "product-relation",
    "coefficient-closure",
    "ermakov",
    "quantum-invariance",
    "quantum-product",
];

const DEFAULT_CHECKS: &[&str] = &[
    "linear-drift",
    "quadratic-drift",
    "takayama-agreement",
    "wronskian",
    "first-integral",
    "product-relation",
    "coefficient-closure",
    "quantum-invariance",
];

const ALL_WITH_ERMAKOV: &[&str] = &[
    "linear-drift",
    "quadratic-drift",
    "takayama-agreement",
    "wronskian",
    "first-integral",
    "product-relation",
    "coefficient-closure",
    "ermakov",
    "quantum-invariance",
    "quantum-product",
];

const DRIVEN_CHIRP_CHECKS: &[&str] = &[
    "linear-drift",
    "quadratic-drift",
    "takayama-agreement",
    "wronskian",
    "first-integral",
    "product-relation",
    "coefficient-closure",
    "quantum-invariance",
    "quantum-product",
];

/// Built-in scenario library.
pub fn builtin_scenarios() -> Vec<BuiltinScenario> {
    let plain = BuiltinScenario {
        name: "",
        description: "",
        omega_sq: "1",
        force: "0",
        q0: 1.0,
        p0: 0.0,
        beta0: (0.0, 0.0),
        beta_dot0: (1.0, 0.0),
        w_sq: None,
        rho0: 1.0,
        rho_dot0: 0.0,
        checks: DEFAULT_CHECKS,
    };
    vec![
        BuiltinScenario {
            name: "constant",
            description: "constant frequency, no force: omega^2 = 1, F = 0",
            ..plain.clone()
        },
        BuiltinScenario {
            name: "driven-constant",
            description: "constant frequency, constant force: omega^2 = 1, F = 1",
            force: "1",
            ..plain.clone()
        },
        BuiltinScenario {
            name: "chirp",
            description: "linear frequency sweep: omega^2 = 1 + 0.1*t, F = 0",
            omega_sq: "1 + 0.1*t",
            ..plain.clone()
        },
        BuiltinScenario {
            name: "driven-chirp",
            description: "frequency sweep with periodic force: omega^2 = 1 + 0.1*t, F = sin(t)",
            omega_sq: "1 + 0.1*t",
            force: "sin(t)",
            checks: DRIVEN_CHIRP_CHECKS,
            ..plain.clone()
        },
        BuiltinScenario {
            name: "pulse",
            description: "constant frequency with a Gaussian force pulse: omega^2 = 1, F = exp(-(t-5)^2)",
            force: "exp(-(t-5)^2)",
            ..plain.clone()
        },
        BuiltinScenario {
            name: "ermakov-stationary",
            description: "stationary Ermakov amplitude: omega^2 = 1, W^2 = 1, rho0 = 1",
            w_sq: Some(1.0),
            checks: ALL_WITH_ERMAKOV,
            ..plain
        },
    ]
}

pub fn builtin_scenario(name: &str) -> Option<BuiltinScenario> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}
