//! Explicit Runge-Kutta integrators over complex-valued state vectors.
//!
//! Two methods are provided: classic fixed-step RK4 and an embedded
//! Dormand-Prince 5(4) pair with step-size control. Internal steps are
//! clipped so every requested sample time is hit exactly; sampled
//! values never come from interpolation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// First-order system dy/dt = f(t, y) over a complex state vector.
pub struct OdeSystem<'a> {
    pub dim: usize,
    pub rhs: Box<dyn Fn(f64, &[Complex64], &mut [Complex64]) -> Result<(), Error> + 'a>,
}

impl<'a> OdeSystem<'a> {
    pub fn new<F>(dim: usize, rhs: F) -> Self
    where
        F: Fn(f64, &[Complex64], &mut [Complex64]) -> Result<(), Error> + 'a,
    {
        OdeSystem { dim, rhs: Box::new(rhs) }
    }

    fn eval(&self, t: f64, y: &[Complex64], out: &mut [Complex64]) -> Result<(), Error> {
        debug_assert_eq!(y.len(), self.dim);
        (self.rhs)(t, y, out)?;
        debug_assert_eq!(out.len(), self.dim);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rk4Fixed,
    Rk45Adaptive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step size (rk4-fixed) and initial step guess (rk45).
    pub h0: f64,
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk45Adaptive,
            h0: 1e-3,
            rtol: 1e-10,
            atol: 1e-10,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.h0 > 0.0) {
            return Err(Error::Config("h0 must be > 0".into()));
        }
        if !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return Err(Error::Config("rtol and atol must be > 0".into()));
        }
        if self.max_steps < 1 {
            return Err(Error::Config("max_steps must be >= 1".into()));
        }
        Ok(())
    }
}

/// Solution sampled on the requested grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub sample_times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
}

fn check_finite(t: f64, y: &[Complex64]) -> Result<(), Error> {
    if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { t });
    }
    Ok(())
}

/// One classic RK4 step.
pub fn step_rk4(
    system: &OdeSystem,
    t: f64,
    y: &[Complex64],
    h: f64,
) -> Result<Vec<Complex64>, Error> {
    let n = system.dim;
    let mut k1 = vec![Complex64::ZERO; n];
    let mut k2 = vec![Complex64::ZERO; n];
    let mut k3 = vec![Complex64::ZERO; n];
    let mut k4 = vec![Complex64::ZERO; n];
    let mut tmp = vec![Complex64::ZERO; n];

    system.eval(t, y, &mut k1)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    system.eval(t + 0.5 * h, &tmp, &mut k2)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    system.eval(t + 0.5 * h, &tmp, &mut k3)?;
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    system.eval(t + h, &tmp, &mut k4)?;

    let mut out = vec![Complex64::ZERO; n];
    for i in 0..n {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    check_finite(t + h, &out)?;
    Ok(out)
}

// Dormand-Prince 5(4) Butcher tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order solution weights (same as the last A row, FSAL).
const DP_B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
// Embedded 4th-order weights.
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One embedded Dormand-Prince 5(4) step. Returns the 5th-order state
/// and the per-component difference against the embedded 4th-order
/// solution.
pub fn step_rk45(
    system: &OdeSystem,
    t: f64,
    y: &[Complex64],
    h: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>), Error> {
    let n = system.dim;
    let mut k = vec![vec![Complex64::ZERO; n]; 7];
    let mut tmp = vec![Complex64::ZERO; n];

    system.eval(t, y, &mut k[0])?;
    for s in 1..7 {
        for i in 0..n {
            let mut acc = Complex64::ZERO;
            for (j, kj) in k.iter().enumerate().take(s) {
                acc += DP_A[s][j] * kj[i];
            }
            tmp[i] = y[i] + h * acc;
        }
        let (head, tail) = k.split_at_mut(s);
        let _ = head;
        system.eval(t + DP_C[s] * h, &tmp, &mut tail[0])?;
    }

    let mut y5 = vec![Complex64::ZERO; n];
    let mut err = vec![Complex64::ZERO; n];
    for i in 0..n {
        let mut acc5 = Complex64::ZERO;
        let mut acc4 = Complex64::ZERO;
        for s in 0..7 {
            acc5 += DP_B5[s] * k[s][i];
            acc4 += DP_B4[s] * k[s][i];
        }
        y5[i] = y[i] + h * acc5;
        err[i] = h * (acc5 - acc4);
    }
    check_finite(t + h, &y5)?;
    Ok((y5, err))
}

fn error_norm(err: &[Complex64], y_old: &[Complex64], y_new: &[Complex64], cfg: &IntegratorConfig) -> f64 {
    let n = err.len();
    let mut acc = 0.0;
    for i in 0..n {
        let scale = cfg.atol + cfg.rtol * y_old[i].norm().max(y_new[i].norm());
        let r = err[i].norm() / scale;
        acc += r * r;
    }
    (acc / n as f64).sqrt()
}

/// Integrate from `t0`, recording the state at each requested sample
/// time. The first sample may coincide with `t0`.
pub fn integrate(
    system: &OdeSystem,
    y0: &[Complex64],
    t0: f64,
    sample_times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory, Error> {
    cfg.validate()?;
    if sample_times.is_empty() {
        return Err(Error::Config("sample_times must be nonempty".into()));
    }
    if sample_times[0] < t0 {
        return Err(Error::Config("sample_times[0] must be >= t0".into()));
    }
    if sample_times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("sample_times must be strictly ascending".into()));
    }
    check_finite(t0, y0)?;

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut states = Vec::with_capacity(sample_times.len());
    let mut steps_taken = 0usize;
    let mut h = cfg.h0;

    for &ts in sample_times {
        while t < ts {
            if steps_taken >= cfg.max_steps {
                return Err(Error::StepLimit { t, max_steps: cfg.max_steps });
            }
            match cfg.method {
                Method::Rk4Fixed => {
                    let step = cfg.h0.min(ts - t);
                    y = step_rk4(system, t, &y, step)?;
                    t = if (ts - t) <= cfg.h0 { ts } else { t + step };
                    steps_taken += 1;
                }
                Method::Rk45Adaptive => {
                    let clipped = h.min(ts - t);
                    let (y_new, err) = step_rk45(system, t, &y, clipped)?;
                    let norm = error_norm(&err, &y, &y_new, cfg);
                    steps_taken += 1;
                    if norm <= 1.0 {
                        t = if clipped >= ts - t { ts } else { t + clipped };
                        y = y_new;
                    }
                    // Standard controller: safety 0.9, growth clamped
                    // to [0.2, 5.0]; exponent 1/5 for the 5(4) pair.
                    let factor = if norm > 0.0 {
                        (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
                    } else {
                        5.0
                    };
                    h = (clipped * factor).max(f64::MIN_POSITIVE);
                }
            }
        }
        states.push(y.clone());
    }

    Ok(Trajectory { sample_times: sample_times.to_vec(), states })
}

/// Convenience: real initial data embedded as complex.
pub fn to_complex(y: &[f64]) -> Vec<Complex64> {
    y.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}
