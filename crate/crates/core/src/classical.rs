//! Classical driven oscillator: state evolution, the auxiliary
//! parameter ODEs for beta, gamma, sigma and the Ermakov amplitude,
//! the linear and quadratic invariants built from them, and the
//! algebraic relations tying those invariants together.

use num_complex::Complex64;

use crate::error::Error;
use crate::ode::{integrate, IntegratorConfig, OdeSystem};
use crate::report::{DriftEntry, DriftReport};
use crate::scenario::Scenario;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_same_grid(a: &[f64], b: &[f64]) -> Result<(), Error> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x != y) {
        return Err(Error::GridMismatch(format!(
            "{} vs {} samples",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Sampled (q, p) solution of the canonical equations.
#[derive(Debug, Clone)]
pub struct ClassicalTrajectory {
    pub times: Vec<f64>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

/// Sampled complex auxiliary parameter beta with its derivative and
/// the running quadrature F(beta, t) = int_{t0}^t beta(tau) F(tau) dtau.
///
/// The companion parameter alpha = -dbeta/dt is never stored; it is
/// derived on demand from `beta_dot`.
#[derive(Debug, Clone)]
pub struct BetaSolution {
    pub times: Vec<f64>,
    pub beta: Vec<Complex64>,
    pub beta_dot: Vec<Complex64>,
    /// Running quadrature, zero at t0 by construction.
    pub quad: Vec<Complex64>,
    pub t0: f64,
    pub beta0: Complex64,
    pub beta_dot0: Complex64,
}

impl BetaSolution {
    /// The conjugate solution: beta -> beta*, F(beta,t) -> F(beta*,t).
    /// Exact because the force F(t) is real.
    pub fn conjugate(&self) -> BetaSolution {
        BetaSolution {
            times: self.times.clone(),
            beta: self.beta.iter().map(|z| z.conj()).collect(),
            beta_dot: self.beta_dot.iter().map(|z| z.conj()).collect(),
            quad: self.quad.iter().map(|z| z.conj()).collect(),
            t0: self.t0,
            beta0: self.beta0.conj(),
            beta_dot0: self.beta_dot0.conj(),
        }
    }
}

/// Sampled real parameter gamma with first and second derivatives and
/// the first-integral value W^2 = 1/2 g g'' + w^2 g^2 - 1/4 (g')^2.
#[derive(Debug, Clone)]
pub struct GammaSolution {
    pub times: Vec<f64>,
    pub gamma: Vec<f64>,
    pub gamma_dot: Vec<f64>,
    pub gamma_ddot: Vec<f64>,
    pub w_sq: f64,
    pub t0: f64,
    pub gamma0: f64,
    pub gamma_dot0: f64,
    pub gamma_ddot0: f64,
}

/// Sampled parameter sigma with derivative and running quadrature
/// F(sigma, t). Complex-capable; real seeds stay exactly real.
#[derive(Debug, Clone)]
pub struct SigmaSolution {
    pub times: Vec<f64>,
    pub sigma: Vec<Complex64>,
    pub sigma_dot: Vec<Complex64>,
    pub quad: Vec<Complex64>,
}

/// Sampled Ermakov amplitude rho (= sqrt(gamma)) and its derivative.
#[derive(Debug, Clone)]
pub struct ErmakovSolution {
    pub times: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_dot: Vec<f64>,
    pub w_sq: f64,
}

/// Evolve (q, p) under q' = p, p' = F - w^2 q.
pub fn evolve_state(
    scenario: &Scenario,
    q0: f64,
    p0: f64,
    cfg: &IntegratorConfig,
) -> Result<ClassicalTrajectory, Error> {
    let sys = OdeSystem::new(2, |t, y, dy| {
        let w2 = scenario.omega_sq_at(t)?;
        let f = scenario.force_at(t)?;
        dy[0] = y[1];
        dy[1] = c(f) - w2 * y[0];
        Ok(())
    });
    let traj = integrate(&sys, &[c(q0), c(p0)], scenario.t0, scenario.grid(), cfg)?;
    Ok(ClassicalTrajectory {
        times: traj.sample_times,
        q: traj.states.iter().map(|s| s[0].re).collect(),
        p: traj.states.iter().map(|s| s[1].re).collect(),
    })
}

/// Solve beta'' + w^2 beta = 0 with the running quadrature
/// dF/dt = beta F carried as an extra state component.
pub fn solve_beta(
    scenario: &Scenario,
    beta0: Complex64,
    beta_dot0: Complex64,
    cfg: &IntegratorConfig,
) -> Result<BetaSolution, Error> {
    let sys = OdeSystem::new(3, |t, y, dy| {
        let w2 = scenario.omega_sq_at(t)?;
        let f = scenario.force_at(t)?;
        dy[0] = y[1];
        dy[1] = -w2 * y[0];
        dy[2] = y[0] * f;
        Ok(())
    });
    let y0 = [beta0, beta_dot0, Complex64::ZERO];
    let traj = integrate(&sys, &y0, scenario.t0, scenario.grid(), cfg)?;
    Ok(BetaSolution {
        times: traj.sample_times,
        beta: traj.states.iter().map(|s| s[0]).collect(),
        beta_dot: traj.states.iter().map(|s| s[1]).collect(),
        quad: traj.states.iter().map(|s| s[2]).collect(),
        t0: scenario.t0,
        beta0,
        beta_dot0,
    })
}

/// Linear invariant I_L(t) = beta p - beta' q - F(beta, t) per sample.
/// The conjugate invariant is obtained by passing `beta.conjugate()`.
pub fn linear_invariant(
    beta: &BetaSolution,
    traj: &ClassicalTrajectory,
) -> Result<Vec<Complex64>, Error> {
    check_same_grid(&beta.times, &traj.times)?;
    Ok((0..beta.times.len())
        .map(|i| beta.beta[i] * traj.p[i] - beta.beta_dot[i] * traj.q[i] - beta.quad[i])
        .collect())
}

/// Solve the third-order gamma equation
/// 1/2 g''' + 2 w^2 g' + (w^2)' g = 0
/// as a first-order 3-vector system, so g'' is available pointwise.
/// W^2 is fixed by the initial data.
pub fn solve_gamma(
    scenario: &Scenario,
    gamma0: f64,
    gamma_dot0: f64,
    gamma_ddot0: f64,
    cfg: &IntegratorConfig,
) -> Result<GammaSolution, Error> {
    let omega_sq_dot = scenario.omega_sq.differentiate();
    let sys = OdeSystem::new(3, |t, y, dy| {
        let w2 = scenario.omega_sq_at(t)?;
        let w2d = omega_sq_dot.eval(t)?;
        dy[0] = y[1];
        dy[1] = y[2];
        dy[2] = -4.0 * w2 * y[1] - 2.0 * w2d * y[0];
        Ok(())
    });
    let y0 = [c(gamma0), c(gamma_dot0), c(gamma_ddot0)];
    let traj = integrate(&sys, &y0, scenario.t0, scenario.grid(), cfg)?;
    let w2_t0 = scenario.omega_sq_at(scenario.t0)?;
    let w_sq = 0.5 * gamma0 * gamma_ddot0 + w2_t0 * gamma0 * gamma0
        - 0.25 * gamma_dot0 * gamma_dot0;
    Ok(GammaSolution {
        times: traj.sample_times,
        gamma: traj.states.iter().map(|s| s[0].re).collect(),
        gamma_dot: traj.states.iter().map(|s| s[1].re).collect(),
        gamma_ddot: traj.states.iter().map(|s| s[2].re).collect(),
        w_sq,
        t0: scenario.t0,
        gamma0,
        gamma_dot0,
        gamma_ddot0,
    })
}

/// First-integral residual 1/2 g g'' + w^2 g^2 - 1/4 (g')^2 - W^2 on
/// the grid.
pub fn first_integral_residual(
    gamma: &GammaSolution,
    scenario: &Scenario,
) -> Result<Vec<f64>, Error> {
    check_same_grid(&gamma.times, scenario.grid())?;
    let mut out = Vec::with_capacity(gamma.times.len());
    for i in 0..gamma.times.len() {
        let w2 = scenario.omega_sq_at(gamma.times[i])?;
        let g = gamma.gamma[i];
        let gd = gamma.gamma_dot[i];
        let gdd = gamma.gamma_ddot[i];
        out.push(0.5 * g * gdd + w2 * g * g - 0.25 * gd * gd - gamma.w_sq);
    }
    Ok(out)
}

/// Solve sigma'' + w^2 sigma = -g F' - 3/2 g' F, driven by the gamma
/// solution. Gamma is re-integrated jointly from its initial data so
/// the right-hand side sees gamma at the internal integration times,
/// not just at the samples. The running quadrature dF/dt = sigma F is
/// carried along.
pub fn solve_sigma(
    scenario: &Scenario,
    gamma: &GammaSolution,
    sigma0: Complex64,
    sigma_dot0: Complex64,
    cfg: &IntegratorConfig,
) -> Result<SigmaSolution, Error> {
    check_same_grid(&gamma.times, scenario.grid())?;
    let omega_sq_dot = scenario.omega_sq.differentiate();
    let force_dot = scenario.force.differentiate();
    // state: (sigma, sigma', Fsigma, g, g', g'')
    let sys = OdeSystem::new(6, |t, y, dy| {
        let w2 = scenario.omega_sq_at(t)?;
        let w2d = omega_sq_dot.eval(t)?;
        let f = scenario.force_at(t)?;
        let fd = force_dot.eval(t)?;
        dy[0] = y[1];
        dy[1] = -w2 * y[0] - fd * y[3] - 1.5 * f * y[4];
        dy[2] = y[0] * f;
        dy[3] = y[4];
        dy[4] = y[5];
        dy[5] = -4.0 * w2 * y[4] - 2.0 * w2d * y[3];
        Ok(())
    });
    let y0 = [
        sigma0,
        sigma_dot0,
        Complex64::ZERO,
        c(gamma.gamma0),
        c(gamma.gamma_dot0),
        c(gamma.gamma_ddot0),
    ];
    let traj = integrate(&sys, &y0, scenario.t0, scenario.grid(), cfg)?;
    Ok(SigmaSolution {
        times: traj.sample_times,
        sigma: traj.states.iter().map(|s| s[0]).collect(),
        sigma_dot: traj.states.iter().map(|s| s[1]).collect(),
        quad: traj.states.iter().map(|s| s[2]).collect(),
    })
}

/// Quadratic invariant
/// I_Q = (1/2 g'' + w^2 g) q^2/2 - 1/2 g' qp + g p^2/2
///       - (s' + gF) q + s p - F(s, t).
pub fn quad_invariant(
    gamma: &GammaSolution,
    sigma: &SigmaSolution,
    traj: &ClassicalTrajectory,
    scenario: &Scenario,
) -> Result<Vec<Complex64>, Error> {
    check_same_grid(&gamma.times, &traj.times)?;
    check_same_grid(&sigma.times, &traj.times)?;
    let mut out = Vec::with_capacity(traj.times.len());
    for i in 0..traj.times.len() {
        let t = traj.times[i];
        let w2 = scenario.omega_sq_at(t)?;
        let f = scenario.force_at(t)?;
        let (q, p) = (traj.q[i], traj.p[i]);
        let g = gamma.gamma[i];
        let gd = gamma.gamma_dot[i];
        let gdd = gamma.gamma_ddot[i];
        let s = sigma.sigma[i];
        let sd = sigma.sigma_dot[i];
        let val = c((0.5 * gdd + w2 * g) * 0.5 * q * q - 0.5 * gd * q * p + 0.5 * g * p * p)
            - (sd + c(g * f)) * q
            + s * p
            - sigma.quad[i];
        out.push(val);
    }
    Ok(out)
}

/// The same invariant in the W^2 form
/// I_Q = 1/(2g) [W^2 q^2 + (1/2 g' q - g p)^2] - (s' + gF) q + s p - F(s,t).
/// Samples where |gamma| falls below 1e-12 times its grid maximum are
/// flagged as not evaluated (`None`) instead of being regularized.
pub fn quad_invariant_takayama(
    gamma: &GammaSolution,
    sigma: &SigmaSolution,
    traj: &ClassicalTrajectory,
    scenario: &Scenario,
) -> Result<Vec<Option<Complex64>>, Error> {
    check_same_grid(&gamma.times, &traj.times)?;
    check_same_grid(&sigma.times, &traj.times)?;
    let scale = gamma.gamma.iter().map(|g| g.abs()).fold(0.0, f64::max).max(1e-300);
    let mut out = Vec::with_capacity(traj.times.len());
    for i in 0..traj.times.len() {
        let g = gamma.gamma[i];
        if g.abs() < 1e-12 * scale {
            out.push(None);
            continue;
        }
        let t = traj.times[i];
        let f = scenario.force_at(t)?;
        let (q, p) = (traj.q[i], traj.p[i]);
        let gd = gamma.gamma_dot[i];
        let s = sigma.sigma[i];
        let sd = sigma.sigma_dot[i];
        let lin = 0.5 * gd * q - g * p;
        let val = c((gamma.w_sq * q * q + lin * lin) / (2.0 * g))
            - (sd + c(g * f)) * q
            + s * p
            - sigma.quad[i];
        out.push(Some(val));
    }
    Ok(out)
}

/// Solve the Ermakov equation rho'' + w^2 rho = W^2 / rho^3.
/// Aborts with the failure time if rho reaches zero.
pub fn solve_ermakov(
    scenario: &Scenario,
    w_sq: f64,
    rho0: f64,
    rho_dot0: f64,
    cfg: &IntegratorConfig,
) -> Result<ErmakovSolution, Error> {
    if !(rho0 > 0.0) {
        return Err(Error::Config("rho0 must be > 0".into()));
    }
    let sys = OdeSystem::new(2, |t, y, dy| {
        let rho = y[0].re;
        if rho <= 0.0 {
            return Err(Error::AmplitudeCollapse { t });
        }
        let w2 = scenario.omega_sq_at(t)?;
        dy[0] = y[1];
        dy[1] = -w2 * y[0] + c(w_sq / (rho * rho * rho));
        Ok(())
    });
    let y0 = [c(rho0), c(rho_dot0)];
    let traj = integrate(&sys, &y0, scenario.t0, scenario.grid(), cfg)?;
    Ok(ErmakovSolution {
        times: traj.sample_times,
        rho: traj.states.iter().map(|s| s[0].re).collect(),
        rho_dot: traj.states.iter().map(|s| s[1].re).collect(),
        w_sq,
    })
}

/// Ermakov-like invariant
/// 1/2 [q^2/rho^2 + (rho' q - rho p)^2] - (s' + rho^2 F) q + s p - F(s,t).
pub fn ermakov_invariant(
    ermakov: &ErmakovSolution,
    sigma: &SigmaSolution,
    traj: &ClassicalTrajectory,
    scenario: &Scenario,
) -> Result<Vec<Complex64>, Error> {
    check_same_grid(&ermakov.times, &traj.times)?;
    check_same_grid(&sigma.times, &traj.times)?;
    let mut out = Vec::with_capacity(traj.times.len());
    for i in 0..traj.times.len() {
        let t = traj.times[i];
        let f = scenario.force_at(t)?;
        let (q, p) = (traj.q[i], traj.p[i]);
        let rho = ermakov.rho[i];
        let rho_dot = ermakov.rho_dot[i];
        let lin = rho_dot * q - rho * p;
        let val = c(0.5 * (q * q / (rho * rho) + lin * lin))
            - (sigma.sigma_dot[i] + c(rho * rho * f)) * q
            + sigma.sigma[i] * p
            - sigma.quad[i];
        out.push(val);
    }
    Ok(out)
}

/// Wronskian W(t) = b1' b2 - b1 b2' per sample. For W(beta*, beta),
/// pass the conjugate solution as `b1`.
pub fn wronskian(b1: &BetaSolution, b2: &BetaSolution) -> Result<Vec<Complex64>, Error> {
    check_same_grid(&b1.times, &b2.times)?;
    Ok((0..b1.times.len())
        .map(|i| b1.beta_dot[i] * b2.beta[i] - b1.beta[i] * b2.beta_dot[i])
        .collect())
}

/// Derive (gamma, sigma) from a beta solution:
/// gamma = 2 beta* beta, sigma = -beta* F(beta,t) - beta F(beta*,t),
/// with W^2 = -(W(beta*, beta))^2.
pub fn gamma_sigma_from_beta(
    beta: &BetaSolution,
    scenario: &Scenario,
) -> Result<(GammaSolution, SigmaSolution), Error> {
    check_same_grid(&beta.times, scenario.grid())?;
    let n = beta.times.len();
    let mut gamma = Vec::with_capacity(n);
    let mut gamma_dot = Vec::with_capacity(n);
    let mut gamma_ddot = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut sigma_dot = Vec::with_capacity(n);
    let mut squad = Vec::with_capacity(n);
    let mut force_at = Vec::with_capacity(n);
    for i in 0..n {
        let t = beta.times[i];
        let w2 = scenario.omega_sq_at(t)?;
        let f = scenario.force_at(t)?;
        force_at.push(f);
        let b = beta.beta[i];
        let bd = beta.beta_dot[i];
        let quad = beta.quad[i];
        let g = 2.0 * (b.conj() * b).re;
        gamma.push(g);
        gamma_dot.push(2.0 * (bd.conj() * b + b.conj() * bd).re);
        // gamma'' via beta'' = -w^2 beta
        gamma_ddot.push(4.0 * (bd.norm_sqr() - w2 * b.norm_sqr()));
        // sigma = -(b* F(b) + b F(b*)) = -2 Re(b* F(b))
        let s = -(b.conj() * quad + b * quad.conj());
        sigma.push(s);
        // sigma' = -gF - (b'* F(b) + b' F(b*))
        sigma_dot.push(-c(g * f) - (bd.conj() * quad + bd * quad.conj()));
        // F(sigma, t) = -|F(beta, t)|^2
        squad.push(c(-quad.norm_sqr()));
    }
    // Wronskian is a constant of motion; take it from the initial data.
    let w = beta.beta_dot0.conj() * beta.beta0 - beta.beta0.conj() * beta.beta_dot0;
    let w_sq = -(w * w).re;
    let w2_t0 = scenario.omega_sq_at(scenario.t0)?;
    let b0 = beta.beta0;
    let bd0 = beta.beta_dot0;
    let gamma_sol = GammaSolution {
        times: beta.times.clone(),
        gamma,
        gamma_dot,
        gamma_ddot,
        w_sq,
        t0: beta.t0,
        gamma0: 2.0 * b0.norm_sqr(),
        gamma_dot0: 2.0 * (bd0.conj() * b0 + b0.conj() * bd0).re,
        gamma_ddot0: 4.0 * (bd0.norm_sqr() - w2_t0 * b0.norm_sqr()),
    };
    let sigma_sol = SigmaSolution {
        times: beta.times.clone(),
        sigma,
        sigma_dot,
        quad: squad,
    };
    Ok((gamma_sol, sigma_sol))
}

/// Pointwise check of the product theorem I_L* I_L = I_Q with
/// (gamma, sigma) derived from beta, plus residuals of the individual
/// equivalence relations. The quadrature F(sigma, t) is re-computed by
/// an independent integration route before being compared against
/// -|F(beta, t)|^2.
pub fn check_product_relation(
    beta: &BetaSolution,
    traj: &ClassicalTrajectory,
    scenario: &Scenario,
    cfg: &IntegratorConfig,
    product_threshold: f64,
    residual_threshold: f64,
) -> Result<DriftReport, Error> {
    let beta_conj = beta.conjugate();
    let i_l = linear_invariant(beta, traj)?;
    let i_l_conj = linear_invariant(&beta_conj, traj)?;
    let (gamma, sigma) = gamma_sigma_from_beta(beta, scenario)?;
    let i_q = quad_invariant(&gamma, &sigma, traj, scenario)?;

    let n = traj.times.len();
    let product_diff: Vec<Complex64> =
        (0..n).map(|i| i_l_conj[i] * i_l[i] - i_q[i]).collect();

    // residual of 1/2 (1/2 g'' + w^2 g) = b'* b'
    let mut res_b = Vec::with_capacity(n);
    // residual of s' + gF + b'* F(b) + b' F(b*)
    let mut res_c = Vec::with_capacity(n);
    for i in 0..n {
        let t = traj.times[i];
        let w2 = scenario.omega_sq_at(t)?;
        let f = scenario.force_at(t)?;
        let bd = beta.beta_dot[i];
        let quad = beta.quad[i];
        res_b.push(
            0.5 * (0.5 * gamma.gamma_ddot[i] + w2 * gamma.gamma[i]) - bd.norm_sqr(),
        );
        res_c.push(
            sigma.sigma_dot[i]
                + c(gamma.gamma[i] * f)
                + bd.conj() * quad
                + bd * quad.conj(),
        );
    }

    // Independent route for F(sigma, t): co-integrate
    // dG/dt = sigma(t) F(t) with sigma expressed through the beta
    // states, then compare G against -|F(beta, t)|^2.
    let sys = OdeSystem::new(4, |t, y, dy| {
        let w2 = scenario.omega_sq_at(t)?;
        let f = scenario.force_at(t)?;
        dy[0] = y[1];
        dy[1] = -w2 * y[0];
        dy[2] = y[0] * f;
        let sigma_t = -(y[0].conj() * y[2] + y[0] * y[2].conj());
        dy[3] = sigma_t * f;
        Ok(())
    });
    let y0 = [beta.beta0, beta.beta_dot0, Complex64::ZERO, Complex64::ZERO];
    let aux = integrate(&sys, &y0, scenario.t0, scenario.grid(), cfg)?;
    let res_e: Vec<Complex64> = (0..n)
        .map(|i| aux.states[i][3] + c(beta.quad[i].norm_sqr()))
        .collect();

    let mut report = DriftReport::default();
    report.push(DriftEntry::residual(
        "product |I_L* I_L - I_Q|",
        &product_diff,
        product_threshold,
    ));
    report.push(DriftEntry::residual_real(
        "equivalence residual (gamma'')",
        &res_b,
        residual_threshold,
    ));
    report.push(DriftEntry::residual(
        "equivalence residual (sigma')",
        &res_c,
        residual_threshold,
    ));
    report.push(DriftEntry::residual(
        "quadrature residual F(sigma,t) + |F(beta,t)|^2",
        &res_e,
        residual_threshold,
    ));
    Ok(report)
}

/// Fourth-order finite-difference derivative on a uniform grid.
/// One-sided stencils of the same order are used at the boundaries.
pub(crate) fn grid_derivative(times: &[f64], values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    assert!(n >= 5, "grid derivative needs at least 5 points");
    let h = times[1] - times[0];
    let mut out = vec![Complex64::ZERO; n];
    for i in 0..n {
        out[i] = if i < 2 {
            // forward: (-25 f0 + 48 f1 - 36 f2 + 16 f3 - 3 f4) / 12h
            (-25.0 * values[i] + 48.0 * values[i + 1] - 36.0 * values[i + 2]
                + 16.0 * values[i + 3]
                - 3.0 * values[i + 4])
                / (12.0 * h)
        } else if i >= n - 2 {
            (25.0 * values[i] - 48.0 * values[i - 1] + 36.0 * values[i - 2]
                - 16.0 * values[i - 3]
                + 3.0 * values[i - 4])
                / (12.0 * h)
        } else {
            (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
                / (12.0 * h)
        };
    }
    out
}

/// Reconstruct the five-coefficient set
/// c3 = gamma, c2 = -1/2 gamma', c1 = w^2 gamma + 1/2 gamma'',
/// c5 = sigma, c4 = -sigma' - gamma F
/// and evaluate the residuals of the defining first-order system by
/// numerical differentiation on the sample grid.
pub fn reconstruct_coefficients(
    gamma: &GammaSolution,
    sigma: &SigmaSolution,
    scenario: &Scenario,
    threshold: f64,
) -> Result<DriftReport, Error> {
    check_same_grid(&gamma.times, scenario.grid())?;
    check_same_grid(&sigma.times, scenario.grid())?;
    let n = gamma.times.len();
    let mut w2 = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    for &t in &gamma.times {
        w2.push(scenario.omega_sq_at(t)?);
        f.push(scenario.force_at(t)?);
    }
    let c1: Vec<Complex64> =
        (0..n).map(|i| c(w2[i] * gamma.gamma[i] + 0.5 * gamma.gamma_ddot[i])).collect();
    let c2: Vec<Complex64> = (0..n).map(|i| c(-0.5 * gamma.gamma_dot[i])).collect();
    let c3: Vec<Complex64> = (0..n).map(|i| c(gamma.gamma[i])).collect();
    let c4: Vec<Complex64> =
        (0..n).map(|i| -sigma.sigma_dot[i] - c(gamma.gamma[i] * f[i])).collect();
    let c5: Vec<Complex64> = sigma.sigma.clone();

    let d1 = grid_derivative(&gamma.times, &c1);
    let d2 = grid_derivative(&gamma.times, &c2);
    let d3 = grid_derivative(&gamma.times, &c3);
    let d4 = grid_derivative(&gamma.times, &c4);
    let d5 = grid_derivative(&gamma.times, &c5);

    let r1: Vec<Complex64> = (0..n).map(|i| c2[i] + 0.5 * d3[i]).collect();
    let r2: Vec<Complex64> = (0..n).map(|i| 0.5 * d1[i] - c2[i] * w2[i]).collect();
    let r3: Vec<Complex64> = (0..n).map(|i| c1[i] + d2[i] - c3[i] * w2[i]).collect();
    let r4: Vec<Complex64> = (0..n).map(|i| c2[i] * f[i] + d4[i] - c5[i] * w2[i]).collect();
    let r5: Vec<Complex64> = (0..n).map(|i| c3[i] * f[i] + c4[i] + d5[i]).collect();

    let mut report = DriftReport::default();
    for (name, r) in [
        ("closure: c2 + 1/2 dc3", &r1),
        ("closure: 1/2 dc1 - c2 w^2", &r2),
        ("closure: c1 + dc2 - c3 w^2", &r3),
        ("closure: c2 F + dc4 - c5 w^2", &r4),
        ("closure: c3 F + c4 + dc5", &r5),
    ] {
        report.push(DriftEntry::residual(name, r, threshold));
    }
    Ok(report)
}
