//! Operator-coefficient algebra for polynomials of degree <= 2 in
//! (q, p) with canonical commutation [q, p] = i hbar, plus the
//! Heisenberg-picture propagator and the quantum invariance checks.
//!
//! Operators are represented by their coefficients over the
//! symmetrized basis {q^2, p^2, 1/2{q,p}, q, p, 1}, in which every
//! degree-<=2 polynomial has unique coefficients. All algebra on that
//! representation is exact; only the parameter ODE solutions carry
//! numerical error.

use num_complex::Complex64;

use crate::classical::{BetaSolution, GammaSolution, SigmaSolution};
use crate::error::Error;
use crate::ode::{integrate, IntegratorConfig, OdeSystem};
use crate::report::{DriftEntry, DriftReport};
use crate::scenario::Scenario;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Commutator scale; the identities in this module are either
/// independent of it (symmetric products) or linear in it
/// (the antisymmetric scalar).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HBar(pub f64);

impl HBar {
    pub fn new(value: f64) -> Result<HBar, Error> {
        if value > 0.0 {
            Ok(HBar(value))
        } else {
            Err(Error::Config("hbar must be > 0".into()))
        }
    }
}

impl Default for HBar {
    fn default() -> Self {
        HBar(1.0)
    }
}

/// bq q + bp p + b0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearOperator {
    pub bq: Complex64,
    pub bp: Complex64,
    pub b0: Complex64,
}

impl LinearOperator {
    pub fn new(bq: Complex64, bp: Complex64, b0: Complex64) -> Self {
        LinearOperator { bq, bp, b0 }
    }

    pub fn q() -> Self {
        LinearOperator::new(c(1.0), Complex64::ZERO, Complex64::ZERO)
    }

    pub fn p() -> Self {
        LinearOperator::new(Complex64::ZERO, c(1.0), Complex64::ZERO)
    }

    pub fn adjoint(&self) -> Self {
        LinearOperator::new(self.bq.conj(), self.bp.conj(), self.b0.conj())
    }

    /// Classical shadow: evaluate the coefficients against a phase
    /// space point (q, p).
    pub fn eval_classical(&self, q: f64, p: f64) -> Complex64 {
        self.bq * q + self.bp * p + self.b0
    }

    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        [
            (self.bq - other.bq).norm(),
            (self.bp - other.bp).norm(),
            (self.b0 - other.b0).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Aqq q^2 + App p^2 + Asym 1/2{q,p} + bq q + bp p + b0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticOperator {
    pub aqq: Complex64,
    pub app: Complex64,
    pub asym: Complex64,
    pub bq: Complex64,
    pub bp: Complex64,
    pub b0: Complex64,
}

impl QuadraticOperator {
    pub fn adjoint(&self) -> Self {
        QuadraticOperator {
            aqq: self.aqq.conj(),
            app: self.app.conj(),
            asym: self.asym.conj(),
            bq: self.bq.conj(),
            bp: self.bp.conj(),
            b0: self.b0.conj(),
        }
    }

    /// Self-adjoint iff every coefficient is real.
    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    pub fn eval_classical(&self, q: f64, p: f64) -> Complex64 {
        self.aqq * (q * q) + self.app * (p * p) + self.asym * (q * p)
            + self.bq * q
            + self.bp * p
            + self.b0
    }

    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        [
            (self.aqq - other.aqq).norm(),
            (self.app - other.app).norm(),
            (self.asym - other.asym).norm(),
            (self.bq - other.bq).norm(),
            (self.bp - other.bp).norm(),
            (self.b0 - other.b0).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        QuadraticOperator {
            aqq: k * self.aqq,
            app: k * self.app,
            asym: k * self.asym,
            bq: k * self.bq,
            bp: k * self.bp,
            b0: k * self.b0,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        QuadraticOperator {
            aqq: self.aqq + other.aqq,
            app: self.app + other.app,
            asym: self.asym + other.asym,
            bq: self.bq + other.bq,
            bp: self.bp + other.bp,
            b0: self.b0 + other.b0,
        }
    }
}

/// Exact product of two linear operators in the symmetrized basis.
/// The ordering term shows up as the scalar (a1 b2 - b1 a2) i hbar / 2,
/// from q p = 1/2{q,p} + 1/2 [q,p].
pub fn multiply(l1: &LinearOperator, l2: &LinearOperator, hbar: HBar) -> QuadraticOperator {
    let (a1, b1, c1) = (l1.bq, l1.bp, l1.b0);
    let (a2, b2, c2) = (l2.bq, l2.bp, l2.b0);
    QuadraticOperator {
        aqq: a1 * a2,
        app: b1 * b2,
        asym: a1 * b2 + b1 * a2,
        bq: a1 * c2 + c1 * a2,
        bp: b1 * c2 + c1 * b2,
        b0: c1 * c2 + (a1 * b2 - b1 * a2) * I * (hbar.0 / 2.0),
    }
}

/// 1/2 (L1 L2 + L2 L1); the ordering scalars cancel identically, so
/// this is built without them and is exactly independent of hbar.
pub fn symmetric_product(
    l1: &LinearOperator,
    l2: &LinearOperator,
    _hbar: HBar,
) -> QuadraticOperator {
    let (a1, b1, c1) = (l1.bq, l1.bp, l1.b0);
    let (a2, b2, c2) = (l2.bq, l2.bp, l2.b0);
    QuadraticOperator {
        aqq: a1 * a2,
        app: b1 * b2,
        asym: a1 * b2 + b1 * a2,
        bq: a1 * c2 + c1 * a2,
        bp: b1 * c2 + c1 * b2,
        b0: c1 * c2,
    }
}

/// 1/2 (L1 L2 - L2 L1): a pure scalar, (a1 b2 - b1 a2) i hbar / 2.
/// Everything but the ordering scalar cancels identically, so the
/// polynomial part is exactly zero.
pub fn antisymmetric_product(
    l1: &LinearOperator,
    l2: &LinearOperator,
    hbar: HBar,
) -> QuadraticOperator {
    QuadraticOperator {
        aqq: Complex64::ZERO,
        app: Complex64::ZERO,
        asym: Complex64::ZERO,
        bq: Complex64::ZERO,
        bp: Complex64::ZERO,
        b0: (l1.bq * l2.bp - l1.bp * l2.bq) * I * (hbar.0 / 2.0),
    }
}

/// Sampled 3x3 matrices S(t) mapping (q0, p0, 1) to (q(t), p(t), 1);
/// the bottom row is pinned to (0, 0, 1).
#[derive(Debug, Clone)]
pub struct HeisenbergPropagator {
    pub times: Vec<f64>,
    pub matrices: Vec<[[f64; 3]; 3]>,
}

impl HeisenbergPropagator {
    /// Determinant of the upper-left 2x2 block; 1 up to integration
    /// error (Liouville).
    pub fn upper_block_det(&self, idx: usize) -> f64 {
        let m = &self.matrices[idx];
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

/// Integrate dS/dt = M(t) S with M = [[0,1,0],[-w^2,0,F],[0,0,0]] and
/// S(t0) = identity. The columns are the fundamental solutions of the
/// classical system, shared verbatim with the Heisenberg picture.
pub fn heisenberg_propagator(
    scenario: &Scenario,
    cfg: &IntegratorConfig,
) -> Result<HeisenbergPropagator, Error> {
    // state: the first two rows of S, (S11 S12 S13 S21 S22 S23);
    // the third row never moves.
    let sys = OdeSystem::new(6, |t, y, dy| {
        let w2 = scenario.omega_sq_at(t)?;
        let f = scenario.force_at(t)?;
        // row 1' = row 2
        dy[0] = y[3];
        dy[1] = y[4];
        dy[2] = y[5];
        // row 2' = -w^2 row 1 + F row 3, row 3 = (0, 0, 1)
        dy[3] = -w2 * y[0];
        dy[4] = -w2 * y[1];
        dy[5] = -w2 * y[2] + c(f);
        Ok(())
    });
    let y0 = [c(1.0), c(0.0), c(0.0), c(0.0), c(1.0), c(0.0)];
    let traj = integrate(&sys, &y0, scenario.t0, scenario.grid(), cfg)?;
    let matrices = traj
        .states
        .iter()
        .map(|s| {
            [
                [s[0].re, s[1].re, s[2].re],
                [s[3].re, s[4].re, s[5].re],
                [0.0, 0.0, 1.0],
            ]
        })
        .collect();
    Ok(HeisenbergPropagator { times: traj.sample_times, matrices })
}

/// Time-t linear invariant operator I_L = beta p - beta' q - F(beta,t).
pub fn linear_invariant_op(beta: &BetaSolution, idx: usize) -> LinearOperator {
    LinearOperator::new(-beta.beta_dot[idx], beta.beta[idx], -beta.quad[idx])
}

/// Time-t quadratic invariant operator in the symmetrized basis:
/// (1/4 g'' + 1/2 w^2 g) q^2 + g/2 p^2 - 1/2 g' (1/2{q,p})
/// - (s' + gF) q + s p - F(s,t).
pub fn quad_invariant_op(
    gamma: &GammaSolution,
    sigma: &SigmaSolution,
    scenario: &Scenario,
    idx: usize,
) -> Result<QuadraticOperator, Error> {
    let t = gamma.times[idx];
    let w2 = scenario.omega_sq_at(t)?;
    let f = scenario.force_at(t)?;
    Ok(QuadraticOperator {
        aqq: c(0.25 * gamma.gamma_ddot[idx] + 0.5 * w2 * gamma.gamma[idx]),
        app: c(0.5 * gamma.gamma[idx]),
        asym: c(-0.5 * gamma.gamma_dot[idx]),
        bq: -(sigma.sigma_dot[idx] + c(gamma.gamma[idx] * f)),
        bp: sigma.sigma[idx],
        b0: -sigma.quad[idx],
    })
}

/// Substitute q(t) = S11 q0 + S12 p0 + S13, p(t) = S21 q0 + S22 p0 + S23
/// into a linear operator.
pub fn pull_back_linear(op: &LinearOperator, s: &[[f64; 3]; 3]) -> LinearOperator {
    LinearOperator::new(
        op.bq * s[0][0] + op.bp * s[1][0],
        op.bq * s[0][1] + op.bp * s[1][1],
        op.b0 + op.bq * s[0][2] + op.bp * s[1][2],
    )
}

/// Same substitution for a quadratic operator. The quadratic-form
/// block transforms by congruence with the upper 2x2 block; because
/// the substitution coefficients are real the symmetrized basis is
/// closed and no hbar-dependent correction appears.
pub fn pull_back_quadratic(op: &QuadraticOperator, s: &[[f64; 3]; 3]) -> QuadraticOperator {
    let r = [[s[0][0], s[0][1]], [s[1][0], s[1][1]]];
    let d = [s[0][2], s[1][2]];
    // A as a symmetric 2x2 matrix
    let a = [[op.aqq, op.asym / 2.0], [op.asym / 2.0, op.app]];
    // A' = R^T A R
    let mut ap = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::ZERO;
            for k in 0..2 {
                for l in 0..2 {
                    acc += r[k][i] * a[k][l] * r[l][j];
                }
            }
            ap[i][j] = acc;
        }
    }
    // b' = R^T (2 A d + b)
    let two_ad = [
        2.0 * (a[0][0] * d[0] + a[0][1] * d[1]),
        2.0 * (a[1][0] * d[0] + a[1][1] * d[1]),
    ];
    let b = [op.bq, op.bp];
    let bp_vec = [
        r[0][0] * (two_ad[0] + b[0]) + r[1][0] * (two_ad[1] + b[1]),
        r[0][1] * (two_ad[0] + b[0]) + r[1][1] * (two_ad[1] + b[1]),
    ];
    // b0' = d^T A d + b . d + b0
    let d_ad = a[0][0] * (d[0] * d[0])
        + (a[0][1] + a[1][0]) * (d[0] * d[1])
        + a[1][1] * (d[1] * d[1]);
    let b0 = d_ad + b[0] * d[0] + b[1] * d[1] + op.b0;
    QuadraticOperator {
        aqq: ap[0][0],
        app: ap[1][1],
        asym: ap[0][1] + ap[1][0],
        bq: bp_vec[0],
        bp: bp_vec[1],
        b0,
    }
}

/// Pull the time-t invariant operators back through S(t) and report
/// the maximum coefficient deviation from the t0 coefficients;
/// additionally check the symmetric product of the linear invariants
/// against the quadratic invariant built from the beta-derived
/// (gamma, sigma), and the antisymmetric scalar against
/// -1/2 W(beta*, beta) i hbar.
pub fn check_quantum_invariance(
    beta: &BetaSolution,
    gamma: &GammaSolution,
    sigma: &SigmaSolution,
    propagator: &HeisenbergPropagator,
    scenario: &Scenario,
    hbar: HBar,
    coeff_threshold: f64,
    product_threshold: f64,
) -> Result<DriftReport, Error> {
    let n = propagator.times.len();
    if beta.times.len() != n || gamma.times.len() != n || sigma.times.len() != n {
        return Err(Error::GridMismatch("quantum invariance inputs".into()));
    }
    let (gamma_b, sigma_b) = crate::classical::gamma_sigma_from_beta(beta, scenario)?;

    let l0 = linear_invariant_op(beta, 0);
    let q0_op = quad_invariant_op(gamma, sigma, scenario, 0)?;
    let w0 = beta.beta_dot0.conj() * beta.beta0 - beta.beta0.conj() * beta.beta_dot0;
    let anti_expected = -0.5 * w0 * I * hbar.0;

    let mut linear_dev: f64 = 0.0;
    let mut quad_dev: f64 = 0.0;
    let mut sym_dev: f64 = 0.0;
    let mut anti_dev: f64 = 0.0;
    for i in 0..n {
        let s = &propagator.matrices[i];
        let l_t = linear_invariant_op(beta, i);
        let pulled_l = pull_back_linear(&l_t, s);
        linear_dev = linear_dev.max(pulled_l.max_coeff_distance(&l0));

        let q_t = quad_invariant_op(gamma, sigma, scenario, i)?;
        let pulled_q = pull_back_quadratic(&q_t, s);
        quad_dev = quad_dev.max(pulled_q.max_coeff_distance(&q0_op));

        let l_dag = linear_invariant_op(&beta.conjugate(), i);
        let sym = symmetric_product(&l_dag, &l_t, hbar);
        let q_from_beta = quad_invariant_op(&gamma_b, &sigma_b, scenario, i)?;
        sym_dev = sym_dev.max(sym.max_coeff_distance(&q_from_beta));

        let anti = antisymmetric_product(&l_dag, &l_t, hbar);
        let mut dev = (anti.b0 - anti_expected).norm();
        for coeff in [anti.aqq, anti.app, anti.asym, anti.bq, anti.bp] {
            dev = dev.max(coeff.norm());
        }
        anti_dev = anti_dev.max(dev);
    }

    let mut report = DriftReport::default();
    report.push(DriftEntry {
        name: "quantum linear coefficient drift".into(),
        value_t0: (l0.bq.re, l0.bq.im),
        max_abs_deviation: linear_dev,
        relative_drift: linear_dev,
        threshold: coeff_threshold,
        pass: linear_dev <= coeff_threshold,
    });
    report.push(DriftEntry {
        name: "quantum quadratic coefficient drift".into(),
        value_t0: (q0_op.app.re, q0_op.app.im),
        max_abs_deviation: quad_dev,
        relative_drift: quad_dev,
        threshold: coeff_threshold,
        pass: quad_dev <= coeff_threshold,
    });
    report.push(DriftEntry {
        name: "symmetric product vs quadratic invariant".into(),
        value_t0: (0.0, 0.0),
        max_abs_deviation: sym_dev,
        relative_drift: sym_dev,
        threshold: product_threshold,
        pass: sym_dev <= product_threshold,
    });
    report.push(DriftEntry {
        name: "antisymmetric product scalar".into(),
        value_t0: (anti_expected.re, anti_expected.im),
        max_abs_deviation: anti_dev,
        relative_drift: anti_dev,
        threshold: product_threshold,
        pass: anti_dev <= product_threshold,
    });
    Ok(report)
}
