//! End-to-end acceptance checks: one test per criterion, each printing
//! a single pass/fail line with the measured quantity.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tdho::classical::{
    check_product_relation, ermakov_invariant, evolve_state, first_integral_residual,
    gamma_sigma_from_beta, linear_invariant, quad_invariant, quad_invariant_takayama,
    reconstruct_coefficients, solve_beta, solve_ermakov, solve_gamma, solve_sigma, wronskian,
    GammaSolution,
};
use tdho::ode::{integrate, IntegratorConfig, Method, OdeSystem};
use tdho::quantum::{
    antisymmetric_product, check_quantum_invariance, heisenberg_propagator, linear_invariant_op,
    multiply, pull_back_linear, quad_invariant_op, symmetric_product, HBar,
};
use tdho::scenario::Scenario;

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The five drift scenarios over t in [0, 20] on 2001 samples.
fn scenarios() -> Vec<(&'static str, Scenario)> {
    [
        ("constant", "1", "0"),
        ("driven-constant", "1", "1"),
        ("chirp", "1 + 0.1*t", "0"),
        ("driven-chirp", "1 + 0.1*t", "sin(t)"),
        ("pulse", "1", "exp(-(t-5)^2)"),
    ]
    .into_iter()
    .map(|(name, w2, f)| (name, Scenario::from_sources(w2, f, 0.0, 20.0, 2001).unwrap()))
    .collect()
}

fn cfg() -> IntegratorConfig {
    IntegratorConfig::default() // rk45, rtol = atol = 1e-10
}

/// Relative drift of a series against its initial value, normalized by
/// max(1, max |I|).
fn relative_drift(series: &[Complex64]) -> f64 {
    let i0 = series[0];
    let scale = series.iter().map(|v| v.norm()).fold(1.0, f64::max);
    series.iter().map(|v| (v - i0).norm()).fold(0.0, f64::max) / scale
}

fn verdict(criterion: &str, measured: f64, threshold: f64) {
    let pass = measured <= threshold;
    println!(
        "{}: {criterion} (max {measured:.3e}, threshold {threshold:.1e})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {measured:.3e} > {threshold:.1e}");
}

#[test]
fn criterion_01_linear_invariant_constancy() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d);
    let mut worst: f64 = 0.0;
    for (_, sc) in scenarios() {
        let beta = solve_beta(&sc, Complex64::ZERO, c(1.0), &cfg()).unwrap();
        let beta_conj = beta.conjugate();
        for _ in 0..20 {
            let q0 = rng.gen_range(-2.0..2.0);
            let p0 = rng.gen_range(-2.0..2.0);
            let traj = evolve_state(&sc, q0, p0, &cfg()).unwrap();
            worst = worst.max(relative_drift(&linear_invariant(&beta, &traj).unwrap()));
            worst = worst.max(relative_drift(&linear_invariant(&beta_conj, &traj).unwrap()));
        }
    }
    verdict("criterion 1: linear invariant drift", worst, 1e-7);
}

#[test]
fn criterion_02_quadratic_invariant_constancy() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2d);
    let mut worst_drift: f64 = 0.0;
    let mut worst_agreement: f64 = 0.0;
    for (_, sc) in scenarios() {
        let gamma = solve_gamma(&sc, 1.0, 0.0, 0.0, &cfg()).unwrap();
        let sigma =
            solve_sigma(&sc, &gamma, Complex64::ZERO, Complex64::ZERO, &cfg()).unwrap();
        for _ in 0..5 {
            let q0 = rng.gen_range(-2.0..2.0);
            let p0 = rng.gen_range(-2.0..2.0);
            let traj = evolve_state(&sc, q0, p0, &cfg()).unwrap();
            let i_q = quad_invariant(&gamma, &sigma, &traj, &sc).unwrap();
            worst_drift = worst_drift.max(relative_drift(&i_q));
            let i_t = quad_invariant_takayama(&gamma, &sigma, &traj, &sc).unwrap();
            for i in 0..i_q.len() {
                if gamma.gamma[i].abs() > 1e-6 {
                    let t = i_t[i].expect("|gamma| > 1e-6 must be evaluated");
                    worst_agreement = worst_agreement.max((t - i_q[i]).norm());
                }
            }
        }
    }
    verdict("criterion 2: quadratic invariant drift", worst_drift, 1e-7);
    verdict("criterion 2: Takayama form agreement", worst_agreement, 1e-7);
}

#[test]
fn criterion_03_wronskian_conservation() {
    let mut worst_drift: f64 = 0.0;
    for (_, sc) in scenarios() {
        let beta = solve_beta(&sc, c(INV_SQRT2), z(0.0, -INV_SQRT2), &cfg()).unwrap();
        let w = wronskian(&beta.conjugate(), &beta).unwrap();
        worst_drift = worst_drift
            .max(w.iter().map(|v| (v - w[0]).norm()).fold(0.0, f64::max));
    }
    verdict("criterion 3: Wronskian drift", worst_drift, 1e-9);

    // for omega^2 = 1 and beta = e^{-it}/sqrt(2), W(beta*, beta) = i
    let sc = Scenario::from_sources("1", "0", 0.0, 20.0, 2001).unwrap();
    let beta = solve_beta(&sc, c(INV_SQRT2), z(0.0, -INV_SQRT2), &cfg()).unwrap();
    let w = wronskian(&beta.conjugate(), &beta).unwrap();
    let worst_value = w.iter().map(|v| (v - z(0.0, 1.0)).norm()).fold(0.0, f64::max);
    verdict("criterion 3: Wronskian value i", worst_value, 1e-9);
}

#[test]
fn criterion_04_gamma_first_integral() {
    let mut worst_residual: f64 = 0.0;
    let mut worst_wsq: f64 = 0.0;
    for (_, sc) in scenarios() {
        let gamma = solve_gamma(&sc, 1.0, 0.0, 0.0, &cfg()).unwrap();
        let res = first_integral_residual(&gamma, &sc).unwrap();
        worst_residual = worst_residual.max(res.iter().fold(0.0, |a, r| a.max(r.abs())));

        // W^2 from the beta route equals -(Wronskian)^2 along the grid
        let beta = solve_beta(&sc, c(INV_SQRT2), z(0.0, -INV_SQRT2), &cfg()).unwrap();
        let (gamma_b, _) = gamma_sigma_from_beta(&beta, &sc).unwrap();
        let w = wronskian(&beta.conjugate(), &beta).unwrap();
        for wi in &w {
            worst_wsq = worst_wsq.max((c(gamma_b.w_sq) + wi * wi).norm());
        }
        let res_b = first_integral_residual(&gamma_b, &sc).unwrap();
        worst_residual = worst_residual.max(res_b.iter().fold(0.0, |a, r| a.max(r.abs())));
    }
    verdict("criterion 4: first-integral residual", worst_residual, 1e-7);
    verdict("criterion 4: W^2 = -(Wronskian)^2", worst_wsq, 1e-9);
}

#[test]
fn criterion_05_classical_product_theorem() {
    let mut worst: f64 = 0.0;
    for (_, sc) in scenarios() {
        // includes the driven cases with beta(t0) = 0
        for (b0, bd0) in [
            (Complex64::ZERO, c(1.0)),
            (c(INV_SQRT2), z(0.0, -INV_SQRT2)),
        ] {
            let beta = solve_beta(&sc, b0, bd0, &cfg()).unwrap();
            let traj = evolve_state(&sc, 1.0, -0.5, &cfg()).unwrap();
            let report =
                check_product_relation(&beta, &traj, &sc, &cfg(), 1e-7, 1e-7).unwrap();
            for entry in &report.entries {
                worst = worst.max(entry.max_abs_deviation);
            }
        }
    }
    verdict("criterion 5: product theorem |I_L* I_L - I_Q|", worst, 1e-7);
}

#[test]
fn criterion_06_ermakov_sector() {
    let sc = Scenario::from_sources("1", "0", 0.0, 20.0, 2001).unwrap();
    // stationary amplitude rho = (W^2/omega^2)^(1/4) = 1
    let erm = solve_ermakov(&sc, 1.0, 1.0, 0.0, &cfg()).unwrap();
    let stationary = erm.rho.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    verdict("criterion 6: stationary Ermakov amplitude", stationary, 1e-9);

    // oscillating amplitude, rho0 = 2, rho_dot0 = 0, W^2 = 1
    let erm = solve_ermakov(&sc, 1.0, 2.0, 0.0, &cfg()).unwrap();
    let gamma = solve_gamma(&sc, 4.0, 0.0, 0.0, &cfg()).unwrap();
    let sigma = solve_sigma(&sc, &gamma, Complex64::ZERO, Complex64::ZERO, &cfg()).unwrap();
    let traj = evolve_state(&sc, 1.0, -0.5, &cfg()).unwrap();
    let inv = ermakov_invariant(&erm, &sigma, &traj, &sc).unwrap();
    verdict("criterion 6: Ermakov invariant drift", relative_drift(&inv), 1e-7);
}

#[test]
fn criterion_07_quantum_coefficient_invariance() {
    let mut worst_coeff: f64 = 0.0;
    let mut worst_shadow: f64 = 0.0;
    let (q0, p0) = (0.8, -0.3);
    for (_, sc) in scenarios() {
        let beta = solve_beta(&sc, c(INV_SQRT2), z(0.0, -INV_SQRT2), &cfg()).unwrap();
        let gamma = solve_gamma(&sc, 1.0, 0.0, 0.0, &cfg()).unwrap();
        let sigma =
            solve_sigma(&sc, &gamma, Complex64::ZERO, Complex64::ZERO, &cfg()).unwrap();
        let prop = heisenberg_propagator(&sc, &cfg()).unwrap();
        let report = check_quantum_invariance(
            &beta, &gamma, &sigma, &prop, &sc, HBar(1.0), 1e-8, 1e-8,
        )
        .unwrap();
        for entry in &report.entries {
            if entry.name.contains("coefficient drift") {
                worst_coeff = worst_coeff.max(entry.max_abs_deviation);
            }
        }

        // pulled-back I_L evaluated at (q0, p0, 1) vs the classical value
        let traj = evolve_state(&sc, q0, p0, &cfg()).unwrap();
        let i_l = linear_invariant(&beta, &traj).unwrap();
        for i in 0..prop.times.len() {
            let pulled = pull_back_linear(&linear_invariant_op(&beta, i), &prop.matrices[i]);
            worst_shadow = worst_shadow.max((pulled.eval_classical(q0, p0) - i_l[0]).norm());
        }
    }
    verdict("criterion 7: pulled-back coefficient drift", worst_coeff, 1e-8);
    verdict("criterion 7: classical shadow of pulled-back I_L", worst_shadow, 1e-8);
}

#[test]
fn criterion_08_quantum_products() {
    let hbar = HBar(1.0);
    let mut worst_sym: f64 = 0.0;
    let mut worst_anti: f64 = 0.0;
    for (_, sc) in scenarios() {
        let beta = solve_beta(&sc, c(INV_SQRT2), z(0.0, -INV_SQRT2), &cfg()).unwrap();
        let beta_conj = beta.conjugate();
        let (gamma_b, sigma_b) = gamma_sigma_from_beta(&beta, &sc).unwrap();
        let w = wronskian(&beta_conj, &beta).unwrap();
        for i in 0..beta.times.len() {
            let l = linear_invariant_op(&beta, i);
            let l_dag = linear_invariant_op(&beta_conj, i);

            // antisymmetric part via the full products: the polynomial
            // coefficients cancel exactly, the scalar is -1/2 W i hbar
            let half_comm = multiply(&l_dag, &l, hbar)
                .add(&multiply(&l, &l_dag, hbar).scale(c(-1.0)))
                .scale(c(0.5));
            assert_eq!(half_comm.aqq, Complex64::ZERO);
            assert_eq!(half_comm.app, Complex64::ZERO);
            assert_eq!(half_comm.asym, Complex64::ZERO);
            assert_eq!(half_comm.bq, Complex64::ZERO);
            assert_eq!(half_comm.bp, Complex64::ZERO);
            let expected = -0.5 * w[i] * Complex64::new(0.0, 1.0) * hbar.0;
            worst_anti = worst_anti.max((half_comm.b0 - expected).norm());
            let direct = antisymmetric_product(&l_dag, &l, hbar);
            worst_anti = worst_anti.max((direct.b0 - expected).norm());

            // symmetric product against the quadratic invariant built
            // from (gamma, sigma) derived from beta
            let sym = symmetric_product(&l_dag, &l, hbar);
            let i_q = quad_invariant_op(&gamma_b, &sigma_b, &sc, i).unwrap();
            worst_sym = worst_sym.max(sym.max_coeff_distance(&i_q));
        }
    }
    verdict("criterion 8: antisymmetric product scalar", worst_anti, 1e-12);
    verdict("criterion 8: symmetric product vs quadratic invariant", worst_sym, 1e-8);
}

#[test]
fn criterion_09_coefficient_closure() {
    let mut worst: f64 = 0.0;
    for (_, sc) in scenarios() {
        let gamma = solve_gamma(&sc, 1.0, 0.0, 0.0, &cfg()).unwrap();
        let sigma =
            solve_sigma(&sc, &gamma, Complex64::ZERO, Complex64::ZERO, &cfg()).unwrap();
        let report = reconstruct_coefficients(&gamma, &sigma, &sc, 1e-6).unwrap();
        for entry in &report.entries {
            worst = worst.max(entry.max_abs_deviation);
        }
    }
    verdict("criterion 9: closure residuals", worst, 1e-6);

    // negative control: a corrupted gamma must blow the residuals up
    let sc = Scenario::from_sources("1", "0", 0.0, 20.0, 2001).unwrap();
    let gamma = solve_gamma(&sc, 1.0, 0.0, 0.0, &cfg()).unwrap();
    let sigma = solve_sigma(&sc, &gamma, Complex64::ZERO, Complex64::ZERO, &cfg()).unwrap();
    let corrupted = GammaSolution {
        gamma: gamma
            .times
            .iter()
            .zip(&gamma.gamma)
            .map(|(t, g)| g + 0.01 * t.sin())
            .collect(),
        ..gamma
    };
    let report = reconstruct_coefficients(&corrupted, &sigma, &sc, 1e-6).unwrap();
    let max_res = report
        .entries
        .iter()
        .map(|e| e.max_abs_deviation)
        .fold(0.0, f64::max);
    let pass = max_res >= 1e-3;
    println!(
        "{}: criterion 9: corrupted gamma rejected (max {max_res:.3e}, floor 1.0e-3)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "corrupted gamma gave only {max_res:.3e}");
}

#[test]
fn criterion_10_rk4_order() {
    let endpoint = |h: f64| -> Complex64 {
        let sys = OdeSystem::new(2, |_, y, dy| {
            dy[0] = y[1];
            dy[1] = -y[0];
            Ok(())
        });
        let cfg = IntegratorConfig {
            method: Method::Rk4Fixed,
            h0: h,
            ..IntegratorConfig::default()
        };
        let traj = integrate(&sys, &[c(1.0), c(0.0)], 0.0, &[10.0], &cfg).unwrap();
        traj.states[0][0]
    };
    let exact = c(10.0f64.cos());
    let err_h = (endpoint(0.05) - exact).norm();
    let err_h2 = (endpoint(0.025) - exact).norm();
    let ratio = err_h / err_h2;
    let pass = (14.0..=18.0).contains(&ratio);
    println!(
        "{}: criterion 10: RK4 halving ratio (ratio {ratio:.2}, window [14, 18])",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "ratio {ratio}");
}
