//! Orchestration: execute the selected checks for one configuration,
//! emit time series and the run report.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::{
    check_product_relation, ermakov_invariant, evolve_state, first_integral_residual,
    gamma_sigma_from_beta, linear_invariant, quad_invariant, quad_invariant_takayama,
    reconstruct_coefficients, solve_beta, solve_ermakov, solve_gamma, solve_sigma, wronskian,
};
use crate::config::RunConfig;
use crate::error::Error;
use crate::quantum::{check_quantum_invariance, heisenberg_propagator, HBar};
use crate::report::{DriftEntry, DriftReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub omega_sq: String,
    pub force: String,
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    pub checks: Vec<DriftEntry>,
    pub series_files: Vec<String>,
    pub overall_pass: bool,
    /// Name of the stage that aborted the run, if any.
    pub failed_at: Option<String>,
    /// Wall-clock duration; the only field allowed to differ between
    /// identical runs.
    pub duration_seconds: f64,
}

/// One named column of emitted output.
struct Series {
    name: String,
    values: Vec<Complex64>,
    complex: bool,
}

impl Series {
    fn real(name: &str, values: &[f64]) -> Series {
        Series {
            name: name.to_string(),
            values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            complex: false,
        }
    }

    fn cplx(name: &str, values: &[Complex64]) -> Series {
        Series { name: name.to_string(), values: values.to_vec(), complex: true }
    }
}

/// Execute the configured checks. When `out_dir` is given, the time
/// series and the report are written there (JSON is the source of
/// truth; CSV is a projection of the same numbers).
pub fn run(
    config: &RunConfig,
    out_dir: Option<&Path>,
    format: OutputFormat,
) -> Result<RunReport, Error> {
    let started = Instant::now();
    let scenario = config.scenario()?;
    let cfg = &config.integrator;
    let seeds = &config.seeds;

    let mut report = DriftReport::default();
    let mut series: Vec<Series> = Vec::new();
    let mut failed_at: Option<String> = None;

    let threshold = |name: &str| -> f64 {
        config
            .thresholds
            .get(name)
            .copied()
            .unwrap_or_else(|| crate::config::default_threshold(name))
    };
    let enabled = |name: &str| config.checks.iter().any(|c| c == name);

    // Stage 1: classical evolution and parameter solves. A failure
    // here aborts the run but the report is still produced.
    let outcome: Result<(), Error> = (|| {
        let traj = evolve_state(&scenario, seeds.q0, seeds.p0, cfg)?;
        let beta0 = Complex64::new(seeds.beta0[0], seeds.beta0[1]);
        let beta_dot0 = Complex64::new(seeds.beta_dot0[0], seeds.beta_dot0[1]);
        let beta = solve_beta(&scenario, beta0, beta_dot0, cfg)?;
        let [g0, gd0, gdd0] = seeds.gamma0.unwrap_or([1.0, 0.0, 0.0]);
        let gamma = solve_gamma(&scenario, g0, gd0, gdd0, cfg)?;
        let s0 = seeds.sigma0.unwrap_or([0.0, 0.0]);
        let sd0 = seeds.sigma_dot0.unwrap_or([0.0, 0.0]);
        let sigma = solve_sigma(
            &scenario,
            &gamma,
            Complex64::new(s0[0], s0[1]),
            Complex64::new(sd0[0], sd0[1]),
            cfg,
        )?;

        series.push(Series::real("t", &traj.times));
        series.push(Series::real("q", &traj.q));
        series.push(Series::real("p", &traj.p));
        series.push(Series::cplx("beta", &beta.beta));
        series.push(Series::cplx("beta_dot", &beta.beta_dot));
        series.push(Series::cplx("quad_beta", &beta.quad));
        series.push(Series::real("gamma", &gamma.gamma));
        series.push(Series::real("gamma_dot", &gamma.gamma_dot));
        series.push(Series::real("gamma_ddot", &gamma.gamma_ddot));
        series.push(Series::cplx("sigma", &sigma.sigma));
        series.push(Series::cplx("sigma_dot", &sigma.sigma_dot));
        series.push(Series::cplx("quad_sigma", &sigma.quad));

        if enabled("linear-drift") {
            let i_l = linear_invariant(&beta, &traj)?;
            let i_l_conj = linear_invariant(&beta.conjugate(), &traj)?;
            report.push(DriftEntry::drift("I_L drift", &i_l, threshold("linear-drift")));
            report.push(DriftEntry::drift("I_L* drift", &i_l_conj, threshold("linear-drift")));
            series.push(Series::cplx("I_L", &i_l));
            series.push(Series::cplx("I_L_conj", &i_l_conj));
        }

        let i_q = quad_invariant(&gamma, &sigma, &traj, &scenario)?;
        if enabled("quadratic-drift") {
            report.push(DriftEntry::drift("I_Q drift", &i_q, threshold("quadratic-drift")));
            series.push(Series::cplx("I_Q", &i_q));
        }

        if enabled("takayama-agreement") {
            let i_t = quad_invariant_takayama(&gamma, &sigma, &traj, &scenario)?;
            let diffs: Vec<Complex64> = i_t
                .iter()
                .zip(&i_q)
                .filter_map(|(t, q)| t.map(|v| v - q))
                .collect();
            report.push(DriftEntry::residual(
                "Takayama form agreement",
                &diffs,
                threshold("takayama-agreement"),
            ));
        }

        if enabled("wronskian") {
            let w = wronskian(&beta.conjugate(), &beta)?;
            report.push(DriftEntry::absolute_drift(
                "Wronskian drift",
                &w,
                threshold("wronskian"),
            ));
            series.push(Series::cplx("wronskian", &w));
        }

        if enabled("first-integral") {
            let res = first_integral_residual(&gamma, &scenario)?;
            report.push(DriftEntry::residual_real(
                "first-integral residual",
                &res,
                threshold("first-integral"),
            ));
            // cross-route: W^2 derived from beta equals -(Wronskian)^2
            let (gamma_b, _) = gamma_sigma_from_beta(&beta, &scenario)?;
            let res_b = first_integral_residual(&gamma_b, &scenario)?;
            report.push(DriftEntry::residual_real(
                "first-integral residual (beta route)",
                &res_b,
                threshold("first-integral"),
            ));
        }

        if enabled("product-relation") {
            report.extend(check_product_relation(
                &beta,
                &traj,
                &scenario,
                cfg,
                threshold("product-relation"),
                threshold("product-relation"),
            )?);
        }

        if enabled("coefficient-closure") {
            report.extend(reconstruct_coefficients(
                &gamma,
                &sigma,
                &scenario,
                threshold("coefficient-closure"),
            )?);
        }

        if enabled("ermakov") {
            let w_sq = seeds.w_sq.unwrap_or(gamma.w_sq);
            let rho0 = seeds.rho0.unwrap_or(1.0);
            let rho_dot0 = seeds.rho_dot0.unwrap_or(0.0);
            let erm = solve_ermakov(&scenario, w_sq, rho0, rho_dot0, cfg)?;
            let inv = ermakov_invariant(&erm, &sigma, &traj, &scenario)?;
            report.push(DriftEntry::drift(
                "Ermakov invariant drift",
                &inv,
                threshold("ermakov"),
            ));
            series.push(Series::real("rho", &erm.rho));
            series.push(Series::real("rho_dot", &erm.rho_dot));
        }

        if enabled("quantum-invariance") || enabled("quantum-product") {
            let prop = heisenberg_propagator(&scenario, cfg)?;
            let quantum = check_quantum_invariance(
                &beta,
                &gamma,
                &sigma,
                &prop,
                &scenario,
                HBar::new(config.hbar)?,
                threshold("quantum-invariance"),
                threshold("quantum-product"),
            )?;
            for entry in quantum.entries {
                let is_product = entry.name.contains("product");
                if (is_product && enabled("quantum-product"))
                    || (!is_product && enabled("quantum-invariance"))
                {
                    report.push(entry);
                }
            }
        }

        Ok(())
    })();

    if let Err(err) = outcome {
        failed_at = Some(err.to_string());
    }

    let mut series_files = Vec::new();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
        let name = match format {
            OutputFormat::Csv => "series.csv",
            OutputFormat::Json => "series.json",
        };
        let path = dir.join(name);
        let body = match format {
            OutputFormat::Csv => series_to_csv(&series),
            OutputFormat::Json => series_to_json(&series),
        };
        write_atomic(&path, body.as_bytes())?;
        series_files.push(name.to_string());
    }

    let overall_pass = failed_at.is_none() && report.all_pass();
    let run_report = RunReport {
        omega_sq: config.omega_sq.clone(),
        force: config.force.clone(),
        t0: config.t0,
        t1: config.t1,
        samples: config.samples,
        checks: report.entries,
        series_files,
        overall_pass,
        failed_at,
        duration_seconds: started.elapsed().as_secs_f64(),
    };

    if let Some(dir) = out_dir {
        let path = dir.join("report.json");
        let body = serde_json::to_string_pretty(&run_report)
            .map_err(|e| Error::Config(format!("report serialization: {e}")))?;
        write_atomic(&path, body.as_bytes())?;
    }

    Ok(run_report)
}

/// CSV projection: first column `t`, complex series split into
/// `<name>_re` / `<name>_im`, full round-trip float precision.
fn series_to_csv(series: &[Series]) -> String {
    let mut header = Vec::new();
    for s in series {
        if s.complex {
            header.push(format!("{}_re", s.name));
            header.push(format!("{}_im", s.name));
        } else {
            header.push(s.name.clone());
        }
    }
    let mut out = header.join(",");
    out.push('\n');
    let rows = series.first().map(|s| s.values.len()).unwrap_or(0);
    for i in 0..rows {
        let mut cols = Vec::new();
        for s in series {
            if s.complex {
                cols.push(format!("{}", s.values[i].re));
                cols.push(format!("{}", s.values[i].im));
            } else {
                cols.push(format!("{}", s.values[i].re));
            }
        }
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

fn series_to_json(series: &[Series]) -> String {
    let mut map = serde_json::Map::new();
    for s in series {
        if s.complex {
            let re: Vec<f64> = s.values.iter().map(|v| v.re).collect();
            let im: Vec<f64> = s.values.iter().map(|v| v.im).collect();
            map.insert(format!("{}_re", s.name), serde_json::json!(re));
            map.insert(format!("{}_im", s.name), serde_json::json!(im));
        } else {
            let re: Vec<f64> = s.values.iter().map(|v| v.re).collect();
            map.insert(s.name.clone(), serde_json::json!(re));
        }
    }
    serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("plain floats")
}

/// Write-then-rename so readers never observe a partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let tmp: PathBuf = path.with_extension("tmp");
    let mut f = std::fs::File::create(&tmp)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", tmp.display())))?;
    f.write_all(bytes)
        .and_then(|_| f.sync_all())
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| Error::Config(format!("cannot rename {}: {e}", tmp.display())))?;
    Ok(())
}
