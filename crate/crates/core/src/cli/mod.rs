//! Subcommands behind the `wedge` binary: configuration in, files out.

pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::join;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::glimm::monitor_event;
use crate::functionals::lyapunov::{boundary_estimate, lyapunov};
use crate::functionals::probe::{calibrate, Background};
use crate::gasdyn::{GasModel, State};
use crate::tracking::{run, RunConfig, RunResult, Termination};
use crate::validation::convergence::convergence_study;
use crate::validation::detachment::detachment_scan;
use crate::validation::oracle::{
    oblique_shock, prandtl_meyer, prandtl_meyer_inverse, theta_beta_mach_residual,
};

pub use config::{parse_config, serialize_config, CliConfig};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const STRUCTURAL: u8 = 3;
    pub const MONITOR: u8 = 4;
    pub const ORACLE: u8 = 5;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub strict: bool,
}

/// What a subcommand did: its exit code, the files written and a short summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn code_of(e: &Error) -> u8 {
    match e {
        Error::Config { .. } => exit::CONFIG,
        Error::Io(_) => exit::IO,
        Error::Invalid(_) => exit::IO,
        _ => exit::STRUCTURAL,
    }
}

fn failure(e: Error) -> Outcome {
    Outcome {
        code: code_of(&e),
        files: Vec::new(),
        summary: e.to_string(),
    }
}

fn load(opts: &Options) -> Result<CliConfig> {
    let path = opts
        .config
        .as_ref()
        .ok_or_else(|| Error::config("cli", "--config is required"))?;
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut c = parse_config(&text)?;
    if let Some(s) = opts.seed {
        c.run.seed = s;
    }
    Ok(c)
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir,
            files: Vec::new(),
        })
    }

    fn put(&mut self, name: &str, text: &str) -> Result<()> {
        let p = self.dir.join(name);
        fs::write(&p, text)?;
        self.files.push(p);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        self.put(name, &(text + "\n"))
    }
}

/// Number of events whose monitor verdict fails at rate `c`.
pub fn monitor_violations(r: &RunResult, c: f64) -> usize {
    r.history
        .events
        .iter()
        .enumerate()
        .filter(|(k, e)| {
            let v = monitor_event(
                &r.reports[*k],
                &r.reports[k + 1],
                e.measure_kind,
                e.measure,
                c,
            );
            !(v.f_ok && v.q_ok)
        })
        .count()
}

fn write_run(
    w: &mut Writer,
    prefix: &str,
    r: &RunResult,
    cfg: &RunConfig,
    monitor_c: f64,
) -> Result<()> {
    w.put(
        &format!("{prefix}events.jsonl"),
        &output::events_jsonl(r, monitor_c)?,
    )?;
    w.put(
        &format!("{prefix}functionals.csv"),
        &output::functionals_csv(r)?,
    )?;
    w.put(
        &format!("{prefix}solution.csv"),
        &output::solution_csv(&r.history, &cfg.sampling)?,
    )?;
    w.put(
        &format!("{prefix}pattern.svg"),
        &output::pattern_svg(&r.history, cfg.sampling.y_min),
    )?;
    Ok(())
}

/// Exit code for a finished run: failures are structural; under `strict` an event
/// cap or a monitor violation also fails.
fn run_code(r: &RunResult, violations: usize, strict: bool) -> u8 {
    match r.termination {
        Termination::Failed(_) => exit::STRUCTURAL,
        Termination::EventCap if strict => exit::STRUCTURAL,
        _ if strict && violations > 0 => exit::MONITOR,
        _ => exit::OK,
    }
}

fn describe(r: &RunResult, violations: usize) -> String {
    let end = match &r.termination {
        Termination::Completed => "completed".to_string(),
        Termination::EventCap => "stopped at the event cap".to_string(),
        Termination::Failed(e) => format!("failed: {e}"),
    };
    format!(
        "{end} at x = {:.6}; {} events, {} fronts, max nonphysical {:.3e}, {violations} monitor violations",
        r.history.x_end,
        r.history.events.len(),
        r.final_set.fronts.len(),
        r.max_nonphysical()
    )
}

pub fn cmd_simulate(opts: &Options) -> Outcome {
    let inner = || -> Result<Outcome> {
        let c = load(opts)?;
        let r = run(&c.run)?;
        let mut w = Writer::new(&opts.out_dir)?;
        write_run(&mut w, "", &r, &c.run, c.monitor_c)?;
        let violations = monitor_violations(&r, c.monitor_c);
        Ok(Outcome {
            code: run_code(&r, violations, opts.strict),
            files: w.files,
            summary: describe(&r, violations),
        })
    };
    inner().unwrap_or_else(failure)
}

pub fn cmd_couple(opts: &Options) -> Outcome {
    let inner = || -> Result<Outcome> {
        let c = load(opts)?;
        let mut other = c.run.clone();
        other.inflow = c.couple_inflow();
        other.validate()?;
        let (ru, rv) = join(|| run(&c.run), || run(&other));
        let (ru, rv) = (ru?, rv?);
        let x_end = ru.history.x_end.min(rv.history.x_end);
        let n = c.couple_stations.max(2);
        let mut phis = Vec::with_capacity(n);
        let mut estimates = Vec::new();
        for i in 0..n {
            let x = x_end * i as f64 / (n - 1) as f64;
            let (u, v) = (ru.history.front_set_at(x), rv.history.front_set_at(x));
            phis.push(lyapunov(
                &u,
                &v,
                &c.run.boundary,
                &c.weights,
                &c.run.constants,
                &c.run.gas,
                c.run.sampling.y_min,
            ));
            if let Some(b) = boundary_estimate(&u, &v, &c.run.boundary, &c.run.gas)? {
                estimates.push(b);
            }
        }
        let mut w = Writer::new(&opts.out_dir)?;
        write_run(&mut w, "", &ru, &c.run, c.monitor_c)?;
        w.put("v_events.jsonl", &output::events_jsonl(&rv, c.monitor_c)?)?;
        w.put("v_functionals.csv", &output::functionals_csv(&rv)?)?;
        w.put("coupling.csv", &output::coupling_csv(&phis)?)?;
        w.put("boundary.csv", &output::boundary_csv(&estimates)?)?;
        let violations =
            monitor_violations(&ru, c.monitor_c) + monitor_violations(&rv, c.monitor_c);
        let code = run_code(&ru, violations, opts.strict).max(run_code(&rv, 0, opts.strict));
        let (p0, p1) = (phis[0].phi, phis[n - 1].phi);
        let summary = format!(
            "phi {p0:.6e} -> {p1:.6e}; L1 {:.6e} -> {:.6e}; u {}; v {}",
            phis[0].l1,
            phis[n - 1].l1,
            describe(&ru, 0),
            describe(&rv, 0)
        );
        Ok(Outcome {
            code,
            files: w.files,
            summary,
        })
    };
    inner().unwrap_or_else(failure)
}

pub fn cmd_calibrate(opts: &Options) -> Outcome {
    let inner = || -> Result<Outcome> {
        let mut c = load(opts)?;
        let gas = c.run.gas;
        let vertex = c.run.inflow.vertex_state();
        let bg = Background::straight_wedge(vertex.mach(&gas), vertex.angle(), &gas)?;
        let cal = calibrate(
            &bg,
            &gas,
            c.calibrate_v_bound,
            c.calibrate_samples,
            c.run.seed,
        )?;
        c.run.constants = cal.constants;
        c.weights = cal.weights;
        let mut w = Writer::new(&opts.out_dir)?;
        w.json("calibration.json", &cal)?;
        w.put("calibrated.cfg", &serialize_config(&c))?;
        let code = if opts.strict && !cal.margins.all_hold() {
            exit::MONITOR
        } else {
            exit::OK
        };
        let k = &cal.constants;
        let summary = format!(
            "C* = {:.4}, K* = {:.4}, K~b0 = {:.4}, k- = {:.4}, kappa = {:.4}; all cases close: {}",
            k.c_star,
            k.k_star,
            k.k_b0_tilde,
            k.k_minus,
            k.kappa,
            cal.margins.all_hold()
        );
        Ok(Outcome {
            code,
            files: w.files,
            summary,
        })
    };
    inner().unwrap_or_else(failure)
}

pub fn cmd_converge(opts: &Options) -> Outcome {
    let inner = || -> Result<Outcome> {
        let c = load(opts)?;
        let station = c.converge_station.unwrap_or(0.8 * c.run.x_max);
        let t = convergence_study(&c.run, &c.converge_eps, station, c.run.sampling.y_min)?;
        let mut w = Writer::new(&opts.out_dir)?;
        w.put("convergence.csv", &output::convergence_csv(&t)?)?;
        w.json("convergence.json", &t)?;
        let weak = t.slope.is_none_or(|s| s < 0.4);
        let code = if opts.strict && weak {
            exit::MONITOR
        } else {
            exit::OK
        };
        let summary = match t.slope {
            Some(s) => format!("log-log slope {s:.4} over {} runs", t.rows.len()),
            None => "too few runs reached the station for a slope".to_string(),
        };
        Ok(Outcome {
            code,
            files: w.files,
            summary,
        })
    };
    inner().unwrap_or_else(failure)
}

/// One row of the oracle self-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: impl Into<String>, value: f64, tolerance: f64) -> OracleCheck {
    OracleCheck {
        name: name.into(),
        value,
        tolerance,
        pass: value.abs() <= tolerance,
    }
}

/// Identity residuals of the closed-form references and the tracker's agreement with them.
pub fn oracle_checks(gas: &GasModel) -> Vec<OracleCheck> {
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    for m in [1.5, 2.0, 3.0, 5.0] {
        for deg in [2.0, 5.0, 10.0, 15.0, 20.0] {
            let th = f64::to_radians(deg);
            let sol = oblique_shock(m, th, gas);
            for beta in [sol.beta_weak(), sol.beta_strong()].into_iter().flatten() {
                worst = worst.max(theta_beta_mach_residual(m, th, beta, gas).abs());
            }
        }
    }
    out.push(check("theta-beta-mach identity", worst, 1e-12));
    let mut worst = 0.0f64;
    for k in 0..=50 {
        let m = 1.01 + (5.0 - 1.01) * k as f64 / 50.0;
        worst = worst.max((prandtl_meyer_inverse(prandtl_meyer(m, gas), gas) - m).abs());
    }
    out.push(check("prandtl-meyer round trip", worst, 1e-10));
    let theta = 10f64.to_radians();
    let cfg = RunConfig::straight_wedge(3.0, theta, *gas, 1e-2);
    let (slope, tangency) = match run(&cfg) {
        Ok(r) => match r.final_set.strong() {
            Some(s) => {
                let beta = theta - s.sigma.atan();
                let oracle = oblique_shock(3.0, theta, gas)
                    .beta_weak()
                    .unwrap_or(f64::NAN);
                (
                    (beta - oracle) / oracle,
                    r.final_set.top_state().v / r.final_set.top_state().speed(),
                )
            }
            None => (f64::INFINITY, f64::INFINITY),
        },
        Err(_) => (f64::INFINITY, f64::INFINITY),
    };
    out.push(check("straight wedge shock angle (relative)", slope, 1e-8));
    out.push(check("straight wedge wall tangency", tangency, 1e-10));
    let up = State::from_mach(3.0, theta, 1.0, gas);
    out.push(check("inflow Mach", up.mach(gas) - 3.0, 1e-12));
    out
}

pub fn cmd_oracle(opts: &Options) -> Outcome {
    let inner = || -> Result<Outcome> {
        let gas = match &opts.config {
            Some(_) => load(opts)?.run.gas,
            None => GasModel::new(1.4)?,
        };
        let checks = oracle_checks(&gas);
        let scans: Vec<_> = [1.5, 2.0, 3.0, 4.0, 5.0]
            .iter()
            .map(|m| detachment_scan(*m, &gas))
            .collect();
        let mut w = Writer::new(&opts.out_dir)?;
        let mut csv = String::from("check,value,tolerance,pass\n");
        for c in &checks {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                c.name,
                output::g17(c.value),
                output::g17(c.tolerance),
                c.pass
            ));
        }
        w.put("oracle.csv", &csv)?;
        let mut csv = String::from("mach,gamma,omega_crit_deg,max_deflection_deg\n");
        for s in &scans {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                output::g17(s.mach),
                output::g17(s.gamma),
                output::g17(s.omega_crit.to_degrees()),
                output::g17(s.max_deflection.to_degrees())
            ));
        }
        w.put("detachment.csv", &csv)?;
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        let code = if failed.is_empty() {
            exit::OK
        } else {
            exit::ORACLE
        };
        let summary = if failed.is_empty() {
            format!("{} oracle checks pass", checks.len())
        } else {
            format!("failed: {}", failed.join("; "))
        };
        Ok(Outcome {
            code,
            files: w.files,
            summary,
        })
    };
    inner().unwrap_or_else(failure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight_config(dir: &Path) -> PathBuf {
        let g = GasModel::new(1.4).unwrap();
        let s = State::from_mach(3.0, 10f64.to_radians(), 1.0, &g);
        let p = dir.join("wedge.cfg");
        fs::write(
            &p,
            format!(
                "inflow.row = -inf, {}, {}, {}, {}\ntracking.x_max = 1\n",
                s.u, s.v, s.p, s.rho
            ),
        )
        .unwrap();
        p
    }

    fn opts(dir: &Path, config: Option<PathBuf>) -> Options {
        Options {
            config,
            out_dir: dir.join("out"),
            seed: None,
            strict: true,
        }
    }

    #[test]
    fn simulate_writes_four_files() {
        let dir = tempfile::tempdir().unwrap();
        let o = cmd_simulate(&opts(dir.path(), Some(straight_config(dir.path()))));
        assert_eq!(o.code, exit::OK, "{}", o.summary);
        assert_eq!(o.files.len(), 4);
        for f in &o.files {
            assert!(f.exists());
        }
    }

    #[test]
    fn simulate_is_byte_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("p.cfg");
        let base = RunConfig::perturbed_wedge(4, 3e-2);
        let mut c = CliConfig::new(base);
        c.run.x_max = 0.6;
        fs::write(&cfg, serialize_config(&c)).unwrap();
        let read = |sub: &str| {
            let o = Options {
                config: Some(cfg.clone()),
                out_dir: dir.path().join(sub),
                seed: None,
                strict: false,
            };
            let out = cmd_simulate(&o);
            assert_eq!(out.code, exit::OK, "{}", out.summary);
            out.files
                .iter()
                .map(|f| fs::read(f).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(read("a"), read("b"));
    }

    #[test]
    fn config_errors_have_their_own_code() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.cfg");
        fs::write(&p, "inflow.row = -inf, 0.5, 0.05, 1, 1\n").unwrap();
        assert_eq!(cmd_simulate(&opts(dir.path(), Some(p))).code, exit::CONFIG);
        assert_eq!(cmd_simulate(&opts(dir.path(), None)).code, exit::CONFIG);
        let missing = dir.path().join("missing.cfg");
        assert_eq!(
            cmd_simulate(&opts(dir.path(), Some(missing))).code,
            exit::IO
        );
    }

    #[test]
    fn oracle_passes() {
        let dir = tempfile::tempdir().unwrap();
        let o = cmd_oracle(&opts(dir.path(), None));
        assert_eq!(o.code, exit::OK, "{}", o.summary);
    }

    #[test]
    fn couple_reports_phi() {
        let dir = tempfile::tempdir().unwrap();
        let o = cmd_couple(&opts(dir.path(), Some(straight_config(dir.path()))));
        assert_eq!(o.code, exit::OK, "{}", o.summary);
        let text = fs::read_to_string(dir.path().join("out/coupling.csv")).unwrap();
        assert_eq!(text.lines().count(), 22);
    }
}
