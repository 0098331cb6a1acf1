//! Executes a validated [`Plan`] and writes its dataset.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use sophase::bohmian::{
    bohm_trajectory, bohm_trajectory_phi, classical_matching_x0, limiting_trajectory,
    quantum_force, quantum_phase, quantum_potential, special_initial_conditions, velocity_field,
    EquilibriumSampler, HighEnergyLimit, LimitKind,
};
use sophase::field::{fmt_num, PhaseSpaceGrid, VectorField};
use sophase::flow::{
    classical_currents, continuity_residual_field, divergence_w_thermal, find_stagnation_points,
    loop_flux, pure_state_currents, thermal_currents_estimate, FlowConfig, StagnationReport,
};
use sophase::pure_state::{
    classical_orbit, uv_envelope, wavepacket_density, wigner_pure_estimate, ClassicalOrbit,
};
use sophase::thermal::{
    partition_function, partition_sum, partition_tail_bound, purity_closed_form,
    purity_hypergeometric_reduction_check, purity_thermal_numeric, wigner_stationary,
    wigner_thermal_boltzmann, wigner_thermal_estimate, wigner_thermal_lowt, StationaryState,
};
use sophase::Error;

use crate::config::{
    plan, Diagnostic, Format, Job, LimitChoice, Plan, Quantity, RunConfig, StartBase, StateChoice,
    ThermalMethod,
};
use crate::figures::figure_configs;

/// Column-oriented numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_num(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{column: [values...]}`; NaN becomes null.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (c, name) in self.columns.iter().enumerate() {
            let col: Vec<Value> = self.rows.iter().map(|r| json_num(r[c])).collect();
            m.insert(name.clone(), Value::Array(col));
        }
        Value::Object(m)
    }
}

fn json_num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Result of a command before it is written out.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub csv: String,
    pub json: Value,
    /// largest quadrature error estimate met, 0 for closed forms
    pub max_error: f64,
    /// short human-readable result
    pub headline: String,
}

impl Dataset {
    fn table(t: Table, max_error: f64, headline: String) -> Self {
        Self {
            csv: t.to_csv(),
            json: t.to_json(),
            max_error,
            headline,
        }
    }
}

/// How a run failed.
#[derive(Debug)]
pub enum Failure {
    Invalid(Vec<Diagnostic>),
    Numerical(Error),
    Io(String, std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) | Failure::Io(..) => 1,
            Failure::Numerical(_) => 2,
        }
    }

    /// Machine-readable error object `{code, message, field}`.
    pub fn to_json(&self) -> Value {
        match self {
            Failure::Invalid(d) => json!({
                "code": "validation",
                "message": d.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "),
                "field": d.first().map(|d| d.field.clone()),
                "diagnostics": d,
            }),
            Failure::Numerical(e) => {
                json!({ "code": e.code(), "message": e.to_string(), "field": null })
            }
            Failure::Io(path, e) => {
                json!({ "code": "io", "message": format!("{path}: {e}"), "field": "output" })
            }
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numerical(e)
    }
}

/// What a successful run reports.
#[derive(Debug, Clone)]
pub struct Report {
    pub output: PathBuf,
    pub seconds: f64,
    pub max_error: f64,
    pub summary: String,
}

/// Validates, computes and writes the dataset.
pub fn run(config: &RunConfig) -> Result<Report, Failure> {
    let start = Instant::now();
    let plan = plan(config).map_err(Failure::Invalid)?;
    if let Job::Figures { dir, grid } = &plan.job {
        return run_figures(dir, grid.as_deref(), plan.format, config.seed, start);
    }
    let data = compute(&plan.job)?;
    let body = match plan.format {
        Format::Csv => data.csv,
        Format::Json => {
            let doc = json!({
                "meta": {
                    "command": config.command.name(),
                    "params": config.params,
                    "seed": config.seed,
                    "version": env!("CARGO_PKG_VERSION"),
                },
                "data": data.json,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json");
            s.push('\n');
            s
        }
    };
    write_file(&plan.output, &body)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(Report {
        summary: summary_line(config, &plan, seconds, data.max_error, &data.headline),
        output: plan.output,
        seconds,
        max_error: data.max_error,
    })
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Failure::Io(parent.display().to_string(), e))?;
    }
    fs::write(path, body).map_err(|e| Failure::Io(path.display().to_string(), e))
}

fn summary_line(
    config: &RunConfig,
    plan: &Plan,
    seconds: f64,
    max_error: f64,
    headline: &str,
) -> String {
    let mut s = format!("{}", config.command);
    for (k, v) in &config.params {
        let _ = write!(s, " {k}={v}");
    }
    let _ = write!(
        s,
        " -> {} [{seconds:.3} s, max quadrature error {max_error:.2e}]",
        plan.output.display()
    );
    if !headline.is_empty() {
        let _ = write!(s, " {headline}");
    }
    s
}

fn run_figures(
    dir: &Path,
    grid: Option<&str>,
    format: Format,
    seed: u64,
    start: Instant,
) -> Result<Report, Failure> {
    let mut max_error: f64 = 0.0;
    let configs = figure_configs(dir, grid, format);
    for mut c in configs.iter().cloned() {
        c.seed = seed;
        let r = run(&c)?;
        max_error = max_error.max(r.max_error);
    }
    let seconds = start.elapsed().as_secs_f64();
    Ok(Report {
        output: dir.to_path_buf(),
        seconds,
        max_error,
        summary: format!(
            "figures -> {} ({} datasets) [{seconds:.3} s, max quadrature error {max_error:.2e}]",
            dir.display(),
            configs.len()
        ),
    })
}

/// Runs the physics for a job.
pub fn compute(job: &Job) -> Result<Dataset, Error> {
    match job {
        Job::PureWigner {
            pure,
            tau,
            grid,
            along_orbit,
        } => {
            let p = pure.params;
            if *along_orbit {
                let orbit = ClassicalOrbit::new(
                    p.alpha(),
                    pure.epsilon.unwrap_or(0.0),
                    std::f64::consts::PI,
                )?;
                let rows: Vec<(Vec<f64>, f64)> = tau
                    .par_iter()
                    .map(|&t| {
                        let (x, k) = classical_orbit(t, &orbit)?;
                        let w = wigner_pure_estimate(x, k, t, &p)?;
                        Ok((vec![t, x, k, w.value], w.error))
                    })
                    .collect::<Result<_, Error>>()?;
                let mut t = Table::new(&["tau", "x", "k", "w"]);
                let err = rows.iter().fold(0.0f64, |m, r| m.max(r.1));
                let ws: Vec<f64> = rows.iter().map(|r| r.0[3]).collect();
                t.rows = rows.into_iter().map(|r| r.0).collect();
                let (lo, hi) = ws
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &w| {
                        (a.min(w), b.max(w))
                    });
                return Ok(Dataset::table(
                    t,
                    err,
                    format!(
                        "relative variation along orbit {:.3e}",
                        (hi - lo) / hi.abs()
                    ),
                ));
            }
            let t0 = tau[0];
            let env = uv_envelope(t0, &p);
            let (values, err) = grid_eval(*grid, |x, k| {
                let w = wigner_pure_estimate(x, k, t0, &p)?;
                Ok((vec![w.value], w.error))
            })?;
            let mut ds = grid_table(*grid, &["w"], values, err, String::new());
            ds.json = json!({ "tau": t0, "u": env.u, "v": env.v, "grid": ds.json });
            Ok(ds)
        }
        Job::BohmTraj {
            pure,
            tau,
            starts,
            limit,
            ensemble,
            seed,
        } => bohm_traj(
            pure.params,
            pure.epsilon,
            tau,
            starts,
            *limit,
            *ensemble,
            *seed,
        ),
        Job::QuantumForce { pure, tau, x } => {
            let p = pure.params;
            let xs = line(*x);
            let mut t = Table::new(&["tau", "x", "density", "q", "force"]);
            for &tt in tau {
                for &xx in &xs {
                    t.rows.push(vec![
                        tt,
                        xx,
                        wavepacket_density(xx, tt, &p),
                        quantum_potential(xx, tt, &p),
                        quantum_force(xx, tt, &p),
                    ]);
                }
            }
            Ok(Dataset::table(t, 0.0, String::new()))
        }
        Job::ThermalWigner {
            state,
            method,
            grid,
        } => {
            let (values, err) = match *method {
                ThermalMethod::Closed => grid_eval(*grid, |x, k| {
                    let w = wigner_thermal_estimate(x, k, state)?;
                    Ok((vec![w.value], w.error))
                })?,
                ThermalMethod::Boltzmann(n) => grid_eval(*grid, |x, k| {
                    Ok((vec![wigner_thermal_boltzmann(x, k, state, n)?], 0.0))
                })?,
                ThermalMethod::Stationary(n) => grid_eval(*grid, |x, k| {
                    Ok((vec![wigner_stationary(n, state.alpha, x, k)?], 0.0))
                })?,
            };
            let headline = match method {
                ThermalMethod::Stationary(n) => {
                    let s = StationaryState {
                        n: *n,
                        alpha: state.alpha,
                    };
                    format!("energy {}", s.energy())
                }
                _ => format!("Z = {}", partition_function(state.b)?),
            };
            Ok(grid_table(*grid, &["w"], values, err, headline))
        }
        Job::Currents {
            state,
            classical,
            grid,
        } => {
            let (values, err) = grid_eval(*grid, |x, k| match state {
                StateChoice::Thermal(s) => {
                    if *classical {
                        let w = wigner_thermal_estimate(x, k, s)?;
                        let c = classical_currents(x, k, w.value, s.alpha());
                        Ok((vec![c.w, c.j_x, c.j_k, c.delta_j_k(s.alpha())], w.error))
                    } else {
                        let (c, e) = thermal_currents_estimate(x, k, s)?;
                        Ok((vec![c.w, c.j_x, c.j_k, c.delta_j_k(s.alpha())], e))
                    }
                }
                StateChoice::Pure {
                    params,
                    tau,
                    truncation,
                } => {
                    let c = if *classical {
                        let w = wigner_pure_estimate(x, k, *tau, params)?.value;
                        classical_currents(x, k, w, params.alpha())
                    } else {
                        pure_state_currents(x, k, *tau, params, *truncation)?
                    };
                    Ok((vec![c.w, c.j_x, c.j_k, c.delta_j_k(params.alpha())], 0.0))
                }
            })?;
            Ok(grid_table(
                *grid,
                &["w", "j_x", "j_k", "delta_j_k"],
                values,
                err,
                String::new(),
            ))
        }
        Job::Divergence {
            state,
            quantity,
            grid,
        } => match quantity {
            Quantity::DivW => {
                let StateChoice::Thermal(s) = state else {
                    unreachable!("validated")
                };
                // points where 𝒲 vanishes are reported as NaN
                let (values, _) = grid_eval(*grid, |x, k| match divergence_w_thermal(x, k, s) {
                    Ok(v) => Ok((vec![v], 0.0)),
                    Err(Error::NearZero { .. }) => Ok((vec![f64::NAN], 0.0)),
                    Err(e) => Err(e),
                })?;
                let nan = values.iter().filter(|v| v[0].is_nan()).count();
                Ok(grid_table(
                    *grid,
                    &["div_w"],
                    values,
                    0.0,
                    format!("{nan} near-zero points"),
                ))
            }
            Quantity::Continuity => {
                let cfg = flow_config(state);
                let f = continuity_residual_field(*grid, &cfg)?;
                let values = f.values.iter().map(|&v| vec![v]).collect();
                let headline = format!("max |residual| {:.3e}", f.max_abs());
                Ok(grid_table(f.grid, &["residual"], values, 0.0, headline))
            }
        },
        Job::Stagnation { state, grid } => {
            let mut reports = Vec::new();
            for cfg in [
                FlowConfig::Thermal(*state),
                FlowConfig::ThermalClassical(*state),
            ] {
                let eval = |x: f64, k: f64| cfg.current(x, k).map(|c| (c.j_x, c.j_k));
                let field = VectorField::evaluate(*grid, eval)?;
                reports.push(find_stagnation_points(&field, &eval)?);
            }
            stagnation_dataset(&reports[0], &reports[1], state.alpha())
        }
        Job::LoopFlux {
            state,
            epsilons,
            n_tau,
        } => {
            let mut t = Table::new(&["epsilon", "value", "abs_bound"]);
            let mut worst: f64 = 0.0;
            for &e in epsilons {
                let orbit = ClassicalOrbit::new(state.alpha(), e, 0.0)?;
                let r = loop_flux(&orbit, state, *n_tau)?;
                worst = worst.max(r.value.abs());
                t.rows.push(vec![e, r.value, r.abs_bound]);
            }
            let err = t.rows.iter().fold(0.0f64, |m, r| m.max(r[2]));
            Ok(Dataset::table(t, err, format!("max |flux| {worst:.3e}")))
        }
        Job::Purity {
            states,
            check_reduction,
        } => {
            let cols: &[&str] = if *check_reduction {
                &[
                    "alpha",
                    "b",
                    "purity_numeric",
                    "purity_closed",
                    "abs_error",
                    "reduction_residual",
                ]
            } else {
                &["alpha", "b", "purity_numeric", "purity_closed", "abs_error"]
            };
            let mut t = Table::new(cols);
            let mut err: f64 = 0.0;
            for s in states {
                let p = purity_thermal_numeric(s)?;
                let closed = purity_closed_form(s.b);
                err = err.max(p.error);
                let mut row = vec![s.alpha(), s.b, p.value, closed, (p.value - closed).abs()];
                if *check_reduction {
                    row.push(purity_hypergeometric_reduction_check(s.alpha, s.b)?);
                }
                t.rows.push(row);
            }
            let worst = t.rows.iter().fold(0.0f64, |m, r| m.max(r[4]));
            Ok(Dataset::table(
                t,
                err,
                format!("max |numeric - tanh b| {worst:.3e}"),
            ))
        }
        Job::Partition { bs } => {
            let mut t = Table::new(&["b", "z_closed", "z_sum", "n_terms", "tail_bound"]);
            for &b in bs {
                let n = sophase::thermal::boltzmann_cutoff(b);
                t.rows.push(vec![
                    b,
                    partition_function(b)?,
                    partition_sum(b, n),
                    (n + 1) as f64,
                    partition_tail_bound(b, n),
                ]);
            }
            let headline = t
                .rows
                .iter()
                .map(|r| format!("Z({}) = {:.6}", r[0], r[1]))
                .collect::<Vec<_>>()
                .join(" ");
            Ok(Dataset::table(t, 0.0, headline))
        }
        Job::LowTCheck { state, m_max, k, x } => {
            let xs = line(*x);
            let rows: Vec<(Vec<f64>, f64)> = xs
                .par_iter()
                .map(|&xx| {
                    let w = wigner_thermal_estimate(xx, *k, state)?;
                    let l = wigner_thermal_lowt(xx, *k, state, *m_max)?;
                    Ok((vec![xx, *k, w.value, l, (l - w.value).abs()], w.error))
                })
                .collect::<Result<_, Error>>()?;
            let mut t = Table::new(&["x", "k", "w_closed", "w_lowt", "abs_diff"]);
            let err = rows.iter().fold(0.0f64, |m, r| m.max(r.1));
            t.rows = rows.into_iter().map(|r| r.0).collect();
            let worst = t.rows.iter().fold(0.0f64, |m, r| m.max(r[4]));
            Ok(Dataset::table(
                t,
                err,
                format!("max |lowT - closed| {worst:.3e}"),
            ))
        }
        Job::Figures { .. } => unreachable!("handled by run"),
    }
}

fn flow_config(state: &StateChoice) -> FlowConfig {
    match *state {
        StateChoice::Thermal(s) => FlowConfig::Thermal(s),
        StateChoice::Pure {
            params,
            tau,
            truncation,
        } => FlowConfig::Pure {
            params,
            tau,
            truncation,
        },
    }
}

fn line((a, b, n): (f64, f64, usize)) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

type Row = (Vec<f64>, f64);

/// Evaluates `f` on the grid in row order; returns the values and the
/// largest error estimate.
fn grid_eval(
    grid: PhaseSpaceGrid,
    f: impl Fn(f64, f64) -> Result<Row, Error> + Sync,
) -> Result<(Vec<Vec<f64>>, f64), Error> {
    let rows = grid.map(f)?;
    let err = rows.iter().fold(0.0f64, |m, r| m.max(r.1));
    Ok((rows.into_iter().map(|r| r.0).collect(), err))
}

fn grid_table(
    grid: PhaseSpaceGrid,
    names: &[&str],
    values: Vec<Vec<f64>>,
    err: f64,
    headline: String,
) -> Dataset {
    let mut cols = vec!["x", "k"];
    cols.extend_from_slice(names);
    let mut t = Table::new(&cols);
    for i in 0..grid.nx {
        for j in 0..grid.nk {
            let mut row = vec![grid.x(i), grid.k(j)];
            row.extend_from_slice(&values[grid.index(i, j)]);
            t.rows.push(row);
        }
    }
    Dataset::table(t, err, headline)
}

fn bohm_traj(
    p: sophase::pure_state::WavepacketParams,
    epsilon: Option<f64>,
    tau: &[f64],
    starts: &[crate::config::StartPoint],
    limit: Option<LimitChoice>,
    ensemble: usize,
    seed: u64,
) -> Result<Dataset, Error> {
    let special = special_initial_conditions(p.alpha(), p.gamma, p.phi)?;
    let mut x0s = Vec::new();
    for s in starts {
        let base = match s.base {
            StartBase::Classical => classical_matching_x0(p.alpha(), epsilon.unwrap_or(0.0))?,
            StartBase::Center => special.center,
            StartBase::Mean => special.mean,
            StartBase::Value(v) => v,
        };
        let x0 = base + s.offset;
        if x0.is_nan() || x0 <= 0.0 {
            return Err(Error::Domain {
                what: "bohm_trajectory",
                constraint: format!("start {} gives x0 = {x0} <= 0", s.label),
            });
        }
        x0s.push((s.label.clone(), x0));
    }
    // the ensemble is drawn serially so the output does not depend on threads
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = (ensemble > 0).then(|| EquilibriumSampler::new(&p));
    for i in 0..ensemble {
        let x0 = sampler.as_ref().expect("sampler").sample(&mut rng);
        x0s.push((format!("ens{i}"), x0));
    }

    let orbit = match epsilon {
        Some(e) => Some(ClassicalOrbit::new(p.alpha(), e, std::f64::consts::PI)?),
        None => None,
    };
    let mut cols = vec!["tau".to_string()];
    if orbit.is_some() {
        cols.push("x_orbit".into());
        cols.push("k_orbit".into());
    }
    for (label, _) in &x0s {
        for q in ["x", "v", "phase", "q", "fq"] {
            cols.push(format!("{q}_{label}"));
        }
        if limit.is_some() {
            cols.push(format!("limit_{label}"));
        }
    }
    let mut t = Table {
        columns: cols,
        rows: Vec::new(),
    };
    let mut worst_classical: f64 = 0.0;
    for &tt in tau {
        let mut row = vec![tt];
        if let Some(o) = &orbit {
            let (x, k) = classical_orbit(tt, o)?;
            row.extend([x, k]);
        }
        for (i, (_, x0)) in x0s.iter().enumerate() {
            let start = starts.get(i);
            let x = if p.phi == 0.0 {
                bohm_trajectory(tt, *x0, p.gamma)
            } else {
                bohm_trajectory_phi(tt, *x0, &p)
            };
            let fq = quantum_force(x, tt, &p);
            if start.is_some_and(|s| s.base == StartBase::Classical && s.offset == 0.0) {
                worst_classical = worst_classical.max(fq.abs());
            }
            row.extend([
                x,
                velocity_field(x, tt, &p),
                quantum_phase(x, tt, &p),
                quantum_potential(x, tt, &p),
                fq,
            ]);
            if let Some(l) = limit {
                let c0 = x0 / (0.5 * p.gamma).sinh();
                let kind = match l {
                    LimitChoice::Elastic => LimitKind::ElasticCollision,
                    LimitChoice::Harmonic => LimitKind::Harmonic,
                };
                row.push(limiting_trajectory(tt, &HighEnergyLimit { c0, kind })?);
            }
        }
        t.rows.push(row);
    }
    let headline = if starts.iter().any(|s| s.base == StartBase::Classical) {
        format!("max |F_q| on classical start {worst_classical:.3e}")
    } else {
        String::new()
    };
    Ok(Dataset::table(t, 0.0, headline))
}

fn stagnation_dataset(
    quantum: &StagnationReport,
    classical: &StagnationReport,
    alpha: f64,
) -> Result<Dataset, Error> {
    let mut csv = String::from("field,x,k,winding,circulation,kind,residual\n");
    for (name, r) in [("quantum", quantum), ("classical", classical)] {
        for p in &r.points {
            let kind = serde_json::to_value(p.kind).expect("kind");
            let _ = writeln!(
                csv,
                "{name},{},{},{},{},{},{}",
                fmt_num(p.x),
                fmt_num(p.k),
                p.winding,
                p.circulation,
                kind.as_str().unwrap_or(""),
                fmt_num(p.residual)
            );
        }
    }
    let expected = ((4.0 * alpha * alpha - 1.0) / 4.0).powf(0.25);
    let headline = format!(
        "{} quantum / {} classical points, classical vortex expected at x = {expected:.6}",
        quantum.points.len(),
        classical.points.len()
    );
    Ok(Dataset {
        csv,
        json: json!({ "quantum": quantum, "classical": classical, "expected_vortex_x": expected }),
        max_error: 0.0,
        headline,
    })
}
