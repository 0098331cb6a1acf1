//! Run configuration: the command, a flat key/value parameter map and the
//! parsing/validation that turns it into a typed [`Job`].

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use sophase::field::PhaseSpaceGrid;
use sophase::flow::Truncation;
use sophase::pure_state::{gamma_from_energy, WavepacketParams};
use sophase::thermal::ThermalState;
use sophase::HalfIntOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Command {
    PureWigner,
    BohmTraj,
    QuantumForce,
    ThermalWigner,
    Currents,
    Divergence,
    Stagnation,
    LoopFlux,
    Purity,
    Partition,
    LowTCheck,
    Figures,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::PureWigner,
        Command::BohmTraj,
        Command::QuantumForce,
        Command::ThermalWigner,
        Command::Currents,
        Command::Divergence,
        Command::Stagnation,
        Command::LoopFlux,
        Command::Purity,
        Command::Partition,
        Command::LowTCheck,
        Command::Figures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::PureWigner => "pure-wigner",
            Command::BohmTraj => "bohm-traj",
            Command::QuantumForce => "quantum-force",
            Command::ThermalWigner => "thermal-wigner",
            Command::Currents => "currents",
            Command::Divergence => "divergence",
            Command::Stagnation => "stagnation",
            Command::LoopFlux => "loop-flux",
            Command::Purity => "purity",
            Command::Partition => "partition",
            Command::LowTCheck => "lowT-check",
            Command::Figures => "figures",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
    }

    /// Keys this command reads, besides `output` and `format`.
    pub fn keys(self) -> Vec<&'static str> {
        const GRID: &[&str] = &["grid", "x-min", "x-max", "nx", "k-min", "k-max", "nk"];
        const PURE: &[&str] = &["alpha", "gamma", "epsilon", "phi", "tau"];
        let (own, with_grid): (&[&str], bool) = match self {
            Command::PureWigner => (&["along-orbit"], true),
            Command::BohmTraj => (&["set", "limit", "ensemble"], false),
            Command::QuantumForce => (&["x-min", "x-max", "nx"], false),
            Command::ThermalWigner => (&["alpha", "b", "method", "n", "n-max"], true),
            Command::Currents => (&["state", "current", "b", "eta-max"], true),
            Command::Divergence => (&["state", "quantity", "b", "eta-max"], true),
            Command::Stagnation => (&["alpha", "b"], true),
            Command::LoopFlux => (&["alpha", "b", "epsilon", "n-tau"], false),
            Command::Purity => (&["alpha", "b", "check-reduction"], false),
            Command::Partition => (&["b"], false),
            Command::LowTCheck => (&["alpha", "b", "m-max", "k", "x-min", "x-max", "nx"], false),
            Command::Figures => (&["output-dir"], true),
        };
        let pure = matches!(
            self,
            Command::PureWigner
                | Command::BohmTraj
                | Command::QuantumForce
                | Command::Currents
                | Command::Divergence
        );
        let mut keys = own.to_vec();
        if pure {
            keys.extend_from_slice(PURE);
        }
        if with_grid {
            keys.extend_from_slice(GRID);
        }
        keys
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Normalized keys (lowercase, `_` → `-`) to raw string values.
    pub params: BTreeMap<String, String>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: BTreeMap::new(),
            seed: 0,
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(normalize_key(key), value.to_string());
        self
    }
}

pub fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

/// Reads `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, Diagnostic> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Diagnostic::new(
                "config",
                format!("line {}: expected key = value", n + 1),
                "cli",
            ));
        };
        out.insert(normalize_key(k), v.trim().to_string());
    }
    Ok(out)
}

/// One problem with a configuration: the offending field, what it must
/// satisfy, and which module imposes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub field: String,
    pub constraint: String,
    pub module: &'static str,
}

impl Diagnostic {
    pub fn new(
        field: impl Into<String>,
        constraint: impl Into<String>,
        module: &'static str,
    ) -> Self {
        Self {
            field: field.into(),
            constraint: constraint.into(),
            module,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (required by {})",
            self.field, self.constraint, self.module
        )
    }
}

/// Where a Bohmian trajectory starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StartBase {
    Classical,
    Center,
    Mean,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StartPoint {
    pub label: String,
    pub base: StartBase,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitChoice {
    Elastic,
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalMethod {
    Closed,
    Boltzmann(usize),
    Stationary(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateChoice {
    Thermal(ThermalState),
    Pure {
        params: WavepacketParams,
        tau: f64,
        truncation: Truncation,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    DivW,
    Continuity,
}

/// Pure-state parameters with the energy they came from, if any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureSpec {
    pub params: WavepacketParams,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    PureWigner {
        pure: PureSpec,
        tau: Vec<f64>,
        grid: PhaseSpaceGrid,
        along_orbit: bool,
    },
    BohmTraj {
        pure: PureSpec,
        tau: Vec<f64>,
        starts: Vec<StartPoint>,
        limit: Option<LimitChoice>,
        ensemble: usize,
        seed: u64,
    },
    QuantumForce {
        pure: PureSpec,
        tau: Vec<f64>,
        x: (f64, f64, usize),
    },
    ThermalWigner {
        state: ThermalState,
        method: ThermalMethod,
        grid: PhaseSpaceGrid,
    },
    Currents {
        state: StateChoice,
        classical: bool,
        grid: PhaseSpaceGrid,
    },
    Divergence {
        state: StateChoice,
        quantity: Quantity,
        grid: PhaseSpaceGrid,
    },
    Stagnation {
        state: ThermalState,
        grid: PhaseSpaceGrid,
    },
    LoopFlux {
        state: ThermalState,
        epsilons: Vec<f64>,
        n_tau: usize,
    },
    Purity {
        states: Vec<ThermalState>,
        check_reduction: bool,
    },
    Partition {
        bs: Vec<f64>,
    },
    LowTCheck {
        state: ThermalState,
        m_max: usize,
        k: f64,
        x: (f64, f64, usize),
    },
    Figures {
        dir: PathBuf,
        grid: Option<String>,
    },
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub job: Job,
    pub format: Format,
    pub output: PathBuf,
}

/// Empty exactly when [`plan`] succeeds.
pub fn validate(config: &RunConfig) -> Vec<Diagnostic> {
    plan(config).err().unwrap_or_default()
}

pub fn plan(config: &RunConfig) -> Result<Plan, Vec<Diagnostic>> {
    let mut r = Reader {
        params: &config.params,
        diags: Vec::new(),
    };
    for key in config.params.keys() {
        let known = ["output", "format"].contains(&key.as_str())
            || config.command.keys().contains(&key.as_str());
        if !known {
            r.diags.push(Diagnostic::new(
                key.clone(),
                format!("not a parameter of `{}`", config.command),
                "cli",
            ));
        }
    }
    let format = match r.get("format").unwrap_or("csv") {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => {
            r.fail(
                "format",
                format!("must be csv or json, got {other:?}"),
                "cli",
            );
            Format::Csv
        }
    };
    let job = build_job(config, &mut r);
    let output = r.get("output").map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(format!("sophase-{}.{}", config.command, format.extension()))
    });
    if r.diags.is_empty() {
        Ok(Plan {
            job,
            format,
            output,
        })
    } else {
        Err(r.diags)
    }
}

fn build_job(config: &RunConfig, r: &mut Reader) -> Job {
    match config.command {
        Command::PureWigner => {
            let along_orbit = r.flag("along-orbit");
            let pure = r.pure();
            if along_orbit && pure.epsilon.is_none() {
                r.fail(
                    "along-orbit",
                    "needs epsilon to fix the classical orbit",
                    "pure_state",
                );
            }
            let tau = if along_orbit {
                r.tau_range()
            } else {
                vec![r.f64("tau", 0.0, "pure_state", |_| true, "")]
            };
            Job::PureWigner {
                pure,
                tau,
                grid: r.grid(),
                along_orbit,
            }
        }
        Command::BohmTraj => {
            let pure = r.pure();
            let starts = r.starts(&pure);
            let limit = match r.get("limit") {
                None => None,
                Some("elastic") => Some(LimitChoice::Elastic),
                Some("harmonic") => Some(LimitChoice::Harmonic),
                Some(other) => {
                    r.fail(
                        "limit",
                        format!("must be elastic or harmonic, got {other:?}"),
                        "bohmian",
                    );
                    None
                }
            };
            if limit.is_some() && pure.params.phi != 0.0 {
                r.fail(
                    "limit",
                    "the small-gamma limit is written for phi = 0",
                    "bohmian",
                );
            }
            Job::BohmTraj {
                tau: r.tau_range(),
                starts,
                limit,
                ensemble: r.usize("ensemble", 0, "bohmian", |_| true, ""),
                seed: config.seed,
                pure,
            }
        }
        Command::QuantumForce => Job::QuantumForce {
            pure: r.pure(),
            tau: r.tau_range(),
            x: r.line(),
        },
        Command::ThermalWigner => {
            let state = r.thermal("thermal");
            let method = match r.get("method").unwrap_or("closed") {
                "closed" => ThermalMethod::Closed,
                "boltzmann" => {
                    let n = sophase::thermal::boltzmann_cutoff(state.b);
                    ThermalMethod::Boltzmann(r.usize("n-max", n, "thermal", |_| true, ""))
                }
                "stationary" => ThermalMethod::Stationary(r.usize("n", 0, "thermal", |_| true, "")),
                other => {
                    r.fail(
                        "method",
                        format!("must be closed, boltzmann or stationary, got {other:?}"),
                        "thermal",
                    );
                    ThermalMethod::Closed
                }
            };
            Job::ThermalWigner {
                state,
                method,
                grid: r.grid(),
            }
        }
        Command::Currents => {
            let classical = match r.get("current").unwrap_or("quantum") {
                "quantum" => false,
                "classical" => true,
                other => {
                    r.fail(
                        "current",
                        format!("must be quantum or classical, got {other:?}"),
                        "flow",
                    );
                    false
                }
            };
            Job::Currents {
                state: r.state(!classical),
                classical,
                grid: r.grid(),
            }
        }
        Command::Divergence => {
            let quantity = match r.get("quantity").unwrap_or("div-w") {
                "div-w" => Quantity::DivW,
                "continuity" => Quantity::Continuity,
                other => {
                    r.fail(
                        "quantity",
                        format!("must be div-w or continuity, got {other:?}"),
                        "flow",
                    );
                    Quantity::DivW
                }
            };
            let state = r.state(true);
            if quantity == Quantity::DivW && !matches!(state, StateChoice::Thermal(_)) {
                r.fail(
                    "state",
                    "the closed-form div-w is available for the thermal state",
                    "flow",
                );
            }
            Job::Divergence {
                state,
                quantity,
                grid: r.grid(),
            }
        }
        Command::Stagnation => Job::Stagnation {
            state: r.thermal_currents_state(),
            grid: r.grid(),
        },
        Command::LoopFlux => Job::LoopFlux {
            state: r.thermal_currents_state(),
            epsilons: r.f64_list(
                "epsilon",
                "0.2,0.5",
                "pure_state",
                |e| e >= 0.0,
                "epsilon >= 0",
            ),
            n_tau: r.usize(
                "n-tau",
                256,
                "flow",
                |n| n >= 64 && n % 2 == 0,
                "n-tau must be even and >= 64",
            ),
        },
        Command::Purity => {
            let alphas = r.half_list("alpha", "3/2", "thermal");
            let bs = r.f64_list("b", "1", "thermal", |b| b > 0.0, "b > 0");
            let states = alphas
                .iter()
                .flat_map(|&a| bs.iter().filter_map(move |&b| ThermalState::new(a, b).ok()))
                .collect();
            Job::Purity {
                states,
                check_reduction: r.flag("check-reduction"),
            }
        }
        Command::Partition => Job::Partition {
            bs: r.f64_list("b", "1", "thermal", |b| b >= 1e-12, "b >= 1e-12"),
        },
        Command::LowTCheck => {
            let alpha = r.half("alpha", "3/2", "thermal", 1);
            let b = r.f64("b", 4.0, "thermal", |b| b > 0.0, "b > 0");
            Job::LowTCheck {
                state: ThermalState::new(alpha, b).unwrap_or(fallback_thermal()),
                m_max: r.usize("m-max", 6, "thermal", |_| true, ""),
                k: r.f64("k", 0.0, "thermal", f64::is_finite, "k must be finite"),
                x: r.line(),
            }
        }
        Command::Figures => {
            let grid = r.get("grid").map(str::to_string);
            for key in ["x-min", "x-max", "nx", "k-min", "k-max", "nk"] {
                if r.get(key).is_some() {
                    r.fail(key, "figures take the whole grid through `grid`", "cli");
                }
            }
            if let Some(g) = &grid {
                if let Err(d) = parse_grid_spec(g) {
                    r.diags.push(d);
                }
            }
            Job::Figures {
                dir: PathBuf::from(r.get("output-dir").unwrap_or("figures")),
                grid,
            }
        }
    }
}

fn fallback_thermal() -> ThermalState {
    ThermalState::new(HalfIntOrder::from_twice(3).expect("odd"), 1.0).expect("valid")
}

fn fallback_pure() -> WavepacketParams {
    WavepacketParams::new(HalfIntOrder::from_twice(3).expect("odd"), 1.0, 0.0).expect("valid")
}

/// `default` or `xmin:xmax:nx,kmin:kmax:nk`.
pub fn parse_grid_spec(s: &str) -> Result<PhaseSpaceGrid, Diagnostic> {
    if s == "default" {
        return Ok(PhaseSpaceGrid::default());
    }
    let bad = || {
        Diagnostic::new(
            "grid",
            "must be `default` or xmin:xmax:nx,kmin:kmax:nk",
            "flow",
        )
    };
    let (xs, ks) = s.split_once(',').ok_or_else(bad)?;
    let (x0, x1, nx) = parse_range(xs).ok_or_else(bad)?;
    let (k0, k1, nk) = parse_range(ks).ok_or_else(bad)?;
    PhaseSpaceGrid::new(x0, x1, nx, k0, k1, nk)
        .map_err(|e| Diagnostic::new("grid", e.to_string(), "flow"))
}

fn parse_range(s: &str) -> Option<(f64, f64, usize)> {
    let mut it = s.split(':');
    let a = it.next()?.trim().parse().ok()?;
    let b = it.next()?.trim().parse().ok()?;
    let n = it.next()?.trim().parse().ok()?;
    it.next().is_none().then_some((a, b, n))
}

/// Samples a + (b−a)i/n for i < n: the end point is left out so a full
/// period is not sampled twice.
pub fn tau_samples(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

struct Reader<'a> {
    params: &'a BTreeMap<String, String>,
    diags: Vec<Diagnostic>,
}

impl Reader<'_> {
    fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(|s| s.trim())
    }

    fn fail(&mut self, field: &str, constraint: impl Into<String>, module: &'static str) {
        self.diags.push(Diagnostic::new(field, constraint, module));
    }

    fn flag(&mut self, key: &str) -> bool {
        match self.get(key) {
            None | Some("false") | Some("0") => false,
            Some("true") | Some("1") | Some("") => true,
            Some(other) => {
                self.fail(key, format!("must be true or false, got {other:?}"), "cli");
                false
            }
        }
    }

    fn f64(
        &mut self,
        key: &str,
        default: f64,
        module: &'static str,
        ok: impl Fn(f64) -> bool,
        rule: &str,
    ) -> f64 {
        let Some(raw) = self.get(key) else {
            return default;
        };
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() && ok(v) => v,
            Ok(v) if v.is_finite() => {
                self.fail(key, format!("{rule}, got {v}"), module);
                default
            }
            _ => {
                self.fail(
                    key,
                    format!("expected a finite number, got {raw:?}"),
                    module,
                );
                default
            }
        }
    }

    fn usize(
        &mut self,
        key: &str,
        default: usize,
        module: &'static str,
        ok: impl Fn(usize) -> bool,
        rule: &str,
    ) -> usize {
        let Some(raw) = self.get(key) else {
            return default;
        };
        match raw.parse::<usize>() {
            Ok(v) if ok(v) => v,
            Ok(v) => {
                self.fail(key, format!("{rule}, got {v}"), module);
                default
            }
            Err(_) => {
                self.fail(
                    key,
                    format!("expected a nonnegative integer, got {raw:?}"),
                    module,
                );
                default
            }
        }
    }

    fn f64_list(
        &mut self,
        key: &str,
        default: &str,
        module: &'static str,
        ok: impl Fn(f64) -> bool,
        rule: &str,
    ) -> Vec<f64> {
        let raw = self.get(key).unwrap_or(default).to_string();
        let mut out = Vec::new();
        for item in raw.split(',') {
            match item.trim().parse::<f64>() {
                Ok(v) if v.is_finite() && ok(v) => out.push(v),
                Ok(v) if v.is_finite() => self.fail(key, format!("{rule}, got {v}"), module),
                _ => self.fail(
                    key,
                    format!("expected a number, got {:?}", item.trim()),
                    module,
                ),
            }
        }
        out
    }

    fn parse_half(
        &mut self,
        key: &str,
        raw: &str,
        module: &'static str,
        min_twice: i32,
    ) -> Option<HalfIntOrder> {
        match raw.trim().parse::<HalfIntOrder>() {
            Ok(h) if h.twice() >= min_twice => Some(h),
            Ok(h) => {
                let min = HalfIntOrder::from_twice(min_twice).expect("odd");
                let why = if min_twice >= 3 {
                    "thermal currents carry alpha(alpha-1)(alpha+1) denominators"
                } else {
                    "the wave packet and the thermal state need alpha >= 1/2"
                };
                self.fail(
                    key,
                    format!("alpha >= {min} required ({why}), got {h}"),
                    module,
                );
                None
            }
            Err(_) => {
                let why = if module == "flow" {
                    "; alpha = 1 also zeroes the alpha(alpha-1)(alpha+1) denominators of the thermal currents"
                } else {
                    ""
                };
                self.fail(
                    key,
                    format!(
                        "alpha must be a half-integer such as 3/2 or 1.5, got {:?}{why}",
                        raw.trim()
                    ),
                    module,
                );
                None
            }
        }
    }

    fn half(
        &mut self,
        key: &str,
        default: &str,
        module: &'static str,
        min_twice: i32,
    ) -> HalfIntOrder {
        let raw = self.get(key).unwrap_or(default).to_string();
        self.parse_half(key, &raw, module, min_twice)
            .unwrap_or(HalfIntOrder::from_twice(min_twice.max(1)).expect("odd"))
    }

    fn half_list(&mut self, key: &str, default: &str, module: &'static str) -> Vec<HalfIntOrder> {
        let raw = self.get(key).unwrap_or(default).to_string();
        raw.split(',')
            .filter_map(|s| self.parse_half(key, s, module, 1))
            .collect()
    }

    fn thermal(&mut self, module: &'static str) -> ThermalState {
        let alpha = self.half("alpha", "3/2", module, 1);
        let b = self.f64(
            "b",
            1.0,
            "thermal",
            |b| b > 0.0,
            "b > 0 (inverse temperature)",
        );
        ThermalState::new(alpha, b).unwrap_or(fallback_thermal())
    }

    /// α = 1/2 (harmonic) or α ≥ 3/2.
    fn thermal_currents_state(&mut self) -> ThermalState {
        let raw = self.get("alpha").unwrap_or("3/2").to_string();
        let alpha = self.parse_half("alpha", &raw, "flow", 1);
        let b = self.f64(
            "b",
            1.0,
            "thermal",
            |b| b > 0.0,
            "b > 0 (inverse temperature)",
        );
        alpha
            .and_then(|a| ThermalState::new(a, b).ok())
            .unwrap_or(fallback_thermal())
    }

    fn pure(&mut self) -> PureSpec {
        let alpha = self.half("alpha", "3/2", "pure_state", 1);
        let phi = self.f64("phi", 0.0, "pure_state", |_| true, "");
        let (gamma, epsilon) = match (self.get("gamma").is_some(), self.get("epsilon").is_some()) {
            (true, true) => {
                self.fail(
                    "gamma",
                    "give gamma or epsilon, not both (gamma follows from epsilon)",
                    "pure_state",
                );
                (1.0, None)
            }
            (true, false) => (
                self.f64(
                    "gamma",
                    1.0,
                    "pure_state",
                    |g| g > 0.0,
                    "gamma > 0 (convergence of the superposition)",
                ),
                None,
            ),
            (false, _) => {
                let eps = self.f64("epsilon", 0.0, "pure_state", |e| e >= 0.0, "epsilon >= 0");
                match gamma_from_energy(alpha.value(), eps) {
                    Ok(g) if g > 0.0 => (g, Some(eps)),
                    _ => {
                        self.fail(
                            "epsilon",
                            "the orbit degenerates (gamma = 0) for alpha = 1/2",
                            "pure_state",
                        );
                        (1.0, None)
                    }
                }
            }
        };
        let params = WavepacketParams::new(alpha, gamma, phi).unwrap_or(fallback_pure());
        PureSpec { params, epsilon }
    }

    fn state(&mut self, quantum_current: bool) -> StateChoice {
        match self.get("state").unwrap_or("thermal") {
            "thermal" => StateChoice::Thermal(if quantum_current {
                self.thermal_currents_state()
            } else {
                self.thermal("thermal")
            }),
            "pure" => {
                let pure = self.pure();
                let tau = self.f64("tau", 0.0, "pure_state", |_| true, "");
                let default_eta = if pure.params.alpha.twice() >= 3 {
                    "resummed"
                } else {
                    "0"
                };
                let truncation = match self.get("eta-max").unwrap_or(default_eta) {
                    "resummed" if pure.params.alpha.twice() >= 3 => Truncation::Resummed,
                    "resummed" => {
                        self.fail("eta-max", "the resummed kernel needs alpha >= 3/2", "flow");
                        Truncation::Eta(0)
                    }
                    _ => Truncation::Eta(self.usize("eta-max", 0, "flow", |_| true, "")),
                };
                StateChoice::Pure {
                    params: pure.params,
                    tau,
                    truncation,
                }
            }
            other => {
                self.fail(
                    "state",
                    format!("must be thermal or pure, got {other:?}"),
                    "flow",
                );
                StateChoice::Thermal(fallback_thermal())
            }
        }
    }

    fn tau_range(&mut self) -> Vec<f64> {
        let Some(raw) = self.get("tau").map(str::to_string) else {
            return tau_samples(0.0, TAU, 256);
        };
        if let Ok(t) = raw.parse::<f64>() {
            return vec![t];
        }
        match parse_range(&raw) {
            Some((a, b, n)) if n > 0 && a.is_finite() && b.is_finite() => tau_samples(a, b, n),
            _ => {
                self.fail("tau", "must be a number or start:end:count", "cli");
                vec![0.0]
            }
        }
    }

    fn line(&mut self) -> (f64, f64, usize) {
        let a = self.f64(
            "x-min",
            0.05,
            "pure_state",
            |x| x > 0.0,
            "x-min > 0 (half-line)",
        );
        let b = self.f64("x-max", 4.0, "pure_state", |_| true, "");
        let n = self.usize("nx", 241, "cli", |n| n >= 2, "nx >= 2");
        if b <= a {
            self.fail("x-max", format!("x-max must exceed x-min = {a}"), "cli");
        }
        (a, b, n)
    }

    fn grid(&mut self) -> PhaseSpaceGrid {
        let base = match self.get("grid") {
            None => PhaseSpaceGrid::default(),
            Some(s) => match parse_grid_spec(s) {
                Ok(g) => g,
                Err(d) => {
                    self.diags.push(d);
                    PhaseSpaceGrid::default()
                }
            },
        };
        let g = PhaseSpaceGrid {
            x_min: self.f64(
                "x-min",
                base.x_min,
                "flow",
                |x| x > 0.0,
                "x-min > 0 (half-line)",
            ),
            x_max: self.f64("x-max", base.x_max, "flow", |_| true, ""),
            nx: self.usize("nx", base.nx, "flow", |n| n >= 3, "nx >= 3"),
            k_min: self.f64("k-min", base.k_min, "flow", |_| true, ""),
            k_max: self.f64("k-max", base.k_max, "flow", |_| true, ""),
            nk: self.usize("nk", base.nk, "flow", |n| n >= 3, "nk >= 3"),
        };
        if let Err(e) = g.validate() {
            self.fail("grid", e.to_string(), "flow");
        }
        g
    }

    fn starts(&mut self, pure: &PureSpec) -> Vec<StartPoint> {
        let raw = self
            .get("set")
            .unwrap_or("classical,center,mean")
            .to_string();
        let mut out = Vec::new();
        for item in raw.split(',').map(str::trim) {
            let (head, offset) = match item.find(['+', '-']).filter(|&i| i > 0) {
                Some(i) => (&item[..i], item[i..].parse::<f64>().ok()),
                None => (item, Some(0.0)),
            };
            let base = match head {
                "classical" => StartBase::Classical,
                "center" => StartBase::Center,
                "mean" => StartBase::Mean,
                _ => match item.parse::<f64>() {
                    Ok(v) if v > 0.0 => {
                        out.push(StartPoint {
                            label: item.to_string(),
                            base: StartBase::Value(v),
                            offset: 0.0,
                        });
                        continue;
                    }
                    _ => {
                        self.fail(
                            "set",
                            format!("{item:?}: expected classical, center, mean (optionally +/-offset) or x0 > 0"),
                            "bohmian",
                        );
                        continue;
                    }
                },
            };
            let Some(offset) = offset else {
                self.fail("set", format!("{item:?}: bad offset"), "bohmian");
                continue;
            };
            if base == StartBase::Classical {
                if pure.epsilon.is_none() {
                    self.fail(
                        "set",
                        "the classical start needs epsilon, not gamma",
                        "bohmian",
                    );
                } else if pure.params.phi != 0.0 {
                    self.fail(
                        "set",
                        "the classical start matches the orbit for phi = 0",
                        "bohmian",
                    );
                }
            }
            out.push(StartPoint {
                label: item.to_string(),
                base,
                offset,
            });
        }
        out
    }
}
