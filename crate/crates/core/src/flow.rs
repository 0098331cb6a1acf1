//! Phase-space flow: Wigner currents, the non-Liouvillian quantifier ∇·w,
//! stagnation points and the loop-flux integral along classical orbits.
//!
//! Conventions. Time is τ = 2ωt and the classical equations read
//! dx/dτ = k/2, dk/dτ = −𝒰′(x)/2. The currents are normalized so that the
//! classical current is (k, −𝒰′)𝒲, which makes the continuity equation
//!
//! ∂𝒲/∂τ + ½ (∂_x 𝒥_x + ∂_k 𝒥_k) = 0.
//!
//! Going back to dimensionful variables multiplies 𝒥 by ω and rescales the
//! phase-space volume by ħ; none of the statements here depend on that map.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{PhaseSpaceGrid, ScalarField, VectorField};
use crate::pure_state::{
    classical_orbit, potential_derivative, uv_envelope, wigner_pure, ClassicalOrbit, PureKernel,
    WavepacketParams,
};
use crate::thermal::{wigner_thermal_estimate, wigner_thermal_triplet, ThermalState};

/// Current at one phase-space point, together with the Wigner value it was
/// built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurrentSample {
    pub x: f64,
    pub k: f64,
    pub w: f64,
    pub j_x: f64,
    pub j_k: f64,
}

impl CurrentSample {
    /// Quantum correction Δ𝒥_k = 𝒥_k − (−𝒰′𝒲). The x-component has no
    /// correction since 𝒥_x = k𝒲 at every order.
    pub fn delta_j_k(&self, alpha: f64) -> f64 {
        self.j_k + potential_derivative(alpha, self.x) * self.w
    }
}

/// (4α² − 1)/8, the strength of the inverse-square term.
fn anharmonic(alpha: f64) -> f64 {
    (4.0 * alpha * alpha - 1.0) / 8.0
}

/// Thermal current with the α ± 2 mixing produced by resumming the Moyal
/// series of the inverse-square potential.
///
/// 𝒥_k = −x𝒲^α + ((4α²−1)/8)[ −x𝒲^α/(sinh²b (α−1)(α+1))
///        + x𝒲^{α−2} e^{2b}/(2 sinh²b α(α−1)) + x𝒲^{α+2} e^{−2b}/(2 sinh²b α(α+1)) ].
///
/// α = 1/2 is accepted: the bracket's prefactor vanishes and the harmonic
/// current −x𝒲 remains.
pub fn thermal_currents(x: f64, k: f64, state: &ThermalState) -> Result<CurrentSample> {
    thermal_currents_estimate(x, k, state).map(|(c, _)| c)
}

/// As [`thermal_currents`], also returning an absolute error bound on 𝒥_k.
pub fn thermal_currents_estimate(
    x: f64,
    k: f64,
    state: &ThermalState,
) -> Result<(CurrentSample, f64)> {
    let a = state.alpha();
    if state.alpha.twice() == 1 {
        let w = wigner_thermal_estimate(x, k, state)?;
        let s = CurrentSample {
            x,
            k,
            w: w.value,
            j_x: k * w.value,
            j_k: -x * w.value,
        };
        return Ok((s, x.abs() * w.error));
    }
    if a < 1.5 {
        return Err(Error::domain(
            "thermal_currents",
            format!("alpha = {a} must be 1/2 or >= 3/2 (alpha(alpha-1)(alpha+1) denominators)"),
        ));
    }
    let [wm, w, wp] = wigner_thermal_triplet(x, k, state)?;
    let b = state.b;
    let s2 = b.sinh().powi(2);
    let cm = (2.0 * b).exp() / (2.0 * s2 * a * (a - 1.0));
    let cp = (-2.0 * b).exp() / (2.0 * s2 * a * (a + 1.0));
    let c0 = 1.0 / (s2 * (a - 1.0) * (a + 1.0));
    let g = anharmonic(a);
    let j_k = -x * w.value + g * x * (-c0 * w.value + cm * wm.value + cp * wp.value);
    let err = x.abs() * (w.error * (1.0 + g * c0) + g * (cm * wm.error + cp * wp.error));
    Ok((
        CurrentSample {
            x,
            k,
            w: w.value,
            j_x: k * w.value,
            j_k,
        },
        err,
    ))
}

/// Classical current (k𝒲, −𝒰′(x)𝒲).
pub fn classical_currents(x: f64, k: f64, w: f64, alpha: f64) -> CurrentSample {
    CurrentSample {
        x,
        k,
        w,
        j_x: k * w,
        j_k: -potential_derivative(alpha, x) * w,
    }
}

/// Which part of the Moyal series to keep in the pure-state k-current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    /// terms η = 0..=eta_max
    Eta(usize),
    /// the full geometric sum, available for α ≥ 3/2
    Resummed,
}

/// Pure-state 𝒥_k truncated after η = eta_max.
///
/// Each Moyal term ∂_x^{2η+1}(x^{−2}) ∂_k^{2η}𝒲 becomes a factor (η+1)s^{2η}
/// inside the s-integral of 𝒲, so
/// 𝒥_k = −𝒰′𝒲 + ((4α²−1)/(4x³)) · [𝒲 with kernel × Σ_{η=1}^{eta_max} (η+1)s^{2η}].
pub fn pure_state_current_k(
    x: f64,
    k: f64,
    tau: f64,
    params: &WavepacketParams,
    eta_max: usize,
) -> Result<f64> {
    pure_state_currents(x, k, tau, params, Truncation::Eta(eta_max)).map(|c| c.j_k)
}

/// Pure-state current with the full series summed: Σ (η+1)s^{2η} = (1−s²)^{−2}.
pub fn pure_state_current_k_resummed(
    x: f64,
    k: f64,
    tau: f64,
    params: &WavepacketParams,
) -> Result<f64> {
    pure_state_currents(x, k, tau, params, Truncation::Resummed).map(|c| c.j_k)
}

pub fn pure_state_currents(
    x: f64,
    k: f64,
    tau: f64,
    params: &WavepacketParams,
    truncation: Truncation,
) -> Result<CurrentSample> {
    let a = params.alpha();
    match truncation {
        Truncation::Eta(0) => {
            let w = wigner_pure(x, k, tau, params)?;
            Ok(classical_currents(x, k, w, a))
        }
        Truncation::Eta(eta_max) => {
            let kernel = PureKernel::new(x, k, uv_envelope(tau, params), params);
            let [w, corr] = kernel.integrate(|s| {
                let s2 = s * s;
                let mut acc = 0.0;
                let mut p = 1.0;
                for eta in 1..=eta_max {
                    p *= s2;
                    acc += (eta as f64 + 1.0) * p;
                }
                [1.0, acc]
            })?;
            let mut c = classical_currents(x, k, w.value, a);
            c.j_k += 2.0 * anharmonic(a) / x.powi(3) * corr.value;
            Ok(c)
        }
        Truncation::Resummed => {
            if params.alpha.twice() < 3 {
                return Err(Error::domain(
                    "pure_state_current_k",
                    "the resummed kernel (1-s^2)^(alpha-3/2) needs alpha >= 3/2",
                ));
            }
            let kernel = PureKernel::new(x, k, uv_envelope(tau, params), params);
            let [w, full] = kernel.integrate(|s| [1.0, 1.0 / (1.0 - s * s).powi(2)])?;
            Ok(CurrentSample {
                x,
                k,
                w: w.value,
                j_x: k * w.value,
                j_k: -x * w.value + 2.0 * anharmonic(a) / x.powi(3) * full.value,
            })
        }
    }
}

/// Individual Moyal contributions to the pure-state 𝒥_k, η = 0..=eta_max,
/// excluding the harmonic −x𝒲. Used to watch the series converge.
pub fn pure_state_current_k_series(
    x: f64,
    k: f64,
    tau: f64,
    params: &WavepacketParams,
    eta_max: usize,
) -> Result<Vec<f64>> {
    let a = params.alpha();
    let kernel = PureKernel::new(x, k, uv_envelope(tau, params), params);
    let pre = 2.0 * anharmonic(a) / x.powi(3);
    (0..=eta_max)
        .map(|eta| {
            let [t] = kernel.integrate(|s| [(eta as f64 + 1.0) * s.powi(2 * eta as i32)])?;
            Ok(pre * t.value)
        })
        .collect()
}

/// True when the magnitudes of the last few series contributions shrink.
pub fn series_is_decreasing(terms: &[f64]) -> bool {
    terms.len() < 2 || terms.windows(2).skip(1).all(|p| p[1].abs() < p[0].abs())
}

/// Pointwise continuity check for the pure state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityCheck {
    /// ∂𝒲/∂τ + ½(∂_x𝒥_x + ∂_k𝒥_k)
    pub residual: f64,
    /// largest of the three terms, for a relative measure
    pub scale: f64,
}

impl ContinuityCheck {
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.scale
    }
}

/// Central differences with step h in τ, x and k.
pub fn pure_continuity_check(
    x: f64,
    k: f64,
    tau: f64,
    params: &WavepacketParams,
    truncation: Truncation,
    h: f64,
) -> Result<ContinuityCheck> {
    let dt =
        (wigner_pure(x, k, tau + h, params)? - wigner_pure(x, k, tau - h, params)?) / (2.0 * h);
    let jx = |x: f64| pure_state_currents(x, k, tau, params, truncation).map(|c| c.j_x);
    let jk = |k: f64| pure_state_currents(x, k, tau, params, truncation).map(|c| c.j_k);
    let dx = (jx(x + h)? - jx(x - h)?) / (2.0 * h);
    let dk = (jk(k + h)? - jk(k - h)?) / (2.0 * h);
    Ok(ContinuityCheck {
        residual: dt + 0.5 * (dx + dk),
        scale: dt.abs().max(0.5 * dx.abs()).max(0.5 * dk.abs()),
    })
}

/// Smallest |𝒲| accepted as a denominator in ∇·w.
pub const NEAR_ZERO_FLOOR: f64 = 1e-12;

/// Default finite-difference step for point probes.
pub const PROBE_STEP: f64 = 1e-3;

/// ∇·w for the thermal state, w = 𝒥/𝒲.
///
/// Only ∂_k(𝒥_k/𝒲) survives, and of that only the α ± 2 ratios:
/// ∇·w = ((4α²−1)/8)[ x e^{2b}/(2 sinh²b α(α−1)) ∂_k(𝒲^{α−2}/𝒲^α)
///                   + x e^{−2b}/(2 sinh²b α(α+1)) ∂_k(𝒲^{α+2}/𝒲^α) ].
pub fn divergence_w_thermal(x: f64, k: f64, state: &ThermalState) -> Result<f64> {
    divergence_w_thermal_step(x, k, state, PROBE_STEP)
}

pub fn divergence_w_thermal_step(x: f64, k: f64, state: &ThermalState, h: f64) -> Result<f64> {
    let a = state.alpha();
    if state.alpha.twice() == 1 {
        return Ok(0.0);
    }
    if a < 1.5 {
        return Err(Error::domain(
            "divergence_w_thermal",
            format!("alpha = {a} must be >= 3/2"),
        ));
    }
    let ratios = |k: f64| -> Result<(f64, f64)> {
        let [wm, w, wp] = wigner_thermal_triplet(x, k, state)?;
        if w.value.abs() < NEAR_ZERO_FLOOR {
            return Err(Error::NearZero {
                what: "divergence_w_thermal",
                value: w.value.abs(),
                floor: NEAR_ZERO_FLOOR,
            });
        }
        Ok((wm.value / w.value, wp.value / w.value))
    };
    let (mp, pp) = ratios(k + h)?;
    let (mm, pm) = ratios(k - h)?;
    let b = state.b;
    let s2 = b.sinh().powi(2);
    let cm = x * (2.0 * b).exp() / (2.0 * s2 * a * (a - 1.0));
    let cp = x * (-2.0 * b).exp() / (2.0 * s2 * a * (a + 1.0));
    Ok(anharmonic(a) * (cm * (mp - mm) + cp * (pp - pm)) / (2.0 * h))
}

/// Where a current field comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FlowConfig {
    /// full quantum current of the thermal state
    Thermal(ThermalState),
    /// (k, −𝒰′)𝒲_Ω: the classical current carried by the thermal Wigner function
    ThermalClassical(ThermalState),
    Pure {
        params: WavepacketParams,
        tau: f64,
        truncation: Truncation,
    },
}

impl FlowConfig {
    pub fn current(&self, x: f64, k: f64) -> Result<CurrentSample> {
        match self {
            FlowConfig::Thermal(s) => thermal_currents(x, k, s),
            FlowConfig::ThermalClassical(s) => {
                let w = wigner_thermal_estimate(x, k, s)?.value;
                Ok(classical_currents(x, k, w, s.alpha()))
            }
            FlowConfig::Pure {
                params,
                tau,
                truncation,
            } => pure_state_currents(x, k, *tau, params, *truncation),
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            FlowConfig::Thermal(s) | FlowConfig::ThermalClassical(s) => s.alpha(),
            FlowConfig::Pure { params, .. } => params.alpha(),
        }
    }
}

/// Current field on a grid, rows in parallel.
pub fn current_field(grid: PhaseSpaceGrid, config: &FlowConfig) -> Result<VectorField> {
    VectorField::evaluate(grid, |x, k| config.current(x, k).map(|c| (c.j_x, c.j_k)))
}

/// Time step used for ∂𝒲/∂τ in the pure-state residual field.
pub const TAU_STEP: f64 = 1e-3;

/// Continuity residual ∂𝒲/∂τ + ½∇·𝒥 on the interior of `grid`, with
/// grid-spacing central differences for ∇·𝒥. Thermal states are stationary,
/// so there the residual is ½∇·𝒥 alone.
pub fn continuity_residual_field(grid: PhaseSpaceGrid, config: &FlowConfig) -> Result<ScalarField> {
    let j = current_field(grid, config)?;
    let mut div = j.divergence()?;
    for v in div.values.iter_mut() {
        *v *= 0.5;
    }
    if let FlowConfig::Pure { params, tau, .. } = config {
        let dt = ScalarField::evaluate(div.grid, |x, k| {
            Ok((wigner_pure(x, k, tau + TAU_STEP, params)?
                - wigner_pure(x, k, tau - TAU_STEP, params)?)
                / (2.0 * TAU_STEP))
        })?;
        for (v, d) in div.values.iter_mut().zip(dt.values) {
            *v += d;
        }
    }
    Ok(div)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StagnationKind {
    /// on the k = 0 axis: zero momentum and zero force
    ClassicalVortex,
    /// off the axis, where 𝒥_x = k𝒲 vanishes through 𝒲 = 0
    QuantumInduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StagnationPoint {
    pub x: f64,
    pub k: f64,
    /// Poincaré index: (1/2π)·total turn of atan2(𝒥_k, 𝒥_x) on a
    /// counterclockwise loop. +1 for centres, −1 for saddles.
    pub winding: i32,
    /// Sense of rotation for index +1 points: −1 clockwise, +1 counterclockwise;
    /// 0 for saddles.
    pub circulation: i32,
    pub kind: StagnationKind,
    /// |𝒥| at the refined location
    pub residual: f64,
    /// side of the final refinement box, as a fraction of the grid cell
    pub box_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagnationReport {
    pub points: Vec<StagnationPoint>,
    /// candidate cells rejected because the field flips direction across a
    /// whole line of zeros (e.g. along 𝒲 = 0 when 𝒥 ∝ 𝒲)
    pub degenerate_cells: usize,
}

/// Angle steps above this are treated as a flip through a line of zeros.
const FLIP_ANGLE: f64 = 0.9 * PI;

/// Refinement stops when the box is this small relative to a cell.
const REFINE_TOL: f64 = 1e-8;

fn wrap(d: f64) -> f64 {
    let mut d = d % TAU;
    if d > PI {
        d -= TAU;
    } else if d < -PI {
        d += TAU;
    }
    d
}

/// Index of a closed loop of field vectors, in loop order, plus the largest
/// single angle step.
fn loop_index(vectors: &[(f64, f64)]) -> (i32, f64) {
    let mut total = 0.0;
    let mut worst: f64 = 0.0;
    for i in 0..vectors.len() {
        let (a, b) = (vectors[i], vectors[(i + 1) % vectors.len()]);
        let d = wrap(b.1.atan2(b.0) - a.1.atan2(a.0));
        worst = worst.max(d.abs());
        total += d;
    }
    ((total / TAU).round() as i32, worst)
}

/// Locates isolated zeros of a sampled current field.
///
/// Cells where both components change sign seed a box search: the box is
/// split into nine half-size boxes on a 5×5 lattice, the one with a nonzero
/// boundary index and the largest minimum |𝒥| on its boundary is kept, and
/// the process repeats until the box is 1e−8 of a cell. `eval` must return
/// the same field that was sampled.
pub fn find_stagnation_points(
    field: &VectorField,
    eval: &(dyn Fn(f64, f64) -> Result<(f64, f64)> + Sync),
) -> Result<StagnationReport> {
    let g = field.grid;
    let mut cells = Vec::new();
    for i in 0..g.nx - 1 {
        for j in 0..g.nk - 1 {
            let c = [
                field.at(i, j),
                field.at(i + 1, j),
                field.at(i, j + 1),
                field.at(i + 1, j + 1),
            ];
            let changes = |f: fn(&(f64, f64)) -> f64| {
                let lo = c.iter().map(f).fold(f64::INFINITY, f64::min);
                let hi = c.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
                lo <= 0.0 && hi >= 0.0
            };
            if changes(|p| p.0) && changes(|p| p.1) {
                cells.push((i, j));
            }
        }
    }
    let (dx, dk) = (g.dx(), g.dk());
    let results: Vec<Option<StagnationPoint>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let centre = (g.x(i) + 0.5 * dx, g.k(j) + 0.5 * dk);
            refine(centre, (dx, dk), eval)
        })
        .collect::<Result<_>>()?;

    let mut points: Vec<StagnationPoint> = Vec::new();
    let mut degenerate = 0;
    for r in results {
        match r {
            None => degenerate += 1,
            Some(p) => {
                let dup = points
                    .iter()
                    .any(|q| ((q.x - p.x) / dx).abs() < 1.0 && ((q.k - p.k) / dk).abs() < 1.0);
                if !dup {
                    points.push(p);
                }
            }
        }
    }
    // a seed that never found a nonzero index is only "degenerate" if no
    // neighbouring seed located an isolated point
    Ok(StagnationReport {
        points,
        degenerate_cells: degenerate,
    })
}

fn refine(
    centre: (f64, f64),
    cell: (f64, f64),
    eval: &(dyn Fn(f64, f64) -> Result<(f64, f64)> + Sync),
) -> Result<Option<StagnationPoint>> {
    // ring of a box with half-widths (hx, hk) in lattice units, counterclockwise
    const RING: [(i32, i32); 8] = [
        (1, 0),
        (1, 1),
        (0, 1),
        (-1, 1),
        (-1, 0),
        (-1, -1),
        (0, -1),
        (1, -1),
    ];
    let (mut cx, mut ck) = centre;
    let (mut hx, mut hk) = cell;
    let mut winding = 0;
    let mut lattice = [[(0.0, 0.0); 5]; 5];
    let mut found = false;
    while hx > REFINE_TOL * cell.0 {
        for (p, row) in lattice.iter_mut().enumerate() {
            for (q, v) in row.iter_mut().enumerate() {
                let x = cx + (p as f64 - 2.0) * 0.5 * hx;
                let k = ck + (q as f64 - 2.0) * 0.5 * hk;
                *v = eval(x, k)?;
            }
        }
        if !found {
            // the seed box itself must enclose a nonzero index
            let ring: Vec<_> = RING
                .iter()
                .map(|&(a, b)| lattice[(2 + 2 * a) as usize][(2 + 2 * b) as usize])
                .collect();
            let (idx, worst) = loop_index(&ring);
            if idx == 0 || worst > FLIP_ANGLE {
                return Ok(None);
            }
            found = true;
        }
        let mut best: Option<(f64, i32, i32, i32)> = None;
        for sp in -1..=1 {
            for sq in -1..=1 {
                let ring: Vec<_> = RING
                    .iter()
                    .map(|&(a, b)| lattice[(2 + sp + a) as usize][(2 + sq + b) as usize])
                    .collect();
                let (idx, worst) = loop_index(&ring);
                if idx == 0 || worst > FLIP_ANGLE {
                    continue;
                }
                let min_norm = ring
                    .iter()
                    .map(|v| v.0.hypot(v.1))
                    .fold(f64::INFINITY, f64::min);
                if best.is_none_or(|b| min_norm > b.0) {
                    best = Some((min_norm, sp, sq, idx));
                }
            }
        }
        let Some((_, sp, sq, idx)) = best else {
            return Ok(None);
        };
        cx += sp as f64 * 0.5 * hx;
        ck += sq as f64 * 0.5 * hk;
        hx *= 0.5;
        hk *= 0.5;
        winding = idx;
    }
    // rotation sense from the curl on the final lattice
    let curl = (lattice[3][2].1 - lattice[1][2].1) / hx - (lattice[2][3].0 - lattice[2][1].0) / hk;
    let circulation = if winding == 1 {
        curl.signum() as i32
    } else {
        0
    };
    let (jx, jk) = eval(cx, ck)?;
    let kind = if ck.abs() < 0.5 * cell.1 {
        StagnationKind::ClassicalVortex
    } else {
        StagnationKind::QuantumInduced
    };
    Ok(Some(StagnationPoint {
        x: cx,
        k: ck,
        winding,
        circulation,
        kind,
        residual: jx.hypot(jk),
        box_size: 2.0 * hx / cell.0,
    }))
}

/// Index of the field along a closed curve, oriented counterclockwise
/// whatever the sampling direction of `curve`. Also returns the largest
/// angle step so callers can check the sampling was fine enough.
pub fn curve_winding(
    curve: &[(f64, f64)],
    eval: &(dyn Fn(f64, f64) -> Result<(f64, f64)> + Sync),
) -> Result<(i32, f64)> {
    let vectors: Vec<(f64, f64)> = curve
        .par_iter()
        .map(|&(x, k)| eval(x, k))
        .collect::<Result<_>>()?;
    let (idx, worst) = loop_index(&vectors);
    // shoelace: negative area means clockwise traversal
    let area: f64 = (0..curve.len())
        .map(|i| {
            let (a, b) = (curve[i], curve[(i + 1) % curve.len()]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    Ok((if area < 0.0 { -idx } else { idx }, worst))
}

/// Even-odd test for a point inside a closed polygon.
pub fn point_in_polygon(p: (f64, f64), poly: &[(f64, f64)]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + n - 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) && p.0 < (b.0 - a.0) * (p.1 - a.1) / (b.1 - a.1) + a.0 {
            inside = !inside;
        }
    }
    inside
}

/// Samples of a classical orbit over one period.
pub fn orbit_polygon(orbit: &ClassicalOrbit, n: usize) -> Result<Vec<(f64, f64)>> {
    (0..n)
        .map(|i| classical_orbit(TAU * i as f64 / n as f64, orbit))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopFluxResult {
    pub orbit: ClassicalOrbit,
    pub value: f64,
    pub abs_bound: f64,
}

/// Net quantum flux −∫₀^{2π} dτ Δ𝒥_k(x_C, k_C) dx_C/dτ through the classical
/// orbit, by the periodic trapezoid rule.
pub fn loop_flux(
    orbit: &ClassicalOrbit,
    state: &ThermalState,
    n_tau: usize,
) -> Result<LoopFluxResult> {
    let a = state.alpha();
    loop_flux_with(orbit, n_tau, |x, k| {
        let (c, err) = thermal_currents_estimate(x, k, state)?;
        Ok((c.delta_j_k(a), err))
    })
}

/// [`loop_flux`] for an arbitrary Δ𝒥_k, given as (value, error bound).
pub fn loop_flux_with(
    orbit: &ClassicalOrbit,
    n_tau: usize,
    delta_jk: impl Fn(f64, f64) -> Result<(f64, f64)> + Sync,
) -> Result<LoopFluxResult> {
    if n_tau < 64 || !n_tau.is_multiple_of(2) {
        return Err(Error::domain(
            "loop_flux",
            format!("n_tau = {n_tau} must be even and >= 64"),
        ));
    }
    let samples: Vec<(f64, f64)> = (0..n_tau)
        .into_par_iter()
        .map(|i| {
            let tau = TAU * i as f64 / n_tau as f64;
            let (x, k) = classical_orbit(tau, orbit)?;
            let (dj, err) = delta_jk(x, k)?;
            // dx_C/dτ = k_C/2
            Ok((dj * 0.5 * k, err * 0.5 * k.abs()))
        })
        .collect::<Result<_>>()?;
    let h = TAU / n_tau as f64;
    let full: f64 = -h * samples.iter().map(|s| s.0).sum::<f64>();
    let half: f64 = -2.0 * h * samples.iter().step_by(2).map(|s| s.0).sum::<f64>();
    let propagated: f64 = h * samples.iter().map(|s| s.1).sum::<f64>();
    Ok(LoopFluxResult {
        orbit: *orbit,
        value: full,
        abs_bound: (full - half).abs() + propagated,
    })
}
