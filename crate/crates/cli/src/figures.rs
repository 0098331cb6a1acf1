//! Parameter sets behind the published figures, as ready-to-run configs.
//!
//! Each caption fixes α and b (or ε); the datasets are written under one
//! directory with the figure and panel in the file name.

use std::path::Path;

use crate::config::{Command, Format, RunConfig};

/// One config per panel. `grid` overrides the phase-space grid of the
/// field panels (the default grid otherwise).
pub fn figure_configs(dir: &Path, grid: Option<&str>, format: Format) -> Vec<RunConfig> {
    let ext = format.extension();
    let out = |name: String| dir.join(format!("{name}.{ext}")).display().to_string();
    let field = |c: RunConfig| match grid {
        Some(g) => c.with("grid", g),
        None => c,
    };
    let mut v = Vec::new();

    // Wigner flow for α = 3/2 at three temperatures
    for b in ["0.5", "1", "2"] {
        v.push(field(
            RunConfig::new(Command::Currents)
                .with("alpha", "3/2")
                .with("b", b)
                .with("output", out(format!("fig1_currents_alpha3-2_b{b}"))),
        ));
    }
    // influence of α at b = 2
    for a in ["5/2", "7/2", "11/2"] {
        v.push(field(
            RunConfig::new(Command::Currents)
                .with("alpha", a)
                .with("b", "2")
                .with(
                    "output",
                    out(format!("fig2_currents_alpha{}_b2", a.replace('/', "-"))),
                ),
        ));
    }
    // non-Liouvillian quantifier for α = 7/2
    for b in ["2", "1.5", "1"] {
        v.push(field(
            RunConfig::new(Command::Divergence)
                .with("alpha", "7/2")
                .with("b", b)
                .with("output", out(format!("fig3_divw_alpha7-2_b{b}"))),
        ));
    }
    // trajectories over the potential, ε = 0
    for a in ["3/2", "11/2"] {
        v.push(
            RunConfig::new(Command::BohmTraj)
                .with("alpha", a)
                .with("epsilon", "0")
                .with(
                    "output",
                    out(format!("fig4_traj_alpha{}_eps0", a.replace('/', "-"))),
                ),
        );
    }
    // quantum force over (x, τ) with the special trajectories on top
    for a in ["3/2", "11/2"] {
        for e in ["0", "0.2"] {
            let tag = format!("alpha{}_eps{e}", a.replace('/', "-"));
            v.push(
                RunConfig::new(Command::QuantumForce)
                    .with("alpha", a)
                    .with("epsilon", e)
                    .with("output", out(format!("fig5_force_{tag}"))),
            );
            v.push(
                RunConfig::new(Command::BohmTraj)
                    .with("alpha", a)
                    .with("epsilon", e)
                    .with("output", out(format!("fig5_traj_{tag}"))),
            );
        }
    }
    // force along the classical start and two neighbours, ε = 0.2
    for a in ["3/2", "11/2"] {
        v.push(
            RunConfig::new(Command::BohmTraj)
                .with("alpha", a)
                .with("epsilon", "0.2")
                .with("set", "classical-0.1,classical,classical+0.1")
                .with(
                    "output",
                    out(format!("fig6_force_alpha{}_eps0.2", a.replace('/', "-"))),
                ),
        );
    }
    let fmt = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    v.into_iter().map(|c| c.with("format", fmt)).collect()
}
