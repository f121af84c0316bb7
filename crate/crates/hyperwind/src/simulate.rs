use std::path::{Path, PathBuf};

use hyperwind_core::evolution::{
    run, seeds, AbortKind, DiagnosticRecord, Model, Representation, RunOutcome, State,
};
use hyperwind_core::families::{HhmCnoidal, HhmSech, HhmSine, HsmBlowup};
use hyperwind_core::Error as CoreError;

use crate::config::{Seed, SimulateConfig};
use crate::table::{num, Table};
use crate::CliError;

/// Initial state on the configured grid.
pub fn initial_state(cfg: &SimulateConfig) -> Result<State, CliError> {
    let sim = &cfg.sim;
    let (m, space) = (sim.points, sim.space);
    let polar = match cfg.seed {
        Seed::StaticWinding { p3, winding } => seeds::static_winding(p3, winding, m, space),
        Seed::HhmSine { k, v, winding, xi0 } => {
            let f = HhmSine::new(k, v, winding, xi0)?;
            seeds::hhm_travelling(&f, v, f.params.c, 0.0, m, space)?
        }
        Seed::HhmCnoidal { p1, p2, p3, xi0 } => {
            let f = HhmCnoidal::new(p1, p2, p3, xi0)?;
            seeds::hhm_travelling(&f, f.params.v, f.params.c, 0.0, m, space)?
        }
        Seed::HhmSech { p1, p3, xi0 } => {
            let f = HhmSech::new(p1, p3, xi0)?;
            seeds::hhm_travelling(&f, f.params.v, f.params.c, 0.0, m, space)?
        }
        Seed::Uniform { theta, phi } => match sim.model {
            Model::Hhm => State::HhmPolar { theta: vec![theta; m], phi: vec![phi; m] },
            Model::Hsm => State::hsm(vec![theta; m], vec![phi; m], vec![0.0; m], &vec![0.0; m]),
        },
        Seed::HsmBlowup { winding, rho, t0 } => {
            let f = HsmBlowup::new(winding, rho, t0)?;
            seeds::hsm_blowup(&f, 0.0, m, space)?
        }
    };
    Ok(match (sim.representation, &polar) {
        (Representation::Ambient, State::HhmPolar { theta, phi }) => State::ambient_from_polar(theta, phi),
        _ => polar,
    })
}

/// Paths written by [`write_outputs`].
#[derive(Debug, Clone)]
pub struct SimulateOutputs {
    pub diagnostics: PathBuf,
    pub probes: PathBuf,
    pub final_state: PathBuf,
}

/// Runs the simulation. Configuration problems are errors; a physical abort
/// is reported in the outcome.
pub fn simulate(cfg: &SimulateConfig) -> Result<RunOutcome, CliError> {
    let init = initial_state(cfg)?;
    run(cfg.sim, init, &cfg.probes).map_err(|e| match e {
        CoreError::Config(msg) if msg.contains("dt") => CliError::invalid("/dt", msg),
        CoreError::Config(msg) => CliError::invalid("/seed", msg),
        other => other.into(),
    })
}

pub fn diagnostics_table(records: &[DiagnosticRecord]) -> Table {
    let mut t = Table::new(&["t", "energy", "constraint_residual", "winding", "theta_max"]);
    for r in records {
        let winding = r.winding.map(|w| w.to_string()).unwrap_or_default();
        t.push_cells(&[num(r.t), num(r.energy), num(r.constraint_residual), winding, num(r.theta_max)]);
    }
    t
}

/// Companion table: the paper-normalized energy, field minimum, measured turns
/// and the probe samples.
pub fn probes_table(records: &[DiagnosticRecord], probes: &[f64]) -> Table {
    let mut header: Vec<String> = ["t", "energy_half", "theta_min", "turns"].map(String::from).to_vec();
    for i in 0..probes.len() {
        header.push(format!("theta_{i}"));
        header.push(format!("phi_{i}"));
    }
    let mut t = Table::new(&header);
    for r in records {
        let mut row = vec![r.t, r.energy_half, r.theta_min, r.turns];
        for p in &r.probes {
            row.push(p.theta);
            row.push(p.phi);
        }
        t.push(&row);
    }
    t
}

pub fn final_state_table(state: &State, cfg: &SimulateConfig) -> Table {
    let xs = cfg.sim.space.grid(cfg.sim.points);
    match state {
        State::HhmPolar { theta, phi } => {
            let mut t = Table::new(&["x", "theta", "phi"]);
            for i in 0..xs.len() {
                t.push(&[xs[i], theta[i], phi[i]]);
            }
            t
        }
        State::HhmAmbient { psi } => {
            let (theta, phi) = state.angles();
            let mut t = Table::new(&["x", "psi1", "psi2", "psi3", "theta", "phi"]);
            for i in 0..xs.len() {
                t.push(&[xs[i], psi[i][0], psi[i][1], psi[i][2], theta[i], phi[i]]);
            }
            t
        }
        State::Hsm { theta, phi, theta_t, momentum } => {
            let mut t = Table::new(&["x", "theta", "phi", "theta_t", "phi_t"]);
            for i in 0..xs.len() {
                let phi_t = momentum[i] / theta[i].cosh().powi(2);
                t.push(&[xs[i], theta[i], phi[i], theta_t[i], phi_t]);
            }
            t
        }
    }
}

pub fn write_outputs(out: &Path, cfg: &SimulateConfig, outcome: &RunOutcome) -> Result<SimulateOutputs, CliError> {
    let paths = SimulateOutputs {
        diagnostics: out.join("diagnostics.csv"),
        probes: out.join("probes.csv"),
        final_state: out.join("final_state.csv"),
    };
    diagnostics_table(&outcome.diagnostics.records).write(&paths.diagnostics)?;
    probes_table(&outcome.diagnostics.records, &cfg.probes).write(&paths.probes)?;
    final_state_table(&outcome.final_state, cfg).write(&paths.final_state)?;
    Ok(paths)
}

/// Message for an aborted run, `None` when the run reached `t_end`.
pub fn abort_message(outcome: &RunOutcome) -> Option<String> {
    let a = outcome.diagnostics.abort?;
    Some(match a.kind {
        AbortKind::BlowUp => format!(
            "blow-up at t = {} (last good state t = {})",
            num(a.time),
            num(a.last_good_time)
        ),
        AbortKind::Instability { residual } => format!(
            "instability at t = {}: constraint residual {} (last good state t = {})",
            num(a.time),
            num(residual),
            num(a.last_good_time)
        ),
    })
}
