//! Method-of-lines time evolution with classical RK4.
//!
//! HHM, polar form:
//! `θ_t = 2 sinh θ θ_x φ_x + cosh θ φ_xx`,
//! `φ_t = sech θ θ_xx + sinh θ φ_x²`.
//!
//! HHM, ambient form: `ψ_t = (ηψ) × (ηψ_xx)` with `η = diag(1, 1, −1)` and the
//! Euclidean cross product; optionally projected back onto `η(ψ, ψ) = 1`.
//!
//! HSM: `θ_tt − θ_xx = −cosh θ sinh θ (φ_t² − φ_x²)` and
//! `(φ_t cosh²θ)_t = (φ_x cosh²θ)_x`, advanced through `π = φ_t cosh²θ`.
//!
//! The azimuth is stored lifted: `φ[i + M] = φ[i] + 2πN`.

mod stencil;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_traits::Float;

use crate::families::{HsmBlowup, PhaseRate, TravellingProfile};
use crate::geometry::{principal_increment, unwrap_azimuth, PolarAngles, PolarField, SpaceKind, CONSTRAINT_TOL};
use crate::quad::{integrate, Tolerance};
use crate::{Error, Result};

pub use stencil::SpatialScheme;
use stencil::{Derivatives, LowPass};

/// `|θ|` beyond which `cosh θ` is about to overflow.
pub const THETA_GUARD: f64 = 700.0;

/// RK4 stability radius used for the time-step check (the method is stable
/// for `|λ dt| ≲ 2.8` on both the real and imaginary axes).
pub const RK4_RADIUS: f64 = 2.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Hhm,
    Hsm,
}

/// State variables of an HHM run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// `(θ, φ)`.
    Polar,
    /// `ψ ∈ ℝ³` on the hyperboloid.
    Ambient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub model: Model,
    pub representation: Representation,
    pub points: usize,
    pub space: SpaceKind,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: SpatialScheme,
    /// Project the ambient field back onto the hyperboloid after each step.
    pub renormalize: bool,
    /// Record diagnostics every `cadence` steps (and at the end).
    pub cadence: usize,
    pub constraint_tol: f64,
    /// Fourier low-pass on the initial data and on every right-hand side:
    /// keep wavenumber indices `|j| ≤ cutoff`. Needs a power-of-two grid.
    pub filter: Option<usize>,
}

impl SimulationConfig {
    pub fn new(model: Model, points: usize, space: SpaceKind, dt: f64, t_end: f64) -> Self {
        Self {
            model,
            representation: Representation::Polar,
            points,
            space,
            dt,
            t_end,
            scheme: SpatialScheme::FourthOrderCentered,
            renormalize: true,
            cadence: 1,
            constraint_tol: CONSTRAINT_TOL,
            filter: None,
        }
    }

    pub fn with_scheme(mut self, scheme: SpatialScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_representation(mut self, representation: Representation) -> Self {
        self.representation = representation;
        self
    }

    pub fn with_cadence(mut self, cadence: usize) -> Self {
        self.cadence = cadence;
        self
    }

    pub fn with_renormalize(mut self, on: bool) -> Self {
        self.renormalize = on;
        self
    }

    pub fn with_filter(mut self, cutoff: Option<usize>) -> Self {
        self.filter = cutoff;
        self
    }

    pub fn spacing(&self) -> f64 {
        self.space.spacing(self.points)
    }

    /// Checks everything that does not depend on the initial data.
    pub fn validate(&self) -> Result<()> {
        if self.points < 5 {
            return Err(Error::Config(format!("grid needs at least 5 points (got {})", self.points)));
        }
        if self.scheme == SpatialScheme::Spectral && !self.points.is_power_of_two() {
            return Err(Error::Config(format!(
                "spectral scheme needs a power-of-two grid (got {})",
                self.points
            )));
        }
        if self.filter.is_some() && !self.points.is_power_of_two() {
            return Err(Error::Config(format!(
                "the low-pass filter needs a power-of-two grid (got {})",
                self.points
            )));
        }
        if let SpaceKind::TruncatedLine { half_length } = self.space {
            if !(half_length > 0.0 && half_length.is_finite()) {
                return Err(Error::Config("half-length must be positive".into()));
            }
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive (got {})", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("end time must be non-negative (got {})", self.t_end)));
        }
        if self.cadence == 0 {
            return Err(Error::Config("cadence must be at least 1".into()));
        }
        if self.model == Model::Hsm && self.representation == Representation::Ambient {
            return Err(Error::Config("the HSM is evolved in polar form only".into()));
        }
        Ok(())
    }

    /// Number of steps and the length of the last one.
    fn schedule(&self) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, 0.0);
        }
        let n = (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, self.t_end - (n - 1) as f64 * self.dt)
    }
}

/// Field data at one time.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    HhmPolar { theta: Vec<f64>, phi: Vec<f64> },
    HhmAmbient { psi: Vec<[f64; 3]> },
    /// `phi_t` is stored as the momentum `π = φ_t cosh²θ`.
    Hsm { theta: Vec<f64>, phi: Vec<f64>, theta_t: Vec<f64>, momentum: Vec<f64> },
}

impl State {
    pub fn hsm(theta: Vec<f64>, phi: Vec<f64>, theta_t: Vec<f64>, phi_t: &[f64]) -> Self {
        let momentum = theta.iter().zip(phi_t).map(|(t, p)| p * t.cosh().powi(2)).collect();
        State::Hsm { theta, phi, theta_t, momentum }
    }

    pub fn ambient_from_polar(theta: &[f64], phi: &[f64]) -> Self {
        let psi = theta
            .iter()
            .zip(phi)
            .map(|(&t, &p)| {
                let (s, c) = p.sin_cos();
                let ch = t.cosh();
                [ch * c, ch * s, t.sinh()]
            })
            .collect();
        State::HhmAmbient { psi }
    }

    pub fn len(&self) -> usize {
        match self {
            State::HhmPolar { theta, .. } | State::Hsm { theta, .. } => theta.len(),
            State::HhmAmbient { psi } => psi.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn model(&self) -> Model {
        match self {
            State::Hsm { .. } => Model::Hsm,
            _ => Model::Hhm,
        }
    }

    /// `(θ, φ)`; for the ambient state `φ` is the principal `atan2`.
    pub fn angles(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            State::HhmPolar { theta, phi } | State::Hsm { theta, phi, .. } => (theta.clone(), phi.clone()),
            State::HhmAmbient { psi } => (
                psi.iter().map(|p| p[2].asinh()).collect(),
                psi.iter().map(|p| p[1].atan2(p[0])).collect(),
            ),
        }
    }

    pub fn to_polar_field(&self, time: f64, space: SpaceKind) -> PolarField {
        let (theta, phi) = self.angles();
        let angles = theta.into_iter().zip(phi).map(|(t, p)| PolarAngles::new(t, p)).collect();
        PolarField::new(angles, time, space)
    }

    fn flatten(&self) -> Vec<f64> {
        match self {
            State::HhmPolar { theta, phi } => theta.iter().chain(phi).copied().collect(),
            State::HhmAmbient { psi } => (0..3).flat_map(|c| psi.iter().map(move |p| p[c])).collect(),
            State::Hsm { theta, phi, theta_t, momentum } => {
                theta.iter().chain(phi).chain(theta_t).chain(momentum).copied().collect()
            }
        }
    }

    fn unflatten(&self, y: &[f64]) -> State {
        let m = self.len();
        let part = |k: usize| y[k * m..(k + 1) * m].to_vec();
        match self {
            State::HhmPolar { .. } => State::HhmPolar { theta: part(0), phi: part(1) },
            State::HhmAmbient { .. } => State::HhmAmbient {
                psi: (0..m).map(|i| [y[i], y[m + i], y[2 * m + i]]).collect(),
            },
            State::Hsm { .. } => State::Hsm { theta: part(0), phi: part(1), theta_t: part(2), momentum: part(3) },
        }
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AbortKind {
    /// `|θ|` exceeded [`THETA_GUARD`] or the field became non-finite.
    BlowUp,
    /// `η(ψ, ψ)` left the positive basin, or the projected residual is large.
    Instability { residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abort {
    pub kind: AbortKind,
    /// End time of the step that failed.
    pub time: f64,
    /// Time of the last accepted state.
    pub last_good_time: f64,
}

impl From<Abort> for Error {
    fn from(a: Abort) -> Self {
        match a.kind {
            AbortKind::BlowUp => Error::BlowUp { blowup_time: a.time },
            AbortKind::Instability { residual } => {
                Error::Config(format!("instability at t = {}: constraint residual {residual}", a.time))
            }
        }
    }
}

/// `(θ, φ)` at a probe location (nearest grid point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSample {
    pub x: f64,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRecord {
    pub t: f64,
    /// HHM: `∫ℋ dx` with `ℋ = ½(cosh²θ φ_x² − θ_x²)`. HSM: `∫ε dx`.
    pub energy: f64,
    /// HHM: `½∫ℋ dx`. HSM: equal to `energy`.
    pub energy_half: f64,
    pub constraint_residual: f64,
    /// Rounded winding number (circle only).
    pub winding: Option<i64>,
    /// `Δφ/2π` from the link increments.
    pub turns: f64,
    pub theta_max: f64,
    pub theta_min: f64,
    pub probes: Vec<ProbeSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub records: Vec<DiagnosticRecord>,
    pub abort: Option<Abort>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub diagnostics: Diagnostics,
    pub final_state: State,
    pub final_time: f64,
}

/// A configured, steppable simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: SimulationConfig,
    template: State,
    y: Vec<f64>,
    time: f64,
    /// Seam jump `2πN` of the lifted azimuth.
    jump: f64,
    ops: Derivatives,
    low_pass: Option<LowPass>,
    work: Workspace,
}

#[derive(Debug, Clone)]
struct Workspace {
    k: [Vec<f64>; 4],
    stage: Vec<f64>,
    next: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
    e: Vec<f64>,
}

impl Workspace {
    fn new(n: usize, m: usize) -> Self {
        Self {
            k: [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            stage: vec![0.0; n],
            next: vec![0.0; n],
            a: vec![0.0; m],
            b: vec![0.0; m],
            c: vec![0.0; m],
            d: vec![0.0; m],
            e: vec![0.0; m],
        }
    }
}

/// Seam jump of a lifted azimuth: `2π·round((φ[M−1] − φ[0])/2π)`.
fn seam_jump(phi: &[f64]) -> f64 {
    let (first, last) = (phi[0], phi[phi.len() - 1]);
    TAU * ((last - first) / TAU).round()
}

impl Simulation {
    pub fn new(cfg: SimulationConfig, state: State) -> Result<Self> {
        cfg.validate()?;
        if state.len() != cfg.points {
            return Err(Error::Config(format!(
                "initial state has {} points but the grid has {}",
                state.len(),
                cfg.points
            )));
        }
        let expected = match cfg.model {
            Model::Hsm => matches!(state, State::Hsm { .. }),
            Model::Hhm => match cfg.representation {
                Representation::Polar => matches!(state, State::HhmPolar { .. }),
                Representation::Ambient => matches!(state, State::HhmAmbient { .. }),
            },
        };
        if !expected {
            return Err(Error::Config("initial state does not match model/representation".into()));
        }
        let y = state.flatten();
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("initial state is not finite".into()));
        }
        let jump = match &state {
            State::HhmPolar { phi, .. } | State::Hsm { phi, .. } => seam_jump(phi),
            State::HhmAmbient { psi } => {
                let worst = psi.iter().map(|p| (eta(*p, *p) - 1.0).abs()).fold(0.0, f64::max);
                if worst > cfg.constraint_tol {
                    return Err(Error::Config(format!(
                        "initial state violates the constraint (residual {worst})"
                    )));
                }
                0.0
            }
        };
        let (_, length) = cfg.space.interval();
        let mut sim = Self {
            ops: Derivatives::new(cfg.scheme, cfg.points, length),
            low_pass: cfg.filter.map(|c| LowPass::new(cfg.points, c)),
            work: Workspace::new(y.len(), cfg.points),
            template: state,
            y,
            time: 0.0,
            jump,
            cfg,
        };
        if let Some(lp) = sim.low_pass.as_mut() {
            filter_fields(lp, &sim.template, sim.jump, &mut sim.y);
        }
        let limit = sim.max_stable_dt();
        if cfg.dt > limit {
            return Err(Error::Config(format!(
                "dt = {} exceeds the stability limit {limit:.6e} for this grid and initial data",
                cfg.dt
            )));
        }
        Ok(sim)
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.cfg
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Winding number `N` fixed by the lift of the initial azimuth.
    pub fn lift_winding(&self) -> i64 {
        (self.jump / TAU).round() as i64
    }

    pub fn state(&self) -> State {
        self.template.unflatten(&self.y)
    }

    /// Largest stable `dt` for the current data: the dispersive HHM needs
    /// `dt (λ₂ + a λ₁) ≤ 2.8` with `a` the advection speed estimate
    /// `max 2|sinh θ φ_x|`; the HSM needs `dt (√λ₂ + a λ₁) ≤ 2.8`.
    pub fn max_stable_dt(&mut self) -> f64 {
        let h = self.cfg.spacing();
        let l2 = self.cfg.scheme.second_derivative_radius(h);
        let l1 = self.cfg.scheme.first_derivative_radius(h);
        let (theta, phi) = self.template.unflatten(&self.y).angles();
        let (lifted, jump) = match self.template {
            // ambient φ is principal-valued; unwrap before differencing
            State::HhmAmbient { .. } => {
                let lifted = lift_sequence(&phi);
                let jump = seam_jump(&lifted);
                (lifted, jump)
            }
            _ => (phi, self.jump),
        };
        let mut phi_x = vec![0.0; lifted.len()];
        self.ops.apply(&lifted, jump, &mut phi_x, None);
        let adv = theta
            .iter()
            .zip(&phi_x)
            .map(|(t, p)| 2.0 * (t.sinh() * p).abs())
            .fold(0.0, f64::max);
        let rate = match self.cfg.model {
            Model::Hhm => l2 + adv * l1,
            Model::Hsm => l2.sqrt() + adv * l1,
        };
        RK4_RADIUS / rate
    }

    fn rhs(ops: &mut Derivatives, w: &mut RhsScratch<'_>, model: &State, jump: f64, y: &[f64], out: &mut [f64]) {
        let m = w.a.len();
        match model {
            State::HhmPolar { .. } => {
                let (theta, phi) = y.split_at(m);
                let (dtheta, dphi) = out.split_at_mut(m);
                ops.apply(theta, 0.0, w.a, Some(w.b));
                ops.apply(phi, jump, w.c, Some(w.d));
                for i in 0..m {
                    let (s, c) = (theta[i].sinh(), theta[i].cosh());
                    let (tx, txx, px, pxx) = (w.a[i], w.b[i], w.c[i], w.d[i]);
                    dtheta[i] = 2.0 * s * tx * px + c * pxx;
                    dphi[i] = txx / c + s * px * px;
                }
            }
            State::HhmAmbient { .. } => {
                // ψ_t = (ηψ) × (ηψ_xx)
                ops.apply(&y[0..m], 0.0, w.e, Some(w.a));
                ops.apply(&y[m..2 * m], 0.0, w.e, Some(w.b));
                ops.apply(&y[2 * m..3 * m], 0.0, w.e, Some(w.c));
                for i in 0..m {
                    let a = [y[i], y[m + i], -y[2 * m + i]];
                    let b = [w.a[i], w.b[i], -w.c[i]];
                    out[i] = a[1] * b[2] - a[2] * b[1];
                    out[m + i] = a[2] * b[0] - a[0] * b[2];
                    out[2 * m + i] = a[0] * b[1] - a[1] * b[0];
                }
            }
            State::Hsm { .. } => {
                let theta = &y[0..m];
                let phi = &y[m..2 * m];
                let theta_t = &y[2 * m..3 * m];
                let momentum = &y[3 * m..4 * m];
                ops.apply(theta, 0.0, w.a, Some(w.b));
                ops.apply(phi, jump, w.c, None);
                for i in 0..m {
                    let c = theta[i].cosh();
                    w.d[i] = w.c[i] * c * c;
                }
                ops.apply(w.d, 0.0, w.e, None);
                for i in 0..m {
                    let (s, c) = (theta[i].sinh(), theta[i].cosh());
                    let phi_t = momentum[i] / (c * c);
                    let phi_x = w.c[i];
                    out[i] = theta_t[i];
                    out[m + i] = phi_t;
                    out[2 * m + i] = w.b[i] - c * s * (phi_t * phi_t - phi_x * phi_x);
                    out[3 * m + i] = w.e[i];
                }
            }
        }
    }

    /// One RK4 step of length `dt`; the state is only replaced when the
    /// result passes the guards.
    pub fn step_by(&mut self, dt: f64) -> core::result::Result<(), Abort> {
        let n = self.y.len();
        let Workspace { k, stage, next, a, b, c, d, e } = &mut self.work;
        let mut scratch = RhsScratch { a, b, c, d, e };
        let [k1, k2, k3, k4] = k;
        Self::rhs(&mut self.ops, &mut scratch, &self.template, self.jump, &self.y, k1);
        if let Some(lp) = self.low_pass.as_mut() {
            filter_fields(lp, &self.template, 0.0, k1);
        }
        for i in 0..n {
            stage[i] = self.y[i] + 0.5 * dt * k1[i];
        }
        Self::rhs(&mut self.ops, &mut scratch, &self.template, self.jump, stage, k2);
        if let Some(lp) = self.low_pass.as_mut() {
            filter_fields(lp, &self.template, 0.0, k2);
        }
        for i in 0..n {
            stage[i] = self.y[i] + 0.5 * dt * k2[i];
        }
        Self::rhs(&mut self.ops, &mut scratch, &self.template, self.jump, stage, k3);
        if let Some(lp) = self.low_pass.as_mut() {
            filter_fields(lp, &self.template, 0.0, k3);
        }
        for i in 0..n {
            stage[i] = self.y[i] + dt * k3[i];
        }
        Self::rhs(&mut self.ops, &mut scratch, &self.template, self.jump, stage, k4);
        if let Some(lp) = self.low_pass.as_mut() {
            filter_fields(lp, &self.template, 0.0, k4);
        }
        for i in 0..n {
            next[i] = self.y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = self.time + dt;
        let abort = |kind| Abort { kind, time: t_next, last_good_time: self.time };
        let m = self.cfg.points;
        let theta_bad = match self.template {
            State::HhmAmbient { .. } => next.iter().any(|v| !v.is_finite()) || next[2 * m..].iter().any(|z| z.abs() > THETA_GUARD.sinh()),
            _ => next.iter().any(|v| !v.is_finite()) || next[..m].iter().any(|t| t.abs() > THETA_GUARD),
        };
        if theta_bad {
            return Err(abort(AbortKind::BlowUp));
        }
        if let State::HhmAmbient { .. } = self.template {
            let mut worst: f64 = 0.0;
            for i in 0..m {
                let p = [next[i], next[m + i], next[2 * m + i]];
                let norm = eta(p, p);
                if !(norm > 0.5) {
                    return Err(abort(AbortKind::Instability { residual: (norm - 1.0).abs() }));
                }
                if self.cfg.renormalize {
                    let s = 1.0 / norm.sqrt();
                    next[i] *= s;
                    next[m + i] *= s;
                    next[2 * m + i] *= s;
                    let q = [next[i], next[m + i], next[2 * m + i]];
                    worst = worst.max((eta(q, q) - 1.0).abs());
                }
            }
            if self.cfg.renormalize && worst > 100.0 * self.cfg.constraint_tol {
                return Err(abort(AbortKind::Instability { residual: worst }));
            }
        }
        core::mem::swap(&mut self.y, next);
        self.time = t_next;
        Ok(())
    }

    /// Diagnostics for the current state.
    pub fn record(&mut self, probes: &[f64]) -> DiagnosticRecord {
        let m = self.cfg.points;
        let h = self.cfg.spacing();
        let state = self.template.unflatten(&self.y);
        let (theta, phi) = state.angles();
        let mut d1 = vec![0.0; m];
        let mut d2 = vec![0.0; m];
        let energy = match &state {
            State::HhmPolar { .. } => {
                self.ops.apply(&theta, 0.0, &mut d1, None);
                self.ops.apply(&phi, self.jump, &mut d2, None);
                (0..m).map(|i| 0.5 * (theta[i].cosh().powi(2) * d2[i] * d2[i] - d1[i] * d1[i])).sum::<f64>() * h
            }
            State::HhmAmbient { psi } => {
                let mut total = 0.0;
                let mut dx = [vec![0.0; m], vec![0.0; m], vec![0.0; m]];
                for (c, out) in dx.iter_mut().enumerate() {
                    let comp: Vec<f64> = psi.iter().map(|p| p[c]).collect();
                    self.ops.apply(&comp, 0.0, out, None);
                }
                for i in 0..m {
                    total += 0.5 * (dx[0][i] * dx[0][i] + dx[1][i] * dx[1][i] - dx[2][i] * dx[2][i]);
                }
                total * h
            }
            State::Hsm { theta_t, momentum, .. } => {
                self.ops.apply(&theta, 0.0, &mut d1, None);
                self.ops.apply(&phi, self.jump, &mut d2, None);
                (0..m)
                    .map(|i| {
                        let c2 = theta[i].cosh().powi(2);
                        let phi_t = momentum[i] / c2;
                        c2 * (phi_t * phi_t + d2[i] * d2[i]) - (theta_t[i] * theta_t[i] + d1[i] * d1[i])
                    })
                    .sum::<f64>()
                    * h
            }
        };
        let constraint_residual = match &state {
            State::HhmAmbient { psi } => psi.iter().map(|p| (eta(*p, *p) - 1.0).abs()).fold(0.0, f64::max),
            _ => state.to_polar_field(self.time, self.cfg.space).max_constraint_residual(),
        };
        let report = unwrap_azimuth(phi.iter().copied(), self.cfg.space.is_circle());
        let winding = if report.under_resolved { None } else { report.winding };
        let probes = probes
            .iter()
            .map(|&x| {
                let (a, len) = self.cfg.space.interval();
                let i = (((x - a) / len * m as f64).round() as i64).rem_euclid(m as i64) as usize;
                ProbeSample { x, theta: theta[i], phi: phi[i] }
            })
            .collect();
        DiagnosticRecord {
            t: self.time,
            energy,
            energy_half: if matches!(state, State::Hsm { .. }) { energy } else { 0.5 * energy },
            constraint_residual,
            winding,
            turns: report.turns,
            theta_max: theta.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            theta_min: theta.iter().copied().fold(f64::INFINITY, f64::min),
            probes,
        }
    }

    /// Advances to the configured end time, recording diagnostics at the
    /// configured cadence.
    pub fn run(mut self, probes: &[f64]) -> RunOutcome {
        let (steps, last) = self.cfg.schedule();
        let mut records = vec![self.record(probes)];
        let mut abort = None;
        for s in 0..steps {
            let dt = if s + 1 == steps { last } else { self.cfg.dt };
            if let Err(a) = self.step_by(dt) {
                abort = Some(a);
                if records.last().map(|r| r.t) != Some(self.time) {
                    records.push(self.record(probes));
                }
                break;
            }
            // keep the clock on the grid s·dt
            self.time = if s + 1 == steps { self.cfg.t_end } else { (s + 1) as f64 * self.cfg.dt };
            if (s + 1) % self.cfg.cadence == 0 || s + 1 == steps {
                records.push(self.record(probes));
            }
        }
        RunOutcome {
            final_state: self.state(),
            final_time: self.time,
            diagnostics: Diagnostics { records, abort },
        }
    }
}

struct RhsScratch<'a> {
    a: &'a mut Vec<f64>,
    b: &'a mut Vec<f64>,
    c: &'a mut Vec<f64>,
    d: &'a mut Vec<f64>,
    e: &'a mut Vec<f64>,
}

fn filter_fields(lp: &mut LowPass, template: &State, jump: f64, y: &mut [f64]) {
    let m = template.len();
    for (k, field) in y.chunks_mut(m).enumerate() {
        let lifted = k == 1 && !matches!(template, State::HhmAmbient { .. });
        lp.apply(field, if lifted { jump } else { 0.0 });
    }
}

/// Largest filter cutoff `K` for which roundoff `ε` amplified by the HHM
/// growth `exp(κ² T)`, `κ = 2πK/length`, stays below `budget`.
///
/// The first-order HHM is ill-posed on this target: linearizing about any
/// state gives `δθ_tt = δθ_xxxx` at leading order, so mode `κ` grows like
/// `exp(κ² t)`. Without a cutoff, roundoff at the grid scale swamps any run.
pub fn growth_limited_cutoff(space: SpaceKind, t_end: f64, budget: f64) -> usize {
    let (_, length) = space.interval();
    let kappa = ((budget / f64::EPSILON).ln().max(0.0) / t_end.max(f64::MIN_POSITIVE)).sqrt();
    (kappa * length / TAU).floor() as usize
}

/// `η(a, b) = a1 b1 + a2 b2 − a3 b3`.
fn eta(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// Continuous lift of a principal-valued sequence.
fn lift_sequence(phi: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phi.len());
    let mut acc = match phi.first() {
        Some(&p) => p,
        None => return out,
    };
    out.push(acc);
    for w in phi.windows(2) {
        acc += principal_increment(w[1] - w[0]);
        out.push(acc);
    }
    out
}

/// Runs `cfg` from `initial`; configuration problems are errors, physical
/// aborts are reported in the outcome.
pub fn run(cfg: SimulationConfig, initial: State, probes: &[f64]) -> Result<RunOutcome> {
    Ok(Simulation::new(cfg, initial)?.run(probes))
}

/// Initial data.
pub mod seeds {
    use super::*;

    /// `sinh θ = p3`, `φ = N x`; evolves as `φ = N x + p3 N² t`.
    pub fn static_winding(p3: f64, n: i64, points: usize, space: SpaceKind) -> State {
        let theta = vec![p3.asinh(); points];
        let phi = space.grid(points).into_iter().map(|x| n as f64 * x).collect();
        State::HhmPolar { theta, phi }
    }

    const PHASE_TOL: Tolerance = Tolerance { abs: 1e-13, rel: 1e-12 };

    /// `∫_a^b dg/dξ`.
    pub fn phase_between(profile: &impl PhaseRate, a: f64, b: f64) -> Result<f64> {
        Ok(integrate(|s| profile.phase_rate(s), a, b, PHASE_TOL)?.value)
    }

    /// `g(ξ) = ∫₀^ξ dg/dξ`.
    pub fn phase(profile: &impl PhaseRate, xi: f64) -> Result<f64> {
        phase_between(profile, 0.0, xi)
    }

    /// HHM travelling wave at time `t`: `θ = asinh p(x − vt)`,
    /// `φ = g(x − vt) + ct`. The phase is accumulated cell by cell.
    pub fn hhm_travelling<F: TravellingProfile + PhaseRate>(
        profile: &F,
        v: f64,
        c: f64,
        t: f64,
        points: usize,
        space: SpaceKind,
    ) -> Result<State> {
        let xs: Vec<f64> = space.grid(points).into_iter().map(|x| x - v * t).collect();
        let theta = xs.iter().map(|&xi| profile.p(xi).asinh()).collect();
        let mut phi = Vec::with_capacity(points);
        let mut acc = phase(profile, xs[0])?;
        phi.push(acc + c * t);
        for w in xs.windows(2) {
            acc += phase_between(profile, w[0], w[1])?;
            phi.push(acc + c * t);
        }
        Ok(State::HhmPolar { theta, phi })
    }

    /// Spatially uniform HSM blow-up data at time `t`:
    /// `tanh θ = sn(ρ(t − t0)|m)`, `φ = N x`, `φ_t = 0`.
    pub fn hsm_blowup(family: &HsmBlowup, t: f64, points: usize, space: SpaceKind) -> Result<State> {
        let theta = vec![family.theta(t)?; points];
        let theta_t = vec![family.theta_t(t)?; points];
        let phi = space.grid(points).into_iter().map(|x| family.n as f64 * x).collect();
        Ok(State::Hsm { theta, phi, theta_t, momentum: vec![0.0; points] })
    }
}

/// Largest `|a − b|` over matching entries.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests;
