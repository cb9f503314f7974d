//! Fixed-step RK4 integration of the smooth coupled systems, with
//! timescale-separation scaling of the behavioral coordinates, projection
//! onto the unit box, and threshold-crossing event detection.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::params::{SiriParams, SisParams};
use crate::model::{field_sis_raw, field_siri_raw, field_siri_vanilla, SisState};

/// A smooth dynamical system on `[0,1]^N`. Coordinates flagged behavioral
/// have their derivatives divided by the timescale factor epsilon.
pub trait System<const N: usize> {
    const NAMES: [&'static str; N];
    const BEHAVIORAL: [bool; N];

    fn eval(&self, state: &[f64; N]) -> [f64; N];

    /// Switching surfaces to log crossings against: (coordinate index, level).
    fn surfaces(&self) -> Vec<(usize, f64)> {
        Vec::new()
    }

    fn check_state(&self, state: &[f64; N]) -> Result<()> {
        for (i, &v) in state.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Simplex(format!(
                    "{} = {v} outside [0,1]",
                    Self::NAMES[i]
                )));
            }
        }
        Ok(())
    }
}

/// Coupled SIS system on `(y, z_S, z_I)`.
pub struct SisSystem {
    pub params: SisParams,
}

impl System<3> for SisSystem {
    const NAMES: [&'static str; 3] = ["y", "z_S", "z_I"];
    const BEHAVIORAL: [bool; 3] = [false, true, true];

    fn eval(&self, state: &[f64; 3]) -> [f64; 3] {
        field_sis_raw(state, &self.params)
    }

    fn surfaces(&self) -> Vec<(usize, f64)> {
        let y_int = self.params.thresholds().y_int;
        if y_int.is_finite() {
            vec![(0, y_int)]
        } else {
            Vec::new()
        }
    }
}

/// Coupled SIRI system on `(s, y, r, z_S, z_I, z_R)`.
pub struct SiriSystem {
    pub params: SiriParams,
}

impl System<6> for SiriSystem {
    const NAMES: [&'static str; 6] = ["s", "y", "r", "z_S", "z_I", "z_R"];
    const BEHAVIORAL: [bool; 6] = [false, false, false, true, true, true];

    fn eval(&self, state: &[f64; 6]) -> [f64; 6] {
        field_siri_raw(state, &self.params)
    }

    fn surfaces(&self) -> Vec<(usize, f64)> {
        let t = self.params.thresholds();
        let mut out = Vec::new();
        if t.y_int.is_finite() {
            out.push((1, t.y_int));
        }
        if let Some(y_hat) = t.y_hat_int {
            if y_hat.is_finite() {
                out.push((1, y_hat));
            }
        }
        out
    }

    fn check_state(&self, state: &[f64; 6]) -> Result<()> {
        for (i, &v) in state.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Simplex(format!(
                    "{} = {v} outside [0,1]",
                    Self::NAMES[i]
                )));
            }
        }
        let total = state[0] + state[1] + state[2];
        if (total - 1.0).abs() > crate::model::SIMPLEX_TOL {
            return Err(Error::Simplex(format!("s + y + r = {total} != 1")));
        }
        Ok(())
    }
}

/// SIRI dynamics without protective behavior, on `(s, y, r)`.
pub struct VanillaSiriSystem {
    pub beta: f64,
    pub beta_hat: f64,
    pub gamma: f64,
}

impl System<3> for VanillaSiriSystem {
    const NAMES: [&'static str; 3] = ["s", "y", "r"];
    const BEHAVIORAL: [bool; 3] = [false, false, false];

    fn eval(&self, state: &[f64; 3]) -> [f64; 3] {
        field_siri_vanilla(state[0], state[1], state[2], self.beta, self.beta_hat, self.gamma)
    }
}

/// Fixed-step integration settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    /// Step size.
    pub dt: f64,
    /// Time horizon.
    pub t_end: f64,
    /// Timescale separation factor in (0,1]; behavioral derivatives are
    /// divided by it.
    pub epsilon: f64,
    /// Coordinates within this distance outside [0,1] are clamped; larger
    /// excursions are hard errors.
    pub projection_tol: f64,
    /// Record every k-th step.
    pub record_stride: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            dt: 0.05,
            t_end: 100.0,
            epsilon: 1.0,
            projection_tol: 1e-9,
            record_stride: 1,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config("dt must be positive".into()));
        }
        if !(self.t_end >= self.dt) {
            return Err(Error::Config("t_end must be at least dt".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Config("epsilon must lie in (0,1]".into()));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record_stride must be positive".into()));
        }
        if !(self.projection_tol >= 0.0) {
            return Err(Error::Config("projection_tol must be nonnegative".into()));
        }
        Ok(())
    }

    /// The default spacing of 0.05 is reduced for small epsilon so that
    /// dt/epsilon stays bounded (stability of the fast replicator subsystem
    /// under RK4).
    pub fn default_dt_for_epsilon(epsilon: f64) -> f64 {
        if epsilon >= 0.1 {
            0.05
        } else {
            0.05 * epsilon / 0.1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingDirection {
    Up,
    Down,
}

/// A logged crossing of a switching surface, with the crossing time
/// estimated by linear interpolation between recorded samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub time: f64,
    pub surface: usize,
    pub direction: CrossingDirection,
}

/// Recorded output of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub events: Vec<CrossingEvent>,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &[f64; N] {
        self.states.last().expect("trajectory is never empty")
    }

    /// Column view of one coordinate.
    pub fn coordinate(&self, index: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[index]).collect()
    }

    /// Mean of a coordinate over the trailing `fraction` of the horizon.
    /// Convergence checks use window statistics because the trajectories
    /// are oscillatory.
    pub fn final_window_mean(&self, index: usize, fraction: f64) -> f64 {
        let t_from = self.times.last().unwrap() * (1.0 - fraction);
        let vals: Vec<f64> = self
            .times
            .iter()
            .zip(&self.states)
            .filter(|(t, _)| **t >= t_from)
            .map(|(_, s)| s[index])
            .collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    }

    /// Max deviation of a coordinate from a target over the trailing window.
    pub fn final_window_max_dev(&self, index: usize, fraction: f64, target: f64) -> f64 {
        let t_from = self.times.last().unwrap() * (1.0 - fraction);
        self.times
            .iter()
            .zip(&self.states)
            .filter(|(t, _)| **t >= t_from)
            .map(|(_, s)| (s[index] - target).abs())
            .fold(0.0, f64::max)
    }

    /// Peak-to-peak amplitude of a coordinate over `[t_lo, t_hi]`.
    pub fn window_amplitude(&self, index: usize, t_lo: f64, t_hi: f64) -> f64 {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for (t, s) in self.times.iter().zip(&self.states) {
            if *t >= t_lo && *t <= t_hi {
                min = min.min(s[index]);
                max = max.max(s[index]);
            }
        }
        if min > max {
            0.0
        } else {
            max - min
        }
    }

    /// Sign changes of the finite differences of one coordinate; zero means
    /// the recorded trajectory is monotone. Differences below `tol` in
    /// magnitude are ignored.
    pub fn derivative_sign_changes(&self, index: usize, tol: f64) -> usize {
        let mut changes = 0;
        let mut last_sign = 0i8;
        for w in self.states.windows(2) {
            let d = w[1][index] - w[0][index];
            if d.abs() <= tol {
                continue;
            }
            let sign = if d > 0.0 { 1 } else { -1 };
            if last_sign != 0 && sign != last_sign {
                changes += 1;
            }
            last_sign = sign;
        }
        changes
    }

    /// CSV document: header `t,<names...>`, one row per recorded step,
    /// 17-significant-digit floats.
    pub fn to_csv(&self, names: &[&str; N]) -> String {
        let mut out = String::with_capacity(self.times.len() * 24 * (N + 1));
        out.push('t');
        for name in names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (t, state) in self.times.iter().zip(&self.states) {
            let _ = write!(out, "{t:.16e}");
            for v in state {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// One classical RK4 step of the epsilon-scaled field, projected onto the
/// unit box. Coordinates escaping by more than `projection_tol` abort the
/// step.
pub fn rk4_step<const N: usize, S: System<N>>(
    sys: &S,
    state: &[f64; N],
    dt: f64,
    epsilon: f64,
    projection_tol: f64,
) -> Result<[f64; N]> {
    let next = rk4_step_unprojected(sys, state, dt, epsilon);
    project::<N, S>(state, next, projection_tol, f64::NAN)
}

/// Behavioral coordinates that start strictly inside (0,1) are kept at
/// least this far from the boundary. The replicator flow reaches z = 0 and
/// z = 1 only asymptotically, but a discrete step can round onto the
/// boundary, which is absorbing (z(1-z) = 0) and would freeze the
/// coordinate against any later payoff reversal.
const BEHAVIORAL_FLOOR: f64 = 1e-12;

fn scaled_eval<const N: usize, S: System<N>>(sys: &S, state: &[f64; N], epsilon: f64) -> [f64; N] {
    let mut d = sys.eval(state);
    if epsilon != 1.0 {
        for (v, behavioral) in d.iter_mut().zip(S::BEHAVIORAL) {
            if behavioral {
                *v /= epsilon;
            }
        }
    }
    d
}

fn rk4_step_unprojected<const N: usize, S: System<N>>(
    sys: &S,
    state: &[f64; N],
    dt: f64,
    epsilon: f64,
) -> [f64; N] {
    let k1 = scaled_eval(sys, state, epsilon);
    let k2 = scaled_eval(sys, &add_scaled(state, &k1, dt / 2.0), epsilon);
    let k3 = scaled_eval(sys, &add_scaled(state, &k2, dt / 2.0), epsilon);
    let k4 = scaled_eval(sys, &add_scaled(state, &k3, dt), epsilon);
    let mut next = *state;
    for i in 0..N {
        next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    next
}

fn add_scaled<const N: usize>(a: &[f64; N], b: &[f64; N], c: f64) -> [f64; N] {
    let mut out = *a;
    for i in 0..N {
        out[i] += c * b[i];
    }
    out
}

fn project<const N: usize, S: System<N>>(
    prev: &[f64; N],
    mut state: [f64; N],
    tol: f64,
    t: f64,
) -> Result<[f64; N]> {
    for (i, v) in state.iter_mut().enumerate() {
        if *v < 0.0 {
            if *v < -tol {
                return Err(Error::StepOutOfBounds { t, index: i, value: *v });
            }
            *v = 0.0;
        } else if *v > 1.0 {
            if *v > 1.0 + tol {
                return Err(Error::StepOutOfBounds { t, index: i, value: *v });
            }
            *v = 1.0;
        }
        if S::BEHAVIORAL[i] && prev[i] > 0.0 && prev[i] < 1.0 {
            *v = v.clamp(BEHAVIORAL_FLOOR, 1.0 - BEHAVIORAL_FLOOR);
        }
    }
    Ok(state)
}

/// Integrates the system over `ceil(t_end / dt)` RK4 steps, recording every
/// `record_stride`-th state and logging surface crossings between
/// consecutive recorded samples.
pub fn simulate<const N: usize, S: System<N>>(
    sys: &S,
    state0: [f64; N],
    cfg: &IntegrationConfig,
) -> Result<Trajectory<N>> {
    cfg.validate()?;
    sys.check_state(&state0)?;
    let surfaces = sys.surfaces();
    let n_steps = (cfg.t_end / cfg.dt).ceil() as usize;

    let mut traj = Trajectory {
        times: Vec::with_capacity(n_steps / cfg.record_stride + 2),
        states: Vec::with_capacity(n_steps / cfg.record_stride + 2),
        events: Vec::new(),
    };
    traj.times.push(0.0);
    traj.states.push(state0);

    let mut state = state0;
    let mut last_recorded = state0;
    let mut last_recorded_t = 0.0;
    for step in 1..=n_steps {
        let t = step as f64 * cfg.dt;
        let next = rk4_step_unprojected(sys, &state, cfg.dt, cfg.epsilon);
        state = project::<N, S>(&state, next, cfg.projection_tol, t)?;
        if step % cfg.record_stride == 0 || step == n_steps {
            log_crossings(
                &mut traj.events,
                &surfaces,
                &last_recorded,
                last_recorded_t,
                &state,
                t,
            );
            traj.times.push(t);
            traj.states.push(state);
            last_recorded = state;
            last_recorded_t = t;
        }
    }
    traj.events.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(traj)
}

fn log_crossings<const N: usize>(
    events: &mut Vec<CrossingEvent>,
    surfaces: &[(usize, f64)],
    prev: &[f64; N],
    t_prev: f64,
    next: &[f64; N],
    t_next: f64,
) {
    for (id, &(coord, level)) in surfaces.iter().enumerate() {
        let g0 = prev[coord] - level;
        let g1 = next[coord] - level;
        if g0 * g1 < 0.0 {
            let frac = g0 / (g0 - g1);
            events.push(CrossingEvent {
                time: t_prev + frac * (t_next - t_prev),
                surface: id,
                direction: if g1 > g0 {
                    CrossingDirection::Up
                } else {
                    CrossingDirection::Down
                },
            });
        }
    }
}

/// Payoff advantage of staying unprotected for susceptibles,
/// `Delta F = c_P - L (1-alpha) (beta_u z_I + beta_p (1-z_I)) y`. Its sign
/// selects the fast-flow attractor of z_S.
pub fn delta_f(state: &SisState, p: &SisParams) -> f64 {
    p.c_p - p.loss * (1.0 - p.alpha) * (p.beta_u * state.z_i + p.beta_p * (1.0 - state.z_i)) * state.y
}
