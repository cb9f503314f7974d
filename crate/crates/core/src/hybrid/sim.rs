use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::{CrossingDirection, CrossingEvent, IntegrationConfig, Trajectory};

/// One-sided derivatives within `1e-12` of zero are treated as tangential
/// grazing and routed to the corresponding smooth branch.
const GRAZE_TOL: f64 = 1e-12;

/// Maximum surface transitions without sliding engagement before the run is
/// declared chattering.
const CHATTER_LIMIT: usize = 10_000;

const BISECT_ITERS: usize = 40;

/// A piecewise-smooth system with switching surfaces on the prevalence
/// coordinate (index 0). Region `k` is the open band between surface `k-1`
/// and surface `k`; the fields extend smoothly to the surfaces.
pub trait HybridSystem<const N: usize> {
    const NAMES: [&'static str; N];

    /// Switching levels for coordinate 0, ascending.
    fn surfaces(&self) -> &[f64];

    fn region_field(&self, region: usize, state: &[f64; N]) -> [f64; N];

    fn check_state(&self, state: &[f64; N]) -> Result<()>;

    fn project(&self, mut state: [f64; N], tol: f64, t: f64) -> Result<[f64; N]> {
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
        }
        Ok(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HybridRegion {
    /// Open region index, bottom to top.
    Open(usize),
    /// On switching surface with the given index.
    Surface(usize),
}

impl std::fmt::Display for HybridRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HybridRegion::Open(k) => write!(f, "r{k}"),
            HybridRegion::Surface(k) => write!(f, "s{k}"),
        }
    }
}

/// Active branch of the piecewise field at a recorded sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HybridMode {
    pub region: HybridRegion,
    pub sliding: bool,
    /// Convex weight on the below-surface field while sliding.
    pub equivalent_control: Option<f64>,
}

/// Trajectory of a hybrid run: recorded states plus the active mode at each
/// sample.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridTrajectory<const N: usize> {
    pub base: Trajectory<N>,
    pub modes: Vec<HybridMode>,
}

impl<const N: usize> HybridTrajectory<N> {
    /// True if any recorded sample was in sliding mode.
    pub fn engaged_sliding(&self) -> bool {
        self.modes.iter().any(|m| m.sliding)
    }

    /// CSV with the state columns plus `mode` and `z_eq`.
    pub fn to_csv(&self, names: &[&str; N]) -> String {
        let mut out = String::new();
        out.push('t');
        for name in names {
            out.push(',');
            out.push_str(name);
        }
        out.push_str(",mode,z_eq\n");
        for ((t, state), mode) in self.base.times.iter().zip(&self.base.states).zip(&self.modes) {
            let _ = write!(out, "{t:.16e}");
            for v in state {
                let _ = write!(out, ",{v:.16e}");
            }
            let _ = write!(out, ",{}", mode.region);
            match mode.equivalent_control {
                Some(z) => {
                    let _ = write!(out, ",{z:.16e}");
                }
                None => out.push(','),
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Open(usize),
    Sliding(usize),
}

/// Filippov simulation of a hybrid system: RK4 inside open regions,
/// bisection-refined surface crossings, and sliding with the equivalent
/// control when both one-sided flows point at a surface. Sliding releases
/// when the equivalent control reaches a boundary of [0,1].
pub fn simulate_hybrid<const N: usize, H: HybridSystem<N>>(
    sys: &H,
    state0: [f64; N],
    cfg: &IntegrationConfig,
) -> Result<HybridTrajectory<N>> {
    cfg.validate()?;
    sys.check_state(&state0)?;
    let surfaces = sys.surfaces().to_vec();
    let n_steps = (cfg.t_end / cfg.dt).ceil() as usize;

    let mut state = state0;
    let mut phase = initial_phase(sys, &surfaces, &state);
    let mut transitions = 0usize;

    let mut traj = HybridTrajectory {
        base: Trajectory {
            times: Vec::with_capacity(n_steps / cfg.record_stride + 2),
            states: Vec::with_capacity(n_steps / cfg.record_stride + 2),
            events: Vec::new(),
        },
        modes: Vec::with_capacity(n_steps / cfg.record_stride + 2),
    };
    traj.base.times.push(0.0);
    traj.base.states.push(state);
    traj.modes.push(mode_of(sys, phase, &state));

    for step in 1..=n_steps {
        let cell_end = step as f64 * cfg.dt;
        let mut remaining = cfg.dt;
        while remaining > cfg.dt * 1e-12 {
            let t_now = cell_end - remaining;
            match phase {
                Phase::Open(region) => {
                    let candidate = rk4_region(sys, region, &state, remaining);
                    match detect_crossing(&surfaces, region, state[0], candidate[0]) {
                        None => {
                            state = sys.project(candidate, cfg.projection_tol, cell_end)?;
                            remaining = 0.0;
                        }
                        Some(si) => {
                            let level = surfaces[si];
                            let from_below = state[0] < level;
                            let h = bisect_crossing(sys, region, &state, remaining, level);
                            let mut hit = rk4_region(sys, region, &state, h);
                            hit[0] = level;
                            state = sys.project(hit, cfg.projection_tol, t_now + h)?;
                            remaining -= h;
                            traj.base.events.push(CrossingEvent {
                                time: t_now + h,
                                surface: si,
                                direction: if from_below {
                                    CrossingDirection::Up
                                } else {
                                    CrossingDirection::Down
                                },
                            });
                            let below = sys.region_field(si, &state)[0];
                            let above = sys.region_field(si + 1, &state)[0];
                            phase = if below > GRAZE_TOL && above < -GRAZE_TOL {
                                transitions = 0;
                                Phase::Sliding(si)
                            } else {
                                transitions += 1;
                                if transitions > CHATTER_LIMIT {
                                    return Err(Error::Chattering {
                                        t: t_now + h,
                                        transitions,
                                    });
                                }
                                route_across(si, from_below, below, above)
                            };
                        }
                    }
                }
                Phase::Sliding(si) => {
                    let candidate = rk4_sliding(sys, si, &state, remaining);
                    let z_next = equivalent_control(sys, si, &candidate);
                    if (0.0..=1.0).contains(&z_next) {
                        state = sys.project(candidate, cfg.projection_tol, cell_end)?;
                        remaining = 0.0;
                    } else {
                        let boundary = if z_next > 1.0 { 1.0 } else { 0.0 };
                        let h = bisect_sliding_exit(sys, si, &state, remaining, boundary);
                        let hit = rk4_sliding(sys, si, &state, h);
                        state = sys.project(hit, cfg.projection_tol, t_now + h)?;
                        remaining -= h;
                        transitions = 0;
                        // z pinned at 1 hands the flow to the lower branch,
                        // z pinned at 0 to the upper one
                        phase = if boundary == 1.0 {
                            Phase::Open(si)
                        } else {
                            Phase::Open(si + 1)
                        };
                    }
                }
            }
        }
        if step % cfg.record_stride == 0 || step == n_steps {
            traj.base.times.push(cell_end);
            traj.base.states.push(state);
            traj.modes.push(mode_of(sys, phase, &state));
        }
    }
    Ok(traj)
}

fn initial_phase<const N: usize, H: HybridSystem<N>>(
    sys: &H,
    surfaces: &[f64],
    state: &[f64; N],
) -> Phase {
    for (si, &level) in surfaces.iter().enumerate() {
        if state[0] == level {
            let below = sys.region_field(si, state)[0];
            let above = sys.region_field(si + 1, state)[0];
            if below > GRAZE_TOL && above < -GRAZE_TOL {
                return Phase::Sliding(si);
            }
            return route_across(si, below >= 0.0, below, above);
        }
    }
    Phase::Open(surfaces.iter().filter(|&&s| state[0] > s).count())
}

/// Transversal or grazing arrival at a surface: pick the branch the flow
/// continues on.
fn route_across(si: usize, from_below: bool, below: f64, above: f64) -> Phase {
    if from_below {
        if above > GRAZE_TOL {
            Phase::Open(si + 1)
        } else {
            // grazing on the upper branch, or flow rejected back down
            Phase::Open(if above.abs() <= GRAZE_TOL { si + 1 } else { si })
        }
    } else if below < -GRAZE_TOL {
        Phase::Open(si)
    } else {
        Phase::Open(if below.abs() <= GRAZE_TOL { si } else { si + 1 })
    }
}

fn mode_of<const N: usize, H: HybridSystem<N>>(sys: &H, phase: Phase, state: &[f64; N]) -> HybridMode {
    match phase {
        Phase::Open(k) => HybridMode {
            region: HybridRegion::Open(k),
            sliding: false,
            equivalent_control: None,
        },
        Phase::Sliding(si) => HybridMode {
            region: HybridRegion::Surface(si),
            sliding: true,
            equivalent_control: Some(equivalent_control(sys, si, state).clamp(0.0, 1.0)),
        },
    }
}

fn rk4_region<const N: usize, H: HybridSystem<N>>(
    sys: &H,
    region: usize,
    state: &[f64; N],
    h: f64,
) -> [f64; N] {
    let f = |s: &[f64; N]| sys.region_field(region, s);
    rk4_generic(state, h, f)
}

/// RK4 on the convexified field with the equivalent control recomputed at
/// every stage; the prevalence coordinate is pinned to the surface after
/// the step.
fn rk4_sliding<const N: usize, H: HybridSystem<N>>(
    sys: &H,
    surface: usize,
    state: &[f64; N],
    h: f64,
) -> [f64; N] {
    let level = sys.surfaces()[surface];
    let f = |s: &[f64; N]| {
        let z = equivalent_control(sys, surface, s).clamp(0.0, 1.0);
        let lo = sys.region_field(surface, s);
        let hi = sys.region_field(surface + 1, s);
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = z * lo[i] + (1.0 - z) * hi[i];
        }
        out
    };
    let mut next = rk4_generic(state, h, f);
    next[0] = level;
    next
}

fn rk4_generic<const N: usize, F: Fn(&[f64; N]) -> [f64; N]>(
    state: &[f64; N],
    h: f64,
    f: F,
) -> [f64; N] {
    let k1 = f(state);
    let k2 = f(&add_scaled(state, &k1, h / 2.0));
    let k3 = f(&add_scaled(state, &k2, h / 2.0));
    let k4 = f(&add_scaled(state, &k3, h));
    let mut next = *state;
    for i in 0..N {
        next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
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

/// Convex weight on the below-surface field that zeroes dy/dt at `state`.
/// May land outside [0,1] when the surface cannot hold the flow.
fn equivalent_control<const N: usize, H: HybridSystem<N>>(
    sys: &H,
    surface: usize,
    state: &[f64; N],
) -> f64 {
    let a = sys.region_field(surface, state)[0];
    let b = sys.region_field(surface + 1, state)[0];
    if a == b {
        // fields agree; any weight works, and in particular the midpoint
        return 0.5;
    }
    b / (b - a)
}

/// Only the surface bounding the current region in the direction of travel
/// can be crossed within one sub-step.
fn detect_crossing(surfaces: &[f64], region: usize, y0: f64, y1: f64) -> Option<usize> {
    if y1 > y0 && region < surfaces.len() {
        let level = surfaces[region];
        if (y0 - level) * (y1 - level) < 0.0 || (y1 == level && y0 != level) {
            return Some(region);
        }
    } else if y1 < y0 && region > 0 {
        let level = surfaces[region - 1];
        if (y0 - level) * (y1 - level) < 0.0 || (y1 == level && y0 != level) {
            return Some(region - 1);
        }
    }
    None
}

/// Step size within (0, h_max] at which coordinate 0 reaches `level`,
/// refined by bisection; returns the far-side bracket end so the crossing
/// state sits on or just past the surface.
fn bisect_crossing<const N: usize, H: HybridSystem<N>>(
    sys: &H,
    region: usize,
    state: &[f64; N],
    h_max: f64,
    level: f64,
) -> f64 {
    let g0 = state[0] - level;
    let mut lo = 0.0;
    let mut hi = h_max;
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        let g = rk4_region(sys, region, state, mid)[0] - level;
        if g == 0.0 {
            return mid;
        }
        if g.signum() == g0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Step size at which the equivalent control reaches `boundary`.
fn bisect_sliding_exit<const N: usize, H: HybridSystem<N>>(
    sys: &H,
    surface: usize,
    state: &[f64; N],
    h_max: f64,
    boundary: f64,
) -> f64 {
    let g0 = equivalent_control(sys, surface, state) - boundary;
    let mut lo = 0.0;
    let mut hi = h_max;
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        let g = equivalent_control(sys, surface, &rk4_sliding(sys, surface, state, mid)) - boundary;
        if g == 0.0 {
            return mid;
        }
        if g.signum() == g0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}
