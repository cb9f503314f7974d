//! Acceptance suite: one test per release gate, each printing a pass line
//! with its measured runtime. Runtime budgets are asserted in optimized
//! builds only; debug timings are reported but not gated.

mod common;

use std::time::Instant;

use common::*;
use rand::Rng;

use epigame_core::bifurcation::{sweep_gamma, transcritical_points};
use epigame_core::equilibria::{
    sis_equilibria, table1_verdict, vanilla_siri_classify, SisLabel, Stability, VanillaRegime,
};
use epigame_core::hybrid::{classify_reduced_sis, simulate_hybrid, ReducedSiri, ReducedSis};
use epigame_core::integrator::{
    simulate, IntegrationConfig, SiriSystem, SisSystem, VanillaSiriSystem,
};
use epigame_core::model::{field_sis_raw, field_siri_raw, SisParams};

fn gate(criterion: usize, desc: &str, started: Instant, budget_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("[PASS] criterion {criterion}: {desc} ({elapsed:.2}s, budget {budget_s}s)");
    if !cfg!(debug_assertions) {
        assert!(
            elapsed < budget_s,
            "criterion {criterion} exceeded its runtime budget: {elapsed:.2}s > {budget_s}s"
        );
    }
}

fn cfg(dt: f64, t_end: f64, epsilon: f64) -> IntegrationConfig {
    IntegrationConfig { dt, t_end, epsilon, ..Default::default() }
}

/// Existence/stability pattern of (E0..E4) read directly off the published
/// summary table; the oracle the equilibrium reports are matched against.
fn table1_row(p: &SisParams) -> [(bool, bool); 5] {
    let t = p.thresholds();
    let mut row = [(false, false); 5];
    row[0] = (true, false);
    if p.gamma > p.beta_p {
        row[1] = (true, true);
    } else if p.gamma > p.alpha * p.beta_p {
        row[1] = (true, false);
        if t.y_u < t.y_int {
            row[2] = (true, true);
        } else {
            row[2] = (true, false);
            row[3] = (true, true);
        }
    } else {
        row[1] = (true, false);
        if t.y_u < t.y_int {
            row[2] = (true, true);
            row[4] = (true, false);
        } else if t.y_int < t.y_p {
            row[2] = (true, false);
            row[4] = (true, true);
        } else {
            row[2] = (true, false);
            row[3] = (true, true);
            row[4] = (true, false);
        }
    }
    row
}

fn near_transition(p: &SisParams, tol: f64) -> bool {
    let t = transcritical_points(p).unwrap();
    [Some(t.t0), Some(t.t1), t.t2, t.t3]
        .into_iter()
        .flatten()
        .any(|g| (p.gamma - g).abs() < tol)
}

#[test]
fn criterion_1_table1_reproduction() {
    let started = Instant::now();
    let mut r = rng(101);
    let mut n = 0usize;
    while n < 1000 {
        let p = sample_sis(&mut r);
        if near_transition(&p, 1e-6) {
            continue;
        }
        n += 1;
        let expected = table1_row(&p);
        for (i, rep) in sis_equilibria(&p).iter().enumerate() {
            let (exists, stable) = expected[i];
            assert_eq!(rep.exists, exists, "{:?} existence for {p:?}", rep.label);
            let verdict = table1_verdict(rep.label, &p);
            assert_eq!(verdict.exists, exists);
            if exists {
                let expect = if stable { Stability::Stable } else { Stability::Unstable };
                // eigenvalue route
                assert_eq!(rep.stability, expect, "{:?} eigen verdict for {p:?}", rep.label);
                // closed-form-condition route
                assert_eq!(verdict.stable, Some(stable), "{:?} condition verdict", rep.label);
            }
        }
    }
    gate(1, "Table 1 reproduction over 1000 admissible draws", started, 5.0);
}

#[test]
fn criterion_2_bifurcation_points() {
    let started = Instant::now();
    let p = sis_reference(0.1);
    let t = transcritical_points(&p).unwrap();
    assert!((t.t0 - 0.075).abs() < 1e-12, "T0 = gamma at the E0/E4 crossing");
    assert!((t.t1 - 0.15).abs() < 1e-12);
    assert!((t.t2.unwrap() - 0.125).abs() < 1e-12);
    assert!((t.t3.unwrap() - 0.0625).abs() < 1e-12);

    // each closed form is confirmed by an eigenvalue sign change in the
    // analytic Jacobians of the two exchanging branches
    for tp in t.all() {
        for label in [tp.branches.0, tp.branches.1] {
            let lo = rhp_count(&p.with_gamma(tp.gamma - 1e-4), label);
            let hi = rhp_count(&p.with_gamma(tp.gamma + 1e-4), label);
            assert_eq!(
                (lo as i32 - hi as i32).abs(),
                1,
                "{} at {label}: {lo} -> {hi} unstable eigenvalues",
                tp.label()
            );
        }
    }

    // stable branch order with increasing gamma
    let table = sweep_gamma(&p, 0.01, 0.2, 200).unwrap();
    let mut order: Vec<SisLabel> = Vec::new();
    for reports in &table.rows {
        let stable = reports
            .iter()
            .find(|r| r.exists && r.stability == Stability::Stable)
            .expect("one stable equilibrium per gamma")
            .label;
        if order.last() != Some(&stable) {
            order.push(stable);
        }
    }
    assert_eq!(order, vec![SisLabel::E4, SisLabel::E3, SisLabel::E2, SisLabel::E1]);
    gate(2, "transcritical points T0..T3 and stable-branch order", started, 1.0);
}

#[test]
fn criterion_3_sis_coupled_convergence() {
    let started = Instant::now();
    let p = sis_reference(0.1);
    let mut amplitudes = Vec::new();
    for epsilon in [1.0, 0.1, 0.01] {
        let dt = IntegrationConfig::default_dt_for_epsilon(epsilon);
        let traj = simulate(&SisSystem { params: p }, [0.2, 0.5, 0.5], &cfg(dt, 2000.0, epsilon))
            .unwrap();
        let mean_y = traj.final_window_mean(0, 0.1);
        let mean_z = traj.final_window_mean(1, 0.1);
        assert!(
            (mean_y - 1.0 / 6.0).abs() < 0.01,
            "eps={epsilon}: final-window mean y = {mean_y}"
        );
        assert!((mean_z - 0.6).abs() < 0.02, "eps={epsilon}: final-window mean z_S = {mean_z}");
        amplitudes.push((epsilon, traj.window_amplitude(1, 200.0, 600.0)));
    }
    let amp_slow = amplitudes.iter().find(|(e, _)| *e == 1.0).unwrap().1;
    let amp_fast = amplitudes.iter().find(|(e, _)| *e == 0.01).unwrap().1;
    assert!(
        amp_fast > amp_slow,
        "z_S oscillation amplitude must grow as eps shrinks: {amp_fast} vs {amp_slow}"
    );
    gate(3, "coupled SIS convergence to the interior equilibrium", started, 30.0);
}

#[test]
fn criterion_4_reduced_sis_regimes() {
    let started = Instant::now();
    let mut r = rng(104);
    for case in 1..=4u8 {
        for _ in 0..10 {
            let p = sample_sis_for_case(&mut r, case);
            let out = classify_reduced_sis(&p);
            assert_eq!(out.case_id, case);
            let traj =
                simulate_hybrid(&ReducedSis::new(p), [0.5], &cfg(0.05, 5000.0, 1.0)).unwrap();
            let y_f = traj.base.final_state()[0];
            assert!(
                (y_f - out.limit).abs() < 0.005,
                "case {case}: final y {y_f} vs predicted {} for {p:?}",
                out.limit
            );
            if out.monotone {
                assert_eq!(
                    traj.base.derivative_sign_changes(0, 1e-13),
                    0,
                    "case {case} must be monotone"
                );
                assert!(!traj.engaged_sliding());
            } else {
                let first = traj.modes.iter().position(|m| m.sliding).expect("case 3 slides");
                for i in first..traj.modes.len() {
                    assert!(traj.modes[i].sliding);
                    assert!((traj.base.states[i][0] - out.limit).abs() < 1e-8);
                }
            }
        }
    }
    gate(4, "reduced-SIS convergence in all four regimes (10 draws each)", started, 20.0);
}

#[test]
fn criterion_5_siri_strengthened_immunity() {
    let started = Instant::now();
    for (gamma, target, expect_sliding) in
        [(0.15, 0.25, false), (0.1, 1.0 / 3.0, true), (0.078, 0.35, false)]
    {
        let p = siri_strong_reference(gamma);
        // reduced hybrid route
        let sys = ReducedSiri::strong(p).unwrap();
        let reduced = simulate_hybrid(&sys, [0.2, 0.01], &cfg(0.05, 2000.0, 1.0)).unwrap();
        let y_red = reduced.base.final_window_mean(0, 0.1);
        assert!(
            (y_red - target).abs() < 0.01,
            "gamma={gamma}: reduced-hybrid y = {y_red}, want {target}"
        );
        if expect_sliding {
            assert!(reduced.engaged_sliding());
            assert!(reduced.modes.last().unwrap().sliding);
        }
        // full coupled route at eps = 0.1
        let full = simulate(
            &SiriSystem { params: p },
            [0.79, 0.2, 0.01, 0.5, 0.5, 0.5],
            &cfg(0.05, 2000.0, 0.1),
        )
        .unwrap();
        let y_full = full.final_window_mean(1, 0.1);
        assert!(
            (y_full - target).abs() < 0.01,
            "gamma={gamma}: full-coupled y = {y_full}, want {target}"
        );
        if gamma == 0.15 {
            assert!(
                full.derivative_sign_changes(1, 1e-9) >= 1,
                "approach to the endemic point must be non-monotone"
            );
        }
        println!("  gamma={gamma}: reduced {y_red:.4}, full {y_full:.4}, target {target:.4}");
    }
    gate(5, "SIRI strengthened-immunity limits (reduced and full runs)", started, 60.0);
}

#[test]
fn criterion_6_siri_weak_bistability() {
    let started = Instant::now();
    let y_hat = 0.16;

    // bistable set: gamma = 0.14, beta_p = 0.12
    let p = siri_weak_reference(0.14, 0.12);
    let sys = ReducedSiri::weak(p).unwrap();
    let reduced = simulate_hybrid(&sys, [0.05, 0.01], &cfg(0.05, 3000.0, 1.0)).unwrap();
    let y_red = reduced.base.final_window_mean(0, 0.1);
    assert!((y_red - y_hat).abs() < 0.01, "reduced run from y0=0.05: {y_red}");
    assert!(reduced.engaged_sliding());

    let dt = IntegrationConfig::default_dt_for_epsilon(0.025);
    let full = simulate(
        &SiriSystem { params: p },
        [0.98, 0.01, 0.01, 0.5, 0.5, 0.5],
        &cfg(dt, 2000.0, 0.025),
    )
    .unwrap();
    let y_ife = full.final_state()[1];
    assert!(y_ife < 0.005, "full run from y0=0.01 at eps=0.025 must reach the IFE: {y_ife}");
    println!("  beta_p=0.12: reduced(y0=0.05) -> {y_red:.4} (sliding), full(y0=0.01, eps=0.025) -> {y_ife:.2e} (IFE)");

    // the eps = 1, y0 = 0.01 run is reproduced but not gated; report only
    let ungated = simulate(
        &SiriSystem { params: p },
        [0.98, 0.01, 0.01, 0.5, 0.5, 0.5],
        &cfg(0.05, 2000.0, 1.0),
    )
    .unwrap();
    println!(
        "  note: ungated eps=1 run from y0=0.01 reached y = {:.4}",
        ungated.final_window_mean(1, 0.1)
    );

    // no bistability: beta_p = 0.15 > gamma
    let p = siri_weak_reference(0.14, 0.15);
    for epsilon in [1.0, 0.1, 0.025] {
        let dt = IntegrationConfig::default_dt_for_epsilon(epsilon);
        let full = simulate(
            &SiriSystem { params: p },
            [0.989, 0.001, 0.01, 0.5, 0.5, 0.5],
            &cfg(dt, 2000.0, epsilon),
        )
        .unwrap();
        let y_f = full.final_window_mean(1, 0.1);
        assert!(
            (y_f - y_hat).abs() < 0.01,
            "beta_p=0.15, eps={epsilon}: y = {y_f}, want {y_hat}"
        );
        println!("  beta_p=0.15, eps={epsilon}: y -> {y_f:.4}");
    }
    gate(6, "SIRI compromised-immunity bistability splits", started, 90.0);
}

#[test]
fn criterion_7_invariant_suites() {
    let started = Instant::now();
    let mut r = rng(107);

    // the unit cube is invariant for the coupled SIS field
    for _ in 0..1000 {
        let p = sample_sis(&mut r);
        let z_s = r.random_range(0.0..1.0);
        let z_i = r.random_range(0.0..1.0);
        let y = r.random_range(0.0..1.0);
        assert!(field_sis_raw(&[1.0, z_s, z_i], &p)[0] <= 0.0);
        assert_eq!(field_sis_raw(&[0.0, z_s, z_i], &p)[0], 0.0);
        assert_eq!(field_sis_raw(&[y, 0.0, z_i], &p)[1], 0.0);
        assert_eq!(field_sis_raw(&[y, 1.0, z_i], &p)[1], 0.0);
        assert_eq!(field_sis_raw(&[y, z_s, 0.0], &p)[2], 0.0);
        assert_eq!(field_sis_raw(&[y, z_s, 1.0], &p)[2], 0.0);
    }

    // SIRI boundary behavior plus exact simplex conservation
    for _ in 0..1000 {
        let p = sample_siri(&mut r);
        let s = r.random_range(0.0..1.0);
        let y = r.random_range(0.0..(1.0 - s));
        let z = [
            r.random_range(0.0..1.0),
            r.random_range(0.0..1.0),
            r.random_range(0.0..1.0),
        ];
        let state = [s, y, 1.0 - s - y, z[0], z[1], z[2]];
        let d = field_siri_raw(&state, &p);
        assert!((d[0] + d[1] + d[2]).abs() <= 1e-14, "simplex conservation");
        assert_eq!(field_siri_raw(&[0.0, y, 1.0 - y, z[0], z[1], z[2]], &p)[0], 0.0);
        assert!(field_siri_raw(&[s, 0.0, 1.0 - s, z[0], z[1], z[2]], &p)[1] == 0.0);
        assert!(field_siri_raw(&[s, y, 0.0, z[0], z[1], z[2]], &p)[2] >= 0.0);
        assert!(field_siri_raw(&[0.0, 1.0, 0.0, z[0], z[1], z[2]], &p)[1] <= 0.0);
    }

    // analytic Jacobian against central finite differences
    let h = 1e-6;
    for _ in 0..100 {
        let p = sample_sis(&mut r);
        let state = [
            r.random_range(0.01..0.99),
            r.random_range(0.01..0.99),
            r.random_range(0.01..0.99),
        ];
        let jac = epigame_core::equilibria::sis_jacobian(&state, &p);
        for j in 0..3 {
            let mut hi = state;
            let mut lo = state;
            hi[j] += h;
            lo[j] -= h;
            let f_hi = field_sis_raw(&hi, &p);
            let f_lo = field_sis_raw(&lo, &p);
            for i in 0..3 {
                assert!((jac[i][j] - (f_hi[i] - f_lo[i]) / (2.0 * h)).abs() < 1e-5);
            }
        }
    }

    // RK4 against a 1000x finer explicit Euler integration
    for _ in 0..20 {
        let alpha = r.random_range(0.3..0.7);
        let beta_p = r.random_range(0.08..0.2);
        let beta_u = beta_p + r.random_range(0.02..0.08);
        let drive = r.random_range(2.5..5.0);
        let loss = drive / ((1.0 - alpha) * beta_p);
        let c_p = r.random_range(0.3..1.0);
        let gamma = r.random_range(0.05..0.25);
        let p = SisParams::new(beta_u, beta_p, alpha, gamma, c_p, 2.0, 1.0, loss).unwrap();
        let state0 = [
            r.random_range(0.05..0.35),
            r.random_range(0.2..0.8),
            r.random_range(0.2..0.8),
        ];
        let dt = 0.05;
        let traj = simulate(&SisSystem { params: p }, state0, &cfg(dt, 50.0, 1.0)).unwrap();
        let fine = dt / 1000.0;
        let mut state = state0;
        let mut sup: f64 = 0.0;
        for coarse in traj.states.iter().skip(1) {
            for _ in 0..1000 {
                let d = field_sis_raw(&state, &p);
                for i in 0..3 {
                    state[i] = (state[i] + fine * d[i]).clamp(0.0, 1.0);
                }
            }
            for i in 0..3 {
                sup = sup.max((state[i] - coarse[i]).abs());
            }
        }
        assert!(sup < 1e-4, "RK4 vs fine Euler deviation {sup}");
    }

    // Filippov tangency while sliding
    for _ in 0..10 {
        let p = sample_sis_for_case(&mut r, 3);
        let y_int = p.thresholds().y_int;
        let traj = simulate_hybrid(&ReducedSis::new(p), [0.5], &cfg(0.05, 2000.0, 1.0)).unwrap();
        let first = traj.modes.iter().position(|m| m.sliding).expect("sliding regime");
        for i in first..traj.modes.len() {
            assert!((traj.base.states[i][0] - y_int).abs() < 1e-8, "tangency");
            let z = traj.modes[i].equivalent_control.unwrap();
            assert!((0.0..=1.0).contains(&z));
        }
    }
    gate(7, "invariant suites (boundaries, simplex, Jacobian, RK4 oracle, tangency)", started, 30.0);
}

#[test]
fn criterion_8_vanilla_siri_regimes() {
    let started = Instant::now();
    let mut r = rng(108);
    let mut n = 0usize;
    let mut seen = [0usize; 4];
    while n < 200 {
        let r0: f64 = r.random_range(0.15..2.5);
        let r1: f64 = r.random_range(0.15..2.5);
        if (r0 - 1.0).abs() < 0.05 || (r1 - 1.0).abs() < 0.05 || (r0 - r1).abs() < 0.05 {
            continue;
        }
        let gamma = r.random_range(0.08..0.25);
        let (beta, beta_hat) = (r0 * gamma, r1 * gamma);
        let v = vanilla_siri_classify(beta, beta_hat, gamma).unwrap();
        if v.regime == VanillaRegime::Bistable {
            let tau = v.basin_threshold.unwrap();
            if !(0.05..=0.9).contains(&tau) {
                continue;
            }
        }
        n += 1;
        let sys = VanillaSiriSystem { beta, beta_hat, gamma };
        let run = |y0: f64| {
            simulate(&sys, [1.0 - y0, y0, 0.0], &cfg(0.05, 4000.0, 1.0))
                .unwrap()
                .final_state()
                .to_owned()
        };
        match v.regime {
            VanillaRegime::InfectionFree => {
                seen[0] += 1;
                assert!(run(0.5)[1] < 5e-3, "infection-free draw kept prevalence");
            }
            VanillaRegime::Endemic => {
                seen[1] += 1;
                let y_f = run(0.5)[1];
                assert!(
                    (y_f - v.endemic_level.unwrap()).abs() < 5e-3,
                    "endemic level {y_f} vs {}",
                    v.endemic_level.unwrap()
                );
            }
            VanillaRegime::Epidemic => {
                seen[2] += 1;
                let f = run(0.5);
                assert!(f[1] < 5e-3, "epidemic draw kept prevalence: {}", f[1]);
                assert!(f[0] <= v.ife_boundary.unwrap() + 0.01, "final s above the stable IFE range");
            }
            VanillaRegime::Bistable => {
                seen[3] += 1;
                let tau = v.basin_threshold.unwrap();
                let above = run(tau + 0.01)[1];
                assert!(
                    (above - v.endemic_level.unwrap()).abs() < 0.01,
                    "start above the basin threshold must reach the EE: {above}"
                );
                let below = run((tau - 0.01).max(1e-4))[1];
                assert!(below < 5e-3, "start below the basin threshold must reach the IFE: {below}");
            }
        }
    }
    assert!(seen.iter().all(|&c| c > 0), "all four regimes must be exercised: {seen:?}");
    gate(8, "vanilla SIRI regime classifier against direct simulation", started, 20.0);
}
