#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;

pub use rand_chacha::ChaCha8Rng;

use epigame_core::{SiriParams, SisParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reference SIS parameter table used across the experiments.
pub fn sis_reference(gamma: f64) -> SisParams {
    SisParams::new(0.3, 0.15, 0.5, gamma, 1.0, 2.0, 1.0, 80.0).unwrap()
}

/// Strengthened-immunity SIRI parameter table.
pub fn siri_strong_reference(gamma: f64) -> SiriParams {
    let sis = SisParams::new(0.4, 0.3, 0.6, gamma, 2.0, 2.0, 1.0, 75.0).unwrap();
    SiriParams::new(sis, 0.25, 0.2).unwrap()
}

/// Compromised-immunity SIRI parameter table (beta_p varies by scenario).
pub fn siri_weak_reference(gamma: f64, beta_p: f64) -> SiriParams {
    let sis = SisParams::new(0.35, beta_p, 0.6, gamma, 2.0, 2.0, 1.0, 125.0).unwrap();
    SiriParams::new(sis, 0.4, 0.25).unwrap()
}

/// Admissible SIS parameters over wide ranges.
pub fn sample_sis(rng: &mut ChaCha8Rng) -> SisParams {
    let alpha = rng.random_range(0.1..0.9);
    let beta_p = rng.random_range(0.05..0.4);
    let beta_u = beta_p + rng.random_range(0.01..0.3);
    let loss = rng.random_range(5.0..150.0);
    let c_p = rng.random_range(0.1..3.0);
    let c_ip = rng.random_range(0.0..1.5);
    let c_iu = c_ip + rng.random_range(0.1..2.0);
    let gamma = rng.random_range(0.005..0.6);
    SisParams::new(beta_u, beta_p, alpha, gamma, c_p, c_iu, c_ip, loss).unwrap()
}

/// Admissible SIRI parameters over wide ranges.
pub fn sample_siri(rng: &mut ChaCha8Rng) -> SiriParams {
    let sis = sample_sis(rng);
    let beta_hat_p = rng.random_range(0.02..0.4);
    let beta_hat_u = beta_hat_p + rng.random_range(0.01..0.3);
    SiriParams::new(sis, beta_hat_u, beta_hat_p).unwrap()
}

/// SIS parameters landing strictly inside one of the four slow-dynamics
/// convergence cases, with margins that keep the simulations
/// well-conditioned (moderate replicator stiffness, attainable limits).
pub fn sample_sis_for_case(rng: &mut ChaCha8Rng, case: u8) -> SisParams {
    loop {
        let alpha = rng.random_range(0.5..0.75);
        let beta_p = rng.random_range(0.08..0.15);
        let beta_u = beta_p + rng.random_range(0.02..0.06);
        let y_int = rng.random_range(0.12..0.3);
        // replicator payoff slope L (1-alpha) beta_p
        let drive = rng.random_range(15.0..25.0);
        let loss = drive / ((1.0 - alpha) * beta_p);
        let c_p = y_int * drive;
        let gamma = match case {
            1 => beta_p * rng.random_range(1.3..1.7),
            2 => {
                let y_u = rng.random_range(0.05..(0.85 * y_int));
                beta_p * (1.0 - y_u)
            }
            3 => {
                let lo = alpha * beta_p * (1.0 - y_int);
                let hi = beta_p * (1.0 - y_int);
                rng.random_range((lo + 0.2 * (hi - lo))..(hi - 0.2 * (hi - lo)))
            }
            4 => {
                let y_p = rng.random_range((1.1 * y_int + 0.02)..0.9);
                alpha * beta_p * (1.0 - y_p)
            }
            _ => unreachable!("cases are 1..=4"),
        };
        let Ok(p) = SisParams::new(beta_u, beta_p, alpha, gamma, c_p, 2.0, 1.0, loss) else {
            continue;
        };
        // verify strict membership with an absolute margin
        let t = p.thresholds();
        let margin = 0.02;
        let ok = match case {
            1 => t.y_u <= -margin,
            2 => t.y_u > margin && t.y_u < t.y_int - margin,
            3 => t.y_p < t.y_int - margin && t.y_int < t.y_u - margin,
            4 => t.y_int < t.y_p - margin,
            _ => unreachable!(),
        };
        if ok {
            return p;
        }
    }
}

/// SIRI parameters strictly inside one of the five strengthened-immunity
/// cases.
pub fn sample_siri_strong_for_case(rng: &mut ChaCha8Rng, case: u8) -> SiriParams {
    loop {
        let alpha = rng.random_range(0.3..0.7);
        let beta_hat_p = rng.random_range(0.1..0.3);
        let beta_p = f64::min(beta_hat_p * rng.random_range(1.3..2.0), 0.49);
        let beta_hat_u = beta_hat_p + rng.random_range(0.02..0.1);
        let beta_u = beta_p + rng.random_range(0.02..0.1);
        let y_hat = rng.random_range(0.15..0.5);
        let drive = rng.random_range(6.0..14.0);
        let loss = drive / ((1.0 - alpha) * beta_hat_p);
        let c_p = y_hat * drive;
        let gate = beta_hat_p * (1.0 - y_hat);
        let gamma = match case {
            1 => beta_p * rng.random_range(1.1..1.6),
            2 => {
                let w = beta_p - beta_hat_p;
                rng.random_range((beta_hat_p + 0.2 * w)..(beta_p - 0.2 * w))
            }
            3 => {
                let w = beta_hat_p - gate;
                rng.random_range((gate + 0.15 * w)..(beta_hat_p - 0.15 * w))
            }
            4 => {
                let w = gate * (1.0 - alpha);
                rng.random_range((alpha * gate + 0.15 * w)..(gate - 0.15 * w))
            }
            5 => rng.random_range((0.3 * alpha * gate)..(0.85 * alpha * gate)),
            _ => unreachable!("cases are 1..=5"),
        };
        let Ok(sis) = SisParams::new(beta_u, beta_p, alpha, gamma, c_p, 2.0, 1.0, loss) else {
            continue;
        };
        let Ok(p) = SiriParams::new(sis, beta_hat_u, beta_hat_p) else {
            continue;
        };
        if p.strengthened_immunity() {
            return p;
        }
    }
}

/// SIRI parameters strictly inside one of the four compromised-immunity
/// cases. `bistable` additionally forces or forbids gamma > beta_p in
/// cases 2-4.
pub fn sample_siri_weak_for_case(rng: &mut ChaCha8Rng, case: u8, bistable: Option<bool>) -> SiriParams {
    loop {
        let alpha = rng.random_range(0.3..0.7);
        let beta_hat_p = rng.random_range(0.15..0.35);
        let beta_hat_u = beta_hat_p + rng.random_range(0.02..0.1);
        let y_hat = rng.random_range(0.15..0.5);
        let drive = rng.random_range(6.0..14.0);
        let loss = drive / ((1.0 - alpha) * beta_hat_p);
        let c_p = y_hat * drive;
        let gate = beta_hat_p * (1.0 - y_hat);
        let gamma = match case {
            1 => beta_hat_p * rng.random_range(1.1..1.6),
            2 => {
                let w = beta_hat_p - gate;
                rng.random_range((gate + 0.15 * w)..(beta_hat_p - 0.15 * w))
            }
            3 => {
                let w = gate * (1.0 - alpha);
                rng.random_range((alpha * gate + 0.15 * w)..(gate - 0.15 * w))
            }
            4 => rng.random_range((0.3 * alpha * gate)..(0.85 * alpha * gate)),
            _ => unreachable!("cases are 1..=4"),
        };
        let (lo, hi) = match bistable {
            Some(true) => (0.2 * gamma, f64::min(0.8 * gamma, 0.9 * beta_hat_p)),
            Some(false) => (1.05 * gamma, 0.95 * beta_hat_p),
            None => (0.3 * beta_hat_p, 0.85 * beta_hat_p),
        };
        if !(lo < hi) {
            continue;
        }
        let beta_p = rng.random_range(lo..hi);
        let beta_u = beta_p + rng.random_range(0.02..0.1);
        let Ok(sis) = SisParams::new(beta_u, beta_p, alpha, gamma, c_p, 2.0, 1.0, loss) else {
            continue;
        };
        let Ok(p) = SiriParams::new(sis, beta_hat_u, beta_hat_p) else {
            continue;
        };
        return p;
    }
}

/// Number of Jacobian eigenvalues in the open right half plane at a labeled
/// equilibrium.
pub fn rhp_count(p: &SisParams, label: epigame_core::equilibria::SisLabel) -> usize {
    use epigame_core::equilibria::{eigen3, equilibrium_coordinates, sis_jacobian};
    let coords = equilibrium_coordinates(label, p);
    eigen3(&sis_jacobian(&coords, p))
        .iter()
        .filter(|e| e.re > 0.0)
        .count()
}
