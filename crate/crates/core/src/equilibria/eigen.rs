use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::params::SisParams;

/// Real parts within this band of zero are treated as nonhyperbolic;
/// bifurcation thresholds are exactly such points.
pub const HYPERBOLIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Nonhyperbolic,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stability::Stable => write!(f, "stable"),
            Stability::Unstable => write!(f, "unstable"),
            Stability::Nonhyperbolic => write!(f, "nonhyperbolic"),
        }
    }
}

/// Hyperbolic classification from eigenvalue real parts.
pub fn stability_from_eigenvalues(eigs: &[Complex64; 3]) -> Stability {
    if eigs.iter().any(|e| e.re.abs() <= HYPERBOLIC_TOL) {
        Stability::Nonhyperbolic
    } else if eigs.iter().all(|e| e.re < 0.0) {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

/// Analytic Jacobian of the coupled SIS field at `(y, z_S, z_I)`; rows
/// follow the field ordering (f_y, f_S, f_I).
pub fn sis_jacobian(state: &[f64; 3], p: &SisParams) -> [[f64; 3]; 3] {
    let [y, z_s, z_i] = *state;
    let cover = z_s + p.alpha * (1.0 - z_s);
    let rate = p.beta_u * z_i + p.beta_p * (1.0 - z_i);
    let l1a = p.loss * (1.0 - p.alpha);
    [
        [
            ((1.0 - y) * cover * rate - p.gamma) - y * cover * rate,
            y * (1.0 - y) * (1.0 - p.alpha) * rate,
            y * (1.0 - y) * cover * (p.beta_u - p.beta_p),
        ],
        [
            -z_s * (1.0 - z_s) * l1a * rate,
            (1.0 - 2.0 * z_s) * (p.c_p - l1a * rate * y),
            -z_s * (1.0 - z_s) * l1a * (p.beta_u - p.beta_p) * y,
        ],
        [0.0, 0.0, (1.0 - 2.0 * z_i) * (p.c_ip - p.c_iu)],
    ]
}

/// Eigenvalues of a real 3x3 matrix as the roots of its characteristic
/// cubic, via the closed-form trigonometric/Cardano method. All matrices in
/// this crate are small, so no iterative factorization is needed.
pub fn eigen3(m: &[[f64; 3]; 3]) -> [Complex64; 3] {
    // char poly: lambda^3 + a lambda^2 + b lambda + c
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    cubic_roots(-tr, minors, -det)
}

/// Roots of `x^3 + a x^2 + b x + c`.
pub fn cubic_roots(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    let offset = a / 3.0;
    if r * r < q * q * q {
        // three real roots
        let theta = (r / q.powi(3).sqrt()).acos();
        let scale = -2.0 * q.sqrt();
        let two_pi = 2.0 * std::f64::consts::PI;
        [
            Complex64::new(scale * (theta / 3.0).cos() - offset, 0.0),
            Complex64::new(scale * ((theta + two_pi) / 3.0).cos() - offset, 0.0),
            Complex64::new(scale * ((theta - two_pi) / 3.0).cos() - offset, 0.0),
        ]
    } else {
        let big_a = -r.signum() * (r.abs() + (r * r - q * q * q).sqrt()).cbrt();
        let big_b = if big_a == 0.0 { 0.0 } else { q / big_a };
        let real = big_a + big_b - offset;
        let re_pair = -0.5 * (big_a + big_b) - offset;
        let im_pair = 3.0f64.sqrt() / 2.0 * (big_a - big_b);
        [
            Complex64::new(real, 0.0),
            Complex64::new(re_pair, im_pair),
            Complex64::new(re_pair, -im_pair),
        ]
    }
}

/// |det(A - lambda I)| via the characteristic polynomial; used to bound the
/// eigenvalue residual in tests.
pub fn char_poly_residual(m: &[[f64; 3]; 3], lambda: Complex64) -> f64 {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    (((lambda - tr) * lambda + minors) * lambda - det).norm()
}

/// Frobenius norm; scales the residual bound.
pub fn frobenius(m: &[[f64; 3]; 3]) -> f64 {
    m.iter()
        .flat_map(|row| row.iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}
