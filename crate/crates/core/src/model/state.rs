use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for simplex checks on user-supplied states.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// State of the coupled SIS dynamics: infected fraction plus the unprotected
/// fractions of the susceptible and infected subpopulations. The susceptible
/// fraction is implicit, `s = 1 - y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SisState {
    /// Infected fraction.
    pub y: f64,
    /// Unprotected fraction among susceptibles.
    pub z_s: f64,
    /// Unprotected fraction among infected.
    pub z_i: f64,
}

impl SisState {
    pub fn new(y: f64, z_s: f64, z_i: f64) -> Result<Self> {
        let s = Self { y, z_s, z_i };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("y", self.y), ("z_S", self.z_s), ("z_I", self.z_i)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Simplex(format!("{name} = {v} outside [0,1]")));
            }
        }
        Ok(())
    }

    /// Population state (x_SU, x_SP, x_IU, x_IP) implied by the coordinates.
    pub fn population_state(&self) -> [f64; 4] {
        let s = 1.0 - self.y;
        [
            self.z_s * s,
            (1.0 - self.z_s) * s,
            self.z_i * self.y,
            (1.0 - self.z_i) * self.y,
        ]
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.y, self.z_s, self.z_i]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self { y: a[0], z_s: a[1], z_i: a[2] }
    }
}

/// State of the coupled SIRI dynamics: the three compartment fractions plus
/// the unprotected fraction in each compartment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiriState {
    pub s: f64,
    pub y: f64,
    pub r: f64,
    pub z_s: f64,
    pub z_i: f64,
    pub z_r: f64,
}

impl SiriState {
    pub fn new(s: f64, y: f64, r: f64, z_s: f64, z_i: f64, z_r: f64) -> Result<Self> {
        let st = Self { s, y, r, z_s, z_i, z_r };
        st.validate()?;
        Ok(st)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("s", self.s),
            ("y", self.y),
            ("r", self.r),
            ("z_S", self.z_s),
            ("z_I", self.z_i),
            ("z_R", self.z_r),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Simplex(format!("{name} = {v} outside [0,1]")));
            }
        }
        let total = self.s + self.y + self.r;
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Simplex(format!("s + y + r = {total} != 1")));
        }
        Ok(())
    }

    /// Population state (x_SU, x_SP, x_IU, x_IP, x_RU, x_RP).
    pub fn population_state(&self) -> [f64; 6] {
        [
            self.z_s * self.s,
            (1.0 - self.z_s) * self.s,
            self.z_i * self.y,
            (1.0 - self.z_i) * self.y,
            self.z_r * self.r,
            (1.0 - self.z_r) * self.r,
        ]
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.s, self.y, self.r, self.z_s, self.z_i, self.z_r]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self { s: a[0], y: a[1], r: a[2], z_s: a[3], z_i: a[4], z_r: a[5] }
    }
}

/// Validates that `x` lies on the probability simplex within `SIMPLEX_TOL`.
pub fn check_simplex(x: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for (i, &v) in x.iter().enumerate() {
        if v < 0.0 {
            return Err(Error::Simplex(format!("entry {i} = {v} is negative")));
        }
        sum += v;
    }
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::Simplex(format!("entries sum to {sum}, expected 1")));
    }
    Ok(())
}
