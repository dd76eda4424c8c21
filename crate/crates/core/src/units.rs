use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};

/// Physical constants of a run. Natural units (all ones) are the default;
/// entropies are always kept in nats and `k_b` only scales the reported
/// thermodynamic entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitSystem {
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one", rename = "k_B", alias = "k_b")]
    pub k_b: f64,
    #[serde(default = "one")]
    pub c: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::NATURAL
    }
}

impl UnitSystem {
    pub const NATURAL: UnitSystem = UnitSystem {
        hbar: 1.0,
        k_b: 1.0,
        c: 1.0,
    };

    pub fn new(hbar: f64, k_b: f64, c: f64) -> Result<Self> {
        Ok(Self {
            hbar: require_positive("hbar", hbar)?,
            k_b: require_positive("k_B", k_b)?,
            c: require_positive("c", c)?,
        })
    }

    /// Planck's constant `h = 2 pi hbar`.
    pub fn planck(&self) -> f64 {
        2.0 * PI * self.hbar
    }

    /// Lower bound on `I_x + I_p`: `ln(h e / 2) = ln(pi e hbar)`.
    pub fn leipnik_bound(&self) -> f64 {
        leipnik_bound(self.hbar)
    }
}

pub fn leipnik_bound(hbar: f64) -> f64 {
    (PI * E * hbar).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_bound_is_one_plus_ln_pi() {
        let b = UnitSystem::NATURAL.leipnik_bound();
        assert!((b - (1.0 + PI.ln())).abs() < 1e-15);
        assert!((b - 2.144_729_885_849_400_2).abs() < 1e-14);
    }

    #[test]
    fn bound_matches_planck_form() {
        let u = UnitSystem::new(0.37, 1.0, 1.0).unwrap();
        let via_h = (u.planck() * E / 2.0).ln();
        assert!((via_h - u.leipnik_bound()).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_positive_constants() {
        assert!(UnitSystem::new(0.0, 1.0, 1.0).is_err());
        assert!(UnitSystem::new(1.0, -1.0, 1.0).is_err());
        assert!(UnitSystem::new(1.0, 1.0, f64::NAN).is_err());
    }
}
