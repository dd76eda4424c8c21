//! Closed-form minimum-uncertainty Gaussian packets under free evolution.
//!
//! Everything here is exact; the grid, evolution and event modules are tested
//! against these formulas.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};

/// Differential entropy of a normal density with standard deviation `sigma`:
/// `ln(sqrt(2 pi) sigma) + 1/2`, in nats.
pub fn gaussian_entropy(sigma: f64) -> Result<f64> {
    require_positive("sigma", sigma)?;
    Ok((2.0 * PI * E).sqrt().ln() + sigma.ln())
}

/// A free Gaussian packet that was minimum-uncertainty (`sigma0`) at its own
/// time origin and has since evolved for `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    mu_x: f64,
    p0: f64,
    sigma0: f64,
    mass: f64,
    t: f64,
    hbar: f64,
}

impl GaussianPacket {
    pub fn new(mu_x: f64, p0: f64, sigma0: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !mu_x.is_finite() || !p0.is_finite() {
            return Err(Error::Domain {
                name: "mu_x/p0",
                constraint: "finite",
                value: if mu_x.is_finite() { p0 } else { mu_x },
            });
        }
        Ok(Self {
            mu_x,
            p0,
            sigma0: require_positive("sigma0", sigma0)?,
            mass: require_positive("mass", mass)?,
            t: 0.0,
            hbar: require_positive("hbar", hbar)?,
        })
    }

    pub fn mu_x(&self) -> f64 {
        self.mu_x
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Dimensionless spreading parameter `hbar t / (2 m sigma0^2)`.
    fn spread(&self) -> f64 {
        self.hbar * self.t / (2.0 * self.mass * self.sigma0 * self.sigma0)
    }

    /// Position standard deviation at the current time.
    pub fn sigma_x(&self) -> f64 {
        self.sigma0 * self.spread().hypot(1.0)
    }

    /// Momentum standard deviation; constant under free evolution.
    pub fn sigma_p(&self) -> f64 {
        self.hbar / (2.0 * self.sigma0)
    }

    pub fn entropy_position(&self) -> f64 {
        gaussian_entropy(self.sigma_x()).expect("sigma_x is positive by construction")
    }

    pub fn entropy_momentum(&self) -> f64 {
        gaussian_entropy(self.sigma_p()).expect("sigma_p is positive by construction")
    }

    pub fn heisenberg_product(&self) -> f64 {
        self.sigma_x() * self.sigma_p()
    }

    /// Free evolution by `dt`: the mean moves ballistically, the width spreads.
    pub fn evolve(&self, dt: f64) -> Result<Self> {
        require_non_negative("dt", dt)?;
        Ok(Self {
            mu_x: self.mu_x + self.p0 / self.mass * dt,
            t: self.t + dt,
            ..*self
        })
    }

    /// Position-space amplitude at `x`, including the complex-width phase of
    /// the spread packet. The global phase is fixed so that the amplitude is
    /// real and positive at the mean for `t = 0`.
    pub fn amplitude(&self, x: f64) -> Complex64 {
        let alpha = Complex64::new(1.0, self.spread());
        let d = x - self.mu_x;
        let norm = (2.0 * PI * self.sigma0 * self.sigma0).powf(-0.25);
        let exponent = -Complex64::new(d * d, 0.0) / (4.0 * self.sigma0 * self.sigma0 * alpha)
            + Complex64::new(0.0, self.p0 * d / self.hbar);
        norm / alpha.sqrt() * exponent.exp()
    }
}
