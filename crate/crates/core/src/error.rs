use thiserror::Error;

use crate::grid::Space;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be {constraint}, got {value}")]
    Domain {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("grid size {0} must be a power of two and at least 256")]
    GridSize(usize),

    #[error("grid too narrow for the packet: probability mass {boundary_mass:.3e} falls outside the grid")]
    GridTooNarrow { boundary_mass: f64 },

    #[error("degenerate state: all samples are zero")]
    DegenerateState,

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("expected a {expected} space state")]
    WrongSpace { expected: Space },

    #[error("boundary density {boundary:.3e} exceeds the decay threshold")]
    BoundaryDecay { boundary: f64 },

    #[error(
        "grid overflow at t = {t}: boundary density {boundary:.3e} exceeds the decay threshold"
    )]
    GridOverflow { t: f64, boundary: f64 },

    #[error("not a localization: entropy change {delta_s} is not positive")]
    NotALocalization { delta_s: f64 },

    #[error("localization width {sigma_loc} is below the grid resolution limit {limit} (4 dx)")]
    Resolution { sigma_loc: f64, limit: f64 },

    #[error("{0}")]
    Usage(String),
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            constraint: "positive and finite",
            value,
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            constraint: "non-negative and finite",
            value,
        })
    }
}
