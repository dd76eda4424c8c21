//! Entropy bookkeeping for localizing quantum wave packets.
//!
//! The crate evolves one-dimensional center-of-mass wave packets on a uniform
//! grid, measures the differential entropies of the position and momentum
//! densities, applies photon-absorption (localization) events and audits the
//! entropic and Heisenberg uncertainty relations together with the resulting
//! thermodynamic entropy `S = k_B * I_p`.
//!
//! Module map:
//!
//! * [`analytic`]: closed-form Gaussian packets, the oracle for every numeric path.
//! * [`grid`]: sampled wavefunctions, the unitary momentum transform, entropy quadrature.
//! * [`evolution`]: exact spectral free propagation.
//! * [`events`]: photons, the absorption event and the Brillouin condition.
//! * [`ledger`]: time series of entropies and the second-law audit.
//! * [`scenarios`]: the piston box and the two demon variants.
//! * [`config`] and [`pipeline`]: declarative runs as driven by the `entropy-lab` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod config;
pub mod error;
pub mod events;
pub mod evolution;
pub mod grid;
pub mod ledger;
pub mod pipeline;
pub mod plot;
pub mod rng;
pub mod scenarios;
pub mod units;

pub use analytic::{gaussian_entropy, GaussianPacket};
pub use error::{Error, Result};

pub use events::{absorb, brillouin_check, AbsorptionEvent, Photon};
pub use evolution::{free_propagate, propagate_schedule};
pub use grid::{GridSpec, GridWavefunction, Space};

pub use ledger::{EntropyLedger, LedgerEntry, VerificationReport};
pub use rng::SimRng;
pub use units::UnitSystem;
