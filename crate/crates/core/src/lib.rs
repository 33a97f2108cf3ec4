//! Deterministic model of vacancy creation in diamond under electron irradiation,
//! with the spectral analysis used to characterize the resulting NV⁻ ensembles.
//!
//! The simulation chain is
//! [`stopping`] → [`transport`] (depth stepping) → [`displacement`] (knock-on
//! and cascade vacancies) → [`nvmodel`] (vacancy to NV⁻ conversion).
//! [`specfit`] holds the measurement side: ZPL areas, charge-state ratio,
//! Lorentzian/Gaussian/exponential fits and sensitivity estimates.

// NaN must fail range checks, hence `!(x > 0.0)` throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod displacement;
pub mod error;
pub mod kinematics;
pub mod material;
pub mod nvmodel;
pub mod specfit;
pub mod stopping;
pub mod synth;
pub mod transport;
pub mod units;

pub use error::{Error, Result};
pub use kinematics::{kinematics, Kinematics};
pub use material::MaterialSpec;
pub use stopping::{StoppingBreakdown, StoppingModel};
