//! Nonlinear RF energy-harvesting models and outage analysis for monostatic
//! backscatter (RFID) links under Nakagami fading.
//!
//! The math is generic over the floating-point type through [`Scalar`];
//! the `*F64` aliases below are what most callers want.
//!
//! Modules, bottom-up:
//! * [`numerics`]: unit-safe power conversions and special functions
//!   (Q-function, its inverse, R(x) = 2Q(x)(1−Q(x)), regularized incomplete gamma).
//! * [`channel`]: path gain, Nakagami fading and the Gamma law of tag input power.
//! * [`harvest`]: the eight harvesting transfer functions, inversion and validation.
//! * [`fit`]: calibration of every model from measured rectifier data.
//! * [`link`]: reflection coefficients, effective channel, FM0 bit error rate.
//! * [`outage`]: sensitivity, power and information outage, closed-form success
//!   probability and its Monte Carlo validator.

// NaN-rejecting `!(x > y)` checks and long published constants are intended.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

pub mod channel;
pub mod error;
pub mod fit;
pub mod harvest;
pub mod link;
pub mod numerics;
pub mod outage;
pub mod rng;

pub use error::{Error, Result};
pub use num_complex;
pub use numerics::{PowerDbm, PowerLin, Probability, Scalar};

pub type InputPowerDistF64 = channel::InputPowerDist<f64>;
pub type PathLossParamsF64 = channel::PathLossParams<f64>;
pub type HarvestModelF64 = harvest::HarvestModel<f64>;
pub type HarvesterF64 = harvest::Harvester<f64>;
pub type HarvesterDatasetF64 = fit::HarvesterDataset<f64>;
pub type FitReportF64 = fit::FitReport<f64>;
pub type TagRfParamsF64 = link::TagRfParams<f64>;
pub type ReaderParamsF64 = link::ReaderParams<f64>;
pub type ScenarioF64 = outage::Scenario<f64>;
pub type OutageReportF64 = outage::OutageReport<f64>;
pub type McEstimateF64 = outage::McEstimate<f64>;
pub type TagEnergyParamsF64 = outage::TagEnergyParams<f64>;
