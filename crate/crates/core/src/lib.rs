//! Survival-data simulation engine.
//!
//! Generates failure times from six parametric survival regression families
//! (AFT, AH, PH, PO, EH, YP) over a pluggable registry of baseline
//! distributions, and composes them with cure fractions, shared frailties,
//! Archimedean copula dependence and right/interval censoring mechanisms.
//! Everything is driven by a single 64-bit seed, so any dataset the engine
//! produces can be regenerated bit for bit.
//!
//! The crate is organized around the generation pipeline:
//!
//! - [`rng`] — deterministic splittable random streams
//! - [`baselines`] — baseline distributions (survival, hazard, upper-tail quantile)
//! - [`formula`] — the `~ age*sex + offset(w)` linear-predictor mini-language
//! - [`models`] — inverse-transform generation for the six families
//! - [`cure`] — promotion-time cure machinery (inverse pgfs, Lambert W)
//! - [`dependence`] — frailties and Clayton/Gumbel copula sampling
//! - [`censoring`] — right censoring and type I/II interval censoring
//! - [`scenario`] — declarative scenario documents, tables and CSV I/O
//! - [`verify`] — Kaplan–Meier, Kolmogorov–Smirnov and Kendall tau diagnostics
//!
//! The `survgen` binary exposes the engine as a CLI (`gen`, `validate`,
//! `check`).

pub mod baselines;
pub mod error;
pub mod rng;
pub mod special;

pub use baselines::{BaselineDistribution, BaselineRegistry, BaselineSpec};
pub use error::{Error, Result};
pub use rng::RngStream;
