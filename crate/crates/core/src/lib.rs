//! Simulator for IRS-aided multi-antenna downlinks.
//!
//! A base station with a small planar array serves a single-antenna user
//! through a direct Rayleigh link and a reflection path bounced off an
//! intelligent reflecting surface (IRS) with `N` passive phase-shifting
//! elements. The library models the three constituent links, samples the
//! end-to-end SNR gain and capacity by Monte Carlo, evaluates the exact
//! generalized chi-square SNR law and its Gaussian capacity approximation,
//! and solves the IRS-size versus transmit-array-size trade-off for ergodic
//! and outage targets.
//!
//! Modules follow the processing chain:
//!
//! * [`geometry`]: planar-array index maps, array responses, and the
//!   angle-only phase-shift rule that guarantees channel hardening.
//! * [`covariance`]: spatial covariance models for the IRS fading link
//!   (isotropic-scattering sinc model, rank-one extreme) with spectra and
//!   PSD square roots.
//! * [`channel`]: channel samplers, the end-to-end channel, SNR gain and
//!   capacity, plus a fast decomposed SNR sampler used as a cross-check.
//! * [`analytics`]: special functions, adaptive quadrature, the exact SNR
//!   density, and spectral bounds on its mean and variance.
//! * [`statistics`]: the Gaussian capacity law, hardening-order bounds, and
//!   the rank-one variance correction.
//! * [`fitting`]: log-log power-law fits of the covariance spectrum and the
//!   eigenvalue-growth versus area-scaling sweep.
//! * [`tradeoff`]: minimal transmit-array size for ergodic-capacity and
//!   outage-probability targets.
//! * [`harness`]: experiment configs, deterministic parallel Monte Carlo,
//!   and CSV emission backing the `irsim` command-line tool.

pub mod analytics;
pub mod channel;
pub mod covariance;
pub mod fitting;
pub mod geometry;
pub mod harness;
pub mod statistics;
pub mod tradeoff;

mod error;

pub use error::{Error, Result};
