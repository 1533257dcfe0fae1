//! Turbulent orbital-angular-momentum channels: simulation, compressive
//! tomography and channel correction.
//!
//! A three-mode OAM/wavelength non-separable field is propagated through a
//! split-step Kolmogorov turbulence model ([`optics`], [`turbulence`],
//! [`channel`]). The output state is recovered from a random subset of
//! generalised Gell-Mann expectation values with an eigenvalue-thresholding
//! solver ([`tomography`]); the recovered state yields the channel's Kraus
//! matrix, whose adjoint undoes the distortion ([`correction`]). Quality is
//! reported as fidelity, trace distance and negativity ([`metrics`]), and
//! [`harness`] runs seeded Monte-Carlo experiments and sweeps.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod correction;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod oamf;
pub mod optics;
pub mod state;
pub mod tomography;
pub mod turbulence;

pub use error::{Error, Result};
