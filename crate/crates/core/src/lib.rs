//! Code index modulation (CIM) image transmission.
//!
//! A chip-rate baseband link simulator for CIM spread-spectrum transmission
//! over a SIMO Rayleigh fading channel, conventional QAM/PSK baselines,
//! closed-form efficiency metrics and a set of image enhancement filters for
//! cleaning up received images.
//!
//! The transmit chain splits an `eta = 2*n_w + log2(M)` bit group into a
//! constellation symbol and two Walsh-Hadamard code indices, one for the
//! in-phase and one for the quadrature branch. The receiver despreads every
//! branch with the whole codebook, picks the strongest correlator per branch
//! and then runs a maximum-likelihood search over the constellation.

pub mod baselines;
pub mod bits;
pub mod channel;
pub mod codebook;
pub mod error;
pub mod imaging;
pub mod metrics;
pub mod modem;
pub mod receiver;
pub mod simkit;

pub use error::{Error, Result};
pub use num_complex::Complex64;
