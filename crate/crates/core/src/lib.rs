//! Planar correlation functions of the matricial Φ³ model in two dimensions.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of an immutable [`spectral::Coupling`]; file formats and the
//! command line live in the companion `phi3-cli` crate.
//!
//! Layout, bottom-up:
//!
//! * [`exact`]: big rationals, sparse multivariate polynomials, truncated Taylor jets.
//! * [`bell`]: partial Bell polynomials, the γ-coefficient tower and identity checks.
//! * [`spectral`]: the measure, its moments and the coupling map λ̃² ↦ c.
//! * [`correlators`]: closed forms for W, the one-boundary functions and the multi-boundary tower.
//! * [`inteq`]: discretised integral equations used as an independent oracle.
//! * [`schwinger`]: the induced 2D Schwinger two-point function and its positivity diagnostics.
//! * [`verify`]: Cauchy extraction of perturbative coefficients and small Feynman graphs.
#![no_std]
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::wrong_self_convention,
    clippy::needless_range_loop
)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bell;
pub mod correlators;
pub mod error;
pub mod exact;
pub mod inteq;
pub mod linalg;
pub mod quad;
pub mod schwinger;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
