//! Numerical toolkit for automorphic forms on hyperbolic 3-space over the
//! Bianchi groups `PSL2(O_K)`, `K` one of the nine imaginary quadratic fields
//! of class number one.
//!
//! The crate is organised bottom-up:
//!
//! * [`quadfield`]: exact arithmetic in `O_K` (norms, lattice enumeration,
//!   divisors, generalized divisor sums).
//! * [`specfun`]: complex log-Gamma, `Γ_C`, Stirling envelopes, the scaled
//!   K-Bessel function `cosh(πt/2) K_{it}(u)`, its regime envelopes and the
//!   Mellin transform of a product of two K-Bessel functions.
//! * [`zeta`]: Dedekind zeta functions, completed zeta and the scattering
//!   coefficient `φ(s)`.
//! * [`eisenstein`]: points of `H³`, quaternionic Möbius action, Fourier
//!   evaluation of `E(P, s)`, Laplacian and Hecke checks, sup-norm scans.
//! * [`autoforms`]: ingested cusp-form coefficient data and Rankin–Selberg
//!   coefficient series.
//! * [`tripleprod`]: archimedean triple-product integral, its Gamma closed
//!   form and completed-L assemblies.
//! * [`exponents`]: the piecewise-linear exponent `Q1` and the spectral
//!   aggregation of the resulting bounds.
//! * [`cli`]: configuration parsing and the batch commands behind the
//!   `bianchi` binary.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod autoforms;
pub mod cli;
pub mod eisenstein;
pub mod error;
pub mod exponents;
pub mod fit;
pub mod quadfield;
pub mod specfun;
pub mod tripleprod;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
