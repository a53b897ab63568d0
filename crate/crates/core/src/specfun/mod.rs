//! Gamma machinery, K-Bessel functions of imaginary order and the
//! K-Bessel Mellin identity.

pub mod bessel;
pub mod gamma;
pub mod mellin;
pub mod quad;

pub use bessel::{
    balogh_classify, balogh_envelope, balogh_envelope_ln, bessel_k, bessel_k_scaled,
    bessel_k_scaled_ln, BesselRegime, RegimeLabel, ScaledLog, DEFAULT_C_DECAY,
    DEFAULT_C_TRANSITION,
};
pub use gamma::{
    gamma, gamma_c, ln_abs_gamma_one_plus_it, ln_stirling_envelope, log_gamma, log_gamma_c,
    stirling_envelope, GammaFactorProduct,
};
pub use mellin::{mellin_kk_closed, mellin_kk_quadrature, mellin_normalization};
