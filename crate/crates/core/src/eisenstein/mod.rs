//! Eisenstein series `E(P, s)` on `H³` for `PSL2(O_K)`: Möbius action,
//! Fourier evaluation, automorphy, Laplacian and Hecke checks, and
//! sup-norm scans.

mod evaluator;
mod hecke;
mod point;
mod scan;

pub use evaluator::{
    check_automorphy, eisenstein_eval, laplacian_residual, EisensteinEvaluator, EvalDetail,
    DEFAULT_MAX_NORM_CUTOFF, LAPLACIAN_T_FLOOR, R_MAX, R_MIN, T_WINDOW,
};
pub use hecke::{
    hecke_apply, hecke_eigenvalue, hecke_representatives, residues_mod, HeckeRepresentative,
};
pub use point::{
    mobius_act, upper_triangular_act, GroupElement, HyperbolicPoint, Quaternion, K_COMPONENT_TOL,
};
pub use scan::{box_grid, supnorm_scan, ScanRow, ScanTable};
