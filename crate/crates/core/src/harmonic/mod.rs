//! Harmonic maps `f = h + conj(g) + c`: Jacobian, dilatation, orientation and PDE checks.

mod checks;
mod grid;
mod map;
mod wirtinger;

pub use checks::{
    classify_type, dilatation_critical_points, jacobian_pde_rhs, neg_log_jacobian_dzzbar,
    r_function, verify_jacobian_pde, verify_jacobian_pde_analytic, verify_r_harmonic, JacobianType,
    TOL_CONST,
};
pub use grid::GridSpec;
pub use map::{is_sense_preserving, HarmonicMap, JacobianField};
pub use wirtinger::{wirtinger_fd, Restricted, ScalarField, Wirtinger, DEFAULT_STEP};
