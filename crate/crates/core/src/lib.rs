//! Planar harmonic mappings on the unit disk that share a Jacobian.
//!
//! A sense-preserving harmonic map `f = h + conj(g) + c` is described by two
//! holomorphic functions. This crate evaluates them through truncated Taylor
//! jets, checks the Jacobian PDE and Schwarzian identities numerically, and
//! builds the full family of maps with the same Jacobian as a given one.
//!
//! Modules:
//! - [`analytic`]: complex jets, power series, the expression language and the map catalog.
//! - [`harmonic`]: harmonic maps, grids, Wirtinger finite differences and PDE checks.
//! - [`schwarzian`]: Möbius maps, the Schwarzian derivative, `Q` and dilatation reconstruction.
//! - [`family`]: equal-Jacobian families and their verification.
//! - [`report`] and [`suite`]: residual reports, suite orchestration and CSV export.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod family;
pub mod harmonic;
pub mod report;
pub mod schwarzian;
pub mod suite;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type Cx = num_complex::Complex64;

/// Guard for near-zero denominators.
pub const EPS_DIV: f64 = 1e-12;

pub(crate) fn ensure_finite(z: Cx) -> Result<Cx> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite)
    }
}
