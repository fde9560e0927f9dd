//! Central-difference Wirtinger derivatives of real fields sampled as black boxes.

use crate::{Cx, Error, Result};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// A real-valued field on a disk `|z| < domain_radius()`.
pub trait ScalarField {
    fn sample(&self, z: Cx) -> Result<f64>;

    fn domain_radius(&self) -> f64 {
        1.0
    }
}

impl<F: Fn(Cx) -> Result<f64>> ScalarField for F {
    fn sample(&self, z: Cx) -> Result<f64> {
        self(z)
    }
}

/// A field restricted to a smaller disk.
pub struct Restricted<F> {
    pub field: F,
    pub radius: f64,
}

impl<F: ScalarField> ScalarField for Restricted<F> {
    fn sample(&self, z: Cx) -> Result<f64> {
        self.field.sample(z)
    }

    fn domain_radius(&self) -> f64 {
        self.radius.min(self.field.domain_radius())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wirtinger {
    /// `(u_x - i u_y) / 2`
    Dz,
    /// `(u_x + i u_y) / 2`
    Dzbar,
    /// `(u_xx - u_yy - 2i u_xy) / 4`
    Dzz,
    /// `(u_xx + u_yy) / 4`
    Dzzbar,
}

/// Wirtinger derivative of `u` at `z` with O(step²) central stencils.
///
/// The stencil must stay `2·step` inside the field's domain.
pub fn wirtinger_fd(u: &impl ScalarField, z: Cx, step: f64, which: Wirtinger) -> Result<Cx> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {step}"
        )));
    }
    let reach = z.norm() + 2.0 * step;
    if reach > u.domain_radius() {
        return Err(Error::RadiusExceeded {
            radius: reach,
            limit: u.domain_radius(),
        });
    }
    let dx = Cx::new(step, 0.0);
    let dy = Cx::new(0.0, step);
    let at = |w: Cx| -> Result<f64> {
        let v = u.sample(w)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite)
        }
    };
    let h2 = step * step;
    let out = match which {
        Wirtinger::Dz | Wirtinger::Dzbar => {
            let ux = (at(z + dx)? - at(z - dx)?) / (2.0 * step);
            let uy = (at(z + dy)? - at(z - dy)?) / (2.0 * step);
            if which == Wirtinger::Dz {
                Cx::new(ux, -uy) / 2.0
            } else {
                Cx::new(ux, uy) / 2.0
            }
        }
        Wirtinger::Dzzbar => {
            let c = at(z)?;
            let lap = at(z + dx)? + at(z - dx)? + at(z + dy)? + at(z - dy)? - 4.0 * c;
            Cx::new(lap / (4.0 * h2), 0.0)
        }
        Wirtinger::Dzz => {
            let c = at(z)?;
            let uxx = (at(z + dx)? - 2.0 * c + at(z - dx)?) / h2;
            let uyy = (at(z + dy)? - 2.0 * c + at(z - dy)?) / h2;
            let uxy = (at(z + dx + dy)? - at(z + dx - dy)? - at(z - dx + dy)? + at(z - dx - dy)?)
                / (4.0 * h2);
            Cx::new(uxx - uyy, -2.0 * uxy) / 4.0
        }
    };
    crate::ensure_finite(out)
}
