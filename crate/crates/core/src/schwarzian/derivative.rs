//! The Schwarzian derivative and the holomorphic coefficient `Q`.

use crate::analytic::{AnalyticFunction, Jet, PowerSeries};
use crate::harmonic::{wirtinger_fd, ScalarField, Wirtinger};
use crate::{Cx, Error, Result, EPS_DIV};

/// Values of `-(ln J)_zz̄` at or below this count as zero in black-box evaluation.
pub const BLACKBOX_ZERO_THRESHOLD: f64 = 1e-8;

pub const DEFAULT_INNER_STEP: f64 = 1e-3;
pub const DEFAULT_OUTER_STEP: f64 = 1e-2;

/// `f'''/f' - (3/2)(f''/f')²` from an order-3 jet, i.e. `6c₃/c₁ - 6(c₂/c₁)²`.
pub fn schwarzian_of_jet(jet: &Jet) -> Result<Cx> {
    let c1 = jet.coeff(1);
    if c1.norm() <= EPS_DIV {
        return Err(Error::DivisionNearZero(c1.norm()));
    }
    let r = jet.coeff(2) / c1;
    crate::ensure_finite(6.0 * jet.coeff(3) / c1 - 6.0 * r * r)
}

pub fn schwarzian(f: &AnalyticFunction, z: Cx) -> Result<Cx> {
    schwarzian_of_jet(&f.eval_jet(z, 3)?)
}

/// `Q = 2 P_zz - P_z²` with `P = ln(|ω'|²/(1-|ω|²)²)`, keeping the conjugate terms.
///
/// They cancel, so the value equals `2 S[ω]`; the suites check that.
pub fn compute_q_analytic(omega: &AnalyticFunction, z: Cx) -> Result<Cx> {
    let jet = omega.eval_jet(z, 3)?;
    let w = jet.value();
    let (d1, d2, d3) = (
        jet.derivative_value(1),
        jet.derivative_value(2),
        jet.derivative_value(3),
    );
    if d1.norm() <= EPS_DIV {
        return Err(Error::DegenerateAtPoint(z));
    }
    let s = 1.0 - w.norm_sqr();
    if s <= 0.0 {
        return Err(Error::Precondition(format!("|ω| >= 1 at {z}")));
    }
    let wc = w.conj();
    let p_z = d2 / d1 + 2.0 * wc * d1 / s;
    let p_zz =
        (d3 * d1 - d2 * d2) / (d1 * d1) + 2.0 * wc * d2 / s + 2.0 * wc * wc * d1 * d1 / (s * s);
    crate::ensure_finite(2.0 * p_zz - p_z * p_z)
}

/// `Q` from samples of `J` alone: nested central differences.
///
/// The inner stencil (`inner_step`) gives `ρ = -(ln J)_zz̄`; the outer one
/// (`outer_step`) differentiates `u = ln ρ`.
pub fn compute_q_blackbox(
    jacobian: &impl ScalarField,
    z: Cx,
    inner_step: f64,
    outer_step: f64,
) -> Result<Cx> {
    if !(inner_step > 0.0 && outer_step > 0.0) {
        return Err(Error::InvalidParameter(
            "finite-difference steps must be positive".into(),
        ));
    }
    let reach = z.norm() + 2.0 * (inner_step + outer_step);
    if reach > jacobian.domain_radius() {
        return Err(Error::RadiusExceeded {
            radius: reach,
            limit: jacobian.domain_radius(),
        });
    }
    let log_j = |w: Cx| -> Result<f64> {
        let j = jacobian.sample(w)?;
        if !(j > 0.0) {
            return Err(Error::Precondition(format!("Jacobian {j:e} <= 0 at {w}")));
        }
        Ok(j.ln())
    };
    let u = |w: Cx| -> Result<f64> {
        let rho = -wirtinger_fd(&log_j, w, inner_step, Wirtinger::Dzzbar)?.re;
        if !(rho > BLACKBOX_ZERO_THRESHOLD) {
            return Err(Error::NegativeInnerValue {
                point: w,
                value: rho,
            });
        }
        Ok(rho.ln())
    };
    let u_z = wirtinger_fd(&u, z, outer_step, Wirtinger::Dz)?;
    let u_zz = wirtinger_fd(&u, z, outer_step, Wirtinger::Dzz)?;
    crate::ensure_finite(2.0 * u_zz - u_z * u_z)
}

/// Maclaurin series of `Q = 2 S[ω]` up to order `n`; needs `ω'(0) ≠ 0`.
pub fn q_series_from_dilatation(omega: &AnalyticFunction, n: usize) -> Result<PowerSeries> {
    let jet = omega.eval_jet(Cx::default(), n + 3)?;
    let d1 = jet.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative().truncate(n);
    let (d1, d2) = (d1.truncate(n), d2.truncate(n));
    if d1.value().norm() <= EPS_DIV {
        return Err(Error::DegenerateAtPoint(Cx::default()));
    }
    let inv = d1.recip()?;
    let ratio = d2.mul(&inv)?;
    let s = d3
        .mul(&inv)?
        .sub(&ratio.mul(&ratio)?.scale(Cx::new(1.5, 0.0)))?;
    Ok(PowerSeries::from_jet(s.scale(Cx::new(2.0, 0.0))))
}
