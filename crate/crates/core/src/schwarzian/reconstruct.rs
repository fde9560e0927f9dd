//! Recovering a dilatation from `Q` and matching it to a target by a disk automorphism.

use std::f64::consts::TAU;

use crate::analytic::{AnalyticFunction, Expr, PowerSeries};
use crate::harmonic::{jacobian_pde_rhs, HarmonicMap};
use crate::schwarzian::{
    is_disk_automorphism, mobius_from_3_points, DiskAutomorphismParams, Mobius,
};
use crate::{Cx, Error, Result, EPS_DIV};

/// Validation tolerance for a three-point Möbius fit on the held-out probes.
pub const FIT_TOLERANCE: f64 = 1e-6;

/// Eight points on `|z| = 0.4` at uniform angles; the first three fit, the rest validate.
pub fn default_probes() -> Vec<Cx> {
    (0..8)
        .map(|j| Cx::from_polar(0.4, TAU * j as f64 / 8.0))
        .collect()
}

/// Solves `w'' + (Q/4) w = 0` for the bases `w₁ = z + …`, `w₂ = 1 + …` and returns `w₁/w₂`.
///
/// The result satisfies `2 S[ω] = Q` and is normalized by `ω(0) = 0`, `ω'(0) = 1`, `ω''(0) = 0`.
pub fn solve_schwarzian_series(q: &PowerSeries, n: usize) -> Result<PowerSeries> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "series order must be at least 1".into(),
        ));
    }
    let quarter: Vec<Cx> = (0..=n).map(|k| q.coeff(k) / 4.0).collect();
    let solve = |w0: Cx, w1: Cx| -> Vec<Cx> {
        let mut w = vec![Cx::default(); n + 1];
        w[0] = w0;
        w[1] = w1;
        for m in 0..n - 1 {
            let s: Cx = (0..=m).map(|k| quarter[k] * w[m - k]).sum();
            w[m + 2] = -s / ((m + 2) as f64 * (m + 1) as f64);
        }
        w
    };
    let w1 = PowerSeries::new(solve(Cx::default(), Cx::new(1.0, 0.0)))?;
    let w2 = PowerSeries::new(solve(Cx::new(1.0, 0.0), Cx::default()))?;
    Ok(w1.mul(&w2.recip()?).with_radius(q.r_max()))
}

/// Result of [`fit_disk_automorphism`].
#[derive(Clone, Debug)]
pub struct DiskFit {
    pub mobius: Mobius,
    /// Max `|M(rec(p)) - target(p)|` over the held-out probes.
    pub validation_residual: f64,
    /// Max `||M(e^{iθ})| - 1|` over 32 angles.
    pub circle_residual: f64,
}

/// A Möbius map `M` with `target = M ∘ rec`, not yet required to preserve the disk.
pub fn fit_mobius(
    target: &AnalyticFunction,
    rec: &AnalyticFunction,
    probes: &[Cx],
) -> Result<(Mobius, f64)> {
    if probes.len() < 3 {
        return Err(Error::InvalidParameter("need at least three probes".into()));
    }
    let src: Vec<Cx> = probes.iter().map(|&p| rec.eval(p)).collect::<Result<_>>()?;
    let dst: Vec<Cx> = probes
        .iter()
        .map(|&p| target.eval(p))
        .collect::<Result<_>>()?;
    let m = mobius_from_3_points([src[0], src[1], src[2]], [dst[0], dst[1], dst[2]])?;
    let mut residual = 0.0f64;
    for (s, d) in src.iter().zip(&dst).skip(3) {
        let r = match m.apply(*s) {
            Ok(v) => (v - d).norm(),
            Err(_) => f64::INFINITY,
        };
        residual = residual.max(r);
    }
    Ok((m, residual))
}

/// Fits `target = T ∘ rec` on the probes and requires `T` to be a disk automorphism.
pub fn fit_disk_automorphism(
    target: &AnalyticFunction,
    rec: &AnalyticFunction,
    probes: &[Cx],
) -> Result<DiskFit> {
    let (m, validation_residual) = fit_mobius(target, rec, probes)?;
    if !(validation_residual <= FIT_TOLERANCE) {
        return Err(Error::FitMismatch {
            residual: validation_residual,
            tolerance: FIT_TOLERANCE,
        });
    }
    let circle_residual = m.circle_residual(32);
    if !is_disk_automorphism(&m) {
        return Err(Error::NotDiskAutomorphism {
            residual: circle_residual,
        });
    }
    let mobius = m.normalized_by_d()?;
    Ok(DiskFit {
        mobius,
        validation_residual,
        circle_residual,
    })
}

/// Jet data of `ρ = -(ln J)_zz̄` at the origin: `ρ(0)` and `(ln ρ)_z(0)`.
#[derive(Clone, Copy, Debug)]
pub struct OriginMetric {
    pub rho: f64,
    pub dlog_rho: Cx,
}

impl OriginMetric {
    /// Evaluated analytically from the map: `(ln ρ)_z = ω''/ω' + 2 conj(ω) ω'/(1-|ω|²)`.
    pub fn from_map(f: &HarmonicMap) -> Result<Self> {
        let zero = Cx::default();
        let w = f.dilatation_jet(zero, 2)?;
        let d1 = w.coeff(1);
        if d1.norm() <= EPS_DIV {
            return Err(Error::DegenerateAtPoint(zero));
        }
        let s = 1.0 - w.value().norm_sqr();
        let dlog_rho = w.derivative_value(2) / d1 + 2.0 * w.value().conj() * d1 / s;
        Ok(OriginMetric {
            rho: jacobian_pde_rhs(f, zero)?,
            dlog_rho,
        })
    }
}

/// The Möbius image of `ω_rec` that satisfies the Jacobian PDE for the metric `ρ`:
/// `a ω_rec / (1 - k ω_rec)` with `a = √ρ(0)`, `k = (ln ρ)_z(0) / 2`.
///
/// It vanishes at 0 and has a positive derivative there, so any dilatation with the
/// same Jacobian is `T` of it for a disk automorphism `T`.
pub fn normalize_to_metric(omega_rec: &PowerSeries, metric: OriginMetric) -> AnalyticFunction {
    let a = Cx::new(metric.rho.sqrt(), 0.0);
    let k = metric.dlog_rho / 2.0;
    let outer = Expr::div(
        Expr::mul(Expr::Const(a), Expr::Z),
        Expr::sub(Expr::real(1.0), Expr::mul(Expr::Const(k), Expr::Z)),
    );
    AnalyticFunction::Series(omega_rec.clone()).post_compose(outer)
}

/// Expected `(γ, z0)` of `T` with `ω = T ∘ ω_can`: `γ = arg ω'(0)`, `z0 = e^{-iγ} ω(0)`.
pub fn expected_automorphism_params(omega: &AnalyticFunction) -> Result<DiskAutomorphismParams> {
    let jet = omega.eval_jet(Cx::default(), 1)?;
    let gamma = jet.coeff(1).arg();
    Ok(DiskAutomorphismParams {
        gamma,
        z0: Cx::from_polar(1.0, -gamma) * jet.value(),
    })
}

/// Difference of two angles reduced to `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}
