//! Pointwise verification of the Jacobian PDE, the type dichotomy and harmonicity of `R`.

use std::fmt;

use crate::harmonic::{wirtinger_fd, GridSpec, HarmonicMap, Wirtinger};
use crate::report::{Check, MaxTracker};
use crate::{Cx, Error, Result, EPS_DIV};

/// Threshold on `max |ω'|` below which the dilatation counts as constant.
pub const TOL_CONST: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobianType {
    /// `ln J` harmonic, `ω` constant.
    Type1,
    /// `ω` nonconstant; `R` harmonic and `Q` holomorphic off the zeros of `ω'`.
    Type2,
}

impl fmt::Display for JacobianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JacobianType::Type1 => write!(f, "Type1"),
            JacobianType::Type2 => write!(f, "Type2"),
        }
    }
}

/// `|ω'|² / (1 - |ω|²)²` from jets.
pub fn jacobian_pde_rhs(f: &HarmonicMap, z: Cx) -> Result<f64> {
    let w = f.dilatation_jet(z, 1)?;
    let s = 1.0 - w.value().norm_sqr();
    if s <= 0.0 {
        return Err(Error::Precondition(format!("|ω| >= 1 at {z}")));
    }
    Ok(w.coeff(1).norm_sqr() / (s * s))
}

/// `-(ln J)_zz̄` straight from `J = |h'|² - |g'|²`, without forming `ω`:
/// `|J_z|²/J² - J_zz̄/J` with `J_z = h'' conj(h') - g'' conj(g')`, `J_zz̄ = |h''|² - |g''|²`.
pub fn neg_log_jacobian_dzzbar(f: &HarmonicMap, z: Cx) -> Result<f64> {
    let h = f.h.eval_jet(z, 2)?;
    let g = f.g.eval_jet(z, 2)?;
    let (dh, ddh) = (h.coeff(1), h.derivative_value(2));
    let (dg, ddg) = (g.coeff(1), g.derivative_value(2));
    let j = dh.norm_sqr() - dg.norm_sqr();
    if j <= 0.0 {
        return Err(Error::Precondition(format!("Jacobian {j:e} <= 0 at {z}")));
    }
    let jz = ddh * dh.conj() - ddg * dg.conj();
    let jzzbar = ddh.norm_sqr() - ddg.norm_sqr();
    Ok(jz.norm_sqr() / (j * j) - jzzbar / j)
}

/// Finite-difference left side `-(ln J)_zz̄` against the jet right side.
///
/// Residual per point: `|LHS - RHS| / (1 + |RHS|)`.
pub fn verify_jacobian_pde(
    f: &HarmonicMap,
    grid: &GridSpec,
    step: f64,
    tolerance: f64,
) -> Result<Check> {
    let log_j = f.log_jacobian_field();
    let mut tracker = MaxTracker::new();
    for z in grid.points() {
        let lhs = -wirtinger_fd(&log_j, z, step, Wirtinger::Dzzbar)?.re;
        let rhs = jacobian_pde_rhs(f, z)?;
        tracker.update((lhs - rhs).abs() / (1.0 + rhs.abs()), z);
    }
    Ok(Check::new("jacobian_pde_fd", &tracker, tolerance)
        .on_grid(grid)
        .with_step(step))
}

/// Analytic left side (quotient rule on `J`) against the jet right side.
pub fn verify_jacobian_pde_analytic(
    f: &HarmonicMap,
    grid: &GridSpec,
    tolerance: f64,
) -> Result<Check> {
    let mut tracker = MaxTracker::new();
    for z in grid.points() {
        let lhs = neg_log_jacobian_dzzbar(f, z)?;
        let rhs = jacobian_pde_rhs(f, z)?;
        tracker.update((lhs - rhs).abs() / (1.0 + rhs.abs()), z);
    }
    Ok(Check::new("jacobian_pde_analytic", &tracker, tolerance).on_grid(grid))
}

/// Type1 iff `max |ω'| <= TOL_CONST` on the grid.
pub fn classify_type(f: &HarmonicMap, grid: &GridSpec) -> Result<JacobianType> {
    grid.validate()?;
    let mut max = 0.0f64;
    for z in grid.points() {
        max = max.max(f.dilatation_jet(z, 1)?.coeff(1).norm());
    }
    Ok(if max <= TOL_CONST {
        JacobianType::Type1
    } else {
        JacobianType::Type2
    })
}

/// `R = ln(J² |ω'|² / (1 - |ω|²)²)`, i.e. `ln(-J² (ln J)_zz̄)` with the mixed derivative
/// replaced by the right side of the PDE.
pub fn r_function(f: &HarmonicMap, z: Cx) -> Result<f64> {
    let j = f.jacobian(z)?;
    let rhs = jacobian_pde_rhs(f, z)?;
    let v = j * j * rhs;
    if !(v > 0.0) {
        return Err(Error::DegenerateAtPoint(z));
    }
    Ok(v.ln())
}

/// Checks `|Δ R| <= tolerance` at every grid point.
///
/// The Laplacian is the Richardson combination `(4 L_h - L_2h)/3` of five-point
/// stencils, which keeps the truncation error small next to excluded zeros of `ω'`.
pub fn verify_r_harmonic(
    f: &HarmonicMap,
    grid: &GridSpec,
    step: f64,
    tolerance: f64,
) -> Result<Check> {
    if classify_type(f, grid)? == JacobianType::Type1 {
        return Err(Error::Precondition(
            "R is only defined for Type2 Jacobians".into(),
        ));
    }
    let field = |z: Cx| r_function(f, z);
    let field = crate::harmonic::Restricted {
        field,
        radius: f.domain_radius(),
    };
    let mut tracker = MaxTracker::new();
    for z in grid.points() {
        if f.dilatation_jet(z, 1)?.coeff(1).norm() < EPS_DIV {
            return Err(Error::DegenerateAtPoint(z));
        }
        let fine = wirtinger_fd(&field, z, step, Wirtinger::Dzzbar)?.re;
        let coarse = wirtinger_fd(&field, z, 2.0 * step, Wirtinger::Dzzbar)?.re;
        let laplacian = 4.0 * (4.0 * fine - coarse) / 3.0;
        tracker.update(laplacian.abs(), z);
    }
    Ok(Check::new("r_harmonic", &tracker, tolerance)
        .on_grid(grid)
        .with_step(step))
}

/// Zeros of `ω'` with `|z| <= radius`, found by Newton's method from a polar seed set.
pub fn dilatation_critical_points(f: &HarmonicMap, radius: f64) -> Vec<Cx> {
    let mut seeds = vec![Cx::default()];
    for k in 1..=6 {
        let r = radius * k as f64 / 6.0;
        for j in 0..12 {
            seeds.push(Cx::from_polar(r, std::f64::consts::TAU * j as f64 / 12.0));
        }
    }
    let mut roots: Vec<Cx> = Vec::new();
    for seed in seeds {
        let mut z = seed;
        let mut converged = false;
        for _ in 0..60 {
            let Ok(w) = f.dilatation_jet(z, 2) else { break };
            let (d1, d2) = (w.coeff(1), w.derivative_value(2));
            if d1.norm() < 1e-13 {
                converged = true;
                break;
            }
            if d2.norm() < EPS_DIV {
                break;
            }
            let next = z - d1 / d2;
            if !next.is_finite() || next.norm() > radius + 0.5 || next.norm() >= f.domain_radius() {
                break;
            }
            z = next;
        }
        if converged && z.norm() <= radius && roots.iter().all(|r| (r - z).norm() > 1e-6) {
            roots.push(z);
        }
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(h: &str, g: &str) -> HarmonicMap {
        HarmonicMap::from_spec(&format!("{h};{g}")).unwrap()
    }

    #[test]
    fn pde_sides_for_shear() {
        let f = map("z", "z^2/2");
        let z = Cx::new(0.5, 0.0);
        let expected = 16.0 / 9.0;
        assert!((jacobian_pde_rhs(&f, z).unwrap() - expected).abs() < 1e-14);
        assert!((neg_log_jacobian_dzzbar(&f, z).unwrap() - expected).abs() < 1e-14);
        let lhs = -wirtinger_fd(&f.log_jacobian_field(), z, 1e-3, Wirtinger::Dzzbar)
            .unwrap()
            .re;
        assert!((lhs - expected).abs() < 1e-5);
    }

    #[test]
    fn pde_vanishes_for_constant_dilatation() {
        let f = map("z", "0.5*z");
        let grid = GridSpec::polar(0.6, 5, 8).unwrap();
        let check = verify_jacobian_pde(&f, &grid, 1e-3, 1e-12).unwrap();
        assert!(check.pass, "{check:?}");
        assert_eq!(check.max_residual, 0.0);
    }

    #[test]
    fn pde_for_expmap() {
        let f = HarmonicMap::from_catalog("expmap").unwrap();
        let grid = GridSpec::polar(0.6, 21, 48).unwrap();
        let check = verify_jacobian_pde(&f, &grid, 1e-3, 1e-5).unwrap();
        assert!(check.pass, "{check:?}");
        let check = verify_jacobian_pde_analytic(&f, &grid, 1e-10).unwrap();
        assert!(check.pass, "{check:?}");
    }

    #[test]
    fn classification() {
        let grid = GridSpec::default();
        assert_eq!(
            classify_type(&map("z", "0.5*z"), &grid).unwrap(),
            JacobianType::Type1
        );
        assert_eq!(
            classify_type(&map("z", "z^2/2"), &grid).unwrap(),
            JacobianType::Type2
        );
        assert_eq!(
            classify_type(&map("z", "0"), &grid).unwrap(),
            JacobianType::Type1
        );
    }

    #[test]
    fn r_is_zero_for_shear() {
        let f = map("z", "z^2/2");
        for z in GridSpec::polar(0.7, 4, 8).unwrap().points() {
            assert!(r_function(&f, z).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn r_harmonic_for_exp_dilatation() {
        let f = HarmonicMap::from_catalog("exp-dil").unwrap();
        let grid = GridSpec::polar(0.6, 21, 48).unwrap();
        let check = verify_r_harmonic(&f, &grid, 1e-3, 1e-4).unwrap();
        assert!(check.pass, "{check:?}");
    }

    #[test]
    fn r_check_rejects_unexcluded_critical_point() {
        // ω = 0.9 (z - 0.35)^2 has ω' = 0 at the grid point 0.35
        let f = map("z", "0.3*(z-0.35)^3");
        let grid = GridSpec::polar(0.7, 2, 4).unwrap();
        assert!(matches!(
            verify_r_harmonic(&f, &grid, 1e-3, 1e-4),
            Err(Error::DegenerateAtPoint(_))
        ));
        assert!(matches!(
            verify_r_harmonic(&map("z", "0.5*z"), &grid, 1e-3, 1e-4),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn finds_critical_points() {
        let f = HarmonicMap::from_catalog("square").unwrap();
        let roots = dilatation_critical_points(&f, 0.7);
        assert_eq!(roots.len(), 1);
        assert!(roots[0].norm() < 1e-10);
        let f = map("z", "0.3*(z-0.35)^3");
        let roots = dilatation_critical_points(&f, 0.7);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - Cx::new(0.35, 0.0)).norm() < 1e-10);
        assert!(
            dilatation_critical_points(&HarmonicMap::from_catalog("shear").unwrap(), 0.7)
                .is_empty()
        );
    }
}
