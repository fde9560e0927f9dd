//! Families of harmonic maps sharing one Jacobian.
//!
//! For a map `f = h + conj(g)` with non-constant dilatation, every member is
//!
//! ```text
//! F = e^{iα}(h + conj(z0) g)/√(1-|z0|²) + conj(e^{-iβ}(g + z0 h)/√(1-|z0|²)) + C,
//! ```
//!
//! which equals `A ∘ R[f]` with the rotation `R[f] = e^{iα}h + e^{iβ}conj(g)` and the
//! real-affine map `A(w) = (w + e^{i(α+β)} conj(z0 w))/√(1-|z0|²) + C`.

use std::f64::consts::TAU;

use rand::Rng;

use crate::analytic::{AnalyticFunction, PowerSeries};
use crate::harmonic::{classify_type, is_sense_preserving, GridSpec, HarmonicMap, JacobianType};
use crate::report::{Check, CheckReport, MaxTracker};
use crate::schwarzian::{default_probes, fit_disk_automorphism, MAX_Z0};
use crate::{Cx, Error, Result};

/// Parameters `(α, β, z0, C)` of a family member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    pub alpha: f64,
    pub beta: f64,
    pub z0: Cx,
    pub c: Cx,
}

impl FamilyParams {
    pub fn new(alpha: f64, beta: f64, z0: Cx, c: Cx) -> Result<Self> {
        let p = FamilyParams { alpha, beta, z0, c };
        p.validate()?;
        Ok(p)
    }

    pub fn zero() -> Self {
        FamilyParams {
            alpha: 0.0,
            beta: 0.0,
            z0: Cx::default(),
            c: Cx::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.alpha.is_finite()
            && self.beta.is_finite()
            && self.z0.is_finite()
            && self.c.is_finite();
        if !finite || self.z0.norm() > MAX_Z0 {
            return Err(Error::InvalidParameter(format!(
                "family parameters need finite values and |z0| <= {MAX_Z0}: {self:?}"
            )));
        }
        Ok(())
    }

    /// α, β uniform in [0, 2π), z0 uniform in the disk of radius 0.8, C uniform in [-1, 1]².
    pub fn sample(rng: &mut impl Rng) -> Self {
        let r = 0.8 * rng.gen::<f64>().sqrt();
        let theta = rng.gen_range(0.0..TAU);
        FamilyParams {
            alpha: rng.gen_range(0.0..TAU),
            beta: rng.gen_range(0.0..TAU),
            z0: Cx::from_polar(r, theta),
            c: Cx::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
        }
    }

    /// Phase `γ = -(α+β)` of the induced automorphism of dilatations.
    pub fn dilatation_phase(&self) -> f64 {
        -(self.alpha + self.beta)
    }

    fn norm_factor(&self) -> f64 {
        1.0 / (1.0 - self.z0.norm_sqr()).sqrt()
    }
}

/// `z ↦ p z + q conj(z) + c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealAffineMap {
    pub p: Cx,
    pub q: Cx,
    pub c: Cx,
}

impl RealAffineMap {
    pub fn apply(&self, w: Cx) -> Cx {
        self.p * w + self.q * w.conj() + self.c
    }

    pub fn jacobian(&self) -> f64 {
        self.p.norm_sqr() - self.q.norm_sqr()
    }
}

/// `e^{iα} h + e^{iβ} conj(g) + c`, stored as `(e^{iα} h, e^{-iβ} g, c)`.
pub fn rotate_parts(f: &HarmonicMap, alpha: f64, beta: f64) -> HarmonicMap {
    HarmonicMap {
        h: f.h.scaled(Cx::from_polar(1.0, alpha)),
        g: f.g.scaled(Cx::from_polar(1.0, -beta)),
        c: f.c,
    }
}

pub fn affine_map(params: &FamilyParams) -> Result<RealAffineMap> {
    params.validate()?;
    let k = params.norm_factor();
    Ok(RealAffineMap {
        p: Cx::new(k, 0.0),
        q: Cx::from_polar(k, params.alpha + params.beta) * params.z0.conj(),
        c: params.c,
    })
}

/// The member `F = H + conj(G) + C` of the family generated by `f`.
pub fn family_member(f: &HarmonicMap, params: &FamilyParams) -> Result<HarmonicMap> {
    params.validate()?;
    let k = params.norm_factor();
    let rot_h = Cx::from_polar(k, params.alpha);
    let rot_g = Cx::from_polar(k, -params.beta);
    let h = AnalyticFunction::linear(vec![
        (rot_h, f.h.clone()),
        (rot_h * params.z0.conj(), f.g.clone()),
    ]);
    let g = AnalyticFunction::linear(vec![(rot_g, f.g.clone()), (rot_g * params.z0, f.h.clone())]);
    Ok(HarmonicMap { h, g, c: params.c })
}

/// [`family_member`] that also confirms the member is sense-preserving on `grid`.
pub fn family_member_checked(
    f: &HarmonicMap,
    params: &FamilyParams,
    grid: &GridSpec,
) -> Result<HarmonicMap> {
    let member = family_member(f, params)?;
    if !is_sense_preserving(&member, grid).all_pass() {
        return Err(Error::SenseReversed);
    }
    Ok(member)
}

/// `e^{-i(α+β)} (ω + z0)/(1 + conj(z0) ω)`.
pub fn member_dilatation_closed_form(omega: Cx, params: &FamilyParams) -> Cx {
    Cx::from_polar(1.0, params.dilatation_phase()) * (omega + params.z0)
        / (1.0 + params.z0.conj() * omega)
}

/// Members of the family with Jacobian `1 - |v|²`, built on the series antiderivative of `v`.
pub fn special_case_family(
    v: &AnalyticFunction,
    params: &FamilyParams,
    n: usize,
) -> Result<HarmonicMap> {
    params.validate()?;
    let v_series = v
        .to_series(n)?
        .with_radius(v.domain_radius().min(crate::analytic::DEFAULT_RADIUS));
    if v_series.is_constant(1e-14) {
        return Err(Error::Precondition("v must be non-constant".into()));
    }
    let big_v = AnalyticFunction::Series(v_series.antiderivative());
    let z = AnalyticFunction::identity();
    let k = params.norm_factor();
    let rot_h = Cx::from_polar(k, params.alpha);
    let rot_g = Cx::from_polar(k, -params.beta);
    let h = AnalyticFunction::linear(vec![
        (rot_h, z.clone()),
        (rot_h * params.z0.conj(), big_v.clone()),
    ]);
    let g = AnalyticFunction::linear(vec![(rot_g * params.z0, z), (rot_g, big_v)]);
    Ok(HarmonicMap { h, g, c: params.c })
}

/// Parameters `(a, b, α, β)` of `e^{iα} h + e^{iβ} a conj(h) + b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Type1Params {
    pub a: Cx,
    pub b: Cx,
    pub alpha: f64,
    pub beta: f64,
}

impl Type1Params {
    pub fn new(a: Cx, b: Cx, alpha: f64, beta: f64) -> Result<Self> {
        if !(a.norm() < 1.0) || !b.is_finite() || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need |a| < 1, got a = {a}"
            )));
        }
        Ok(Type1Params { a, b, alpha, beta })
    }
}

pub fn type1_family_member(h: &AnalyticFunction, p: &Type1Params) -> Result<HarmonicMap> {
    Type1Params::new(p.a, p.b, p.alpha, p.beta)?;
    Ok(HarmonicMap {
        h: h.scaled(Cx::from_polar(1.0, p.alpha)),
        g: h.scaled(Cx::from_polar(1.0, -p.beta) * p.a.conj()),
        c: p.b,
    })
}

/// For a map with constant dilatation ω, returns `a = conj(ω)` so that `f = h + a conj(h) + const`.
pub fn type1_coefficient(f: &HarmonicMap, grid: &GridSpec) -> Result<Cx> {
    if classify_type(f, grid)? != JacobianType::Type1 {
        return Err(Error::Precondition(
            "map has a non-constant dilatation".into(),
        ));
    }
    Ok(f.dilatation(Cx::default())?.conj())
}

/// Tolerances for [`verify_family`].
#[derive(Clone, Copy, Debug)]
pub struct FamilyTolerances {
    pub jacobian: f64,
    pub dilatation: f64,
    pub modulus: f64,
    pub circle: f64,
    pub closure: f64,
}

impl Default for FamilyTolerances {
    fn default() -> Self {
        FamilyTolerances {
            jacobian: 1e-11,
            dilatation: 1e-11,
            modulus: 1e-11,
            circle: 1e-9,
            closure: 1e-8,
        }
    }
}

/// Verifies every member generated by `params_list` against `f` on `grid`.
///
/// Checks: equal Jacobians (relative to `1 + J`), the dilatation law, the two
/// modulus identities for `|H'|` and `|G'|`, sense preservation, a disk-automorphism
/// fit of the member dilatation, closure under taking members of members, and that
/// zero parameters reproduce `f`.
pub fn verify_family(
    f: &HarmonicMap,
    params_list: &[FamilyParams],
    grid: &GridSpec,
    tol: &FamilyTolerances,
) -> Result<CheckReport> {
    if classify_type(f, grid)? != JacobianType::Type2 {
        return Err(Error::Precondition(
            "the equal-Jacobian family construction needs a Type2 Jacobian".into(),
        ));
    }
    let points = grid.points();
    let probes = default_probes();
    let omega_f = f.dilatation_fn();

    let mut jac = MaxTracker::new();
    let mut dil = MaxTracker::new();
    let mut eq_h = MaxTracker::new();
    let mut eq_g = MaxTracker::new();
    let mut circle = MaxTracker::new();
    let mut closure = MaxTracker::new();
    let mut sense_ok = true;
    let mut fit_error: Option<String> = None;

    for (idx, params) in params_list.iter().enumerate() {
        let member = family_member(f, params)?;
        let s2 = 1.0 - params.z0.norm_sqr();
        for &z in &points {
            let (dh, dg) = f.derivatives(z)?;
            let (d_big_h, d_big_g) = member.derivatives(z)?;
            let j_f = dh.norm_sqr() - dg.norm_sqr();
            let j_member = d_big_h.norm_sqr() - d_big_g.norm_sqr();
            jac.update((j_member - j_f).abs() / (1.0 + j_f), z);

            let expected = member_dilatation_closed_form(dg / dh, params);
            dil.update((member.dilatation(z)? - expected).norm(), z);

            let h_rhs = (dh + params.z0.conj() * dg).norm_sqr() / s2;
            eq_h.update((d_big_h.norm_sqr() - h_rhs).abs(), z);
            let g_rhs = (dg + params.z0 * dh).norm() / s2.sqrt();
            eq_g.update((d_big_g.norm() - g_rhs).abs(), z);
        }
        sense_ok &= is_sense_preserving(&member, grid).all_pass();

        let anchor = probes[idx % probes.len()];
        match fit_disk_automorphism(&member.dilatation_fn(), &omega_f, &probes) {
            Ok(fit) => circle.update(fit.circle_residual, anchor),
            Err(e) => {
                circle.update(f64::INFINITY, anchor);
                fit_error.get_or_insert(e.to_string());
            }
        }

        // a member of a member is again a member
        let next = params_list[(idx + 1) % params_list.len()];
        let grand = family_member(&member, &next)?;
        match fit_disk_automorphism(&grand.dilatation_fn(), &omega_f, &probes) {
            Ok(fit) => closure.update(fit.validation_residual.max(fit.circle_residual), anchor),
            Err(e) => {
                closure.update(f64::INFINITY, anchor);
                fit_error.get_or_insert(e.to_string());
            }
        }
    }

    let mut identity = MaxTracker::new();
    let same = family_member(f, &FamilyParams::zero())?;
    for &z in &points {
        let (dh, dg) = f.derivatives(z)?;
        let (sh, sg) = same.derivatives(z)?;
        let diff = (same.eval(z)? - f.eval(z)?).norm() + (sh - dh).norm() + (sg - dg).norm();
        identity.update(diff, z);
    }

    let mut report = CheckReport::new("family");
    report.push(Check::new("family_equal_jacobian", &jac, tol.jacobian).on_grid(grid));
    report.push(Check::new("family_dilatation_law", &dil, tol.dilatation).on_grid(grid));
    report.push(Check::new("family_modulus_h", &eq_h, tol.modulus).on_grid(grid));
    report.push(Check::new("family_modulus_g", &eq_g, tol.modulus).on_grid(grid));
    let mut sense = MaxTracker::new();
    sense.update(if sense_ok { 0.0 } else { 1.0 }, Cx::default());
    report.push(Check::new("family_sense_preserving", &sense, 0.0).on_grid(grid));
    let mut fit_check = Check::new("family_automorphism_fit", &circle, tol.circle);
    let mut closure_check = Check::new("family_closure", &closure, tol.closure);
    if let Some(e) = &fit_error {
        if !fit_check.pass {
            fit_check = fit_check.with_reason(e);
        }
        if !closure_check.pass {
            closure_check = closure_check.with_reason(e);
        }
    }
    report.push(fit_check);
    report.push(closure_check);
    report.push(Check::new("family_identity_member", &identity, 0.0).on_grid(grid));
    Ok(report)
}

/// Type-1 family law: `J = (1 - |a|²)|h'|²` for every `(a, b, α, β)`.
pub fn verify_type1_family(
    h: &AnalyticFunction,
    params_list: &[Type1Params],
    grid: &GridSpec,
    tolerance: f64,
) -> Result<Check> {
    let mut tracker = MaxTracker::new();
    for p in params_list {
        let member = type1_family_member(h, p)?;
        for z in grid.points() {
            let dh = h.eval_derivative(z)?;
            let expected = (1.0 - p.a.norm_sqr()) * dh.norm_sqr();
            tracker.update((member.jacobian(z)? - expected).abs(), z);
        }
    }
    Ok(Check::new("type1_jacobian_law", &tracker, tolerance).on_grid(grid))
}

/// Convenience: the series of a member's analytic parts, for printing.
pub fn member_series(member: &HarmonicMap, n: usize) -> Result<(PowerSeries, PowerSeries)> {
    Ok((member.h.to_series(n)?, member.g.to_series(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn shear() -> HarmonicMap {
        HarmonicMap::from_catalog("shear").unwrap()
    }

    #[test]
    fn rotation_examples() {
        let f = shear();
        let z = Cx::new(0.3, 0.2);
        let same = rotate_parts(&f, 0.0, 0.0);
        assert_eq!(same.eval(z).unwrap(), f.eval(z).unwrap());
        let flipped = rotate_parts(&f, PI, PI);
        assert!((flipped.eval(z).unwrap() + f.eval(z).unwrap()).norm() < 1e-15);
        assert!((flipped.jacobian(z).unwrap() - f.jacobian(z).unwrap()).abs() < 1e-15);
        let only_h = rotate_parts(&f, PI, 0.0);
        assert!((only_h.h.eval(z).unwrap() + z).norm() < 1e-15);
        assert_eq!(only_h.g.eval(z).unwrap(), f.g.eval(z).unwrap());
    }

    #[test]
    fn affine_examples() {
        let a = affine_map(&FamilyParams::zero()).unwrap();
        assert_eq!((a.p, a.q), (Cx::new(1.0, 0.0), Cx::default()));
        let a = affine_map(&FamilyParams::new(0.4, 1.1, Cx::new(0.6, 0.0), Cx::default()).unwrap())
            .unwrap();
        assert!((a.jacobian() - 1.0).abs() < 1e-15);
        assert!(affine_map(&FamilyParams {
            z0: Cx::new(0.99, 0.0),
            ..FamilyParams::zero()
        })
        .is_err());
    }

    #[test]
    fn member_equals_affine_after_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = HarmonicMap::from_catalog("expmap")
            .unwrap()
            .with_constant(Cx::new(0.2, -0.1));
        for _ in 0..10 {
            let p = FamilyParams::sample(&mut rng);
            let member = family_member(&f, &p).unwrap();
            let rotated = rotate_parts(&f, p.alpha, p.beta);
            let a = affine_map(&p).unwrap();
            for z in GridSpec::polar(0.7, 5, 8).unwrap().points() {
                // A is applied to R[f] without f's own constant, which enters A linearly
                let lhs = member.eval(z).unwrap() + a.apply(f.c) - a.c;
                let rhs = a.apply(rotated.eval(z).unwrap());
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn member_examples() {
        let f = shear();
        let p = FamilyParams::new(0.3, -0.7, Cx::new(0.4, 0.2), Cx::default()).unwrap();
        let member = family_member(&f, &p).unwrap();
        let grid = GridSpec::polar(0.7, 10, 10).unwrap();
        for z in grid.points() {
            assert!((member.jacobian(z).unwrap() - f.jacobian(z).unwrap()).abs() < 1e-12);
        }
        let p = FamilyParams::new(PI / 2.0, PI / 2.0, Cx::default(), Cx::default()).unwrap();
        let z = Cx::new(0.25, 0.0);
        let w = family_member(&f, &p).unwrap().dilatation(z).unwrap();
        assert!((w + 0.25).norm() < 1e-15);
        assert!(family_member_checked(&f, &p, &grid).is_ok());
    }

    #[test]
    fn closed_form_examples() {
        let w = Cx::new(0.3, -0.1);
        assert_eq!(member_dilatation_closed_form(w, &FamilyParams::zero()), w);
        let p = FamilyParams {
            z0: Cx::new(0.3, 0.0),
            ..FamilyParams::zero()
        };
        assert_eq!(
            member_dilatation_closed_form(Cx::default(), &p),
            Cx::new(0.3, 0.0)
        );
        let p = FamilyParams {
            alpha: 1.0,
            beta: PI - 1.0,
            ..FamilyParams::zero()
        };
        assert!((member_dilatation_closed_form(Cx::new(0.5, 0.0), &p) + 0.5).norm() < 1e-15);
        assert_eq!(p.dilatation_phase(), -PI);
    }

    #[test]
    fn special_case_examples() {
        let v = AnalyticFunction::identity();
        let base = special_case_family(&v, &FamilyParams::zero(), 64).unwrap();
        assert!((base.jacobian(Cx::new(0.5, 0.0)).unwrap() - 0.75).abs() < 1e-15);
        assert!((base.g.eval(Cx::new(0.5, 0.0)).unwrap() - 0.125).norm() < 1e-15);
        let p = FamilyParams {
            z0: Cx::new(0.4, 0.0),
            ..FamilyParams::zero()
        };
        let other = special_case_family(&v, &p, 64).unwrap();
        for z in GridSpec::polar(0.5, 5, 10).unwrap().points() {
            assert!((other.jacobian(z).unwrap() - base.jacobian(z).unwrap()).abs() < 1e-10);
        }
        assert!(matches!(
            special_case_family(&AnalyticFunction::parse("0.3").unwrap(), &p, 64),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn type1_examples() {
        let z = Cx::new(0.2, -0.3);
        let p = Type1Params::new(Cx::new(0.5, 0.0), Cx::default(), 0.0, 0.0).unwrap();
        let m = type1_family_member(&AnalyticFunction::identity(), &p).unwrap();
        assert!((m.jacobian(z).unwrap() - 0.75).abs() < 1e-15);

        let h = AnalyticFunction::parse("exp(z)-1").unwrap();
        let p = Type1Params::new(Cx::new(0.0, 0.3), Cx::default(), 0.0, 0.0).unwrap();
        let m = type1_family_member(&h, &p).unwrap();
        assert!((m.jacobian(Cx::default()).unwrap() - 0.91).abs() < 1e-15);
        let rotated = type1_family_member(
            &h,
            &Type1Params {
                alpha: 1.2,
                beta: -0.4,
                b: Cx::new(1.0, 1.0),
                ..p
            },
        )
        .unwrap();
        assert!((rotated.jacobian(z).unwrap() - m.jacobian(z).unwrap()).abs() < 1e-14);
        assert!(Type1Params::new(Cx::new(1.0, 0.0), Cx::default(), 0.0, 0.0).is_err());
    }

    #[test]
    fn type1_coefficient_reads_conjugate_dilatation() {
        let f = HarmonicMap::from_catalog("exp-rotor").unwrap();
        let grid = GridSpec::default();
        let a = type1_coefficient(&f, &grid).unwrap();
        assert!((a - Cx::new(0.0, 0.4)).norm() < 1e-15);
        // f itself is the α = β = 0 member
        let m = type1_family_member(&f.h, &Type1Params::new(a, Cx::default(), 0.0, 0.0).unwrap())
            .unwrap();
        let z = Cx::new(0.1, 0.5);
        assert!((m.eval(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn verify_family_on_shear() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut params: Vec<FamilyParams> =
            (0..20).map(|_| FamilyParams::sample(&mut rng)).collect();
        params.push(FamilyParams::zero());
        let grid = GridSpec::default();
        let report = verify_family(&shear(), &params, &grid, &FamilyTolerances::default()).unwrap();
        for c in &report.checks {
            assert!(c.pass, "{c:?}");
        }
        let rotor = HarmonicMap::from_catalog("rotor").unwrap();
        assert!(matches!(
            verify_family(&rotor, &params, &grid, &FamilyTolerances::default()),
            Err(Error::Precondition(_))
        ));
    }
}
