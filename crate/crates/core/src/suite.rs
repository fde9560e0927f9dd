//! Verification suites, reconstruction reports and CSV export.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::AnalyticFunction;
use crate::family::{
    type1_coefficient, type1_family_member, verify_family, verify_type1_family, FamilyParams,
    FamilyTolerances, Type1Params,
};
use crate::harmonic::{
    classify_type, dilatation_critical_points, is_sense_preserving, verify_jacobian_pde,
    verify_jacobian_pde_analytic, verify_r_harmonic, GridSpec, HarmonicMap, JacobianType,
};
use crate::report::{Check, CheckReport, MaxTracker};
use crate::schwarzian::{
    angle_distance, compute_q_analytic, compute_q_blackbox, default_probes,
    expected_automorphism_params, fit_disk_automorphism, normalize_to_metric,
    q_series_from_dilatation, schwarzian, solve_schwarzian_series, DiskAutomorphismParams, Mobius,
    OriginMetric, FIT_TOLERANCE,
};
use crate::{Cx, Error, Result, EPS_DIV};

pub const DEFAULT_SEED: u64 = 42;

/// Radius of the disks around zeros of `ω'` removed from the `R` and `Q` grids.
pub const CRITICAL_EXCLUSION: f64 = 0.1;

/// Series order used for `Q` and the reconstructed dilatation.
pub const RECONSTRUCT_ORDER: usize = 64;

/// Pass thresholds used by [`run_check_suite`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Analytic-vs-analytic comparisons.
    pub analytic: f64,
    /// Finite-difference checks.
    pub fd: f64,
    /// Black-box `Q`, relative.
    pub blackbox: f64,
    /// Family identities.
    pub family: f64,
    /// `|Q - 2S[ω]|` and `S[M∘ω] - S[ω]`.
    pub schwarzian: f64,
    /// `|S[M]|` for Möbius `M`.
    pub mobius: f64,
    /// Type-1 Jacobian law.
    pub type1: f64,
    /// Recovered automorphism parameters.
    pub reconstruct: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            analytic: 1e-10,
            fd: 1e-4,
            blackbox: 2e-2,
            family: 1e-11,
            schwarzian: 1e-9,
            mobius: 1e-12,
            type1: 1e-12,
            reconstruct: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// `"<h-expr>;<g-expr>"` or a catalog name.
    pub map: String,
    pub r_max: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub step: f64,
    pub inner_step: f64,
    pub outer_step: f64,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub params_count: usize,
    /// Also estimate `Q` from Jacobian samples during reconstruction.
    pub blackbox: bool,
}

impl SuiteConfig {
    pub fn new(map: impl Into<String>) -> Self {
        SuiteConfig {
            map: map.into(),
            r_max: 0.7,
            n_radial: 21,
            n_angular: 48,
            step: 1e-3,
            inner_step: 1e-3,
            outer_step: 1e-2,
            tolerances: Tolerances::default(),
            seed: DEFAULT_SEED,
            params_count: 20,
            blackbox: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        let positive = [
            ("rmax", self.r_max),
            ("step", self.step),
            ("inner-step", self.inner_step),
            ("outer-step", self.outer_step),
            ("tol-analytic", t.analytic),
            ("tol-fd", t.fd),
            ("tol-blackbox", t.blackbox),
            ("tol-family", t.family),
            ("tol-schwarzian", t.schwarzian),
            ("tol-mobius", t.mobius),
            ("tol-type1", t.type1),
            ("tol-reconstruct", t.reconstruct),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n_radial == 0 || self.n_angular == 0 || self.params_count == 0 {
            return Err(Error::Config(
                "grid sizes and params count must be positive".into(),
            ));
        }
        self.grid().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::polar(self.r_max, self.n_radial, self.n_angular)
    }

    pub fn build_map(&self) -> Result<HarmonicMap> {
        HarmonicMap::from_spec(&self.map)
            .map_err(|e| Error::Config(format!("map {:?}: {e}", self.map)))
    }
}

/// A finished suite: the report plus the detected type (absent when the gate failed).
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub report: CheckReport,
    pub map_type: Option<JacobianType>,
}

fn guarded(name: &str, tolerance: f64, result: Result<Check>) -> Check {
    result.unwrap_or_else(|e| Check::failed(name, tolerance, e))
}

/// Runs every check that applies to the configured map.
///
/// The sense-preserving gate runs first; if it fails the report stops there.
/// Domain errors inside a check become failed checks with a reason.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    cfg.validate()?;
    let f = cfg.build_map()?;
    let grid = cfg.grid()?;
    let tol = cfg.tolerances;
    let mut report = CheckReport::new(format!("check:{}", cfg.map));

    let gate = is_sense_preserving(&f, &grid);
    let gate_ok = gate.all_pass();
    report.extend(gate);
    if !gate_ok {
        return Ok(SuiteOutcome {
            report,
            map_type: None,
        });
    }

    let map_type = match classify_type(&f, &grid) {
        Ok(t) => t,
        Err(e) => {
            report.push(Check::failed("classify", 0.0, e));
            return Ok(SuiteOutcome {
                report,
                map_type: None,
            });
        }
    };

    report.push(guarded(
        "jacobian_pde_fd",
        tol.fd,
        verify_jacobian_pde(&f, &grid, cfg.step, tol.fd),
    ));
    report.push(guarded(
        "jacobian_pde_analytic",
        tol.analytic,
        verify_jacobian_pde_analytic(&f, &grid, tol.analytic),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match map_type {
        JacobianType::Type1 => type1_checks(&f, &grid, cfg, &mut rng, &mut report),
        JacobianType::Type2 => type2_checks(&f, &grid, cfg, &mut rng, &mut report),
    }
    Ok(SuiteOutcome {
        report,
        map_type: Some(map_type),
    })
}

pub fn run_check_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    Ok(run_suite(cfg)?.report)
}

fn type1_checks(
    f: &HarmonicMap,
    grid: &GridSpec,
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
    report: &mut CheckReport,
) {
    let tol = cfg.tolerances;
    let params: Vec<Type1Params> = (0..cfg.params_count).map(|_| sample_type1(rng)).collect();
    report.push(guarded(
        "type1_jacobian_law",
        tol.type1,
        verify_type1_family(&f.h, &params, grid, tol.type1),
    ));

    // members built with f's own coefficient share f's Jacobian
    let own = (|| -> Result<Check> {
        let a = type1_coefficient(f, grid)?;
        let mut tracker = MaxTracker::new();
        for p in &params {
            let member = type1_family_member(&f.h, &Type1Params { a, ..*p })?;
            for z in grid.points() {
                let j_f = f.jacobian(z)?;
                tracker.update((member.jacobian(z)? - j_f).abs() / (1.0 + j_f), z);
            }
        }
        Ok(Check::new("type1_equal_jacobian", &tracker, tol.family).on_grid(grid))
    })();
    report.push(guarded("type1_equal_jacobian", tol.family, own));
}

fn sample_type1(rng: &mut impl Rng) -> Type1Params {
    let r = 0.9 * rng.gen::<f64>().sqrt();
    Type1Params {
        a: Cx::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU)),
        b: Cx::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
        alpha: rng.gen_range(0.0..std::f64::consts::TAU),
        beta: rng.gen_range(0.0..std::f64::consts::TAU),
    }
}

/// Möbius map with entries in the unit square and `d` near 3, so `c w + d` stays away
/// from zero for `|w| <= 1.4`.
pub fn sample_mobius(rng: &mut impl Rng) -> Mobius {
    loop {
        let mut unit = || Cx::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let (a, b, c) = (unit(), unit(), unit());
        let d = Cx::new(3.0, 0.0) + 0.5 * unit();
        if let Ok(m) = Mobius::new(a, b, c, d) {
            if m.det().norm() > 0.1 {
                return m;
            }
        }
    }
}

fn type2_checks(
    f: &HarmonicMap,
    grid: &GridSpec,
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
    report: &mut CheckReport,
) {
    let tol = cfg.tolerances;
    let critical = dilatation_critical_points(f, cfg.r_max);
    let off_z = match grid.clone().excluding(critical.clone(), CRITICAL_EXCLUSION) {
        Ok(g) => g,
        Err(e) => {
            report.push(Check::failed("r_harmonic", tol.fd, e));
            return;
        }
    };
    let g = &off_z;

    report.push(guarded(
        "r_harmonic",
        tol.fd,
        verify_r_harmonic(f, g, cfg.step, tol.fd),
    ));

    let omega = f.dilatation_fn();
    let q_check = (|| -> Result<Check> {
        let mut tracker = MaxTracker::new();
        for z in g.points() {
            let q = compute_q_analytic(&omega, z)?;
            tracker.update((q - 2.0 * schwarzian(&omega, z)?).norm(), z);
        }
        Ok(Check::new("q_cancellation", &tracker, tol.schwarzian).on_grid(g))
    })();
    report.push(guarded("q_cancellation", tol.schwarzian, q_check));

    let mobius: Vec<Mobius> = (0..10).map(|_| sample_mobius(rng)).collect();
    let inv_check =
        schwarzian_invariance(&omega, &mobius, &g.points()).map(|(invariance, flat)| {
            (
                Check::new("schwarzian_invariance", &invariance, tol.schwarzian).on_grid(g),
                Check::new("schwarzian_mobius_zero", &flat, tol.mobius).on_grid(g),
            )
        });
    match inv_check {
        Ok((a, b)) => {
            report.push(a);
            report.push(b);
        }
        Err(e) => {
            report.push(Check::failed("schwarzian_invariance", tol.schwarzian, &e));
            report.push(Check::failed("schwarzian_mobius_zero", tol.mobius, &e));
        }
    }

    let params: Vec<FamilyParams> = (0..cfg.params_count)
        .map(|_| FamilyParams::sample(rng))
        .collect();
    let family_tol = FamilyTolerances {
        jacobian: tol.family,
        dilatation: tol.family,
        modulus: tol.family,
        ..FamilyTolerances::default()
    };
    match verify_family(f, &params, grid, &family_tol) {
        Ok(r) => report.extend(r),
        Err(e) => report.push(Check::failed("family", tol.family, e)),
    }

    let origin_regular = f
        .dilatation_jet(Cx::default(), 1)
        .map(|w| w.coeff(1).norm() > EPS_DIV)
        .unwrap_or(false);
    if origin_regular {
        match reconstruct(f, cfg) {
            Ok(outcome) => report.extend(outcome.report),
            Err(e) => report.push(Check::failed("reconstruct_fit", FIT_TOLERANCE, e)),
        }
    }

    report.push(blackbox_q_check(f, &omega, &critical, cfg));
}

/// Max `|S[M∘ω] - S[ω]|` and max `|S[M]|` over the given points.
pub fn schwarzian_invariance(
    omega: &AnalyticFunction,
    maps: &[Mobius],
    points: &[Cx],
) -> Result<(MaxTracker, MaxTracker)> {
    let mut invariance = MaxTracker::new();
    let mut flat = MaxTracker::new();
    for m in maps {
        let composed = omega.post_compose(m.to_expr());
        let moebius = AnalyticFunction::identity().post_compose(m.to_expr());
        for &z in points {
            invariance.update(
                (schwarzian(&composed, z)? - schwarzian(omega, z)?).norm(),
                z,
            );
            flat.update(schwarzian(&moebius, z)?.norm(), z);
        }
    }
    Ok((invariance, flat))
}

/// Four interior points at radius 0.3 used for the black-box `Q` comparison.
pub fn blackbox_probes() -> Vec<Cx> {
    (0..4)
        .map(|k| Cx::from_polar(0.3, FRAC_PI_4 + FRAC_PI_2 * k as f64))
        .collect()
}

/// Relative error of black-box `Q` against `2S[ω]`, absolute where `|2S[ω]| < 0.1`.
pub fn blackbox_q_residual(estimate: Cx, exact: Cx) -> f64 {
    let scale = if exact.norm() >= 0.1 {
        exact.norm()
    } else {
        1.0
    };
    (estimate - exact).norm() / scale
}

fn blackbox_q_check(
    f: &HarmonicMap,
    omega: &AnalyticFunction,
    critical: &[Cx],
    cfg: &SuiteConfig,
) -> Check {
    let tol = cfg.tolerances.blackbox;
    let mut tracker = MaxTracker::new();
    let field = f.jacobian_field();
    for z in blackbox_probes() {
        if critical.iter().any(|c| (z - c).norm() < CRITICAL_EXCLUSION) {
            continue;
        }
        let result = compute_q_blackbox(&field, z, cfg.inner_step, cfg.outer_step)
            .and_then(|q| Ok(blackbox_q_residual(q, 2.0 * schwarzian(omega, z)?)));
        match result {
            Ok(r) => tracker.update(r, z),
            Err(e) => return Check::failed("q_blackbox", tol, e),
        }
    }
    Check::new("q_blackbox", &tracker, tol).with_step(cfg.inner_step)
}

/// Recovered automorphism and the checks that back it.
#[derive(Clone, Debug)]
pub struct ReconstructOutcome {
    pub report: CheckReport,
    /// `(γ, z0)` of the fitted `T` with `ω = T ∘ ω_can`.
    pub recovered: Option<DiskAutomorphismParams>,
    /// `(γ, z0)` read off `ω` directly.
    pub expected: DiskAutomorphismParams,
}

fn reconstruct(f: &HarmonicMap, cfg: &SuiteConfig) -> Result<ReconstructOutcome> {
    let tol = cfg.tolerances;
    let omega = f.dilatation_fn();
    let q = q_series_from_dilatation(&omega, RECONSTRUCT_ORDER)?;
    let rec = solve_schwarzian_series(&q, RECONSTRUCT_ORDER)?;
    let canonical = normalize_to_metric(&rec, OriginMetric::from_map(f)?);
    let expected = expected_automorphism_params(&omega)?;
    let probes = default_probes();
    let mut report = CheckReport::new(format!("reconstruct:{}", cfg.map));

    let mut recovered = None;
    match fit_disk_automorphism(&omega, &canonical, &probes) {
        Ok(fit) => {
            let anchor = probes[3];
            let mut validation = MaxTracker::new();
            validation.update(fit.validation_residual, anchor);
            report.push(Check::new("reconstruct_fit", &validation, FIT_TOLERANCE));
            let mut circle = MaxTracker::new();
            circle.update(fit.circle_residual, anchor);
            report.push(Check::new(
                "reconstruct_disk_automorphism",
                &circle,
                crate::schwarzian::CIRCLE_TOLERANCE,
            ));
            match DiskAutomorphismParams::from_mobius(&fit.mobius) {
                Ok(p) => {
                    let mut dev = MaxTracker::new();
                    dev.update(
                        angle_distance(p.gamma, expected.gamma).max((p.z0 - expected.z0).norm()),
                        Cx::default(),
                    );
                    report.push(Check::new("reconstruct_params", &dev, tol.reconstruct));
                    recovered = Some(p);
                }
                Err(e) => report.push(Check::failed("reconstruct_params", tol.reconstruct, e)),
            }
        }
        Err(e) => {
            report.push(Check::failed("reconstruct_fit", FIT_TOLERANCE, &e));
            report.push(Check::failed(
                "reconstruct_disk_automorphism",
                crate::schwarzian::CIRCLE_TOLERANCE,
                &e,
            ));
            report.push(Check::failed("reconstruct_params", tol.reconstruct, e));
        }
    }

    if cfg.blackbox {
        let field = f.jacobian_field();
        let mut tracker = MaxTracker::new();
        let mut failure = None;
        for z in blackbox_probes() {
            let result = compute_q_blackbox(&field, z, cfg.inner_step, cfg.outer_step)
                .and_then(|qb| Ok(blackbox_q_residual(qb, q.eval(z)?)));
            match result {
                Ok(r) => tracker.update(r, z),
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        report.push(match failure {
            Some(e) => Check::failed("reconstruct_blackbox_q", tol.blackbox, e),
            None => Check::new("reconstruct_blackbox_q", &tracker, tol.blackbox)
                .with_step(cfg.inner_step),
        });
    }
    Ok(ReconstructOutcome {
        report,
        recovered,
        expected,
    })
}

/// Recovers `ω` from `Q = 2S[ω]` and fits it to the true dilatation.
///
/// Needs a Type2 map with `ω'(0) ≠ 0`.
pub fn reconstruct_command(cfg: &SuiteConfig) -> Result<ReconstructOutcome> {
    cfg.validate()?;
    let f = cfg.build_map()?;
    if classify_type(&f, &cfg.grid()?)? != JacobianType::Type2 {
        return Err(Error::Precondition(
            "reconstruction needs a Type2 Jacobian".into(),
        ));
    }
    reconstruct(&f, cfg)
}

pub const CSV_HEADER: &str = "x,y,re_f,im_f,jacobian,re_omega,im_omega";

/// Writes one CSV row per grid point in enumeration order; numbers use shortest
/// round-trip scientific notation.
pub fn write_grid_csv(f: &HarmonicMap, grid: &GridSpec, out: &mut impl Write) -> Result<()> {
    grid.validate()?;
    writeln!(out, "{CSV_HEADER}")?;
    for z in grid.points() {
        let w = f.eval(z)?;
        let j = f.jacobian(z)?;
        let omega = f.dilatation(z)?;
        writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            z.re, z.im, w.re, w.im, j, omega.re, omega.im
        )?;
    }
    Ok(())
}

pub fn emit_grid_csv(f: &HarmonicMap, grid: &GridSpec, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_grid_csv(f, grid, &mut out)?;
    out.flush()?;
    Ok(())
}
