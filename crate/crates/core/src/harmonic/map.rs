use crate::analytic::{catalog_lookup, AnalyticFunction, Jet};
use crate::harmonic::{GridSpec, ScalarField};
use crate::report::{Check, CheckReport, MaxTracker};
use crate::{Cx, Error, Result, EPS_DIV};

/// `f = h + conj(g) + c` with `h`, `g` holomorphic.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicMap {
    pub h: AnalyticFunction,
    pub g: AnalyticFunction,
    pub c: Cx,
}

impl HarmonicMap {
    pub fn new(h: AnalyticFunction, g: AnalyticFunction) -> Self {
        HarmonicMap {
            h,
            g,
            c: Cx::default(),
        }
    }

    pub fn with_constant(mut self, c: Cx) -> Self {
        self.c = c;
        self
    }

    pub fn from_catalog(name: &str) -> Result<Self> {
        let (h, g) = catalog_lookup(name)?;
        Ok(Self::new(h, g))
    }

    /// Accepts `"<h-expr>;<g-expr>"` or a catalog name.
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec.split_once(';') {
            Some((h, g)) => Ok(Self::new(
                AnalyticFunction::parse(h)?,
                AnalyticFunction::parse(g)?,
            )),
            None => Self::from_catalog(spec.trim()),
        }
    }

    /// Radius inside which both parts can be evaluated.
    pub fn domain_radius(&self) -> f64 {
        self.h.domain_radius().min(self.g.domain_radius())
    }

    pub fn eval(&self, z: Cx) -> Result<Cx> {
        Ok(self.h.eval(z)? + self.g.eval(z)?.conj() + self.c)
    }

    /// `(h'(z), g'(z))`
    pub fn derivatives(&self, z: Cx) -> Result<(Cx, Cx)> {
        Ok((self.h.eval_derivative(z)?, self.g.eval_derivative(z)?))
    }

    /// `|h'|² - |g'|²`
    pub fn jacobian(&self, z: Cx) -> Result<f64> {
        let (dh, dg) = self.derivatives(z)?;
        Ok(dh.norm_sqr() - dg.norm_sqr())
    }

    /// `ω = g'/h'`
    pub fn dilatation(&self, z: Cx) -> Result<Cx> {
        let (dh, dg) = self.derivatives(z)?;
        if dh.norm() <= EPS_DIV {
            return Err(Error::DivisionNearZero(dh.norm()));
        }
        crate::ensure_finite(dg / dh)
    }

    pub fn dilatation_fn(&self) -> AnalyticFunction {
        AnalyticFunction::quotient(&self.g.derivative(), &self.h.derivative())
    }

    /// Jet of `ω` at `z` up to `order`.
    pub fn dilatation_jet(&self, z: Cx, order: usize) -> Result<Jet> {
        let dh = self.h.eval_jet(z, order + 1)?.derivative();
        let dg = self.g.eval_jet(z, order + 1)?.derivative();
        dg.div(&dh)
    }

    pub fn jacobian_field(&self) -> JacobianField<'_> {
        JacobianField {
            map: self,
            log: false,
        }
    }

    /// `ln J` as a black-box field; non-positive `J` is an error.
    pub fn log_jacobian_field(&self) -> JacobianField<'_> {
        JacobianField {
            map: self,
            log: true,
        }
    }
}

pub struct JacobianField<'a> {
    map: &'a HarmonicMap,
    log: bool,
}

impl ScalarField for JacobianField<'_> {
    fn sample(&self, z: Cx) -> Result<f64> {
        let j = self.map.jacobian(z)?;
        if !self.log {
            return Ok(j);
        }
        if j <= 0.0 {
            return Err(Error::Precondition(format!("Jacobian {j:e} <= 0 at {z}")));
        }
        Ok(j.ln())
    }

    fn domain_radius(&self) -> f64 {
        self.map.domain_radius()
    }
}

/// Largest f64 strictly below 1.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Levy criterion on a grid: `min J > 0` and `max |ω| < 1`, plus their agreement.
///
/// Evaluation failures are recorded as failed samples rather than errors.
pub fn is_sense_preserving(f: &HarmonicMap, grid: &GridSpec) -> CheckReport {
    let mut neg_jac = MaxTracker::new();
    let mut dil = MaxTracker::new();
    let mut reason = None;
    for z in grid.points() {
        match f.jacobian(z) {
            Ok(j) => neg_jac.update(-j, z),
            Err(e) => {
                neg_jac.update(f64::INFINITY, z);
                reason.get_or_insert_with(|| e.to_string());
            }
        }
        match f.dilatation(z) {
            Ok(w) => dil.update(w.norm(), z),
            Err(e) => {
                dil.update(f64::INFINITY, z);
                reason.get_or_insert_with(|| e.to_string());
            }
        }
    }
    let jac_check =
        Check::new("levy_jacobian_positive", &neg_jac, -f64::MIN_POSITIVE).on_grid(grid);
    let dil_check = Check::new("levy_dilatation_below_one", &dil, BELOW_ONE).on_grid(grid);
    let mut agree = MaxTracker::new();
    let disagreement = if jac_check.pass == dil_check.pass {
        0.0
    } else {
        1.0
    };
    agree.update(disagreement, Cx::from(jac_check.worst_point));
    let agree_check = Check::new("levy_criteria_agree", &agree, 0.0).on_grid(grid);

    let mut report = CheckReport::new("sense_preserving");
    for mut check in [jac_check, dil_check, agree_check] {
        if !check.pass {
            if let Some(r) = &reason {
                check = check.with_reason(r);
            }
        }
        report.push(check);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(h: &str, g: &str) -> HarmonicMap {
        HarmonicMap::from_spec(&format!("{h};{g}")).unwrap()
    }

    #[test]
    fn jacobian_examples() {
        let z = Cx::new(0.5, 0.0);
        assert_eq!(map("z", "0").jacobian(Cx::new(0.2, 0.3)).unwrap(), 1.0);
        assert_eq!(
            map("z", "0.5*z").jacobian(Cx::new(-0.1, 0.6)).unwrap(),
            0.75
        );
        assert_eq!(map("z", "z^2/2").jacobian(z).unwrap(), 0.75);
    }

    #[test]
    fn dilatation_examples() {
        let z = Cx::new(0.5, 0.0);
        assert_eq!(map("z", "0").dilatation(z).unwrap(), Cx::default());
        assert_eq!(map("z", "z^2/2").dilatation(z).unwrap(), Cx::new(0.5, 0.0));
        assert_eq!(
            map("z", "0.5*z").dilatation(Cx::new(0.1, 0.1)).unwrap(),
            Cx::new(0.5, 0.0)
        );
        assert!(matches!(
            map("z^2", "z").dilatation(Cx::default()),
            Err(Error::DivisionNearZero(_))
        ));
    }

    #[test]
    fn levy_examples() {
        let grid = GridSpec::default();
        let r = is_sense_preserving(&map("z", "0.5*z"), &grid);
        assert!(r.all_pass());
        assert_eq!(r.get("levy_jacobian_positive").unwrap().max_residual, -0.75);

        let r = is_sense_preserving(&map("z", "2*z"), &grid);
        assert!(!r.get("levy_jacobian_positive").unwrap().pass);
        assert!(!r.get("levy_dilatation_below_one").unwrap().pass);
        assert!(r.get("levy_criteria_agree").unwrap().pass);
        assert_eq!(r.get("levy_jacobian_positive").unwrap().max_residual, 3.0);

        let r = is_sense_preserving(&map("z", "z^2/2"), &grid);
        assert!(r.all_pass());
        let max_omega = r.get("levy_dilatation_below_one").unwrap().max_residual;
        assert!((max_omega - 0.7).abs() < 1e-15);
    }

    #[test]
    fn jacobian_equals_real_determinant() {
        // det of the real 2x2 Jacobian from f_x = h' + conj(g'), f_y = i(h' - conj(g'))
        let f = HarmonicMap::from_catalog("expmap").unwrap();
        for z in GridSpec::polar(0.7, 5, 8).unwrap().points() {
            let (dh, dg) = f.derivatives(z).unwrap();
            let fx = dh + dg.conj();
            let fy = Cx::i() * (dh - dg.conj());
            let det = fx.re * fy.im - fx.im * fy.re;
            assert!((det - f.jacobian(z).unwrap()).abs() <= 1e-14);
        }
    }
}
