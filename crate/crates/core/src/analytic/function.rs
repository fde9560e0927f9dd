use crate::analytic::{parse_expr, Expr, Jet, PowerSeries};
use crate::{Cx, Error, Result};

/// A holomorphic function on (a subdisk of) the unit disk.
///
/// Leaves are expressions or truncated series; the remaining variants are the
/// combinators needed to build dilatations, family members and Möbius images
/// without leaving jet arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticFunction {
    Expr(Expr),
    Series(PowerSeries),
    /// `f'`
    Derivative(Box<AnalyticFunction>),
    /// `constant + sum_k w_k f_k`
    Linear {
        terms: Vec<(Cx, AnalyticFunction)>,
        constant: Cx,
    },
    /// `f / g`
    Quotient(Box<AnalyticFunction>, Box<AnalyticFunction>),
    /// `outer(inner(z))`, where `z` in `outer` stands for the inner value.
    Compose {
        outer: Expr,
        inner: Box<AnalyticFunction>,
    },
}

impl AnalyticFunction {
    pub fn identity() -> Self {
        AnalyticFunction::Expr(Expr::Z)
    }

    pub fn constant(c: Cx) -> Self {
        AnalyticFunction::Expr(Expr::Const(c))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(AnalyticFunction::Expr(parse_expr(text)?))
    }

    pub fn derivative(&self) -> Self {
        AnalyticFunction::Derivative(Box::new(self.clone()))
    }

    pub fn scaled(&self, w: Cx) -> Self {
        AnalyticFunction::Linear {
            terms: vec![(w, self.clone())],
            constant: Cx::default(),
        }
    }

    pub fn linear(terms: Vec<(Cx, AnalyticFunction)>) -> Self {
        AnalyticFunction::Linear {
            terms,
            constant: Cx::default(),
        }
    }

    pub fn quotient(num: &AnalyticFunction, den: &AnalyticFunction) -> Self {
        AnalyticFunction::Quotient(Box::new(num.clone()), Box::new(den.clone()))
    }

    /// `outer ∘ self`.
    pub fn post_compose(&self, outer: Expr) -> Self {
        AnalyticFunction::Compose {
            outer,
            inner: Box::new(self.clone()),
        }
    }

    /// Radius of the disk on which evaluation is admissible (1 unless a series leaf limits it).
    pub fn domain_radius(&self) -> f64 {
        match self {
            AnalyticFunction::Expr(_) => 1.0,
            AnalyticFunction::Series(p) => p.r_max(),
            AnalyticFunction::Derivative(f) => f.domain_radius(),
            AnalyticFunction::Linear { terms, .. } => terms
                .iter()
                .map(|(_, f)| f.domain_radius())
                .fold(1.0, f64::min),
            AnalyticFunction::Quotient(n, d) => n.domain_radius().min(d.domain_radius()),
            AnalyticFunction::Compose { inner, .. } => inner.domain_radius(),
        }
    }

    /// Taylor jet `c_m = f^(m)(z)/m!` for `m = 0..=order`.
    pub fn eval_jet(&self, z: Cx, order: usize) -> Result<Jet> {
        match self {
            AnalyticFunction::Expr(e) => e.eval_jet(z, order),
            AnalyticFunction::Series(p) => p.eval_jet(z, order),
            AnalyticFunction::Derivative(f) => Ok(f.eval_jet(z, order + 1)?.derivative()),
            AnalyticFunction::Linear { terms, constant } => {
                let mut acc = Jet::constant(*constant, order);
                for (w, f) in terms {
                    acc = acc.add(&f.eval_jet(z, order)?.scale(*w))?;
                }
                Ok(acc)
            }
            AnalyticFunction::Quotient(n, d) => n.eval_jet(z, order)?.div(&d.eval_jet(z, order)?),
            AnalyticFunction::Compose { outer, inner } => {
                outer.eval_at_jet(&inner.eval_jet(z, order)?)
            }
        }
    }

    pub fn eval(&self, z: Cx) -> Result<Cx> {
        Ok(self.eval_jet(z, 0)?.value())
    }

    /// First derivative at `z`.
    pub fn eval_derivative(&self, z: Cx) -> Result<Cx> {
        Ok(self.eval_jet(z, 1)?.coeff(1))
    }

    /// Maclaurin series of order `n` (the order-`n` jet at the origin).
    pub fn to_series(&self, n: usize) -> Result<PowerSeries> {
        Ok(PowerSeries::from_jet(self.eval_jet(Cx::default(), n)?))
    }
}

impl From<Expr> for AnalyticFunction {
    fn from(e: Expr) -> Self {
        AnalyticFunction::Expr(e)
    }
}

impl From<PowerSeries> for AnalyticFunction {
    fn from(p: PowerSeries) -> Self {
        AnalyticFunction::Series(p)
    }
}

impl std::str::FromStr for AnalyticFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AnalyticFunction::parse(s)
    }
}

/// Maclaurin coefficients of an expression up to order `n`.
pub fn series_from_expr(ast: &Expr, n: usize) -> Result<PowerSeries> {
    Ok(PowerSeries::from_jet(ast.eval_jet(Cx::default(), n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs_close(p: &PowerSeries, expected: &[f64], tol: f64) {
        assert_eq!(p.coeffs().len(), expected.len());
        for (c, e) in p.coeffs().iter().zip(expected) {
            assert!((c - Cx::new(*e, 0.0)).norm() <= tol, "{:?}", p.coeffs());
        }
    }

    #[test]
    fn series_from_expr_examples() {
        coeffs_close(
            &series_from_expr(&parse_expr("exp(z)").unwrap(), 2).unwrap(),
            &[1.0, 1.0, 0.5],
            1e-15,
        );
        coeffs_close(
            &series_from_expr(&parse_expr("1/(1-z)").unwrap(), 3).unwrap(),
            &[1.0; 4],
            1e-15,
        );
        // quotient rule at 0: f(0) = 0.3, f'(0) = (1*1 - 0.3*0.3)/1 = 0.91
        coeffs_close(
            &series_from_expr(&parse_expr("(z+0.3)/(1+0.3*z)").unwrap(), 1).unwrap(),
            &[0.3, 0.91],
            1e-15,
        );
        assert!(matches!(
            series_from_expr(&parse_expr("1/z").unwrap(), 2),
            Err(Error::DivisionNearZero(_))
        ));
    }

    #[test]
    fn combinators() {
        let z = Cx::new(0.3, -0.2);
        let h = AnalyticFunction::parse("exp(z)").unwrap();
        let g = AnalyticFunction::parse("z^2").unwrap();
        let q = AnalyticFunction::quotient(&g.derivative(), &h.derivative());
        let expected = 2.0 * z / z.exp();
        assert!((q.eval(z).unwrap() - expected).norm() < 1e-15);

        let lin = AnalyticFunction::linear(vec![
            (Cx::new(0.0, 2.0), h.clone()),
            (Cx::new(1.0, 0.0), g.clone()),
        ]);
        assert!((lin.eval(z).unwrap() - (Cx::new(0.0, 2.0) * z.exp() + z * z)).norm() < 1e-15);

        let composed = g.post_compose(parse_expr("1/(1+z)").unwrap());
        assert!((composed.eval(z).unwrap() - 1.0 / (1.0 + z * z)).norm() < 1e-15);
    }

    #[test]
    fn series_leaf_matches_expression() {
        let e = parse_expr("exp(z)*(1+z)").unwrap();
        let p = series_from_expr(&e, 40).unwrap();
        let f = AnalyticFunction::Series(p);
        let z = Cx::new(0.2, 0.4);
        let a = f.eval_jet(z, 3).unwrap();
        let b = e.eval_jet(z, 3).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}
