//! Truncated power series centered at the origin.

use crate::analytic::Jet;
use crate::{Cx, Error, Result, EPS_DIV};

/// Default truncation order for series built from expressions.
pub const DEFAULT_ORDER: usize = 64;

/// Default admissible evaluation radius for series.
pub const DEFAULT_RADIUS: f64 = 0.7;

/// `a_0 + a_1 z + ... + a_N z^N`, evaluated only for `|z| <= r_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Cx>,
    r_max: f64,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Cx>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "a series needs at least one coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            coeffs,
            r_max: DEFAULT_RADIUS,
        })
    }

    pub fn from_jet(jet: Jet) -> Self {
        Self {
            coeffs: jet.into_coeffs(),
            r_max: DEFAULT_RADIUS,
        }
    }

    pub fn with_radius(mut self, r_max: f64) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn coeff(&self, n: usize) -> Cx {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// `b_n = (n+1) a_(n+1)`, one order lower.
    pub fn derivative(&self) -> PowerSeries {
        let coeffs = if self.coeffs.len() == 1 {
            vec![Cx::default()]
        } else {
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, a)| a * n as f64)
                .collect()
        };
        PowerSeries {
            coeffs,
            r_max: self.r_max,
        }
    }

    /// Antiderivative vanishing at the origin, one order higher.
    pub fn antiderivative(&self) -> PowerSeries {
        let coeffs = std::iter::once(Cx::default())
            .chain(
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, a)| a / (n + 1) as f64),
            )
            .collect();
        PowerSeries {
            coeffs,
            r_max: self.r_max,
        }
    }

    fn check_radius(&self, z: Cx) -> Result<()> {
        let r = z.norm();
        if r > self.r_max {
            return Err(Error::RadiusExceeded {
                radius: r,
                limit: self.r_max,
            });
        }
        Ok(())
    }

    pub fn eval(&self, z: Cx) -> Result<Cx> {
        self.check_radius(z)?;
        let v = self
            .coeffs
            .iter()
            .rev()
            .fold(Cx::default(), |acc, a| acc * z + a);
        crate::ensure_finite(v)
    }

    /// Taylor jet of the truncated polynomial at `z` (Horner's scheme over jets).
    pub fn eval_jet(&self, z: Cx, order: usize) -> Result<Jet> {
        self.check_radius(z)?;
        let mut acc = vec![Cx::default(); order + 1];
        for a in self.coeffs.iter().rev() {
            // acc <- acc * (z + t) + a
            for m in (0..=order).rev() {
                let shifted = if m > 0 { acc[m - 1] } else { Cx::default() };
                acc[m] = acc[m] * z + shifted;
            }
            acc[0] += a;
        }
        Jet::from_coeffs(acc)
    }

    /// `max |a_n| * r^(N+1) / (1 - r)`, the geometric tail estimate at radius `r`.
    pub fn tail_bound(&self, r: f64) -> f64 {
        let max = self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
        max * r.powi(self.coeffs.len() as i32) / (1.0 - r)
    }

    pub fn scale(&self, s: Cx) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
            r_max: self.r_max,
        }
    }

    /// Sum truncated at the smaller order.
    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        PowerSeries {
            coeffs: (0..n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
            r_max: self.r_max.min(other.r_max),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|m| (0..=m).map(|j| self.coeffs[j] * other.coeffs[m - j]).sum())
            .collect();
        PowerSeries {
            coeffs,
            r_max: self.r_max.min(other.r_max),
        }
    }

    pub fn recip(&self) -> Result<PowerSeries> {
        let a0 = self.coeffs[0];
        if a0.norm() <= EPS_DIV {
            return Err(Error::DivisionNearZero(a0.norm()));
        }
        let inv = a0.inv();
        let mut out: Vec<Cx> = Vec::with_capacity(self.coeffs.len());
        out.push(inv);
        for m in 1..self.coeffs.len() {
            let s: Cx = (1..=m).map(|k| self.coeffs[k] * out[m - k]).sum();
            out.push(-s * inv);
        }
        let mut series = PowerSeries::new(out)?;
        series.r_max = self.r_max;
        Ok(series)
    }

    /// True when every coefficient past the constant term is at most `tol` in modulus.
    pub fn is_constant(&self, tol: f64) -> bool {
        self.coeffs.iter().skip(1).all(|a| a.norm() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> PowerSeries {
        PowerSeries::new(v.iter().map(|&x| Cx::new(x, 0.0)).collect()).unwrap()
    }

    fn re(p: &PowerSeries) -> Vec<f64> {
        p.coeffs().iter().map(|c| c.re).collect()
    }

    #[test]
    fn derivative_and_antiderivative() {
        assert_eq!(re(&series(&[0.0, 1.0, 0.0]).derivative()), vec![1.0, 0.0]);
        assert_eq!(re(&series(&[1.0, 1.0, 1.0]).derivative()), vec![1.0, 2.0]);
        assert_eq!(re(&series(&[1.0]).antiderivative()), vec![0.0, 1.0]);
        assert_eq!(
            re(&series(&[0.0, 1.0]).antiderivative()),
            vec![0.0, 0.0, 0.5]
        );
        let p = series(&[0.3, -1.0, 2.5, 0.125]);
        assert_eq!(p.antiderivative().derivative(), p);
    }

    #[test]
    fn jet_of_polynomial() {
        // p(z) = 1 + 2z + 3z^2 at z = 0.5: p = 2.75, p' = 5, p''/2 = 3
        let j = series(&[1.0, 2.0, 3.0])
            .eval_jet(Cx::new(0.5, 0.0), 3)
            .unwrap();
        let expected = [2.75, 5.0, 3.0, 0.0];
        for (c, e) in j.coeffs().iter().zip(expected) {
            assert!((c - Cx::new(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn radius_guard() {
        let p = series(&[1.0, 1.0]);
        assert!(matches!(
            p.eval(Cx::new(0.8, 0.0)),
            Err(Error::RadiusExceeded { .. })
        ));
        assert!(p.with_radius(0.9).eval(Cx::new(0.8, 0.0)).is_ok());
    }

    #[test]
    fn geometric_reciprocal() {
        let r = series(&[1.0, -1.0, 0.0, 0.0]).recip().unwrap();
        assert_eq!(re(&r), vec![1.0, 1.0, 1.0, 1.0]);
    }
}
