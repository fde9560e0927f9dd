//! Truncated Taylor jets of holomorphic functions.
//!
//! A jet of order `k` at a point `z` stores `c_m = f^(m)(z) / m!` for
//! `m = 0..=k`. Arithmetic on jets is arithmetic on truncated power series in
//! the local variable `t = w - z`.

use crate::{Cx, Error, Result, EPS_DIV};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<Cx>,
}

impl Jet {
    /// Builds a jet from Taylor coefficients, rejecting empty or non-finite input.
    pub fn from_coeffs(coeffs: Vec<Cx>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "a jet needs at least one coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coeffs })
    }

    pub fn constant(value: Cx, order: usize) -> Self {
        let mut coeffs = vec![Cx::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// Jet of the identity function at `z`.
    pub fn variable(z: Cx, order: usize) -> Self {
        let mut jet = Self::constant(z, order);
        if order >= 1 {
            jet.coeffs[1] = Cx::new(1.0, 0.0);
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Cx> {
        self.coeffs
    }

    /// Taylor coefficient `c_m`; zero past the truncation order.
    pub fn coeff(&self, m: usize) -> Cx {
        self.coeffs.get(m).copied().unwrap_or_default()
    }

    pub fn value(&self) -> Cx {
        self.coeffs[0]
    }

    /// The raw derivative `f^(m)(z) = m! c_m`.
    pub fn derivative_value(&self, m: usize) -> Cx {
        let factorial: f64 = (1..=m).map(|k| k as f64).product();
        self.coeff(m) * factorial
    }

    /// Jet of `f'` at the same point, one order lower.
    pub fn derivative(&self) -> Jet {
        if self.order() == 0 {
            return Jet::constant(Cx::new(0.0, 0.0), 0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, c)| c * m as f64)
            .collect();
        Jet { coeffs }
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        Jet { coeffs }
    }

    fn check_order(&self, other: &Jet) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Jet { coeffs })
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Jet { coeffs })
    }

    pub fn neg(&self) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: Cx) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_constant(&self, s: Cx) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    /// Cauchy product `c_m = sum_j a_j b_(m-j)`.
    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_order(other)?;
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|m| (0..=m).map(|j| self.coeffs[j] * other.coeffs[m - j]).sum())
            .collect();
        Ok(Jet { coeffs })
    }

    /// Multiplicative inverse; fails when the value is within `EPS_DIV` of zero.
    pub fn recip(&self) -> Result<Jet> {
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
        Jet::from_coeffs(out)
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.mul(&other.recip()?)
    }

    pub fn exp(&self) -> Result<Jet> {
        let mut out: Vec<Cx> = Vec::with_capacity(self.coeffs.len());
        out.push(self.coeffs[0].exp());
        for n in 1..self.coeffs.len() {
            let s: Cx = (1..=n)
                .map(|k| self.coeffs[k] * out[n - k] * k as f64)
                .sum();
            out.push(s / n as f64);
        }
        Jet::from_coeffs(out)
    }

    /// Principal-branch logarithm.
    pub fn ln(&self) -> Result<Jet> {
        let a0 = self.coeffs[0];
        if a0.norm() <= EPS_DIV {
            return Err(Error::DivisionNearZero(a0.norm()));
        }
        let mut out: Vec<Cx> = Vec::with_capacity(self.coeffs.len());
        out.push(a0.ln());
        for n in 1..self.coeffs.len() {
            let s: Cx = (1..n).map(|k| out[k] * self.coeffs[n - k] * k as f64).sum();
            out.push((self.coeffs[n] - s / n as f64) / a0);
        }
        Jet::from_coeffs(out)
    }

    /// Integer power; negative exponents go through `recip`.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        let mut result = Jet::constant(Cx::new(1.0, 0.0), self.order());
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        if n < 0 {
            result = result.recip()?;
        }
        Ok(result)
    }
}
