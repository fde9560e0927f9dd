use std::f64::consts::TAU;

use crate::{Cx, Error, Result};

/// Polar sample grid on `|z| <= r_max` with optional excluded disks.
///
/// Radii are `r_max * k / n_radial` for `k = 1..=n_radial`, angles
/// `2π j / n_angular`; enumeration is radius-major, so the order is fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub r_max: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub exclusion_centers: Vec<Cx>,
    pub exclusion_radius: f64,
}

impl GridSpec {
    pub fn polar(r_max: f64, n_radial: usize, n_angular: usize) -> Result<Self> {
        let grid = GridSpec {
            r_max,
            n_radial,
            n_angular,
            exclusion_centers: Vec::new(),
            exclusion_radius: 0.0,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn excluding(mut self, centers: Vec<Cx>, radius: f64) -> Result<Self> {
        self.exclusion_centers = centers;
        self.exclusion_radius = radius;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::DegenerateGrid(format!(
                "r_max = {} outside (0, 1)",
                self.r_max
            )));
        }
        if self.n_radial < 2 || self.n_angular < 4 || self.n_radial * self.n_angular < 8 {
            return Err(Error::DegenerateGrid(format!(
                "need n_radial >= 2 and n_angular >= 4, got {} x {}",
                self.n_radial, self.n_angular
            )));
        }
        if !(self.exclusion_radius >= 0.0) {
            return Err(Error::DegenerateGrid("negative exclusion radius".into()));
        }
        Ok(())
    }

    pub fn is_excluded(&self, z: Cx) -> bool {
        self.exclusion_centers
            .iter()
            .any(|c| (z - c).norm() < self.exclusion_radius)
    }

    /// Grid points in enumeration order, excluded points removed.
    pub fn points(&self) -> Vec<Cx> {
        let mut out = Vec::with_capacity(self.n_radial * self.n_angular);
        for k in 1..=self.n_radial {
            let r = self.r_max * k as f64 / self.n_radial as f64;
            for j in 0..self.n_angular {
                let z = Cx::from_polar(r, TAU * j as f64 / self.n_angular as f64);
                if !self.is_excluded(z) {
                    out.push(z);
                }
            }
        }
        out
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            r_max: 0.7,
            n_radial: 21,
            n_angular: 48,
            exclusion_centers: Vec::new(),
            exclusion_radius: 0.0,
        }
    }
}
