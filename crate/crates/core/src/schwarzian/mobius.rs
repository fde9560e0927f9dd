use std::f64::consts::TAU;

use crate::analytic::{Expr, Jet};
use crate::{Cx, Error, Result, EPS_DIV};

/// Determinant guard for fractional-linear maps.
pub const EPS_DET: f64 = 1e-12;

/// Guard on `|z0|` for automorphism and family parameters.
pub const MAX_Z0: f64 = 0.95;

/// `w ↦ (a w + b) / (c w + d)` with `ad - bc ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub a: Cx,
    pub b: Cx,
    pub c: Cx,
    pub d: Cx,
}

impl Mobius {
    pub fn new(a: Cx, b: Cx, c: Cx, d: Cx) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        let det = m.det().norm();
        if !(det > EPS_DET) {
            return Err(Error::DegenerateMobius(det));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let (one, zero) = (Cx::new(1.0, 0.0), Cx::default());
        Mobius {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    pub fn det(&self) -> Cx {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, w: Cx) -> Result<Cx> {
        let den = self.c * w + self.d;
        if den.norm() <= EPS_DIV {
            return Err(Error::PoleHit(w));
        }
        crate::ensure_finite((self.a * w + self.b) / den)
    }

    /// Jet of `M ∘ f` from the jet of `f`.
    pub fn apply_jet(&self, f: &Jet) -> Result<Jet> {
        let num = f.scale(self.a).add_constant(self.b);
        let den = f.scale(self.c).add_constant(self.d);
        num.div(&den)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Representative with determinant 1.
    pub fn normalized(&self) -> Mobius {
        let s = self.det().sqrt().inv();
        Mobius {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    /// Representative with `d = 1`; fails when `d` vanishes.
    pub fn normalized_by_d(&self) -> Result<Mobius> {
        if self.d.norm() <= EPS_DIV {
            return Err(Error::DivisionNearZero(self.d.norm()));
        }
        let s = self.d.inv();
        Ok(Mobius {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: Cx::new(1.0, 0.0),
        })
    }

    /// The map as an expression in `z`, for post-composition with analytic functions.
    pub fn to_expr(&self) -> Expr {
        Expr::div(
            Expr::add(Expr::mul(Expr::Const(self.a), Expr::Z), Expr::Const(self.b)),
            Expr::add(Expr::mul(Expr::Const(self.c), Expr::Z), Expr::Const(self.d)),
        )
    }

    /// `max ||M(e^{iθ})| - 1|` over `n` uniform angles; infinite if the pole is on the circle.
    pub fn circle_residual(&self, n: usize) -> f64 {
        (0..n)
            .map(
                |j| match self.apply(Cx::from_polar(1.0, TAU * j as f64 / n as f64)) {
                    Ok(v) => (v.norm() - 1.0).abs(),
                    Err(_) => f64::INFINITY,
                },
            )
            .fold(0.0, f64::max)
    }
}

/// `T(w) = e^{iγ} (w + z0) / (1 + conj(z0) w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskAutomorphismParams {
    pub gamma: f64,
    pub z0: Cx,
}

impl DiskAutomorphismParams {
    pub fn new(gamma: f64, z0: Cx) -> Result<Self> {
        if !gamma.is_finite() || !z0.is_finite() || z0.norm() > MAX_Z0 {
            return Err(Error::InvalidParameter(format!(
                "need finite gamma and |z0| <= {MAX_Z0}, got gamma = {gamma}, z0 = {z0}"
            )));
        }
        Ok(DiskAutomorphismParams { gamma, z0 })
    }

    /// Reads `(γ, z0)` off a disk automorphism; `γ` lands in `(-π, π]`.
    pub fn from_mobius(m: &Mobius) -> Result<Self> {
        let n = m.normalized_by_d()?;
        let z0 = n.c.conj();
        if z0.norm() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "|z0| = {} >= 1",
                z0.norm()
            )));
        }
        Ok(DiskAutomorphismParams {
            gamma: n.a.arg(),
            z0,
        })
    }
}

pub fn disk_automorphism(p: &DiskAutomorphismParams) -> Result<Mobius> {
    if !(p.z0.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "|z0| = {} >= 1",
            p.z0.norm()
        )));
    }
    let rot = Cx::from_polar(1.0, p.gamma);
    Mobius::new(rot, rot * p.z0, p.z0.conj(), Cx::new(1.0, 0.0))
}

/// Circle tolerance for [`is_disk_automorphism`].
pub const CIRCLE_TOLERANCE: f64 = 1e-9;

/// The unit circle maps to itself (32 samples, 1e-9) and the origin stays inside.
pub fn is_disk_automorphism(m: &Mobius) -> bool {
    m.circle_residual(32) <= CIRCLE_TOLERANCE
        && matches!(m.apply(Cx::default()), Ok(v) if v.norm() < 1.0)
}

/// Cross-ratio map sending `(p1, p2, p3)` to `(0, 1, ∞)`.
fn to_standard_triple(p: [Cx; 3]) -> Result<Mobius> {
    let [p1, p2, p3] = p;
    Mobius::new(p2 - p3, -p1 * (p2 - p3), p2 - p1, -p3 * (p2 - p1))
}

/// The unique Möbius map with `M(src_i) = dst_i`.
pub fn mobius_from_3_points(src: [Cx; 3], dst: [Cx; 3]) -> Result<Mobius> {
    for pts in [&src, &dst] {
        let min_gap = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| (pts[i] - pts[j]).norm())
            .fold(f64::INFINITY, f64::min);
        if !(min_gap > EPS_DIV) {
            return Err(Error::DegenerateMobius(min_gap));
        }
    }
    let s = to_standard_triple(src)?;
    let t = to_standard_triple(dst)?;
    let m = t.inverse().compose(&s).normalized();
    Mobius::new(m.a, m.b, m.c, m.d)
}
