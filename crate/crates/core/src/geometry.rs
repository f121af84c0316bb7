//! Points and fields on the one-sheeted hyperboloid `H²` in `ℝ^{2+1}`.
//!
//! The ambient metric is `η = diag(1, 1, −1)`; a point `ψ` lies on `H²` when
//! `η(ψ, ψ) = 1`. Fields are parametrized by polar angles
//! `ψ = (cosh θ cos φ, cosh θ sin φ, sinh θ)` with `φ` stored as a real lift,
//! so that the winding number is read off from the total change of `φ`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use num_traits::Float;

use crate::{Error, Result};

/// Default tolerance on `|η(ψ,ψ) − 1|` for evolved fields.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Default half length of the truncated real line.
pub const DEFAULT_HALF_LENGTH: f64 = 40.0;

/// Minkowski contraction `a1 b1 + a2 b2 − a3 b3`.
#[inline]
pub fn minkowski_dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// An ambient point `(ψ1, ψ2, ψ3)`; expected to satisfy `η(ψ,ψ) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperboloidPoint {
    pub psi1: f64,
    pub psi2: f64,
    pub psi3: f64,
}

impl HyperboloidPoint {
    pub const fn new(psi1: f64, psi2: f64, psi3: f64) -> Self {
        Self { psi1, psi2, psi3 }
    }

    pub const fn to_array(self) -> [f64; 3] {
        [self.psi1, self.psi2, self.psi3]
    }

    pub const fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Inverts [`embed`]: `θ = asinh ψ3`, `φ = atan2(ψ2, ψ1)` (principal value).
    pub fn to_polar(self) -> PolarAngles {
        PolarAngles {
            theta: self.psi3.asinh(),
            phi: self.psi2.atan2(self.psi1),
        }
    }
}

/// `ψ1² + ψ2² − ψ3² − 1`.
#[inline]
pub fn constraint_residual(q: HyperboloidPoint) -> f64 {
    let a = q.to_array();
    minkowski_dot(a, a) - 1.0
}

/// Polar angles on `H²`. `phi` is a lift to `ℝ` and is never reduced mod 2π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarAngles {
    pub theta: f64,
    pub phi: f64,
}

impl PolarAngles {
    pub const fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }
}

/// Maps polar angles onto the hyperboloid.
pub fn embed(p: PolarAngles) -> Result<HyperboloidPoint> {
    if !p.theta.is_finite() || !p.phi.is_finite() {
        return Err(Error::domain("embed: polar angles must be finite"));
    }
    let (s, c) = p.phi.sin_cos();
    let ch = p.theta.cosh();
    Ok(HyperboloidPoint::new(ch * c, ch * s, p.theta.sinh()))
}

/// Spatial domain `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    /// `S¹` realized as `[−π, π)` with periodic identification.
    Circle,
    /// `ℝ` truncated to `[−L, L)` with the identification `ψ(L) = ψ(−L)`.
    TruncatedLine { half_length: f64 },
}

impl SpaceKind {
    /// `(left end, period)` of the grid interval.
    pub fn interval(self) -> (f64, f64) {
        match self {
            SpaceKind::Circle => (-PI, TAU),
            SpaceKind::TruncatedLine { half_length } => (-half_length, 2.0 * half_length),
        }
    }

    /// Uniform grid spacing for `points` samples.
    pub fn spacing(self, points: usize) -> f64 {
        self.interval().1 / points as f64
    }

    /// Grid abscissa of sample `i` out of `points`.
    pub fn x(self, i: usize, points: usize) -> f64 {
        let (a, len) = self.interval();
        a + len * i as f64 / points as f64
    }

    /// The `points` grid abscissae.
    pub fn grid(self, points: usize) -> Vec<f64> {
        (0..points).map(|i| self.x(i, points)).collect()
    }

    pub fn is_circle(self) -> bool {
        matches!(self, SpaceKind::Circle)
    }
}

/// `(θ, φ)` samples on a uniform periodic grid at a single time.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField {
    pub angles: Vec<PolarAngles>,
    pub time: f64,
    pub space: SpaceKind,
}

impl PolarField {
    pub fn new(angles: Vec<PolarAngles>, time: f64, space: SpaceKind) -> Self {
        Self { angles, time, space }
    }

    /// Samples `f(x) = (θ, φ)` on the `points`-point grid of `space`.
    pub fn sample(
        space: SpaceKind,
        points: usize,
        time: f64,
        mut f: impl FnMut(f64) -> PolarAngles,
    ) -> Self {
        let angles = (0..points).map(|i| f(space.x(i, points))).collect();
        Self { angles, time, space }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.space.spacing(self.len())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.space.x(i, self.len())
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        self.angles.iter().map(|a| a.theta)
    }

    pub fn phis(&self) -> impl Iterator<Item = f64> + '_ {
        self.angles.iter().map(|a| a.phi)
    }

    /// Largest `|η(ψ,ψ) − 1|` over the embedded samples.
    pub fn max_constraint_residual(&self) -> f64 {
        self.angles
            .iter()
            .filter_map(|&a| embed(a).ok())
            .map(|q| constraint_residual(q).abs())
            .fold(0.0, f64::max)
    }
}

/// Principal value of an angle increment, in `(−π, π]`.
#[inline]
pub fn principal_increment(d: f64) -> f64 {
    let r = d - TAU * (d / TAU).round();
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Result of unwrapping the azimuth of a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingReport {
    /// Sum of principal-value link increments of `φ`.
    pub delta_phi: f64,
    /// `delta_phi / 2π`, unrounded.
    pub turns: f64,
    /// Rounded winding number; only defined on the circle.
    pub winding: Option<i64>,
    /// Largest `|Δφ|` over a single link.
    pub max_link: f64,
    /// Set when some link increment reaches `π/2`: the grid is too coarse
    /// for the unwrapping to be trusted.
    pub under_resolved: bool,
}

/// Unwraps a sequence of azimuths. With `closed`, the seam link from the
/// last sample back to the first is included and the total is an exact
/// multiple of `2π`.
pub fn unwrap_azimuth(phis: impl IntoIterator<Item = f64>, closed: bool) -> WindingReport {
    let mut iter = phis.into_iter();
    let Some(first) = iter.next() else {
        return WindingReport {
            delta_phi: 0.0,
            turns: 0.0,
            winding: closed.then_some(0),
            max_link: 0.0,
            under_resolved: false,
        };
    };
    let mut prev = first;
    let mut total = 0.0;
    let mut max_link: f64 = 0.0;
    let mut push = |d: f64, total: &mut f64| {
        let inc = principal_increment(d);
        max_link = max_link.max(inc.abs());
        *total += inc;
    };
    for phi in iter {
        push(phi - prev, &mut total);
        prev = phi;
    }
    if closed {
        push(first - prev, &mut total);
    }
    let turns = total / TAU;
    WindingReport {
        delta_phi: total,
        turns,
        winding: closed.then(|| turns.round() as i64),
        max_link,
        under_resolved: max_link >= PI / 2.0,
    }
}

/// Winding number of a polar field.
///
/// On the circle the seam link is included and the turn count is rounded.
/// On a truncated line only the interior links are summed and the raw
/// `Δφ/2π` is reported, unrounded.
pub fn winding_number(f: &PolarField) -> WindingReport {
    unwrap_azimuth(f.phis(), f.space.is_circle())
}
