//! Jacobi elliptic functions and the complete elliptic integral of the first
//! kind, in the parameter convention `m` (not the modulus `k = √m`).
//!
//! `sn`, `cn`, `dn` use the descending Landen / arithmetic-geometric mean
//! scheme (A&S 16.4). `K(m)` is `π / (2 AGM(1, √(1−m)))`.

use core::f64::consts::FRAC_PI_2;
use num_traits::Float;

use crate::{Error, Result};

/// Parameters within this distance of 0 or 1 use the exact degenerate forms.
pub const SNAP_TOL: f64 = 1e-12;

const MAX_AGM_STEPS: usize = 32;

/// Elliptic parameter `m ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::domain(alloc::format!(
                "elliptic parameter m = {m} outside [0, 1]"
            )));
        }
        Ok(Self(m))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `m₁ = 1 − m`.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }

    pub fn is_trigonometric(self) -> bool {
        self.0 <= SNAP_TOL
    }

    pub fn is_hyperbolic(self) -> bool {
        self.complement() <= SNAP_TOL
    }

    /// `(sn, cn, dn)(u | m)`.
    pub fn jacobi(self, u: f64) -> Jacobi {
        jacobi_unchecked(u, self)
    }

    /// `K(m)`; infinite at `m = 1`.
    pub fn quarter_period(self) -> Result<f64> {
        if self.is_hyperbolic() {
            return Err(Error::Infinite("K(m) at m = 1"));
        }
        Ok(FRAC_PI_2 / agm(1.0, self.complement().sqrt()))
    }
}

/// The triple `(sn, cn, dn)` at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// `(sn(u|m), cn(u|m), dn(u|m))`.
pub fn jacobi(u: f64, m: f64) -> Result<Jacobi> {
    if !u.is_finite() {
        return Err(Error::domain("jacobi: argument must be finite"));
    }
    Ok(EllipticParameter::new(m)?.jacobi(u))
}

/// Complete elliptic integral of the first kind `K(m)`, for `0 ≤ m < 1`.
pub fn complete_k(m: f64) -> Result<f64> {
    EllipticParameter::new(m)?.quarter_period()
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    a
}

fn jacobi_unchecked(u: f64, m: EllipticParameter) -> Jacobi {
    if m.is_trigonometric() {
        let (sn, cn) = u.sin_cos();
        return Jacobi { sn, cn, dn: 1.0 };
    }
    if m.is_hyperbolic() {
        let sech = 1.0 / u.cosh();
        return Jacobi {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        };
    }

    let m1 = m.complement();
    let mut a = [0.0f64; MAX_AGM_STEPS + 1];
    let mut c = [0.0f64; MAX_AGM_STEPS + 1];
    a[0] = 1.0;
    c[0] = m.value().sqrt();
    let mut b = m1.sqrt();
    let mut n = 0;
    while n < MAX_AGM_STEPS && c[n].abs() > f64::EPSILON * a[n] {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }

    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for j in (1..=n).rev() {
        let t = (c[j] / a[j] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (t.asin() + phi);
    }
    let (sn, cn) = phi.sin_cos();
    // dn² = cn² + m₁ sn² avoids the cancellation in 1 − m sn² near m = 1.
    let dn = (cn * cn + m1 * sn * sn).sqrt();
    Jacobi { sn, cn, dn }
}
