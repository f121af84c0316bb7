//! Closed-form solution families.
//!
//! HHM travelling waves are written through `p = sinh f`, where
//! `θ = f(ξ)`, `φ = g(ξ) + ct`, `ξ = x − vt` and the phase obeys
//! `dg/dξ = (k − vp)/(1 + p²)`. HSM families cover the sn-in-time blow-up,
//! the sine winding profile and the sn/tanh travelling waves.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use num_complex::Complex64;
use num_traits::Float;

use crate::elliptic::{complete_k, EllipticParameter};
use crate::geometry::{principal_increment, SpaceKind};
use crate::poly::Poly;
use crate::quad::{integrate, Tolerance};
use crate::reduction::{
    build_p_hhm, match_jk, Convention, JkPair, PotentialPoly, Provenance,
};
use crate::{Error, Result};

/// `dg/dξ = (k − vp)/(1 + p²)`.
pub fn hhm_dg_dxi(p: f64, k: f64, v: f64) -> f64 {
    (k - v * p) / (1.0 + p * p)
}

/// HHM energy density `½(cosh²θ φ_x² − θ_x²)` of a travelling profile,
/// `[(k − vp)² − p′²] / (2(1 + p²))`.
pub fn hhm_travelling_density(p: f64, dp: f64, k: f64, v: f64) -> f64 {
    let rate = k - v * p;
    0.5 * (rate * rate - dp * dp) / (1.0 + p * p)
}

/// Azimuthal phase rate `dg/dξ` of a travelling profile.
pub trait PhaseRate {
    fn phase_rate(&self, xi: f64) -> f64;
}

/// A travelling profile `p(ξ)` with exact derivative.
pub trait TravellingProfile {
    fn p(&self, xi: f64) -> f64;
    fn dp(&self, xi: f64) -> f64;
    /// Potential `P` with `p′²/2 = P` (HHM) or `p′² = P` (HSM).
    fn potential(&self) -> PotentialPoly;
    /// Period in `ξ`, if periodic.
    fn period(&self) -> Option<f64>;

    /// `max |p′² (/2) − P(p)|` over `n` samples of `[a, b]`.
    fn max_residual(&self, a: f64, b: f64, n: usize) -> f64 {
        let pot = self.potential();
        (0..n)
            .map(|i| {
                let xi = a + (b - a) * i as f64 / (n.max(2) - 1) as f64;
                pot.residual(self.p(xi), self.dp(xi)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// HHM travelling-wave constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravellingWaveParams {
    pub k: f64,
    pub v: f64,
    pub c: f64,
    pub q: f64,
}

impl TravellingWaveParams {
    pub fn potential(&self) -> PotentialPoly {
        build_p_hhm(self.k, self.v, self.c, self.q)
    }

    /// `(k, v, Q)` with `c = 1` whose cubic `P` has zeros `p1 ≥ p2 ≥ p3`:
    /// `Q = −p1p2p3`, `kv = 1 − (p1p2 + p1p3 + p2p3)`,
    /// `v² − k² = −2(p1 + p2 + p3) − 2Q`. Takes `v ≥ 0`.
    pub fn from_roots(p1: f64, p2: f64, p3: f64) -> Self {
        let q = -p1 * p2 * p3;
        let s = 1.0 - (p1 * p2 + p1 * p3 + p2 * p3);
        let d = -2.0 * (p1 + p2 + p3) - 2.0 * q;
        let disc = (d * d + 4.0 * s * s).sqrt();
        // v² = (d + √(d² + 4s²))/2, evaluated without cancellation
        let v2 = if d >= 0.0 { 0.5 * (d + disc) } else { 2.0 * s * s / (disc - d) };
        let v = v2.sqrt();
        let k = if v > 0.0 { s / v } else { (-d).max(0.0).sqrt() };
        Self { k, v, c: 1.0, q }
    }

    fn check_roots(&self, roots: [f64; 3]) -> Result<()> {
        let got = self.potential();
        let want = Poly::from_real_roots(self.c, &roots);
        for (i, (a, b)) in got.coeffs().iter().zip(want.coeffs()).enumerate() {
            if (a - b).abs() > 1e-9 * (1.0 + b.abs()) {
                return Err(Error::domain(format!(
                    "roots do not reproduce the c = 1 cubic (coefficient {i}: {a} vs {b})"
                )));
            }
        }
        Ok(())
    }
}

/// `p0 + (√(2A)/N) sin(N(ξ − ξ0))`.
pub fn hhm_sine(n: i64, p0: f64, a: f64, xi0: f64, xi: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("hhm_sine: N must be non-zero"));
    }
    if !(a > 0.0) {
        return Err(Error::domain("hhm_sine: A must be positive"));
    }
    let n = n as f64;
    Ok(p0 + (2.0 * a).sqrt() / n * (n * (xi - xi0)).sin())
}

/// The `c = 0` sine family with `α = v² − k² + 2Q = −N²`:
/// `p0 = kv/α`, `2A = (k² − N²)(N² + v²)/N²`. For `N = 1` this is
/// `p = −kv + √((v²+1)(k²−1)) sin ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhmSine {
    pub params: TravellingWaveParams,
    pub n: i64,
    pub p0: f64,
    /// `A`; zero when `k² = N²` (constant profile `p ≡ p0`).
    pub a: f64,
    pub xi0: f64,
}

impl HhmSine {
    pub fn new(k: f64, v: f64, n: i64, xi0: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("hhm-sine: N must be non-zero"));
        }
        let n2 = (n * n) as f64;
        if k * k < n2 {
            return Err(Error::domain(format!(
                "hhm-sine: needs k^2 >= N^2 for a real amplitude (k = {k}, N = {n})"
            )));
        }
        let q = 0.5 * (k * k - v * v - n2);
        let alpha = v * v - k * k + 2.0 * q;
        let p0 = k * v / alpha;
        let a = 0.5 * (k * k - n2) * (n2 + v * v) / n2;
        // Completing the square of P = (α/2)p² − kvp + Q gives
        // P = (α/2)(p − p0)² + Q − k²v²/(2α); check both constants.
        let scale = 1.0 + k * k + v * v;
        let a_square = q - k * k * v * v / (2.0 * alpha);
        assert!((alpha + n2).abs() <= 1e-12 * scale * n2, "alpha = {alpha}");
        assert!((p0 + k * v / n2).abs() <= 1e-12 * scale, "p0 = {p0}");
        assert!((a - a_square).abs() <= 1e-12 * scale * scale, "A = {a} vs {a_square}");
        Ok(Self { params: TravellingWaveParams { k, v, c: 0.0, q }, n, p0, a: a.max(0.0), xi0 })
    }

    /// Normalized one-wind family (`N = 1`, `ξ0 = 0`).
    pub fn normalized(k: f64, v: f64) -> Result<Self> {
        Self::new(k, v, 1, 0.0)
    }

    pub fn amplitude(&self) -> f64 {
        (2.0 * self.a).sqrt() / self.n as f64
    }
}

impl TravellingProfile for HhmSine {
    fn p(&self, xi: f64) -> f64 {
        let n = self.n as f64;
        self.p0 + self.amplitude() * (n * (xi - self.xi0)).sin()
    }

    fn dp(&self, xi: f64) -> f64 {
        let n = self.n as f64;
        (2.0 * self.a).sqrt() * (n * (xi - self.xi0)).cos()
    }

    fn potential(&self) -> PotentialPoly {
        self.params.potential()
    }

    fn period(&self) -> Option<f64> {
        Some(TAU / (self.n as f64).abs())
    }
}

impl PhaseRate for HhmSine {
    fn phase_rate(&self, xi: f64) -> f64 {
        hhm_dg_dxi(self.p(xi), self.params.k, self.params.v)
    }
}

/// Total phase change, or linear growth when it diverges with the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaPhi {
    Finite { value: f64, error: f64 },
    /// `Δφ(L)` grows like `2·rate·L`; `rate` is the asymptotic `dg/dξ`.
    Diverges { rate: f64, samples: [(f64, f64); 3] },
}

impl DeltaPhi {
    pub fn value(&self) -> Option<f64> {
        match self {
            DeltaPhi::Finite { value, .. } => Some(*value),
            DeltaPhi::Diverges { .. } => None,
        }
    }
}

/// Relative Cauchy tolerance between `Δφ(2L)` and `Δφ(4L)`.
pub const CAUCHY_TOL: f64 = 1e-8;

fn quad_tol() -> Tolerance {
    Tolerance { abs: 1e-13, rel: 1e-12 }
}

/// `Δφ = ∫ dg/dξ dξ` over the domain. On a truncated line `[−L, L]` the
/// integral is also taken on `[−2L, 2L]` and `[−4L, 4L]`; when the last two
/// disagree the phase winds without bound and the growth rate
/// `(Δφ(4L) − Δφ(2L))/(4L)` is returned.
pub fn delta_phi(profile: &impl PhaseRate, domain: SpaceKind) -> Result<DeltaPhi> {
    let run = |a: f64, b: f64| integrate(|xi| profile.phase_rate(xi), a, b, quad_tol());
    match domain {
        SpaceKind::Circle => {
            let q = run(-PI, PI)?;
            Ok(DeltaPhi::Finite { value: q.value, error: q.error })
        }
        SpaceKind::TruncatedLine { half_length } => {
            let l = half_length;
            if !(l > 0.0) {
                return Err(Error::domain("delta_phi: half-length must be positive"));
            }
            let i1 = run(-l, l)?;
            let i2 = run(-2.0 * l, 2.0 * l)?;
            let i4 = run(-4.0 * l, 4.0 * l)?;
            let samples = [(l, i1.value), (2.0 * l, i2.value), (4.0 * l, i4.value)];
            if (i4.value - i2.value).abs() <= CAUCHY_TOL * (1.0 + i4.value.abs()) {
                Ok(DeltaPhi::Finite { value: i4.value, error: i4.error + (i4.value - i2.value).abs() })
            } else {
                Ok(DeltaPhi::Diverges { rate: (i4.value - i2.value) / (4.0 * l), samples })
            }
        }
    }
}

/// [`delta_phi`] for HHM families.
pub fn hhm_delta_phi(profile: &impl PhaseRate, domain: SpaceKind) -> Result<DeltaPhi> {
    delta_phi(profile, domain)
}

/// Closed form of the phase of the normalized sine family for `k > 1`,
/// `v ≠ 0`: `g = arg Ξ` with
/// `Ξ(ξ) = (tan(ξ/2) + Ω)/(−tan(ξ/2) − Ω⁻¹)`, `Ω = (v − ik − iγ)/(1 + ikv)`,
/// `γ = √((v²+1)(k²−1))`. The integration constant is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseClosedForm {
    pub k: f64,
    pub v: f64,
    pub gamma: f64,
    pub omega: Complex64,
}

impl PhaseClosedForm {
    pub fn new(k: f64, v: f64) -> Result<Self> {
        if !(k > 1.0) {
            return Err(Error::domain(format!("phase closed form needs k > 1 (k = {k})")));
        }
        if v == 0.0 || !v.is_finite() {
            return Err(Error::domain("phase closed form needs v != 0"));
        }
        let gamma = ((v * v + 1.0) * (k * k - 1.0)).sqrt();
        let omega = Complex64::new(v, -k - gamma) / Complex64::new(1.0, k * v);
        Ok(Self { k, v, gamma, omega })
    }

    /// The matching sine profile `p = −kv + γ sin ξ`.
    pub fn profile(&self) -> HhmSine {
        HhmSine::normalized(self.k, self.v).expect("k > 1")
    }

    /// `Ξ(ξ)`; near `ξ = ±π` evaluated through `cot(ξ/2)`, which gives
    /// `Ξ(±π) = −1`.
    pub fn xi_map(&self, xi: f64) -> Complex64 {
        let (s, c) = (0.5 * xi).sin_cos();
        if c.abs() >= s.abs() {
            let t = s / c;
            (t + self.omega) / (-t - self.omega.inv())
        } else {
            let u = c / s;
            (1.0 + self.omega * u) / (-1.0 - u / self.omega)
        }
    }

    /// `Re[−i ln Ξ]` on the principal branch.
    pub fn principal(&self, xi: f64) -> f64 {
        self.xi_map(xi).arg()
    }

    /// The printed intermediate form `arg[(tan(ξ/2) + a/b)/(tan(ξ/2) + c/b)]`
    /// with `a = v − ik − iγ`, `b = 1 + ikv`, `c = −v + ik − iγ`.
    pub fn principal_unsimplified(&self, xi: f64) -> f64 {
        let (k, v, g) = (self.k, self.v, self.gamma);
        let a = Complex64::new(v, -k - g);
        let b = Complex64::new(1.0, k * v);
        let c = Complex64::new(-v, k - g);
        let t = (0.5 * xi).tan();
        ((t + a / b) / (t + c / b)).arg()
    }

    fn unwrap_steps(&self, span: f64) -> usize {
        // |dg/dξ| ≤ |k| + |v|, so increments stay below 1/4
        ((4.0 * span.abs() * (self.k.abs() + self.v.abs() + 1.0)).ceil() as usize).max(1)
    }

    /// `g(ξ)` made continuous on `[−π, π]` by unwrapping from `ξ = 0`.
    pub fn lift(&self, xi: f64) -> Result<f64> {
        if !(-PI..=PI).contains(&xi) {
            return Err(Error::domain(format!("phase lift defined on [-pi, pi] (xi = {xi})")));
        }
        let steps = self.unwrap_steps(xi);
        let mut prev = self.principal(0.0);
        let mut g = prev;
        for i in 1..=steps {
            let a = self.principal(xi * i as f64 / steps as f64);
            g += principal_increment(a - prev);
            prev = a;
        }
        Ok(g)
    }

    /// Continuous `g` on an ascending list of samples.
    pub fn sample(&self, xis: &[f64]) -> Result<Vec<f64>> {
        let Some(&first) = xis.first() else {
            return Ok(Vec::new());
        };
        let mut g = self.lift(first)?;
        let mut prev = first;
        let mut out = Vec::with_capacity(xis.len());
        out.push(g);
        for &xi in &xis[1..] {
            if !(-PI..=PI).contains(&xi) || xi < prev {
                return Err(Error::domain("phase samples must ascend within [-pi, pi]"));
            }
            let steps = self.unwrap_steps(xi - prev);
            let mut last = self.principal(prev);
            for i in 1..=steps {
                let a = self.principal(prev + (xi - prev) * i as f64 / steps as f64);
                g += principal_increment(a - last);
                last = a;
            }
            out.push(g);
            prev = xi;
        }
        Ok(out)
    }

    /// `g(π) − g(−π)`.
    pub fn total_change(&self) -> f64 {
        self.lift(PI).unwrap() - self.lift(-PI).unwrap()
    }
}

/// The unique `ξ*` where `Ξ` crosses the positive real axis:
/// `ξ* = 2 atan[−2(v − k²v − γkv)(1 + k²v²) /
///       ((v − k²v − γkv)² + (k + γ + kv²)² + (1 + k²v²)²)]`.
pub fn xi_crossing(k: f64, v: f64) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(Error::domain(format!("xi_crossing needs k >= 1 (k = {k})")));
    }
    let gamma = ((v * v + 1.0) * (k * k - 1.0)).sqrt();
    let a = v - k * k * v - gamma * k * v;
    let b = k + gamma + k * v * v;
    let c = 1.0 + k * k * v * v;
    Ok(2.0 * (-2.0 * a * c / (a * a + b * b + c * c)).atan())
}

/// Cnoidal profile `p = p2 − (p2 − p3) cn²(w(ξ − ξ3) | m)`,
/// `w = √((p1 − p3)/2)`, `m = (p2 − p3)/(p1 − p3)`, on the `c = 1` cubic with
/// zeros `p1 > p2 > p3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhmCnoidal {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub xi3: f64,
    pub params: TravellingWaveParams,
    m: EllipticParameter,
    w: f64,
}

impl HhmCnoidal {
    pub fn new(p1: f64, p2: f64, p3: f64, xi3: f64) -> Result<Self> {
        if !(p1 > p2 && p2 > p3) {
            return Err(Error::domain(format!(
                "hhm-cnoidal needs p1 > p2 > p3 (got {p1}, {p2}, {p3})"
            )));
        }
        let params = TravellingWaveParams::from_roots(p1, p2, p3);
        params.check_roots([p1, p2, p3])?;
        let m = EllipticParameter::new(((p2 - p3) / (p1 - p3)).min(1.0))?;
        Ok(Self { p1, p2, p3, xi3, params, m, w: (0.5 * (p1 - p3)).sqrt() })
    }

    pub fn m(&self) -> f64 {
        self.m.value()
    }
}

impl TravellingProfile for HhmCnoidal {
    fn p(&self, xi: f64) -> f64 {
        let cn = self.m.jacobi(self.w * (xi - self.xi3)).cn;
        self.p2 - (self.p2 - self.p3) * cn * cn
    }

    fn dp(&self, xi: f64) -> f64 {
        let j = self.m.jacobi(self.w * (xi - self.xi3));
        2.0 * (self.p2 - self.p3) * self.w * j.cn * j.sn * j.dn
    }

    fn potential(&self) -> PotentialPoly {
        self.params.potential()
    }

    /// `2K(m)·√(2/(p1 − p3))`.
    fn period(&self) -> Option<f64> {
        self.m.quarter_period().ok().map(|k| 2.0 * k / self.w)
    }
}

impl PhaseRate for HhmCnoidal {
    fn phase_rate(&self, xi: f64) -> f64 {
        hhm_dg_dxi(self.p(xi), self.params.k, self.params.v)
    }
}

/// `p1 − (p1 − p3) sech²(w(ξ − ξ0))`, the `m = 1` limit with a double zero at
/// `p1`.
pub fn hhm_sech_limit(p1: f64, p3: f64, xi0: f64, xi: f64) -> f64 {
    let w = (0.5 * (p1 - p3)).sqrt();
    let s = 1.0 / (w * (xi - xi0)).cosh();
    p1 - (p1 - p3) * s * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhmSech {
    pub p1: f64,
    pub p3: f64,
    pub xi0: f64,
    pub params: TravellingWaveParams,
}

impl HhmSech {
    pub fn new(p1: f64, p3: f64, xi0: f64) -> Result<Self> {
        if !(p1 > p3) {
            return Err(Error::domain(format!("hhm-sech needs p1 > p3 (got {p1}, {p3})")));
        }
        let params = TravellingWaveParams::from_roots(p1, p1, p3);
        params.check_roots([p1, p1, p3])?;
        Ok(Self { p1, p3, xi0, params })
    }

    /// The profile behind the plotted Hamiltonian density: `p1 = 0`,
    /// `p3 = −2` (`Q = 0`, `v² = 2 + √5`, `kv = 1`).
    pub fn one_wind() -> Self {
        Self::new(0.0, -2.0, 0.0).expect("valid roots")
    }

    /// Asymptotic `dg/dξ` as `ξ → ±∞`: `(k − v p1)/(1 + p1²)`.
    pub fn asymptotic_rate(&self) -> f64 {
        hhm_dg_dxi(self.p1, self.params.k, self.params.v)
    }

    fn w(&self) -> f64 {
        (0.5 * (self.p1 - self.p3)).sqrt()
    }

    /// Energy density `½(cosh²θ φ_x² − θ_x²)` along the profile.
    pub fn density(&self, xi: f64) -> f64 {
        hhm_travelling_density(self.p(xi), self.dp(xi), self.params.k, self.params.v)
    }
}

impl TravellingProfile for HhmSech {
    fn p(&self, xi: f64) -> f64 {
        hhm_sech_limit(self.p1, self.p3, self.xi0, xi)
    }

    fn dp(&self, xi: f64) -> f64 {
        let w = self.w();
        let x = w * (xi - self.xi0);
        let s = 1.0 / x.cosh();
        2.0 * (self.p1 - self.p3) * w * s * s * x.tanh()
    }

    fn potential(&self) -> PotentialPoly {
        self.params.potential()
    }

    fn period(&self) -> Option<f64> {
        None
    }
}

impl PhaseRate for HhmSech {
    fn phase_rate(&self, xi: f64) -> f64 {
        hhm_dg_dxi(self.p(xi), self.params.k, self.params.v)
    }
}

/// Partial-fraction form of `dg/dξ` for the one-wind sech² profile
/// (`p1 = 0`, `p3 = −2`, `X = ξ − ξ0`):
/// `κ + Ω[1/(λ − cosh X) + 1/(λ + cosh X)] + c.c.` with
/// `γ = (k² − v² + 2Q + 4)/6`, `Ω = (v − ik)√(γ + i)/(2√2 (γ + i)²)`,
/// `λ = (2/(γ + i))^{1/2}`. The constant is `κ = (k − vγ)/(1 − γ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SechLimitParams {
    pub k: f64,
    pub v: f64,
    pub q: f64,
    pub gamma: f64,
    pub omega: Complex64,
    pub lambda: Complex64,
}

impl SechLimitParams {
    pub fn new(k: f64, v: f64, q: f64) -> Self {
        let gamma = (k * k - v * v + 2.0 * q + 4.0) / 6.0;
        let gi = Complex64::new(gamma, 1.0);
        let omega = Complex64::new(v, -k) * gi.sqrt() / (2.0 * 2.0f64.sqrt() * gi * gi);
        let lambda = (2.0 / gi).sqrt();
        Self { k, v, q, gamma, omega, lambda }
    }

    pub fn rate(&self, x: f64) -> f64 {
        let c = x.cosh();
        let head = (self.k - self.v * self.gamma) / (1.0 - self.gamma * self.gamma);
        let pair = self.omega * (1.0 / (self.lambda - c) + 1.0 / (self.lambda + c));
        head + 2.0 * pair.re
    }
}

/// `√(2 + √5)`.
fn one_wind_speed() -> f64 {
    (2.0 + 5.0f64.sqrt()).sqrt()
}

/// Plotted Hamiltonian density of the one-wind sech² solution:
/// `([1 + 2(2+√5)sech²X]² − 16√(2+√5) sech⁴X tanh²X) / (√(2+√5)(1 + 4 sech⁴X))`.
pub fn hhm_hamiltonian_profile(x: f64) -> f64 {
    let r = one_wind_speed();
    let s = 1.0 / x.cosh();
    let s2 = s * s;
    let s4 = s2 * s2;
    let t = x.tanh();
    let head = 1.0 + 2.0 * r * r * s2;
    (head * head - 16.0 * r * s4 * t * t) / (r * (1.0 + 4.0 * s4))
}

/// `lim_{|X|→∞}` of [`hhm_hamiltonian_profile`]: `(2 + √5)^{−1/2}`.
pub fn hamiltonian_plateau() -> f64 {
    1.0 / one_wind_speed()
}

/// HSM blow-up `tanh θ = sn(ρ(t − t0) | m)`, `m = 1 − N²/ρ²`, `φ = Nx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsmBlowup {
    pub n: i64,
    pub rho: f64,
    pub t0: f64,
    m: EllipticParameter,
    quarter: f64,
}

impl HsmBlowup {
    pub fn new(n: i64, rho: f64, t0: f64) -> Result<Self> {
        let nf = n as f64;
        if n == 0 || !(rho > nf.abs()) {
            return Err(Error::domain(format!(
                "hsm-blowup needs N != 0 and rho > |N| (N = {n}, rho = {rho})"
            )));
        }
        let m = EllipticParameter::new(1.0 - nf * nf / (rho * rho))?;
        let quarter = m.quarter_period()?;
        Ok(Self { n, rho, t0, m, quarter })
    }

    pub fn m(&self) -> f64 {
        self.m.value()
    }

    /// `t* = t0 + K(m)/ρ`.
    pub fn blowup_time(&self) -> f64 {
        self.t0 + self.quarter / self.rho
    }

    fn check(&self, t: f64) -> Result<f64> {
        let u = self.rho * (t - self.t0);
        if u >= self.quarter {
            return Err(Error::BlowUp { blowup_time: self.blowup_time() });
        }
        if u <= -self.quarter {
            return Err(Error::domain("hsm-blowup: before the backward singularity"));
        }
        Ok(u)
    }

    pub fn tanh_theta(&self, t: f64) -> Result<f64> {
        Ok(self.m.jacobi(self.check(t)?).sn)
    }

    pub fn theta(&self, t: f64) -> Result<f64> {
        Ok(self.tanh_theta(t)?.atanh())
    }

    /// `θ_t = ρ dn/cn`.
    pub fn theta_t(&self, t: f64) -> Result<f64> {
        let j = self.m.jacobi(self.check(t)?);
        Ok(self.rho * j.dn / j.cn)
    }

    /// `E = 2π[N² cosh²θ − (N² sinh²θ + ρ²)] = 2π(N² − ρ²)`.
    pub fn energy(&self) -> f64 {
        let n = self.n as f64;
        TAU * (n * n - self.rho * self.rho)
    }
}

/// `θ(t)` of [`HsmBlowup`], erroring with `t*` once `t ≥ t*`.
pub fn hsm_blowup_theta(params: &HsmBlowup, t: f64) -> Result<f64> {
    params.theta(t)
}

/// HSM sine profile `p = √(B²/N² − 1) sin(N(ξ − ξ0))` with
/// `g′ = B sech² f = B/(1 + p²)` and `p′² = B² − N² − N²p²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsmSine {
    pub b: f64,
    pub n: i64,
    pub xi0: f64,
}

impl HsmSine {
    pub fn new(b: f64, n: i64, xi0: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("hsm-sine: N must be non-zero"));
        }
        let nf = n as f64;
        if b * b < nf * nf {
            return Err(Error::domain(format!(
                "hsm-sine needs B^2 >= N^2 for a real amplitude (B = {b}, N = {n})"
            )));
        }
        Ok(Self { b, n, xi0 })
    }

    pub fn amplitude(&self) -> f64 {
        let n = self.n as f64;
        (self.b * self.b / (n * n) - 1.0).max(0.0).sqrt()
    }
}

/// `√(B²/N² − 1) sin(N(ξ − ξ0))`.
pub fn hsm_sine(b: f64, n: i64, xi0: f64, xi: f64) -> Result<f64> {
    Ok(HsmSine::new(b, n, xi0)?.p(xi))
}

impl TravellingProfile for HsmSine {
    fn p(&self, xi: f64) -> f64 {
        let n = self.n as f64;
        self.amplitude() * (n * (xi - self.xi0)).sin()
    }

    fn dp(&self, xi: f64) -> f64 {
        let n = self.n as f64;
        self.amplitude() * n * (n * (xi - self.xi0)).cos()
    }

    fn potential(&self) -> PotentialPoly {
        let n2 = (self.n * self.n) as f64;
        PotentialPoly::from_poly(
            Poly::new([self.b * self.b - n2, 0.0, -n2]),
            Convention::FullSquared,
            Provenance::Family("hsm-sine"),
        )
    }

    fn period(&self) -> Option<f64> {
        Some(TAU / (self.n as f64).abs())
    }
}

impl PhaseRate for HsmSine {
    fn phase_rate(&self, xi: f64) -> f64 {
        let p = self.p(xi);
        self.b / (1.0 + p * p)
    }
}

/// HSM travelling wave `p = J sn(cK(ξ − ξ0)/(v² − 1) | J²/K²)`, with
/// `p′² = c²/(v²−1)² (p² − J²)(p² − K²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsmElliptic {
    pub j: f64,
    pub k: f64,
    pub c: f64,
    pub v: f64,
    pub xi0: f64,
    m: EllipticParameter,
}

impl HsmElliptic {
    pub fn new(j: f64, k: f64, c: f64, v: f64, xi0: f64) -> Result<Self> {
        if v * v == 1.0 {
            return Err(Error::SingularReduction);
        }
        if !(j > 0.0 && j <= k) {
            return Err(Error::domain(format!("hsm-elliptic needs 0 < J <= K (J = {j}, K = {k})")));
        }
        if c == 0.0 {
            return Err(Error::domain("hsm-elliptic needs c != 0"));
        }
        let m = EllipticParameter::new(((j * j) / (k * k)).min(1.0))?;
        Ok(Self { j, k, c, v, xi0, m })
    }

    pub fn from_pair(pair: JkPair, c: f64, v: f64, xi0: f64) -> Result<Self> {
        Self::new(pair.j(), pair.k(), c, v, xi0)
    }

    /// From the reduced constants `(q, ρ)` at `c = 1`.
    pub fn from_reduced(q: f64, rho: f64, v: f64, xi0: f64) -> Result<Self> {
        let pair = match_jk(q, rho).map_err(|e| Error::domain(format!("{e}")))?;
        Self::from_pair(pair, 1.0, v, xi0)
    }

    pub fn m(&self) -> f64 {
        self.m.value()
    }

    fn scale(&self) -> f64 {
        self.c * self.k / (self.v * self.v - 1.0)
    }
}

impl TravellingProfile for HsmElliptic {
    fn p(&self, xi: f64) -> f64 {
        self.j * self.m.jacobi(self.scale() * (xi - self.xi0)).sn
    }

    fn dp(&self, xi: f64) -> f64 {
        let j = self.m.jacobi(self.scale() * (xi - self.xi0));
        self.j * self.scale() * j.cn * j.dn
    }

    fn potential(&self) -> PotentialPoly {
        let w = self.v * self.v - 1.0;
        let s = self.c * self.c / (w * w);
        let (j2, k2) = (self.j * self.j, self.k * self.k);
        PotentialPoly::from_poly(
            Poly::new([s * j2 * k2, 0.0, -s * (j2 + k2), 0.0, s]),
            Convention::FullSquared,
            Provenance::Family("hsm-elliptic"),
        )
    }

    /// `4K(m)(v² − 1)/(cK)`.
    fn period(&self) -> Option<f64> {
        self.m.quarter_period().ok().map(|q| (4.0 * q / self.scale()).abs())
    }
}

/// Phase of the HSM `J = K = p0` tanh wave, `X = c p0 (ξ − ξ0)/(v² − 1)`:
/// `dg/dξ = cv/(v²−1) + (2R(v²−1) − cv)/(2(v²−1)(1 + p0² tanh²X))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsmTanh {
    pub p0: f64,
    pub c: f64,
    pub v: f64,
    pub r: f64,
    pub xi0: f64,
}

impl HsmTanh {
    pub fn new(p0: f64, c: f64, v: f64, r: f64) -> Result<Self> {
        if v * v == 1.0 {
            return Err(Error::SingularReduction);
        }
        if !(p0 > 0.0) || c == 0.0 {
            return Err(Error::domain("hsm-tanh needs p0 > 0 and c != 0"));
        }
        Ok(Self { p0, c, v, r, xi0: 0.0 })
    }

    fn w(&self) -> f64 {
        self.v * self.v - 1.0
    }

    pub fn p(&self, xi: f64) -> f64 {
        self.p0 * (self.c * self.p0 * (xi - self.xi0) / self.w()).tanh()
    }

    /// `dg/dξ` as `|ξ| → ∞`.
    pub fn asymptotic_rate(&self) -> f64 {
        let w = self.w();
        let cv = self.c * self.v;
        cv / w + (2.0 * self.r * w - cv) / (2.0 * w * (1.0 + self.p0 * self.p0))
    }

    /// `R` for which the asymptotic rate vanishes: `−cv(1 + 2p0²)/(2(v² − 1))`.
    pub fn balanced_r(p0: f64, c: f64, v: f64) -> f64 {
        -c * v * (1.0 + 2.0 * p0 * p0) / (2.0 * (v * v - 1.0))
    }
}

impl PhaseRate for HsmTanh {
    fn phase_rate(&self, xi: f64) -> f64 {
        let w = self.w();
        let cv = self.c * self.v;
        let p = self.p(xi);
        cv / w + (2.0 * self.r * w - cv) / (2.0 * w * (1.0 + p * p))
    }
}

/// `Δφ` of the tanh wave over `[−L, L]` with the divergence detector.
pub fn hsm_tanh_delta_phi(p0: f64, c: f64, v: f64, r: f64, half_length: f64) -> Result<DeltaPhi> {
    delta_phi(&HsmTanh::new(p0, c, v, r)?, SpaceKind::TruncatedLine { half_length })
}

/// `K(m)` helper used by callers that need the blow-up time without a
/// family handle.
pub fn blowup_time(n: i64, rho: f64, t0: f64) -> Result<f64> {
    let nf = n as f64;
    Ok(t0 + complete_k(1.0 - nf * nf / (rho * rho))? / rho)
}
