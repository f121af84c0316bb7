//! Travelling-wave reductions.
//!
//! With `θ = f(ξ)`, `φ = g(ξ) + ct`, `ξ = x − vt` and `p = sinh f`, both
//! models reduce to a one-degree-of-freedom problem `p′² ∝ P(p)`:
//!
//! - HHM: `p′²/2 = c p³ + (v² − k² + 2Q) p²/2 + (c − kv) p + Q` (cubic).
//! - HSM (`c ≠ 0`): `p′² = c²/(v²−1)² · [p⁴ + b p² + d]` (even quartic).
//!
//! Bounded oscillations live between consecutive real zeros of `P` where
//! `P > 0`; solutions on the real line need a double zero at the end of such
//! an interval. This module builds the potentials, classifies their zeros,
//! matches the HSM quartic to `(p² − J²)(p² − K²)` and decides whether a
//! winding travelling wave can exist on `ℝ`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;
use num_traits::Float;

use crate::poly::Poly;
use crate::{Error, Result};

/// Default relative clustering tolerance for root multiplicities.
pub const ROOT_TOL: f64 = 1e-8;

/// Clustering tolerance for the HSM `(q, ρ)` scan. The constant term of the
/// quartic suffers cancellation, so exact double zeros split by `O(√ε)`.
pub const HSM_ROOT_TOL: f64 = 1e-6;

/// Default relative tolerance for the algebraic case dispatch.
pub const CASE_TOL: f64 = 1e-10;

/// Which power of `p′` the potential equals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `p′²/2 = P(p)` (HHM).
    HalfSquared,
    /// `p′² = P(p)` (HSM).
    FullSquared,
}

/// Parameters a potential was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Hhm { k: f64, v: f64, c: f64, q: f64 },
    Hsm { v: f64, c: f64, q: f64, r: f64 },
    /// Assembled directly for a closed-form family.
    Family(&'static str),
}

/// An effective potential `P(p)` together with its source.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPoly {
    poly: Poly,
    /// Polynomial whose zeros are classified. For the HSM this is the monic
    /// bracketed quartic; for the HHM it is `poly` itself.
    root_poly: Poly,
    pub convention: Convention,
    pub provenance: Provenance,
}

impl PotentialPoly {
    /// Wraps an arbitrary polynomial, e.g. one assembled from known roots.
    pub fn from_poly(poly: Poly, convention: Convention, provenance: Provenance) -> Self {
        Self { root_poly: poly.clone(), poly, convention, provenance }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn root_poly(&self) -> &Poly {
        &self.root_poly
    }

    pub fn coeffs(&self) -> &[f64] {
        self.poly.coeffs()
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.poly.eval(p)
    }

    /// Left side minus right side of the reduced equation at `(p, p′)`.
    pub fn residual(&self, p: f64, dp: f64) -> f64 {
        let lhs = match self.convention {
            Convention::HalfSquared => 0.5 * dp * dp,
            Convention::FullSquared => dp * dp,
        };
        lhs - self.eval(p)
    }
}

/// `P(p) = c p³ + (v² − k² + 2Q) p²/2 + (c − kv) p + Q`, with `p′²/2 = P`.
pub fn build_p_hhm(k: f64, v: f64, c: f64, q: f64) -> PotentialPoly {
    let poly = Poly::new([q, c - k * v, 0.5 * (v * v - k * k + 2.0 * q), c]);
    PotentialPoly::from_poly(poly, Convention::HalfSquared, Provenance::Hhm { k, v, c, q })
}

/// HSM quartic for `c ≠ 0`, with `p′² = P`:
///
/// `P = c²/(v²−1)² [p⁴ + p²(6c² + 4Q(v²−1)²)/(4c²)
///      + (2c² + 4Q(v²−1)² + (4R(v²−1)² − cv)²)/(4c²)]`.
pub fn build_p_hsm(v: f64, c: f64, q: f64, r: f64) -> Result<PotentialPoly> {
    let w = v * v - 1.0;
    if w == 0.0 {
        return Err(Error::SingularReduction);
    }
    if c == 0.0 {
        return Err(Error::domain("build_p_hsm: c = 0 has no quartic reduction (use the sine family)"));
    }
    let w2 = w * w;
    let c2 = c * c;
    let shifted = 4.0 * r * w2 - c * v;
    let b = (6.0 * c2 + 4.0 * q * w2) / (4.0 * c2);
    let d = (2.0 * c2 + 4.0 * q * w2 + shifted * shifted) / (4.0 * c2);
    let bracket = Poly::new([d, 0.0, b, 0.0, 1.0]);
    let scale = c2 / w2;
    Ok(PotentialPoly {
        poly: bracket.scaled(scale),
        root_poly: bracket,
        convention: Convention::FullSquared,
        provenance: Provenance::Hsm { v, c, q, r },
    })
}

/// HSM constants `(Q, R)` for `c = 1` from the reduced pair
/// `q = Q(v²−1)²`, `4ρ = 4R(v²−1)² − v`.
pub fn hsm_constants_from_reduced(q_reduced: f64, rho: f64, v: f64) -> Result<(f64, f64)> {
    let w = v * v - 1.0;
    if w == 0.0 {
        return Err(Error::SingularReduction);
    }
    let w2 = w * w;
    Ok((q_reduced / w2, (4.0 * rho + v) / (4.0 * w2)))
}

/// Shape of the zero set of a potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootKind {
    Constant,
    Linear,
    TwoDistinctReal,
    DoubleRoot,
    ComplexPair,
    ThreeDistinctReal,
    DoubleRootPlusSimple { double: f64, simple: f64 },
    TripleRoot,
    OneRealPlusComplexPair,
    FourDistinctReal,
    TwoRealPlusComplexPair,
    TwoComplexPairs,
    DoubleRootPlusTwoSimple,
    DoubleRootPlusComplexPair,
    TwoDoubleRoots { lower: f64, upper: f64 },
    TripleRootPlusSimple,
    QuadrupleRoot,
    DoubleComplexPair,
}

impl RootKind {
    pub fn name(&self) -> &'static str {
        match self {
            RootKind::Constant => "Constant",
            RootKind::Linear => "Linear",
            RootKind::TwoDistinctReal => "TwoDistinctReal",
            RootKind::DoubleRoot => "DoubleRoot",
            RootKind::ComplexPair => "ComplexPair",
            RootKind::ThreeDistinctReal => "ThreeDistinctReal",
            RootKind::DoubleRootPlusSimple { .. } => "DoubleRootPlusSimple",
            RootKind::TripleRoot => "TripleRoot",
            RootKind::OneRealPlusComplexPair => "OneRealPlusComplexPair",
            RootKind::FourDistinctReal => "FourDistinctReal",
            RootKind::TwoRealPlusComplexPair => "TwoRealPlusComplexPair",
            RootKind::TwoComplexPairs => "TwoComplexPairs",
            RootKind::DoubleRootPlusTwoSimple => "DoubleRootPlusTwoSimple",
            RootKind::DoubleRootPlusComplexPair => "DoubleRootPlusComplexPair",
            RootKind::TwoDoubleRoots { .. } => "TwoDoubleRoots",
            RootKind::TripleRootPlusSimple => "TripleRootPlusSimple",
            RootKind::QuadrupleRoot => "QuadrupleRoot",
            RootKind::DoubleComplexPair => "DoubleComplexPair",
        }
    }
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
}

/// Zeros of a potential, merged into multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct RootStructure {
    pub kind: RootKind,
    /// Distinct real zeros in ascending order.
    pub real: Vec<RealRoot>,
    /// One representative (positive imaginary part) per conjugate pair.
    pub complex: Vec<(Complex64, usize)>,
    /// Bounded intervals between consecutive real zeros on which `P > 0`.
    pub positive_intervals: Vec<(f64, f64)>,
    /// The leading coefficient was negligible and the degree was reduced.
    pub degree_reduced: bool,
    pub degree: usize,
    pub tol: f64,
}

impl RootStructure {
    /// Real zeros repeated by multiplicity.
    pub fn real_with_multiplicity(&self) -> Vec<f64> {
        self.real
            .iter()
            .flat_map(|r| core::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Roots of `p` grouped by multiplicity.
///
/// A root `w` of `p′` of multiplicity `μ−1` is a root of `p` of multiplicity
/// `μ` when the local model `p(w) + p⁽μ⁾(w)(x−w)^μ/μ!` places its `μ` zeros
/// within `tol·(1+|w|)` of each other, or when `|p(w)|` is at rounding
/// level. This resolves multiple roots far more accurately than clustering
/// the (√ε-split) companion eigenvalues directly.
fn root_clusters(p: &Poly, tol: f64) -> Vec<(Complex64, usize)> {
    let n = p.degree();
    if n == 0 {
        return Vec::new();
    }
    let raw = p.roots();
    if n == 1 {
        return raw.into_iter().map(|z| (z, 1)).collect();
    }
    let mut used = vec![false; n];
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for (w, mult_d) in root_clusters(&p.derivative(), tol) {
        let mu = mult_d + 1;
        let value = p.eval_complex(w).norm();
        let mut dmu = p.clone();
        for _ in 0..mu {
            dmu = dmu.derivative();
        }
        let curvature = dmu.eval_complex(w).norm();
        let spread = if curvature > 0.0 {
            2.0 * (factorial(mu) * value / curvature).powf(1.0 / mu as f64)
        } else {
            f64::INFINITY
        };
        let rounding = 4.0 * f64::EPSILON * p.magnitude_at(w.norm());
        if spread > tol * (1.0 + w.norm()) && value > rounding {
            continue;
        }
        // claim the μ nearest unclaimed eigenvalues
        let mut claimed = 0;
        while claimed < mu {
            let best = (0..n)
                .filter(|&i| !used[i])
                .min_by(|&a, &b| (raw[a] - w).norm().partial_cmp(&(raw[b] - w).norm()).unwrap());
            match best {
                Some(i) => used[i] = true,
                None => break,
            }
            claimed += 1;
        }
        let w = if w.im.abs() <= tol * (1.0 + w.norm()) { Complex64::new(w.re, 0.0) } else { w };
        out.push((w, claimed));
    }
    // remaining eigenvalues: plain distance clustering
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut sum = raw[i];
        let mut count = 1;
        for j in (i + 1)..n {
            if !used[j] && (raw[j] - raw[i]).norm() <= tol * (1.0 + raw[i].norm()) {
                used[j] = true;
                sum += raw[j];
                count += 1;
            }
        }
        out.push((sum / count as f64, count));
    }
    out
}

/// Classifies the zeros of `P` (the monic bracket for the HSM quartic).
pub fn classify_roots(potential: &PotentialPoly, tol: f64) -> RootStructure {
    classify_poly(potential.root_poly(), tol)
}

/// As [`classify_roots`], for a bare polynomial.
pub fn classify_poly(poly: &Poly, tol: f64) -> RootStructure {
    let (poly, degree_reduced) = poly.trimmed(tol);
    let degree = poly.degree();
    let mut real: Vec<RealRoot> = Vec::new();
    let mut complex: Vec<(Complex64, usize)> = Vec::new();
    for (z, mult) in root_clusters(&poly, tol) {
        if z.im.abs() <= tol * (1.0 + z.norm()) {
            real.push(RealRoot { value: z.re, multiplicity: mult });
        } else if z.im > 0.0 {
            complex.push((z, mult));
        }
    }
    real.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());

    let positive_intervals = real
        .windows(2)
        .filter(|w| poly.eval(0.5 * (w[0].value + w[1].value)) > 0.0)
        .map(|w| (w[0].value, w[1].value))
        .collect();

    let mut mults: Vec<usize> = real.iter().map(|r| r.multiplicity).collect();
    mults.sort_unstable();
    let cmults: Vec<usize> = complex.iter().map(|c| c.1).collect();
    let kind = match (degree, mults.as_slice(), cmults.as_slice()) {
        (0, _, _) => RootKind::Constant,
        (1, _, _) => RootKind::Linear,
        (2, [1, 1], []) => RootKind::TwoDistinctReal,
        (2, [2], []) => RootKind::DoubleRoot,
        (2, [], [1]) => RootKind::ComplexPair,
        (3, [1, 1, 1], []) => RootKind::ThreeDistinctReal,
        (3, [1, 2], []) => {
            let double = real.iter().find(|r| r.multiplicity == 2).unwrap().value;
            let simple = real.iter().find(|r| r.multiplicity == 1).unwrap().value;
            RootKind::DoubleRootPlusSimple { double, simple }
        }
        (3, [3], []) => RootKind::TripleRoot,
        (3, [1], [1]) => RootKind::OneRealPlusComplexPair,
        (4, [1, 1, 1, 1], []) => RootKind::FourDistinctReal,
        (4, [1, 1], [1]) => RootKind::TwoRealPlusComplexPair,
        (4, [], [1, 1]) => RootKind::TwoComplexPairs,
        (4, [1, 1, 2], []) => RootKind::DoubleRootPlusTwoSimple,
        (4, [2], [1]) => RootKind::DoubleRootPlusComplexPair,
        (4, [2, 2], []) => RootKind::TwoDoubleRoots { lower: real[0].value, upper: real[1].value },
        (4, [1, 3], []) => RootKind::TripleRootPlusSimple,
        (4, [4], []) => RootKind::QuadrupleRoot,
        (4, [], [2]) => RootKind::DoubleComplexPair,
        // Inconsistent clustering (should not happen); fall back on counts.
        (d, _, _) => {
            let distinct_real = real.len();
            match d {
                2 if distinct_real == 0 => RootKind::ComplexPair,
                3 if distinct_real == 1 => RootKind::OneRealPlusComplexPair,
                4 if distinct_real == 0 => RootKind::TwoComplexPairs,
                _ => RootKind::Constant,
            }
        }
    };
    RootStructure { kind, real, complex, positive_intervals, degree_reduced, degree, tol }
}

/// One of the three conditions on `(q, ρ)` for the quartic to factor as
/// `(p² − J²)(p² − K²)` with `0 < J² ≤ K²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JkCondition {
    /// `q < −3/2` (`J² + K² > 0`).
    SumPositive,
    /// `2q > −(8ρ² + 1)` (`J² K² > 0`).
    ProductPositive,
    /// `1 − 2q ≥ 8|ρ|` (real `J², K²`).
    RealSquares,
}

impl JkCondition {
    pub fn inequality(self) -> &'static str {
        match self {
            JkCondition::SumPositive => "q < -3/2",
            JkCondition::ProductPositive => "2q > -(8rho^2+1)",
            JkCondition::RealSquares => "1-2q >= 8|rho|",
        }
    }

    pub fn holds(self, q: f64, rho: f64) -> bool {
        match self {
            JkCondition::SumPositive => q < -1.5,
            JkCondition::ProductPositive => 2.0 * q > -(8.0 * rho * rho + 1.0),
            JkCondition::RealSquares => 1.0 - 2.0 * q >= 8.0 * rho.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inadmissible {
    pub failed: JkCondition,
}

impl fmt::Display for Inadmissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inadmissible (q, rho): condition {} fails", self.failed.inequality())
    }
}

/// `(J², K²)` with `J² ≤ K²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JkPair {
    pub j_sq: f64,
    pub k_sq: f64,
}

impl JkPair {
    pub fn j(&self) -> f64 {
        self.j_sq.sqrt()
    }
    pub fn k(&self) -> f64 {
        self.k_sq.sqrt()
    }
    /// Elliptic parameter `m = J²/K²`.
    pub fn m(&self) -> f64 {
        self.j_sq / self.k_sq
    }
}

/// Solves `−(J² + K²) = (6 + 4q)/4`, `J² K² = (2 + 4q + 16ρ²)/4` (with
/// `c = 1`). Admissible when both squares are real and positive.
pub fn match_jk(q: f64, rho: f64) -> core::result::Result<JkPair, Inadmissible> {
    let sum = -(6.0 + 4.0 * q) / 4.0;
    let product = (2.0 + 4.0 * q + 16.0 * rho * rho) / 4.0;
    // sum² − 4·product = ((1 − 2q)² − 64ρ²)/4, factored to keep its sign exact
    let a = 1.0 - 2.0 * q;
    let b = 8.0 * rho.abs();
    let disc = (a - b) * (a + b) / 4.0;
    let admissible = disc >= 0.0 && sum > 0.0 && product > 0.0;
    if !admissible {
        let failed = [JkCondition::SumPositive, JkCondition::ProductPositive, JkCondition::RealSquares]
            .into_iter()
            .find(|c| !c.holds(q, rho))
            .unwrap_or(JkCondition::RealSquares);
        return Err(Inadmissible { failed });
    }
    let k_sq = 0.5 * (sum + disc.sqrt());
    let j_sq = product / k_sq;
    Ok(JkPair { j_sq, k_sq })
}

/// The algebraic branches of `P(k/v) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExistenceCase {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl ExistenceCase {
    pub fn letter(self) -> char {
        match self {
            ExistenceCase::A => 'a',
            ExistenceCase::B => 'b',
            ExistenceCase::C => 'c',
            ExistenceCase::D => 'd',
            ExistenceCase::E => 'e',
            ExistenceCase::F => 'f',
        }
    }
}

/// Why a parameter tuple does not even reach the case analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum InadmissibleReason {
    /// `v = 0`, `k ≠ 0`, `c ≠ 0`: `dg/dξ = k/(1+p²)` has no real zero.
    NoRestPoint,
    /// `P(k/v) ≠ 0`: the profile cannot come to rest at the zero of `dg/dξ`.
    RestPointNotZero { value: f64 },
    /// On the boundary `Q = k²v²/(2α)` of the circle-winding region.
    CircleBoundary,
}

impl fmt::Display for InadmissibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InadmissibleReason::NoRestPoint => f.write_str("dg/dxi has no real zero (v = 0, k != 0)"),
            InadmissibleReason::RestPointNotZero { value } => write!(f, "P(k/v) = {value} != 0"),
            InadmissibleReason::CircleBoundary => f.write_str("degenerate boundary Q = k^2 v^2/(2 alpha)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExistenceVerdict {
    /// Winding travelling wave on `S¹` (the `c = 0` sine family region).
    WindingOnCircle { frequency: f64 },
    /// No winding travelling wave on `ℝ`; `case` is the algebraic branch that
    /// `P(k/v) = 0` falls into and `trace` the contradiction reached.
    NoWindingOnR { case: ExistenceCase, trace: String, witness: Option<Poly> },
    Inadmissible(InadmissibleReason),
}

impl ExistenceVerdict {
    pub fn label(&self) -> String {
        match self {
            ExistenceVerdict::WindingOnCircle { .. } => String::from("WindingOnCircle"),
            ExistenceVerdict::NoWindingOnR { case, .. } => format!("NoWindingOnR({})", case.letter()),
            ExistenceVerdict::Inadmissible(_) => String::from("Inadmissible"),
        }
    }
}

/// Decides whether `(k, v, c, Q)` admits a winding travelling wave of the HHM
/// on the real line. It never does: the result is either a case of the
/// analysis of `P(k/v) = 0` with its contradiction, or `Inadmissible` when
/// `P(k/v) ≠ 0` so the profile cannot settle at the zero of `dg/dξ`.
///
/// Substituting `p = k/v` gives
/// `2v³ P(k/v) = (k² + v²)(2ck + 2Qv − k²v)`.
pub fn winding_existence_hhm_on_r(k: f64, v: f64, c: f64, q: f64, tol: f64) -> ExistenceVerdict {
    let scale = 1.0f64.max(k.abs()).max(v.abs()).max(c.abs()).max(q.abs());
    let zero = |x: f64| x.abs() <= tol * scale;
    let potential = build_p_hhm(k, v, c, q);

    if zero(v) {
        if zero(c) {
            return ExistenceVerdict::NoWindingOnR {
                case: ExistenceCase::B,
                trace: String::from("v = c = 0: travelling speed must be real and non-zero"),
                witness: None,
            };
        }
        if zero(k) {
            return ExistenceVerdict::NoWindingOnR {
                case: ExistenceCase::C,
                trace: String::from("v = k = 0: travelling speed must be real and non-zero"),
                witness: None,
            };
        }
        return ExistenceVerdict::Inadmissible(InadmissibleReason::NoRestPoint);
    }

    let rest = k / v;
    let value = potential.eval(rest);
    if value.abs() > tol * potential.poly().magnitude_at(rest) {
        return ExistenceVerdict::Inadmissible(InadmissibleReason::RestPointNotZero { value });
    }
    // (a): k² + v² = 0 would need v = ±ik, impossible for real v ≠ 0, so the
    // second factor 2ck + 2Qv − k²v vanishes.
    if zero(k) && zero(q) {
        let trace = if zero(c) {
            String::from("k = Q = 0: P(p) = (v^2/2) p^2 has no simple zero, contradicting (ii)")
        } else {
            String::from("k = Q = 0: P'(0) = c != 0, so p = 0 is a simple zero, contradicting (ii)")
        };
        return ExistenceVerdict::NoWindingOnR {
            case: ExistenceCase::D,
            trace,
            witness: Some(potential.poly().clone()),
        };
    }
    // A double zero at k/v also needs P'(k/v) = c(k² + v²)/v² = 0.
    if !zero(c) {
        return ExistenceVerdict::NoWindingOnR {
            case: ExistenceCase::E,
            trace: String::from(
                "Q = (k/2v)(kv - 2c): double zero at k/v needs c(k^2 + v^2) = 0, i.e. v = ±ik",
            ),
            witness: None,
        };
    }
    // c = 0 with 2Qv = k²v: k² = 2Q and P = (v²/2)(p − k/v)².
    ExistenceVerdict::NoWindingOnR {
        case: ExistenceCase::F,
        trace: String::from(
            "c = (v/2k)(k^2 - 2Q) with k^2 = 2Q: P(p) = (v^2/2)(p - k/v)^2 has no simple zero, contradicting (ii)",
        ),
        witness: Some(Poly::new([0.5 * k * k, -k * v, 0.5 * v * v])),
    }
}

/// Circle-winding region of the `c = 0` HHM reduction: `α = v² − k² + 2Q < 0`
/// and `Q > k²v²/(2α)`, so `P` is positive and bounded between two real
/// zeros. Returns `Some(√−α)` (the spatial frequency of the sine profile).
/// The boundary `Q = k²v²/(2α)` is reported as inadmissible.
pub fn circle_winding_region(k: f64, v: f64, c: f64, q: f64, tol: f64) -> core::result::Result<Option<f64>, InadmissibleReason> {
    let scale = 1.0f64.max(k.abs()).max(v.abs()).max(c.abs()).max(q.abs());
    if c.abs() > tol * scale {
        return Ok(None);
    }
    let alpha = v * v - k * k + 2.0 * q;
    if alpha >= 0.0 {
        return Ok(None);
    }
    let bound = k * k * v * v / (2.0 * alpha);
    if (q - bound).abs() <= tol * scale * scale {
        return Err(InadmissibleReason::CircleBoundary);
    }
    Ok((q > bound).then(|| (-alpha).sqrt()))
}

/// Conditions (i)–(iv) for a winding travelling wave on `ℝ`, checked
/// numerically from the root structure, independently of the case analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConditionReport {
    /// `P > 0` on a bounded interval ending at the double zero.
    pub bounded: bool,
    /// One double and one simple real zero.
    pub double_plus_simple: bool,
    /// The double zero sits at `k/v`.
    pub rest_at_phase_zero: bool,
    /// `P(k/v) = 0`.
    pub potential_zero_at_rest: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.bounded && self.double_plus_simple && self.rest_at_phase_zero && self.potential_zero_at_rest
    }
}

pub fn check_conditions_hhm_on_r(k: f64, v: f64, c: f64, q: f64, tol: f64) -> (ConditionReport, RootStructure) {
    let potential = build_p_hhm(k, v, c, q);
    let roots = classify_roots(&potential, tol);
    let mut report = ConditionReport::default();
    if v == 0.0 {
        return (report, roots);
    }
    let rest = k / v;
    report.potential_zero_at_rest =
        potential.eval(rest).abs() <= CASE_TOL * potential.poly().magnitude_at(rest);
    if let RootKind::DoubleRootPlusSimple { double, simple } = roots.kind {
        report.double_plus_simple = true;
        report.rest_at_phase_zero = (double - rest).abs() <= 1e-6 * (1.0 + rest.abs());
        let (lo, hi) = if simple < double { (simple, double) } else { (double, simple) };
        report.bounded = roots
            .positive_intervals
            .iter()
            .any(|&(a, b)| (a - lo).abs() <= 1e-12 * (1.0 + lo.abs()) && (b - hi).abs() <= 1e-12 * (1.0 + hi.abs()));
    }
    (report, roots)
}

/// Uniform axis of a parameter grid; `n = 1` samples `min` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub const fn new(min: f64, max: f64, n: usize) -> Self {
        Self { min, max, n }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.n <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.value(i))
    }
}

/// Grid over `(k, v, c, Q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhmScanSpec {
    pub k: Axis,
    pub v: Axis,
    pub c: Axis,
    pub q: Axis,
}

impl Default for HhmScanSpec {
    /// `10⁴` tuples: `k, v ∈ [−3, 3]`, `c, Q ∈ [−2, 2]`, ten points each.
    fn default() -> Self {
        Self {
            k: Axis::new(-3.0, 3.0, 10),
            v: Axis::new(-3.0, 3.0, 10),
            c: Axis::new(-2.0, 2.0, 10),
            q: Axis::new(-2.0, 2.0, 10),
        }
    }
}

impl HhmScanSpec {
    pub fn len(&self) -> usize {
        self.k.n * self.v.n * self.c.n * self.q.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Tuple `index` in lexicographic order of the grid indices `(k, v, c, Q)`.
    pub fn tuple(&self, index: usize) -> [f64; 4] {
        let iq = index % self.q.n;
        let rest = index / self.q.n;
        let ic = rest % self.c.n;
        let rest = rest / self.c.n;
        let iv = rest % self.v.n;
        let ik = rest / self.v.n;
        [self.k.value(ik), self.v.value(iv), self.c.value(ic), self.q.value(iq)]
    }
}

/// One scanned parameter tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct HhmScanRow {
    pub k: f64,
    pub v: f64,
    pub c: f64,
    pub q: f64,
    pub roots: RootKind,
    /// Verdict on `ℝ`.
    pub verdict: ExistenceVerdict,
    /// In the circle-winding region.
    pub circle: Option<ExistenceVerdict>,
    pub conditions: ConditionReport,
}

impl HhmScanRow {
    pub fn feasible_on_r(&self) -> bool {
        self.conditions.all()
    }
}

pub fn scan_tuple_hhm(k: f64, v: f64, c: f64, q: f64) -> HhmScanRow {
    let (conditions, roots) = check_conditions_hhm_on_r(k, v, c, q, ROOT_TOL);
    let verdict = winding_existence_hhm_on_r(k, v, c, q, CASE_TOL);
    let circle = match circle_winding_region(k, v, c, q, CASE_TOL) {
        Ok(Some(frequency)) => Some(ExistenceVerdict::WindingOnCircle { frequency }),
        Ok(None) => None,
        Err(reason) => Some(ExistenceVerdict::Inadmissible(reason)),
    };
    HhmScanRow { k, v, c, q, roots: roots.kind, verdict, circle, conditions }
}

/// Verdict counts over a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScanSummary {
    pub tuples: usize,
    pub no_winding_by_case: [usize; 6],
    pub inadmissible: usize,
    pub winding_on_circle: usize,
    pub feasible_on_r: usize,
}

impl ScanSummary {
    pub fn add(&mut self, row: &HhmScanRow) {
        self.tuples += 1;
        match &row.verdict {
            ExistenceVerdict::NoWindingOnR { case, .. } => self.no_winding_by_case[*case as usize] += 1,
            ExistenceVerdict::Inadmissible(_) => self.inadmissible += 1,
            ExistenceVerdict::WindingOnCircle { .. } => {}
        }
        if matches!(row.circle, Some(ExistenceVerdict::WindingOnCircle { .. })) {
            self.winding_on_circle += 1;
        }
        if row.feasible_on_r() {
            self.feasible_on_r += 1;
        }
    }

    /// The non-existence theorem is corroborated when no tuple meets all of
    /// (i)–(iv).
    pub fn corroborated(&self) -> bool {
        self.feasible_on_r == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HhmScanReport {
    pub rows: Vec<HhmScanRow>,
    pub summary: ScanSummary,
}

/// Serial scan over the grid, rows in lexicographic grid order.
pub fn winding_feasibility_scan(spec: &HhmScanSpec) -> HhmScanReport {
    let mut summary = ScanSummary::default();
    let rows: Vec<HhmScanRow> = (0..spec.len())
        .map(|i| {
            let [k, v, c, q] = spec.tuple(i);
            let row = scan_tuple_hhm(k, v, c, q);
            summary.add(&row);
            row
        })
        .collect();
    HhmScanReport { rows, summary }
}

/// One `(q, ρ)` tuple of the HSM matching scan.
#[derive(Debug, Clone, PartialEq)]
pub struct HsmScanRow {
    pub q: f64,
    pub rho: f64,
    pub matched: core::result::Result<JkPair, Inadmissible>,
    /// Zeros of the bracketed quartic `p⁴ − (J²+K²)p² + J²K²`.
    pub roots: RootKind,
}

impl HsmScanRow {
    /// Bounded profile on `ℝ`: a double zero at the end of the oscillation
    /// interval, which for the even quartic means `J = K`.
    pub fn line_profile(&self) -> bool {
        matches!(self.roots, RootKind::TwoDoubleRoots { .. })
    }
}

pub fn scan_tuple_hsm(q: f64, rho: f64) -> HsmScanRow {
    let (qq, rr) = hsm_constants_from_reduced(q, rho, 2.0).expect("v = 2 is regular");
    let roots = build_p_hsm(2.0, 1.0, qq, rr)
        .map(|p| classify_roots(&p, HSM_ROOT_TOL).kind)
        .unwrap_or(RootKind::Constant);
    HsmScanRow { q, rho, matched: match_jk(q, rho), roots }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hhm_coefficients() {
        let p = build_p_hhm(2.0, 1.0, 0.0, 1.0);
        // α = v² − k² + 2Q = −1
        assert_eq!(p.coeffs(), &[1.0, -2.0, -0.5]);
        let p = build_p_hhm(0.0, 0.0, 0.0, 1.5);
        assert_eq!(p.coeffs(), &[1.5, 0.0, 1.5]);
        let p = build_p_hhm(0.0, 3.0, 2.0, 0.0);
        assert_eq!(p.coeffs(), &[0.0, 2.0, 4.5, 2.0]);
        assert_eq!(p.convention, Convention::HalfSquared);
    }

    #[test]
    fn hsm_coefficients() {
        let (q, r) = hsm_constants_from_reduced(-4.0, 1.0, 2.0).unwrap();
        let p = build_p_hsm(2.0, 1.0, q, r).unwrap();
        let b = p.root_poly().coeffs();
        assert!((b[0] - 0.5).abs() < 1e-14 && (b[2] + 2.5).abs() < 1e-14);
        assert_eq!((b[1], b[3], b[4]), (0.0, 0.0, 1.0));
        // overall scale c²/(v²−1)² = 1/9
        assert!((p.coeffs()[4] - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(p.coeffs()[1], 0.0);
        assert_eq!(p.coeffs()[3], 0.0);
        assert_eq!(build_p_hsm(1.0, 1.0, 0.0, 0.0), Err(Error::SingularReduction));
        assert_eq!(build_p_hsm(-1.0, 1.0, 0.0, 0.0), Err(Error::SingularReduction));
    }

    #[test]
    fn classify_double_plus_simple() {
        let p = PotentialPoly::from_poly(
            Poly::from_real_roots(1.0, &[1.0, 1.0, -2.0]),
            Convention::HalfSquared,
            Provenance::Hhm { k: 0.0, v: 0.0, c: 1.0, q: 0.0 },
        );
        let s = classify_roots(&p, ROOT_TOL);
        match s.kind {
            RootKind::DoubleRootPlusSimple { double, simple } => {
                assert!((double - 1.0).abs() < 1e-10);
                assert!((simple + 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(s.positive_intervals.len(), 1);
    }

    #[test]
    fn classify_c0_region_has_positive_interval() {
        // c = 0, α = −1 < 0, Q = 1 > k²v²/(2α) = −2
        let s = classify_roots(&build_p_hhm(2.0, 1.0, 0.0, 1.0), ROOT_TOL);
        assert_eq!(s.kind, RootKind::TwoDistinctReal);
        let (a, b) = s.positive_intervals[0];
        let amp = 6.0f64.sqrt();
        assert!((a - (-2.0 - amp)).abs() < 1e-12 && (b - (-2.0 + amp)).abs() < 1e-12);
    }

    #[test]
    fn classify_even_quartic() {
        let p = PotentialPoly::from_poly(
            Poly::new([0.5, 0.0, -2.5, 0.0, 1.0]),
            Convention::FullSquared,
            Provenance::Hsm { v: 2.0, c: 1.0, q: 0.0, r: 0.0 },
        );
        let s = classify_roots(&p, ROOT_TOL);
        assert_eq!(s.kind, RootKind::FourDistinctReal);
        let want = [-2.2807764064044151f64.sqrt(), -0.2192235935955849f64.sqrt()];
        assert!((s.real[0].value - want[0]).abs() < 1e-12);
        assert!((s.real[1].value - want[1]).abs() < 1e-12);
        let s = classify_poly(&Poly::from_real_roots(1.0, &[-1.3, -1.3, 1.3, 1.3]), ROOT_TOL);
        assert!(matches!(s.kind, RootKind::TwoDoubleRoots { .. }), "{:?}", s.kind);
    }

    #[test]
    fn classify_other_kinds() {
        let kind = |p: Poly| classify_poly(&p, ROOT_TOL).kind;
        assert_eq!(kind(Poly::from_real_roots(1.0, &[0.7, 0.7, 0.7])), RootKind::TripleRoot);
        assert_eq!(kind(Poly::new([1.0, 0.0, 0.0, 1.0])), RootKind::OneRealPlusComplexPair);
        assert_eq!(kind(Poly::new([1.0, 0.0, 1.0])), RootKind::ComplexPair);
        assert_eq!(kind(Poly::new([1.0, 0.0, 2.0, 0.0, 1.0])), RootKind::DoubleComplexPair);
        assert_eq!(kind(Poly::from_real_roots(1.0, &[2.0, 2.0, 2.0, 2.0])), RootKind::QuadrupleRoot);
        assert_eq!(kind(Poly::from_real_roots(1.0, &[-1.0, 0.5, 0.5, 3.0])), RootKind::DoubleRootPlusTwoSimple);
        assert_eq!(kind(Poly::new([3.0, 1.0])), RootKind::Linear);
        // degree reduction
        let s = classify_poly(&Poly::new([1.0, -3.0, 1.0, 1e-14]), ROOT_TOL);
        assert!(s.degree_reduced);
        assert_eq!(s.kind, RootKind::TwoDistinctReal);
    }

    #[test]
    fn match_jk_examples() {
        let pair = match_jk(-4.0, 1.0).unwrap();
        assert!((pair.j_sq + pair.k_sq - 2.5).abs() < 1e-14);
        assert!((pair.j_sq * pair.k_sq - 0.5).abs() < 1e-14);
        assert!((pair.j_sq - 0.21922359359558485).abs() < 1e-14);
        assert!((pair.k_sq - 2.2807764064044151).abs() < 1e-14);
        let err = match_jk(-2.0, 0.1).unwrap_err();
        assert_eq!(err.failed, JkCondition::ProductPositive);
        assert_eq!(match_jk(-1.0, 0.0).unwrap_err().failed, JkCondition::SumPositive);
        assert_eq!(match_jk(-3.0, 2.0).unwrap_err().failed, JkCondition::RealSquares);
        // boundary 1 − 2q = 8|ρ|: J = K
        let pair = match_jk(-3.5, 1.0).unwrap();
        assert!((pair.j_sq - pair.k_sq).abs() < 1e-12);
    }

    #[test]
    fn match_jk_round_trip() {
        let (q, r) = hsm_constants_from_reduced(-4.0, 1.0, 2.0).unwrap();
        let s = classify_roots(&build_p_hsm(2.0, 1.0, q, r).unwrap(), ROOT_TOL);
        let pair = match_jk(-4.0, 1.0).unwrap();
        let want = [-pair.k(), -pair.j(), pair.j(), pair.k()];
        for (got, want) in s.real.iter().zip(want) {
            assert!((got.value - want).abs() < 1e-10);
        }
    }

    #[test]
    fn existence_case_d() {
        for c in [0.0, 0.7] {
            match winding_existence_hhm_on_r(0.0, 1.3, c, 0.0, CASE_TOL) {
                ExistenceVerdict::NoWindingOnR { case: ExistenceCase::D, witness: Some(w), .. } => {
                    assert_eq!(w.coeffs()[2], 0.5 * 1.3 * 1.3);
                    if c == 0.0 {
                        assert_eq!(w.coeffs(), &[0.0, 0.0, 0.5 * 1.3 * 1.3]);
                    }
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn existence_case_e() {
        let (k, v, c) = (1.5, 0.8, 0.4);
        let q = k / (2.0 * v) * (k * v - 2.0 * c);
        match winding_existence_hhm_on_r(k, v, c, q, CASE_TOL) {
            ExistenceVerdict::NoWindingOnR { case: ExistenceCase::E, trace, .. } => {
                assert!(trace.contains("v = ±ik"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn existence_case_f() {
        let (k, v) = (1.2, -0.9);
        let q = 0.5 * k * k;
        match winding_existence_hhm_on_r(k, v, 0.0, q, CASE_TOL) {
            ExistenceVerdict::NoWindingOnR { case: ExistenceCase::F, witness: Some(w), .. } => {
                // (v²/2)(p − k/v)²
                let direct = build_p_hhm(k, v, 0.0, q);
                for p in [-2.0, 0.0, 0.3, 4.0] {
                    let want = 0.5 * v * v * (p - k / v).powi(2);
                    assert!((w.eval(p) - want).abs() < 1e-12);
                    assert!((direct.eval(p) - want).abs() < 1e-12);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn existence_v_zero_and_generic() {
        assert!(matches!(
            winding_existence_hhm_on_r(1.0, 0.0, 0.0, 0.3, CASE_TOL),
            ExistenceVerdict::NoWindingOnR { case: ExistenceCase::B, .. }
        ));
        assert!(matches!(
            winding_existence_hhm_on_r(0.0, 0.0, 1.0, 0.3, CASE_TOL),
            ExistenceVerdict::NoWindingOnR { case: ExistenceCase::C, .. }
        ));
        assert_eq!(
            winding_existence_hhm_on_r(1.0, 0.0, 1.0, 0.3, CASE_TOL),
            ExistenceVerdict::Inadmissible(InadmissibleReason::NoRestPoint)
        );
        assert!(matches!(
            winding_existence_hhm_on_r(1.0, 2.0, 0.5, 0.3, CASE_TOL),
            ExistenceVerdict::Inadmissible(InadmissibleReason::RestPointNotZero { .. })
        ));
    }

    #[test]
    fn rest_point_factorization() {
        // 2v³ P(k/v) = (k² + v²)(2ck + 2Qv − k²v)
        for &(k, v, c, q) in &[(1.0, 2.0, 0.5, 0.3), (-2.2, 0.7, -1.1, 1.9), (0.3, -1.4, 2.0, -0.6)] {
            let lhs = 2.0 * v * v * v * build_p_hhm(k, v, c, q).eval(k / v);
            let rhs = (k * k + v * v) * (2.0 * c * k + 2.0 * q * v - k * k * v);
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn circle_region() {
        assert_eq!(circle_winding_region(2.0, 1.0, 0.0, 1.0, CASE_TOL), Ok(Some(1.0)));
        assert_eq!(circle_winding_region(2.0, 1.0, 0.5, 1.0, CASE_TOL), Ok(None));
        // α = 1 − 4 + 2Q < 0 needs Q < 1.5; bound k²v²/(2α)
        let q: f64 = 0.0;
        let alpha = 1.0 - 4.0 + 2.0 * q;
        assert!(q > 4.0 / (2.0 * alpha));
        assert!(circle_winding_region(2.0, 1.0, 0.0, q, CASE_TOL).unwrap().is_some());
        // boundary: α = −1 at Q with 2Q = k² − v² − 1; choose k=1, v=0 ⇒ α = 2Q − 1, bound 0
        assert_eq!(
            circle_winding_region(1.0, 0.0, 0.0, 0.0, CASE_TOL),
            Err(InadmissibleReason::CircleBoundary)
        );
    }

    #[test]
    fn scan_grid_order_and_empty() {
        let spec = HhmScanSpec {
            k: Axis::new(1.0, 2.0, 2),
            v: Axis::new(0.5, 0.5, 1),
            c: Axis::new(0.0, 1.0, 2),
            q: Axis::new(-1.0, 1.0, 3),
        };
        assert_eq!(spec.tuple(0), [1.0, 0.5, 0.0, -1.0]);
        assert_eq!(spec.tuple(1), [1.0, 0.5, 0.0, 0.0]);
        assert_eq!(spec.tuple(3), [1.0, 0.5, 1.0, -1.0]);
        assert_eq!(spec.tuple(6), [2.0, 0.5, 0.0, -1.0]);
        let empty = HhmScanSpec { k: Axis::new(0.0, 1.0, 0), ..spec };
        let report = winding_feasibility_scan(&empty);
        assert!(report.rows.is_empty());
        assert_eq!(report.summary.tuples, 0);
    }

    #[test]
    fn default_scan_finds_no_feasible_tuple() {
        let report = winding_feasibility_scan(&HhmScanSpec::default());
        assert_eq!(report.summary.tuples, 10_000);
        assert_eq!(report.summary.feasible_on_r, 0);
    }

    #[test]
    fn circle_subregion_flagged() {
        let spec = HhmScanSpec {
            k: Axis::new(1.5, 3.0, 4),
            v: Axis::new(-1.0, 1.0, 5),
            c: Axis::new(0.0, 0.0, 1),
            q: Axis::new(-1.0, 1.0, 5),
        };
        let report = winding_feasibility_scan(&spec);
        for row in &report.rows {
            let alpha = row.v * row.v - row.k * row.k + 2.0 * row.q;
            let expected = alpha < 0.0 && row.q > row.k * row.k * row.v * row.v / (2.0 * alpha);
            assert_eq!(matches!(row.circle, Some(ExistenceVerdict::WindingOnCircle { .. })), expected);
            if expected {
                assert!(row.roots == RootKind::TwoDistinctReal && !row.feasible_on_r());
            }
        }
        assert!(report.summary.winding_on_circle > 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn expected_kind(degree_pattern: u8, r: [f64; 4]) -> (Poly, &'static str) {
            match degree_pattern {
                0 => (Poly::from_real_roots(1.0, &[r[0], r[1], r[2]]), "ThreeDistinctReal"),
                1 => (Poly::from_real_roots(1.0, &[r[0], r[0], r[1]]), "DoubleRootPlusSimple"),
                2 => (Poly::from_real_roots(1.0, &[r[0], r[1], r[2], r[3]]), "FourDistinctReal"),
                _ => (Poly::from_real_roots(1.0, &[r[0], r[0], r[1], r[1]]), "TwoDoubleRoots"),
            }
        }

        proptest! {
            #[test]
            fn kind_recovered_for_separated_roots(
                pattern in 0u8..4,
                raw in proptest::array::uniform4(-3.0f64..3.0),
                tol_exp in 6i32..9,
            ) {
                let tol = 10f64.powi(-tol_exp);
                let mut r = raw;
                r.sort_by(|a, b| a.partial_cmp(b).unwrap());
                // distinct values separated by more than 10·tol (relative)
                let ok = r.windows(2).all(|w| w[1] - w[0] > 10.0 * tol * (1.0 + w[1].abs().max(w[0].abs())) * 10.0);
                prop_assume!(ok);
                let (poly, want) = expected_kind(pattern, r);
                prop_assert_eq!(classify_poly(&poly, tol).kind.name(), want);
            }

            #[test]
            fn hhm_never_feasible_on_line(
                k in -3.0f64..3.0, v in -3.0f64..3.0, c in -2.0f64..2.0, q in -2.0f64..2.0,
            ) {
                let verdict = winding_existence_hhm_on_r(k, v, c, q, CASE_TOL);
                let decided = matches!(verdict, ExistenceVerdict::NoWindingOnR { .. } | ExistenceVerdict::Inadmissible(_));
                prop_assert!(decided);
                prop_assert!(!check_conditions_hhm_on_r(k, v, c, q, ROOT_TOL).0.all());
            }

            #[test]
            fn hsm_line_profiles_collapse_to_equal_squares(q in -10.0f64..-1.6, sign in prop::bool::ANY) {
                // boundary 1 − 2q = 8|ρ| gives the double zeros
                let rho = if sign { (1.0 - 2.0 * q) / 8.0 } else { -(1.0 - 2.0 * q) / 8.0 };
                let row = scan_tuple_hsm(q, rho);
                prop_assert!(row.line_profile(), "{:?}", row.roots);
                let pair = row.matched.unwrap();
                prop_assert!((pair.j_sq - pair.k_sq).abs() < 1e-9 * pair.k_sq);
            }

            #[test]
            fn hsm_interior_profiles_are_periodic(q in -10.0f64..-1.6, frac in 0.05f64..0.95) {
                // strictly inside the admissible set: four simple zeros, no line profile
                let max_rho = (1.0 - 2.0 * q) / 8.0;
                let min_rho_sq = (-(2.0 * q + 1.0) / 8.0).max(0.0);
                let lo = min_rho_sq.sqrt();
                let rho = lo + frac * (max_rho - lo);
                let row = scan_tuple_hsm(q, rho);
                prop_assume!(row.matched.is_ok());
                prop_assert!(!row.line_profile());
            }
        }
    }
}
