//! Real polynomials and their complex roots.
//!
//! Roots of degree ≥ 3 come from the eigenvalues of the balanced companion
//! matrix (shifted Hessenberg QR), each polished by complex Newton steps on
//! the original coefficients.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::{Float, Zero};

/// Real polynomial, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    /// `Π (x − rᵢ)` for real roots, times `lead`.
    pub fn from_real_roots(lead: f64, roots: &[f64]) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= r * a;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    /// `Σ |aᵢ| |x|ⁱ`: the scale against which `|p(x)|` is judged to vanish.
    pub fn magnitude_at(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::new([0.0]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect::<Vec<_>>(),
        )
    }

    pub fn scaled(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect::<Vec<_>>())
    }

    /// Drops leading coefficients whose magnitude is below `tol` times the
    /// largest coefficient. Returns the trimmed polynomial and whether
    /// anything was removed.
    pub fn trimmed(&self, tol: f64) -> (Poly, bool) {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut c = self.coeffs.clone();
        let mut reduced = false;
        while c.len() > 1 && c.last().unwrap().abs() <= tol * scale {
            c.pop();
            reduced = true;
        }
        (Poly::new(c), reduced)
    }

    /// All `degree()` complex roots, unordered.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        let lead = self.leading();
        match n {
            0 => Vec::new(),
            1 => vec![Complex64::new(-self.coeffs[0] / lead, 0.0)],
            2 => quadratic_roots(lead, self.coeffs[1], self.coeffs[0]).to_vec(),
            _ => {
                let eig = companion_eigenvalues(self);
                eig.into_iter().map(|z| self.polish(z)).collect()
            }
        }
    }

    fn polish(&self, mut z: Complex64) -> Complex64 {
        let d = self.derivative();
        let mut best = self.eval_complex(z).norm();
        for _ in 0..8 {
            let dp = d.eval_complex(z);
            if dp.is_zero() {
                break;
            }
            let cand = z - self.eval_complex(z) / dp;
            let val = self.eval_complex(cand).norm();
            if !(val < best) {
                break;
            }
            best = val;
            z = cand;
        }
        z
    }
}

/// Roots of `a x² + b x + c` without cancellation.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return [Complex64::zero(); 2];
        }
        [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a).abs();
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Dense row-major square matrix, 1-based accessors to keep the QR sweep
/// close to its textbook form.
struct Mat {
    n: usize,
    a: Vec<f64>,
}

impl Mat {
    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[(i - 1) * self.n + (j - 1)]
    }
    fn at(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.a[(i - 1) * self.n + (j - 1)]
    }
}

fn companion_eigenvalues(p: &Poly) -> Vec<Complex64> {
    let n = p.degree();
    let lead = p.leading();
    let mut m = Mat { n, a: vec![0.0; n * n] };
    for j in 1..=n {
        *m.at(1, j) = -p.coeffs[n - j] / lead;
    }
    for i in 2..=n {
        *m.at(i, i - 1) = 1.0;
    }
    balance(&mut m);
    hessenberg_qr(&mut m)
}

fn balance(m: &mut Mat) {
    const RADIX: f64 = 2.0;
    let n = m.n;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 1..=n {
                if j != i {
                    c += m.get(j, i).abs();
                    r += m.get(i, j).abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 1..=n {
                    *m.at(i, j) /= f;
                    *m.at(j, i) *= f;
                }
            }
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.
fn hessenberg_qr(m: &mut Mat) -> Vec<Complex64> {
    let n = m.n;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += m.get(i, j).abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = m.get(l - 1, l - 1).abs() + m.get(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if m.get(l, l - 1).abs() + s == s {
                    *m.at(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            x = m.get(nn, nn);
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            y = m.get(nn - 1, nn - 1);
            w = m.get(nn, nn - 1) * m.get(nn - 1, nn);
            if l == nn - 1 {
                p = 0.5 * (y - x);
                q = p * p + w;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn = nn.saturating_sub(2);
                break;
            }
            if its == 60 {
                // Give up on the remaining block; report its diagonal.
                for i in 1..=nn {
                    wr[i] = m.get(i, i) + t;
                    wi[i] = 0.0;
                }
                nn = 0;
                break;
            }
            if its == 10 || its == 20 {
                t += x;
                for i in 1..=nn {
                    *m.at(i, i) -= x;
                }
                let s = m.get(nn, nn - 1).abs() + m.get(nn - 1, nn - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let mut mm = nn - 2;
            loop {
                z = m.get(mm, mm);
                r = x - z;
                let s0 = y - z;
                p = (r * s0 - w) / m.get(mm + 1, mm) + m.get(mm, mm + 1);
                q = m.get(mm + 1, mm + 1) - z - r - s0;
                r = m.get(mm + 2, mm + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if mm == l {
                    break;
                }
                let u = m.get(mm, mm - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (m.get(mm - 1, mm - 1).abs() + z.abs() + m.get(mm + 1, mm + 1).abs());
                if u + v == v {
                    break;
                }
                mm -= 1;
            }
            for i in (mm + 2)..=nn {
                *m.at(i, i - 2) = 0.0;
                if i != mm + 2 {
                    *m.at(i, i - 3) = 0.0;
                }
            }
            let mut k = mm;
            while k + 1 <= nn {
                if k != mm {
                    p = m.get(k, k - 1);
                    q = m.get(k + 1, k - 1);
                    r = 0.0;
                    if k != nn - 1 {
                        r = m.get(k + 2, k - 1);
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == mm {
                        if l != mm {
                            *m.at(k, k - 1) = -m.get(k, k - 1);
                        }
                    } else {
                        *m.at(k, k - 1) = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        p = m.get(k, j) + q * m.get(k + 1, j);
                        if k != nn - 1 {
                            p += r * m.get(k + 2, j);
                            *m.at(k + 2, j) -= p * z;
                        }
                        *m.at(k + 1, j) -= p * y;
                        *m.at(k, j) -= p * x;
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        p = x * m.get(i, k) + y * m.get(i, k + 1);
                        if k != nn - 1 {
                            p += z * m.get(i, k + 2);
                            *m.at(i, k + 2) -= p * r;
                        }
                        *m.at(i, k + 1) -= p * q;
                        *m.at(i, k) -= p;
                    }
                }
                k += 1;
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    (1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect()
}
