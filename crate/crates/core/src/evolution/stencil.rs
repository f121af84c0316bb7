//! Periodic first and second derivatives on a uniform grid.
//!
//! Lifted fields (the azimuth `φ` of a winding configuration) satisfy
//! `f[i + M] = f[i] + jump`; both schemes accept that jump.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use num_complex::Complex64;
use num_traits::Float;

use crate::fft::Fft;

/// Spatial discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialScheme {
    /// Five-point fourth-order centred differences.
    FourthOrderCentered,
    /// Fourier pseudo-spectral; needs a power-of-two grid.
    Spectral,
}

impl SpatialScheme {
    /// Largest `|eigenvalue|` of the discrete `∂x²` at spacing `h`.
    pub fn second_derivative_radius(self, h: f64) -> f64 {
        match self {
            SpatialScheme::FourthOrderCentered => 16.0 / (3.0 * h * h),
            SpatialScheme::Spectral => (PI / h).powi(2),
        }
    }

    /// Largest `|eigenvalue|` of the discrete `∂x` at spacing `h`.
    pub fn first_derivative_radius(self, h: f64) -> f64 {
        match self {
            // max over θ of (8 sin θ − sin 2θ)/6
            SpatialScheme::FourthOrderCentered => 1.372_222_0 / h,
            SpatialScheme::Spectral => PI / h,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Derivatives {
    scheme: SpatialScheme,
    m: usize,
    h: f64,
    length: f64,
    fft: Option<Fft>,
    wavenumbers: Vec<f64>,
    buffer: Vec<Complex64>,
    spare: Vec<Complex64>,
    remainder: Vec<f64>,
}

impl Derivatives {
    pub(crate) fn new(scheme: SpatialScheme, m: usize, length: f64) -> Self {
        let h = length / m as f64;
        let (fft, wavenumbers) = match scheme {
            SpatialScheme::Spectral => {
                let base = TAU / length;
                let k = (0..m)
                    .map(|j| {
                        let j = if j <= m / 2 { j as f64 } else { j as f64 - m as f64 };
                        base * j
                    })
                    .collect();
                (Some(Fft::new(m)), k)
            }
            SpatialScheme::FourthOrderCentered => (None, Vec::new()),
        };
        Self {
            scheme,
            m,
            h,
            length,
            fft,
            wavenumbers,
            buffer: vec![Complex64::new(0.0, 0.0); m],
            spare: vec![Complex64::new(0.0, 0.0); m],
            remainder: vec![0.0; m],
        }
    }

    /// First and (optionally) second derivative of `f`.
    pub(crate) fn apply(&mut self, f: &[f64], jump: f64, d1: &mut [f64], d2: Option<&mut [f64]>) {
        match self.scheme {
            SpatialScheme::FourthOrderCentered => self.fd4(f, jump, d1, d2),
            SpatialScheme::Spectral => self.spectral(f, jump, d1, d2),
        }
    }

    fn fd4(&self, f: &[f64], jump: f64, d1: &mut [f64], d2: Option<&mut [f64]>) {
        let m = self.m as isize;
        let at = |j: isize| -> f64 {
            if j < 0 {
                f[(j + m) as usize] - jump
            } else if j >= m {
                f[(j - m) as usize] + jump
            } else {
                f[j as usize]
            }
        };
        let c1 = 1.0 / (12.0 * self.h);
        let c2 = 1.0 / (12.0 * self.h * self.h);
        match d2 {
            Some(d2) => {
                for i in 0..m {
                    let (a, b, c, d, e) = (at(i - 2), at(i - 1), f[i as usize], at(i + 1), at(i + 2));
                    d1[i as usize] = (a - 8.0 * b + 8.0 * d - e) * c1;
                    d2[i as usize] = (-a + 16.0 * b - 30.0 * c + 16.0 * d - e) * c2;
                }
            }
            None => {
                for i in 0..m {
                    d1[i as usize] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) * c1;
                }
            }
        }
    }

    fn spectral(&mut self, f: &[f64], jump: f64, d1: &mut [f64], d2: Option<&mut [f64]>) {
        let m = self.m;
        let slope = jump / self.length;
        for (i, r) in self.remainder.iter_mut().enumerate() {
            *r = f[i] - slope * self.h * i as f64;
        }
        let fft = self.fft.as_ref().expect("spectral scheme has an FFT");
        for (b, &r) in self.buffer.iter_mut().zip(&self.remainder) {
            *b = Complex64::new(r, 0.0);
        }
        fft.forward(&mut self.buffer);
        let scale = 1.0 / m as f64;
        for (j, (s, &b)) in self.spare.iter_mut().zip(&self.buffer).enumerate() {
            let k = if j == m / 2 { 0.0 } else { self.wavenumbers[j] };
            *s = b * Complex64::new(0.0, k);
        }
        fft.inverse(&mut self.spare);
        for (d, s) in d1.iter_mut().zip(&self.spare) {
            *d = s.re * scale + slope;
        }
        if let Some(d2) = d2 {
            for (j, b) in self.buffer.iter_mut().enumerate() {
                let k = self.wavenumbers[j];
                *b *= -k * k;
            }
            fft.inverse(&mut self.buffer);
            for (d, b) in d2.iter_mut().zip(&self.buffer) {
                *d = b.re * scale;
            }
        }
    }
}

/// Sharp Fourier low-pass: keeps wavenumber indices `|j| ≤ cutoff`.
#[derive(Debug, Clone)]
pub(crate) struct LowPass {
    m: usize,
    cutoff: usize,
    fft: Fft,
    buffer: Vec<Complex64>,
}

impl LowPass {
    pub(crate) fn new(m: usize, cutoff: usize) -> Self {
        Self { m, cutoff, fft: Fft::new(m), buffer: vec![Complex64::new(0.0, 0.0); m] }
    }

    pub(crate) fn apply(&mut self, f: &mut [f64], jump: f64) {
        let m = self.m;
        if self.cutoff >= m / 2 {
            return;
        }
        let step = jump / m as f64;
        for (i, (b, &v)) in self.buffer.iter_mut().zip(f.iter()).enumerate() {
            *b = Complex64::new(v - step * i as f64, 0.0);
        }
        self.fft.forward(&mut self.buffer);
        for (j, b) in self.buffer.iter_mut().enumerate() {
            if j.min(m - j) > self.cutoff {
                *b = Complex64::new(0.0, 0.0);
            }
        }
        self.fft.inverse(&mut self.buffer);
        let scale = 1.0 / m as f64;
        for (i, (v, b)) in f.iter_mut().zip(&self.buffer).enumerate() {
            *v = b.re * scale + step * i as f64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(scheme: SpatialScheme, m: usize) -> (f64, f64) {
        // f = 2x + sin(x) + 0.5 cos(3x) on [−π, π) with jump 4π
        let length = TAU;
        let h = length / m as f64;
        let x: Vec<f64> = (0..m).map(|i| -PI + h * i as f64).collect();
        let f: Vec<f64> = x.iter().map(|&x| 2.0 * x + x.sin() + 0.5 * (3.0 * x).cos()).collect();
        let mut d = Derivatives::new(scheme, m, length);
        let mut d1 = vec![0.0; m];
        let mut d2 = vec![0.0; m];
        d.apply(&f, 2.0 * length, &mut d1, Some(&mut d2));
        let e1 = x
            .iter()
            .zip(&d1)
            .map(|(&x, &d)| (d - (2.0 + x.cos() - 1.5 * (3.0 * x).sin())).abs())
            .fold(0.0, f64::max);
        let e2 = x
            .iter()
            .zip(&d2)
            .map(|(&x, &d)| (d - (-x.sin() - 4.5 * (3.0 * x).cos())).abs())
            .fold(0.0, f64::max);
        (e1, e2)
    }

    #[test]
    fn spectral_exact_for_band_limited() {
        let (e1, e2) = errors(SpatialScheme::Spectral, 32);
        assert!(e1 < 1e-12 && e2 < 1e-11, "{e1} {e2}");
    }

    #[test]
    fn fd4_fourth_order() {
        let (a1, a2) = errors(SpatialScheme::FourthOrderCentered, 32);
        let (b1, b2) = errors(SpatialScheme::FourthOrderCentered, 64);
        assert!(a1 / b1 > 14.0 && a2 / b2 > 14.0, "{} {}", a1 / b1, a2 / b2);
    }

    #[test]
    fn low_pass_keeps_band_and_lift() {
        let m = 32;
        let h = TAU / m as f64;
        let x: Vec<f64> = (0..m).map(|i| -PI + h * i as f64).collect();
        let keep: Vec<f64> = x.iter().map(|&x| 3.0 * x + x.sin() + 0.2 * (2.0 * x).cos()).collect();
        let mut f: Vec<f64> = keep.iter().zip(&x).map(|(k, &x)| k + 0.1 * (7.0 * x).sin()).collect();
        LowPass::new(m, 2).apply(&mut f, 3.0 * TAU);
        let err = f.iter().zip(&keep).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn fd4_radius_constant() {
        let g = |t: f64| (8.0 * t.sin() - (2.0 * t).sin()) / 6.0;
        let best = (0..100_000).map(|i| g(PI * i as f64 / 100_000.0)).fold(0.0, f64::max);
        assert!((best - 1.372_222_0).abs() < 1e-6);
    }
}
