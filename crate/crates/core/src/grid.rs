//! Uniform periodic angle grid with spectral (discrete Fourier) calculus.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{GeomError, Result};
use crate::point::Point;

/// Smallest admissible node count.
pub const MIN_NODES: usize = 16;

struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    units: Vec<Point>,
}

fn spectral(n: usize) -> Arc<Spectral> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Spectral>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("spectral cache poisoned");
    map.entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            let dtheta = TAU / n as f64;
            Arc::new(Spectral {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
                units: (0..n).map(|j| Point::unit(j as f64 * dtheta)).collect(),
            })
        })
        .clone()
}

/// Nodes `theta_j = 2 pi j / n`, `j = 0..n`, half-open over `[0, 2 pi)`.
#[derive(Clone)]
pub struct AngleGrid {
    n: usize,
    spectral: Arc<Spectral>,
}

impl fmt::Debug for AngleGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AngleGrid").field("n", &self.n).finish()
    }
}

impl PartialEq for AngleGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for AngleGrid {}

impl Default for AngleGrid {
    fn default() -> Self {
        AngleGrid::new(crate::DEFAULT_GRID).expect("default grid is valid")
    }
}

impl AngleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_NODES || !n.is_multiple_of(2) {
            return Err(GeomError::InvalidGrid(n));
        }
        Ok(AngleGrid { n, spectral: spectral(n) })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dtheta()
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.theta(j))
    }

    /// Outward unit normals `u(theta_j)`.
    pub fn units(&self) -> &[Point] {
        &self.spectral.units
    }

    /// Index of the node opposite to `j`, i.e. `theta_j + pi`.
    pub fn antipode(&self, j: usize) -> usize {
        (j + self.n / 2) % self.n
    }

    pub fn check_len(&self, samples: &[f64]) -> Result<()> {
        if samples.len() != self.n {
            return Err(GeomError::SampleCount { expected: self.n, got: samples.len() });
        }
        Ok(())
    }

    pub fn check_same(&self, other: &AngleGrid) -> Result<()> {
        if self.n != other.n {
            return Err(GeomError::GridMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Periodic rectangle rule, `sum f_j * dtheta`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().sum::<f64>() * self.dtheta()
    }

    /// Normalized discrete Fourier coefficients `c_k`, with `f_j = sum c_k e^{i k theta_j}`.
    fn coefficients(&self, f: &[f64]) -> Vec<Complex<f64>> {
        let mut buf: Vec<Complex<f64>> = f.iter().map(|&x| Complex::new(x, 0.0)).collect();
        self.spectral.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    fn synthesize(&self, mut coeffs: Vec<Complex<f64>>) -> Vec<f64> {
        self.spectral.inverse.process(&mut coeffs);
        coeffs.into_iter().map(|c| c.re).collect()
    }

    /// Signed wavenumber of FFT bin `j`. The Nyquist bin reports `n / 2`.
    fn wavenumber(&self, j: usize) -> f64 {
        if j <= self.n / 2 {
            j as f64
        } else {
            j as f64 - self.n as f64
        }
    }

    /// First and second spectral derivatives of periodic samples.
    ///
    /// The Nyquist mode is dropped for the odd derivative and kept for the
    /// even one, so both are exact for band-limited data.
    pub fn derivatives(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let coeffs = self.coefficients(f);
        let nyquist = self.n / 2;
        let mut first = coeffs.clone();
        let mut second = coeffs;
        for j in 0..self.n {
            let k = self.wavenumber(j);
            first[j] = if j == nyquist { Complex::new(0.0, 0.0) } else { first[j] * Complex::new(0.0, k) };
            second[j] *= -k * k;
        }
        (self.synthesize(first), self.synthesize(second))
    }

    pub fn second_derivative(&self, f: &[f64]) -> Vec<f64> {
        let mut coeffs = self.coefficients(f);
        for (j, c) in coeffs.iter_mut().enumerate() {
            let k = self.wavenumber(j);
            *c *= -k * k;
        }
        self.synthesize(coeffs)
    }

    /// Samples of `f(theta_j - phi)`, the periodic function rotated by `phi`.
    pub fn rotate_samples(&self, f: &[f64], phi: f64) -> Vec<f64> {
        let mut coeffs = self.coefficients(f);
        let nyquist = self.n / 2;
        for (j, c) in coeffs.iter_mut().enumerate() {
            if j == nyquist {
                *c *= (nyquist as f64 * phi).cos();
            } else {
                let k = self.wavenumber(j);
                *c *= Complex::from_polar(1.0, -k * phi);
            }
        }
        self.synthesize(coeffs)
    }

    /// Trigonometric interpolant through the samples.
    pub fn interpolant(&self, f: &[f64]) -> TrigSeries {
        let coeffs = self.coefficients(f);
        let half = self.n / 2;
        let mut cos = Vec::with_capacity(half + 1);
        let mut sin = Vec::with_capacity(half + 1);
        cos.push(coeffs[0].re);
        sin.push(0.0);
        for c in &coeffs[1..half] {
            cos.push(2.0 * c.re);
            sin.push(-2.0 * c.im);
        }
        cos.push(coeffs[half].re);
        sin.push(0.0);
        TrigSeries { cos, sin }
    }
}

/// Real trigonometric polynomial `a_0 + sum_k (a_k cos k t + b_k sin k t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigSeries {
    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_with_derivative(theta).0
    }

    /// Value and first derivative at `theta`.
    pub fn eval_with_derivative(&self, theta: f64) -> (f64, f64) {
        let step = Complex::from_polar(1.0, theta);
        let mut phase = Complex::new(1.0, 0.0);
        let mut value = self.cos[0];
        let mut slope = 0.0;
        for k in 1..self.cos.len() {
            phase *= step;
            let (c, s) = (phase.re, phase.im);
            let kf = k as f64;
            value += self.cos[k] * c + self.sin[k] * s;
            slope += kf * (self.sin[k] * c - self.cos[k] * s);
        }
        (value, slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_odd_grids() {
        assert!(AngleGrid::new(8).is_err());
        assert!(AngleGrid::new(17).is_err());
        assert!(AngleGrid::new(16).is_ok());
    }

    #[test]
    fn pure_harmonic_derivatives_are_exact() {
        let grid = AngleGrid::new(64).unwrap();
        let f: Vec<f64> = grid.thetas().map(|t| (3.0 * t).cos() + 0.5 * (5.0 * t).sin()).collect();
        let (d1, d2) = grid.derivatives(&f);
        for (j, t) in grid.thetas().enumerate() {
            let e1 = -3.0 * (3.0 * t).sin() + 2.5 * (5.0 * t).cos();
            let e2 = -9.0 * (3.0 * t).cos() - 12.5 * (5.0 * t).sin();
            assert!((d1[j] - e1).abs() < 1e-12);
            assert!((d2[j] - e2).abs() < 1e-11);
        }
    }

    #[test]
    fn interpolant_matches_nodes_and_off_grid_harmonics() {
        let grid = AngleGrid::new(32).unwrap();
        let f: Vec<f64> = grid.thetas().map(|t| 1.0 + 0.3 * (2.0 * t).cos() - 0.1 * (7.0 * t).sin()).collect();
        let s = grid.interpolant(&f);
        for (j, t) in grid.thetas().enumerate() {
            assert!((s.eval(t) - f[j]).abs() < 1e-13);
        }
        let t = 0.1234;
        let (v, d) = s.eval_with_derivative(t);
        assert!((v - (1.0 + 0.3 * (2.0 * t).cos() - 0.1 * (7.0 * t).sin())).abs() < 1e-13);
        assert!((d - (-0.6 * (2.0 * t).sin() - 0.7 * (7.0 * t).cos())).abs() < 1e-12);
    }

    #[test]
    fn rotation_shifts_band_limited_samples() {
        let grid = AngleGrid::new(32).unwrap();
        let f: Vec<f64> = grid.thetas().map(|t| (2.0 * t).cos() + 0.2 * (3.0 * t).sin()).collect();
        let phi = 0.37;
        let g = grid.rotate_samples(&f, phi);
        for (j, t) in grid.thetas().enumerate() {
            let e = (2.0 * (t - phi)).cos() + 0.2 * (3.0 * (t - phi)).sin();
            assert!((g[j] - e).abs() < 1e-13);
        }
    }
}
