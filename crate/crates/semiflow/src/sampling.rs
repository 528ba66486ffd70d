//! Seeded smooth test data: truncated Fourier series with exact evaluation
//! at any point, so the same continuum function can be sampled on every grid
//! of a refinement study.
//!
//! Coefficients come from a ChaCha stream cipher seeded explicitly; every
//! verification report prints the seed it used.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Density, Diffeo};
use crate::grid::{Field, Grid};

/// Deterministic generator for test data.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Truncated Fourier series mean + Σ_k a_k cos(k·2πx/L) + b_k sin(k·2πx/L).
#[derive(Clone, Debug)]
pub struct FourierSeries {
    mean: f64,
    base: f64,
    cos_coeffs: Vec<f64>,
    sin_coeffs: Vec<f64>,
}

impl FourierSeries {
    /// Draws coefficients uniformly from ±amplitude/k for modes 1..=max_mode.
    pub fn random(
        rng: &mut ChaCha8Rng,
        length: f64,
        max_mode: usize,
        amplitude: f64,
        mean: f64,
    ) -> FourierSeries {
        let mut cos_coeffs = Vec::with_capacity(max_mode);
        let mut sin_coeffs = Vec::with_capacity(max_mode);
        for k in 1..=max_mode {
            let scale = amplitude / k as f64;
            cos_coeffs.push(rng.random_range(-1.0..1.0) * scale);
            sin_coeffs.push(rng.random_range(-1.0..1.0) * scale);
        }
        FourierSeries {
            mean,
            base: std::f64::consts::TAU / length,
            cos_coeffs,
            sin_coeffs,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.mean;
        for (i, (a, b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let kx = (i + 1) as f64 * self.base * x;
            v += a * kx.cos() + b * kx.sin();
        }
        v
    }

    pub fn eval_derivative(&self, x: f64) -> f64 {
        let mut v = 0.0;
        for (i, (a, b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let k = (i + 1) as f64 * self.base;
            let kx = k * x;
            v += k * (b * kx.cos() - a * kx.sin());
        }
        v
    }

    /// Σ |coefficients|, an upper bound for |series − mean|.
    pub fn amplitude_bound(&self) -> f64 {
        self.cos_coeffs
            .iter()
            .chain(&self.sin_coeffs)
            .map(|c| c.abs())
            .sum()
    }

    /// Σ k·|coefficients|·(2π/L), an upper bound for |series′|.
    pub fn derivative_bound(&self) -> f64 {
        self.cos_coeffs
            .iter()
            .zip(&self.sin_coeffs)
            .enumerate()
            .map(|(i, (a, b))| (i + 1) as f64 * self.base * (a.abs() + b.abs()))
            .sum()
    }

    /// Rescales all coefficients by a common factor.
    pub fn scaled(mut self, factor: f64) -> FourierSeries {
        for c in self.cos_coeffs.iter_mut().chain(self.sin_coeffs.iter_mut()) {
            *c *= factor;
        }
        self
    }

    pub fn sample(&self, grid: Grid) -> Field {
        Field::from_fn(grid, |x| self.eval(x))
    }
}

/// Zero-mean smooth field with |f| ≲ amplitude.
pub fn smooth_field(rng: &mut ChaCha8Rng, grid: Grid, max_mode: usize, amplitude: f64) -> Field {
    FourierSeries::random(rng, grid.length(), max_mode, amplitude, 0.0).sample(grid)
}

/// Continuum series suitable for a positive density 1 + series: the
/// amplitude bound is kept at or below `amplitude` < 1.
pub fn density_series(rng: &mut ChaCha8Rng, length: f64, max_mode: usize, amplitude: f64) -> FourierSeries {
    assert!(amplitude > 0.0 && amplitude < 1.0);
    let series = FourierSeries::random(rng, length, max_mode, amplitude, 1.0);
    let bound = series.amplitude_bound();
    if bound > amplitude {
        series.scaled(amplitude / bound)
    } else {
        series
    }
}

/// Smooth positive density 1 + O(amplitude).
pub fn smooth_density(rng: &mut ChaCha8Rng, grid: Grid, max_mode: usize, amplitude: f64) -> Density {
    Density::new(density_series(rng, grid.length(), max_mode, amplitude).sample(grid))
        .expect("bounded perturbation of 1 is positive")
}

/// Continuum series for a displacement x + series whose derivative stays
/// within ±max_slope of 1, so the sampled map is a diffeomorphism.
pub fn displacement_series(
    rng: &mut ChaCha8Rng,
    length: f64,
    max_mode: usize,
    max_slope: f64,
) -> FourierSeries {
    assert!(max_slope > 0.0 && max_slope < 1.0);
    let series = FourierSeries::random(rng, length, max_mode, max_slope, 0.0);
    let bound = series.derivative_bound();
    if bound > max_slope {
        series.scaled(max_slope / bound)
    } else {
        series
    }
}

/// Smooth diffeomorphism x + displacement with derivative in
/// [1 − max_slope, 1 + max_slope].
pub fn smooth_diffeo(rng: &mut ChaCha8Rng, grid: Grid, max_mode: usize, max_slope: f64) -> Diffeo {
    let series = displacement_series(rng, grid.length(), max_mode, max_slope);
    Diffeo::new(Field::from_fn(grid, |x| x + series.eval(x)))
        .expect("bounded displacement slope keeps the map monotone")
}
