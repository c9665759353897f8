//! Quadrature and differentiation rules on the equispaced periodic grid
//! `t_k = kπ/n`, `k = 0..2n`.
//!
//! All rules here are circulant: the weight coupling nodes `i` and `j` only
//! depends on `(i − j) mod 2n`, so each is stored as its generating row.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Composite trapezoid rule `(π/n) Σ f(t_k) |x′(t_k)|` over `2n` nodes.
pub fn trapezoid(samples: &[Complex64], jacobians: &[f64]) -> Result<Complex64> {
    if samples.len() != jacobians.len() {
        return Err(Error::Argument(format!(
            "trapezoid: {} samples but {} jacobians",
            samples.len(),
            jacobians.len()
        )));
    }
    if samples.is_empty() || !samples.len().is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "trapezoid needs a positive even node count, got {}",
            samples.len()
        )));
    }
    let h = 2.0 * PI / samples.len() as f64;
    let sum: Complex64 = samples.iter().zip(jacobians).map(|(f, j)| f * *j).sum();
    Ok(sum * h)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Argument(format!("half node count must be >= 2, got {n}")));
    }
    Ok(())
}

/// Weights `R_j(t_i)` for `∫₀^{2π} ln(4 sin²((t−s)/2)) f(s) ds ≈ Σ_j R_j(t) f(t_j)`,
/// exact for trigonometric polynomials of degree `< n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogWeights {
    n: usize,
    row: Vec<f64>,
}

impl LogWeights {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        let nf = n as f64;
        let row = (0..2 * n)
            .map(|k| {
                let d = k as f64 * PI / nf;
                let mut s = 0.0;
                for m in 1..n {
                    s += (m as f64 * d).cos() / m as f64;
                }
                let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
                -2.0 * PI / nf * s - PI / (nf * nf) * alt
            })
            .collect();
        Ok(Self { n, row })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `R_j(t_i)`.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let len = self.row.len();
        self.row[(i + len - j) % len]
    }

    /// Generating row `R_0(t_k)`.
    pub fn row(&self) -> &[f64] {
        &self.row
    }

    pub fn apply(&self, i: usize, samples: &[Complex64]) -> Complex64 {
        samples
            .iter()
            .enumerate()
            .map(|(j, f)| f * self.weight(i, j))
            .sum()
    }
}

/// Weights `W_j(t_i)` for the principal value `∫₀^{2π} cot((t−s)/2) f(s) ds`,
/// exact for trigonometric polynomials of degree `< n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyWeights {
    row: Vec<f64>,
}

impl CauchyWeights {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        let nf = n as f64;
        let row = (0..2 * n)
            .map(|k| {
                if k % 2 == 1 {
                    2.0 * PI / nf / (0.5 * k as f64 * PI / nf).tan()
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self { row })
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let len = self.row.len();
        self.row[(i + len - j) % len]
    }
}

/// Derivative of the trigonometric interpolant, sampled at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffMatrix {
    row: Vec<f64>,
}

impl DiffMatrix {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        let row = (0..2 * n)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    0.5 * sign / (0.5 * k as f64 * PI / n as f64).tan()
                }
            })
            .collect();
        Ok(Self { row })
    }

    pub fn len(&self) -> usize {
        self.row.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row.is_empty()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let len = self.row.len();
        self.row[(i + len - j) % len]
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        (0..f.len())
            .map(|i| f.iter().enumerate().map(|(j, v)| v * self.entry(i, j)).sum())
            .collect()
    }

    pub fn apply_real(&self, f: &[f64]) -> Vec<f64> {
        (0..f.len())
            .map(|i| f.iter().enumerate().map(|(j, v)| v * self.entry(i, j)).sum())
            .collect()
    }

    /// Tangential derivative `(D f)_k / |x′(t_k)|`.
    pub fn tangential(&self, f: &[Complex64], speed: &[f64]) -> Vec<Complex64> {
        self.apply(f)
            .into_iter()
            .zip(speed)
            .map(|(d, s)| d / *s)
            .collect()
    }
}
