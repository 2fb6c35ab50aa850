//! Daubechies low-pass filters by spectral factorization.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 10;

/// Low-pass filter of the extremal-phase Daubechies family with `order`
/// vanishing moments.
#[derive(Clone, Debug, PartialEq)]
pub struct DaubFilter {
    order: usize,
    taps: Vec<f64>,
}

impl DaubFilter {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Tap `k`, zero outside `0..2p`.
    pub fn tap(&self, k: i64) -> f64 {
        if k < 0 || k as usize >= self.taps.len() {
            0.0
        } else {
            self.taps[k as usize]
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn horner(coeffs: &[f64], y: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * y + p;
        p = p * y + c;
    }
    (p, dp)
}

/// Roots of `Σ c_k y^k` (ascending coefficients) from the companion matrix,
/// polished by Newton steps.
fn poly_roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    comp.complex_eigenvalues()
        .iter()
        .map(|&r0| {
            let mut r = r0;
            for _ in 0..50 {
                let (p, dp) = horner(coeffs, r);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                r -= step;
                if step.norm() <= 1e-17 * r.norm().max(1.0) {
                    break;
                }
            }
            r
        })
        .collect()
}

fn poly_mul_linear(poly: &[Complex<f64>], root: Complex<f64>) -> Vec<Complex<f64>> {
    // poly(z) * (z - root), ascending coefficients
    let mut out = vec![Complex::new(0.0, 0.0); poly.len() + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

/// Daubechies filter of order `p` (`2p` taps), `1 <= p <= 10`.
pub fn daub_filter(p: usize) -> Result<DaubFilter> {
    if p == 0 || p > MAX_ORDER {
        return Err(Error::UnsupportedOrder(p));
    }
    // |H|² factor in y = sin²(ω/2): P(y) = Σ_{k<p} C(p-1+k, k) y^k
    let pc: Vec<f64> = (0..p).map(|k| binomial(p - 1 + k, k)).collect();
    let mut poly = vec![Complex::new(1.0, 0.0)];
    for _ in 0..p {
        poly = poly_mul_linear(&poly, Complex::new(-1.0, 0.0));
    }
    for y in poly_roots(&pc) {
        // y = (2 - z - 1/z)/4  <=>  z² - (2 - 4y) z + 1 = 0
        let b = Complex::new(2.0, 0.0) - y * 4.0;
        let disc = (b * b - Complex::new(4.0, 0.0)).sqrt();
        let z1 = (b + disc) * 0.5;
        let z2 = (b - disc) * 0.5;
        let z = if z1.norm() < z2.norm() { z1 } else { z2 };
        poly = poly_mul_linear(&poly, z);
    }
    // minimum-phase ordering puts the largest taps first
    let mut taps: Vec<f64> = poly.iter().rev().map(|c| c.re).collect();
    let sum: f64 = taps.iter().sum();
    let scale = std::f64::consts::SQRT_2 / sum;
    for t in &mut taps {
        *t *= scale;
    }
    Ok(DaubFilter { order: p, taps })
}
