//! Functions on `[0,1]^d` sampled on the uniform dyadic grid of `2^depth`
//! points per axis.

use crate::error::{Error, Result};

/// Row-major tensor of values at the grid points `j / 2^depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSignal {
    depth: u32,
    dim: usize,
    data: Vec<f64>,
}

impl GridSignal {
    pub fn zeros(depth: u32, dim: usize) -> Self {
        let n = 1usize << (depth as usize * dim);
        GridSignal {
            depth,
            dim,
            data: vec![0.0; n],
        }
    }

    pub fn from_vec(depth: u32, dim: usize, data: Vec<f64>) -> Result<Self> {
        let n = 1usize << (depth as usize * dim);
        if data.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: data.len(),
            });
        }
        Ok(GridSignal { depth, dim, data })
    }

    /// Sample `f` at every grid point.
    pub fn from_fn(depth: u32, dim: usize, f: impl Fn(&[f64]) -> f64) -> Self {
        let side = 1usize << depth;
        let h = 1.0 / side as f64;
        let mut out = Self::zeros(depth, dim);
        let mut x = vec![0.0; dim];
        for (flat, v) in out.data.iter_mut().enumerate() {
            let mut rem = flat;
            for k in (0..dim).rev() {
                x[k] = (rem % side) as f64 * h;
                rem /= side;
            }
            *v = f(&x);
        }
        out
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        1 << self.depth
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.side(); self.dim]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    fn check_compatible(&self, other: &GridSignal) {
        assert!(
            self.depth == other.depth && self.dim == other.dim,
            "grid mismatch: depth {} dim {} vs depth {} dim {}",
            self.depth,
            self.dim,
            other.depth,
            other.dim
        );
    }

    /// Quadrature inner product `2^{-d q} Σ u v`; exact for functions that are
    /// constant on grid cells.
    pub fn inner(&self, other: &GridSignal) -> f64 {
        self.check_compatible(other);
        let s: f64 = self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum();
        s / self.len() as f64
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn distance(&self, other: &GridSignal) -> f64 {
        self.check_compatible(other);
        let s: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (s / self.len() as f64).sqrt()
    }

    pub fn max_abs_diff(&self, other: &GridSignal) -> f64 {
        self.check_compatible(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn axpy(&mut self, alpha: f64, other: &GridSignal) {
        self.check_compatible(other);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_and_norm() {
        let g = GridSignal::from_fn(3, 1, |x| x[0]);
        assert_eq!(g.data()[5], 5.0 / 8.0);
        let one = GridSignal::from_fn(4, 2, |_| 1.0);
        assert_eq!(one.norm(), 1.0);
        let g2 = GridSignal::from_fn(2, 2, |x| x[0] + 10.0 * x[1]);
        // row-major: last axis fastest
        assert_eq!(g2.data()[1], 10.0 * 0.25);
        assert_eq!(g2.data()[4], 0.25);
    }

    #[test]
    fn length_is_checked() {
        assert!(GridSignal::from_vec(3, 1, vec![0.0; 7]).is_err());
    }
}
