use super::gwal;
use crate::dyadic::DyadicNumber;
use crate::error::{Error, Result};

/// `Φ(z) = Σ_{j=A}^{B} α_j Wal(j, z)` over a box of integer multi-indices.
///
/// Negative indices follow `Wal(-j, z) = -Wal(j, z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalshPolynomial {
    lower: Vec<i64>,
    upper: Vec<i64>,
    coeffs: Vec<f64>,
}

impl WalshPolynomial {
    /// `coeffs` is row-major over the box `lower..=upper`.
    pub fn new(lower: Vec<i64>, upper: Vec<i64>, coeffs: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(a, b)| a > b) {
            return Err(Error::InvalidSampling(format!(
                "empty index box {lower:?}..={upper:?}"
            )));
        }
        let expected: usize = lower
            .iter()
            .zip(&upper)
            .map(|(a, b)| (b - a + 1) as usize)
            .product();
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(WalshPolynomial {
            lower,
            upper,
            coeffs,
        })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn extents(&self) -> Vec<usize> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| (b - a + 1) as usize)
            .collect()
    }

    /// Exact evaluation at a dyadic point.
    pub fn eval(&self, z: &[DyadicNumber]) -> Result<f64> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: z.len(),
            });
        }
        let extents = self.extents();
        // Per-axis Walsh values, then a row-major tensor contraction.
        let tables: Vec<Vec<f64>> = (0..self.dim())
            .map(|k| {
                (0..extents[k])
                    .map(|o| {
                        let j = self.lower[k] + o as i64;
                        let s = DyadicNumber::from_int(j.unsigned_abs());
                        let v = gwal(&s, &z[k]) as f64;
                        if j < 0 {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let mut total = 0.0;
        let mut idx = vec![0usize; self.dim()];
        for &c in &self.coeffs {
            let w: f64 = idx.iter().enumerate().map(|(k, &o)| tables[k][o]).product();
            total += c * w;
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < extents[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_term() {
        let p = WalshPolynomial::new(vec![0], vec![0], vec![1.0]).unwrap();
        for j in 0..16 {
            assert_eq!(p.eval(&[DyadicNumber::grid_point(j, 4)]).unwrap(), 1.0);
        }
    }

    #[test]
    fn negative_indices_flip_sign() {
        let p = WalshPolynomial::new(vec![-2], vec![1], vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        for j in 0..64u64 {
            let z = DyadicNumber::grid_point(j, 6);
            let expect = gwal(&DyadicNumber::from_int(1), &z) - gwal(&DyadicNumber::from_int(2), &z);
            assert_eq!(p.eval(&[z]).unwrap(), expect as f64);
        }
    }

    #[test]
    fn shape_checks() {
        assert!(WalshPolynomial::new(vec![0, 0], vec![1, 1], vec![0.0; 3]).is_err());
        assert!(WalshPolynomial::new(vec![2], vec![1], vec![]).is_err());
        let p = WalshPolynomial::new(vec![0, 0], vec![1, 1], vec![0.0; 4]).unwrap();
        assert!(p.eval(&[DyadicNumber::ZERO]).is_err());
    }

    #[test]
    fn sampling_identity_small() {
        // Window inside the aligned block [0, 2L): Σ_j |Φ(j/2L)|² / 2L = Σ |α|²
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let l = 8u64;
        let coeffs: Vec<f64> = (0..11).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = WalshPolynomial::new(vec![3], vec![13], coeffs.clone()).unwrap();
        let bits = (2 * l).trailing_zeros();
        let lhs: f64 = (0..2 * l)
            .map(|j| p.eval(&[DyadicNumber::grid_point(j, bits)]).unwrap().powi(2))
            .sum::<f64>()
            / (2 * l) as f64;
        let rhs: f64 = coeffs.iter().map(|a| a * a).sum();
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
    }

    #[test]
    fn sampling_identity_fails_across_block_boundary() {
        // Wal(2L-1, ·) and Wal(2L, ·) coincide on the 2L-point grid.
        let p = WalshPolynomial::new(vec![1], vec![2], vec![1.0, -1.0]).unwrap();
        for j in 0..2u64 {
            assert_eq!(p.eval(&[DyadicNumber::grid_point(j, 1)]).unwrap(), 0.0);
        }
    }
}
