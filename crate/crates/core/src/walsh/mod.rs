//! Walsh functions, Walsh polynomials and fast Walsh–Hadamard transforms.

mod function;
mod poly;
mod transform;

pub use function::{
    gwal, gwal_nd, omega_matrix, sign_changes, wal, wal_fixed_width, wal_grid, WalshOrdering,
};
pub use poly::WalshPolynomial;
pub use transform::{
    bit_reverse, fwht, fwht_in_place, fwht_nd, gray, natural_index, Direction,
};

use crate::error::{Error, Result};

/// Identifies the sampling space spanned by `Wal(k, ·)` for `k_i < max_freq[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpec {
    pub ordering: WalshOrdering,
    pub max_freq: Vec<usize>,
}

impl WalshSpec {
    pub fn new(ordering: WalshOrdering, max_freq: Vec<usize>) -> Result<Self> {
        if max_freq.is_empty() {
            return Err(Error::InvalidSampling("dimension must be at least 1".into()));
        }
        if max_freq.contains(&0) {
            return Err(Error::InvalidSampling(format!(
                "per-axis sample counts must be positive, got {max_freq:?}"
            )));
        }
        Ok(WalshSpec { ordering, max_freq })
    }

    /// Isotropic sequency-ordered spec with `m` samples per axis.
    pub fn isotropic(m: usize, dim: usize) -> Result<Self> {
        Self::new(WalshOrdering::Kaczmarz, vec![m; dim])
    }

    pub fn dim(&self) -> usize {
        self.max_freq.len()
    }

    /// Total number of sampling functions `|M| = Π M_i`.
    pub fn len(&self) -> usize {
        self.max_freq.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
