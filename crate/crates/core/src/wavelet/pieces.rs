//! Unit-interval pieces of the scaling function.

use super::cascade::{cascade, ScalingFunction};
use crate::error::Result;

/// `φ_i(x) = φ(x + i - 1)` on `[0, 1)` for `i = 2-p ..= p`, sampled at
/// spacing `2^{-depth}`.
#[derive(Clone, Debug)]
pub struct PieceSet {
    order: usize,
    depth: u32,
    pieces: Vec<Vec<f64>>,
}

impl PieceSet {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn first_index(&self) -> i64 {
        2 - self.order as i64
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.first_index()..=self.order as i64
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Samples of `φ_i` at `t·2^{-depth}`, `t = 0..2^depth`.
    pub fn piece(&self, i: i64) -> Option<&[f64]> {
        let idx = i - self.first_index();
        if idx < 0 {
            return None;
        }
        self.pieces.get(idx as usize).map(|v| v.as_slice())
    }

    /// `Σ_i φ_i(x - i + 1)` at `x = m·2^{-depth}` (centred convention).
    pub fn reassemble(&self, m: i64) -> f64 {
        let per = 1i64 << self.depth;
        self.indices()
            .map(|i| {
                let t = m - (i - 1) * per;
                if (0..per).contains(&t) {
                    self.piece(i).unwrap()[t as usize]
                } else {
                    0.0
                }
            })
            .sum()
    }
}

fn split(phi: &ScalingFunction) -> Vec<Vec<f64>> {
    let p = phi.order() as i64;
    let per = 1i64 << phi.depth();
    (2 - p..=p)
        .map(|i| (0..per).map(|t| phi.at(t + (i - 1) * per)).collect())
        .collect()
}

/// Split φ of order `p` into its `2p - 1` unit-interval pieces.
pub fn split_pieces(p: usize, depth: u32) -> Result<PieceSet> {
    let phi = cascade(p, depth)?;
    Ok(PieceSet {
        order: p,
        depth,
        pieces: split(&phi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_single_piece() {
        let s = split_pieces(1, 4).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.piece(1).unwrap().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn reassembly_is_exact() {
        for p in [1, 2, 4, 8] {
            let depth = 6;
            let s = split_pieces(p, depth).unwrap();
            assert_eq!(s.len(), 2 * p - 1);
            let phi = cascade(p, depth).unwrap();
            let per = 1i64 << depth;
            let lo = (1 - p as i64) * per;
            let hi = p as i64 * per;
            for m in lo..hi {
                assert_eq!(s.reassemble(m), phi.at(m), "p={p} m={m}");
            }
        }
    }
}
