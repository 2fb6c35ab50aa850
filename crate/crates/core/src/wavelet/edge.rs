//! Edge functions: combinations of translates that reproduce polynomials up
//! to a boundary.

use std::fmt;
use std::str::FromStr;

use super::cascade::cascade;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Parse(format!("unknown side '{s}'"))),
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Edge function `n` as `Σ w·φ(x - k)` over translates `k` of φ on
/// `[0, 2p-1]`, with `x` measured from the boundary.
///
/// Left: `Σ_l C(l,n) φ(x + l)`, kept on `x ≥ 0`. Right: the mirrored index
/// pattern `Σ_l C(l,n) φ(x + 2p-1-l)`, kept on `x ≤ 0`. The right side uses
/// φ itself rather than its mirror image, so both sides stay inside the
/// span of integer translates of φ.
pub fn edge_stencil(p: usize, side: Side, n: usize) -> Vec<(i64, f64)> {
    let last = 2 * p as i64 - 1;
    (0..(2 * p - 1))
        .filter_map(|l| {
            let w = binomial(l, n);
            if w == 0.0 {
                return None;
            }
            let k = match side {
                Side::Left => -(l as i64),
                Side::Right => l as i64 - last,
            };
            Some((k, w))
        })
        .collect()
}

/// Unorthonormalized edge functions sampled at spacing `2^{-depth}`.
#[derive(Clone, Debug)]
pub struct EdgeFunctions {
    pub order: usize,
    pub side: Side,
    pub depth: u32,
    /// `values[n][i]` is edge function `n` at distance `i·2^{-depth}` from the
    /// boundary, `i = 0..=(2p-1)·2^depth`.
    pub values: Vec<Vec<f64>>,
}

/// The `p` edge functions on one side, restricted to the interval.
pub fn edge_functions(p: usize, side: Side, depth: u32) -> Result<EdgeFunctions> {
    let phi = cascade(p, depth)?;
    let per = 1i64 << depth;
    let width = (2 * p as i64 - 1) * per;
    let values = (0..p)
        .map(|n| {
            let stencil = edge_stencil(p, side, n);
            (0..=width)
                .map(|i| {
                    // x = i/2^depth on the left, x = -i/2^depth on the right
                    let x = match side {
                        Side::Left => i,
                        Side::Right => -i,
                    };
                    stencil
                        .iter()
                        .map(|&(k, w)| w * phi.std_at(x - k * per))
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(EdgeFunctions {
        order: p,
        side,
        depth,
        values,
    })
}
