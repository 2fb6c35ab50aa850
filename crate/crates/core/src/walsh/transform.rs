use super::WalshOrdering;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `X_j = (1/N) Σ_k x_k wal(j; k/N)`.
    Forward,
    /// `x_k = Σ_j X_j wal(j; k/N)`.
    Inverse,
}

/// Reverse the low `bits` bits of `k`.
#[inline]
pub fn bit_reverse(k: u64, bits: u32) -> u64 {
    if bits == 0 {
        0
    } else {
        k.reverse_bits() >> (64 - bits)
    }
}

/// Binary reflected Gray code.
#[inline]
pub fn gray(s: u64) -> u64 {
    s ^ (s >> 1)
}

/// Position in the natural (Hadamard) butterfly output that holds the
/// coefficient with index `j` in `ordering`.
#[inline]
pub fn natural_index(j: u64, bits: u32, ordering: WalshOrdering) -> u64 {
    match ordering {
        WalshOrdering::Natural => j,
        WalshOrdering::Paley => bit_reverse(j, bits),
        WalshOrdering::Kaczmarz => bit_reverse(gray(j), bits),
    }
}

fn log2_exact(n: usize) -> Result<u32> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(n.trailing_zeros())
}

fn butterfly(data: &mut [f64]) {
    let n = data.len();
    let mut h = 1;
    while h < n {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        h *= 2;
    }
}

/// In-place transform; `scratch` must have the same length as `data`.
pub fn fwht_in_place(
    data: &mut [f64],
    scratch: &mut [f64],
    ordering: WalshOrdering,
    direction: Direction,
) -> Result<()> {
    let n = data.len();
    let bits = log2_exact(n)?;
    assert_eq!(scratch.len(), n, "scratch length mismatch");
    match direction {
        Direction::Forward => {
            butterfly(data);
            let inv_n = 1.0 / n as f64;
            if ordering == WalshOrdering::Natural {
                data.iter_mut().for_each(|v| *v *= inv_n);
            } else {
                for (j, out) in scratch.iter_mut().enumerate() {
                    *out = data[natural_index(j as u64, bits, ordering) as usize] * inv_n;
                }
                data.copy_from_slice(scratch);
            }
        }
        Direction::Inverse => {
            if ordering != WalshOrdering::Natural {
                for (j, &v) in data.iter().enumerate() {
                    scratch[natural_index(j as u64, bits, ordering) as usize] = v;
                }
                data.copy_from_slice(scratch);
            }
            butterfly(data);
        }
    }
    Ok(())
}

/// Discrete Walsh transform of a vector whose length is a power of two.
pub fn fwht(x: &[f64], ordering: WalshOrdering, direction: Direction) -> Result<Vec<f64>> {
    let mut data = x.to_vec();
    let mut scratch = vec![0.0; x.len()];
    fwht_in_place(&mut data, &mut scratch, ordering, direction)?;
    Ok(data)
}

/// Separable d-dimensional transform of a row-major tensor.
pub fn fwht_nd(
    x: &[f64],
    shape: &[usize],
    ordering: WalshOrdering,
    direction: Direction,
) -> Result<Vec<f64>> {
    let total: usize = shape.iter().product();
    if total != x.len() {
        return Err(Error::DimensionMismatch {
            expected: total,
            got: x.len(),
        });
    }
    for &n in shape {
        log2_exact(n)?;
    }
    let mut data = x.to_vec();
    let mut lane = Vec::new();
    let mut scratch = Vec::new();
    for (axis, &n) in shape.iter().enumerate() {
        let stride: usize = shape[axis + 1..].iter().product();
        let outer = total / (n * stride);
        lane.resize(n, 0.0);
        scratch.resize(n, 0.0);
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for (i, v) in lane.iter_mut().enumerate() {
                    *v = data[base + i * stride];
                }
                fwht_in_place(&mut lane, &mut scratch, ordering, direction)?;
                for (i, v) in lane.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
    Ok(data)
}
