use crate::dyadic::DyadicNumber;
use crate::error::{Error, Result};
use crate::wavelet::split_pieces;

/// Grid mask `μ` with `Wal(s, t/2^depth) = (-1)^{popcount(μ & t)}` for all
/// `t < 2^depth`.
fn walsh_mask(s: &DyadicNumber, depth: u32) -> u64 {
    let mut mask = 0u64;
    for e in s.bits() {
        // s_e pairs with x_{-e-1} and x_{-e}; x bit 2^{-a} is bit depth-a of t
        for a in [e + 1, e] {
            if a >= 1 && a <= depth as i32 {
                mask ^= 1u64 << (depth as i32 - a);
            }
        }
    }
    mask
}

/// `∫_0^1 f(x) Wal(s, x) dx` for `f` given by samples at `t·2^{-depth}` and
/// held constant on each cell.
pub fn piece_transform(samples: &[f64], depth: u32, s: &DyadicNumber) -> f64 {
    assert_eq!(samples.len(), 1usize << depth, "samples must cover one period");
    let mask = walsh_mask(s, depth);
    let sum: f64 = samples
        .iter()
        .enumerate()
        .map(|(t, &v)| {
            if (mask & t as u64).count_ones().is_multiple_of(2) {
                v
            } else {
                -v
            }
        })
        .sum();
    let val = sum / samples.len() as f64;
    if s.is_negative() {
        -val
    } else {
        val
    }
}

/// Walsh transform magnitudes of one scaling-function piece at the
/// frequencies `m + j/L`, with a power-law fit of their decay in `m`.
#[derive(Clone, Debug)]
pub struct DecayProfile {
    pub order: usize,
    pub piece: i64,
    pub level: u32,
    pub m_max: usize,
    /// `samples[m-1][j] = |Ŵφ_i(m + j/L)|`.
    pub samples: Vec<Vec<f64>>,
    /// `peaks[m-1] = max_j samples[m-1][j]`.
    pub peaks: Vec<f64>,
    /// Least-squares slope of `ln peaks` against `ln m`; `-∞` when the
    /// profile vanishes.
    pub slope: f64,
    pub alpha_hat: f64,
    pub c_hat: f64,
}

impl DecayProfile {
    pub fn scale(&self) -> usize {
        1 << self.level
    }

    pub fn max_magnitude(&self) -> f64 {
        self.peaks.iter().copied().fold(0.0, f64::max)
    }
}

/// Sample and fit the decay of piece `i` of φ of order `p`.
pub fn decay_profile(p: usize, piece: i64, level: u32, m_max: usize) -> Result<DecayProfile> {
    if m_max < 2 {
        return Err(Error::InvalidSpec("decay profile needs m_max >= 2".into()));
    }
    if level > 16 {
        return Err(Error::InvalidSpec(format!("level {level} too large for a decay profile")));
    }
    let freq_bits = usize::BITS - m_max.leading_zeros();
    let depth = 12.max(level + freq_bits + 1);
    let pieces = split_pieces(p, depth)?;
    let samples_i = pieces.piece(piece).ok_or_else(|| {
        Error::InvalidSpec(format!(
            "piece index {piece} outside {}..={p}",
            pieces.first_index()
        ))
    })?;
    let l = 1u128 << level;
    let samples: Vec<Vec<f64>> = (1..=m_max as u128)
        .map(|m| {
            (0..l)
                .map(|j| {
                    let s = DyadicNumber::from_parts(m * l + j, level);
                    piece_transform(samples_i, depth, &s).abs()
                })
                .collect()
        })
        .collect();
    let peaks: Vec<f64> = samples
        .iter()
        .map(|row| row.iter().copied().fold(0.0, f64::max))
        .collect();
    let (slope, alpha_hat, c_hat) = fit_power_law(&peaks);
    Ok(DecayProfile {
        order: p,
        piece,
        level,
        m_max,
        samples,
        peaks,
        slope,
        alpha_hat,
        c_hat,
    })
}

/// Fit `e(m) ≈ C m^{-α}` on the positive entries; `Ĉ` is the smallest
/// constant making the bound hold.
fn fit_power_law(peaks: &[f64]) -> (f64, f64, f64) {
    let tiny = 1e-300;
    let pts: Vec<(f64, f64)> = peaks
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > tiny)
        .map(|(i, &e)| (((i + 1) as f64).ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return (f64::NEG_INFINITY, f64::INFINITY, 0.0);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    let alpha = -slope;
    let c_hat = peaks
        .iter()
        .enumerate()
        .map(|(i, &e)| e * ((i + 1) as f64).powf(alpha))
        .fold(0.0, f64::max);
    (slope, alpha, c_hat)
}

/// Smallest integer `p` with `p·2^R + z > 0`.
#[cfg(test)]
fn periodization_shift(z: i64, level: u32) -> i64 {
    let period = 1i64 << level;
    (-z).div_euclid(period) + 1
}
