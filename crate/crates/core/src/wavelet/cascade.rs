//! Point values of the Daubechies scaling function on dyadic grids.

use nalgebra::DMatrix;

use super::filter::{daub_filter, DaubFilter};
use crate::error::{Error, Result};

/// Values of φ at `x = start + i·2^{-depth}`, `x ∈ [-p+1, p]`.
///
/// Stored in the centred convention where the support is `[-p+1, p]`;
/// `std_value` reads the same data with support `[0, 2p-1]`.
#[derive(Clone, Debug)]
pub struct ScalingFunction {
    order: usize,
    depth: u32,
    values: Vec<f64>,
}

impl ScalingFunction {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Left end of the support.
    pub fn start(&self) -> i64 {
        1 - self.order as i64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start() as f64 + i as f64 / (1u64 << self.depth) as f64
    }

    /// φ at `x = m·2^{-depth}` in the centred convention, zero off support.
    pub fn at(&self, m: i64) -> f64 {
        let i = m - self.start() * (1i64 << self.depth);
        if i < 0 || i as usize >= self.values.len() {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    /// φ at `x = m·2^{-depth}` with the support shifted to `[0, 2p-1]`.
    pub fn std_at(&self, m: i64) -> f64 {
        if m < 0 || m as usize >= self.values.len() {
            0.0
        } else {
            self.values[m as usize]
        }
    }
}

/// φ at the integers `0..2p-1` (support `[0, 2p-1]`): the eigenvector of the
/// transfer matrix `A[i][j] = √2 h_{2i-j}` for eigenvalue 1, normalized to
/// unit sum.
pub fn integer_values(filter: &DaubFilter) -> Result<Vec<f64>> {
    let p = filter.order();
    let n = 2 * p;
    if p == 1 {
        // eigenspace of the Haar transfer matrix is two-dimensional; take the
        // right-continuous indicator
        return Ok(vec![1.0, 0.0]);
    }
    let s2 = std::f64::consts::SQRT_2;
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = s2 * filter.tap(2 * i as i64 - j as i64);
        }
        a[(i, i)] -= 1.0;
    }
    let svd = a.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Eigen("no singular vectors".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]));
    let smallest = svd.singular_values[order[0]];
    let next = svd.singular_values[order[1]];
    if smallest > 1e-10 || next < 1e-8 {
        return Err(Error::Eigen(format!(
            "eigenvalue-1 eigenspace is not one-dimensional (singular values {smallest:e}, {next:e})"
        )));
    }
    let mut v: Vec<f64> = v_t.row(order[0]).iter().copied().collect();
    let sum: f64 = v.iter().sum();
    for x in &mut v {
        *x /= sum;
    }
    // endpoints vanish for p >= 2
    v[0] = 0.0;
    v[n - 1] = 0.0;
    Ok(v)
}

/// Evaluate φ of order `p` on `[-p+1, p]` at spacing `2^{-depth}`.
pub fn cascade(p: usize, depth: u32) -> Result<ScalingFunction> {
    if depth == 0 || depth > 24 {
        return Err(Error::InvalidSpec(format!(
            "cascade depth must be in 1..=24, got {depth}"
        )));
    }
    if p == 1 {
        let per = 1usize << depth;
        let mut values = vec![1.0; per + 1];
        values[per] = 0.0;
        return Ok(ScalingFunction {
            order: 1,
            depth,
            values,
        });
    }
    let filter = daub_filter(p)?;
    let len = 2 * p - 1;
    let mut vals = integer_values(&filter)?;
    vals.truncate(len + 1);
    let s2 = std::f64::consts::SQRT_2;
    for d in 1..=depth {
        let step = 1i64 << (d - 1);
        let n = len * (1usize << d) + 1;
        let mut next = vec![0.0; n];
        for (m, out) in next.iter_mut().enumerate() {
            if m % 2 == 0 {
                *out = vals[m / 2];
                continue;
            }
            // φ(x) = √2 Σ h_k φ(2x - k); 2x - k sits at index m - k·2^{d-1}
            let mut s = 0.0;
            for (k, &h) in filter.taps().iter().enumerate() {
                let idx = m as i64 - k as i64 * step;
                if idx >= 0 && (idx as usize) < vals.len() {
                    s += h * vals[idx as usize];
                }
            }
            *out = s2 * s;
        }
        vals = next;
    }
    Ok(ScalingFunction {
        order: p,
        depth,
        values: vals,
    })
}
