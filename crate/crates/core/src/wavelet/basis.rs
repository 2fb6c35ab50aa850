//! Orthonormal boundary-corrected scaling bases on `[0,1]^d`.
//!
//! Every basis function is stored on the fine grid of `2^q` points per axis.
//! Translates are synthesized from a unit coefficient by `q - R` steps of the
//! filter bank (upsample, then filter with `h`), scaled by `2^{q/2}`, so the
//! grid family is exactly orthonormal and exactly refinable. Edge functions
//! are the restricted polynomial-weighted sums of translates, orthonormalized
//! by Gram–Schmidt. `d`-dimensional functions are tensor products of 1-d
//! columns and are only materialized on request.

use nalgebra::DMatrix;

use super::edge::{edge_stencil, Side};
use super::filter::{daub_filter, DaubFilter};
use crate::error::{Error, Result};
use crate::grid::GridSignal;

const MAX_DEPTH: u32 = 28;

/// Reconstruction-space parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WaveletSpec {
    /// Daubechies order `p`.
    pub order: usize,
    /// Coarsest level `J0`.
    pub coarse_level: u32,
    /// Top level `R`; `2^R` functions per axis.
    pub level: u32,
    pub dim: usize,
    /// Grid depth `q`.
    pub depth: u32,
}

impl WaveletSpec {
    pub fn new(order: usize, coarse_level: u32, level: u32, dim: usize, depth: u32) -> Result<Self> {
        let spec = WaveletSpec {
            order,
            coarse_level,
            level,
            dim,
            depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Smallest coarse level, grid depth `R + 7`.
    pub fn with_defaults(order: usize, level: u32, dim: usize) -> Result<Self> {
        Self::new(order, Self::min_coarse_level(order), level, dim, level + 7)
    }

    /// Smallest `J` with `2^J ≥ 2p - 1`.
    pub fn min_coarse_level(order: usize) -> u32 {
        let need = (2 * order).saturating_sub(1).max(1);
        need.next_power_of_two().trailing_zeros()
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.order > super::filter::MAX_ORDER {
            return Err(Error::UnsupportedOrder(self.order));
        }
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dimension must be at least 1".into()));
        }
        if (1u64 << self.coarse_level) < 2 * self.order as u64 - 1 {
            return Err(Error::InvalidSpec(format!(
                "coarse level {} too small for order {}: need 2^J0 >= {}",
                self.coarse_level,
                self.order,
                2 * self.order - 1
            )));
        }
        if self.coarse_level > self.level {
            return Err(Error::InvalidSpec(format!(
                "coarse level {} exceeds level {}",
                self.coarse_level, self.level
            )));
        }
        if self.depth < self.level + 4 {
            return Err(Error::InvalidSpec(format!(
                "grid depth {} must be at least level + 4 = {}",
                self.depth,
                self.level + 4
            )));
        }
        if self.depth > MAX_DEPTH {
            return Err(Error::InvalidSpec(format!(
                "grid depth {} exceeds {MAX_DEPTH}",
                self.depth
            )));
        }
        Ok(())
    }

    /// Functions per axis, `2^R`.
    pub fn per_axis(&self) -> usize {
        1 << self.level
    }

    /// Total number of functions `2^{dR}`.
    pub fn len(&self) -> usize {
        1 << (self.level as usize * self.dim)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid points per axis, `2^q`.
    pub fn side(&self) -> usize {
        1 << self.depth
    }
}

/// Role of a 1-d basis function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisKind {
    /// Left edge function with support `[0, (p+c)·2^{-R}]`.
    Left(usize),
    /// Plain translate `2^{R/2} φ(2^R x - k)`, support `[0, 2p-1]` shifted by `k`.
    Interior(i64),
    /// Right edge function with support `[1 - (p+j)·2^{-R}, 1]`.
    Right(usize),
}

/// A grid vector stored as its nonzero window `offset..offset + values.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseColumn {
    pub offset: usize,
    pub values: Vec<f64>,
}

impl SparseColumn {
    pub(crate) fn from_dense(dense: &[f64]) -> Self {
        let first = dense.iter().position(|&v| v != 0.0);
        match first {
            None => SparseColumn {
                offset: 0,
                values: Vec::new(),
            },
            Some(a) => {
                let b = dense.iter().rposition(|&v| v != 0.0).unwrap();
                SparseColumn {
                    offset: a,
                    values: dense[a..=b].to_vec(),
                }
            }
        }
    }

    pub fn end(&self) -> usize {
        self.offset + self.values.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        if i < self.offset || i >= self.end() {
            0.0
        } else {
            self.values[i - self.offset]
        }
    }

    /// Unscaled sum `Σ u_i v_i`.
    pub fn dot(&self, other: &SparseColumn) -> f64 {
        let a = self.offset.max(other.offset);
        let b = self.end().min(other.end());
        (a..b.max(a))
            .map(|i| self.values[i - self.offset] * other.values[i - other.offset])
            .sum()
    }

    fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(&dense[self.offset..self.end()])
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        out[self.offset..self.end()].copy_from_slice(&self.values);
        out
    }
}

/// `q - R` filter-bank synthesis steps applied to a unit coefficient.
fn synthesis_kernel(filter: &DaubFilter, steps: u32) -> Vec<f64> {
    let h = filter.taps();
    let mut c = vec![1.0];
    for _ in 0..steps {
        let mut next = vec![0.0; 2 * c.len() + h.len() - 2];
        for (k, &ck) in c.iter().enumerate() {
            for (t, &ht) in h.iter().enumerate() {
                next[2 * k + t] += ht * ck;
            }
        }
        c = next;
    }
    c
}

/// An orthonormal basis of the boundary-corrected scaling space at level `R`.
#[derive(Clone, Debug)]
pub struct ScalingBasis {
    spec: WaveletSpec,
    columns: Vec<SparseColumn>,
    kinds: Vec<AxisKind>,
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

impl ScalingBasis {
    pub fn new(spec: WaveletSpec) -> Result<Self> {
        spec.validate()?;
        let filter = daub_filter(spec.order)?;
        let p = spec.order;
        let per_axis = spec.per_axis();
        let side = spec.side();
        let steps = spec.depth - spec.level;
        let stride = 1usize << steps;
        let scale = (side as f64).sqrt();
        let kernel: Vec<f64> = if p == 1 {
            // indicator of one coarse cell, exact in floating point
            vec![(per_axis as f64).sqrt(); stride]
        } else {
            synthesis_kernel(&filter, steps)
                .into_iter()
                .map(|v| v * scale)
                .collect()
        };

        let translate = |k: i64| {
            let mut dense = vec![0.0; side];
            place(&mut dense, &kernel, k, stride, 1.0);
            SparseColumn::from_dense(&dense)
        };

        if p == 1 {
            let columns = (0..per_axis as i64).map(translate).collect();
            let kinds = (0..per_axis as i64).map(AxisKind::Interior).collect();
            return Ok(ScalingBasis {
                spec,
                columns,
                kinds,
            });
        }

        let n_interior = per_axis - 2 * p;
        let interior: Vec<SparseColumn> = (1..=n_interior as i64).map(translate).collect();
        let mut accepted: Vec<SparseColumn> = Vec::with_capacity(2 * p);

        let orthonormalize = |raw: Vec<f64>, column: usize, accepted: &mut Vec<SparseColumn>| {
            let mut v = raw;
            let norm0 = sq_norm(&v).sqrt();
            for _ in 0..2 {
                for u in interior.iter().chain(accepted.iter()) {
                    let c = u.dot_dense(&v) / side as f64;
                    if c != 0.0 {
                        for (x, &w) in v[u.offset..u.end()].iter_mut().zip(&u.values) {
                            *x -= c * w;
                        }
                    }
                }
            }
            let norm = sq_norm(&v).sqrt();
            if !(norm > 1e-10 * norm0) {
                return Err(Error::DependentColumns {
                    column,
                    residual: norm / norm0,
                });
            }
            // unit norm in the grid inner product 2^{-q} Σ
            let s = (side as f64).sqrt() / norm;
            v.iter_mut().for_each(|x| *x *= s);
            accepted.push(SparseColumn::from_dense(&v));
            Ok(())
        };

        // left block, tightest support first
        for c in 0..p {
            let mut dense = vec![0.0; side];
            for (k, w) in edge_stencil(p, Side::Left, p - 1 - c) {
                place(&mut dense, &kernel, k, stride, w);
            }
            orthonormalize(dense, c, &mut accepted)?;
        }
        // right block, tightest support first
        let last = per_axis as i64;
        for j in 0..p {
            let mut dense = vec![0.0; side];
            for (k, w) in edge_stencil(p, Side::Right, p - 1 - j) {
                place(&mut dense, &kernel, last + k, stride, w);
            }
            orthonormalize(dense, per_axis - 1 - j, &mut accepted)?;
        }

        let right: Vec<SparseColumn> = accepted.split_off(p);
        let mut columns = accepted;
        let mut kinds: Vec<AxisKind> = (0..p).map(AxisKind::Left).collect();
        for (i, col) in interior.into_iter().enumerate() {
            columns.push(col);
            kinds.push(AxisKind::Interior(i as i64 + 1));
        }
        for (j, col) in right.into_iter().enumerate().rev() {
            columns.push(col);
            kinds.push(AxisKind::Right(j));
        }
        Ok(ScalingBasis {
            spec,
            columns,
            kinds,
        })
    }

    pub fn spec(&self) -> &WaveletSpec {
        &self.spec
    }

    /// Total number of (tensor) basis functions.
    pub fn len(&self) -> usize {
        self.spec.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `2^R` one-dimensional factor functions.
    pub fn columns_1d(&self) -> &[SparseColumn] {
        &self.columns
    }

    pub fn kind_1d(&self, n: usize) -> AxisKind {
        self.kinds[n]
    }

    /// Reflection class of a 1-d index: 0 for the first `2^R - p`, 1 for the
    /// right block.
    pub fn reflection_class(&self, n: usize) -> u8 {
        u8::from(n >= self.spec.per_axis() - self.spec.order)
    }

    /// Per-axis indices of tensor function `n` (row-major, last axis fastest).
    pub fn multi_index(&self, n: usize) -> Vec<usize> {
        let per = self.spec.per_axis();
        let mut out = vec![0; self.spec.dim];
        let mut rem = n;
        for k in (0..self.spec.dim).rev() {
            out[k] = rem % per;
            rem /= per;
        }
        out
    }

    /// Grid inner product of two tensor functions.
    pub fn inner(&self, a: usize, b: usize) -> f64 {
        let ia = self.multi_index(a);
        let ib = self.multi_index(b);
        let side = self.spec.side() as f64;
        ia.iter()
            .zip(&ib)
            .map(|(&x, &y)| self.columns[x].dot(&self.columns[y]) / side)
            .product()
    }

    /// Gram matrix of the 1-d factors.
    pub fn gram_1d(&self) -> DMatrix<f64> {
        let n = self.columns.len();
        let side = self.spec.side() as f64;
        DMatrix::from_fn(n, n, |i, j| self.columns[i].dot(&self.columns[j]) / side)
    }

    /// Gram matrix of all `2^{dR}` functions.
    pub fn gram(&self) -> DMatrix<f64> {
        let g1 = self.gram_1d();
        let mut g = DMatrix::from_element(1, 1, 1.0);
        for _ in 0..self.spec.dim {
            g = g.kronecker(&g1);
        }
        g
    }

    /// Tensor function `n` on the full grid.
    pub fn dense_column(&self, n: usize) -> GridSignal {
        let mut coeffs = vec![0.0; self.len()];
        coeffs[n] = 1.0;
        self.synthesize(&coeffs).expect("coefficient length matches")
    }

    /// `Σ c_n φ_n` on the grid.
    pub fn synthesize(&self, coeffs: &[f64]) -> Result<GridSignal> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        let mut data = coeffs.to_vec();
        let mut shape = vec![self.spec.per_axis(); self.spec.dim];
        for axis in 0..self.spec.dim {
            data = expand_axis(&data, &shape, axis, &self.columns, self.spec.side());
            shape[axis] = self.spec.side();
        }
        GridSignal::from_vec(self.spec.depth, self.spec.dim, data)
    }

    /// Grid inner products `⟨f, φ_n⟩` for all `n`.
    pub fn analyze(&self, f: &GridSignal) -> Result<Vec<f64>> {
        if f.depth() != self.spec.depth || f.dim() != self.spec.dim {
            return Err(Error::InvalidSpec(format!(
                "signal grid (depth {}, dim {}) does not match basis (depth {}, dim {})",
                f.depth(),
                f.dim(),
                self.spec.depth,
                self.spec.dim
            )));
        }
        let mut data = f.data().to_vec();
        let mut shape = vec![self.spec.side(); self.spec.dim];
        let scale = 1.0 / self.spec.side() as f64;
        for axis in 0..self.spec.dim {
            data = contract_axis(&data, &shape, axis, &self.columns, scale);
            shape[axis] = self.spec.per_axis();
        }
        Ok(data)
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, f: &GridSignal) -> Result<GridSignal> {
        self.synthesize(&self.analyze(f)?)
    }

    /// Rebuild from stored 1-d factor columns.
    pub fn from_columns(spec: WaveletSpec, columns: Vec<SparseColumn>, kinds: Vec<AxisKind>) -> Result<Self> {
        spec.validate()?;
        if columns.len() != spec.per_axis() || kinds.len() != spec.per_axis() {
            return Err(Error::DimensionMismatch {
                expected: spec.per_axis(),
                got: columns.len(),
            });
        }
        if columns.iter().any(|c| c.end() > spec.side()) {
            return Err(Error::InvalidSpec("column exceeds the grid".into()));
        }
        Ok(ScalingBasis {
            spec,
            columns,
            kinds,
        })
    }

    /// Classify 1-d index `n` the way [`ScalingBasis::new`] orders columns.
    pub fn default_kinds(spec: &WaveletSpec) -> Vec<AxisKind> {
        let p = spec.order;
        let per = spec.per_axis();
        if p == 1 {
            return (0..per as i64).map(AxisKind::Interior).collect();
        }
        (0..per)
            .map(|n| {
                if n < p {
                    AxisKind::Left(n)
                } else if n < per - p {
                    AxisKind::Interior((n - p + 1) as i64)
                } else {
                    AxisKind::Right(per - 1 - n)
                }
            })
            .collect()
    }
}

fn place(dense: &mut [f64], kernel: &[f64], k: i64, stride: usize, w: f64) {
    let start = k * stride as i64;
    for (t, &v) in kernel.iter().enumerate() {
        let idx = start + t as i64;
        if idx >= 0 && (idx as usize) < dense.len() {
            dense[idx as usize] += w * v;
        }
    }
}

fn split(shape: &[usize], axis: usize) -> (usize, usize) {
    let outer = shape[..axis].iter().product();
    let inner = shape[axis + 1..].iter().product();
    (outer, inner)
}

/// Replace axis `axis` (grid points) by basis coefficients.
fn contract_axis(data: &[f64], shape: &[usize], axis: usize, cols: &[SparseColumn], scale: f64) -> Vec<f64> {
    let (outer, inner) = split(shape, axis);
    let len = shape[axis];
    let n = cols.len();
    let mut out = vec![0.0; outer * n * inner];
    for o in 0..outer {
        let src = &data[o * len * inner..(o + 1) * len * inner];
        let dst = &mut out[o * n * inner..(o + 1) * n * inner];
        for (c, col) in cols.iter().enumerate() {
            let row = &mut dst[c * inner..(c + 1) * inner];
            for (t, &w) in col.values.iter().enumerate() {
                let x = col.offset + t;
                let s = &src[x * inner..(x + 1) * inner];
                for (r, &v) in row.iter_mut().zip(s) {
                    *r += w * v;
                }
            }
            row.iter_mut().for_each(|r| *r *= scale);
        }
    }
    out
}

/// Replace axis `axis` (basis coefficients) by grid values.
fn expand_axis(data: &[f64], shape: &[usize], axis: usize, cols: &[SparseColumn], side: usize) -> Vec<f64> {
    let (outer, inner) = split(shape, axis);
    let n = shape[axis];
    let mut out = vec![0.0; outer * side * inner];
    for o in 0..outer {
        let src = &data[o * n * inner..(o + 1) * n * inner];
        let dst = &mut out[o * side * inner..(o + 1) * side * inner];
        for (c, col) in cols.iter().enumerate() {
            let coef = &src[c * inner..(c + 1) * inner];
            if coef.iter().all(|&v| v == 0.0) {
                continue;
            }
            for (t, &w) in col.values.iter().enumerate() {
                let x = col.offset + t;
                for (r, &v) in dst[x * inner..(x + 1) * inner].iter_mut().zip(coef) {
                    *r += w * v;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_identity_error(g: &DMatrix<f64>) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - want).abs());
            }
        }
        worst
    }

    #[test]
    fn spec_validation() {
        assert!(WaveletSpec::new(2, 1, 5, 1, 12).is_err());
        assert!(WaveletSpec::new(2, 2, 5, 1, 8).is_err());
        assert!(WaveletSpec::new(2, 6, 5, 1, 12).is_err());
        assert!(WaveletSpec::new(0, 0, 5, 1, 12).is_err());
        assert_eq!(WaveletSpec::min_coarse_level(1), 0);
        assert_eq!(WaveletSpec::min_coarse_level(2), 2);
        assert_eq!(WaveletSpec::min_coarse_level(4), 3);
        assert_eq!(WaveletSpec::min_coarse_level(8), 4);
        let s = WaveletSpec::with_defaults(8, 6, 1).unwrap();
        assert_eq!((s.coarse_level, s.depth), (4, 13));
    }

    #[test]
    fn haar_indicators() {
        let b = ScalingBasis::new(WaveletSpec::new(1, 0, 3, 1, 7).unwrap()).unwrap();
        let g = b.gram_1d();
        assert!(max_identity_error(&g) < 1e-15);
        let h = 2f64.powf(1.5);
        for n in 0..8 {
            let col = b.dense_column(n);
            for (i, &v) in col.data().iter().enumerate() {
                let want = if i / 16 == n { h } else { 0.0 };
                assert!((v - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orthonormal_1d() {
        for p in [2, 4, 8] {
            let j0 = WaveletSpec::min_coarse_level(p);
            for r in j0..=8 {
                let b = ScalingBasis::new(WaveletSpec::new(p, j0, r, 1, r + 7).unwrap()).unwrap();
                assert_eq!(b.columns_1d().len(), 1 << r);
                let err = max_identity_error(&b.gram_1d());
                assert!(err < 1e-8, "p={p} R={r} err={err}");
            }
        }
    }

    #[test]
    fn tensor_gram_matches_materialized() {
        let b = ScalingBasis::new(WaveletSpec::new(2, 2, 2, 2, 6).unwrap()).unwrap();
        assert_eq!(b.len(), 16);
        let cols: Vec<GridSignal> = (0..16).map(|n| b.dense_column(n)).collect();
        let g = b.gram();
        for i in 0..16 {
            for j in 0..16 {
                assert!((cols[i].inner(&cols[j]) - g[(i, j)]).abs() < 1e-12);
            }
        }
        assert!(max_identity_error(&g) < 1e-8);
    }

    #[test]
    fn count_in_two_dims() {
        let b = ScalingBasis::new(WaveletSpec::new(2, 2, 3, 2, 10).unwrap()).unwrap();
        assert_eq!(b.len(), 64);
        assert_eq!(b.multi_index(9), vec![1, 1]);
    }

    #[test]
    fn staggered_supports() {
        for p in [2, 4, 8] {
            let r = WaveletSpec::min_coarse_level(p) + 2;
            let spec = WaveletSpec::new(p, r - 2, r, 1, r + 7).unwrap();
            let b = ScalingBasis::new(spec).unwrap();
            let stride = 1usize << 7;
            let side = spec.side();
            for c in 0..p {
                let col = b.columns_1d()[c].to_dense(side);
                let end = (p + c) * stride;
                assert!(col[end..].iter().all(|v| v.abs() < 1e-12), "p={p} c={c}");
                let rc = b.columns_1d()[spec.per_axis() - 1 - c].to_dense(side);
                let start = side - (p + c) * stride;
                assert!(rc[..start].iter().all(|v| v.abs() < 1e-12), "p={p} c={c}");
            }
            assert_eq!(b.kind_1d(p), AxisKind::Interior(1));
            assert_eq!(b.reflection_class(spec.per_axis() - p), 1);
            assert_eq!(b.reflection_class(spec.per_axis() - p - 1), 0);
        }
    }

    #[test]
    fn reproduces_polynomials() {
        for p in [2, 4] {
            let spec = WaveletSpec::with_defaults(p, 5, 1).unwrap();
            let b = ScalingBasis::new(spec).unwrap();
            for deg in 0..p as i32 {
                // discrete polynomials of degree < p on the fine grid
                let f = GridSignal::from_fn(spec.depth, 1, |x| (x[0] - 0.3).powi(deg));
                let pf = b.project(&f).unwrap();
                let err = f.max_abs_diff(&pf);
                assert!(err < 1e-6, "p={p} deg={deg} err={err}");
            }
        }
    }

    #[test]
    fn interior_refinement() {
        let p = 4;
        let coarse = ScalingBasis::new(WaveletSpec::new(p, 3, 5, 1, 12).unwrap()).unwrap();
        let fine = ScalingBasis::new(WaveletSpec::new(p, 3, 6, 1, 12).unwrap()).unwrap();
        let filter = daub_filter(p).unwrap();
        let find = |b: &ScalingBasis, k: i64| {
            (0..b.columns_1d().len())
                .find(|&n| b.kind_1d(n) == AxisKind::Interior(k))
                .map(|n| b.columns_1d()[n].clone())
        };
        let side = 1 << 12;
        for n in 0..coarse.columns_1d().len() {
            if let AxisKind::Interior(k) = coarse.kind_1d(n) {
                let mut sum = vec![0.0; side];
                for (t, &h) in filter.taps().iter().enumerate() {
                    let col = find(&fine, 2 * k + t as i64).expect("fine translate is interior");
                    for (i, v) in col.to_dense(side).iter().enumerate() {
                        sum[i] += h * v;
                    }
                }
                let want = coarse.columns_1d()[n].to_dense(side);
                for (a, b) in sum.iter().zip(&want) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn nested_levels() {
        for p in [2, 8] {
            let j0 = WaveletSpec::min_coarse_level(p);
            let q = j0 + 9;
            let coarse = ScalingBasis::new(WaveletSpec::new(p, j0, j0 + 1, 1, q).unwrap()).unwrap();
            let fine = ScalingBasis::new(WaveletSpec::new(p, j0, j0 + 2, 1, q).unwrap()).unwrap();
            for n in 0..coarse.len() {
                let f = coarse.dense_column(n);
                let pf = fine.project(&f).unwrap();
                let res = f.distance(&pf);
                assert!(res < 1e-6, "p={p} n={n} residual={res}");
            }
        }
    }

    #[test]
    fn analyze_synthesize_round_trip_2d() {
        let b = ScalingBasis::new(WaveletSpec::new(2, 2, 2, 2, 6).unwrap()).unwrap();
        let coeffs: Vec<f64> = (0..16).map(|i| (i as f64 * 0.37).sin()).collect();
        let f = b.synthesize(&coeffs).unwrap();
        let back = b.analyze(&f).unwrap();
        for (a, c) in back.iter().zip(&coeffs) {
            assert!((a - c).abs() < 1e-12);
        }
    }
}
