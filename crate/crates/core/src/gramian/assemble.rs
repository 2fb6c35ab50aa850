use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::walsh::{fwht_in_place, wal_grid, Direction, WalshSpec};
use crate::wavelet::{ScalingBasis, SparseColumn, WaveletSpec};

/// How the entries `⟨φ_n, Wal(k,·)⟩` are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Method {
    /// Fast Walsh transform of each sampled column.
    #[default]
    QuadratureWht,
    /// Entry-by-entry quadrature against tabulated Walsh functions.
    Direct,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::QuadratureWht => "wht",
            Method::Direct => "direct",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wht" | "quadrature-wht" | "quadrature" => Ok(Method::QuadratureWht),
            "direct" => Ok(Method::Direct),
            _ => Err(Error::Parse(format!("unknown assembly method '{s}'"))),
        }
    }
}

/// Dense `M × N` matrix `U[k, n] = ⟨φ_n, Wal(k,·)⟩`.
///
/// Rows run over the frequency box `k_i < M_i` in row-major order, columns
/// over the basis in its row-major multi-index order.
#[derive(Clone, Debug)]
pub struct Gramian {
    matrix: DMatrix<f64>,
    sampling: WalshSpec,
    recon: WaveletSpec,
    method: Method,
}

impl Gramian {
    pub fn from_parts(matrix: DMatrix<f64>, sampling: WalshSpec, recon: WaveletSpec, method: Method) -> Result<Self> {
        if matrix.nrows() != sampling.len() || matrix.ncols() != recon.len() {
            return Err(Error::DimensionMismatch {
                expected: sampling.len() * recon.len(),
                got: matrix.nrows() * matrix.ncols(),
            });
        }
        Ok(Gramian {
            matrix,
            sampling,
            recon,
            method,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn sampling(&self) -> &WalshSpec {
        &self.sampling
    }

    pub fn recon(&self) -> &WaveletSpec {
        &self.recon
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn depth(&self) -> u32 {
        self.recon.depth
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// The sub-Gramian for a smaller frequency box.
    pub fn restrict(&self, max_freq: &[usize]) -> Result<Gramian> {
        let sampling = WalshSpec::new(self.sampling.ordering, max_freq.to_vec())?;
        if sampling.dim() != self.sampling.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.sampling.dim(),
                got: sampling.dim(),
            });
        }
        if max_freq.iter().zip(&self.sampling.max_freq).any(|(a, b)| a > b) {
            return Err(Error::InvalidSampling(format!(
                "cannot restrict {:?} to the larger box {:?}",
                self.sampling.max_freq, max_freq
            )));
        }
        let rows = box_rows(&self.sampling.max_freq, max_freq);
        let matrix = self.matrix.select_rows(rows.iter());
        Ok(Gramian {
            matrix,
            sampling,
            recon: self.recon,
            method: self.method,
        })
    }
}

/// Row indices (in the `outer` box) of the frequencies inside `inner`.
fn box_rows(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    let total: usize = inner.iter().product();
    let d = inner.len();
    let mut out = Vec::with_capacity(total);
    let mut k = vec![0usize; d];
    for _ in 0..total {
        let row = k.iter().zip(outer).fold(0, |acc, (&ki, &mi)| acc * mi + ki);
        out.push(row);
        for a in (0..d).rev() {
            k[a] += 1;
            if k[a] < inner[a] {
                break;
            }
            k[a] = 0;
        }
    }
    out
}

fn check_specs(sampling: &WalshSpec, recon: &WaveletSpec) -> Result<()> {
    if sampling.dim() != recon.dim {
        return Err(Error::DimensionMismatch {
            expected: recon.dim,
            got: sampling.dim(),
        });
    }
    for &m in &sampling.max_freq {
        if m > recon.side() {
            return Err(Error::FrequencyExceedsGrid {
                freq: m,
                depth: recon.depth,
            });
        }
    }
    Ok(())
}

/// Build the basis for `recon` and assemble.
pub fn assemble(sampling: &WalshSpec, recon: &WaveletSpec, method: Method) -> Result<Gramian> {
    check_specs(sampling, recon)?;
    let basis = ScalingBasis::new(*recon)?;
    assemble_with_basis(sampling, &basis, method)
}

/// Assemble against an existing basis.
pub fn assemble_with_basis(sampling: &WalshSpec, basis: &ScalingBasis, method: Method) -> Result<Gramian> {
    let recon = *basis.spec();
    check_specs(sampling, &recon)?;
    let matrix = match method {
        Method::QuadratureWht => assemble_wht(sampling, basis),
        Method::Direct => assemble_direct(sampling, basis),
    };
    Ok(Gramian {
        matrix,
        sampling: sampling.clone(),
        recon,
        method,
    })
}

/// `F[n][k] = ⟨φ_n, Wal(k,·)⟩` for the 1-d factors, `k < m_max`.
fn factor_transforms(sampling: &WalshSpec, basis: &ScalingBasis, m_max: usize) -> Vec<Vec<f64>> {
    let side = basis.spec().side();
    let ordering = sampling.ordering;
    basis
        .columns_1d()
        .par_iter()
        .map_init(
            || (vec![0.0; side], vec![0.0; side]),
            |(buf, scratch), col| {
                buf.iter_mut().for_each(|v| *v = 0.0);
                buf[col.offset..col.end()].copy_from_slice(&col.values);
                // the forward 1/2^q factor is the quadrature weight
                fwht_in_place(buf, scratch, ordering, Direction::Forward)
                    .expect("grid side is a power of two");
                buf[..m_max].to_vec()
            },
        )
        .collect()
}

fn assemble_wht(sampling: &WalshSpec, basis: &ScalingBasis) -> DMatrix<f64> {
    let m_max = *sampling.max_freq.iter().max().unwrap();
    let f = factor_transforms(sampling, basis, m_max);
    let spec = basis.spec();
    let rows = sampling.len();
    let cols = spec.len();
    let d = spec.dim;
    let ks: Vec<Vec<usize>> = box_multi_indices(&sampling.max_freq);
    let ns: Vec<Vec<usize>> = (0..cols).map(|n| basis.multi_index(n)).collect();
    // tensor columns are rank one, so the d-dimensional transform factorizes
    let data: Vec<Vec<f64>> = ns
        .par_iter()
        .map(|n| {
            ks.iter()
                .map(|k| (0..d).map(|a| f[n[a]][k[a]]).product())
                .collect()
        })
        .collect();
    DMatrix::from_fn(rows, cols, |r, c| data[c][r])
}

fn box_multi_indices(max_freq: &[usize]) -> Vec<Vec<usize>> {
    let d = max_freq.len();
    let total: usize = max_freq.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut k = vec![0usize; d];
    for _ in 0..total {
        out.push(k.clone());
        for a in (0..d).rev() {
            k[a] += 1;
            if k[a] < max_freq[a] {
                break;
            }
            k[a] = 0;
        }
    }
    out
}

fn assemble_direct(sampling: &WalshSpec, basis: &ScalingBasis) -> DMatrix<f64> {
    let spec = basis.spec();
    let q = spec.depth;
    let m_max = *sampling.max_freq.iter().max().unwrap();
    // table[k][x] = Wal(k, x/2^q)
    let table: Vec<Vec<f64>> = (0..m_max as u64)
        .map(|k| {
            (0..spec.side() as u64)
                .map(|x| f64::from(wal_grid(k, x, q, sampling.ordering)))
                .collect()
        })
        .collect();
    let ks = box_multi_indices(&sampling.max_freq);
    let cols = spec.len();
    let weight = (spec.side() as f64).powi(-(spec.dim as i32));
    let data: Vec<Vec<f64>> = (0..cols)
        .into_par_iter()
        .map(|n| {
            let factors: Vec<&SparseColumn> = basis
                .multi_index(n)
                .into_iter()
                .map(|i| &basis.columns_1d()[i])
                .collect();
            ks.iter()
                .map(|k| weight * tensor_sum(&factors, k, &table))
                .collect()
        })
        .collect();
    DMatrix::from_fn(ks.len(), cols, |r, c| data[c][r])
}

/// `Σ_x Π_a col_a(x_a) · Π_a Wal(k_a, x_a)` over the support box, visiting
/// every grid point of the tensor support.
fn tensor_sum(factors: &[&SparseColumn], k: &[usize], table: &[Vec<f64>]) -> f64 {
    let d = factors.len();
    let lens: Vec<usize> = factors.iter().map(|c| c.values.len()).collect();
    let total: usize = lens.iter().product();
    let mut idx = vec![0usize; d];
    let mut sum = 0.0;
    for _ in 0..total {
        let mut term = 1.0;
        for a in 0..d {
            let x = factors[a].offset + idx[a];
            term *= factors[a].values[idx[a]] * table[k[a]][x];
        }
        sum += term;
        for a in (0..d).rev() {
            idx[a] += 1;
            if idx[a] < lens[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSignal;
    use crate::walsh::{fwht_nd, WalshOrdering};

    fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).abs().max()
    }

    #[test]
    fn haar_is_scaled_sequency_hadamard() {
        let recon = WaveletSpec::new(1, 0, 3, 1, 7).unwrap();
        let sampling = WalshSpec::isotropic(8, 1).unwrap();
        let g = assemble(&sampling, &recon, Method::QuadratureWht).unwrap();
        let u = g.matrix();
        let scale = 2f64.powf(-1.5);
        for k in 0..8u64 {
            for n in 0..8u64 {
                // Haar cell n is constant for Wal(k) with k < 8
                let want = scale * f64::from(wal_grid(k, n, 3, WalshOrdering::Kaczmarz));
                assert!((u[(k as usize, n as usize)] - want).abs() < 1e-14);
            }
        }
        let uut = u * u.transpose();
        assert!(max_abs_diff(&uut, &DMatrix::identity(8, 8)) < 1e-12);
    }

    #[test]
    fn dual_paths_agree_1d() {
        let recon = WaveletSpec::new(2, 2, 5, 1, 12).unwrap();
        let sampling = WalshSpec::isotropic(64, 1).unwrap();
        let a = assemble(&sampling, &recon, Method::QuadratureWht).unwrap();
        let b = assemble(&sampling, &recon, Method::Direct).unwrap();
        assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-10);
    }

    #[test]
    fn dual_paths_agree_2d_all_orderings() {
        let recon = WaveletSpec::new(2, 2, 2, 2, 7).unwrap();
        for ordering in WalshOrdering::ALL {
            let sampling = WalshSpec::new(ordering, vec![6, 5]).unwrap();
            let a = assemble(&sampling, &recon, Method::QuadratureWht).unwrap();
            let b = assemble(&sampling, &recon, Method::Direct).unwrap();
            assert_eq!(a.rows(), 30);
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-10);
        }
    }

    #[test]
    fn factorized_transform_matches_fwht_nd_of_materialized_column() {
        let recon = WaveletSpec::new(2, 2, 2, 2, 6).unwrap();
        let basis = ScalingBasis::new(recon).unwrap();
        let sampling = WalshSpec::isotropic(8, 2).unwrap();
        let g = assemble_with_basis(&sampling, &basis, Method::QuadratureWht).unwrap();
        for n in [0, 5, 15] {
            let col: GridSignal = basis.dense_column(n);
            let t = fwht_nd(col.data(), &col.shape(), WalshOrdering::Kaczmarz, Direction::Forward).unwrap();
            for k1 in 0..8 {
                for k2 in 0..8 {
                    let want = t[k1 * 64 + k2];
                    assert!((g.matrix()[(k1 * 8 + k2, n)] - want).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn bessel_bounds() {
        let recon = WaveletSpec::new(4, 3, 4, 1, 11).unwrap();
        let sampling = WalshSpec::isotropic(64, 1).unwrap();
        let g = assemble(&sampling, &recon, Method::QuadratureWht).unwrap();
        let u = g.matrix();
        for n in 0..u.ncols() {
            let s: f64 = u.column(n).norm_squared();
            assert!(s <= 1.0 + 1e-12);
            assert!(s > 0.85);
        }
        for k in 0..u.nrows() {
            assert!(u.row(k).norm_squared() <= 1.0 + 1e-12);
        }
        assert!(u.abs().max() <= 1.0 + 1e-12);
        let big = assemble(&WalshSpec::isotropic(1024, 1).unwrap(), &recon, Method::QuadratureWht).unwrap();
        for n in 0..u.ncols() {
            let s = big.matrix().column(n).norm_squared();
            assert!(s >= u.column(n).norm_squared() - 1e-14);
            assert!(s > 0.999, "n={n} s={s}");
        }
    }

    #[test]
    fn restrict_selects_box_rows() {
        let recon = WaveletSpec::new(2, 2, 2, 2, 6).unwrap();
        let g = assemble(&WalshSpec::isotropic(6, 2).unwrap(), &recon, Method::QuadratureWht).unwrap();
        let small = g.restrict(&[4, 4]).unwrap();
        let direct = assemble(&WalshSpec::isotropic(4, 2).unwrap(), &recon, Method::QuadratureWht).unwrap();
        assert_eq!(max_abs_diff(small.matrix(), direct.matrix()), 0.0);
        assert!(g.restrict(&[7, 4]).is_err());
    }

    #[test]
    fn rejects_frequency_beyond_grid() {
        let recon = WaveletSpec::new(2, 2, 2, 1, 6).unwrap();
        let err = assemble(&WalshSpec::isotropic(65, 1).unwrap(), &recon, Method::QuadratureWht);
        assert!(matches!(err, Err(Error::FrequencyExceedsGrid { .. })));
        let err = assemble(&WalshSpec::isotropic(8, 2).unwrap(), &recon, Method::QuadratureWht);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }
}
