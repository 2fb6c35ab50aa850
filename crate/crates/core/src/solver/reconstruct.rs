use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;

use super::angle::{sigma_min, AngleMethod};
use super::linalg::{cgnr, dense_least_squares, normal_residual};
use crate::error::{Error, Result};
use crate::gramian::Gramian;
use crate::grid::GridSignal;
use crate::walsh::{fwht_nd, Direction, WalshSpec};
use crate::wavelet::ScalingBasis;

/// Smallest singular value below which generalized sampling refuses.
const RANK_TOL: f64 = 1e-10;
const CG_TOL: f64 = 1e-12;
/// Largest `N` solved by dense QR under [`LsqSolver::Auto`].
const DENSE_MAX: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReconMethod {
    Gs,
    Pbdw,
    TruncatedWalsh,
}

impl ReconMethod {
    pub const ALL: [ReconMethod; 3] = [ReconMethod::Gs, ReconMethod::Pbdw, ReconMethod::TruncatedWalsh];

    pub fn name(&self) -> &'static str {
        match self {
            ReconMethod::Gs => "gs",
            ReconMethod::Pbdw => "pbdw",
            ReconMethod::TruncatedWalsh => "truncated-walsh",
        }
    }
}

impl fmt::Display for ReconMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReconMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gs" => Ok(ReconMethod::Gs),
            "pbdw" => Ok(ReconMethod::Pbdw),
            "truncated-walsh" | "walsh" => Ok(ReconMethod::TruncatedWalsh),
            _ => Err(Error::Parse(format!("unknown reconstruction method '{s}'"))),
        }
    }
}

/// Least-squares backend for generalized sampling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LsqSolver {
    /// Dense QR up to `N = 1024`, CGNR beyond.
    #[default]
    Auto,
    Dense,
    Cgnr,
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub method: ReconMethod,
    /// Wavelet coefficients (generalized sampling and PBDW).
    pub coefficients: Option<Vec<f64>>,
    /// Walsh coefficients of the sampling-space part (PBDW).
    pub walsh_coefficients: Option<Vec<f64>>,
    /// Grid realization, when a basis or grid depth was supplied.
    pub signal: Option<GridSignal>,
    /// `‖Uc - m‖` (zero for exact interpolants).
    pub residual_norm: f64,
    /// `μ = 1/σ_min` of the Gramian used; 1 for the truncated Walsh series.
    pub mu: f64,
    pub iterations: usize,
}

impl Reconstruction {
    pub fn is_stable(&self, theta: f64) -> bool {
        self.mu <= theta
    }
}

/// Walsh coefficients `⟨f, Wal(k,·)⟩` for `k` in the sampling box, row-major.
pub fn walsh_measurements(f: &GridSignal, sampling: &WalshSpec) -> Result<Vec<f64>> {
    if sampling.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: sampling.dim(),
        });
    }
    for &m in &sampling.max_freq {
        if m > f.side() {
            return Err(Error::FrequencyExceedsGrid {
                freq: m,
                depth: f.depth(),
            });
        }
    }
    let coeffs = fwht_nd(f.data(), &f.shape(), sampling.ordering, Direction::Forward)?;
    Ok(gather_box(&coeffs, f.side(), &sampling.max_freq))
}

fn for_each_box_index(max_freq: &[usize], side: usize, mut visit: impl FnMut(usize, usize)) {
    let d = max_freq.len();
    let total: usize = max_freq.iter().product();
    let mut k = vec![0usize; d];
    for row in 0..total {
        let flat = k.iter().fold(0, |acc, &ki| acc * side + ki);
        visit(row, flat);
        for a in (0..d).rev() {
            k[a] += 1;
            if k[a] < max_freq[a] {
                break;
            }
            k[a] = 0;
        }
    }
}

fn gather_box(coeffs: &[f64], side: usize, max_freq: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; max_freq.iter().product()];
    for_each_box_index(max_freq, side, |row, flat| out[row] = coeffs[flat]);
    out
}

fn check_measurements(measurements: &[f64], u: &Gramian) -> Result<()> {
    if measurements.len() != u.rows() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            got: measurements.len(),
        });
    }
    Ok(())
}

/// Generalized sampling with the default solver.
pub fn gs_reconstruct(measurements: &[f64], u: &Gramian) -> Result<Reconstruction> {
    gs_reconstruct_with(measurements, u, LsqSolver::Auto)
}

/// Least-squares wavelet coefficients `argmin ‖Uc - m‖`.
///
/// Refuses with [`Error::BelowSamplingRate`] when `U` is numerically rank
/// deficient.
pub fn gs_reconstruct_with(measurements: &[f64], u: &Gramian, solver: LsqSolver) -> Result<Reconstruction> {
    check_measurements(measurements, u)?;
    let a = u.matrix();
    let s = sigma_min(a, AngleMethod::Svd);
    let mu = if s > 0.0 { 1.0 / s } else { f64::INFINITY };
    if !(s > RANK_TOL) {
        return Err(Error::BelowSamplingRate { sigma_min: s, mu });
    }
    let b = DVector::from_column_slice(measurements);
    let n = u.cols();
    let use_dense = match solver {
        LsqSolver::Auto => n <= DENSE_MAX,
        LsqSolver::Dense => true,
        LsqSolver::Cgnr => false,
    };
    let (c, iterations) = if use_dense {
        (dense_least_squares(a, &b)?, 0)
    } else {
        let out = cgnr(a, &b, CG_TOL, 10 * n);
        (out.solution, out.iterations)
    };
    let residual = (a * &c - &b).norm();
    debug_assert!(normal_residual(a, &c, &b) < 1e-8);
    Ok(Reconstruction {
        method: ReconMethod::Gs,
        coefficients: Some(c.iter().copied().collect()),
        walsh_coefficients: None,
        signal: None,
        residual_norm: residual,
        mu,
        iterations,
    })
}

/// Zero-padded inverse transform of box coefficients.
fn walsh_synthesis(coeffs: &[f64], sampling: &WalshSpec, depth: u32) -> Result<GridSignal> {
    let d = sampling.dim();
    let side = 1usize << depth;
    let mut full = vec![0.0; 1usize << (depth as usize * d)];
    for_each_box_index(&sampling.max_freq, side, |row, flat| full[flat] = coeffs[row]);
    let data = fwht_nd(&full, &vec![side; d], sampling.ordering, Direction::Inverse)?;
    GridSignal::from_vec(depth, d, data)
}

/// PBDW state estimate `u* = η + v`, `η` in the sampling span and `v` in the
/// wavelet span.
///
/// Solves the saddle system `[I U; Uᵀ 0][a; c] = [m; 0]` by block
/// elimination: `c` is the least-squares solution of `Uc ≈ m` and
/// `a = m - Uc`. The measurements of `u*` reproduce `m` exactly and `u*` is
/// the closest such state to the wavelet span.
pub fn pbdw_reconstruct(measurements: &[f64], u: &Gramian, basis: &ScalingBasis) -> Result<Reconstruction> {
    if basis.spec() != u.recon() {
        return Err(Error::InvalidSpec("basis does not match the Gramian".into()));
    }
    let gs = gs_reconstruct(measurements, u)?;
    let c = DVector::from_vec(gs.coefficients.clone().unwrap());
    let b = DVector::from_column_slice(measurements);
    let a = &b - u.matrix() * &c;
    let a_vec: Vec<f64> = a.iter().copied().collect();
    let mut signal = basis.synthesize(c.as_slice())?;
    let eta = walsh_synthesis(&a_vec, u.sampling(), basis.spec().depth)?;
    signal.axpy(1.0, &eta);
    Ok(Reconstruction {
        method: ReconMethod::Pbdw,
        coefficients: gs.coefficients,
        walsh_coefficients: Some(a_vec),
        signal: Some(signal),
        residual_norm: 0.0,
        mu: gs.mu,
        iterations: gs.iterations,
    })
}

/// The orthogonal projection onto the first Walsh functions, realized on
/// the grid of depth `depth`.
pub fn truncated_walsh(measurements: &[f64], sampling: &WalshSpec, depth: u32) -> Result<Reconstruction> {
    if measurements.len() != sampling.len() {
        return Err(Error::DimensionMismatch {
            expected: sampling.len(),
            got: measurements.len(),
        });
    }
    for &m in &sampling.max_freq {
        if m > 1usize << depth {
            return Err(Error::FrequencyExceedsGrid { freq: m, depth });
        }
    }
    let signal = walsh_synthesis(measurements, sampling, depth)?;
    Ok(Reconstruction {
        method: ReconMethod::TruncatedWalsh,
        coefficients: None,
        walsh_coefficients: Some(measurements.to_vec()),
        signal: Some(signal),
        residual_norm: 0.0,
        mu: 1.0,
        iterations: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gramian::{assemble_with_basis, Method};
    use crate::walsh::WalshOrdering;
    use crate::wavelet::WaveletSpec;

    fn setup(p: usize, r: u32, m: usize) -> (ScalingBasis, Gramian) {
        let basis = ScalingBasis::new(WaveletSpec::with_defaults(p, r, 1).unwrap()).unwrap();
        let g = assemble_with_basis(&WalshSpec::isotropic(m, 1).unwrap(), &basis, Method::QuadratureWht).unwrap();
        (basis, g)
    }

    fn coeffs(n: usize, seed: f64) -> Vec<f64> {
        (0..n).map(|i| ((i as f64 + seed) * 1.618).sin()).collect()
    }

    #[test]
    fn gs_recovers_members_of_the_span() {
        let (basis, g) = setup(4, 5, 80);
        let c = coeffs(32, 0.3);
        let f = basis.synthesize(&c).unwrap();
        let m = walsh_measurements(&f, g.sampling()).unwrap();
        for solver in [LsqSolver::Dense, LsqSolver::Cgnr] {
            let rec = gs_reconstruct_with(&m, &g, solver).unwrap();
            let got = rec.coefficients.unwrap();
            for (a, b) in got.iter().zip(&c) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn gs_satisfies_normal_equations() {
        let (basis, g) = setup(2, 4, 40);
        let f = GridSignal::from_fn(basis.spec().depth, 1, |x| (5.0 * x[0]).exp().sin());
        let m = walsh_measurements(&f, g.sampling()).unwrap();
        let rec = gs_reconstruct(&m, &g).unwrap();
        let c = DVector::from_vec(rec.coefficients.unwrap());
        let b = DVector::from_vec(m);
        assert!(normal_residual(g.matrix(), &c, &b) < 1e-10);
    }

    #[test]
    fn gs_refuses_rank_deficient() {
        let (_, g) = setup(2, 4, 12);
        let err = gs_reconstruct(&[0.0; 12], &g).unwrap_err();
        assert!(matches!(err, Error::BelowSamplingRate { .. }));
    }

    #[test]
    fn truncated_walsh_is_a_projection() {
        let q = 10;
        let f = GridSignal::from_fn(q, 1, |x| (2.0 * std::f64::consts::PI * x[0]).cos());
        let sampling = WalshSpec::isotropic(77, 1).unwrap();
        let m = walsh_measurements(&f, &sampling).unwrap();
        let once = truncated_walsh(&m, &sampling, q).unwrap().signal.unwrap();
        let m2 = walsh_measurements(&once, &sampling).unwrap();
        let twice = truncated_walsh(&m2, &sampling, q).unwrap().signal.unwrap();
        assert!(once.max_abs_diff(&twice) < 1e-12);
    }

    #[test]
    fn truncated_walsh_reproduces_cell_constant_signals() {
        let q = 9;
        let f = GridSignal::from_fn(q, 1, |x| ((x[0] * 16.0).floor() * 0.7).sin());
        // low natural-order indices are fine-scale functions, so only the
        // sequency and Paley orderings span the coarse cells
        for ordering in [WalshOrdering::Kaczmarz, WalshOrdering::Paley] {
            let sampling = WalshSpec::new(ordering, vec![16]).unwrap();
            let m = walsh_measurements(&f, &sampling).unwrap();
            let rec = truncated_walsh(&m, &sampling, q).unwrap().signal.unwrap();
            assert!(rec.max_abs_diff(&f) < 1e-12, "{ordering}");
        }
    }

    #[test]
    fn pbdw_is_consistent_and_exact_on_the_span() {
        let (basis, g) = setup(2, 4, 24);
        let c = coeffs(16, 1.1);
        let f = basis.synthesize(&c).unwrap();
        let m = walsh_measurements(&f, g.sampling()).unwrap();
        let rec = pbdw_reconstruct(&m, &g, &basis).unwrap();
        assert!(rec.signal.as_ref().unwrap().max_abs_diff(&f) < 1e-8);

        let h = GridSignal::from_fn(basis.spec().depth, 1, |x| (x[0] - 0.37).abs().sqrt());
        let m = walsh_measurements(&h, g.sampling()).unwrap();
        let rec = pbdw_reconstruct(&m, &g, &basis).unwrap();
        let back = walsh_measurements(rec.signal.as_ref().unwrap(), g.sampling()).unwrap();
        for (a, b) in back.iter().zip(&m) {
            assert!((a - b).abs() < 1e-10);
        }
        // saddle system: Uᵀ a = 0
        let a = DVector::from_vec(rec.walsh_coefficients.unwrap());
        assert!(g.matrix().tr_mul(&a).norm() < 1e-10 * DVector::from_vec(m).norm());
    }

    #[test]
    fn measurements_2d_match_box_order() {
        let q = 5;
        let f = GridSignal::from_fn(q, 2, |x| x[0] + 2.0 * x[1] * x[1]);
        let sampling = WalshSpec::isotropic(3, 2).unwrap();
        let m = walsh_measurements(&f, &sampling).unwrap();
        let full = fwht_nd(f.data(), &f.shape(), WalshOrdering::Kaczmarz, Direction::Forward).unwrap();
        assert_eq!(m[3 + 2], full[32 + 2]);
        assert_eq!(m.len(), 9);
    }
}
