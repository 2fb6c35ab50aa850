use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};

use super::linalg::min_eigenvalue;
use crate::error::{Error, Result};
use crate::gramian::Gramian;

/// How `σ_min` of the cross-Gramian is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AngleMethod {
    /// Full singular value decomposition.
    #[default]
    Svd,
    /// Block inverse iteration on `UᵀU` with a Rayleigh–Ritz step.
    InverseIteration,
    /// Symmetric eigensolver on `UᵀU`.
    GramEigen,
}

impl fmt::Display for AngleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AngleMethod::Svd => "svd",
            AngleMethod::InverseIteration => "inverse-iteration",
            AngleMethod::GramEigen => "gram-eigen",
        })
    }
}

impl FromStr for AngleMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svd" => Ok(AngleMethod::Svd),
            "inverse-iteration" | "inverse" => Ok(AngleMethod::InverseIteration),
            "gram-eigen" | "eigen" => Ok(AngleMethod::GramEigen),
            _ => Err(Error::Parse(format!("unknown angle method '{s}'"))),
        }
    }
}

/// `μ = 1/σ_min` between the sampling and reconstruction spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleReport {
    pub max_freq: Vec<usize>,
    pub n: usize,
    pub sigma_min: f64,
    pub mu: f64,
    pub theta_target: Option<f64>,
}

impl AngleReport {
    pub const CSV_HEADER: &'static str = "N,theta,M,sigma_min,mu";

    pub fn csv_row(&self) -> String {
        let theta = self.theta_target.map(|t| t.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{:.17e},{:.17e}",
            self.n,
            theta,
            format_multi(&self.max_freq),
            self.sigma_min,
            self.mu
        )
    }

    pub fn meets(&self, theta: f64) -> bool {
        self.mu <= theta
    }
}

pub(crate) fn format_multi(m: &[usize]) -> String {
    m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("x")
}

/// Smallest singular value; zero when there are fewer rows than columns.
pub fn sigma_min(u: &DMatrix<f64>, method: AngleMethod) -> f64 {
    if u.ncols() == 0 {
        return 1.0;
    }
    if u.nrows() < u.ncols() {
        return 0.0;
    }
    match method {
        AngleMethod::Svd => u
            .singular_values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min),
        AngleMethod::GramEigen => min_eigenvalue(u.tr_mul(u)).max(0.0).sqrt(),
        AngleMethod::InverseIteration => inverse_iteration(&u.tr_mul(u)).max(0.0).sqrt(),
    }
}

/// Smallest eigenvalue of a symmetric positive semidefinite matrix by block
/// inverse iteration; a block handles clustered bottom eigenvalues.
fn inverse_iteration(g: &DMatrix<f64>) -> f64 {
    let n = g.nrows();
    let chol = match g.clone().cholesky() {
        Some(c) => c,
        None => return 0.0,
    };
    let b = n.min(6);
    let mut x = DMatrix::from_fn(n, b, |i, j| {
        // fixed pseudo-random start, deterministic across runs
        let t = (i * 7919 + j * 104_729 + 13) as f64;
        (t * 0.618_033_988_749_895).fract() - 0.5
    });
    let mut prev = f64::INFINITY;
    let mut lambda = f64::INFINITY;
    for _ in 0..500 {
        let y = chol.solve(&x);
        let q = y.qr().q();
        let h = q.tr_mul(&(g * &q));
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        // rotate the block to the Ritz vectors, smallest first
        let mut order: Vec<usize> = (0..b).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        lambda = eig.eigenvalues[order[0]];
        let v = eig.eigenvectors.select_columns(order.iter());
        x = &q * v;
        if (prev - lambda).abs() <= 1e-15 * lambda.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        prev = lambda;
    }
    lambda
}

/// Angle report with the default (SVD) method.
pub fn subspace_angle(u: &Gramian) -> AngleReport {
    subspace_angle_with(u, AngleMethod::Svd, None)
}

pub fn subspace_angle_with(u: &Gramian, method: AngleMethod, theta_target: Option<f64>) -> AngleReport {
    let s = sigma_min(u.matrix(), method);
    AngleReport {
        max_freq: u.sampling().max_freq.clone(),
        n: u.cols(),
        sigma_min: s,
        mu: if s > 0.0 { 1.0 / s } else { f64::INFINITY },
        theta_target,
    }
}
