use nalgebra::DMatrix;

use super::angle::{sigma_min, AngleMethod};
use super::check_theta;
use super::linalg::min_eigenvalue;
use crate::error::{Error, Result};
use crate::gramian::{assemble_with_basis, Gramian, Method};
use crate::walsh::{WalshOrdering, WalshSpec};
use crate::wavelet::{ScalingBasis, WaveletSpec};

/// Search controls for [`stable_sampling_rate`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Step unit of the doubling phase; defaults to `max(2^{R-2}, 1)`.
    pub granularity: Option<usize>,
    /// Largest per-axis sample count tried; defaults to `16·2^R` in 1-d and
    /// `4·2^R` otherwise, never beyond the grid.
    pub cap: Option<usize>,
    pub ordering: WalshOrdering,
}

/// Smallest isotropic per-axis sample count `Θ` with `μ ≤ θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SsrResult {
    pub level: u32,
    pub dim: usize,
    /// Number of basis functions `2^{dR}`.
    pub n: usize,
    pub theta: f64,
    /// Per-axis `Θ`.
    pub samples: usize,
    /// `Θ / 2^R`.
    pub ratio: f64,
    /// `σ_min` at `Θ`, recomputed by a full SVD.
    pub sigma_min: f64,
    /// Evaluated `(M, μ)` pairs in search order.
    pub trace: Vec<(usize, f64)>,
}

impl SsrResult {
    pub const CSV_HEADER: &'static str = "R,N,theta,Theta,ratio_M_over_N,sigma_min_at_Theta";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.17e}",
            self.level, self.n, self.theta, self.samples, self.ratio, self.sigma_min
        )
    }

    pub fn mu(&self) -> f64 {
        if self.sigma_min > 0.0 {
            1.0 / self.sigma_min
        } else {
            f64::INFINITY
        }
    }

    /// `μ` is nonincreasing along the trace sorted by `M`.
    pub fn is_monotone(&self, rel_tol: f64) -> bool {
        let mut t = self.trace.clone();
        t.sort_by_key(|e| e.0);
        t.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + rel_tol))
    }
}

fn gram_sigma_min(u: &DMatrix<f64>, rows: usize) -> f64 {
    let sub = u.rows(0, rows);
    min_eigenvalue(sub.tr_mul(&sub)).max(0.0).sqrt()
}

/// Find `Θ(2^{dR}, θ)` for the reconstruction space `recon`.
pub fn stable_sampling_rate(recon: &WaveletSpec, theta: f64, opts: SearchOptions) -> Result<SsrResult> {
    check_theta(theta)?;
    let basis = ScalingBasis::new(*recon)?;
    stable_sampling_rate_with_basis(&basis, theta, opts)
}

pub fn stable_sampling_rate_with_basis(basis: &ScalingBasis, theta: f64, opts: SearchOptions) -> Result<SsrResult> {
    check_theta(theta)?;
    let spec = *basis.spec();
    let per = spec.per_axis();
    let d = spec.dim;
    let default_cap = if d == 1 { 16 * per } else { 4 * per };
    let cap = opts.cap.unwrap_or(default_cap).min(spec.side()).max(per);
    let granularity = opts.granularity.unwrap_or((per / 4).max(1)).max(1);
    let full = assemble_with_basis(
        &WalshSpec::new(opts.ordering, vec![cap; d])?,
        basis,
        Method::QuadratureWht,
    )?;

    let mut trace = Vec::new();
    let mu_at = |m: usize, trace: &mut Vec<(usize, f64)>| -> Result<f64> {
        let s = if d == 1 {
            gram_sigma_min(full.matrix(), m)
        } else {
            let sub = full.restrict(&vec![m; d])?;
            min_eigenvalue(sub.matrix().tr_mul(sub.matrix())).max(0.0).sqrt()
        };
        let mu = if s > 0.0 { 1.0 / s } else { f64::INFINITY };
        trace.push((m, mu));
        Ok(mu)
    };

    // fewer than 2^R samples per axis cannot have full column rank
    let (mut lo, mut hi);
    if mu_at(per, &mut trace)? <= theta {
        hi = per;
        lo = per - 1;
    } else {
        lo = per;
        let mut step = granularity;
        loop {
            let m = per + step;
            if m > cap {
                if lo < cap && mu_at(cap, &mut trace)? <= theta {
                    hi = cap;
                    break;
                }
                return Err(Error::SearchCapExceeded { cap, trace });
            }
            if mu_at(m, &mut trace)? <= theta {
                hi = m;
                break;
            }
            lo = m;
            step *= 2;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if mu_at(mid, &mut trace)? <= theta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let at = restrict_rows(&full, hi)?;
    let s = sigma_min(at.matrix(), AngleMethod::Svd);
    Ok(SsrResult {
        level: spec.level,
        dim: d,
        n: spec.len(),
        theta,
        samples: hi,
        ratio: hi as f64 / per as f64,
        sigma_min: s,
        trace,
    })
}

fn restrict_rows(full: &Gramian, m: usize) -> Result<Gramian> {
    full.restrict(&vec![m; full.sampling().dim()])
}

/// Sufficient sampling factor `S_θ` from the decay constants of the
/// scaling-function pieces, at least 1.
///
/// 1-d: `(Ĉ(2p-2)θ/(θ-1))^{2/(2α-1)}`; `d`-dim:
/// `Ĉ((2p-2)2^d θ/(θ-1))^{2/(2α-1)}`. The bound is loose: for `α = 0.55`
/// the exponent is 20.
pub fn theoretical_s_theta(p: usize, alpha: f64, c_hat: f64, theta: f64, d: usize) -> Result<f64> {
    if !(alpha > 0.5) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if !(theta > 1.0) {
        return Err(Error::InvalidTheta(theta));
    }
    if d == 0 {
        return Err(Error::InvalidSpec("dimension must be at least 1".into()));
    }
    let exponent = 2.0 / (2.0 * alpha - 1.0);
    let edge = (2 * p - 2) as f64;
    let gain = theta / (theta - 1.0);
    let s = if d == 1 {
        (c_hat * edge * gain).powf(exponent)
    } else {
        c_hat * (edge * (1u64 << d) as f64 * gain).powf(exponent)
    };
    Ok(if s.is_nan() { f64::INFINITY } else { s.max(1.0) })
}
