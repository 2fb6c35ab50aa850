use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Result of a CGNR solve.
#[derive(Clone, Debug)]
pub struct CgnrOutcome {
    pub solution: DVector<f64>,
    pub iterations: usize,
    /// `‖Aᵀ(b - Ax)‖ / ‖Aᵀb‖` at exit.
    pub relative_residual: f64,
    pub converged: bool,
}

/// Conjugate gradients on the normal equations `AᵀA x = Aᵀb`.
pub fn cgnr(a: &DMatrix<f64>, b: &DVector<f64>, tol: f64, max_iter: usize) -> CgnrOutcome {
    let mut x = DVector::zeros(a.ncols());
    let mut r = b.clone();
    let mut z = a.tr_mul(&r);
    let z0 = z.norm();
    if z0 == 0.0 {
        return CgnrOutcome {
            solution: x,
            iterations: 0,
            relative_residual: 0.0,
            converged: true,
        };
    }
    let mut p = z.clone();
    let mut zz = z.norm_squared();
    let mut iterations = 0;
    let mut rel = 1.0;
    while iterations < max_iter {
        let w = a * &p;
        let ww = w.norm_squared();
        if ww == 0.0 {
            break;
        }
        let alpha = zz / ww;
        x.axpy(alpha, &p, 1.0);
        r.axpy(-alpha, &w, 1.0);
        z = a.tr_mul(&r);
        iterations += 1;
        let zz_new = z.norm_squared();
        rel = zz_new.sqrt() / z0;
        if rel <= tol {
            break;
        }
        let beta = zz_new / zz;
        zz = zz_new;
        p = &z + beta * &p;
    }
    CgnrOutcome {
        solution: x,
        iterations,
        relative_residual: rel,
        converged: rel <= tol,
    }
}

/// Least-squares solution by Householder QR (requires full column rank).
pub fn dense_least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    if a.nrows() < a.ncols() {
        return Err(Error::InvalidSampling(format!(
            "underdetermined system: {} rows, {} columns",
            a.nrows(),
            a.ncols()
        )));
    }
    let qr = a.clone().qr();
    let qtb = qr.q().tr_mul(b);
    qr.r()
        .solve_upper_triangular(&qtb)
        .ok_or_else(|| Error::Eigen("singular triangular factor".into()))
}

/// `‖Aᵀ(Ax - b)‖ / ‖Aᵀb‖`.
pub fn normal_residual(a: &DMatrix<f64>, x: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let atb = a.tr_mul(b).norm();
    let r = a * x - b;
    let g = a.tr_mul(&r).norm();
    if atb == 0.0 {
        g
    } else {
        g / atb
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub(crate) fn min_eigenvalue(g: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(g)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
