//! Largest eigenvalue of the discretized integral operator.
//!
//! `T_kappa` acting on cell functions is `(Tf)_i = sum_j K_ij w_j f_j`,
//! which is similar to the symmetric matrix `S_ij = K_ij sqrt(w_i w_j)`.
//! Power iteration runs on `S^2` so bipartite kernels (spectrum symmetric
//! about 0, period-2 vector oscillation) converge like everything else; the
//! norm is `sqrt(lambda_max(S^2))` and the nonnegative eigenfunction is
//! recovered as `S u + norm * u`, which cancels the `-norm` component.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernels::DiscreteKernel;
use crate::linalg;
use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorNorm {
    /// `||T_kappa||` of the discretized operator.
    pub norm: f64,
    /// Nonnegative eigenfunction on cells (zero on zero-weight cells),
    /// normalized to `sum psi_i^2 w_i = 1` when the norm is positive.
    pub eigenvector: Vec<f64>,
    /// Hilbert-Schmidt norm `(sum K_ij^2 w_i w_j)^{1/2}`.
    pub hs_norm: f64,
    pub iterations: usize,
}

/// Power iteration with Rayleigh-quotient stopping: relative change below
/// `tol` over 10 consecutive steps.
pub fn operator_norm(dk: &DiscreteKernel, tol: f64, max_iter: usize) -> Result<OperatorNorm> {
    let r = dk.r;
    let sw: Vec<f64> = dk.w.iter().map(|&w| math::sqrt(w)).collect();
    let mut s = vec![0.0; r * r];
    for i in 0..r {
        for j in 0..r {
            s[i * r + j] = dk.entry(i, j) * sw[i] * sw[j];
        }
    }
    let hs_norm = dk.hs_norm();

    let mut v = vec![1.0 / math::sqrt(r as f64); r];
    let mut u = vec![0.0; r];
    let mut u2 = vec![0.0; r];
    let mut lam2_prev = f64::NAN;
    let mut lam2 = 0.0;
    let mut stable = 0usize;
    let mut iters = 0usize;
    let mut converged = false;
    while iters < max_iter {
        iters += 1;
        linalg::matvec(&s, r, &v, &mut u);
        let nu = linalg::norm2(&u);
        if nu == 0.0 {
            // S annihilates v: with positive start this means S = 0
            return Ok(OperatorNorm {
                norm: 0.0,
                eigenvector: vec![0.0; r],
                hs_norm,
                iterations: iters,
            });
        }
        linalg::matvec(&s, r, &u, &mut u2);
        lam2 = linalg::dot(&v, &u2); // = ||Sv||^2 for normalized v
        let n2 = linalg::norm2(&u2);
        for (vi, xi) in v.iter_mut().zip(u2.iter()) {
            *vi = xi / n2;
        }
        if lam2_prev.is_finite()
            && math::abs(lam2 - lam2_prev) <= tol * math::abs(lam2).max(f64::MIN_POSITIVE)
        {
            stable += 1;
            if stable >= 10 {
                converged = true;
                break;
            }
        } else {
            stable = 0;
        }
        lam2_prev = lam2;
    }
    let norm = math::sqrt(lam2.max(0.0));
    if !converged {
        return Err(Error::IterationLimit {
            iterations: iters,
            last_rayleigh: norm,
        });
    }

    // recover the +norm eigenvector from the S^2 limit
    linalg::matvec(&s, r, &v, &mut u);
    let mut z: Vec<f64> = u.iter().zip(v.iter()).map(|(su, vu)| su + norm * vu).collect();
    let nz = linalg::norm2(&z);
    if nz > 1e-12 {
        for zi in &mut z {
            *zi /= nz;
        }
    } else {
        z.copy_from_slice(&v);
    }
    // back to the function space: psi_i = z_i / sqrt(w_i)
    let mut psi: Vec<f64> = z
        .iter()
        .zip(sw.iter())
        .map(|(&zi, &si)| if si > 0.0 { zi / si } else { 0.0 })
        .collect();
    // clear rounding dust and normalize int psi^2 dmu = 1
    for p in &mut psi {
        if *p < 0.0 && *p > -1e-12 {
            *p = 0.0;
        }
    }
    let nrm2: f64 = psi.iter().zip(dk.w.iter()).map(|(p, w)| p * p * w).sum();
    if nrm2 > 0.0 {
        let inv = 1.0 / math::sqrt(nrm2);
        for p in &mut psi {
            *p *= inv;
        }
    }
    Ok(OperatorNorm {
        norm,
        eigenvector: psi,
        hs_norm,
        iterations: iters,
    })
}
