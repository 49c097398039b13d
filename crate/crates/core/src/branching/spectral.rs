//! Spectral path and cycle functionals.
//!
//! `alpha_k = (1/2) <1, T^k 1>` comes from repeated operator application to
//! the constant function. `beta_k = Tr(T^k) / (2k)` equals the trace of the
//! symmetrized matrix power, computed from `S^2` and `S^3` via Frobenius
//! products so no eigendecomposition is needed for `k <= 6`.

use alloc::vec;
use alloc::vec::Vec;

use crate::kernels::DiscreteKernel;
use crate::linalg;
use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPathCycle {
    /// `alpha[k-1] = alpha_k`, `k = 1..=kmax`.
    pub alpha: Vec<f64>,
    /// `beta[k-1] = beta_k` for `k >= 3`; entries for `k = 1, 2` are 0.
    pub beta: Vec<f64>,
}

/// Compute `alpha_k` and `beta_k` for `k = 1..=kmax`, `kmax <= 6`.
pub fn spectral_path_cycle(dk: &DiscreteKernel, kmax: usize) -> SpectralPathCycle {
    debug_assert!((1..=6).contains(&kmax));
    let r = dk.r;

    // alpha_k: iterate (Tf)_i = sum_j K_ij w_j f_j starting from f = 1
    let mut kw = vec![0.0; r * r];
    for i in 0..r {
        for j in 0..r {
            kw[i * r + j] = dk.entry(i, j) * dk.w[j];
        }
    }
    let mut f = vec![1.0; r];
    let mut tf = vec![0.0; r];
    let mut alpha = Vec::with_capacity(kmax);
    for _ in 1..=kmax {
        linalg::matvec(&kw, r, &f, &mut tf);
        core::mem::swap(&mut f, &mut tf);
        alpha.push(0.5 * linalg::dot(&f, &dk.w));
    }

    // beta_k from traces of S^k
    let sw: Vec<f64> = dk.w.iter().map(|&w| math::sqrt(w)).collect();
    let mut s = vec![0.0; r * r];
    for i in 0..r {
        for j in 0..r {
            s[i * r + j] = dk.entry(i, j) * sw[i] * sw[j];
        }
    }
    let mut tr = [0.0f64; 7];
    tr[1] = linalg::trace(&s, r);
    tr[2] = linalg::frobenius_dot(&s, &s);
    if kmax >= 3 {
        let s2 = linalg::matmul(&s, &s, r);
        tr[3] = linalg::frobenius_dot(&s2, &s);
        if kmax >= 4 {
            tr[4] = linalg::frobenius_dot(&s2, &s2);
        }
        if kmax >= 5 {
            let s3 = linalg::matmul(&s2, &s, r);
            tr[5] = linalg::frobenius_dot(&s2, &s3);
            if kmax >= 6 {
                tr[6] = linalg::frobenius_dot(&s3, &s3);
            }
        }
    }
    let beta = (1..=kmax)
        .map(|k| if k >= 3 { tr[k] / (2.0 * k as f64) } else { 0.0 })
        .collect();

    SpectralPathCycle { alpha, beta }
}
