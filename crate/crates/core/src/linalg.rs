//! Dense row-major matrix helpers for the small symmetric systems arising
//! from discretized kernels. Sizes stay in the low thousands, so simple
//! cache-friendly loops are all that is needed.

use alloc::vec;
use alloc::vec::Vec;

/// `out = A x` for row-major `A` of shape `n x n`.
pub fn matvec(a: &[f64], n: usize, x: &[f64], out: &mut [f64]) {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(x.len(), n);
    debug_assert_eq!(out.len(), n);
    for (i, o) in out.iter_mut().enumerate() {
        let row = &a[i * n..(i + 1) * n];
        let mut acc = 0.0;
        for (aij, xj) in row.iter().zip(x.iter()) {
            acc += aij * xj;
        }
        *o = acc;
    }
}

/// `C = A B`, all row-major `n x n`. ikj loop order so the inner loop is a
/// contiguous saxpy.
pub fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n * n);
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        let crow = &mut c[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let brow = &b[k * n..(k + 1) * n];
            for (cv, bv) in crow.iter_mut().zip(brow.iter()) {
                *cv += aik * bv;
            }
        }
    }
    c
}

/// Entry-wise dot product `sum_ij A_ij B_ij`.
pub fn frobenius_dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn trace(a: &[f64], n: usize) -> f64 {
    (0..n).map(|i| a[i * n + i]).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    crate::math::sqrt(x.iter().map(|v| v * v).sum())
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}
