//! Bessel functions of the first kind by direct series summation, and their
//! first positive zeros. This is the independent oracle behind the Turova
//! critical-value cross-check, so it deliberately shares nothing with the
//! operator-norm machinery.

/// `J_nu(x)` for `nu > -1`, `x > 0`, by the ascending series
/// `sum_m (-1)^m (x/2)^{nu + 2m} / (m! Gamma(nu + m + 1))`, summed until the
/// term falls below machine precision relative to the accumulated sum.
pub fn j_nu(nu: f64, x: f64) -> f64 {
    debug_assert!(nu > -1.0 && x > 0.0);
    let half = 0.5 * x;
    // first term: (x/2)^nu / Gamma(nu + 1)
    let mut term = (nu * half.ln() - libm::lgamma(nu + 1.0)).exp();
    let mut sum = term;
    let q = half * half;
    for m in 1..500 {
        let mf = m as f64;
        term *= -q / (mf * (nu + mf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// First positive zero of `J_nu` for `nu > -1`: scan for a sign change from
/// the bracket `[0.1, 3 + max(nu, 0)]` (extending upward when the zero lies
/// beyond it, as happens for large orders), then bisect.
pub fn first_zero(nu: f64) -> f64 {
    debug_assert!(nu > -1.0);
    let mut lo = 0.1f64.min(0.5 * (nu + 1.0).sqrt());
    // J_nu > 0 just right of 0
    while j_nu(nu, lo) <= 0.0 {
        lo *= 0.5;
        if lo < 1e-8 {
            break;
        }
    }
    let mut hi = 3.0 + nu.max(0.0);
    let mut guard = 0;
    while j_nu(nu, hi) > 0.0 {
        // the McMahon-style bound nu + 1.86 nu^{1/3} + 2 always catches up
        hi *= 1.25;
        guard += 1;
        assert!(guard < 100, "no sign change found for nu={nu}");
    }
    let (mut a, mut b) = (lo, hi);
    // make sure the bracket holds a single sign change by walking up from lo
    let steps = 400;
    let mut x_prev = a;
    let mut f_prev = j_nu(nu, a);
    for k in 1..=steps {
        let x = a + (b - a) * k as f64 / steps as f64;
        let f = j_nu(nu, x);
        if f_prev > 0.0 && f <= 0.0 {
            a = x_prev;
            b = x;
            break;
        }
        x_prev = x;
        f_prev = f;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if j_nu(nu, mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
