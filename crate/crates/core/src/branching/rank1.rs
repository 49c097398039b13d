//! Semi-analytic pipeline for rank-1 kernels `c psi(x) psi(y)` with
//! `psi(x) = a x^{-1/p}` on `(0, 1]`.
//!
//! With `beta(t) = int (1 - e^{-t psi}) psi dmu`, the survival parameter
//! `alpha = alpha(c)` is the largest root of `t = c beta(t)`, found by
//! bisection on the increasing map `gamma(t) = t / beta(t)`; then
//! `rho = int (1 - e^{-alpha psi}) dmu` and
//! `zeta = alpha int psi dmu - alpha^2 / (2c)`.
//!
//! Quadrature runs in log space `x = e^{-s}`: the integrands become smooth
//! bounded functions of `s` on `[0, S]` with geometric decay, so a plain
//! midpoint rule with a few thousand nodes resolves the `t^{p-1}`-size
//! corrections that drive the near-critical behaviour.

use alloc::string::String;

use crate::error::{Error, Result};
use crate::math;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rank1Solution {
    /// Largest root of `t = c beta(t)`; 0 at or below the threshold.
    pub alpha: f64,
    /// Survival probability `rho(c kappa)`.
    pub rho: f64,
    /// Giant-component edge density `zeta(c kappa)`.
    pub zeta: f64,
    /// Threshold `c_0 = 1 / int psi^2 dmu` (0 when `p <= 2`).
    pub c0: f64,
}

struct Psi {
    p: f64,
    a: f64,
}

impl Psi {
    /// `int psi dmu = a p / (p - 1)`.
    fn integral(&self) -> f64 {
        self.a * self.p / (self.p - 1.0)
    }

    /// `int psi^2 dmu`, infinite for `p <= 2`.
    fn square_integral(&self) -> f64 {
        if self.p > 2.0 {
            self.a * self.a * self.p / (self.p - 2.0)
        } else {
            f64::INFINITY
        }
    }

    /// `beta(t) = int_0^1 (1 - e^{-t psi(x)}) psi(x) dx` by midpoint rule in
    /// `s = ln(1/x)`.
    fn beta(&self, t: f64, nodes: usize) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let s_max = self.s_max(t);
        let h = s_max / nodes as f64;
        let mut acc = 0.0;
        for k in 0..nodes {
            let s = (k as f64 + 0.5) * h;
            let psi = self.a * math::exp(s / self.p);
            acc += -math::expm1(-t * psi) * psi * math::exp(-s);
        }
        acc * h
    }

    /// `rho(t) = int_0^1 (1 - e^{-t psi(x)}) dx`, same transform.
    fn rho(&self, t: f64, nodes: usize) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let s_max = self.s_max(t);
        let h = s_max / nodes as f64;
        let mut acc = 0.0;
        for k in 0..nodes {
            let s = (k as f64 + 0.5) * h;
            let psi = self.a * math::exp(s / self.p);
            acc += -math::expm1(-t * psi) * math::exp(-s);
        }
        acc * h
    }

    /// Truncation point. `1 - e^{-t psi(e^-s)}` saturates at
    /// `s_sat = p ln(1/(t a))`; beyond it the beta integrand is
    /// `psi e^-s = a e^{-s (1 - 1/p)}` and the rho integrand decays even
    /// faster, so `s_sat` plus enough e-foldings of the slowest rate puts
    /// the neglected tail below 1e-22 of the total.
    fn s_max(&self, t: f64) -> f64 {
        const LOG_EPS: f64 = 50.7; // ln(1e22)
        let sat = if t * self.a < 1.0 {
            self.p * math::ln(1.0 / (t * self.a))
        } else {
            0.0
        };
        sat + LOG_EPS / (1.0 - 1.0 / self.p)
    }
}

/// Solve the rank-1 survival problem for the kernel `c a^2 (xy)^{-1/p}`.
///
/// `quad_points` is the midpoint node count (default 4096 via
/// [`rank1_solve_default`]).
pub fn rank1_solve(p: f64, a: f64, c: f64, quad_points: usize) -> Result<Rank1Solution> {
    if !(p > 1.0) {
        return Err(Error::Domain(String::from(
            "rank-1 pipeline needs p > 1 (integrable psi)",
        )));
    }
    if !(a > 0.0) || !(c > 0.0) {
        return Err(Error::Domain(String::from(
            "rank-1 pipeline needs a > 0 and c > 0",
        )));
    }
    let psi = Psi { p, a };
    let c0 = if p > 2.0 { 1.0 / psi.square_integral() } else { 0.0 };
    if c <= c0 {
        return Ok(Rank1Solution {
            alpha: 0.0,
            rho: 0.0,
            zeta: 0.0,
            c0,
        });
    }

    // gamma(t) = t / beta(t) is increasing with gamma(0+) = c0; bracket the
    // root of gamma = c and bisect in log space
    let int_psi = psi.integral();
    let mut hi = c * int_psi * (1.0 + 1e-9);
    if psi.beta(hi, quad_points) * c > hi {
        // extremely rare rounding guard
        hi *= 2.0;
    }
    let mut lo = hi;
    loop {
        lo *= 0.25;
        if lo < 1e-290 {
            return Ok(Rank1Solution {
                alpha: 0.0,
                rho: 0.0,
                zeta: 0.0,
                c0,
            });
        }
        if c * psi.beta(lo, quad_points) > lo {
            break;
        }
    }
    for _ in 0..200 {
        if hi / lo - 1.0 < 1e-14 {
            break;
        }
        let mid = math::sqrt(lo * hi);
        if c * psi.beta(mid, quad_points) > mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = math::sqrt(lo * hi);
    let rho = psi.rho(alpha, quad_points);
    let zeta = alpha * int_psi - alpha * alpha / (2.0 * c);
    Ok(Rank1Solution { alpha, rho, zeta, c0 })
}

/// [`rank1_solve`] with the default node count.
pub fn rank1_solve_default(p: f64, a: f64, c: f64) -> Result<Rank1Solution> {
    rank1_solve(p, a, c, 4096)
}
