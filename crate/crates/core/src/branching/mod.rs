//! The branching-process side of the model: operator norm, the survival
//! fixed point, derived functionals, Monte Carlo simulation, spectral
//! path/cycle functionals, the rank-1 pipeline, transition slopes, and
//! critical points.
//!
//! All solver guarantees hold for the discretized operator; convergence to
//! the continuum is certified by grid-refinement brackets (lower-mode
//! discretizations increase to the kernel, so their norms and survival
//! probabilities are lower bounds).

mod mc;
mod norm;
mod rank1;
mod spectral;

pub use mc::{mc_branching, McEstimate, McOptions, McRoot};
pub use norm::{operator_norm, OperatorNorm};
pub use rank1::{rank1_solve, rank1_solve_default, Rank1Solution};
pub use spectral::{spectral_path_cycle, SpectralPathCycle};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{discretize, DiscreteKernel, DiscretizeMode, Kernel};
use crate::linalg;
use crate::math;
use crate::spaces::TypeSpace;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    /// Stop the fixed-point iteration when the max entry change drops
    /// below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Rayleigh-quotient relative-change tolerance for power iteration.
    pub norm_tol: f64,
    pub norm_max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        // near criticality the iteration contracts like the dual norm, so
        // the cap is generous
        SolverSettings {
            tol: 1e-10,
            max_iter: 1_000_000,
            norm_tol: 1e-12,
            norm_max_iter: 200_000,
        }
    }
}

/// Solution of `rho = 1 - exp(-T_kappa rho)` plus derived scalars.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalProfile {
    /// Per-cell survival probabilities, each in `[0, 1)`. Cells with huge
    /// mean offspring can round to exactly 1.0 in `f64`; the resolvable
    /// complement lives in `survival_complement`.
    pub rho: Vec<f64>,
    /// `exp(-(T rho)_i) = 1 - rho_i`, kept separately so extinction
    /// probabilities far below `f64` epsilon (e.g. `e^{-170}`) stay exact.
    pub survival_complement: Vec<f64>,
    /// `rho(kappa) = sum_i rho_i w_i` (a measure integral, not divided by
    /// `mu(S)`).
    pub rho_scalar: f64,
    /// Asymptotic giant-component edges per vertex.
    pub zeta: f64,
    /// Mean-degree function `lambda_i = sum_j K_ij w_j`.
    pub lambda: Vec<f64>,
    /// `||T_kappa||` of the discretized operator.
    pub norm: f64,
    pub hs_norm: f64,
    /// Norm of the dual operator on `(1 - rho) dmu`; present when
    /// `rho_scalar > 0`.
    pub dual_norm: Option<f64>,
    /// `max_i |Phi(rho)_i - rho_i|` at the returned iterate.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The tolerance the solve ran with (used by consistency checks).
    pub tol: f64,
}

/// Iterate `f <- 1 - exp(-K (f w))` from `f = 1`; iterates are entrywise
/// nonincreasing and converge to the maximal fixed point.
///
/// Hitting `max_iter` is not an error: the last iterate is returned flagged
/// `converged = false`.
pub fn solve_survival(dk: &DiscreteKernel, settings: &SolverSettings) -> Result<SurvivalProfile> {
    let r = dk.r;
    let mut kw = vec![0.0; r * r];
    for i in 0..r {
        for j in 0..r {
            kw[i * r + j] = dk.entry(i, j) * dk.w[j];
        }
    }
    let mut f = vec![1.0f64; r];
    let mut tf = vec![0.0f64; r];
    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < settings.max_iter {
        iterations += 1;
        linalg::matvec(&kw, r, &f, &mut tf);
        let mut change = 0.0f64;
        for (fi, ti) in f.iter_mut().zip(tf.iter()) {
            let next = -math::expm1(-*ti);
            let d = math::abs(next - *fi);
            if d > change {
                change = d;
            }
            *fi = next;
        }
        if change < settings.tol {
            converged = true;
            break;
        }
    }
    // residual and survival complement at the final iterate
    linalg::matvec(&kw, r, &f, &mut tf);
    let mut residual = 0.0f64;
    let mut q = vec![0.0f64; r];
    for ((fi, ti), qi) in f.iter().zip(tf.iter()).zip(q.iter_mut()) {
        *qi = math::exp(-*ti);
        let d = math::abs(-math::expm1(-*ti) - *fi);
        if d > residual {
            residual = d;
        }
    }

    let on = operator_norm(dk, settings.norm_tol, settings.norm_max_iter)?;
    let lambda = dk.row_intensities();
    let rho_scalar = linalg::dot(&f, &dk.w);
    let zeta = zeta_direct(dk, &f);
    let dual_norm = if converged && rho_scalar > 0.0 {
        let (dual_dk, dn) = dual_with_settings(dk, &q, settings)?;
        let _ = dual_dk;
        Some(dn)
    } else {
        None
    };
    Ok(SurvivalProfile {
        rho: f,
        survival_complement: q,
        rho_scalar,
        zeta,
        lambda,
        norm: on.norm,
        hs_norm: on.hs_norm,
        dual_norm,
        residual,
        iterations,
        converged,
        tol: settings.tol,
    })
}

/// `zeta = (1/2) sum_ij K_ij (rho_i + rho_j - rho_i rho_j) w_i w_j`.
fn zeta_direct(dk: &DiscreteKernel, rho: &[f64]) -> f64 {
    let r = dk.r;
    let mut acc = 0.0;
    for i in 0..r {
        let wi = dk.w[i];
        if wi == 0.0 {
            continue;
        }
        let ri = rho[i];
        let row = &dk.k[i * r..(i + 1) * r];
        let mut inner = 0.0;
        for j in 0..r {
            inner += row[j] * (ri + rho[j] - ri * rho[j]) * dk.w[j];
        }
        acc += wi * inner;
    }
    0.5 * acc
}

/// `zeta = sum_i (1 - rho_i/2) ln(1/(1 - rho_i)) w_i`; equals the direct
/// double sum at exact fixed points. `ln(1/(1 - rho_i))` is evaluated as
/// `-ln(q_i)` from the survival complement, which stays finite even when
/// `rho_i` rounds to 1.
fn zeta_log_form(dk: &DiscreteKernel, rho: &[f64], complement: &[f64]) -> f64 {
    rho.iter()
        .zip(complement.iter())
        .zip(dk.w.iter())
        .map(|((&r, &q), &w)| {
            if r > 0.0 {
                (1.0 - 0.5 * r) * -math::ln(q) * w
            } else {
                0.0
            }
        })
        .sum()
}

/// Giant-component edge density with a two-route consistency check: the
/// direct double sum must agree with the log form within `10 * tol`, which
/// flags bad fixed points.
pub fn giant_edges(profile: &SurvivalProfile, dk: &DiscreteKernel) -> Result<f64> {
    let direct = zeta_direct(dk, &profile.rho);
    let log_form = zeta_log_form(dk, &profile.rho, &profile.survival_complement);
    let bound = 10.0 * profile.tol * (1.0 + math::abs(direct));
    if math::abs(direct - log_form) > bound {
        return Err(Error::Inconsistent(format!(
            "zeta routes disagree: direct={direct}, log-form={log_form}, bound={bound}"
        )));
    }
    Ok(direct)
}

/// Mixed-Poisson degree law of the discretized kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeLaw {
    /// `lambda_i = sum_j K_ij w_j` per cell.
    pub lambda: Vec<f64>,
    /// `pmf[k] = P(Xi = k)`, `k = 0..=kmax`, normalized by `mu(S)`.
    pub pmf: Vec<f64>,
    /// `tail[k] = P(Xi >= k)` by complement of partial sums.
    pub tail: Vec<f64>,
    /// Probability mass beyond `kmax` (truncation control).
    pub truncation: f64,
}

pub fn degree_law(dk: &DiscreteKernel, kmax: usize) -> DegreeLaw {
    let lambda = dk.row_intensities();
    let mass = dk.w.iter().sum::<f64>();
    let mut pmf = vec![0.0; kmax + 1];
    for (k, slot) in pmf.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (lam, w) in lambda.iter().zip(dk.w.iter()) {
            if *w > 0.0 {
                acc += math::exp(math::poisson_ln_pmf(k as u64, *lam)) * w;
            }
        }
        *slot = acc / mass;
    }
    let mut tail = vec![0.0; kmax + 1];
    let mut below = 0.0f64;
    for k in 0..=kmax {
        tail[k] = (1.0 - below).max(0.0);
        below += pmf[k];
    }
    let truncation = (1.0 - below).max(0.0);
    DegreeLaw {
        lambda,
        pmf,
        tail,
        truncation,
    }
}

/// Dual kernel: same values on the tilted measure `(1 - rho_i) w_i`,
/// computed from the survival complement so extreme cells keep their tiny
/// positive weight. Returns the tilted discrete kernel and its operator
/// norm.
pub fn dual(dk: &DiscreteKernel, profile: &SurvivalProfile) -> Result<(DiscreteKernel, f64)> {
    dual_with_settings(dk, &profile.survival_complement, &SolverSettings::default())
}

fn dual_with_settings(
    dk: &DiscreteKernel,
    complement: &[f64],
    settings: &SolverSettings,
) -> Result<(DiscreteKernel, f64)> {
    let mut tilted = dk.clone();
    for (w, q) in tilted.w.iter_mut().zip(complement.iter()) {
        *w *= q;
    }
    tilted.label = format!("dual:{}", dk.label);
    let on = operator_norm(&tilted, settings.norm_tol, settings.norm_max_iter)?;
    Ok((tilted, on.norm))
}

/// Asymptotic two-core vertex fraction: with `lam'_i = sum_j K_ij rho_j w_j`,
/// the probability that a root has at least two children with infinite lines
/// of descent, `sum_i (1 - e^{-lam'_i} - lam'_i e^{-lam'_i}) w_i`.
pub fn two_core_fraction(dk: &DiscreteKernel, profile: &SurvivalProfile) -> f64 {
    let r = dk.r;
    let mut acc = 0.0;
    for i in 0..r {
        if dk.w[i] == 0.0 {
            continue;
        }
        let row = &dk.k[i * r..(i + 1) * r];
        let lam: f64 = row
            .iter()
            .zip(profile.rho.iter().zip(dk.w.iter()))
            .map(|(k, (rho, w))| k * rho * w)
            .sum();
        acc += (1.0 - math::exp(-lam) - lam * math::exp(-lam)) * dk.w[i];
    }
    acc
}

/// Slope of the phase transition at the family threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionSlope {
    /// `c_0 = 1 / norm` of the provided discrete kernel.
    pub c0: f64,
    /// One-sided finite differences of `rho((c_0 + eps) kappa) / eps` at
    /// `eps = 1e-2, 1e-3`, Richardson-combined.
    pub slope_fd: f64,
    /// `2 c_0^{-1} int psi int psi^2 / int psi^3` with `psi` the leading
    /// eigenfunction normalized to `int psi^2 dmu = 1`.
    pub slope_formula: f64,
    /// Relative gap between the two routes.
    pub gap: f64,
}

pub fn transition_slope(dk: &DiscreteKernel, settings: &SolverSettings) -> Result<TransitionSlope> {
    let on = operator_norm(dk, settings.norm_tol, settings.norm_max_iter)?;
    if on.norm <= 0.0 {
        return Err(Error::Domain(String::from(
            "transition slope needs a nonzero kernel",
        )));
    }
    for (i, (&p, &w)) in on.eigenvector.iter().zip(dk.w.iter()).enumerate() {
        if w > 0.0 && p <= 0.0 {
            return Err(Error::InvalidEigenfunction(format!(
                "eigenfunction entry {i} is non-positive on a positive-weight cell"
            )));
        }
    }
    let c0 = 1.0 / on.norm;
    let i1 = linalg::dot(&on.eigenvector, &dk.w);
    let i2: f64 = on
        .eigenvector
        .iter()
        .zip(dk.w.iter())
        .map(|(p, w)| p * p * w)
        .sum();
    let i3: f64 = on
        .eigenvector
        .iter()
        .zip(dk.w.iter())
        .map(|(p, w)| p * p * p * w)
        .sum();
    let slope_formula = 2.0 / c0 * i1 * i2 / i3;

    // one-sided FD (rho = 0 below c0), Richardson-combined
    let eps = [1e-2, 1e-3];
    let mut s = [0.0f64; 2];
    for (k, &e) in eps.iter().enumerate() {
        let scaled = dk.scaled(c0 + e);
        let prof = solve_survival(&scaled, settings)?;
        s[k] = prof.rho_scalar / e;
    }
    let slope_fd = (eps[0] * s[1] - eps[1] * s[0]) / (eps[0] - eps[1]);
    let gap = math::abs(slope_fd - slope_formula) / slope_formula;
    Ok(TransitionSlope {
        c0,
        slope_fd,
        slope_formula,
        gap,
    })
}

/// Critical scale of a kernel family with a grid-refinement bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    /// `1 / norm` on the fine grid.
    pub c0: f64,
    /// `(lo, hi)`: `hi = 1/norm_fine` (norms of under-approximating grids
    /// increase with refinement, so this bounds the limit from above);
    /// `lo = 1/(norm_fine + (norm_fine - norm_coarse))`, a Richardson-style
    /// extension of the refinement step.
    pub bracket: (f64, f64),
    pub norm_fine: f64,
    pub norm_coarse: f64,
}

pub fn critical_point(
    kernel: &Kernel,
    space_fine: &TypeSpace,
    space_coarse: &TypeSpace,
    mode: DiscretizeMode,
    settings: &SolverSettings,
) -> Result<CriticalPoint> {
    let dk_fine = discretize(kernel, space_fine, mode)?;
    let dk_coarse = discretize(kernel, space_coarse, mode)?;
    let nf = operator_norm(&dk_fine, settings.norm_tol, settings.norm_max_iter)?.norm;
    let nc = operator_norm(&dk_coarse, settings.norm_tol, settings.norm_max_iter)?.norm;
    if nf <= 0.0 {
        return Err(Error::Domain(String::from(
            "critical point of a zero kernel is undefined",
        )));
    }
    let step = (nf - nc).max(0.0);
    Ok(CriticalPoint {
        c0: 1.0 / nf,
        bracket: (1.0 / (nf + step), 1.0 / nf),
        norm_fine: nf,
        norm_coarse: nc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Kernel;
    use crate::spaces::TypeSpace;

    fn constant_dk(c: f64) -> DiscreteKernel {
        let s = TypeSpace::finite(&[1.0]).unwrap();
        discretize(&Kernel::constant(c).unwrap(), &s, DiscretizeMode::Midpoint).unwrap()
    }

    #[test]
    fn critical_constant_kernel_dies() {
        let prof = solve_survival(&constant_dk(1.0), &SolverSettings::default()).unwrap();
        // at the critical point the fixed point is 0; the iteration floor is
        // O(sqrt(tol))
        assert!(prof.rho_scalar < 2e-5, "rho={}", prof.rho_scalar);
        assert!(prof.converged);
    }

    #[test]
    fn supercritical_profile_fields() {
        let prof = solve_survival(&constant_dk(2.0), &SolverSettings::default()).unwrap();
        assert!(prof.converged);
        assert!((prof.rho_scalar - 0.7968121300200200).abs() < 1e-8);
        assert!((prof.norm - 2.0).abs() < 1e-10);
        assert!((prof.lambda[0] - 2.0).abs() < 1e-12);
        assert!(prof.residual <= prof.tol);
        let dn = prof.dual_norm.expect("supercritical profile has a dual norm");
        assert!((dn - 2.0 * (1.0 - 0.7968121300200200)).abs() < 1e-7);
        let z = giant_edges(&prof, &constant_dk(2.0)).unwrap();
        assert!((z - 0.958714689493).abs() < 1e-8, "zeta={z}");
    }

    #[test]
    fn zero_rho_means_zero_zeta() {
        let dk = constant_dk(0.5);
        let prof = solve_survival(&dk, &SolverSettings::default()).unwrap();
        let z = giant_edges(&prof, &dk).unwrap();
        assert!(z.abs() < 1e-9);
        assert!(prof.dual_norm.is_some()); // rho_scalar is a positive remnant
    }

    #[test]
    fn bipartite_matches_scalar_reduction() {
        let s = TypeSpace::finite(&[0.5, 0.5]).unwrap();
        let k = Kernel::finite_matrix(alloc::vec![0.0, 4.0, 4.0, 0.0], 2).unwrap();
        let dk = discretize(&k, &s, DiscretizeMode::Midpoint).unwrap();
        let prof = solve_survival(&dk, &SolverSettings::default()).unwrap();
        for &r in &prof.rho {
            assert!((r - 0.7968121300200200).abs() < 1e-8, "r={r}");
        }
        assert!((prof.norm - 2.0).abs() < 1e-9);
    }

    #[test]
    fn two_core_fraction_constant_two() {
        let dk = constant_dk(2.0);
        let prof = solve_survival(&dk, &SolverSettings::default()).unwrap();
        let tc = two_core_fraction(&dk, &prof);
        assert!((tc - 0.473007011074).abs() < 1e-8, "tc={tc}");
        // monotone in the scale
        let dk3 = constant_dk(3.0);
        let prof3 = solve_survival(&dk3, &SolverSettings::default()).unwrap();
        assert!(two_core_fraction(&dk3, &prof3) > tc);
    }

    #[test]
    fn degree_law_poisson_reduction() {
        let dk = constant_dk(2.0);
        let law = degree_law(&dk, 40);
        for k in 0..=40usize {
            let expect = math::exp(math::poisson_ln_pmf(k as u64, 2.0));
            assert!((law.pmf[k] - expect).abs() < 1e-12);
        }
        assert!(law.truncation < 1e-12);
        assert!((law.tail[0] - 1.0).abs() < 1e-12);
        // mean matches 2 * edge density
        let mean: f64 = law.pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert!((mean - 2.0 * dk.mean_edge_density()).abs() < 1e-9);
    }

    #[test]
    fn zero_kernel_degree_law_is_point_mass() {
        let dk = constant_dk(0.0);
        let law = degree_law(&dk, 5);
        assert_eq!(law.pmf[0], 1.0);
        assert!(law.pmf[1..].iter().all(|&p| p == 0.0));
        assert_eq!(law.tail[1], 0.0);
    }

    #[test]
    fn critical_point_of_constant_family() {
        let s = TypeSpace::finite(&[1.0]).unwrap();
        let fine = s.clone();
        let coarse = s;
        let cp = critical_point(
            &Kernel::constant(1.0).unwrap(),
            &fine,
            &coarse,
            DiscretizeMode::Midpoint,
            &SolverSettings::default(),
        )
        .unwrap();
        assert!((cp.c0 - 1.0).abs() < 1e-10);
        assert!(cp.bracket.0 <= 1.0 && 1.0 <= cp.bracket.1 + 1e-10);
    }

    #[test]
    fn subcritical_dual_is_original() {
        let dk = constant_dk(0.5);
        let prof = solve_survival(&dk, &SolverSettings::default()).unwrap();
        // rho ~ 0 so the tilted weights are the original ones
        let (dual_dk, dn) = dual(&dk, &prof).unwrap();
        assert!((dual_dk.w[0] - dk.w[0]).abs() < 1e-8);
        assert!((dn - 0.5).abs() < 1e-7);
    }

    #[test]
    fn constant_kernel_slope_is_two() {
        let dk = constant_dk(1.0);
        let ts = transition_slope(&dk, &SolverSettings::default()).unwrap();
        assert!((ts.c0 - 1.0).abs() < 1e-10);
        assert!(
            (ts.slope_formula - 2.0).abs() < 1e-9,
            "formula={}",
            ts.slope_formula
        );
        assert!((ts.slope_fd - 2.0).abs() < 0.02, "fd={}", ts.slope_fd);
        assert!(ts.gap < 0.01);
    }

    #[test]
    fn iteration_limit_flags_not_converged() {
        let dk = constant_dk(2.0);
        let settings = SolverSettings {
            max_iter: 3,
            ..Default::default()
        };
        let prof = solve_survival(&dk, &settings).unwrap();
        assert!(!prof.converged);
        assert!(prof.residual > settings.tol);
        assert!(prof.dual_norm.is_none());
    }
}
