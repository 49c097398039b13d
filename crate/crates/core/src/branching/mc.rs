//! Monte Carlo simulation of the multi-type Poisson branching process.
//!
//! A particle of cell `i` spawns `Poisson(K_ij w_j)` children in cell `j`,
//! independently over `j` and over particles. Summing independent Poissons,
//! a whole generation with counts `n_i` produces `Poisson(sum_i n_i K_ij w_j)`
//! children in cell `j`, which is what the simulation draws.

use alloc::vec;
use alloc::vec::Vec;

use crate::kernels::DiscreteKernel;
use crate::math;
use crate::rng::{derive_seed, Prng};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McRoot {
    /// Start from a fixed cell.
    Cell(usize),
    /// Start from a cell drawn with probability `w_i / mu(S)`.
    MuRandom,
}

#[derive(Clone, Debug)]
pub struct McOptions {
    pub runs: usize,
    /// A run whose cumulative population reaches this cap counts as
    /// surviving.
    pub pop_cap: usize,
    /// Population thresholds `k` for which `rho_ge[k]` is reported.
    pub thresholds: Vec<usize>,
    pub root: McRoot,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    /// Fraction of runs whose total population reached `pop_cap`.
    pub rho_hat: f64,
    /// Binomial standard error of `rho_hat`.
    pub se: f64,
    /// `(k, fraction with total >= k, standard error)` per requested
    /// threshold.
    pub rho_ge: Vec<(usize, f64, f64)>,
    /// Survival-proxy bias diagnostic: `rho_ge(cap) - rho_ge(cap/2)`
    /// (0 means the cap choice does not matter).
    pub cap_gap: f64,
    pub runs: usize,
}

/// Estimate survival probabilities by simulating `runs` independent
/// branching processes (streams derived from `seed`).
pub fn mc_branching(dk: &DiscreteKernel, opts: &McOptions) -> McEstimate {
    debug_assert!(opts.runs >= 1 && opts.pop_cap >= 1);
    let r = dk.r;
    let mass = dk.w.iter().sum::<f64>();
    // cumulative root distribution
    let mut cum = Vec::with_capacity(r);
    let mut acc = 0.0;
    for &w in &dk.w {
        acc += w;
        cum.push(acc);
    }

    let half_cap = (opts.pop_cap / 2).max(1);
    let mut reach_cap = 0usize;
    let mut reach_half = 0usize;
    let mut ge_counts = vec![0usize; opts.thresholds.len()];

    let mut gen = vec![0u64; r];
    let mut next = vec![0u64; r];
    for run in 0..opts.runs {
        let mut rng = Prng::new(derive_seed(opts.seed, run as u64));
        let root = match opts.root {
            McRoot::Cell(i) => i,
            McRoot::MuRandom => {
                let u = rng.uniform() * mass;
                let mut lo = 0usize;
                let mut hi = r - 1;
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    if cum[mid] <= u {
                        lo = mid + 1;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        };
        gen.iter_mut().for_each(|x| *x = 0);
        gen[root] = 1;
        let mut total = 1u64;
        while total < opts.pop_cap as u64 {
            let mut alive = false;
            for j in 0..r {
                // intensity of cell-j children from the whole generation
                let mut lam = 0.0;
                for i in 0..r {
                    if gen[i] > 0 {
                        lam += gen[i] as f64 * dk.entry(i, j);
                    }
                }
                lam *= dk.w[j];
                let c = if lam > 0.0 { rng.poisson(lam) } else { 0 };
                next[j] = c;
                alive |= c > 0;
            }
            if !alive {
                break;
            }
            total = total.saturating_add(next.iter().sum::<u64>());
            core::mem::swap(&mut gen, &mut next);
        }
        if total >= opts.pop_cap as u64 {
            reach_cap += 1;
        }
        if total >= half_cap as u64 {
            reach_half += 1;
        }
        for (slot, &k) in ge_counts.iter_mut().zip(opts.thresholds.iter()) {
            if total >= k as u64 {
                *slot += 1;
            }
        }
    }

    let n = opts.runs as f64;
    let frac = |c: usize| c as f64 / n;
    let se_of = |p: f64| math::sqrt(p * (1.0 - p) / n);
    let rho_hat = frac(reach_cap);
    let rho_ge = opts
        .thresholds
        .iter()
        .zip(ge_counts.iter())
        .map(|(&k, &c)| {
            let p = frac(c);
            (k, p, se_of(p))
        })
        .collect();
    McEstimate {
        rho_hat,
        se: se_of(rho_hat),
        rho_ge,
        cap_gap: rho_hat - frac(reach_half),
        runs: opts.runs,
    }
}
