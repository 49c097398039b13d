//! Ground spaces `(S, mu)` and vertex type assignments.
//!
//! Two kinds of space are supported: finite label sets with arbitrary
//! nonnegative weights, and the unit interval `(0, 1]` partitioned into
//! half-open cells `(a, b]` under Lebesgue measure. Interval grids are
//! uniform or logarithmic; logarithmic grids add one cell `(0, e^-L]` so
//! kernels that blow up at 0 keep their mass near the singularity resolved.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::rng::Prng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Finite,
    Interval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    Uniform,
    Logarithmic,
}

/// A discretized ground space: cells with weights summing to `mu(S)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeSpace {
    kind: SpaceKind,
    /// Interval cell breakpoints `0 = b_0 < b_1 < ... < b_r = 1`; empty for
    /// finite spaces.
    breaks: Vec<f64>,
    weights: Vec<f64>,
    total_mass: f64,
    grid_scale: Option<GridScale>,
}

impl TypeSpace {
    /// Finite space with the given cell weights (`mu{i} = weights[i]`).
    pub fn finite(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMeasure(String::from("no cells")));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidMeasure(String::from(
                "negative or non-finite weight",
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidMeasure(String::from("all weights zero")));
        }
        Ok(TypeSpace {
            kind: SpaceKind::Finite,
            breaks: Vec::new(),
            weights: weights.to_vec(),
            total_mass: total,
            grid_scale: None,
        })
    }

    /// Partition of `(0, 1]` into `m` cells under Lebesgue measure.
    ///
    /// Uniform: cells of width `1/m`. Logarithmic: one cell `(0, e^-depth]`
    /// plus `m - 1` geometrically spaced cells up to 1, ordered ascending.
    pub fn interval(m: usize, scale: GridScale, depth: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGrid(String::from("zero cells")));
        }
        let breaks = match scale {
            GridScale::Uniform => (0..=m).map(|i| i as f64 / m as f64).collect::<Vec<_>>(),
            GridScale::Logarithmic => {
                if !(depth > 0.0) {
                    return Err(Error::InvalidGrid(String::from(
                        "logarithmic depth must be positive",
                    )));
                }
                if m == 1 {
                    alloc::vec![0.0, 1.0]
                } else {
                    let mut b = Vec::with_capacity(m + 1);
                    b.push(0.0);
                    for k in 0..m {
                        // e^{-L}, ..., 1 geometric with ratio e^{L/(m-1)}
                        b.push(math::exp(-depth + depth * k as f64 / (m - 1) as f64));
                    }
                    b
                }
            }
        };
        let weights: Vec<f64> = breaks.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(TypeSpace {
            kind: SpaceKind::Interval,
            breaks,
            weights,
            total_mass: 1.0,
            grid_scale: Some(scale),
        })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn grid_scale(&self) -> Option<GridScale> {
        self.grid_scale
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn is_interval(&self) -> bool {
        self.kind == SpaceKind::Interval
    }

    /// Interval cell bounds `(lo, hi]` for cell `i`.
    pub fn cell_bounds(&self, i: usize) -> (f64, f64) {
        debug_assert!(self.is_interval());
        (self.breaks[i], self.breaks[i + 1])
    }

    /// Arithmetic midpoint of interval cell `i`.
    pub fn midpoint(&self, i: usize) -> f64 {
        let (lo, hi) = self.cell_bounds(i);
        0.5 * (lo + hi)
    }

    /// Index of the cell containing `x` under `(a, b]` membership;
    /// `x = 1` belongs to the last cell.
    pub fn cell_of(&self, x: f64) -> usize {
        debug_assert!(self.is_interval());
        debug_assert!(x > 0.0 && x <= 1.0);
        // first break >= x, cell index is that break's position - 1
        let mut lo = 0usize;
        let mut hi = self.breaks.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.breaks[mid] < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    Grid,
    Iid,
    Poisson,
}

impl core::fmt::Display for SampleMode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            SampleMode::Grid => "grid",
            SampleMode::Iid => "iid",
            SampleMode::Poisson => "poisson",
        };
        f.write_str(s)
    }
}

/// Per-vertex cell indices. In Poisson mode `n` is the realized count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexAssignment {
    pub n: usize,
    pub types: Vec<u32>,
    pub mode: SampleMode,
    pub seed: u64,
}

/// Assign vertex types.
///
/// * `Grid`: vertex `i` (1-based) gets the cell containing `i/n`; interval
///   spaces only.
/// * `Iid`: `n` independent cells with probabilities `weight / mu(S)`.
/// * `Poisson`: realized count `N ~ Poisson(n * mu(S))`, then `N` iid cells.
///   Downstream code keeps dividing by the nominal `n`.
pub fn sample_types(space: &TypeSpace, n: usize, mode: SampleMode, seed: u64) -> Result<VertexAssignment> {
    let mut rng = Prng::new(seed);
    let types = match mode {
        SampleMode::Grid => {
            if !space.is_interval() {
                return Err(Error::ModeMismatch(format!(
                    "grid mode requires an interval space, got {:?}",
                    space.kind()
                )));
            }
            (1..=n)
                .map(|i| space.cell_of(i as f64 / n as f64) as u32)
                .collect::<Vec<_>>()
        }
        SampleMode::Iid => sample_iid(space, n, &mut rng),
        SampleMode::Poisson => {
            let realized = rng.poisson(n as f64 * space.total_mass()) as usize;
            sample_iid(space, realized, &mut rng)
        }
    };
    Ok(VertexAssignment {
        n: types.len(),
        types,
        mode,
        seed,
    })
}

fn sample_iid(space: &TypeSpace, n: usize, rng: &mut Prng) -> Vec<u32> {
    // cumulative weights; draw u in [0, mass) and binary search
    let mut cum = Vec::with_capacity(space.len());
    let mut acc = 0.0;
    for &w in space.weights() {
        acc += w;
        cum.push(acc);
    }
    let mass = acc;
    (0..n)
        .map(|_| {
            let u = rng.uniform() * mass;
            let mut lo = 0usize;
            let mut hi = cum.len() - 1;
            while lo < hi {
                let mid = (lo + hi) / 2;
                if cum[mid] <= u {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            lo as u32
        })
        .collect()
}

/// Per-cell vertex counts of an assignment.
pub fn cell_counts(space: &TypeSpace, assignment: &VertexAssignment) -> Vec<usize> {
    let mut counts = alloc::vec![0usize; space.len()];
    for &t in &assignment.types {
        counts[t as usize] += 1;
    }
    counts
}
