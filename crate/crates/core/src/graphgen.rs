//! Sampling the random graph `G(n, kappa)`.
//!
//! Pairs `{i, j}` are included independently with probability
//! `f(kappa_ij / n)` where `f` is one of three variant maps:
//! `min(x, 1)`, `1 - e^-x`, or `x / (1 + x)`. Two tiers are provided:
//!
//! * `Exact` loops over all pairs (guarded by a size cap);
//! * `Block` groups vertices by cell, so every block has one constant
//!   probability and successes are visited by geometric skips in expected
//!   time `O(n + edges)`.
//!
//! Generation is sequential in a fixed block order, so a seed fully
//! determines the edge set.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{DiscreteKernel, Kernel};
use crate::math;
use crate::rng::Prng;
use crate::spaces::VertexAssignment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `min(kappa/n, 1)`
    Min,
    /// `1 - exp(-kappa/n)`
    Poisson,
    /// `(kappa/n) / (1 + kappa/n)`
    Odds,
}

impl Variant {
    /// Map the intensity `x = kappa / n` to an edge probability.
    #[inline]
    pub fn probability(self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match self {
            Variant::Min => {
                if x < 1.0 {
                    x
                } else {
                    1.0
                }
            }
            Variant::Poisson => -math::expm1(-x),
            Variant::Odds => x / (1.0 + x),
        }
    }
}

impl core::fmt::Display for Variant {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Variant::Min => "min",
            Variant::Poisson => "poisson",
            Variant::Odds => "odds",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Exact,
    Block,
}

impl core::fmt::Display for Tier {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Tier::Exact => "exact",
            Tier::Block => "block",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub kernel: String,
    pub variant: Variant,
    pub tier: String,
    pub seed: u64,
    /// True when pair probabilities used exact kernel values at the true
    /// points rather than cell values.
    pub exact_points: bool,
}

/// An undirected simple graph with per-vertex type cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypedGraph {
    pub n: usize,
    pub types: Vec<u32>,
    /// Sorted, deduplicated `(min, max)` pairs.
    pub edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    pub meta: GraphMeta,
}

impl TypedGraph {
    /// Build from an edge list; self-loops dropped, duplicates merged.
    pub fn from_edges(n: usize, types: Vec<u32>, mut edges: Vec<(u32, u32)>, meta: GraphMeta) -> Self {
        debug_assert_eq!(types.len(), n);
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges.retain(|e| e.0 != e.1);
        let (offsets, neighbors) = build_adjacency(n, &edges);
        TypedGraph {
            n,
            types,
            edges,
            offsets,
            neighbors,
            meta,
        }
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

fn build_adjacency(n: usize, edges: &[(u32, u32)]) -> (Vec<usize>, Vec<u32>) {
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    let mut offsets = vec![0usize; n + 1];
    for i in 0..n {
        offsets[i + 1] = offsets[i] + deg[i];
    }
    let mut cursor = offsets.clone();
    let mut neighbors = vec![0u32; 2 * edges.len()];
    for &(u, v) in edges {
        neighbors[cursor[u as usize]] = v;
        cursor[u as usize] += 1;
        neighbors[cursor[v as usize]] = u;
        cursor[v as usize] += 1;
    }
    (offsets, neighbors)
}

#[derive(Clone, Copy, Debug)]
pub struct GenOptions {
    /// Largest `n` the exact tier will accept.
    pub exact_cap: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { exact_cap: 30_000 }
    }
}

/// Sample `G(n, kappa_m)` from a discrete kernel and a vertex assignment.
///
/// `nominal_n` is the divisor in `kappa / n`; for Poisson-mode assignments it
/// is the intensity parameter, not the realized count.
pub fn generate(
    dk: &DiscreteKernel,
    assignment: &VertexAssignment,
    nominal_n: usize,
    variant: Variant,
    tier: Tier,
    seed: u64,
    opts: &GenOptions,
) -> Result<TypedGraph> {
    debug_assert!(nominal_n > 0);
    let n = assignment.types.len();
    let meta = GraphMeta {
        kernel: dk.label.clone(),
        variant,
        tier: format!("{tier}"),
        seed,
        exact_points: false,
    };
    let mut rng = Prng::new(seed);
    let edges = match tier {
        Tier::Exact => {
            if n > opts.exact_cap {
                return Err(Error::SizeCap {
                    n,
                    cap: opts.exact_cap,
                });
            }
            exact_edges(
                |i, j| dk.entry(assignment.types[i] as usize, assignment.types[j] as usize),
                n,
                nominal_n,
                variant,
                &mut rng,
            )
        }
        Tier::Block => block_edges(dk, &assignment.types, nominal_n, variant, &mut rng),
    };
    Ok(TypedGraph::from_edges(n, assignment.types.clone(), edges, meta))
}

/// Exact tier over true points: probabilities use `kernel.eval(x_i, x_j)`
/// directly instead of cell values (closed-form kernels only).
pub fn generate_exact_pointwise(
    kernel: &Kernel,
    points: &[f64],
    types: Vec<u32>,
    nominal_n: usize,
    variant: Variant,
    seed: u64,
    opts: &GenOptions,
) -> Result<TypedGraph> {
    let n = points.len();
    if n > opts.exact_cap {
        return Err(Error::SizeCap {
            n,
            cap: opts.exact_cap,
        });
    }
    debug_assert_eq!(types.len(), n);
    let mut rng = Prng::new(seed);
    let edges = exact_edges(
        |i, j| kernel.eval(points[i], points[j]),
        n,
        nominal_n,
        variant,
        &mut rng,
    );
    let meta = GraphMeta {
        kernel: String::from("pointwise"),
        variant,
        tier: String::from("exact-pointwise"),
        seed,
        exact_points: true,
    };
    Ok(TypedGraph::from_edges(n, types, edges, meta))
}

fn exact_edges(
    kappa: impl Fn(usize, usize) -> f64,
    n: usize,
    nominal_n: usize,
    variant: Variant,
    rng: &mut Prng,
) -> Vec<(u32, u32)> {
    let inv_n = 1.0 / nominal_n as f64;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = variant.probability(kappa(i, j) * inv_n);
            if p > 0.0 && rng.uniform() < p {
                edges.push((i as u32, j as u32));
            }
        }
    }
    edges
}

/// Blocked sampler: vertices grouped by cell; within a block the probability
/// is constant and successes are visited with geometric skips.
fn block_edges(
    dk: &DiscreteKernel,
    types: &[u32],
    nominal_n: usize,
    variant: Variant,
    rng: &mut Prng,
) -> Vec<(u32, u32)> {
    let r = dk.r;
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); r];
    for (v, &t) in types.iter().enumerate() {
        members[t as usize].push(v as u32);
    }
    let inv_n = 1.0 / nominal_n as f64;
    let mut edges = Vec::new();
    for c1 in 0..r {
        if members[c1].is_empty() {
            continue;
        }
        for c2 in c1..r {
            if members[c2].is_empty() {
                continue;
            }
            let p = variant.probability(dk.entry(c1, c2) * inv_n);
            if p <= 0.0 {
                continue;
            }
            if c1 == c2 {
                sample_within(&members[c1], p, rng, &mut edges);
            } else {
                sample_between(&members[c1], &members[c2], p, rng, &mut edges);
            }
        }
    }
    edges
}

/// Pairs `i < j` inside one block, enumerated row by row.
fn sample_within(list: &[u32], p: f64, rng: &mut Prng, edges: &mut Vec<(u32, u32)>) {
    let s = list.len() as u64;
    if s < 2 {
        return;
    }
    let total = s * (s - 1) / 2;
    if p >= 1.0 {
        for i in 0..list.len() {
            for j in (i + 1)..list.len() {
                edges.push((list[i], list[j]));
            }
        }
        return;
    }
    // linear index t in [0, total) maps to (i, j): row i owns s-1-i pairs
    let mut t = rng.geometric_skip(p);
    let mut row = 0u64;
    let mut row_start = 0u64;
    let mut row_len = s - 1;
    while t < total {
        while t >= row_start + row_len {
            row_start += row_len;
            row += 1;
            row_len = s - 1 - row;
        }
        let col = row + 1 + (t - row_start);
        edges.push((list[row as usize], list[col as usize]));
        let skip = rng.geometric_skip(p);
        t = match t.checked_add(1).and_then(|x| x.checked_add(skip)) {
            Some(x) => x,
            None => break,
        };
    }
}

/// Pairs across two disjoint blocks.
fn sample_between(a: &[u32], b: &[u32], p: f64, rng: &mut Prng, edges: &mut Vec<(u32, u32)>) {
    let (sa, sb) = (a.len() as u64, b.len() as u64);
    let total = sa * sb;
    if p >= 1.0 {
        for &u in a {
            for &v in b {
                edges.push((u, v));
            }
        }
        return;
    }
    let mut t = rng.geometric_skip(p);
    while t < total {
        let (i, j) = (t / sb, t % sb);
        edges.push((a[i as usize], b[j as usize]));
        let skip = rng.geometric_skip(p);
        t = match t.checked_add(1).and_then(|x| x.checked_add(skip)) {
            Some(x) => x,
            None => break,
        };
    }
}

/// Exact expected edge count `sum_{i<j} p_ij` via per-cell pair counts.
pub fn expected_edges(
    dk: &DiscreteKernel,
    assignment: &VertexAssignment,
    nominal_n: usize,
    variant: Variant,
) -> f64 {
    let r = dk.r;
    let mut counts = vec![0u64; r];
    for &t in &assignment.types {
        counts[t as usize] += 1;
    }
    let inv_n = 1.0 / nominal_n as f64;
    let mut acc = 0.0;
    for c1 in 0..r {
        if counts[c1] == 0 {
            continue;
        }
        for c2 in c1..r {
            let pairs = if c1 == c2 {
                counts[c1] * (counts[c1].saturating_sub(1)) / 2
            } else {
                counts[c1] * counts[c2]
            };
            if pairs == 0 {
                continue;
            }
            acc += pairs as f64 * variant.probability(dk.entry(c1, c2) * inv_n);
        }
    }
    acc
}

/// Monotone coupling by thinning: sample `G(kappa_hi)`, then keep each edge
/// with probability `p_lo / p_hi` for its cell pair. Requires
/// `kappa_lo <= kappa_hi` entrywise. Returns `(g_lo, g_hi)` with
/// `g_lo` a subgraph of `g_hi`.
pub fn generate_coupled(
    dk_lo: &DiscreteKernel,
    dk_hi: &DiscreteKernel,
    assignment: &VertexAssignment,
    nominal_n: usize,
    variant: Variant,
    tier: Tier,
    seed: u64,
    opts: &GenOptions,
) -> Result<(TypedGraph, TypedGraph)> {
    debug_assert_eq!(dk_lo.r, dk_hi.r);
    for (lo, hi) in dk_lo.k.iter().zip(dk_hi.k.iter()) {
        if lo > hi {
            return Err(Error::Domain(String::from(
                "coupling requires kappa_lo <= kappa_hi entrywise",
            )));
        }
    }
    let g_hi = generate(dk_hi, assignment, nominal_n, variant, tier, seed, opts)?;
    let inv_n = 1.0 / nominal_n as f64;
    let mut rng = Prng::new(crate::rng::derive_seed(seed, 0x7411));
    let kept: Vec<(u32, u32)> = g_hi
        .edges
        .iter()
        .copied()
        .filter(|&(u, v)| {
            let (ci, cj) = (g_hi.types[u as usize] as usize, g_hi.types[v as usize] as usize);
            let p_hi = variant.probability(dk_hi.entry(ci, cj) * inv_n);
            let p_lo = variant.probability(dk_lo.entry(ci, cj) * inv_n);
            p_hi > 0.0 && rng.uniform() < p_lo / p_hi
        })
        .collect();
    let meta = GraphMeta {
        kernel: dk_lo.label.clone(),
        ..g_hi.meta.clone()
    };
    let g_lo = TypedGraph::from_edges(g_hi.n, g_hi.types.clone(), kept, meta);
    Ok((g_lo, g_hi))
}
