//! Observables of a sampled graph: components, degrees, distances, exact
//! diameter, path/cycle counts, two-core.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphgen::TypedGraph;
use crate::rng::Prng;

/// Union-find with path halving and union by size.
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    /// Component sizes, descending.
    pub sizes: Vec<usize>,
    pub c1: usize,
    pub c2: usize,
    /// Edge count of the largest component (ties broken by smallest minimum
    /// vertex id, so reruns are deterministic).
    pub edges_in_c1: usize,
    /// Per-cell vertex counts inside the largest component.
    pub type_counts_in_c1: Vec<usize>,
    /// `k ->` number of vertices lying in components of size `k`.
    pub n_k: BTreeMap<usize, usize>,
}

pub fn component_summary(g: &TypedGraph) -> ComponentSummary {
    let n = g.n;
    let mut uf = UnionFind::new(n);
    for &(u, v) in &g.edges {
        uf.union(u, v);
    }
    // roots, sizes, min vertex ids
    let mut size_of: BTreeMap<u32, usize> = BTreeMap::new();
    let mut min_id: BTreeMap<u32, u32> = BTreeMap::new();
    for v in 0..n as u32 {
        let r = uf.find(v);
        *size_of.entry(r).or_insert(0) += 1;
        min_id.entry(r).or_insert(v);
    }
    // choose largest component: size desc, then min vertex id asc
    let mut best: Option<(usize, u32, u32)> = None; // (size, min_id, root)
    for (&r, &s) in &size_of {
        let m = min_id[&r];
        let better = match best {
            None => true,
            Some((bs, bm, _)) => s > bs || (s == bs && m < bm),
        };
        if better {
            best = Some((s, m, r));
        }
    }
    let c1_root = best.map(|(_, _, r)| r);

    let mut sizes: Vec<usize> = size_of.values().copied().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let c1 = sizes.first().copied().unwrap_or(0);
    let c2 = sizes.get(1).copied().unwrap_or(0);

    let mut n_k: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in size_of.values() {
        *n_k.entry(s).or_insert(0) += s;
    }

    let n_cells = g.types.iter().copied().max().map(|m| m as usize + 1).unwrap_or(0);
    let mut type_counts_in_c1 = vec![0usize; n_cells];
    let mut edges_in_c1 = 0usize;
    if let Some(root) = c1_root {
        for v in 0..n as u32 {
            if uf.find(v) == root {
                type_counts_in_c1[g.types[v as usize] as usize] += 1;
            }
        }
        for &(u, _) in &g.edges {
            if uf.find(u) == root {
                edges_in_c1 += 1;
            }
        }
    }
    ComponentSummary {
        sizes,
        c1,
        c2,
        edges_in_c1,
        type_counts_in_c1,
        n_k,
    }
}

/// Exact degree counts `k -> Z_k`.
pub fn degree_histogram(g: &TypedGraph) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in 0..g.n {
        *h.entry(g.degree(v)).or_insert(0) += 1;
    }
    h
}

/// BFS distance from `u` to `v`, early exit on arrival.
fn bfs_distance(
    g: &TypedGraph,
    u: u32,
    v: u32,
    dist: &mut [u32],
    epoch: &mut [u32],
    cur: u32,
    queue: &mut Vec<u32>,
) -> Option<u32> {
    if u == v {
        return Some(0);
    }
    queue.clear();
    queue.push(u);
    epoch[u as usize] = cur;
    dist[u as usize] = 0;
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let dx = dist[x as usize];
        for &y in g.neighbors(x as usize) {
            if epoch[y as usize] != cur {
                epoch[y as usize] = cur;
                dist[y as usize] = dx + 1;
                if y == v {
                    return Some(dx + 1);
                }
                queue.push(y);
            }
        }
    }
    None
}

/// Graph distances for `pairs` uniformly random ordered pairs `(u, v)`,
/// `u != v`; `None` marks unreachable pairs.
pub fn distance_sample(g: &TypedGraph, pairs: usize, seed: u64) -> Vec<Option<u32>> {
    debug_assert!(pairs >= 1);
    let mut rng = Prng::new(seed);
    let mut dist = vec![0u32; g.n];
    let mut epoch = vec![u32::MAX; g.n];
    let mut queue = Vec::with_capacity(g.n);
    let mut out = Vec::with_capacity(pairs);
    for k in 0..pairs {
        let u = rng.below(g.n as u64) as u32;
        let mut v = rng.below(g.n as u64 - 1) as u32;
        if v >= u {
            v += 1;
        }
        out.push(bfs_distance(g, u, v, &mut dist, &mut epoch, k as u32, &mut queue));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterResult {
    /// Largest finite distance; 0 with `edgeless = true` when the graph has
    /// no edges.
    pub diameter: usize,
    pub edgeless: bool,
}

/// Exact diameter by all-source BFS; guarded by `cap` on the vertex count.
pub fn exact_diameter(g: &TypedGraph, cap: usize) -> Result<DiameterResult> {
    if g.n > cap {
        return Err(Error::SizeCap { n: g.n, cap });
    }
    if g.edges.is_empty() {
        return Ok(DiameterResult {
            diameter: 0,
            edgeless: true,
        });
    }
    let mut dist = vec![0u32; g.n];
    let mut epoch = vec![u32::MAX; g.n];
    let mut queue: Vec<u32> = Vec::with_capacity(g.n);
    let mut best = 0u32;
    for s in 0..g.n as u32 {
        if g.degree(s as usize) == 0 {
            continue;
        }
        queue.clear();
        queue.push(s);
        epoch[s as usize] = s;
        dist[s as usize] = 0;
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let dx = dist[x as usize];
            if dx > best {
                best = dx;
            }
            for &y in g.neighbors(x as usize) {
                if epoch[y as usize] != s {
                    epoch[y as usize] = s;
                    dist[y as usize] = dx + 1;
                    queue.push(y);
                }
            }
        }
    }
    Ok(DiameterResult {
        diameter: best as usize,
        edgeless: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathCycleCounts {
    /// `paths[k-1]` = number of paths with `k` edges, up to reversal.
    pub paths: Vec<u64>,
    /// `cycles[k-1]` = number of cycles with `k` edges, up to rotation and
    /// reflection; entries for `k = 1, 2` are zero.
    pub cycles: Vec<u64>,
}

/// Count paths and cycles of up to `kmax <= 6` edges by DFS over simple
/// paths. The work estimate `sum_v deg(v)^2 * mean_deg^{kmax-2}` is guarded
/// by `work_cap`.
pub fn count_paths_cycles(g: &TypedGraph, kmax: usize, work_cap: u64) -> Result<PathCycleCounts> {
    debug_assert!((1..=6).contains(&kmax));
    let degsq: f64 = (0..g.n)
        .map(|v| (g.degree(v) as f64) * (g.degree(v) as f64))
        .sum();
    let mean_deg = if g.n == 0 {
        0.0
    } else {
        2.0 * g.edge_count() as f64 / g.n as f64
    };
    let estimate = degsq * crate::math::powf(mean_deg.max(1.0), kmax.saturating_sub(2) as f64);
    if estimate > work_cap as f64 {
        return Err(Error::EnumerationCap {
            estimate: estimate as u64,
            cap: work_cap,
        });
    }

    let mut directed_paths = vec![0u64; kmax + 1]; // index = edge count
    let mut closed_walks = vec![0u64; kmax + 1];
    let mut on_path = vec![false; g.n];
    let mut stack: Vec<u32> = Vec::with_capacity(kmax + 1);

    fn dfs(
        g: &TypedGraph,
        kmax: usize,
        on_path: &mut [bool],
        stack: &mut Vec<u32>,
        directed_paths: &mut [u64],
        closed_walks: &mut [u64],
    ) {
        let last = *stack.last().unwrap() as usize;
        let len = stack.len() - 1; // edges so far
        if len == kmax {
            return;
        }
        let root = stack[0];
        for &y in g.neighbors(last) {
            if on_path[y as usize] {
                // closing edge back to the root makes a cycle of len+1 edges
                if y == root && len >= 2 {
                    closed_walks[len + 1] += 1;
                }
                continue;
            }
            on_path[y as usize] = true;
            stack.push(y);
            directed_paths[len + 1] += 1;
            dfs(g, kmax, on_path, stack, directed_paths, closed_walks);
            stack.pop();
            on_path[y as usize] = false;
        }
    }

    for v in 0..g.n as u32 {
        on_path[v as usize] = true;
        stack.push(v);
        dfs(
            g,
            kmax,
            &mut on_path,
            &mut stack,
            &mut directed_paths,
            &mut closed_walks,
        );
        stack.pop();
        on_path[v as usize] = false;
    }

    // each undirected path counted twice (once from each endpoint); each
    // cycle of k edges counted 2k times (k starting points, 2 directions)
    let paths = (1..=kmax).map(|k| directed_paths[k] / 2).collect();
    let cycles = (1..=kmax)
        .map(|k| {
            if k >= 3 {
                closed_walks[k] / (2 * k as u64)
            } else {
                0
            }
        })
        .collect();
    Ok(PathCycleCounts { paths, cycles })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoCore {
    /// The core as a re-indexed induced subgraph.
    pub graph: TypedGraph,
    /// Original vertex id of each core vertex.
    pub original_ids: Vec<u32>,
}

/// Maximal subgraph with minimum degree 2, by iterative peeling of
/// degree <= 1 vertices.
pub fn two_core(g: &TypedGraph) -> TwoCore {
    let mut deg: Vec<usize> = (0..g.n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; g.n];
    let mut queue: Vec<u32> = (0..g.n as u32).filter(|&v| deg[v as usize] <= 1).collect();
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        if removed[v as usize] {
            continue;
        }
        removed[v as usize] = true;
        for &y in g.neighbors(v as usize) {
            if !removed[y as usize] {
                deg[y as usize] -= 1;
                if deg[y as usize] <= 1 {
                    queue.push(y);
                }
            }
        }
    }
    let original_ids: Vec<u32> = (0..g.n as u32).filter(|&v| !removed[v as usize]).collect();
    let mut new_id = vec![u32::MAX; g.n];
    for (k, &v) in original_ids.iter().enumerate() {
        new_id[v as usize] = k as u32;
    }
    let types: Vec<u32> = original_ids.iter().map(|&v| g.types[v as usize]).collect();
    let edges: Vec<(u32, u32)> = g
        .edges
        .iter()
        .filter(|&&(u, v)| !removed[u as usize] && !removed[v as usize])
        .map(|&(u, v)| (new_id[u as usize], new_id[v as usize]))
        .collect();
    let mut meta = g.meta.clone();
    meta.tier = String::from("two-core");
    let graph = TypedGraph::from_edges(original_ids.len(), types, edges, meta);
    TwoCore { graph, original_ids }
}
