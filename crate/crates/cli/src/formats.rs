//! Pinned on-disk formats.
//!
//! * Graph export: line 1 `# n=<n> types=<file>`, then `u v` per edge,
//!   0-based, plus a JSON metadata sidecar.
//! * Vertex assignment: header `n=<n> mode=<mode> seed=<seed>`, then one
//!   type index per line.
//! * Type space JSON: `{"kind", "cells": [...], "weights": [...]}`.
//! * Discrete kernel JSON: `{"K": [[...]], "w": [...], "mode": ...}`.
//! * Distance samples: single-column CSV with an `inf` sentinel.

use std::fmt::Write as _;

use gnk_core::graphgen::{GraphMeta, TypedGraph};
use gnk_core::kernels::DiscreteKernel;
use gnk_core::spaces::{SpaceKind, TypeSpace, VertexAssignment};
use serde_json::json;

pub fn edge_list_text(g: &TypedGraph, types_file: &str) -> String {
    let mut out = String::with_capacity(16 * g.edges.len() + 64);
    let _ = writeln!(out, "# n={} types={}", g.n, types_file);
    for &(u, v) in &g.edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parse an edge-list export back into `(n, edges)`.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(u32, u32)>), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty edge list")?;
    let n = header
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("n=").and_then(|v| v.parse::<usize>().ok()))
        .ok_or("header missing n=<n>")?;
    let mut edges = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let u: u32 = it
            .next()
            .ok_or(format!("line {k}: missing u"))?
            .parse()
            .map_err(|e| format!("{e}"))?;
        let v: u32 = it
            .next()
            .ok_or(format!("line {k}: missing v"))?
            .parse()
            .map_err(|e| format!("{e}"))?;
        edges.push((u, v));
    }
    Ok((n, edges))
}

pub fn meta_json(meta: &GraphMeta) -> String {
    serde_json::to_string_pretty(meta).expect("meta serializes")
}

pub fn assignment_text(a: &VertexAssignment) -> String {
    let mut out = String::with_capacity(8 * a.n + 48);
    let _ = writeln!(out, "n={} mode={} seed={}", a.n, a.mode, a.seed);
    for &t in &a.types {
        let _ = writeln!(out, "{t}");
    }
    out
}

pub fn type_space_json(s: &TypeSpace) -> String {
    let cells: Vec<serde_json::Value> = match s.kind() {
        SpaceKind::Finite => (0..s.len()).map(|i| json!(format!("s{i}"))).collect(),
        SpaceKind::Interval => (0..s.len())
            .map(|i| {
                let (lo, hi) = s.cell_bounds(i);
                json!([lo, hi])
            })
            .collect(),
    };
    let kind = match s.kind() {
        SpaceKind::Finite => "finite",
        SpaceKind::Interval => "interval",
    };
    serde_json::to_string_pretty(&json!({
        "kind": kind,
        "cells": cells,
        "weights": s.weights(),
    }))
    .expect("space serializes")
}

pub fn discrete_kernel_json(dk: &DiscreteKernel) -> String {
    let rows: Vec<Vec<f64>> = (0..dk.r)
        .map(|i| dk.k[i * dk.r..(i + 1) * dk.r].to_vec())
        .collect();
    serde_json::to_string_pretty(&json!({
        "K": rows,
        "w": dk.w,
        "mode": format!("{}", dk.mode),
    }))
    .expect("kernel serializes")
}

/// Distance samples as a one-column CSV with `inf` for unreachable pairs.
pub fn distances_csv(distances: &[Option<u32>]) -> String {
    let mut out = String::from("distance\n");
    for d in distances {
        match d {
            Some(v) => {
                let _ = writeln!(out, "{v}");
            }
            None => {
                let _ = writeln!(out, "inf");
            }
        }
    }
    out
}
