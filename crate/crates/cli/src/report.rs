//! Comparison reports: one row per metric, with provenance. Reports carry
//! no timestamps, so a rerun with the same config and seed produces
//! byte-identical JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricRow {
    pub name: String,
    /// Mean over seeds; absent when the metric was skipped.
    pub simulated: Option<f64>,
    /// Sample standard error; absent for single runs.
    pub stderr: Option<f64>,
    pub theoretical: Option<f64>,
    /// |simulated - theoretical|, relative for distance/diameter metrics.
    pub delta: Option<f64>,
    pub band: Option<f64>,
    pub pass: Option<bool>,
    /// Reason a metric was skipped (e.g. above the diameter cap).
    pub skipped: Option<String>,
    /// Per-seed simulated values, in seed order.
    pub per_seed: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub kernel: String,
    pub space: String,
    pub grid_cells: usize,
    pub discretize_mode: String,
    pub variant: String,
    pub tier: String,
    pub nominal_n: usize,
    pub base_seed: u64,
    pub seeds: usize,
    pub solver_tol: f64,
    pub solver_max_iter: usize,
    /// Branching-module quantities every theoretical value traces to.
    pub solver_norm: f64,
    pub solver_rho: f64,
    pub solver_converged: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kernel: String,
    pub n_list: Vec<usize>,
    pub seeds: Vec<u64>,
    pub rows: Vec<MetricRow>,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass.unwrap_or(true))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Per-metric CSV: `n,seed,simulated,theoretical,delta` one line per
    /// seed.
    pub fn metric_csv(&self, row: &MetricRow) -> String {
        let mut out = String::from("n,seed,simulated,theoretical,delta\n");
        let theo = row.theoretical.unwrap_or(f64::NAN);
        for (k, v) in row.per_seed.iter().enumerate() {
            let seed = self.seeds.get(k).copied().unwrap_or(k as u64);
            let n = self.n_list.first().copied().unwrap_or(0);
            let delta = (v - theo).abs();
            let _ = writeln!(out, "{n},{seed},{v},{theo},{delta}");
        }
        out
    }
}

/// Mean and sample standard error of replicate values.
pub fn mean_stderr(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, Some((var / n as f64).sqrt()))
}
