//! JSON configuration for the harness. Every pass/fail band that ends up in
//! a report is read from here (defaults included), so acceptance thresholds
//! stay auditable and never hide in code paths.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Kernel spec string, e.g. `"constant:c=2"`.
    pub kernel: String,
    pub space: SpaceCfg,
    pub generate: GenCfg,
    pub solver: SolverCfg,
    /// Metrics to compare; see [`crate::harness::ALL_METRICS`].
    pub metrics: Vec<String>,
    /// Per-metric pass bands keyed by metric name.
    pub bands: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SpaceCfg {
    /// `finite`, `uniform`, or `log`.
    pub kind: String,
    pub m: usize,
    /// `uniform` or `logarithmic` (interval spaces).
    pub scale: String,
    pub depth: f64,
    /// Weights for finite spaces.
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct GenCfg {
    pub n: usize,
    /// `min`, `poisson`, or `odds`.
    pub variant: String,
    /// `exact` or `block`.
    pub tier: String,
    /// Number of replicate seeds.
    pub seeds: usize,
    /// Base seed; replicate `i` uses a stream derived from it.
    pub seed: u64,
    /// Vertex sampling mode: `grid`, `iid`, or `poisson`.
    pub mode: String,
    /// Sampled source/target pairs for distance metrics.
    pub distance_pairs: usize,
    /// Largest n accepted by exact diameter / exact tier.
    pub exact_cap: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverCfg {
    pub tol: f64,
    pub max_iter: usize,
    pub quad_points: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            kernel: "constant:c=2".into(),
            space: SpaceCfg::default(),
            generate: GenCfg::default(),
            solver: SolverCfg::default(),
            metrics: vec!["c1_frac".into(), "c2_frac".into(), "edges_frac".into()],
            bands: default_bands(),
        }
    }
}

impl Default for SpaceCfg {
    fn default() -> Self {
        SpaceCfg {
            kind: "finite".into(),
            m: 1,
            scale: "uniform".into(),
            depth: 30.0,
            weights: vec![1.0],
        }
    }
}

impl Default for GenCfg {
    fn default() -> Self {
        GenCfg {
            n: 10_000,
            variant: "min".into(),
            tier: "block".into(),
            seeds: 3,
            seed: 1,
            mode: "iid".into(),
            distance_pairs: 2_000,
            exact_cap: 30_000,
        }
    }
}

impl Default for SolverCfg {
    fn default() -> Self {
        SolverCfg {
            tol: 1e-10,
            max_iter: 1_000_000,
            quad_points: 4096,
        }
    }
}

/// Default pass bands per metric. Distance and diameter bands are relative;
/// the rest are absolute deltas.
pub fn default_bands() -> BTreeMap<String, f64> {
    let mut b = BTreeMap::new();
    b.insert("c1_frac".into(), 0.01);
    b.insert("c2_frac".into(), 0.02);
    b.insert("edges_frac".into(), 0.01);
    b.insert("giant_edges_frac".into(), 0.015);
    b.insert("degree_tv".into(), 0.02);
    b.insert("type_mix".into(), 0.01);
    b.insert("two_core_frac".into(), 0.01);
    b.insert("median_distance".into(), 0.15);
    b.insert("diameter".into(), 0.30);
    b
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut cfg: Config =
            serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))?;
        // bands omitted by the user fall back to the defaults
        let mut bands = default_bands();
        bands.append(&mut cfg.bands);
        cfg.bands = bands;
        Ok(cfg)
    }

    pub fn space(&self) -> Result<gnk_core::spaces::TypeSpace, String> {
        use gnk_core::spaces::{GridScale, TypeSpace};
        match self.space.kind.as_str() {
            "finite" => TypeSpace::finite(&self.space.weights).map_err(|e| e.to_string()),
            "interval" | "uniform" => {
                TypeSpace::interval(self.space.m, GridScale::Uniform, 0.0).map_err(|e| e.to_string())
            }
            "log" | "logarithmic" => {
                TypeSpace::interval(self.space.m, GridScale::Logarithmic, self.space.depth)
                    .map_err(|e| e.to_string())
            }
            other => Err(format!("unknown space kind '{other}'")),
        }
    }

    pub fn variant(&self) -> Result<gnk_core::graphgen::Variant, String> {
        use gnk_core::graphgen::Variant;
        match self.generate.variant.as_str() {
            "min" => Ok(Variant::Min),
            "poisson" => Ok(Variant::Poisson),
            "odds" => Ok(Variant::Odds),
            other => Err(format!("unknown variant '{other}'")),
        }
    }

    pub fn tier(&self) -> Result<gnk_core::graphgen::Tier, String> {
        use gnk_core::graphgen::Tier;
        match self.generate.tier.as_str() {
            "exact" => Ok(Tier::Exact),
            "block" => Ok(Tier::Block),
            other => Err(format!("unknown tier '{other}'")),
        }
    }

    pub fn sample_mode(&self) -> Result<gnk_core::spaces::SampleMode, String> {
        use gnk_core::spaces::SampleMode;
        match self.generate.mode.as_str() {
            "grid" => Ok(SampleMode::Grid),
            "iid" => Ok(SampleMode::Iid),
            "poisson" => Ok(SampleMode::Poisson),
            other => Err(format!("unknown sample mode '{other}'")),
        }
    }

    pub fn solver_settings(&self) -> gnk_core::branching::SolverSettings {
        gnk_core::branching::SolverSettings {
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            ..Default::default()
        }
    }
}
