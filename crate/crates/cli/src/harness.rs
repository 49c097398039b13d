//! Experiment orchestration: theory-vs-simulation comparisons, transition
//! sweeps with exponent fits, random-deletion smoke tests, the Turova
//! Bessel-zero cross-check, and diameter studies.

use std::path::Path;

use gnk_core::branching::{
    operator_norm, rank1_solve, solve_survival, two_core_fraction, SolverSettings, SurvivalProfile,
};
use gnk_core::graphgen::{generate, GenOptions, Tier, TypedGraph, Variant};
use gnk_core::graphstats::{component_summary, degree_histogram, distance_sample, exact_diameter, two_core};
use gnk_core::kernels::{discretize, DiscreteKernel, DiscretizeMode, Kernel};
use gnk_core::rng::{derive_seed, Prng};
use gnk_core::spaces::{sample_types, TypeSpace};
use serde::{Deserialize, Serialize};

use crate::bessel;
use crate::config::Config;
use crate::kernelspec;
use crate::report::{mean_stderr, ExperimentReport, MetricRow, Provenance};

pub const ALL_METRICS: [&str; 9] = [
    "c1_frac",
    "c2_frac",
    "edges_frac",
    "giant_edges_frac",
    "degree_tv",
    "type_mix",
    "two_core_frac",
    "median_distance",
    "diameter",
];

/// Everything `compare` resolves from a [`Config`] before running.
pub struct Resolved {
    pub kernel: Kernel,
    pub space: TypeSpace,
    pub dk: DiscreteKernel,
    pub variant: Variant,
    pub tier: Tier,
    pub settings: SolverSettings,
}

pub fn resolve(cfg: &Config, base_dir: &Path) -> Result<Resolved, String> {
    let (kernel, matrix_space) =
        kernelspec::parse_kernel(&cfg.kernel, base_dir).map_err(|e| e.to_string())?;
    let space = match matrix_space {
        Some(s) => s,
        None => cfg.space()?,
    };
    let dk = discretize(&kernel, &space, DiscretizeMode::Midpoint).map_err(|e| e.to_string())?;
    Ok(Resolved {
        kernel,
        space,
        dk,
        variant: cfg.variant()?,
        tier: cfg.tier()?,
        settings: cfg.solver_settings(),
    })
}

/// Run the generator and graph statistics per seed, solve the branching
/// side once, and compare per metric against the configured bands.
pub fn compare(cfg: &Config, base_dir: &Path) -> Result<ExperimentReport, String> {
    let r = resolve(cfg, base_dir)?;
    let n = cfg.generate.n;
    let profile = solve_survival(&r.dk, &r.settings).map_err(|e| e.to_string())?;
    let law = gnk_core::branching::degree_law(&r.dk, 256);
    let opts = GenOptions {
        exact_cap: cfg.generate.exact_cap,
    };

    let seeds: Vec<u64> = (0..cfg.generate.seeds as u64)
        .map(|k| derive_seed(cfg.generate.seed, k))
        .collect();
    let mode = cfg.sample_mode()?;

    // per-metric per-seed values; None = skipped for that seed
    let mut per_metric: Vec<Vec<f64>> = vec![Vec::new(); cfg.metrics.len()];
    let mut skip_reason: Vec<Option<String>> = vec![None; cfg.metrics.len()];

    for &seed in &seeds {
        let assignment = sample_types(&r.space, n, mode, derive_seed(seed, 1)).map_err(|e| e.to_string())?;
        let g = generate(
            &r.dk,
            &assignment,
            n,
            r.variant,
            r.tier,
            derive_seed(seed, 2),
            &opts,
        )
        .map_err(|e| e.to_string())?;
        let cs = component_summary(&g);
        for (mi, metric) in cfg.metrics.iter().enumerate() {
            match metric.as_str() {
                "c1_frac" => per_metric[mi].push(cs.c1 as f64 / n as f64),
                "c2_frac" => per_metric[mi].push(cs.c2 as f64 / n as f64),
                "edges_frac" => per_metric[mi].push(g.edge_count() as f64 / n as f64),
                "giant_edges_frac" => per_metric[mi].push(cs.edges_in_c1 as f64 / n as f64),
                "degree_tv" => {
                    let hist = degree_histogram(&g);
                    let total: usize = hist.values().sum();
                    let mut tv = 0.0;
                    let kmax = law.pmf.len() - 1;
                    for k in 0..=kmax {
                        let emp = hist.get(&k).copied().unwrap_or(0) as f64 / total as f64;
                        tv += (emp - law.pmf[k]).abs();
                    }
                    // anything beyond kmax is unmatched mass
                    let beyond: usize = hist.iter().filter(|(k, _)| **k > kmax).map(|(_, z)| z).sum();
                    tv += beyond as f64 / total as f64 + law.truncation;
                    per_metric[mi].push(0.5 * tv);
                }
                "type_mix" => {
                    let mut worst = 0.0f64;
                    for (i, &cnt) in cs.type_counts_in_c1.iter().enumerate() {
                        let target = profile.rho[i] * r.dk.w[i];
                        worst = worst.max((cnt as f64 / n as f64 - target).abs());
                    }
                    per_metric[mi].push(worst);
                }
                "two_core_frac" => {
                    let tc = two_core(&g);
                    per_metric[mi].push(tc.graph.n as f64 / n as f64);
                }
                "median_distance" => {
                    if profile.norm <= 1.0 {
                        skip_reason[mi] = Some("median distance needs a supercritical kernel".into());
                        continue;
                    }
                    let samples = distance_sample(&g, cfg.generate.distance_pairs, derive_seed(seed, 3));
                    let mut finite: Vec<u32> = samples.into_iter().flatten().collect();
                    if finite.is_empty() {
                        skip_reason[mi] = Some("no finite distances sampled".into());
                        continue;
                    }
                    finite.sort_unstable();
                    per_metric[mi].push(finite[finite.len() / 2] as f64);
                }
                "diameter" => {
                    if n > cfg.generate.exact_cap {
                        skip_reason[mi] =
                            Some(format!("n={n} above diameter cap {}", cfg.generate.exact_cap));
                        continue;
                    }
                    if (profile.norm - 1.0).abs() < 1e-3 {
                        skip_reason[mi] = Some("critical kernel: diameter prediction undefined".into());
                        continue;
                    }
                    let d = exact_diameter(&g, cfg.generate.exact_cap).map_err(|e| e.to_string())?;
                    per_metric[mi].push(d.diameter as f64);
                }
                other => return Err(format!("unknown metric '{other}'")),
            }
        }
    }

    let theory = |metric: &str| -> Option<f64> {
        match metric {
            "c1_frac" => Some(profile.rho_scalar),
            "c2_frac" => Some(0.0),
            "edges_frac" => Some(r.dk.mean_edge_density()),
            "giant_edges_frac" => Some(profile.zeta),
            "degree_tv" => Some(0.0),
            "type_mix" => Some(0.0),
            "two_core_frac" => Some(two_core_fraction(&r.dk, &profile)),
            "median_distance" => {
                if profile.norm > 1.0 {
                    Some((n as f64).ln() / profile.norm.ln())
                } else {
                    None
                }
            }
            "diameter" => diameter_prediction(&profile).map(|ratio| ratio * (n as f64).ln()),
            _ => None,
        }
    };

    let mut rows = Vec::with_capacity(cfg.metrics.len());
    for (mi, metric) in cfg.metrics.iter().enumerate() {
        let band = cfg.bands.get(metric).copied();
        let relative = matches!(metric.as_str(), "median_distance" | "diameter");
        if per_metric[mi].is_empty() {
            rows.push(MetricRow {
                name: metric.clone(),
                simulated: None,
                stderr: None,
                theoretical: theory(metric),
                delta: None,
                band,
                pass: None,
                skipped: skip_reason[mi].clone().or_else(|| Some("no data".into())),
                per_seed: Vec::new(),
            });
            continue;
        }
        let (mean, stderr) = mean_stderr(&per_metric[mi]);
        let theo = theory(metric);
        let delta = theo.map(|t| {
            let d = (mean - t).abs();
            if relative && t != 0.0 {
                d / t.abs()
            } else {
                d
            }
        });
        let pass = match (delta, band) {
            (Some(d), Some(b)) => Some(d < b),
            _ => None,
        };
        rows.push(MetricRow {
            name: metric.clone(),
            simulated: Some(mean),
            stderr,
            theoretical: theo,
            delta,
            band,
            pass,
            skipped: None,
            per_seed: per_metric[mi].clone(),
        });
    }

    Ok(ExperimentReport {
        kernel: cfg.kernel.clone(),
        n_list: vec![n],
        seeds,
        rows,
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            kernel: cfg.kernel.clone(),
            space: format!("{:?}", r.space.kind()),
            grid_cells: r.space.len(),
            discretize_mode: format!("{}", r.dk.mode),
            variant: cfg.generate.variant.clone(),
            tier: cfg.generate.tier.clone(),
            nominal_n: n,
            base_seed: cfg.generate.seed,
            seeds: cfg.generate.seeds,
            solver_tol: r.settings.tol,
            solver_max_iter: r.settings.max_iter,
            solver_norm: profile.norm,
            solver_rho: profile.rho_scalar,
            solver_converged: profile.converged,
        },
    })
}

/// `diam / ln n` prediction: `1 / ln(1/norm)` below criticality,
/// `2 / ln(1/dual_norm) + 1 / ln(norm)` above; undefined within 1e-3 of
/// criticality.
pub fn diameter_prediction(profile: &SurvivalProfile) -> Option<f64> {
    if (profile.norm - 1.0).abs() < 1e-3 {
        return None;
    }
    if profile.norm < 1.0 {
        Some(1.0 / (1.0 / profile.norm).ln())
    } else {
        let dual = profile.dual_norm?;
        if dual >= 1.0 {
            return None;
        }
        Some(2.0 / (1.0 / dual).ln() + 1.0 / profile.norm.ln())
    }
}

/// A kernel family swept through its transition: either a discretized
/// kernel scaled around `c0 = 1/norm`, or the rank-1 semi-analytic pipeline.
pub enum SweepFamily {
    Discrete { dk: DiscreteKernel },
    Rank1 { p: f64, a: f64, quad_points: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eps: f64,
    pub c: f64,
    pub rho: f64,
    pub zeta: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub c0: f64,
    pub points: Vec<SweepPoint>,
    /// OLS slope of `ln rho` vs `ln eps` over the fit window.
    pub exponent: Option<f64>,
    /// `(geometric-mid eps, slope)` between consecutive usable points.
    pub local_slopes: Vec<(f64, f64)>,
}

/// Solve the survival problem along `c = c0 + eps` and fit the transition
/// exponent on the window. Points with `rho < 100 * tol` are excluded from
/// fits as solver noise.
pub fn sweep_transition(
    family: &SweepFamily,
    eps_grid: &[f64],
    fit_window: (f64, f64),
    settings: &SolverSettings,
) -> Result<SweepResult, String> {
    let c0 = match family {
        SweepFamily::Discrete { dk } => {
            1.0 / operator_norm(dk, settings.norm_tol, settings.norm_max_iter)
                .map_err(|e| e.to_string())?
                .norm
        }
        SweepFamily::Rank1 { p, a, quad_points } => {
            rank1_solve(*p, *a, 1.0e9, *quad_points)
                .map_err(|e| e.to_string())?
                .c0
        }
    };
    let mut points = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let c = c0 + eps;
        let (rho, zeta) = match family {
            SweepFamily::Discrete { dk } => {
                let prof = solve_survival(&dk.scaled(c), settings).map_err(|e| e.to_string())?;
                (prof.rho_scalar, prof.zeta)
            }
            SweepFamily::Rank1 { p, a, quad_points } => {
                let sol = rank1_solve(*p, *a, c, *quad_points).map_err(|e| e.to_string())?;
                (sol.rho, sol.zeta)
            }
        };
        points.push(SweepPoint { eps, c, rho, zeta });
    }

    let usable: Vec<&SweepPoint> = points
        .iter()
        .filter(|pt| pt.rho > 100.0 * settings.tol && pt.eps >= fit_window.0 && pt.eps <= fit_window.1)
        .collect();
    let exponent = if usable.len() >= 3 {
        let xs: Vec<f64> = usable.iter().map(|p| p.eps.ln()).collect();
        let ys: Vec<f64> = usable.iter().map(|p| p.rho.ln()).collect();
        let n = xs.len() as f64;
        let sx: f64 = xs.iter().sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(ys.iter()).map(|(x, y)| x * y).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    } else {
        None
    };
    if exponent.is_none() && usable.len() < 3 {
        return Err(format!(
            "insufficient data: only {} usable points above solver tolerance",
            usable.len()
        ));
    }

    let mut local_slopes = Vec::new();
    for w in points.windows(2) {
        if w[0].rho > 100.0 * settings.tol && w[1].rho > 100.0 * settings.tol {
            let slope = (w[1].rho.ln() - w[0].rho.ln()) / (w[1].eps.ln() - w[0].eps.ln());
            local_slopes.push(((w[0].eps * w[1].eps).sqrt(), slope));
        }
    }
    Ok(SweepResult {
        c0,
        points,
        exponent,
        local_slopes,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeletionRow {
    pub delta: f64,
    pub edges_deleted: usize,
    /// Mean of `|C1(G') - C1(G)| / n` over seeds.
    pub change: f64,
    pub per_seed: Vec<f64>,
}

/// Delete `floor(delta * n)` uniformly random edges (nested across deltas
/// on a per-seed shuffled order, the natural monotone coupling) and track
/// the change in the largest component.
pub fn deletion_smoke(
    dk: &DiscreteKernel,
    space: &TypeSpace,
    n: usize,
    variant: Variant,
    tier: Tier,
    seeds: &[u64],
    deltas: &[f64],
) -> Result<Vec<DeletionRow>, String> {
    let opts = GenOptions::default();
    let mut per_delta: Vec<Vec<f64>> = vec![Vec::new(); deltas.len()];
    for &seed in seeds {
        let assignment = sample_types(space, n, gnk_core::spaces::SampleMode::Iid, derive_seed(seed, 1))
            .map_err(|e| e.to_string())?;
        let g = generate(dk, &assignment, n, variant, tier, derive_seed(seed, 2), &opts)
            .map_err(|e| e.to_string())?;
        let c1 = component_summary(&g).c1 as f64;
        // one shuffle per seed; deleting a prefix gives nested deletions
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        let mut rng = Prng::new(derive_seed(seed, 3));
        for i in (1..order.len()).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            order.swap(i, j);
        }
        for (di, &delta) in deltas.iter().enumerate() {
            let kill = ((delta * n as f64).floor() as usize).min(g.edge_count());
            let mut keep = vec![true; g.edge_count()];
            for &e in &order[..kill] {
                keep[e] = false;
            }
            let edges: Vec<(u32, u32)> = g
                .edges
                .iter()
                .zip(keep.iter())
                .filter(|(_, k)| **k)
                .map(|(e, _)| *e)
                .collect();
            let g2 = TypedGraph::from_edges(g.n, g.types.clone(), edges, g.meta.clone());
            let c1_after = component_summary(&g2).c1 as f64;
            per_delta[di].push((c1_after - c1).abs() / n as f64);
        }
    }
    Ok(deltas
        .iter()
        .zip(per_delta)
        .map(|(&delta, per_seed)| {
            let change = per_seed.iter().sum::<f64>() / per_seed.len().max(1) as f64;
            DeletionRow {
                delta,
                edges_deleted: (delta * n as f64).floor() as usize,
                change,
                per_seed,
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TurovaCritical {
    pub delta: f64,
    /// `delta^2 z^2 / 8` from the Bessel-zero oracle; absent when the
    /// series is out of its reliable range (`delta < 0.05`).
    pub lambda_formula: Option<f64>,
    /// Scale at which the discretized operator norm crosses 1, by bisection.
    pub lambda_numeric: f64,
    pub bessel_order: f64,
    pub bessel_zero: Option<f64>,
}

/// Critical edge intensity of the Turova kernel family, two ways.
pub fn turova_critical(
    delta: f64,
    grid_m: usize,
    settings: &SolverSettings,
) -> Result<TurovaCritical, String> {
    if !(delta > 0.0) {
        return Err("turova_critical needs delta > 0".into());
    }
    let nu = 1.0 / delta - 1.0;
    let (lambda_formula, bessel_zero) = if delta >= 0.05 {
        let z = bessel::first_zero(nu);
        (Some(delta * delta * z * z / 8.0), Some(z))
    } else {
        // series cancellation makes the zero unreliable; callers compare
        // the numeric route against the delta -> 0 limit 1/8 instead
        (None, None)
    };

    // base kernel at lambda = 1; singular near 0 unless delta > 1
    let space = if delta > 1.0 {
        TypeSpace::interval(grid_m, gnk_core::spaces::GridScale::Uniform, 0.0)
    } else {
        TypeSpace::interval(grid_m, gnk_core::spaces::GridScale::Logarithmic, 40.0)
    }
    .map_err(|e| e.to_string())?;
    let base = discretize(
        &Kernel::turova(1.0, delta).map_err(|e| e.to_string())?,
        &space,
        DiscretizeMode::Midpoint,
    )
    .map_err(|e| e.to_string())?;

    // bisection on the scale at which the norm crosses 1
    let norm_at = |lam: f64| -> Result<f64, String> {
        operator_norm(&base.scaled(lam), settings.norm_tol, settings.norm_max_iter)
            .map(|on| on.norm)
            .map_err(|e| e.to_string())
    };
    let mut lo = 1e-3;
    let mut hi = 1.0;
    while norm_at(hi)? < 1.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err("no supercritical scale found".into());
        }
    }
    while norm_at(lo)? >= 1.0 {
        lo *= 0.5;
        if lo < 1e-9 {
            return Err("no subcritical scale found".into());
        }
    }
    for _ in 0..20 {
        let mid = (lo * hi).sqrt();
        if norm_at(mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TurovaCritical {
        delta,
        lambda_formula,
        lambda_numeric: (lo * hi).sqrt(),
        bessel_order: nu,
        bessel_zero,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiameterRow {
    pub n: usize,
    pub mean_diameter: f64,
    /// `diam / ln n`, the quantity with a limit.
    pub ratio: f64,
    pub prediction: Option<f64>,
    pub per_seed: Vec<f64>,
}

/// Average exact diameters over seeds for each `n` and compare the ratios
/// `diam / ln n` against the norm/dual-norm prediction.
pub fn diameter_study(
    dk: &DiscreteKernel,
    space: &TypeSpace,
    n_list: &[usize],
    seeds: &[u64],
    variant: Variant,
    tier: Tier,
    settings: &SolverSettings,
    cap: usize,
) -> Result<Vec<DiameterRow>, String> {
    let profile = solve_survival(dk, settings).map_err(|e| e.to_string())?;
    let prediction = diameter_prediction(&profile);
    let opts = GenOptions { exact_cap: cap };
    let mut rows = Vec::new();
    for &n in n_list {
        if n > cap {
            return Err(format!(
                "n={n} above the diameter cap {cap}; use distance sampling instead"
            ));
        }
        let mut per_seed = Vec::with_capacity(seeds.len());
        for &seed in seeds {
            let assignment = sample_types(space, n, gnk_core::spaces::SampleMode::Iid, derive_seed(seed, 1))
                .map_err(|e| e.to_string())?;
            let g = generate(dk, &assignment, n, variant, tier, derive_seed(seed, 2), &opts)
                .map_err(|e| e.to_string())?;
            let d = exact_diameter(&g, cap).map_err(|e| e.to_string())?;
            per_seed.push(d.diameter as f64);
        }
        let mean = per_seed.iter().sum::<f64>() / per_seed.len() as f64;
        rows.push(DiameterRow {
            n,
            mean_diameter: mean,
            ratio: mean / (n as f64).ln(),
            prediction,
            per_seed,
        });
    }
    Ok(rows)
}
