//! `gnk`: simulate inhomogeneous random graphs G(n, kappa) and verify them
//! against their branching-process theory.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use gnk_cli::config::Config;
use gnk_cli::formats;
use gnk_cli::harness::{self, SweepFamily};
use gnk_cli::kernelspec::{self, parse_kernel, parse_space};

use gnk_core::branching::{operator_norm, solve_survival};
use gnk_core::graphgen::{generate, GenOptions};
use gnk_core::graphstats::{component_summary, count_paths_cycles, degree_histogram, distance_sample};
use gnk_core::kernels::{discretize, DiscretizeMode, KernelForm};
use gnk_core::rng::derive_seed;
use gnk_core::spaces::sample_types;

#[derive(Parser)]
#[command(
    name = "gnk",
    version,
    about = "inhomogeneous random graphs G(n, kappa): generation, statistics, and branching-process theory"
)]
struct Cli {
    /// JSON config file; flags override its fields where noted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed for all randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (defaults to stdout-only).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for tables.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct KernelSpaceArgs {
    /// Kernel spec, e.g. constant:c=2 or dubins:c=0.26.
    #[arg(long)]
    kernel: Option<String>,
    /// Space spec: uniform:m=..., log:m=...,depth=..., finite:w=...
    #[arg(long)]
    space: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Operator norm, Hilbert-Schmidt norm, and leading eigenfunction.
    Norm(KernelSpaceArgs),
    /// Survival profile: rho, zeta, lambda, norms, dual norm.
    Solve(KernelSpaceArgs),
    /// Sweep the phase transition and fit the exponent.
    Sweep {
        #[command(flatten)]
        ks: KernelSpaceArgs,
        /// Epsilon grid as lo:hi:count (log-spaced offsets above c0).
        #[arg(long, default_value = "1e-3:1e-1:13")]
        eps_grid: String,
        /// Fit window lo,hi within the grid.
        #[arg(long, default_value = "1e-3,1e-1")]
        fit_window: String,
    },
    /// Sample a graph and write the edge list, types, and metadata.
    Generate {
        #[command(flatten)]
        ks: KernelSpaceArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        tier: Option<String>,
    },
    /// Component/degree/distance statistics of an exported edge list.
    Analyze {
        /// Edge-list file produced by `gnk generate`.
        #[arg(long)]
        graph: PathBuf,
        /// Sampled distance pairs (0 to skip).
        #[arg(long, default_value_t = 0)]
        pairs: usize,
        /// Count paths/cycles up to this many edges (0 to skip).
        #[arg(long, default_value_t = 0)]
        kmax: usize,
    },
    /// Theory-vs-simulation comparison; exit code 2 on any band failure.
    Compare,
    /// Exact diameters across n against the norm/dual-norm prediction.
    Diameter {
        #[command(flatten)]
        ks: KernelSpaceArgs,
        /// Comma-separated list of n values.
        #[arg(long, default_value = "1000,10000,30000")]
        n_list: String,
        #[arg(long, default_value_t = 3)]
        seeds: usize,
    },
    /// Turova critical intensity: Bessel-zero formula vs numeric crossing.
    Turova {
        #[arg(long)]
        delta: f64,
        /// Grid cells for the numeric route.
        #[arg(long, default_value_t = 800)]
        grid_m: usize,
    },
    /// List kernel presets.
    Presets,
}

fn write_or_print(out: &Option<PathBuf>, name: &str, content: &str) -> Result<(), String> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
            let path = dir.join(name);
            fs::write(&path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, String> {
    let mut cfg = match &cli.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.generate.seed = seed;
    }
    Ok(cfg)
}

/// Apply --kernel/--space overrides on top of the config.
fn apply_ks(cfg: &mut Config, ks: &KernelSpaceArgs) {
    if let Some(k) = &ks.kernel {
        cfg.kernel = k.clone();
    }
    if let Some(s) = &ks.space {
        // stash the raw spec; resolve() below parses it
        cfg.space.kind = "spec".into();
        cfg.space.weights.clear();
        cfg.space.m = 0;
        cfg.space.scale = s.clone();
    }
}

/// Space from either a raw spec override or the structured config.
fn space_of(cfg: &Config) -> Result<gnk_core::spaces::TypeSpace, String> {
    if cfg.space.kind == "spec" {
        parse_space(&cfg.space.scale).map_err(|e| e.to_string())
    } else {
        cfg.space()
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    let mut cfg = load_config(cli)?;
    let base_dir = cli
        .config
        .as_deref()
        .and_then(Path::parent)
        .unwrap_or_else(|| Path::new("."))
        .to_path_buf();
    match &cli.command {
        Command::Presets => {
            let mut text = String::new();
            for (name, desc) in kernelspec::preset_catalog() {
                text.push_str(&format!("{name:32} {desc}\n"));
            }
            print!("{text}");
            Ok(true)
        }
        Command::Norm(ks) => {
            apply_ks(&mut cfg, ks);
            let (kernel, mspace) = parse_kernel(&cfg.kernel, &base_dir).map_err(|e| e.to_string())?;
            let space = match mspace {
                Some(s) => s,
                None => space_of(&cfg)?,
            };
            let dk = discretize(&kernel, &space, DiscretizeMode::Midpoint).map_err(|e| e.to_string())?;
            let settings = cfg.solver_settings();
            let on =
                operator_norm(&dk, settings.norm_tol, settings.norm_max_iter).map_err(|e| e.to_string())?;
            let doc = json!({
                "kernel": cfg.kernel,
                "cells": dk.r,
                "norm": on.norm,
                "hs_norm": on.hs_norm,
                "critical_scale": 1.0 / on.norm,
                "iterations": on.iterations,
            });
            write_or_print(
                &cli.out,
                "norm.json",
                &serde_json::to_string_pretty(&doc).unwrap(),
            )?;
            Ok(true)
        }
        Command::Solve(ks) => {
            apply_ks(&mut cfg, ks);
            let (kernel, mspace) = parse_kernel(&cfg.kernel, &base_dir).map_err(|e| e.to_string())?;
            let space = match mspace {
                Some(s) => s,
                None => space_of(&cfg)?,
            };
            let dk = discretize(&kernel, &space, DiscretizeMode::Midpoint).map_err(|e| e.to_string())?;
            let profile = solve_survival(&dk, &cfg.solver_settings()).map_err(|e| e.to_string())?;
            write_or_print(
                &cli.out,
                "profile.json",
                &serde_json::to_string_pretty(&profile).unwrap(),
            )?;
            Ok(true)
        }
        Command::Sweep {
            ks,
            eps_grid,
            fit_window,
        } => {
            apply_ks(&mut cfg, ks);
            let (kernel, mspace) = parse_kernel(&cfg.kernel, &base_dir).map_err(|e| e.to_string())?;
            let grid = parse_grid(eps_grid)?;
            let window = parse_pair(fit_window)?;
            let settings = cfg.solver_settings();
            let family = match kernel.form {
                KernelForm::Rank1 { p, a } => SweepFamily::Rank1 {
                    p,
                    a,
                    quad_points: cfg.solver.quad_points,
                },
                _ => {
                    let space = match mspace {
                        Some(s) => s,
                        None => space_of(&cfg)?,
                    };
                    let dk =
                        discretize(&kernel, &space, DiscretizeMode::Midpoint).map_err(|e| e.to_string())?;
                    SweepFamily::Discrete { dk }
                }
            };
            let sweep = harness::sweep_transition(&family, &grid, window, &settings)?;
            if cli.format == "csv" {
                let mut csv = String::from("eps,c,rho,zeta\n");
                for p in &sweep.points {
                    csv.push_str(&format!("{},{},{},{}\n", p.eps, p.c, p.rho, p.zeta));
                }
                write_or_print(&cli.out, "sweep.csv", &csv)?;
            } else {
                write_or_print(
                    &cli.out,
                    "sweep.json",
                    &serde_json::to_string_pretty(&sweep).unwrap(),
                )?;
            }
            Ok(true)
        }
        Command::Generate { ks, n, variant, tier } => {
            apply_ks(&mut cfg, ks);
            if let Some(n) = n {
                cfg.generate.n = *n;
            }
            if let Some(v) = variant {
                cfg.generate.variant = v.clone();
            }
            if let Some(t) = tier {
                cfg.generate.tier = t.clone();
            }
            let (kernel, mspace) = parse_kernel(&cfg.kernel, &base_dir).map_err(|e| e.to_string())?;
            let space = match mspace {
                Some(s) => s,
                None => space_of(&cfg)?,
            };
            let dk = discretize(&kernel, &space, DiscretizeMode::Midpoint).map_err(|e| e.to_string())?;
            let n = cfg.generate.n;
            let assignment = sample_types(&space, n, cfg.sample_mode()?, derive_seed(cfg.generate.seed, 1))
                .map_err(|e| e.to_string())?;
            let g = generate(
                &dk,
                &assignment,
                n,
                cfg.variant()?,
                cfg.tier()?,
                derive_seed(cfg.generate.seed, 2),
                &GenOptions {
                    exact_cap: cfg.generate.exact_cap,
                },
            )
            .map_err(|e| e.to_string())?;
            write_or_print(&cli.out, "types.txt", &formats::assignment_text(&assignment))?;
            write_or_print(&cli.out, "edges.txt", &formats::edge_list_text(&g, "types.txt"))?;
            write_or_print(&cli.out, "meta.json", &formats::meta_json(&g.meta))?;
            Ok(true)
        }
        Command::Analyze { graph, pairs, kmax } => {
            let text =
                fs::read_to_string(graph).map_err(|e| format!("cannot read {}: {e}", graph.display()))?;
            let (n, edges) = formats::parse_edge_list(&text)?;
            let meta = gnk_core::graphgen::GraphMeta {
                kernel: "imported".into(),
                variant: gnk_core::graphgen::Variant::Min,
                tier: "imported".into(),
                seed: 0,
                exact_points: false,
            };
            let g = gnk_core::graphgen::TypedGraph::from_edges(n, vec![0; n], edges, meta);
            let cs = component_summary(&g);
            let hist = degree_histogram(&g);
            let mut doc = json!({
                "n": n,
                "edges": g.edge_count(),
                "c1": cs.c1,
                "c2": cs.c2,
                "edges_in_c1": cs.edges_in_c1,
                "component_count": cs.sizes.len(),
                "degree_histogram": hist,
            });
            if *kmax > 0 {
                let pc = count_paths_cycles(&g, (*kmax).min(6), 1 << 34).map_err(|e| e.to_string())?;
                doc["paths"] = json!(pc.paths);
                doc["cycles"] = json!(pc.cycles);
            }
            if *pairs > 0 {
                let d = distance_sample(&g, *pairs, derive_seed(cfg.generate.seed, 3));
                write_or_print(&cli.out, "distances.csv", &formats::distances_csv(&d))?;
            }
            write_or_print(
                &cli.out,
                "analysis.json",
                &serde_json::to_string_pretty(&doc).unwrap(),
            )?;
            Ok(true)
        }
        Command::Compare => {
            let rep = harness::compare(&cfg, &base_dir)?;
            write_or_print(&cli.out, "report.json", &rep.to_json())?;
            for row in &rep.rows {
                if !row.per_seed.is_empty() {
                    write_or_print(&cli.out, &format!("{}.csv", row.name), &rep.metric_csv(row))?;
                }
                let status = match row.pass {
                    Some(true) => "pass",
                    Some(false) => "FAIL",
                    None => "skip",
                };
                eprintln!(
                    "{:18} {}  sim={:?} theory={:?} delta={:?}",
                    row.name, status, row.simulated, row.theoretical, row.delta
                );
            }
            Ok(rep.all_pass())
        }
        Command::Diameter { ks, n_list, seeds } => {
            apply_ks(&mut cfg, ks);
            let (kernel, mspace) = parse_kernel(&cfg.kernel, &base_dir).map_err(|e| e.to_string())?;
            let space = match mspace {
                Some(s) => s,
                None => space_of(&cfg)?,
            };
            let dk = discretize(&kernel, &space, DiscretizeMode::Midpoint).map_err(|e| e.to_string())?;
            let ns: Result<Vec<usize>, _> = n_list.split(',').map(|s| s.trim().parse::<usize>()).collect();
            let ns = ns.map_err(|e| format!("bad n list: {e}"))?;
            let seeds: Vec<u64> = (0..*seeds as u64)
                .map(|k| derive_seed(cfg.generate.seed, k))
                .collect();
            let rows = harness::diameter_study(
                &dk,
                &space,
                &ns,
                &seeds,
                cfg.variant()?,
                cfg.tier()?,
                &cfg.solver_settings(),
                cfg.generate.exact_cap,
            )?;
            if cli.format == "csv" {
                let mut csv = String::from("n,mean_diameter,ratio,prediction\n");
                for r in &rows {
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        r.n,
                        r.mean_diameter,
                        r.ratio,
                        r.prediction
                            .map(|p| p.to_string())
                            .unwrap_or_else(|| "undefined".into())
                    ));
                }
                write_or_print(&cli.out, "diameter.csv", &csv)?;
            } else {
                write_or_print(
                    &cli.out,
                    "diameter.json",
                    &serde_json::to_string_pretty(&rows).unwrap(),
                )?;
            }
            Ok(true)
        }
        Command::Turova { delta, grid_m } => {
            let t = harness::turova_critical(*delta, *grid_m, &cfg.solver_settings())?;
            write_or_print(
                &cli.out,
                "turova.json",
                &serde_json::to_string_pretty(&t).unwrap(),
            )?;
            Ok(true)
        }
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err("eps grid is lo:hi:count".into());
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("bad grid lo: {e}"))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("bad grid hi: {e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("bad grid count: {e}"))?;
    if !(lo > 0.0 && hi > lo && count >= 2) {
        return Err("eps grid needs 0 < lo < hi and count >= 2".into());
    }
    let ratio = (hi / lo).ln();
    Ok((0..count)
        .map(|k| lo * (ratio * k as f64 / (count - 1) as f64).exp())
        .collect())
}

fn parse_pair(spec: &str) -> Result<(f64, f64), String> {
    let (a, b) = spec.split_once(',').ok_or("fit window is lo,hi")?;
    Ok((
        a.trim().parse().map_err(|e| format!("bad window lo: {e}"))?,
        b.trim().parse().map_err(|e| format!("bad window hi: {e}"))?,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
