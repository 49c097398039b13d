//! Inhomogeneous random graphs `G(n, kappa)` and their multi-type Poisson
//! branching processes.
//!
//! A graph is specified by a type space `(S, mu)`, a symmetric kernel
//! `kappa(x, y) >= 0`, and a vertex count `n`; every pair `{i, j}` is an edge
//! independently with probability roughly `kappa(x_i, x_j) / n`. The crate
//! provides:
//!
//! * [`spaces`] -- finite and interval type spaces, vertex type sampling;
//! * [`kernels`] -- kernel presets, discretization to cell matrices,
//!   irreducibility classification;
//! * [`graphgen`] -- exact per-pair and blocked geometric-skip samplers for
//!   the three edge-probability variants;
//! * [`graphstats`] -- components, degrees, distances, diameter, path/cycle
//!   counts, two-core;
//! * [`branching`] -- the operator norm of `T_kappa`, the survival fixed
//!   point `rho = 1 - exp(-T_kappa rho)`, derived functionals (giant edge
//!   density, degree law, dual kernel, two-core fraction, transition slope),
//!   Monte Carlo branching simulation, and the rank-1 semi-analytic solver.
//!
//! The crate is `no_std` (with `alloc`); all floating-point special functions
//! go through `libm`. Everything is deterministic given the caller's seeds;
//! see [`rng`] for the generator contract.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod branching;
pub mod error;
pub mod graphgen;
pub mod graphstats;
pub mod kernels;
pub mod linalg;
pub mod math;
pub mod rng;
pub mod spaces;

pub use error::{Error, Result};
