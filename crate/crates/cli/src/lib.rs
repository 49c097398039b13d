//! Experiment harness and file formats for the `gnk` toolkit: kernel/space
//! spec parsing, JSON configs with pass/fail bands, theory-vs-simulation
//! comparison reports, transition sweeps, deletion smoke tests, the Turova
//! Bessel-zero cross-check, and diameter studies.

pub mod bessel;
pub mod config;
pub mod formats;
pub mod harness;
pub mod kernelspec;
pub mod report;

pub use config::Config;
pub use report::ExperimentReport;
