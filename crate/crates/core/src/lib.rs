//! Column generation and branch-and-price for the bin packing problem with
//! conflicts (BPPC).
//!
//! The crate provides:
//! * instance modeling, file I/O, and seeded random conflict generation,
//! * a revised primal simplex solver for the set-covering restricted master
//!   problem exposing dual values,
//! * an exact branch-and-bound pricer for the knapsack problem with
//!   conflicts, with a multi-solution pool variant,
//! * heuristic pricers: ant colony optimization with diversity-aware
//!   sampling, fixed-distribution ML sampling, and ML-warm-started ACO,
//! * the offline ML pipeline: feature extraction, linear SVM training,
//!   Platt calibration, and model (de)serialization,
//! * the column generation driver with exact-pricing fallback, and
//! * branch-and-price with Ryan-Foster branching.

pub mod bnp;
pub mod cg;
pub mod instance;
pub mod ml;
pub mod pricing;
pub mod rng;
pub mod sampling;
pub mod simplex;
