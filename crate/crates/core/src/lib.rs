//! Spatially resolved Bell correlations.
//!
//! A singlet pair whose spatial part is a product of Gaussian packets has the
//! localized spin correlation `E(a, O1, b, O2) = g(O1, O2) * (-a.b)`, where
//! `g` is the probability that both particles are found in their detector
//! boxes. This crate computes `g` three ways (closed form, adaptive
//! quadrature, Monte Carlo), evaluates and maximizes the CHSH functional,
//! applies the locality criterion `g <= 1/sqrt(2)`, and decides whether a
//! finite correlation table admits a local hidden variable model by linear
//! programming over deterministic strategies.
//!
//! Data-parallel loops (Monte Carlo chunks, optimizer starts, batches) go
//! through [`exec::Exec`]; with the `parallel` feature disabled every path
//! runs sequentially and produces bit-identical results.

// Negated float comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlation;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod lhv;
pub mod normal;
pub mod quadrature;
pub mod simplex;
pub mod spatial;
pub mod spin;

pub use correlation::{
    chsh_maximize, chsh_value, criterion_threshold, criterion_threshold_for, e_full,
    locality_criterion, tsirelson_maximum, tsirelson_settings, verify_paper_bound, ChshOptions,
    ChshOptimum, ChshSettings, LocalityVerdict, PaperBound, Scenario, LOCALITY_THRESHOLD,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use geometry::{BoxRegion, UnitVector3};
pub use lhv::{
    chsh_facet_check, enumerate_strategies, lhv_membership, reconstruct, CorrelationTable,
    DeterministicStrategy, LhvModel, Membership,
};
pub use spatial::{
    conditional_spin_region_probability, g_factor, g_factor_montecarlo, g_factor_quadrature,
    region_probability, GaussianPacket, MonteCarloEstimate, ProductWaveFunction,
};
pub use spin::{e_spin, e_spin_matrix, singlet, spin_observable, SpinObservable, SpinState};
