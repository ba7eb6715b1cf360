//! Numerics for the resource theories of qubit about-face asymmetry.
//!
//! A qubit state is a Bloch vector in the unit ball. For each axis `n` the
//! free operations are the channels that commute with the π rotation about
//! `n`. This crate provides
//!
//! * the complete monotone pair `(A_n, B_n)` and the six-value profile for
//!   the three coordinate axes ([`monotones`]),
//! * the conversion criterion, comparability and downward closures
//!   ([`order`]),
//! * Bloch-affine channels, Choi positivity, covariance and the
//!   rotation / translation-scaling decomposition of covariant maps
//!   ([`channel`]),
//! * every equality and inequality linking the six monotones, inversion
//!   formulas, cross-sections and pairwise synergy/trade-off detection
//!   ([`relations`]),
//! * a brute-force channel search that checks the monotone criterion
//!   independently ([`oracle`]),
//! * randomized verification suites shared by the CLI and benchmarks
//!   ([`suites`]).
//!
//! Batch work runs on rayon when the `parallel` feature is enabled (the
//! default) and falls back to a sequential loop otherwise; see
//! [`parallel::Execution`].

// NaN inputs must fail validation, so `!(x <= limit)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod channel;
pub mod convex_fit;
pub mod error;
pub mod monotones;
pub mod oracle;
pub mod order;
pub mod parallel;
pub mod relations;
pub mod section;
pub mod suites;
pub mod tol;

pub use bloch::{Axis, BlochState, SampleMode, SamplerConfig};
pub use channel::{AffineQubitMap, ChoiMatrix, CovariantChannelSpec, ExtremalCovariantParams};
pub use error::{Error, Result};
pub use monotones::{MonotonePair, MonotoneProfile, RefbitChain};
pub use order::{ComparabilityResult, ConversionVerdict, OrderWitness};
pub use parallel::Execution;
