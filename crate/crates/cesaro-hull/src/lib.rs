//! A computational-probability workbench for convex hulls of nonnegative
//! random variables on truncated countable atomic spaces.
//!
//! Every sequence of nonnegative random variables has a subsequence whose
//! Cesàro means converge almost surely to a limit that may be infinite, and
//! the set where that limit is finite coincides with the bounded part of the
//! Brannath–Schachermayer decomposition of the hull. On an atomic space both
//! objects are computable from the per-atom coefficient sequences, and this
//! crate makes the whole chain executable:
//!
//! - [`space`]: truncated atomic spaces, simple nonnegative RVs, equivalent
//!   measures, probabilities and expectations;
//! - [`family`]: coefficient families `c_{n,m}` with declared per-atom
//!   boundedness tags, probing windows, the Cesàro transform, convex mixing,
//!   and the shared dyadic divergence rule;
//! - [`decomposition`]: the bounded / hereditarily-unbounded atom partition,
//!   the certifying measure `q_m = 2^{-m} / C_m`, L1 certificates, and the
//!   independent brute-force boundedness oracle;
//! - [`limits`]: per-atom Cesàro limit profiles, the three-set identity
//!   (finite set = bounded part of both hulls), subsequence selection,
//!   tightness, and weak-convergence checks;
//! - [`slln`]: reproducible generators for i.i.d., m-dependent, and
//!   antithetic correlated-variance sequences plus the empirical regime
//!   equivalences;
//! - [`config`] / [`runner`]: declarative JSON experiments, reports, and the
//!   suite executor behind the CLI.
//!
//! Start with the runnable examples (`cargo run --example partition_basics`)
//! or the `cesaro-hull` binary (`partition`, `slln`, `suite`, `oracle`
//! subcommands).

pub mod config;
pub mod decomposition;
pub mod error;
pub mod family;
pub mod limits;
pub mod runner;
pub mod slln;
pub mod space;

pub use error::{Error, Result};
