//! Verification and exploration toolkit for the Clarkson inequalities and variants on
//! finite, optionally weighted, `lp` vectors.
//!
//! - [`norms`]: validated vectors, weighted p-norms, exponent pairs.
//! - [`catalog`]: every inequality as an oriented gap functional.
//! - [`rearrangement`]: the dominance rearrangement and swap inequalities.
//! - [`variational`]: the monotone function `φ` and the sign scan of `χ`.
//! - [`search`]: seeded counterexample, extremal and grid searches.

pub mod catalog;
pub mod error;
pub mod norms;
pub mod rearrangement;
pub mod search;
pub mod variational;

pub use catalog::{evaluate, GapReport, InequalityId, TolerancePolicy, Verdict};
pub use error::{Error, Result};
pub use norms::{ExponentPair, NonnegVector, RealVector, Regime, Weights};
pub use search::{Constraint, EntryDistribution, SampleSpec, SearchOptions, SearchOutcome, SearchStatus};
