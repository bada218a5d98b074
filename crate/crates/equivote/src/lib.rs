//! Most-equitable voting.
//!
//! This crate implements irresolute voting rules over general preference and
//! decision spaces (k-lists, k-committees, and their up-to-L variants),
//! tie-breaking mechanisms that turn them into resolute rules — most notably
//! the most-favorable-permutation (MFP) tie-breaking, which preserves
//! anonymity and neutrality at every profile where that is possible at all —
//! closed-form characterizations of when anonymous, neutral, and resolute
//! (ANR) rules exist, and estimators for how likely ANR violations are under
//! random profiles.
//!
//! The modules are layered bottom-up:
//!
//! * [`prefs`] — alternatives, permutations, preferences/decisions, spaces,
//!   profiles, histograms, and the lexicographic priority order.
//! * [`groups`] — permutation-group algebra: closures, stabilizers, orbits,
//!   fixed points, and fixed-point decisions.
//! * [`rules`] — irresolute voting rules (scoring, Copeland, maximin, ranked
//!   pairs, Schulze, STV, approval) plus rule-property checkers.
//! * [`tiebreak`] — lexicographic, fixed-agent, and MFP tie-breaking.
//! * [`impossibility`] — partition/coin-set characterizations of the ANR
//!   impossibility, at-large conditions, and the α exponent bounds.
//! * [`likelihood`] — samplers and Monte-Carlo/exact estimation of the
//!   probability that a random profile is problematic.
//! * [`oracle`] — brute-force ground-truth generators that independently
//!   verify the closed forms and the MFP algorithms at small scale.

pub mod groups;
pub mod impossibility;
pub mod likelihood;
pub mod oracle;
pub mod prefs;
pub mod rules;
pub mod tiebreak;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
