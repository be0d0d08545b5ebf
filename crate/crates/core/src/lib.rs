//! Exponentially discounted subjective expected utility on state × time acts.
//!
//! Acts assign an outcome to every `(state, time)` pair, with finitely many
//! states and a per-state step profile over continuous time `[0, ∞)`. A
//! decision maker of the discounted SEU kind is described by a discount rate
//! `λ`, a bounded utility `u` on outcomes and beliefs `μ` on states, and values
//! an act `f` by
//!
//! ```text
//! V(f) = Σ_s μ(s) ∫ u[f(s,t)] dε_λ(t),      ε_λ[0,t) = 1 − e^{−λt}.
//! ```
//!
//! The crate provides exact arithmetic for `ε_λ` on finite unions of
//! half-open intervals ([`exp_measure`]), the act algebra ([`acts`]), the value
//! functional in both integration orders ([`evaluate`]), time equivalents
//! ([`equivalents`]), recovery of `λ` and `μ` from indifference queries
//! ([`elicitation`]), simulated decision makers ([`oracles`]), the reduction
//! to state-wise lotteries ([`aa`]), the 1/N sandwich constructions
//! ([`bracketing`]) and finite audits of the preference axioms ([`audit`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod aa;
pub mod acts;
pub mod audit;
pub mod bracketing;
pub mod elicitation;
pub mod equivalents;
mod error;
pub mod evaluate;
pub mod exp_measure;
pub mod oracles;
pub mod sampling;

pub use error::{Error, ErrorKind, Result};

pub use acts::{Event, GridAct, Outcome, State, StateSet, StateSpace, StepProfile};
pub use evaluate::{Beliefs, DseuModel, UtilityModel};
pub use exp_measure::{DiscountRate, TimeInterval, TimeSet};
pub use oracles::{Preference, PreferenceOracle, ValueFunctional};
