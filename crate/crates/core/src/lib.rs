//! Online combinatorial algorithms modelled as monotone operators on
//! prefix spaces.
//!
//! An online problem is a space of arrival prefixes together with an
//! admissibility predicate on (prefix, partial output) pairs. A solver is
//! a deterministic callback that extends its output as arrivals come in,
//! optionally with a declared lookahead. The crate provides:
//!
//! - the solver contract and a verifying run driver ([`online`]),
//! - lookahead-to-strict widening by event blocks ([`widen`]),
//! - online graph colouring solvers, adversary games and exact oracles
//!   ([`colouring`]),
//! - interval orders, chain covers and the chain-cover-to-colouring
//!   reduction ([`interval`]),
//! - first-fit bin packing with an exact optimum ([`binpacking`]),
//! - strong Weihrauch / incremental reductions and limiting runs
//!   ([`reductions`]),
//! - pruned binary trees, separating widenings and path pullback
//!   ([`wkl`]),
//! - certified piecewise-linear approximation of real functions
//!   ([`analysis`]).

pub mod analysis;
pub mod binpacking;
pub mod colouring;
pub mod interval;
pub mod online;
pub mod prefix;
pub mod ratio;
pub mod reductions;
pub mod report;
pub mod widen;
pub mod wkl;

pub use online::{run_online, OnlineProblem, OnlineSolver, SolutionTrace};
pub use prefix::{ArrivalPrefix, Event, StructureKind};
