//! Storage and repair cost tradeoffs for heterogeneous distributed storage
//! systems.
//!
//! A system is described by a [`model::DssSpec`]: per-node storage and
//! download costs, the node sets a data collector may read from, and the
//! helper sets able to repair each node. For a concrete
//! [`model::Assignment`] of storage amounts and repair downloads the crate
//! evaluates
//!
//! * the storage and repair costs ([`cost`]),
//! * the min-cut bound `Q` in closed form ([`bound`]) and, independently,
//!   by max-flow on explicit information flow graphs ([`flowgraph`]).
//!
//! [`optimizer`] turns the bound into linear programs solved by the
//! in-crate simplex ([`lp`]) and sweeps a weighted sum of the two costs to
//! trace the tradeoff curve.

pub mod bound;
pub mod cli;
pub mod cost;
pub mod enumeration;
pub mod flowgraph;
pub mod lp;
pub mod model;
pub mod number;
pub mod optimizer;
pub mod specfile;

pub use model::{example_system, Assignment, DssSpec, SpecDraft};
pub use number::Rational;
