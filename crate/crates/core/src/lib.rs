//! Action-level automata for manufacturing system specifications.
//!
//! A [`Specification`](model::Specification) describes resources made of
//! peripherals, activities as DAGs of claim, release and peripheral-action
//! nodes, and the order in which activities are dispatched. This crate
//! compiles it into component automata, composes them into a system
//! automaton, and explores, checks traces against and compares those
//! automata.

pub mod automata;
pub mod builders;
pub mod cli;
pub mod diagnostic;
pub mod dsl;
pub mod error;
pub mod fixtures;
pub mod model;
pub mod sequence;
pub mod system;
pub mod timing;
pub mod validate;

pub use error::{Error, Result};
