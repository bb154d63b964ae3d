//! Election control on nearly single-peaked preference profiles.
//!
//! The crate is `no_std` and only needs an allocator. Candidates are plain
//! indices into an election's roster; names are carried for display only.

#![no_std]

extern crate alloc;

pub mod control;
pub mod election;
pub mod error;
pub mod fpt;
pub mod gadgets;
pub mod graphs;
pub mod rules;
pub mod sat2;
pub mod structure;

pub use election::{Cand, Election, MajorityMatrix, Vote};
pub use error::Error;
pub use rules::{Rule, Score};
