//! Exact p-adic analysis of the `(m+1)`-state Solid-on-Solid model on a
//! Cayley tree: compatibility equations for p-adic Gibbs measures, their
//! solutions, finite-volume measures and boundedness.

pub mod cli;
pub mod error;
pub mod measure;
pub mod padic;
pub mod solver;
pub mod tree;
