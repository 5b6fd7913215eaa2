//! Signed sums of unit vectors: exact enumeration, extremal constructions,
//! sign-balancing algorithms and adversarial search.

pub mod balancing;
pub mod cli;
pub mod config;
pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod geometry;
pub mod precision;
pub mod search;
