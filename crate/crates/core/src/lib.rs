//! Degree growth of birational maps of projective space by iterated proper
//! pull-backs, blow-up chart indices, recurrence fitting, Picard lattices and
//! Darboux polynomial spaces, all in exact rational arithmetic.

#![allow(clippy::needless_range_loop)]

pub mod birmap;
pub mod blowup;
pub mod cli;
pub mod darboux;
pub mod instance;
pub mod linalg;
pub mod picard;
pub mod poly;
pub mod sequence;
