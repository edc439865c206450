//! Greedy progression-free sequences, AP_k-covering sets and their counting
//! functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`ap`] holds the sequence carrier, progression predicates and the
//!   covering verifier every other module leans on.
//! * [`greedy`] builds Stanley sequences of order k and the generalized
//!   `n != k*b - a` greedy set together with its closed-form interval chain.
//! * [`constructions`] contains the two explicit AP_3-covering sets (block
//!   construction and base-4 digit construction) with proof-derived witnesses.
//! * [`random_cover`] simulates the random AP_k-covering set with a
//!   counter-based RNG.
//! * [`density`] computes counting functions and normalized ratio tables.
//! * [`cli`] is the command-line front end.

pub mod ap;
pub mod cli;
pub mod constructions;
pub mod density;
pub mod error;
pub mod greedy;
pub mod random_cover;

pub use ap::{
    extends_to_kap, find_cover_witness, is_k_ap_free, verify_covering, verify_covering_jobs,
    ApWitness, CoverIndex, CoverReport, IntegerSet, NaturalSequence,
};
pub use error::{Error, Result};

/// Version tag written into every JSON document the CLI emits.
pub const FORMAT_VERSION: &str = "1";
