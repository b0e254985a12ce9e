//! Flag-gadget construction and verification for fault-tolerant syndrome
//! extraction.
//!
//! The pipeline: a classical parity-check matrix ([`codes`]) is stacked and
//! unfolded into a flag circuit ([`gadget`]), faults are enumerated and
//! propagated through it ([`faults`]), correction tables are built and
//! exhaustively verified ([`decode`]), multiple syndrome extractions are
//! chained into one protected round ([`multi`]), and qubit costs are compared
//! against cat-state extraction ([`resources`]). [`search`] scans repetition
//! counts and small circuit layouts for fault-tolerant configurations.

pub mod codes;
mod combi;
pub mod decode;
pub mod error;
mod exec;
pub mod f2;
pub mod faults;
pub mod gadget;
pub mod galois;
pub mod multi;
pub mod resources;
pub mod search;

pub use error::Error;
pub use exec::install as with_jobs;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
