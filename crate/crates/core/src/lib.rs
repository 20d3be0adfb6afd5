//! Exact analysis of secret-key generation in pairwise independent networks.
//!
//! The crate computes the secret-key capacity of a terminal set as an exact
//! rational linear program, the partition upper bound, explicit tree packings
//! of the associated multigraph, and runs the XOR tree-propagation protocol
//! together with an exact secrecy audit.

pub mod audit;
pub mod capacity;
pub mod error;
pub mod gf2;
pub mod io;
pub mod model;
pub mod packing;
pub mod partition;
pub mod protocol;
pub mod report;
pub mod simplex;

pub use error::{Error, Result};
pub use model::{
    format_rational, mutual_information, parse_rational, Edge, Mode, Multigraph, PairPmf, PinModel,
    Rational, TerminalSet,
};
