pub mod bfacf;
pub mod cmc;
pub mod error;
pub mod invariants;
pub mod knot;
pub mod lattice;
pub mod reconnection;
pub mod stats;

pub use error::{Error, Result};
