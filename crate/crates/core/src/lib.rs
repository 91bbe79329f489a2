//! Partition-based (k+1)-partite entanglement measures.
//!
//! Pure states are scored by how far their reduced states on the blocks of
//! bounded-size set partitions are from pure; mixed states are bounded from
//! above by optimizing over ensemble decompositions ([`roof`]) and from below
//! through their permutation-invariant part ([`pi`]).

pub mod config;
pub mod error;
pub mod measures;
pub mod partitions;
pub mod pi;
pub mod random;
pub mod roof;
pub mod state;
pub mod states;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use measures::{Measure, MeasureParam, MeasureRegistry, MeasureReport};
pub use partitions::Partition;
pub use state::{DensityOperator, PureState, RegisterLayout, Spectrum, StateData};
