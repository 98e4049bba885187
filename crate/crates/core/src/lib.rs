//! Near-field beam training for extremely large linear arrays with a
//! sparse-DFT codebook.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: Fresnel integrals and the closed-form sparse-array pattern.
//! * [`channel`]: array geometry, steering vectors and the Rician channel.
//! * [`codebooks`]: DFT, sparse-DFT, central-subarray and polar codebooks.
//! * [`training`]: the three-phase scheme, its benchmarks and overhead formulas.
//! * [`harness`]: scenario files and the Monte Carlo runner.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod codebooks;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod training;

pub use channel::{make_channel, Channel, FieldModel, NlosNormalization, SystemConfig, UserLocation};
pub use codebooks::{AngularGrid, Codebook, CodebookKind, Codeword, SubarrayBounds};
pub use error::{Error, Result};
pub use harness::{load_scenario, run, ExperimentReport, OutputFormat, Scenario, Scheme};
pub use training::{Sounder, TrainingContext, TrainingOutcome, TrainingParams};
