//! Exact analytical cost expectations for QAOA families: product mixers
//! (single layer, weighted Ising graphs) and Grover-type mixers (any number
//! of layers, weighted Ising-type hypergraphs), verified term by term
//! against a brute-force statevector oracle.
//!
//! The core is generic over the floating-point scalar (`f32`/`f64`) through
//! [`scalar::Real`]; the `*64` aliases below fix `f64` for ordinary use.

pub mod cycle_space;
pub mod error;
pub mod gm;
pub mod hypergraph;
pub mod optimize;
pub mod oracle;
pub mod pm;
pub mod problems;
pub mod random;
pub mod scalar;
pub mod schema;

pub use error::{Error, Result};
pub use scalar::Real;

/// f64 weighted hypergraph.
pub type Hypergraph64 = hypergraph::WeightedHypergraph<f64>;
/// f64 Ising weights.
pub type IsingWeights64 = pm::IsingWeights<f64>;
/// f64 PM circuit parameters.
pub type PmParams64 = pm::PmParams<f64>;
/// f64 mixer axes.
pub type MixerAxes64 = pm::MixerAxes<f64>;
/// f64 GM circuit parameters.
pub type GmParams64 = gm::GmParams<f64>;
/// f64 product-state angles.
pub type ProductState64 = gm::ProductStateParams<f64>;
/// f64 statevector.
pub type StateVector64 = oracle::StateVector<f64>;
