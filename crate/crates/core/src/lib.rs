//! Majorization structure of beam-splitter output states.
//!
//! A Fock state `|k⟩` and vacuum entering a beam splitter of angle θ leave a
//! two-mode pure state whose Schmidt spectrum is binomial. This crate
//! computes those spectra and the majorization relations between them:
//!
//! * [`vectors`]: validated probability vectors, sorting, padding, tensor products
//! * [`majorization`]: the partial order and its verdicts
//! * [`birkhoff`]: doubly stochastic witnesses and Birkhoff–von Neumann peeling
//! * [`beamsplitter`]: output spectra and the photon-number chain `P⁽ᵏ⁺¹⁾ ≺ P⁽ᵏ⁾`
//! * [`regions`]: ordering regions over θ and infinitesimal majorization
//! * [`entropy`]: Rényi entropies and θ-sweeps
//! * [`locc`]: the explicit two-outcome conversion protocol
//! * [`catalysis`]: catalyst families, checks and grid search
//!
//! Everything is generic over [`Scalar`] (`f64` and `f32`); the aliases at
//! the crate root fix `f64`, which is what the tolerances are tuned for.

pub mod beamsplitter;
pub mod birkhoff;
pub mod catalysis;
pub mod entropy;
pub mod error;
pub mod locc;
pub mod majorization;
pub mod regions;
pub mod scalar;
pub mod vectors;

pub use error::{Error, Result};
pub use majorization::Relation;
pub use scalar::Scalar;

pub type ProbVec = vectors::ProbVector<f64>;
pub type OscVec = vectors::OscVector<f64>;
pub type Verdict = majorization::MajorizationVerdict<f64>;
pub type DsMatrix = birkhoff::DoublyStochasticMatrix<f64>;
pub type Decomposition = birkhoff::BirkhoffDecomposition<f64>;
pub type BsInput = beamsplitter::BeamSplitterInput<f64>;
pub type Partition = regions::RegionPartition<f64>;
pub type Renyi = entropy::RenyiOrder<f64>;
pub type Catalyst = catalysis::CatalystSpec<f64>;
pub type Kraus = locc::KrausPair<f64>;

pub type ProbVec32 = vectors::ProbVector<f32>;
pub type Verdict32 = majorization::MajorizationVerdict<f32>;
