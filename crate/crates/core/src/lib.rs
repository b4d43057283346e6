//! Disordered polymer pinning models.
//!
//! The polymer is described by the excursion-length law of an underlying
//! Markov chain; contacts with the defect line are rewarded by
//! `beta * (u + V_i)` with i.i.d. disorder `V_i`. The crate provides
//!
//! * [`excursion`]: excursion laws (possibly defective) with tail analytics
//!   and the tilt / loosen / partial-loosen transforms,
//! * [`ratefun`]: Legendre-transform rate functions of the contact density and
//!   the annealed / quenched variational functionals,
//! * [`renewal`]: exact finite-volume partition functions by log-space renewal
//!   recursions, a contact-count dynamic program and a brute-force oracle,
//! * [`analysis`]: free energies, critical points, transition classification
//!   and depinning reports.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod analysis;
pub mod error;
pub mod excursion;
pub mod numerics;
pub mod ratefun;
pub mod renewal;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ExcursionLaw = excursion::ExcursionLaw<f64>;
pub type ExcursionLaw32 = excursion::ExcursionLaw<f32>;
pub type RateProfile = ratefun::RateProfile<f64>;
pub type PinningModel = renewal::PinningModel<f64>;
pub type DisorderField = renewal::DisorderField<f64>;
pub type PartitionResult = renewal::PartitionResult<f64>;
pub type PhaseReport = analysis::PhaseReport;
