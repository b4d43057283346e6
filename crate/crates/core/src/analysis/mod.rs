//! Free energies, critical points, transition classification and the
//! verification reports built on them.
//!
//! Annealed quantities are exact (root solves of the renewal equation);
//! quenched quantities come from replica simulations of the exact finite-`N`
//! partition functions.

mod annealed;
mod classify;
mod force;
mod loosened;
mod quenched;
mod report;

pub use annealed::{annealed_contact_fraction, annealed_critical_point, annealed_free_energy, annealed_root};
pub use classify::{classify_transition, transition_case, AnnealedPhase, TransitionCase};
pub use force::force_model;
pub use loosened::{
    coupled_check, loosened_shift, partial_loosening_rate, partial_loosening_shift, translation_residual, CoupledRow,
    TranslationResidual,
};
pub use quenched::{
    positivity_criterion, quenched_contact_fraction, quenched_critical_point, quenched_free_energy, quenched_sample,
    replica_fields, sample_fields, CriticalEstimate, CriticalSearch, Estimate, LadderPoint, QuenchedSample, ReplicaRow,
};
pub use report::{
    classify_report, ext, phase_report, scan, theorem1_report, theorem2_report, Check, PhaseReport, ReportBudget,
    ScanRow,
};

#[cfg(test)]
mod tests;
