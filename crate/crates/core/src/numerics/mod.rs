//! Scalar numerical kernels: stable log-space sums, bracketed scalar solvers
//! and certified power/exponential series.

mod logsum;
mod optimize;
mod powersum;

pub use logsum::{log_add_exp, log_sum_exp, LogSum};
pub use optimize::{bisect_predicate, golden_max, safeguarded_root, Bracket};
pub use powersum::{log_power_exp_sum, power_exp_sum};
