use crate::error::{Error, Result};
use crate::excursion::ExcursionLaw;
use crate::renewal::{Disorder, PinningModel};
use crate::Real;

/// Polymer pulled off the line by a force, as a pinning model.
///
/// For a walk biased away from the line with probability `p > 1/2` the force
/// model at strength `u` is the pinning model over `BiasedRW(p)` excursions at
/// `u - β⁻¹ log 2`.
pub fn force_model<S: Real>(p: S, beta: S, u: S, disorder: Disorder<S>) -> Result<PinningModel<S>> {
    if !(p > S::lit(0.5)) {
        return Err(Error::InvalidArgument(format!("force model needs p > 1/2, got {p}")));
    }
    let law = ExcursionLaw::biased_rw(p)?;
    PinningModel::new(law, beta, u - S::LN_2() / beta, disorder)
}
