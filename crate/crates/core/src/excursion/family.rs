use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::kernel::Kernel;
use crate::Real;

/// Serializable description of an excursion law.
///
/// This is the JSON block accepted by the command line (`{"family":
/// "biased_rw", "p": 0.7}` and friends). Laws produced by transforms are
/// described by the `structured` variant, which records the internal
/// parametrisation exactly, so every law round-trips through this form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
#[serde(bound = "S: Real")]
pub enum Family<S> {
    /// Excursions from 0 of a nearest-neighbour walk stepping up with
    /// probability `p`.
    BiasedRw { p: S },
    /// `pmf(n) = kappa * n^{-c} * e^{-b n}`. Without `kappa` the law is
    /// normalised to the finite mass `finite_mass` (default 1).
    GeometricPrefactor {
        b: S,
        c: S,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa: Option<S>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        finite_mass: Option<S>,
    },
    /// `pmf(n) = kappa * n^{-c}`, `c > 1`.
    PowerLaw {
        c: S,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa: Option<S>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        finite_mass: Option<S>,
    },
    /// Explicit table `n -> P(E = n)`; `mass_inf` defaults to the missing mass.
    FiniteSupport {
        #[serde(with = "weight_map")]
        weights: BTreeMap<u64, S>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass_inf: Option<S>,
    },
    /// `pmf(step * k) = exp(log_scale + theta * step * k) * c_k`.
    Structured {
        kernel: Kernel<S>,
        step: u64,
        theta: S,
        log_scale: S,
        mass_inf: S,
    },
}

/// JSON object keys are strings; parse them back into lengths.
mod weight_map {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::Real;

    pub fn serialize<S: Real, Z: Serializer>(w: &BTreeMap<u64, S>, ser: Z) -> Result<Z::Ok, Z::Error> {
        let m: BTreeMap<String, S> = w.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        m.serialize(ser)
    }

    pub fn deserialize<'de, S: Real, D: Deserializer<'de>>(de: D) -> Result<BTreeMap<u64, S>, D::Error> {
        let m = BTreeMap::<String, S>::deserialize(de)?;
        m.into_iter()
            .map(|(k, v)| {
                k.trim()
                    .parse::<u64>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("excursion length {k:?} is not a positive integer")))
            })
            .collect()
    }
}
