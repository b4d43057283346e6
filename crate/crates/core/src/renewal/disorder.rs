use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::Real;

/// Stream words consumed per site (two `u64` draws = four 32-bit words).
const WORDS_PER_SITE: u128 = 4;

/// One realisation `V_1..V_N` of i.i.d. centred Gaussian site disorder.
///
/// Site `i` is a pure function of `(seed, i)`: its two uniforms are the words
/// at a fixed offset of the ChaCha8 stream keyed by `seed`, turned into a
/// normal by Box–Muller. Fields can therefore be extended or sampled out of
/// order without changing any value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "S: Real")]
pub struct DisorderField<S: Real> {
    pub seed: u64,
    pub sigma: S,
    /// `values[i - 1] = V_i`.
    pub values: Vec<S>,
}

impl<S: Real> DisorderField<S> {
    /// Samples `V_1..V_n` with standard deviation `sigma`.
    pub fn sample(seed: u64, n: usize, sigma: S) -> Self {
        let values = if sigma == S::zero() {
            vec![S::zero(); n]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| sigma * S::lit(box_muller(&mut rng))).collect()
        };
        DisorderField { seed, sigma, values }
    }

    /// The all-zero field (deterministic system).
    pub fn zeros(n: usize) -> Self {
        DisorderField {
            seed: 0,
            sigma: S::zero(),
            values: vec![S::zero(); n],
        }
    }

    /// Wraps explicit values; `sigma` is recorded as NaN (unknown).
    pub fn from_values(values: Vec<S>) -> Self {
        DisorderField {
            seed: 0,
            sigma: S::nan(),
            values,
        }
    }

    /// `V_i` for `i >= 1` computed directly from the seed.
    pub fn site(seed: u64, i: usize, sigma: S) -> S {
        assert!(i >= 1, "sites are numbered from 1");
        if sigma == S::zero() {
            return S::zero();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_word_pos(WORDS_PER_SITE * (i as u128 - 1));
        sigma * S::lit(box_muller(&mut rng))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `V_i`, 1-based.
    #[inline]
    pub fn get(&self, i: usize) -> S {
        self.values[i - 1]
    }

    /// The field `V - s`, used with `u + s` for translation checks.
    pub fn shifted(&self, s: S) -> Self {
        DisorderField {
            seed: self.seed,
            sigma: self.sigma,
            values: self.values.iter().map(|&v| v - s).collect(),
        }
    }
}

/// Seed of replica `index` derived from a master seed (SplitMix64 finaliser
/// applied to the pair).
pub fn replica_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn box_muller(rng: &mut ChaCha8Rng) -> f64 {
    let scale = 1.0 / (1u64 << 53) as f64;
    // u1 in (0, 1], u2 in [0, 1)
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * scale;
    let u2 = (rng.next_u64() >> 11) as f64 * scale;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
