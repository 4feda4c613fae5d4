//! Seeded random coefficient sets.
//!
//! All randomness flows from an explicit `u64` seed through ChaCha8, so the
//! same seed always yields the same coefficients.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{JacobiCoefficients, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// `|a_k| ∈ [0.9, 1.1]`.
    UnitModulus,
    /// `|a_k| ∈ [0.5, 2]`.
    Wide,
}

impl Profile {
    pub fn coupling_range(self) -> (f64, f64) {
        match self {
            Profile::UnitModulus => (0.9, 1.1),
            Profile::Wide => (0.5, 2.0),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::UnitModulus => "unit-modulus",
            Profile::Wide => "wide",
        })
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "unit-modulus" => Ok(Profile::UnitModulus),
            "wide" => Ok(Profile::Wide),
            other => Err(format!("unknown profile `{other}`")),
        }
    }
}

fn polar<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Scalar {
    let modulus = rng.gen_range(lo..=hi);
    let phase = rng.gen_range(0.0..TAU);
    Scalar::from_polar(modulus, phase)
}

/// Draws `depth` couplings with uniform modulus in the profile's range and
/// uniform phase, and `depth - 1` potentials with `|b_k| ≤ 1`.
pub fn random_coefficients_from<R: Rng>(
    rng: &mut R,
    depth: usize,
    profile: Profile,
) -> Result<JacobiCoefficients> {
    if depth < 1 {
        return Err(Error::InvalidHorizon { min: 1, found: 0 });
    }
    let (lo, hi) = profile.coupling_range();
    let a = (0..depth).map(|_| polar(rng, lo, hi)).collect();
    let b = (1..depth).map(|_| polar(rng, 0.0, 1.0)).collect();
    JacobiCoefficients::new(a, b)
}

pub fn random_coefficients(depth: usize, seed: u64, profile: Profile) -> Result<JacobiCoefficients> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_coefficients_from(&mut rng, depth, profile)
}
