use serde::{Deserialize, Serialize};

use crate::factorization::MinorLadder;
use crate::krein::KreinParameters;
use crate::types::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Krein,
    Factorization,
}

/// Per-window record of a Krein solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KreinStep {
    pub window: usize,
    /// Relative pivot of `C^τ` against `C^{τ-1}`.
    pub relative_pivot: f64,
    pub min_pivot: f64,
    /// `f^τ_0`, the divisor of the recovery step.
    pub leading_control: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    Krein {
        parameters: KreinParameters,
        steps: Vec<KreinStep>,
    },
    Factorization {
        ladder: MinorLadder,
        /// Relative pivot of each leading block, `k = 1..=T`.
        relative_pivots: Vec<f64>,
    },
}

/// Recovered `a_0`, `(a_1)^2..(a_{T-1})^2` and `b_1..b_{T-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub a0: Scalar,
    pub a_sq: Vec<Scalar>,
    pub b: Vec<Scalar>,
    pub diagnostics: Diagnostics,
    pub method: Method,
}

impl ReconstructionResult {
    /// Number of sites covered, `T`.
    pub fn depth(&self) -> usize {
        self.b.len() + 1
    }

    /// Largest discrepancy between two reconstructions: absolute for `a_0`
    /// and `b`, relative for the squared couplings.
    pub fn max_difference(&self, other: &Self) -> f64 {
        let a0 = (self.a0 - other.a0).norm();
        let b = self
            .b
            .iter()
            .zip(&other.b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        let a_sq = self
            .a_sq
            .iter()
            .zip(&other.a_sq)
            .map(|(x, y)| (x - y).norm() / y.norm().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        a0.max(b).max(a_sq)
    }
}
