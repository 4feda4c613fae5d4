//! Deciding whether a candidate vector is the response vector of some system.
//!
//! A vector `r_0..r_{2T-2}` with `r_0 != 0` is a response vector exactly when
//! every leading block of the rotated connecting matrix `C_T` is invertible.
//! Sufficiency is checked constructively: reconstruct, pick any square roots,
//! simulate, compare.

use serde::{Deserialize, Serialize};

use crate::connecting::{connecting_from_response, rotate};
use crate::error::{Error, Result};
use crate::factorization::{minor_ladder, reconstruct_factorization};
use crate::forward::response_vector;
use crate::reconstruction::ReconstructionResult;
use crate::types::{JacobiCoefficients, ResponseVector, Scalar, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub verdict: Verdict,
    /// `|det C_k|` for block sizes `k = 1..=T`.
    pub block_determinants: Vec<f64>,
    /// `|det C_k / det C_{k-1}|` over the norm of the row block `k` adds;
    /// the quantity compared against the threshold, so it doubles as the
    /// margin. `None` past an exactly singular block.
    pub relative_pivots: Vec<Option<f64>>,
    pub first_failure: Option<usize>,
    pub threshold_used: f64,
}

/// Tests every leading block of `C_T` for invertibility at the relative
/// threshold `tol.singular_threshold`.
pub fn characterize(r: &[Scalar], tol: &ToleranceConfig) -> Result<CharacterizationReport> {
    let r = ResponseVector::new(r.to_vec())?;
    let scale = r.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(r.a0().norm() > tol.singular_threshold * scale) {
        return Err(Error::ZeroLeadingEntry);
    }
    let window = r.window();
    let rotated = rotate(&connecting_from_response(&r, window)?);
    let ladder = minor_ladder(&rotated, tol)?;
    let first_failure = ladder.first_singular(tol.singular_threshold);
    Ok(CharacterizationReport {
        verdict: if first_failure.is_none() {
            Verdict::Valid
        } else {
            Verdict::Invalid
        },
        block_determinants: ladder.det_c[1..].iter().map(|z| z.norm()).collect(),
        relative_pivots: (1..=window).map(|k| ladder.relative(k)).collect(),
        first_failure,
        threshold_used: tol.singular_threshold,
    })
}

/// Principal square root with the imaginary part made non-negative on the
/// branch cut.
pub fn principal_sqrt(z: Scalar) -> Scalar {
    let root = z.sqrt();
    if root.re == 0.0 && root.im < 0.0 {
        -root
    } else {
        root
    }
}

/// Coefficients realizing a reconstruction; `signs[k-1]` picks the root of
/// `(a_k)^2` (true for the principal root, false for its negative).
pub fn materialize(result: &ReconstructionResult, signs: &[bool]) -> Result<JacobiCoefficients> {
    let mut a = Vec::with_capacity(result.depth());
    a.push(result.a0);
    for (k, &sq) in result.a_sq.iter().enumerate() {
        let root = principal_sqrt(sq);
        a.push(if signs.get(k).copied().unwrap_or(true) {
            root
        } else {
            -root
        });
    }
    JacobiCoefficients::new(a, result.b.clone())
}

/// Reconstructs with the factorization method, resimulates with principal
/// roots and returns `max_k |r_k - r_k^new|`.
pub fn verify_roundtrip(r: &[Scalar], tol: &ToleranceConfig) -> Result<f64> {
    verify_roundtrip_with_signs(r, &[], tol)
}

/// [`verify_roundtrip`] with an explicit sign choice for each root.
pub fn verify_roundtrip_with_signs(
    r: &[Scalar],
    signs: &[bool],
    tol: &ToleranceConfig,
) -> Result<f64> {
    let report = characterize(r, tol)?;
    if let Some(k) = report.first_failure {
        return Err(Error::SingularMinor(k));
    }
    let r = ResponseVector::new(r.to_vec())?;
    let window = r.window();
    let result = reconstruct_factorization(&r, window, tol)?;
    let coefficients = materialize(&result, signs)?;
    let regenerated = response_vector(&coefficients, window)?;
    Ok(r.values()
        .iter()
        .zip(regenerated.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}
