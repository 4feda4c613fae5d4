//! Coefficient recovery from leading minors of the rotated connecting matrix.
//!
//! `C_T = V^τ V` with `V` the upper-triangular control factor, so the leading
//! blocks satisfy `det C_k = prod_{m=1}^{k} (a_0 ... a_{m-1})^2` and
//!
//! ```text
//! (a_k)^2 = det C_{k+1} det C_{k-1} / (det C_k)^2
//! b_k     = det C_{k,k+1} / det C_k - det C_{k-1,k} / det C_{k-1}
//! ```
//!
//! where `C_{k-1,k}` is the leading `(k-1) × (k-1)` block with its last column
//! replaced by `(c_{1,k}, ..., c_{k-1,k})`. Conventions: `det C_0 = det C_{-1} = 1`
//! and `det C_{0,1} = 0`.

use serde::{Deserialize, Serialize};

use crate::connecting::{connecting_from_response, rotate, ConnectingMatrix, Orientation};
use crate::error::{Error, Result};
use crate::linalg::{determinant, relative_pivot, CMatrix};
use crate::reconstruction::{Diagnostics, Method, ReconstructionResult};
use crate::types::{ResponseVector, Scalar, ToleranceConfig, ONE, ZERO};

/// Determinants of the leading blocks and of the column-modified blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorLadder {
    /// `det C_k` for `k = 0..=T`, with `det C_0 = 1`.
    pub det_c: Vec<Scalar>,
    /// `det C_{k-1,k}` for `k = 1..=T`, with `det C_{0,1} = 0`.
    pub det_c_mod: Vec<Scalar>,
    /// 2-norm of the row block `k` adds, `k = 1..=T`.
    pub row_norms: Vec<f64>,
}

impl MinorLadder {
    pub fn size(&self) -> usize {
        self.det_c.len() - 1
    }

    /// `det C_k`, including the virtual `det C_{-1} = 1` at `k = -1`.
    pub fn det(&self, k: isize) -> Scalar {
        if k < 0 {
            ONE
        } else {
            self.det_c[k as usize]
        }
    }

    /// `det C_{k-1,k}` for `k >= 0`; the virtual `det C_{-1,0}` is 0.
    pub fn det_mod(&self, k: usize) -> Scalar {
        if k == 0 {
            ZERO
        } else {
            self.det_c_mod[k - 1]
        }
    }

    /// Relative pivot of block `k >= 1`; `None` past an exactly singular block.
    pub fn relative(&self, k: usize) -> Option<f64> {
        relative_pivot(self.det_c[k], self.det_c[k - 1], self.row_norms[k - 1])
    }

    /// Smallest `k >= 1` whose block is singular at `threshold`.
    pub fn first_singular(&self, threshold: f64) -> Option<usize> {
        (1..=self.size()).find(|&k| !self.relative(k).is_some_and(|p| p > threshold))
    }
}

/// Builds the ladder of a rotated connecting matrix, one pivoted elimination
/// per block. Zero determinants are recorded, not rejected.
pub fn minor_ladder(c: &ConnectingMatrix, _tol: &ToleranceConfig) -> Result<MinorLadder> {
    c.expect_orientation(Orientation::Rotated)?;
    let size = c.size();
    let entries = c.entries();
    let mut det_c = vec![ONE];
    let mut row_norms = Vec::with_capacity(size);
    let mut det_c_mod = Vec::with_capacity(size);
    for k in 1..=size {
        let block = c.leading_block(k);
        det_c.push(determinant(&block));
        row_norms.push(block.row(k - 1).norm());
        det_c_mod.push(if k == 1 {
            ZERO
        } else {
            let mut modified: CMatrix = c.leading_block(k - 1);
            for i in 0..k - 1 {
                modified[(i, k - 2)] = entries[(i, k - 1)];
            }
            determinant(&modified)
        });
    }
    Ok(MinorLadder {
        det_c,
        det_c_mod,
        row_norms,
    })
}

/// Recovers `a_0`, `(a_k)^2` and `b_k`, `k = 1..depth`, from the minor ladder.
pub fn reconstruct_factorization(
    r: &ResponseVector,
    depth: usize,
    tol: &ToleranceConfig,
) -> Result<ReconstructionResult> {
    r.require_window(depth)?;
    let a0 = r.a0();
    if a0 == ZERO {
        return Err(Error::ZeroLeadingEntry);
    }
    let rotated = rotate(&connecting_from_response(r, depth)?);
    let ladder = minor_ladder(&rotated, tol)?;
    if let Some(k) = ladder.first_singular(tol.singular_threshold) {
        return Err(Error::SingularMinor(k));
    }

    let mut a_sq = Vec::with_capacity(depth - 1);
    let mut b = Vec::with_capacity(depth - 1);
    for k in 1..depth {
        let ki = k as isize;
        let dk = ladder.det(ki);
        a_sq.push(ladder.det(ki + 1) * ladder.det(ki - 1) / (dk * dk));
        b.push(ladder.det_mod(k + 1) / dk - ladder.det_mod(k) / ladder.det(ki - 1));
    }
    let relative_pivots = (1..=depth).filter_map(|k| ladder.relative(k)).collect();

    Ok(ReconstructionResult {
        a0,
        a_sq,
        b,
        diagnostics: Diagnostics::Factorization {
            ladder,
            relative_pivots,
        },
        method: Method::Factorization,
    })
}
