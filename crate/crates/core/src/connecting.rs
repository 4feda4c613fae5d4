//! The connecting operator `C^T = W^τ W` and its rotated form `C_T = J C^T J`.
//!
//! `C^T` pairs waves of the system with waves of its conjugate companion. It
//! is determined by the response vector alone:
//!
//! ```text
//! C^T[i][j] = a_0 * sum_{k=0}^{T - max(i,j)} r_{|i-j| + 2k},   a_0 = r_0,   1 <= i, j <= T
//! ```
//!
//! The Krein method consumes `C^T`, the factorization method consumes `C_T`;
//! the orientation is carried as an explicit tag.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::control_matrix;
use crate::linalg::CMatrix;
use crate::types::{JacobiCoefficients, ResponseVector, Scalar, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `C^T`, entry `(T, T)` is `a_0 r_0`.
    Unrotated,
    /// `C_T`, entry `(1, 1)` is `a_0 r_0`.
    Rotated,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Unrotated => Orientation::Rotated,
            Orientation::Rotated => Orientation::Unrotated,
        }
    }
}

/// A complex symmetric `T × T` connecting matrix with its orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectingMatrix {
    entries: CMatrix,
    orientation: Orientation,
}

impl ConnectingMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// Leading `k × k` block.
    pub fn leading_block(&self, k: usize) -> CMatrix {
        self.entries.view((0, 0), (k, k)).into_owned()
    }

    pub fn expect_orientation(&self, expected: Orientation) -> Result<()> {
        if self.orientation == expected {
            Ok(())
        } else {
            Err(Error::WrongOrientation {
                expected,
                found: self.orientation,
            })
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries == self.entries.transpose()
    }
}

/// Builds `C^T` (unrotated) from the first `2T - 1` response entries.
pub fn connecting_from_response(r: &ResponseVector, size: usize) -> Result<ConnectingMatrix> {
    r.require_window(size)?;
    let a0 = r.a0();
    let mut entries = CMatrix::from_element(size, size, ZERO);
    for i in 1..=size {
        for j in i..=size {
            let lag = j - i;
            let sum: Scalar = (0..=size - j).map(|k| r.at(lag + 2 * k)).sum();
            let value = a0 * sum;
            entries[(i - 1, j - 1)] = value;
            entries[(j - 1, i - 1)] = value;
        }
    }
    Ok(ConnectingMatrix {
        entries,
        orientation: Orientation::Unrotated,
    })
}

/// Switches orientation: `entries'[i][j] = entries[T+1-j][T+1-i]`.
pub fn rotate(c: &ConnectingMatrix) -> ConnectingMatrix {
    let size = c.size();
    ConnectingMatrix {
        entries: CMatrix::from_fn(size, size, |i, j| c.entries[(size - 1 - j, size - 1 - i)]),
        orientation: c.orientation.flipped(),
    }
}

/// `W^τ W` from the control matrix of the coefficients; equals
/// [`connecting_from_response`] on the response of the same system.
///
/// The pairing with the conjugate companion collapses to a plain transpose
/// because `W_# = conj(W)`.
pub fn connecting_oracle(c: &JacobiCoefficients, size: usize) -> Result<ConnectingMatrix> {
    let w = control_matrix(c, size)?.operator();
    let product = w.transpose() * &w;
    // symmetrize bitwise: the two triangles differ only by summation order
    let entries = CMatrix::from_fn(size, size, |i, j| product[(i.min(j), i.max(j))]);
    Ok(ConnectingMatrix {
        entries,
        orientation: Orientation::Unrotated,
    })
}
