//! Dense complex helpers on top of `nalgebra`'s partially pivoted LU.

use nalgebra::DMatrix;

use crate::types::{Scalar, ONE};

pub type CMatrix = DMatrix<Scalar>;

/// Determinant by partially pivoted elimination; the empty determinant is 1.
pub fn determinant(m: &CMatrix) -> Scalar {
    if m.nrows() == 0 {
        return ONE;
    }
    m.clone().lu().determinant()
}

/// `|det_k / det_{k-1}|` over the 2-norm of the row that block `k` adds to
/// block `k - 1`. Unlike `|det|` against its Hadamard bound this stays of
/// order one for well-posed nested blocks whose entries grow quickly.
/// `None` when the smaller block is exactly singular.
pub fn relative_pivot(det: Scalar, previous: Scalar, row_norm: f64) -> Option<f64> {
    if previous == Scalar::new(0.0, 0.0) {
        return None;
    }
    if row_norm == 0.0 {
        return Some(0.0);
    }
    Some((det / previous).norm() / row_norm)
}

/// Outcome of a pivoted solve.
#[derive(Debug, Clone)]
pub struct PivotedSolve {
    pub solution: Vec<Scalar>,
    pub determinant: Scalar,
    /// Smallest `|u_kk|` of the LU factor.
    pub min_pivot: f64,
}

/// Solves `m x = rhs` by partially pivoted elimination; `None` when the
/// matrix is exactly singular.
pub fn solve(m: &CMatrix, rhs: &[Scalar]) -> Option<PivotedSolve> {
    let lu = m.clone().lu();
    let determinant = lu.determinant();
    let min_pivot = lu.u().diagonal().iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let b = nalgebra::DVector::from_column_slice(rhs);
    let x = lu.solve(&b)?;
    Some(PivotedSolve {
        solution: x.iter().copied().collect(),
        determinant,
        min_pivot,
    })
}

/// Largest entry modulus of `a - b` divided by the largest entry modulus of `b`.
pub fn max_relative_difference(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let diff = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
