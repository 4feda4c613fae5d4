//! Reference computations for the integration tests. Everything here works on
//! the full `(n, t)` grid straight from the recurrence and shares no code with
//! the library beyond the coefficient accessors.

#![allow(dead_code)]

use jacobi_inverse::{JacobiCoefficients, Scalar};
use nalgebra::DMatrix;

pub const ZERO: Scalar = Scalar::new(0.0, 0.0);
pub const ONE: Scalar = Scalar::new(1.0, 0.0);

pub fn coupling(a: &[Scalar], k: usize) -> Scalar {
    a.get(k).copied().unwrap_or(ONE)
}

pub fn potential(b: &[Scalar], n: usize) -> Scalar {
    if n == 0 {
        ZERO
    } else {
        b.get(n - 1).copied().unwrap_or(ZERO)
    }
}

/// `u[n][t]` for `0 <= n <= horizon + 1`, `0 <= t <= horizon`.
pub fn grid(c: &JacobiCoefficients, f: &[Scalar], horizon: usize) -> Vec<Vec<Scalar>> {
    let (a, b) = (c.a_values(), c.b_values());
    let rows = horizon + 2;
    let mut u = vec![vec![ZERO; horizon + 1]; rows + 1];
    for t in 0..=horizon {
        u[0][t] = f.get(t).copied().unwrap_or(ZERO);
    }
    for t in 0..horizon {
        for n in 1..rows {
            let before = if t == 0 { ZERO } else { u[n][t - 1] };
            u[n][t + 1] = coupling(a, n) * u[n + 1][t]
                + coupling(a, n - 1) * u[n - 1][t]
                + potential(b, n) * u[n][t]
                - before;
        }
    }
    u.truncate(rows);
    u
}

pub fn delta(len: usize) -> Vec<Scalar> {
    let mut f = vec![ZERO; len.max(1)];
    f[0] = ONE;
    f
}

/// `r_t = u^δ[1][t+1]`, `t = 0..2T-1`.
pub fn response(c: &JacobiCoefficients, window: usize) -> Vec<Scalar> {
    let horizon = 2 * window - 1;
    let u = grid(c, &delta(horizon + 1), horizon);
    (0..horizon).map(|t| u[1][t + 1]).collect()
}

/// Control operator `W^T` column by column: column `j` is the snapshot
/// `(u[1][T], ..., u[T][T])` produced by the unit control at time `j`.
pub fn control_operator(c: &JacobiCoefficients, size: usize) -> DMatrix<Scalar> {
    let mut w = DMatrix::from_element(size, size, ZERO);
    for j in 0..size {
        let mut f = vec![ZERO; size];
        f[j] = ONE;
        let u = grid(c, &f, size);
        for k in 1..=size {
            w[(k - 1, j)] = u[k][size];
        }
    }
    w
}

/// `(W^T)^τ W^T`, the connecting matrix computed from the coefficients.
pub fn connecting(c: &JacobiCoefficients, size: usize) -> DMatrix<Scalar> {
    let w = control_operator(c, size);
    w.transpose() * w
}

/// Solution of `a_k y_{k+1} + a_{k-1} y_{k-1} + b_k y_k = 0` with
/// `y_0 = alpha`, `y_1 = beta`, returned for `0..=len`.
pub fn stationary(c: &JacobiCoefficients, alpha: Scalar, beta: Scalar, len: usize) -> Vec<Scalar> {
    let (a, b) = (c.a_values(), c.b_values());
    let mut y = vec![alpha, beta];
    for k in 1..len {
        let next = -(coupling(a, k - 1) * y[k - 1] + potential(b, k) * y[k]) / coupling(a, k);
        y.push(next);
    }
    y.truncate(len + 1);
    y
}

/// Leading-block `|det|` over the block's product of row 2-norms.
pub fn hadamard_ratio(m: &DMatrix<Scalar>) -> f64 {
    let det = m.clone().lu().determinant().norm();
    let scale: f64 = m.row_iter().map(|row| row.norm()).product();
    det / scale
}

pub fn max_abs(values: &[Scalar]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(x: &[Scalar], y: &[Scalar]) -> f64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

pub mod strategy {
    use std::f64::consts::TAU;

    use jacobi_inverse::{BoundaryControl, JacobiCoefficients, Scalar};
    use proptest::prelude::*;

    pub fn polar(lo: f64, hi: f64) -> impl Strategy<Value = Scalar> {
        (lo..=hi, 0.0..TAU).prop_map(|(m, phase)| Scalar::from_polar(m, phase))
    }

    pub fn scalar() -> impl Strategy<Value = Scalar> {
        (-1.0..1.0, -1.0..1.0).prop_map(|(re, im)| Scalar::new(re, im))
    }

    /// Couplings with `|a_k| ∈ [0.5, 2]`, potentials with `|b_k| ≤ 1`.
    pub fn coefficients(depth: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = JacobiCoefficients> {
        depth.prop_flat_map(|d| {
            (
                prop::collection::vec(polar(0.5, 2.0), d),
                prop::collection::vec(polar(0.0, 1.0), d - 1),
            )
                .prop_map(|(a, b)| JacobiCoefficients::new(a, b).unwrap())
        })
    }

    pub fn control(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = BoundaryControl> {
        prop::collection::vec(scalar(), len).prop_map(|f| BoundaryControl::new(f).unwrap())
    }
}
