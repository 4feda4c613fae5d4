//! Coefficient recovery from Krein equations on nested windows.
//!
//! For a seed `(α, β)` let `y` solve `a_k y_{k+1} + a_{k-1} y_{k-1} + b_k y_k = 0`
//! with `y_0 = α`, `y_1 = β`, and let `f^τ` be the control steering the wave to
//! `(y_1, ..., y_τ)` at time `τ`. Then `f^τ` solves
//!
//! ```text
//! C^τ f^τ = a_0 [β κ^τ - α (R^τ_#)^* κ^τ]
//! ```
//!
//! whose right-hand side is built from the response alone. Writing
//! `ỹ_n = f^n_0 = y_n / (a_0 ... a_{n-1})`, the two top entries of the snapshot
//! give, for `n = 2..=T`,
//!
//! ```text
//! b_{n-1}     = (ỹ_{n-1} - f^n_1) / f^n_0 - (b_1 + ... + b_{n-2})
//! (a_{n-1})^2 = -(ỹ_{n-2} + b_{n-1} ỹ_{n-1}) / f^n_0
//! ```
//!
//! The unknown products `a_0 ... a_{n-1}` cancel, so only squares appear.

use serde::{Deserialize, Serialize};

use crate::connecting::connecting_from_response;
use crate::error::{Error, Result};
use crate::linalg::{determinant, relative_pivot, solve, PivotedSolve};
use crate::reconstruction::{Diagnostics, KreinStep, Method, ReconstructionResult};
use crate::types::{BoundaryControl, ResponseVector, Scalar, ToleranceConfig, ONE, ZERO};

/// `κ^T` on `0..T`, from `κ_{t+1} + κ_{t-1} = 0`, `κ_T = 0`, `κ_{T-1} = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinWeights {
    kappa: Vec<Scalar>,
}

impl KreinWeights {
    pub fn values(&self) -> &[Scalar] {
        &self.kappa
    }
}

pub fn kappa(window: usize) -> Result<KreinWeights> {
    if window < 1 {
        return Err(Error::InvalidHorizon { min: 1, found: 0 });
    }
    // κ_{T} = 0 is kept while running the recursion, then dropped
    let mut kappa = vec![ZERO; window + 1];
    kappa[window - 1] = ONE;
    for t in (1..window).rev() {
        kappa[t - 1] = -kappa[t + 1];
    }
    kappa.truncate(window);
    Ok(KreinWeights { kappa })
}

/// Boundary values `(y_0, y_1) = (α, β)` of the seed solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KreinParameters {
    pub alpha: Scalar,
    pub beta: Scalar,
}

impl KreinParameters {
    pub fn new(alpha: Scalar, beta: Scalar) -> Result<Self> {
        if alpha == ZERO && beta == ZERO {
            return Err(Error::ZeroParameters);
        }
        Ok(Self { alpha, beta })
    }

    /// Seeds tried in order by [`reconstruct_krein_with_retry`].
    pub fn fallbacks() -> [Self; 3] {
        [
            Self::default(),
            Self { alpha: ONE, beta: ZERO },
            Self { alpha: ONE, beta: ONE },
        ]
    }
}

impl Default for KreinParameters {
    fn default() -> Self {
        Self {
            alpha: ZERO,
            beta: ONE,
        }
    }
}

/// `a_0 [β κ - α M^τ κ]` where `M[t][s] = r_{t-1-s}` for `t > s` (and zero
/// otherwise) is the response matrix on time indices `0..τ`.
pub fn krein_rhs(r: &ResponseVector, p: &KreinParameters, window: usize) -> Result<Vec<Scalar>> {
    r.require_window(window)?;
    let kappa = kappa(window)?;
    let kappa = kappa.values();
    let a0 = r.a0();
    Ok((0..window)
        .map(|s| {
            let adjoint: Scalar = (s + 1..window).map(|t| r.at(t - 1 - s) * kappa[t]).sum();
            a0 * (p.beta * kappa[s] - p.alpha * adjoint)
        })
        .collect())
}

struct WindowSolve {
    solve: PivotedSolve,
    relative_pivot: f64,
}

// `previous` is `det C^{τ-1}`; the first row of `C^τ` is the one added to it
// (after rotation).
fn solve_window(
    r: &ResponseVector,
    p: &KreinParameters,
    window: usize,
    previous: Scalar,
    tol: &ToleranceConfig,
) -> Result<WindowSolve> {
    let rhs = krein_rhs(r, p, window)?;
    let c = connecting_from_response(r, window)?;
    let singular = Error::SingularConnecting(window);
    let solve = solve(c.entries(), &rhs).ok_or(singular.clone())?;
    let pivot = relative_pivot(solve.determinant, previous, c.entries().row(0).norm())
        .filter(|&p| p > tol.singular_threshold)
        .ok_or(singular)?;
    Ok(WindowSolve {
        solve,
        relative_pivot: pivot,
    })
}

/// `f^τ` solving the Krein equation by pivoted elimination.
pub fn krein_control(
    r: &ResponseVector,
    p: &KreinParameters,
    window: usize,
    tol: &ToleranceConfig,
) -> Result<BoundaryControl> {
    r.require_window(window)?;
    let previous = match window {
        0 | 1 => ONE,
        w => determinant(connecting_from_response(r, w - 1)?.entries()),
    };
    BoundaryControl::new(solve_window(r, p, window, previous, tol)?.solve.solution)
}

/// Runs the recovery for windows `1..=depth` with a single seed.
pub fn reconstruct_krein(
    r: &ResponseVector,
    depth: usize,
    p: &KreinParameters,
    tol: &ToleranceConfig,
) -> Result<ReconstructionResult> {
    r.require_window(depth)?;
    let a0 = r.a0();
    if a0 == ZERO {
        return Err(Error::ZeroLeadingEntry);
    }

    let mut steps = Vec::with_capacity(depth);
    let mut b: Vec<Scalar> = Vec::with_capacity(depth - 1);
    let mut a_sq = Vec::with_capacity(depth - 1);
    // ỹ_n = f^n_0, seeded by ỹ_0 = α and ỹ_1 = β / a_0
    let mut scaled: Vec<Scalar> = vec![p.alpha, p.beta / a0];
    let mut b_sum = ZERO;
    let mut previous = ONE;

    for window in 1..=depth {
        let WindowSolve {
            solve,
            relative_pivot,
        } = solve_window(r, p, window, previous, tol)?;
        previous = solve.determinant;
        let f = &solve.solution;
        steps.push(KreinStep {
            window,
            relative_pivot,
            min_pivot: solve.min_pivot,
            leading_control: f[0],
        });
        if window == 1 {
            continue;
        }
        let n = window;
        let scale = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(f[0].norm() > tol.singular_threshold * scale) {
            return Err(Error::DegenerateTrajectory(n));
        }
        let b_next = (scaled[n - 1] - f[1]) / f[0] - b_sum;
        let a_next_sq = -(scaled[n - 2] + b_next * scaled[n - 1]) / f[0];
        b_sum += b_next;
        b.push(b_next);
        a_sq.push(a_next_sq);
        scaled.push(f[0]);
    }

    Ok(ReconstructionResult {
        a0,
        a_sq,
        b,
        diagnostics: Diagnostics::Krein {
            parameters: *p,
            steps,
        },
        method: Method::Krein,
    })
}

/// [`reconstruct_krein`] with the seeds `(0,1)`, `(1,0)`, `(1,1)` tried in turn
/// while the trajectory degenerates.
pub fn reconstruct_krein_with_retry(
    r: &ResponseVector,
    depth: usize,
    tol: &ToleranceConfig,
) -> Result<ReconstructionResult> {
    let mut last = None;
    for p in KreinParameters::fallbacks() {
        match reconstruct_krein(r, depth, &p, tol) {
            Err(e @ Error::DegenerateTrajectory(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one seed is tried"))
}
