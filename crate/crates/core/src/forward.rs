//! Forward dynamics of the boundary-controlled system
//!
//! ```text
//! u[n][t+1] + u[n][t-1] - a_n u[n+1][t] - a_{n-1} u[n-1][t] - b_n u[n][t] = 0,   n >= 1
//! u[n][-1] = u[n][0] = 0,   u[0][t] = f_t
//! ```
//!
//! Waves advance one site per step, so `u[n][t] = 0` for `n > t` and only the
//! triangle `n <= t` is stored.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::types::{
    validate_coefficients, BoundaryControl, JacobiCoefficients, ResponseVector, Scalar,
    ToleranceConfig, ONE, ZERO,
};

/// Solution `u[n][t]` on `0 <= n <= t <= T`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    horizon: usize,
    // rows[n][t - n]
    rows: Vec<Vec<Scalar>>,
}

impl WaveField {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `u[n][t]`, zero outside the stored triangle.
    #[inline]
    pub fn get(&self, n: usize, t: usize) -> Scalar {
        if n > t || t > self.horizon {
            ZERO
        } else {
            self.rows[n][t - n]
        }
    }

    /// The snapshot `(u[1][t], ..., u[t][t])`.
    pub fn snapshot(&self, t: usize) -> Vec<Scalar> {
        (1..=t).map(|n| self.get(n, t)).collect()
    }

    /// `(n, t, u[n][t])` over the stored triangle, ordered by `n` then `t`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Scalar)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(n, row)| row.iter().enumerate().map(move |(dt, &u)| (n, n + dt, u)))
    }
}

/// Runs the dynamics to time `horizon`.
///
/// Coefficients beyond the stored depth are the free values `a_k = 1`,
/// `b_k = 0`; the control is zero beyond its length.
pub fn simulate(
    c: &JacobiCoefficients,
    f: &BoundaryControl,
    horizon: usize,
) -> Result<WaveField> {
    if horizon < 1 {
        return Err(Error::InvalidHorizon {
            min: 1,
            found: horizon,
        });
    }
    let mut rows: Vec<Vec<Scalar>> = (0..=horizon).map(|n| vec![ZERO; horizon + 1 - n]).collect();
    for (t, u) in rows[0].iter_mut().enumerate() {
        *u = f.at(t);
    }
    // u at (n, t) with the triangle convention
    let at = |rows: &Vec<Vec<Scalar>>, n: usize, t: isize| -> Scalar {
        if t < n as isize {
            ZERO
        } else {
            rows[n][t as usize - n]
        }
    };
    for t in 0..horizon {
        let ti = t as isize;
        for n in 1..=t + 1 {
            let next = c.a(n) * at(&rows, n + 1, ti)
                + c.a(n - 1) * at(&rows, n - 1, ti)
                + c.b(n) * at(&rows, n, ti)
                - at(&rows, n, ti - 1);
            rows[n][t + 1 - n] = next;
        }
    }
    Ok(WaveField { horizon, rows })
}

/// `r_t = u^δ[1][t+1]` for `t = 0..=2T-2`.
pub fn response_vector(c: &JacobiCoefficients, window: usize) -> Result<ResponseVector> {
    if window < 1 {
        return Err(Error::InvalidHorizon {
            min: 1,
            found: window,
        });
    }
    let horizon = 2 * window - 1;
    let u = simulate(c, &BoundaryControl::delta(horizon), horizon)?;
    ResponseVector::new((1..=horizon).map(|t| u.get(1, t)).collect())
}

/// `(R f)_t = sum_{s < t} r_{t-1-s} f_s` for `t = 1..=T`, `T = f.len()`.
pub fn apply_response(r: &ResponseVector, f: &BoundaryControl) -> Result<Vec<Scalar>> {
    let horizon = f.len();
    r.require_window(horizon)?;
    Ok((1..=horizon)
        .map(|t| (0..t).map(|s| r.at(t - 1 - s) * f.at(s)).sum())
        .collect())
}

/// Kernel `w[n][s]`, `1 <= n <= s <= T-1`, of the representation
///
/// ```text
/// u[n][t] = a_0 ... a_{n-1} f_{t-n} + sum_{s=n}^{t-1} w[n][s] f_{t-s-1}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct GoursatKernel {
    horizon: usize,
    // rows[n - 1][s - n]
    rows: Vec<Vec<Scalar>>,
}

impl GoursatKernel {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `w[n][s]`; zero for `n == 0`, `s < n`, or outside the stored range.
    #[inline]
    pub fn get(&self, n: usize, s: usize) -> Scalar {
        if n == 0 || s < n || s + 1 > self.horizon {
            ZERO
        } else {
            self.rows[n - 1][s - n]
        }
    }
}

/// Solves the characteristic (Goursat) recursion for `w` up to `s = T-1`:
///
/// ```text
/// w[n][n]   = b_n P_n + a_{n-1} w[n-1][n-1]
/// w[n][s+1] = a_n w[n+1][s] + a_{n-1} w[n-1][s] + b_n w[n][s] - w[n][s-1]
///             - δ_{s,n} (1 - a_n^2) P_n,                                  s >= n
/// ```
///
/// with `P_n = a_0 ... a_{n-1}` and `w[0][.] = 0`.
pub fn goursat_kernel(c: &JacobiCoefficients, horizon: usize) -> Result<GoursatKernel> {
    if horizon < 1 {
        return Err(Error::InvalidHorizon {
            min: 1,
            found: horizon,
        });
    }
    let c = validate_coefficients(c.clone(), &ToleranceConfig::default())?;
    let last = horizon - 1;
    let mut kernel = GoursatKernel {
        horizon,
        rows: (1..=last).map(|n| vec![ZERO; horizon - n]).collect(),
    };
    let products: Vec<Scalar> = (0..=horizon).map(|n| c.coupling_product(n)).collect();

    for s in 1..=last {
        for n in 1..s {
            let source = if s - 1 == n {
                (ONE - c.a(n) * c.a(n)) * products[n]
            } else {
                ZERO
            };
            let below = if s >= 2 { kernel.get(n, s - 2) } else { ZERO };
            kernel.rows[n - 1][s - n] = c.a(n) * kernel.get(n + 1, s - 1)
                + c.a(n - 1) * kernel.get(n - 1, s - 1)
                + c.b(n) * kernel.get(n, s - 1)
                - below
                - source;
        }
        kernel.rows[s - 1][0] = c.b(s) * products[s] + c.a(s - 1) * kernel.get(s - 1, s - 1);
    }
    Ok(kernel)
}

/// Upper-triangular factor `V` of the control operator `W = V J`, where
/// `(J f)_n = f_{T-1-n}` reverses time.
///
/// `V[k][k] = a_0 ... a_{k-1}` and `V[k][m] = w[k][m-1]` for `m > k`
/// (1-based indices).
#[derive(Debug, Clone, PartialEq)]
pub struct ControlMatrix {
    v: CMatrix,
}

impl ControlMatrix {
    pub fn size(&self) -> usize {
        self.v.nrows()
    }

    /// `V`, acting on the time-reversed control.
    pub fn upper(&self) -> &CMatrix {
        &self.v
    }

    /// `W = V J` as a dense matrix acting on `(f_0, ..., f_{T-1})`.
    pub fn operator(&self) -> CMatrix {
        let size = self.size();
        DMatrix::from_fn(size, size, |i, j| self.v[(i, size - 1 - j)])
    }

    /// `W f = (u[1][T], ..., u[T][T])`.
    pub fn apply(&self, f: &BoundaryControl) -> Vec<Scalar> {
        let size = self.size();
        let reversed = nalgebra::DVector::from_fn(size, |n, _| f.at(size - 1 - n));
        (&self.v * reversed).iter().copied().collect()
    }
}

pub fn control_matrix(c: &JacobiCoefficients, size: usize) -> Result<ControlMatrix> {
    let w = goursat_kernel(c, size)?;
    let v = DMatrix::from_fn(size, size, |i, j| {
        let (k, m) = (i + 1, j + 1);
        match m.cmp(&k) {
            std::cmp::Ordering::Less => ZERO,
            std::cmp::Ordering::Equal => c.coupling_product(k),
            std::cmp::Ordering::Greater => w.get(k, m - 1),
        }
    });
    Ok(ControlMatrix { v })
}

/// The unique control with `(W f)_k = y_k`, `k = 1..=T`, by back-substitution.
pub fn control_solve(c: &JacobiCoefficients, y: &[Scalar]) -> Result<BoundaryControl> {
    let size = y.len();
    if size < 1 {
        return Err(Error::InvalidHorizon { min: 1, found: 0 });
    }
    let m = control_matrix(c, size)?;
    let rhs = nalgebra::DVector::from_column_slice(y);
    // diagonal entries are products of validated couplings, never zero
    let reversed = m
        .upper()
        .solve_upper_triangular(&rhs)
        .ok_or(Error::ZeroCoupling(0))?;
    BoundaryControl::new((0..size).map(|n| reversed[size - 1 - n]).collect())
}

/// Coefficients of the companion system driven by the conjugate matrix.
pub fn conjugate_system(c: &JacobiCoefficients) -> JacobiCoefficients {
    JacobiCoefficients::new(
        c.a_values().iter().map(|z| z.conj()).collect(),
        c.b_values().iter().map(|z| z.conj()).collect(),
    )
    .expect("conjugation preserves structure")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn coeffs(a: &[Scalar], b: &[Scalar]) -> JacobiCoefficients {
        JacobiCoefficients::new(a.to_vec(), b.to_vec()).unwrap()
    }

    const I: Scalar = Scalar::new(0.0, 1.0);

    #[test]
    fn free_system_translates_the_control() {
        let f = BoundaryControl::new(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.25, -1.0)]).unwrap();
        let u = simulate(&JacobiCoefficients::free(1).unwrap(), &f, 6).unwrap();
        for t in 0..=6 {
            for n in 0..=6 {
                let expected = if t >= n { f.at(t - n) } else { ZERO };
                assert_eq!(u.get(n, t), expected, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn horizon_zero_is_rejected() {
        let err = simulate(&JacobiCoefficients::free(1).unwrap(), &BoundaryControl::delta(1), 0);
        assert_eq!(err.unwrap_err(), Error::InvalidHorizon { min: 1, found: 0 });
    }

    #[test]
    fn two_site_delta_wave() {
        let sys = coeffs(&[ONE, c(2.0, 0.0)], &[I]);
        let u = simulate(&sys, &BoundaryControl::delta(3), 3).unwrap();
        assert_eq!(u.get(1, 1), ONE);
        assert_eq!(u.get(1, 2), I);
        assert_eq!(u.get(2, 2), c(2.0, 0.0));
        assert_eq!(u.get(3, 2), ZERO);
        assert_eq!(u.get(2, 0), ZERO);
    }

    #[test]
    fn potential_at_second_site() {
        let sys = coeffs(&[ONE, ONE, ONE], &[ZERO, ONE]);
        let u = simulate(&sys, &BoundaryControl::delta(5), 5).unwrap();
        assert_eq!(u.get(1, 4), ONE);
        assert_eq!(u.get(1, 5), ONE);
    }

    #[test]
    fn response_examples() {
        let r = response_vector(&JacobiCoefficients::free(3).unwrap(), 3).unwrap();
        assert_eq!(r.values(), &[ONE, ZERO, ZERO, ZERO, ZERO]);

        let r = response_vector(&coeffs(&[ONE, c(2.0, 0.0)], &[I]), 2).unwrap();
        assert_eq!(r.values(), &[ONE, I, c(2.0, 0.0)]);

        let r = response_vector(&coeffs(&[ONE, ONE, ONE], &[ZERO, ONE]), 3).unwrap();
        assert_eq!(r.values(), &[ONE, ZERO, ZERO, ONE, ONE]);
    }

    #[test]
    fn convolution_examples() {
        let r = ResponseVector::new(vec![ONE, ZERO, ZERO]).unwrap();
        let out = apply_response(&r, &BoundaryControl::delta(2)).unwrap();
        assert_eq!(out, vec![ONE, ZERO]);

        let r = ResponseVector::new(vec![ONE, I, c(2.0, 0.0)]).unwrap();
        let out = apply_response(&r, &BoundaryControl::new(vec![ONE, ONE]).unwrap()).unwrap();
        assert_eq!(out, vec![ONE, ONE + I]);

        let short = ResponseVector::new(vec![ONE]).unwrap();
        let err = apply_response(&short, &BoundaryControl::delta(2)).unwrap_err();
        assert_eq!(err, Error::WindowTooShort { needed: 2, available: 1 });
    }

    #[test]
    fn goursat_examples() {
        let w = goursat_kernel(&JacobiCoefficients::free(5).unwrap(), 5).unwrap();
        for n in 1..5 {
            for s in n..5 {
                assert_eq!(w.get(n, s), ZERO);
            }
        }
        let w = goursat_kernel(&coeffs(&[ONE, c(2.0, 0.0)], &[I]), 2).unwrap();
        assert_eq!(w.get(1, 1), I);

        let w = goursat_kernel(&coeffs(&[ONE, ONE, ONE], &[ONE, ONE]), 3).unwrap();
        assert_eq!(w.get(2, 2), c(2.0, 0.0));
    }

    #[test]
    fn control_matrix_examples() {
        let sys = coeffs(&[ONE, c(2.0, 0.0)], &[I]);
        let m = control_matrix(&sys, 2).unwrap();
        let f0 = c(0.3, -1.0);
        let f1 = c(2.0, 0.5);
        let wf = m.apply(&BoundaryControl::new(vec![f0, f1]).unwrap());
        assert_eq!(wf, vec![f1 + I * f0, c(2.0, 0.0) * f0]);

        let m = control_matrix(&JacobiCoefficients::free(3).unwrap(), 3).unwrap();
        let f = BoundaryControl::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_eq!(m.apply(&f), vec![c(3.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn control_matrix_determinant_is_product_of_diagonal() {
        let sys = coeffs(&[c(0.5, 0.5), c(2.0, -1.0), c(0.0, 1.5)], &[I, c(1.0, 1.0)]);
        let m = control_matrix(&sys, 3).unwrap();
        let expected: Scalar = (1..=3).map(|k| sys.coupling_product(k)).product();
        let det = crate::linalg::determinant(m.upper());
        assert!((det - expected).norm() < 1e-13 * expected.norm());
    }

    #[test]
    fn control_solve_examples() {
        let y = [ONE, ZERO, ZERO];
        let f = control_solve(&JacobiCoefficients::free(3).unwrap(), &y).unwrap();
        assert_eq!(f.values(), &[ZERO, ZERO, ONE]);

        let sys = coeffs(&[ONE, c(2.0, 0.0)], &[I]);
        let f = control_solve(&sys, &[ONE, c(0.0, -0.5)]).unwrap();
        assert!((f.at(0) - c(0.0, -0.25)).norm() < 1e-15);
        assert!((f.at(1) - c(0.75, 0.0)).norm() < 1e-15);
        let u = simulate(&sys, &f, 2).unwrap();
        assert!((u.get(1, 2) - ONE).norm() < 1e-15);
        assert!((u.get(2, 2) - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn control_solve_rejects_zero_coupling() {
        let sys = coeffs(&[ONE, ZERO], &[I]);
        assert_eq!(control_solve(&sys, &[ONE, ONE]).unwrap_err(), Error::ZeroCoupling(1));
    }

    #[test]
    fn conjugation_examples() {
        let sys = coeffs(&[ONE], &[]);
        assert_eq!(conjugate_system(&sys), sys);
        let sys = coeffs(&[I, c(2.0, 0.0)], &[c(1.0, 1.0)]);
        let conj = conjugate_system(&sys);
        assert_eq!(conj.a_values(), &[-I, c(2.0, 0.0)]);
        assert_eq!(conj.b_values(), &[c(1.0, -1.0)]);
    }
}
