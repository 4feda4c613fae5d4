//! Value types shared by every stage of the pipeline.
//!
//! Index conventions are fixed crate-wide: time indices of controls and
//! responses start at 0, the space index `n = 0` is the boundary, and vectors
//! in the inner space are indexed `1..=T` (stored 0-based, so entry `k - 1`
//! holds component `k`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A complex scalar stored as a pair of `f64`.
pub type Scalar = Complex64;

pub(crate) const ZERO: Scalar = Scalar::new(0.0, 0.0);
pub(crate) const ONE: Scalar = Scalar::new(1.0, 0.0);

fn check_finite(values: &[Scalar], what: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Coefficients `a_0..a_{N-1}` and `b_1..b_{N-1}` of a complex Jacobi system.
///
/// `a_0` couples the boundary site to the first inner site. Beyond the stored
/// depth the accessors [`a`](Self::a) and [`b`](Self::b) return the free
/// values `a_k = 1`, `b_k = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoefficientsRepr", into = "CoefficientsRepr")]
pub struct JacobiCoefficients {
    a: Vec<Scalar>,
    b: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct CoefficientsRepr {
    depth: usize,
    a: Vec<Scalar>,
    b: Vec<Scalar>,
}

impl TryFrom<CoefficientsRepr> for JacobiCoefficients {
    type Error = Error;

    fn try_from(repr: CoefficientsRepr) -> Result<Self> {
        if repr.a.len() != repr.depth {
            return Err(Error::LengthMismatch {
                what: "a",
                expected: repr.depth,
                found: repr.a.len(),
            });
        }
        Self::new(repr.a, repr.b)
    }
}

impl From<JacobiCoefficients> for CoefficientsRepr {
    fn from(c: JacobiCoefficients) -> Self {
        CoefficientsRepr {
            depth: c.depth(),
            a: c.a,
            b: c.b,
        }
    }
}

impl JacobiCoefficients {
    /// Builds a coefficient set of depth `a.len()`; `b` must hold `b_1..b_{N-1}`.
    ///
    /// Only structural checks happen here. Use [`validate_coefficients`] to
    /// reject vanishing couplings.
    pub fn new(a: Vec<Scalar>, b: Vec<Scalar>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::LengthMismatch {
                what: "a",
                expected: 1,
                found: 0,
            });
        }
        if b.len() + 1 != a.len() {
            return Err(Error::LengthMismatch {
                what: "b",
                expected: a.len() - 1,
                found: b.len(),
            });
        }
        check_finite(&a, "a")?;
        check_finite(&b, "b")?;
        Ok(Self { a, b })
    }

    /// The free system `a_k = 1`, `b_k = 0` truncated to `depth` sites.
    pub fn free(depth: usize) -> Result<Self> {
        Self::new(vec![ONE; depth], vec![ZERO; depth.saturating_sub(1)])
    }

    pub fn depth(&self) -> usize {
        self.a.len()
    }

    pub fn a_values(&self) -> &[Scalar] {
        &self.a
    }

    /// `b_1..b_{N-1}`, stored 0-based.
    pub fn b_values(&self) -> &[Scalar] {
        &self.b
    }

    /// `a_k`, padded with 1 beyond the stored depth.
    #[inline]
    pub fn a(&self, k: usize) -> Scalar {
        self.a.get(k).copied().unwrap_or(ONE)
    }

    /// `b_n` for `n >= 1`, padded with 0 beyond the stored depth.
    #[inline]
    pub fn b(&self, n: usize) -> Scalar {
        debug_assert!(n >= 1, "b is indexed from 1");
        self.b.get(n - 1).copied().unwrap_or(ZERO)
    }

    /// `a_0 a_1 ... a_{n-1}`; the empty product is 1.
    pub fn coupling_product(&self, n: usize) -> Scalar {
        (0..n).map(|k| self.a(k)).product()
    }

    /// Extends or truncates to `depth` sites, padding with `a_k = 1`, `b_k = 0`.
    pub fn resized(&self, depth: usize) -> Result<Self> {
        let a = (0..depth).map(|k| self.a(k)).collect();
        let b = (1..depth).map(|n| self.b(n)).collect();
        Self::new(a, b)
    }

    /// Same system with the sign of `a_k` flipped.
    pub fn with_negated_coupling(&self, k: usize) -> Self {
        let mut out = self.clone();
        if let Some(a) = out.a.get_mut(k) {
            *a = -*a;
        }
        out
    }
}

/// Checks the coupling invariant `|a_k| > 0` relative to `max_k |a_k|`.
///
/// Returns the input unchanged when it holds, so the call is idempotent.
pub fn validate_coefficients(
    c: JacobiCoefficients,
    tol: &ToleranceConfig,
) -> Result<JacobiCoefficients> {
    let c = JacobiCoefficients::new(c.a, c.b)?;
    let scale = c.a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let cutoff = tol.singular_threshold * scale;
    if let Some(k) = c.a.iter().position(|z| z.norm() <= cutoff) {
        return Err(Error::ZeroCoupling(k));
    }
    Ok(c)
}

/// Boundary control `f_0..f_{T-1}` applied at site 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ControlRepr", into = "ControlRepr")]
pub struct BoundaryControl {
    f: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct ControlRepr {
    f: Vec<Scalar>,
}

impl TryFrom<ControlRepr> for BoundaryControl {
    type Error = Error;

    fn try_from(repr: ControlRepr) -> Result<Self> {
        Self::new(repr.f)
    }
}

impl From<BoundaryControl> for ControlRepr {
    fn from(c: BoundaryControl) -> Self {
        ControlRepr { f: c.f }
    }
}

impl BoundaryControl {
    pub fn new(f: Vec<Scalar>) -> Result<Self> {
        check_finite(&f, "f")?;
        Ok(Self { f })
    }

    /// `δ = (1, 0, ..., 0)` of length `len`.
    pub fn delta(len: usize) -> Self {
        let mut f = vec![ZERO; len];
        if let Some(first) = f.first_mut() {
            *first = ONE;
        }
        Self { f }
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `f_t`; the control is zero outside its window.
    #[inline]
    pub fn at(&self, t: usize) -> Scalar {
        self.f.get(t).copied().unwrap_or(ZERO)
    }

    pub fn values(&self) -> &[Scalar] {
        &self.f
    }

    pub fn into_values(self) -> Vec<Scalar> {
        self.f
    }
}

/// Response vector `r_0..r_{2T-2}`, the convolution kernel of the response
/// operator on a window of length `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ResponseRepr", into = "ResponseRepr")]
pub struct ResponseVector {
    r: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct ResponseRepr {
    window: usize,
    r: Vec<Scalar>,
}

impl TryFrom<ResponseRepr> for ResponseVector {
    type Error = Error;

    fn try_from(repr: ResponseRepr) -> Result<Self> {
        let v = Self::new(repr.r)?;
        if v.window() != repr.window {
            return Err(Error::LengthMismatch {
                what: "r",
                expected: 2 * repr.window.max(1) - 1,
                found: v.r.len(),
            });
        }
        Ok(v)
    }
}

impl From<ResponseVector> for ResponseRepr {
    fn from(v: ResponseVector) -> Self {
        ResponseRepr {
            window: v.window(),
            r: v.r,
        }
    }
}

impl ResponseVector {
    /// Accepts any finite vector of odd length.
    pub fn new(r: Vec<Scalar>) -> Result<Self> {
        if r.len().is_multiple_of(2) {
            return Err(Error::EvenLength(r.len()));
        }
        check_finite(&r, "r")?;
        Ok(Self { r })
    }

    /// `T` such that the vector holds `2T - 1` entries.
    pub fn window(&self) -> usize {
        self.r.len().div_ceil(2)
    }

    /// `a_0 = r_0`.
    pub fn a0(&self) -> Scalar {
        self.r[0]
    }

    pub fn values(&self) -> &[Scalar] {
        &self.r
    }

    #[inline]
    pub fn at(&self, k: usize) -> Scalar {
        self.r[k]
    }

    /// The leading `2 * window - 1` entries.
    pub fn truncated(&self, window: usize) -> Result<Self> {
        self.require_window(window)?;
        Ok(Self {
            r: self.r[..2 * window - 1].to_vec(),
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            r: self.r.iter().map(|z| z.conj()).collect(),
        }
    }

    pub(crate) fn require_window(&self, needed: usize) -> Result<()> {
        if needed == 0 {
            return Err(Error::InvalidHorizon { min: 1, found: 0 });
        }
        if self.window() < needed {
            return Err(Error::WindowTooShort {
                needed,
                available: self.window(),
            });
        }
        Ok(())
    }
}

/// Numerical thresholds.
///
/// `singular_threshold` is relative: it is always multiplied by a scale
/// appropriate to the quantity being tested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub singular_threshold: f64,
    pub roundtrip_tol: f64,
    pub oracle_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            singular_threshold: 1e-12,
            roundtrip_tol: 1e-8,
            oracle_tol: 1e-10,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(self) -> Result<Self> {
        for (name, value) in [
            ("singular_threshold", self.singular_threshold),
            ("roundtrip_tol", self.roundtrip_tol),
            ("oracle_tol", self.oracle_tol),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(self)
    }
}
