//! Forward and inverse dynamics of a boundary-controlled complex Jacobi system.
//!
//! The system evolves in discrete time on the half-line `n = 0, 1, 2, ...`:
//!
//! ```text
//! u[n][t+1] + u[n][t-1] - a_n u[n+1][t] - a_{n-1} u[n-1][t] - b_n u[n][t] = 0
//! ```
//!
//! driven by a control `f` at the boundary site `u[0][t] = f_t`. The response
//! at site 1 is a convolution with the response vector `r`. From
//! `r_0..r_{2T-2}` this crate recovers `a_0`, `(a_k)^2` and `b_k` for
//! `k = 1..T-1` in two independent ways:
//!
//! * [`krein`]: solve Krein equations on nested windows and recurse,
//! * [`factorization`]: ratios of leading minors of the connecting matrix.
//!
//! Only the squares `(a_k)^2` are determined by the data; flipping the sign of
//! any `a_k`, `k >= 1`, leaves the response unchanged. [`characterize`]
//! decides whether an arbitrary vector is a response vector at all.
//!
//! ```
//! use jacobi_inverse::{forward, factorization, JacobiCoefficients, Scalar, ToleranceConfig};
//!
//! let c = JacobiCoefficients::new(
//!     vec![Scalar::new(1.0, 0.0), Scalar::new(2.0, 0.0)],
//!     vec![Scalar::new(0.0, 1.0)],
//! )?;
//! let r = forward::response_vector(&c, 2)?;
//! assert_eq!(r.values(), &[Scalar::new(1.0, 0.0), Scalar::new(0.0, 1.0), Scalar::new(2.0, 0.0)]);
//!
//! let rec = factorization::reconstruct_factorization(&r, 2, &ToleranceConfig::default())?;
//! assert!((rec.a_sq[0] - Scalar::new(4.0, 0.0)).norm() < 1e-12);
//! assert!((rec.b[0] - Scalar::new(0.0, 1.0)).norm() < 1e-12);
//! # Ok::<(), jacobi_inverse::Error>(())
//! ```
//!
//! The guide under `book/` walks through each stage; its code samples are
//! compiled and run as doc-tests of this crate.

pub mod characterize;
pub mod connecting;
mod error;
pub mod factorization;
pub mod forward;
pub mod krein;
pub mod linalg;
pub mod reconstruction;
pub mod sample;
mod types;

pub use characterize::{characterize, verify_roundtrip, CharacterizationReport, Verdict};
pub use connecting::{ConnectingMatrix, Orientation};
pub use error::{Error, Result};
pub use krein::KreinParameters;
pub use reconstruction::{Method, ReconstructionResult};
pub use sample::Profile;
pub use types::{
    validate_coefficients, BoundaryControl, JacobiCoefficients, ResponseVector, Scalar,
    ToleranceConfig,
};

// The guide's chapters, compiled as doc-tests so the snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/forward.md")]
    mod forward {}
    #[doc = include_str!("../../../book/src/connecting.md")]
    mod connecting {}
    #[doc = include_str!("../../../book/src/krein.md")]
    mod krein {}
    #[doc = include_str!("../../../book/src/factorization.md")]
    mod factorization {}
    #[doc = include_str!("../../../book/src/characterization.md")]
    mod characterization {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
