//! Numerical toolkit for reflection positivity on the unit disc, the upper
//! half-plane and the strip `S_β = {0 < Im z < β}`.
//!
//! The crate evaluates the Szegő, Poisson, Bergman and power kernels of the
//! three canonical domains, the reflection-positive function families on
//! `ℤ`, `ℝ` and the circle `ℝ/βℤ`, transforms of positive measures on `ℝ`
//! (including the β-reflection and β-KMS conditions), the half-plane to strip
//! periodization series, and finite-dimensional models of modular data.
//! Every closed-form identity is paired with an independent numerical check;
//! [`verify`] assembles those checks into machine-readable reports.
//!
//! All values are immutable and every operation is a pure function, so the
//! whole API is safe to call concurrently.

pub mod domains;
pub mod error;
pub mod kernels;
pub mod measures;
pub mod modular;
pub mod numerics;
pub mod periodize;
pub mod rpfunc;
pub mod verify;

pub use num_complex::Complex64;

pub use domains::{BoundaryCoord, BoundaryPoint, Domain, HardyTransfer, StripComponent};
pub use error::{Error, Result};
pub use kernels::{BoundaryFunction, KernelKind};
pub use measures::{Atom, GridDensity, MeasureOnR, ReflectionClass, ReflectionOrder};
pub use modular::{DiscretizedSpace, ModularData};
pub use rpfunc::{RpFamily, StripVerdict, SymmetricGroupKind};
pub use numerics::gram::GramReport;
pub use periodize::{SeriesEval, SplittingMode};
pub use verify::{CheckResult, Suite, VerificationReport};

/// The universal scalar: a point of `ℂ` as a pair of doubles.
pub type ComplexValue = Complex64;

/// Shorthand constructor used throughout the crate.
#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
