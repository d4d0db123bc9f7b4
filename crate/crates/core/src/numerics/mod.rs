//! Shared numerical infrastructure: quadrature, compensated summation,
//! Hermitian eigenvalue bounds for Gram matrices, special functions and the
//! Fourier-identity verifiers.

pub mod appendix;
pub mod fourier;
pub mod gram;
pub mod quad;
pub mod special;
pub mod sum;

pub use gram::GramReport;
pub use quad::{quad, Interval, QuadResult};
pub use sum::{CompensatedSum, ComplexCompensatedSum};
