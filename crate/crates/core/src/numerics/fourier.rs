//! The two Fourier conventions used by the library, kept under distinct names:
//!
//! * measure convention: `f̂(x) = ∫ e^{ixp} f(p) dp` ([`ft_measure`]);
//! * unitary convention: `(Ff)(x) = (2π)^{-1/2} ∫ e^{ixp} f(p) dp` ([`ft_unitary`]).
//!
//! The argument `x` may be complex (analytic continuation) as long as the
//! damped integrand stays integrable.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::numerics::quad::{double_exponential, oscillatory_line, Interval};

/// Measure-convention transform of a density with at least exponential decay.
pub fn ft_measure<F: Fn(f64) -> f64>(density: F, x: Complex64, tol: f64) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let g = |p: f64| (i * x * p).exp() * density(p);
    Ok(double_exponential(&g, Interval::Whole, tol)?.value)
}

/// Measure-convention transform at a real frequency for densities that decay
/// only algebraically (half-period panels with ε-extrapolation).
pub fn ft_measure_algebraic<F: Fn(f64) -> f64>(density: F, x: f64, tol: f64) -> Result<Complex64> {
    let g = |p: f64| Complex64::new(density(p), 0.0);
    Ok(oscillatory_line(&g, x, tol)?.value)
}

/// Unitary-convention transform of a density with at least exponential decay.
pub fn ft_unitary<F: Fn(f64) -> f64>(density: F, x: Complex64, tol: f64) -> Result<Complex64> {
    Ok(ft_measure(density, x, tol)? / (2.0 * PI).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_transforms() {
        // ∫ e^{ixp} e^{-p²/2} dp = √(2π) e^{-x²/2}
        for x in [0.0, 0.5, 1.0, 2.5] {
            let m = ft_measure(|p| (-p * p / 2.0).exp(), Complex64::new(x, 0.0), 1e-13).unwrap();
            assert!((m.re - (2.0 * PI).sqrt() * (-x * x / 2.0).exp()).abs() < 1e-12);
            assert!(m.im.abs() < 1e-12);
            let u = ft_unitary(|p| (-p * p / 2.0).exp(), Complex64::new(x, 0.0), 1e-13).unwrap();
            assert!((u.re - (-x * x / 2.0).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn lorentzian_needs_the_algebraic_route() {
        let v = ft_measure_algebraic(|p| 1.0 / (1.0 + p * p), 1.5, 1e-12).unwrap();
        assert!((v.re - PI * (-1.5f64).exp()).abs() < 1e-9);
    }
}
