//! Verifiers for the classical Fourier identities the kernels rest on:
//! Poisson summation for Lorentzians, the transforms of `sech` and `sech²`,
//! the `cosh^{-n}` recursion, the transform of the strip Szegő measure and
//! the modulus identity `|sinh(x+iy)|² = sinh²x + sin²y`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{fmt_c, Error, Result};
use crate::numerics::fourier::{ft_measure, ft_unitary};
use crate::numerics::quad::{double_exponential, Interval};
use crate::numerics::special::inverse_square_tail;
use crate::numerics::sum::ComplexCompensatedSum;

/// One evaluated instance of an identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySample {
    pub params: Vec<f64>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub defect: f64,
}

/// Samples of an identity and the largest defect among them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub max_defect: f64,
    pub samples: Vec<IdentitySample>,
}

impl IdentityReport {
    /// Collects samples and records the largest defect.
    pub fn from_samples(samples: Vec<IdentitySample>) -> Self {
        let max_defect = samples.iter().map(|s| s.defect).fold(0.0, f64::max);
        IdentityReport { max_defect, samples }
    }
}

fn sample(params: Vec<f64>, lhs: Complex64, rhs: Complex64) -> IdentitySample {
    IdentitySample { params, lhs, rhs, defect: (lhs - rhs).norm() }
}

const QUAD_TOL: f64 = 1e-13;

/// Result of the truncated Poisson-summation comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonSummationReport {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
    /// Proven bound on the omitted tail `|k| > K` plus a rounding allowance.
    pub tail_bound: f64,
}

/// The Lorentzian `ψ_s(k) = s / (π (s² + k²))`.
pub fn lorentzian(s: f64, k: f64) -> f64 {
    s / (PI * (s * s + k * k))
}

/// Compares `Σ_{|k|≤K} ψ_s(k) e^{2πikx/β}`, `s = βλ/2π`, with the periodized
/// exponential `(e^{-λx} + e^{-λ(β-x)}) / (1 - e^{-λβ})`.
pub fn poisson_summation_check(beta: f64, lambda: f64, x: f64, k_max: u64) -> Result<PoissonSummationReport> {
    if !(beta > 0.0) || !(lambda > 0.0) {
        return Err(Error::ParameterOutOfRange(format!("need β > 0 and λ > 0, got β={beta}, λ={lambda}")));
    }
    let s = beta * lambda / (2.0 * PI);
    let mut acc = ComplexCompensatedSum::new();
    let mut abs_sum = lorentzian(s, 0.0);
    acc.add(Complex64::new(lorentzian(s, 0.0), 0.0));
    for k in 1..=k_max {
        let kf = k as f64;
        // Pair k with -k: ψ_s(k)(e^{iθ} + e^{-iθ}) = 2ψ_s(k) cos θ.
        let theta = 2.0 * PI * kf * x / beta;
        let term = 2.0 * lorentzian(s, kf) * theta.cos();
        abs_sum += term.abs();
        acc.add(Complex64::new(term, 0.0));
    }
    let lhs = acc.value().re;
    let rhs = ((-lambda * x).exp() + (-lambda * (beta - x)).exp()) / (1.0 - (-lambda * beta).exp());
    let tail = 2.0 * s / PI * inverse_square_tail(k_max);
    let rounding = 64.0 * f64::EPSILON * abs_sum.max(rhs.abs());
    Ok(PoissonSummationReport { lhs, rhs, defect: (lhs - rhs).abs(), tail_bound: tail + rounding })
}

/// `∫ e^{ixξ}/cosh x dx` against `π / cosh(πξ/2)`.
pub fn sech_ft_check(xis: &[f64]) -> Result<IdentityReport> {
    let mut out = Vec::with_capacity(xis.len());
    for &xi in xis {
        let lhs = ft_measure(|x| 1.0 / x.cosh(), Complex64::new(xi, 0.0), QUAD_TOL)?;
        let rhs = Complex64::new(PI / (PI * xi / 2.0).cosh(), 0.0);
        out.push(sample(vec![xi], lhs, rhs));
    }
    Ok(IdentityReport::from_samples(out))
}

/// Closed form of the unitary transform of `sech²`: `√(π/2)·λ/sinh(πλ/2)`,
/// with the limit `√(2/π)` at `λ = 0`.
pub fn sech2_ft_closed(lambda: f64) -> f64 {
    if lambda == 0.0 {
        (2.0 / PI).sqrt()
    } else {
        (PI / 2.0).sqrt() * lambda / (PI * lambda / 2.0).sinh()
    }
}

/// `(2π)^{-1/2} ∫ e^{ixλ}/cosh²x dx` against [`sech2_ft_closed`].
pub fn sech2_ft_check(lambdas: &[f64]) -> Result<IdentityReport> {
    let mut out = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let lhs = ft_unitary(|x| x.cosh().powi(-2), Complex64::new(l, 0.0), QUAD_TOL)?;
        out.push(sample(vec![l], lhs, Complex64::new(sech2_ft_closed(l), 0.0)));
    }
    Ok(IdentityReport::from_samples(out))
}

/// Two quadratures per `(n, p)`: `F(cosh^{-n-2})(p)` against
/// `(n² + p²)/(n(n+1)) · F(cosh^{-n})(p)`.
pub fn sech_power_recursion_check(n: u32, ps: &[f64]) -> Result<IdentityReport> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("recursion needs n ≥ 1".into()));
    }
    let nf = n as f64;
    let mut out = Vec::with_capacity(ps.len());
    for &p in ps {
        let z = Complex64::new(p, 0.0);
        let lhs = ft_unitary(|x| x.cosh().powi(-(n as i32) - 2), z, QUAD_TOL)?;
        let base = ft_unitary(|x| x.cosh().powi(-(n as i32)), z, QUAD_TOL)?;
        let rhs = base * ((nf * nf + p * p) / (nf * (nf + 1.0)));
        out.push(sample(vec![nf, p], lhs, rhs));
    }
    Ok(IdentityReport::from_samples(out))
}

/// Closed-form transform of `dλ / (2π(1 + e^{-2βλ}))`: `(1/4β)·i/sinh(πz/2β)`.
pub fn szego_measure_transform_closed(beta: f64, z: Complex64) -> Complex64 {
    Complex64::new(0.0, 1.0 / (4.0 * beta)) / (z * (PI / (2.0 * beta))).sinh()
}

/// The integrand `e^{izλ}/(2π(1+e^{-2βλ}))`, evaluated without overflow.
fn szego_measure_integrand(beta: f64, z: Complex64, l: f64) -> Complex64 {
    let phase = Complex64::new(0.0, z.re * l).exp();
    let damp = if l >= 0.0 {
        (-z.im * l).exp() / (1.0 + (-2.0 * beta * l).exp())
    } else {
        ((2.0 * beta - z.im) * l).exp() / (1.0 + (2.0 * beta * l).exp())
    };
    phase * (damp / (2.0 * PI))
}

/// Quadrature of the strip Szegő-measure transform against its closed form,
/// for `z` strictly inside `0 < Im z < 2β`.
pub fn ftcosh_check(beta: f64, zs: &[Complex64]) -> Result<IdentityReport> {
    let mut out = Vec::with_capacity(zs.len());
    for &z in zs {
        if !(z.im > 0.0 && z.im < 2.0 * beta) {
            return Err(Error::DivergentTransform(format!("Im {} outside (0, 2β)", fmt_c(z))));
        }
        let g = |l: f64| szego_measure_integrand(beta, z, l);
        let lhs = double_exponential(&g, Interval::Whole, QUAD_TOL)?.value;
        out.push(sample(vec![beta, z.re, z.im], lhs, szego_measure_transform_closed(beta, z)));
    }
    Ok(IdentityReport::from_samples(out))
}

/// `|sinh(x+iy)|² = sinh²x + sin²y` on an `n × n` grid over
/// `[-x_max, x_max] × [-y_max, y_max]`; defects are relative to `max(1, value)`.
pub fn sinh_modulus_check(n: usize, x_max: f64, y_max: f64) -> IdentityReport {
    let mut out = Vec::with_capacity(n * n);
    let step = |m: f64, i: usize| if n > 1 { -m + 2.0 * m * i as f64 / (n - 1) as f64 } else { 0.0 };
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (step(x_max, i), step(y_max, j));
            let lhs = Complex64::new(x, y).sinh().norm_sqr();
            let rhs = x.sinh().powi(2) + y.sin().powi(2);
            let defect = (lhs - rhs).abs() / rhs.max(1.0);
            out.push(IdentitySample {
                params: vec![x, y],
                lhs: Complex64::new(lhs, 0.0),
                rhs: Complex64::new(rhs, 0.0),
                defect,
            });
        }
    }
    IdentityReport::from_samples(out)
}
