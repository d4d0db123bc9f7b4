//! Reflection-positive functions on the symmetric groups `(ℤ, ℕ₀, −id)`,
//! `(ℝ, ℝ₊, −id)` and `(T_β, [0, β/2], −id)` with `T_β = ℝ/βℤ`: the basic
//! families `φ_λ`, their mixtures, the functions `c_t` and `g_t` on the strip,
//! the characterization of `S_β` through `sup_t |c_t|`, and Gram-matrix
//! testers for positive definiteness and reflection positivity.
//!
//! Group elements are passed as `f64`; on `ℤ` they must be integral, on `T_β`
//! they are reduced modulo `β` into `[0, β)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::c;
use crate::error::{Error, Result};
use crate::measures::{capital_gamma_map, laplace, MeasureOnR};
use crate::numerics::appendix::{IdentityReport, IdentitySample};
use crate::numerics::gram::GramReport;
use crate::numerics::sum::CompensatedSum;

/// Number of log-spaced `t` values used by [`strip_characterization_check`].
pub const STRIP_T_SAMPLES: usize = 60;

/// The symmetric group carrying a reflection-positive function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SymmetricGroupKind {
    Integers,
    Reals,
    CircleBeta(f64),
}

impl SymmetricGroupKind {
    fn validate(&self) -> Result<()> {
        match *self {
            SymmetricGroupKind::CircleBeta(beta) if !(beta > 0.0 && beta.is_finite()) => {
                Err(Error::ParameterOutOfRange(format!("β must be positive, got {beta}")))
            }
            _ => Ok(()),
        }
    }

    /// Canonical representative of a group element.
    pub fn reduce(&self, g: f64) -> Result<f64> {
        match *self {
            SymmetricGroupKind::Integers => {
                if g.fract() != 0.0 || !g.is_finite() {
                    return Err(Error::ParameterOutOfRange(format!("{g} is not an integer")));
                }
                Ok(g)
            }
            SymmetricGroupKind::Reals => Ok(g),
            SymmetricGroupKind::CircleBeta(beta) => Ok(fold_circle(beta, g)),
        }
    }

    /// Whether `g` lies in the positive cone `ℕ₀`, `[0, ∞)` or `[0, β/2]`.
    pub fn in_positive_cone(&self, g: f64) -> bool {
        match *self {
            SymmetricGroupKind::Integers => g >= 0.0 && g.fract() == 0.0 && g.is_finite(),
            SymmetricGroupKind::Reals => g >= 0.0 && g.is_finite(),
            SymmetricGroupKind::CircleBeta(beta) => (0.0..=beta / 2.0).contains(&g),
        }
    }

    /// Whether `λ` is a legal parameter of the basic family `φ_λ`.
    pub fn admits_parameter(&self, lambda: f64) -> bool {
        match self {
            SymmetricGroupKind::Integers => (-1.0..=1.0).contains(&lambda),
            _ => lambda >= 0.0 && lambda.is_finite(),
        }
    }

    /// The basic reflection-positive function `φ_λ(g)`.
    pub fn phi(&self, lambda: f64, g: f64) -> Result<f64> {
        match *self {
            SymmetricGroupKind::Integers => phi_z(lambda, self.reduce(g)? as i64),
            SymmetricGroupKind::Reals => phi_r(lambda, g),
            SymmetricGroupKind::CircleBeta(beta) => phi_t(beta, lambda, g),
        }
    }
}

/// Reduces `y` modulo `β` into `[0, β)`.
pub fn fold_circle(beta: f64, y: f64) -> f64 {
    let r = y.rem_euclid(beta);
    if r >= beta {
        0.0
    } else {
        r
    }
}

/// `φ_λ(n) = λ^{|n|}` on `ℤ` (`0⁰ = 1`).
pub fn phi_z(lambda: f64, n: i64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&lambda) {
        return Err(Error::ParameterOutOfRange(format!("|λ| ≤ 1 required, got {lambda}")));
    }
    let k = n.unsigned_abs();
    Ok(if k <= i32::MAX as u64 { lambda.powi(k as i32) } else { lambda.powf(k as f64) })
}

/// `φ_λ(t) = e^{−λ|t|}` on `ℝ`.
pub fn phi_r(lambda: f64, t: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::ParameterOutOfRange(format!("λ ≥ 0 required, got {lambda}")));
    }
    Ok((-lambda * t.abs()).exp())
}

/// `φ_λ([y]) = (e^{−yλ} + e^{−(β−y)λ})/(1 + e^{−βλ})` on `T_β`, `y` reduced
/// into `[0, β)`.
pub fn phi_t(beta: f64, lambda: f64, y: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("β must be positive, got {beta}")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::ParameterOutOfRange(format!("λ ≥ 0 required, got {lambda}")));
    }
    let y = fold_circle(beta, y);
    Ok(((-y * lambda).exp() + (-(beta - y) * lambda).exp()) / (1.0 + (-beta * lambda).exp()))
}

/// Fourier coefficient `c_n` of `φ_λ` on `T_β` w.r.t. `e^{2πiny/β}`:
/// `(1/π)·a/(a² + n²)·tanh(βλ/2)` with `a = βλ/2π`; at `λ = 0` the function
/// is constant and `c_n = δ_{n0}`.
pub fn phi_t_fourier(beta: f64, lambda: f64, n: i64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("β must be positive, got {beta}")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("λ ≥ 0 required, got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let a = beta * lambda / (2.0 * PI);
    let nf = n as f64;
    Ok(a / (a * a + nf * nf) / PI * (beta * lambda / 2.0).tanh())
}

/// `Σ_{|n| ≤ N} c_n e^{2πiny/β}` (real because `c_{−n} = c_n`).
pub fn phi_t_fourier_partial_sum(beta: f64, lambda: f64, y: f64, n_max: u64) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    acc.add(phi_t_fourier(beta, lambda, 0)?);
    for n in 1..=n_max as i64 {
        acc.add(2.0 * phi_t_fourier(beta, lambda, n)? * (2.0 * PI * n as f64 * y / beta).cos());
    }
    Ok(acc.value())
}

/// A mixture `∫ φ_λ dμ(λ)` of basic reflection-positive functions.
#[derive(Debug, Clone, PartialEq)]
pub struct RpFamily {
    group: SymmetricGroupKind,
    mixing: MeasureOnR,
}

impl RpFamily {
    /// Validates that the mixing measure lives in `[−1, 1]` (ℤ) or `[0, ∞)`.
    pub fn new(group: SymmetricGroupKind, mixing: MeasureOnR) -> Result<Self> {
        group.validate()?;
        let mut points: Vec<f64> = mixing.atoms().iter().map(|a| a.location).collect();
        if let Some(d) = mixing.density() {
            points.extend((0..d.len()).filter(|&j| d.values[j] > 0.0).map(|j| d.node(j)));
        }
        if let Some(p) = points.into_iter().find(|&p| !group.admits_parameter(p)) {
            return Err(Error::UnsupportedSupport(format!("mixing measure charges λ = {p}, outside the parameter set of {group:?}")));
        }
        Ok(RpFamily { group, mixing })
    }

    pub fn group(&self) -> SymmetricGroupKind {
        self.group
    }

    pub fn mixing(&self) -> &MeasureOnR {
        &self.mixing
    }

    /// `∫ φ_λ(g) dμ(λ)`: exact atom sum plus trapezoid sum over the density.
    pub fn eval(&self, g: f64) -> Result<f64> {
        let mut acc = CompensatedSum::new();
        for a in self.mixing.atoms() {
            acc.add(a.weight * self.group.phi(a.location, g)?);
        }
        if let Some(d) = self.mixing.density() {
            for j in 0..d.len() {
                if d.values[j] > 0.0 {
                    acc.add(d.weight(j) * d.values[j] * self.group.phi(d.node(j), g)?);
                }
            }
        }
        Ok(acc.value())
    }
}

/// Free-function form of [`RpFamily::eval`].
pub fn rp_family_eval(fam: &RpFamily, g: f64) -> Result<f64> {
    fam.eval(g)
}

/// `c_t(z) = (e^{itz} + e^{−βt}e^{−itz})/(1 + e^{−βt})`.
pub fn c_t(beta: f64, t: f64, z: Complex64) -> Complex64 {
    let i = c(0.0, 1.0);
    let e = (-beta * t).exp();
    // e^{−βt}e^{−itz} as a single exponential: no ∞·0 for large t.
    ((i * t * z).exp() + (-i * t * z - beta * t).exp()) / (1.0 + e)
}

/// `g_t(z) = e^{tβ/2} e^{itz}`.
pub fn g_t(beta: f64, t: f64, z: Complex64) -> Complex64 {
    (c(0.0, t) * z).exp() * (t * beta / 2.0).exp()
}

/// `1 − |c_t(z)|²` computed without cancellation or overflow:
/// `[2 sinh(ty) sinh(t(β−y)) + 2 sin²(tx)]/(cosh(tβ) + 1)` for `z = x + iy`,
/// numerator and denominator scaled by `e^{−t(|y|+|β−y|)}`.
pub fn c_t_defect(beta: f64, t: f64, z: Complex64) -> f64 {
    let (a, b) = (t * z.im, t * (beta - z.im));
    let m = a.abs() + b.abs();
    let scaled_sinh = |u: f64| -u.signum() * (-2.0 * u.abs()).exp_m1() / 2.0;
    let s = (t * z.re).sin();
    let num = 2.0 * scaled_sinh(a) * scaled_sinh(b) + 2.0 * s * s * (-m).exp();
    let den = 0.5 * ((t * beta - m).exp() + (-t * beta - m).exp()) + (-m).exp();
    num / den
}

/// Verdict of [`strip_characterization_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StripVerdict {
    /// `|c_t(z)| < 1` at every sampled `t`, and `z ∈ S_β`.
    Interior,
    /// `|c_t(z)| ≥ 1` at `witness`, and `z ∉ S̄_β`.
    Exterior { witness: f64 },
    /// `Im z ∈ {0, β}`: `|c_t(z)| = 1` at `t = 2π/|Re z|` (for every `t` if `Re z = 0`).
    Boundary { witness: Option<f64> },
    /// The sampled grid contradicts the location of `z`.
    Unknown,
}

/// Outcome of [`strip_characterization_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripCharacterization {
    pub verdict: StripVerdict,
    /// `min_t (1 − |c_t(z)|²)` over the grid.
    pub min_defect: f64,
    /// Largest `t` on the grid.
    pub t_max: f64,
}

/// The log-spaced grid `t_k = 10^{−3 + 6k/59}`, `k = 0..60`.
pub fn strip_t_grid() -> Vec<f64> {
    (0..STRIP_T_SAMPLES).map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / (STRIP_T_SAMPLES - 1) as f64)).collect()
}

/// Samples `S_β = {z : |c_t(z)| < 1 for all t > 0}` on [`strip_t_grid`].
pub fn strip_characterization_check(beta: f64, z: Complex64) -> Result<StripCharacterization> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("β must be positive, got {beta}")));
    }
    let grid = strip_t_grid();
    let t_max = grid[grid.len() - 1];
    let defects: Vec<f64> = grid.iter().map(|&t| c_t_defect(beta, t, z)).collect();
    let min_defect = defects.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = crate::domains::BOUNDARY_TOL * beta.max(1.0);
    let verdict = if z.im.abs() <= tol || (z.im - beta).abs() <= tol {
        StripVerdict::Boundary { witness: (z.re != 0.0).then(|| 2.0 * PI / z.re.abs()) }
    } else {
        let inside = z.im > 0.0 && z.im < beta;
        match defects.iter().position(|&d| d <= 0.0) {
            None if inside => StripVerdict::Interior,
            Some(k) if !inside => StripVerdict::Exterior { witness: grid[k] },
            _ => StripVerdict::Unknown,
        }
    };
    Ok(StripCharacterization { verdict, min_defect, t_max })
}

/// Gram report of `φ(g_j − g_k)` (positive definiteness on the group).
pub fn pd_gram<F: Fn(f64) -> Result<f64>>(group: SymmetricGroupKind, phi: F, samples: &[f64]) -> Result<GramReport> {
    group.validate()?;
    let n = samples.len();
    let mut g = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            g[(j, k)] = c(phi(group.reduce(samples[j] - samples[k])?)?, 0.0);
        }
    }
    Ok(GramReport::from_matrix(&g))
}

/// Gram report of `φ(s_j + s_k)` for `s_j` in the positive cone (reflection
/// positivity for the involution `−id`, where `s·t^♯ = s + t`).
pub fn rp_gram<F: Fn(f64) -> Result<f64>>(group: SymmetricGroupKind, phi: F, plus_samples: &[f64]) -> Result<GramReport> {
    group.validate()?;
    if let Some(s) = plus_samples.iter().find(|&&s| !group.in_positive_cone(s)) {
        return Err(Error::SampleOutsidePositiveCone(format!("{s} is not in the positive cone of {group:?}")));
    }
    let n = plus_samples.len();
    let mut g = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            g[(j, k)] = c(phi(group.reduce(plus_samples[j] + plus_samples[k])?)?, 0.0);
        }
    }
    Ok(GramReport::from_matrix(&g))
}

fn sign_power(eps: i8, n: u32) -> Result<f64> {
    match eps {
        1 => Ok(1.0),
        -1 => Ok(if n % 2 == 0 { 1.0 } else { -1.0 }),
        _ => Err(Error::ParameterOutOfRange(format!("sign must be ±1, got {eps}"))),
    }
}

/// `p_n(t, ε) = ε^n e^{−n|t|}` on `ℝ × {±1}`.
pub fn param_function(n: u32, t: f64, eps: i8) -> Result<f64> {
    Ok(sign_power(eps, n)? * (-(n as f64) * t.abs()).exp())
}

/// Gram report of `p_n(g_j g_k^{−1}) = (ε_jε_k)^n e^{−n|t_j − t_k|}`.
pub fn param_rp_check(n: u32, samples: &[(f64, i8)]) -> Result<GramReport> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("n ≥ 1 required".into()));
    }
    let m = samples.len();
    let mut g = DMatrix::zeros(m, m);
    for j in 0..m {
        for k in 0..m {
            let (tj, ej) = samples[j];
            let (tk, ek) = samples[k];
            g[(j, k)] = c(param_function(n, tj - tk, ej * ek)?, 0.0);
        }
    }
    Ok(GramReport::from_matrix(&g))
}

/// Gram report of `p_n(s_j + s_k, ε_jε_k)` for `s_j ≥ 0` (reflection
/// positivity for the involution `(t, ε) ↦ (−t, ε)`).
pub fn param_rp_cone_check(n: u32, samples: &[(f64, i8)]) -> Result<GramReport> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("n ≥ 1 required".into()));
    }
    if let Some(s) = samples.iter().find(|s| !(s.0 >= 0.0)) {
        return Err(Error::SampleOutsidePositiveCone(format!("t = {} is negative", s.0)));
    }
    let m = samples.len();
    let mut g = DMatrix::zeros(m, m);
    for j in 0..m {
        for k in 0..m {
            let (tj, ej) = samples[j];
            let (tk, ek) = samples[k];
            g[(j, k)] = c(param_function(n, tj + tk, ej * ek)?, 0.0);
        }
    }
    Ok(GramReport::from_matrix(&g))
}

/// Compares `φ_λ([y])` with the Laplace transform of
/// `(δ_λ + e^{−βλ}δ_{−λ})/(1 + e^{−βλ})` at the given `y ∈ [0, β]`.
pub fn laplace_identity_check(beta: f64, lambda: f64, ys: &[f64]) -> Result<IdentityReport> {
    let nu = capital_gamma_map(&MeasureOnR::dirac(lambda)?, beta)?;
    let mut samples = Vec::with_capacity(ys.len());
    for &y in ys {
        if !(0.0..=beta).contains(&y) {
            return Err(Error::ParameterOutOfRange(format!("y must lie in [0, β], got {y}")));
        }
        let lhs = c(phi_t(beta, lambda, y)?, 0.0);
        let rhs = c(laplace(&nu, y)?, 0.0);
        samples.push(IdentitySample { params: vec![beta, lambda, y], lhs, rhs, defect: (lhs - rhs).norm() });
    }
    Ok(IdentityReport::from_samples(samples))
}
