//! Partial-fraction expansions of `π/sin(πz)` and `(π/2β)/sinh(πz/2β)`, the
//! periodization of half-plane kernels into strip kernels
//! (`Q = Σ (−1)^n q_{w+2nβi}` and the Bergman analogue), each with an explicit
//! bound on the omitted tail, and the splitting `ν = ν₊ + ν₋` of a symmetric
//! spectral measure into the measure of a strip kernel.
//!
//! Series over `ℤ` are summed in symmetric pairs `(k, −k)`, which makes every
//! paired term `O(1/k²)`; the reported `tail_bound` is a proven bound on the
//! omitted pairs plus an allowance for floating-point rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::c;
use crate::domains::Domain;
use crate::error::{fmt_c, Error, Result};
use crate::measures::{fourier, GridDensity, MeasureOnR, MERGE_TOL};
use crate::numerics::special::inverse_square_tail;
use crate::numerics::sum::ComplexCompensatedSum;

/// Default number of terms per side.
pub const DEFAULT_TERMS: u64 = 10_000;

/// Smallest accepted distance from a pole of the summed function.
pub const POLE_TOL: f64 = 1e-8;

/// A truncated series with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEval {
    pub value: Complex64,
    pub terms_used: u64,
    /// `|value − limit| ≤ tail_bound`.
    pub tail_bound: f64,
}

/// Rounding allowance for a compensated sum whose terms were each computed
/// with a few ulps of relative error.
fn rounding_allowance(value: Complex64, abs_sum: f64) -> f64 {
    8.0 * f64::EPSILON * (abs_sum + value.norm())
}

/// `Σ_{k>N} 1/(u_k² − r²)` with `u_k = k·step`, bounded by
/// `(1/step)·∫_{N·step}^∞ du/(u² − r²) ≤ 1/(step·(N·step − r))`.
fn inverse_square_gap_tail(step: f64, n: u64, r: f64) -> f64 {
    let edge = n as f64 * step - r;
    if edge > 0.0 {
        1.0 / (step * edge)
    } else {
        f64::INFINITY
    }
}

/// `π/sin(πz) = 1/z + Σ_{k≥1} (−1)^k 2z/(z² − k²)`, summed for `k ≤ N`.
///
/// Tail: `|2z/(z² − k²)| ≤ 2|z|/(k² − |z|²)`, so the omitted part is at most
/// `2|z|/(N − |z|)` (infinite when `N ≤ |z|`).
pub fn csc_partial_fractions(z: Complex64, n: u64) -> Result<SeriesEval> {
    let nearest = z.re.round();
    if c(z.re - nearest, z.im).norm() < POLE_TOL {
        return Err(Error::PoleAtInteger(format!("{} is within {POLE_TOL:e} of {nearest}", fmt_c(z))));
    }
    let mut acc = ComplexCompensatedSum::new();
    let first = z.inv();
    acc.add(first);
    let mut abs_sum = first.norm();
    let z2 = z * z;
    for k in 1..=n {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let t = sign * 2.0 * z / (z2 - kf * kf);
        abs_sum += t.norm();
        acc.add(t);
    }
    let value = acc.value();
    let tail = 2.0 * z.norm() * inverse_square_gap_tail(1.0, n, z.norm());
    Ok(SeriesEval { value, terms_used: 2 * n + 1, tail_bound: tail + rounding_allowance(value, abs_sum) })
}

/// `(π/2β)/sinh(πz/2β) = Σ_k (−1)^k/(z + 2kβi) = 1/z + Σ_{k≥1} (−1)^k 2z/(z² + 4k²β²)`.
///
/// Tail: `|2z/(z² + 4k²β²)| ≤ 2|z|/(4k²β² − |z|²)`, so the omitted part is at
/// most `|z|/(β(2Nβ − |z|))`.
pub fn sinh_partial_fractions(beta: f64, z: Complex64, n: u64) -> Result<SeriesEval> {
    require_beta(beta)?;
    let k0 = (z.im / (2.0 * beta)).round();
    if c(z.re, z.im - 2.0 * beta * k0).norm() < POLE_TOL {
        return Err(Error::PoleOnLattice(format!("{} is within {POLE_TOL:e} of {}i", fmt_c(z), 2.0 * beta * k0)));
    }
    let (value, abs_sum) = sinh_pairs(beta, z, n);
    let tail = 2.0 * z.norm() * inverse_square_gap_tail(2.0 * beta, n, z.norm());
    Ok(SeriesEval { value, terms_used: 2 * n + 1, tail_bound: tail + rounding_allowance(value, abs_sum) })
}

fn sinh_pairs(beta: f64, z: Complex64, n: u64) -> (Complex64, f64) {
    let mut acc = ComplexCompensatedSum::new();
    let first = z.inv();
    acc.add(first);
    let mut abs_sum = first.norm();
    let z2 = z * z;
    for k in 1..=n {
        let u = 2.0 * k as f64 * beta;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let t = sign * 2.0 * z / (z2 + u * u);
        abs_sum += t.norm();
        acc.add(t);
    }
    (acc.value(), abs_sum)
}

fn require_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("β must be positive, got {beta}")))
    }
}

fn strip_argument(beta: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    let d = Domain::strip(beta)?;
    d.require_interior(z)?;
    d.require_interior(w)?;
    Ok(z - w.conj())
}

/// Half-plane Szegő function `q_w(z) = (1/2π)·i/(z − w̄)`.
pub fn half_plane_term(z: Complex64, w: Complex64) -> Complex64 {
    c(0.0, 1.0 / (2.0 * PI)) / (z - w.conj())
}

/// `Q(z, w) = (i/2π) Σ_n (−1)^n/(z − w̄ + 2nβi)` summed over `|n| ≤ N`; the
/// tail bound is that of [`sinh_partial_fractions`] divided by `2π`.
pub fn szego_series(beta: f64, z: Complex64, w: Complex64, n: u64) -> Result<SeriesEval> {
    let a = strip_argument(beta, z, w)?;
    let (s, abs_sum) = sinh_pairs(beta, a, n);
    let value = s * c(0.0, 1.0 / (2.0 * PI));
    let tail = 2.0 * a.norm() * inverse_square_gap_tail(2.0 * beta, n, a.norm()) / (2.0 * PI);
    Ok(SeriesEval { value, terms_used: 2 * n + 1, tail_bound: tail + rounding_allowance(value, abs_sum / (2.0 * PI)) })
}

/// The one-sided sums `Q⁺ = Σ_{n≥0} (−1)^n q_{w+2nβi}` and
/// `Q⁻ = Σ_{n<0} (−1)^n q_{w+2nβi}`, each truncated after `N` terms.
///
/// Consecutive tail terms pair into `(1/2π)·[1/(2kβ−|a|) − 1/(2(k+1)β−|a|)]`
/// at most, which telescopes to the bound `1/(2π(2Nβ − |a|))`, `a = z − w̄`.
pub fn szego_split(beta: f64, z: Complex64, w: Complex64, n: u64) -> Result<(SeriesEval, SeriesEval)> {
    let a = strip_argument(beta, z, w)?;
    let pref = c(0.0, 1.0 / (2.0 * PI));
    let side = |range: &mut dyn Iterator<Item = i64>| {
        let mut acc = ComplexCompensatedSum::new();
        let mut abs_sum = 0.0;
        let mut count = 0;
        for k in range {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let t = pref * sign / (a + c(0.0, 2.0 * k as f64 * beta));
            abs_sum += t.norm();
            acc.add(t);
            count += 1;
        }
        let value = acc.value();
        let edge = 2.0 * n as f64 * beta - a.norm();
        let tail = if edge > 0.0 { 1.0 / (2.0 * PI * edge) } else { f64::INFINITY };
        SeriesEval { value, terms_used: count, tail_bound: tail + rounding_allowance(value, abs_sum) }
    };
    let n = n as i64;
    let plus = side(&mut (0..n));
    let minus = side(&mut (-n..0));
    Ok((plus, minus))
}

/// `ν̂(a) = −(1/4π²) Σ_k 1/(a + 2kβi)²` at `a = z − w̄` (the strip Bergman
/// kernel), summed over `|k| ≤ N`.
///
/// The pair `(k, −k)` equals `−1/(2k²β²) + r_k` with
/// `|r_k| ≤ (12|a|²k²β² + |a|⁴)/(2k²β²(4k²β² − |a|²)²)`; the leading part
/// of the omitted pairs is added back exactly through `Σ_{k>N} 1/k²`, so the
/// reported bound only covers `Σ_{k>N} |r_k| = O(1/N³)`.
pub fn bergman_series(beta: f64, z: Complex64, w: Complex64, n: u64) -> Result<SeriesEval> {
    let a = strip_argument(beta, z, w)?;
    let pref = -1.0 / (4.0 * PI * PI);
    let mut acc = ComplexCompensatedSum::new();
    let first = pref / (a * a);
    acc.add(first);
    let mut abs_sum = first.norm();
    let a2 = a * a;
    for k in 1..=n {
        let u2 = (2.0 * k as f64 * beta).powi(2);
        let t = pref * 2.0 * (a2 - u2) / ((a2 + u2) * (a2 + u2));
        abs_sum += t.norm();
        acc.add(t);
    }
    let correction = -pref * inverse_square_tail(n) / (2.0 * beta * beta);
    acc.add(c(correction, 0.0));
    let value = acc.value();
    let ar = a.norm();
    let nf = n as f64;
    let ratio = 1.0 - ar * ar / (4.0 * nf * nf * beta * beta);
    let tail = if n > 0 && ratio > 0.0 {
        let r2 = ratio * ratio;
        let k4 = 12.0 * ar * ar / (32.0 * beta.powi(4) * r2) / (3.0 * nf.powi(3));
        let k6 = ar.powi(4) / (32.0 * beta.powi(6) * r2) / (5.0 * nf.powi(5));
        (k4 + k6) / (4.0 * PI * PI)
    } else {
        f64::INFINITY
    };
    Ok(SeriesEval { value, terms_used: 2 * n + 1, tail_bound: tail + rounding_allowance(value, abs_sum + correction.abs()) })
}

/// How a symmetric measure `μ` is turned into a strip measure `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplittingMode {
    /// `dν = dμ/(1 + e^{−2βλ})` (alternating periodization, Hardy-type).
    Alternating,
    /// `dν = sgn(λ) dμ/(1 − e^{−2βλ})` (plain periodization, Bergman-type).
    Plain,
}

/// `ν` together with `ν₊` and `ν₋`, its parts on `λ > 0` and `λ < 0` (mass at
/// 0 split evenly).
#[derive(Debug, Clone, PartialEq)]
pub struct Splitting {
    pub nu: MeasureOnR,
    pub nu_plus: MeasureOnR,
    pub nu_minus: MeasureOnR,
}

fn symmetric_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn require_symmetric(mu: &MeasureOnR) -> Result<()> {
    let atoms = mu.atoms();
    let n = atoms.len();
    for j in 0..n {
        let (a, b) = (atoms[j], atoms[n - 1 - j]);
        if (a.location + b.location).abs() > MERGE_TOL * a.location.abs().max(1.0) || !symmetric_close(a.weight, b.weight) {
            return Err(Error::AsymmetricInput(format!("atom ({}, {}) has no mirror partner", a.location, a.weight)));
        }
    }
    if let Some(d) = mu.density() {
        if !d.is_symmetric() {
            return Err(Error::AsymmetricInput("density grid is not symmetric about 0".into()));
        }
        let m = d.len();
        for j in 0..m / 2 {
            if !symmetric_close(d.values[j], d.values[m - 1 - j]) {
                return Err(Error::AsymmetricInput(format!("density differs at ±{}", d.node(m - 1 - j))));
            }
        }
    }
    Ok(())
}

/// `1/(1 + e^{−2βλ})`.
fn alternating_factor(beta: f64, l: f64) -> f64 {
    1.0 / (1.0 + (-2.0 * beta * l).exp())
}

/// `sgn(λ)/(1 − e^{−2βλ})` for `λ ≠ 0`.
fn plain_factor(beta: f64, l: f64) -> f64 {
    l.signum() / -(-2.0 * beta * l).exp_m1()
}

/// Splits `ν` at 0: `ν₊` keeps `λ > 0`, `ν₋` keeps `λ < 0`, both take half of
/// what sits at 0.
fn split_at_zero(nu: &MeasureOnR) -> Result<(MeasureOnR, MeasureOnR)> {
    let part = |positive: bool| -> Result<MeasureOnR> {
        let atoms = nu
            .atoms()
            .iter()
            .filter_map(|a| match a.location {
                l if l == 0.0 => Some((0.0, 0.5 * a.weight)),
                l if (l > 0.0) == positive => Some((l, a.weight)),
                _ => None,
            })
            .collect();
        let density = nu.density().map(|d| {
            let mut out = d.clone();
            for j in 0..d.len() {
                let l = d.node(j);
                if l == 0.0 {
                    out.values[j] *= 0.5;
                } else if (l > 0.0) != positive {
                    out.values[j] = 0.0;
                }
            }
            out
        });
        MeasureOnR::new(atoms, density)
    };
    Ok((part(true)?, part(false)?))
}

/// Turns a symmetric measure `μ` into the strip measure `ν` of the requested
/// mode and its one-sided parts.
///
/// In `Plain` mode `μ` must not charge 0: atoms at 0 raise `AtomAtZero`, and a
/// density node at 0 must vanish, in which case `ν` there takes the limit
/// `μ′(0+)/(2β)` estimated by the one-sided difference
/// `(4μ(h) − μ(2h) − 3μ(0))/(2h)`.
pub fn geometric_splitting(mu: &MeasureOnR, beta: f64, mode: SplittingMode) -> Result<Splitting> {
    require_beta(beta)?;
    require_symmetric(mu)?;
    let factor = |l: f64| match mode {
        SplittingMode::Alternating => alternating_factor(beta, l),
        SplittingMode::Plain => plain_factor(beta, l),
    };
    let mut atoms = Vec::with_capacity(mu.atoms().len());
    for a in mu.atoms() {
        if a.location == 0.0 && mode == SplittingMode::Plain {
            if a.weight > 0.0 {
                return Err(Error::AtomAtZero(format!("atom of weight {} at 0", a.weight)));
            }
            continue;
        }
        atoms.push((a.location, a.weight * factor(a.location)));
    }
    let density = match mu.density() {
        None => None,
        Some(d) => {
            let mut values = d.values.clone();
            for (j, v) in values.iter_mut().enumerate() {
                let l = d.node(j);
                if l != 0.0 {
                    *v *= factor(l);
                } else if mode == SplittingMode::Alternating {
                    *v *= 0.5;
                } else {
                    if d.values[j] != 0.0 {
                        return Err(Error::AtomAtZero(format!(
                            "density {} at 0 makes sgn(λ)/(1 − e^(−2βλ)) non-integrable",
                            d.values[j]
                        )));
                    }
                    if j + 2 >= d.len() {
                        return Err(Error::InvalidMeasure("grid too short to extrapolate the density at 0".into()));
                    }
                    let (v1, v2) = (d.values[j + 1], d.values[j + 2]);
                    let slope = (4.0 * v1 - v2) / (2.0 * d.h);
                    *v = slope / (2.0 * beta);
                }
            }
            Some(GridDensity::new(d.x0, d.h, values)?)
        }
    };
    let nu = MeasureOnR::new(atoms, density)?;
    let (nu_plus, nu_minus) = split_at_zero(&nu)?;
    Ok(Splitting { nu, nu_plus, nu_minus })
}

/// Defects of the two transform identities of a splitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplittingReport {
    /// `max |ν̂(2iβ − z) − ν̂(z)|`.
    pub symmetry_defect: f64,
    /// `max |ν̂(z) − ν̂₊(z) − ν̂₊(2iβ − z)|`.
    pub decomposition_defect: f64,
}

/// Evaluates both identities at the given points of `S_{2β}`.
pub fn splitting_check(s: &Splitting, beta: f64, zs: &[Complex64]) -> Result<SplittingReport> {
    let mut symmetry_defect: f64 = 0.0;
    let mut decomposition_defect: f64 = 0.0;
    for &z in zs {
        let zr = c(0.0, 2.0 * beta) - z;
        let v = fourier(&s.nu, z)?;
        symmetry_defect = symmetry_defect.max((fourier(&s.nu, zr)? - v).norm());
        let split = fourier(&s.nu_plus, z)? + fourier(&s.nu_plus, zr)?;
        decomposition_defect = decomposition_defect.max((v - split).norm());
    }
    Ok(SplittingReport { symmetry_defect, decomposition_defect })
}
