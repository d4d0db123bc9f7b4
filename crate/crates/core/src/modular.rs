//! Finite-dimensional models of modular data: for a measure `ν` satisfying
//! the β-reflection relation, the space `L²(ℝ, ν)` is discretized on the
//! atoms and grid nodes of `ν`, carrying `Δ = e^{−βλ}`,
//! `(Jf)(λ) = e^{−βλ/2}·conj(f(−λ))` and the standard subspace
//! `V = {f : f(λ) = conj(f(−λ))}`.  Also: matrix coefficients of the modular
//! flow, the midline Hardy-space coefficient, and a discrete check of the
//! canonical commutation relation between translations and multiplications.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::c;
use crate::error::{Error, Result};
use crate::measures::{reflection_check, MeasureOnR, ReflectionClass, ReflectionOrder};
use crate::numerics::gram::GramReport;
use crate::numerics::quad::{quad, Interval};

/// Largest reflection defect accepted by [`build_modular`].
pub const REFLECTION_TOL: f64 = 1e-10;

/// Largest defect for which a vector counts as a member of `V`.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// `L²(ℝ, ν)` restricted to the atoms and positive-weight grid nodes of `ν`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizedSpace {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `mirror[j]` is the index of the node `−nodes[j]`.
    pub mirror: Vec<usize>,
}

impl DiscretizedSpace {
    /// Collects atoms and grid nodes (trapezoid weight × density) of a measure
    /// whose atom set and grid are symmetric; mirror pairs in which either
    /// weight vanishes are dropped.
    pub fn from_measure(nu: &MeasureOnR) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut mirror = Vec::new();
        let mut push_group = |pts: Vec<(f64, f64)>| -> Result<()> {
            let n = pts.len();
            let keep: Vec<bool> = (0..n).map(|j| pts[j].1 > 0.0 && pts[n - 1 - j].1 > 0.0).collect();
            let mut index = vec![usize::MAX; n];
            for j in 0..n {
                let (a, b) = (pts[j].0, pts[n - 1 - j].0);
                if (a + b).abs() > 1e-12 * a.abs().max(1.0) {
                    return Err(Error::ReflectionViolation(format!("node {a} has no mirror node")));
                }
                if keep[j] {
                    index[j] = nodes.len();
                    nodes.push(pts[j].0);
                    weights.push(pts[j].1);
                }
            }
            for j in 0..n {
                if keep[j] {
                    mirror.push(index[n - 1 - j]);
                }
            }
            Ok(())
        };
        push_group(nu.atoms().iter().map(|a| (a.location, a.weight)).collect())?;
        if let Some(d) = nu.density() {
            if !d.is_symmetric() {
                return Err(Error::ReflectionViolation("density grid is not symmetric about 0".into()));
            }
            push_group((0..d.len()).map(|j| (d.node(j), d.weight(j) * d.values[j])).collect())?;
        }
        Ok(DiscretizedSpace { nodes, weights, mirror })
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    /// `⟨u, v⟩ = Σ_j w_j conj(u_j) v_j`.
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        self.weights.iter().zip(u.iter().zip(v)).map(|(w, (a, b))| a.conj() * b * *w).sum()
    }

    pub fn norm(&self, v: &[Complex64]) -> f64 {
        self.inner(v, v).re.max(0.0).sqrt()
    }

    /// Samples `f` at the nodes.
    pub fn sample<F: Fn(f64) -> Complex64>(&self, f: F) -> Vec<Complex64> {
        self.nodes.iter().map(|&l| f(l)).collect()
    }
}

/// `Δ` and `J` on a [`DiscretizedSpace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularData {
    pub beta: f64,
    pub space: DiscretizedSpace,
    /// Diagonal of `Δ`: `e^{−βλ_j}`.
    pub delta: Vec<f64>,
}

/// Builds the modular data of `ν`; requires the β-reflection relation with
/// relative defect below [`REFLECTION_TOL`].
pub fn build_modular(nu: &MeasureOnR, beta: f64) -> Result<ModularData> {
    let report = reflection_check(nu, ReflectionClass::new(beta, ReflectionOrder::Beta)?);
    if !(report.max_relative_defect < REFLECTION_TOL) {
        return Err(Error::ReflectionViolation(format!(
            "reflection defect {:e} exceeds {REFLECTION_TOL:e}",
            report.max_relative_defect
        )));
    }
    let space = DiscretizedSpace::from_measure(nu)?;
    let delta = space.nodes.iter().map(|&l| (-beta * l).exp()).collect();
    Ok(ModularData { beta, space, delta })
}

impl ModularData {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `(Δ^p v)_j = e^{−pβλ_j} v_j` for real `p`.
    pub fn delta_power(&self, p: f64, v: &[Complex64]) -> Vec<Complex64> {
        self.space.nodes.iter().zip(v).map(|(&l, x)| x * (-p * self.beta * l).exp()).collect()
    }

    /// `Δ v`.
    pub fn apply_delta(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.delta.iter().zip(v).map(|(d, x)| x * *d).collect()
    }

    /// `(J v)_j = e^{−βλ_j/2} conj(v_{mirror(j)})`.
    pub fn apply_j(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim()).map(|j| v[self.space.mirror[j]].conj() * (-0.5 * self.beta * self.space.nodes[j]).exp()).collect()
    }

    /// The Tomita operator `J Δ^{1/2}`, i.e. `v_j ↦ conj(v_{mirror(j)})`.
    pub fn tomita(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.apply_j(&self.delta_power(0.5, v))
    }

    /// Modular flow `Δ^{−it/β}`: multiplication by `e^{itλ}`.
    pub fn modular_flow(&self, v: &[Complex64], t: f64) -> Vec<Complex64> {
        self.space.nodes.iter().zip(v).map(|(&l, x)| x * c(0.0, t * l).exp()).collect()
    }

    /// `max |J Δ J v − Δ^{−1} v|`, relative to `max |Δ^{−1} v|`.
    pub fn jdj_defect(&self, v: &[Complex64]) -> f64 {
        let lhs = self.apply_j(&self.apply_delta(&self.apply_j(v)));
        let rhs = self.delta_power(-1.0, v);
        let scale = rhs.iter().map(|x| x.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
    }
}

/// Outcome of [`standard_membership`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    /// `max_j |v(λ_j) − conj(v(−λ_j))|`.
    pub defect: f64,
}

/// Tests `v ∈ V = {f : f(λ) = conj(f(−λ))}`.
pub fn standard_membership(md: &ModularData, v: &[Complex64]) -> Membership {
    let defect = (0..md.dim()).map(|j| (v[j] - v[md.space.mirror[j]].conj()).norm()).fold(0.0, f64::max);
    Membership { member: defect < MEMBERSHIP_TOL, defect }
}

/// `ψ(t) = ⟨v, Δ^{−it/β} v⟩ = Σ_j w_j |v_j|² e^{itλ_j}`.
pub fn modular_coefficient(md: &ModularData, v: &[Complex64], t: f64) -> Complex64 {
    md.space.inner(v, &md.modular_flow(v, t))
}

/// The spectral measure `Σ_j w_j |v_j|² δ_{λ_j}` of `ψ`, whose transform is `ψ`.
pub fn psi_measure(md: &ModularData, v: &[Complex64]) -> Result<MeasureOnR> {
    let atoms = md.space.nodes.iter().zip(&md.space.weights).zip(v).map(|((&l, &w), x)| (l, w * x.norm_sqr())).collect();
    MeasureOnR::atomic(atoms)
}

/// Gram report of `ψ(t_j − t_k)`.
pub fn psi_gram(md: &ModularData, v: &[Complex64], ts: &[f64]) -> GramReport {
    let n = ts.len();
    GramReport::from_matrix(&DMatrix::from_fn(n, n, |j, k| modular_coefficient(md, v, ts[j] - ts[k])))
}

/// Closed form of the midline coefficient:
/// `ψ(t) = (1/8πβ)·πξ/sinh(πξ/2)` with `ξ = 2t/β − i`; `ψ(0) = 1/(8β)`.
pub fn psi_hardy_midline_closed(beta: f64, t: f64) -> Complex64 {
    let xi = c(2.0 * t / beta, -1.0);
    xi * PI / (xi * (PI / 2.0)).sinh() / (8.0 * PI * beta)
}

const MIDLINE_TOL: f64 = 1e-13;

fn require_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("β must be positive, got {beta}")))
    }
}

/// `ψ(t) = ⟨Q_{βi/2}, Δ^{−it/β} Q_{βi/2}⟩` for the strip Szegő kernel, by
/// quadrature of `(1/4π)∫ e^{−βλ/2}/(1 + e^{−βλ})² e^{itλ} dλ`.
pub fn psi_hardy_midline(beta: f64, t: f64) -> Result<Complex64> {
    require_beta(beta)?;
    // e^{−βλ/2}/(1 + e^{−βλ})² = 1/(4 cosh²(βλ/2)) · e^{βλ/2}, evaluated stably.
    let f = |l: f64| {
        let u = 0.5 * beta * l;
        let mag = (u - 2.0 * u.abs()).exp() / (1.0 + (-2.0 * u.abs()).exp()).powi(2);
        c(0.0, t * l).exp() * mag
    };
    Ok(quad(f, Interval::Whole, MIDLINE_TOL)?.value / (4.0 * PI))
}

/// The coefficient of [`psi_hardy_midline`] computed three ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidlineForms {
    /// `(1/4π)∫ e^{−βλ/2}/(1 + e^{−βλ})² e^{itλ} dλ`.
    pub half_spectrum: Complex64,
    /// `(1/2π)∫ e^{−βλ}/(1 + e^{−2βλ})² e^{2itλ} dλ`.
    pub full_spectrum: Complex64,
    /// `∫ conj(Q_{βi/2}(x)) Q_{βi/2}(x + 2t) dx` on the boundary line.
    pub inner_product: Complex64,
    pub closed_form: Complex64,
    /// Largest pairwise difference among the four values.
    pub defect: f64,
}

/// Evaluates all forms of the midline coefficient at `t`.
pub fn psi_hardy_midline_forms(beta: f64, t: f64) -> Result<MidlineForms> {
    require_beta(beta)?;
    let half_spectrum = psi_hardy_midline(beta, t)?;
    let g = |l: f64| {
        let u = beta * l;
        let mag = (u - 2.0 * u.abs()).exp() / (1.0 + (-2.0 * u.abs()).exp()).powi(2);
        c(0.0, 2.0 * t * l).exp() * mag
    };
    let full_spectrum = quad(g, Interval::Whole, MIDLINE_TOL)?.value / (2.0 * PI);
    let q = |x: f64| c(0.0, 1.0 / (4.0 * beta)) / (c(x, beta / 2.0) * (PI / (2.0 * beta))).sinh();
    let h = |x: f64| q(x).conj() * q(x + 2.0 * t);
    let inner_product = quad(h, Interval::Whole, MIDLINE_TOL)?.value;
    let closed_form = psi_hardy_midline_closed(beta, t);
    let vals = [half_spectrum, full_spectrum, inner_product, closed_form];
    let mut defect: f64 = 0.0;
    for a in &vals {
        for b in &vals {
            defect = defect.max((a - b).norm());
        }
    }
    Ok(MidlineForms { half_spectrum, full_spectrum, inner_product, closed_form, defect })
}

/// Outcome of [`commutation_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub period: f64,
    pub nodes: usize,
    pub shift: f64,
    /// Whether the shift is a whole number of grid steps (exact permutation).
    pub exact_shift: bool,
    /// `(t, defect)` pairs.
    pub defects: Vec<(f64, f64)>,
    pub max_defect: f64,
}

/// Period of the grid used by [`commutation_check`].
pub const COMMUTATION_PERIOD: f64 = 40.0;

/// Translation `(V_s f)(x_j) = f(x_j + s)` on the periodic grid: an index
/// permutation when `s` is a multiple of the step, otherwise a spectral
/// (trigonometric-interpolation) shift.
fn periodic_shift(f: &[Complex64], s: f64, period: f64) -> (Vec<Complex64>, bool) {
    let n = f.len();
    let h = period / n as f64;
    let m = (s / h).round();
    if (s / h - m).abs() <= 1e-12 * m.abs().max(1.0) {
        let m = m.rem_euclid(n as f64) as usize;
        return ((0..n).map(|j| f[(j + m) % n]).collect(), true);
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut buf = f.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, x) in buf.iter_mut().enumerate() {
        let freq = if 2 * k < n {
            k as f64
        } else if 2 * k == n {
            0.0
        } else {
            k as f64 - n as f64
        };
        *x *= c(0.0, 2.0 * PI * freq * s / period).exp() / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    (buf, false)
}

/// Checks `V_s U_t = e^{its} U_t V_s` for `U_t = diag(e^{itx_j})` and the
/// periodic translation `V_s`, on a grid of period [`COMMUTATION_PERIOD`]
/// with `n_nodes` nodes, `s = β` and `t ∈ {0.1, 1, 10}`.
pub fn commutation_check(beta: f64, n_nodes: usize) -> Result<CommutationReport> {
    commutation_check_with(beta, &[0.1, 1.0, 10.0], n_nodes)
}

/// [`commutation_check`] for an explicit shift and list of `t`.
///
/// Test vectors are Gaussians centred well inside the period; the defect is
/// the largest deviation over the central half of the nodes, relative to the
/// sup norm of the vector.
pub fn commutation_check_with(s: f64, ts: &[f64], n_nodes: usize) -> Result<CommutationReport> {
    if n_nodes < 16 {
        return Err(Error::ParameterOutOfRange(format!("at least 16 nodes required, got {n_nodes}")));
    }
    if !(s.abs() < COMMUTATION_PERIOD / 8.0) {
        return Err(Error::ParameterOutOfRange(format!("shift must be below {} in modulus, got {s}", COMMUTATION_PERIOD / 8.0)));
    }
    let period = COMMUTATION_PERIOD;
    let h = period / n_nodes as f64;
    let xs: Vec<f64> = (0..n_nodes).map(|j| -period / 2.0 + j as f64 * h).collect();
    let interior: Vec<usize> = (0..n_nodes).filter(|&j| xs[j].abs() <= period / 4.0).collect();
    let centres = [-3.0, 0.0, 2.5];
    let mut defects = Vec::with_capacity(ts.len());
    let mut exact_shift = false;
    for &t in ts {
        let mut worst: f64 = 0.0;
        for &x0 in &centres {
            let f: Vec<Complex64> = xs.iter().map(|&x| c((-(x - x0) * (x - x0)).exp(), 0.0)).collect();
            let u = |g: &[Complex64]| -> Vec<Complex64> { g.iter().zip(&xs).map(|(v, &x)| v * c(0.0, t * x).exp()).collect() };
            let (lhs, exact) = periodic_shift(&u(&f), s, period);
            let (vs, _) = periodic_shift(&f, s, period);
            let rhs: Vec<Complex64> = u(&vs).iter().map(|v| v * c(0.0, t * s).exp()).collect();
            exact_shift = exact;
            let scale = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let d = interior.iter().map(|&j| (lhs[j] - rhs[j]).norm()).fold(0.0, f64::max) / scale;
            worst = worst.max(d);
        }
        defects.push((t, worst));
    }
    let max_defect = defects.iter().map(|d| d.1).fold(0.0, f64::max);
    Ok(CommutationReport { period, nodes: n_nodes, shift: s, exact_shift, defects, max_defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{capital_gamma_map, fourier, half_twist, kms_check, szego_measure};

    fn two_point(lambda: f64, beta: f64) -> ModularData {
        build_modular(&capital_gamma_map(&MeasureOnR::dirac(lambda).unwrap(), beta).unwrap(), beta).unwrap()
    }

    #[test]
    fn two_point_space() {
        let (lambda, beta) = (0.8, 1.5);
        let md = two_point(lambda, beta);
        assert_eq!(md.dim(), 2);
        assert_eq!(md.space.nodes, vec![-lambda, lambda]);
        assert!((md.delta[0] - (beta * lambda).exp()).abs() < 1e-14);
        assert!((md.delta[1] - (-beta * lambda).exp()).abs() < 1e-16);
        let v = vec![c(0.3, -1.2), c(2.0, 0.7)];
        assert!((md.space.norm(&md.apply_j(&v)) - md.space.norm(&v)).abs() < 1e-12);
        assert!(md.jdj_defect(&v) < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let md = build_modular(&half_twist(&szego_measure(1.0).unwrap(), 1.0).unwrap(), 1.0).unwrap();
        let one = md.space.sample(|_| c(1.0, 0.0));
        assert!(standard_membership(&md, &one).member);
        let il = md.space.sample(|l| c(0.0, l));
        assert!(standard_membership(&md, &il).member);
        let i = md.space.sample(|_| c(0.0, 1.0));
        let m = standard_membership(&md, &i);
        assert!(!m.member && (m.defect - 2.0).abs() < 1e-15);
        let fixed = md.tomita(&il);
        assert!(il.iter().zip(&fixed).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn reflection_violation_rejected() {
        assert!(matches!(build_modular(&MeasureOnR::dirac(1.0).unwrap(), 1.0), Err(Error::ReflectionViolation(_))));
    }

    #[test]
    fn coefficient_matches_transform_and_is_kms() {
        let (lambda, beta) = (0.8, 1.5);
        let nu = capital_gamma_map(&MeasureOnR::dirac(lambda).unwrap(), beta).unwrap();
        let md = build_modular(&nu, beta).unwrap();
        let v = vec![c(1.0, 0.0); 2];
        for t in [-1.0, 0.0, 0.7, 3.0] {
            let psi = modular_coefficient(&md, &v, t);
            assert!((psi - fourier(&nu, c(t, 0.0)).unwrap()).norm() < 1e-15);
        }
        let w = vec![c(0.5, 1.0), c(0.5, -1.0)];
        let m = psi_measure(&md, &w).unwrap();
        let ts: Vec<f64> = (-4..=4).map(|k| k as f64 * 0.5).collect();
        assert!(kms_check(&m, beta, &ts).unwrap().max_defect < 1e-10);
        assert!(psi_gram(&md, &w, &ts).verdict);
    }

    #[test]
    fn midline_forms_agree() {
        let beta = 1.3;
        assert!((psi_hardy_midline_closed(beta, 0.0) - c(1.0 / (8.0 * beta), 0.0)).norm() < 1e-16);
        for t in [0.0, 0.5, 1.0] {
            let f = psi_hardy_midline_forms(beta, t).unwrap();
            assert!(f.defect < 1e-8, "{f:?}");
        }
        let a = psi_hardy_midline(beta, 0.7).unwrap();
        let b = psi_hardy_midline(beta, -0.7).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn commutation_examples() {
        let n = 4096;
        let h = COMMUTATION_PERIOD / n as f64;
        let r = commutation_check_with(37.0 * h, &[0.0, 1.0, 10.0], n).unwrap();
        assert!(r.exact_shift && r.max_defect < 1e-12, "{r:?}");
        let r = commutation_check(1.0, n).unwrap();
        assert!(r.max_defect < 1e-8, "{r:?}");
        let r = commutation_check_with(0.77, &[0.0], n).unwrap();
        assert!(r.max_defect < 1e-12);
    }
}
