//! Closed-form Szegő, Poisson, Bergman and power kernels on the disc,
//! half-plane and strip; outer functions `F_w = Q_w/√Q(w,w)`, the unimodular
//! factors `h_w = F_w*/(R F_w*)`, the boundary involutions `θ_w = h_w R` and
//! the reflection identity `⟨f*, θ_w f*⟩ = |f(w)|²/Q(w,w)`.
//!
//! Normalizations:
//! * Szegő: `1/(2π(1−zw̄))` on `𝔻`, `(1/2π)·i/(z−w̄)` on `ℂ₊`,
//!   `(i/4β)/sinh(π(z−w̄)/2β)` on `S_β`;
//! * power kernels omit the `1/2π` on `ℂ₊`: `(i/(z−w̄))^s`; on the strip they
//!   are `Q^s`; on the disc `(1/2π)(1−zw̄)^{−s}` (Szegő at `s = 1`, positive
//!   binomial coefficients for every `s > 0`);
//! * Bergman is the square of the Szegő kernel on every domain (the strip
//!   Bergman kernel is exactly `Q²`; on `𝔻` and `ℂ₊` the squared kernel is a
//!   constant multiple of the textbook Bergman kernel).

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::c;
use crate::domains::{BoundaryCoord, BoundaryPoint, Domain, StripComponent};
use crate::error::{fmt_c, Error, Result};
use crate::numerics::gram::GramReport;
use crate::numerics::quad::{circle_trapezoid, double_exponential, gauss_kronrod, quad, Interval};

/// Which kernel family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelKind {
    Szego,
    Bergman,
    Power(f64),
}

/// Default number of boundary nodes (per component) for sampled boundary data.
pub const DEFAULT_BOUNDARY_NODES: usize = 1 << 10;

/// Largest Gram matrix accepted by [`gram_psd`].
pub const MAX_GRAM_POINTS: usize = 512;

/// Szegő kernel closed form without domain checks; extends continuously to
/// boundary arguments off the diagonal.
pub fn szego_unchecked(d: Domain, z: Complex64, w: Complex64) -> Complex64 {
    match d {
        Domain::Disc => (c(1.0, 0.0) - z * w.conj()).inv() / (2.0 * PI),
        Domain::HalfPlane => c(0.0, 1.0 / (2.0 * PI)) / (z - w.conj()),
        Domain::Strip { beta } => c(0.0, 1.0 / (4.0 * beta)) / ((z - w.conj()) * (PI / (2.0 * beta))).sinh(),
    }
}

/// Szegő kernel `Q(z, w)` for interior points.
pub fn szego(d: Domain, z: Complex64, w: Complex64) -> Result<Complex64> {
    d.require_interior(z)?;
    d.require_interior(w)?;
    Ok(szego_unchecked(d, z, w))
}

fn require_boundary_of(d: Domain, x: &BoundaryPoint) -> Result<()> {
    let same = match (d, x.domain) {
        (Domain::Strip { beta: a }, Domain::Strip { beta: b }) => a == b,
        (a, b) => a == b,
    };
    if same {
        Ok(())
    } else {
        Err(Error::OutsideDomain(format!("boundary point of {} used with {}", x.domain.name(), d.name())))
    }
}

/// Poisson kernel `P_z(x)` from the closed forms (always real and positive).
///
/// * disc: `(1−|z|²)/(2π|e^{iθ}−z|²)`;
/// * half-plane: `(1/π)·Im z/|z−x|²`;
/// * strip, lower line: `(1/4β) sin(πy/β) / (sinh²(π(Re z−x)/2β) + sin²(πy/2β))`,
///   upper line: the same with `cos²(πy/2β)`, where `y = Im z`.
pub fn poisson(d: Domain, z: Complex64, x: &BoundaryPoint) -> Result<f64> {
    d.require_interior(z)?;
    require_boundary_of(d, x)?;
    Ok(match (d, x.coord) {
        (Domain::Disc, _) => (1.0 - z.norm_sqr()) / (2.0 * PI * (x.embed() - z).norm_sqr()),
        (Domain::HalfPlane, _) => z.im / (PI * (z - x.embed()).norm_sqr()),
        (Domain::Strip { beta }, BoundaryCoord::Strip(component, t)) => {
            let y = z.im;
            let sh = (PI * (z.re - t) / (2.0 * beta)).sinh();
            let half = PI * y / (2.0 * beta);
            let tail = match component {
                StripComponent::Lower => half.sin().powi(2),
                StripComponent::Upper => half.cos().powi(2),
            };
            (PI * y / beta).sin() / (4.0 * beta * (sh * sh + tail))
        }
        (Domain::Strip { .. }, _) => {
            return Err(Error::OutsideDomain("strip boundary point needs a component".into()));
        }
    })
}

/// Poisson kernel through the Szegő kernel: `|Q(z, x)|² / Q(z, z)`.
pub fn poisson_from_szego(d: Domain, z: Complex64, x: &BoundaryPoint) -> Result<f64> {
    d.require_interior(z)?;
    require_boundary_of(d, x)?;
    let q = szego_unchecked(d, z, x.embed());
    Ok(q.norm_sqr() / szego_unchecked(d, z, z).re)
}

/// Total Poisson mass `∫_{∂Ω} P_z` by adaptive quadrature (both strip lines
/// summed); equals 1.
pub fn poisson_total_mass(d: Domain, z: Complex64, tol: f64) -> Result<f64> {
    d.require_interior(z)?;
    let total = match d {
        Domain::Disc => {
            let f = |t: f64| c(poisson(d, z, &BoundaryPoint::circle(t)).unwrap_or(f64::NAN), 0.0);
            gauss_kronrod(&f, 0.0, 2.0 * PI, tol)?.value.re
        }
        Domain::HalfPlane => {
            let f = |x: f64| c(poisson(d, z, &BoundaryPoint::line(x)).unwrap_or(f64::NAN), 0.0);
            // Split at Re z so the peak sits at the clustered endpoint nodes.
            double_exponential(&f, Interval::To(z.re), tol)?.value.re
                + double_exponential(&f, Interval::From(z.re), tol)?.value.re
        }
        Domain::Strip { beta } => {
            let mut acc = 0.0;
            for comp in [StripComponent::Lower, StripComponent::Upper] {
                let f = |x: f64| c(poisson(d, z, &BoundaryPoint::new(Domain::Strip { beta }, comp, x)).unwrap_or(f64::NAN), 0.0);
                acc += double_exponential(&f, Interval::To(z.re), tol)?.value.re;
                acc += double_exponential(&f, Interval::From(z.re), tol)?.value.re;
            }
            acc
        }
    };
    Ok(total)
}

/// Bergman kernel of the strip, `(1/(4β))²·cosh⁻²(π(z−w̄)/2β − πi/2)`.
pub fn bergman_strip(beta: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    let d = Domain::strip(beta)?;
    d.require_interior(z)?;
    d.require_interior(w)?;
    let u = (z - w.conj()) * (PI / (2.0 * beta)) - c(0.0, PI / 2.0);
    Ok(u.cosh().powi(-2) / (16.0 * beta * beta))
}

/// Principal-branch power; the bases used here have positive real part.
fn principal_pow(base: Complex64, s: f64) -> Complex64 {
    (base.ln() * s).exp()
}

/// Power kernel `Q_s`: `(i/(z−w̄))^s` on `ℂ₊`, `Q^s` on the strip and
/// `(1/2π)(1−zw̄)^{−s}` on the disc (principal branch throughout).
pub fn power_kernel(d: Domain, s: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("power must be positive, got {s}")));
    }
    d.require_interior(z)?;
    d.require_interior(w)?;
    Ok(match d {
        Domain::Disc => principal_pow(c(1.0, 0.0) - z * w.conj(), -s) / (2.0 * PI),
        Domain::HalfPlane => principal_pow(c(0.0, 1.0) / (z - w.conj()), s),
        Domain::Strip { .. } => principal_pow(szego_unchecked(d, z, w), s),
    })
}

/// Dispatches on [`KernelKind`].
pub fn kernel(d: Domain, kind: KernelKind, z: Complex64, w: Complex64) -> Result<Complex64> {
    match kind {
        KernelKind::Szego => szego(d, z, w),
        KernelKind::Bergman => match d {
            Domain::Strip { beta } => bergman_strip(beta, z, w),
            _ => Ok(szego(d, z, w)?.powi(2)),
        },
        KernelKind::Power(s) => power_kernel(d, s, z, w),
    }
}

/// Outer function `F_w(z) = Q(z, w)/√Q(w, w)` for the fixed point `w` encoded
/// by `lambda` (see [`Domain::fixed_point`]); `z` may lie on the boundary.
pub fn outer_f_lambda(d: Domain, lambda: f64, z: Complex64) -> Result<Complex64> {
    let w = d.fixed_point(lambda)?;
    if !d.closure_contains(z) {
        return Err(Error::OutsideDomain(fmt_c(z)));
    }
    Ok(szego_unchecked(d, z, w) / szego_unchecked(d, w, w).re.sqrt())
}

/// Unimodular factor `h_w(x)` from its closed forms:
/// `(1−λe^{−it})/(1−λe^{it})` on the circle, `(iλ−x)/(iλ+x)` on the line and,
/// on the strip, `cosh(a + iπ/4)/cosh(a − iπ/4) = (1 + i·tanh a)/(1 − i·tanh a)`
/// with `a = π(x−λ)/2β` on the lower line (its conjugate on the upper line).
pub fn h_lambda(d: Domain, lambda: f64, x: &BoundaryPoint) -> Result<Complex64> {
    d.fixed_point(lambda)?;
    require_boundary_of(d, x)?;
    Ok(match (d, x.coord) {
        (Domain::Disc, BoundaryCoord::Angle(t)) => {
            (c(1.0, 0.0) - c(0.0, -t).exp() * lambda) / (c(1.0, 0.0) - c(0.0, t).exp() * lambda)
        }
        (Domain::HalfPlane, BoundaryCoord::Real(t)) => c(-t, lambda) / c(t, lambda),
        (Domain::Strip { beta }, BoundaryCoord::Strip(comp, t)) => {
            let th = (PI * (t - lambda) / (2.0 * beta)).tanh();
            let h = c(1.0, th) / c(1.0, -th);
            match comp {
                StripComponent::Lower => h,
                StripComponent::Upper => h.conj(),
            }
        }
        _ => return Err(Error::OutsideDomain("boundary coordinate does not match the domain".into())),
    })
}

/// `h_w = F_w*/(R F_w*)` computed literally from the outer function; fails
/// with `ZeroDenominator` where `F_w(σx)` vanishes numerically.
pub fn h_lambda_from_outer(d: Domain, lambda: f64, x: &BoundaryPoint) -> Result<Complex64> {
    require_boundary_of(d, x)?;
    let num = outer_f_lambda(d, lambda, x.embed())?;
    let den = outer_f_lambda(d, lambda, x.reflect().embed())?;
    if den.norm() == 0.0 || !den.norm().is_finite() {
        return Err(Error::ZeroDenominator(format!("F_w vanishes at {}", fmt_c(x.reflect().embed()))));
    }
    Ok(num / den)
}

type Sampler = dyn Fn(&BoundaryPoint) -> Complex64 + Send + Sync;

/// Boundary data `f*` on `∂Ω` together with the quadrature resolution used
/// for inner products.
#[derive(Clone)]
pub struct BoundaryFunction {
    domain: Domain,
    nodes: usize,
    sampler: Arc<Sampler>,
}

impl std::fmt::Debug for BoundaryFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundaryFunction").field("domain", &self.domain).field("nodes", &self.nodes).finish()
    }
}

impl BoundaryFunction {
    pub fn new<F>(domain: Domain, nodes: usize, sampler: F) -> Self
    where
        F: Fn(&BoundaryPoint) -> Complex64 + Send + Sync + 'static,
    {
        BoundaryFunction { domain, nodes: nodes.max(1), sampler: Arc::new(sampler) }
    }

    /// Boundary values of a function given by a formula on the closed domain.
    pub fn from_formula<F>(domain: Domain, nodes: usize, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(domain, nodes, move |x: &BoundaryPoint| f(x.embed()))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn eval(&self, x: &BoundaryPoint) -> Complex64 {
        (self.sampler)(x)
    }

    /// Sample points: equispaced angles on the circle; on lines
    /// `x_j = tan(π((j+½)/n − ½))`, on each strip component.
    pub fn sample_points(&self) -> Vec<BoundaryPoint> {
        let n = self.nodes;
        let line = |j: usize| (PI * ((j as f64 + 0.5) / n as f64 - 0.5)).tan();
        match self.domain {
            Domain::Disc => (0..n).map(|j| BoundaryPoint::circle(2.0 * PI * j as f64 / n as f64)).collect(),
            Domain::HalfPlane => (0..n).map(|j| BoundaryPoint::line(line(j))).collect(),
            Domain::Strip { beta } => (0..n)
                .flat_map(|j| [BoundaryPoint::lower(beta, line(j)), BoundaryPoint::upper(beta, line(j))])
                .collect(),
        }
    }

    /// `⟨self, other⟩ = ∫_{∂Ω} conj(self)·other`, conjugate-linear in the first
    /// slot: trapezoid rule with `nodes` points on the circle, double-exponential
    /// quadrature on lines (both strip components summed).
    pub fn inner(&self, other: &BoundaryFunction, tol: f64) -> Result<Complex64> {
        let integrand = |p: &BoundaryPoint| self.eval(p).conj() * other.eval(p);
        Ok(match self.domain {
            Domain::Disc => circle_trapezoid(|t| integrand(&BoundaryPoint::circle(t)), self.nodes),
            Domain::HalfPlane => quad(|x| integrand(&BoundaryPoint::line(x)), Interval::Whole, tol)?.value,
            Domain::Strip { beta } => {
                quad(|x| integrand(&BoundaryPoint::lower(beta, x)), Interval::Whole, tol)?.value
                    + quad(|x| integrand(&BoundaryPoint::upper(beta, x)), Interval::Whole, tol)?.value
            }
        })
    }

    /// Largest pointwise deviation from `other` over [`Self::sample_points`].
    pub fn max_deviation(&self, other: &BoundaryFunction) -> f64 {
        self.sample_points().iter().map(|p| (self.eval(p) - other.eval(p)).norm()).fold(0.0, f64::max)
    }
}

/// `θ_w f = h_w · (f∘σ)` on the boundary, with `w` encoded by `lambda`.
pub fn theta_w(d: Domain, lambda: f64, f: &BoundaryFunction) -> Result<BoundaryFunction> {
    d.fixed_point(lambda)?;
    let g = f.clone();
    Ok(BoundaryFunction::new(d, f.nodes(), move |x: &BoundaryPoint| {
        let h = h_lambda(d, lambda, x).unwrap_or(c(f64::NAN, f64::NAN));
        h * g.eval(&x.reflect())
    }))
}

/// Both sides of `⟨f*, θ_w f*⟩ = |f(w)|²/Q(w,w)` for `f = F·Q_w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionIdentity {
    pub lhs: Complex64,
    pub rhs: f64,
    pub defect: f64,
}

/// Evaluates the reflection identity for `f = F·Q_w` by boundary quadrature.
pub fn reflection_identity<F>(d: Domain, lambda: f64, big_f: F, nodes: usize) -> Result<ReflectionIdentity>
where
    F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
{
    let w = d.fixed_point(lambda)?;
    let f = move |z: Complex64| big_f(z) * szego_unchecked(d, z, w);
    let fw = f(w);
    let fb = BoundaryFunction::from_formula(d, nodes, f);
    let lhs = fb.inner(&theta_w(d, lambda, &fb)?, 1e-13)?;
    let rhs = fw.norm_sqr() / szego_unchecked(d, w, w).re;
    Ok(ReflectionIdentity { lhs, rhs, defect: (lhs - c(rhs, 0.0)).norm() })
}

/// Outer function on `ℂ₊` with prescribed boundary modulus `Ψ^{1/2}`:
/// `exp((1/2πi) ∫ [1/(p−z) − p/(1+p²)] log Ψ(p) dp)`.
///
/// The integral is split at `|p − Re z| < 10⁻³`: the middle piece uses
/// (symmetric) Gauss–Kronrod nodes, the two half-lines double-exponential
/// rules that cluster at the split points. Beyond `|p| = 10³⁰`, where a
/// decaying `Ψ` may underflow to zero, the integrand is dropped.
pub fn outer_from_modulus<F: Fn(f64) -> f64>(psi: F, z: Complex64) -> Result<Complex64> {
    Domain::HalfPlane.require_interior(z)?;
    const DELTA: f64 = 1e-3;
    const FAR_TAIL: f64 = 1e30;
    let bad = std::cell::Cell::new(None::<f64>);
    let integrand = |p: f64| {
        let v = psi(p);
        if p.abs() > FAR_TAIL && !(v > 0.0 && v.is_finite()) {
            // Ψ underflowed far out; the kernel factor there is O(|z|/p²).
            return c(0.0, 0.0);
        }
        if !(v > 0.0 && v.is_finite()) {
            if bad.get().is_none() {
                bad.set(Some(p));
            }
            return c(0.0, 0.0);
        }
        ((c(p, 0.0) - z).inv() - c(p / (1.0 + p * p), 0.0)) * v.ln()
    };
    let a = z.re;
    let tol = 1e-12;
    let map_err = |e: Error| match e {
        Error::ToleranceNotReached(m) => Error::DivergentLogIntegral(m),
        other => other,
    };
    let left = double_exponential(&integrand, Interval::To(a - DELTA), tol).map_err(map_err)?;
    let mid = gauss_kronrod(&integrand, a - DELTA, a + DELTA, tol).map_err(map_err)?;
    let right = double_exponential(&integrand, Interval::From(a + DELTA), tol).map_err(map_err)?;
    if let Some(p) = bad.get() {
        return Err(Error::NonPositiveModulus(format!("Ψ({p}) is not positive")));
    }
    let total = left.value + mid.value + right.value;
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::DivergentLogIntegral("non-finite integral".into()));
    }
    Ok((total / c(0.0, 2.0 * PI)).exp())
}

/// Gram matrix `K(z_j, z_k)` of up to [`MAX_GRAM_POINTS`] interior points.
pub fn gram_matrix(points: &[Complex64], kind: KernelKind, d: Domain) -> Result<DMatrix<Complex64>> {
    if points.len() > MAX_GRAM_POINTS {
        return Err(Error::ParameterOutOfRange(format!("at most {MAX_GRAM_POINTS} points, got {}", points.len())));
    }
    for &z in points {
        d.require_interior(z)?;
    }
    let n = points.len();
    let mut g = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            g[(j, k)] = kernel(d, kind, points[j], points[k])?;
        }
    }
    Ok(g)
}

/// Positive-semidefiniteness report for the kernel's Gram matrix.
pub fn gram_psd(points: &[Complex64], kind: KernelKind, d: Domain) -> Result<GramReport> {
    Ok(GramReport::from_matrix(&gram_matrix(points, kind, d)?))
}
