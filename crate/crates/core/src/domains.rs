//! The three canonical domains — unit disc `𝔻`, upper half-plane `ℂ₊` and
//! strip `S_β = {0 < Im z < β}` — with their antiholomorphic involutions,
//! boundary parametrizations, conformal maps and the unitary Hardy-space
//! transfers between them.
//!
//! Involutions: `σ(z) = z̄` on the disc (fixed set `(−1, 1)`), `σ(z) = −z̄` on
//! the half-plane (fixed set `iℝ₊`) and `σ(z) = βi + z̄` on the strip (fixed
//! set the midline `βi/2 + ℝ`).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::c;
use crate::error::{fmt_c, Error, Result};

/// Points closer than this to the boundary are not interior.
pub const BOUNDARY_TOL: f64 = 1e-13;

/// One of the three canonical domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Domain {
    Disc,
    HalfPlane,
    Strip { beta: f64 },
}

impl Domain {
    /// The strip of height `beta`; fails unless `beta` is finite and positive.
    pub fn strip(beta: f64) -> Result<Domain> {
        if beta.is_finite() && beta > 0.0 {
            Ok(Domain::Strip { beta })
        } else {
            Err(Error::ParameterOutOfRange(format!("strip height must be positive, got {beta}")))
        }
    }

    /// Strip height, if this is a strip.
    pub fn beta(&self) -> Option<f64> {
        match *self {
            Domain::Strip { beta } => Some(beta),
            _ => None,
        }
    }

    /// `true` iff `z` lies in the open domain, at least [`BOUNDARY_TOL`] away
    /// from the boundary.
    pub fn contains(&self, z: Complex64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        match *self {
            Domain::Disc => z.norm() < 1.0 - BOUNDARY_TOL,
            Domain::HalfPlane => z.im > BOUNDARY_TOL,
            Domain::Strip { beta } => z.im > BOUNDARY_TOL && z.im < beta - BOUNDARY_TOL,
        }
    }

    /// `true` iff `z` lies in the closed domain (interior or boundary).
    pub fn closure_contains(&self, z: Complex64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        match *self {
            Domain::Disc => z.norm() <= 1.0 + BOUNDARY_TOL,
            Domain::HalfPlane => z.im >= -BOUNDARY_TOL,
            Domain::Strip { beta } => z.im >= -BOUNDARY_TOL && z.im <= beta + BOUNDARY_TOL,
        }
    }

    /// Fails with `OutsideDomain` unless `z` is interior.
    pub fn require_interior(&self, z: Complex64) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(format!("{} not in {}", fmt_c(z), self.name())))
        }
    }

    /// The antiholomorphic involution `σ`; defined on all of `ℂ`.
    pub fn sigma(&self, z: Complex64) -> Complex64 {
        match *self {
            Domain::Disc => z.conj(),
            Domain::HalfPlane => -z.conj(),
            Domain::Strip { beta } => c(z.re, beta - z.im),
        }
    }

    /// `true` iff `z` is within `tol` of the fixed-point set of `σ` in the domain.
    pub fn is_fixed(&self, z: Complex64, tol: f64) -> bool {
        self.contains(z) && (self.sigma(z) - z).norm() <= tol
    }

    /// Encodes a real parameter as a point of the fixed-point set: `λ` for the
    /// disc (`|λ| < 1`), `iλ` for the half-plane (`λ > 0`) and `βi/2 + λ` for
    /// the strip.
    pub fn fixed_point(&self, lambda: f64) -> Result<Complex64> {
        let w = match *self {
            Domain::Disc => c(lambda, 0.0),
            Domain::HalfPlane => c(0.0, lambda),
            Domain::Strip { beta } => c(lambda, beta / 2.0),
        };
        if self.contains(w) {
            Ok(w)
        } else {
            Err(Error::OutsideDomain(format!("fixed-point parameter {lambda} invalid for {}", self.name())))
        }
    }

    /// Human-readable name.
    pub fn name(&self) -> String {
        match *self {
            Domain::Disc => "disc".into(),
            Domain::HalfPlane => "half-plane".into(),
            Domain::Strip { beta } => format!("strip(β={beta})"),
        }
    }
}

/// Which boundary line of the strip a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StripComponent {
    /// `Im z = 0`.
    Lower,
    /// `Im z = β`.
    Upper,
}

/// Boundary coordinate: angle on the circle, abscissa on the real line, or
/// (component, abscissa) on the strip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryCoord {
    Angle(f64),
    Real(f64),
    Strip(StripComponent, f64),
}

/// A point of `∂Ω` in the domain's own parametrization.
///
/// Strip boundary data are stored as the ordered pair (lower, upper); the
/// point `x` on the lower line is `x`, on the upper line `βi + x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub domain: Domain,
    pub coord: BoundaryCoord,
}

impl BoundaryPoint {
    /// `e^{iθ}` on the unit circle.
    pub fn circle(theta: f64) -> Self {
        BoundaryPoint { domain: Domain::Disc, coord: BoundaryCoord::Angle(theta) }
    }

    /// `x ∈ ℝ = ∂ℂ₊`.
    pub fn line(x: f64) -> Self {
        BoundaryPoint { domain: Domain::HalfPlane, coord: BoundaryCoord::Real(x) }
    }

    /// `x` on the lower strip boundary.
    pub fn lower(beta: f64, x: f64) -> Self {
        BoundaryPoint { domain: Domain::Strip { beta }, coord: BoundaryCoord::Strip(StripComponent::Lower, x) }
    }

    /// `βi + x` on the upper strip boundary.
    pub fn upper(beta: f64, x: f64) -> Self {
        BoundaryPoint { domain: Domain::Strip { beta }, coord: BoundaryCoord::Strip(StripComponent::Upper, x) }
    }

    /// Builds a boundary point from a domain and a real coordinate; strips
    /// additionally need the component.
    pub fn new(domain: Domain, component: StripComponent, t: f64) -> Self {
        match domain {
            Domain::Disc => Self::circle(t),
            Domain::HalfPlane => Self::line(t),
            Domain::Strip { beta } => match component {
                StripComponent::Lower => Self::lower(beta, t),
                StripComponent::Upper => Self::upper(beta, t),
            },
        }
    }

    /// The point as a complex number; lands on `∂Ω` exactly.
    pub fn embed(&self) -> Complex64 {
        match (self.domain, self.coord) {
            (_, BoundaryCoord::Angle(t)) => c(t.cos(), t.sin()),
            (_, BoundaryCoord::Real(x)) => c(x, 0.0),
            (Domain::Strip { beta }, BoundaryCoord::Strip(StripComponent::Upper, x)) => c(x, beta),
            (_, BoundaryCoord::Strip(_, x)) => c(x, 0.0),
        }
    }

    /// The real coordinate (angle or abscissa).
    pub fn parameter(&self) -> f64 {
        match self.coord {
            BoundaryCoord::Angle(t) | BoundaryCoord::Real(t) | BoundaryCoord::Strip(_, t) => t,
        }
    }

    /// `σ` restricted to the boundary: `θ ↦ −θ`, `x ↦ −x`, and lower `x` ↔ upper `x`.
    pub fn reflect(&self) -> Self {
        let coord = match self.coord {
            BoundaryCoord::Angle(t) => BoundaryCoord::Angle(-t),
            BoundaryCoord::Real(x) => BoundaryCoord::Real(-x),
            BoundaryCoord::Strip(StripComponent::Lower, x) => BoundaryCoord::Strip(StripComponent::Upper, x),
            BoundaryCoord::Strip(StripComponent::Upper, x) => BoundaryCoord::Strip(StripComponent::Lower, x),
        };
        BoundaryPoint { domain: self.domain, coord }
    }
}

/// Cayley transform `ω(z) = i(1+z)/(1−z)`, mapping `𝔻` onto `ℂ₊`.
pub fn cayley(z: Complex64) -> Result<Complex64> {
    let d = c(1.0, 0.0) - z;
    if d.norm() == 0.0 {
        return Err(Error::PoleAtInput(fmt_c(z)));
    }
    Ok(c(0.0, 1.0) * (c(1.0, 0.0) + z) / d)
}

/// Inverse Cayley transform `(w − i)/(w + i)`.
pub fn cayley_inv(w: Complex64) -> Result<Complex64> {
    let d = w + c(0.0, 1.0);
    if d.norm() == 0.0 {
        return Err(Error::PoleAtInput(fmt_c(w)));
    }
    Ok((w - c(0.0, 1.0)) / d)
}

/// `Exp(z) = exp(πz/β)`, mapping `S_β` onto `ℂ₊`.
pub fn strip_exp(beta: f64, z: Complex64) -> Complex64 {
    (z * (PI / beta)).exp()
}

/// `(β/π)·log w` on the principal branch; rejects `w ∈ (−∞, 0]`.
pub fn strip_log(beta: f64, w: Complex64) -> Result<Complex64> {
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::BranchCutViolation(fmt_c(w)));
    }
    Ok(w.ln() * (beta / PI))
}

/// The unitary transfer `H²(src) → H²(dst)`, `f ↦ √(φ′)·(f∘φ)` with
/// `φ: dst → src` one of the standard maps (or their composition):
///
/// * disc → half-plane: `(Γf)(z) = √(2i)/(z+i) · f((z−i)/(z+i))`;
/// * half-plane → disc: `(Γ⁻¹f)(z) = √(2i)/(1−z) · f(i(1+z)/(1−z))`;
/// * half-plane → strip: `(Φf)(z) = √(π/β)·e^{πz/2β} · f(e^{πz/β})`;
/// * strip → half-plane: `(Φ⁻¹f)(z) = √(β/π)·z^{−1/2} · f((β/π) log z)`;
/// * disc ↔ strip and strip ↔ strip (different heights) by composition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyTransfer {
    pub src: Domain,
    pub dst: Domain,
}

impl HardyTransfer {
    pub fn new(src: Domain, dst: Domain) -> Result<Self> {
        let ok = match (src, dst) {
            (Domain::Disc, Domain::Disc) | (Domain::HalfPlane, Domain::HalfPlane) => false,
            (Domain::Strip { beta: a }, Domain::Strip { beta: b }) => a != b,
            _ => true,
        };
        if ok {
            Ok(HardyTransfer { src, dst })
        } else {
            Err(Error::UnsupportedPair(format!("{} -> {}", src.name(), dst.name())))
        }
    }

    /// For `z` in `dst`, returns `(√φ′(z), φ(z))` with the normalizations above.
    pub fn pullback(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        match (self.src, self.dst) {
            (Domain::Disc, Domain::HalfPlane) => {
                let d = z + c(0.0, 1.0);
                if d.norm() == 0.0 {
                    return Err(Error::PoleAtInput(fmt_c(z)));
                }
                Ok((c(0.0, 2.0).sqrt() / d, (z - c(0.0, 1.0)) / d))
            }
            (Domain::HalfPlane, Domain::Disc) => {
                let d = c(1.0, 0.0) - z;
                if d.norm() == 0.0 {
                    return Err(Error::PoleAtInput(fmt_c(z)));
                }
                Ok((c(0.0, 2.0).sqrt() / d, c(0.0, 1.0) * (c(1.0, 0.0) + z) / d))
            }
            (Domain::HalfPlane, Domain::Strip { beta }) => {
                let factor = (z * (PI / (2.0 * beta))).exp() * (PI / beta).sqrt();
                Ok((factor, strip_exp(beta, z)))
            }
            (Domain::Strip { beta }, Domain::HalfPlane) => {
                let log = strip_log(beta, z)?;
                Ok((z.sqrt().inv() * (beta / PI).sqrt(), log))
            }
            (src, dst) => {
                // Compose through the half-plane: φ = φ₁ ∘ φ₂ with
                // φ₂: dst → ℂ₊ and φ₁: ℂ₊ → src; √φ′ = √φ₁′(φ₂(z))·√φ₂′(z).
                let inner = HardyTransfer::new(Domain::HalfPlane, dst)?;
                let outer = HardyTransfer::new(src, Domain::HalfPlane)?;
                let (f2, w) = inner.pullback(z)?;
                let (f1, u) = outer.pullback(w)?;
                Ok((f1 * f2, u))
            }
        }
    }

    /// Evaluates the transferred function at `z ∈ dst`.
    pub fn apply<F: Fn(Complex64) -> Complex64>(&self, f: F, z: Complex64) -> Result<Complex64> {
        let (factor, w) = self.pullback(z)?;
        Ok(factor * f(w))
    }
}

/// Returns the transferred function `z ↦ √(φ′(z))·f(φ(z))` as a closure.
pub fn hardy_transfer<F>(src: Domain, dst: Domain, f: F) -> Result<impl Fn(Complex64) -> Result<Complex64>>
where
    F: Fn(Complex64) -> Complex64,
{
    let t = HardyTransfer::new(src, dst)?;
    Ok(move |z| t.apply(&f, z))
}
