//! Positive measures on ℝ made of finitely many atoms plus a density sampled
//! on a uniform grid (trapezoid weights); the bijections `γ` and `Γ` from
//! measures on `[0, ∞)` to measures satisfying the β-reflection relation, the
//! reflection and KMS checks, Fourier/Laplace transforms continued into
//! strips, translation-invariant kernels `K(z, w) = ν̂(z − w̄)` on `S_β`, and
//! the Riesz measures `μ_s` together with their thermal partners `ν_s`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::c;
use crate::domains::Domain;
use crate::error::{fmt_c, Error, Result};
use crate::numerics::gram::GramReport;
use crate::numerics::quad::{quad, Interval};
use crate::numerics::special::gamma;
use crate::numerics::sum::ComplexCompensatedSum;

/// Atom locations closer than this are merged.
pub const MERGE_TOL: f64 = 1e-12;

/// Fraction of grid nodes at each end that form the tail monitored by
/// [`fourier`].
pub const TAIL_FRACTION: f64 = 0.05;

/// Largest relative contribution of the monitored tail accepted by [`fourier`].
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// A point mass `weight · δ_location`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Density sampled at the nodes `x0 + j·h`, `j = 0..values.len()`, integrated
/// with the trapezoid rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    pub x0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl GridDensity {
    /// Validated grid: `h > 0`, at least two nodes, finite nonnegative values.
    pub fn new(x0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        let g = GridDensity { x0, h, values };
        g.validate()?;
        Ok(g)
    }

    /// Samples `f` at `n` nodes starting at `x0`.
    pub fn from_fn<F: Fn(f64) -> f64>(x0: f64, h: f64, n: usize, f: F) -> Result<Self> {
        let mut g = GridDensity { x0, h, values: vec![0.0; n] };
        for j in 0..n {
            g.values[j] = f(g.node(j));
        }
        g.validate()?;
        Ok(g)
    }

    /// Grid `{k·h : |k| ≤ round(half_width/h)}`, symmetric about 0.
    pub fn symmetric<F: Fn(f64) -> f64>(half_width: f64, h: f64, f: F) -> Result<Self> {
        if !(h > 0.0) || !(half_width > 0.0) {
            return Err(Error::InvalidMeasure(format!("grid needs h > 0 and half-width > 0, got {h}, {half_width}")));
        }
        let m = (half_width / h).round() as usize;
        Self::from_fn(-(m as f64) * h, h, 2 * m + 1, f)
    }

    /// Grid `{k·h : 0 ≤ k ≤ round(length/h)}` on the half-line.
    pub fn half_line<F: Fn(f64) -> f64>(length: f64, h: f64, f: F) -> Result<Self> {
        if !(h > 0.0) || !(length > 0.0) {
            return Err(Error::InvalidMeasure(format!("grid needs h > 0 and length > 0, got {h}, {length}")));
        }
        let m = (length / h).round() as usize;
        Self::from_fn(0.0, h, m + 1, f)
    }

    fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() || !self.x0.is_finite() {
            return Err(Error::InvalidMeasure(format!("grid needs finite x0 and h > 0, got x0 = {}, h = {}", self.x0, self.h)));
        }
        if self.values.len() < 2 {
            return Err(Error::InvalidMeasure("grid needs at least two nodes".into()));
        }
        if let Some(v) = self.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("density values must be finite and nonnegative, got {v}")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Integer offset `x0/h` when the grid is aligned with `hℤ`.
    fn aligned_offset(&self) -> Option<f64> {
        let k0 = (self.x0 / self.h).round();
        ((self.x0 / self.h - k0).abs() <= 1e-9).then_some(k0)
    }

    /// Node `j`; aligned grids compute `(k0 + j)·h` so mirrored nodes are exact negatives.
    pub fn node(&self, j: usize) -> f64 {
        match self.aligned_offset() {
            Some(k0) => (k0 + j as f64) * self.h,
            None => self.x0 + j as f64 * self.h,
        }
    }

    /// Trapezoid weight of node `j`.
    pub fn weight(&self, j: usize) -> f64 {
        if j == 0 || j + 1 == self.values.len() {
            0.5 * self.h
        } else {
            self.h
        }
    }

    /// Last node.
    pub fn end(&self) -> f64 {
        self.node(self.values.len() - 1)
    }

    /// Whether the node set is symmetric about 0 (`node(j) = −node(n−1−j)`).
    pub fn is_symmetric(&self) -> bool {
        let n = self.values.len();
        self.aligned_offset().is_some_and(|k0| k0 == -(((n - 1) / 2) as f64) && n % 2 == 1)
    }

    /// Index of the node 0 of an aligned grid, if present.
    pub fn zero_index(&self) -> Option<usize> {
        let k0 = self.aligned_offset()?;
        (k0 <= 0.0 && -k0 < self.values.len() as f64).then_some((-k0) as usize)
    }
}

/// A positive Borel measure on ℝ: sorted atoms plus an optional grid density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureJson", into = "MeasureJson")]
pub struct MeasureOnR {
    atoms: Vec<Atom>,
    density: Option<GridDensity>,
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    #[serde(default)]
    atoms: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<GridDensity>,
}

impl TryFrom<MeasureJson> for MeasureOnR {
    type Error = Error;
    fn try_from(m: MeasureJson) -> Result<Self> {
        MeasureOnR::new(m.atoms.iter().map(|a| (a[0], a[1])).collect(), m.density)
    }
}

impl From<MeasureOnR> for MeasureJson {
    fn from(m: MeasureOnR) -> Self {
        MeasureJson { atoms: m.atoms.iter().map(|a| [a.location, a.weight]).collect(), density: m.density }
    }
}

impl MeasureOnR {
    /// Sorts the atoms, merges locations within [`MERGE_TOL`] and validates
    /// weights and density values (finite, nonnegative).
    pub fn new(atoms: Vec<(f64, f64)>, density: Option<GridDensity>) -> Result<Self> {
        for &(loc, w) in &atoms {
            if !loc.is_finite() || !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidMeasure(format!("atom ({loc}, {w}) needs a finite location and finite weight ≥ 0")));
            }
        }
        if let Some(d) = &density {
            d.validate()?;
        }
        let mut sorted = atoms;
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<Atom> = Vec::with_capacity(sorted.len());
        for (location, weight) in sorted {
            match merged.last_mut() {
                Some(last) if (location - last.location).abs() <= MERGE_TOL => last.weight += weight,
                _ => merged.push(Atom { location, weight }),
            }
        }
        for a in &mut merged {
            if a.location == 0.0 {
                a.location = 0.0;
            }
        }
        Ok(MeasureOnR { atoms: merged, density })
    }

    /// Purely atomic measure.
    pub fn atomic(atoms: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(atoms, None)
    }

    /// `δ_λ`.
    pub fn dirac(lambda: f64) -> Result<Self> {
        Self::atomic(vec![(lambda, 1.0)])
    }

    /// Absolutely continuous measure with the given grid density.
    pub fn from_density(density: GridDensity) -> Result<Self> {
        Self::new(Vec::new(), Some(density))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&GridDensity> {
        self.density.as_ref()
    }

    /// Atom weight and trapezoid mass of the density.
    pub fn total_mass(&self) -> f64 {
        let a: f64 = self.atoms.iter().map(|a| a.weight).sum();
        let d: f64 = self.density.as_ref().map_or(0.0, |d| (0..d.len()).map(|j| d.weight(j) * d.values[j]).sum());
        a + d
    }

    /// Smallest point of the support representation (atoms and grid nodes).
    pub fn support_min(&self) -> Option<f64> {
        let a = self.atoms.first().map(|a| a.location);
        let d = self.density.as_ref().map(|d| d.node(0));
        match (a, d) {
            (Some(a), Some(d)) => Some(a.min(d)),
            (a, d) => a.or(d),
        }
    }

    /// The measure `f·ν` (atoms and density values multiplied pointwise).
    pub fn scaled<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        let atoms = self.atoms.iter().map(|a| (a.location, a.weight * f(a.location))).collect();
        let density = self.density.as_ref().map(|d| {
            let mut out = d.clone();
            for j in 0..d.len() {
                out.values[j] = d.values[j] * f(d.node(j));
            }
            out
        });
        Self::new(atoms, density)
    }

    /// Serializes to the JSON measure format.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serialization cannot fail")
    }

    /// Parses the JSON measure format.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidMeasure(e.to_string()))
    }
}

/// Which reflection relation `dν(−λ) = e^{−cβλ} dν(λ)` is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReflectionOrder {
    /// `c = 1`: the β-reflection relation.
    Beta,
    /// `c = 2`: the relation making `F ↦ F(βi − ·)` unitary on the kernel space.
    TwoBeta,
}

/// Inverse temperature together with the reflection order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionClass {
    pub beta: f64,
    pub order: ReflectionOrder,
}

impl ReflectionClass {
    pub fn new(beta: f64, order: ReflectionOrder) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::ParameterOutOfRange(format!("β must be positive, got {beta}")));
        }
        Ok(ReflectionClass { beta, order })
    }

    /// Exponent rate `cβ`.
    pub fn rate(&self) -> f64 {
        match self.order {
            ReflectionOrder::Beta => self.beta,
            ReflectionOrder::TwoBeta => 2.0 * self.beta,
        }
    }
}

/// Outcome of [`reflection_check`]; `symmetric == false` means the atom set
/// or the grid is not symmetric and the defect is `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionReport {
    pub max_relative_defect: f64,
    pub symmetric: bool,
}

fn require_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("β must be positive, got {beta}")))
    }
}

/// Maps a measure on `[0, ∞)` to `c₊(λ)μ` on `λ ≥ 0` plus the mirror image of
/// `c₋(λ)μ`; the two contributions at 0 merge.  A grid density must start at
/// 0 and is mapped onto the symmetric grid with the same spacing.
fn reflect_map<P, M>(mu: &MeasureOnR, plus: P, minus: M) -> Result<MeasureOnR>
where
    P: Fn(f64) -> f64,
    M: Fn(f64) -> f64,
{
    let mut atoms = Vec::with_capacity(2 * mu.atoms.len());
    for a in &mu.atoms {
        if a.location < -MERGE_TOL {
            return Err(Error::NegativeSupport(format!("atom at {}", a.location)));
        }
        let l = a.location.max(0.0);
        atoms.push((l, a.weight * plus(l)));
        atoms.push((-l, a.weight * minus(l)));
    }
    let density = match &mu.density {
        None => None,
        Some(d) => {
            if d.x0 < -MERGE_TOL * d.h.max(1.0) {
                return Err(Error::NegativeSupport(format!("density grid starts at {}", d.x0)));
            }
            if d.x0.abs() > MERGE_TOL * d.h.max(1.0) {
                return Err(Error::UnsupportedSupport(format!(
                    "density grid must start at 0 to be mirrored, starts at {}",
                    d.x0
                )));
            }
            let n = d.len();
            let mut values = vec![0.0; 2 * n - 1];
            for j in 1..n {
                let l = j as f64 * d.h;
                values[n - 1 + j] = d.values[j] * plus(l);
                values[n - 1 - j] = d.values[j] * minus(l);
            }
            values[n - 1] = 0.5 * d.values[0] * (plus(0.0) + minus(0.0));
            Some(GridDensity { x0: -((n - 1) as f64) * d.h, h: d.h, values })
        }
    };
    MeasureOnR::new(atoms, density)
}

/// Inverse of [`reflect_map`]: keeps `λ ≥ 0`, divides by `c₊` and undoes the
/// merge at 0.
fn unreflect_map<P, M>(nu: &MeasureOnR, plus: P, minus: M) -> Result<MeasureOnR>
where
    P: Fn(f64) -> f64,
    M: Fn(f64) -> f64,
{
    // An atom at 0 received both images; a density value at 0 their mean.
    let atom_zero_factor = plus(0.0) + minus(0.0);
    let zero_factor = 0.5 * atom_zero_factor;
    let atoms = nu
        .atoms
        .iter()
        .filter(|a| a.location >= 0.0)
        .map(|a| if a.location == 0.0 { (0.0, a.weight / atom_zero_factor) } else { (a.location, a.weight / plus(a.location)) })
        .collect();
    let density = match &nu.density {
        None => None,
        Some(d) => {
            let z = d.zero_index().ok_or_else(|| Error::UnsupportedSupport("density grid does not contain 0".into()))?;
            let mut values: Vec<f64> = (z..d.len()).map(|j| d.values[j] / plus(d.node(j))).collect();
            values[0] = d.values[z] / zero_factor;
            Some(GridDensity::new(0.0, d.h, values)?)
        }
    };
    MeasureOnR::new(atoms, density)
}

fn gamma_factors(beta: f64) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
    (|_l: f64| 1.0, move |l: f64| (-beta * l).exp())
}

fn capital_gamma_factors(beta: f64) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
    (move |l: f64| 1.0 / (1.0 + (-beta * l).exp()), move |l: f64| {
        let e = (-beta * l).exp();
        e / (1.0 + e)
    })
}

/// `γ(μ) = μ + e_β μ^∨`: atom `(λ, w)` ↦ `(λ, w)` and `(−λ, w e^{−βλ})`.
pub fn gamma_map(mu: &MeasureOnR, beta: f64) -> Result<MeasureOnR> {
    require_beta(beta)?;
    let (p, m) = gamma_factors(beta);
    reflect_map(mu, p, m)
}

/// `Γ(μ) = (μ + μ^∨)/(1 + e_{−β})`: atom `(λ, w)` ↦ `(λ, w/(1+e^{−βλ}))` and
/// `(−λ, w e^{−βλ}/(1+e^{−βλ}))`.
pub fn capital_gamma_map(mu: &MeasureOnR, beta: f64) -> Result<MeasureOnR> {
    require_beta(beta)?;
    let (p, m) = capital_gamma_factors(beta);
    reflect_map(mu, p, m)
}

/// Recovers `μ` from `γ(μ)` by restriction to `[0, ∞)` (halving the merged
/// mass at 0).
pub fn gamma_inverse(nu: &MeasureOnR, beta: f64) -> Result<MeasureOnR> {
    require_beta(beta)?;
    let (p, m) = gamma_factors(beta);
    unreflect_map(nu, p, m)
}

/// Recovers `μ` from `Γ(μ)` as `(1 + e_{−β})·Γ(μ)` restricted to `[0, ∞)`.
pub fn capital_gamma_inverse(nu: &MeasureOnR, beta: f64) -> Result<MeasureOnR> {
    require_beta(beta)?;
    let (p, m) = capital_gamma_factors(beta);
    unreflect_map(nu, p, m)
}

/// `M_κ μ` with `κ(λ) = 1/(1 + e^{−βλ})`; `γ ∘ M_κ = Γ`.
pub fn kappa_multiplier(mu: &MeasureOnR, beta: f64) -> Result<MeasureOnR> {
    require_beta(beta)?;
    mu.scaled(|l| 1.0 / (1.0 + (-beta * l).exp()))
}

fn relative_defect(mirror: f64, reference: f64, factor: f64) -> f64 {
    let expected = factor * reference;
    let diff = (mirror - expected).abs();
    if diff == 0.0 {
        0.0
    } else if reference == 0.0 {
        f64::INFINITY
    } else {
        diff / reference
    }
}

/// Max over `λ` of `|ν(−λ) − e^{−cβλ}ν(λ)|/ν(λ)`, atoms and grid values
/// separately; asymmetric atom sets or grids give `∞`.
pub fn reflection_check(nu: &MeasureOnR, rc: ReflectionClass) -> ReflectionReport {
    let asym = ReflectionReport { max_relative_defect: f64::INFINITY, symmetric: false };
    let rate = rc.rate();
    let atoms = &nu.atoms;
    let n = atoms.len();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let a = atoms[j];
        let b = atoms[n - 1 - j];
        if (a.location + b.location).abs() > MERGE_TOL * a.location.abs().max(1.0) {
            return asym;
        }
        if a.location > 0.0 {
            worst = worst.max(relative_defect(b.weight, a.weight, (-rate * a.location).exp()));
        }
    }
    if let Some(d) = &nu.density {
        if !d.is_symmetric() {
            return asym;
        }
        let m = d.len();
        for j in m / 2 + 1..m {
            let l = d.node(j);
            worst = worst.max(relative_defect(d.values[m - 1 - j], d.values[j], (-rate * l).exp()));
        }
    }
    ReflectionReport { max_relative_defect: worst, symmetric: true }
}

/// `ν̂(z) = ∫ e^{izλ} dν(λ)`: exact atom sum plus compensated trapezoid sum.
///
/// Raises `DivergentTransform` when a term overflows or when the outer
/// [`TAIL_FRACTION`] of grid nodes at either end carries more than
/// [`TAIL_TOLERANCE`] of `Σ|terms|` (the damping `e^{−λ Im z}` is too weak
/// for the grid).  A grid end located at 0 is the edge of a half-line
/// support, not a truncation, and is not monitored.
pub fn fourier(nu: &MeasureOnR, z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::DivergentTransform(format!("non-finite argument {}", fmt_c(z))));
    }
    let term = |l: f64, w: f64| -> Result<Complex64> {
        if w == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let modulus = w * (-z.im * l).exp();
        if !modulus.is_finite() {
            return Err(Error::DivergentTransform(format!("e^{{izλ}} overflows at λ = {l}, z = {}", fmt_c(z))));
        }
        let phase = z.re * l;
        Ok(Complex64::new(modulus * phase.cos(), modulus * phase.sin()))
    };
    let mut acc = ComplexCompensatedSum::new();
    for a in &nu.atoms {
        acc.add(term(a.location, a.weight)?);
    }
    if let Some(d) = &nu.density {
        let n = d.len();
        let tail = ((n as f64 * TAIL_FRACTION).ceil() as usize).max(1);
        let left_open = d.node(0) != 0.0;
        let right_open = d.end() != 0.0;
        let (mut total_abs, mut tail_abs) = (0.0, 0.0);
        for j in 0..n {
            let t = term(d.node(j), d.weight(j) * d.values[j])?;
            let a = t.norm();
            total_abs += a;
            if (left_open && j < tail) || (right_open && j + tail >= n) {
                tail_abs += a;
            }
            acc.add(t);
        }
        if tail_abs > TAIL_TOLERANCE * total_abs {
            return Err(Error::DivergentTransform(format!(
                "grid tails carry {:.3e} of the mass of the transform at z = {}",
                tail_abs / total_abs,
                fmt_c(z)
            )));
        }
    }
    Ok(acc.value())
}

/// `L(ν)(y) = ∫ e^{−λy} dν(λ) = ν̂(iy)`.
pub fn laplace(nu: &MeasureOnR, y: f64) -> Result<f64> {
    Ok(fourier(nu, c(0.0, y))?.re)
}

/// Outcome of [`kms_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmsReport {
    pub max_defect: f64,
    pub defects: Vec<(f64, f64)>,
}

/// Max over `t` of `|ν̂(iβ + t) − conj(ν̂(t))|`.
pub fn kms_check(nu: &MeasureOnR, beta: f64, ts: &[f64]) -> Result<KmsReport> {
    require_beta(beta)?;
    let mut defects = Vec::with_capacity(ts.len());
    for &t in ts {
        let d = (fourier(nu, c(t, beta))? - fourier(nu, c(t, 0.0))?.conj()).norm();
        defects.push((t, d));
    }
    let max_defect = defects.iter().map(|d| d.1).fold(0.0, f64::max);
    Ok(KmsReport { max_defect, defects })
}

/// The pair `(φ_T, φ_ℝ)` attached to a finite measure `μ` on `[0, ∞)`:
/// `φ_ℝ = Γ(μ)^∧` on the line and `φ_T(y) = Γ(μ)^∧(iy)` on the circle `ℝ/βℤ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleLinePair {
    pub beta: f64,
    pub nu: MeasureOnR,
}

impl CircleLinePair {
    /// `φ_T([y])`, `y` reduced modulo `β` into `[0, β)`.
    pub fn circle(&self, y: f64) -> Result<f64> {
        laplace(&self.nu, y.rem_euclid(self.beta))
    }

    /// `φ_ℝ(x)`.
    pub fn line(&self, x: f64) -> Result<Complex64> {
        fourier(&self.nu, c(x, 0.0))
    }
}

/// Builds [`CircleLinePair`] via `ν = Γ(μ)`.
pub fn rp_circle_from_measure(mu: &MeasureOnR, beta: f64) -> Result<CircleLinePair> {
    Ok(CircleLinePair { beta, nu: capital_gamma_map(mu, beta)? })
}

/// `K(z, w) = ν̂(z − w̄)` for `z, w ∈ S_β`.
pub fn kernel_from_measure(nu: &MeasureOnR, beta: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    let d = Domain::strip(beta)?;
    d.require_interior(z)?;
    d.require_interior(w)?;
    fourier(nu, z - w.conj())
}

/// Gram report of `K(z_j, z_k) = ν̂(z_j − z̄_k)`.
pub fn measure_kernel_gram(nu: &MeasureOnR, beta: f64, points: &[Complex64]) -> Result<GramReport> {
    let n = points.len();
    let mut g = nalgebra::DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            g[(j, k)] = kernel_from_measure(nu, beta, points[j], points[k])?;
        }
    }
    Ok(GramReport::from_matrix(&g))
}

/// Outcome of [`theta_involution_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    /// `max |K(βi − z, βi − w) − K(z, w)|`.
    pub max_defect: f64,
    /// Cross-check: [`reflection_check`] of order `TwoBeta`.
    pub reflection: ReflectionReport,
}

/// Tests whether `F ↦ F(βi − ·)` preserves the kernel `ν̂(z − w̄)`.
pub fn theta_involution_check(nu: &MeasureOnR, beta: f64, pairs: &[(Complex64, Complex64)]) -> Result<ThetaReport> {
    let bi = c(0.0, beta);
    let mut max_defect: f64 = 0.0;
    for &(z, w) in pairs {
        let k = kernel_from_measure(nu, beta, z, w)?;
        let kt = kernel_from_measure(nu, beta, bi - z, bi - w)?;
        max_defect = max_defect.max((k - kt).norm());
    }
    let reflection = reflection_check(nu, ReflectionClass::new(beta, ReflectionOrder::TwoBeta)?);
    Ok(ThetaReport { max_defect, reflection })
}

/// Half-width (times `β`) of the grids built by [`szego_measure`] and
/// [`bergman_measure`].
pub const STRIP_MEASURE_HALF_WIDTH: f64 = 240.0;

/// Spacing (times `β`) of the grids built by [`szego_measure`] and
/// [`bergman_measure`].
pub const STRIP_MEASURE_SPACING: f64 = 0.05;

/// `dν(λ) = dλ/(2π(1 + e^{−2βλ}))` on `[−240/β, 240/β]` with spacing
/// `0.05/β`; its kernel is the strip Szegő kernel.  The grid resolves
/// `ν̂(a)` for `Im a` in roughly `[0.15β, 1.85β]`; outside that range
/// [`fourier`] reports `DivergentTransform`.
pub fn szego_measure(beta: f64) -> Result<MeasureOnR> {
    require_beta(beta)?;
    let g = GridDensity::symmetric(STRIP_MEASURE_HALF_WIDTH / beta, STRIP_MEASURE_SPACING / beta, |l| 1.0 / (2.0 * PI * (1.0 + (-2.0 * beta * l).exp())))?;
    MeasureOnR::from_density(g)
}

/// `dν(λ) = λ dλ/(4π²(1 − e^{−2βλ}))` (value `1/(8π²β)` at 0) on the same
/// grid as [`szego_measure`]; its kernel is the strip Bergman kernel.
pub fn bergman_measure(beta: f64) -> Result<MeasureOnR> {
    require_beta(beta)?;
    let g = GridDensity::symmetric(STRIP_MEASURE_HALF_WIDTH / beta, STRIP_MEASURE_SPACING / beta, |l| {
        let v = if l == 0.0 { 1.0 / (2.0 * beta) } else { l / -(-2.0 * beta * l).exp_m1() };
        v / (4.0 * PI * PI)
    })?;
    MeasureOnR::from_density(g)
}

/// `e^{−βλ/2}·ν`: turns a measure with the `TwoBeta` relation into one with
/// the `Beta` relation.
pub fn half_twist(nu: &MeasureOnR, beta: f64) -> Result<MeasureOnR> {
    require_beta(beta)?;
    nu.scaled(|l| (-0.5 * beta * l).exp())
}

/// The Riesz measure `dμ_s(p) = p^{s−1} dp/Γ(s)` on `[0, Λ]` sampled with
/// spacing `h`, with the closed-form transform and an analytic bound on the
/// discarded tail `∫_Λ^∞ e^{−yp} dμ_s(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszMeasure {
    pub s: f64,
    pub cutoff: f64,
    pub measure: MeasureOnR,
}

impl RieszMeasure {
    /// Bound on `∫_Λ^∞ e^{−yp} p^{s−1} dp/Γ(s)` for `y > 0`:
    /// `e^{−yΛ}Λ^{s−1}/(yΓ(s))·1/(1 − (s−1)₊/(yΛ))` when `yΛ > (s−1)₊`, else `∞`.
    pub fn tail_bound(&self, y: f64) -> f64 {
        let l = self.cutoff;
        let excess = (self.s - 1.0).max(0.0);
        if !(y > 0.0) || y * l <= excess {
            return f64::INFINITY;
        }
        (-y * l).exp() * l.powf(self.s - 1.0) / (y * gamma(self.s)) / (1.0 - excess / (y * l))
    }
}

/// Riesz density value `p^{s−1}/Γ(s)`; the node `p = 0` carries the limit
/// (`1` for `s = 1`, `0` for `s > 1`, and `0` for the integrable singularity
/// at `s < 1`, which the grid cannot represent).
fn riesz_density(s: f64, p: f64) -> f64 {
    if p == 0.0 {
        if s == 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        p.powf(s - 1.0) / gamma(s)
    }
}

/// [`RieszMeasure`] with spacing `1e−4` and cutoff `40`.
pub fn riesz_measure(s: f64) -> Result<RieszMeasure> {
    riesz_measure_with(s, 1e-4, 40.0)
}

/// [`RieszMeasure`] with caller-chosen spacing and cutoff.
pub fn riesz_measure_with(s: f64, h: f64, cutoff: f64) -> Result<RieszMeasure> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("s must be positive, got {s}")));
    }
    let g = GridDensity::half_line(cutoff, h, |p| riesz_density(s, p))?;
    Ok(RieszMeasure { s, cutoff: g.end(), measure: MeasureOnR::from_density(g)? })
}

/// `μ̂_s(z) = (i/z)^s` (principal branch) for `Im z > 0`.
pub fn riesz_hat(s: f64, z: Complex64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::OutsideDomain(format!("Im z must be positive, got {}", fmt_c(z))));
    }
    Ok((c(0.0, 1.0) / z).powf(s))
}

/// Density of `dν_s(p) = |p|^{s−2}p dp/(Γ(s)(1 − e^{−2βp}))`; the value at
/// `p = 0` is the limit `1/(2βΓ(2))` for `s = 2`, `0` for `s > 2`, and `0`
/// when `1 < s < 2` (integrable singularity).
pub fn nu_s_density(s: f64, beta: f64, p: f64) -> f64 {
    if p == 0.0 {
        return if s == 2.0 { 1.0 / (2.0 * beta * gamma(2.0)) } else { 0.0 };
    }
    p.abs().powf(s - 2.0) * p / (-(-2.0 * beta * p).exp_m1() * gamma(s))
}

/// `ν_s` on the symmetric grid `[−200/β, 200/β]` with spacing `0.01/β`.
///
/// Near 0 the density behaves like `|p|^{s−2}/(2βΓ(s))`, so `ν_s` is locally
/// finite only for `s > 1`; smaller `s` is rejected.
pub fn nu_s_measure(s: f64, beta: f64) -> Result<MeasureOnR> {
    require_beta(beta)?;
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("ν_s needs s > 1 to be locally finite, got {s}")));
    }
    let g = GridDensity::symmetric(200.0 / beta, 0.01 / beta, |p| nu_s_density(s, beta, p))?;
    MeasureOnR::from_density(g)
}

/// Outcome of [`kappa_check`]: Abel-damped versions of
/// `ν̂_s(t) − ν̂_s(−t) = 2i Im μ̂_s(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaReport {
    /// `∫ (e^{itp} − e^{−itp}) e^{−ε|p|} dν_s(p)` on the `ν_s` grid.
    pub lhs: Complex64,
    /// `∫₀^∞ (e^{itp} − e^{−itp}) e^{−εp} dμ_s(p)` by adaptive quadrature.
    pub rhs: Complex64,
    /// `(ε − it)^{−s} − (ε + it)^{−s} = 2i Im μ̂_s(t + iε)`.
    pub closed_form: Complex64,
    /// `ε → 0` limit `2i·sgn(t)·sin(πs/2)|t|^{−s}`.
    pub limit: Complex64,
    pub defect: f64,
}

/// Compares both sides of the κ identity with the symmetric damping
/// `e^{−ε|p|}`, under which the identity holds exactly for every `ε > 0`
/// (the odd part of `ν_s` equals the odd part of `μ_s`).
pub fn kappa_check(s: f64, beta: f64, t: f64, eps: f64) -> Result<KappaReport> {
    if !(eps > 0.0 && eps < 2.0 * beta) {
        return Err(Error::ParameterOutOfRange(format!("damping must lie in (0, 2β), got {eps}")));
    }
    let nu = nu_s_measure(s, beta)?;
    let damped = nu.scaled(|p| (-eps * p.abs()).exp())?;
    let lhs = fourier(&damped, c(t, 0.0))? - fourier(&damped, c(-t, 0.0))?;
    let g = gamma(s);
    let rhs = quad(
        |p| c(0.0, 2.0 * (t * p).sin() * (-eps * p).exp() * p.powf(s - 1.0) / g),
        Interval::From(0.0),
        1e-13,
    )?
    .value;
    let closed_form = c(eps, -t).powf(-s) - c(eps, t).powf(-s);
    let limit = c(0.0, 2.0 * t.signum() * (PI * s / 2.0).sin() * t.abs().powf(-s));
    let defect = (lhs - rhs).norm().max((lhs - closed_form).norm());
    Ok(KappaReport { lhs, rhs, closed_form, limit, defect })
}
