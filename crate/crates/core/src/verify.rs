//! Machine-readable verification of every identity the library implements.
//!
//! Each check evaluates one identity (usually at many sample points), reduces
//! it to a nonnegative `defect` and compares it with a tolerance.  Random
//! samples come from fixed seeds, so reports are reproducible.  Results are
//! sorted by id.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::c;
use crate::domains::{cayley, cayley_inv, BoundaryPoint, Domain, HardyTransfer};
use crate::error::{Error, Result};
use crate::kernels::{self, KernelKind, DEFAULT_BOUNDARY_NODES};
use crate::measures::{self, MeasureOnR, ReflectionClass, ReflectionOrder};
use crate::modular;
use crate::numerics::appendix;
use crate::numerics::fourier::ft_measure_algebraic;
use crate::numerics::gram::GramReport;
use crate::numerics::quad::circle_trapezoid;
use crate::periodize::{self, SplittingMode};
use crate::rpfunc::{self, StripVerdict, SymmetricGroupKind};

/// A group of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Kernels,
    Series,
    Measures,
    Modular,
    Appendix,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Kernels => "kernels",
            Suite::Series => "series",
            Suite::Measures => "measures",
            Suite::Modular => "modular",
            Suite::Appendix => "appendix",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "kernels" => Ok(Suite::Kernels),
            "series" => Ok(Suite::Series),
            "measures" => Ok(Suite::Measures),
            "modular" => Ok(Suite::Modular),
            "appendix" => Ok(Suite::Appendix),
            _ => Err(Error::ParameterOutOfRange(format!("unknown suite '{s}'"))),
        }
    }
}

/// Serializes non-finite defects as `null` and reads `null` back as `∞`.
mod defect_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// One verified identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    /// What the identity states.
    pub anchor: String,
    /// `∞` (serialized as `null`) when the evaluation itself failed.
    #[serde(with = "defect_serde")]
    pub defect: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(id: &str, anchor: &str, defect: f64, tol: f64) -> Self {
        CheckResult { id: id.into(), anchor: anchor.into(), defect, tol, pass: defect <= tol }
    }
}

/// Results of a suite run, sorted by id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub results: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    pub fn new(suite: &str, mut results: Vec<CheckResult>) -> Self {
        results.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = results.iter().filter(|r| r.pass).count();
        let failed = results.len() - passed;
        VerificationReport { suite: suite.into(), results, passed, failed }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// Harness self-test: sets the tolerance of the first result with a
    /// positive defect to 0, forcing it to fail.  Returns its id.
    pub fn inject_defect(&mut self) -> Option<String> {
        let r = self.results.iter_mut().find(|r| r.defect > 0.0)?;
        r.tol = 0.0;
        r.pass = false;
        let id = r.id.clone();
        self.passed = self.results.iter().filter(|r| r.pass).count();
        self.failed = self.results.len() - self.passed;
        Some(id)
    }
}

/// Runs a suite.
pub fn run_suite(suite: Suite) -> VerificationReport {
    let mut out = Collector::default();
    let all = suite == Suite::All;
    if all || suite == Suite::Kernels {
        kernel_checks(&mut out);
    }
    if all || suite == Suite::Series {
        series_checks(&mut out);
    }
    if all || suite == Suite::Measures {
        measure_checks(&mut out);
        rp_checks(&mut out);
    }
    if all || suite == Suite::Modular {
        modular_checks(&mut out);
    }
    if all || suite == Suite::Appendix {
        appendix_checks(&mut out);
    }
    VerificationReport::new(suite.name(), out.results)
}

#[derive(Default)]
struct Collector {
    results: Vec<CheckResult>,
}

impl Collector {
    fn push(&mut self, id: &str, anchor: &str, defect: Result<f64>, tol: f64) {
        let d = match defect {
            Ok(d) if d.is_nan() => f64::INFINITY,
            Ok(d) => d,
            Err(_) => f64::INFINITY,
        };
        self.results.push(CheckResult::new(id, anchor, d, tol));
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `max(−λ_min, Hermiticity defect)/‖G‖`: 0 for a PSD Hermitian matrix.
pub fn gram_defect(r: &GramReport) -> f64 {
    if r.spectral_norm == 0.0 {
        return r.hermiticity_defect;
    }
    (-r.min_eigenvalue).max(r.hermiticity_defect).max(0.0) / r.spectral_norm
}

fn strip(beta: f64) -> Domain {
    Domain::Strip { beta }
}

fn random_interior(r: &mut ChaCha8Rng, d: Domain) -> Complex64 {
    match d {
        Domain::Disc => {
            let rad = 0.9 * r.random::<f64>().sqrt();
            c(0.0, r.random_range(0.0..2.0 * PI)).exp() * rad
        }
        Domain::HalfPlane => c(r.random_range(-3.0..3.0), r.random_range(0.1..3.0)),
        Domain::Strip { beta } => c(r.random_range(-3.0..3.0), beta * r.random_range(0.1..0.9)),
    }
}

fn random_boundary(r: &mut ChaCha8Rng, d: Domain) -> BoundaryPoint {
    match d {
        Domain::Disc => BoundaryPoint::circle(r.random_range(0.0..2.0 * PI)),
        Domain::HalfPlane => BoundaryPoint::line(r.random_range(-5.0..5.0)),
        Domain::Strip { beta } => {
            let x = r.random_range(-5.0..5.0);
            if r.random::<bool>() {
                BoundaryPoint::lower(beta, x)
            } else {
                BoundaryPoint::upper(beta, x)
            }
        }
    }
}

fn kernel_checks(out: &mut Collector) {
    let domains = [("disc", Domain::Disc), ("halfplane", Domain::HalfPlane), ("strip", strip(1.3))];
    for (k, (name, d)) in domains.iter().enumerate() {
        let mut r = rng(100 + k as u64);
        let defect = (|| {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let z = random_interior(&mut r, *d);
                let x = random_boundary(&mut r, *d);
                worst = worst.max((kernels::poisson(*d, z, &x)? - kernels::poisson_from_szego(*d, z, &x)?).abs());
            }
            Ok(worst)
        })();
        out.push(&format!("kernels.hua.{name}"), "Poisson kernel equals |Q(z,x)|²/Q(z,z)", defect, 1e-10);

        let mut r = rng(110 + k as u64);
        let defect = (|| {
            let mut worst: f64 = 0.0;
            for _ in 0..5 {
                let z = random_interior(&mut r, *d);
                worst = worst.max((kernels::poisson_total_mass(*d, z, 1e-12)? - 1.0).abs());
            }
            Ok(worst)
        })();
        out.push(&format!("kernels.poisson_mass.{name}"), "Poisson kernel integrates to 1 over the boundary", defect, 1e-8);

        let mut r = rng(120 + k as u64);
        let defect = (|| {
            let pts: Vec<Complex64> = (0..30).map(|_| random_interior(&mut r, *d)).collect();
            let mut worst: f64 = 0.0;
            for kind in [KernelKind::Szego, KernelKind::Bergman, KernelKind::Power(0.7), KernelKind::Power(2.5)] {
                worst = worst.max(gram_defect(&kernels::gram_psd(&pts, kind, *d)?));
            }
            Ok(worst)
        })();
        out.push(&format!("kernels.gram_psd.{name}"), "Szegő, Bergman and power kernels have PSD Gram matrices", defect, 1e-10);
    }

    let defect = (|| {
        let mut worst: f64 = 0.0;
        for lambda in [0.5, 1.0, 2.0] {
            for t in [0.5, 1.0, 2.0] {
                let v = ft_measure_algebraic(|x| lambda / (PI * (lambda * lambda + x * x)), t, 1e-12)?;
                worst = worst.max((v - c((-lambda * t).exp(), 0.0)).norm());
            }
        }
        Ok(worst)
    })();
    out.push("kernels.poisson_fourier", "Fourier transform of the half-plane Poisson kernel at iλ is e^{−λ|t|}", defect, 1e-8);

    let defect = (|| {
        let mut worst: f64 = 0.0;
        for lambda in [-0.5, 0.3, 0.9] {
            let z = c(lambda, 0.0);
            for n in 0..=5 {
                let err = std::cell::Cell::new(None);
                let v = circle_trapezoid(
                    |t| {
                        let p = kernels::poisson(Domain::Disc, z, &BoundaryPoint::circle(t));
                        match p {
                            Ok(p) => c(0.0, n as f64 * t).exp() * p,
                            Err(e) => {
                                err.set(Some(e));
                                c(f64::NAN, 0.0)
                            }
                        }
                    },
                    DEFAULT_BOUNDARY_NODES,
                );
                if let Some(e) = err.take() {
                    return Err(e);
                }
                worst = worst.max((v - c(lambda.powi(n), 0.0)).norm());
            }
        }
        Ok(worst)
    })();
    out.push("kernels.disc_moments", "Disc Poisson moments ∫e^{int}P_λ(e^{it})dt = λⁿ", defect, 1e-8);

    let disc_f: [fn(Complex64) -> Complex64; 5] = [
        |_| c(1.0, 0.0),
        |z| z,
        |z| z * z + 1.0,
        |z| (z - 0.5).powi(3),
        |z| z.powi(4) - c(0.0, 1.0) * z + 2.0,
    ];
    let defect = (|| {
        let mut worst: f64 = 0.0;
        for (k, f) in disc_f.iter().enumerate() {
            let lambda = [0.3, -0.4, 0.0, 0.6, 0.2][k];
            worst = worst.max(kernels::reflection_identity(Domain::Disc, lambda, *f, DEFAULT_BOUNDARY_NODES)?.defect);
        }
        Ok(worst)
    })();
    out.push("kernels.reflection_identity.disc", "⟨f*, θ_w f*⟩ = |f(w)|²/Q(w,w) for f = F·Q_w", defect, 1e-7);

    let strip_f: [fn(Complex64) -> Complex64; 5] = [
        |_| c(1.0, 0.0),
        |z| z,
        |z| z * z - 1.0,
        |z| (z - c(0.2, 0.1)).powi(3),
        |z| c(1.0, 1.0) + z * c(0.0, 2.0) - z * z * 0.5,
    ];
    let defect = (|| {
        let mut worst: f64 = 0.0;
        for (k, f) in strip_f.iter().enumerate() {
            let lambda = [0.0, 0.7, -1.2, 0.3, 2.0][k];
            worst = worst.max(kernels::reflection_identity(strip(1.0), lambda, *f, DEFAULT_BOUNDARY_NODES)?.defect);
        }
        Ok(worst)
    })();
    out.push("kernels.reflection_identity.strip", "⟨f*, θ_w f*⟩ = |f(w)|²/Q(w,w) for f = F·Q_w", defect, 1e-7);

    let mut r = rng(130);
    let defect = (|| {
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let z = random_interior(&mut r, Domain::Disc);
            worst = worst.max((cayley_inv(cayley(z)?)? - z).norm());
            for d in domains.iter().map(|p| p.1) {
                let w = random_interior(&mut r, d);
                worst = worst.max((d.sigma(d.sigma(w)) - w).norm());
            }
        }
        Ok(worst)
    })();
    out.push("domains.involutions", "Cayley map round trip and σ∘σ = id", defect, 1e-13);

    let mut r = rng(131);
    let defect = (|| {
        let mut worst: f64 = 0.0;
        for (src, dst) in [(Domain::HalfPlane, Domain::Disc), (Domain::HalfPlane, strip(1.3)), (Domain::Disc, strip(0.8))] {
            let t = HardyTransfer::new(src, dst)?;
            for _ in 0..10 {
                let (z, w) = (random_interior(&mut r, dst), random_interior(&mut r, dst));
                // Q_dst(z, w) = √φ′(z)·conj(√φ′(w))·Q_src(φ(z), φ(w)) for φ: dst → src.
                let (dz, pz) = t.pullback(z)?;
                let (dw, pw) = t.pullback(w)?;
                let lhs = kernels::szego(dst, z, w)?;
                let rhs = dz * dw.conj() * kernels::szego(src, pz, pw)?;
                worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
            }
        }
        Ok(worst)
    })();
    out.push("domains.hardy_transfer", "Hardy-space transfers intertwine the Szegő kernels", defect, 1e-10);
}

fn ratio(err: f64, bound: f64) -> f64 {
    if err == 0.0 {
        0.0
    } else {
        err / bound
    }
}

fn series_checks(out: &mut Collector) {
    let beta = 1.0;
    let d = strip(beta);
    let ns = [100u64, 1000, 10_000];
    let mut r = rng(200);
    let pts: Vec<(Complex64, Complex64)> = (0..100).map(|_| (random_interior(&mut r, d), random_interior(&mut r, d))).collect();

    let (mut sz_ratio, mut sz_top, mut bg_ratio, mut bg_top, mut split_ratio): (Result<f64>, Result<f64>, Result<f64>, Result<f64>, Result<f64>) =
        (Ok(0.0), Ok(0.0), Ok(0.0), Ok(0.0), Ok(0.0));
    let res = (|| -> Result<()> {
        let (mut a, mut b, mut cc, mut dd, mut e) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for &(z, w) in &pts {
            let q = kernels::szego(d, z, w)?;
            let bq = kernels::bergman_strip(beta, z, w)?;
            for &n in &ns {
                let s = periodize::szego_series(beta, z, w, n)?;
                let err = (s.value - q).norm();
                a = a.max(ratio(err, s.tail_bound));
                let bs = periodize::bergman_series(beta, z, w, n)?;
                let berr = (bs.value - bq).norm();
                cc = cc.max(ratio(berr, bs.tail_bound));
                if n == 10_000 {
                    b = b.max(err);
                    dd = dd.max(berr);
                }
            }
            let (p, m) = periodize::szego_split(beta, z, w, 10_000)?;
            e = e.max(ratio((p.value + m.value - q).norm(), p.tail_bound + m.tail_bound));
        }
        sz_ratio = Ok(a);
        sz_top = Ok(b);
        bg_ratio = Ok(cc);
        bg_top = Ok(dd);
        split_ratio = Ok(e);
        Ok(())
    })();
    if let Err(e) = res {
        sz_ratio = Err(e.clone());
        sz_top = Err(e.clone());
        bg_ratio = Err(e.clone());
        bg_top = Err(e.clone());
        split_ratio = Err(e);
    }
    out.push("series.szego.bound", "strip Szegő periodization: error / tail bound", sz_ratio, 1.0);
    out.push("series.szego.defect", "strip Szegő periodization error at N = 10⁴", sz_top, 1e-6);
    out.push("series.bergman.bound", "strip Bergman periodization: error / tail bound", bg_ratio, 1.0);
    out.push("series.bergman.defect", "strip Bergman periodization error at N = 10⁴", bg_top, 1e-6);
    out.push("series.szego.split", "Q⁺ + Q⁻ = Q: error / combined tail bound", split_ratio, 1.0);

    let mut r = rng(201);
    let defect = (|| {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let z = c(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
            if (z.re - z.re.round()).abs() < 0.05 && z.im.abs() < 0.05 {
                continue;
            }
            let exact = PI / (z * PI).sin();
            for &n in &ns {
                let s = periodize::csc_partial_fractions(z, n)?;
                worst = worst.max(ratio((s.value - exact).norm(), s.tail_bound));
            }
        }
        Ok(worst)
    })();
    out.push("series.csc.bound", "π/sin(πz) partial fractions: error / tail bound", defect, 1.0);

    let mut r = rng(202);
    let defect = (|| {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let b = r.random_range(0.5..3.0);
            let z = c(r.random_range(-4.0..4.0), r.random_range(-4.0..4.0));
            let k0 = (z.im / (2.0 * b)).round();
            if c(z.re, z.im - 2.0 * b * k0).norm() < 0.05 {
                continue;
            }
            let exact = (PI / (2.0 * b)) / (z * (PI / (2.0 * b))).sinh();
            for &n in &ns {
                let s = periodize::sinh_partial_fractions(b, z, n)?;
                worst = worst.max(ratio((s.value - exact).norm(), s.tail_bound));
            }
        }
        Ok(worst)
    })();
    out.push("series.sinh.bound", "(π/2β)/sinh(πz/2β) partial fractions: error / tail bound", defect, 1.0);

    let zs = [c(0.3, 0.5), c(-1.0, 1.2), c(2.0, 1.0), c(0.0, 0.8)];
    let hw = measures::STRIP_MEASURE_HALF_WIDTH / beta;
    let h = measures::STRIP_MEASURE_SPACING / beta;
    for (name, mode, density) in [
        ("alternating", SplittingMode::Alternating, (|_l: f64| 1.0 / (2.0 * PI)) as fn(f64) -> f64),
        ("plain", SplittingMode::Plain, |l: f64| l.abs() / (4.0 * PI * PI)),
    ] {
        let rep = (|| {
            let mu = MeasureOnR::from_density(measures::GridDensity::symmetric(hw, h, density)?)?;
            let s = periodize::geometric_splitting(&mu, beta, mode)?;
            periodize::splitting_check(&s, beta, &zs)
        })();
        let (a, b) = match rep {
            Ok(r) => (Ok(r.symmetry_defect), Ok(r.decomposition_defect)),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        out.push(&format!("series.splitting.{name}.symmetry"), "ν̂(2iβ − z) = ν̂(z) for the split measure", a, 1e-8);
        out.push(&format!("series.splitting.{name}.decomposition"), "ν̂(z) = ν̂₊(z) + ν̂₊(2iβ − z)", b, 1e-8);
    }
}

fn random_atomic(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<MeasureOnR> {
    let n = r.random_range(1..=5);
    MeasureOnR::atomic((0..n).map(|_| (r.random_range(lo..hi), r.random_range(0.1..2.0))).collect())
}

fn measure_checks(out: &mut Collector) {
    let beta = 1.0;
    let mut r = rng(300);
    let mus: Vec<MeasureOnR> = (0..10).filter_map(|_| random_atomic(&mut r, 0.01, 4.0).ok()).collect();

    let defect = (|| {
        let mut worst: f64 = 0.0;
        for mu in &mus {
            let a = measures::gamma_map(&measures::kappa_multiplier(mu, beta)?, beta)?;
            let b = measures::capital_gamma_map(mu, beta)?;
            if a.atoms().len() != b.atoms().len() {
                return Ok(f64::INFINITY);
            }
            for (x, y) in a.atoms().iter().zip(b.atoms()) {
                worst = worst.max((x.location - y.location).abs()).max((x.weight - y.weight).abs());
            }
        }
        Ok(worst)
    })();
    out.push("measures.gamma_kappa", "γ ∘ M_κ = Γ atomwise", defect, 1e-15);

    let defect = (|| {
        let mut worst: f64 = 0.0;
        for mu in &mus {
            let back = measures::gamma_inverse(&measures::gamma_map(mu, beta)?, beta)?;
            if back != *mu {
                worst = f64::INFINITY;
            }
        }
        Ok(worst)
    })();
    out.push("measures.gamma_roundtrip", "restricting γ(μ) to [0, ∞) recovers μ exactly", defect, 0.0);

    let defect = (|| {
        let mut worst: f64 = 0.0;
        for mu in &mus {
            let back = measures::capital_gamma_inverse(&measures::capital_gamma_map(mu, beta)?, beta)?;
            for (x, y) in back.atoms().iter().zip(mu.atoms()) {
                worst = worst.max((x.location - y.location).abs()).max((x.weight - y.weight).abs() / y.weight);
            }
        }
        Ok(worst)
    })();
    out.push("measures.capital_gamma_roundtrip", "(1 + e_{−β})·Γ(μ) restricted to [0, ∞) recovers μ", defect, 1e-15);

    let ts: Vec<f64> = (-8..=8).map(|k| k as f64 * 0.5).collect();
    let mut refl: f64 = 0.0;
    let mut kms = Ok(0.0);
    let mut circle = Ok(0.0);
    for mu in &mus {
        let nu = measures::capital_gamma_map(mu, beta);
        match nu {
            Ok(nu) => {
                refl = refl.max(measures::reflection_check(&nu, ReflectionClass { beta, order: ReflectionOrder::Beta }).max_relative_defect);
                kms = kms.and_then(|k: f64| Ok(k.max(measures::kms_check(&nu, beta, &ts)?.max_defect)));
            }
            Err(_) => refl = f64::INFINITY,
        }
        circle = circle.and_then(|w: f64| {
            let pair = measures::rp_circle_from_measure(mu, beta)?;
            let mut worst = w;
            for k in 0..=20 {
                let y = beta * k as f64 / 20.0;
                let direct: f64 = mu.atoms().iter().map(|a| a.weight * rpfunc::phi_t(beta, a.location, y).unwrap_or(f64::NAN)).sum();
                worst = worst.max((pair.circle(y)? - direct).abs());
            }
            Ok(worst)
        });
    }
    out.push("measures.capital_gamma_reflection", "Γ(μ) satisfies the β-reflection relation", Ok(refl), 1e-12);
    out.push("measures.capital_gamma_kms", "Γ(μ)^∧ satisfies the β-KMS condition", kms, 1e-8);
    out.push("measures.circle_function", "Γ(μ)^∧(iy) = ∫ φ_λ([y]) dμ(λ)", circle, 1e-10);

    let mut r = rng(301);
    let d = strip(beta);
    let pairs: Vec<(Complex64, Complex64)> = (0..10).map(|_| (random_interior(&mut r, d), random_interior(&mut r, d))).collect();
    let defect = (|| {
        let nu = measures::szego_measure(beta)?;
        let mut worst: f64 = 0.0;
        for &(z, w) in &pairs {
            worst = worst.max((measures::kernel_from_measure(&nu, beta, z, w)? - kernels::szego(d, z, w)?).norm());
        }
        Ok(worst)
    })();
    out.push("measures.kernel_szego", "ν̂(z − w̄) of the Szegő measure is the strip Szegő kernel", defect, 1e-8);
    let defect = (|| {
        let nu = measures::bergman_measure(beta)?;
        let mut worst: f64 = 0.0;
        for &(z, w) in &pairs {
            worst = worst.max((measures::kernel_from_measure(&nu, beta, z, w)? - kernels::bergman_strip(beta, z, w)?).norm());
        }
        Ok(worst)
    })();
    out.push("measures.kernel_bergman", "ν̂(z − w̄) of the Bergman measure is the strip Bergman kernel", defect, 1e-8);

    let defect = (|| {
        let mut r = rng(302);
        let pts: Vec<Complex64> = (0..30).map(|_| random_interior(&mut r, d)).collect();
        let mut worst: f64 = 0.0;
        for nu in [
            measures::szego_measure(beta)?,
            measures::bergman_measure(beta)?,
            measures::capital_gamma_map(&MeasureOnR::dirac(0.7)?, beta)?,
        ] {
            worst = worst.max(gram_defect(&measures::measure_kernel_gram(&nu, beta, &pts)?));
        }
        Ok(worst)
    })();
    out.push("measures.kernel_gram", "kernels from positive measures have PSD Gram matrices", defect, 1e-10);

    let defect = (|| {
        let t = measures::theta_involution_check(&measures::szego_measure(beta)?, beta, &pairs)?;
        Ok(t.max_defect.max(t.reflection.max_relative_defect))
    })();
    out.push("measures.theta_involution", "F ↦ F(βi − ·) preserves the Szegő-measure kernel", defect, 1e-8);

    let defect = (|| {
        let mut worst: f64 = 0.0;
        for (s, b) in [(2.0, 1.0), (1.5, 0.7), (3.0, 2.0)] {
            let nu = measures::nu_s_measure(s, b)?;
            worst = worst.max(measures::reflection_check(&nu, ReflectionClass { beta: b, order: ReflectionOrder::TwoBeta }).max_relative_defect);
        }
        let twisted = measures::half_twist(&measures::szego_measure(beta)?, beta)?;
        worst = worst.max(measures::reflection_check(&twisted, ReflectionClass { beta, order: ReflectionOrder::Beta }).max_relative_defect);
        Ok(worst)
    })();
    out.push("measures.thermal_reflection", "ν_s and e^{−βλ/2}ν satisfy their reflection relations", defect, 1e-12);

    let defect = (|| {
        let rm = measures::riesz_measure(1.5)?;
        let z = c(0.0, 2.0);
        Ok((measures::fourier(&rm.measure, z)? - measures::riesz_hat(1.5, z)?).norm())
    })();
    out.push("measures.riesz_transform", "∫e^{izp}dμ_s(p) = (i/z)^s", defect, 1e-6);

    let defect = measures::kappa_check(1.5, 1.0, 1.0, 0.25).map(|k| k.defect);
    out.push("measures.kappa", "ν̂_s(t) − ν̂_s(−t) = 2i Im μ̂_s(t) (Abel-damped)", defect, 1e-6);

    let defect = (|| {
        let g = measures::GridDensity::symmetric(10.0, 0.05, |l| (-l * l).exp())?;
        Ok((measures::laplace(&MeasureOnR::from_density(g)?, 0.0)? - PI.sqrt()).abs())
    })();
    out.push("measures.laplace_gaussian", "∫e^{−λ²}dλ = √π", defect, 1e-8);
}

fn rp_checks(out: &mut Collector) {
    let groups: [(&str, SymmetricGroupKind); 5] = [
        ("z", SymmetricGroupKind::Integers),
        ("r", SymmetricGroupKind::Reals),
        ("t0.5", SymmetricGroupKind::CircleBeta(0.5)),
        ("t1", SymmetricGroupKind::CircleBeta(1.0)),
        ("t3", SymmetricGroupKind::CircleBeta(3.0)),
    ];
    for (k, (name, group)) in groups.iter().enumerate() {
        let mut r = rng(400 + k as u64);
        let (mut pd, mut rp) = (0.0f64, 0.0f64);
        let res = (|| -> Result<()> {
            for _ in 0..10 {
                let (lo, hi) = if *group == SymmetricGroupKind::Integers { (-1.0, 1.0) } else { (0.0, 3.0) };
                let fam = rpfunc::RpFamily::new(*group, random_atomic(&mut r, lo, hi)?)?;
                let (samples, plus): (Vec<f64>, Vec<f64>) = match group {
                    SymmetricGroupKind::Integers => (
                        (0..30).map(|_| r.random_range(-20i32..=20) as f64).collect(),
                        (0..30).map(|_| r.random_range(0i32..=30) as f64).collect(),
                    ),
                    SymmetricGroupKind::Reals => {
                        ((0..30).map(|_| r.random_range(-5.0..5.0)).collect(), (0..30).map(|_| r.random_range(0.0..5.0)).collect())
                    }
                    SymmetricGroupKind::CircleBeta(b) => {
                        ((0..30).map(|_| r.random_range(0.0..*b)).collect(), (0..30).map(|_| r.random_range(0.0..=*b / 2.0)).collect())
                    }
                };
                pd = pd.max(gram_defect(&rpfunc::pd_gram(*group, |g| fam.eval(g), &samples)?));
                rp = rp.max(gram_defect(&rpfunc::rp_gram(*group, |g| fam.eval(g), &plus)?));
            }
            Ok(())
        })();
        let (pd, rp) = match res {
            Ok(()) => (Ok(pd), Ok(rp)),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        out.push(&format!("rp.pd_gram.{name}"), "mixtures of φ_λ are positive definite", pd, 1e-10);
        out.push(&format!("rp.rp_gram.{name}"), "mixtures of φ_λ are reflection positive", rp, 1e-10);
    }

    let mut r = rng(410);
    let defect = (|| {
        let mut misses = 0usize;
        for k in 0..120 {
            let beta = [0.5, 1.0, 3.0][k % 3];
            let (z, want_interior) = if k < 100 {
                (c(r.random_range(-10.0..10.0), beta * r.random_range(0.01..0.99)), true)
            } else {
                let y = if r.random::<bool>() { beta + r.random_range(0.05..3.0) } else { -r.random_range(0.05..3.0) };
                (c(r.random_range(-10.0..10.0), y), false)
            };
            let v = rpfunc::strip_characterization_check(beta, z)?.verdict;
            let ok = match v {
                StripVerdict::Interior => want_interior,
                StripVerdict::Exterior { witness } => !want_interior && rpfunc::c_t(beta, witness, z).norm() >= 1.0,
                _ => false,
            };
            if !ok {
                misses += 1;
            }
        }
        Ok(misses as f64)
    })();
    out.push("rp.strip_characterization", "S_β = {z : |c_t(z)| < 1 for all t > 0} (misclassified points)", defect, 0.0);

    let mut r = rng(411);
    let defect = (|| {
        let mut worst: f64 = 0.0;
        for n in 1..=4u32 {
            let samples: Vec<(f64, i8)> = (0..12).map(|_| (r.random_range(-3.0..3.0), if r.random::<bool>() { 1 } else { -1 })).collect();
            worst = worst.max(gram_defect(&rpfunc::param_rp_check(n, &samples)?));
            let plus: Vec<(f64, i8)> = samples.iter().map(|&(t, e)| (t.abs(), e)).collect();
            worst = worst.max(gram_defect(&rpfunc::param_rp_cone_check(n, &plus)?));
        }
        Ok(worst)
    })();
    out.push("rp.parameter", "ε^n e^{−n|t|} is positive definite and reflection positive", defect, 1e-10);

    let defect = (|| {
        let ys: Vec<f64> = (0..20).map(|k| 2.0 * k as f64 / 19.0).collect();
        Ok(rpfunc::laplace_identity_check(2.0, 1.3, &ys)?.max_defect)
    })();
    out.push("rp.laplace_identity", "φ_λ([y]) is the Laplace transform of Γ(δ_λ)", defect, 1e-14);

    let defect = (|| {
        let (beta, lambda) = (2.0, 1.0);
        let y = beta / 3.0;
        Ok((rpfunc::phi_t_fourier_partial_sum(beta, lambda, y, 10_000)? - rpfunc::phi_t(beta, lambda, y)?).abs())
    })();
    out.push("rp.circle_fourier_series", "Fourier series of φ_λ on T_β", defect, 1e-6);
}

fn modular_checks(out: &mut Collector) {
    let beta = 1.0;
    let spaces = (|| -> Result<Vec<(MeasureOnR, modular::ModularData)>> {
        let a = measures::capital_gamma_map(&MeasureOnR::atomic(vec![(0.4, 1.0), (1.5, 0.3), (2.2, 2.0)])?, beta)?;
        let b = measures::half_twist(&measures::szego_measure(beta)?, beta)?;
        Ok(vec![(a.clone(), modular::build_modular(&a, beta)?), (b.clone(), modular::build_modular(&b, beta)?)])
    })();
    let spaces = match spaces {
        Ok(s) => s,
        Err(e) => {
            for id in ["modular.jdj", "modular.j_isometry", "modular.tomita_membership", "modular.psi_pd", "modular.psi_kms"] {
                out.push(id, "modular data could not be built", Err(e.clone()), 0.0);
            }
            Vec::new()
        }
    };
    if !spaces.is_empty() {
        let mut r = rng(500);
        let mut random_vec = |n: usize| -> Vec<Complex64> { (0..n).map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect() };
        let (mut jdj, mut iso, mut tom) = (0.0f64, 0.0f64, 0.0f64);
        for (_, md) in &spaces {
            for _ in 0..10 {
                let v = random_vec(md.dim());
                jdj = jdj.max(md.jdj_defect(&v));
                let n = md.space.norm(&v);
                iso = iso.max((md.space.norm(&md.apply_j(&v)) - n).abs() / n);
            }
            for k in 0..50 {
                let v = random_vec(md.dim());
                // Half of the vectors are symmetrized into V.
                let v = if k % 2 == 0 { v.iter().zip(md.tomita(&v)).map(|(a, b)| (a + b) * 0.5).collect() } else { v };
                let fixed = v.iter().zip(md.tomita(&v)).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) < modular::MEMBERSHIP_TOL;
                if fixed != modular::standard_membership(md, &v).member || (k % 2 == 0 && !fixed) {
                    tom = f64::INFINITY;
                }
            }
        }
        out.push("modular.jdj", "JΔJ = Δ⁻¹", Ok(jdj), 1e-12);
        out.push("modular.j_isometry", "J is isometric", Ok(iso), 1e-12);
        out.push("modular.tomita_membership", "JΔ^{1/2}-fixed vectors are exactly the members of V", Ok(tom), 0.0);

        let ts: Vec<f64> = (0..20).map(|k| -5.0 + 0.5 * k as f64).collect();
        let (mut pd, mut kms) = (Ok(0.0f64), Ok(0.0f64));
        for (_, md) in &spaces {
            let v = md.space.sample(|l| c(1.0 / (1.0 + l * l), l / (1.0 + l.powi(4))));
            pd = pd.map(|p| p.max(gram_defect(&modular::psi_gram(md, &v, &ts))));
            kms = kms.and_then(|k| Ok(k.max(measures::kms_check(&modular::psi_measure(md, &v)?, beta, &ts)?.max_defect)));
        }
        out.push("modular.psi_pd", "ψ(t) = ⟨v, Δ^{−it/β}v⟩ is positive definite", pd, 1e-10);
        out.push("modular.psi_kms", "ψ satisfies the β-KMS condition", kms, 1e-8);
    }

    let defect = (|| {
        let mut worst: f64 = 0.0;
        for b in [0.7, 1.0, 2.0] {
            for t in [0.0, 0.5, 1.0] {
                worst = worst.max(modular::psi_hardy_midline_forms(b, t)?.defect);
            }
        }
        Ok(worst)
    })();
    out.push("modular.midline_forms", "the integral forms of the midline Szegő coefficient agree", defect, 1e-8);

    let defect = modular::commutation_check(beta, 4096).map(|r| r.max_defect);
    out.push("modular.commutation", "V_s U_t = e^{its} U_t V_s (spectral shift, interior nodes)", defect, 1e-8);
    let h = modular::COMMUTATION_PERIOD / 4096.0;
    let defect = modular::commutation_check_with(100.0 * h, &[0.1, 1.0, 10.0], 4096).map(|r| r.max_defect);
    out.push("modular.commutation_exact", "V_s U_t = e^{its} U_t V_s (grid-step shift, interior nodes)", defect, 1e-12);
}

fn appendix_checks(out: &mut Collector) {
    for lambda in [0.5, 1.0, 2.0] {
        for beta in [1.0, 2.0] {
            let mut defect = 0.0f64;
            let mut bound = f64::INFINITY;
            let mut failed = None;
            for x in [0.0, beta / 3.0, beta / 2.0] {
                match appendix::poisson_summation_check(beta, lambda, x, 10_000) {
                    Ok(r) => {
                        // Record the worst defect relative to its own bound.
                        if r.defect / r.tail_bound >= defect / bound || bound.is_infinite() {
                            defect = r.defect;
                            bound = r.tail_bound;
                        }
                    }
                    Err(e) => failed = Some(e),
                }
            }
            let d = match failed {
                Some(e) => Err(e),
                None => Ok(defect),
            };
            out.push(
                &format!("appendix.poisson_summation.l{lambda}.b{beta}"),
                "Poisson summation for the Lorentzian (tolerance = tail bound at K = 10⁴)",
                d,
                bound,
            );
        }
    }
    let xis = [-2.0, -0.5, 0.0, 1.0, 3.0];
    out.push("appendix.sech_ft", "∫e^{ixξ}/cosh x dx = π/cosh(πξ/2)", appendix::sech_ft_check(&xis).map(|r| r.max_defect), 1e-10);
    out.push(
        "appendix.sech2_ft",
        "unitary transform of sech² is √(π/2)λ/sinh(πλ/2)",
        appendix::sech2_ft_check(&[0.0, 0.5, 1.0, 2.5]).map(|r| r.max_defect),
        1e-8,
    );
    let defect = (|| {
        let mut worst: f64 = 0.0;
        for n in 1..=3 {
            worst = worst.max(appendix::sech_power_recursion_check(n, &[0.0, 1.0, 2.0])?.max_defect);
        }
        Ok(worst)
    })();
    out.push("appendix.sech_power_recursion", "F(cosh^{−n−2}) = (n² + p²)/(n(n+1))·F(cosh^{−n})", defect, 1e-8);
    let defect = (|| {
        let mut worst: f64 = 0.0;
        for beta in [0.5, 1.0, 2.0] {
            let zs = [c(0.0, beta), c(1.0, beta), c(-0.7, 0.4 * beta), c(2.0, 1.6 * beta)];
            worst = worst.max(appendix::ftcosh_check(beta, &zs)?.max_defect);
        }
        Ok(worst)
    })();
    out.push("appendix.ftcosh", "transform of dλ/(2π(1+e^{−2βλ})) is (1/4β)·i/sinh(πz/2β)", defect, 1e-9);
    out.push("appendix.sinh_modulus", "|sinh(x+iy)|² = sinh²x + sin²y", Ok(appendix::sinh_modulus_check(41, 5.0, 5.0).max_defect), 1e-13);
}
