//! End-to-end acceptance: thirteen identity checks, each compared against
//! closed forms written out independently here, printed as one PASS/FAIL line
//! per criterion.  Run with `cargo test -p reflpos --test acceptance -- --nocapture`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reflpos::domains::{BoundaryPoint, Domain};
use reflpos::measures::{self, MeasureOnR, ReflectionClass, ReflectionOrder};
use reflpos::numerics::appendix;
use reflpos::numerics::fourier::ft_measure_algebraic;
use reflpos::{kernels, modular, periodize, rpfunc, Complex64, StripVerdict, SymmetricGroupKind};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Sub-checks of one criterion, each with its own tolerance.
#[derive(Default)]
struct Checks {
    items: Vec<(&'static str, f64, f64)>,
}

impl Checks {
    fn add(&mut self, label: &'static str, defect: f64, tol: f64) {
        let defect = if defect.is_nan() { f64::INFINITY } else { defect };
        match self.items.iter_mut().find(|(l, _, _)| *l == label) {
            Some(item) => item.1 = item.1.max(defect),
            None => self.items.push((label, defect, tol)),
        }
    }

    fn fail(&mut self, label: &'static str) {
        self.add(label, f64::INFINITY, 0.0);
    }
}

struct Outcome {
    criterion: usize,
    name: &'static str,
    checks: Checks,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Outcome {
    fn pass(&self) -> bool {
        !self.checks.items.is_empty()
            && self.checks.items.iter().all(|&(_, d, t)| d <= t)
            && self.budget.is_none_or(|b| self.elapsed <= b)
    }
}

fn run(criterion: usize, name: &'static str, budget: Option<Duration>, f: impl FnOnce(&mut Checks)) -> Outcome {
    let start = Instant::now();
    let mut checks = Checks::default();
    f(&mut checks);
    Outcome { criterion, name, checks, elapsed: start.elapsed(), budget }
}

// ---------------------------------------------------------------------------
// Independent closed forms
// ---------------------------------------------------------------------------

fn strip_poisson_lower(beta: f64, z: Complex64, t: f64) -> f64 {
    let a = PI / beta;
    (a * z.im).sin() / (2.0 * beta * ((a * (z.re - t)).cosh() - (a * z.im).cos()))
}

fn strip_poisson_upper(beta: f64, z: Complex64, t: f64) -> f64 {
    let a = PI / beta;
    (a * z.im).sin() / (2.0 * beta * ((a * (z.re - t)).cosh() + (a * z.im).cos()))
}

fn szego_oracle(d: Domain, z: Complex64, w: Complex64) -> Complex64 {
    match d {
        Domain::Disc => 1.0 / (2.0 * PI * (c(1.0, 0.0) - z * w.conj())),
        Domain::HalfPlane => c(0.0, 1.0) / (2.0 * PI * (z - w.conj())),
        Domain::Strip { beta } => c(0.0, 1.0) / (4.0 * beta * ((z - w.conj()) * PI / (2.0 * beta)).sinh()),
    }
}

fn bergman_oracle(beta: f64, z: Complex64, w: Complex64) -> Complex64 {
    let s = ((z - w.conj()) * PI / (2.0 * beta)).sinh();
    -1.0 / (16.0 * beta * beta * s * s)
}

fn phi_circle_oracle(beta: f64, lambda: f64, y: f64) -> f64 {
    let y = y.rem_euclid(beta);
    ((-y * lambda).exp() + (-(beta - y) * lambda).exp()) / (1.0 + (-beta * lambda).exp())
}

fn interior(r: &mut ChaCha8Rng, d: Domain) -> Complex64 {
    match d {
        Domain::Disc => c(0.0, r.random_range(0.0..2.0 * PI)).exp() * (0.95 * r.random::<f64>().sqrt()),
        Domain::HalfPlane => c(r.random_range(-4.0..4.0), r.random_range(0.05..4.0)),
        Domain::Strip { beta } => c(r.random_range(-4.0..4.0), beta * r.random_range(0.05..0.95)),
    }
}

/// `max(−λ_min, 0)/‖G‖` of a real symmetric matrix, with the asymmetry added.
fn psd_defect(g: &DMatrix<f64>) -> f64 {
    let asym = (g - g.transpose()).amax();
    let eig = g.clone().symmetric_eigen().eigenvalues;
    let norm = eig.amax().max(f64::MIN_POSITIVE);
    ((-eig.min()).max(0.0) + asym) / norm
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

fn hua_consistency(out: &mut Checks) {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for d in [Domain::Disc, Domain::HalfPlane, Domain::Strip { beta: 1.0 }, Domain::Strip { beta: 2.5 }] {
        for _ in 0..50 {
            let z = interior(&mut r, d);
            let (x, oracle) = match d {
                Domain::Disc => {
                    let th = r.random_range(-PI..PI);
                    let e = c(th.cos(), th.sin());
                    (BoundaryPoint::circle(th), (1.0 - z.norm_sqr()) / (2.0 * PI * (e - z).norm_sqr()))
                }
                Domain::HalfPlane => {
                    let t = r.random_range(-8.0..8.0);
                    (BoundaryPoint::line(t), z.im / (PI * ((z.re - t).powi(2) + z.im * z.im)))
                }
                Domain::Strip { beta } => {
                    let t = r.random_range(-8.0..8.0);
                    if r.random::<bool>() {
                        (BoundaryPoint::lower(beta, t), strip_poisson_lower(beta, z, t))
                    } else {
                        (BoundaryPoint::upper(beta, t), strip_poisson_upper(beta, z, t))
                    }
                }
            };
            let p = kernels::poisson(d, z, &x).unwrap();
            let hua = kernels::poisson_from_szego(d, z, &x).unwrap();
            let q = szego_oracle(d, z, x.embed());
            out.add("P = |Q(z,x)|²/Q(z,z)", (p - hua).abs(), 1e-10);
            out.add("P against its closed form", (p - oracle).abs(), 1e-10);
            out.add("Hua form against oracle Szegő kernel", (hua - q.norm_sqr() / szego_oracle(d, z, z).re).abs(), 1e-10);
        }
    }
}

fn poisson_normalization(out: &mut Checks) {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for d in [Domain::Disc, Domain::HalfPlane, Domain::Strip { beta: 1.0 }] {
        for _ in 0..5 {
            let z = interior(&mut r, d);
            out.add("adaptive quadrature", (kernels::poisson_total_mass(d, z, 1e-12).unwrap() - 1.0).abs(), 1e-8);
            // Independent trapezoid rules in variables where the integrand is periodic or decays fast.
            let own: f64 = match d {
                Domain::Disc => {
                    let n = 4096;
                    let h = 2.0 * PI / n as f64;
                    (0..n).map(|k| kernels::poisson(d, z, &BoundaryPoint::circle(k as f64 * h)).unwrap() * h).sum()
                }
                Domain::HalfPlane => {
                    // x = Re z + Im z·tan θ maps (−π/2, π/2) onto ℝ.
                    let n = 4000;
                    let h = PI / n as f64;
                    (0..n)
                        .map(|k| {
                            let th = -PI / 2.0 + (k as f64 + 0.5) * h;
                            let x = z.re + z.im * th.tan();
                            kernels::poisson(d, z, &BoundaryPoint::line(x)).unwrap() * z.im / th.cos().powi(2) * h
                        })
                        .sum()
                }
                Domain::Strip { beta } => {
                    let h = beta / 200.0;
                    let n = 16_000i64;
                    (-n..=n)
                        .map(|k| {
                            let t = z.re + k as f64 * h;
                            (kernels::poisson(d, z, &BoundaryPoint::lower(beta, t)).unwrap()
                                + kernels::poisson(d, z, &BoundaryPoint::upper(beta, t)).unwrap())
                                * h
                        })
                        .sum()
                }
            };
            out.add("independent trapezoid", (own - 1.0).abs(), 1e-8);
        }
    }
}

fn half_plane_poisson_transform(out: &mut Checks) {
    for lambda in [0.5, 1.0, 2.0] {
        for t in [0.5, 1.0, 2.0] {
            let z = c(0.0, lambda);
            let v = ft_measure_algebraic(|x| kernels::poisson(Domain::HalfPlane, z, &BoundaryPoint::line(x)).unwrap(), t, 1e-12).unwrap();
            out.add("∫P e^{itx} = e^{−λ|t|}", (v - c((-lambda * t).exp(), 0.0)).norm(), 1e-8);
        }
    }
}

fn disc_moments(out: &mut Checks) {
    let n_nodes = 2048;
    for lambda in [-0.5, 0.3, 0.9] {
        for n in 0..=5 {
            let mut acc = c(0.0, 0.0);
            for k in 0..n_nodes {
                let t = 2.0 * PI * k as f64 / n_nodes as f64;
                acc += c(0.0, n as f64 * t).exp() * kernels::poisson(Domain::Disc, c(lambda, 0.0), &BoundaryPoint::circle(t)).unwrap();
            }
            acc *= 2.0 * PI / n_nodes as f64;
            out.add("moment equals λⁿ", (acc - c(lambda.powi(n), 0.0)).norm(), 1e-8);
        }
    }
}

fn reflection_positive_grams(out: &mut Checks) {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let groups = [
        SymmetricGroupKind::Integers,
        SymmetricGroupKind::Reals,
        SymmetricGroupKind::CircleBeta(0.5),
        SymmetricGroupKind::CircleBeta(1.0),
        SymmetricGroupKind::CircleBeta(3.0),
    ];
    for group in groups {
        for _ in 0..10 {
            let lambda: f64 = match group {
                SymmetricGroupKind::Integers => r.random_range(-1.0..=1.0),
                _ => r.random_range(0.0..4.0),
            };
            let oracle = |g: f64| -> f64 {
                match group {
                    SymmetricGroupKind::Integers => lambda.powi(g.round().abs() as i32),
                    SymmetricGroupKind::Reals => (-lambda * g.abs()).exp(),
                    SymmetricGroupKind::CircleBeta(b) => phi_circle_oracle(b, lambda, g),
                }
            };
            let (all, plus): (Vec<f64>, Vec<f64>) = match group {
                SymmetricGroupKind::Integers => (
                    (0..30).map(|_| r.random_range(-15i32..=15) as f64).collect(),
                    (0..30).map(|_| r.random_range(0i32..=15) as f64).collect(),
                ),
                SymmetricGroupKind::Reals => ((0..30).map(|_| r.random_range(-4.0..4.0)).collect(), (0..30).map(|_| r.random_range(0.0..4.0)).collect()),
                SymmetricGroupKind::CircleBeta(b) => {
                    ((0..30).map(|_| r.random_range(0.0..b)).collect(), (0..30).map(|_| r.random_range(0.0..=b / 2.0)).collect())
                }
            };
            let phi = |g: f64| group.phi(lambda, g);
            let pd = rpfunc::pd_gram(group, phi, &all).unwrap();
            let rp = rpfunc::rp_gram(group, phi, &plus).unwrap();
            if !pd.verdict || !rp.verdict {
                out.fail("library Gram verdicts");
            }
            out.add("library pd Gram −λ_min/‖G‖", (-pd.min_eigenvalue).max(0.0) / pd.spectral_norm, 1e-10);
            out.add("library rp Gram −λ_min/‖G‖", (-rp.min_eigenvalue).max(0.0) / rp.spectral_norm, 1e-10);
            // Independent Grams: φ(s − t) on the group and φ(s + t) on the cone.
            let gd = DMatrix::from_fn(30, 30, |i, j| oracle(all[i] - all[j]));
            let gr = DMatrix::from_fn(30, 30, |i, j| oracle(plus[i] + plus[j]));
            out.add("oracle pd Gram", psd_defect(&gd), 1e-10);
            out.add("oracle rp Gram", psd_defect(&gr), 1e-10);
            for &g in &all {
                out.add("φ_λ against closed form", (group.phi(lambda, g).unwrap() - oracle(g)).abs(), 1e-13);
            }
        }
    }
}

fn random_atomic(r: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let n = r.random_range(1..=6);
    let mut atoms: Vec<(f64, f64)> = (0..n).map(|_| (r.random_range(0.01..5.0), r.random_range(0.1..3.0))).collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    atoms.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-6);
    atoms
}

fn thermal_equivalence(out: &mut Checks) {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    for k in 0..10 {
        let beta = [0.5, 1.0, 2.0][k % 3];
        let atoms = random_atomic(&mut r);
        let mu = MeasureOnR::atomic(atoms.clone()).unwrap();
        let nu = measures::capital_gamma_map(&mu, beta).unwrap();

        let refl = measures::reflection_check(&nu, ReflectionClass::new(beta, ReflectionOrder::Beta).unwrap());
        if !refl.symmetric {
            out.fail("library reflection check");
        }
        out.add("library reflection check", refl.max_relative_defect, 1e-12);
        // ν({λ}) = w/(1 + e^{−βλ}) and ν({−λ}) = e^{−βλ} ν({λ}).
        let at = |x: f64| nu.atoms().iter().find(|a| (a.location - x).abs() < 1e-12).map_or(f64::NAN, |a| a.weight);
        for &(l, w) in &atoms {
            let e = (-beta * l).exp();
            let (p, m) = (at(l), at(-l));
            out.add("oracle reflection relation", ((p - w / (1.0 + e)).abs() / w).max((m - e * p).abs() / p), 1e-12);
        }

        let ts: Vec<f64> = (0..25).map(|j| -6.0 + 0.5 * j as f64).collect();
        out.add("library KMS check", measures::kms_check(&nu, beta, &ts).unwrap().max_defect, 1e-8);
        let hat = |z: Complex64| nu.atoms().iter().map(|a| a.weight * (c(0.0, 1.0) * z * a.location).exp()).sum::<Complex64>();
        for &t in &ts {
            out.add("oracle ν̂(t + iβ) = conj ν̂(t)", (hat(c(t, beta)) - hat(c(t, 0.0)).conj()).norm(), 1e-8);
        }

        let pair = measures::rp_circle_from_measure(&mu, beta).unwrap();
        for j in 0..=40 {
            let y = 2.0 * beta * j as f64 / 40.0 - beta / 2.0;
            let direct: f64 = atoms.iter().map(|&(l, w)| w * phi_circle_oracle(beta, l, y)).sum();
            out.add("circle function = Σ w φ_λ", (pair.circle(y).unwrap() - direct).abs(), 1e-10);
        }
    }
}

fn kappa_intertwining(out: &mut Checks) {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    for k in 0..10 {
        let beta = [0.5, 1.0, 2.0][k % 3];
        let mut atoms = random_atomic(&mut r);
        if k == 0 {
            atoms.insert(0, (0.0, 0.7));
        }
        let mu = MeasureOnR::atomic(atoms.clone()).unwrap();
        let lhs = measures::gamma_map(&measures::kappa_multiplier(&mu, beta).unwrap(), beta).unwrap();
        let rhs = measures::capital_gamma_map(&mu, beta).unwrap();
        if lhs.atoms().len() != rhs.atoms().len() {
            out.fail("γ ∘ M_κ = Γ atomwise");
        }
        for (a, b) in lhs.atoms().iter().zip(rhs.atoms()) {
            out.add("γ ∘ M_κ = Γ atomwise", (a.location - b.location).abs().max((a.weight - b.weight).abs()), 1e-15);
        }
        // Positive-side weights of Γ(μ) from the definition (the atom at 0 keeps its full mass).
        for &(l, w) in &atoms {
            let expect = if l == 0.0 { w } else { w / (1.0 + (-beta * l).exp()) };
            let got = rhs.atoms().iter().find(|a| a.location == l).map_or(f64::NAN, |a| a.weight);
            out.add("Γ(μ) weights against definition", (got - expect).abs(), 1e-15);
        }
        let back = measures::gamma_inverse(&measures::gamma_map(&mu, beta).unwrap(), beta).unwrap();
        out.add("γ roundtrip is exact", if back == mu { 0.0 } else { f64::INFINITY }, 0.0);
        let back = measures::capital_gamma_inverse(&rhs, beta).unwrap();
        if back.atoms().len() != atoms.len() {
            out.fail("Γ roundtrip");
        }
        for (a, &(l, w)) in back.atoms().iter().zip(&atoms) {
            out.add("Γ roundtrip locations exact", (a.location - l).abs(), 0.0);
            out.add("Γ roundtrip weights", (a.weight - w).abs() / w, 1e-15);
        }
    }
}

fn series_soundness(out: &mut Checks) {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let beta = 1.0;
    let d = Domain::Strip { beta };
    let ratio = |err: f64, bound: f64| if err == 0.0 { 0.0 } else { err / bound };
    for _ in 0..100 {
        let (z, w) = (interior(&mut r, d), interior(&mut r, d));
        let q = szego_oracle(d, z, w);
        let b = bergman_oracle(beta, z, w);
        let u = c(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let csc = PI / (u * PI).sin();
        let v = c(r.random_range(-3.0..3.0), r.random_range(0.05..1.95));
        let sinh = (PI / (2.0 * beta)) / (v * PI / (2.0 * beta)).sinh();
        for n in [100u64, 1_000, 10_000] {
            let s = periodize::szego_series(beta, z, w, n).unwrap();
            out.add("Szegő series error / tail bound", ratio((s.value - q).norm(), s.tail_bound), 1.0);
            if n == 10_000 {
                out.add("Szegő series error at N = 10⁴", (s.value - q).norm(), 1e-6);
            }
            let s = periodize::bergman_series(beta, z, w, n).unwrap();
            out.add("Bergman series error / tail bound", ratio((s.value - b).norm(), s.tail_bound), 1.0);
            if n == 10_000 {
                out.add("Bergman series error at N = 10⁴", (s.value - b).norm(), 1e-6);
            }
            let s = periodize::csc_partial_fractions(u, n).unwrap();
            out.add("csc partial fractions error / tail bound", ratio((s.value - csc).norm(), s.tail_bound), 1.0);
            let s = periodize::sinh_partial_fractions(beta, v, n).unwrap();
            out.add("1/sinh partial fractions error / tail bound", ratio((s.value - sinh).norm(), s.tail_bound), 1.0);
        }
    }
}

fn kernel_from_measure(out: &mut Checks) {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    for beta in [1.0, 2.0] {
        let d = Domain::Strip { beta };
        let sz = measures::szego_measure(beta).unwrap();
        let bg = measures::bergman_measure(beta).unwrap();
        for _ in 0..10 {
            let (z, w) = (interior(&mut r, d), interior(&mut r, d));
            let ks = measures::kernel_from_measure(&sz, beta, z, w).unwrap();
            let kb = measures::kernel_from_measure(&bg, beta, z, w).unwrap();
            out.add("Szegő measure gives the Szegő kernel", (ks - szego_oracle(d, z, w)).norm(), 1e-8);
            out.add("Bergman measure gives the Bergman kernel", (kb - bergman_oracle(beta, z, w)).norm(), 1e-8);
        }
    }
}

fn appendix_identities(out: &mut Checks) {
    for lambda in [0.5, 1.0, 2.0] {
        for beta in [1.0, 2.0] {
            let k_max = 10_000u64;
            let s = beta * lambda / (2.0 * PI);
            for x in [0.0, 0.3 * beta, 0.5 * beta, 0.9 * beta] {
                let rep = appendix::poisson_summation_check(beta, lambda, x, k_max).unwrap();
                out.add("Poisson summation defect / reported bound", rep.defect / rep.tail_bound, 1.0);
                // Σ_{|k|>K} s/(π(s² + k²)) < 2s/(πK).
                let rhs = ((-lambda * x).exp() + (-lambda * (beta - x)).exp()) / (1.0 - (-lambda * beta).exp());
                let own_bound = 2.0 * s / (PI * k_max as f64) + 1e-13;
                out.add("Poisson summation defect / (2s/πK)", (rep.lhs - rhs).abs() / own_bound, 1.0);
            }
        }
    }
    for s in appendix::sech_ft_check(&[-3.0, -1.0, 0.0, 0.7, 2.0, 4.0]).unwrap().samples {
        out.add("∫e^{ixξ}sech x dx", (s.lhs - c(PI / (PI * s.params[0] / 2.0).cosh(), 0.0)).norm(), 1e-10);
    }
    for s in appendix::sech2_ft_check(&[0.25, 1.0, 2.0, 3.5]).unwrap().samples {
        let l = s.params[0];
        out.add("unitary transform of sech²", (s.lhs - c((PI / 2.0).sqrt() * l / (PI * l / 2.0).sinh(), 0.0)).norm(), 1e-8);
    }
    for n in 1..=4 {
        out.add("cosh^{−n−2} recursion", appendix::sech_power_recursion_check(n, &[0.0, 0.5, 1.5, 3.0]).unwrap().max_defect, 1e-8);
    }
    for beta in [0.5, 1.0, 2.0] {
        let zs = [c(0.0, beta), c(0.8, 0.3 * beta), c(-1.5, 1.7 * beta)];
        for (s, &z) in appendix::ftcosh_check(beta, &zs).unwrap().samples.iter().zip(&zs) {
            let own = c(0.0, 1.0) / (4.0 * beta * (z * PI / (2.0 * beta)).sinh());
            out.add("transform of the thermal density", (s.lhs - own).norm(), 1e-9);
        }
    }
    let sm = appendix::sinh_modulus_check(31, 4.0, 4.0);
    out.add("|sinh(x+iy)|² = sinh²x + sin²y (library)", sm.max_defect, 1e-13);
    for s in &sm.samples {
        let (x, y) = (s.params[0], s.params[1]);
        let own = x.sinh().powi(2) + y.sin().powi(2);
        out.add("|sinh(x+iy)|² = sinh²x + sin²y (relative, oracle)", (c(x, y).sinh().norm_sqr() - own).abs() / own.max(1.0), 1e-13);
    }
}

fn modular_suite(out: &mut Checks) {
    let beta = 1.0;
    let mut r = ChaCha8Rng::seed_from_u64(11);
    let measures = [
        measures::capital_gamma_map(&MeasureOnR::atomic(vec![(0.3, 1.0), (1.1, 0.5), (2.5, 2.0)]).unwrap(), beta).unwrap(),
        measures::half_twist(&measures::szego_measure(beta).unwrap(), beta).unwrap(),
    ];
    for nu in &measures {
        let md = modular::build_modular(nu, beta).unwrap();
        for _ in 0..5 {
            let v: Vec<Complex64> = (0..md.dim()).map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
            out.add("JΔJ = Δ⁻¹", md.jdj_defect(&v), 1e-12);
        }
        let v = md.space.sample(|l| c((-l * l / 4.0).exp(), 0.3 * l / (1.0 + l * l)));
        let ts: Vec<f64> = (0..16).map(|k| -4.0 + 0.5 * k as f64).collect();
        let rep = modular::psi_gram(&md, &v, &ts);
        if !rep.verdict {
            out.fail("library ψ Gram verdict");
        }
        // Own Gram ψ(s − t) and its real embedding [[Re, −Im], [Im, Re]].
        let n = ts.len();
        let g = DMatrix::from_fn(n, n, |i, j| modular::modular_coefficient(&md, &v, ts[i] - ts[j]));
        let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let z = g[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        out.add("ψ Gram positive semidefinite (oracle)", psd_defect(&real), 1e-10);
        let kms = measures::kms_check(&modular::psi_measure(&md, &v).unwrap(), beta, &ts).unwrap();
        out.add("ψ satisfies the KMS condition", kms.max_defect, 1e-8);
    }
    for b in [0.5, 1.0, 2.0] {
        for t in [0.0, 0.4, 1.0, 2.5] {
            let forms = modular::psi_hardy_midline_forms(b, t).unwrap();
            let xi = c(2.0 * t / b, -1.0);
            let own = (xi * PI) / ((xi * PI / 2.0).sinh() * 8.0 * PI * b);
            out.add("midline integral forms agree", forms.defect, 1e-8);
            out.add("midline forms against closed form", (forms.half_spectrum - own).norm().max((forms.full_spectrum - own).norm()), 1e-8);
        }
    }
}

fn reflection_identity(out: &mut Checks) {
    let polys: [fn(Complex64) -> Complex64; 5] = [
        |_| c(1.0, 0.0),
        |z| z + 0.5,
        |z| z * z - c(0.0, 1.0) * z,
        |z| (z - 0.25).powi(3) + 1.0,
        |z| z.powi(4) * 0.5 - z + c(0.3, 0.0),
    ];
    for (d, lambdas) in [(Domain::Disc, [0.0, 0.4, -0.6, 0.2, 0.7]), (Domain::Strip { beta: 1.0 }, [0.0, 0.5, -1.0, 1.5, -0.3])] {
        for (f, &lambda) in polys.iter().zip(&lambdas) {
            let rep = kernels::reflection_identity(d, lambda, *f, kernels::DEFAULT_BOUNDARY_NODES).unwrap();
            let w = d.fixed_point(lambda).unwrap();
            let qww = szego_oracle(d, w, w).re;
            let own_rhs = (f(w) * qww).norm_sqr() / qww;
            out.add("library defect", rep.defect, 1e-7);
            out.add("quadrature against |F(w)|²Q(w,w)", (rep.lhs - c(own_rhs, 0.0)).norm(), 1e-7);
        }
    }
}

fn c_t_oracle(beta: f64, t: f64, z: Complex64) -> f64 {
    // e^{−βt}e^{−itz} is evaluated as one exponential so it cannot overflow.
    let e = (-beta * t).exp();
    (((c(0.0, t) * z).exp() + (c(0.0, -t) * z - beta * t).exp()) / (1.0 + e)).norm()
}

fn strip_characterization(out: &mut Checks) {
    let mut r = ChaCha8Rng::seed_from_u64(13);
    let grid = rpfunc::strip_t_grid();
    for k in 0..120 {
        let beta = [0.5, 1.0, 2.0][k % 3];
        let x = r.random_range(-6.0..6.0);
        if k < 100 {
            let z = c(x, beta * r.random_range(0.02..0.98));
            let verdict = rpfunc::strip_characterization_check(beta, z).unwrap().verdict;
            let below = grid.iter().all(|&t| c_t_oracle(beta, t, z) < 1.0);
            out.add("interior points classified (misses)", (verdict != StripVerdict::Interior || !below) as u8 as f64, 0.0);
        } else {
            let y = if k % 2 == 0 { beta + r.random_range(0.01..2.0) } else { -r.random_range(0.01..2.0) };
            let z = c(x, y);
            let ok = matches!(
                rpfunc::strip_characterization_check(beta, z).unwrap().verdict,
                StripVerdict::Exterior { witness } if witness > 0.0 && c_t_oracle(beta, witness, z) >= 1.0
            );
            out.add("exterior points witnessed (misses)", (!ok) as u8 as f64, 0.0);
        }
    }
}

#[test]
fn acceptance() {
    let total = Instant::now();
    let outcomes = vec![
        run(1, "Poisson kernel from the Szegő kernel", Some(Duration::from_secs(1)), hua_consistency),
        run(2, "Poisson kernel has unit mass", Some(Duration::from_secs(5)), poisson_normalization),
        run(3, "Fourier transform of the half-plane Poisson kernel", None, half_plane_poisson_transform),
        run(4, "Disc Poisson moments", None, disc_moments),
        run(5, "Positive definite and reflection positive Grams", None, reflection_positive_grams),
        run(6, "Γ(μ): reflection relation, KMS condition, circle functions", None, thermal_equivalence),
        run(7, "γ ∘ M_κ = Γ and exact roundtrips", None, kappa_intertwining),
        run(8, "Periodization series within their tail bounds", None, series_soundness),
        run(9, "Strip kernels from spectral measures", None, kernel_from_measure),
        run(10, "Fourier and summation identities", None, appendix_identities),
        run(11, "Modular data, ψ positivity and KMS, midline forms", None, modular_suite),
        run(12, "Reflection identity by boundary quadrature", None, reflection_identity),
        run(13, "Strip characterization by |c_t| < 1", None, strip_characterization),
    ];
    let full = Instant::now();
    let report = reflpos::verify::run_suite(reflpos::Suite::All);
    let suite_time = full.elapsed();

    for o in &outcomes {
        println!("{} criterion {:>2}: {} ({:.2?})", if o.pass() { "PASS" } else { "FAIL" }, o.criterion, o.name, o.elapsed);
        for &(label, d, t) in &o.checks.items {
            println!("       {} {label}: {d:.3e} (tol {t:.0e})", if d <= t { "ok  " } else { "FAIL" });
        }
    }
    let suite_ok = report.all_passed() && suite_time < Duration::from_secs(120);
    println!(
        "{} verify --suite all: {}/{} checks in {:.2?}",
        if suite_ok { "PASS" } else { "FAIL" },
        report.passed,
        report.results.len(),
        suite_time
    );
    for r in report.results.iter().filter(|r| !r.pass) {
        println!("       failed check {}: defect {:e} > tol {:e}", r.id, r.defect, r.tol);
    }
    println!("total {:.2?}", total.elapsed());

    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.pass()).map(|o| o.criterion).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(suite_ok);
}
