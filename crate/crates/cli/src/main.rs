//! `reflpos` command-line driver: kernel evaluation and CSV tables, the
//! verification suite, and thin JSON wrappers over the library operations.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad flags or input, 3 domain
//! error reported by the library.

use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use reflpos::domains::{BoundaryPoint, Domain, StripComponent};
use reflpos::measures::{self, MeasureOnR, ReflectionClass, ReflectionOrder};
use reflpos::verify::{gram_defect, run_suite};
use reflpos::{kernels, modular, periodize, rpfunc, KernelKind, RpFamily, Suite, SymmetricGroupKind};

const DEFAULTS: &str = include_str!("../config/defaults.json");

/// Defaults shared by all commands; overridable with `--config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    beta: f64,
    terms: u64,
    boundary_nodes: usize,
    samples: usize,
    seed: u64,
}

#[derive(Debug)]
enum CliError {
    /// Bad flags or unreadable input (exit 2).
    Usage(String),
    /// The library rejected the arguments (exit 3).
    Domain(reflpos::Error),
    /// A check ran and failed (exit 1).
    Failed,
}

impl From<reflpos::Error> for CliError {
    fn from(e: reflpos::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Parser)]
#[command(name = "reflpos", version, about = "Reflection positivity on the disc, half-plane and strip")]
struct Cli {
    /// JSON file overriding the defaults (beta, terms, boundary_nodes, samples, seed).
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a kernel at a point or over a grid (CSV).
    Kernel(KernelArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Positive-definiteness and reflection-positivity checks.
    #[command(subcommand)]
    Rp(RpCommand),
    /// Measure maps and transforms on the JSON measure format.
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Periodization and partial-fraction series.
    Series(SeriesArgs),
    /// Modular data of reflection-symmetric measures.
    #[command(subcommand)]
    Modular(ModularCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Disc,
    Halfplane,
    Strip,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Lower,
    Upper,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long, value_enum)]
    domain: DomainArg,
    /// Strip height; required for the strip.
    #[arg(long)]
    beta: Option<f64>,
    /// szego, poisson, bergman or power:s.
    #[arg(long)]
    kind: String,
    /// First argument, e.g. `0.3+0.2i`.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Second argument for szego, bergman and power kernels.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Boundary coordinate for the Poisson kernel (angle on the circle).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Strip boundary line carrying `x`.
    #[arg(long, value_enum, default_value = "lower")]
    side: Side,
    /// CSV table over a grid of z: `re_min:re_max:n_re,im_min:im_max:n_im`.
    #[arg(long, allow_hyphen_values = true)]
    table: Option<String>,
    /// Instead of evaluating, check ⟨f*, θ_w f*⟩ = |f(w)|²/Q(w,w) for f = Q_w at the σ-fixed point with this parameter.
    #[arg(long, allow_hyphen_values = true)]
    reflection: Option<f64>,
    /// Print JSON instead of a plain value.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Print the machine-readable report.
    #[arg(long)]
    json: bool,
    /// Harness self-test: force one check to fail.
    #[arg(long)]
    inject_defect: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "R")]
    R,
    #[value(name = "T")]
    T,
}

#[derive(Subcommand)]
enum RpCommand {
    /// Gram matrices of φ_λ (or a mixture) on the group and its positive cone.
    Check {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long)]
        beta: Option<f64>,
        /// Single parameter λ.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "mixing")]
        lambda: Option<f64>,
        /// Mixing measure as JSON or `@file`.
        #[arg(long)]
        mixing: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum MeasureCommand {
    /// γ(μ) = μ + e_β μ^∨.
    Gamma(MeasureIo),
    /// Γ(μ) = (μ + μ^∨)/(1 + e_{−β}).
    #[command(name = "Gamma")]
    CapitalGamma(MeasureIo),
    /// β-reflection relation and KMS condition of ν.
    KmsCheck {
        #[command(flatten)]
        io: MeasureIo,
        /// Comma-separated sample times (default −5, −4.5, …, 5).
        #[arg(long, allow_hyphen_values = true)]
        ts: Option<String>,
    },
    /// ν̂(z) = ∫ e^{izλ} dν(λ).
    Fourier {
        #[command(flatten)]
        io: MeasureIo,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Args)]
struct MeasureIo {
    /// Measure as JSON or `@file`.
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    Szego,
    Bergman,
    Sinh,
    Csc,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(value_enum)]
    kind: SeriesKind,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Second argument for the kernel series.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Number of symmetric term pairs.
    #[arg(long = "N")]
    n: Option<u64>,
}

#[derive(Subcommand)]
enum ModularCommand {
    /// Midline Szegő coefficient ψ(t) in its integral forms and closed form.
    Psi {
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// JΔJ = Δ⁻¹, ψ positivity and KMS for a reflection-symmetric measure.
    Check {
        /// Measure as JSON or `@file`.
        #[arg(long)]
        measure: String,
        #[arg(long)]
        beta: Option<f64>,
    },
}

/// Parses `a+bi`, `a-bi`, `bi`, `i`, `-i` or a plain real.
fn parse_complex(s: &str) -> CliResult<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Usage(format!("cannot parse complex number '{s}'"));
    let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => num(other)?,
    };
    Ok(Complex64::new(re, im))
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

fn read_arg_or_file(s: &str) -> CliResult<String> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn read_measure(s: &str) -> CliResult<MeasureOnR> {
    MeasureOnR::from_json(&read_arg_or_file(s)?).map_err(|e| CliError::Usage(format!("bad measure JSON: {e}")))
}

fn load_config(path: Option<&str>) -> CliResult<Config> {
    let mut value: serde_json::Value = serde_json::from_str(DEFAULTS).expect("embedded defaults are valid JSON");
    if let Some(path) = path {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
        let user: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {path}: {e}")))?;
        let Some(fields) = user.as_object() else {
            return usage(format!("config {path} must be a JSON object"));
        };
        for (k, v) in fields {
            value[k] = v.clone();
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::Usage(format!("bad config: {e}")))
}

/// Writes one line to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn emit(line: impl Display) {
    if writeln!(io::stdout().lock(), "{line}").is_err() {
        std::process::exit(0);
    }
}

fn print_json<T: Serialize>(v: &T) {
    emit(serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn domain_of(arg: DomainArg, beta: Option<f64>) -> CliResult<Domain> {
    Ok(match arg {
        DomainArg::Disc => Domain::Disc,
        DomainArg::Halfplane => Domain::HalfPlane,
        DomainArg::Strip => match beta {
            Some(b) => Domain::strip(b)?,
            None => return usage("--beta is required for the strip"),
        },
    })
}

enum KernelSpec {
    Analytic(KernelKind),
    Poisson,
}

fn parse_kind(s: &str) -> CliResult<KernelSpec> {
    Ok(match s {
        "szego" => KernelSpec::Analytic(KernelKind::Szego),
        "bergman" => KernelSpec::Analytic(KernelKind::Bergman),
        "poisson" => KernelSpec::Poisson,
        _ => match s.strip_prefix("power:").map(str::parse::<f64>) {
            Some(Ok(p)) => KernelSpec::Analytic(KernelKind::Power(p)),
            _ => return usage(format!("unknown kernel kind '{s}' (szego, poisson, bergman, power:s)")),
        },
    })
}

fn parse_range(s: &str) -> CliResult<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("bad grid axis '{s}', expected min:max:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 || !(lo.is_finite() && hi.is_finite()) {
        return Err(bad());
    }
    Ok((lo, hi, n))
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        vec![lo]
    } else {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }
}

fn cmd_kernel(a: KernelArgs, cfg: &Config) -> CliResult<()> {
    let d = domain_of(a.domain, a.beta)?;
    if let Some(lambda) = a.reflection {
        print_json(&kernels::reflection_identity(d, lambda, |_| Complex64::new(1.0, 0.0), cfg.boundary_nodes)?);
        return Ok(());
    }
    let parsed = parse_kind(&a.kind)?;
    // The second argument: an interior w, or a boundary point for the Poisson kernel.
    let (w, boundary) = match parsed {
        KernelSpec::Poisson => {
            let Some(x) = a.x else {
                return usage("--x is required for the Poisson kernel");
            };
            let side = match a.side {
                Side::Lower => StripComponent::Lower,
                Side::Upper => StripComponent::Upper,
            };
            let bp = BoundaryPoint::new(d, side, x);
            (bp.embed(), Some(bp))
        }
        KernelSpec::Analytic(_) => match &a.w {
            Some(w) => (parse_complex(w)?, None),
            None => return usage("--w is required for this kernel"),
        },
    };
    let eval = |z: Complex64| -> CliResult<Complex64> {
        Ok(match (&parsed, &boundary) {
            (KernelSpec::Poisson, Some(bp)) => Complex64::new(kernels::poisson(d, z, bp)?, 0.0),
            (KernelSpec::Analytic(kind), _) => kernels::kernel(d, *kind, z, w)?,
            (KernelSpec::Poisson, None) => unreachable!("Poisson kernel always has a boundary point"),
        })
    };

    if let Some(grid) = &a.table {
        let Some((re, im)) = grid.split_once(',') else {
            return usage("--table expects re_min:re_max:n_re,im_min:im_max:n_im");
        };
        let (r0, r1, nr) = parse_range(re)?;
        let (i0, i1, ni) = parse_range(im)?;
        emit("re_z,im_z,re_w,im_w,re_K,im_K");
        for y in axis(i0, i1, ni) {
            for x in axis(r0, r1, nr) {
                let z = Complex64::new(x, y);
                let k = eval(z)?;
                emit(format!("{},{},{},{},{},{}", z.re, z.im, w.re, w.im, k.re, k.im));
            }
        }
        return Ok(());
    }

    let Some(z) = &a.z else {
        return usage("--z is required (or use --table)");
    };
    let z = parse_complex(z)?;
    let k = eval(z)?;
    if a.json {
        print_json(&json!({ "domain": d.name(), "kind": a.kind, "z": complex_json(z), "w": complex_json(w), "value": complex_json(k) }));
    } else {
        emit(fmt_complex(k));
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CliResult<()> {
    let suite: Suite = a.suite.parse().map_err(|_| CliError::Usage(format!("unknown suite '{}'", a.suite)))?;
    let mut report = run_suite(suite);
    if a.inject_defect {
        match report.inject_defect() {
            Some(id) => eprintln!("injected defect into {id}"),
            None => eprintln!("no check with a positive defect to inject into"),
        }
    }
    if a.json {
        print_json(&report);
    } else {
        for r in &report.results {
            emit(format!("{} {:<48} defect {:.3e}  tol {:.1e}  {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.defect, r.tol, r.anchor));
        }
        emit(format!("{} passed, {} failed", report.passed, report.failed));
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

fn cmd_rp(cmd: RpCommand, cfg: &Config) -> CliResult<()> {
    let RpCommand::Check { group, beta, lambda, mixing, samples, seed } = cmd;
    let beta = beta.unwrap_or(cfg.beta);
    let group = match group {
        GroupArg::Z => SymmetricGroupKind::Integers,
        GroupArg::R => SymmetricGroupKind::Reals,
        GroupArg::T => SymmetricGroupKind::CircleBeta(beta),
    };
    let mixing = match (lambda, mixing) {
        (Some(l), None) => MeasureOnR::dirac(l)?,
        (None, Some(m)) => read_measure(&m)?,
        _ => return usage("exactly one of --lambda and --mixing is required"),
    };
    let n = samples.unwrap_or(cfg.samples);
    if n == 0 {
        return usage("--samples must be positive");
    }
    let fam = RpFamily::new(group, mixing)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(cfg.seed));
    let (all, plus): (Vec<f64>, Vec<f64>) = match group {
        SymmetricGroupKind::Integers => (
            (0..n).map(|_| rng.random_range(-20i32..=20) as f64).collect(),
            (0..n).map(|_| rng.random_range(0i32..=20) as f64).collect(),
        ),
        SymmetricGroupKind::Reals => ((0..n).map(|_| rng.random_range(-5.0..5.0)).collect(), (0..n).map(|_| rng.random_range(0.0..5.0)).collect()),
        SymmetricGroupKind::CircleBeta(b) => ((0..n).map(|_| rng.random_range(0.0..b)).collect(), (0..n).map(|_| rng.random_range(0.0..=b / 2.0)).collect()),
    };
    let pd = rpfunc::pd_gram(group, |g| fam.eval(g), &all)?;
    let rp = rpfunc::rp_gram(group, |g| fam.eval(g), &plus)?;
    let pass = pd.verdict && rp.verdict;
    print_json(&json!({ "pd": pd, "rp": rp, "pass": pass }));
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number '{p}' in list")))).collect()
}

fn cmd_measure(cmd: MeasureCommand, cfg: &Config) -> CliResult<()> {
    match cmd {
        MeasureCommand::Gamma(io) => emit(measures::gamma_map(&read_measure(&io.input)?, io.beta.unwrap_or(cfg.beta))?.to_json()),
        MeasureCommand::CapitalGamma(io) => {
            emit(measures::capital_gamma_map(&read_measure(&io.input)?, io.beta.unwrap_or(cfg.beta))?.to_json())
        }
        MeasureCommand::KmsCheck { io, ts } => {
            let nu = read_measure(&io.input)?;
            let beta = io.beta.unwrap_or(cfg.beta);
            let ts = match ts {
                Some(s) => parse_list(&s)?,
                None => (0..=20).map(|k| -5.0 + 0.5 * k as f64).collect(),
            };
            let reflection = measures::reflection_check(&nu, ReflectionClass::new(beta, ReflectionOrder::Beta)?);
            let kms = measures::kms_check(&nu, beta, &ts)?;
            print_json(&json!({ "reflection": reflection, "kms": kms }));
        }
        MeasureCommand::Fourier { io, z } => {
            let z = parse_complex(&z)?;
            print_json(&complex_json(measures::fourier(&read_measure(&io.input)?, z)?));
        }
    }
    Ok(())
}

fn cmd_series(a: SeriesArgs, cfg: &Config) -> CliResult<()> {
    let beta = a.beta.unwrap_or(cfg.beta);
    let n = a.n.unwrap_or(cfg.terms);
    let z = parse_complex(&a.z)?;
    let w = || -> CliResult<Complex64> {
        match &a.w {
            Some(w) => parse_complex(w),
            None => usage("--w is required for kernel series"),
        }
    };
    let eval = match a.kind {
        SeriesKind::Szego => periodize::szego_series(beta, z, w()?, n)?,
        SeriesKind::Bergman => periodize::bergman_series(beta, z, w()?, n)?,
        SeriesKind::Sinh => periodize::sinh_partial_fractions(beta, z, n)?,
        SeriesKind::Csc => periodize::csc_partial_fractions(z, n)?,
    };
    print_json(&eval);
    Ok(())
}

fn cmd_modular(cmd: ModularCommand, cfg: &Config) -> CliResult<()> {
    match cmd {
        ModularCommand::Psi { beta, t } => print_json(&modular::psi_hardy_midline_forms(beta.unwrap_or(cfg.beta), t)?),
        ModularCommand::Check { measure, beta } => {
            let beta = beta.unwrap_or(cfg.beta);
            let nu = read_measure(&measure)?;
            let md = modular::build_modular(&nu, beta)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let jdj = (0..10)
                .map(|_| {
                    let v: Vec<Complex64> = (0..md.dim()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
                    md.jdj_defect(&v)
                })
                .fold(0.0, f64::max);
            let v = md.space.sample(|l| Complex64::new(1.0 / (1.0 + l * l), 0.0));
            let ts: Vec<f64> = (0..20).map(|k| -5.0 + 0.5 * k as f64).collect();
            let gram = modular::psi_gram(&md, &v, &ts);
            let kms = measures::kms_check(&modular::psi_measure(&md, &v)?, beta, &ts)?;
            let pass = jdj <= 1e-12 && gram.verdict && kms.max_defect <= 1e-8;
            print_json(&json!({
                "dim": md.dim(),
                "jdj_defect": jdj,
                "psi_gram_defect": gram_defect(&gram),
                "psi_kms_defect": kms.max_defect,
                "pass": pass,
            }));
            if !pass {
                return Err(CliError::Failed);
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Kernel(a) => cmd_kernel(a, &cfg),
        Command::Verify(a) => cmd_verify(a),
        Command::Rp(c) => cmd_rp(c, &cfg),
        Command::Measure(c) => cmd_measure(c, &cfg),
        Command::Series(a) => cmd_series(a, &cfg),
        Command::Modular(c) => cmd_modular(c, &cfg),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on malformed flags.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
