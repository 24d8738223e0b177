//! `spantree`: exact spanning-tree counts and tree entropies for circulant
//! families and diagonal discrete tori.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 computational failure (precision or quadrature budget exhausted).

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spantree::closed_form::{certified_round, circulant_factor_terms, telescoped_factor};
use spantree::entropy::{
    compare_nf_vs_f, riemann_limit, riemann_limit_bessel, z_f, z_nf_integral, z_nf_sum,
    Enclosure,
};
use spantree::graph::{build_multigraph, build_torus_multigraph, circulant_spectrum};
use spantree::oracle::{count_spanning_trees_oracle, eigenproduct_estimate};
use spantree::{
    log_tau_scaled_circulant, log_tau_torus, tau_scaled_circulant, tau_torus, BigCount,
    CirculantSpec, Error, PrecisionPolicy, ScaledCirculantFamily, TorusSpec,
};

const EXIT_USAGE: i32 = 1;
const EXIT_VERIFY: i32 = 2;
const EXIT_COMPUTE: i32 = 3;

#[derive(Parser)]
#[command(name = "spantree", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Working precision in bits; also settable via SPANTREE_PRECISION_BITS.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact or logarithmic spanning-tree counts.
    #[command(subcommand)]
    Count(CountCmd),
    /// Sweep closed-form counts against the determinant oracle.
    Verify(VerifyArgs),
    /// Tree entropies and their comparisons.
    #[command(subcommand)]
    Entropy(EntropyCmd),
}

#[derive(Subcommand)]
enum CountCmd {
    /// C^{1, g_1 n, ..., g_{d-1} n}_{beta n} via the telescoped product.
    CirculantScaled(CirculantScaledArgs),
    /// C^{g_1, ..., g_d}_n with fixed generators, via the certified
    /// eigenvalue product (oracle fallback for disconnected graphs).
    CirculantFixed(CirculantFixedArgs),
    /// Discrete torus Z^d / diag(alpha_1, ..., alpha_{d-1}, n) Z^d.
    Torus(TorusArgs),
}

#[derive(Args)]
struct CirculantScaledArgs {
    #[arg(long)]
    beta: u64,
    /// Comma-separated base generators gamma_1,...,gamma_{d-1} (may be empty).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    gammas: Vec<u64>,
    /// Scale factor n.
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Include per-factor diagnostics.
    #[arg(long)]
    factors: bool,
}

#[derive(Args)]
struct CirculantFixedArgs {
    #[arg(long)]
    n: u64,
    /// Comma-separated generators.
    #[arg(long, value_delimiter = ',', required = true)]
    gens: Vec<u64>,
}

#[derive(Args)]
struct TorusArgs {
    /// Comma-separated diagonal entries alpha_1,...,alpha_{d-1} (may be empty).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    alphas: Vec<u64>,
    /// Last diagonal entry n.
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Log,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest beta in the circulant sweep.
    #[arg(long, default_value_t = 6)]
    max_beta: u64,
    /// Largest scale factor in both sweeps.
    #[arg(long, default_value_t = 4)]
    max_n: u64,
    /// Deliberately corrupt one comparison; the sweep must then fail
    /// (self-test of the harness, exit code 2).
    #[arg(long)]
    corrupt: bool,
}

#[derive(Subcommand)]
enum EntropyCmd {
    /// z_NF from both the argcosh sum and the Bessel integral, with gap.
    Scaled(ScaledEntropyArgs),
    /// z_F for a fixed generator list starting with 1.
    Fixed(FixedEntropyArgs),
    /// Comparison table z_NF(beta; 1, gammas) vs z_F(1, gammas, gamma_d).
    Compare(CompareArgs),
    /// The beta -> infinity limit of z_NF(beta; 1, gammas), by both routes.
    Limit(LimitArgs),
}

#[derive(Args)]
struct ScaledEntropyArgs {
    #[arg(long)]
    beta: u64,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    gammas: Vec<u64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct FixedEntropyArgs {
    /// Full generator list g_1,...,g_d with g_1 = 1.
    #[arg(long, value_delimiter = ',', required = true)]
    gens: Vec<u64>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    gammas: Vec<u64>,
    #[arg(long)]
    gamma_d: u64,
    /// Inclusive range of beta, e.g. 2..64.
    #[arg(long, value_parser = parse_range, default_value = "2..32")]
    beta_range: (u64, u64),
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    gammas: Vec<u64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let lo: u64 = a.parse().map_err(|e| format!("{e}"))?;
    let hi: u64 = b.parse().map_err(|e| format!("{e}"))?;
    if lo < 2 || hi < lo {
        return Err("expected 2 <= a <= b".into());
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct EnclosureOut {
    mid: String,
    rad: String,
}

impl From<Enclosure> for EnclosureOut {
    fn from(e: Enclosure) -> Self {
        EnclosureOut { mid: format!("{}", e.mid), rad: format!("{:e}", e.rad) }
    }
}

#[derive(Serialize)]
struct FactorOut {
    k: u64,
    mu: EnclosureOut,
    theta: EnclosureOut,
    omega: String,
    factor: EnclosureOut,
}

#[derive(Serialize)]
struct CountOut {
    family: String,
    mode: &'static str,
    engine: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_tau: Option<EnclosureOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<FactorOut>>,
}

fn ball_out(b: &spantree::RealBall) -> EnclosureOut {
    let (mid, rad) = b.to_mid_rad();
    EnclosureOut { mid: format!("{mid}"), rad: format!("{rad:e}") }
}

fn emit_count(out: &CountOut, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(out).unwrap()),
        Format::Plain => {
            match (&out.tau, &out.log_tau) {
                (Some(tau), _) => println!("{tau}"),
                (None, Some(l)) => println!("ln tau = {} +/- {}", l.mid, l.rad),
                _ => unreachable!(),
            }
            if let Some(factors) = &out.factors {
                for f in factors {
                    println!(
                        "factor k={}: mu = {}, theta = {}, omega = {}, value = {}",
                        f.k, f.mu.mid, f.theta.mid, f.omega, f.factor.mid
                    );
                }
            }
        }
        Format::Csv => {
            println!("family,mode,tau,log_tau_mid,log_tau_rad");
            let (lm, lr) = out
                .log_tau
                .as_ref()
                .map(|l| (l.mid.clone(), l.rad.clone()))
                .unwrap_or_default();
            println!(
                "{},{},{},{lm},{lr}",
                out.family,
                out.mode,
                out.tau.clone().unwrap_or_default()
            );
        }
    }
}

fn policy_from(bits: Option<u32>) -> PrecisionPolicy {
    let mut policy = PrecisionPolicy::default();
    let env = std::env::var("SPANTREE_PRECISION_BITS").ok().and_then(|s| s.parse().ok());
    if let Some(b) = bits.or(env) {
        policy.initial_bits = b.max(32);
        policy.max_bits = policy.max_bits.max(policy.initial_bits);
    }
    policy
}

fn exit_for(err: &Error) -> i32 {
    match err {
        Error::InvalidSpec(_) | Error::LoopGenerator { .. } | Error::EmptyGraph => EXIT_USAGE,
        _ => EXIT_COMPUTE,
    }
}

static JSON_ERRORS: std::sync::atomic::AtomicBool = std::sync::atomic::AtomicBool::new(false);

fn fail(err: Error) -> ! {
    if JSON_ERRORS.load(std::sync::atomic::Ordering::Relaxed) {
        #[derive(Serialize)]
        struct ErrorOut {
            error: String,
            exit_code: i32,
        }
        let out = ErrorOut { error: format!("{err}"), exit_code: exit_for(&err) };
        eprintln!("{}", serde_json::to_string(&out).unwrap());
    } else {
        eprintln!("error: {err}");
    }
    std::process::exit(exit_for(&err));
}

fn run_count(cmd: CountCmd, format: Format, bits: Option<u32>) {
    let policy = policy_from(bits);
    match cmd {
        CountCmd::CirculantScaled(args) => {
            let family = ScaledCirculantFamily::new(args.beta, &args.gammas, args.n)
                .unwrap_or_else(|e| fail(e));
            let family_name = format!(
                "circulant-scaled(beta={}, gammas={:?}, n={})",
                args.beta, args.gammas, args.n
            );
            let factors = if args.factors && args.beta > 1 {
                let terms = circulant_factor_terms(args.beta, &args.gammas, policy.initial_bits);
                Some(
                    terms
                        .iter()
                        .enumerate()
                        .map(|(i, t)| FactorOut {
                            k: i as u64 + 1,
                            mu: ball_out(&t.mu),
                            theta: ball_out(&t.theta),
                            omega: format!("{}", t.omega),
                            factor: ball_out(&telescoped_factor(&t.theta, t.omega, args.n)),
                        })
                        .collect(),
                )
            } else {
                None
            };
            let out = match args.mode {
                Mode::Exact => {
                    let tau = tau_scaled_circulant(&family, &policy).unwrap_or_else(|e| fail(e));
                    CountOut {
                        family: family_name,
                        mode: "exact",
                        engine: "closed-form",
                        tau: Some(tau.to_string()),
                        log_tau: None,
                        factors,
                    }
                }
                Mode::Log => {
                    let l = log_tau_scaled_circulant(&family, policy.initial_bits);
                    CountOut {
                        family: family_name,
                        mode: "log",
                        engine: "closed-form",
                        tau: None,
                        log_tau: Some(ball_out(&l)),
                        factors,
                    }
                }
            };
            emit_count(&out, format);
        }
        CountCmd::CirculantFixed(args) => {
            let spec =
                CirculantSpec::new(args.n, &args.gens).unwrap_or_else(|e| fail(e));
            let family_name = format!("circulant-fixed(n={}, gens={:?})", args.n, args.gens);
            let (tau, engine) = count_fixed(&spec, &policy).unwrap_or_else(|e| fail(e));
            emit_count(
                &CountOut {
                    family: family_name,
                    mode: "exact",
                    engine,
                    tau: Some(tau.to_string()),
                    log_tau: None,
                    factors: None,
                },
                format,
            );
        }
        CountCmd::Torus(args) => {
            let spec = TorusSpec::new(&args.alphas, args.n).unwrap_or_else(|e| fail(e));
            let family_name = format!("torus(alphas={:?}, n={})", args.alphas, args.n);
            let out = match args.mode {
                Mode::Exact => {
                    let tau = tau_torus(&spec, &policy).unwrap_or_else(|e| fail(e));
                    CountOut {
                        family: family_name,
                        mode: "exact",
                        engine: "closed-form",
                        tau: Some(tau.to_string()),
                        log_tau: None,
                        factors: None,
                    }
                }
                Mode::Log => {
                    let l =
                        log_tau_torus(&spec, policy.initial_bits).unwrap_or_else(|e| fail(e));
                    CountOut {
                        family: family_name,
                        mode: "log",
                        engine: "closed-form",
                        tau: None,
                        log_tau: Some(ball_out(&l)),
                        factors: None,
                    }
                }
            };
            emit_count(&out, format);
        }
    }
}

/// Certified eigenvalue-product count for a fixed circulant spec, with the
/// determinant oracle as the disconnected-graph fallback.
fn count_fixed(
    spec: &CirculantSpec,
    policy: &PrecisionPolicy,
) -> Result<(BigCount, &'static str), Error> {
    let n = spec.vertex_count();
    let mut prec = policy.initial_bits;
    loop {
        match eigenproduct_estimate(&circulant_spectrum(spec, prec), n) {
            Ok(est) => {
                if let Some(tau) = certified_round(&est) {
                    return Ok((tau, "eigenproduct"));
                }
            }
            Err(Error::ZeroEigenvalueCount { .. }) => {
                return count_spanning_trees_oracle(&build_multigraph(spec))
                    .map(|tau| (tau, "oracle"));
            }
            Err(e) => return Err(e),
        }
        if prec >= policy.max_bits {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        prec = prec.saturating_mul(2).min(policy.max_bits);
    }
}

#[derive(Serialize)]
struct VerifyRow {
    instance: String,
    closed_form: String,
    oracle: String,
    equal: bool,
}

#[derive(Serialize)]
struct VerifyOut {
    instances: u64,
    mismatches: u64,
    corrupted: bool,
    rows: Vec<VerifyRow>,
}

fn run_verify(args: VerifyArgs, format: Format, bits: Option<u32>) {
    let policy = policy_from(bits);
    let mut rows: Vec<VerifyRow> = Vec::new();
    let mut corrupt_left = args.corrupt;
    let mut check = |closed: BigCount, mut oracle: BigCount, what: &str| {
        if corrupt_left {
            oracle += 1;
            corrupt_left = false;
        }
        if closed != oracle {
            eprintln!("mismatch at {what}: closed {closed} oracle {oracle}");
        }
        rows.push(VerifyRow {
            instance: what.to_string(),
            closed_form: closed.to_string(),
            equal: closed == oracle,
            oracle: oracle.to_string(),
        });
    };
    for beta in 2..=args.max_beta {
        for g in 1..=beta / 2 {
            for n in 1..=args.max_n {
                if beta * n > 64 {
                    break;
                }
                let family = ScaledCirculantFamily::new(beta, &[g], n).unwrap();
                let closed = tau_scaled_circulant(&family, &policy).unwrap_or_else(|e| fail(e));
                let oracle =
                    count_spanning_trees_oracle(&build_multigraph(&family.instantiate()))
                        .unwrap_or_else(|e| fail(e));
                check(closed, oracle, &format!("circulant beta={beta} gamma={g} n={n}"));
            }
        }
    }
    for alpha in 1..=4u64 {
        for n in 1..=args.max_n {
            if alpha * n > 64 {
                break;
            }
            let spec = TorusSpec::new(&[alpha], n).unwrap();
            let closed = tau_torus(&spec, &policy).unwrap_or_else(|e| fail(e));
            let oracle = count_spanning_trees_oracle(&build_torus_multigraph(&spec))
                .unwrap_or_else(|e| fail(e));
            check(closed, oracle, &format!("torus alpha={alpha} n={n}"));
        }
    }
    let instances = rows.len() as u64;
    let mismatches = rows.iter().filter(|r| !r.equal).count() as u64;
    let out = VerifyOut { instances, mismatches, corrupted: args.corrupt, rows };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
        Format::Csv => {
            println!("instance,closed_form,oracle,equal");
            for r in &out.rows {
                println!("{},{},{},{}", r.instance, r.closed_form, r.oracle, r.equal);
            }
        }
        Format::Plain => println!(
            "verified {instances} instances, {mismatches} mismatches{}",
            if args.corrupt { " (one comparison deliberately corrupted)" } else { "" }
        ),
    }
    if mismatches > 0 {
        std::process::exit(EXIT_VERIFY);
    }
}

#[derive(Serialize)]
struct ScaledEntropyOut {
    beta: u64,
    gammas: Vec<u64>,
    argcosh_sum: EnclosureOut,
    bessel_integral: EnclosureOut,
    gap: String,
}

#[derive(Serialize)]
struct CompareRowOut {
    beta: u64,
    z_nf: EnclosureOut,
    certified_greater: bool,
}

#[derive(Serialize)]
struct CompareOut {
    z_f: EnclosureOut,
    rows: Vec<CompareRowOut>,
    observed_b: Option<u64>,
}

fn run_entropy(cmd: EntropyCmd, format: Format) {
    match cmd {
        EntropyCmd::Scaled(args) => {
            let sum = z_nf_sum(args.beta, &args.gammas);
            let integral = z_nf_integral(args.beta, &args.gammas, args.tol)
                .unwrap_or_else(|e| fail(e));
            let gap = (sum.value.mid - integral.value.mid).abs();
            let out = ScaledEntropyOut {
                beta: args.beta,
                gammas: args.gammas.clone(),
                argcosh_sum: sum.value.into(),
                bessel_integral: integral.value.into(),
                gap: format!("{gap:e}"),
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
                Format::Csv => {
                    println!("beta,argcosh_sum,bessel_integral,gap");
                    println!(
                        "{},{},{},{}",
                        out.beta, out.argcosh_sum.mid, out.bessel_integral.mid, out.gap
                    );
                }
                Format::Plain => {
                    println!("argcosh sum:     {} +/- {}", out.argcosh_sum.mid, out.argcosh_sum.rad);
                    println!(
                        "bessel integral: {} +/- {}",
                        out.bessel_integral.mid, out.bessel_integral.rad
                    );
                    println!("gap:             {}", out.gap);
                }
            }
        }
        EntropyCmd::Fixed(args) => {
            let r = z_f(&args.gens, args.tol).unwrap_or_else(|e| fail(e));
            emit_enclosure("z_F", r.value, format);
        }
        EntropyCmd::Compare(args) => {
            let betas: Vec<u64> = (args.beta_range.0..=args.beta_range.1).collect();
            let table = compare_nf_vs_f(&args.gammas, args.gamma_d, &betas, args.tol)
                .unwrap_or_else(|e| fail(e));
            let z_f_out: EnclosureOut = table.rows[0].z_f.into();
            match format {
                Format::Json => {
                    let out = CompareOut {
                        z_f: z_f_out,
                        rows: table
                            .rows
                            .iter()
                            .map(|r| CompareRowOut {
                                beta: r.beta,
                                z_nf: r.z_nf.into(),
                                certified_greater: r.certified_greater,
                            })
                            .collect(),
                        observed_b: table.observed_b,
                    };
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
                _ => {
                    println!("z_F = {} +/- {}", z_f_out.mid, z_f_out.rad);
                    println!("beta,z_nf,certified_greater");
                    for r in &table.rows {
                        println!("{},{},{}", r.beta, r.z_nf.mid, r.certified_greater);
                    }
                    match table.observed_b {
                        Some(b) => println!("observed threshold: beta >= {b}"),
                        None => println!("observed threshold: none in range"),
                    }
                }
            }
        }
        EntropyCmd::Limit(args) => {
            let angular = riemann_limit(&args.gammas, args.tol).unwrap_or_else(|e| fail(e));
            let bessel = riemann_limit_bessel(&args.gammas, (args.tol * 100.0).max(1e-8))
                .unwrap_or_else(|e| fail(e));
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct LimitOut {
                        angular: EnclosureOut,
                        bessel: EnclosureOut,
                    }
                    let out = LimitOut {
                        angular: angular.value.into(),
                        bessel: bessel.value.into(),
                    };
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
                _ => {
                    println!(
                        "limit (angular integral): {} +/- {:e}",
                        angular.value.mid, angular.value.rad
                    );
                    println!(
                        "limit (bessel integral):  {} +/- {:e}",
                        bessel.value.mid, bessel.value.rad
                    );
                }
            }
        }
    }
}

fn emit_enclosure(label: &str, value: Enclosure, format: Format) {
    match format {
        Format::Json => {
            let out: EnclosureOut = value.into();
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Csv => {
            println!("mid,rad");
            println!("{},{:e}", value.mid, value.rad);
        }
        Format::Plain => println!("{label} = {} +/- {:e}", value.mid, value.rad),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    JSON_ERRORS.store(cli.format == Format::Json, std::sync::atomic::Ordering::Relaxed);
    match cli.cmd {
        Cmd::Count(cmd) => run_count(cmd, cli.format, cli.precision_bits),
        Cmd::Verify(args) => run_verify(args, cli.format, cli.precision_bits),
        Cmd::Entropy(cmd) => run_entropy(cmd, cli.format),
    }
}
