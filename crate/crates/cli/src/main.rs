use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use medqmc_core::digital_net::{
    generate_points, niederreiter_matrices, sobol_matrices, t_value_report, DirectionNumbers, GenMatrixSet,
    TValueMethod,
};
use medqmc_core::error_bounds::{
    amplify, constants, eps_inf, eps_sob1, eps_sob_alpha, Bound, BoundSetup, Family, Regime, SmoothWeightSeq,
    WeightModel,
};
use medqmc_core::poly_lattice::{plr_gen_matrices, plr_points, sample_plr};
use medqmc_core::scramble::{draw_scrambled_net, DEFAULT_PRECISION};
use medqmc_core::testbed::{fit_slope, run_convergence, ConvergenceSetup, RuleKind, TestFunction};
use medqmc_core::{verify, Error, PointSet, PrimeField};
use medqmc_cli::{parse_m_range, plot, records, MRange};

const THREADS_VAR: &str = "MEDQMC_THREADS";
/// Projections listed by `tvalue` cover every subset up to this dimension.
const ALL_SUBSETS_MAX_S: usize = 8;

#[derive(Parser)]
#[command(name = "medqmc", version, about = "Median quasi-Monte Carlo: points, t-values, bounds, experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a point set, one point per line
    Points(PointsArgs),
    /// t-value of a net by the rank test and by dual enumeration
    Tvalue(TvalueArgs),
    /// Evaluate a probabilistic worst-case error bound
    Bound(BoundArgs),
    /// Error-vs-N sweep written as CSV, optionally plotted as SVG
    Converge(ConvergeArgs),
    /// Run the exhaustive combinatorial checks
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum NetRule {
    Sobol,
    Niederreiter,
    ScrambledSobol,
    Plr,
}

#[derive(Args)]
struct NetArgs {
    #[arg(long, value_enum)]
    rule: NetRule,
    #[arg(long, default_value_t = 1)]
    s: usize,
    #[arg(long)]
    m: usize,
    /// Base for Niederreiter nets and lattice rules
    #[arg(long, default_value_t = 2)]
    b: u32,
    /// Output digits for randomized rules
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    w: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Which independent draw of a randomized rule
    #[arg(long, default_value_t = 0)]
    replicate: u64,
    /// Joe-Kuo direction-number file (default: bundled new-joe-kuo-6.64)
    #[arg(long)]
    dirnums: Option<PathBuf>,
}

#[derive(Args)]
struct PointsArgs {
    #[command(flatten)]
    net: NetArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MethodArg {
    Both,
    Rank,
    Dual,
}

#[derive(Args)]
struct TvalueArgs {
    #[command(flatten)]
    net: NetArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Theorem {
    /// First-order Sobolev spaces
    Sob1,
    /// Smoothness alpha >= 2
    SobAlpha,
    /// Infinite smoothness
    Inf,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FamilyArg {
    Net,
    Plr,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[arg(long, value_enum, default_value_t = FamilyArg::Net)]
    family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    b: u32,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    s: usize,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 2)]
    alpha: u32,
    /// Product weights γ_j = gamma0 · j^(-gamma_decay)
    #[arg(long, default_value_t = 1.0)]
    gamma0: f64,
    #[arg(long, default_value_t = 2.0)]
    gamma_decay: f64,
    /// Infinite smoothness: a_j = a0 · j^q; q = 0 is the unweighted regime
    #[arg(long, default_value_t = 1.0)]
    a0: f64,
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    /// Also report the failure probability of the median of r draws
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Args)]
struct ConvergeArgs {
    /// sobol, median-sobol (or median-scrambled-sobol), median-plr; comma-separated
    #[arg(long, value_delimiter = ',', required = true)]
    rule: Vec<RuleKind>,
    /// f1..f5; comma-separated
    #[arg(long, value_delimiter = ',', required = true)]
    function: Vec<String>,
    /// Parameter of f4/f5; comma-separated
    #[arg(long, value_delimiter = ',')]
    c: Vec<f64>,
    /// Dimension of f4/f5 (default 20 and 5)
    #[arg(long)]
    s: Option<usize>,
    /// a:b inclusive, or a single m
    #[arg(long, value_parser = parse_m_range)]
    m: MRange,
    #[arg(long, default_value_t = 15)]
    r: u32,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    w: usize,
    /// Base of the lattice rules
    #[arg(long, default_value_t = 2)]
    b: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination (default: stdout)
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Per-draw errors, one row per (m, draw)
    #[arg(long)]
    replicates: Option<PathBuf>,
    #[arg(long)]
    dirnums: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    base: u32,
    #[arg(long, default_value_t = 3)]
    max_m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn direction_numbers(path: &Option<PathBuf>) -> Result<DirectionNumbers> {
    Ok(match path {
        Some(p) => DirectionNumbers::from_path(p)?,
        None => DirectionNumbers::bundled().clone(),
    })
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn binary_only(rule: &str, b: u32) -> Result<()> {
    if b != 2 {
        bail!("{rule} is binary; got --b {b}");
    }
    Ok(())
}

fn net_matrices(a: &NetArgs, dirs: &DirectionNumbers) -> Result<GenMatrixSet> {
    let field = PrimeField::new(a.b)?;
    Ok(match a.rule {
        NetRule::Sobol => {
            binary_only("sobol", a.b)?;
            sobol_matrices(a.s, a.m, dirs)?
        }
        NetRule::Niederreiter => niederreiter_matrices(a.s, a.m, field)?,
        NetRule::ScrambledSobol => {
            binary_only("scrambled-sobol", a.b)?;
            draw_scrambled_net(&sobol_matrices(a.s, a.m, dirs)?, a.w, a.seed, a.replicate)?
        }
        NetRule::Plr => plr_gen_matrices(&sample_plr(field, a.m, a.s, a.w, a.seed, a.replicate)?)?,
    })
}

fn net_comment(a: &NetArgs, dirs: &DirectionNumbers) -> String {
    let rule = a.rule.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut c = format!("rule={rule} s={} m={} b={} w={} seed={} replicate={}", a.s, a.m, a.b, a.w, a.seed, a.replicate);
    if a.rule == NetRule::Sobol || a.rule == NetRule::ScrambledSobol {
        c += &format!(" dirnums={}", dirs.source());
    }
    c
}

fn points(a: &PointsArgs) -> Result<()> {
    let dirs = direction_numbers(&a.net.dirnums)?;
    let n = &a.net;
    let p: PointSet = if n.rule == NetRule::Plr {
        plr_points(&sample_plr(PrimeField::new(n.b)?, n.m, n.s, n.w, n.seed, n.replicate)?)?
    } else {
        generate_points(&net_matrices(n, &dirs)?)?
    };
    let mut out = open_output(&a.output)?;
    writeln!(out, "# medqmc points {}", net_comment(n, &dirs))?;
    let mut line = String::new();
    for x in p.iter() {
        line.clear();
        for (j, v) in x.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line += &v.to_string();
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

fn subsets(s: usize) -> Vec<Vec<usize>> {
    if s <= ALL_SUBSETS_MAX_S {
        (1u32..1 << s).map(|mask| (0..s).filter(|j| mask >> j & 1 == 1).collect()).collect()
    } else {
        let mut out: Vec<Vec<usize>> = (0..s).map(|j| vec![j]).collect();
        for i in 0..s {
            out.extend((i + 1..s).map(|j| vec![i, j]));
        }
        out
    }
}

fn tvalue(a: &TvalueArgs) -> Result<()> {
    let dirs = direction_numbers(&a.net.dirnums)?;
    let g = net_matrices(&a.net, &dirs)?.with_rows(a.net.m);
    let us = subsets(g.dim());
    let methods: &[TValueMethod] = match a.method {
        MethodArg::Both => &[TValueMethod::Rank, TValueMethod::Dual],
        MethodArg::Rank => &[TValueMethod::Rank],
        MethodArg::Dual => &[TValueMethod::Dual],
    };
    println!("# medqmc tvalue {}", net_comment(&a.net, &dirs));
    let reports = methods.iter().map(|&m| t_value_report(&g, m, &us)).collect::<medqmc_core::Result<Vec<_>>>()?;
    for r in &reports {
        println!("t ({:?}) = {}", r.method, r.t);
    }
    if let [rank, dual] = &reports[..] {
        if rank.t != dual.t {
            bail!("rank test and dual enumeration disagree: {} vs {}", rank.t, dual.t);
        }
    }
    if g.dim() > ALL_SUBSETS_MAX_S {
        println!("projections: singletons and pairs only (s > {ALL_SUBSETS_MAX_S})");
    }
    for (i, u) in us.iter().enumerate() {
        let label: Vec<String> = u.iter().map(|j| (j + 1).to_string()).collect();
        let ts: Vec<String> = reports.iter().map(|r| format!("{:?} {}", r.method, r.projections[i].1)).collect();
        println!("t_{{{}}}: {}", label.join(","), ts.join(", "));
    }
    Ok(())
}

fn show(v: Option<f64>) -> String {
    v.map_or("-".into(), |x| format!("{x:.10}"))
}

fn bound(a: &BoundArgs) -> Result<()> {
    let family = match a.family {
        FamilyArg::Net => Family::Net,
        FamilyArg::Plr => Family::Plr,
    };
    let setup = BoundSetup::new(a.b, a.m, a.s, a.delta, family)?;
    let gamma = WeightModel::product_fn(a.s, |j| a.gamma0 * (j as f64).powf(-a.gamma_decay))?;
    let theorem = a.theorem.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    println!(
        "# medqmc bound theorem={theorem} family={family:?} b={} m={} s={} delta={} alpha={} gamma0={} gamma_decay={} a0={} q={}",
        a.b, a.m, a.s, a.delta, a.alpha, a.gamma0, a.gamma_decay, a.a0, a.q
    );
    let consts = constants(a.b, (a.theorem == Theorem::SobAlpha).then_some(a.alpha))?;
    println!("m_b = {:.10}", consts.m_b);
    println!("M_b = {:.10}", consts.big_m_b);
    println!("C_b = {:.10}", consts.c_b);
    if let Some(c) = consts.c_alpha {
        println!("C_alpha = {c:.10}");
    }
    let result = match a.theorem {
        Theorem::Sob1 => Bound { epsilon: eps_sob1(&setup, &gamma)?, lambda: None, tau: None },
        Theorem::SobAlpha => eps_sob_alpha(&setup, a.alpha, &gamma)?,
        Theorem::Inf => {
            let seq = SmoothWeightSeq::from_a(a.b, (1..=a.s).map(|j| a.a0 * (j as f64).powf(a.q)).collect())?;
            let regime = if a.q == 0.0 { Regime::Unweighted { a: a.a0 } } else { Regime::Weighted { a: a.a0, q: a.q } };
            eps_inf(&setup, &seq, regime)?
        }
    };
    println!("epsilon = {:e}", result.epsilon);
    println!("lambda = {}", show(result.lambda));
    println!("tau = {}", show(result.tau));
    if result.is_vacuous() {
        println!("note: epsilon > 1, the bound is vacuous at these parameters");
    }
    if let Some(r) = a.r {
        let p = amplify(a.delta, r)?;
        let note = if p >= 1.0 { " (vacuous, needs smaller delta)" } else { "" };
        println!("median of {r} draws fails with probability <= {p:e}{note}");
    }
    Ok(())
}

fn converge_comment(a: &ConvergeArgs, dirs: &DirectionNumbers) -> String {
    let join = |v: Vec<String>| v.join(",");
    let mut cmd = format!(
        "medqmc converge --rule {} --function {}",
        join(a.rule.iter().map(|r| r.id().to_string()).collect()),
        join(a.function.clone())
    );
    if !a.c.is_empty() {
        cmd += &format!(" --c {}", join(a.c.iter().map(|c| c.to_string()).collect()));
    }
    if let Some(s) = a.s {
        cmd += &format!(" --s {s}");
    }
    let (lo, hi) = (a.m.0[0], a.m.0[a.m.0.len() - 1]);
    cmd += &format!(" --m {lo}:{hi} --r {} --w {} --b {} --seed {}", a.r, a.w, a.b, a.seed);
    if let Some(p) = &a.dirnums {
        cmd += &format!(" --dirnums {}", p.display());
    }
    format!("{cmd}\nseed={} direction numbers: {}", a.seed, dirs.source())
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut f = BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
    body(&mut f)?;
    f.flush()?;
    Ok(())
}

fn converge(a: &ConvergeArgs) -> Result<()> {
    let dirs = direction_numbers(&a.dirnums)?;
    let setup_for = |rule| ConvergenceSetup { rule, b: a.b, r: a.r, w: a.w, seed: a.seed, dirs: &dirs };
    let cs: Vec<Option<f64>> = if a.c.is_empty() { vec![None] } else { a.c.iter().copied().map(Some).collect() };
    let mut all = Vec::new();
    eprintln!("seed = {}", a.seed);
    for &rule in &a.rule {
        for id in &a.function {
            let one_dim = matches!(id.as_str(), "f1" | "f2" | "f3");
            for &c in if one_dim { &[None][..] } else { &cs[..] } {
                let tf = TestFunction::from_parts(id, if one_dim { None } else { a.s }, c)?;
                let recs = run_convergence(&setup_for(rule), &tf, &a.m.0)?;
                match fit_slope(&recs) {
                    Ok(fit) => eprintln!("{rule} {tf}: slope {:.3} over {} points", fit.slope, fit.used),
                    Err(e) => eprintln!("{rule} {tf}: {e}"),
                }
                all.extend(recs);
            }
        }
    }
    let comment = converge_comment(a, &dirs);
    records::write_records(open_output(&a.output)?, &comment, &all)?;
    if let Some(p) = &a.replicates {
        write_file(p, |f| records::write_replicates(f, &comment, &all))?;
    }
    if let Some(p) = &a.svg {
        let title = comment.lines().next().unwrap_or_default();
        write_file(p, |f| Ok(f.write_all(plot::render(&all, title).as_bytes())?))?;
    }
    Ok(())
}

/// Ok(false) when some check failed.
fn run_verify(a: &VerifyArgs) -> Result<bool> {
    let field = PrimeField::new(a.base)?;
    println!("# medqmc verify base={} max_m={} seed={}", a.base, a.max_m, a.seed);
    let outcomes = verify::run_all(field, a.max_m, a.seed)?;
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    Ok(failed == 0)
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::TooLarge(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Points(a) => points(a).map(|_| true),
        Command::Tvalue(a) => tvalue(a).map(|_| true),
        Command::Bound(a) => bound(a).map(|_| true),
        Command::Converge(a) => converge(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let code = exit_code(&e);
            if code == 3 {
                eprintln!("{e:#}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
