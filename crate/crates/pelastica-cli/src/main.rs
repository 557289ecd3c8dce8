//! Command-line front end: evaluates the p-elliptic special functions,
//! emits and renders the constructed curves, runs hooked
//! classification and verification, and drives stability probes.

mod checks;
mod config;
mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pelastica::curves::{
    self, build_flat_core, sample_loop, sample_segment, sample_wavelike, ArcCurve, FlatCoreSpec,
    LoopSign,
};
use pelastica::hooked::{self, HookedProblem};
use pelastica::pelliptic::{self, Modulus, PParam};
use pelastica::stability::{self, ProbeConfig};
use pelastica::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pelastica",
    version,
    about = "Degenerate p-elastica toolkit: p-elliptic functions, flat-core and hooked curves, bending energies, stability probes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a p-elliptic special function.
    Special(SpecialArgs),
    /// Construct a curve and write CSV/JSON/SVG.
    Curve(CurveArgs),
    /// Classify a hooked problem, build the minimal curve, report energies.
    Hooked(HookedArgs),
    /// Run a stability probe on a flat-core configuration.
    Probe(ProbeArgs),
    /// Run the built-in identity suite and print pass counts.
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecialFn {
    F1p,
    K1p,
    E1pInc,
    E1p,
    Qp,
    SolveModulus,
    Am1p,
    Snp,
    Cnp,
    Sechp,
    Tanhp,
}

#[derive(Args)]
struct SpecialArgs {
    /// Exponent p of the bending energy, p > 1
    #[arg(long)]
    p: f64,
    /// Function to evaluate
    #[arg(long = "fn", value_enum)]
    function: SpecialFn,
    /// Modulus q in [0, 1]
    #[arg(long)]
    q: Option<f64>,
    /// Argument x (angle for F/E, arclength for am/sn/cn/sech/tanh)
    #[arg(long)]
    x: Option<f64>,
    /// Ratio r for solve-modulus
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: TextFormat,
    /// Output file (defaults to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    p: f64,
    /// Wavelike curve; requires --q, spans [--s-lo, --s-hi] (defaults [0, 2K])
    #[arg(long, conflicts_with_all = ["loop_curve", "segment", "flatcore"])]
    wavelike: bool,
    /// Single loop gamma_b on [-K_p(1), K_p(1)]; requires --sign
    #[arg(long = "loop", conflicts_with_all = ["segment", "flatcore"])]
    loop_curve: bool,
    /// Straight segment; requires --length
    #[arg(long, conflicts_with = "flatcore")]
    segment: bool,
    /// Flat-core pinned curve; requires --N, --signs, --r and --uniform or --lengths
    #[arg(long)]
    flatcore: bool,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    s_lo: Option<f64>,
    #[arg(long)]
    s_hi: Option<f64>,
    /// Loop sign, "+" or "-"
    #[arg(long)]
    sign: Option<String>,
    #[arg(long)]
    length: Option<f64>,
    /// Number of flat-core loops N
    #[arg(long = "N", alias = "n-loops")]
    n_loops: Option<usize>,
    /// Loop signs as a string, e.g. "+-+"
    #[arg(long)]
    signs: Option<String>,
    /// Distribute flat lengths uniformly
    #[arg(long)]
    uniform: bool,
    /// Explicit comma-separated flat lengths (N+1 values)
    #[arg(long)]
    lengths: Option<String>,
    /// Displacement ratio r = |P1 - P0| / L
    #[arg(long)]
    r: Option<f64>,
    /// Samples per constructed piece
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: CurveFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HookedArgs {
    #[arg(long)]
    p: f64,
    /// Horizontal displacement ell
    #[arg(long)]
    ell: f64,
    /// Curve length L
    #[arg(long = "L", alias = "length")]
    length: f64,
    /// Mode number n >= 1
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Samples per constructed piece
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Also write the curve itself (CSV, or SVG if the extension is .svg)
    #[arg(long)]
    curve_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    /// Key-value configuration file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long = "N")]
    n_loops: Option<usize>,
    #[arg(long)]
    signs: Option<String>,
    #[arg(long)]
    uniform: bool,
    #[arg(long)]
    lengths: Option<String>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Number of descent seeds
    #[arg(long)]
    seeds: Option<usize>,
    /// Stations of the turning-angle discretization
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    gtol: Option<f64>,
    /// Base seed; seed i uses base + i
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for per-seed trajectory CSV dumps
    #[arg(long)]
    dump_trajectories: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                CliError::Core(e) if !e.is_domain() => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(std::io::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<(), CliError>;

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Special(args) => run_special(args),
        Command::Curve(args) => run_curve(args),
        Command::Hooked(args) => run_hooked(args),
        Command::Probe(args) => run_probe(args),
        Command::Verify => checks::run_verify(),
    }
}

/// Resolve an output path against PELASTICA_OUT_DIR for relative paths.
fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("PELASTICA_OUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> CliResult {
    match out {
        Some(path) => {
            std::fs::write(resolve_out(path), content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn run_special(args: SpecialArgs) -> CliResult {
    let p = PParam::new(args.p)?;
    let need_q = || -> Result<Modulus, CliError> {
        let q = args
            .q
            .ok_or_else(|| CliError::Usage("this function requires --q".into()))?;
        Ok(Modulus::new(q)?)
    };
    let need_x = || -> Result<f64, CliError> {
        args.x
            .ok_or_else(|| CliError::Usage("this function requires --x".into()))
    };
    let value = match args.function {
        SpecialFn::F1p => pelliptic::f1p(p, need_x()?, need_q()?)?,
        SpecialFn::K1p => pelliptic::k1p(p, need_q()?)?,
        SpecialFn::E1pInc => pelliptic::e1p_inc(p, need_x()?, need_q()?)?,
        SpecialFn::E1p => pelliptic::e1p(p, need_q()?)?,
        SpecialFn::Qp => pelliptic::qp(p, need_q()?)?,
        SpecialFn::SolveModulus => {
            let r = args
                .r
                .ok_or_else(|| CliError::Usage("solve-modulus requires --r".into()))?;
            pelliptic::solve_modulus(p, r)?.get()
        }
        SpecialFn::Am1p => pelliptic::am1p(p, need_x()?, need_q()?)?,
        SpecialFn::Snp => pelliptic::snp(p, need_x()?, need_q()?)?,
        SpecialFn::Cnp => pelliptic::cnp(p, need_x()?, need_q()?)?,
        SpecialFn::Sechp => pelliptic::sechp(p, need_x()?)?,
        SpecialFn::Tanhp => pelliptic::tanhp(p, need_x()?)?,
    };
    let content = match args.format {
        TextFormat::Text => format!("{}\n", fmt17(value)),
        TextFormat::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("p".into(), args.p.into());
            if let Some(q) = args.q {
                obj.insert("q".into(), q.into());
            }
            if let Some(x) = args.x {
                obj.insert("x".into(), x.into());
            }
            if let Some(r) = args.r {
                obj.insert("r".into(), r.into());
            }
            obj.insert("value".into(), value.into());
            format!("{}\n", serde_json::Value::Object(obj))
        }
    };
    emit(&args.out, &content)
}

fn parse_sign(text: &str) -> Result<LoopSign, CliError> {
    match text {
        "+" => Ok(LoopSign::Plus),
        "-" => Ok(LoopSign::Minus),
        other => Err(CliError::Usage(format!(
            "sign must be '+' or '-', got '{other}'"
        ))),
    }
}

fn parse_lengths(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("bad length '{s}': {e}")))
        })
        .collect()
}

fn flat_core_spec(
    p: PParam,
    n_loops: usize,
    signs: &str,
    uniform: bool,
    lengths: Option<&str>,
    r: f64,
) -> Result<FlatCoreSpec, CliError> {
    let signs = LoopSign::parse_signs(signs)?;
    if uniform {
        Ok(FlatCoreSpec::uniform(p, n_loops, signs, r)?)
    } else {
        let lengths =
            lengths.ok_or_else(|| CliError::Usage("flat-core needs --uniform or --lengths".into()))?;
        let spec = FlatCoreSpec {
            p,
            n_loops,
            signs,
            flat_lengths: parse_lengths(lengths)?,
            r,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn run_curve(args: CurveArgs) -> CliResult {
    let p = PParam::new(args.p)?;
    let m = args.samples.max(2);
    let (curve, construction): (ArcCurve, String) = if args.wavelike {
        let q = Modulus::new(
            args.q
                .ok_or_else(|| CliError::Usage("--wavelike requires --q".into()))?,
        )?;
        let k = pelliptic::k1p(p, q)?;
        let s_lo = args.s_lo.unwrap_or(0.0);
        let s_hi = args.s_hi.unwrap_or(2.0 * k);
        (
            sample_wavelike(p, q, s_lo, s_hi, m)?,
            format!("wavelike(q={}, s in [{s_lo}, {s_hi}])", q.get()),
        )
    } else if args.loop_curve {
        let sign = parse_sign(
            args.sign
                .as_deref()
                .ok_or_else(|| CliError::Usage("--loop requires --sign".into()))?,
        )?;
        (sample_loop(p, sign, m)?, "loop".to_string())
    } else if args.segment {
        let len = args
            .length
            .ok_or_else(|| CliError::Usage("--segment requires --length".into()))?;
        (sample_segment(p, len, m)?, format!("segment(L={len})"))
    } else if args.flatcore {
        let n = args
            .n_loops
            .ok_or_else(|| CliError::Usage("--flatcore requires --N".into()))?;
        let signs = args
            .signs
            .as_deref()
            .ok_or_else(|| CliError::Usage("--flatcore requires --signs".into()))?;
        let r = args
            .r
            .ok_or_else(|| CliError::Usage("--flatcore requires --r".into()))?;
        let spec = flat_core_spec(p, n, signs, args.uniform, args.lengths.as_deref(), r)?;
        (
            build_flat_core(&spec, m)?,
            format!("flatcore(N={n}, signs={signs}, r={r})"),
        )
    } else {
        return Err(CliError::Usage(
            "choose one of --wavelike, --loop, --segment, --flatcore".into(),
        ));
    };

    let content = match args.format {
        CurveFormat::Csv => curves::to_csv(&curve),
        CurveFormat::Json => format!("{}\n", curves::metadata_json(&curve, &construction)),
        CurveFormat::Svg => svg::render(&curve),
    };
    emit(&args.out, &content)
}

fn run_hooked(args: HookedArgs) -> CliResult {
    let p = PParam::new(args.p)?;
    let prob = HookedProblem::new(p, args.ell, args.length)?;
    let report = hooked::hooked_report(&prob, args.n, args.samples)?;
    if let Some(curve_out) = &args.curve_out {
        let branch = hooked::HookedBranch::canonical(&prob, args.n)?;
        let curve = hooked::build_hooked(&prob, &branch, args.samples)?;
        let rendered = if curve_out.extension().is_some_and(|e| e == "svg") {
            svg::render(&curve)
        } else {
            curves::to_csv(&curve)
        };
        std::fs::write(resolve_out(curve_out), rendered)?;
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(&args.out, &format!("{json}\n"))
}

fn run_probe(args: ProbeArgs) -> CliResult {
    let mut cfg = config::ProbeFileConfig::default();
    if let Some(path) = &args.config {
        cfg = config::ProbeFileConfig::parse(&std::fs::read_to_string(path)?)
            .map_err(CliError::Usage)?;
    }
    if let Some(p) = args.p {
        cfg.p = Some(p);
    }
    if let Some(n) = args.n_loops {
        cfg.n_loops = Some(n);
    }
    if let Some(signs) = &args.signs {
        cfg.signs = Some(signs.clone());
    }
    if args.uniform {
        cfg.uniform = true;
    }
    if let Some(lengths) = &args.lengths {
        cfg.flat_lengths = Some(lengths.clone());
    }
    if let Some(r) = args.r {
        cfg.r = Some(r);
    }
    if let Some(eps) = args.eps {
        cfg.eps = eps;
    }
    if let Some(seeds) = args.seeds {
        cfg.seeds = seeds;
    }
    if let Some(m) = args.m {
        cfg.m = m;
    }
    if let Some(it) = args.max_iter {
        cfg.max_iter = it;
    }
    if let Some(g) = args.gtol {
        cfg.gtol = g;
    }
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }

    let p = PParam::new(
        cfg.p
            .ok_or_else(|| CliError::Usage("probe needs p (flag or config)".into()))?,
    )?;
    let n = cfg
        .n_loops
        .ok_or_else(|| CliError::Usage("probe needs N".into()))?;
    let signs = cfg
        .signs
        .clone()
        .ok_or_else(|| CliError::Usage("probe needs signs".into()))?;
    let r = cfg.r.ok_or_else(|| CliError::Usage("probe needs r".into()))?;
    let spec = flat_core_spec(p, n, &signs, cfg.uniform, cfg.flat_lengths.as_deref(), r)?;
    let probe_cfg = ProbeConfig {
        eps: cfg.eps,
        n_seeds: cfg.seeds,
        m: cfg.m,
        max_iter: cfg.max_iter,
        gtol: cfg.gtol,
        base_seed: cfg.base_seed,
        m_per_piece: 600,
    };

    let report = if let Some(dir) = &args.dump_trajectories {
        let dir = resolve_out(dir);
        std::fs::create_dir_all(&dir)?;
        let mut trajectories: std::collections::BTreeMap<u64, String> = Default::default();
        let report = stability::probe_stability_observed(&spec, &probe_cfg, |seed, iter, _, e| {
            trajectories
                .entry(seed)
                .or_insert_with(|| "iteration,energy\n".to_string())
                .push_str(&format!("{iter},{}\n", fmt17(e)));
        })?;
        for (seed, csv) in &trajectories {
            std::fs::write(dir.join(format!("seed_{seed}.csv")), csv)?;
        }
        report
    } else {
        stability::probe_stability_with(&spec, &probe_cfg)?
    };

    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(&args.out, &format!("{json}\n"))
}
