use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ft_spanner::blocking::{extract_blocking_set, subsample_experiment, verify_blocking_set};
use ft_spanner::experiment::{run_scaling, ExperimentConfig, GraphFamily};
use ft_spanner::generators::{
    audit_lower_bound, biclique, complete_graph, cycle_graph, high_girth_graph, lower_bound_product, path_graph,
    petersen, random_graph, star_graph, AuditRow, BlockingReading, WeightDist,
};
use ft_spanner::graph::{FaultMode, Graph, ProductKind};
use ft_spanner::io::{format_blocking, format_edge_list, format_trace, parse_blocking, parse_edge_list, parse_trace};
use ft_spanner::spanner::{ft_greedy_spanner_with, SpannerParams, WitnessOracle};
use ft_spanner::verifier::{check_budget, verify_ft_spanner, StretchReport, VerifyStrategy};

#[derive(Parser)]
#[command(
    name = "ftspan",
    version,
    about = "Fault-tolerant graph spanners: construction, verification, analysis"
)]
struct Cli {
    /// Root seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report format for verdicts and summaries.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on pair checks for exhaustive verification (accepts e.g. 1e9).
    #[arg(long, global = true, default_value = "1e9", value_parser = parse_budget)]
    budget: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Generate(GenerateArgs),
    /// Run the FT greedy algorithm; writes the spanner and its trace.
    Spanner(SpannerArgs),
    /// Check that a spanner tolerates every fault set.
    Verify(VerifyArgs),
    /// Extract and check the blocking set of a greedy trace.
    Blocking(BlockingArgs),
    /// Random vertex-subsample experiment on a graph and blocking set.
    Subsample(SubsampleArgs),
    /// Size-scaling sweeps and lower-bound audits.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Complete,
    Cycle,
    Path,
    Star,
    Petersen,
    Biclique,
    Random,
    HighGirth,
    LowerBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Vertex,
    Edge,
}

impl From<ModeArg> for FaultMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Vertex => FaultMode::Vertex,
            ModeArg::Edge => FaultMode::Edge,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductArg {
    Cartesian,
    Tensor,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReadingArg {
    SharedEndpoint,
    SameBaseEdge,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Branching,
    Candidates,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    /// Number of vertices.
    #[arg(short)]
    n: Option<usize>,
    /// Edge probability for `random`.
    #[arg(short)]
    p: Option<f64>,
    /// Biclique side sizes.
    #[arg(short, default_value_t = 2)]
    a: usize,
    #[arg(short, default_value_t = 2)]
    b: usize,
    /// `unit` or `uniform:lo:hi`.
    #[arg(long, default_value = "unit")]
    weights: WeightDist,
    /// Minimum girth for `high-girth`.
    #[arg(long, default_value_t = 5)]
    girth: usize,
    /// Base graph for `lower-bound`: `cycle:<g>`, `petersen`, or `high-girth:<g>:<n>`.
    #[arg(long, default_value = "cycle:6")]
    base: String,
    /// Fault parameter for `lower-bound`.
    #[arg(long = "f", default_value_t = 4)]
    faults: usize,
    #[arg(long, value_enum, default_value_t = ProductArg::Cartesian)]
    product: ProductArg,
    /// Which edge pairs the sidecar blocking set contains.
    #[arg(long, value_enum, default_value_t = ReadingArg::SharedEndpoint)]
    reading: ReadingArg,
    /// Output file (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Sidecar blocking file for `lower-bound` (default: `<output>.blocking`).
    #[arg(long)]
    blocking_out: Option<PathBuf>,
}

#[derive(Args)]
struct FtArgs {
    #[arg(short = 'k', long)]
    stretch: f64,
    #[arg(short = 'f', long, default_value_t = 0)]
    faults: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Vertex)]
    mode: ModeArg,
}

impl FtArgs {
    fn params(&self) -> Result<SpannerParams> {
        Ok(SpannerParams::new(self.stretch, self.faults, self.mode.into())?)
    }
}

#[derive(Args)]
struct SpannerArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[command(flatten)]
    ft: FtArgs,
    #[arg(long, value_enum, default_value_t = OracleArg::Branching)]
    oracle: OracleArg,
    /// Spanner output (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(short, long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(short = 's', long)]
    spanner: PathBuf,
    #[command(flatten)]
    ft: FtArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
    strategy: StrategyArg,
    /// Fault sets drawn by the sampled strategy.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
}

#[derive(Args)]
struct BlockingArgs {
    #[arg(short, long)]
    trace: PathBuf,
    /// Spanner file; must match the trace's accepted edges.
    #[arg(short = 's', long)]
    spanner: Option<PathBuf>,
    /// Cycle length to check (default: ceil(k) + 1 from the trace).
    #[arg(short = 'L', long)]
    length: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SubsampleArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(short, long)]
    blocking: PathBuf,
    #[arg(short = 'f', long)]
    faults: usize,
    #[arg(short = 'L', long)]
    length: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Per-trial CSV (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Sweep (n, f) on a graph family and fit log-log exponents.
    Scaling(ScalingArgs),
    /// Verdict table for the lower-bound products over a base graph.
    Audit(AuditArgs),
}

#[derive(Args)]
struct ScalingArgs {
    /// `complete[:weights]` or `random:p[:weights]`.
    #[arg(long, default_value = "complete:uniform:1:2")]
    family: String,
    #[arg(short, long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(short = 'f', long, value_delimiter = ',', required = true)]
    faults: Vec<usize>,
    #[arg(short = 'k', long, default_value_t = 3.0)]
    stretch: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Vertex)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    #[arg(long, value_enum, default_value_t = OracleArg::Branching)]
    oracle: OracleArg,
    /// Exhaustively verify every spanner (subject to --budget).
    #[arg(long)]
    verify: bool,
    /// Write 0 in the runtime column so output is byte-reproducible.
    #[arg(long)]
    no_runtime: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, default_value = "cycle:6")]
    base: String,
    #[arg(long = "f", default_value_t = 4)]
    faults: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_budget(s: &str) -> std::result::Result<u128, String> {
    if let Ok(v) = s.parse::<u128>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() && v.fract() == 0.0 => Ok(v as u128),
        _ => Err(format!("`{s}` is not a non-negative integer budget")),
    }
}

fn oracle(o: OracleArg) -> WitnessOracle {
    match o {
        OracleArg::Branching => WitnessOracle::Branching,
        OracleArg::Candidates => WitnessOracle::Candidates,
        OracleArg::Exhaustive => WitnessOracle::Exhaustive,
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_edge_list(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn need_n(n: Option<usize>, family: &str) -> Result<usize> {
    n.ok_or_else(|| anyhow!("`generate {family}` needs -n"))
}

fn parse_base(spec: &str, seed: u64) -> Result<Graph> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .with_context(|| format!("bad number `{s}` in base `{spec}`"))
    };
    Ok(match parts.as_slice() {
        ["cycle", g] => cycle_graph(num(g)?)?,
        ["petersen"] => petersen(),
        ["high-girth", g, n] => high_girth_graph(num(g)?, num(n)?, seed)?.graph,
        _ => bail!("unknown base `{spec}`; expected cycle:<g>, petersen or high-girth:<g>:<n>"),
    })
}

fn cmd_generate(cli: &Cli, args: &GenerateArgs) -> Result<()> {
    let g = match args.family {
        Family::Complete => complete_graph(need_n(args.n, "complete")?),
        Family::Cycle => cycle_graph(need_n(args.n, "cycle")?)?,
        Family::Path => path_graph(need_n(args.n, "path")?),
        Family::Star => star_graph(need_n(args.n, "star")?),
        Family::Petersen => petersen(),
        Family::Biclique => biclique(args.a, args.b),
        Family::Random => {
            let p = args.p.ok_or_else(|| anyhow!("`generate random` needs -p"))?;
            random_graph(need_n(args.n, "random")?, p, cli.seed, args.weights)?
        }
        Family::HighGirth => {
            let hg = high_girth_graph(args.girth, need_n(args.n, "high-girth")?, cli.seed)?;
            if hg.fallback {
                eprintln!("note: random construction failed; wrote a cycle instead");
            }
            hg.graph
        }
        Family::LowerBound => return generate_lower_bound(cli, args),
    };
    emit(args.output.as_deref(), &format_edge_list(&g))
}

fn generate_lower_bound(cli: &Cli, args: &GenerateArgs) -> Result<()> {
    let sidecar = match (&args.blocking_out, &args.output) {
        (Some(p), _) => p.clone(),
        (None, Some(out)) => {
            let mut name = out.as_os_str().to_owned();
            name.push(".blocking");
            PathBuf::from(name)
        }
        (None, None) => bail!("`generate lower-bound` needs -o or --blocking-out for the sidecar blocking file"),
    };
    let base = parse_base(&args.base, cli.seed)?;
    let kind = match args.product {
        ProductArg::Cartesian => ProductKind::Cartesian,
        ProductArg::Tensor => ProductKind::Tensor,
    };
    let reading = match args.reading {
        ReadingArg::SharedEndpoint => BlockingReading::SharedEndpoint,
        ReadingArg::SameBaseEdge => BlockingReading::SameBaseEdge,
    };
    let inst = lower_bound_product(&base, args.faults, kind)?;
    let audit = inst.audit(reading)?;
    let claimed = inst.claimed(reading)?;
    let mut text = format!(
        "# lower-bound product={} reading={} f={} length={} verified={} size_ok={}\n",
        kind, reading, args.faults, inst.blocking_length, audit.verified, audit.size_ok
    );
    text.push_str(&format_blocking(&claimed));
    emit(args.output.as_deref(), &format_edge_list(inst.graph()))?;
    fs::write(&sidecar, text).with_context(|| format!("writing {}", sidecar.display()))?;
    if !audit.verified {
        eprintln!(
            "warning: the {reading} blocking set does NOT cover all cycles of length <= {} (first uncovered: {})",
            inst.blocking_length,
            audit.first_uncovered.as_deref().unwrap_or("-")
        );
    }
    Ok(())
}

fn cmd_spanner(args: &SpannerArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let result = ft_greedy_spanner_with(&g, args.ft.params()?, oracle(args.oracle))?;
    emit(args.output.as_deref(), &format_edge_list(&result.spanner))?;
    if let Some(t) = &args.trace {
        fs::write(t, format_trace(&result.trace)).with_context(|| format!("writing {}", t.display()))?;
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<bool> {
    let g = read_graph(&args.graph)?;
    let h = read_graph(&args.spanner)?;
    let params = args.ft.params()?;
    let strategy = match args.strategy {
        StrategyArg::Exhaustive => {
            check_budget(&g, &params, cli.budget)?;
            VerifyStrategy::Exhaustive
        }
        StrategyArg::Sampled => VerifyStrategy::Sampled {
            trials: args.trials,
            seed: cli.seed,
        },
    };
    let report = verify_ft_spanner(&g, &h, params, strategy)?;
    match cli.format {
        Format::Text => println!("{report}"),
        Format::Csv => println!("{}\n{}", StretchReport::CSV_HEADER, report.csv_row()),
    }
    Ok(report.ok)
}

fn cmd_blocking(args: &BlockingArgs) -> Result<bool> {
    let trace = parse_trace(&read_text(&args.trace)?).with_context(|| format!("parsing {}", args.trace.display()))?;
    let h = trace.replay()?;
    if let Some(path) = &args.spanner {
        if read_graph(path)? != h {
            bail!("{} does not match the accepted edges of the trace", path.display());
        }
    }
    let length = args.length.unwrap_or_else(|| trace.params.blocking_length());
    let b = extract_blocking_set(&trace)?;
    let verdict = verify_blocking_set(&h, &b, length)?;
    let bound = trace.params.faults * h.edge_count();
    let summary = format!(
        "# size={} bound={} size_ok={} length={} verified={} cycles_checked={} first_uncovered={}\n",
        b.len(),
        bound,
        b.len() <= bound,
        length,
        verdict.covered,
        verdict.cycles_checked,
        verdict
            .first_uncovered
            .as_ref()
            .map_or("-".to_string(), |c| c.to_string())
    );
    eprint!("{summary}");
    emit(args.output.as_deref(), &(summary + &format_blocking(&b)))?;
    Ok(verdict.covered && b.len() <= bound)
}

fn cmd_subsample(cli: &Cli, args: &SubsampleArgs) -> Result<()> {
    let h = read_graph(&args.graph)?;
    let b =
        parse_blocking(&read_text(&args.blocking)?).with_context(|| format!("parsing {}", args.blocking.display()))?;
    let r = subsample_experiment(&h, &b, args.faults, args.length, args.trials, cli.seed)?;
    emit(args.output.as_deref(), &r.to_csv())?;
    let lines = [
        ("trials", r.trials.to_string()),
        ("sample_size", r.sample_size.to_string()),
        ("girth_pass_rate", r.girth_pass_rate.to_string()),
        ("mean_final", format!("{:.4}", r.mean_final)),
        ("min_final", r.min_final.to_string()),
        ("predicted_lower_bound", format!("{:.4}", r.predicted_lower_bound)),
        ("exact_expectation_bound", format!("{:.4}", r.exact_expectation_bound)),
        (
            "edge_survival",
            format!("{:.6}±{:.6}", r.edge_survival.mean, r.edge_survival.std_err),
        ),
        ("edge_survival_expected", format!("{:.6}", r.edge_survival_expected)),
        (
            "pair_survival",
            format!("{:.6}±{:.6}", r.pair_survival.mean, r.pair_survival.std_err),
        ),
        ("pair_survival_expected", format!("{:.6}", r.pair_survival_expected)),
        ("degenerate", r.degenerate.to_string()),
    ];
    for (k, v) in lines {
        match cli.format {
            Format::Text => eprintln!("{k}: {v}"),
            Format::Csv => eprintln!("{k},{v}"),
        }
    }
    Ok(())
}

fn cmd_scaling(cli: &Cli, args: &ScalingArgs) -> Result<()> {
    let family: GraphFamily = args.family.parse()?;
    let mut cfg = ExperimentConfig::new(
        family,
        args.n.clone(),
        args.faults.clone(),
        args.stretch,
        args.mode.into(),
    );
    cfg.repetitions = args.repetitions;
    cfg.seed = cli.seed;
    cfg.oracle = oracle(args.oracle);
    cfg.verify = args.verify;
    cfg.budget = cli.budget;
    let report = run_scaling(&cfg)?;
    emit(args.output.as_deref(), &report.to_csv(!args.no_runtime))
}

fn cmd_audit(cli: &Cli, args: &AuditArgs) -> Result<()> {
    let base = parse_base(&args.base, cli.seed)?;
    let rows = audit_lower_bound(&base, args.faults)?;
    let text = match cli.format {
        Format::Csv => {
            let mut out = format!("{}\n", AuditRow::CSV_HEADER);
            for r in &rows {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "{:<10} {:<16} {:>5} {:>5} {:>6} {:>8} {:>8} {:>9} {:>8} {}\n",
                "product", "reading", "n", "m", "pairs", "f*m", "size_ok", "verified", "crossck", "first_uncovered"
            );
            for r in &rows {
                out.push_str(&format!(
                    "{:<10} {:<16} {:>5} {:>5} {:>6} {:>8} {:>8} {:>9} {:>8} {}\n",
                    r.kind.to_string(),
                    r.reading.to_string(),
                    r.vertices,
                    r.edges,
                    r.pairs,
                    r.size_bound,
                    r.size_ok,
                    r.verified,
                    r.cross_checked,
                    r.first_uncovered.as_deref().unwrap_or("-")
                ));
            }
            out
        }
    };
    emit(args.output.as_deref(), &text)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(cli, a).map(|_| true),
        Command::Spanner(a) => cmd_spanner(a).map(|_| true),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Blocking(a) => cmd_blocking(a),
        Command::Subsample(a) => cmd_subsample(cli, a).map(|_| true),
        Command::Experiment(ExperimentCommand::Scaling(a)) => cmd_scaling(cli, a).map(|_| true),
        Command::Experiment(ExperimentCommand::Audit(a)) => cmd_audit(cli, a).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
