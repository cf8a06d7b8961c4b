mod config;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use horw::centrality::DEFAULT_DAMPING;
use horw::dismantle::{run_dismantling, DEFAULT_TARGET};
use horw::epidemic::{self, EpidemicParams};
use horw::graph::{self, EdgeListFormat, Separator};
use horw::resolution::{self, resolution_report};
use horw::simplicial::{build_cover_capped, maximal_cliques_capped, DEFAULT_MAX_CLIQUES};
use horw::walk::{self, TransitionSystem, WalkOptions, DEFAULT_MAX_ITER, DEFAULT_TOL};
use horw::{Graph, Method};

use config::{sha256_hex, EpidemicConfig, ExperimentConfig};
use output::{Metadata, Sink};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration; exit status 2.
    Usage(String),
    /// Failure while computing; exit status 1.
    Runtime(String),
}

impl From<horw::Error> for CliError {
    fn from(e: horw::Error) -> Self {
        match e {
            horw::Error::OutOfRange { .. } | horw::Error::InvalidParameter { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "horw",
    version,
    about = "Higher-order random-walk node ranking and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Node/edge counts, degree moments, clustering and epidemic threshold.
    Stats(Common),
    /// Maximal cliques as JSON lines, plus the node-clique incidence matrix.
    Cliques {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_MAX_CLIQUES)]
        max_cliques: usize,
    },
    /// One of the walk matrices in coordinate text form.
    ExportMatrix {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = MatrixKind::M)]
        matrix: MatrixKind,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
    },
    /// Rank nodes.
    Rank {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        method: MethodArgs,
    },
    /// SIR spreading seeded with the top-ranked nodes.
    SimulateSir(EpidemicArgs),
    /// SIR with triangle infections, seeded with the top-ranked nodes.
    SimulateHsir(EpidemicArgs),
    /// Remove nodes by rank until the giant component is small.
    Dismantle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value_t = DEFAULT_TARGET)]
        target: f64,
    },
    /// KL divergence and segment slopes of score profiles; optional s sweep.
    Resolution {
        #[command(flatten)]
        common: Common,
        /// `all` or a comma list; `horw:0.3` picks a specific s.
        #[arg(long, default_value = "all")]
        methods: String,
        #[arg(long, default_value_t = 0.2)]
        s: f64,
        #[arg(long, default_value_t = DEFAULT_DAMPING)]
        damping: f64,
        /// Segment length; defaults to 1% of n rounded to an even number.
        #[arg(long)]
        window: Option<usize>,
        /// Grid `start:end:step` of s values.
        #[arg(long)]
        sweep: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Edge list, two node labels per line.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Sep::Auto)]
    sep: Sep,
    /// Skip the first non-comment line.
    #[arg(long)]
    skip_header: bool,
    /// Output directory; without it the main artifact goes to stdout.
    #[arg(long, env = "HORW_OUT_DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Args)]
struct MethodArgs {
    #[arg(long, default_value = "horw")]
    method: String,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    #[arg(long, default_value_t = DEFAULT_DAMPING)]
    damping: f64,
}

#[derive(Args)]
struct EpidemicArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    method: MethodArgs,
    /// Infection probability; defaults to beta-mult times the threshold.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    beta_mult: f64,
    /// Triangle infection probability as a fraction of beta (HSIR).
    #[arg(long, default_value_t = 0.8)]
    beta2_ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.1)]
    seed_frac: f64,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 42)]
    rng: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sep {
    Auto,
    Whitespace,
    Comma,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    /// Pairwise transition.
    C,
    /// Node-to-simplex step.
    U,
    /// Simplex-to-node step.
    D,
    /// Two-step walk through the simplices.
    W,
    /// Mixture at the given s.
    M,
    /// Simplex-node incidence.
    B,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

struct Input {
    bytes: Vec<u8>,
    format: EdgeListFormat,
}

/// Reads the input and starts a config for `command`.
fn prepare(common: &Common, command: &'static str) -> Result<(Input, ExperimentConfig), CliError> {
    let bytes =
        fs::read(&common.graph).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", common.graph.display())))?;
    let (separator, sep_name) = match common.sep {
        Sep::Auto => (Separator::Auto, "auto"),
        Sep::Whitespace => (Separator::Whitespace, "whitespace"),
        Sep::Comma => (Separator::Comma, "comma"),
    };
    let config = ExperimentConfig {
        command,
        input_sha256: sha256_hex(&bytes),
        separator: sep_name,
        skip_header: common.skip_header,
        methods: Vec::new(),
        tol: common.tol,
        max_iter: common.max_iter,
        epidemic: None,
        target: None,
        window: None,
        sweep: None,
        extra: None,
        rng_seed: 0,
        format: common.format.name(),
    };
    let format = EdgeListFormat {
        separator,
        skip_header: common.skip_header,
    };
    Ok((Input { bytes, format }, config))
}

impl Input {
    /// Parses the edge list, reducing to the giant component if asked.
    fn graph(&self, connected: bool) -> Result<Graph, CliError> {
        let (mut graph, report) = graph::parse_edge_list(&self.bytes, &self.format)?;
        if report.self_loops > 0 || report.duplicate_edges > 0 {
            eprintln!(
                "notice: dropped {} self-loops and {} duplicate edges",
                report.self_loops, report.duplicate_edges
            );
        }
        if connected && !graph.is_connected() {
            let total = graph.node_count();
            graph = graph::giant_component(&graph).0;
            eprintln!(
                "notice: using the giant component ({} of {total} nodes)",
                graph.node_count()
            );
        }
        Ok(graph)
    }
}

fn opts(config: &ExperimentConfig) -> WalkOptions {
    WalkOptions {
        tol: config.tol,
        max_iter: config.max_iter,
    }
}

fn method_of(args: &MethodArgs) -> Result<Method, CliError> {
    Ok(Method::parse(&args.method, args.s, args.damping)?)
}

fn parse_methods(spec: &str, s: f64, damping: f64) -> Result<Vec<Method>, CliError> {
    if spec.eq_ignore_ascii_case("all") {
        let mut all = vec![Method::Horw { s }];
        if s != 0.0 {
            all.push(Method::Horw { s: 0.0 });
        }
        all.extend([
            Method::Betweenness,
            Method::Degree,
            Method::Coreness,
            Method::Eigenvector,
            Method::PageRank { damping },
        ]);
        return Ok(all);
    }
    spec.split(',')
        .map(|item| {
            let item = item.trim();
            match item.split_once(':') {
                Some((name, value)) if name.eq_ignore_ascii_case("horw") => {
                    let s = value
                        .parse()
                        .map_err(|_| CliError::Usage(format!("bad s value in {item:?}")))?;
                    Ok(Method::parse(name, s, damping)?)
                }
                _ => Ok(Method::parse(item, s, damping)?),
            }
        })
        .collect()
}

fn parse_sweep(spec: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("sweep must look like start:end:step, got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| bad())?;
    }
    if !(0.0 <= out[0] && out[1] <= 1.0) {
        return Err(CliError::Usage("s out of range [0,1]".into()));
    }
    Ok(out)
}

fn finish_config(config: &ExperimentConfig) -> Result<Metadata, CliError> {
    config.validate()?;
    Ok(Metadata::new(config))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Stats(common) => {
            let (input, config) = prepare(&common, "stats")?;
            let meta = finish_config(&config)?;
            let graph = input.graph(false)?;
            let stats = graph::stats(&graph);
            let components = graph.components().len();
            let beta_c = epidemic::spreading_threshold(&stats).ok();
            let sink = Sink {
                dir: common.out.as_deref(),
            };
            match common.format {
                Format::Csv => sink.emit("stats.csv", &output::stats_csv(&meta, &stats, components, beta_c), true)?,
                Format::Json => sink.emit(
                    "stats.json",
                    &output::stats_json(&meta, &stats, components, beta_c),
                    true,
                )?,
            }
        }
        Command::Cliques { common, max_cliques } => {
            let (input, mut config) = prepare(&common, "cliques")?;
            config.extra = Some(format!("max_cliques={max_cliques}"));
            let meta = finish_config(&config)?;
            let graph = input.graph(false)?;
            let cliques = maximal_cliques_capped(&graph, max_cliques)?;
            let sink = Sink {
                dir: common.out.as_deref(),
            };
            sink.emit(
                "cliques.jsonl",
                &output::cliques_jsonl(&meta, &cliques, graph.labels()),
                true,
            )?;
            if sink.dir.is_some() {
                let cover = horw::SimplicialCover::from_simplices(graph.node_count(), cliques);
                // isolated nodes leave the cover incomplete; skip the matrix then
                if let Ok(cover) = cover {
                    sink.emit(
                        "incidence.mtx",
                        &output::matrix_text(&meta, &cover.incidence(), true),
                        false,
                    )?;
                }
                sink.emit("nodes.csv", &output::node_labels_csv(&meta, graph.labels()), false)?;
            }
        }
        Command::ExportMatrix { common, matrix, s } => {
            if !(0.0..=1.0).contains(&s) {
                return Err(CliError::Usage("s out of range [0,1]".into()));
            }
            let (input, mut config) = prepare(&common, "export-matrix")?;
            let name = match matrix {
                MatrixKind::C => "C",
                MatrixKind::U => "U",
                MatrixKind::D => "D",
                MatrixKind::W => "W",
                MatrixKind::M => "M",
                MatrixKind::B => "B",
            };
            config.extra = Some(format!("matrix={name} s={s}"));
            let meta = finish_config(&config)?;
            let graph = input.graph(true)?;
            let cover = build_cover_capped(&graph, DEFAULT_MAX_CLIQUES)?;
            let (m, pattern) = match matrix {
                MatrixKind::C => (walk::pairwise_transition(&graph)?, false),
                MatrixKind::U => (walk::upstream_transition(&cover), false),
                MatrixKind::D => (walk::downstream_transition(&cover), false),
                MatrixKind::W => (walk::bipartite_transition(&cover), false),
                MatrixKind::M => {
                    let c = walk::pairwise_transition(&graph)?;
                    (
                        walk::augmented_transition(&c, &walk::bipartite_transition(&cover), s)?,
                        false,
                    )
                }
                MatrixKind::B => (cover.incidence(), true),
            };
            let sink = Sink {
                dir: common.out.as_deref(),
            };
            sink.emit(&format!("{name}.mtx"), &output::matrix_text(&meta, &m, pattern), true)?;
            if sink.dir.is_some() {
                sink.emit("nodes.csv", &output::node_labels_csv(&meta, graph.labels()), false)?;
            }
        }
        Command::Rank { common, method } => {
            let method = method_of(&method)?;
            let (input, mut config) = prepare(&common, "rank")?;
            config.methods = vec![method];
            let meta = finish_config(&config)?;
            let graph = input.graph(true)?;
            let result = method.rank(&graph, opts(&config))?;
            let sink = Sink {
                dir: common.out.as_deref(),
            };
            match common.format {
                Format::Csv => sink.emit("rank.csv", &output::rank_csv(&meta, &result, graph.labels()), true)?,
                Format::Json => sink.emit("rank.json", &output::rank_json(&meta, &result, graph.labels()), true)?,
            }
        }
        Command::SimulateSir(args) => simulate(args, false)?,
        Command::SimulateHsir(args) => simulate(args, true)?,
        Command::Dismantle { common, method, target } => {
            let method = method_of(&method)?;
            let (input, mut config) = prepare(&common, "dismantle")?;
            config.methods = vec![method];
            config.target = Some(target);
            let meta = finish_config(&config)?;
            let graph = input.graph(true)?;
            let result = run_dismantling(&graph, &method, target, opts(&config))?;
            let name = method.to_string();
            let json = output::dismantle_json(&meta, &name, &result, graph.labels());
            let csv = output::trajectory_csv(&meta, &result, graph.labels());
            let sink = Sink {
                dir: common.out.as_deref(),
            };
            let json_primary = common.format == Format::Json;
            sink.emit("dismantle.json", &json, json_primary)?;
            sink.emit("dismantle_trajectory.csv", &csv, !json_primary)?;
        }
        Command::Resolution {
            common,
            methods,
            s,
            damping,
            window,
            sweep,
        } => {
            let methods = parse_methods(&methods, s, damping)?;
            let sweep = sweep.as_deref().map(parse_sweep).transpose()?;
            let (input, mut config) = prepare(&common, "resolution")?;
            config.methods = methods.clone();
            config.window = window;
            config.sweep = sweep;
            finish_config(&config)?;
            let graph = input.graph(true)?;
            let window = window.unwrap_or_else(|| resolution::default_window(graph.node_count()));
            config.window = Some(window);
            let meta = finish_config(&config)?;
            let o = opts(&config);
            let reports = methods
                .iter()
                .map(|m| resolution_report(&m.rank(&graph, o)?, window))
                .collect::<horw::Result<Vec<_>>>()?;
            let sweep = match sweep {
                Some([a, b, step]) => {
                    let grid = resolution::grid(a, b, step)?;
                    let cover = build_cover_capped(&graph, DEFAULT_MAX_CLIQUES)?;
                    let system = TransitionSystem::new(&graph, &cover)?;
                    Some(resolution::sweep_s(&system, &grid, o)?)
                }
                None => None,
            };
            let sink = Sink {
                dir: common.out.as_deref(),
            };
            match common.format {
                Format::Csv => sink.emit("resolution.csv", &output::resolution_csv(&meta, &reports), true)?,
                Format::Json => sink.emit(
                    "resolution.json",
                    &output::resolution_json(&meta, &reports, sweep.as_ref()),
                    true,
                )?,
            }
            if let (Some(sw), Some(_)) = (&sweep, sink.dir) {
                sink.emit("resolution_sweep.json", &output::sweep_json(&meta, sw), false)?;
            }
        }
    }
    Ok(())
}

fn simulate(args: EpidemicArgs, hsir: bool) -> Result<(), CliError> {
    let command = if hsir { "simulate-hsir" } else { "simulate-sir" };
    let method = method_of(&args.method)?;
    let (input, mut config) = prepare(&args.common, command)?;
    let params = EpidemicParams {
        beta: args.beta.unwrap_or(0.0),
        beta2: 0.0,
        gamma: args.gamma,
        seed_fraction: args.seed_frac,
        runs: args.runs,
        rng_seed: args.rng,
    };
    config.methods = vec![method];
    config.rng_seed = args.rng;
    config.epidemic = Some(EpidemicConfig {
        beta: args.beta,
        beta_mult: args.beta_mult,
        beta2_ratio: if hsir { args.beta2_ratio } else { 0.0 },
        params,
    });
    let meta = finish_config(&config)?;
    let graph = input.graph(true)?;

    let stats = graph::stats(&graph);
    let beta_c = epidemic::spreading_threshold(&stats).ok();
    let beta = match (args.beta, beta_c) {
        (Some(b), _) => b,
        (None, Some(bc)) => args.beta_mult * bc,
        (None, None) => {
            return Err(CliError::Runtime(
                "no epidemic threshold for this graph; pass --beta".into(),
            ))
        }
    };
    if !(0.0..=1.0).contains(&beta) {
        return Err(CliError::Usage(format!("beta {beta} out of range [0,1]")));
    }
    let beta2 = if hsir { args.beta2_ratio * beta } else { 0.0 };
    let params = EpidemicParams { beta, beta2, ..params };
    let ranking = method.rank(&graph, opts(&config))?;
    let seeds = epidemic::select_seeds(&ranking, args.seed_frac)?;
    let summary = if hsir {
        let cover = build_cover_capped(&graph, DEFAULT_MAX_CLIQUES)?;
        epidemic::simulate_hsir(&graph, &cover.triangle_faces(), &seeds, &params)?
    } else {
        epidemic::simulate_sir(&graph, &seeds, &params)?
    };
    let seed_labels: Vec<&str> = seeds.iter().map(|&v| graph.label(v)).collect();
    let json = output::epidemic_json(&meta, &summary, beta, beta2, beta_c, &seed_labels);
    let csv = output::epidemic_csv(&meta, &summary);
    let sink = Sink {
        dir: args.common.out.as_deref(),
    };
    let stem = if hsir { "hsir" } else { "sir" };
    let json_primary = args.common.format == Format::Json;
    sink.emit(&format!("{stem}.json"), &json, json_primary)?;
    sink.emit(&format!("{stem}.csv"), &csv, !json_primary)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("error: invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
