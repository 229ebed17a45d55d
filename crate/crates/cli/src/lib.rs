//! The `gmg` command line: GED between two graphs, set-median and
//! generalized median of a collection, and the SOD / classification
//! experiments on labeled datasets.

pub mod config;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gmg_core::eval::{run_classification, run_sod_experiment, ExperimentConfig, SampleSize};
use gmg_core::io::{load_collection, load_graphs, write_graph, DatasetDescriptor, EdgeMode};
use gmg_core::median::set_median;
use gmg_core::{compute_ged, compute_median, AttributedGraph, CostModel, Error, GedMethod};

pub use config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "gmg",
    version,
    about = "Generalized median graphs under graph edit distance"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Edit distance between two graphs (phase-2 solver settings).
    Ged {
        first: PathBuf,
        second: PathBuf,
        /// Solver; overrides the phase-2 method.
        #[arg(long)]
        method: Option<GedMethod>,
        #[command(flatten)]
        options: Options,
    },
    /// Collection member with the smallest sum of distances.
    SetMedian {
        /// Graph files (GXL or native); alternatively `--dataset`.
        files: Vec<PathBuf>,
        #[command(flatten)]
        options: Options,
    },
    /// Generalized median by block coordinate descent from the set-median.
    Median {
        files: Vec<PathBuf>,
        #[command(flatten)]
        options: Options,
    },
    /// Per-class SOD of set-median and generalized median over random samples.
    SodTable {
        #[command(flatten)]
        options: Options,
    },
    /// 1-NN classification with set-median, median and full training sets.
    Classify {
        #[command(flatten)]
        options: Options,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// TOML config file; flags take precedence over it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Collection index (CXL) file.
    #[arg(long, value_name = "FILE")]
    pub dataset: Option<PathBuf>,
    /// Only use graphs of this class.
    #[arg(long, value_name = "NAME")]
    pub class: Option<String>,
    /// GXL vertex attribute: a name for labels, `a,b,...` for vectors.
    #[arg(long, value_name = "NAMES")]
    pub vertex_attr: Option<String>,
    /// GXL edge attribute name, or `none`.
    #[arg(long, value_name = "NAME")]
    pub edge_attr: Option<String>,
    /// Cost constants, e.g. `c_vs=1,c_es=1,c_vi=3,c_vr=3,c_ei=3,c_er=3`.
    #[arg(long, value_name = "LIST")]
    pub cost: Option<String>,
    /// Set-median solver: exact, bipartite, ipfp, mbipartite, mipfp.
    #[arg(long, value_name = "METHOD")]
    pub phase1: Option<GedMethod>,
    /// Descent and classification solver.
    #[arg(long, value_name = "METHOD")]
    pub phase2: Option<GedMethod>,
    /// Starts of the multistart solvers (both phases).
    #[arg(long, value_name = "N")]
    pub multistart: Option<usize>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
    /// Per-class sample or train share: a count (`50`) or a fraction (`0.3`).
    #[arg(long, value_name = "X")]
    pub sample: Option<SampleSize>,
    #[arg(long, value_name = "N")]
    pub repeats: Option<usize>,
    /// Descent iteration limit.
    #[arg(long, value_name = "N")]
    pub max_iters: Option<usize>,
    /// Output file: median graph or CSV report.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Report zero times, making outputs reproducible byte for byte.
    #[arg(long)]
    pub no_timings: bool,
    /// Print the effective configuration as TOML and exit.
    #[arg(long)]
    pub dump_config: bool,
}

impl Options {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                RunConfig::from_toml(&text)?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = &self.dataset {
            c.dataset.path = Some(v.clone());
        }
        if let Some(v) = &self.class {
            c.dataset.class = Some(v.clone());
        }
        if let Some(v) = &self.vertex_attr {
            c.dataset.vertex_attr = Some(v.clone());
        }
        if let Some(v) = &self.edge_attr {
            c.dataset.edge_attr = Some(v.clone());
        }
        if let Some(v) = &self.cost {
            c.cost.apply(v)?;
        }
        if let Some(v) = self.phase1 {
            c.phase1.method = v;
        }
        if let Some(v) = self.phase2 {
            c.phase2.method = v;
        }
        if let Some(v) = self.multistart {
            c.phase1.multistart = v;
            c.phase2.multistart = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.threads {
            c.threads = Some(v);
        }
        if let Some(v) = self.sample {
            c.experiment.sample = v;
        }
        if let Some(v) = self.repeats {
            c.experiment.repeats = v;
        }
        if let Some(v) = self.max_iters {
            c.median.max_iters = v;
        }
        if let Some(v) = &self.out {
            c.out = Some(v.clone());
        }
        if self.no_timings {
            c.timings = false;
        }
        c.validate()?;
        Ok(c)
    }
}

/// Usage errors exit with 1, data errors with 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Data(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::ExactOrderCap { .. } | Error::InvalidCost(_) => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Data(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        })
    }
}

/// Parses `args` and runs the command, printing to stdout/stderr.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gmg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Runs a parsed command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let (options, method) = match &cli.command {
        Command::Ged {
            options, method, ..
        } => (options, *method),
        Command::SetMedian { options, .. }
        | Command::Median { options, .. }
        | Command::SodTable { options }
        | Command::Classify { options } => (options, None),
    };
    let mut config = options.resolve()?;
    if let Some(m) = method {
        config.phase2.method = m;
    }
    if options.dump_config {
        out.write_all(config.to_toml().as_bytes())?;
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let mut report = Vec::new();
    let result = pool.install(|| {
        let buf = &mut report;
        match &cli.command {
            Command::Ged { first, second, .. } => ged(&config, first, second, buf),
            Command::SetMedian { files, .. } => set_median_cmd(&config, files, buf),
            Command::Median { files, .. } => median_cmd(&config, files, buf),
            Command::SodTable { .. } => sod_table(&config, buf),
            Command::Classify { .. } => classify(&config, buf),
        }
    });
    out.write_all(&report)?;
    result
}

fn warn_if_not_metric(model: &CostModel) {
    if !model.is_metric_guaranteed() {
        log::warn!("edit costs are not guaranteed to satisfy the triangle inequality");
    }
}

fn secs(t: f64, config: &RunConfig) -> f64 {
    if config.timings {
        t
    } else {
        0.0
    }
}

fn paths(files: &[PathBuf]) -> Vec<&Path> {
    files.iter().map(PathBuf::as_path).collect()
}

fn load_dataset(config: &RunConfig) -> Result<(DatasetDescriptor, f64), CliError> {
    let path = config
        .dataset
        .path
        .as_ref()
        .ok_or_else(|| CliError::Usage("no dataset: pass --dataset".into()))?;
    let start = Instant::now();
    let mut ds = load_collection(path, &config.dataset.hints())?;
    if let Some(class) = &config.dataset.class {
        ds = ds.restrict_to_class(class)?;
    }
    let parse = start.elapsed().as_secs_f64();
    log::info!(
        "loaded {} graphs in {} classes in {parse:.3} s",
        ds.entries.len(),
        ds.class_count()
    );
    Ok((ds, parse))
}

fn dataset_model(config: &RunConfig, ds: &DatasetDescriptor) -> Result<CostModel, CliError> {
    let model = config
        .cost
        .model(ds.attribute_mode, ds.edge_mode == EdgeMode::Label)?;
    warn_if_not_metric(&model);
    Ok(model)
}

/// Graph files if given, otherwise the (optionally class-restricted) dataset.
fn load_input(
    config: &RunConfig,
    files: &[PathBuf],
) -> Result<(Vec<AttributedGraph>, CostModel), CliError> {
    if files.is_empty() {
        let (ds, _) = load_dataset(config)?;
        let model = dataset_model(config, &ds)?;
        return Ok((ds.graphs(), model));
    }
    let graphs = load_graphs(&paths(files), &config.dataset.hints())?;
    let kind = graphs.iter().find_map(AttributedGraph::vertex_kind);
    let model = config.cost.model(kind, true)?;
    warn_if_not_metric(&model);
    Ok((graphs, model))
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| {
        CliError::Data(Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

fn ged(
    config: &RunConfig,
    first: &Path,
    second: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (graphs, model) = load_input(config, &[first.to_path_buf(), second.to_path_buf()])?;
    let solver = config.phase2.solver(config.seed);
    let start = Instant::now();
    let r = compute_ged(&model, &graphs[0], &graphs[1], &solver)?;
    let elapsed = start.elapsed().as_secs_f64();
    writeln!(out, "method: {}", solver.method)?;
    writeln!(out, "cost: {}", r.cost)?;
    writeln!(out, "exact: {}", if r.is_exact { "yes" } else { "no" })?;
    writeln!(out, "transformation: {}", r.transformation)?;
    writeln!(
        out,
        "substitutions: {}",
        r.transformation.substitution_count()
    )?;
    if config.timings {
        writeln!(out, "time_s: {:.6}", secs(elapsed, config))?;
    }
    Ok(())
}

fn set_median_cmd(
    config: &RunConfig,
    files: &[PathBuf],
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (graphs, model) = load_input(config, files)?;
    let start = Instant::now();
    let sm = set_median(&model, &graphs, &config.phase1.solver(config.seed))?;
    let elapsed = start.elapsed().as_secs_f64();
    writeln!(out, "graphs: {}", graphs.len())?;
    writeln!(
        out,
        "set-median: {} ({})",
        sm.index + 1,
        graphs[sm.index].id()
    )?;
    writeln!(out, "sod: {:.6}", sm.sod)?;
    if config.timings {
        writeln!(out, "time_s: {elapsed:.6}")?;
    }
    if let Some(path) = &config.out {
        write_output(path, &write_graph(&graphs[sm.index]))?;
    }
    Ok(())
}

fn median_cmd(config: &RunConfig, files: &[PathBuf], out: &mut dyn Write) -> Result<(), CliError> {
    let (graphs, model) = load_input(config, files)?;
    let result = compute_median(&model, &graphs, &config.descent())?;
    writeln!(out, "graphs: {}", graphs.len())?;
    writeln!(
        out,
        "set-median: {} ({})",
        result.set_median_index + 1,
        graphs[result.set_median_index].id()
    )?;
    writeln!(out, "{:>9} {:>16} {:>8}", "iteration", "sod", "changed")?;
    for r in &result.trace {
        writeln!(
            out,
            "{:>9} {:>16.6} {:>8}",
            r.iteration, r.sod_upper, r.changed
        )?;
    }
    writeln!(
        out,
        "converged: {} after {} iterations",
        if result.converged { "yes" } else { "no" },
        result.iterations()
    )?;
    writeln!(out, "sod: {:.6}", result.sod())?;
    writeln!(
        out,
        "median order: {}, edges: {}",
        result.median.order(),
        result.median.edge_count()
    )?;
    if config.timings {
        writeln!(
            out,
            "time_s: phase1 {:.6}, phase2 {:.6}",
            result.phase1_time.as_secs_f64(),
            result.phase2_time.as_secs_f64()
        )?;
    }
    let native = write_graph(&result.median);
    match &config.out {
        Some(path) => write_output(path, &native)?,
        None => out.write_all(native.as_bytes())?,
    }
    Ok(())
}

fn experiment(config: &RunConfig, model: CostModel) -> ExperimentConfig {
    ExperimentConfig {
        sample: config.experiment.sample,
        repeats: config.experiment.repeats,
        seed: config.seed,
        model,
        descent: config.descent(),
    }
}

fn sod_table(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (ds, parse) = load_dataset(config)?;
    let model = dataset_model(config, &ds)?;
    let report = run_sod_experiment(&ds, &experiment(config, model))?;
    out.write_all(report.to_table(config.timings).as_bytes())?;
    writeln!(out, "parse_s: {:.6}", secs(parse, config))?;
    if report.violations() > 0 {
        log::warn!("{} rows with SOD GM above SOD SM", report.violations());
    }
    if let Some(path) = &config.out {
        write_output(path, &report.to_csv(config.timings))?;
    }
    Ok(())
}

fn classify(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (ds, parse) = load_dataset(config)?;
    let model = dataset_model(config, &ds)?;
    let report = run_classification(&ds, &experiment(config, model))?;
    writeln!(
        out,
        "train: {}, test: {}, classes: {}",
        report.train.len(),
        report.test.len(),
        ds.class_count()
    )?;
    out.write_all(report.to_table(config.timings).as_bytes())?;
    writeln!(out, "parse_s: {:.6}", secs(parse, config))?;
    if let Some(path) = &config.out {
        write_output(path, &report.to_csv(config.timings))?;
    }
    Ok(())
}
