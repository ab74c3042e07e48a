//! Command-line interface.
//!
//! Subcommands: `learn-graph`, `cliques`, `select`, `pipeline`, `simulate`,
//! `calibrate-belief`. Global flags `--seed`, `--config`, `--out`,
//! `--threads`, `--dump-config`. Exit codes: 0 success, 2 validation error,
//! 1 runtime error. `BVSSL_SEED` is consulted when neither the flag nor the
//! config file sets a seed.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cliques::maximal_cliques;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::graph::{calibrate_belief, run_graph_mcmc, PriorGraph};
use crate::io;
use crate::pipeline::{run_pipeline, run_selection_stage};
use crate::select::{fdr_threshold, predict_bma, Predictive, VsPosterior};
use crate::sim::{
    belief_sweep, prc_points, roc_points, run_replicate, CaseId, Method, SimCase, SimMetrics,
};

#[derive(Parser, Debug)]
#[command(
    name = "bvssl",
    about = "Two-stage Bayesian variable selection with structure learning",
    version
)]
struct Cli {
    /// RNG seed (overrides the config file and BVSSL_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Config file with `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the config file).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Replicate-level parallelism for `simulate`.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Print the effective config in canonical form and exit.
    #[arg(long, global = true)]
    dump_config: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the covariate graph and write edges.csv.
    LearnGraph(LearnGraphArgs),
    /// Enumerate maximal cliques of an estimated graph (edges.csv).
    Cliques(CliquesArgs),
    /// Run structured variable selection against a fixed clique set.
    Select(SelectArgs),
    /// Full two-stage analysis: graph, cliques, selection, prediction.
    Pipeline(PipelineArgs),
    /// Simulation benchmark.
    Simulate(SimulateArgs),
    /// Convert a confidence level into a belief value.
    CalibrateBelief(CalibrateArgs),
}

#[derive(Args, Debug)]
struct LearnGraphArgs {
    /// Covariate CSV (header row).
    #[arg(long)]
    data: PathBuf,
    /// Schema file: one `name,kind` line per column.
    #[arg(long)]
    schema: PathBuf,
    /// Prior graph edge list (`i j [kappa]`, 1-based).
    #[arg(long)]
    prior: Option<PathBuf>,
    /// Belief for prior edges without an explicit value.
    #[arg(long)]
    kappa: Option<f64>,
}

#[derive(Args, Debug)]
struct CliquesArgs {
    /// edges.csv produced by learn-graph.
    #[arg(long)]
    edges: PathBuf,
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    /// cliques.csv produced by the cliques subcommand.
    #[arg(long)]
    cliques: PathBuf,
    /// Optional test CSV (same schema; response column may be present).
    #[arg(long)]
    test: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    prior: Option<PathBuf>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    test: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Scenario: Ia, Ib, Ic, or Id.
    #[arg(long)]
    case: String,
    /// Covariate dimension (>= 24).
    #[arg(long, default_value_t = 24)]
    p: usize,
    #[arg(long, default_value_t = 5)]
    replicates: usize,
    /// Comma-separated methods: bvs-sl, prior-corrected, ssvs.
    #[arg(long, default_value = "bvs-sl")]
    methods: String,
    /// Belief for the prior-corrected method.
    #[arg(long, default_value_t = 50.0)]
    kappa: f64,
    /// Comma-separated belief grid; when given, also runs the belief sweep
    /// and writes belief_sweep.csv.
    #[arg(long)]
    belief_grid: Option<String>,
    /// Number of randomly flipped prior edges in the sweep.
    #[arg(long, default_value_t = 0)]
    misspecified_edges: usize,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    /// Desired prior mean of the edge weight, strictly inside (0,1).
    #[arg(long)]
    confidence: f64,
    /// 1 if the prior graph contains the edge, 0 otherwise.
    #[arg(long)]
    a0: u8,
}

/// Entry point used by the binary and by tests. Returns the process exit
/// code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_default_env()
        .format_timestamp(None)
        .try_init();

    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };

    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let config = effective_config(&cli)?;
    if cli.dump_config {
        print!("{}", config.dump());
        return Ok(());
    }
    let command = cli.command.ok_or_else(|| {
        Error::Config("a subcommand is required (try --help)".into())
    })?;
    let out_dir = PathBuf::from(&config.out_dir);
    match command {
        Command::LearnGraph(args) => learn_graph_cmd(&args, &config, &out_dir),
        Command::Cliques(args) => cliques_cmd(&args, &out_dir),
        Command::Select(args) => select_cmd(&args, &config, &out_dir),
        Command::Pipeline(args) => pipeline_cmd(&args, &config, &out_dir),
        Command::Simulate(args) => simulate_cmd(&args, &config, &out_dir),
        Command::CalibrateBelief(args) => calibrate_cmd(&args, &config),
    }
}

/// Defaults <- BVSSL_SEED <- config file <- CLI flags.
fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let file_sets_seed = cli
        .config
        .as_ref()
        .map(|path| {
            std::fs::read_to_string(path)
                .map(|text| {
                    text.lines().any(|l| {
                        l.split('#').next().unwrap_or("").trim().starts_with("seed")
                    })
                })
                .unwrap_or(false)
        })
        .unwrap_or(false);
    if let Some(seed) = cli.seed {
        config.seed = seed;
    } else if !file_sets_seed {
        if let Ok(env_seed) = std::env::var("BVSSL_SEED") {
            config.seed = env_seed
                .parse()
                .map_err(|_| Error::Config(format!("invalid BVSSL_SEED '{env_seed}'")))?;
        }
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.display().to_string();
    }
    if let Some(threads) = cli.threads {
        config.threads = threads;
    }
    config.validate()?;
    Ok(config)
}

fn prior_from_args(
    prior: &Option<PathBuf>,
    kappa_flag: Option<f64>,
    p: usize,
    config: &RunConfig,
) -> Result<PriorGraph> {
    let default_kappa = kappa_flag.unwrap_or(config.default_kappa);
    match prior {
        Some(path) => io::load_prior_graph(path, p, default_kappa, config.absent_kappa),
        None => Ok(PriorGraph::no_knowledge(p)),
    }
}

fn learn_graph_cmd(args: &LearnGraphArgs, config: &RunConfig, out_dir: &Path) -> Result<()> {
    let loaded = io::load_dataset(&args.data, &args.schema)?;
    let prior = prior_from_args(&args.prior, args.kappa, loaded.dataset.p(), config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (estimate, summary) = run_graph_mcmc(
        &loaded.dataset,
        &prior,
        &config.shrinkage_hypers(),
        &config.mcmc(),
        config.n_mc,
        &mut rng,
    )?;
    io::write_edges_csv(&out_dir.join("edges.csv"), &estimate)?;
    let p = loaded.dataset.p();
    let edges: usize = (0..p)
        .map(|i| ((i + 1)..p).filter(|&j| estimate.adjacency[(i, j)] == 1).count())
        .sum();
    println!(
        "graph: {p} nodes, {edges} edges after {} iterations ({} burn-in); wrote {}",
        summary.iterations,
        summary.burn_in,
        out_dir.join("edges.csv").display()
    );
    Ok(())
}

fn cliques_cmd(args: &CliquesArgs, out_dir: &Path) -> Result<()> {
    let adjacency = io::read_edges_csv(&args.edges)?;
    let cliques = maximal_cliques(&adjacency)?;
    io::write_cliques_csv(&out_dir.join("cliques.csv"), &cliques)?;
    println!(
        "{} maximal cliques over {} nodes; wrote {}",
        cliques.q(),
        cliques.p(),
        out_dir.join("cliques.csv").display()
    );
    Ok(())
}

/// Writes the selection outputs shared by `select` and `pipeline`.
fn write_selection_outputs(
    out_dir: &Path,
    posterior: &VsPosterior,
    predictions: &[Predictive],
    config: &RunConfig,
) -> Result<()> {
    io::write_inclusion_csv(&out_dir.join("inclusion.csv"), posterior)?;
    io::write_coefficients_csv(&out_dir.join("coefficients.csv"), posterior)?;
    io::write_predictions_csv(&out_dir.join("predictions.csv"), predictions)?;
    let selected = fdr_threshold(&posterior.var_incl, config.fdr_alpha);
    io::write_fdr_csv(
        &out_dir.join("fdr_selected.csv"),
        &selected,
        &posterior.var_incl,
        config.fdr_alpha,
    )?;
    Ok(())
}

/// Loads the training data (standardized) and an optional raw test file
/// transformed with the training parameters.
fn load_train_test(
    data: &Path,
    schema: &Path,
    test: &Option<PathBuf>,
) -> Result<(io::LoadedDataset, Vec<f64>, Option<crate::dataset::MixedDataset>)> {
    let train = io::load_dataset(data, schema)?;
    let y = train.response.clone().ok_or_else(|| {
        Error::Ingestion("the schema must declare a response column".into())
    })?;
    let test = match test {
        Some(path) => {
            let raw = io::load_dataset_raw(path, schema)?;
            Some(raw.dataset.apply_standardization(&train.standardization)?)
        }
        None => None,
    };
    Ok((train, y, test))
}

fn select_cmd(args: &SelectArgs, config: &RunConfig, out_dir: &Path) -> Result<()> {
    let (train, y, test) = load_train_test(&args.data, &args.schema, &args.test)?;
    let cliques = io::read_cliques_csv(&args.cliques, train.dataset.p())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pipeline_config = config.pipeline_config();
    let (posterior, predictions) = run_selection_stage(
        &train.dataset,
        &y,
        &cliques,
        test.as_ref(),
        &pipeline_config,
        &mut rng,
    )?;
    let predictions = match predictions {
        Some(p) => p,
        None => predict_training_rows(&train.dataset, &posterior, &mut rng)?,
    };
    write_selection_outputs(out_dir, &posterior, &predictions, config)?;
    println!(
        "selection over {} cliques done; outputs in {}",
        cliques.q(),
        out_dir.display()
    );
    Ok(())
}

fn predict_training_rows<R: rand::Rng + ?Sized>(
    dataset: &crate::dataset::MixedDataset,
    posterior: &VsPosterior,
    rng: &mut R,
) -> Result<Vec<Predictive>> {
    let mut preds = Vec::with_capacity(dataset.n());
    for i in 0..dataset.n() {
        let row: Vec<f64> = (0..dataset.p()).map(|j| dataset.value(i, j)).collect();
        preds.push(predict_bma(posterior, &row, rng)?);
    }
    Ok(preds)
}

fn pipeline_cmd(args: &PipelineArgs, config: &RunConfig, out_dir: &Path) -> Result<()> {
    let (train, y, test) = load_train_test(&args.data, &args.schema, &args.test)?;
    let prior = prior_from_args(&args.prior, args.kappa, train.dataset.p(), config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pipeline_config = config.pipeline_config();
    let result = run_pipeline(
        &train.dataset,
        &y,
        &prior,
        test.as_ref(),
        &pipeline_config,
        &mut rng,
    )?;
    io::write_edges_csv(&out_dir.join("edges.csv"), &result.graph)?;
    io::write_cliques_csv(&out_dir.join("cliques.csv"), &result.cliques)?;
    let predictions = match result.predictions {
        Some(p) => p,
        None => predict_training_rows(&train.dataset, &result.posterior, &mut rng)?,
    };
    write_selection_outputs(out_dir, &result.posterior, &predictions, config)?;
    println!(
        "pipeline done: {} cliques, outputs in {}",
        result.cliques.q(),
        out_dir.display()
    );
    Ok(())
}

fn parse_methods(spec: &str, kappa: f64) -> Result<Vec<Method>> {
    let mut methods = Vec::new();
    for name in spec.split(',') {
        match name.trim().to_ascii_lowercase().as_str() {
            "bvs-sl" | "bvssl" => methods.push(Method::BvsSl),
            "prior-corrected" | "prior" => methods.push(Method::PriorCorrected { kappa }),
            "ssvs" => methods.push(Method::Ssvs),
            other => {
                return Err(Error::Config(format!(
                    "unknown method '{other}' (expected bvs-sl, prior-corrected, or ssvs)"
                )))
            }
        }
    }
    if methods.is_empty() {
        return Err(Error::Config("no methods requested".into()));
    }
    Ok(methods)
}

fn simulate_cmd(args: &SimulateArgs, config: &RunConfig, out_dir: &Path) -> Result<()> {
    let case_id = CaseId::parse(&args.case)?;
    let case = SimCase::new(case_id, args.p)?;
    let methods = parse_methods(&args.methods, args.kappa)?;
    if args.replicates == 0 {
        return Err(Error::Config("need at least one replicate".into()));
    }
    let pipeline_config = config.pipeline_config();

    // Replicates run in parallel; output order stays (method, replicate).
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut jobs: Vec<(Method, usize)> = Vec::new();
    for method in &methods {
        for replicate in 0..args.replicates {
            jobs.push((*method, replicate));
        }
    }
    let results: Vec<Result<(SimMetrics, Vec<(f64, f64)>, Vec<(f64, f64)>)>> = pool.install(|| {
        use rayon::prelude::*;
        jobs.par_iter()
            .map(|(method, replicate)| {
                let (metrics, output) =
                    run_replicate(method, &case, &pipeline_config, config.seed, *replicate)?;
                let roc = roc_points(&output.scores, &case.gamma_truth)?;
                let prc = prc_points(&output.scores, &case.gamma_truth)?;
                Ok((metrics, roc, prc))
            })
            .collect()
    });

    let mut metric_rows = Vec::new();
    let mut roc_rows = Vec::new();
    let mut prc_rows = Vec::new();
    for ((method, replicate), result) in jobs.iter().zip(results) {
        let (metrics, roc, prc) = result?;
        let label = method.label();
        metric_rows.push((case_id.label().to_string(), replicate + 1, label.clone(), metrics));
        roc_rows.push((case_id.label().to_string(), replicate + 1, label.clone(), roc));
        prc_rows.push((case_id.label().to_string(), replicate + 1, label, prc));
    }
    io::write_metrics_csv(&out_dir.join("metrics.csv"), &metric_rows)?;
    io::write_points_csv(&out_dir.join("roc_points.csv"), ("fpr", "tpr"), &roc_rows)?;
    io::write_points_csv(
        &out_dir.join("prc_points.csv"),
        ("recall", "precision"),
        &prc_rows,
    )?;

    if let Some(grid) = &args.belief_grid {
        let kappas: Vec<f64> = grid
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("invalid belief value '{s}'")))
            })
            .collect::<Result<_>>()?;
        let rows = belief_sweep(
            &case,
            &kappas,
            args.replicates,
            args.misspecified_edges,
            &pipeline_config,
            config.seed,
        )?;
        io::write_belief_sweep_csv(&out_dir.join("belief_sweep.csv"), &rows)?;
    }

    println!(
        "simulated case {} (p={}) x {} replicates x {} method(s); outputs in {}",
        case_id.label(),
        args.p,
        args.replicates,
        methods.len(),
        out_dir.display()
    );
    Ok(())
}

fn calibrate_cmd(args: &CalibrateArgs, config: &RunConfig) -> Result<()> {
    if args.a0 > 1 {
        return Err(Error::Config("--a0 must be 0 or 1".into()));
    }
    let kappa = calibrate_belief(args.confidence, args.a0 == 1, config.a_p, config.b_p)?;
    println!("{kappa:.6}");
    Ok(())
}
