//! Command-line front end. Subcommands: `gen` (instance files), `train`
//! (model file from training instances), `solve` (one instance, LP or IP
//! mode), `bench` (a grid of instances and strategies into results.csv).
//!
//! Exit codes: 0 success, 1 solver/runtime error, 2 usage error.

mod bench;

use anyhow::{anyhow, bail, Context, Result};
use bppc::bnp;
use bppc::cg::{self, CgConfig, CgStatus, PricingKind};
use bppc::instance::{
    apply_capacity_multiplier, generate_conflicts, parse_instance, serialize_conflicts,
    serialize_instance, GenConfig, Instance,
};
use bppc::ml;
use bppc::rng::Xoshiro256;
use bppc::sampling::{AcoConfig, StrategyKind};
use bppc::simplex;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bppc", version, about = "Bin packing with conflicts: column generation and branch-and-price")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instance files (weights plus a random conflict graph).
    Gen(GenArgs),
    /// Collect training data with exact pricing and train the linear model.
    Train(TrainArgs),
    /// Solve one instance: LP relaxation by column generation or integer
    /// optimum by branch-and-price.
    Solve(SolveArgs),
    /// Run a grid of (instance, strategy) cells and emit results.csv plus a
    /// summary table.
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Items per instance.
    #[arg(long)]
    items: usize,
    /// Bin capacity before the multiplier.
    #[arg(long, default_value_t = 1000)]
    cap: u64,
    /// Weight distribution, e.g. uniform:20:100.
    #[arg(long, default_value = "uniform:20:100")]
    weights: String,
    /// Conflict graph density in [0,1].
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Capacity multiplier applied to --cap.
    #[arg(long, default_value_t = 1)]
    multiplier: u64,
    /// Master seed; each file derives its own seed from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of instances.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// File name prefix.
    #[arg(long, default_value = "inst")]
    prefix: String,
}

#[derive(Args)]
struct TrainArgs {
    /// Training instance files (.bpp; a sibling .conf is picked up).
    #[arg(long, num_args = 1.., required = true)]
    instances: Vec<PathBuf>,
    /// Output model file.
    #[arg(long, default_value = "model.txt")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-instance CG budget in seconds; instances that exceed it are
    /// skipped with a warning.
    #[arg(long, default_value_t = 300.0)]
    time_limit: f64,
    /// Also dump the collected training data as CSV.
    #[arg(long)]
    dump_data: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Conflict edge list; defaults to the instance path with extension
    /// .conf when that file exists.
    #[arg(long)]
    conflicts: Option<PathBuf>,
    /// Generate conflicts with this density when no conflict file is given.
    #[arg(long)]
    conflict_density: Option<f64>,
    /// lp = column generation bound, ip = branch-and-price.
    #[arg(long, default_value = "lp")]
    mode: String,
    /// exact | exact-pool | aco | mlph | mlaco-eta | mlaco-heu-eta | mlaco-tau
    #[arg(long, default_value = "exact")]
    pricing: String,
    /// Model file (required by mlph and the mlaco variants).
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, default_value_t = 1800.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Capacity multiplier.
    #[arg(long, default_value_t = 1)]
    multiplier: u64,
    #[command(flatten)]
    aco: AcoArgs,
    /// Cap on columns added per CG iteration.
    #[arg(long)]
    max_cols_per_iter: Option<usize>,
    /// Node cap for branch-and-price.
    #[arg(long)]
    node_limit: Option<usize>,
    /// Write the per-iteration CG log (CSV).
    #[arg(long)]
    iter_log: Option<PathBuf>,
    /// Write the branch-and-price node log (CSV).
    #[arg(long)]
    node_log: Option<PathBuf>,
    /// Dump the final restricted master LP in plain text.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
    /// Write the result JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct AcoArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Evaporation coefficient: this share of pheromone evaporates per
    /// iteration.
    #[arg(long, default_value_t = 0.95)]
    pub rho: f64,
    /// Reinterpret --rho as the retained share instead of the evaporated one.
    #[arg(long, default_value_t = false)]
    pub rho_is_persistence: bool,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 10)]
    pub aco_iters: usize,
    /// Samples per sweep; defaults to the item count.
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long, default_value_t = -1e-6, allow_hyphen_values = true)]
    pub rc_threshold: f64,
    /// Disable diversity-aware per-item seeding.
    #[arg(long, default_value_t = false)]
    pub no_diversify: bool,
}

impl AcoArgs {
    pub fn to_config(&self) -> AcoConfig {
        AcoConfig {
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            rho_is_persistence: self.rho_is_persistence,
            lambda: self.lambda,
            iterations: self.aco_iters,
            population: self.population,
            rc_threshold: self.rc_threshold,
            diversify: !self.no_diversify,
        }
    }
}

pub fn parse_pricing(s: &str) -> Result<PricingKind> {
    Ok(match s {
        "exact" => PricingKind::ExactSingle,
        "exact-pool" => PricingKind::ExactPool,
        "aco" => PricingKind::Heuristic(StrategyKind::PlainAco),
        "mlph" => PricingKind::Heuristic(StrategyKind::Mlph),
        "mlaco-eta" => PricingKind::Heuristic(StrategyKind::MlacoPredictedEta),
        "mlaco-heu-eta" => PricingKind::Heuristic(StrategyKind::MlacoPredHeuEta),
        "mlaco-tau" => PricingKind::Heuristic(StrategyKind::MlacoPredictedTau),
        other => bail!(
            "unknown pricing {other:?} (expected exact, exact-pool, aco, mlph, mlaco-eta, mlaco-heu-eta, mlaco-tau)"
        ),
    })
}

fn parse_weight_spec(spec: &str) -> Result<(u64, u64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["uniform", lo, hi] => {
            let lo: u64 = lo.parse().context("weight spec lower bound")?;
            let hi: u64 = hi.parse().context("weight spec upper bound")?;
            if lo == 0 || lo > hi {
                bail!("weight spec needs 0 < lo <= hi, got {spec:?}");
            }
            Ok((lo, hi))
        }
        _ => bail!("unsupported weight spec {spec:?} (expected uniform:LO:HI)"),
    }
}

/// Loads an instance file together with its conflict edges: an explicit
/// --conflicts path, else a sibling .conf file, else G(n, density) when a
/// density is given, else no conflicts.
pub fn load_instance(
    path: &Path,
    conflicts: Option<&Path>,
    conflict_density: Option<f64>,
    seed: u64,
    multiplier: u64,
) -> Result<Instance> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string());
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    let sibling = path.with_extension("conf");
    let conflict_path = match conflicts {
        Some(p) => Some(p.to_path_buf()),
        None if sibling.is_file() => Some(sibling),
        None => None,
    };
    let conflict_text = match &conflict_path {
        Some(p) => Some(std::fs::read_to_string(p).with_context(|| format!("reading {p:?}"))?),
        None => None,
    };
    let mut instance = parse_instance(&name, &text, conflict_text.as_deref())?;
    if conflict_text.is_none() {
        if let Some(density) = conflict_density {
            instance = generate_conflicts(&instance, &GenConfig::new(density, seed, 1));
        }
    }
    if multiplier > 1 {
        instance = apply_capacity_multiplier(&instance, multiplier);
    }
    Ok(instance)
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    let (lo, hi) = parse_weight_spec(&args.weights)?;
    let capacity = args.cap * args.multiplier;
    if hi > capacity {
        bail!("max weight {hi} exceeds capacity {capacity}");
    }
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {:?}", args.out))?;
    let mut master = Xoshiro256::seed_from_u64(args.seed);
    for k in 0..args.count {
        let derived = master.next_u64();
        let mut rng = Xoshiro256::seed_from_u64(derived);
        let weights: Vec<u64> = (0..args.items)
            .map(|_| rng.gen_range_inclusive(lo, hi))
            .collect();
        let name = if args.count == 1 {
            args.prefix.clone()
        } else {
            format!("{}{k:03}", args.prefix)
        };
        let base = Instance::new(
            name.clone(),
            args.cap,
            weights,
            bppc::instance::ConflictGraph::empty(args.items),
        )
        .map_err(|e| anyhow!("{e}"))?;
        let with_conflicts = generate_conflicts(&base, &GenConfig::new(args.density, derived, 1));
        let scaled = apply_capacity_multiplier(&with_conflicts, args.multiplier);
        let bpp = args.out.join(format!("{name}.bpp"));
        let conf = args.out.join(format!("{name}.conf"));
        std::fs::write(&bpp, serialize_instance(&scaled))?;
        std::fs::write(&conf, serialize_conflicts(&scaled))?;
        println!(
            "{} items={} capacity={} edges={}",
            bpp.display(),
            scaled.n_items(),
            scaled.capacity,
            scaled.conflicts.edge_count()
        );
    }
    Ok(())
}

fn cmd_train(args: &TrainArgs) -> Result<()> {
    let mut instances = Vec::new();
    for path in &args.instances {
        instances.push(load_instance(path, None, None, 0, 1)?);
    }
    let report = ml::collect_training_data(&instances, args.seed, args.time_limit);
    for warn in &report.skipped {
        eprintln!("warning: skipped {warn}");
    }
    if let Some(path) = &args.dump_data {
        std::fs::write(path, ml::training_data_csv(&report.examples))?;
        println!("training data written to {}", path.display());
    }
    let (model, stats) = ml::train_svm(&report.examples).map_err(|e| anyhow!("{e}"))?;
    std::fs::write(&args.out, ml::model_to_text(&model))?;
    println!(
        "examples={} positives={} negatives={} positive_weight={:.3}",
        report.examples.len(),
        stats.n_positive,
        stats.n_negative,
        stats.positive_weight
    );
    println!(
        "train_accuracy={:.4} platt_converged={} model={}",
        stats.train_accuracy,
        stats.platt_converged,
        args.out.display()
    );
    Ok(())
}

fn load_model(path: Option<&Path>, pricing: PricingKind) -> Result<Option<ml::LinearModel>> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {p:?}"))?;
            Ok(Some(ml::model_from_text(&text).map_err(|e| anyhow!("{e}"))?))
        }
        None if pricing.needs_model() => {
            bail!("pricing strategy requires --model <file>")
        }
        None => Ok(None),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let pricing = parse_pricing(&args.pricing)?;
    let instance = load_instance(
        &args.instance,
        args.conflicts.as_deref(),
        args.conflict_density,
        args.seed,
        args.multiplier,
    )?;
    let model = load_model(args.model.as_deref(), pricing)?;
    let cfg = CgConfig {
        pricing,
        time_limit: args.time_limit,
        rng_seed: args.seed,
        aco: args.aco.to_config(),
        model,
        max_cols_per_iter: args.max_cols_per_iter,
        exact_node_budget: None,
    };
    let config_echo = json!({
        "instance": instance.name,
        "n_items": instance.n_items(),
        "capacity": instance.capacity,
        "edges": instance.conflicts.edge_count(),
        "mode": args.mode,
        "pricing": args.pricing,
        "multiplier": args.multiplier,
        "time_limit": args.time_limit,
        "seed": args.seed,
        "alpha": args.aco.alpha,
        "beta": args.aco.beta,
        "rho": args.aco.rho,
        "lambda": args.aco.lambda,
        "aco_iters": args.aco.aco_iters,
        "population": args.aco.population,
        "rc_threshold": args.aco.rc_threshold,
        "diversify": !args.aco.no_diversify,
    });

    let output = match args.mode.as_str() {
        "lp" => {
            let result = cg::run_cg(&instance, &cfg).map_err(|e| anyhow!("{e}"))?;
            if let Some(path) = &args.iter_log {
                std::fs::write(path, cg::iteration_log_csv(&result.iteration_log))?;
            }
            if let Some(path) = &args.dump_lp {
                std::fs::write(
                    path,
                    simplex::format_lp(
                        &result.final_columns,
                        instance.n_items(),
                        &result.final_solution,
                    ),
                )?;
            }
            json!({
                "config": config_echo,
                "result": {
                    "status": match result.status {
                        CgStatus::Optimal => "optimal",
                        CgStatus::TimeLimit => "time_limit",
                    },
                    "lp_objective": result.lp_objective,
                    "iterations": result.iterations,
                    "columns_generated": result.columns_generated,
                    "exact_fallback_calls": result.exact_fallback_calls,
                    "wall_time": result.wall_time,
                }
            })
        }
        "ip" => {
            let result = bnp::run_bnp(&instance, &cfg, args.node_limit);
            if let Some(path) = &args.node_log {
                std::fs::write(path, bnp::node_log_csv(&result.node_log))?;
            }
            json!({
                "config": config_echo,
                "result": {
                    "status": match result.status {
                        bnp::BnpStatus::Optimal => "optimal",
                        bnp::BnpStatus::TimeLimit => "time_limit",
                    },
                    "bins": result.incumbent_value,
                    "patterns": result.incumbent_patterns,
                    "global_lower_bound": result.global_lower_bound,
                    "gap_percent": result.gap_percent,
                    "nodes_explored": result.nodes_explored,
                }
            })
        }
        other => bail!("unknown mode {other:?} (expected lp or ip)"),
    };

    let text = serde_json::to_string_pretty(&output)?;
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Train(args) => cmd_train(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => bench::cmd_bench(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
