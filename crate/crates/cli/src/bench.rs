//! Benchmark harness: a grid of (instance, strategy) cells solved with the
//! LP-mode column generation driver. Emits `results.csv` (one row per cell)
//! and `summary.txt` (solved counts and mean wall time per strategy and
//! capacity multiplier, unsolved runs charged the cutoff time).

use crate::{load_instance, parse_pricing, AcoArgs};
use anyhow::{anyhow, bail, Context, Result};
use bppc::cg::{self, CgConfig, CgStatus};
use bppc::instance::{
    apply_capacity_multiplier, generate_conflicts, ConflictGraph, GenConfig, Instance,
};
use bppc::ml;
use bppc::rng::Xoshiro256;
use clap::Args;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Args)]
pub struct BenchArgs {
    /// Instance files to benchmark; leave empty to generate a grid.
    #[arg(long, num_args = 0..)]
    instances: Vec<PathBuf>,
    /// Grid mode: item counts, e.g. 20,40,60.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Grid mode: instances generated per size.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Grid mode: conflict density.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Grid mode: base capacity.
    #[arg(long, default_value_t = 150)]
    cap: u64,
    /// Grid mode: weight distribution.
    #[arg(long, default_value = "uniform:20:100")]
    weights: String,
    /// Capacity multipliers to run, e.g. 1,2,5,15.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    multipliers: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Pricing strategies, e.g. exact,exact-pool,aco,mlph,mlaco-eta.
    #[arg(long, value_delimiter = ',', default_value = "exact")]
    strategies: Vec<String>,
    /// Model file for ML strategies.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Per-cell cutoff in seconds; unsolved cells are charged this value.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[command(flatten)]
    aco: AcoArgs,
    /// Worker threads (one cell per worker at a time). Wall times are
    /// measured under this concurrency level.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory for results.csv and summary.txt.
    #[arg(long, default_value = "bench_out")]
    out: PathBuf,
}

struct Row {
    instance: String,
    strategy: String,
    multiplier: u64,
    status: &'static str,
    lp_objective: f64,
    wall_s: f64,
    iters: usize,
    cols: usize,
    fallbacks: usize,
}

fn base_instances(args: &BenchArgs) -> Result<Vec<Instance>> {
    if !args.instances.is_empty() {
        let mut out = Vec::new();
        for p in &args.instances {
            out.push(load_instance(p, None, None, args.seed, 1)?);
        }
        return Ok(out);
    }
    if args.sizes.is_empty() {
        bail!("bench needs --instances files or --sizes for grid generation");
    }
    let (lo, hi) = match args.weights.split(':').collect::<Vec<_>>().as_slice() {
        ["uniform", lo, hi] => (
            lo.parse::<u64>().context("weight spec")?,
            hi.parse::<u64>().context("weight spec")?,
        ),
        _ => bail!("unsupported weight spec {:?}", args.weights),
    };
    if hi > args.cap {
        bail!("max weight {hi} exceeds base capacity {}", args.cap);
    }
    let mut master = Xoshiro256::seed_from_u64(args.seed);
    let mut out = Vec::new();
    for &n in &args.sizes {
        for k in 0..args.count {
            let derived = master.next_u64();
            let mut rng = Xoshiro256::seed_from_u64(derived);
            let weights: Vec<u64> = (0..n).map(|_| rng.gen_range_inclusive(lo, hi)).collect();
            let name = format!("n{n}_s{k}");
            let base = Instance::new(name, args.cap, weights, ConflictGraph::empty(n))
                .map_err(|e| anyhow!("{e}"))?;
            out.push(generate_conflicts(
                &base,
                &GenConfig::new(args.density, derived, 1),
            ));
        }
    }
    Ok(out)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let bases = base_instances(args)?;
    let model = match &args.model {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {p:?}"))?;
            Some(ml::model_from_text(&text).map_err(|e| anyhow!("{e}"))?)
        }
        None => None,
    };
    let strategies: Vec<(String, cg::PricingKind)> = args
        .strategies
        .iter()
        .map(|s| parse_pricing(s).map(|k| (s.clone(), k)))
        .collect::<Result<_>>()?;
    for (name, kind) in &strategies {
        if kind.needs_model() && model.is_none() {
            bail!("strategy {name} requires --model <file>");
        }
    }

    // One cell per (instance, multiplier, strategy), enumerated
    // deterministically; workers pull cells off a shared counter.
    struct Cell<'a> {
        idx: usize,
        instance: Instance,
        strategy: &'a str,
        kind: cg::PricingKind,
        multiplier: u64,
    }
    let mut cells: Vec<Cell> = Vec::new();
    for base in &bases {
        for &m in &args.multipliers {
            let scaled = apply_capacity_multiplier(base, m);
            for (name, kind) in &strategies {
                cells.push(Cell {
                    idx: cells.len(),
                    instance: scaled.clone(),
                    strategy: name,
                    kind: *kind,
                    multiplier: m,
                });
            }
        }
    }

    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<(usize, Row)>> = Mutex::new(Vec::with_capacity(cells.len()));
    let failures: Mutex<Vec<String>> = Mutex::new(Vec::new());
    let jobs = args.jobs.max(1);

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let cell = &cells[i];
                let cfg = CgConfig {
                    pricing: cell.kind,
                    time_limit: args.time_limit,
                    rng_seed: args
                        .seed
                        .wrapping_add((cell.idx as u64).wrapping_mul(0x9e3779b97f4a7c15)),
                    aco: args.aco.to_config(),
                    model: model.clone(),
                    max_cols_per_iter: None,
                    exact_node_budget: None,
                };
                match cg::run_cg(&cell.instance, &cfg) {
                    Ok(r) => {
                        let row = Row {
                            instance: cell.instance.name.clone(),
                            strategy: cell.strategy.to_string(),
                            multiplier: cell.multiplier,
                            status: match r.status {
                                CgStatus::Optimal => "optimal",
                                CgStatus::TimeLimit => "time_limit",
                            },
                            lp_objective: r.lp_objective,
                            wall_s: r.wall_time,
                            iters: r.iterations,
                            cols: r.columns_generated,
                            fallbacks: r.exact_fallback_calls,
                        };
                        rows.lock().unwrap().push((cell.idx, row));
                    }
                    Err(e) => {
                        failures.lock().unwrap().push(format!(
                            "{} x {}: {e}",
                            cell.instance.name, cell.strategy
                        ));
                    }
                }
            });
        }
    });

    for f in failures.lock().unwrap().iter() {
        eprintln!("warning: cell failed: {f}");
    }

    let mut rows = rows.into_inner().unwrap();
    rows.sort_by_key(|(idx, _)| *idx);
    let rows: Vec<Row> = rows.into_iter().map(|(_, r)| r).collect();

    std::fs::create_dir_all(&args.out)?;
    let csv_path = args.out.join("results.csv");
    let mut csv =
        String::from("instance,strategy,multiplier,status,lp_objective,wall_s,iters,cols,fallbacks\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{:.3},{},{},{}\n",
            r.instance,
            r.strategy,
            r.multiplier,
            r.status,
            r.lp_objective,
            r.wall_s,
            r.iters,
            r.cols,
            r.fallbacks
        ));
    }
    std::fs::write(&csv_path, csv)?;

    // Summary: solved counts and mean wall time per (strategy, multiplier),
    // charging unsolved runs the cutoff.
    let mut groups: BTreeMap<(String, u64), (usize, usize, f64)> = BTreeMap::new();
    for r in &rows {
        let e = groups
            .entry((r.strategy.clone(), r.multiplier))
            .or_insert((0, 0, 0.0));
        e.1 += 1;
        if r.status == "optimal" {
            e.0 += 1;
            e.2 += r.wall_s;
        } else {
            e.2 += args.time_limit;
        }
    }
    let mut summary = String::new();
    summary.push_str(&format!(
        "cells={} jobs={} time_limit={}s (mean charges cutoff for unsolved)\n",
        rows.len(),
        jobs,
        args.time_limit
    ));
    summary.push_str(&format!(
        "{:<16} {:>10} {:>8} {:>8} {:>12}\n",
        "strategy", "multiplier", "solved", "total", "mean_wall_s"
    ));
    for ((strategy, multiplier), (solved, total, time)) in &groups {
        summary.push_str(&format!(
            "{:<16} {:>10} {:>8} {:>8} {:>12.3}\n",
            strategy,
            multiplier,
            solved,
            total,
            time / *total as f64
        ));
    }
    std::fs::write(args.out.join("summary.txt"), &summary)?;
    print!("{summary}");
    println!("results: {}", csv_path.display());
    Ok(())
}
