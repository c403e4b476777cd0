//! Column generation driver: initialize a feasible restricted master problem,
//! then iterate solve-RMP / price / add-columns until no pattern prices out
//! negative. Heuristic pricers fall back to the exact solver both to keep
//! making progress and to certify optimality at the end.

use crate::instance::{validate_pattern, Instance};
use crate::ml::LinearModel;
use crate::pricing::{
    self, NodeConstraints, PricingProblem, PricingSolution, SearchBudget,
};
use crate::rng::Xoshiro256;
use crate::sampling::{self, AcoConfig, StrategyKind};
use crate::simplex::{self, BasisToken, Column, LpSolution, LpStatus};
use std::collections::HashSet;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Tolerance below which a reduced cost counts as negative.
pub const RC_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PricingKind {
    /// Exact pricer, add only the optimal column.
    ExactSingle,
    /// Exact pricer, add the whole solution pool.
    ExactPool,
    /// Heuristic pricer with exact fallback.
    Heuristic(StrategyKind),
}

impl PricingKind {
    pub fn needs_model(self) -> bool {
        matches!(self, PricingKind::Heuristic(k) if k.needs_model())
    }
}

#[derive(Debug, Clone)]
pub struct CgConfig {
    pub pricing: PricingKind,
    /// Wall-clock budget in seconds.
    pub time_limit: f64,
    pub rng_seed: u64,
    pub aco: AcoConfig,
    pub model: Option<LinearModel>,
    /// Cap on columns added per iteration (most negative reduced cost first);
    /// `None` adds everything the pricer returns.
    pub max_cols_per_iter: Option<usize>,
    /// Optional node budget for each exact pricing call.
    pub exact_node_budget: Option<u64>,
}

impl Default for CgConfig {
    fn default() -> Self {
        CgConfig {
            pricing: PricingKind::ExactSingle,
            time_limit: 1800.0,
            rng_seed: 0,
            aco: AcoConfig::default(),
            model: None,
            max_cols_per_iter: None,
            exact_node_budget: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Optimal,
    TimeLimit,
}

#[derive(Debug, Clone)]
pub struct CgIterRecord {
    pub iteration: usize,
    pub lp_objective: f64,
    pub columns_added: usize,
    pub min_reduced_cost: f64,
    pub elapsed: f64,
}

#[derive(Debug, Clone)]
pub struct CgResult {
    pub lp_objective: f64,
    pub iterations: usize,
    pub columns_generated: usize,
    pub exact_fallback_calls: usize,
    pub wall_time: f64,
    pub status: CgStatus,
    pub final_columns: Vec<Column>,
    /// Primal/dual solution over `final_columns` from the last RMP solve.
    pub final_solution: LpSolution,
    pub iteration_log: Vec<CgIterRecord>,
}

#[derive(Debug, Error)]
pub enum CgError {
    #[error("pricing strategy requires a model but none was configured")]
    MissingModel,
    #[error("seed columns leave item {0} uncovered")]
    UncoveredItem(usize),
    #[error(transparent)]
    Strategy(#[from] sampling::StrategyError),
}

/// Hook invoked after every proven-optimal exact pricing solve; used by the
/// training-data collector.
pub trait PricingObserver {
    fn on_exact_pricing(
        &mut self,
        iteration: usize,
        problem: &PricingProblem,
        optimal: &PricingSolution,
    );
}

/// Deduplicating column pool. Ids are assigned in insertion order.
#[derive(Debug, Clone, Default)]
pub struct ColumnPool {
    columns: Vec<Column>,
    seen: HashSet<Vec<usize>>,
}

impl ColumnPool {
    pub fn new() -> Self {
        ColumnPool::default()
    }

    /// Adds a pattern unless an identical item set is already pooled.
    pub fn add(&mut self, mut items: Vec<usize>) -> bool {
        items.sort_unstable();
        items.dedup();
        if self.seen.contains(&items) {
            return false;
        }
        self.seen.insert(items.clone());
        let id = self.columns.len() as u64;
        self.columns.push(Column { id, items });
        true
    }

    pub fn contains(&self, items: &[usize]) -> bool {
        self.seen.contains(items)
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }
}

/// Random feasible patterns until every item is covered; any item still
/// uncovered after `n_items` sampling attempts gets its singleton pattern.
/// The returned pool always makes the RMP feasible.
pub fn init_rmp(instance: &Instance, rng: &mut Xoshiro256) -> Vec<Column> {
    let n = instance.n_items();
    let problem = PricingProblem::from_duals(instance, &vec![0.0; n]);
    let mut pool = ColumnPool::new();
    let mut covered = vec![false; n];
    for _ in 0..n {
        if covered.iter().all(|&c| c) {
            break;
        }
        let sample = sampling::random_sample(&problem, rng);
        if sample.items.is_empty() {
            continue;
        }
        for &i in &sample.items {
            covered[i] = true;
        }
        pool.add(sample.items);
    }
    for i in 0..n {
        if !covered[i] {
            pool.add(vec![i]);
        }
    }
    pool.columns
}

/// True iff no feasible pattern prices out below `-RC_EPSILON` under `duals`.
pub fn certify_optimality(instance: &Instance, duals: &[f64]) -> bool {
    let problem = PricingProblem::from_duals(instance, duals);
    let (best, proven) = pricing::solve_exact(&problem, SearchBudget::unlimited());
    proven && best.reduced_cost >= -RC_EPSILON
}

pub fn run_cg(instance: &Instance, cfg: &CgConfig) -> Result<CgResult, CgError> {
    run_cg_observed(instance, cfg, None)
}

pub fn run_cg_observed(
    instance: &Instance,
    cfg: &CgConfig,
    observer: Option<&mut dyn PricingObserver>,
) -> Result<CgResult, CgError> {
    run_cg_node(instance, cfg, &NodeConstraints::root(), None, observer)
}

/// CG under branching constraints. `seed_columns` (item sets) must jointly
/// cover every item; `None` builds the root initialization.
pub fn run_cg_node(
    instance: &Instance,
    cfg: &CgConfig,
    constraints: &NodeConstraints,
    seed_columns: Option<&[Vec<usize>]>,
    mut observer: Option<&mut dyn PricingObserver>,
) -> Result<CgResult, CgError> {
    if cfg.pricing.needs_model() && cfg.model.is_none() {
        return Err(CgError::MissingModel);
    }
    let start = Instant::now();
    let deadline = start + Duration::from_secs_f64(cfg.time_limit);
    let n = instance.n_items();
    let mut rng = Xoshiro256::seed_from_u64(cfg.rng_seed);

    let mut pool = ColumnPool::new();
    match seed_columns {
        Some(seeds) => {
            let mut covered = vec![false; n];
            for items in seeds {
                debug_assert!(constraints.allows_column(items));
                for &i in items {
                    covered[i] = true;
                }
                pool.add(items.clone());
            }
            if let Some(missing) = covered.iter().position(|&c| !c) {
                return Err(CgError::UncoveredItem(missing));
            }
        }
        None => {
            for c in init_rmp(instance, &mut rng) {
                pool.add(c.items);
            }
        }
    }
    let initial_columns = pool.len();

    let mut token: Option<BasisToken> = None;
    let mut iterations = 0usize;
    let mut fallbacks = 0usize;
    let mut log: Vec<CgIterRecord> = Vec::new();
    let status;
    let final_solution;

    loop {
        iterations += 1;
        let (sol, new_token) = simplex::solve_rmp(pool.columns(), n, token.as_ref());
        if sol.status == LpStatus::Infeasible {
            // Unreachable when seeds cover every item; defensive.
            let covered: HashSet<usize> = pool
                .columns()
                .iter()
                .flat_map(|c| c.items.iter().copied())
                .collect();
            let missing = (0..n).find(|i| !covered.contains(i)).unwrap_or(0);
            return Err(CgError::UncoveredItem(missing));
        }
        token = Some(new_token);

        let problem = constraints.build_pricing(instance, &sol.duals);
        let budget = SearchBudget {
            max_nodes: cfg.exact_node_budget,
            deadline: Some(deadline),
        };

        // One pricing dispatch: columns to add, the most negative reduced
        // cost seen, and whether optimality was certified.
        let mut to_add: Vec<PricingSolution> = Vec::new();
        let mut min_rc = f64::INFINITY;
        let mut certified = false;
        let mut out_of_budget = false;

        match cfg.pricing {
            PricingKind::ExactSingle => {
                let (best, proven) = pricing::solve_exact(&problem, budget);
                min_rc = best.reduced_cost;
                if proven {
                    if let Some(obs) = observer.as_deref_mut() {
                        obs.on_exact_pricing(iterations, &problem, &best);
                    }
                }
                if best.reduced_cost < -RC_EPSILON {
                    to_add.push(best);
                } else if proven {
                    certified = true;
                } else {
                    out_of_budget = true;
                }
            }
            PricingKind::ExactPool => {
                let (pool_sols, proven) =
                    pricing::solve_pool(&problem, n.max(1), -RC_EPSILON, budget);
                if let Some(best) = pool_sols.first() {
                    min_rc = best.reduced_cost;
                    to_add = pool_sols;
                } else if proven {
                    certified = true;
                    min_rc = 0.0;
                } else {
                    out_of_budget = true;
                }
            }
            PricingKind::Heuristic(kind) => {
                let found =
                    sampling::run_strategy(&problem, kind, &cfg.aco, cfg.model.as_ref(), &mut rng)?;
                let fresh: Vec<PricingSolution> = found
                    .into_iter()
                    .filter(|s| s.reduced_cost < -RC_EPSILON && !pool.contains(&s.items))
                    .collect();
                if fresh.is_empty() {
                    fallbacks += 1;
                    let (best, proven) = pricing::solve_exact(&problem, budget);
                    min_rc = best.reduced_cost;
                    if proven {
                        if let Some(obs) = observer.as_deref_mut() {
                            obs.on_exact_pricing(iterations, &problem, &best);
                        }
                    }
                    if best.reduced_cost < -RC_EPSILON {
                        to_add.push(best);
                    } else if proven {
                        certified = true;
                    } else {
                        out_of_budget = true;
                    }
                } else {
                    min_rc = fresh
                        .iter()
                        .map(|s| s.reduced_cost)
                        .fold(f64::INFINITY, f64::min);
                    to_add = fresh;
                }
            }
        }

        // Most negative first; ties resolved by the item set.
        to_add.sort_by(|a, b| {
            a.reduced_cost
                .partial_cmp(&b.reduced_cost)
                .unwrap()
                .then_with(|| a.items.cmp(&b.items))
        });
        if let Some(cap) = cfg.max_cols_per_iter {
            to_add.truncate(cap);
        }
        let mut added = 0usize;
        for s in to_add {
            debug_assert!(validate_pattern(instance, &s.items).unwrap().feasible());
            debug_assert!(constraints.allows_column(&s.items));
            if pool.add(s.items) {
                added += 1;
            }
        }

        log.push(CgIterRecord {
            iteration: iterations,
            lp_objective: sol.objective,
            columns_added: added,
            min_reduced_cost: min_rc,
            elapsed: start.elapsed().as_secs_f64(),
        });

        if certified {
            status = CgStatus::Optimal;
            final_solution = sol;
            break;
        }
        if out_of_budget || Instant::now() >= deadline {
            status = CgStatus::TimeLimit;
            final_solution = sol;
            break;
        }
        assert!(added > 0, "non-certified iteration must add a column");
    }

    Ok(CgResult {
        lp_objective: final_solution.objective,
        iterations,
        columns_generated: pool.len() - initial_columns,
        exact_fallback_calls: fallbacks,
        wall_time: start.elapsed().as_secs_f64(),
        status,
        final_columns: pool.columns,
        final_solution,
        iteration_log: log,
    })
}

/// Renders the per-iteration log as CSV.
pub fn iteration_log_csv(log: &[CgIterRecord]) -> String {
    let mut out = String::from("iteration,lp_objective,columns_added,min_reduced_cost,elapsed_seconds\n");
    for r in log {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.iteration, r.lp_objective, r.columns_added, r.min_reduced_cost, r.elapsed
        ));
    }
    out
}
