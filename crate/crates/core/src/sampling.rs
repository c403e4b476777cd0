//! Heuristic pricing engines: uniform random sampling, diversity-aware
//! weighted sampling, the ACO loop with pheromone updates, and the strategy
//! dispatcher covering plain ACO, fixed-distribution ML sampling (MLPH), and
//! the ML-warm-started ACO variants.
//!
//! Item selection follows the usual ACO probability
//! `p_j = tau_j^alpha * eta_j^beta / sum_k tau_k^alpha * eta_k^beta` over the
//! current candidate set, renormalized as candidates shrink during
//! construction.

use crate::ml::{self, LinearModel};
use crate::pricing::{Contraction, PricingProblem, PricingSolution};
use crate::rng::Xoshiro256;
use std::collections::HashSet;
use thiserror::Error;

/// Pheromone floor: keeps every item reachable and the probability
/// denominator nonzero.
pub const TAU_MIN: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("pricing strategy {0:?} requires a trained model")]
    MissingModel(StrategyKind),
}

/// ACO and sampling parameters.
#[derive(Debug, Clone)]
pub struct AcoConfig {
    pub alpha: f64,
    pub beta: f64,
    /// Evaporation coefficient. Applied literally: a fraction `rho` of the
    /// pheromone evaporates each iteration, so the retained share is
    /// `1 - rho`. Set `rho_is_persistence` to reinterpret `rho` as the
    /// retained share instead.
    pub rho: f64,
    pub rho_is_persistence: bool,
    pub lambda: f64,
    pub iterations: usize,
    /// Samples per iteration; `None` means one per item.
    pub population: Option<usize>,
    /// Columns are kept only when reduced cost is strictly below this.
    pub rc_threshold: f64,
    /// Diversity-aware sampling seeds each item as the first selection once
    /// per sweep; disabled means every sample is built from scratch by the
    /// selection distribution alone.
    pub diversify: bool,
}

impl Default for AcoConfig {
    fn default() -> Self {
        AcoConfig {
            alpha: 1.0,
            beta: 1.0,
            rho: 0.95,
            rho_is_persistence: false,
            lambda: 1.0,
            iterations: 10,
            population: None,
            rc_threshold: -1e-6,
            diversify: true,
        }
    }
}

impl AcoConfig {
    pub fn validate(&self) {
        assert!(self.alpha >= 0.0 && self.beta >= 0.0);
        assert!(self.rho > 0.0 && self.rho <= 1.0);
        assert!(self.lambda > 0.0);
        assert!(self.iterations >= 1);
        if let Some(p) = self.population {
            assert!(p >= 1);
        }
    }

    fn retention(&self) -> f64 {
        if self.rho_is_persistence {
            self.rho
        } else {
            1.0 - self.rho
        }
    }
}

/// Online sampling state: pheromone, heuristic values, and the best objective
/// seen so far in this pricing invocation.
#[derive(Debug, Clone)]
pub struct AcoState {
    pub tau: Vec<f64>,
    pub eta: Vec<f64>,
    pub best_objective: f64,
    pub best_solution: Vec<usize>,
}

impl AcoState {
    pub fn uniform(n: usize) -> Self {
        AcoState {
            tau: vec![1.0; n],
            eta: vec![1.0; n],
            best_objective: 0.0,
            best_solution: Vec::new(),
        }
    }
}

/// Pricing strategy flavors (the exact pricers live in `cg::PricingKind`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// eta = profit/weight, tau uniform, pheromone updates on.
    PlainAco,
    /// eta = ML probability, tau uniform, distribution fixed (no updates).
    Mlph,
    /// eta = ML probability, tau uniform.
    MlacoPredictedEta,
    /// eta = ML probability * profit/weight, tau uniform.
    MlacoPredHeuEta,
    /// tau = ML probability, eta uniform.
    MlacoPredictedTau,
}

impl StrategyKind {
    pub fn needs_model(self) -> bool {
        !matches!(self, StrategyKind::PlainAco)
    }

    pub fn updates_pheromone(self) -> bool {
        !matches!(self, StrategyKind::Mlph)
    }
}

/// Selection probabilities over `candidates`: zero elsewhere, normalized so
/// the candidate mass sums to one. A vanishing denominator (all weights zero)
/// falls back to the uniform distribution over candidates.
pub fn selection_probabilities(
    candidates: &[usize],
    state: &AcoState,
    cfg: &AcoConfig,
) -> Vec<f64> {
    assert!(!candidates.is_empty(), "empty candidate set");
    let mut probs = vec![0.0; state.tau.len()];
    let mut total = 0.0;
    for &j in candidates {
        let w = state.tau[j].powf(cfg.alpha) * state.eta[j].powf(cfg.beta);
        probs[j] = w;
        total += w;
    }
    if total > 0.0 && total.is_finite() {
        for &j in candidates {
            probs[j] /= total;
        }
    } else {
        let u = 1.0 / candidates.len() as f64;
        for &j in candidates {
            probs[j] = u;
        }
    }
    probs
}

/// Compact candidate list over contraction units with O(1) removal.
struct CandidateSet {
    list: Vec<usize>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl CandidateSet {
    fn new(k: usize, skip: Option<usize>) -> CandidateSet {
        let mut list = Vec::with_capacity(k);
        let mut pos = vec![ABSENT; k];
        for u in 0..k {
            if Some(u) != skip {
                pos[u] = list.len();
                list.push(u);
            }
        }
        CandidateSet { list, pos }
    }

    fn remove(&mut self, u: usize) {
        let p = self.pos[u];
        if p == ABSENT {
            return;
        }
        let last = *self.list.last().unwrap();
        self.list.swap_remove(p);
        self.pos[u] = ABSENT;
        if last != u {
            self.pos[last] = p;
        }
    }

    fn remove_at(&mut self, p: usize) {
        let u = self.list[p];
        self.remove(u);
    }

    fn is_empty(&self) -> bool {
        self.list.is_empty()
    }
}

/// Builds one solution in unit space, picking uniformly from the maintained
/// candidate set (Algorithm: start from every unit that fits, pick, then drop
/// the pick, its neighbors, and anything no longer fitting).
fn build_uniform(c: &Contraction, rng: &mut Xoshiro256) -> (Vec<usize>, f64) {
    build_weighted(c, None, None, rng)
}

/// Generic construction: weights `w_sel` drive the selection distribution
/// (None means uniform); `seed` forces the first selected unit.
fn build_weighted(
    c: &Contraction,
    w_sel: Option<&[f64]>,
    seed: Option<usize>,
    rng: &mut Xoshiro256,
) -> (Vec<usize>, f64) {
    let k = c.n_units();
    let mut items = Vec::new();
    let mut profit = 0.0;
    let mut remaining = c.capacity;

    let mut cand = CandidateSet::new(k, None);
    if let Some(s) = seed {
        debug_assert!(c.weights[s] <= remaining);
        items.push(s);
        profit += c.profits[s];
        remaining -= c.weights[s];
        cand.remove(s);
        for &v in &c.adj[s] {
            cand.remove(v);
        }
    }

    loop {
        // Drop anything that no longer fits before drawing.
        let mut p = 0;
        while p < cand.list.len() {
            if c.weights[cand.list[p]] > remaining {
                cand.remove_at(p);
            } else {
                p += 1;
            }
        }
        if cand.is_empty() {
            break;
        }
        let pick = match w_sel {
            None => cand.list[rng.gen_index(cand.list.len())],
            Some(w) => {
                let total: f64 = cand.list.iter().map(|&u| w[u]).sum();
                if total > 0.0 && total.is_finite() {
                    let r = rng.next_f64() * total;
                    let mut acc = 0.0;
                    let mut chosen = *cand.list.last().unwrap();
                    for &u in &cand.list {
                        acc += w[u];
                        if r < acc {
                            chosen = u;
                            break;
                        }
                    }
                    chosen
                } else {
                    cand.list[rng.gen_index(cand.list.len())]
                }
            }
        };
        items.push(pick);
        profit += c.profits[pick];
        remaining -= c.weights[pick];
        cand.remove(pick);
        for &v in &c.adj[pick] {
            cand.remove(v);
        }
    }
    items.sort_unstable();
    (items, profit)
}

/// One uniformly random feasible solution (Algorithm 2 style construction).
pub fn random_sample(problem: &PricingProblem, rng: &mut Xoshiro256) -> PricingSolution {
    let c = problem.contract();
    let (units, profit) = build_uniform(&c, rng);
    PricingSolution::new(c.expand(&units), profit)
}

/// `count` independent random samples, sharing one contraction pass.
pub fn random_samples(
    problem: &PricingProblem,
    count: usize,
    rng: &mut Xoshiro256,
) -> Vec<PricingSolution> {
    let c = problem.contract();
    (0..count)
        .map(|_| {
            let (units, profit) = build_uniform(&c, rng);
            PricingSolution::new(c.expand(&units), profit)
        })
        .collect()
}

/// Per-unit value derived from a per-original-item vector (mean over the
/// members of a merged group; identity when nothing is merged).
fn unit_values(c: &Contraction, per_item: &[f64]) -> Vec<f64> {
    c.members
        .iter()
        .map(|ms| ms.iter().map(|&i| per_item[i]).sum::<f64>() / ms.len() as f64)
        .collect()
}

/// One full sweep in unit space. Returns every constructed solution
/// (population size many), unfiltered.
fn sweep_units(
    c: &Contraction,
    tau: &[f64],
    eta: &[f64],
    cfg: &AcoConfig,
    rng: &mut Xoshiro256,
) -> Vec<(Vec<usize>, f64)> {
    let k = c.n_units();
    if k == 0 {
        return Vec::new();
    }
    let w_sel: Vec<f64> = (0..k)
        .map(|u| tau[u].powf(cfg.alpha) * eta[u].powf(cfg.beta))
        .collect();
    let population = cfg.population.unwrap_or(k).min(k.max(1));
    let mut out = Vec::with_capacity(population);
    if cfg.diversify {
        // Each unit seeds one construction; ineligible seeds are skipped
        // (the population shrinks rather than re-seeding).
        for seed in 0..k.min(population) {
            let mut sub = rng.split();
            out.push(build_weighted(c, Some(&w_sel), Some(seed), &mut sub));
        }
    } else {
        for _ in 0..population {
            let mut sub = rng.split();
            out.push(build_weighted(c, Some(&w_sel), None, &mut sub));
        }
    }
    out
}

/// Diversity-aware sweep (Algorithm 3 style): the k-th construction seeds
/// with item k, then extends by the selection distribution until no candidate
/// remains. Only solutions with reduced cost below `cfg.rc_threshold` are
/// returned, deduplicated by item set.
pub fn diversity_sweep(
    problem: &PricingProblem,
    state: &AcoState,
    cfg: &AcoConfig,
    rng: &mut Xoshiro256,
) -> Vec<PricingSolution> {
    cfg.validate();
    let c = problem.contract();
    let tau = unit_values(&c, &state.tau);
    let eta = unit_values(&c, &state.eta);
    let all = sweep_units(&c, &tau, &eta, cfg, rng);
    let mut seen = HashSet::new();
    let mut improving = Vec::new();
    for (units, profit) in all {
        let sol = PricingSolution::new(c.expand(&units), profit);
        if sol.reduced_cost < cfg.rc_threshold && seen.insert(sol.items.clone()) {
            improving.push(sol);
        }
    }
    improving
}

/// Pheromone update: `tau_i <- retention * tau_i + sum_n deposit_i^n` where a
/// sample containing item i deposits `c_n / c_best / lambda`, then floored at
/// `TAU_MIN`. Call only after `state.best_objective` reflects these samples.
pub fn update_pheromone(state: &mut AcoState, samples: &[PricingSolution], cfg: &AcoConfig) {
    let retention = cfg.retention();
    let c_best = state.best_objective;
    let mut deposit = vec![0.0; state.tau.len()];
    if c_best > 0.0 {
        for s in samples {
            debug_assert!(s.profit <= c_best + 1e-9, "best_objective is stale");
            let q = s.profit / c_best / cfg.lambda;
            for &i in &s.items {
                deposit[i] += q;
            }
        }
    }
    for (t, d) in state.tau.iter_mut().zip(&deposit) {
        *t = (retention * *t + d).max(TAU_MIN);
    }
}

/// Full heuristic pricing pass: initializes (tau, eta) according to the
/// strategy, runs `iterations` sweeps with pheromone updates in between
/// (MLPH keeps its distribution fixed), and returns the deduplicated union of
/// improving columns in original item space.
pub fn run_strategy(
    problem: &PricingProblem,
    kind: StrategyKind,
    cfg: &AcoConfig,
    model: Option<&LinearModel>,
    rng: &mut Xoshiro256,
) -> Result<Vec<PricingSolution>, StrategyError> {
    cfg.validate();
    let c = problem.contract();
    let k = c.n_units();
    if k == 0 {
        return Ok(Vec::new());
    }

    let ratio: Vec<f64> = (0..k)
        .map(|u| c.profits[u] / c.weights[u] as f64)
        .collect();
    let p_unit: Option<Vec<f64>> = if kind.needs_model() {
        let model = model.ok_or(StrategyError::MissingModel(kind))?;
        let n_feat = k;
        let samples = {
            let mut out = Vec::with_capacity(n_feat);
            for _ in 0..n_feat {
                let (units, profit) = build_uniform(&c, rng);
                out.push(PricingSolution::new(c.expand(&units), profit));
            }
            out
        };
        let feats = ml::extract_features(problem, &samples);
        let p_item = ml::predict_probability(model, &feats);
        Some(unit_values(&c, &p_item))
    } else {
        None
    };

    let (mut tau, eta): (Vec<f64>, Vec<f64>) = match kind {
        StrategyKind::PlainAco => (vec![1.0; k], ratio),
        StrategyKind::Mlph | StrategyKind::MlacoPredictedEta => {
            (vec![1.0; k], p_unit.unwrap())
        }
        StrategyKind::MlacoPredHeuEta => {
            let p = p_unit.unwrap();
            (vec![1.0; k], p.iter().zip(&ratio).map(|(a, b)| a * b).collect())
        }
        StrategyKind::MlacoPredictedTau => {
            (p_unit.unwrap().iter().map(|&p| p.max(TAU_MIN)).collect(), vec![1.0; k])
        }
    };

    let mut best_objective = 0.0f64;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut columns: Vec<PricingSolution> = Vec::new();

    for _ in 0..cfg.iterations {
        let samples = sweep_units(&c, &tau, &eta, cfg, rng);
        for (_, profit) in &samples {
            best_objective = best_objective.max(*profit);
        }
        for (units, profit) in &samples {
            let rc = 1.0 - profit;
            if rc < cfg.rc_threshold {
                let items = c.expand(units);
                if seen.insert(items.clone()) {
                    debug_assert!(problem.is_feasible_set(&items));
                    columns.push(PricingSolution::new(items, *profit));
                }
            }
        }
        if kind.updates_pheromone() {
            let retention = cfg.retention();
            let mut deposit = vec![0.0; k];
            if best_objective > 0.0 {
                for (units, profit) in &samples {
                    let q = profit / best_objective / cfg.lambda;
                    for &u in units {
                        deposit[u] += q;
                    }
                }
            }
            for (t, d) in tau.iter_mut().zip(&deposit) {
                *t = (retention * *t + d).max(TAU_MIN);
            }
        }
    }
    Ok(columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ConflictGraph;
    use crate::pricing::PricingProblem;

    fn problem(
        profits: &[f64],
        weights: &[u64],
        capacity: u64,
        edges: &[(usize, usize)],
    ) -> PricingProblem {
        let n = profits.len();
        PricingProblem::new(
            profits.to_vec(),
            weights.to_vec(),
            capacity,
            ConflictGraph::from_edges(n, edges.iter().copied()).unwrap(),
        )
    }

    #[test]
    fn probabilities_symmetric_case() {
        let cfg = AcoConfig::default();
        let state = AcoState::uniform(4);
        let p = selection_probabilities(&[0, 1, 2, 3], &state, &cfg);
        for &x in &p {
            assert!((x - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn probabilities_weighted_case() {
        let cfg = AcoConfig::default();
        let mut state = AcoState::uniform(2);
        state.eta = vec![3.0, 1.0];
        let p = selection_probabilities(&[0, 1], &state, &cfg);
        assert!((p[0] - 0.75).abs() < 1e-12);
        assert!((p[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn zero_exponents_give_uniform() {
        let cfg = AcoConfig {
            alpha: 0.0,
            beta: 0.0,
            ..AcoConfig::default()
        };
        let mut state = AcoState::uniform(3);
        state.tau = vec![9.0, 0.1, 2.0];
        state.eta = vec![0.5, 7.0, 1.0];
        let p = selection_probabilities(&[0, 1, 2], &state, &cfg);
        for &x in &p {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn probabilities_sum_to_one_and_scale_invariant() {
        let cfg = AcoConfig::default();
        let mut state = AcoState::uniform(6);
        state.tau = vec![0.3, 1.8, 2.2, 0.9, 1.1, 0.4];
        state.eta = vec![0.2, 0.0, 3.0, 1.4, 0.7, 2.0];
        let cands = vec![0, 2, 3, 5];
        let p = selection_probabilities(&cands, &state, &cfg);
        let sum: f64 = cands.iter().map(|&j| p[j]).sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!(p[1] == 0.0 && p[4] == 0.0);

        let mut scaled = state.clone();
        for e in scaled.eta.iter_mut() {
            *e *= 37.5;
        }
        let q = selection_probabilities(&cands, &scaled, &cfg);
        for &j in &cands {
            assert!((p[j] - q[j]).abs() <= 1e-12);
        }
    }

    #[test]
    fn all_zero_eta_falls_back_to_uniform() {
        let cfg = AcoConfig::default();
        let mut state = AcoState::uniform(3);
        state.eta = vec![0.0, 0.0, 0.0];
        let p = selection_probabilities(&[0, 1], &state, &cfg);
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!((p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn random_sample_complete_graph_is_singleton() {
        let p = problem(
            &[1.0, 1.0, 1.0],
            &[1, 1, 1],
            3,
            &[(0, 1), (0, 2), (1, 2)],
        );
        let mut rng = Xoshiro256::seed_from_u64(1);
        for _ in 0..50 {
            let s = random_sample(&p, &mut rng);
            assert_eq!(s.items.len(), 1);
        }
    }

    #[test]
    fn random_sample_no_conflicts_takes_everything() {
        let p = problem(&[1.0; 5], &[1; 5], 5, &[]);
        let mut rng = Xoshiro256::seed_from_u64(2);
        for _ in 0..20 {
            let s = random_sample(&p, &mut rng);
            assert_eq!(s.items, vec![0, 1, 2, 3, 4]);
        }
    }

    #[test]
    fn random_sample_capacity_limits_to_one() {
        let p = problem(&[1.0, 1.0], &[6, 6], 10, &[]);
        let mut rng = Xoshiro256::seed_from_u64(3);
        for _ in 0..20 {
            let s = random_sample(&p, &mut rng);
            assert_eq!(s.items.len(), 1);
        }
    }

    #[test]
    fn sweep_forced_completion_dedups_to_one() {
        let p = problem(&[0.5, 0.5, 0.5], &[1, 1, 1], 3, &[]);
        let state = AcoState::uniform(3);
        let cfg = AcoConfig {
            rc_threshold: -1e-6,
            ..AcoConfig::default()
        };
        let mut rng = Xoshiro256::seed_from_u64(4);
        let out = diversity_sweep(&p, &state, &cfg, &mut rng);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].items, vec![0, 1, 2]);
        assert!((out[0].reduced_cost - (-0.5)).abs() < 1e-12);
    }

    #[test]
    fn sweep_returns_nothing_without_improvement() {
        let p = problem(
            &[0.4, 0.4, 0.4],
            &[1, 1, 1],
            3,
            &[(0, 1), (0, 2), (1, 2)],
        );
        let state = AcoState::uniform(3);
        let cfg = AcoConfig::default();
        let mut rng = Xoshiro256::seed_from_u64(5);
        let out = diversity_sweep(&p, &state, &cfg, &mut rng);
        assert!(out.is_empty());
    }

    #[test]
    fn sweep_two_seed_paths_merge() {
        let p = problem(&[0.9, 0.9], &[1, 1], 2, &[]);
        let state = AcoState::uniform(2);
        let cfg = AcoConfig::default();
        let mut rng = Xoshiro256::seed_from_u64(6);
        let out = diversity_sweep(&p, &state, &cfg, &mut rng);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].items, vec![0, 1]);
        assert!((out[0].reduced_cost - (-0.8)).abs() < 1e-12);
    }

    #[test]
    fn pheromone_update_matches_hand_computation() {
        let cfg = AcoConfig::default(); // rho = 0.95 literal, lambda = 1

        // No sample contains the item: pure evaporation.
        let mut state = AcoState::uniform(1);
        state.best_objective = 1.0;
        update_pheromone(&mut state, &[], &cfg);
        assert!((state.tau[0] - 0.05).abs() <= 1e-12);

        // One sample at the best objective.
        let mut state = AcoState::uniform(1);
        state.best_objective = 2.0;
        let s = PricingSolution::new(vec![0], 2.0);
        update_pheromone(&mut state, &[s], &cfg);
        assert!((state.tau[0] - 1.05).abs() <= 1e-12);

        // Two samples with relative quality 0.5 and 1.0.
        let mut state = AcoState::uniform(1);
        state.best_objective = 2.0;
        let s1 = PricingSolution::new(vec![0], 1.0);
        let s2 = PricingSolution::new(vec![0], 2.0);
        update_pheromone(&mut state, &[s1, s2], &cfg);
        assert!((state.tau[0] - 1.55).abs() <= 1e-12);
    }

    #[test]
    fn pheromone_zero_best_deposits_nothing() {
        let cfg = AcoConfig::default();
        let mut state = AcoState::uniform(2);
        state.best_objective = 0.0;
        let s = PricingSolution::new(vec![0], 0.0);
        update_pheromone(&mut state, &[s], &cfg);
        assert!((state.tau[0] - 0.05).abs() <= 1e-12);
    }

    #[test]
    fn pheromone_stays_finite_and_floored_over_many_iterations() {
        let cfg = AcoConfig::default();
        let p = problem(&[0.6, 0.7, 0.2, 0.9], &[2, 3, 1, 4], 6, &[(0, 3)]);
        let mut rng = Xoshiro256::seed_from_u64(9);
        let mut state = AcoState::uniform(4);
        for _ in 0..10_000 {
            let samples = random_samples(&p, 4, &mut rng);
            for s in &samples {
                state.best_objective = state.best_objective.max(s.profit);
            }
            update_pheromone(&mut state, &samples, &cfg);
            for &t in &state.tau {
                assert!(t.is_finite() && t >= TAU_MIN);
            }
        }
    }

    #[test]
    fn plain_aco_zero_profits_returns_nothing() {
        let p = problem(&[0.0, 0.0, 0.0], &[1, 1, 1], 3, &[]);
        let cfg = AcoConfig::default();
        let mut rng = Xoshiro256::seed_from_u64(10);
        let out = run_strategy(&p, StrategyKind::PlainAco, &cfg, None, &mut rng).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn ml_kinds_require_model() {
        let p = problem(&[0.5], &[1], 1, &[]);
        let cfg = AcoConfig::default();
        let mut rng = Xoshiro256::seed_from_u64(11);
        let err = run_strategy(&p, StrategyKind::Mlph, &cfg, None, &mut rng);
        assert!(matches!(err, Err(StrategyError::MissingModel(_))));
    }

    #[test]
    fn run_strategy_is_deterministic_under_fixed_seed() {
        let p = problem(
            &[0.8, 0.6, 0.9, 0.3, 0.7],
            &[2, 3, 4, 1, 2],
            6,
            &[(0, 2), (1, 4)],
        );
        let cfg = AcoConfig {
            iterations: 3,
            ..AcoConfig::default()
        };
        let mut rng1 = Xoshiro256::seed_from_u64(12);
        let mut rng2 = Xoshiro256::seed_from_u64(12);
        let a = run_strategy(&p, StrategyKind::PlainAco, &cfg, None, &mut rng1).unwrap();
        let b = run_strategy(&p, StrategyKind::PlainAco, &cfg, None, &mut rng2).unwrap();
        let sa: Vec<Vec<usize>> = a.iter().map(|s| s.items.clone()).collect();
        let sb: Vec<Vec<usize>> = b.iter().map(|s| s.items.clone()).collect();
        assert_eq!(sa, sb);
    }

    #[test]
    fn returned_columns_are_feasible_improving_and_distinct() {
        let p = problem(
            &[0.9, 0.8, 0.7, 0.6, 0.5, 0.4],
            &[3, 2, 4, 1, 2, 3],
            7,
            &[(0, 1), (2, 3), (4, 5), (1, 5)],
        );
        let cfg = AcoConfig::default();
        let mut rng = Xoshiro256::seed_from_u64(13);
        let out = run_strategy(&p, StrategyKind::PlainAco, &cfg, None, &mut rng).unwrap();
        let mut seen = HashSet::new();
        for s in &out {
            assert!(p.is_feasible_set(&s.items));
            assert!(s.reduced_cost < cfg.rc_threshold);
            assert!(seen.insert(s.items.clone()));
        }
    }
}
