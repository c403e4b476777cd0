//! The pricing problem: a one-dimensional knapsack with conflicts (1DKPC).
//! Given per-item profits (the RMP duals), find an item set maximizing total
//! profit subject to the capacity and pairwise conflicts, plus any branching
//! constraints (forbidden items, must-select-together groups).
//!
//! `solve_exact` is a depth-first branch-and-bound with a fractional-knapsack
//! bound; `solve_pool` is the same search recording multiple improving
//! solutions; `brute_force_pricing` is an independent exhaustive oracle for
//! tests.

use crate::instance::{ConflictGraph, Instance};
use std::collections::HashSet;
use std::time::Instant;

const EPS_PRUNE: f64 = 1e-9;

/// A dual-valued 1DKPC, possibly restricted by branching constraints.
#[derive(Debug, Clone)]
pub struct PricingProblem {
    /// Per-item profit, non-negative (RMP dual values).
    pub profits: Vec<f64>,
    pub weights: Vec<u64>,
    pub capacity: u64,
    /// Conflict graph, including any branching-induced "apart" edges.
    pub conflicts: ConflictGraph,
    /// Items that may not appear in any solution.
    pub forbidden_items: Vec<usize>,
    /// Disjoint groups of items that must be selected all-or-nothing.
    pub merged_groups: Vec<Vec<usize>>,
}

impl PricingProblem {
    pub fn new(
        profits: Vec<f64>,
        weights: Vec<u64>,
        capacity: u64,
        conflicts: ConflictGraph,
    ) -> Self {
        assert_eq!(profits.len(), weights.len());
        assert_eq!(profits.len(), conflicts.n_vertices());
        debug_assert!(profits.iter().all(|&p| p >= 0.0 && p.is_finite()));
        debug_assert!(weights.iter().all(|&w| w >= 1));
        PricingProblem {
            profits,
            weights,
            capacity,
            conflicts,
            forbidden_items: Vec::new(),
            merged_groups: Vec::new(),
        }
    }

    /// Pricing problem at the root of an instance: profits are the duals.
    pub fn from_duals(instance: &Instance, duals: &[f64]) -> Self {
        PricingProblem::new(
            duals.to_vec(),
            instance.weights.clone(),
            instance.capacity,
            instance.conflicts.clone(),
        )
    }

    pub fn n_items(&self) -> usize {
        self.weights.len()
    }

    /// True when `items` satisfies capacity, conflicts, forbidden items, and
    /// all-or-nothing groups.
    pub fn is_feasible_set(&self, items: &[usize]) -> bool {
        let weight: u64 = items.iter().map(|&i| self.weights[i]).sum();
        if weight > self.capacity {
            return false;
        }
        for (k, &i) in items.iter().enumerate() {
            for &j in &items[k + 1..] {
                if self.conflicts.has_edge(i, j) {
                    return false;
                }
            }
        }
        if items.iter().any(|i| self.forbidden_items.contains(i)) {
            return false;
        }
        for group in &self.merged_groups {
            let present = group.iter().filter(|g| items.contains(g)).count();
            if present != 0 && present != group.len() {
                return false;
            }
        }
        true
    }

    pub fn profit_of(&self, items: &[usize]) -> f64 {
        items.iter().map(|&i| self.profits[i]).sum()
    }

    /// Contracts merged groups into super-items and drops unselectable ones.
    pub fn contract(&self) -> Contraction {
        Contraction::build(self)
    }
}

/// A feasible pricing solution over original item indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PricingSolution {
    pub items: Vec<usize>,
    pub profit: f64,
    pub reduced_cost: f64,
}

impl PricingSolution {
    pub fn new(mut items: Vec<usize>, profit: f64) -> Self {
        items.sort_unstable();
        PricingSolution {
            items,
            profit,
            reduced_cost: 1.0 - profit,
        }
    }

    pub fn empty() -> Self {
        PricingSolution {
            items: Vec::new(),
            profit: 0.0,
            reduced_cost: 1.0,
        }
    }
}

/// The contracted view used by all pricing engines: each selectable unit is
/// either a plain item or a merged group ("super-item"). Units that can never
/// be selected (forbidden, overweight, internally conflicting) are dropped.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub profits: Vec<f64>,
    pub weights: Vec<u64>,
    pub capacity: u64,
    /// Conflict adjacency between super-items, sorted.
    pub adj: Vec<Vec<usize>>,
    /// Original items behind each super-item.
    pub members: Vec<Vec<usize>>,
}

impl Contraction {
    fn build(p: &PricingProblem) -> Contraction {
        let n = p.n_items();
        let mut group_of: Vec<Option<usize>> = vec![None; n];
        for (g, group) in p.merged_groups.iter().enumerate() {
            for &i in group {
                assert!(group_of[i].is_none(), "item {i} in two merged groups");
                group_of[i] = Some(g);
            }
        }
        let forbidden: HashSet<usize> = p.forbidden_items.iter().copied().collect();

        // Candidate units in deterministic order: groups by smallest member,
        // then remaining singletons, all interleaved by that smallest index.
        let mut units: Vec<Vec<usize>> = Vec::new();
        let mut seen_group = vec![false; p.merged_groups.len()];
        for i in 0..n {
            match group_of[i] {
                Some(g) => {
                    if !seen_group[g] {
                        seen_group[g] = true;
                        let mut members = p.merged_groups[g].clone();
                        members.sort_unstable();
                        units.push(members);
                    }
                }
                None => units.push(vec![i]),
            }
        }

        let mut keep: Vec<Vec<usize>> = Vec::new();
        for members in units {
            if members.iter().any(|i| forbidden.contains(i)) {
                continue;
            }
            let weight: u64 = members.iter().map(|&i| p.weights[i]).sum();
            if weight > p.capacity {
                continue;
            }
            let mut internal_conflict = false;
            'outer: for (k, &i) in members.iter().enumerate() {
                for &j in &members[k + 1..] {
                    if p.conflicts.has_edge(i, j) {
                        internal_conflict = true;
                        break 'outer;
                    }
                }
            }
            if internal_conflict {
                continue;
            }
            keep.push(members);
        }

        let k = keep.len();
        let mut unit_of: Vec<Option<usize>> = vec![None; n];
        for (u, members) in keep.iter().enumerate() {
            for &i in members {
                unit_of[i] = Some(u);
            }
        }
        let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); k];
        for (i, j) in p.conflicts.edges() {
            if let (Some(a), Some(b)) = (unit_of[i], unit_of[j]) {
                if a != b {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
        let adj = adj
            .into_iter()
            .map(|s| {
                let mut v: Vec<usize> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();

        Contraction {
            profits: keep.iter().map(|ms| p.profit_of(ms)).collect(),
            weights: keep
                .iter()
                .map(|ms| ms.iter().map(|&i| p.weights[i]).sum())
                .collect(),
            capacity: p.capacity,
            adj,
            members: keep,
        }
    }

    pub fn n_units(&self) -> usize {
        self.members.len()
    }

    /// Maps super-item indices back to sorted original items.
    pub fn expand(&self, units: &[usize]) -> Vec<usize> {
        let mut items: Vec<usize> = units
            .iter()
            .flat_map(|&u| self.members[u].iter().copied())
            .collect();
        items.sort_unstable();
        items
    }
}

/// Node/time budget for the exact search.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            deadline: None,
        }
    }
}

#[derive(Clone)]
struct BitMask {
    words: Vec<u64>,
}

impl BitMask {
    fn full(k: usize) -> BitMask {
        let nw = (k + 63) / 64;
        let mut words = vec![u64::MAX; nw];
        if k % 64 != 0 && nw > 0 {
            words[nw - 1] = (1u64 << (k % 64)) - 1;
        }
        BitMask { words }
    }

    fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    fn first_set(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    fn and_not(&mut self, other: &[u64]) {
        for (a, &b) in self.words.iter_mut().zip(other) {
            *a &= !b;
        }
    }

    fn iter_set(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }
}

enum SearchMode {
    Best,
    Pool {
        profit_floor: f64,
        recorded: Vec<(f64, Vec<usize>)>,
        seen: HashSet<Vec<usize>>,
    },
}

struct Search<'a> {
    c: &'a Contraction,
    /// Positions sorted by profit/weight descending (ties by lower index);
    /// everything below works in position space.
    order: Vec<usize>,
    profits: Vec<f64>,
    weights: Vec<u64>,
    excl_mask: Vec<Vec<u64>>,
    incumbent: f64,
    best: Vec<usize>,
    nodes: u64,
    budget: SearchBudget,
    aborted: bool,
    mode: SearchMode,
}

impl<'a> Search<'a> {
    fn new(c: &'a Contraction, budget: SearchBudget, mode: SearchMode) -> Search<'a> {
        let k = c.n_units();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| {
            let ra = c.profits[a] / c.weights[a] as f64;
            let rb = c.profits[b] / c.weights[b] as f64;
            rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
        });
        let mut pos_of = vec![0usize; k];
        for (pos, &u) in order.iter().enumerate() {
            pos_of[u] = pos;
        }
        let nw = (k + 63) / 64;
        let mut excl_mask = vec![vec![0u64; nw]; k];
        for (pos, &u) in order.iter().enumerate() {
            for &v in &c.adj[u] {
                let q = pos_of[v];
                excl_mask[pos][q / 64] |= 1u64 << (q % 64);
            }
        }
        Search {
            profits: order.iter().map(|&u| c.profits[u]).collect(),
            weights: order.iter().map(|&u| c.weights[u]).collect(),
            c,
            order,
            excl_mask,
            incumbent: 0.0,
            best: Vec::new(),
            nodes: 0,
            budget,
            aborted: false,
            mode,
        }
    }

    fn budget_exceeded(&mut self) -> bool {
        if let Some(max) = self.budget.max_nodes {
            if self.nodes >= max {
                return true;
            }
        }
        if let Some(deadline) = self.budget.deadline {
            if self.nodes % 4096 == 0 && Instant::now() >= deadline {
                return true;
            }
        }
        false
    }

    /// Fractional knapsack over the remaining candidates; items heavier than
    /// the remaining capacity contribute fractionally, so the bound stays
    /// admissible without capacity-filtering the candidate set.
    fn knapsack_bound(&self, cand: &BitMask, rem_cap: u64) -> f64 {
        let mut cap = rem_cap as f64;
        let mut bound = 0.0;
        for p in cand.iter_set() {
            let w = self.weights[p] as f64;
            if w <= cap {
                bound += self.profits[p];
                cap -= w;
            } else {
                if cap > 0.0 {
                    bound += self.profits[p] * (cap / w);
                }
                break;
            }
        }
        bound
    }

    fn prune_threshold(&self) -> f64 {
        match &self.mode {
            SearchMode::Best => self.incumbent + EPS_PRUNE,
            // Keep equal-profit leaves reachable, and cut branches that can
            // neither tie the incumbent nor clear the reduced-cost floor.
            SearchMode::Pool { profit_floor, .. } => {
                (self.incumbent - EPS_PRUNE).max(*profit_floor)
            }
        }
    }

    fn record(&mut self, profit: f64, selected: &[usize]) {
        if let SearchMode::Pool {
            profit_floor,
            recorded,
            seen,
        } = &mut self.mode
        {
            if profit > *profit_floor {
                let items: Vec<usize> = selected.to_vec();
                let mut key = items.clone();
                key.sort_unstable();
                if seen.insert(key.clone()) {
                    recorded.push((profit, key));
                }
            }
        }
    }

    fn dfs(&mut self, mut cand: BitMask, rem_cap: u64, profit: f64, selected: &mut Vec<usize>) {
        self.nodes += 1;
        if self.aborted || self.budget_exceeded() {
            self.aborted = true;
            return;
        }
        if profit > self.incumbent + EPS_PRUNE {
            self.incumbent = profit;
            self.best = selected.clone();
            self.record(profit, selected);
        }
        loop {
            let Some(p) = cand.first_set() else {
                // Fully expanded leaf.
                if profit >= self.incumbent - EPS_PRUNE {
                    self.record(profit, selected);
                }
                return;
            };
            let bound = self.knapsack_bound(&cand, rem_cap);
            if profit + bound <= self.prune_threshold() {
                return;
            }
            if self.weights[p] <= rem_cap {
                let mut cand_in = cand.clone();
                cand_in.clear(p);
                cand_in.and_not(&self.excl_mask[p]);
                selected.push(p);
                self.dfs(
                    cand_in,
                    rem_cap - self.weights[p],
                    profit + self.profits[p],
                    selected,
                );
                selected.pop();
                if self.aborted {
                    return;
                }
            }
            cand.clear(p);
        }
    }

    fn run(&mut self) {
        let k = self.c.n_units();
        let cand = BitMask::full(k);
        let root_bound = self.knapsack_bound(&cand, self.c.capacity);
        let mut selected = Vec::new();
        self.dfs(cand, self.c.capacity, 0.0, &mut selected);
        // Bound admissibility: the root relaxation dominates the optimum.
        assert!(
            root_bound >= self.incumbent - 1e-9 * (1.0 + self.incumbent.abs()),
            "fractional bound {} below incumbent {}",
            root_bound,
            self.incumbent
        );
    }

    fn best_solution(&self) -> PricingSolution {
        let units: Vec<usize> = self.best.iter().map(|&p| self.order[p]).collect();
        PricingSolution::new(self.c.expand(&units), self.incumbent)
    }
}

/// Exact maximum-profit solve. Returns the best solution found and whether it
/// is proven optimal (false only when the budget ran out first).
pub fn solve_exact(problem: &PricingProblem, budget: SearchBudget) -> (PricingSolution, bool) {
    let c = problem.contract();
    let mut search = Search::new(&c, budget, SearchMode::Best);
    search.run();
    let sol = search.best_solution();
    debug_assert!(problem.is_feasible_set(&sol.items));
    (sol, !search.aborted)
}

/// Multi-solution variant: records every distinct feasible solution that was
/// an incumbent or a fully-expanded leaf at least as good as the incumbent,
/// keeps those with reduced cost below `rc_threshold`, and returns up to
/// `max_solutions` of them sorted by profit descending (the optimum, when it
/// qualifies, is always retained). The flag reports whether the search
/// completed inside its budget, i.e. whether an empty pool proves that no
/// qualifying solution exists.
pub fn solve_pool(
    problem: &PricingProblem,
    max_solutions: usize,
    rc_threshold: f64,
    budget: SearchBudget,
) -> (Vec<PricingSolution>, bool) {
    assert!(max_solutions >= 1);
    let c = problem.contract();
    let mode = SearchMode::Pool {
        profit_floor: 1.0 - rc_threshold,
        recorded: Vec::new(),
        seen: HashSet::new(),
    };
    let mut search = Search::new(&c, budget, mode);
    search.run();
    let proven = !search.aborted;
    let SearchMode::Pool { recorded, .. } = search.mode else {
        unreachable!()
    };
    let mut pool: Vec<(f64, Vec<usize>)> = recorded
        .into_iter()
        .map(|(profit, positions)| {
            let units: Vec<usize> = positions.iter().map(|&p| search.order[p]).collect();
            (profit, c.expand(&units))
        })
        .collect();
    pool.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.cmp(&b.1)));
    pool.truncate(max_solutions);
    let pool = pool
        .into_iter()
        .map(|(profit, items)| {
            let sol = PricingSolution::new(items, profit);
            debug_assert!(problem.is_feasible_set(&sol.items));
            sol
        })
        .collect();
    (pool, proven)
}

/// Exhaustive oracle over all item subsets. Test use only; refuses n > 25.
pub fn brute_force_pricing(problem: &PricingProblem) -> PricingSolution {
    let n = problem.n_items();
    assert!(n <= 25, "brute force oracle limited to 25 items, got {n}");
    let mut best_profit = 0.0;
    let mut best_items: Vec<usize> = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let items: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if !problem.is_feasible_set(&items) {
            continue;
        }
        let profit = problem.profit_of(&items);
        if profit > best_profit + EPS_PRUNE {
            best_profit = profit;
            best_items = items;
        }
    }
    PricingSolution::new(best_items, best_profit)
}

/// Branching constraints accumulated along a branch-and-price path, in the
/// form consumed by pricing: extra conflict edges from "apart" decisions and
/// merged groups from "together" decisions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeConstraints {
    pub extra_conflicts: Vec<(usize, usize)>,
    pub merged_groups: Vec<Vec<usize>>,
    pub forbidden_items: Vec<usize>,
}

impl NodeConstraints {
    pub fn root() -> Self {
        NodeConstraints::default()
    }

    pub fn is_root(&self) -> bool {
        self.extra_conflicts.is_empty()
            && self.merged_groups.is_empty()
            && self.forbidden_items.is_empty()
    }

    /// Whether a pooled column survives under these constraints: it must not
    /// join an "apart" pair and must contain each merged group all-or-nothing.
    pub fn allows_column(&self, items: &[usize]) -> bool {
        let contains = |x: usize| items.binary_search(&x).is_ok();
        if self.forbidden_items.iter().any(|&f| contains(f)) {
            return false;
        }
        for &(i, j) in &self.extra_conflicts {
            if contains(i) && contains(j) {
                return false;
            }
        }
        for group in &self.merged_groups {
            let present = group.iter().filter(|&&g| contains(g)).count();
            if present != 0 && present != group.len() {
                return false;
            }
        }
        true
    }

    /// Builds the pricing problem for this node from the RMP duals.
    pub fn build_pricing(&self, instance: &Instance, duals: &[f64]) -> PricingProblem {
        let conflicts = instance
            .conflicts
            .with_extra_edges(&self.extra_conflicts)
            .expect("branching edges are in range");
        let mut p = PricingProblem::new(
            duals.to_vec(),
            instance.weights.clone(),
            instance.capacity,
            conflicts,
        );
        p.forbidden_items = self.forbidden_items.clone();
        p.merged_groups = self.merged_groups.clone();
        p
    }
}
