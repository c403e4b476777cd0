//! Branch-and-price: best-first branch-and-bound where every node bound comes
//! from a column generation solve under Ryan-Foster branching constraints
//! (pairs of items forced together or apart). Reports incumbents and the
//! optimality gap against the best open bound.

use crate::cg::{self, CgConfig, CgError, CgStatus, ColumnPool};
use crate::instance::Instance;
use crate::pricing::NodeConstraints;
use crate::simplex::{Column, LpSolution};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::time::{Duration, Instant};

const INTEGRALITY_TOL: f64 = 1e-6;
const BOUND_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    Together,
    Apart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchDecision {
    pub pair: (usize, usize),
    pub kind: BranchKind,
}

impl BranchDecision {
    pub fn together(i: usize, j: usize) -> Self {
        assert_ne!(i, j);
        BranchDecision {
            pair: (i.min(j), i.max(j)),
            kind: BranchKind::Together,
        }
    }

    pub fn apart(i: usize, j: usize) -> Self {
        assert_ne!(i, j);
        BranchDecision {
            pair: (i.min(j), i.max(j)),
            kind: BranchKind::Apart,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Open,
    PrunedBound,
    PrunedInfeasible,
    Branched,
    Integral,
}

#[derive(Debug, Clone)]
pub struct BnpNodeRecord {
    pub node_id: usize,
    pub depth: usize,
    pub lp_bound: f64,
    pub status: NodeStatus,
    pub incumbent: Option<u64>,
    pub gap_percent: f64,
    pub elapsed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnpStatus {
    Optimal,
    TimeLimit,
}

#[derive(Debug, Clone)]
pub struct BnpResult {
    pub incumbent_value: Option<u64>,
    pub incumbent_patterns: Vec<Vec<usize>>,
    pub global_lower_bound: f64,
    pub gap_percent: f64,
    pub nodes_explored: usize,
    pub status: BnpStatus,
    pub node_log: Vec<BnpNodeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InconsistentBranching {
    pub pair: (usize, usize),
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, i: usize, j: usize) {
        let (a, b) = (self.find(i), self.find(j));
        if a != b {
            // Smaller root wins for deterministic group representatives.
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
        }
    }
}

/// Turns a decision path into pricing-level constraints. Fails when a pair is
/// (transitively) both together and apart.
pub fn decisions_to_constraints(
    n_items: usize,
    decisions: &[BranchDecision],
) -> Result<NodeConstraints, InconsistentBranching> {
    let mut uf = UnionFind::new(n_items);
    for d in decisions {
        if d.kind == BranchKind::Together {
            uf.union(d.pair.0, d.pair.1);
        }
    }
    let mut apart = Vec::new();
    for d in decisions {
        if d.kind == BranchKind::Apart {
            if uf.find(d.pair.0) == uf.find(d.pair.1) {
                return Err(InconsistentBranching { pair: d.pair });
            }
            apart.push(d.pair);
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n_items {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut merged: Vec<Vec<usize>> = groups.into_values().filter(|g| g.len() > 1).collect();
    for g in merged.iter_mut() {
        g.sort_unstable();
    }
    merged.sort();
    apart.sort_unstable();
    Ok(NodeConstraints {
        extra_conflicts: apart,
        merged_groups: merged,
        forbidden_items: Vec::new(),
    })
}

/// Constraint sets of the child obtained by appending `decision` to a path.
pub fn apply_branch(
    n_items: usize,
    decisions: &[BranchDecision],
    decision: BranchDecision,
) -> Result<NodeConstraints, InconsistentBranching> {
    let mut path = decisions.to_vec();
    path.push(decision);
    decisions_to_constraints(n_items, &path)
}

/// A merged group that cannot be packed (overweight or internally
/// conflicting) makes its items uncoverable; the node is infeasible.
fn first_unpackable_group(instance: &Instance, constraints: &NodeConstraints) -> Option<usize> {
    for (g, group) in constraints.merged_groups.iter().enumerate() {
        let weight: u64 = group.iter().map(|&i| instance.weights[i]).sum();
        if weight > instance.capacity {
            return Some(g);
        }
        for (k, &i) in group.iter().enumerate() {
            for &j in &group[k + 1..] {
                if instance.conflicts.has_edge(i, j) {
                    return Some(g);
                }
            }
        }
    }
    None
}

/// Ryan-Foster pair selection: among undecided pairs that co-occur in some
/// fractional column, pick the pair whose together-mass
/// `psi = sum_{P containing both} z_P` is closest to one half (ties go to the
/// lexicographically smallest pair).
pub fn select_branching_pair(
    solution: &LpSolution,
    columns: &[Column],
    n_items: usize,
    decisions: &[BranchDecision],
) -> (usize, usize) {
    let mut uf = UnionFind::new(n_items);
    for d in decisions {
        if d.kind == BranchKind::Together {
            uf.union(d.pair.0, d.pair.1);
        }
    }
    let mut apart_groups: HashSet<(usize, usize)> = HashSet::new();
    for d in decisions {
        if d.kind == BranchKind::Apart {
            let (a, b) = (uf.find(d.pair.0), uf.find(d.pair.1));
            apart_groups.insert((a.min(b), a.max(b)));
        }
    }

    let is_fractional = |z: f64| (z - z.round()).abs() > INTEGRALITY_TOL;
    let mut candidates: HashSet<(usize, usize)> = HashSet::new();
    for (c, &z) in columns.iter().zip(&solution.primal) {
        if !is_fractional(z) {
            continue;
        }
        for (k, &i) in c.items.iter().enumerate() {
            for &j in &c.items[k + 1..] {
                let (gi, gj) = (uf.find(i), uf.find(j));
                if gi == gj {
                    continue; // already forced together
                }
                if apart_groups.contains(&(gi.min(gj), gi.max(gj))) {
                    continue; // already forced apart
                }
                candidates.insert((i, j));
            }
        }
    }
    assert!(
        !candidates.is_empty(),
        "fractional covering solution must expose an undecided item pair"
    );

    let mut psi: HashMap<(usize, usize), f64> = candidates.iter().map(|&p| (p, 0.0)).collect();
    for (c, &z) in columns.iter().zip(&solution.primal) {
        if z <= 0.0 {
            continue;
        }
        for (k, &i) in c.items.iter().enumerate() {
            for &j in &c.items[k + 1..] {
                if let Some(mass) = psi.get_mut(&(i, j)) {
                    *mass += z;
                }
            }
        }
    }
    let mut best: Option<((usize, usize), f64)> = None;
    for (&pair, &mass) in &psi {
        let score = (mass - 0.5).abs();
        best = match best {
            None => Some((pair, score)),
            Some((bp, bs)) => {
                if score < bs - 1e-12 || (score <= bs + 1e-12 && pair < bp) {
                    Some((pair, score))
                } else {
                    Some((bp, bs))
                }
            }
        };
    }
    best.unwrap().0
}

/// Exhaustive optimum of the compact assignment formulation with symmetry
/// reduction (item k may only open bin k at most). Test oracle; refuses
/// n > 10.
pub fn brute_force_ip(instance: &Instance) -> u64 {
    let n = instance.n_items();
    assert!(n <= 10, "brute force IP oracle limited to 10 items, got {n}");
    let mut best = n as u64; // singletons are always feasible
    let mut bin_weight: Vec<u64> = Vec::new();
    let mut bin_items: Vec<Vec<usize>> = Vec::new();

    fn rec(
        item: usize,
        instance: &Instance,
        bin_weight: &mut Vec<u64>,
        bin_items: &mut Vec<Vec<usize>>,
        best: &mut u64,
    ) {
        if bin_weight.len() as u64 >= *best {
            return;
        }
        if item == instance.n_items() {
            *best = bin_weight.len() as u64;
            return;
        }
        for b in 0..=bin_weight.len() {
            if b == bin_weight.len() {
                bin_weight.push(instance.weights[item]);
                bin_items.push(vec![item]);
                rec(item + 1, instance, bin_weight, bin_items, best);
                bin_weight.pop();
                bin_items.pop();
            } else {
                if bin_weight[b] + instance.weights[item] > instance.capacity {
                    continue;
                }
                if bin_items[b]
                    .iter()
                    .any(|&j| instance.conflicts.has_edge(item, j))
                {
                    continue;
                }
                bin_weight[b] += instance.weights[item];
                bin_items[b].push(item);
                rec(item + 1, instance, bin_weight, bin_items, best);
                bin_items[b].pop();
                bin_weight[b] -= instance.weights[item];
            }
        }
    }
    rec(0, instance, &mut bin_weight, &mut bin_items, &mut best);
    best
}

struct OpenNode {
    bound: f64,
    fifo: u64,
    decisions: Vec<BranchDecision>,
}

impl PartialEq for OpenNode {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.fifo == other.fifo
    }
}
impl Eq for OpenNode {}
impl Ord for OpenNode {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap: invert for best-first (lowest bound, then
        // oldest node).
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap()
            .then(other.fifo.cmp(&self.fifo))
    }
}
impl PartialOrd for OpenNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Greedy rounding: take columns by descending LP value while they cover
/// something new. Returns a feasible covering set of patterns.
fn rounding_cover(
    solution: &LpSolution,
    columns: &[Column],
    n_items: usize,
) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..columns.len()).collect();
    order.sort_by(|&a, &b| {
        solution.primal[b]
            .partial_cmp(&solution.primal[a])
            .unwrap()
            .then_with(|| columns[a].items.cmp(&columns[b].items))
    });
    let mut covered = vec![false; n_items];
    let mut n_covered = 0usize;
    let mut picked = Vec::new();
    for idx in order {
        let items = &columns[idx].items;
        if items.iter().any(|&i| !covered[i]) {
            picked.push(items.clone());
            for &i in items {
                if !covered[i] {
                    covered[i] = true;
                    n_covered += 1;
                }
            }
            if n_covered == n_items {
                break;
            }
        }
    }
    debug_assert_eq!(n_covered, n_items);
    picked
}

fn integral_selection(solution: &LpSolution, columns: &[Column]) -> Option<Vec<Vec<usize>>> {
    let mut picked = Vec::new();
    for (c, &z) in columns.iter().zip(&solution.primal) {
        if (z - z.round()).abs() > INTEGRALITY_TOL {
            return None;
        }
        let v = z.round() as u64;
        for _ in 0..v {
            picked.push(c.items.clone());
        }
    }
    Some(picked)
}

/// Best-first branch-and-price. The CG pricing strategy, time limit, and seed
/// come from `cfg`; `node_limit` optionally caps explored nodes (hitting it
/// reports TimeLimit).
pub fn run_bnp(instance: &Instance, cfg: &CgConfig, node_limit: Option<usize>) -> BnpResult {
    let start = Instant::now();
    let deadline = start + Duration::from_secs_f64(cfg.time_limit);
    let n = instance.n_items();
    let mut seed_stream = crate::rng::Xoshiro256::seed_from_u64(cfg.rng_seed);

    let mut global_pool = ColumnPool::new();
    let mut heap: BinaryHeap<OpenNode> = BinaryHeap::new();
    let mut fifo = 0u64;
    heap.push(OpenNode {
        bound: 0.0,
        fifo,
        decisions: Vec::new(),
    });

    let mut incumbent: Option<(u64, Vec<Vec<usize>>)> = None;
    let mut node_log: Vec<BnpNodeRecord> = Vec::new();
    let mut nodes_explored = 0usize;
    let mut status = BnpStatus::Optimal;

    let glb_of = |heap: &BinaryHeap<OpenNode>, incumbent: &Option<(u64, Vec<Vec<usize>>)>| -> f64 {
        match heap.peek() {
            Some(top) => top.bound,
            None => incumbent.as_ref().map_or(0.0, |(v, _)| *v as f64),
        }
    };
    let gap_of = |inc: &Option<(u64, Vec<Vec<usize>>)>, glb: f64| -> f64 {
        match inc {
            None => 100.0,
            Some((v, _)) => {
                let v = *v as f64;
                (100.0 * (v - glb.min(v)) / v).max(0.0)
            }
        }
    };

    while let Some(node) = heap.pop() {
        if Instant::now() >= deadline || node_limit.is_some_and(|l| nodes_explored >= l) {
            status = BnpStatus::TimeLimit;
            heap.push(node);
            break;
        }
        nodes_explored += 1;
        let node_id = nodes_explored;
        let depth = node.decisions.len();

        let log_node = |status_n: NodeStatus,
                            bound: f64,
                            heap: &BinaryHeap<OpenNode>,
                            incumbent: &Option<(u64, Vec<Vec<usize>>)>,
                            node_log: &mut Vec<BnpNodeRecord>| {
            let glb = glb_of(heap, incumbent).min(bound);
            node_log.push(BnpNodeRecord {
                node_id,
                depth,
                lp_bound: bound,
                status: status_n,
                incumbent: incumbent.as_ref().map(|(v, _)| *v),
                gap_percent: gap_of(incumbent, glb),
                elapsed: start.elapsed().as_secs_f64(),
            });
        };

        if let Some((inc_val, _)) = &incumbent {
            if ceil_bound(node.bound) >= *inc_val {
                log_node(NodeStatus::PrunedBound, node.bound, &heap, &incumbent, &mut node_log);
                continue;
            }
        }

        let constraints = match decisions_to_constraints(n, &node.decisions) {
            Ok(c) => c,
            Err(_) => {
                log_node(
                    NodeStatus::PrunedInfeasible,
                    node.bound,
                    &heap,
                    &incumbent,
                    &mut node_log,
                );
                continue;
            }
        };
        if first_unpackable_group(instance, &constraints).is_some() {
            log_node(
                NodeStatus::PrunedInfeasible,
                node.bound,
                &heap,
                &incumbent,
                &mut node_log,
            );
            continue;
        }

        // Seed the node RMP: surviving pool columns plus repair patterns
        // (the merged group of any uncovered item, or its singleton).
        let mut seeds: Vec<Vec<usize>> = global_pool
            .columns()
            .iter()
            .filter(|c| constraints.allows_column(&c.items))
            .map(|c| c.items.clone())
            .collect();
        let mut covered = vec![false; n];
        for s in &seeds {
            for &i in s {
                covered[i] = true;
            }
        }
        for i in 0..n {
            if !covered[i] {
                let group = constraints
                    .merged_groups
                    .iter()
                    .find(|g| g.contains(&i))
                    .cloned()
                    .unwrap_or_else(|| vec![i]);
                for &j in &group {
                    covered[j] = true;
                }
                seeds.push(group);
            }
        }

        let node_cfg = CgConfig {
            time_limit: (deadline.saturating_duration_since(Instant::now())).as_secs_f64(),
            rng_seed: seed_stream.next_u64(),
            model: cfg.model.clone(),
            ..cfg.clone()
        };
        let result = match cg::run_cg_node(instance, &node_cfg, &constraints, Some(&seeds), None) {
            Ok(r) => r,
            Err(CgError::UncoveredItem(_)) => {
                log_node(
                    NodeStatus::PrunedInfeasible,
                    node.bound,
                    &heap,
                    &incumbent,
                    &mut node_log,
                );
                continue;
            }
            Err(e) => panic!("node CG failed: {e}"),
        };

        for c in &result.final_columns {
            global_pool.add(c.items.clone());
        }

        if result.status == CgStatus::TimeLimit {
            // No converged bound for this node: keep it open under the
            // parent bound and stop.
            status = BnpStatus::TimeLimit;
            heap.push(OpenNode {
                bound: node.bound,
                fifo: node.fifo,
                decisions: node.decisions,
            });
            log_node(NodeStatus::Open, node.bound, &heap, &incumbent, &mut node_log);
            break;
        }

        let bound = result.lp_objective;
        debug_assert!(
            bound >= node.bound - 1e-7,
            "child bound {bound} below parent bound {}",
            node.bound
        );

        // Rounding heuristic keeps an incumbent around from the first node on.
        let cover = rounding_cover(&result.final_solution, &result.final_columns, n);
        let cover_value = cover.len() as u64;
        if incumbent.as_ref().map_or(true, |(v, _)| cover_value < *v) {
            incumbent = Some((cover_value, cover));
        }

        if let Some((inc_val, _)) = &incumbent {
            if ceil_bound(bound) >= *inc_val {
                log_node(NodeStatus::PrunedBound, bound, &heap, &incumbent, &mut node_log);
                continue;
            }
        }

        if let Some(selection) = integral_selection(&result.final_solution, &result.final_columns)
        {
            let value = selection.len() as u64;
            if incumbent.as_ref().map_or(true, |(v, _)| value < *v) {
                incumbent = Some((value, selection));
            }
            log_node(NodeStatus::Integral, bound, &heap, &incumbent, &mut node_log);
            continue;
        }

        let pair = select_branching_pair(
            &result.final_solution,
            &result.final_columns,
            n,
            &node.decisions,
        );
        for decision in [
            BranchDecision::together(pair.0, pair.1),
            BranchDecision::apart(pair.0, pair.1),
        ] {
            fifo += 1;
            let mut decisions = node.decisions.clone();
            decisions.push(decision);
            heap.push(OpenNode {
                bound,
                fifo,
                decisions,
            });
        }
        log_node(NodeStatus::Branched, bound, &heap, &incumbent, &mut node_log);
    }

    let global_lower_bound = glb_of(&heap, &incumbent);
    let gap_percent = if status == BnpStatus::Optimal {
        0.0
    } else {
        gap_of(&incumbent, global_lower_bound)
    };
    if status == BnpStatus::Optimal {
        assert!(
            incumbent.is_some(),
            "optimal termination requires an incumbent"
        );
    }
    let (incumbent_value, incumbent_patterns) = match incumbent {
        Some((v, p)) => (Some(v), p),
        None => (None, Vec::new()),
    };
    BnpResult {
        incumbent_value,
        incumbent_patterns,
        global_lower_bound: if status == BnpStatus::Optimal {
            incumbent_value.map_or(0.0, |v| v as f64)
        } else {
            global_lower_bound
        },
        gap_percent,
        nodes_explored,
        status,
        node_log,
    }
}

/// Integral master objectives let us round the LP bound up.
fn ceil_bound(bound: f64) -> u64 {
    (bound - BOUND_TOL).ceil().max(0.0) as u64
}

/// Node log rendered as CSV.
pub fn node_log_csv(log: &[BnpNodeRecord]) -> String {
    let mut out = String::from("node_id,depth,lp_bound,status,incumbent,gap,elapsed\n");
    for r in log {
        out.push_str(&format!(
            "{},{},{},{:?},{},{},{}\n",
            r.node_id,
            r.depth,
            r.lp_bound,
            r.status,
            r.incumbent.map_or(String::from(""), |v| v.to_string()),
            r.gap_percent,
            r.elapsed
        ));
    }
    out
}
