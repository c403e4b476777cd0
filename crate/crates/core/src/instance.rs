//! Instance data model: items with integer weights, a uniform bin capacity,
//! and a conflict graph forbidding pairs of items from sharing a bin.
//!
//! File formats are deliberately minimal. Instance file: line 1 is the item
//! count, line 2 the capacity, then one weight per line. Conflict file: one
//! edge per line as `i j` with 0-based indices.

use crate::rng::Xoshiro256;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("item {item} has weight {weight} exceeding capacity {capacity}")]
    InfeasibleItem {
        item: usize,
        weight: u64,
        capacity: u64,
    },
    #[error("item index {index} out of range (n_items = {n_items})")]
    IndexOutOfRange { index: usize, n_items: usize },
}

/// Undirected conflict graph over item indices. Symmetric, loop-free,
/// neighbor lists sorted ascending and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl ConflictGraph {
    pub fn empty(n_vertices: usize) -> Self {
        ConflictGraph {
            adjacency: vec![Vec::new(); n_vertices],
            edge_count: 0,
        }
    }

    pub fn complete(n_vertices: usize) -> Self {
        let adjacency = (0..n_vertices)
            .map(|i| (0..n_vertices).filter(|&j| j != i).collect())
            .collect();
        ConflictGraph {
            adjacency,
            edge_count: n_vertices * n_vertices.saturating_sub(1) / 2,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, InstanceError> {
        let mut adjacency = vec![Vec::new(); n_vertices];
        for (i, j) in edges {
            if i >= n_vertices {
                return Err(InstanceError::IndexOutOfRange {
                    index: i,
                    n_items: n_vertices,
                });
            }
            if j >= n_vertices {
                return Err(InstanceError::IndexOutOfRange {
                    index: j,
                    n_items: n_vertices,
                });
            }
            if i == j {
                return Err(InstanceError::Parse {
                    line: 0,
                    msg: format!("self-loop on vertex {i}"),
                });
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(ConflictGraph {
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges as (i, j) pairs with i < j, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, list) in self.adjacency.iter().enumerate() {
            for &j in list {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Returns a copy with extra edges added (used by branching).
    pub fn with_extra_edges(&self, extra: &[(usize, usize)]) -> Result<Self, InstanceError> {
        let mut edges = self.edges();
        edges.extend_from_slice(extra);
        ConflictGraph::from_edges(self.n_vertices(), edges)
    }
}

/// A bin packing instance with conflicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub capacity: u64,
    pub weights: Vec<u64>,
    pub conflicts: ConflictGraph,
}

/// Parameters for random conflict-graph generation: each unordered pair
/// becomes an edge independently with probability `density`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub density: f64,
    pub seed: u64,
    pub capacity_multiplier: u64,
}

impl GenConfig {
    pub fn new(density: f64, seed: u64, capacity_multiplier: u64) -> Self {
        assert!(
            (0.0..=1.0).contains(&density),
            "density must be in [0, 1], got {density}"
        );
        assert!(capacity_multiplier >= 1);
        GenConfig {
            density,
            seed,
            capacity_multiplier,
        }
    }
}

/// Outcome of checking a candidate pattern against capacity and conflicts.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternReport {
    pub total_weight: u64,
    pub capacity: u64,
    /// Present when total weight exceeds capacity.
    pub capacity_excess: Option<u64>,
    /// Every conflicting pair with both endpoints selected, i < j.
    pub conflict_violations: Vec<(usize, usize)>,
}

impl PatternReport {
    pub fn feasible(&self) -> bool {
        self.capacity_excess.is_none() && self.conflict_violations.is_empty()
    }
}

impl Instance {
    pub fn new(
        name: impl Into<String>,
        capacity: u64,
        weights: Vec<u64>,
        conflicts: ConflictGraph,
    ) -> Result<Self, InstanceError> {
        let name = name.into();
        assert!(!weights.is_empty(), "instance must have at least one item");
        assert_eq!(
            conflicts.n_vertices(),
            weights.len(),
            "conflict graph size must match item count"
        );
        assert!(capacity > 0, "capacity must be positive");
        for (item, &w) in weights.iter().enumerate() {
            if w == 0 {
                return Err(InstanceError::Parse {
                    line: 0,
                    msg: format!("item {item} has zero weight"),
                });
            }
            if w > capacity {
                return Err(InstanceError::InfeasibleItem {
                    item,
                    weight: w,
                    capacity,
                });
            }
        }
        Ok(Instance {
            name,
            capacity,
            weights,
            conflicts,
        })
    }

    pub fn n_items(&self) -> usize {
        self.weights.len()
    }
}

fn parse_int(token: &str, line: usize) -> Result<u64, InstanceError> {
    token.trim().parse::<u64>().map_err(|_| InstanceError::Parse {
        line,
        msg: format!("expected a non-negative integer, got {token:?}"),
    })
}

/// Parses an instance file and an optional conflict edge list. Without a
/// conflict file the graph is edgeless.
pub fn parse_instance(
    name: impl Into<String>,
    text: &str,
    conflict_text: Option<&str>,
) -> Result<Instance, InstanceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, n_line) = lines.next().ok_or(InstanceError::Parse {
        line: 1,
        msg: "missing item count".into(),
    })?;
    let n_items = parse_int(n_line, line_no)? as usize;
    if n_items == 0 {
        return Err(InstanceError::Parse {
            line: line_no,
            msg: "item count must be positive".into(),
        });
    }

    let (line_no, cap_line) = lines.next().ok_or(InstanceError::Parse {
        line: 2,
        msg: "missing capacity".into(),
    })?;
    let capacity = parse_int(cap_line, line_no)?;

    let mut weights = Vec::with_capacity(n_items);
    for _ in 0..n_items {
        let (line_no, w_line) = lines.next().ok_or_else(|| InstanceError::Parse {
            line: 0,
            msg: format!("expected {} weights, file ended early", n_items),
        })?;
        weights.push(parse_int(w_line, line_no)?);
    }
    if let Some((line_no, extra)) = lines.next() {
        return Err(InstanceError::Parse {
            line: line_no,
            msg: format!("unexpected trailing content {extra:?}"),
        });
    }

    let conflicts = match conflict_text {
        None => ConflictGraph::empty(n_items),
        Some(ct) => {
            let mut edges = Vec::new();
            for (i, raw) in ct.lines().enumerate() {
                let line_no = i + 1;
                let line = raw.trim();
                if line.is_empty() {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let a = parse_int(parts.next().unwrap(), line_no)? as usize;
                let b = parts
                    .next()
                    .ok_or_else(|| InstanceError::Parse {
                        line: line_no,
                        msg: "edge line needs two endpoints".into(),
                    })
                    .and_then(|t| parse_int(t, line_no))? as usize;
                if parts.next().is_some() {
                    return Err(InstanceError::Parse {
                        line: line_no,
                        msg: "edge line has more than two tokens".into(),
                    });
                }
                if a >= n_items || b >= n_items {
                    return Err(InstanceError::Parse {
                        line: line_no,
                        msg: format!("edge ({a}, {b}) out of range for {n_items} items"),
                    });
                }
                if a == b {
                    return Err(InstanceError::Parse {
                        line: line_no,
                        msg: format!("self-loop on vertex {a}"),
                    });
                }
                edges.push((a, b));
            }
            ConflictGraph::from_edges(n_items, edges)?
        }
    };

    Instance::new(name, capacity, weights, conflicts)
}

/// Serializes the weights part of an instance in the same format
/// `parse_instance` accepts.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n{}\n", instance.n_items(), instance.capacity));
    for w in &instance.weights {
        out.push_str(&format!("{w}\n"));
    }
    out
}

/// Serializes the conflict graph as an edge list, `i j` per line with i < j.
pub fn serialize_conflicts(instance: &Instance) -> String {
    let mut out = String::new();
    for (i, j) in instance.conflicts.edges() {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}

/// Replaces the conflict graph with a random G(n, p) graph: every unordered
/// pair (i, j), i < j, becomes an edge with probability `cfg.density`. Pure
/// function of (instance, cfg); pair order is fixed (i ascending, then j).
pub fn generate_conflicts(instance: &Instance, cfg: &GenConfig) -> Instance {
    let n = instance.n_items();
    let mut rng = Xoshiro256::seed_from_u64(cfg.seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.next_f64() < cfg.density {
                edges.push((i, j));
            }
        }
    }
    let conflicts = ConflictGraph::from_edges(n, edges).expect("generated edges are in range");
    Instance {
        name: instance.name.clone(),
        capacity: instance.capacity,
        weights: instance.weights.clone(),
        conflicts,
    }
}

/// Returns a copy with capacity scaled by `multiplier`; weights and conflicts
/// are unchanged.
pub fn apply_capacity_multiplier(instance: &Instance, multiplier: u64) -> Instance {
    assert!(multiplier >= 1);
    Instance {
        name: instance.name.clone(),
        capacity: instance.capacity * multiplier,
        weights: instance.weights.clone(),
        conflicts: instance.conflicts.clone(),
    }
}

/// Checks a candidate pattern against capacity and conflict constraints,
/// listing every violation.
pub fn validate_pattern(instance: &Instance, items: &[usize]) -> Result<PatternReport, InstanceError> {
    let n = instance.n_items();
    for &i in items {
        if i >= n {
            return Err(InstanceError::IndexOutOfRange {
                index: i,
                n_items: n,
            });
        }
    }
    let mut sorted: Vec<usize> = items.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let total_weight: u64 = sorted.iter().map(|&i| instance.weights[i]).sum();
    let capacity_excess = if total_weight > instance.capacity {
        Some(total_weight - instance.capacity)
    } else {
        None
    };

    let mut conflict_violations = Vec::new();
    for (a_pos, &i) in sorted.iter().enumerate() {
        for &j in &sorted[a_pos + 1..] {
            if instance.conflicts.has_edge(i, j) {
                conflict_violations.push((i, j));
            }
        }
    }

    Ok(PatternReport {
        total_weight,
        capacity: instance.capacity,
        capacity_excess,
        conflict_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn simple_instance() -> Instance {
        parse_instance("t", "3\n10\n4\n5\n6\n", None).unwrap()
    }

    #[test]
    fn parse_minimal_instance() {
        let inst = simple_instance();
        assert_eq!(inst.n_items(), 3);
        assert_eq!(inst.capacity, 10);
        assert_eq!(inst.weights, vec![4, 5, 6]);
        assert_eq!(inst.conflicts.edge_count(), 0);
    }

    #[test]
    fn parse_rejects_oversized_item() {
        let err = parse_instance("t", "2\n10\n4\n11\n", None).unwrap_err();
        assert_eq!(
            err,
            InstanceError::InfeasibleItem {
                item: 1,
                weight: 11,
                capacity: 10
            }
        );
    }

    #[test]
    fn parse_conflict_edges_are_symmetric() {
        let inst = parse_instance("t", "3\n10\n4\n5\n6\n", Some("0 1\n")).unwrap();
        assert_eq!(inst.conflicts.neighbors(0), &[1]);
        assert_eq!(inst.conflicts.neighbors(1), &[0]);
        assert_eq!(inst.conflicts.neighbors(2), &[] as &[usize]);
        assert!(inst.conflicts.has_edge(0, 1));
        assert!(inst.conflicts.has_edge(1, 0));
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_instance("t", "2\n10\nfour\n5\n", None).unwrap_err();
        match err {
            InstanceError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_out_of_range_edge() {
        let err = parse_instance("t", "3\n10\n4\n5\n6\n", Some("0 7\n")).unwrap_err();
        assert!(matches!(err, InstanceError::Parse { line: 1, .. }));
    }

    #[test]
    fn density_zero_and_one_are_degenerate() {
        let base = parse_instance("t", "5\n10\n1\n1\n1\n1\n1\n", None).unwrap();
        let none = generate_conflicts(&base, &GenConfig::new(0.0, 3, 1));
        assert_eq!(none.conflicts.edge_count(), 0);
        let full = generate_conflicts(&base, &GenConfig::new(1.0, 3, 1));
        assert_eq!(full.conflicts.edge_count(), 10);
    }

    #[test]
    fn density_half_edge_count_within_three_sigma() {
        // n = 200: C(200,2) = 19900 pairs, mean 9950, sigma = sqrt(19900 * 0.25) ~= 70.53
        let weights = vec![1u64; 200];
        let base = Instance::new("t", 10, weights, ConflictGraph::empty(200)).unwrap();
        let mean = 9950.0;
        let sigma = (19900.0f64 * 0.25).sqrt();
        for seed in 0..20 {
            let g = generate_conflicts(&base, &GenConfig::new(0.5, seed, 1));
            let e = g.conflicts.edge_count() as f64;
            assert!(
                (e - mean).abs() <= 3.0 * sigma,
                "seed {seed}: edge count {e} outside 3 sigma of {mean}"
            );
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let weights = vec![5u64; 30];
        let inst = Instance::new("t", 100, weights, ConflictGraph::empty(30)).unwrap();
        let a = generate_conflicts(&inst, &GenConfig::new(0.5, 99, 1));
        let b = generate_conflicts(&inst, &GenConfig::new(0.5, 99, 1));
        assert_eq!(a, b);
        let c = generate_conflicts(&inst, &GenConfig::new(0.5, 100, 1));
        assert_ne!(a, c);
    }

    #[test]
    fn capacity_multiplier_scales_only_capacity() {
        let inst = simple_instance();
        let one = apply_capacity_multiplier(&inst, 1);
        assert_eq!(one.capacity, 10);
        let m15 = apply_capacity_multiplier(&inst, 15);
        assert_eq!(m15.capacity, 150);
        assert_eq!(m15.weights, inst.weights);
        let m5 = apply_capacity_multiplier(&inst, 5);
        assert_eq!(m5.capacity, 50);
        assert_eq!(m5.conflicts, inst.conflicts);
    }

    #[test]
    fn validate_pattern_capacity_and_conflicts() {
        let inst = simple_instance();
        let ok = validate_pattern(&inst, &[0, 1]).unwrap();
        assert!(ok.feasible());
        assert_eq!(ok.total_weight, 9);

        let over = validate_pattern(&inst, &[0, 1, 2]).unwrap();
        assert!(!over.feasible());
        assert_eq!(over.capacity_excess, Some(5));

        let with_edge = parse_instance("t", "3\n10\n4\n5\n6\n", Some("0 1\n")).unwrap();
        let conflicted = validate_pattern(&with_edge, &[0, 1]).unwrap();
        assert!(!conflicted.feasible());
        assert_eq!(conflicted.conflict_violations, vec![(0, 1)]);

        assert!(validate_pattern(&inst, &[5]).is_err());
    }

    #[test]
    fn validate_pattern_matches_exhaustive_check() {
        // Random instances, every subset, against a direct constraint evaluation.
        let mut rng = Xoshiro256::seed_from_u64(17);
        for _ in 0..5 {
            let n = 12;
            let weights: Vec<u64> = (0..n).map(|_| rng.gen_range_inclusive(1, 10)).collect();
            let capacity = 20;
            let inst = Instance::new("t", capacity, weights.clone(), ConflictGraph::empty(n))
                .unwrap();
            let inst = generate_conflicts(&inst, &GenConfig::new(0.4, rng.next_u64(), 1));
            for mask in 0u32..(1 << n) {
                let items: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let report = validate_pattern(&inst, &items).unwrap();
                let weight: u64 = items.iter().map(|&i| inst.weights[i]).sum();
                let mut conflict = false;
                for (a_pos, &i) in items.iter().enumerate() {
                    for &j in &items[a_pos + 1..] {
                        if inst.conflicts.has_edge(i, j) {
                            conflict = true;
                        }
                    }
                }
                assert_eq!(report.feasible(), weight <= capacity && !conflict);
            }
        }
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(
            n in 1usize..40,
            cap in 1u64..capacity_max(),
            seed in any::<u64>(),
            density in 0.0f64..=1.0,
        ) {
            let mut rng = Xoshiro256::seed_from_u64(seed);
            let weights: Vec<u64> = (0..n).map(|_| rng.gen_range_inclusive(1, cap)).collect();
            let inst = Instance::new("rt", cap, weights, ConflictGraph::empty(n)).unwrap();
            let inst = generate_conflicts(&inst, &GenConfig::new(density, seed, 1));
            let text = serialize_instance(&inst);
            let conf = serialize_conflicts(&inst);
            let parsed = parse_instance("rt", &text, Some(&conf)).unwrap();
            prop_assert_eq!(parsed, inst);
        }
    }

    fn capacity_max() -> u64 {
        1_000
    }
}
