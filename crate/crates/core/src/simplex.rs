//! Revised primal simplex for the set-covering restricted master problem:
//!
//! ```text
//!   minimize    sum_P z_P
//!   subject to  sum_{P : i in P} z_P >= 1   for every item i
//!               z_P >= 0
//! ```
//!
//! Surplus variables turn the rows into equalities; a phase-1 pass with
//! artificial variables builds the first basis, after which re-solves warm
//! start from the previous optimal basis. Entering variables are chosen by
//! Dantzig pricing, switching to Bland's rule after a fixed pivot budget to
//! break cycling. Dual values are read off the final basis and certified
//! (primal/dual feasibility, complementary slackness, duality gap) on every
//! solve.

/// A packing pattern stored in the column pool. `items` is sorted and
/// duplicate-free; `id` is assigned once at pool insertion and never reused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub id: u64,
    pub items: Vec<usize>,
}

impl Column {
    pub fn new(id: u64, mut items: Vec<usize>) -> Self {
        items.sort_unstable();
        items.dedup();
        assert!(!items.is_empty(), "columns must be non-empty");
        Column { id, items }
    }
}

/// Reduced cost of a pattern under dual values: `1 - sum_{i in P} pi_i`.
pub fn reduced_cost(items: &[usize], duals: &[f64]) -> f64 {
    1.0 - items.iter().map(|&i| duals[i]).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    /// Value per input column, in input order.
    pub primal: Vec<f64>,
    /// Dual value per covering row (item). Non-negative at optimality.
    pub duals: Vec<f64>,
    /// Simplex pivots performed in this call (0 when warm start was already
    /// optimal).
    pub pivots: usize,
}

/// Snapshot of an optimal basis. A later call with a superset of the same
/// columns resumes from this basis instead of running phase 1.
#[derive(Debug, Clone, Default)]
pub struct BasisToken {
    vars: Vec<BasisVar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BasisVar {
    Col(u64),
    Surplus(usize),
}

const EPS_PIVOT: f64 = 1e-9;
const EPS_GAP: f64 = 1e-7;
const HARD_PIVOT_CAP: usize = 4_000_000;
const REFACTOR_EVERY: usize = 64;

struct Tableau<'a> {
    cols: &'a [Column],
    m: usize,
    /// Basic variable per row. Indices: `0..n` columns, `n..n+m` surplus,
    /// `n+m..n+2m` artificials (phase 1 only).
    basis: Vec<usize>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    pivots: usize,
    pivots_since_refactor: usize,
}

impl<'a> Tableau<'a> {
    fn n(&self) -> usize {
        self.cols.len()
    }

    fn is_artificial(&self, var: usize) -> bool {
        var >= self.n() + self.m
    }

    /// Dot product of a length-m vector with the constraint column of `var`.
    fn dot_col(&self, v: &[f64], var: usize) -> f64 {
        let n = self.n();
        if var < n {
            self.cols[var].items.iter().map(|&i| v[i]).sum()
        } else if var < n + self.m {
            -v[var - n]
        } else {
            v[var - n - self.m]
        }
    }

    /// d = B^-1 a_var.
    fn ftran(&self, var: usize) -> Vec<f64> {
        let m = self.m;
        let mut d = vec![0.0; m];
        let n = self.n();
        if var < n {
            for i in 0..m {
                let row = &self.binv[i * m..(i + 1) * m];
                d[i] = self.cols[var].items.iter().map(|&r| row[r]).sum();
            }
        } else if var < n + m {
            let j = var - n;
            for i in 0..m {
                d[i] = -self.binv[i * m + j];
            }
        } else {
            let j = var - n - m;
            for i in 0..m {
                d[i] = self.binv[i * m + j];
            }
        }
        d
    }

    /// y = c_B^T B^-1 for the given per-variable cost function.
    fn multipliers(&self, cost: impl Fn(usize) -> f64) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &var) in self.basis.iter().enumerate() {
            let c = cost(var);
            if c != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for j in 0..m {
                    y[j] += c * row[j];
                }
            }
        }
        y
    }

    fn pivot(&mut self, row: usize, entering: usize, d: &[f64]) {
        let m = self.m;
        let theta = self.xb[row] / d[row];
        for i in 0..m {
            if i != row {
                self.xb[i] -= theta * d[i];
            }
        }
        self.xb[row] = theta;

        let pivot_val = d[row];
        let (before, rest) = self.binv.split_at_mut(row * m);
        let (prow, after) = rest.split_at_mut(m);
        for x in prow.iter_mut() {
            *x /= pivot_val;
        }
        for (i, chunk) in before.chunks_mut(m).enumerate() {
            let di = d[i];
            if di != 0.0 {
                for (x, &p) in chunk.iter_mut().zip(prow.iter()) {
                    *x -= di * p;
                }
            }
        }
        for (k, chunk) in after.chunks_mut(m).enumerate() {
            let di = d[row + 1 + k];
            if di != 0.0 {
                for (x, &p) in chunk.iter_mut().zip(prow.iter()) {
                    *x -= di * p;
                }
            }
        }

        self.basis[row] = entering;
        self.pivots += 1;
        self.pivots_since_refactor += 1;
        if self.pivots_since_refactor >= REFACTOR_EVERY {
            self.refactor();
        }
    }

    /// Rebuilds B^-1 and x_B from scratch for the current basis.
    /// Returns false if the basis matrix is singular.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        // Augmented [B | I], Gauss-Jordan with partial pivoting.
        let mut aug = vec![0.0f64; m * 2 * m];
        for (k, &var) in self.basis.iter().enumerate() {
            let n = self.n();
            if var < n {
                for &i in &self.cols[var].items {
                    aug[i * 2 * m + k] = 1.0;
                }
            } else if var < n + m {
                aug[(var - n) * 2 * m + k] = -1.0;
            } else {
                aug[(var - n - m) * 2 * m + k] = 1.0;
            }
        }
        for i in 0..m {
            aug[i * 2 * m + m + i] = 1.0;
        }
        let w = 2 * m;
        for col in 0..m {
            let mut best = col;
            let mut best_abs = aug[col * w + col].abs();
            for r in (col + 1)..m {
                let a = aug[r * w + col].abs();
                if a > best_abs {
                    best_abs = a;
                    best = r;
                }
            }
            if best_abs < 1e-12 {
                return false;
            }
            if best != col {
                for j in 0..w {
                    aug.swap(col * w + j, best * w + j);
                }
            }
            let pv = aug[col * w + col];
            for j in 0..w {
                aug[col * w + j] /= pv;
            }
            for r in 0..m {
                if r != col {
                    let f = aug[r * w + col];
                    if f != 0.0 {
                        for j in 0..w {
                            aug[r * w + j] -= f * aug[col * w + j];
                        }
                    }
                }
            }
        }
        // B^-1 is found by column permutation: row k of binv corresponds to
        // basis position k, i.e. binv = P where P solves B P = I. After the
        // elimination, row i of the right block holds row i of B^-1 in the
        // eliminated (identity) ordering, which is exactly basis order.
        for i in 0..m {
            for j in 0..m {
                self.binv[i * m + j] = aug[i * w + m + j];
            }
        }
        let mut xb = vec![0.0; m];
        for i in 0..m {
            xb[i] = self.binv[i * m..(i + 1) * m].iter().sum();
        }
        self.xb = xb;
        self.pivots_since_refactor = 0;
        true
    }

    /// One simplex phase. `eligible_end` bounds entering variables
    /// (columns and surplus only; artificials never re-enter). Returns when
    /// no entering variable prices out negative.
    fn run_phase(&mut self, cost: &dyn Fn(usize) -> f64, pivot_budget: usize) {
        let n = self.n();
        let m = self.m;
        let eligible_end = n + m;
        loop {
            if self.pivots >= HARD_PIVOT_CAP {
                panic!("simplex exceeded hard pivot cap; cycling guard failed");
            }
            let bland = self.pivots >= pivot_budget;
            let y = self.multipliers(cost);
            let mut in_basis = vec![false; n + 2 * m];
            for &v in &self.basis {
                in_basis[v] = true;
            }

            let mut entering: Option<(usize, f64)> = None;
            for var in 0..eligible_end {
                if in_basis[var] {
                    continue;
                }
                let rc = cost(var) - self.dot_col(&y, var);
                if rc < -EPS_PIVOT {
                    if bland {
                        entering = Some((var, rc));
                        break;
                    }
                    match entering {
                        Some((_, best)) if rc >= best => {}
                        _ => entering = Some((var, rc)),
                    }
                }
            }
            let Some((q, _)) = entering else {
                return;
            };

            let d = self.ftran(q);
            let mut theta = f64::INFINITY;
            for i in 0..m {
                if d[i] > EPS_PIVOT {
                    let ratio = self.xb[i] / d[i];
                    if ratio < theta {
                        theta = ratio;
                    }
                }
            }
            assert!(
                theta.is_finite(),
                "covering LP cannot be unbounded; numerical breakdown"
            );
            // Leaving row: minimal ratio, preferring artificials, then the
            // smallest basic variable index (Bland-compatible).
            let mut leave: Option<usize> = None;
            for i in 0..m {
                if d[i] > EPS_PIVOT {
                    let ratio = self.xb[i] / d[i];
                    if ratio <= theta + 1e-12 * (1.0 + theta.abs()) {
                        leave = match leave {
                            None => Some(i),
                            Some(cur) => {
                                let better = match (
                                    self.is_artificial(self.basis[i]),
                                    self.is_artificial(self.basis[cur]),
                                ) {
                                    (true, false) => true,
                                    (false, true) => false,
                                    _ => self.basis[i] < self.basis[cur],
                                };
                                Some(if better { i } else { cur })
                            }
                        };
                    }
                }
            }
            self.pivot(leave.unwrap(), q, &d);
        }
    }
}

/// Coverage check: every item must appear in at least one column.
fn all_covered(columns: &[Column], n_items: usize) -> bool {
    let mut covered = vec![false; n_items];
    for c in columns {
        for &i in &c.items {
            covered[i] = true;
        }
    }
    covered.into_iter().all(|c| c)
}

fn infeasible() -> (LpSolution, BasisToken) {
    (
        LpSolution {
            status: LpStatus::Infeasible,
            objective: f64::INFINITY,
            primal: Vec::new(),
            duals: Vec::new(),
            pivots: 0,
        },
        BasisToken::default(),
    )
}

/// Solves the covering LP over the given columns. `warm` may hold the basis
/// returned by a previous call on a subset of these columns (matched by
/// column id); an unusable token falls back to a cold start.
pub fn solve_rmp(
    columns: &[Column],
    n_items: usize,
    warm: Option<&BasisToken>,
) -> (LpSolution, BasisToken) {
    assert!(n_items > 0);
    for c in columns {
        assert!(
            c.items.iter().all(|&i| i < n_items),
            "column {} references an out-of-range item",
            c.id
        );
    }
    if !all_covered(columns, n_items) {
        return infeasible();
    }

    let n = columns.len();
    let m = n_items;
    let mut t = Tableau {
        cols: columns,
        m,
        basis: Vec::new(),
        binv: vec![0.0; m * m],
        xb: vec![0.0; m],
        pivots: 0,
        pivots_since_refactor: 0,
    };

    let pivot_budget = 20 * (n + m) + 200;

    let warm_ok = warm.map_or(false, |token| try_warm_start(&mut t, token));
    if !warm_ok {
        // Phase 1: artificial basis, minimize the artificial sum.
        t.basis = (0..m).map(|i| n + m + i).collect();
        for i in 0..m {
            t.binv[i * m + i] = 1.0;
            t.xb[i] = 1.0;
        }
        t.pivots_since_refactor = 0;
        let nn = n;
        let phase1_cost = move |var: usize| if var >= nn + m { 1.0 } else { 0.0 };
        t.run_phase(&phase1_cost, pivot_budget);
        let artificial_sum: f64 = t
            .basis
            .iter()
            .zip(&t.xb)
            .filter(|(&v, _)| v >= n + m)
            .map(|(_, &x)| x)
            .sum();
        assert!(
            artificial_sum <= 1e-7,
            "phase 1 failed on a covered instance (residual {artificial_sum})"
        );
        drive_out_artificials(&mut t);
    }

    let nn = n;
    let phase2_cost = move |var: usize| if var < nn { 1.0 } else { 0.0 };
    t.run_phase(&phase2_cost, pivot_budget);
    // A clean factorization before extracting the certificate.
    assert!(t.refactor(), "optimal basis became singular");
    t.run_phase(&phase2_cost, pivot_budget + t.pivots);

    extract_solution(t, columns, n_items)
}

fn try_warm_start(t: &mut Tableau, token: &BasisToken) -> bool {
    let m = t.m;
    if token.vars.len() != m {
        return false;
    }
    let n = t.n();
    let mut id_to_pos = std::collections::HashMap::with_capacity(n);
    for (pos, c) in t.cols.iter().enumerate() {
        id_to_pos.insert(c.id, pos);
    }
    let mut basis = Vec::with_capacity(m);
    for v in &token.vars {
        match v {
            BasisVar::Col(id) => match id_to_pos.get(id) {
                Some(&pos) => basis.push(pos),
                None => return false,
            },
            BasisVar::Surplus(row) => {
                if *row >= m {
                    return false;
                }
                basis.push(n + row);
            }
        }
    }
    t.basis = basis;
    if !t.refactor() {
        return false;
    }
    t.xb.iter().all(|&x| x >= -EPS_PIVOT)
}

fn drive_out_artificials(t: &mut Tableau) {
    let n = t.n();
    let m = t.m;
    for row in 0..m {
        if !t.is_artificial(t.basis[row]) {
            continue;
        }
        let mut replaced = false;
        for var in 0..(n + m) {
            if t.basis.contains(&var) {
                continue;
            }
            let d = t.ftran(var);
            if d[row].abs() > 1e-7 {
                // Degenerate exchange: the artificial sits at value ~0.
                t.xb[row] = 0.0;
                t.pivot(row, var, &d);
                replaced = true;
                break;
            }
        }
        assert!(
            replaced,
            "artificial variable stuck in basis; constraint matrix lost rank"
        );
    }
}

fn extract_solution(
    t: Tableau,
    columns: &[Column],
    n_items: usize,
) -> (LpSolution, BasisToken) {
    let n = columns.len();


    let mut primal = vec![0.0; n];
    for (i, &var) in t.basis.iter().enumerate() {
        if var < n {
            primal[var] = t.xb[i];
        }
    }
    let y = t.multipliers(|var| if var < n { 1.0 } else { 0.0 });
    let objective: f64 = primal.iter().sum();

    certify(columns, n_items, &primal, &y, objective);

    let duals = y.iter().map(|&v| v.max(0.0)).collect();
    let token = BasisToken {
        vars: t
            .basis
            .iter()
            .map(|&var| {
                if var < n {
                    BasisVar::Col(columns[var].id)
                } else {
                    BasisVar::Surplus(var - n)
                }
            })
            .collect(),
    };
    (
        LpSolution {
            status: LpStatus::Optimal,
            objective,
            primal,
            duals,
            pivots: t.pivots,
        },
        token,
    )
}

/// Optimality certificate, checked on every solve: primal feasibility, dual
/// feasibility, complementary slackness, and the duality gap.
fn certify(columns: &[Column], n_items: usize, primal: &[f64], y: &[f64], objective: f64) {
    let scale = 1.0 + objective.abs();
    let feas_tol = 1e-9 * scale;

    let mut coverage = vec![0.0; n_items];
    for (c, &z) in columns.iter().zip(primal) {
        assert!(z >= -feas_tol, "negative primal value {z} on column {}", c.id);
        if z != 0.0 {
            for &i in &c.items {
                coverage[i] += z;
            }
        }
    }
    for (i, &cov) in coverage.iter().enumerate() {
        assert!(
            cov >= 1.0 - feas_tol,
            "row {i} under-covered: {cov} < 1"
        );
    }
    for (i, &pi) in y.iter().enumerate() {
        assert!(pi >= -feas_tol, "negative dual {pi} on row {i}");
        let slack = coverage[i] - 1.0;
        assert!(
            (pi.max(0.0) * slack).abs() <= feas_tol * (1.0 + slack.abs()),
            "complementary slackness violated on row {i}: pi={pi} slack={slack}"
        );
    }
    for (c, &z) in columns.iter().zip(primal) {
        let rc = reduced_cost(&c.items, y);
        assert!(
            rc >= -feas_tol,
            "dual infeasibility: column {} has reduced cost {rc}",
            c.id
        );
        assert!(
            (z * rc).abs() <= feas_tol * (1.0 + z.abs()),
            "complementary slackness violated on column {}: z={z} rc={rc}",
            c.id
        );
    }
    let dual_objective: f64 = y.iter().sum();
    assert!(
        (objective - dual_objective).abs() <= EPS_GAP * scale,
        "duality gap too large: primal {objective} vs dual {dual_objective}"
    );
}

/// Plain-text dump of a solved covering LP, one record per line:
/// a header, then `column <id> z=<value> rc=<value> items=<i1,i2,...>` for
/// every column and `dual <row> pi=<value>` for every row.
pub fn format_lp(columns: &[Column], n_items: usize, solution: &LpSolution) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "covering-lp rows={} columns={} status={:?} objective={}\n",
        n_items,
        columns.len(),
        solution.status,
        solution.objective
    ));
    if solution.status != LpStatus::Optimal {
        return out;
    }
    for (c, &z) in columns.iter().zip(&solution.primal) {
        let items: Vec<String> = c.items.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(
            "column {} z={} rc={} items={}\n",
            c.id,
            z,
            reduced_cost(&c.items, &solution.duals),
            items.join(",")
        ));
    }
    for (i, pi) in solution.duals.iter().enumerate() {
        out.push_str(&format!("dual {i} pi={pi}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xoshiro256;

    fn cols(sets: &[&[usize]]) -> Vec<Column> {
        sets.iter()
            .enumerate()
            .map(|(id, s)| Column::new(id as u64, s.to_vec()))
            .collect()
    }

    /// Exhaustive vertex enumeration over bases of [A | -I]: the optimal
    /// objective of a feasible bounded covering LP is attained at a basic
    /// feasible solution.
    fn enumerate_optimum(columns: &[Column], m: usize) -> Option<f64> {
        let n = columns.len();
        let total = n + m;
        let mut best: Option<f64> = None;
        let mut choose = vec![0usize; m];
        fn rec(
            start: usize,
            k: usize,
            choose: &mut Vec<usize>,
            total: usize,
            m: usize,
            columns: &[Column],
            best: &mut Option<f64>,
        ) {
            if k == m {
                if let Some(obj) = basis_objective(choose, columns, m) {
                    *best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
                return;
            }
            for v in start..total {
                choose[k] = v;
                rec(v + 1, k + 1, choose, total, m, columns, best);
            }
        }
        rec(0, 0, &mut choose, total, m, columns, &mut best);
        best
    }

    fn basis_objective(basis: &[usize], columns: &[Column], m: usize) -> Option<f64> {
        let n = columns.len();
        // Solve B x = 1 by Gaussian elimination.
        let mut a = vec![0.0f64; m * (m + 1)];
        let w = m + 1;
        for (k, &var) in basis.iter().enumerate() {
            if var < n {
                for &i in &columns[var].items {
                    a[i * w + k] = 1.0;
                }
            } else {
                a[(var - n) * w + k] = -1.0;
            }
        }
        for i in 0..m {
            a[i * w + m] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = a[col * w + col].abs();
            for r in (col + 1)..m {
                if a[r * w + col].abs() > best {
                    best = a[r * w + col].abs();
                    piv = r;
                }
            }
            if best < 1e-9 {
                return None;
            }
            if piv != col {
                for j in 0..w {
                    a.swap(col * w + j, piv * w + j);
                }
            }
            let pv = a[col * w + col];
            for j in 0..w {
                a[col * w + j] /= pv;
            }
            for r in 0..m {
                if r != col {
                    let f = a[r * w + col];
                    for j in 0..w {
                        a[r * w + j] -= f * a[col * w + j];
                    }
                }
            }
        }
        let mut obj = 0.0;
        for (k, &var) in basis.iter().enumerate() {
            let x = a[k * w + m];
            if x < -1e-9 {
                return None;
            }
            if var < n {
                obj += x;
            }
        }
        Some(obj)
    }

    #[test]
    fn singleton_covering() {
        let columns = cols(&[&[0], &[1], &[2]]);
        let (sol, _) = solve_rmp(&columns, 3, None);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 3.0).abs() < 1e-9);
        for &z in &sol.primal {
            assert!((z - 1.0).abs() < 1e-9);
        }
        for &pi in &sol.duals {
            assert!((pi - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pair_dominates_singletons() {
        let columns = cols(&[&[0, 1], &[0], &[1]]);
        let (sol, _) = solve_rmp(&columns, 2, None);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
        assert!((sol.primal[0] - 1.0).abs() < 1e-9);
        // Dual is degenerate; only the sum is pinned.
        assert!((sol.duals[0] + sol.duals[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn odd_cycle_fractional_covering() {
        let columns = cols(&[&[0, 1], &[1, 2], &[0, 2]]);
        let (sol, _) = solve_rmp(&columns, 3, None);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.5).abs() < 1e-9);
        for &z in &sol.primal {
            assert!((z - 0.5).abs() < 1e-9);
        }
        for &pi in &sol.duals {
            assert!((pi - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn uncovered_item_is_infeasible() {
        let columns = cols(&[&[0], &[1]]);
        let (sol, _) = solve_rmp(&columns, 3, None);
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn reduced_cost_examples() {
        assert!((reduced_cost(&[0, 1], &[0.5, 0.5, 0.5]) - 0.0).abs() < 1e-15);
        assert!((reduced_cost(&[0, 1], &[0.9, 0.9]) - (-0.8)).abs() < 1e-12);
        assert!((reduced_cost(&[2], &[0.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_vertex_enumeration_on_random_tiny_lps() {
        let mut rng = Xoshiro256::seed_from_u64(2024);
        let mut checked = 0;
        while checked < 100 {
            let m = 2 + rng.gen_index(5); // items in 2..=6
            let n_cols = 3 + rng.gen_index(10); // columns in 3..=12
            let mut columns = Vec::new();
            for id in 0..n_cols {
                let mut items = Vec::new();
                for i in 0..m {
                    if rng.next_f64() < 0.5 {
                        items.push(i);
                    }
                }
                if items.is_empty() {
                    items.push(rng.gen_index(m));
                }
                columns.push(Column::new(id as u64, items));
            }
            if !all_covered(&columns, m) {
                continue;
            }
            checked += 1;
            let (sol, _) = solve_rmp(&columns, m, None);
            assert_eq!(sol.status, LpStatus::Optimal);
            let oracle = enumerate_optimum(&columns, m).expect("covered LP has a BFS");
            assert!(
                (sol.objective - oracle).abs() <= 1e-7,
                "simplex {} vs oracle {}",
                sol.objective,
                oracle
            );
        }
    }

    #[test]
    fn warm_start_resumes_from_previous_basis() {
        let columns = cols(&[&[0], &[1], &[2], &[3]]);
        let (sol, token) = solve_rmp(&columns, 4, None);
        assert!((sol.objective - 4.0).abs() < 1e-9);

        let mut more = columns.clone();
        more.push(Column::new(4, vec![0, 1]));
        more.push(Column::new(5, vec![2, 3]));
        let (warm_sol, _) = solve_rmp(&more, 4, Some(&token));
        let (cold_sol, _) = solve_rmp(&more, 4, None);
        assert!((warm_sol.objective - 2.0).abs() < 1e-9);
        assert!((warm_sol.objective - cold_sol.objective).abs() < 1e-9);
        assert!(
            warm_sol.pivots <= cold_sol.pivots,
            "warm start should not pivot more than cold ({} vs {})",
            warm_sol.pivots,
            cold_sol.pivots
        );
    }

    #[test]
    fn adding_columns_respects_reduced_cost_direction() {
        let mut rng = Xoshiro256::seed_from_u64(5);
        for _ in 0..20 {
            let m = 3 + rng.gen_index(3);
            let mut columns = Vec::new();
            for id in 0..m {
                columns.push(Column::new(id as u64, vec![id]));
            }
            for id in m..(m + 3) {
                let mut items: Vec<usize> =
                    (0..m).filter(|_| rng.next_f64() < 0.5).collect();
                if items.is_empty() {
                    items.push(rng.gen_index(m));
                }
                items.sort_unstable();
                items.dedup();
                columns.push(Column::new(id as u64, items));
            }
            let (sol, _) = solve_rmp(&columns, m, None);

            // A column with non-negative reduced cost leaves the optimum alone.
            let mut ge_items: Vec<usize> = Vec::new();
            let mut acc = 0.0;
            for i in 0..m {
                if acc + sol.duals[i] <= 1.0 + 1e-12 {
                    acc += sol.duals[i];
                    ge_items.push(i);
                }
            }
            if !ge_items.is_empty() {
                let mut with_ge = columns.clone();
                with_ge.push(Column::new(999, ge_items));
                let (sol2, _) = solve_rmp(&with_ge, m, None);
                assert!(sol2.objective >= sol.objective - 1e-9);
                assert!(sol2.objective <= sol.objective + 1e-9);
            }

            // A strictly improving column can only lower the objective.
            let all: Vec<usize> = (0..m).collect();
            if reduced_cost(&all, &sol.duals) < -1e-9 {
                let mut with_neg = columns.clone();
                with_neg.push(Column::new(1000, all));
                let (sol3, _) = solve_rmp(&with_neg, m, None);
                assert!(sol3.objective <= sol.objective + 1e-9);
            }
        }
    }
}
