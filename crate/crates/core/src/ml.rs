//! Offline learning pipeline: per-item features of a pricing problem,
//! training-data collection from column generation runs, a class-weighted
//! linear SVM trained by a deterministic full-batch subgradient scheme,
//! Platt calibration of the classifier scores, and plain-text model
//! serialization.

use crate::cg::{self, CgConfig, CgStatus, PricingKind, PricingObserver};
use crate::instance::Instance;
use crate::pricing::{PricingProblem, PricingSolution};
use crate::rng::Xoshiro256;
use crate::sampling;
use thiserror::Error;

pub const N_FEATURES: usize = 6;

/// Normalization policy identifier stored in model files; predictions are
/// only valid when features were produced under the same policy.
pub const NORMALIZATION_POLICY: &str = "instance-minmax-v1";

/// Per-item feature vector. `f1` (profit), `f3` (degree) are min-max
/// normalized by definition; `f2` (profit per weight), `f4` (non-conflict
/// profit bound), and `fr` (rank score) are additionally min-max normalized
/// per instance; `fc` is a Pearson correlation in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    pub fc: f64,
    pub fr: f64,
}

impl FeatureVector {
    pub fn as_array(&self) -> [f64; N_FEATURES] {
        [self.f1, self.f2, self.f3, self.f4, self.fc, self.fr]
    }
}

#[derive(Debug, Clone)]
pub struct TrainingExample {
    pub features: FeatureVector,
    pub label: bool,
    pub instance_tag: String,
}

/// Trained linear classifier with Platt calibration:
/// `P(in optimal solution) = 1 / (1 + exp(a * (w . f + bias) + b))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: [f64; N_FEATURES],
    pub bias: f64,
    pub platt_a: f64,
    pub platt_b: f64,
    pub normalization: String,
}

impl LinearModel {
    pub fn score(&self, f: &FeatureVector) -> f64 {
        let x = f.as_array();
        self.weights.iter().zip(x.iter()).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("training data must contain both classes (got {positives} positives, {negatives} negatives)")]
    SingleClass { positives: usize, negatives: usize },
}

#[derive(Debug, Error)]
pub enum ModelFormatError {
    #[error("model file: {0}")]
    Malformed(String),
    #[error("unsupported model version {0:?}")]
    Version(String),
}

fn min_max_normalize(values: &mut [f64]) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = hi - lo;
    if span > 0.0 {
        for v in values.iter_mut() {
            *v = (*v - lo) / span;
        }
    } else {
        // Constant feature carries no signal.
        for v in values.iter_mut() {
            *v = 0.0;
        }
    }
}

/// Unnormalized feature columns, exposed for tests; `extract_features` is the
/// public entry point.
pub(crate) fn raw_features(
    problem: &PricingProblem,
    samples: &[PricingSolution],
) -> [Vec<f64>; N_FEATURES] {
    let n = problem.n_items();
    let pi = &problem.profits;
    let total_profit: f64 = pi.iter().sum();

    let mut f1: Vec<f64> = pi.clone();
    min_max_normalize(&mut f1);

    let f2: Vec<f64> = (0..n).map(|i| pi[i] / problem.weights[i] as f64).collect();

    let mut f3: Vec<f64> = (0..n).map(|i| problem.conflicts.degree(i) as f64).collect();
    min_max_normalize(&mut f3);

    // Profit of i plus every non-neighbor: total minus the neighborhood.
    let f4: Vec<f64> = (0..n)
        .map(|i| {
            let neighbor_profit: f64 = problem.conflicts.neighbors(i).iter().map(|&j| pi[j]).sum();
            total_profit - neighbor_profit
        })
        .collect();

    let n_samples = samples.len();
    let mut membership = vec![false; n * n_samples.max(1)];
    for (s_idx, s) in samples.iter().enumerate() {
        for &i in &s.items {
            membership[i * n_samples + s_idx] = true;
        }
    }
    let objectives: Vec<f64> = samples.iter().map(|s| s.profit).collect();

    // Pearson correlation of membership against sample objectives.
    let fc: Vec<f64> = if n_samples == 0 {
        vec![0.0; n]
    } else {
        let o_mean = objectives.iter().sum::<f64>() / n_samples as f64;
        let o_var: f64 = objectives.iter().map(|o| (o - o_mean).powi(2)).sum();
        (0..n)
            .map(|i| {
                let s = &membership[i * n_samples..(i + 1) * n_samples];
                let count = s.iter().filter(|&&b| b).count();
                let s_mean = count as f64 / n_samples as f64;
                let s_var: f64 = s
                    .iter()
                    .map(|&b| (b as u8 as f64 - s_mean).powi(2))
                    .sum();
                if s_var <= 0.0 || o_var <= 0.0 {
                    return 0.0;
                }
                let cov: f64 = s
                    .iter()
                    .zip(&objectives)
                    .map(|(&b, o)| (b as u8 as f64 - s_mean) * (o - o_mean))
                    .sum();
                cov / (s_var.sqrt() * o_var.sqrt())
            })
            .collect()
    };

    // 1-based descending rank per sample; ties share the smallest rank of the
    // tied block (competition ranking).
    let fr: Vec<f64> = {
        let mut order: Vec<usize> = (0..n_samples).collect();
        order.sort_by(|&a, &b| {
            objectives[b]
                .partial_cmp(&objectives[a])
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut rank = vec![0usize; n_samples];
        let mut k = 0;
        while k < n_samples {
            let mut end = k;
            while end + 1 < n_samples && objectives[order[end + 1]] == objectives[order[k]] {
                end += 1;
            }
            for &idx in &order[k..=end] {
                rank[idx] = k + 1;
            }
            k = end + 1;
        }
        (0..n)
            .map(|i| {
                let s = &membership[i * n_samples..(i + 1) * n_samples];
                s.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(idx, _)| 1.0 / rank[idx] as f64)
                    .sum()
            })
            .collect()
    };

    [f1, f2, f3, f4, fc, fr]
}

/// Per-item feature vectors for a pricing problem, computed against `samples`
/// (uniform random solutions; the statistical features come from them).
/// All degenerate normalizations collapse to 0.
pub fn extract_features(
    problem: &PricingProblem,
    samples: &[PricingSolution],
) -> Vec<FeatureVector> {
    let [f1, mut f2, f3, mut f4, fc, mut fr] = raw_features(problem, samples);
    min_max_normalize(&mut f2);
    min_max_normalize(&mut f4);
    min_max_normalize(&mut fr);
    (0..problem.n_items())
        .map(|i| FeatureVector {
            f1: f1[i],
            f2: f2[i],
            f3: f3[i],
            f4: f4[i],
            fc: fc[i],
            fr: fr[i],
        })
        .collect()
}

/// Calibrated probability per item, clamped away from 0 and 1 so no item is
/// ever unselectable downstream.
pub fn predict_probability(model: &LinearModel, features: &[FeatureVector]) -> Vec<f64> {
    features
        .iter()
        .map(|f| {
            let z = model.platt_a * model.score(f) + model.platt_b;
            let p = if z >= 0.0 {
                let e = (-z).exp();
                e / (1.0 + e)
            } else {
                1.0 / (1.0 + z.exp())
            };
            p.clamp(1e-6, 1.0 - 1e-6)
        })
        .collect()
}

/// Result of a Platt fit. `converged` is false when the Newton iteration ran
/// out of iterations or the line search stalled; the last iterate is still
/// returned.
#[derive(Debug, Clone, Copy)]
pub struct PlattFit {
    pub a: f64,
    pub b: f64,
    pub converged: bool,
}

/// Fits the Platt parameters by minimizing the negative log-likelihood of
/// `P(y=1|s) = 1/(1+exp(a*s+b))` with the usual smoothed targets
/// `t+ = (N+ + 1)/(N+ + 2)`, `t- = 1/(N- + 2)`, using a damped Newton
/// iteration (Hessian regularized, backtracking line search).
pub fn fit_platt(scores: &[f64], labels: &[bool]) -> PlattFit {
    assert_eq!(scores.len(), labels.len());
    let n_pos = labels.iter().filter(|&&l| l).count() as f64;
    let n_neg = labels.len() as f64 - n_pos;
    assert!(n_pos > 0.0 && n_neg > 0.0, "both classes required");

    let hi_target = (n_pos + 1.0) / (n_pos + 2.0);
    let lo_target = 1.0 / (n_neg + 2.0);
    let targets: Vec<f64> = labels
        .iter()
        .map(|&l| if l { hi_target } else { lo_target })
        .collect();

    let sigma = 1e-12;
    let mut a = 0.0f64;
    let mut b = ((n_neg + 1.0) / (n_pos + 1.0)).ln();

    let nll = |a: f64, b: f64| -> f64 {
        scores
            .iter()
            .zip(&targets)
            .map(|(&s, &t)| {
                let z = a * s + b;
                if z >= 0.0 {
                    t * z + (1.0 + (-z).exp()).ln()
                } else {
                    (t - 1.0) * z + (1.0 + z.exp()).ln()
                }
            })
            .sum()
    };

    let mut fval = nll(a, b);
    for _ in 0..100 {
        let (mut h11, mut h22) = (sigma, sigma);
        let (mut h21, mut g1, mut g2) = (0.0, 0.0, 0.0);
        for (&s, &t) in scores.iter().zip(&targets) {
            let z = a * s + b;
            let p = if z >= 0.0 {
                (-z).exp() / (1.0 + (-z).exp())
            } else {
                1.0 / (1.0 + z.exp())
            };
            let q = 1.0 - p;
            let d2 = p * q;
            h11 += s * s * d2;
            h22 += d2;
            h21 += s * d2;
            let d1 = t - p;
            g1 += s * d1;
            g2 += d1;
        }
        if (g1 * g1 + g2 * g2).sqrt() < 1e-8 {
            return PlattFit { a, b, converged: true };
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;

        let mut step = 1.0f64;
        let mut stepped = false;
        while step >= 1e-10 {
            let na = a + step * da;
            let nb = b + step * db;
            let nf = nll(na, nb);
            if nf < fval + 1e-4 * step * gd {
                a = na;
                b = nb;
                fval = nf;
                stepped = true;
                break;
            }
            step /= 2.0;
        }
        if !stepped {
            return PlattFit { a, b, converged: false };
        }
    }
    PlattFit { a, b, converged: false }
}

#[derive(Debug, Clone)]
pub struct TrainStats {
    pub n_positive: usize,
    pub n_negative: usize,
    pub positive_weight: f64,
    pub train_accuracy: f64,
    pub platt_converged: bool,
}

const SVM_LAMBDA: f64 = 1e-3;
const SVM_ITERATIONS: usize = 4000;

/// Trains the class-weighted linear SVM (hinge loss, L2 regularization) by a
/// fixed number of full-batch projected subgradient steps, then fits Platt
/// parameters on a 20% stratified subset of the scores. Positive examples are
/// weighted by `#negatives / #positives` so both classes carry equal total
/// weight. The procedure is deterministic: full-batch gradients need no
/// shuffling, and the calibration subset is every fifth example per class.
pub fn train_svm(data: &[TrainingExample]) -> Result<(LinearModel, TrainStats), TrainError> {
    let n = data.len();
    let n_pos = data.iter().filter(|e| e.label).count();
    let n_neg = n - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(TrainError::SingleClass {
            positives: n_pos,
            negatives: n_neg,
        });
    }
    let pos_weight = n_neg as f64 / n_pos as f64;

    let xs: Vec<[f64; N_FEATURES]> = data.iter().map(|e| e.features.as_array()).collect();
    let ys: Vec<f64> = data.iter().map(|e| if e.label { 1.0 } else { -1.0 }).collect();
    let cs: Vec<f64> = data
        .iter()
        .map(|e| if e.label { pos_weight } else { 1.0 })
        .collect();

    let dim = N_FEATURES + 1; // bias as an extra coordinate
    let mut w = vec![0.0f64; dim];
    let mut w_avg = vec![0.0f64; dim];
    let mut avg_count = 0usize;
    let radius = 1.0 / SVM_LAMBDA.sqrt();

    for t in 1..=SVM_ITERATIONS {
        let eta = 1.0 / (SVM_LAMBDA * (t as f64 + 10.0));
        let mut grad = vec![0.0f64; dim];
        for k in 0..dim - 1 {
            grad[k] = SVM_LAMBDA * w[k];
        }
        let inv_n = 1.0 / n as f64;
        for i in 0..n {
            let mut margin = w[dim - 1];
            for k in 0..N_FEATURES {
                margin += w[k] * xs[i][k];
            }
            if ys[i] * margin < 1.0 {
                let coef = -cs[i] * ys[i] * inv_n;
                for k in 0..N_FEATURES {
                    grad[k] += coef * xs[i][k];
                }
                grad[dim - 1] += coef;
            }
        }
        for k in 0..dim {
            w[k] -= eta * grad[k];
        }
        let norm: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > radius {
            let f = radius / norm;
            for v in w.iter_mut() {
                *v *= f;
            }
        }
        if t > SVM_ITERATIONS / 2 {
            for k in 0..dim {
                w_avg[k] += w[k];
            }
            avg_count += 1;
        }
    }
    for v in w_avg.iter_mut() {
        *v /= avg_count as f64;
    }

    let mut weights = [0.0; N_FEATURES];
    weights.copy_from_slice(&w_avg[..N_FEATURES]);
    let bias = w_avg[N_FEATURES];

    let raw_score = |x: &[f64; N_FEATURES]| -> f64 {
        weights.iter().zip(x.iter()).map(|(w, v)| w * v).sum::<f64>() + bias
    };

    let correct = xs
        .iter()
        .zip(&ys)
        .filter(|(x, &y)| raw_score(x) * y > 0.0)
        .count();
    let train_accuracy = correct as f64 / n as f64;

    // Calibration subset: every fifth example of each class, in data order.
    let mut cal_scores = Vec::new();
    let mut cal_labels = Vec::new();
    let mut pos_seen = 0usize;
    let mut neg_seen = 0usize;
    for (i, e) in data.iter().enumerate() {
        let take = if e.label {
            pos_seen += 1;
            (pos_seen - 1) % 5 == 0
        } else {
            neg_seen += 1;
            (neg_seen - 1) % 5 == 0
        };
        if take {
            cal_scores.push(raw_score(&xs[i]));
            cal_labels.push(e.label);
        }
    }
    // The stratified subset always holds both classes (each class non-empty).
    let platt = fit_platt(&cal_scores, &cal_labels);

    let model = LinearModel {
        weights,
        bias,
        platt_a: platt.a,
        platt_b: platt.b,
        normalization: NORMALIZATION_POLICY.to_string(),
    };
    let stats = TrainStats {
        n_positive: n_pos,
        n_negative: n_neg,
        positive_weight: pos_weight,
        train_accuracy,
        platt_converged: platt.converged,
    };
    Ok((model, stats))
}

const MODEL_HEADER: &str = "bppc-linear-model v1";
const FEATURE_NAMES: [&str; N_FEATURES] = ["f1", "f2", "f3", "f4", "fc", "fr"];

/// Plain-text model format, one `key value` pair per line after a version
/// header. Floats use Rust's shortest round-trip formatting, so write/read
/// reproduces every bit.
pub fn model_to_text(model: &LinearModel) -> String {
    let mut out = String::new();
    out.push_str(MODEL_HEADER);
    out.push('\n');
    out.push_str(&format!("normalization {}\n", model.normalization));
    for (name, w) in FEATURE_NAMES.iter().zip(model.weights.iter()) {
        out.push_str(&format!("weight_{name} {w}\n"));
    }
    out.push_str(&format!("bias {}\n", model.bias));
    out.push_str(&format!("platt_a {}\n", model.platt_a));
    out.push_str(&format!("platt_b {}\n", model.platt_b));
    out
}

pub fn model_from_text(text: &str) -> Result<LinearModel, ModelFormatError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| ModelFormatError::Malformed("empty file".into()))?;
    if header.trim() != MODEL_HEADER {
        return Err(ModelFormatError::Version(header.trim().to_string()));
    }
    let mut normalization = None;
    let mut weights = [f64::NAN; N_FEATURES];
    let mut bias = None;
    let mut platt_a = None;
    let mut platt_b = None;
    for line in lines {
        let mut parts = line.split_whitespace();
        let key = parts
            .next()
            .ok_or_else(|| ModelFormatError::Malformed(format!("bad line {line:?}")))?;
        let value = parts
            .next()
            .ok_or_else(|| ModelFormatError::Malformed(format!("missing value in {line:?}")))?;
        let parse = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| ModelFormatError::Malformed(format!("bad float {v:?}")))
        };
        match key {
            "normalization" => normalization = Some(value.to_string()),
            "bias" => bias = Some(parse(value)?),
            "platt_a" => platt_a = Some(parse(value)?),
            "platt_b" => platt_b = Some(parse(value)?),
            _ => {
                if let Some(name) = key.strip_prefix("weight_") {
                    let idx = FEATURE_NAMES
                        .iter()
                        .position(|&f| f == name)
                        .ok_or_else(|| {
                            ModelFormatError::Malformed(format!("unknown feature {name:?}"))
                        })?;
                    weights[idx] = parse(value)?;
                } else {
                    return Err(ModelFormatError::Malformed(format!("unknown key {key:?}")));
                }
            }
        }
    }
    if weights.iter().any(|w| w.is_nan()) {
        return Err(ModelFormatError::Malformed("missing feature weight".into()));
    }
    let normalization =
        normalization.ok_or_else(|| ModelFormatError::Malformed("missing normalization".into()))?;
    if normalization != NORMALIZATION_POLICY {
        return Err(ModelFormatError::Malformed(format!(
            "unsupported normalization {normalization:?}"
        )));
    }
    Ok(LinearModel {
        weights,
        bias: bias.ok_or_else(|| ModelFormatError::Malformed("missing bias".into()))?,
        platt_a: platt_a.ok_or_else(|| ModelFormatError::Malformed("missing platt_a".into()))?,
        platt_b: platt_b.ok_or_else(|| ModelFormatError::Malformed("missing platt_b".into()))?,
        normalization,
    })
}

/// CSV dump of training data: six feature columns, the binary label, and the
/// provenance tag.
pub fn training_data_csv(data: &[TrainingExample]) -> String {
    let mut out = String::from("f1,f2,f3,f4,fc,fr,label,tag\n");
    for e in data {
        let f = e.features.as_array();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            f[0],
            f[1],
            f[2],
            f[3],
            f[4],
            f[5],
            e.label as u8,
            e.instance_tag
        ));
    }
    out
}

/// Iterations (1-based) at which training snapshots are recorded.
pub const SNAPSHOT_ITERATIONS: [usize; 5] = [10, 15, 20, 25, 30];

struct SnapshotCollector {
    rng: Xoshiro256,
    tag: String,
    examples: Vec<TrainingExample>,
}

impl PricingObserver for SnapshotCollector {
    fn on_exact_pricing(
        &mut self,
        iteration: usize,
        problem: &PricingProblem,
        optimal: &PricingSolution,
    ) {
        if !SNAPSHOT_ITERATIONS.contains(&iteration) {
            return;
        }
        let n = problem.n_items();
        let samples = sampling::random_samples(problem, n, &mut self.rng);
        let features = extract_features(problem, &samples);
        let mut in_optimal = vec![false; n];
        for &i in &optimal.items {
            in_optimal[i] = true;
        }
        for (i, f) in features.into_iter().enumerate() {
            self.examples.push(TrainingExample {
                features: f,
                label: in_optimal[i],
                instance_tag: format!("{}#it{iteration}", self.tag),
            });
        }
    }
}

#[derive(Debug, Clone)]
pub struct CollectReport {
    pub examples: Vec<TrainingExample>,
    /// Instances skipped because CG did not finish inside its budget.
    pub skipped: Vec<String>,
}

/// Runs CG with exact pricing on every training instance and records, at
/// iterations 10/15/20/25/30, each item's features (from fresh random
/// samples) labelled by membership in that iteration's optimal pricing
/// solution.
pub fn collect_training_data(
    instances: &[Instance],
    seed: u64,
    time_limit_per_instance: f64,
) -> CollectReport {
    let mut examples = Vec::new();
    let mut skipped = Vec::new();
    let mut master = Xoshiro256::seed_from_u64(seed);
    for instance in instances {
        let cg_rng_seed = master.next_u64();
        let sample_rng = master.split();
        let mut collector = SnapshotCollector {
            rng: sample_rng,
            tag: instance.name.clone(),
            examples: Vec::new(),
        };
        let cfg = CgConfig {
            pricing: PricingKind::ExactSingle,
            time_limit: time_limit_per_instance,
            rng_seed: cg_rng_seed,
            ..CgConfig::default()
        };
        match cg::run_cg_observed(instance, &cfg, Some(&mut collector)) {
            Ok(result) if result.status == CgStatus::Optimal => {
                examples.append(&mut collector.examples);
            }
            Ok(_) => skipped.push(format!("{}: time limit exceeded", instance.name)),
            Err(e) => skipped.push(format!("{}: {e}", instance.name)),
        }
    }
    CollectReport { examples, skipped }
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

    fn sample(items: &[usize], profit: f64) -> PricingSolution {
        PricingSolution::new(items.to_vec(), profit)
    }

    #[test]
    fn equal_profits_zero_out_f1() {
        let p = problem(&[0.5, 0.5, 0.5], &[1, 2, 3], 6, &[]);
        let feats = extract_features(&p, &[sample(&[0], 0.5)]);
        for f in &feats {
            assert_eq!(f.f1, 0.0);
        }
    }

    #[test]
    fn constant_membership_zeroes_fc() {
        let p = problem(&[0.9, 0.1], &[1, 1], 2, &[]);
        // Item 0 in every sample while objectives vary: correlation undefined -> 0.
        let samples = vec![sample(&[0], 0.9), sample(&[0, 1], 1.0)];
        let feats = extract_features(&p, &samples);
        assert_eq!(feats[0].fc, 0.0);
        assert!(feats[1].fc != 0.0);
    }

    #[test]
    fn rank_score_direct_formula() {
        let p = problem(&[0.5, 0.5, 0.5], &[1, 1, 1], 3, &[]);
        // Objectives 10 and 5: ranks 1 and 2. Item 0 only in the better
        // sample (raw 1.0), item 1 only in the worse (raw 0.5), item 2 absent.
        let samples = vec![sample(&[0], 10.0), sample(&[1], 5.0)];
        let [_, _, _, _, _, fr] = raw_features(&p, &samples);
        assert!((fr[0] - 1.0).abs() < 1e-15);
        assert!((fr[1] - 0.5).abs() < 1e-15);
        assert_eq!(fr[2], 0.0);
        // After instance-wise min-max normalization the top item maps to 1.
        let feats = extract_features(&p, &samples);
        assert!((feats[0].fr - 1.0).abs() < 1e-15);
        assert!((feats[1].fr - 0.5).abs() < 1e-15);
        assert_eq!(feats[2].fr, 0.0);
    }

    #[test]
    fn tied_objectives_share_the_best_rank() {
        let p = problem(&[0.5, 0.5], &[1, 1], 2, &[]);
        let samples = vec![sample(&[0], 5.0), sample(&[1], 5.0), sample(&[], 1.0)];
        let [.., fr] = raw_features(&p, &samples);
        // Both tied samples rank 1.
        assert!((fr[0] - 1.0).abs() < 1e-15);
        assert!((fr[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn edgeless_f4_is_total_profit() {
        let p = problem(&[0.2, 0.3, 0.5], &[1, 1, 1], 3, &[]);
        let [_, _, _, f4, _, _] = raw_features(&p, &[sample(&[0], 0.2)]);
        for &v in &f4 {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn f4_subtracts_neighborhood() {
        let p = problem(&[0.2, 0.3, 0.5], &[1, 1, 1], 3, &[(0, 1)]);
        let [_, _, _, f4, _, _] = raw_features(&p, &[sample(&[0], 0.2)]);
        assert!((f4[0] - (1.0 - 0.3)).abs() < 1e-12);
        assert!((f4[1] - (1.0 - 0.2)).abs() < 1e-12);
        assert!((f4[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fc_matches_naive_two_pass_pearson() {
        let mut rng = Xoshiro256::seed_from_u64(31);
        let n = 12;
        let profits: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range_inclusive(1, 5)).collect();
        let p = problem(&profits, &weights, 20, &[]);
        let samples: Vec<PricingSolution> = (0..30)
            .map(|_| crate::sampling::random_sample(&p, &mut rng))
            .collect();
        let [_, _, _, _, fc, _] = raw_features(&p, &samples);

        let objectives: Vec<f64> = samples.iter().map(|s| s.profit).collect();
        for i in 0..n {
            let xs: Vec<f64> = samples
                .iter()
                .map(|s| s.items.binary_search(&i).is_ok() as u8 as f64)
                .collect();
            let mx = xs.iter().sum::<f64>() / xs.len() as f64;
            let my = objectives.iter().sum::<f64>() / objectives.len() as f64;
            let sxy: f64 = xs
                .iter()
                .zip(&objectives)
                .map(|(x, y)| (x - mx) * (y - my))
                .sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
            let syy: f64 = objectives.iter().map(|y| (y - my) * (y - my)).sum();
            let naive = if sxx <= 0.0 || syy <= 0.0 {
                0.0
            } else {
                sxy / (sxx.sqrt() * syy.sqrt())
            };
            assert!(
                (fc[i] - naive).abs() <= 1e-10,
                "item {i}: {} vs naive {}",
                fc[i],
                naive
            );
        }
    }

    #[test]
    fn fr_is_invariant_to_sample_order() {
        let p = problem(&[0.4, 0.6, 0.2], &[1, 1, 1], 3, &[]);
        let mut samples = vec![
            sample(&[0], 3.0),
            sample(&[1], 7.0),
            sample(&[0, 2], 5.0),
            sample(&[1, 2], 7.0),
        ];
        let a = extract_features(&p, &samples);
        samples.reverse();
        let b = extract_features(&p, &samples);
        for (x, y) in a.iter().zip(&b) {
            assert!((x.fr - y.fr).abs() < 1e-15);
        }
    }

    fn synthetic_separable(n_per_class: usize) -> Vec<TrainingExample> {
        let mut data = Vec::new();
        let mut rng = Xoshiro256::seed_from_u64(7);
        for k in 0..n_per_class {
            let noise = 0.01 * rng.next_f64();
            data.push(TrainingExample {
                features: FeatureVector {
                    f1: 1.0,
                    f2: noise,
                    f3: 0.5,
                    f4: 0.5,
                    fc: 0.0,
                    fr: 0.5,
                },
                label: true,
                instance_tag: format!("pos{k}"),
            });
            data.push(TrainingExample {
                features: FeatureVector {
                    f1: -1.0,
                    f2: noise,
                    f3: 0.5,
                    f4: 0.5,
                    fc: 0.0,
                    fr: 0.5,
                },
                label: false,
                instance_tag: format!("neg{k}"),
            });
        }
        data
    }

    #[test]
    fn svm_separates_the_separable() {
        let data = synthetic_separable(100);
        let (model, stats) = train_svm(&data).unwrap();
        assert!(
            stats.train_accuracy >= 0.99,
            "accuracy {}",
            stats.train_accuracy
        );
        // Scores must be positive on the positive side.
        let pos = data.iter().find(|e| e.label).unwrap();
        assert!(model.score(&pos.features) > 0.0);
    }

    #[test]
    fn class_weight_follows_imbalance_ratio() {
        let mut data = synthetic_separable(3000);
        // Make it 9000 negatives / 3000 positives.
        let mut extra: Vec<TrainingExample> = data
            .iter()
            .filter(|e| !e.label)
            .cloned()
            .cycle()
            .take(6000)
            .collect();
        data.append(&mut extra);
        let (_, stats) = train_svm(&data).unwrap();
        assert_eq!(stats.n_positive, 3000);
        assert_eq!(stats.n_negative, 9000);
        assert!((stats.positive_weight - 3.0).abs() < 1e-12);
    }

    #[test]
    fn duplication_preserves_boundary_direction() {
        let data = synthetic_separable(50);
        let (m1, _) = train_svm(&data).unwrap();
        let doubled: Vec<TrainingExample> = data
            .iter()
            .flat_map(|e| [e.clone(), e.clone()])
            .collect();
        let (m2, _) = train_svm(&doubled).unwrap();
        let dot: f64 = m1.weights.iter().zip(&m2.weights).map(|(a, b)| a * b).sum();
        let n1: f64 = m1.weights.iter().map(|v| v * v).sum::<f64>().sqrt();
        let n2: f64 = m2.weights.iter().map(|v| v * v).sum::<f64>().sqrt();
        let cosine_distance = 1.0 - dot / (n1 * n2);
        assert!(
            cosine_distance <= 1e-3,
            "cosine distance {cosine_distance}"
        );
    }

    #[test]
    fn single_class_is_rejected() {
        let data: Vec<TrainingExample> = synthetic_separable(5)
            .into_iter()
            .filter(|e| e.label)
            .collect();
        assert!(matches!(
            train_svm(&data),
            Err(TrainError::SingleClass { .. })
        ));
    }

    #[test]
    fn platt_zero_parameters_give_half() {
        let model = LinearModel {
            weights: [0.0; N_FEATURES],
            bias: 0.0,
            platt_a: 0.0,
            platt_b: 0.0,
            normalization: NORMALIZATION_POLICY.to_string(),
        };
        let f = FeatureVector {
            f1: 0.3,
            f2: 0.4,
            f3: 0.1,
            f4: 0.9,
            fc: -0.2,
            fr: 0.6,
        };
        let p = predict_probability(&model, &[f]);
        assert!((p[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn platt_separated_scores_yield_confident_fit() {
        let scores: Vec<f64> = (0..40)
            .map(|i| if i < 20 { 10.0 + 0.01 * i as f64 } else { -10.0 - 0.01 * i as f64 })
            .collect();
        let labels: Vec<bool> = (0..40).map(|i| i < 20).collect();
        let fit = fit_platt(&scores, &labels);
        assert!(fit.a < 0.0, "a = {}", fit.a);
        let p_hi = 1.0 / (1.0 + (fit.a * 10.0 + fit.b).exp());
        assert!(p_hi > 0.95, "P(+10) = {p_hi}");
    }

    #[test]
    fn platt_constant_scores_return_base_rate() {
        let scores = vec![2.5; 10];
        let labels: Vec<bool> = (0..10).map(|i| i < 3).collect();
        let fit = fit_platt(&scores, &labels);
        // Smoothed base rate: average of the targets.
        let t_pos = (3.0 + 1.0) / (3.0 + 2.0);
        let t_neg = 1.0 / (7.0 + 2.0);
        let expected = (3.0 * t_pos + 7.0 * t_neg) / 10.0;
        let p = 1.0 / (1.0 + (fit.a * 2.5 + fit.b).exp());
        assert!((p - expected).abs() < 1e-6, "p={p} expected={expected}");
    }

    #[test]
    fn platt_probabilities_monotone_in_score() {
        let mut rng = Xoshiro256::seed_from_u64(55);
        let scores: Vec<f64> = (0..200).map(|_| 4.0 * rng.next_f64() - 2.0).collect();
        let labels: Vec<bool> = scores.iter().map(|&s| s + 0.5 * rng.next_f64() > 0.3).collect();
        if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
            return;
        }
        let fit = fit_platt(&scores, &labels);
        let model = LinearModel {
            weights: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            bias: 0.0,
            platt_a: fit.a,
            platt_b: fit.b,
            normalization: NORMALIZATION_POLICY.to_string(),
        };
        let mut feats: Vec<FeatureVector> = Vec::new();
        let mut s = -3.0;
        while s <= 3.0 {
            feats.push(FeatureVector {
                f1: s,
                f2: 0.0,
                f3: 0.0,
                f4: 0.0,
                fc: 0.0,
                fr: 0.0,
            });
            s += 0.1;
        }
        let ps = predict_probability(&model, &feats);
        for w in ps.windows(2) {
            assert!(w[1] >= w[0] - 1e-15, "not monotone: {} then {}", w[0], w[1]);
        }
    }

    #[test]
    fn model_round_trips_bit_exactly() {
        let model = LinearModel {
            weights: [
                0.123456789012345,
                -3.9e-17,
                7.0 / 3.0,
                1e300,
                -0.0,
                5.5e-5,
            ],
            bias: -1.0000000000000002,
            platt_a: -2.345678901234567,
            platt_b: 0.1 + 0.2,
            normalization: NORMALIZATION_POLICY.to_string(),
        };
        let text = model_to_text(&model);
        let back = model_from_text(&text).unwrap();
        for (a, b) in model.weights.iter().zip(&back.weights) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(model.bias.to_bits(), back.bias.to_bits());
        assert_eq!(model.platt_a.to_bits(), back.platt_a.to_bits());
        assert_eq!(model.platt_b.to_bits(), back.platt_b.to_bits());
        // And therefore identical predictions on a probe set.
        let probe = FeatureVector {
            f1: 0.9,
            f2: 0.1,
            f3: 0.4,
            f4: 0.7,
            fc: -0.3,
            fr: 0.2,
        };
        assert_eq!(
            predict_probability(&model, &[probe])[0].to_bits(),
            predict_probability(&back, &[probe])[0].to_bits()
        );
    }

    #[test]
    fn model_text_rejects_garbage() {
        assert!(model_from_text("").is_err());
        assert!(model_from_text("bppc-linear-model v99\n").is_err());
        let partial = format!("{MODEL_HEADER}\nnormalization {NORMALIZATION_POLICY}\nbias 0\n");
        assert!(model_from_text(&partial).is_err());
    }

    #[test]
    fn feature_extraction_is_deterministic() {
        let p = problem(&[0.3, 0.8, 0.5, 0.1], &[2, 3, 1, 2], 5, &[(0, 1), (2, 3)]);
        let samples = vec![sample(&[0, 2], 0.8), sample(&[1], 0.8), sample(&[3], 0.1)];
        let a = extract_features(&p, &samples);
        let b = extract_features(&p, &samples);
        assert_eq!(a, b);
    }
}
