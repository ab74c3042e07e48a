//! Simulation benchmark: data generators for the four covariance scenarios,
//! selection/prediction metrics, method runners, and the belief sweep.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cliques::CliqueSet;
use crate::dataset::{ColumnKind, MixedDataset};
use crate::error::{Error, Result};
use crate::graph::PriorGraph;
use crate::pipeline::{run_pipeline, run_selection_stage, PipelineConfig};
use crate::select::Predictive;

/// Precision-threshold defining the true graph: |Σ_T⁻¹(i,j)| above this is
/// an edge.
const TRUE_GRAPH_EPS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    /// Block-compound-symmetric precision (high partial correlations).
    Ia,
    /// Block-compound-symmetric covariance (high marginal correlations).
    Ib,
    /// AR-decay precision block.
    Ic,
    /// AR-decay covariance block.
    Id,
}

impl CaseId {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ia" | "i(a)" | "a" => Ok(CaseId::Ia),
            "ib" | "i(b)" | "b" => Ok(CaseId::Ib),
            "ic" | "i(c)" | "c" => Ok(CaseId::Ic),
            "id" | "i(d)" | "d" => Ok(CaseId::Id),
            other => Err(Error::Config(format!(
                "unknown case '{other}' (expected Ia, Ib, Ic, or Id)"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CaseId::Ia => "Ia",
            CaseId::Ib => "Ib",
            CaseId::Ic => "Ic",
            CaseId::Id => "Id",
        }
    }
}

/// One fully-specified simulation scenario.
#[derive(Debug, Clone)]
pub struct SimCase {
    pub case_id: CaseId,
    pub p: usize,
    pub n_train: usize,
    pub n_test: usize,
    /// True covariance of the latent rows.
    pub sigma_truth: DMatrix<f64>,
    /// True precision, built blockwise so off-block entries are exact zeros.
    pub omega_truth: DMatrix<f64>,
    pub gamma_truth: Vec<bool>,
    pub beta_truth: Vec<f64>,
    /// 0-based columns observed as 5-level ordinal codes.
    pub ordinal_cols: Vec<usize>,
    /// Thresholds mapping latents to external codes 0..=4.
    pub ordinal_cutpoints: Vec<f64>,
    pub sigma_noise: f64,
    /// Edges where |Σ_T⁻¹| exceeds the threshold.
    pub true_graph: DMatrix<u8>,
}

/// (1−ρ)I + ρJ, the compound-symmetric block.
fn compound_symmetric(m: usize, rho: f64) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| if i == j { 1.0 } else { rho })
}

/// Closed-form inverse of the compound-symmetric block.
fn compound_symmetric_inv(m: usize, rho: f64) -> DMatrix<f64> {
    let denom = 1.0 + (m as f64 - 1.0) * rho;
    let off = -rho / ((1.0 - rho) * denom);
    let diag = (1.0 + (m as f64 - 2.0) * rho) / ((1.0 - rho) * denom);
    DMatrix::from_fn(m, m, |i, j| if i == j { diag } else { off })
}

/// ρ^{|i−j|} decay block.
fn ar_decay(m: usize, rho: f64) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| rho.powi((i as i32 - j as i32).abs()))
}

fn block_diag(blocks: &[DMatrix<f64>], p: usize) -> DMatrix<f64> {
    let mut out = DMatrix::identity(p, p);
    let mut offset = 0;
    for b in blocks {
        let m = b.nrows();
        for i in 0..m {
            for j in 0..m {
                out[(offset + i, offset + j)] = b[(i, j)];
            }
        }
        offset += m;
    }
    out
}

impl SimCase {
    /// Builds a scenario at dimension p (≥ 24) with train/test sizes of 100.
    pub fn new(case_id: CaseId, p: usize) -> Result<Self> {
        Self::with_sizes(case_id, p, 100, 100)
    }

    pub fn with_sizes(case_id: CaseId, p: usize, n_train: usize, n_test: usize) -> Result<Self> {
        if p < 24 {
            return Err(Error::SimConstruction(format!(
                "dimension {p} too small: the active set includes variables 23 and 24"
            )));
        }
        // Blockwise Σ and Ω so that off-block precision entries are exact.
        let (sigma_truth, omega_truth) = match case_id {
            CaseId::Ia => {
                let omega = block_diag(
                    &[
                        compound_symmetric(4, 0.95),
                        compound_symmetric(4, 0.7),
                        compound_symmetric(4, 0.7),
                    ],
                    p,
                );
                let sigma = block_diag(
                    &[
                        compound_symmetric_inv(4, 0.95),
                        compound_symmetric_inv(4, 0.7),
                        compound_symmetric_inv(4, 0.7),
                    ],
                    p,
                );
                (sigma, omega)
            }
            CaseId::Ib => {
                let sigma = block_diag(
                    &[
                        compound_symmetric(4, 0.95),
                        compound_symmetric(4, 0.7),
                        compound_symmetric(4, 0.7),
                    ],
                    p,
                );
                let omega = block_diag(
                    &[
                        compound_symmetric_inv(4, 0.95),
                        compound_symmetric_inv(4, 0.7),
                        compound_symmetric_inv(4, 0.7),
                    ],
                    p,
                );
                (sigma, omega)
            }
            CaseId::Ic => {
                let block = ar_decay(8, 0.95);
                let inv = block.clone().try_inverse().ok_or_else(|| {
                    Error::SimConstruction("AR block is numerically singular".into())
                })?;
                (block_diag(&[inv], p), block_diag(&[block], p))
            }
            CaseId::Id => {
                let block = ar_decay(8, 0.95);
                let inv = block.clone().try_inverse().ok_or_else(|| {
                    Error::SimConstruction("AR block is numerically singular".into())
                })?;
                (block_diag(&[block], p), block_diag(&[inv], p))
            }
        };
        if sigma_truth.clone().cholesky().is_none() {
            return Err(Error::SimConstruction(
                "true covariance is not positive definite".into(),
            ));
        }

        let mut beta_truth = vec![0.0; p];
        let signs = match case_id {
            CaseId::Ia | CaseId::Ic => {
                [0.3, -0.7, 1.1, -0.05, 0.1, 0.2, -1.2, 1.5]
            }
            CaseId::Ib | CaseId::Id => {
                [0.3, 0.7, 1.1, 0.05, -0.1, -0.2, -1.2, -1.5]
            }
        };
        beta_truth[..8].copy_from_slice(&signs);
        beta_truth[p - 2] = 1.0;
        beta_truth[p - 1] = -1.0;

        let mut gamma_truth = vec![false; p];
        for (j, g) in gamma_truth.iter_mut().enumerate() {
            *g = (j < 8) || j == p - 2 || j == p - 1;
        }

        let mut true_graph = DMatrix::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                if i != j && omega_truth[(i, j)].abs() > TRUE_GRAPH_EPS {
                    true_graph[(i, j)] = 1;
                }
            }
        }

        Ok(Self {
            case_id,
            p,
            n_train,
            n_test,
            sigma_truth,
            omega_truth,
            gamma_truth,
            beta_truth,
            // Columns 5..13 (1-based): four active ordinals plus five noise.
            ordinal_cols: (4..13).collect(),
            ordinal_cutpoints: vec![-1.5, -0.5, 0.5, 1.5],
            sigma_noise: 1.0,
            true_graph,
        })
    }

    pub fn column_kinds(&self) -> Vec<ColumnKind> {
        (0..self.p)
            .map(|j| {
                if self.ordinal_cols.contains(&j) {
                    ColumnKind::Ordinal {
                        levels: self.ordinal_cutpoints.len() as u32 + 1,
                    }
                } else {
                    ColumnKind::Continuous
                }
            })
            .collect()
    }

    /// The true graph as a prior, with one belief value everywhere.
    pub fn true_prior(&self, kappa: f64) -> Result<PriorGraph> {
        PriorGraph::with_uniform_belief(self.true_graph.clone(), kappa)
    }
}

/// Generated train/test split.
#[derive(Debug, Clone)]
pub struct GeneratedData {
    pub train: MixedDataset,
    pub y_train: Vec<f64>,
    pub test: MixedDataset,
    pub y_test: Vec<f64>,
}

/// Draws latent rows from N(0, Σ_T), thresholds the ordinal columns into
/// codes (stored 1..=5), and generates y = Xβ⁰ + ε from the final design.
pub fn generate_case(case: &SimCase, seed: u64) -> Result<GeneratedData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chol = case
        .sigma_truth
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SimConstruction("true covariance lost PD".into()))?;
    let l = chol.l();
    let kinds = case.column_kinds();

    let mut make_split = |n: usize| -> Result<(MixedDataset, Vec<f64>)> {
        let mut values = DMatrix::zeros(n, case.p);
        for i in 0..n {
            let z = nalgebra::DVector::from_fn(case.p, |_, _| rng.sample::<f64, _>(StandardNormal));
            let row = &l * z;
            for j in 0..case.p {
                values[(i, j)] = if case.ordinal_cols.contains(&j) {
                    // External code = number of thresholds below the latent;
                    // stored 1-based.
                    let code = case
                        .ordinal_cutpoints
                        .iter()
                        .filter(|&&c| row[j] >= c)
                        .count();
                    (code + 1) as f64
                } else {
                    row[j]
                };
            }
        }
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let mut mean = 0.0;
            for j in 0..case.p {
                mean += values[(i, j)] * case.beta_truth[j];
            }
            let eps: f64 = rng.sample(StandardNormal);
            y.push(mean + case.sigma_noise * eps);
        }
        Ok((MixedDataset::new(values, kinds.clone())?, y))
    };

    let (train, y_train) = make_split(case.n_train)?;
    let (test, y_test) = make_split(case.n_test)?;
    Ok(GeneratedData {
        train,
        y_train,
        test,
        y_test,
    })
}

/// Threshold-sweep points shared by the ROC/PRC computations: descending
/// score groups with cumulative true/false positive counts. Ties enter
/// together.
fn sweep_points(scores: &[f64], truth: &[bool]) -> Result<Vec<(usize, usize)>> {
    if scores.len() != truth.len() {
        return Err(Error::UndefinedMetric(
            "scores and truth must have equal length".into(),
        ));
    }
    let pos = truth.iter().filter(|&&t| t).count();
    let neg = truth.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::UndefinedMetric(
            "need at least one positive and one negative".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));
    let mut points = Vec::new();
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut idx = 0;
    while idx < order.len() {
        let threshold = scores[order[idx]];
        while idx < order.len() && scores[order[idx]] == threshold {
            if truth[order[idx]] {
                tp += 1;
            } else {
                fp += 1;
            }
            idx += 1;
        }
        points.push((tp, fp));
    }
    Ok(points)
}

/// Trapezoidal AUC-ROC and step-interpolated AUC-PRC of an inclusion-score
/// ranking against the true indicator vector.
pub fn roc_prc_auc(scores: &[f64], truth: &[bool]) -> Result<(f64, f64)> {
    let points = sweep_points(scores, truth)?;
    let pos = truth.iter().filter(|&&t| t).count() as f64;
    let neg = (truth.len() - truth.iter().filter(|&&t| t).count()) as f64;

    let mut auc_roc = 0.0;
    let (mut prev_tpr, mut prev_fpr) = (0.0, 0.0);
    let mut auc_prc = 0.0;
    let mut prev_recall = 0.0;
    for &(tp, fp) in &points {
        let tpr = tp as f64 / pos;
        let fpr = fp as f64 / neg;
        auc_roc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        let recall = tpr;
        let precision = tp as f64 / (tp + fp) as f64;
        auc_prc += (recall - prev_recall) * precision;
        prev_tpr = tpr;
        prev_fpr = fpr;
        prev_recall = recall;
    }
    Ok((auc_roc, auc_prc))
}

/// (FPR, TPR) points of the threshold sweep, starting at (0,0).
pub fn roc_points(scores: &[f64], truth: &[bool]) -> Result<Vec<(f64, f64)>> {
    let points = sweep_points(scores, truth)?;
    let pos = truth.iter().filter(|&&t| t).count() as f64;
    let neg = truth.len() as f64 - pos;
    let mut out = vec![(0.0, 0.0)];
    out.extend(
        points
            .iter()
            .map(|&(tp, fp)| (fp as f64 / neg, tp as f64 / pos)),
    );
    Ok(out)
}

/// (recall, precision) points of the threshold sweep.
pub fn prc_points(scores: &[f64], truth: &[bool]) -> Result<Vec<(f64, f64)>> {
    let points = sweep_points(scores, truth)?;
    let pos = truth.iter().filter(|&&t| t).count() as f64;
    Ok(points
        .iter()
        .map(|&(tp, fp)| (tp as f64 / pos, tp as f64 / (tp + fp) as f64))
        .collect())
}

/// Sensitivity of the best threshold whose specificity is at least
/// 1 − level (the table-footnote convention).
pub fn power_at_fdr(scores: &[f64], truth: &[bool], level: f64) -> Result<f64> {
    let points = sweep_points(scores, truth)?;
    let pos = truth.iter().filter(|&&t| t).count() as f64;
    let neg = (truth.len() - truth.iter().filter(|&&t| t).count()) as f64;
    let mut best = 0.0_f64;
    for &(tp, fp) in &points {
        if fp as f64 / neg <= level {
            best = best.max(tp as f64 / pos);
        }
    }
    Ok(best)
}

/// Sensitivity of the largest score prefix whose empirical false-discovery
/// proportion FP/(TP+FP) stays at or below `level` (the body-text reading of
/// the same metric; reported for completeness).
pub fn power_at_empirical_fdr(scores: &[f64], truth: &[bool], level: f64) -> Result<f64> {
    let points = sweep_points(scores, truth)?;
    let pos = truth.iter().filter(|&&t| t).count() as f64;
    let mut best = 0.0_f64;
    for &(tp, fp) in &points {
        if fp as f64 / (tp + fp) as f64 <= level {
            best = best.max(tp as f64 / pos);
        }
    }
    Ok(best)
}

/// What a method must produce for one replicate.
#[derive(Debug, Clone)]
pub struct MethodOutput {
    /// Marginal inclusion scores, one per variable.
    pub scores: Vec<f64>,
    /// Point-selected model (median-probability rule for our methods).
    pub selected: Vec<bool>,
    /// Predictive mean and 95% interval per test row.
    pub predictions: Vec<Predictive>,
}

/// Benchmark metrics for one replicate.
#[derive(Debug, Clone, Copy)]
pub struct SimMetrics {
    pub mspe: f64,
    pub auc_roc: f64,
    pub auc_prc: f64,
    pub power_at_10: f64,
    pub ms: usize,
    pub fp: usize,
    pub cov95: f64,
}

/// Scores a method's replicate output against the truth.
pub fn evaluate_replicate(
    output: &MethodOutput,
    truth: &[bool],
    y_test: &[f64],
) -> Result<SimMetrics> {
    if output.scores.len() != truth.len() || output.selected.len() != truth.len() {
        return Err(Error::IncompleteMethod(format!(
            "scores/selected have lengths {}/{}, truth has {}",
            output.scores.len(),
            output.selected.len(),
            truth.len()
        )));
    }
    if output.predictions.len() != y_test.len() {
        return Err(Error::IncompleteMethod(format!(
            "got {} predictions for {} test rows",
            output.predictions.len(),
            y_test.len()
        )));
    }
    let (auc_roc, auc_prc) = roc_prc_auc(&output.scores, truth)?;
    let power_at_10 = power_at_fdr(&output.scores, truth, 0.10)?;
    let ms = output.selected.iter().filter(|&&s| s).count();
    let fp = output
        .selected
        .iter()
        .zip(truth)
        .filter(|(&s, &t)| s && !t)
        .count();
    let n = y_test.len() as f64;
    let mspe = output
        .predictions
        .iter()
        .zip(y_test)
        .map(|(p, y)| (p.mean - y) * (p.mean - y))
        .sum::<f64>()
        / n;
    let cov95 = output
        .predictions
        .iter()
        .zip(y_test)
        .filter(|(p, &y)| y >= p.lower95 && y <= p.upper95)
        .count() as f64
        / n;
    Ok(SimMetrics {
        mspe,
        auc_roc,
        auc_prc,
        power_at_10,
        ms,
        fp,
        cov95,
    })
}

/// The benchmarked methods. SSVS is the structured sampler under a forced
/// empty graph (all-singleton cliques), not a separate implementation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    BvsSl,
    /// BVS-SL with the true graph supplied as prior knowledge at the given
    /// belief.
    PriorCorrected { kappa: f64 },
    Ssvs,
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::BvsSl => "bvs-sl".into(),
            Method::PriorCorrected { kappa } => format!("prior-corrected(kappa={kappa})"),
            Method::Ssvs => "ssvs".into(),
        }
    }
}

/// RNG streams per replicate: data, chain, and prior-corruption draws evolve
/// on separate ChaCha streams of the master seed, so methods see identical
/// data within a replicate.
fn replicate_rng(master_seed: u64, replicate: usize, lane: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(3 * replicate as u64 + lane);
    rng
}

/// Seed for the replicate's data generation; shared across methods.
pub fn replicate_data_seed(master_seed: u64, replicate: usize) -> u64 {
    master_seed
        .wrapping_mul(0x9E3779B97F4A7C15)
        .wrapping_add(replicate as u64)
}

/// Runs one method on one generated replicate.
pub fn run_method<R: Rng + ?Sized>(
    method: &Method,
    case: &SimCase,
    data: &GeneratedData,
    config: &PipelineConfig,
    prior_override: Option<&PriorGraph>,
    rng: &mut R,
) -> Result<MethodOutput> {
    let (posterior, predictions) = match method {
        Method::Ssvs => {
            let cliques = CliqueSet::singletons(case.p);
            run_selection_stage(
                &data.train,
                &data.y_train,
                &cliques,
                Some(&data.test),
                config,
                rng,
            )?
        }
        Method::BvsSl => {
            let prior = PriorGraph::no_knowledge(case.p);
            let result = run_pipeline(
                &data.train,
                &data.y_train,
                &prior,
                Some(&data.test),
                config,
                rng,
            )?;
            (result.posterior, result.predictions)
        }
        Method::PriorCorrected { kappa } => {
            let owned;
            let prior = match prior_override {
                Some(p) => p,
                None => {
                    owned = case.true_prior(*kappa)?;
                    &owned
                }
            };
            let result = run_pipeline(
                &data.train,
                &data.y_train,
                prior,
                Some(&data.test),
                config,
                rng,
            )?;
            (result.posterior, result.predictions)
        }
    };
    let predictions = predictions.expect("test rows were supplied");
    let selected = posterior.var_incl.iter().map(|&p| p > 0.5).collect();
    Ok(MethodOutput {
        scores: posterior.var_incl,
        selected,
        predictions,
    })
}

/// Generates data and runs one method for one replicate id.
pub fn run_replicate(
    method: &Method,
    case: &SimCase,
    config: &PipelineConfig,
    master_seed: u64,
    replicate: usize,
) -> Result<(SimMetrics, MethodOutput)> {
    let data = generate_case(case, replicate_data_seed(master_seed, replicate))?;
    let mut chain_rng = replicate_rng(master_seed, replicate, 1);
    let output = run_method(method, case, &data, config, None, &mut chain_rng)?;
    let metrics = evaluate_replicate(&output, &case.gamma_truth, &data.y_test)?;
    Ok((metrics, output))
}

/// One row of the belief sweep.
#[derive(Debug, Clone, Copy)]
pub struct BeliefSweepRow {
    pub kappa: f64,
    pub mean_auc_roc: f64,
    pub mean_auc_prc: f64,
}

/// Runs the prior-corrected pipeline across a belief grid, using the true
/// graph as the prior (optionally corrupted by flipping `misspecified_edges`
/// random pairs), with data shared across grid points per replicate.
pub fn belief_sweep(
    case: &SimCase,
    kappa_grid: &[f64],
    replicates: usize,
    misspecified_edges: usize,
    config: &PipelineConfig,
    master_seed: u64,
) -> Result<Vec<BeliefSweepRow>> {
    let mut rows = Vec::with_capacity(kappa_grid.len());
    for &kappa in kappa_grid {
        let mut roc_sum = 0.0;
        let mut prc_sum = 0.0;
        for replicate in 0..replicates {
            let data = generate_case(case, replicate_data_seed(master_seed, replicate))?;
            let adjacency = if misspecified_edges > 0 {
                let mut corrupt_rng = replicate_rng(master_seed, replicate, 2);
                flip_edges(&case.true_graph, misspecified_edges, &mut corrupt_rng)
            } else {
                case.true_graph.clone()
            };
            let prior = PriorGraph::with_uniform_belief(adjacency, kappa)?;
            let mut chain_rng = replicate_rng(master_seed, replicate, 1);
            let output = run_method(
                &Method::PriorCorrected { kappa },
                case,
                &data,
                config,
                Some(&prior),
                &mut chain_rng,
            )?;
            let (auc_roc, auc_prc) = roc_prc_auc(&output.scores, &case.gamma_truth)?;
            roc_sum += auc_roc;
            prc_sum += auc_prc;
        }
        rows.push(BeliefSweepRow {
            kappa,
            mean_auc_roc: roc_sum / replicates as f64,
            mean_auc_prc: prc_sum / replicates as f64,
        });
    }
    Ok(rows)
}

/// Flips `count` distinct off-diagonal pairs of the adjacency.
pub fn flip_edges<R: Rng + ?Sized>(
    adjacency: &DMatrix<u8>,
    count: usize,
    rng: &mut R,
) -> DMatrix<u8> {
    let p = adjacency.nrows();
    let mut pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| ((i + 1)..p).map(move |j| (i, j)))
        .collect();
    // Partial Fisher-Yates for the first `count` positions.
    let take = count.min(pairs.len());
    for idx in 0..take {
        let swap = idx + rng.random_range(0..(pairs.len() - idx));
        pairs.swap(idx, swap);
    }
    let mut out = adjacency.clone();
    for &(i, j) in &pairs[..take] {
        let v = 1 - out[(i, j)];
        out[(i, j)] = v;
        out[(j, i)] = v;
    }
    out
}
