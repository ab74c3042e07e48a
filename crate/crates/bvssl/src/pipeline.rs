//! End-to-end composition: graph learning → clique enumeration → structured
//! variable selection → model-averaged prediction.

use rand::Rng;

use crate::cliques::{maximal_cliques, CliqueSet};
use crate::dataset::MixedDataset;
use crate::error::Result;
use crate::graph::{
    run_graph_mcmc, GraphChainSummary, GraphEstimate, McmcConfig, PriorGraph, ShrinkageHypers,
};
use crate::select::{predict_bma, run_vs_mcmc, Predictive, VSHypers, VsPosterior};

/// Everything the two samplers need, bundled.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Iteration budget shared by the graph and selection samplers.
    pub mcmc: McmcConfig,
    pub shrinkage: ShrinkageHypers,
    pub vs: VSHypers,
    /// Monte-Carlo draws for the Wishart reference.
    pub n_mc_reference: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            mcmc: McmcConfig::default(),
            shrinkage: ShrinkageHypers::default(),
            vs: VSHypers::default(),
            n_mc_reference: 5000,
        }
    }
}

/// Output of a full two-stage run.
#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub graph: GraphEstimate,
    pub graph_summary: GraphChainSummary,
    pub cliques: CliqueSet,
    pub posterior: VsPosterior,
    /// Per-test-row predictive summaries, when test rows were supplied.
    pub predictions: Option<Vec<Predictive>>,
}

/// Runs the two-stage analysis. Continuous columns are standardized on the
/// training set and test rows are transformed with the training parameters.
pub fn run_pipeline<R: Rng + ?Sized>(
    train: &MixedDataset,
    y: &[f64],
    prior: &PriorGraph,
    test: Option<&MixedDataset>,
    config: &PipelineConfig,
    rng: &mut R,
) -> Result<PipelineResult> {
    let (train_std, standardization) = train.standardize()?;
    let (graph, graph_summary) = run_graph_mcmc(
        &train_std,
        prior,
        &config.shrinkage,
        &config.mcmc,
        config.n_mc_reference,
        rng,
    )?;
    let cliques = maximal_cliques(&graph.adjacency)?;
    let posterior = run_vs_mcmc(&train_std, y, &cliques, &config.vs, &config.mcmc, rng)?;

    let predictions = match test {
        Some(test) => {
            let test_std = test.apply_standardization(&standardization)?;
            let mut preds = Vec::with_capacity(test_std.n());
            for i in 0..test_std.n() {
                let row: Vec<f64> = (0..test_std.p()).map(|j| test_std.value(i, j)).collect();
                preds.push(predict_bma(&posterior, &row, rng)?);
            }
            Some(preds)
        }
        None => None,
    };

    Ok(PipelineResult {
        graph,
        graph_summary,
        cliques,
        posterior,
        predictions,
    })
}

/// Runs only the selection stage against a fixed clique structure (used for
/// the SSVS special case and for the `select` subcommand).
pub fn run_selection_stage<R: Rng + ?Sized>(
    train: &MixedDataset,
    y: &[f64],
    cliques: &CliqueSet,
    test: Option<&MixedDataset>,
    config: &PipelineConfig,
    rng: &mut R,
) -> Result<(VsPosterior, Option<Vec<Predictive>>)> {
    let (train_std, standardization) = train.standardize()?;
    let posterior = run_vs_mcmc(&train_std, y, cliques, &config.vs, &config.mcmc, rng)?;
    let predictions = match test {
        Some(test) => {
            let test_std = test.apply_standardization(&standardization)?;
            let mut preds = Vec::with_capacity(test_std.n());
            for i in 0..test_std.n() {
                let row: Vec<f64> = (0..test_std.p()).map(|j| test_std.value(i, j)).collect();
                preds.push(predict_bma(&posterior, &row, rng)?);
            }
            Some(preds)
        }
        None => None,
    };
    Ok((posterior, predictions))
}
