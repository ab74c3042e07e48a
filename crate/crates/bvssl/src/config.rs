//! Run configuration: flat `key = value` text files with `#` comments.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{McmcConfig, ShrinkageHypers};
use crate::pipeline::PipelineConfig;
use crate::select::VSHypers;

/// Every tunable of a run. CLI flags override file values, which override
/// the defaults below.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub iterations: usize,
    pub burn_in: usize,
    // Shrinkage prior.
    pub a_lambda: f64,
    pub b_lambda: f64,
    pub a_p: f64,
    pub b_p: f64,
    pub lambda_diag: f64,
    // Selection prior.
    pub a: f64,
    pub a_pi: f64,
    pub b_pi: f64,
    pub a_eta: f64,
    pub b_eta: f64,
    pub grid_points: usize,
    pub grid_min: f64,
    pub grid_max: f64,
    /// Belief applied to every prior edge unless a per-edge value is given.
    pub default_kappa: f64,
    /// Belief attached to absent prior edges.
    pub absent_kappa: f64,
    pub n_mc: usize,
    pub fdr_alpha: f64,
    pub out_dir: String,
    /// Replicate-level parallelism; within-chain execution stays sequential.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            iterations: 10_000,
            burn_in: 3_000,
            a_lambda: 1.0,
            b_lambda: 0.002,
            a_p: 1.0,
            b_p: 1.0,
            lambda_diag: 1.0,
            a: 4.0,
            a_pi: 1.0,
            b_pi: 1.0,
            a_eta: 0.01,
            b_eta: 0.01,
            grid_points: 1000,
            grid_min: 0.01,
            grid_max: 0.999,
            default_kappa: 0.0,
            absent_kappa: 0.0,
            n_mc: 5000,
            fdr_alpha: 0.2,
            out_dir: "out".into(),
            threads: 1,
        }
    }
}

/// Serializes a float with 17 significant digits, enough for an exact f64
/// round trip.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut config = Self::default();
        let mut seen = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
            config.set(key, value).map_err(|e| {
                Error::Config(format!("line {}: {e}", lineno + 1))
            })?;
        }
        config.validate()?;
        Ok(config)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("invalid value '{value}' for {key}")))
        }
        match key {
            "seed" => self.seed = num(key, value)?,
            "iterations" => self.iterations = num(key, value)?,
            "burn_in" => self.burn_in = num(key, value)?,
            "a_lambda" => self.a_lambda = num(key, value)?,
            "b_lambda" => self.b_lambda = num(key, value)?,
            "a_p" => self.a_p = num(key, value)?,
            "b_p" => self.b_p = num(key, value)?,
            "lambda_diag" => self.lambda_diag = num(key, value)?,
            "a" => self.a = num(key, value)?,
            "a_pi" => self.a_pi = num(key, value)?,
            "b_pi" => self.b_pi = num(key, value)?,
            "a_eta" => self.a_eta = num(key, value)?,
            "b_eta" => self.b_eta = num(key, value)?,
            "grid_points" => self.grid_points = num(key, value)?,
            "grid_min" => self.grid_min = num(key, value)?,
            "grid_max" => self.grid_max = num(key, value)?,
            "default_kappa" => self.default_kappa = num(key, value)?,
            "absent_kappa" => self.absent_kappa = num(key, value)?,
            "n_mc" => self.n_mc = num(key, value)?,
            "fdr_alpha" => self.fdr_alpha = num(key, value)?,
            "out_dir" => self.out_dir = value.to_string(),
            "threads" => self.threads = num(key, value)?,
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Canonical dump; `parse_str(dump())` reproduces the config exactly.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let f = format_float;
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("iterations = {}\n", self.iterations));
        s.push_str(&format!("burn_in = {}\n", self.burn_in));
        s.push_str(&format!("a_lambda = {}\n", f(self.a_lambda)));
        s.push_str(&format!("b_lambda = {}\n", f(self.b_lambda)));
        s.push_str(&format!("a_p = {}\n", f(self.a_p)));
        s.push_str(&format!("b_p = {}\n", f(self.b_p)));
        s.push_str(&format!("lambda_diag = {}\n", f(self.lambda_diag)));
        s.push_str(&format!("a = {}\n", f(self.a)));
        s.push_str(&format!("a_pi = {}\n", f(self.a_pi)));
        s.push_str(&format!("b_pi = {}\n", f(self.b_pi)));
        s.push_str(&format!("a_eta = {}\n", f(self.a_eta)));
        s.push_str(&format!("b_eta = {}\n", f(self.b_eta)));
        s.push_str(&format!("grid_points = {}\n", self.grid_points));
        s.push_str(&format!("grid_min = {}\n", f(self.grid_min)));
        s.push_str(&format!("grid_max = {}\n", f(self.grid_max)));
        s.push_str(&format!("default_kappa = {}\n", f(self.default_kappa)));
        s.push_str(&format!("absent_kappa = {}\n", f(self.absent_kappa)));
        s.push_str(&format!("n_mc = {}\n", self.n_mc));
        s.push_str(&format!("fdr_alpha = {}\n", f(self.fdr_alpha)));
        s.push_str(&format!("out_dir = {}\n", self.out_dir));
        s.push_str(&format!("threads = {}\n", self.threads));
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.mcmc().validate()?;
        self.shrinkage_hypers().validate()?;
        self.vs_hypers().validate()?;
        if !(self.fdr_alpha > 0.0 && self.fdr_alpha < 1.0) {
            return Err(Error::Config(format!(
                "fdr_alpha {} must lie in (0,1)",
                self.fdr_alpha
            )));
        }
        if self.n_mc < 1000 {
            return Err(Error::Config(format!(
                "n_mc {} too small; the Wishart reference needs at least 1000 draws",
                self.n_mc
            )));
        }
        if self.threads == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn mcmc(&self) -> McmcConfig {
        McmcConfig {
            iterations: self.iterations,
            burn_in: self.burn_in,
        }
    }

    pub fn shrinkage_hypers(&self) -> ShrinkageHypers {
        ShrinkageHypers {
            a_lambda: self.a_lambda,
            b_lambda: self.b_lambda,
            a_p: self.a_p,
            b_p: self.b_p,
            lambda_diag: self.lambda_diag,
        }
    }

    pub fn vs_hypers(&self) -> VSHypers {
        VSHypers {
            a: self.a,
            a_pi: self.a_pi,
            b_pi: self.b_pi,
            a_eta: self.a_eta,
            b_eta: self.b_eta,
            grid_points: self.grid_points,
            grid_min: self.grid_min,
            grid_max: self.grid_max,
        }
    }

    pub fn pipeline_config(&self) -> PipelineConfig {
        PipelineConfig {
            mcmc: self.mcmc(),
            shrinkage: self.shrinkage_hypers(),
            vs: self.vs_hypers(),
            n_mc_reference: self.n_mc,
        }
    }
}
