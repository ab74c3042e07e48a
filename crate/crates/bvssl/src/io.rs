//! Dataset and prior-graph ingestion plus deterministic CSV persistence.
//!
//! Dataset format: a UTF-8 comma-separated file with a header row, described
//! by a schema file with one `name,kind` line per column, kind one of
//! `continuous`, `ordinal:M`, or `response`. External ordinal codes are
//! 0-based integers 0..M−1 and are stored 1-based internally. Continuous
//! columns are standardized at ingestion.
//!
//! Prior graphs are edge lists: `i j [kappa]` with 1-based indices; edges
//! without an explicit belief get the configured default, absent edges get
//! the configured absence belief.
//!
//! All floats are written with 17 significant digits so files round-trip
//! bit-exactly; all row orders are deterministic.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::cliques::CliqueSet;
use crate::config::format_float;
use crate::dataset::{ColumnKind, MixedDataset, Standardization};
use crate::error::{Error, Result};
use crate::graph::{GraphEstimate, PriorGraph};
use crate::select::{Predictive, VsPosterior};
use crate::sim::SimMetrics;

/// Column schema entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaKind {
    Continuous,
    Ordinal { levels: u32 },
    Response,
}

/// Parsed schema: column names in file order with their kinds.
#[derive(Debug, Clone)]
pub struct Schema {
    pub columns: Vec<(String, SchemaKind)>,
}

impl Schema {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Ingestion(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut columns = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, kind) = line.split_once(',').ok_or_else(|| {
                Error::Ingestion(format!(
                    "schema line {}: expected 'name,kind'",
                    lineno + 1
                ))
            })?;
            let name = name.trim().to_string();
            let kind = kind.trim();
            let kind = if kind.eq_ignore_ascii_case("continuous") {
                SchemaKind::Continuous
            } else if kind.eq_ignore_ascii_case("response") {
                SchemaKind::Response
            } else if let Some(m) = kind.strip_prefix("ordinal:") {
                let levels: u32 = m.trim().parse().map_err(|_| {
                    Error::Ingestion(format!(
                        "schema line {}: invalid ordinal level count '{m}'",
                        lineno + 1
                    ))
                })?;
                if levels < 2 {
                    return Err(Error::Ingestion(format!(
                        "schema line {}: ordinal columns need at least 2 levels",
                        lineno + 1
                    )));
                }
                SchemaKind::Ordinal { levels }
            } else {
                return Err(Error::Ingestion(format!(
                    "schema line {}: unknown kind '{kind}'",
                    lineno + 1
                )));
            };
            columns.push((name, kind));
        }
        if columns.is_empty() {
            return Err(Error::Ingestion("schema lists no columns".into()));
        }
        let responses = columns
            .iter()
            .filter(|(_, k)| *k == SchemaKind::Response)
            .count();
        if responses > 1 {
            return Err(Error::Ingestion(
                "schema declares more than one response column".into(),
            ));
        }
        Ok(Self { columns })
    }
}

/// A loaded dataset: covariates, column names, the response when the schema
/// declares one, and the standardization fitted at ingestion (identity when
/// loaded raw) so held-out files can be transformed consistently.
#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub dataset: MixedDataset,
    pub names: Vec<String>,
    pub response: Option<Vec<f64>>,
    pub response_name: Option<String>,
    pub standardization: Standardization,
}

/// Reads and validates a CSV against its schema. Ordinal codes are remapped
/// to 1..=M, continuous columns are standardized, and the response column is
/// split off.
pub fn load_dataset(data_path: &Path, schema_path: &Path) -> Result<LoadedDataset> {
    let schema = Schema::from_file(schema_path)?;
    let text = std::fs::read_to_string(data_path)
        .map_err(|e| Error::Ingestion(format!("cannot read {}: {e}", data_path.display())))?;
    load_dataset_str(&text, &schema)
}

/// Like [`load_dataset`] but leaves continuous columns untouched, for test
/// files that must be transformed with training-set parameters instead.
pub fn load_dataset_raw(data_path: &Path, schema_path: &Path) -> Result<LoadedDataset> {
    let schema = Schema::from_file(schema_path)?;
    let text = std::fs::read_to_string(data_path)
        .map_err(|e| Error::Ingestion(format!("cannot read {}: {e}", data_path.display())))?;
    load_dataset_str_with(&text, &schema, false)
}

pub fn load_dataset_str(text: &str, schema: &Schema) -> Result<LoadedDataset> {
    load_dataset_str_with(text, schema, true)
}

fn load_dataset_str_with(text: &str, schema: &Schema, standardize: bool) -> Result<LoadedDataset> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Ingestion("data file is empty".into()))?;
    let header: Vec<&str> = header.split(',').map(str::trim).collect();
    if header.len() != schema.columns.len() {
        return Err(Error::Ingestion(format!(
            "header has {} columns, schema lists {}",
            header.len(),
            schema.columns.len()
        )));
    }
    for (got, (want, _)) in header.iter().zip(&schema.columns) {
        if got != want {
            return Err(Error::Ingestion(format!(
                "header column '{got}' does not match schema column '{want}'"
            )));
        }
    }

    let mut covariate_cols: Vec<(usize, String, ColumnKind)> = Vec::new();
    let mut response_col: Option<(usize, String)> = None;
    for (idx, (name, kind)) in schema.columns.iter().enumerate() {
        match kind {
            SchemaKind::Continuous => {
                covariate_cols.push((idx, name.clone(), ColumnKind::Continuous))
            }
            SchemaKind::Ordinal { levels } => {
                covariate_cols.push((idx, name.clone(), ColumnKind::Ordinal { levels: *levels }))
            }
            SchemaKind::Response => response_col = Some((idx, name.clone())),
        }
    }
    if covariate_cols.is_empty() {
        return Err(Error::Ingestion("schema lists no covariate columns".into()));
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut response: Vec<f64> = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != schema.columns.len() {
            return Err(Error::Ingestion(format!(
                "row {} has {} cells, expected {}",
                lineno + 1,
                cells.len(),
                schema.columns.len()
            )));
        }
        let mut row = Vec::with_capacity(covariate_cols.len());
        for (idx, name, kind) in &covariate_cols {
            let cell = cells[*idx];
            if cell.is_empty() {
                return Err(Error::Ingestion(format!(
                    "missing value at row {}, column '{name}'",
                    lineno + 1
                )));
            }
            match kind {
                ColumnKind::Continuous => {
                    let v: f64 = cell.parse().map_err(|_| {
                        Error::Ingestion(format!(
                            "row {}, column '{name}': invalid number '{cell}'",
                            lineno + 1
                        ))
                    })?;
                    if !v.is_finite() {
                        return Err(Error::Ingestion(format!(
                            "row {}, column '{name}': non-finite value",
                            lineno + 1
                        )));
                    }
                    row.push(v);
                }
                ColumnKind::Ordinal { levels } => {
                    let code: i64 = cell.parse().map_err(|_| {
                        Error::Ingestion(format!(
                            "row {}, column '{name}': invalid ordinal code '{cell}'",
                            lineno + 1
                        ))
                    })?;
                    if code < 0 || code >= *levels as i64 {
                        return Err(Error::Ingestion(format!(
                            "row {}, column '{name}': code {code} outside 0..{}",
                            lineno + 1,
                            levels - 1
                        )));
                    }
                    row.push((code + 1) as f64);
                }
            }
        }
        if let Some((idx, name)) = &response_col {
            let cell = cells[*idx];
            let v: f64 = cell.parse().map_err(|_| {
                Error::Ingestion(format!(
                    "row {}, response column '{name}': invalid number '{cell}'",
                    lineno + 1
                ))
            })?;
            if !v.is_finite() {
                return Err(Error::Ingestion(format!(
                    "row {}, response column '{name}': non-finite value",
                    lineno + 1
                )));
            }
            response.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Ingestion("data file has no rows".into()));
    }

    let n = rows.len();
    let p = covariate_cols.len();
    let values = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    let kinds: Vec<ColumnKind> = covariate_cols.iter().map(|(_, _, k)| *k).collect();
    let dataset = MixedDataset::new(values, kinds)?;
    let (dataset, standardization) = if standardize {
        dataset.standardize()?
    } else {
        let identity = Standardization {
            means: vec![0.0; p],
            sds: vec![1.0; p],
        };
        (dataset, identity)
    };
    Ok(LoadedDataset {
        dataset,
        names: covariate_cols.iter().map(|(_, n, _)| n.clone()).collect(),
        response: response_col.as_ref().map(|_| response),
        response_name: response_col.map(|(_, n)| n),
        standardization,
    })
}

/// Writes a dataset (and optional response) back to CSV with external
/// 0-based ordinal codes, plus the matching schema file.
pub fn write_dataset(
    data_path: &Path,
    schema_path: &Path,
    dataset: &MixedDataset,
    names: &[String],
    response: Option<(&str, &[f64])>,
) -> Result<()> {
    if names.len() != dataset.p() {
        return Err(Error::Ingestion(format!(
            "{} names for {} columns",
            names.len(),
            dataset.p()
        )));
    }
    let mut schema = String::new();
    for (j, name) in names.iter().enumerate() {
        match dataset.kind(j) {
            ColumnKind::Continuous => writeln!(schema, "{name},continuous").unwrap(),
            ColumnKind::Ordinal { levels } => writeln!(schema, "{name},ordinal:{levels}").unwrap(),
        }
    }
    if let Some((rname, _)) = response {
        writeln!(schema, "{rname},response").unwrap();
    }
    std::fs::write(schema_path, schema)?;

    let mut csv = names.join(",");
    if let Some((rname, _)) = response {
        csv.push(',');
        csv.push_str(rname);
    }
    csv.push('\n');
    for i in 0..dataset.n() {
        let mut cells: Vec<String> = Vec::with_capacity(dataset.p() + 1);
        for j in 0..dataset.p() {
            match dataset.kind(j) {
                ColumnKind::Continuous => cells.push(format_float(dataset.value(i, j))),
                ColumnKind::Ordinal { .. } => {
                    cells.push(format!("{}", dataset.code(i, j) - 1))
                }
            }
        }
        if let Some((_, y)) = response {
            cells.push(format_float(y[i]));
        }
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    std::fs::write(data_path, csv)?;
    Ok(())
}

/// Parses an `i j [kappa]` edge list into a prior graph over p nodes.
pub fn load_prior_graph(
    path: &Path,
    p: usize,
    default_kappa: f64,
    absent_kappa: f64,
) -> Result<PriorGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Ingestion(format!("cannot read {}: {e}", path.display())))?;
    parse_prior_graph(&text, p, default_kappa, absent_kappa)
}

pub fn parse_prior_graph(
    text: &str,
    p: usize,
    default_kappa: f64,
    absent_kappa: f64,
) -> Result<PriorGraph> {
    let mut a0 = DMatrix::zeros(p, p);
    let mut kappa = DMatrix::from_fn(p, p, |i, j| if i == j { 0.0 } else { absent_kappa });
    let mut seen: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Ingestion(format!(
                "prior graph line {}: expected 'i j [kappa]'",
                lineno + 1
            )));
        }
        let parse_idx = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| {
                Error::Ingestion(format!(
                    "prior graph line {}: invalid node index '{s}'",
                    lineno + 1
                ))
            })?;
            if v < 1 || v > p {
                return Err(Error::Ingestion(format!(
                    "prior graph line {}: node {v} outside 1..={p}",
                    lineno + 1
                )));
            }
            Ok(v - 1)
        };
        let i = parse_idx(fields[0])?;
        let j = parse_idx(fields[1])?;
        if i == j {
            return Err(Error::Ingestion(format!(
                "prior graph line {}: self-loop at node {}",
                lineno + 1,
                i + 1
            )));
        }
        let k = if fields.len() == 3 {
            fields[2].parse().map_err(|_| {
                Error::Ingestion(format!(
                    "prior graph line {}: invalid belief '{}'",
                    lineno + 1,
                    fields[2]
                ))
            })?
        } else {
            default_kappa
        };
        let key = (i.min(j), i.max(j));
        if let Some(&prev) = seen.get(&key) {
            if prev != k {
                return Err(Error::Ingestion(format!(
                    "prior graph line {}: edge ({}, {}) already given belief {prev}, now {k}",
                    lineno + 1,
                    key.0 + 1,
                    key.1 + 1
                )));
            }
        }
        seen.insert(key, k);
        a0[(i, j)] = 1;
        a0[(j, i)] = 1;
        kappa[(i, j)] = k;
        kappa[(j, i)] = k;
    }
    PriorGraph::new(a0, kappa)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

/// edges.csv: every i<j pair with its thresholding quantities.
pub fn write_edges_csv(path: &Path, estimate: &GraphEstimate) -> Result<()> {
    let p = estimate.rho_hat.nrows();
    let mut out = String::from("i,j,rho_hat,rho_ref,included\n");
    for i in 0..p {
        for j in (i + 1)..p {
            writeln!(
                out,
                "{},{},{},{},{}",
                i + 1,
                j + 1,
                format_float(estimate.rho_hat[(i, j)]),
                format_float(estimate.rho_ref[(i, j)]),
                estimate.adjacency[(i, j)]
            )
            .unwrap();
        }
    }
    write_file(path, &out)
}

/// Reads an edges.csv back into an adjacency matrix (for the `cliques`
/// subcommand). Dimension is taken from the largest index.
pub fn read_edges_csv(path: &Path) -> Result<DMatrix<u8>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Ingestion(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Ingestion("edges file is empty".into()))?;
    if header.trim() != "i,j,rho_hat,rho_ref,included" {
        return Err(Error::Ingestion(format!(
            "unexpected edges header '{header}'"
        )));
    }
    let mut entries = Vec::new();
    let mut p = 0usize;
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            return Err(Error::Ingestion(format!(
                "edges row {}: expected 5 cells",
                lineno + 2
            )));
        }
        let i: usize = cells[0].trim().parse().map_err(|_| {
            Error::Ingestion(format!("edges row {}: bad index", lineno + 2))
        })?;
        let j: usize = cells[1].trim().parse().map_err(|_| {
            Error::Ingestion(format!("edges row {}: bad index", lineno + 2))
        })?;
        let included: u8 = cells[4].trim().parse().map_err(|_| {
            Error::Ingestion(format!("edges row {}: bad inclusion flag", lineno + 2))
        })?;
        if i == 0 || j == 0 || i == j {
            return Err(Error::Ingestion(format!(
                "edges row {}: invalid pair ({i}, {j})",
                lineno + 2
            )));
        }
        p = p.max(i).max(j);
        entries.push((i - 1, j - 1, included));
    }
    let mut adj = DMatrix::zeros(p, p);
    for (i, j, included) in entries {
        if included == 1 {
            adj[(i, j)] = 1;
            adj[(j, i)] = 1;
        }
    }
    Ok(adj)
}

/// cliques.csv: one row per (clique, node) membership.
pub fn write_cliques_csv(path: &Path, cliques: &CliqueSet) -> Result<()> {
    let mut out = String::from("clique,node\n");
    for (k, clique) in cliques.cliques().iter().enumerate() {
        for &node in clique {
            writeln!(out, "{},{}", k + 1, node + 1).unwrap();
        }
    }
    write_file(path, &out)
}

/// Reads cliques.csv back (p inferred from the largest node index unless a
/// larger p is supplied).
pub fn read_cliques_csv(path: &Path, p: usize) -> Result<CliqueSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Ingestion(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Ingestion("cliques file is empty".into()))?;
    if header.trim() != "clique,node" {
        return Err(Error::Ingestion(format!(
            "unexpected cliques header '{header}'"
        )));
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (c, v) = line.split_once(',').ok_or_else(|| {
            Error::Ingestion(format!("cliques row {}: expected 'clique,node'", lineno + 2))
        })?;
        let c: usize = c.trim().parse().map_err(|_| {
            Error::Ingestion(format!("cliques row {}: bad clique id", lineno + 2))
        })?;
        let v: usize = v.trim().parse().map_err(|_| {
            Error::Ingestion(format!("cliques row {}: bad node id", lineno + 2))
        })?;
        if c == 0 || v == 0 || v > p {
            return Err(Error::Ingestion(format!(
                "cliques row {}: ids out of range",
                lineno + 2
            )));
        }
        if c > cliques.len() + 1 {
            return Err(Error::Ingestion(format!(
                "cliques row {}: clique ids must be contiguous",
                lineno + 2
            )));
        }
        if c == cliques.len() + 1 {
            cliques.push(Vec::new());
        }
        cliques[c - 1].push(v - 1);
    }
    let mut sorted = cliques.clone();
    for c in &mut sorted {
        c.sort_unstable();
    }
    if sorted != cliques {
        return Err(Error::Ingestion(
            "clique nodes must be listed in ascending order".into(),
        ));
    }
    CliqueSet::from_parts(cliques, p)
}

/// inclusion.csv: variable rows then clique rows.
pub fn write_inclusion_csv(path: &Path, posterior: &VsPosterior) -> Result<()> {
    let mut out = String::from("kind,index,probability\n");
    for (j, prob) in posterior.var_incl.iter().enumerate() {
        writeln!(out, "variable,{},{}", j + 1, format_float(*prob)).unwrap();
    }
    for (k, prob) in posterior.clique_incl.iter().enumerate() {
        writeln!(out, "clique,{},{}", k + 1, format_float(*prob)).unwrap();
    }
    write_file(path, &out)
}

/// coefficients.csv: posterior-mean coefficients, zero-padded.
pub fn write_coefficients_csv(path: &Path, posterior: &VsPosterior) -> Result<()> {
    let mut out = String::from("variable,beta_mean\n");
    for (j, beta) in posterior.beta_mean.iter().enumerate() {
        writeln!(out, "{},{}", j + 1, format_float(*beta)).unwrap();
    }
    write_file(path, &out)
}

/// predictions.csv: model-averaged mean and 95% interval per row.
pub fn write_predictions_csv(path: &Path, predictions: &[Predictive]) -> Result<()> {
    let mut out = String::from("row,mean,lower95,upper95\n");
    for (i, p) in predictions.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            format_float(p.mean),
            format_float(p.lower95),
            format_float(p.upper95)
        )
        .unwrap();
    }
    write_file(path, &out)
}

/// fdr_selected.csv: variables surviving the Bayesian-FDR rule.
pub fn write_fdr_csv(path: &Path, selected: &[usize], probs: &[f64], alpha: f64) -> Result<()> {
    let mut out = format!("# fdr_alpha = {}\nvariable,probability\n", format_float(alpha));
    for &j in selected {
        writeln!(out, "{},{}", j + 1, format_float(probs[j])).unwrap();
    }
    write_file(path, &out)
}

/// One metrics.csv row per (case, replicate, method).
pub fn write_metrics_csv(
    path: &Path,
    rows: &[(String, usize, String, SimMetrics)],
) -> Result<()> {
    let mut out = String::from("case,replicate,method,mspe,auc_roc,auc_prc,power_at_10,ms,fp,cov95\n");
    for (case, replicate, method, m) in rows {
        writeln!(
            out,
            "{case},{replicate},{method},{},{},{},{},{},{},{}",
            format_float(m.mspe),
            format_float(m.auc_roc),
            format_float(m.auc_prc),
            format_float(m.power_at_10),
            m.ms,
            m.fp,
            format_float(m.cov95)
        )
        .unwrap();
    }
    write_file(path, &out)
}

/// ROC or PRC point sets per (case, replicate, method).
pub fn write_points_csv(
    path: &Path,
    header: (&str, &str),
    rows: &[(String, usize, String, Vec<(f64, f64)>)],
) -> Result<()> {
    let mut out = format!("case,replicate,method,{},{}\n", header.0, header.1);
    for (case, replicate, method, points) in rows {
        for (x, y) in points {
            writeln!(
                out,
                "{case},{replicate},{method},{},{}",
                format_float(*x),
                format_float(*y)
            )
            .unwrap();
        }
    }
    write_file(path, &out)
}

/// belief_sweep.csv rows.
pub fn write_belief_sweep_csv(
    path: &Path,
    rows: &[crate::sim::BeliefSweepRow],
) -> Result<()> {
    let mut out = String::from("kappa,mean_auc_roc,mean_auc_prc\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{}",
            format_float(row.kappa),
            format_float(row.mean_auc_roc),
            format_float(row.mean_auc_prc)
        )
        .unwrap();
    }
    write_file(path, &out)
}
