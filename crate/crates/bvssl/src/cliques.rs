//! Maximal clique enumeration and the node → clique membership index, plus
//! cross-platform prior graph construction.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default cap on the number of maximal cliques before giving up on a graph
/// as pathologically dense.
pub const DEFAULT_CLIQUE_CAP: usize = 100_000;

/// Maximal cliques of a graph together with the inverse membership index.
///
/// Cliques are sorted ascending internally and ordered lexicographically, so
/// clique ids are stable across runs. Isolated nodes appear as singleton
/// cliques, which makes an empty graph reduce the downstream selection
/// sampler to plain SSVS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSet {
    cliques: Vec<Vec<usize>>,
    node_index: Vec<Vec<usize>>,
}

impl CliqueSet {
    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn q(&self) -> usize {
        self.cliques.len()
    }

    pub fn p(&self) -> usize {
        self.node_index.len()
    }

    /// Ids of the cliques containing node j.
    pub fn cliques_of(&self, node: usize) -> &[usize] {
        &self.node_index[node]
    }

    /// All-singleton clique set over p nodes (the SSVS special case).
    pub fn singletons(p: usize) -> Self {
        Self {
            cliques: (0..p).map(|j| vec![j]).collect(),
            node_index: (0..p).map(|j| vec![j]).collect(),
        }
    }

    /// Rebuilds a clique set from explicit member lists (e.g. a persisted
    /// cliques.csv), checking coverage of all p nodes.
    pub fn from_parts(cliques: Vec<Vec<usize>>, p: usize) -> crate::error::Result<Self> {
        let node_index = node_clique_index(&cliques, p)?;
        Ok(Self {
            cliques,
            node_index,
        })
    }
}

/// Enumerates all maximal cliques with the default cap.
pub fn maximal_cliques(adjacency: &DMatrix<u8>) -> Result<CliqueSet> {
    maximal_cliques_with_cap(adjacency, DEFAULT_CLIQUE_CAP)
}

/// Pivoting Bron–Kerbosch over a 0/1 adjacency matrix.
pub fn maximal_cliques_with_cap(adjacency: &DMatrix<u8>, cap: usize) -> Result<CliqueSet> {
    let p = adjacency.nrows();
    if adjacency.ncols() != p {
        return Err(Error::InvariantViolation("adjacency must be square".into()));
    }
    for i in 0..p {
        if adjacency[(i, i)] != 0 {
            return Err(Error::InvariantViolation(format!(
                "adjacency has a self-loop at node {}",
                i + 1
            )));
        }
        for j in 0..p {
            if adjacency[(i, j)] != adjacency[(j, i)] {
                return Err(Error::InvariantViolation(
                    "adjacency must be symmetric".into(),
                ));
            }
        }
    }

    let neighbors: Vec<Vec<usize>> = (0..p)
        .map(|i| (0..p).filter(|&j| adjacency[(i, j)] == 1).collect())
        .collect();

    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let mut r = Vec::new();
    let p_set: Vec<usize> = (0..p).collect();
    bron_kerbosch(&neighbors, &mut r, p_set, Vec::new(), &mut cliques, cap)?;

    cliques.sort();
    let node_index = node_clique_index(&cliques, p)?;
    Ok(CliqueSet {
        cliques,
        node_index,
    })
}

fn bron_kerbosch(
    neighbors: &[Vec<usize>],
    r: &mut Vec<usize>,
    p: Vec<usize>,
    x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if p.is_empty() && x.is_empty() {
        if out.len() >= cap {
            return Err(Error::GraphTooDense { cap });
        }
        let mut clique = r.clone();
        clique.sort_unstable();
        out.push(clique);
        return Ok(());
    }
    // Pivot: the candidate with the most neighbors inside P, smallest index
    // on ties, keeping the recursion deterministic.
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| {
            let count = p.iter().filter(|&&v| neighbors[u].contains(&v)).count();
            (count, usize::MAX - u)
        })
        .expect("P or X non-empty");

    let candidates: Vec<usize> = p
        .iter()
        .copied()
        .filter(|&v| !neighbors[pivot].contains(&v))
        .collect();

    let mut p = p;
    let mut x = x;
    for v in candidates {
        let nv = &neighbors[v];
        let next_p: Vec<usize> = p.iter().copied().filter(|u| nv.contains(u)).collect();
        let next_x: Vec<usize> = x.iter().copied().filter(|u| nv.contains(u)).collect();
        r.push(v);
        bron_kerbosch(neighbors, r, next_p, next_x, out, cap)?;
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
    Ok(())
}

/// Inverse mapping node → sorted list of clique ids. Errors if some node is
/// covered by no clique.
pub fn node_clique_index(cliques: &[Vec<usize>], p: usize) -> Result<Vec<Vec<usize>>> {
    let mut index = vec![Vec::new(); p];
    for (k, clique) in cliques.iter().enumerate() {
        for &node in clique {
            if node >= p {
                return Err(Error::InvariantViolation(format!(
                    "clique {k} references node {node} outside 0..{p}"
                )));
            }
            index[node].push(k);
        }
    }
    for (node, ids) in index.iter().enumerate() {
        if ids.is_empty() {
            return Err(Error::CliqueCoverage(node + 1));
        }
    }
    Ok(index)
}

/// Expands a G-node gene graph to a (G·D)-node cross-platform prior: the
/// gene graph is replicated within each platform, and the D platform copies
/// of one gene form a complete clique; there are no cross-gene cross-platform
/// edges. Node (gene g, platform d) maps to index g·D + d.
pub fn expand_prior_graph(gene_adjacency: &DMatrix<u8>, n_platforms: usize) -> Result<DMatrix<u8>> {
    let g_count = gene_adjacency.nrows();
    if gene_adjacency.ncols() != g_count {
        return Err(Error::InvariantViolation(
            "gene adjacency must be square".into(),
        ));
    }
    if n_platforms == 0 {
        return Err(Error::InvariantViolation(
            "need at least one platform".into(),
        ));
    }
    for i in 0..g_count {
        if gene_adjacency[(i, i)] != 0 {
            return Err(Error::InvariantViolation(format!(
                "gene adjacency has a self-loop at gene {}",
                i + 1
            )));
        }
        for j in 0..g_count {
            if gene_adjacency[(i, j)] != gene_adjacency[(j, i)] {
                return Err(Error::InvariantViolation(
                    "gene adjacency must be symmetric".into(),
                ));
            }
        }
    }
    let p = g_count * n_platforms;
    let mut adj = DMatrix::zeros(p, p);
    for g1 in 0..g_count {
        for d1 in 0..n_platforms {
            let u = g1 * n_platforms + d1;
            // Same gene, different platform.
            for d2 in 0..n_platforms {
                if d2 != d1 {
                    adj[(u, g1 * n_platforms + d2)] = 1;
                }
            }
            // Same platform, gene edge.
            for g2 in 0..g_count {
                if g2 != g1 && gene_adjacency[(g1, g2)] == 1 {
                    adj[(u, g2 * n_platforms + d1)] = 1;
                }
            }
        }
    }
    Ok(adj)
}
