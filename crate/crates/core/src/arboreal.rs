//! Intersection graphs of maximal reduced chains and the arboreal-pair test.

use serde::Serialize;

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::excision::chain_to_history;
use crate::flats::{self, ChainOfFlats};
use crate::intersect::{stable_pairing, IntegerMatrix};
use crate::labels::LabelSet;
use crate::multigraph::{Multigraph, SimpleGraph};

/// Bipartite multigraph on the reduced flats of two chains, one edge per
/// label joining the reduced flats containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionGraph {
    pub left: Vec<LabelSet>,
    pub right: Vec<LabelSet>,
    /// `(left index, right index)` indexed by label − 1.
    pub edges: Vec<(usize, usize)>,
}

impl IntersectionGraph {
    pub fn vertex_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_tree(&self) -> bool {
        let nl = self.left.len();
        if self.edges.len() + 1 != self.vertex_count() {
            return false;
        }
        let mut dsu = Dsu::new(self.vertex_count());
        self.edges.iter().all(|&(a, b)| dsu.union(a, nl + b))
    }
}

fn reduced_blocks(g: &Multigraph, c: &ChainOfFlats) -> Result<Vec<LabelSet>> {
    if c.parts().len() != g.components().len() {
        return Err(Error::Precondition("chain does not cover the graph".into()));
    }
    let mut out = Vec::new();
    for part in c.parts() {
        out.extend_from_slice(flats::reduce(part)?.blocks());
    }
    Ok(out)
}

fn partition_graph(p1: &[LabelSet], p2: &[LabelSet]) -> IntersectionGraph {
    let m: usize = p1.iter().map(|b| b.len()).sum();
    let mut edges = vec![(0, 0); m];
    for (i, b) in p1.iter().enumerate() {
        for l in b.iter() {
            edges[l - 1].0 = i;
        }
    }
    for (j, b) in p2.iter().enumerate() {
        for l in b.iter() {
            edges[l - 1].1 = j;
        }
    }
    IntersectionGraph {
        left: p1.to_vec(),
        right: p2.to_vec(),
        edges,
    }
}

/// Tree test on the bipartite graph of two partitions of one ground set.
pub fn partitions_form_tree(p1: &[LabelSet], p2: &[LabelSet]) -> bool {
    partition_graph(p1, p2).is_tree()
}

pub fn intersection_graph(
    g: &SimpleGraph,
    c1: &ChainOfFlats,
    c2: &ChainOfFlats,
) -> Result<IntersectionGraph> {
    let mg = g.to_multigraph();
    Ok(partition_graph(
        &reduced_blocks(&mg, c1)?,
        &reduced_blocks(&mg, c2)?,
    ))
}

pub fn is_arboreal_pair(g: &SimpleGraph, c1: &ChainOfFlats, c2: &ChainOfFlats) -> Result<bool> {
    Ok(intersection_graph(g, c1, c2)?.is_tree())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArborealReport {
    pub arboreal: bool,
    pub pairing: u64,
    pub rank: usize,
    pub m: usize,
}

/// Rank of the matrix whose columns are the flat indicators of both chains,
/// ground set included.
pub fn indicator_rank(g: &Multigraph, c1: &ChainOfFlats, c2: &ChainOfFlats) -> usize {
    let m = g.edge_count();
    let cols: Vec<Vec<i64>> = [c1, c2]
        .iter()
        .flat_map(|c| {
            c.flats()
                .map(|f| f.labels())
                .chain(g.components())
                .map(|s| s.indicator(m))
                .collect::<Vec<_>>()
        })
        .collect();
    IntegerMatrix::from_rows(&cols).rank()
}

pub fn arboreal_matches_pairing(
    g: &SimpleGraph,
    c1: &ChainOfFlats,
    c2: &ChainOfFlats,
    seed: u64,
) -> Result<ArborealReport> {
    let arboreal = is_arboreal_pair(g, c1, c2)?;
    let mg = g.to_multigraph();
    let h1 = chain_to_history(&mg, c1)?;
    let h2 = chain_to_history(&mg, c2)?;
    let pairing = stable_pairing(h1.result(), h2.result(), seed)?.value;
    Ok(ArborealReport {
        arboreal,
        pairing,
        rank: indicator_rank(&mg, c1, c2),
        m: mg.edge_count(),
    })
}
