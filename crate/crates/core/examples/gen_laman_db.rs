//! Regenerates `data/laman_{n}.txt`: one Henneberg sequence per isomorphism
//! class of Laman graphs on `n` vertices, 3 <= n <= 8.
//!
//! Classes on n+1 vertices are found by applying every Henneberg move to every
//! class representative on n vertices and rejecting isomorphic duplicates.
//!
//!     cargo run --release -p tropgal --example gen_laman_db -- crates/core/data

use std::collections::HashSet;
use std::path::PathBuf;

use itertools::Itertools;
use tropgal::multigraph::{HennebergMove, HennebergSequence, SimpleGraph};

type Key = (Vec<(usize, Vec<usize>)>, Vec<(usize, usize)>);

/// Isomorphism-invariant key: degree-refined vertex classes, then the
/// lexicographically smallest edge list over class-respecting relabelings.
fn canonical_key(g: &SimpleGraph) -> Key {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n + 1];
    for &(u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let sig = |v: usize| -> (usize, Vec<usize>) {
        (adj[v].len(), adj[v].iter().map(|&w| adj[w].len()).sorted().collect())
    };
    let mut verts: Vec<usize> = (1..=n).collect();
    verts.sort_by_key(|&v| sig(v));
    let classes: Vec<Vec<usize>> = verts
        .iter()
        .copied()
        .chunk_by(|&v| sig(v))
        .into_iter()
        .map(|(_, c)| c.collect())
        .collect();
    let invariant: Vec<_> = verts.iter().map(|&v| sig(v)).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    let perms = classes
        .iter()
        .map(|c| c.iter().copied().permutations(c.len()).collect_vec())
        .multi_cartesian_product();
    for choice in perms {
        let mut pos = vec![0; n + 1];
        for (i, v) in choice.iter().flatten().enumerate() {
            pos[*v] = i + 1;
        }
        let edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (pos[u].min(pos[v]), pos[u].max(pos[v])))
            .sorted()
            .collect();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
        }
    }
    (invariant, best.unwrap_or_default())
}

fn main() {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "crates/core/data".into()));
    let k3_seq = HennebergSequence(vec![HennebergMove::H0 { i: 1, j: 2 }]);
    let mut level: Vec<(SimpleGraph, HennebergSequence)> =
        vec![(tropgal::multigraph::from_henneberg_sequence(&k3_seq).unwrap(), k3_seq)];
    for n in 3..=8 {
        let text: String = level.iter().map(|(_, s)| format!("{s}\n")).collect();
        std::fs::write(out.join(format!("laman_{n}.txt")), text).unwrap();
        eprintln!("n={n}: {} classes", level.len());
        if n == 8 {
            break;
        }
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for (g, seq) in &level {
            let mut moves = Vec::new();
            for (i, j) in (1..=n).tuple_combinations() {
                moves.push(HennebergMove::H0 { i, j });
            }
            for edge in 1..=g.edge_count() {
                let (a, b) = g.edge(edge).unwrap();
                for k in (1..=n).filter(|&k| k != a && k != b) {
                    moves.push(HennebergMove::H1 { edge, k });
                }
            }
            for mv in moves {
                let h = match mv {
                    HennebergMove::H0 { i, j } => g.henneberg0(i, j),
                    HennebergMove::H1 { edge, k } => g.henneberg1(edge, k),
                }
                .unwrap();
                if seen.insert(canonical_key(&h)) {
                    let mut s = seq.clone();
                    s.0.push(mv);
                    next.push((h, s));
                }
            }
        }
        level = next;
    }
}
