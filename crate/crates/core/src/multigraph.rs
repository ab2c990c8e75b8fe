//! Simple and multigraph types, Henneberg constructions, Laman recognition and
//! the bundled database of small Laman graphs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::labels::LabelSet;

/// Simple graph on vertices `1..=n`; edge `i` (1-based position) has label `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SimpleGraphJson", into = "SimpleGraphJson")]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct SimpleGraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<SimpleGraphJson> for SimpleGraph {
    type Error = Error;
    fn try_from(j: SimpleGraphJson) -> Result<Self> {
        SimpleGraph::new(j.n, j.edges.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

impl From<SimpleGraph> for SimpleGraphJson {
    fn from(g: SimpleGraph) -> Self {
        SimpleGraphJson {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl SimpleGraph {
    /// Validates and normalizes each pair to `u < v`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        if edges.len() > LabelSet::MAX_LABEL {
            return Err(Error::InvalidGraph(format!(
                "at most {} edges supported",
                LabelSet::MAX_LABEL
            )));
        }
        let mut seen = std::collections::HashSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(Error::InvalidGraph(format!("edge {} is a loop", i + 1)));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidGraph(format!(
                    "edge {} has a vertex outside 1..={n}",
                    i + 1
                )));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "edge {} repeats {{{},{}}}",
                    i + 1,
                    e.0,
                    e.1
                )));
            }
            norm.push(e);
        }
        Ok(SimpleGraph { n, edges: norm })
    }

    /// The single edge `{1,2}`.
    pub fn single_edge() -> Self {
        SimpleGraph {
            n: 2,
            edges: vec![(1, 2)],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Endpoints of the edge with the given 1-based label.
    pub fn edge(&self, label: usize) -> Option<(usize, usize)> {
        label.checked_sub(1).and_then(|i| self.edges.get(i).copied())
    }

    pub fn to_multigraph(&self) -> Multigraph {
        Multigraph {
            n: self.n,
            ends: self.edges.clone(),
        }
    }

    /// Adds vertex `n+1` joined to `i` and `j`.
    pub fn henneberg0(&self, i: usize, j: usize) -> Result<SimpleGraph> {
        let bad = |reason: String| Error::InvalidMove {
            index: None,
            reason,
        };
        if i == j {
            return Err(bad(format!("H0 needs distinct vertices, got {i} twice")));
        }
        for v in [i, j] {
            if v == 0 || v > self.n {
                return Err(bad(format!("vertex {v} outside 1..={}", self.n)));
            }
        }
        let w = self.n + 1;
        let mut edges = self.edges.clone();
        edges.push((i.min(j), w));
        edges.push((i.max(j), w));
        SimpleGraph::new(w, edges)
    }

    /// Removes edge `e = {i,j}` and adds vertex `n+1` joined to `i`, `j`, `k`.
    ///
    /// The removed label is retired, the surviving labels are compacted in
    /// order, and the new edges `{i,n+1}`, `{j,n+1}`, `{k,n+1}` (with `i < j`)
    /// take the last three labels.
    pub fn henneberg1(&self, e: usize, k: usize) -> Result<SimpleGraph> {
        let bad = |reason: String| Error::InvalidMove {
            index: None,
            reason,
        };
        let (i, j) = self
            .edge(e)
            .ok_or_else(|| bad(format!("edge {e} outside 1..={}", self.edges.len())))?;
        if k == 0 || k > self.n {
            return Err(bad(format!("vertex {k} outside 1..={}", self.n)));
        }
        if k == i || k == j {
            return Err(bad(format!("H1 vertex {k} is an endpoint of edge {e}")));
        }
        let w = self.n + 1;
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx + 1 != e)
            .map(|(_, &p)| p)
            .collect();
        edges.extend([(i, w), (j, w), (k, w)]);
        SimpleGraph::new(w, edges)
    }

    /// Laman test via the (2,3) pebble game.
    pub fn is_laman(&self) -> bool {
        if self.n < 2 || self.edges.len() + 3 != 2 * self.n {
            return false;
        }
        let mut game = PebbleGame::new(self.n);
        self.edges.iter().all(|&(u, v)| game.try_insert(u, v))
    }
}

/// Incremental (2,3) pebble game; accepted edges are independent in the
/// generic rigidity matroid.
struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
}

impl PebbleGame {
    fn new(n: usize) -> Self {
        PebbleGame {
            pebbles: vec![2; n + 1],
            out: vec![Vec::new(); n + 1],
        }
    }

    fn try_insert(&mut self, u: usize, v: usize) -> bool {
        while self.pebbles[u] + self.pebbles[v] < 4 {
            if !(self.pebbles[u] < 2 && self.gather(u, v) || self.pebbles[v] < 2 && self.gather(v, u))
            {
                return false;
            }
        }
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        true
    }

    /// Moves one free pebble onto `root` along reversed out-edges, never
    /// taking one from `keep`.
    fn gather(&mut self, root: usize, keep: usize) -> bool {
        let n = self.out.len();
        let mut prev = vec![usize::MAX; n];
        prev[root] = root;
        prev[keep] = keep;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for idx in 0..self.out[x].len() {
                let y = self.out[x][idx];
                if prev[y] != usize::MAX {
                    continue;
                }
                prev[y] = x;
                if self.pebbles[y] > 0 {
                    self.pebbles[y] -= 1;
                    self.pebbles[root] += 1;
                    let mut cur = y;
                    while cur != root {
                        let p = prev[cur];
                        let pos = self.out[p].iter().position(|&t| t == cur).unwrap();
                        self.out[p].swap_remove(pos);
                        self.out[cur].push(p);
                        cur = p;
                    }
                    return true;
                }
                stack.push(y);
            }
        }
        false
    }
}

/// One Henneberg move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HennebergMove {
    H0 { i: usize, j: usize },
    H1 { edge: usize, k: usize },
}

impl fmt::Display for HennebergMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HennebergMove::H0 { i, j } => write!(f, "H0 {i} {j}"),
            HennebergMove::H1 { edge, k } => write!(f, "H1 {edge} {k}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HennebergSequence(pub Vec<HennebergMove>);

impl fmt::Display for HennebergSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join("; "))
    }
}

impl FromStr for HennebergSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut moves = Vec::new();
        for tok in s.split([';', '\n']).map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = tok.split_whitespace().collect();
            let nums: Vec<usize> = parts[1..]
                .iter()
                .map(|p| p.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("bad move {tok:?}: {e}")))?;
            let mv = match (parts[0], nums.as_slice()) {
                ("H0", &[i, j]) => HennebergMove::H0 { i, j },
                ("H1", &[edge, k]) => HennebergMove::H1 { edge, k },
                _ => return Err(Error::Parse(format!("bad move {tok:?}"))),
            };
            moves.push(mv);
        }
        Ok(HennebergSequence(moves))
    }
}

/// Applies the moves to the single edge `{1,2}`.
pub fn from_henneberg_sequence(seq: &HennebergSequence) -> Result<SimpleGraph> {
    let mut g = SimpleGraph::single_edge();
    for (idx, mv) in seq.0.iter().enumerate() {
        let step = match *mv {
            HennebergMove::H0 { i, j } => g.henneberg0(i, j),
            HennebergMove::H1 { edge, k } => g.henneberg1(edge, k),
        };
        g = step.map_err(|e| match e {
            Error::InvalidMove { reason, .. } => Error::InvalidMove {
                index: Some(idx + 1),
                reason,
            },
            other => other,
        })?;
    }
    Ok(g)
}

const LAMAN_DB: [&str; 6] = [
    include_str!("../data/laman_3.txt"),
    include_str!("../data/laman_4.txt"),
    include_str!("../data/laman_5.txt"),
    include_str!("../data/laman_6.txt"),
    include_str!("../data/laman_7.txt"),
    include_str!("../data/laman_8.txt"),
];

/// Vertex counts covered by the bundled database.
pub const LAMAN_DB_RANGE: std::ops::RangeInclusive<usize> = 3..=8;

fn db_lines(n: usize) -> Option<impl Iterator<Item = &'static str>> {
    LAMAN_DB_RANGE
        .contains(&n)
        .then(|| LAMAN_DB[n - 3].lines().filter(|l| !l.trim().is_empty()))
}

/// Number of isomorphism classes bundled for `n` vertices.
pub fn laman_db_count(n: usize) -> Option<usize> {
    db_lines(n).map(|it| it.count())
}

/// Henneberg sequence of the `index`-th (1-based) bundled graph on `n` vertices.
pub fn laman_db_sequence(n: usize, index: usize) -> Result<HennebergSequence> {
    let not_found = || {
        let ranges = LAMAN_DB_RANGE
            .map(|k| format!("n={k}: 1..={}", laman_db_count(k).unwrap_or(0)))
            .join(", ");
        Error::NotFound(format!("no Laman graph ({n}, {index}); valid: {ranges}"))
    };
    let line = db_lines(n)
        .and_then(|mut it| index.checked_sub(1).and_then(|i| it.nth(i)))
        .ok_or_else(not_found)?;
    line.parse()
}

pub fn laman_db(n: usize, index: usize) -> Result<SimpleGraph> {
    from_henneberg_sequence(&laman_db_sequence(n, index)?)
}

/// All bundled graphs with their `(n, index)` coordinates.
pub fn laman_db_all() -> Vec<(usize, usize, SimpleGraph)> {
    LAMAN_DB_RANGE
        .flat_map(|n| {
            (1..=laman_db_count(n).unwrap_or(0))
                .map(move |i| (n, i, laman_db(n, i).expect("bundled sequence is valid")))
        })
        .collect()
}

/// Loopless multigraph whose edge labels are exactly `1..=m`.
///
/// Vertices are `1..=n`; some may be untouched after excisions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MultigraphJson", into = "MultigraphJson")]
pub struct Multigraph {
    n: usize,
    ends: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct MultigraphJson {
    n: usize,
    edges: Vec<EdgeRecord>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    label: usize,
    u: usize,
    v: usize,
}

impl TryFrom<MultigraphJson> for Multigraph {
    type Error = Error;
    fn try_from(j: MultigraphJson) -> Result<Self> {
        let m = j.edges.len();
        let mut ends = vec![None; m];
        for r in j.edges {
            if r.label == 0 || r.label > m {
                return Err(Error::InvalidGraph(format!(
                    "label {} outside 1..={m}",
                    r.label
                )));
            }
            if ends[r.label - 1].replace((r.u, r.v)).is_some() {
                return Err(Error::InvalidGraph(format!("label {} repeated", r.label)));
            }
        }
        Multigraph::new(j.n, ends.into_iter().map(Option::unwrap).collect())
    }
}

impl From<Multigraph> for MultigraphJson {
    fn from(g: Multigraph) -> Self {
        MultigraphJson {
            n: g.n,
            edges: g
                .ends
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| EdgeRecord { label: i + 1, u, v })
                .collect(),
        }
    }
}

/// A maximal class of parallel edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Multiedge {
    pub labels: LabelSet,
    pub ends: (usize, usize),
    /// Both endpoints meet no other edge.
    pub isolated: bool,
}

impl Multigraph {
    /// Edge `i` of `ends` gets label `i + 1`.
    pub fn new(n: usize, ends: Vec<(usize, usize)>) -> Result<Self> {
        if ends.len() > LabelSet::MAX_LABEL {
            return Err(Error::InvalidGraph(format!(
                "at most {} edges supported",
                LabelSet::MAX_LABEL
            )));
        }
        let mut norm = Vec::with_capacity(ends.len());
        for (i, &(u, v)) in ends.iter().enumerate() {
            if u == v {
                return Err(Error::InvalidGraph(format!("edge {} is a loop", i + 1)));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidGraph(format!(
                    "edge {} has a vertex outside 1..={n}",
                    i + 1
                )));
            }
            norm.push((u.min(v), u.max(v)));
        }
        Ok(Multigraph { n, ends: norm })
    }

    pub(crate) fn from_parts(n: usize, ends: Vec<(usize, usize)>) -> Self {
        debug_assert!(ends.iter().all(|&(u, v)| u < v && v <= n));
        Multigraph { n, ends }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Size `m` of the ground set.
    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn ground_set(&self) -> LabelSet {
        LabelSet::full(self.ends.len())
    }

    /// Endpoints of `label`, with the smaller vertex first.
    pub fn ends(&self, label: usize) -> (usize, usize) {
        self.ends[label - 1]
    }

    pub fn all_ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    /// Maximal parallel classes, ordered by smallest label.
    pub fn multiedges(&self) -> Vec<Multiedge> {
        let mut classes: HashMap<(usize, usize), LabelSet> = HashMap::new();
        let mut degree = vec![0usize; self.n + 1];
        for (i, &(u, v)) in self.ends.iter().enumerate() {
            classes.entry((u, v)).or_default().insert(i + 1);
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut out: Vec<Multiedge> = classes
            .into_iter()
            .map(|(ends, labels)| Multiedge {
                labels,
                ends,
                isolated: degree[ends.0] == labels.len() && degree[ends.1] == labels.len(),
            })
            .collect();
        out.sort_by_key(|me| me.labels.min_label());
        out
    }

    /// Label sets of the connected components, ordered by smallest label.
    pub fn components(&self) -> Vec<LabelSet> {
        let mut dsu = Dsu::new(self.n + 1);
        for &(u, v) in &self.ends {
            dsu.union(u, v);
        }
        let mut by_root: HashMap<usize, LabelSet> = HashMap::new();
        for (i, &(u, _)) in self.ends.iter().enumerate() {
            by_root.entry(dsu.find(u)).or_default().insert(i + 1);
        }
        let mut comps: Vec<LabelSet> = by_root.into_values().collect();
        comps.sort_by_key(|c| c.min_label());
        comps
    }

    /// Vertices touched by the labels in `s`.
    pub fn vertices_of(&self, s: LabelSet) -> Vec<usize> {
        s.iter()
            .flat_map(|l| {
                let (u, v) = self.ends(l);
                [u, v]
            })
            .sorted_unstable()
            .dedup()
            .collect()
    }
}

impl From<&SimpleGraph> for Multigraph {
    fn from(g: &SimpleGraph) -> Self {
        g.to_multigraph()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn k3() -> SimpleGraph {
        SimpleGraph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    pub fn prism() -> SimpleGraph {
        SimpleGraph::new(
            6,
            vec![(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)],
        )
        .unwrap()
    }

    fn k4() -> SimpleGraph {
        SimpleGraph::new(4, (1..=4).tuple_combinations().collect()).unwrap()
    }

    /// Exponential subset definition of the Laman property.
    pub fn laman_by_subsets(g: &SimpleGraph) -> bool {
        let n = g.vertex_count();
        if g.edge_count() + 3 != 2 * n {
            return false;
        }
        (0u32..1 << n).filter(|s| s.count_ones() >= 2).all(|s| {
            let inside = g
                .edges()
                .iter()
                .filter(|&&(u, v)| s >> (u - 1) & 1 == 1 && s >> (v - 1) & 1 == 1)
                .count();
            inside + 3 <= 2 * s.count_ones() as usize
        })
    }

    #[test]
    fn laman_examples() {
        assert!(k3().is_laman());
        assert!(prism().is_laman());
        assert!(!k4().is_laman());
        assert!(SimpleGraph::single_edge().is_laman());
    }

    #[test]
    fn henneberg_moves() {
        let k2 = SimpleGraph::single_edge();
        let t = k2.henneberg0(1, 2).unwrap();
        assert_eq!(t.edges(), &[(1, 2), (1, 3), (2, 3)]);
        let g = t.henneberg0(1, 3).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 5);
        assert!(matches!(
            t.henneberg0(2, 2),
            Err(Error::InvalidMove { .. })
        ));
        let h = k3().henneberg1(1, 3).unwrap();
        assert!(h.is_laman());
        assert_eq!(h.edges(), &[(2, 3), (1, 3), (1, 4), (2, 4), (3, 4)]);
        assert!(matches!(
            k3().henneberg1(1, 2),
            Err(Error::InvalidMove { .. })
        ));
    }

    #[test]
    fn prism_from_figure_sequence() {
        // H0(1,2), H0(1,3), H0(4,2) then H1 on edge {3,4} towards vertex 5.
        let seq: HennebergSequence = "H0 1 2; H0 1 3; H0 4 2; H1 5 5".parse().unwrap();
        let g = from_henneberg_sequence(&seq).unwrap();
        assert!(g.is_laman());
        assert_eq!(g.vertex_count(), 6);
        let mut deg = [0; 7];
        for &(u, v) in g.edges() {
            deg[u] += 1;
            deg[v] += 1;
        }
        assert!(deg[1..].iter().all(|&d| d == 3));
        // prism: exactly two triangles
        let tri = (1..=6)
            .tuple_combinations()
            .filter(|&(a, b, c)| {
                [(a, b), (a, c), (b, c)]
                    .iter()
                    .all(|e| g.edges().contains(e))
            })
            .count();
        assert_eq!(tri, 2);
    }

    #[test]
    fn sequence_errors_carry_index() {
        let seq: HennebergSequence = "H0 1 2; H0 9 1".parse().unwrap();
        match from_henneberg_sequence(&seq) {
            Err(Error::InvalidMove { index, .. }) => assert_eq!(index, Some(2)),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            from_henneberg_sequence(&HennebergSequence::default()).unwrap(),
            SimpleGraph::single_edge()
        );
        assert!("H2 1 2".parse::<HennebergSequence>().is_err());
    }

    #[test]
    fn sequence_text_round_trip() {
        let s = "H0 1 2; H1 3 1";
        assert_eq!(s.parse::<HennebergSequence>().unwrap().to_string(), s);
    }

    #[test]
    fn database_lookup() {
        let t = laman_db(3, 1).unwrap();
        assert_eq!(t.edges(), &[(1, 2), (1, 3), (2, 3)]);
        assert!(t.is_laman());
        let g = laman_db(4, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 5));
        assert!(matches!(laman_db(2, 1), Err(Error::NotFound(_))));
        assert!(matches!(laman_db(4, 2), Err(Error::NotFound(_))));
        assert!(matches!(laman_db(3, 0), Err(Error::NotFound(_))));
        let counts: Vec<_> = LAMAN_DB_RANGE.map(|n| laman_db_count(n).unwrap()).collect();
        assert_eq!(counts, vec![1, 1, 3, 13, 70, 608]);
    }

    #[test]
    fn multiedge_partition() {
        let g = k3().to_multigraph();
        let me = g.multiedges();
        assert_eq!(me.len(), 3);
        assert!(me.iter().all(|e| !e.isolated && e.labels.len() == 1));

        // K3 with edge 1 excised: {1} alone, {2,3} parallel
        let h = Multigraph::new(5, vec![(1, 2), (3, 5), (3, 5)]).unwrap();
        let me = h.multiedges();
        assert_eq!(me.iter().map(|e| e.labels.to_vec()).collect_vec(), vec![vec![1], vec![2, 3]]);
        assert!(me.iter().all(|e| e.isolated));
        assert_eq!(h.components().len(), 2);
    }

    #[test]
    fn json_formats() {
        let g = k3();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":3,"edges":[[1,2],[2,3],[1,3]]}"#);
        assert_eq!(serde_json::from_str::<SimpleGraph>(&s).unwrap(), g);
        assert!(serde_json::from_str::<SimpleGraph>(r#"{"n":2,"edges":[[1,2],[2,1]]}"#).is_err());

        let mg = g.to_multigraph();
        let s = serde_json::to_string(&mg).unwrap();
        assert_eq!(
            s,
            r#"{"n":3,"edges":[{"label":1,"u":1,"v":2},{"label":2,"u":2,"v":3},{"label":3,"u":1,"v":3}]}"#
        );
        assert_eq!(serde_json::from_str::<Multigraph>(&s).unwrap(), mg);
        assert!(serde_json::from_str::<Multigraph>(
            r#"{"n":2,"edges":[{"label":2,"u":1,"v":2}]}"#
        )
        .is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
        (2..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (1..=n).tuple_combinations().collect();
            let k = pairs.len();
            proptest::sample::subsequence(pairs, 0..=k)
                .prop_shuffle()
                .prop_map(move |es| SimpleGraph::new(n, es).unwrap())
        })
    }

    fn arb_sequence() -> impl Strategy<Value = HennebergSequence> {
        proptest::collection::vec((any::<bool>(), 0usize..1000, 0usize..1000, 0usize..1000), 0..8)
            .prop_map(|raw| {
                let mut g = SimpleGraph::single_edge();
                let mut moves = Vec::new();
                for (h1, a, b, c) in raw {
                    let n = g.vertex_count();
                    let mv = if h1 && n >= 3 {
                        let edge = 1 + a % g.edge_count();
                        let (i, j) = g.edge(edge).unwrap();
                        let others: Vec<usize> = (1..=n).filter(|&v| v != i && v != j).collect();
                        HennebergMove::H1 { edge, k: others[b % others.len()] }
                    } else {
                        let i = 1 + a % n;
                        let j = 1 + (i + b % (n - 1)) % n;
                        let _ = c;
                        HennebergMove::H0 { i, j }
                    };
                    g = match mv {
                        HennebergMove::H0 { i, j } => g.henneberg0(i, j).unwrap(),
                        HennebergMove::H1 { edge, k } => g.henneberg1(edge, k).unwrap(),
                    };
                    moves.push(mv);
                }
                HennebergSequence(moves)
            })
    }

    proptest! {
        #[test]
        fn pebble_game_matches_subsets(g in arb_graph(6)) {
            prop_assert_eq!(g.is_laman(), laman_by_subsets(&g));
        }

        #[test]
        fn henneberg_output_is_laman(seq in arb_sequence()) {
            let g = from_henneberg_sequence(&seq).unwrap();
            prop_assert!(g.is_laman());
            if g.vertex_count() <= 8 {
                prop_assert!(laman_by_subsets(&g));
            }
        }

        #[test]
        fn multiedges_partition_ground_set(g in arb_graph(6)) {
            let mg = g.to_multigraph();
            let mut acc = LabelSet::EMPTY;
            for me in mg.multiedges() {
                prop_assert!(!me.labels.is_empty());
                prop_assert!(acc.is_disjoint(me.labels));
                acc |= me.labels;
            }
            prop_assert_eq!(acc, mg.ground_set());
        }
    }
}
