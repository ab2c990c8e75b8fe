//! The galaxy of iterated excisions of a Laman graph and galactic pairing
//! tables over it.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::arboreal::partitions_form_tree;
use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::excision::{
    canonical_form, classify, excise, legal_excisions, triangle_multiedges, CanonicalForm,
    Classification, ExcisionHistory,
};
use crate::intersect::lp::{q, LinearProgram, Q};
#[cfg(test)]
use crate::intersect::lp::LpOutcome;
use crate::intersect::{stable_pairing_sets, stable_pairing_with, ConeSet, PairingConfig};
use crate::labels::LabelSet;
use crate::multigraph::{Multigraph, SimpleGraph};

#[derive(Clone, Debug)]
pub struct GalaxyNode {
    pub key: CanonicalForm,
    /// Lexicographically smallest history reaching this node.
    pub history: ExcisionHistory,
    pub depth: usize,
    pub class: Classification,
}

impl GalaxyNode {
    pub fn graph(&self) -> &Multigraph {
        self.history.result()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GalaxyEdge {
    pub parent: usize,
    pub child: usize,
    pub multiedge: LabelSet,
}

/// Nodes are stored in breadth-first order; node 0 is the root.
#[derive(Debug)]
pub struct Galaxy {
    root: SimpleGraph,
    nodes: Vec<GalaxyNode>,
    edges: Vec<GalaxyEdge>,
    index: HashMap<CanonicalForm, usize>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    cones: Vec<OnceLock<ConeSet>>,
}

pub fn build_galaxy(g: &SimpleGraph, max_depth: Option<usize>) -> Result<Galaxy> {
    if !g.is_laman() {
        return Err(Error::NotLaman);
    }
    let root = ExcisionHistory::of_simple(g);
    let key = canonical_form(root.result());
    let mut nodes = vec![GalaxyNode {
        class: classify(root.result()),
        key: key.clone(),
        history: root,
        depth: 0,
    }];
    let mut index = HashMap::from([(key, 0)]);
    let mut edges = Vec::new();
    let mut level = 0..1;
    let mut depth = 0;
    while !level.is_empty() && max_depth.is_none_or(|d| depth < d) {
        let found: Vec<Vec<(LabelSet, CanonicalForm, ExcisionHistory)>> = nodes[level.clone()]
            .par_iter()
            .map(|node| {
                legal_excisions(node.graph())
                    .into_iter()
                    .map(|e| {
                        let mut h = node.history.clone();
                        h.push(e).expect("legal excision");
                        (e, canonical_form(h.result()), h)
                    })
                    .collect()
            })
            .collect();
        let start = nodes.len();
        depth += 1;
        for (parent, kids) in level.zip(found) {
            for (e, key, history) in kids {
                let child = *index.entry(key.clone()).or_insert_with(|| {
                    nodes.push(GalaxyNode {
                        class: classify(history.result()),
                        key,
                        history,
                        depth,
                    });
                    nodes.len() - 1
                });
                edges.push(GalaxyEdge {
                    parent,
                    child,
                    multiedge: e,
                });
            }
        }
        level = start..nodes.len();
    }
    let mut children = vec![Vec::new(); nodes.len()];
    let mut parents = vec![Vec::new(); nodes.len()];
    for (i, e) in edges.iter().enumerate() {
        children[e.parent].push(i);
        parents[e.child].push(i);
    }
    Ok(Galaxy {
        root: g.clone(),
        cones: (0..nodes.len()).map(|_| OnceLock::new()).collect(),
        nodes,
        edges,
        index,
        children,
        parents,
    })
}

impl Galaxy {
    pub fn root(&self) -> &SimpleGraph {
        &self.root
    }

    pub fn root_key(&self) -> &CanonicalForm {
        &self.nodes[0].key
    }

    pub fn nodes(&self) -> &[GalaxyNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[GalaxyEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn id(&self, key: &CanonicalForm) -> Result<usize> {
        self.index
            .get(key)
            .copied()
            .ok_or_else(|| Error::NotFound(format!("no galaxy node {key}")))
    }

    pub fn node(&self, key: &CanonicalForm) -> Result<&GalaxyNode> {
        Ok(&self.nodes[self.id(key)?])
    }

    /// Child node ids, one per outgoing edge.
    pub fn children(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.children[id].iter().map(|&e| self.edges[e].child)
    }

    pub fn parents(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.parents[id].iter().map(|&e| self.edges[e].parent)
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.nodes[i].class == Classification::FullyExcised)
    }

    pub fn cone_set(&self, id: usize) -> &ConeSet {
        self.cones[id].get_or_init(|| ConeSet::new(self.nodes[id].graph()))
    }

    /// Directed distances from `id` to every node.
    pub fn distances_from(&self, id: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[id] = Some(0);
        let mut queue = VecDeque::from([id]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for c in self.children(v) {
                if dist[c].is_none() {
                    dist[c] = Some(d + 1);
                    queue.push_back(c);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: &CanonicalForm, b: &CanonicalForm) -> Result<Option<usize>> {
        let (a, b) = (self.id(a)?, self.id(b)?);
        Ok(self.distances_from(a)[b])
    }

    /// Nodes reachable from any of `from`, including `from` itself.
    pub fn descendants(&self, from: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = from.to_vec();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend(self.children(v));
            }
        }
        seen
    }

    pub fn ancestors(&self, id: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![id];
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend(self.parents(v));
            }
        }
        seen
    }

    /// Whether two nodes descend from one common non-root node.
    pub fn share_branch(&self, a: usize, b: usize) -> bool {
        let anc: Vec<usize> = self
            .ancestors(a)
            .into_iter()
            .enumerate()
            .filter(|&(i, x)| x && i != 0)
            .map(|(i, _)| i)
            .collect();
        self.descendants(&anc)[b]
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph galaxy {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            out += &format!("  n{i} [label=\"{}\"];\n", n.key.partition_label());
        }
        for e in &self.edges {
            let wide = self.root.edge_count() >= 10;
            out += &format!(
                "  n{} -> n{} [label=\"{}\"];\n",
                e.parent,
                e.child,
                e.multiedge.compact(wide)
            );
        }
        out += "}\n";
        out
    }
}

#[derive(Serialize)]
struct NodeJson<'a> {
    key: &'a CanonicalForm,
    partition: String,
    depth: usize,
    class: Classification,
    history: &'a ExcisionHistory,
}

#[derive(Serialize)]
struct EdgeJson<'a> {
    parent: &'a CanonicalForm,
    child: &'a CanonicalForm,
    multiedge: LabelSet,
}

impl Serialize for Galaxy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let nodes: Vec<NodeJson<'_>> = self
            .nodes
            .iter()
            .map(|n| NodeJson {
                key: &n.key,
                partition: n.key.partition_label(),
                depth: n.depth,
                class: n.class,
                history: &n.history,
            })
            .collect();
        let edges: Vec<EdgeJson<'_>> = self
            .edges
            .iter()
            .map(|e| EdgeJson {
                parent: &self.nodes[e.parent].key,
                child: &self.nodes[e.child].key,
                multiedge: e.multiedge,
            })
            .collect();
        let mut st = s.serialize_struct("Galaxy", 3)?;
        st.serialize_field("root", &self.root)?;
        st.serialize_field("nodes", &nodes)?;
        st.serialize_field("edges", &edges)?;
        st.end()
    }
}

/// Simplification is a forest, so the fan is the span of multiedge
/// indicators and is unchanged by further excisions.
pub fn is_multiedge_forest(g: &Multigraph) -> bool {
    let mut dsu = Dsu::new(g.vertex_count() + 1);
    g.multiedges().iter().all(|me| dsu.union(me.ends.0, me.ends.1))
}

/// Deterministic per-entry seed.
pub fn entry_seed(seed: u64, key: &CanonicalForm) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(key.to_string().as_bytes());
    u64::from_le_bytes(h.finalize()[..8].try_into().unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    General,
    LeafArboreal,
    ChainLemma,
    TriangleLemma,
    BranchTrivial,
    Inapplicable,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::General => "general",
            Method::LeafArboreal => "leaf-arboreal",
            Method::ChainLemma => "chain-lemma",
            Method::TriangleLemma => "triangle-lemma",
            Method::BranchTrivial => "branch-trivial",
            Method::Inapplicable => "inapplicable",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Method::General,
            Method::LeafArboreal,
            Method::ChainLemma,
            Method::TriangleLemma,
            Method::BranchTrivial,
            Method::Inapplicable,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub key: CanonicalForm,
    /// `None` when the engine rejected the pair.
    pub value: Option<u64>,
    pub method: Method,
}

/// Pairings of one base node against every galaxy node, in node order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingTable {
    pub base: CanonicalForm,
    pub entries: Vec<TableEntry>,
}

impl PairingTable {
    pub fn get(&self, key: &CanonicalForm) -> Option<&TableEntry> {
        self.entries.iter().find(|e| &e.key == key)
    }

    pub fn value(&self, key: &CanonicalForm) -> Option<u64> {
        self.get(key).and_then(|e| e.value)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("node_key,value,method\n");
        for e in &self.entries {
            let v = e.value.map(|v| v.to_string()).unwrap_or_default();
            out += &format!("{},{v},{}\n", e.key, e.method);
        }
        out
    }

    pub fn from_csv(base: CanonicalForm, s: &str) -> Result<Self> {
        let mut lines = s.lines();
        if lines.next() != Some("node_key,value,method") {
            return Err(Error::Parse("missing table header".into()));
        }
        let entries = lines
            .filter(|l| !l.is_empty())
            .map(|l| {
                let Some((key, value, method)) = l.split(',').collect_tuple() else {
                    return Err(Error::Parse(format!("bad table row {l:?}")));
                };
                Ok(TableEntry {
                    key: key.parse()?,
                    value: if value.is_empty() {
                        None
                    } else {
                        Some(value.parse().map_err(|e| Error::Parse(format!("{value:?}: {e}")))?)
                    },
                    method: method.parse()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(PairingTable { base, entries })
    }
}

enum Plan {
    Zero,
    Arboreal,
    Copy(usize),
    Triangle,
    Engine,
}

fn engine_entry(gal: &Galaxy, base: usize, t: usize, cfg: &PairingConfig) -> (Option<u64>, Method) {
    let cfg = PairingConfig {
        seed: entry_seed(cfg.seed, &gal.nodes[t].key),
        ..cfg.clone()
    };
    match stable_pairing_sets(
        gal.nodes[base].graph(),
        gal.cone_set(base),
        gal.nodes[t].graph(),
        gal.cone_set(t),
        &cfg,
    ) {
        Ok(r) => (Some(r.value), Method::General),
        Err(_) => (None, Method::Inapplicable),
    }
}

pub fn pairing_table(
    gal: &Galaxy,
    base: &CanonicalForm,
    use_shortcuts: bool,
    cfg: &PairingConfig,
) -> Result<PairingTable> {
    let b = gal.id(base)?;
    let n = gal.len();
    let mut plan: Vec<Plan> = (0..n).map(|_| Plan::Engine).collect();
    if use_shortcuts {
        let branch: Vec<usize> = gal
            .ancestors(b)
            .into_iter()
            .enumerate()
            .filter(|&(i, x)| x && i != 0)
            .map(|(i, _)| i)
            .collect();
        let trivial = gal.descendants(&branch);
        let forest: Vec<bool> = gal.nodes.iter().map(|n| is_multiedge_forest(n.graph())).collect();
        let base_leaf = gal.nodes[b].class == Classification::FullyExcised;
        let mut source: Vec<usize> = (0..n).collect();
        for t in 0..n {
            plan[t] = if trivial[t] {
                Plan::Zero
            } else if base_leaf && gal.nodes[t].class == Classification::FullyExcised {
                Plan::Arboreal
            } else if let Some(p) = gal.parents(t).find(|&p| forest[t] && forest[p]) {
                source[t] = source[p];
                Plan::Copy(source[t])
            } else if gal.nodes[t].class == Classification::ExcisedTriangle {
                Plan::Triangle
            } else {
                Plan::Engine
            };
        }
    }
    let base_parts: Vec<LabelSet> = gal.nodes[b].key.multiedges();
    let mut out: Vec<Option<(Option<u64>, Method)>> = (0..n)
        .into_par_iter()
        .map(|t| match plan[t] {
            Plan::Zero => Some((Some(0), Method::BranchTrivial)),
            Plan::Arboreal => {
                let tree = partitions_form_tree(&base_parts, &gal.nodes[t].key.multiedges());
                Some((Some(tree as u64), Method::LeafArboreal))
            }
            Plan::Engine => Some(engine_entry(gal, b, t, cfg)),
            Plan::Copy(_) | Plan::Triangle => None,
        })
        .collect();
    for t in 0..n {
        if let Plan::Copy(s) = plan[t] {
            let v = out[s].expect("copy sources precede their copies").0;
            out[t] = Some(match v {
                Some(v) => (Some(v), Method::ChainLemma),
                None => (None, Method::Inapplicable),
            });
        }
    }
    let triangles: Vec<usize> = (0..n).filter(|&t| matches!(plan[t], Plan::Triangle)).collect();
    let resolved: Vec<(usize, (Option<u64>, Method))> = triangles
        .into_par_iter()
        .map(|t| {
            let kids: Option<Vec<u64>> = gal
                .children(t)
                .map(|c| out[c].expect("children of excised triangles are leaves").0)
                .collect();
            let res = match kids {
                Some(kids) if kids.iter().filter(|&&v| v != 0).count() <= 1 => (
                    Some(kids.into_iter().find(|&v| v != 0).unwrap_or(0)),
                    Method::TriangleLemma,
                ),
                _ => engine_entry(gal, b, t, cfg),
            };
            (t, res)
        })
        .collect();
    for (t, r) in resolved {
        out[t] = Some(r);
    }
    Ok(PairingTable {
        base: base.clone(),
        entries: gal
            .nodes
            .iter()
            .zip(out)
            .map(|(node, r)| {
                let (value, method) = r.expect("every entry resolved");
                TableEntry {
                    key: node.key.clone(),
                    value,
                    method,
                }
            })
            .collect(),
    })
}

fn engine_value(gal: &Galaxy, a: usize, b: usize, cfg: &PairingConfig) -> Result<u64> {
    let cfg = PairingConfig {
        seed: entry_seed(cfg.seed, &gal.nodes[b].key),
        ..cfg.clone()
    };
    stable_pairing_sets(
        gal.nodes[a].graph(),
        gal.cone_set(a),
        gal.nodes[b].graph(),
        gal.cone_set(b),
        &cfg,
    )
    .map(|r| r.value)
}

/// Galactic pairing of two galaxy nodes through the engine.
pub fn galactic_pairing(
    gal: &Galaxy,
    a: &CanonicalForm,
    b: &CanonicalForm,
    cfg: &PairingConfig,
) -> Result<u64> {
    engine_value(gal, gal.id(a)?, gal.id(b)?, cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubadditivityTerm {
    pub key: CanonicalForm,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubadditivityReport {
    pub base: CanonicalForm,
    pub target: CanonicalForm,
    pub distance: usize,
    pub value: u64,
    pub terms: Vec<SubadditivityTerm>,
    pub sum: u64,
    pub holds: bool,
}

pub fn check_subadditivity(
    gal: &Galaxy,
    base: &CanonicalForm,
    target: &CanonicalForm,
    ell: usize,
    cfg: &PairingConfig,
) -> Result<SubadditivityReport> {
    if ell == 0 {
        return Err(Error::Precondition("distance must be positive".into()));
    }
    let (b, t) = (gal.id(base)?, gal.id(target)?);
    let far: Vec<usize> = gal
        .distances_from(t)
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d == Some(ell))
        .map(|(i, _)| i)
        .collect();
    if far.is_empty() {
        return Err(Error::Precondition(format!(
            "no node at distance {ell} from {target}"
        )));
    }
    let value = engine_value(gal, b, t, cfg)?;
    let terms = far
        .par_iter()
        .map(|&h| {
            Ok(SubadditivityTerm {
                key: gal.nodes[h].key.clone(),
                value: engine_value(gal, b, h, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = terms.iter().map(|t| t.value).sum();
    Ok(SubadditivityReport {
        base: base.clone(),
        target: target.clone(),
        distance: ell,
        value,
        terms,
        sum,
        holds: value <= sum,
    })
}

/// A triangle multiedge of each of two excised triangles.
pub type Selection = (LabelSet, LabelSet);

/// Sign relating the two shift differences in the additivity system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdditiveSign {
    /// `u1 − u1′ = u2 − u2′`
    Difference,
    /// `u1 + u1′ = u2 + u2′`
    Sum,
}

/// Additivity witness for two excised triangles: `p1` and `p2` each pick a
/// triangle multiedge of `h` and of `h2`. Uses [`AdditiveSign::Sum`], the
/// form matching a pairing against the negated second fan.
pub fn is_additive_pair(
    gal: &Galaxy,
    h: &CanonicalForm,
    h2: &CanonicalForm,
    p1: Selection,
    p2: Selection,
) -> Result<bool> {
    is_additive_pair_with(gal, h, h2, p1, p2, AdditiveSign::Sum)
}

pub fn is_additive_pair_with(
    gal: &Galaxy,
    h: &CanonicalForm,
    h2: &CanonicalForm,
    p1: Selection,
    p2: Selection,
    sign: AdditiveSign,
) -> Result<bool> {
    if p1 == p2 {
        return Err(Error::Precondition("the two selections must differ".into()));
    }
    let (g1, g2) = (gal.node(h)?.graph(), gal.node(h2)?.graph());
    let (Some(t1), Some(t2)) = (triangle_multiedges(g1), triangle_multiedges(g2)) else {
        return Err(Error::Precondition("both nodes must be excised triangles".into()));
    };
    for &(e, f) in &[p1, p2] {
        if !t1.contains(&e) || !t2.contains(&f) {
            return Err(Error::Precondition(format!(
                "{e} and {f} must be triangle multiedges"
            )));
        }
        let leaf = stable_pairing_with(&excise(g1, e)?, &excise(g2, f)?, &PairingConfig::default())?;
        if leaf.value != 1 {
            return Err(Error::Precondition(format!(
                "leaves of {e} and {f} pair to {}",
                leaf.value
            )));
        }
    }
    Ok(additive_feasible(g1, t1, g2, t2, p1, p2, sign))
}

/// Coordinates `a, a′, b, b′` on the multiedges of both nodes, with the
/// selecting inequalities required to hold with slack `t`.
fn additive_program(
    g1: &Multigraph,
    t1: [LabelSet; 3],
    g2: &Multigraph,
    t2: [LabelSet; 3],
    p1: Selection,
    p2: Selection,
    sign: AdditiveSign,
    slack: Option<Q>,
) -> LinearProgram {
    let m1: Vec<LabelSet> = g1.multiedges().into_iter().map(|me| me.labels).collect();
    let m2: Vec<LabelSet> = g2.multiedges().into_iter().map(|me| me.labels).collect();
    let (k1, k2) = (m1.len(), m2.len());
    let nv = 2 * (k1 + k2) + usize::from(slack.is_none());
    let mut lp = LinearProgram::new(nv);
    for j in 0..nv {
        lp.set_free(j);
    }
    let pos = |ms: &[LabelSet], l: usize| ms.iter().position(|e| e.contains(l)).unwrap();
    let s = match sign {
        AdditiveSign::Difference => 1,
        AdditiveSign::Sum => -1,
    };
    for l in 1..=g1.edge_count() {
        let (e, f) = (pos(&m1, l), pos(&m2, l));
        let mut row = vec![Q::zero(); nv];
        row[e] += q(1);
        row[k1 + k2 + e] -= q(1);
        row[k1 + f] -= q(s);
        row[2 * k1 + k2 + f] += q(s);
        lp.add_eq(row, Q::zero());
    }
    let mut select = |offset: usize, ms: &[LabelSet], tri: [LabelSet; 3], pick: LabelSet| {
        let p = ms.iter().position(|&e| e == pick).unwrap();
        let others: Vec<usize> = tri
            .iter()
            .filter(|&&e| e != pick)
            .map(|&e| ms.iter().position(|&x| x == e).unwrap())
            .collect();
        for &o in &others {
            let mut row = vec![Q::zero(); nv];
            row[offset + p] = q(1);
            row[offset + o] = q(-1);
            match &slack {
                Some(t) => lp.add_ge(row, t.clone()),
                None => {
                    row[nv - 1] = q(-1);
                    lp.add_ge(row, Q::zero());
                }
            }
        }
        let mut row = vec![Q::zero(); nv];
        row[offset + others[0]] = q(1);
        row[offset + others[1]] = q(-1);
        lp.add_eq(row, Q::zero());
    };
    select(0, &m1, t1, p1.0);
    select(k1, &m2, t2, p1.1);
    select(k1 + k2, &m1, t1, p2.0);
    select(2 * k1 + k2, &m2, t2, p2.1);
    lp
}

/// The system is homogeneous, so positive slack is possible iff slack one is.
fn additive_feasible(
    g1: &Multigraph,
    t1: [LabelSet; 3],
    g2: &Multigraph,
    t2: [LabelSet; 3],
    p1: Selection,
    p2: Selection,
    sign: AdditiveSign,
) -> bool {
    additive_program(g1, t1, g2, t2, p1, p2, sign, Some(Q::one())).feasible_fm()
}

/// Largest slack `t ≤ 1` by simplex.
#[cfg(test)]
fn additive_slack(
    g1: &Multigraph,
    t1: [LabelSet; 3],
    g2: &Multigraph,
    t2: [LabelSet; 3],
    p1: Selection,
    p2: Selection,
    sign: AdditiveSign,
) -> Q {
    let mut lp = additive_program(g1, t1, g2, t2, p1, p2, sign, None);
    let nv = lp.nvars();
    let mut cap = vec![Q::zero(); nv];
    cap[nv - 1] = q(1);
    lp.add_le(cap.clone(), Q::one());
    match lp.maximize(&cap) {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible => -Q::one(),
        LpOutcome::Unbounded => unreachable!("slack is capped"),
    }
}

/// All selection pairs `(p1, p2)` with `p1 < p2` whose leaves pair to one.
pub fn additive_candidates(
    gal: &Galaxy,
    h: &CanonicalForm,
    h2: &CanonicalForm,
) -> Result<Vec<(Selection, Selection)>> {
    let (g1, g2) = (gal.node(h)?.graph(), gal.node(h2)?.graph());
    let (Some(t1), Some(t2)) = (triangle_multiedges(g1), triangle_multiedges(g2)) else {
        return Err(Error::Precondition("both nodes must be excised triangles".into()));
    };
    let mut good = Vec::new();
    for (&e, &f) in t1.iter().cartesian_product(t2.iter()) {
        let l1: Vec<LabelSet> = canonical_form(&excise(g1, e)?).multiedges();
        let l2: Vec<LabelSet> = canonical_form(&excise(g2, f)?).multiedges();
        if partitions_form_tree(&l1, &l2) {
            good.push((e, f));
        }
    }
    Ok(good.into_iter().tuple_combinations().collect())
}
