//! Excisions of multiedges, histories of excisions and their chains of flats.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::flats::{self, ChainOfFlats};
use crate::labels::{lex_cmp, LabelSet};
use crate::multigraph::{Multigraph, SimpleGraph};

/// `g` with the multiedge `e` pulled apart: `e` keeps its two endpoints, which
/// lose every other edge to a fresh vertex `n+1`.
pub fn excise(g: &Multigraph, e: LabelSet) -> Result<Multigraph> {
    let me = g
        .multiedges()
        .into_iter()
        .find(|me| me.labels == e)
        .ok_or_else(|| Error::Excision(format!("{e} is not a multiedge")))?;
    if me.isolated {
        return Err(Error::Excision(format!("{e} is isolated")));
    }
    let (a, b) = me.ends;
    let w = g.vertex_count() + 1;
    let ends = g
        .all_ends()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| {
            if e.contains(i + 1) {
                (u, v)
            } else {
                let r = |x: usize| if x == a || x == b { w } else { x };
                let (u, v) = (r(u), r(v));
                (u.min(v), u.max(v))
            }
        })
        .collect();
    Ok(Multigraph::from_parts(w, ends))
}

/// Multiedges that may be excised.
pub fn legal_excisions(g: &Multigraph) -> Vec<LabelSet> {
    let mut v: Vec<LabelSet> = g
        .multiedges()
        .into_iter()
        .filter(|me| !me.isolated)
        .map(|me| me.labels)
        .collect();
    v.sort_by(|a, b| lex_cmp(*a, *b));
    v
}

/// Excisions on different components commute up to vertex names.
pub fn excisions_commute(g: &Multigraph, e1: LabelSet, e2: LabelSet) -> Result<bool> {
    let comps = g.components();
    let c1 = comps.iter().position(|c| e1.is_subset(*c));
    let c2 = comps.iter().position(|c| e2.is_subset(*c));
    if c1.is_none() || c2.is_none() || c1 == c2 {
        return Err(Error::Precondition(format!(
            "{e1} and {e2} must lie on two different components"
        )));
    }
    let a = excise(&excise(g, e1)?, e2)?;
    let b = excise(&excise(g, e2)?, e1)?;
    Ok(canonical_form(&a) == canonical_form(&b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExcisionStep {
    pub multiedge: LabelSet,
    /// Endpoints of the multiedge when it was excised.
    pub ends: (usize, usize),
}

/// A root together with a valid sequence of excisions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcisionHistory {
    root: Multigraph,
    steps: Vec<ExcisionStep>,
    result: Multigraph,
}

impl ExcisionHistory {
    pub fn new(root: Multigraph) -> Self {
        ExcisionHistory {
            result: root.clone(),
            root,
            steps: Vec::new(),
        }
    }

    pub fn of_simple(root: &SimpleGraph) -> Self {
        ExcisionHistory::new(root.to_multigraph())
    }

    pub fn apply(root: &Multigraph, multiedges: &[LabelSet]) -> Result<Self> {
        let mut h = ExcisionHistory::new(root.clone());
        for &e in multiedges {
            h.push(e)?;
        }
        Ok(h)
    }

    pub fn push(&mut self, e: LabelSet) -> Result<()> {
        let ends = self
            .result
            .multiedges()
            .into_iter()
            .find(|me| me.labels == e)
            .map(|me| me.ends)
            .unwrap_or((0, 0));
        self.result = excise(&self.result, e)?;
        self.steps.push(ExcisionStep { multiedge: e, ends });
        Ok(())
    }

    pub fn root(&self) -> &Multigraph {
        &self.root
    }

    pub fn steps(&self) -> &[ExcisionStep] {
        &self.steps
    }

    pub fn result(&self) -> &Multigraph {
        &self.result
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn labels(&self) -> Vec<LabelSet> {
        self.steps.iter().map(|s| s.multiedge).collect()
    }

    /// Lexicographic order on the sequences of sorted label lists.
    pub fn lex_cmp(&self, other: &ExcisionHistory) -> std::cmp::Ordering {
        history_lex_cmp(&self.labels(), &other.labels())
    }
}

pub(crate) fn history_lex_cmp(a: &[LabelSet], b: &[LabelSet]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| lex_cmp(*x, *y))
        .find(|o| o.is_ne())
        .unwrap_or(a.len().cmp(&b.len()))
}

impl Serialize for ExcisionHistory {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

/// The chain `e1 ⊊ e1∪e2 ⊊ ...`, split per component of the root.
pub fn history_to_chain(h: &ExcisionHistory) -> ChainOfFlats {
    let comps = h.root.components();
    let mut per: Vec<Vec<LabelSet>> = vec![Vec::new(); comps.len()];
    for step in &h.steps {
        let i = comps
            .iter()
            .position(|c| step.multiedge.is_subset(*c))
            .expect("an excised multiedge lies in one root component");
        let prev = per[i].last().copied().unwrap_or_default();
        per[i].push(prev | step.multiedge);
    }
    ChainOfFlats::new(&h.root, &per).expect("excision histories give chains of flats")
}

/// Inverse of [`history_to_chain`]; needs rank steps of one.
pub fn chain_to_history(g: &Multigraph, c: &ChainOfFlats) -> Result<ExcisionHistory> {
    let mut steps = Vec::with_capacity(c.len());
    for part in c.parts() {
        let mut prev = flats::Flat::new(g, LabelSet::EMPTY)?;
        for f in part.flats() {
            if f.rank() != prev.rank() + 1 {
                return Err(Error::RankGap {
                    lower: prev.labels(),
                    upper: f.labels(),
                });
            }
            steps.push(f.labels() - prev.labels());
            prev = *f;
        }
    }
    ExcisionHistory::apply(g, &steps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    FullyExcised,
    ExcisedTriangle,
    Other,
}

pub fn classify(g: &Multigraph) -> Classification {
    let mes = g.multiedges();
    if mes.iter().all(|me| me.isolated) {
        return Classification::FullyExcised;
    }
    let busy: Vec<LabelSet> = g
        .components()
        .into_iter()
        .filter(|c| !mes.iter().any(|me| me.labels == *c))
        .collect();
    match busy.as_slice() {
        [c] if g.vertices_of(*c).len() == 3
            && mes.iter().filter(|me| me.labels.is_subset(*c)).count() == 3 =>
        {
            Classification::ExcisedTriangle
        }
        _ => Classification::Other,
    }
}

/// Multiedges of the multitriangle of an excised triangle.
pub fn triangle_multiedges(g: &Multigraph) -> Option<[LabelSet; 3]> {
    if classify(g) != Classification::ExcisedTriangle {
        return None;
    }
    let v: Vec<LabelSet> = g
        .multiedges()
        .into_iter()
        .filter(|me| !me.isolated)
        .map(|me| me.labels)
        .collect();
    v.try_into().ok()
}

/// Shortest excision history ending in an excised triangle; ties go to the
/// lexicographically smallest history.
pub fn find_excised_triangle(g: &SimpleGraph) -> Result<ExcisionHistory> {
    if g.vertex_count() < 3 {
        return Err(Error::Precondition(
            "excised triangles need at least 3 vertices".into(),
        ));
    }
    if !g.is_laman() {
        return Err(Error::NotLaman);
    }
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut frontier = vec![ExcisionHistory::of_simple(g)];
    seen.insert(canonical_form(frontier[0].result()));
    while !frontier.is_empty() {
        if let Some(h) = frontier
            .iter()
            .find(|h| classify(h.result()) == Classification::ExcisedTriangle)
        {
            return Ok(h.clone());
        }
        let children: Vec<Vec<(CanonicalForm, ExcisionHistory)>> = frontier
            .par_iter()
            .map(|h| {
                legal_excisions(h.result())
                    .into_iter()
                    .map(|e| {
                        let mut c = h.clone();
                        c.push(e).expect("legal excision");
                        (canonical_form(c.result()), c)
                    })
                    .collect()
            })
            .collect();
        frontier = children
            .into_iter()
            .flatten()
            .filter_map(|(k, h)| seen.insert(k).then_some(h))
            .collect();
    }
    Err(Error::Internal(
        "no excised triangle reachable from a Laman graph".into(),
    ))
}

/// Vertex-name-free description of a multigraph: each touched vertex becomes
/// the sorted list of its incident multiedges, and the vertex list is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<Vec<LabelSet>>);

pub fn canonical_form(g: &Multigraph) -> CanonicalForm {
    let mut at: Vec<Vec<LabelSet>> = vec![Vec::new(); g.vertex_count() + 1];
    for me in g.multiedges() {
        at[me.ends.0].push(me.labels);
        at[me.ends.1].push(me.labels);
    }
    let mut verts: Vec<Vec<LabelSet>> = at
        .into_iter()
        .filter(|v| !v.is_empty())
        .map(|mut v| {
            v.sort();
            v
        })
        .collect();
    verts.sort();
    CanonicalForm(verts)
}

impl CanonicalForm {
    /// Multiedges ordered by smallest label.
    pub fn multiedges(&self) -> Vec<LabelSet> {
        self.0
            .iter()
            .flatten()
            .copied()
            .sorted_by_key(|e| e.min_label())
            .dedup()
            .collect()
    }

    /// Rebuilds a multigraph with vertices numbered in canonical order.
    pub fn to_multigraph(&self) -> Result<Multigraph> {
        let mes = self.multiedges();
        let m = mes.iter().map(|e| e.len()).sum();
        let mut ends = vec![Vec::new(); mes.len()];
        for (vi, v) in self.0.iter().enumerate() {
            for e in v {
                let k = mes.iter().position(|x| x == e).unwrap();
                ends[k].push(vi + 1);
            }
        }
        let mut out = vec![(0, 0); m];
        for (e, vs) in mes.iter().zip(&ends) {
            let &[a, b] = vs.as_slice() else {
                return Err(Error::Parse(format!("multiedge {e} does not have two endpoints")));
            };
            for l in e.iter() {
                if l > m {
                    return Err(Error::Parse(format!("label {l} beyond ground set {m}")));
                }
                out[l - 1] = (a, b);
            }
        }
        Multigraph::new(self.0.len(), out)
    }

    /// `1|23|45` style rendering of the multiedge partition.
    pub fn partition_label(&self) -> String {
        let mes = self.multiedges();
        let wide = mes.iter().any(|e| e.max_label().unwrap_or(0) >= 10);
        mes.iter().map(|e| e.compact(wide)).join("|")
    }
}

/// Vertices separated by `;`, multiedges at a vertex by `|`, labels by `.`.
impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .0
            .iter()
            .map(|v| v.iter().map(|e| e.iter().join(".")).join("|"))
            .join(";");
        f.write_str(&s)
    }
}

impl FromStr for CanonicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |tok: &str| -> Result<LabelSet> {
            LabelSet::try_from_labels(
                tok.split('.')
                    .map(|x| x.parse::<usize>().map_err(|e| Error::Parse(format!("{tok:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        let mut verts: Vec<Vec<LabelSet>> = s
            .split(';')
            .filter(|v| !v.is_empty())
            .map(|v| v.split('|').map(parse).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        for v in &mut verts {
            v.sort();
        }
        verts.sort();
        Ok(CanonicalForm(verts))
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
