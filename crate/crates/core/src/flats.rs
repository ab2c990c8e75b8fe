//! Flats, ranks and chains of flats of the graphic matroid of a multigraph.

use std::collections::{BTreeSet, HashMap};

use serde::{Serialize, Serializer};

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::labels::LabelSet;
use crate::multigraph::Multigraph;

/// A flat together with its rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    rank: usize,
    labels: LabelSet,
}

impl Flat {
    /// Checks that `labels` is a flat of `g`.
    pub fn new(g: &Multigraph, labels: LabelSet) -> Result<Flat> {
        let c = closure(g, labels);
        if c.labels != labels {
            return Err(Error::Precondition(format!("{labels} is not a flat")));
        }
        Ok(c)
    }

    pub fn labels(&self) -> LabelSet {
        self.labels
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl Serialize for Flat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels.serialize(s)
    }
}

/// Vertex partition induced by `s`, with the number of merges performed.
fn span(g: &Multigraph, s: LabelSet) -> (Dsu, usize) {
    let mut dsu = Dsu::new(g.vertex_count() + 1);
    let mut merges = 0;
    for l in s.iter() {
        let (u, v) = g.ends(l);
        merges += usize::from(dsu.union(u, v));
    }
    (dsu, merges)
}

/// Rank as touched vertices minus components.
pub fn rank(g: &Multigraph, s: LabelSet) -> usize {
    span(g, s).1
}

/// Smallest flat containing `s`.
pub fn closure(g: &Multigraph, s: LabelSet) -> Flat {
    let (mut dsu, rank) = span(g, s);
    let mut labels = s;
    for (i, &(u, v)) in g.all_ends().iter().enumerate() {
        if dsu.find(u) == dsu.find(v) {
            labels.insert(i + 1);
        }
    }
    Flat { rank, labels }
}

pub fn is_flat(g: &Multigraph, s: LabelSet) -> bool {
    closure(g, s).labels == s
}

/// Proper flats of one connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentFlats {
    pub component: Flat,
    /// Sorted by `(rank, bitset)`; starts with the empty flat.
    pub flats: Vec<Flat>,
}

/// Flats covering `f` inside `component`.
fn covers(g: &Multigraph, f: LabelSet, component: LabelSet) -> BTreeSet<Flat> {
    let mut out = BTreeSet::new();
    let mut rest = component - f;
    while let Some(l) = rest.min_label() {
        let c = closure(g, f | LabelSet::singleton(l));
        rest = rest - c.labels;
        out.insert(c);
    }
    out
}

/// Component flats for every component of `g`.
pub fn component_flats(g: &Multigraph) -> Vec<Flat> {
    g.components()
        .into_iter()
        .map(|c| Flat {
            rank: rank(g, c),
            labels: c,
        })
        .collect()
}

/// All proper flats of each component (the empty flat included).
pub fn proper_flats(g: &Multigraph) -> Vec<ComponentFlats> {
    component_flats(g)
        .into_iter()
        .map(|component| {
            let mut all = BTreeSet::new();
            let mut level = vec![Flat {
                rank: 0,
                labels: LabelSet::EMPTY,
            }];
            while !level.is_empty() {
                let mut next = BTreeSet::new();
                for f in &level {
                    all.insert(*f);
                    for c in covers(g, f.labels, component.labels) {
                        if c.labels != component.labels {
                            next.insert(c);
                        }
                    }
                }
                level = next.into_iter().collect();
            }
            ComponentFlats {
                component,
                flats: all.into_iter().collect(),
            }
        })
        .collect()
}

/// Strictly nested nonempty proper flats of one component. The empty flat and
/// the full component are implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComponentChain {
    component: Flat,
    flats: Vec<Flat>,
}

impl ComponentChain {
    pub fn new(g: &Multigraph, component: Flat, flats: &[LabelSet]) -> Result<Self> {
        let mut out: Vec<Flat> = Vec::with_capacity(flats.len());
        for &s in flats.iter().filter(|s| !s.is_empty()) {
            let f = Flat::new(g, s)?;
            if !s.is_subset(component.labels) || s == component.labels {
                return Err(Error::Precondition(format!(
                    "{s} is not a proper flat of component {}",
                    component.labels
                )));
            }
            if let Some(prev) = out.last() {
                if !(prev.labels.is_subset(s) && prev.labels != s) {
                    return Err(Error::Precondition(format!(
                        "flats {} and {s} are not strictly nested",
                        prev.labels
                    )));
                }
            }
            out.push(f);
        }
        Ok(ComponentChain {
            component,
            flats: out,
        })
    }

    pub fn component(&self) -> Flat {
        self.component
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Ranks are exactly `1, 2, ..., rank(component) - 1`.
    pub fn is_maximal(&self) -> bool {
        self.flats.len() + 1 == self.component.rank.max(1)
            && self.flats.iter().enumerate().all(|(i, f)| f.rank == i + 1)
    }

    /// Successive differences `F_1, F_2 - F_1, ..., E - F_r`.
    pub fn blocks(&self) -> Vec<LabelSet> {
        let mut prev = LabelSet::EMPTY;
        let mut out = Vec::with_capacity(self.flats.len() + 1);
        for f in self.flats.iter().map(|f| f.labels).chain([self.component.labels]) {
            out.push(f - prev);
            prev = f;
        }
        out
    }
}

/// One component chain per connected component of the host, in the order of
/// [`Multigraph::components`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainOfFlats {
    parts: Vec<ComponentChain>,
}

impl ChainOfFlats {
    pub fn empty(g: &Multigraph) -> Self {
        ChainOfFlats {
            parts: component_flats(g)
                .into_iter()
                .map(|component| ComponentChain {
                    component,
                    flats: Vec::new(),
                })
                .collect(),
        }
    }

    pub(crate) fn from_parts(parts: Vec<ComponentChain>) -> Self {
        ChainOfFlats { parts }
    }

    /// Per-component flat lists, one entry per component of `g`.
    pub fn new(g: &Multigraph, per_component: &[Vec<LabelSet>]) -> Result<Self> {
        let comps = component_flats(g);
        if comps.len() != per_component.len() {
            return Err(Error::Precondition(format!(
                "host has {} components, chain lists {}",
                comps.len(),
                per_component.len()
            )));
        }
        let parts = comps
            .into_iter()
            .zip(per_component)
            .map(|(c, fl)| ComponentChain::new(g, c, fl))
            .collect::<Result<_>>()?;
        Ok(ChainOfFlats { parts })
    }

    /// Assigns each flat to the component containing it.
    pub fn from_flats(g: &Multigraph, flats: &[LabelSet]) -> Result<Self> {
        let comps = g.components();
        let mut per: Vec<Vec<LabelSet>> = vec![Vec::new(); comps.len()];
        for &f in flats.iter().filter(|f| !f.is_empty()) {
            let i = comps
                .iter()
                .position(|c| f.is_subset(*c))
                .ok_or_else(|| Error::Precondition(format!("{f} meets several components")))?;
            per[i].push(f);
        }
        for p in &mut per {
            p.sort_by_key(|f| f.len());
        }
        ChainOfFlats::new(g, &per)
    }

    pub fn parts(&self) -> &[ComponentChain] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.iter().map(|p| p.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_maximal(&self) -> bool {
        self.parts.iter().all(|p| p.is_maximal())
    }

    /// All flats of all components.
    pub fn flats(&self) -> impl Iterator<Item = Flat> + '_ {
        self.parts.iter().flat_map(|p| p.flats.iter().copied())
    }

    pub fn to_label_lists(&self) -> Vec<Vec<LabelSet>> {
        self.parts
            .iter()
            .map(|p| p.flats.iter().map(|f| f.labels).collect())
            .collect()
    }
}

impl Serialize for ChainOfFlats {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_label_lists().serialize(s)
    }
}

/// All maximal chains of one component, in DFS order over covers.
pub fn component_maximal_chains(g: &Multigraph, component: Flat) -> Vec<ComponentChain> {
    let mut memo: HashMap<LabelSet, Vec<Vec<Flat>>> = HashMap::new();
    fn walk(
        g: &Multigraph,
        f: LabelSet,
        component: Flat,
        memo: &mut HashMap<LabelSet, Vec<Vec<Flat>>>,
    ) -> Vec<Vec<Flat>> {
        if let Some(v) = memo.get(&f) {
            return v.clone();
        }
        let mut out = Vec::new();
        for c in covers(g, f, component.labels) {
            if c.labels == component.labels {
                out.push(Vec::new());
                continue;
            }
            for tail in walk(g, c.labels, component, memo) {
                let mut v = Vec::with_capacity(tail.len() + 1);
                v.push(c);
                v.extend(tail);
                out.push(v);
            }
        }
        if out.is_empty() {
            out.push(Vec::new());
        }
        memo.insert(f, out.clone());
        out
    }
    walk(g, LabelSet::EMPTY, component, &mut memo)
        .into_iter()
        .map(|flats| ComponentChain { component, flats })
        .collect()
}

/// Streaming cartesian product of per-component maximal chains. Cloning the
/// iterator restarts nothing; call [`maximal_chains`] again to restart.
#[derive(Clone, Debug)]
pub struct MaximalChains {
    per_component: Vec<Vec<ComponentChain>>,
    digits: Vec<usize>,
    done: bool,
}

impl MaximalChains {
    pub fn per_component(&self) -> &[Vec<ComponentChain>] {
        &self.per_component
    }

    /// Total number of maximal chains.
    pub fn total(&self) -> usize {
        self.per_component.iter().map(Vec::len).product()
    }
}

impl Iterator for MaximalChains {
    type Item = ChainOfFlats;

    fn next(&mut self) -> Option<ChainOfFlats> {
        if self.done {
            return None;
        }
        let item = ChainOfFlats {
            parts: self
                .digits
                .iter()
                .zip(&self.per_component)
                .map(|(&d, opts)| opts[d].clone())
                .collect(),
        };
        // advance, last component fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.per_component[i].len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(item)
    }
}

pub fn maximal_chains(g: &Multigraph) -> MaximalChains {
    let per_component: Vec<Vec<ComponentChain>> = component_flats(g)
        .into_iter()
        .map(|c| component_maximal_chains(g, c))
        .collect();
    let digits = vec![0; per_component.len()];
    MaximalChains {
        done: per_component.iter().any(Vec::is_empty),
        per_component,
        digits,
    }
}

/// Successive differences of a maximal component chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ReducedChain {
    blocks: Vec<LabelSet>,
}

impl ReducedChain {
    pub fn blocks(&self) -> &[LabelSet] {
        &self.blocks
    }

    /// Prefix unions; the last one is the whole component.
    pub fn prefix_unions(&self) -> Vec<LabelSet> {
        self.blocks
            .iter()
            .scan(LabelSet::EMPTY, |acc, b| {
                *acc |= *b;
                Some(*acc)
            })
            .collect()
    }
}

pub fn reduce(c: &ComponentChain) -> Result<ReducedChain> {
    if !c.is_maximal() {
        return Err(Error::Precondition(format!(
            "chain on component {} is not maximal",
            c.component.labels
        )));
    }
    Ok(ReducedChain { blocks: c.blocks() })
}
