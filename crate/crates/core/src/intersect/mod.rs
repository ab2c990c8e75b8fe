//! Stable intersection of Bergman fans of multigraphs.
//!
//! A maximal cone of `Trop(G)` is described by an ordered block partition of
//! the labels: per component, the successive differences of its maximal
//! chain. Its span is the space of vectors constant on blocks, and a vector
//! constant on blocks lies in the cone iff its block values do not increase
//! along each component's chain.
//!
//! For cones `σ1 ⊂ Trop(G1)`, `σ2 ⊂ Trop(G2)` the question whether
//! `σ1 ∩ (u − σ2)` is nonempty is the system `x_B + y_C = u_i` over labels
//! `i ∈ B ∩ C` with monotone `x` and `y`. Viewing blocks as vertices and
//! labels as edges, `dim(σ1 + σ2) = m` exactly when this bipartite graph is a
//! tree; the system then has a unique solution up to the common lineality and
//! can be solved with a potential union-find in near-linear time.

pub mod lp;
pub mod matrix;
pub mod snf;

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use lp::cones_meet;
pub use matrix::IntegerMatrix;
pub use snf::{lattice_index, saturate, smith_invariants};

use crate::dsu::{Merge, PotentialDsu};
use crate::error::{Error, Result};
use crate::fan::{cone_generators, BergmanCone};
use crate::flats::{self, ChainOfFlats, ComponentChain};
use crate::multigraph::{Multigraph, SimpleGraph};
use lp::{q, LinearProgram, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingConfig {
    pub seed: u64,
    /// Shift entries are drawn uniformly from `[-shift_bound, shift_bound]`.
    pub shift_bound: i64,
    pub max_retries: u32,
}

impl Default for PairingConfig {
    fn default() -> Self {
        PairingConfig {
            seed: 0,
            shift_bound: 1 << 16,
            max_retries: 32,
        }
    }
}

impl PairingConfig {
    pub fn with_seed(seed: u64) -> Self {
        PairingConfig {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub chain1: ChainOfFlats,
    pub chain2: ChainOfFlats,
    pub index: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingResult {
    pub value: u64,
    pub shift: Vec<i64>,
    pub witnesses: Vec<Witness>,
    pub retries: u32,
}

/// Ordered block partition of one maximal cone.
#[derive(Clone, Debug)]
struct Blocks {
    block_of: Vec<u8>,
    nblocks: usize,
    /// `(a, b)`: block `a` precedes block `b` in some component chain.
    order: Vec<(u8, u8)>,
}

/// All maximal cones of a fan in block form, in [`flats::maximal_chains`]
/// order.
#[derive(Clone, Debug)]
pub struct ConeSet {
    m: usize,
    rank: usize,
    per_component: Vec<Vec<ComponentChain>>,
    cones: Vec<Blocks>,
}

impl ConeSet {
    pub fn new(g: &Multigraph) -> Self {
        let m = g.edge_count();
        let chains = flats::maximal_chains(g);
        let per_component = chains.per_component().to_vec();
        let blocks_per: Vec<Vec<Vec<crate::LabelSet>>> = per_component
            .iter()
            .map(|opts| opts.iter().map(ComponentChain::blocks).collect())
            .collect();
        let total = chains.total();
        let mut cones = Vec::with_capacity(total);
        let mut digits = vec![0usize; per_component.len()];
        for _ in 0..total {
            let mut block_of = vec![0u8; m];
            let mut order = Vec::new();
            let mut next = 0usize;
            for (c, &d) in digits.iter().enumerate() {
                let bl = &blocks_per[c][d];
                for (k, b) in bl.iter().enumerate() {
                    for l in b.iter() {
                        block_of[l - 1] = (next + k) as u8;
                    }
                    if k + 1 < bl.len() {
                        order.push(((next + k) as u8, (next + k + 1) as u8));
                    }
                }
                next += bl.len();
            }
            cones.push(Blocks {
                block_of,
                nblocks: next,
                order,
            });
            for i in (0..digits.len()).rev() {
                digits[i] += 1;
                if digits[i] < per_component[i].len() {
                    break;
                }
                digits[i] = 0;
            }
        }
        ConeSet {
            m,
            rank: flats::rank(g, g.ground_set()),
            per_component,
            cones,
        }
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Dimension of the fan.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn chain(&self, mut idx: usize) -> ChainOfFlats {
        let mut parts = vec![None; self.per_component.len()];
        for i in (0..self.per_component.len()).rev() {
            let k = self.per_component[i].len();
            parts[i] = Some(self.per_component[i][idx % k].clone());
            idx /= k;
        }
        ChainOfFlats::from_parts(parts.into_iter().map(Option::unwrap).collect())
    }
}

enum PairTest {
    Miss,
    Meet,
    /// The shift sits on a boundary: not generic.
    Degenerate,
    /// Not transversal, but the shift lies in the span of the pair.
    InSpan,
}

#[derive(Default)]
struct Scratch {
    dsu: PotentialDsu,
    z: Vec<i64>,
}

fn test_pair(a: &Blocks, b: &Blocks, u: &[i64], s: &mut Scratch) -> PairTest {
    let na = a.nblocks;
    s.dsu.reset(na + b.nblocks);
    let mut cycle = false;
    for (i, &ui) in u.iter().enumerate() {
        // z_B - z_C = u_i with x_B = z_B and y_C = -z_C
        match s.dsu.relate(a.block_of[i] as usize, na + b.block_of[i] as usize, ui) {
            Merge::Joined => {}
            Merge::Consistent => cycle = true,
            Merge::Conflict => return PairTest::Miss,
        }
    }
    if cycle || na + b.nblocks != u.len() + 1 {
        return PairTest::InSpan;
    }
    s.z.clear();
    for v in 0..na + b.nblocks {
        let z = s.dsu.find(v).1;
        s.z.push(z);
    }
    let mut tight = false;
    for &(p, n) in &a.order {
        let d = s.z[p as usize] - s.z[n as usize];
        if d < 0 {
            return PairTest::Miss;
        }
        tight |= d == 0;
    }
    for &(p, n) in &b.order {
        // y_p - y_n = z_n - z_p
        let d = s.z[na + n as usize] - s.z[na + p as usize];
        if d < 0 {
            return PairTest::Miss;
        }
        tight |= d == 0;
    }
    if tight {
        PairTest::Degenerate
    } else {
        PairTest::Meet
    }
}

/// Exact check whether `u ∈ σ1 − σ2` for a non-transversal pair.
fn meets_in_span(a: &Blocks, b: &Blocks, u: &[i64]) -> bool {
    let na = a.nblocks;
    let n = na + b.nblocks;
    let mut lp = LinearProgram::new(n);
    for j in 0..n {
        lp.set_free(j);
    }
    for (i, &ui) in u.iter().enumerate() {
        let mut row = vec![Q::zero(); n];
        row[a.block_of[i] as usize] = q(1);
        row[na + b.block_of[i] as usize] = q(1);
        lp.add_eq(row, q(ui));
    }
    for &(p, nx) in &a.order {
        let mut row = vec![Q::zero(); n];
        row[p as usize] = q(1);
        row[nx as usize] = q(-1);
        lp.add_ge(row, Q::zero());
    }
    for &(p, nx) in &b.order {
        let mut row = vec![Q::zero(); n];
        row[na + p as usize] = q(1);
        row[na + nx as usize] = q(-1);
        lp.add_ge(row, Q::zero());
    }
    lp.feasible_fm()
}

/// Meeting cone pairs for the shift `u`, or `None` if `u` is not generic.
fn meeting_pairs(a: &ConeSet, b: &ConeSet, u: &[i64]) -> Option<Vec<(usize, usize)>> {
    let bad = AtomicBool::new(false);
    let per: Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>)> = a
        .cones
        .par_iter()
        .enumerate()
        .map_init(Scratch::default, |s, (i, ca)| {
            let mut meets = Vec::new();
            let mut spans = Vec::new();
            if bad.load(Ordering::Relaxed) {
                return (meets, spans);
            }
            for (j, cb) in b.cones.iter().enumerate() {
                match test_pair(ca, cb, u, s) {
                    PairTest::Miss => {}
                    PairTest::Meet => meets.push((i, j)),
                    PairTest::InSpan => spans.push((i, j)),
                    PairTest::Degenerate => {
                        bad.store(true, Ordering::Relaxed);
                        break;
                    }
                }
            }
            (meets, spans)
        })
        .collect();
    if bad.load(Ordering::Relaxed) {
        return None;
    }
    let spans: Vec<(usize, usize)> = per.iter().flat_map(|p| p.1.iter().copied()).collect();
    if spans
        .par_iter()
        .any(|&(i, j)| meets_in_span(&a.cones[i], &b.cones[j], u))
    {
        return None;
    }
    Some(per.into_iter().flat_map(|p| p.0).collect())
}

fn draw_shift(rng: &mut ChaCha8Rng, m: usize, bound: i64) -> Vec<i64> {
    (0..m).map(|_| rng.random_range(-bound..=bound)).collect()
}

fn check_pairable(m1: usize, m2: usize, r1: usize, r2: usize) -> Result<()> {
    if m1 != m2 {
        return Err(Error::Dimension(format!(
            "ground sets differ: {m1} vs {m2} labels"
        )));
    }
    if r1 + r2 != m1 + 1 {
        return Err(Error::Dimension(format!(
            "codimensions {} + {} must sum to {}",
            m1 - r1,
            m2 - r2,
            m1 - 1
        )));
    }
    Ok(())
}

/// Lattice index of a transversal pair, from saturated generator lattices.
fn witness_index(c1: &BergmanCone<'_>, c2: &BergmanCone<'_>) -> Result<BigInt> {
    let m = c1.host().edge_count();
    let gens = |c: &BergmanCone<'_>, sign: i64| {
        let (rays, lin) = cone_generators(c);
        let rows: Vec<Vec<i64>> = rays
            .into_iter()
            .map(|r| r.into_iter().map(|x| sign * x).collect())
            .chain(lin)
            .collect();
        saturate(&IntegerMatrix::from_rows(&rows))
    };
    lattice_index(&gens(c1, 1), &gens(c2, -1), m)
}

/// Pairing of two precomputed cone sets.
pub fn stable_pairing_sets(
    g1: &Multigraph,
    s1: &ConeSet,
    g2: &Multigraph,
    s2: &ConeSet,
    cfg: &PairingConfig,
) -> Result<PairingResult> {
    check_pairable(s1.m, s2.m, s1.rank, s2.rank)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for attempt in 0..=cfg.max_retries {
        let u = draw_shift(&mut rng, s1.m, cfg.shift_bound);
        let Some(pairs) = meeting_pairs(s1, s2, &u) else {
            continue;
        };
        let witnesses = pairs
            .into_iter()
            .map(|(i, j)| {
                let (c1, c2) = (s1.chain(i), s2.chain(j));
                let idx = witness_index(
                    &BergmanCone::new(g1, c1.clone())?,
                    &BergmanCone::new(g2, c2.clone())?,
                )?;
                let index = idx
                    .to_u64()
                    .ok_or_else(|| Error::Internal(format!("lattice index {idx} overflows")))?;
                if index > 1 {
                    eprintln!("tropgal: witness {c1:?} / {c2:?} has lattice index {index}");
                }
                Ok(Witness {
                    chain1: c1,
                    chain2: c2,
                    index,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(PairingResult {
            value: witnesses.iter().map(|w| w.index).sum(),
            shift: u,
            witnesses,
            retries: attempt,
        });
    }
    Err(Error::Genericity {
        retries: cfg.max_retries,
    })
}

/// Stable intersection number `Trop(g1) · (−Trop(g2))`.
pub fn stable_pairing_with(
    g1: &Multigraph,
    g2: &Multigraph,
    cfg: &PairingConfig,
) -> Result<PairingResult> {
    check_pairable(
        g1.edge_count(),
        g2.edge_count(),
        flats::rank(g1, g1.ground_set()),
        flats::rank(g2, g2.ground_set()),
    )?;
    let (s1, s2) = rayon::join(|| ConeSet::new(g1), || ConeSet::new(g2));
    stable_pairing_sets(g1, &s1, g2, &s2, cfg)
}

pub fn stable_pairing(g1: &Multigraph, g2: &Multigraph, seed: u64) -> Result<PairingResult> {
    stable_pairing_with(g1, g2, &PairingConfig::with_seed(seed))
}

/// Realization number together with the self-pairing it halves.
pub fn realization_number_with(
    g: &SimpleGraph,
    cfg: &PairingConfig,
) -> Result<(u64, PairingResult)> {
    if !g.is_laman() {
        return Err(Error::NotLaman);
    }
    let mg = g.to_multigraph();
    let p = stable_pairing_with(&mg, &mg, cfg)?;
    if p.value % 2 == 1 {
        return Err(Error::Internal(format!(
            "self-pairing {} is odd",
            p.value
        )));
    }
    Ok((p.value / 2, p))
}

pub fn realization_number(g: &SimpleGraph, seed: u64) -> Result<u64> {
    realization_number_with(g, &PairingConfig::with_seed(seed)).map(|r| r.0)
}

fn negated(v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    v.into_iter()
        .map(|r| r.into_iter().map(|x| -x).collect())
        .collect()
}

/// Re-checks every witness with the generator-form LP and lattice index;
/// returns the recomputed value.
pub fn verify_certificate(g1: &Multigraph, g2: &Multigraph, r: &PairingResult) -> Result<u64> {
    let shift: Vec<Q> = r.shift.iter().map(|&x| q(x)).collect();
    let mut total = 0;
    for w in &r.witnesses {
        let c1 = BergmanCone::new(g1, w.chain1.clone())?;
        let c2 = BergmanCone::new(g2, w.chain2.clone())?;
        let (r1, l1) = cone_generators(&c1);
        let (r2, l2) = cone_generators(&c2);
        if !cones_meet(&r1, &l1, &negated(r2), &l2, &shift)? {
            return Err(Error::Internal("witness pair does not meet".into()));
        }
        let idx = witness_index(&c1, &c2)?;
        if idx != BigInt::from(w.index) {
            return Err(Error::Internal(format!(
                "witness index {} recomputes to {idx}",
                w.index
            )));
        }
        total += w.index;
    }
    Ok(total)
}

/// Slow reference: every pair of maximal cones in generator form, exact rank
/// for transversality, LP for meeting, Smith form for the index.
pub fn reference_pairing(g1: &Multigraph, g2: &Multigraph, shift: &[i64]) -> Result<u64> {
    let m = g1.edge_count();
    check_pairable(
        m,
        g2.edge_count(),
        flats::rank(g1, g1.ground_set()),
        flats::rank(g2, g2.ground_set()),
    )?;
    let shift_q: Vec<Q> = shift.iter().map(|&x| q(x)).collect();
    let gens = |g: &Multigraph, sign: i64| -> Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>, IntegerMatrix)> {
        flats::maximal_chains(g)
            .map(|c| {
                let cone = BergmanCone::new(g, c).expect("maximal chain is a cone");
                let (rays, lin) = cone_generators(&cone);
                let rays: Vec<Vec<i64>> = rays
                    .into_iter()
                    .map(|r| r.into_iter().map(|x| sign * x).collect())
                    .collect();
                let all: Vec<Vec<i64>> = rays.iter().chain(&lin).cloned().collect();
                let sat = saturate(&IntegerMatrix::from_rows(&all));
                (rays, lin, sat)
            })
            .collect()
    };
    let a = gens(g1, 1);
    let b = gens(g2, -1);
    let total: Result<u64> = a
        .par_iter()
        .map(|(r1, l1, n1)| {
            let mut acc = 0u64;
            for (r2, l2, n2) in &b {
                if n1.stack(n2).rank() < m {
                    continue;
                }
                if cones_meet(r1, l1, r2, l2, &shift_q)? {
                    acc += lattice_index(n1, n2, m)?
                        .to_u64()
                        .ok_or_else(|| Error::Internal("index overflow".into()))?;
                }
            }
            Ok(acc)
        })
        .sum();
    total
}
