//! Symbolic Bergman fans of multigraphs: cones are chains of flats.

use std::collections::{BTreeSet, HashMap};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::flats::{self, ChainOfFlats, ComponentChain, MaximalChains};
use crate::intersect::lp::Q;
use crate::labels::LabelSet;
use crate::multigraph::Multigraph;

/// The cone spanned by the indicator vectors of a chain plus the lineality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BergmanCone<'g> {
    host: &'g Multigraph,
    chain: ChainOfFlats,
}

impl<'g> BergmanCone<'g> {
    /// Fails if `chain` is not a chain of flats of `host`.
    pub fn new(host: &'g Multigraph, chain: ChainOfFlats) -> Result<Self> {
        let again = ChainOfFlats::new(host, &chain.to_label_lists())
            .map_err(|e| Error::NotACone(e.to_string()))?;
        if again != chain {
            return Err(Error::NotACone("chain belongs to another host".into()));
        }
        Ok(BergmanCone { host, chain })
    }

    pub fn host(&self) -> &'g Multigraph {
        self.host
    }

    pub fn chain(&self) -> &ChainOfFlats {
        &self.chain
    }

    pub fn dim(&self) -> usize {
        self.chain.parts().len() + self.chain.len()
    }

    pub fn is_maximal(&self) -> bool {
        self.chain.is_maximal()
    }

    pub fn shape(&self) -> ConeShape {
        ConeShape::of_chain(&self.chain)
    }
}

/// Canonical description of a cone by the vectors it contains: a vector lies
/// in the cone iff it is constant on every block and non-increasing along
/// every segment. Segments are sorted, so equal shapes mean equal cones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeShape(pub Vec<Vec<LabelSet>>);

impl ConeShape {
    pub fn of_chain(chain: &ChainOfFlats) -> Self {
        let mut segs: Vec<Vec<LabelSet>> = chain.parts().iter().map(ComponentChain::blocks).collect();
        segs.sort();
        ConeShape(segs)
    }
}

/// Component indicator vectors: a basis of the lineality space.
pub fn lineality(g: &Multigraph) -> Vec<Vec<i64>> {
    let m = g.edge_count();
    g.components().into_iter().map(|c| c.indicator(m)).collect()
}

/// Ray generators (flat indicators) and lineality generators of a cone.
pub fn cone_generators(c: &BergmanCone<'_>) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let m = c.host.edge_count();
    let rays = c.chain.flats().map(|f| f.labels().indicator(m)).collect();
    (rays, lineality(c.host))
}

/// The Bergman fan of a multigraph with unit multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    host: Multigraph,
    lineality: Vec<Vec<i64>>,
}

pub fn tropicalize(g: &Multigraph) -> Fan {
    Fan {
        lineality: lineality(g),
        host: g.clone(),
    }
}

impl Fan {
    pub fn host(&self) -> &Multigraph {
        &self.host
    }

    pub fn lineality(&self) -> &[Vec<i64>] {
        &self.lineality
    }

    pub fn ambient_dim(&self) -> usize {
        self.host.edge_count()
    }

    /// Dimension of every maximal cone: the rank of the graphic matroid.
    pub fn dim(&self) -> usize {
        flats::rank(&self.host, self.host.ground_set())
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    /// Restartable stream of maximal chains.
    pub fn maximal_chains(&self) -> MaximalChains {
        flats::maximal_chains(&self.host)
    }

    pub fn maximal_cones(&self) -> impl Iterator<Item = BergmanCone<'_>> + '_ {
        self.maximal_chains().map(move |chain| BergmanCone {
            host: &self.host,
            chain,
        })
    }

    pub fn cone_count(&self) -> usize {
        self.maximal_chains().total()
    }

    pub fn cone(&self, chain: ChainOfFlats) -> Result<BergmanCone<'_>> {
        BergmanCone::new(&self.host, chain)
    }

    pub fn cone_shapes(&self) -> BTreeSet<ConeShape> {
        self.maximal_chains().map(|c| ConeShape::of_chain(&c)).collect()
    }

    /// Support membership.
    pub fn contains(&self, w: &[Q]) -> Result<bool> {
        Ok(cone_of_point(&self.host, w)?.is_some())
    }
}

impl Serialize for Fan {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let cones: Vec<ChainOfFlats> = self.maximal_chains().collect();
        let mut st = s.serialize_struct("Fan", 2)?;
        st.serialize_field("lineality", &self.lineality)?;
        st.serialize_field("maximal_cones", &cones)?;
        st.end()
    }
}

/// The chain whose cone contains `w` in its relative interior, if `w` lies
/// in the support.
pub fn cone_of_point(g: &Multigraph, w: &[Q]) -> Result<Option<ChainOfFlats>> {
    if w.len() != g.edge_count() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, ground set has {}",
            w.len(),
            g.edge_count()
        )));
    }
    let mut per = Vec::new();
    for comp in g.components() {
        let mut values: Vec<&Q> = comp.iter().map(|l| &w[l - 1]).collect();
        values.sort_by(|a, b| b.cmp(a));
        values.dedup();
        let mut chain = Vec::new();
        for v in &values[..values.len() - 1] {
            let s: LabelSet = comp.iter().filter(|&l| w[l - 1] >= **v).collect();
            if !flats::is_flat(g, s) {
                return Ok(None);
            }
            chain.push(s);
        }
        per.push(chain);
    }
    ChainOfFlats::new(g, &per).map(Some)
}

/// Minors `(K|F_j)/F_{j-1}` of every component `K` along its chain, glued
/// into one multigraph on the same labels.
pub fn chain_minors(g: &Multigraph, chain: &ChainOfFlats) -> Multigraph {
    let m = g.edge_count();
    let mut ends = vec![(0, 0); m];
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut next = 0;
    let mut piece = 0;
    for part in chain.parts() {
        let mut lower = LabelSet::EMPTY;
        let bounds = part
            .flats()
            .iter()
            .map(|f| f.labels())
            .chain([part.component().labels()]);
        for upper in bounds {
            let mut dsu = Dsu::new(g.vertex_count() + 1);
            for l in lower.iter() {
                let (u, v) = g.ends(l);
                dsu.union(u, v);
            }
            piece += 1;
            for l in (upper - lower).iter() {
                let (u, v) = g.ends(l);
                let mut id = |x: usize| {
                    *ids.entry((piece, dsu.find(x))).or_insert_with(|| {
                        next += 1;
                        next
                    })
                };
                let (a, b) = (id(u), id(v));
                ends[l - 1] = (a.min(b), a.max(b));
            }
            lower = upper;
        }
    }
    Multigraph::from_parts(next, ends)
}

/// Star of `Trop(g)` at the cone `c`, as the fan of the chain minors.
pub fn star(g: &Multigraph, c: &BergmanCone<'_>) -> Result<Fan> {
    if c.host != g {
        return Err(Error::NotACone("cone belongs to another host".into()));
    }
    Ok(tropicalize(&chain_minors(g, &c.chain)))
}

/// Maximal cones of the star computed from the definition: every maximal
/// cone through `c`, plus the span of `c`.
pub fn star_shapes(g: &Multigraph, chain: &ChainOfFlats) -> BTreeSet<ConeShape> {
    use itertools::Itertools;
    let per_component: Vec<Vec<Vec<Vec<LabelSet>>>> = chain
        .parts()
        .iter()
        .map(|part| {
            let cuts: BTreeSet<LabelSet> = part.flats().iter().map(|f| f.labels()).collect();
            flats::component_maximal_chains(g, part.component())
                .into_iter()
                .filter(|lift| {
                    cuts.iter()
                        .all(|c| lift.flats().iter().any(|f| f.labels() == *c))
                })
                .map(|lift| {
                    let mut segs = vec![Vec::new()];
                    let mut prefix = LabelSet::EMPTY;
                    for b in lift.blocks() {
                        segs.last_mut().unwrap().push(b);
                        prefix |= b;
                        if cuts.contains(&prefix) {
                            segs.push(Vec::new());
                        }
                    }
                    segs
                })
                .collect()
        })
        .collect();
    per_component
        .into_iter()
        .multi_cartesian_product()
        .map(|choice| {
            let mut segs: Vec<Vec<LabelSet>> = choice.into_iter().flatten().collect();
            segs.sort();
            ConeShape(segs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intersect::lp::q;
    use crate::intersect::matrix::IntegerMatrix;
    use crate::multigraph::tests::k3;
    use crate::multigraph::{laman_db, laman_db_count};
    use itertools::Itertools;
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ls(v: &[usize]) -> LabelSet {
        v.iter().copied().collect()
    }

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn small_graphs() -> Vec<Multigraph> {
        let mut out: Vec<Multigraph> = (3..=5)
            .flat_map(|n| (1..=laman_db_count(n).unwrap()).map(move |i| laman_db(n, i).unwrap()))
            .map(|g| g.to_multigraph())
            .collect();
        out.push(Multigraph::new(4, vec![(1, 2), (1, 2), (2, 3), (3, 4), (3, 4), (1, 4), (1, 3)]).unwrap());
        out.push(Multigraph::new(5, vec![(1, 2), (2, 3), (2, 3), (1, 3), (4, 5)]).unwrap());
        out
    }

    #[test]
    fn k3_fan() {
        let g = k3().to_multigraph();
        let f = tropicalize(&g);
        assert_eq!(f.cone_count(), 3);
        assert_eq!(f.lineality(), &[vec![1, 1, 1]]);
        assert_eq!(f.dim(), 2);
        let cones: Vec<_> = f.maximal_cones().collect();
        let (rays, lin) = cone_generators(&cones[0]);
        assert_eq!(rays, vec![vec![1, 0, 0]]);
        assert_eq!(lin, vec![vec![1, 1, 1]]);
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"lineality":[[1,1,1]],"maximal_cones":[[[[1]]],[[[2]]],[[[3]]]]}"#
        );
    }

    #[test]
    fn disjoint_multiedges_single_cone() {
        let g = Multigraph::new(4, vec![(1, 2), (3, 4), (3, 4)]).unwrap();
        let f = tropicalize(&g);
        assert_eq!(f.cone_count(), 1);
        assert_eq!(f.lineality(), &[vec![1, 0, 0], vec![0, 1, 1]]);
        let tri = Multigraph::new(5, vec![(1, 2), (2, 3), (2, 3), (1, 3), (4, 5)]).unwrap();
        assert_eq!(tropicalize(&tri).cone_count(), 3);
    }

    #[test]
    fn point_location() {
        let g = k3().to_multigraph();
        let c = cone_of_point(&g, &qv(&[1, 1, 1])).unwrap().unwrap();
        assert!(c.is_empty());
        let c = cone_of_point(&g, &qv(&[1, 0, 0])).unwrap().unwrap();
        assert_eq!(c.to_label_lists(), vec![vec![ls(&[1])]]);
        assert!(cone_of_point(&g, &qv(&[1, 2, 0])).unwrap().is_none());
        assert!(cone_of_point(&g, &qv(&[1, 2])).is_err());
    }

    #[test]
    fn k3_star_at_ray() {
        let g = k3().to_multigraph();
        let f = tropicalize(&g);
        let c = f.cone(ChainOfFlats::from_flats(&g, &[ls(&[1])]).unwrap()).unwrap();
        let s = star(&g, &c).unwrap();
        assert_eq!(s.cone_count(), 1);
        assert_eq!(s.lineality(), &[vec![1, 0, 0], vec![0, 1, 1]]);
        // star at the lineality cone is the fan itself
        let z = f.cone(ChainOfFlats::empty(&g)).unwrap();
        assert_eq!(star(&g, &z).unwrap().cone_shapes(), f.cone_shapes());
        let other = k3().henneberg0(1, 2).unwrap().to_multigraph();
        assert!(star(&other, &c).is_err());
    }

    #[test]
    fn star_matches_definition_and_composes() {
        for g in small_graphs() {
            let f = tropicalize(&g);
            for max in f.maximal_chains() {
                // every truncation of a maximal chain is a cone
                for part_idx in 0..max.parts().len() {
                    for keep in 0..=max.parts()[part_idx].len() {
                        let lists: Vec<Vec<LabelSet>> = max
                            .to_label_lists()
                            .into_iter()
                            .enumerate()
                            .map(|(i, l)| if i == part_idx { l[..keep].to_vec() } else { l })
                            .collect();
                        let chain = ChainOfFlats::new(&g, &lists).unwrap();
                        let cone = f.cone(chain.clone()).unwrap();
                        let st = star(&g, &cone).unwrap();
                        assert_eq!(st.cone_shapes(), star_shapes(&g, &chain), "{lists:?}");
                        // iterate: a star of the star at a deeper truncation
                        // equals the star of the original at that cone
                        let h = st.host().clone();
                        for keep2 in keep..=max.parts()[part_idx].len() {
                            let lists2: Vec<Vec<LabelSet>> = max
                                .to_label_lists()
                                .into_iter()
                                .enumerate()
                                .map(|(i, l)| if i == part_idx { l[..keep2].to_vec() } else { l })
                                .collect();
                            let deeper = ChainOfFlats::new(&g, &lists2).unwrap();
                            let rel: Vec<LabelSet> = deeper.flats().map(|f| f.labels()).collect();
                            let rel_in_h = rel_chain_in_minor(&h, &rel);
                            let sh = star(&h, &BergmanCone::new(&h, rel_in_h).unwrap()).unwrap();
                            let direct = star(&g, &f.cone(deeper).unwrap()).unwrap();
                            assert_eq!(sh.cone_shapes(), direct.cone_shapes());
                        }
                    }
                }
            }
        }
    }

    /// Cone of the minor containing the sum of the flat indicators, i.e. the
    /// image of the finer cone in the star.
    fn rel_chain_in_minor(h: &Multigraph, flats: &[LabelSet]) -> ChainOfFlats {
        let m = h.edge_count();
        let mut w = vec![q(0); m];
        for f in flats {
            for l in f.iter() {
                w[l - 1] += q(1);
            }
        }
        cone_of_point(h, &w).unwrap().expect("point of a refining cone lies in the star")
    }

    #[test]
    fn balancing_at_codim_one() {
        for g in small_graphs().into_iter().filter(|g| g.edge_count() <= 7) {
            let m = g.edge_count();
            let f = tropicalize(&g);
            let pf = flats::proper_flats(&g);
            for max in f.maximal_chains() {
                for (pi, part) in max.parts().iter().enumerate() {
                    for drop in 0..part.len() {
                        let below = if drop == 0 { LabelSet::EMPTY } else { part.flats()[drop - 1].labels() };
                        let above = part.flats().get(drop + 1).map_or(part.component().labels(), |f| f.labels());
                        let mids: Vec<LabelSet> = pf[pi]
                            .flats
                            .iter()
                            .map(|f| f.labels())
                            .filter(|x| below.is_subset(*x) && x.is_subset(above) && *x != below && *x != above)
                            .collect();
                        assert!(mids.len() >= 2);
                        let mut tau: Vec<Vec<i64>> = lineality(&g);
                        for (qi, p) in max.parts().iter().enumerate() {
                            for (k, fl) in p.flats().iter().enumerate() {
                                if !(qi == pi && k == drop) {
                                    tau.push(fl.labels().indicator(m));
                                }
                            }
                        }
                        let sum: Vec<i64> = (0..m)
                            .map(|i| mids.iter().map(|x| i64::from(x.contains(i + 1))).sum())
                            .collect();
                        let r = IntegerMatrix::from_rows(&tau).rank();
                        let mut with = tau.clone();
                        with.push(sum);
                        assert_eq!(IntegerMatrix::from_rows(&with).rank(), r);
                    }
                }
            }
        }
    }

    #[test]
    fn interior_points_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in small_graphs() {
            let f = tropicalize(&g);
            for cone in f.maximal_cones() {
                let (rays, lin) = cone_generators(&cone);
                let m = g.edge_count();
                for _ in 0..3 {
                    let mut w = vec![q(0); m];
                    for r in &rays {
                        let c = rng.random_range(1..=20i64);
                        for i in 0..m {
                            w[i] += q(c * r[i]);
                        }
                    }
                    for l in &lin {
                        let c = rng.random_range(-20..=20i64);
                        for i in 0..m {
                            w[i] += q(c * l[i]);
                        }
                    }
                    assert_eq!(cone_of_point(&g, &w).unwrap().as_ref(), Some(cone.chain()));
                }
                let gens: Vec<Vec<i64>> = rays.iter().chain(&lin).cloned().collect();
                assert_eq!(IntegerMatrix::from_rows(&gens).rank(), cone.dim());
                assert_eq!(cone.dim(), f.dim());
            }
        }
    }

    /// Local support of the fan near an interior point of a cone agrees with
    /// the support of the star.
    #[test]
    fn star_support_germ() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let eps = Q::new(BigInt::from(1), BigInt::from(1u64 << 20));
        for g in small_graphs() {
            let m = g.edge_count();
            let f = tropicalize(&g);
            let maxes: Vec<ChainOfFlats> = f.maximal_chains().collect();
            for _ in 0..4 {
                let max = &maxes[rng.random_range(0..maxes.len())];
                let flats_all: Vec<LabelSet> = max.flats().map(|f| f.labels()).collect();
                let keep: Vec<LabelSet> = flats_all.into_iter().filter(|_| rng.random_bool(0.5)).collect();
                let chain = ChainOfFlats::from_flats(&g, &keep).unwrap();
                let cone = f.cone(chain.clone()).unwrap();
                let st = star(&g, &cone).unwrap();
                let (rays, _) = cone_generators(&cone);
                let w: Vec<Q> = (0..m).map(|i| q(rays.iter().map(|r| r[i]).sum())).collect();
                let star_cones: Vec<ChainOfFlats> = st.maximal_chains().collect();
                let mut hits = 0;
                for k in 0..100 {
                    let u: Vec<Q> = if k % 2 == 0 {
                        // interior of a random star cone
                        let sc = &star_cones[rng.random_range(0..star_cones.len())];
                        let mut u = vec![q(0); m];
                        for fl in sc.flats() {
                            let c = rng.random_range(1..=5i64);
                            for l in fl.labels().iter() {
                                u[l - 1] += q(c);
                            }
                        }
                        for l in lineality(st.host()) {
                            let c = rng.random_range(-5..=5i64);
                            for i in 0..m {
                                u[i] += q(c * l[i]);
                            }
                        }
                        u
                    } else {
                        (0..m).map(|_| q(rng.random_range(-8..=8i64))).collect()
                    };
                    let moved: Vec<Q> = w.iter().zip(&u).map(|(a, b)| a + &eps * b).collect();
                    let in_fan = f.contains(&moved).unwrap();
                    let in_star = st.contains(&u).unwrap();
                    assert_eq!(in_fan, in_star);
                    hits += usize::from(in_star);
                }
                assert!(hits >= 50);
            }
        }
    }

    proptest! {
        #[test]
        fn cone_count_matches_chain_count(seed in 0u64..50) {
            let gs = small_graphs();
            let g = &gs[seed as usize % gs.len()];
            let f = tropicalize(g);
            prop_assert_eq!(f.cone_count(), flats::maximal_chains(g).count());
            prop_assert_eq!(f.cone_shapes().len(), f.cone_count());
            let dims: Vec<usize> = f.maximal_cones().map(|c| c.dim()).dedup().collect();
            prop_assert_eq!(dims, vec![f.dim()]);
        }
    }
}
