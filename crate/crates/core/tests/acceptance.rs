//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tropgal::arboreal::arboreal_matches_pairing;
use tropgal::excision::{
    canonical_form, excise, find_excised_triangle, history_to_chain, legal_excisions,
    Classification, ExcisionHistory,
};
use tropgal::fan::{star, star_shapes, tropicalize, BergmanCone};
use tropgal::flats::{maximal_chains, proper_flats, ChainOfFlats};
use tropgal::galaxy::{
    additive_candidates, build_galaxy, check_subadditivity, galactic_pairing, is_additive_pair,
    is_multiedge_forest, pairing_table, Galaxy,
};
use tropgal::intersect::{realization_number, stable_pairing, PairingConfig};
use tropgal::multigraph::{laman_db_all, Multigraph, SimpleGraph};
use tropgal::LabelSet;

type Check = Result<String, String>;

fn ls(v: &[usize]) -> LabelSet {
    v.iter().copied().collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn k3() -> SimpleGraph {
    SimpleGraph::new(3, vec![(1, 2), (1, 3), (2, 3)]).unwrap()
}

fn k4e() -> SimpleGraph {
    SimpleGraph::new(4, vec![(1, 3), (1, 2), (2, 3), (3, 4), (2, 4)]).unwrap()
}

fn chain11() -> SimpleGraph {
    SimpleGraph::new(
        7,
        vec![
            (1, 3), (1, 2), (2, 3), (3, 4), (2, 4), (2, 5), (4, 5), (4, 6), (5, 6), (5, 7), (6, 7),
        ],
    )
    .unwrap()
}

fn house() -> SimpleGraph {
    SimpleGraph::new(5, vec![(1, 4), (1, 2), (2, 4), (4, 5), (2, 5), (3, 2), (5, 3)]).unwrap()
}

fn apply(g: &SimpleGraph, steps: &[&[usize]]) -> Multigraph {
    let labels: Vec<LabelSet> = steps.iter().map(|s| ls(s)).collect();
    ExcisionHistory::apply(&g.to_multigraph(), &labels)
        .unwrap()
        .result()
        .clone()
}

fn small_roots() -> Vec<(usize, usize, SimpleGraph)> {
    laman_db_all()
        .into_iter()
        .filter(|(_, _, g)| g.edge_count() <= 9)
        .collect()
}

fn sorted(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    v.sort();
    v
}

fn k3_facts() -> Check {
    let g = k3().to_multigraph();
    let flats: usize = proper_flats(&g).iter().map(|c| c.flats.len()).sum();
    ensure(flats == 4, || format!("{flats} proper flats"))?;
    let fan = tropicalize(&g);
    ensure(fan.cone_count() == 3, || format!("{} maximal cones", fan.cone_count()))?;
    let ray = BergmanCone::new(&g, ChainOfFlats::from_flats(&g, &[ls(&[1])]).unwrap()).unwrap();
    let st = star(&g, &ray).map_err(|e| e.to_string())?;
    let ex = tropicalize(&excise(&g, ls(&[1])).unwrap());
    let lin = sorted(st.lineality().to_vec());
    ensure(lin == vec![vec![0, 1, 1], vec![1, 0, 0]], || format!("star lineality {lin:?}"))?;
    ensure(lin == sorted(ex.lineality().to_vec()), || "excision lineality differs".into())?;
    ensure(st.cone_count() == 1 && st.dim() == 2, || "star is not a plane".into())?;
    ensure(st.cone_shapes() == ex.cone_shapes(), || "star cones differ".into())?;
    Ok("4 flats, 3 cones, star = Span(1_1, 1_23)".into())
}

fn excision_identities() -> Check {
    let g = k4e();
    let a = canonical_form(&apply(&g, &[&[3], &[1, 2]]));
    let b = canonical_form(&apply(&g, &[&[3], &[4, 5]]));
    ensure(a == b, || format!("{a} vs {b}"))?;
    let c = canonical_form(&apply(&g, &[&[1], &[5]]));
    let d = canonical_form(&apply(&g, &[&[5], &[1]]));
    ensure(c == d, || format!("{c} vs {d}"))?;
    Ok(format!("{} and {}", a.partition_label(), c.partition_label()))
}

fn non_additivity() -> Check {
    let g = chain11();
    let gal = build_galaxy(&g, Some(5)).map_err(|e| e.to_string())?;
    let base = canonical_form(&apply(&g, &[&[2], &[4], &[6]]));
    let h = canonical_form(&apply(&g, &[&[1], &[2, 3], &[4, 5], &[10]]));
    let cfg = PairingConfig::default();
    let v = galactic_pairing(&gal, &base, &h, &cfg).map_err(|e| e.to_string())?;
    ensure(v == 2, || format!("pairing {v}"))?;
    for e in [&[6, 7][..], &[8], &[9, 11]] {
        let leaf = canonical_form(&apply(&g, &[&[1], &[2, 3], &[4, 5], &[10], e]));
        let lv = galactic_pairing(&gal, &base, &leaf, &cfg).map_err(|e| e.to_string())?;
        ensure(lv == 1, || format!("leaf {leaf} pairs to {lv}"))?;
    }
    let r = check_subadditivity(&gal, &base, &h, 1, &cfg).map_err(|e| e.to_string())?;
    ensure(r.holds && r.value == 2 && r.sum == 3, || format!("{} <= {}", r.value, r.sum))?;
    Ok("2, leaves 1/1/1, 2 <= 3".into())
}

fn arboreal_golden() -> Check {
    let g = house();
    let mg = g.to_multigraph();
    let ch = |f: &[&[usize]]| {
        let v: Vec<LabelSet> = f.iter().map(|s| ls(s)).collect();
        ChainOfFlats::from_flats(&mg, &v).unwrap()
    };
    let f1 = ch(&[&[1], &[1, 4], &[1, 2, 3, 4, 5]]);
    let f2 = ch(&[&[2], &[2, 6], &[1, 2, 3, 6]]);
    let f3 = ch(&[&[1], &[1, 2, 3], &[1, 2, 3, 4, 5]]);
    let a = arboreal_matches_pairing(&g, &f1, &f2, 0).map_err(|e| e.to_string())?;
    ensure(a.arboreal && a.pairing == 1 && a.rank == a.m, || format!("{a:?}"))?;
    let b = arboreal_matches_pairing(&g, &f2, &f3, 0).map_err(|e| e.to_string())?;
    ensure(!b.arboreal && b.pairing == 0 && b.rank < b.m, || format!("{b:?}"))?;
    Ok(format!("rank {} vs {}", a.rank, b.rank))
}

fn histories(g: &Multigraph, len: usize) -> Vec<ExcisionHistory> {
    let mut out = vec![ExcisionHistory::new(g.clone())];
    let mut level = out.clone();
    for _ in 0..len {
        level = level
            .iter()
            .flat_map(|h| {
                legal_excisions(h.result()).into_iter().map(move |e| {
                    let mut c = h.clone();
                    c.push(e).unwrap();
                    c
                })
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

fn star_is_excision() -> Check {
    let roots = small_roots();
    let checked: Result<Vec<usize>, String> = roots
        .par_iter()
        .map(|(n, i, g)| {
            let mg = g.to_multigraph();
            let hs = histories(&mg, 3);
            for h in &hs {
                let chain = history_to_chain(h);
                let trop = tropicalize(h.result()).cone_shapes();
                let cone = BergmanCone::new(&mg, chain.clone()).map_err(|e| e.to_string())?;
                let st = star(&mg, &cone).map_err(|e| e.to_string())?.cone_shapes();
                ensure(trop == st, || format!("root ({n},{i}) history {:?}", h.labels()))?;
                ensure(trop == star_shapes(&mg, &chain), || {
                    format!("definition differs at root ({n},{i}) history {:?}", h.labels())
                })?;
            }
            Ok(hs.len())
        })
        .collect();
    let total: usize = checked?.iter().sum();
    Ok(format!("{} roots, {total} histories", roots.len()))
}

fn table_values(gal: &Galaxy, shortcuts: bool) -> Result<Vec<Vec<u64>>, String> {
    let cfg = PairingConfig::default();
    gal.nodes()
        .iter()
        .map(|n| {
            let t = pairing_table(gal, &n.key, shortcuts, &cfg).map_err(|e| e.to_string())?;
            t.entries
                .iter()
                .map(|e| e.value.ok_or_else(|| format!("entry {} of {} failed", e.key, n.key)))
                .collect()
        })
        .collect()
}

fn pairing_structure() -> Check {
    let roots = small_roots();
    let mut entries = 0;
    for (n, i, g) in &roots {
        let at = |s: &str| format!("root ({n},{i}): {s}");
        let gal = build_galaxy(g, None).map_err(|e| e.to_string())?;
        let general = table_values(&gal, false)?;
        let fast = table_values(&gal, true)?;
        ensure(general == fast, || at("shortcut table differs"))?;
        let size = gal.len();
        entries += size * size;
        for a in 0..size {
            for b in 0..size {
                ensure(general[a][b] == general[b][a], || at("asymmetric"))?;
            }
        }
        for e in gal.edges() {
            for row in &general {
                ensure(row[e.parent] >= row[e.child], || at("not monotone"))?;
            }
        }
        let leaves: Vec<usize> = gal.leaves().collect();
        for &a in &leaves {
            for &b in &leaves {
                ensure(general[a][b] <= 1, || at("leaf value above 1"))?;
            }
        }
        for a in 0..size {
            let desc = gal.descendants(&[a]);
            if a != 0 {
                for b in (0..size).filter(|&b| desc[b]) {
                    for c in (0..size).filter(|&c| desc[c]) {
                        ensure(general[b][c] == 0, || at("shared branch pairs nonzero"))?;
                    }
                }
            }
            if is_multiedge_forest(gal.nodes()[a].graph()) {
                for row in &general {
                    let v = row[a];
                    ensure(
                        v <= 1 && (0..size).filter(|&b| desc[b]).all(|b| row[b] == v),
                        || at("chain node descendants differ"),
                    )?;
                }
            }
        }
        ensure(general[0][0] % 2 == 0, || at("odd root self-pairing"))?;
    }
    Ok(format!("{} roots, {entries} entries", roots.len()))
}

fn shift_independence() -> Check {
    let roots = small_roots();
    let galaxies: Vec<Galaxy> = roots
        .iter()
        .map(|(_, _, g)| build_galaxy(g, None).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut values = Vec::new();
    for _ in 0..50 {
        let gal = galaxies.choose(&mut rng).unwrap();
        let a = &gal.nodes()[rng.random_range(0..gal.len())];
        let b = &gal.nodes()[rng.random_range(0..gal.len())];
        let vals: Vec<u64> = (0..10)
            .map(|s| stable_pairing(a.graph(), b.graph(), s).map(|r| r.value))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(vals.iter().all(|&v| v == vals[0]), || {
            format!("{} vs {}: {vals:?}", a.key, b.key)
        })?;
        values.push(vals[0]);
    }
    let nonzero = values.iter().filter(|&&v| v > 0).count();
    Ok(format!("50 pairs x 10 seeds, {nonzero} nonzero"))
}

fn arboreal_exhaustive() -> Check {
    let graphs: Vec<_> = laman_db_all().into_iter().filter(|x| x.0 <= 5).collect();
    let mut pairs = 0;
    for (n, i, g) in &graphs {
        let chains: Vec<ChainOfFlats> = maximal_chains(&g.to_multigraph()).collect();
        let bad: Vec<String> = chains
            .par_iter()
            .flat_map_iter(|a| {
                chains.iter().filter_map(move |b| {
                    match arboreal_matches_pairing(g, a, b, 0) {
                        Ok(r) if r.arboreal == (r.pairing == 1) && r.arboreal == (r.rank == r.m) => None,
                        Ok(r) => Some(format!("({n},{i}) {r:?}")),
                        Err(e) => Some(e.to_string()),
                    }
                })
            })
            .collect();
        ensure(bad.is_empty(), || bad[0].clone())?;
        pairs += chains.len() * chains.len();
    }
    Ok(format!("{} graphs, {pairs} chain pairs", graphs.len()))
}

fn additive_pairs() -> Check {
    let cfg = PairingConfig::default();
    let (mut tested, mut additive) = (0, 0);
    for (n, i, g) in small_roots() {
        let gal = build_galaxy(&g, None).map_err(|e| e.to_string())?;
        let tri: Vec<_> = gal
            .nodes()
            .iter()
            .filter(|x| x.class == Classification::ExcisedTriangle)
            .map(|x| x.key.clone())
            .collect();
        for a in &tri {
            for b in &tri {
                let mut any = false;
                for (p1, p2) in additive_candidates(&gal, a, b).map_err(|e| e.to_string())? {
                    tested += 1;
                    if is_additive_pair(&gal, a, b, p1, p2).map_err(|e| e.to_string())? {
                        any = true;
                        break;
                    }
                }
                if any {
                    additive += 1;
                    let v = galactic_pairing(&gal, a, b, &cfg).map_err(|e| e.to_string())?;
                    ensure(v == 2, || format!("({n},{i}) {a} vs {b} pairs to {v}"))?;
                }
            }
        }
    }
    ensure(additive > 0, || "no additive pair found".into())?;
    Ok(format!("{tested} selections, {additive} additive pairs, all pairing 2"))
}

/// Realization numbers from the multi-seed engine oracle.
const C2: &[(usize, usize, u64)] = &[
    (4, 1, 2),
    (5, 1, 4),
    (5, 2, 4),
    (5, 3, 4),
    (6, 1, 8),
    (6, 2, 8),
    (6, 3, 8),
    (6, 4, 8),
    (6, 5, 8),
    (6, 6, 8),
    (6, 7, 8),
    (6, 8, 8),
    (6, 9, 8),
    (6, 10, 8),
    (6, 11, 8),
    (6, 12, 8),
    (6, 13, 12),
];

fn lower_bound() -> Check {
    let graphs: Vec<_> = laman_db_all()
        .into_iter()
        .filter(|x| (4..=6).contains(&x.0))
        .collect();
    ensure(graphs.len() == C2.len(), || "database size changed".into())?;
    let mut seen = BTreeSet::new();
    for ((n, i, g), &(fn_, fi, want)) in graphs.iter().zip(C2) {
        ensure((*n, *i) == (fn_, fi), || "database order changed".into())?;
        for seed in [0, 1, 2] {
            let c2 = realization_number(g, seed).map_err(|e| e.to_string())?;
            ensure(c2 == want, || format!("({n},{i}) seed {seed}: {c2} vs {want}"))?;
            ensure(c2 >= 2, || format!("({n},{i}) c2 = {c2}"))?;
        }
        seen.insert(want);
    }
    Ok(format!("{} graphs, values {seen:?}", graphs.len()))
}

fn excised_triangles() -> Check {
    let graphs = laman_db_all();
    let failed: Vec<String> = graphs
        .par_iter()
        .filter_map(|(n, i, g)| match find_excised_triangle(g) {
            Ok(h) if tropgal::excision::classify(h.result()) == Classification::ExcisedTriangle => None,
            Ok(_) => Some(format!("({n},{i}) wrong class")),
            Err(e) => Some(format!("({n},{i}) {e}")),
        })
        .collect();
    ensure(failed.is_empty(), || failed[0].clone())?;
    Ok(format!("{} graphs", graphs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 11] = [
        ("K3 golden facts", 1, k3_facts),
        ("excision identities", 1, excision_identities),
        ("non-additivity on the triangle chain", 30, non_additivity),
        ("arboreal golden pair", 5, arboreal_golden),
        ("star equals excision", 300, star_is_excision),
        ("pairing structure suite", 600, pairing_structure),
        ("shift independence", 600, shift_independence),
        ("arboreal equivalence exhaustive", 600, arboreal_exhaustive),
        ("additive pairs pair to two", 900, additive_pairs),
        ("realization lower bound", 900, lower_bound),
        ("excised triangles reachable", 120, excised_triangles),
    ];
    let mut failures = 0;
    for (k, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        match res {
            Ok(detail) if !over => {
                println!("criterion {:>2} PASS  {name} ({took:.2?}; {detail})", k + 1)
            }
            Ok(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: over {budget}s budget ({took:.2?}; {detail})", k + 1)
            }
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({took:.2?}): {why}", k + 1)
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
