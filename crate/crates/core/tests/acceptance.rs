//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if
//! any criterion fails. Seeds, counts and budgets are pinned below.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdmtw::decomp::{
    compose_tdm, decompose_heuristic, exact_kfree_tw, extract_from_tdm, kfree_heuristic, kfree_width,
    tame_heuristic, tame_width, tdm_width, uncontract_subdivision, validate, validate_kfree, validate_tame,
    Decomposition, KFreeDecomposition, Kind, TameOcpDecomposition, TdmDecomposition, TreeDecomposition,
};
use tdmtw::grids::{
    cell_edges, find_even_grid_subdivision, make_grid, make_parity_handle, make_parity_vortex, make_rooted_grid,
    random_signing, GridCoords,
};
use tdmtw::ip::{brute_force_oracle, check_witness, solve_dp};
use tdmtw::matrix::{check_dmod_bounds, IpInstance, Row, TwoNonzeroMatrix};
use tdmtw::sgraph::{ocp_exact, path_parity, subdivide_even_edges, verify_subdivision_model, Parity, RootedSignedGraph};

const SEED: u64 = 0x7d3_2024;
const TDM_BUDGET: usize = 300;

type Check = Result<String, String>;
/// Name, body and time budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ (criterion << 32))
}

fn coef(rng: &mut ChaCha8Rng) -> i64 {
    *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap()
}

fn parity(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen() {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> TwoNonzeroMatrix {
    let rows = (0..rows)
        .map(|_| {
            let mut c = (0..cols).collect::<Vec<_>>();
            c.shuffle(rng);
            Row { a: (c[0], BigInt::from(coef(rng))), b: (c[1], BigInt::from(coef(rng))) }
        })
        .collect();
    TwoNonzeroMatrix::new(cols, rows).unwrap()
}

fn random_instance(rng: &mut ChaCha8Rng) -> IpInstance {
    let n = rng.gen_range(2..=10);
    let m = rng.gen_range(0..=15);
    let d = rng.gen_range(0..=3);
    let a = random_matrix(rng, m, n);
    let big = |v: i64| BigInt::from(v);
    let b = (0..m).map(|_| big(rng.gen_range(0..=24))).collect();
    let w = (0..n).map(|_| big(rng.gen_range(-5..=5))).collect();
    let l: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    let u = l.iter().map(|&x| big(x + rng.gen_range(0..=d))).collect();
    IpInstance::new(a, b, w, l.into_iter().map(big).collect(), u).unwrap()
}

/// Simple signed graph on 0..n with edge density `p` and `roots` roots.
fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, roots: usize) -> RootedSignedGraph {
    let mut g = RootedSignedGraph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                let par = parity(rng);
                g.add_edge(u, v, par).unwrap();
            }
        }
    }
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(rng);
    g.set_roots(vs.into_iter().take(roots)).unwrap();
    g
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Check {
    let mut rng = rng(1);
    let (mut optimal, mut infeasible) = (0, 0);
    for i in 0..500 {
        let inst = random_instance(&mut rng);
        let d = kfree_heuristic(&inst.graph());
        let dp = solve_dp(&inst, &d).map_err(|e| format!("instance {i}: {e}"))?;
        let bf = brute_force_oracle(&inst).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(dp.status() == bf.status() && dp.objective() == bf.objective(), || {
            format!("instance {i}: dp {:?} vs oracle {:?}", dp.objective(), bf.objective())
        })?;
        match dp.witness() {
            Some(x) => {
                ensure(check_witness(&inst, x), || format!("instance {i}: witness infeasible"))?;
                optimal += 1;
            }
            None => infeasible += 1,
        }
    }
    Ok(format!("500 instances agree ({optimal} optimal, {infeasible} infeasible)"))
}

fn dmod_bounds() -> Check {
    let mut rng = rng(2);
    let mut max_delta = BigInt::from(0);
    for i in 0..200 {
        let cols = rng.gen_range(2..=6);
        let rows = rng.gen_range(1..=6);
        let a = random_matrix(&mut rng, rows, cols);
        let r = check_dmod_bounds(&a).map_err(|e| format!("matrix {i}: {e}"))?;
        ensure(r.all_hold(), || format!("matrix {i}: {r}"))?;
        max_delta = max_delta.max(r.delta);
    }
    Ok(format!("200 matrices satisfy all four bounds (max delta {max_delta})"))
}

fn even_grid_subdivision() -> Check {
    let mut rng = rng(3);
    let mut routed = 0;
    for k in [2, 3] {
        let (grid, _) = make_grid(k * k).unwrap();
        let guest_cells = GridCoords::grid(k, k).cells();
        for i in 0..100 {
            let host = random_signing(&grid, &mut rng);
            let eg = find_even_grid_subdivision(&host, k).map_err(|e| format!("k={k} signing {i}: {e}"))?;
            verify_subdivision_model(&host, &eg.guest, &eg.model).map_err(|e| format!("k={k} signing {i}: {e}"))?;
            for cell in &guest_cells {
                let mut odd = false;
                for e in cell_edges(&eg.guest, cell).unwrap() {
                    odd ^= path_parity(&host, &eg.model.path_map[&e]).unwrap().is_odd();
                }
                ensure(!odd, || format!("k={k} signing {i}: image of cell {cell:?} is odd"))?;
            }
            routed += usize::from(matches!(eg.branch, tdmtw::grids::EvenGridBranch::Routed));
        }
    }
    Ok(format!("200 signings verified, all image cells even ({routed} routed)"))
}

fn leaf_decompositions(
    g: &RootedSignedGraph,
    kf: &KFreeDecomposition,
) -> Result<(BTreeMap<usize, TameOcpDecomposition>, usize), String> {
    let mut leaves = BTreeMap::new();
    let mut worst = 0;
    for (j, bag) in kf.base.bags.iter().enumerate() {
        let part: BTreeSet<usize> = bag.intersection(&kf.free).copied().collect();
        if part.is_empty() {
            continue;
        }
        let h = g.induced(&part);
        let t = tame_heuristic(&h).map_err(|e| e.to_string())?;
        worst = worst.max(tame_width(&t, &h).map_err(|e| e.to_string())?);
        leaves.insert(j, t);
    }
    Ok((leaves, worst))
}

fn sandwich() -> Check {
    let mut rng = rng(4);
    for i in 0..50 {
        let n = rng.gen_range(3..=10);
        let roots = rng.gen_range(1..=n.min(4));
        let p = rng.gen_range(0.2..0.6);
        let g = random_graph(&mut rng, n, p, roots);
        let ctx = |e: String| format!("graph {i}: {e}");
        let kf = kfree_heuristic(&g);
        let kw = kfree_width(&kf, &g).map_err(|e| ctx(e.to_string()))?;
        let (leaves, leaf_w) = leaf_decompositions(&g, &kf).map_err(ctx)?;
        let composed = compose_tdm(&g, &kf, &leaves).map_err(|e| ctx(e.to_string()))?;
        let cw = tdm_width(&composed, &g).map_err(|e| ctx(e.to_string()))?;
        ensure(cw <= kw + 1 + leaf_w, || ctx(format!("composed width {cw} > {kw} + 1 + {leaf_w}")))?;

        let heur = decompose_heuristic(&g, TDM_BUDGET, i).map_err(|e| ctx(e.to_string()))?.decomposition;
        for tdm in [composed, heur] {
            let w = tdm_width(&tdm, &g).map_err(|e| ctx(e.to_string()))?;
            let (k2, t2) = extract_from_tdm(&g, &tdm).map_err(|e| ctx(e.to_string()))?;
            let kv = validate_kfree(&k2, &g);
            ensure(kv.is_empty(), || ctx(format!("extracted kfree invalid: {kv:?}")))?;
            let tv = validate_tame(&t2, &g);
            ensure(tv.is_empty(), || ctx(format!("extracted tame invalid: {tv:?}")))?;
            let kw2 = kfree_width(&k2, &g).map_err(|e| ctx(e.to_string()))?;
            let tw2 = tame_width(&t2, &g).map_err(|e| ctx(e.to_string()))?;
            ensure(kw2 < w, || ctx(format!("extracted kfree width {kw2} vs tdm width {w}")))?;
            ensure(tw2 <= w, || ctx(format!("extracted t-width {tw2} vs tdm width {w}")))?;
        }
    }
    Ok("50 graphs satisfy both directions".into())
}

fn rooted_grid_bound() -> Check {
    let (w4, _) = make_rooted_grid(4).unwrap();
    let tw = exact_kfree_tw(&w4).map_err(|e| e.to_string())?;
    ensure(tw >= 1, || format!("rooted grid of order 4 has K-free width {tw}"))?;
    let mut rng = rng(5);
    for i in 0..50 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.8);
        let g = random_graph(&mut rng, n, p, 0);
        let t = exact_kfree_tw(&g).map_err(|e| format!("graph {i}: {e}"))?;
        ensure(t == 0, || format!("rootless graph {i} has K-free width {t}"))?;
    }
    Ok(format!("order-4 rooted grid width {tw}; 50 rootless graphs width 0"))
}

fn shift_subdivision_invariance() -> Check {
    let mut rng = rng(6);
    for i in 0..100 {
        let n = rng.gen_range(2..=10);
        let roots = rng.gen_range(0..=n.min(3));
        let p = rng.gen_range(0.2..0.6);
        let g = random_graph(&mut rng, n, p, roots);
        let ctx = |e: String| format!("graph {i}: {e}");
        let ocp = ocp_exact(&g).map_err(|e| ctx(e.to_string()))?;
        for v in 0..n {
            let s = ocp_exact(&g.shift_at(v).unwrap()).map_err(|e| ctx(e.to_string()))?;
            ensure(s == ocp, || ctx(format!("ocp {ocp} becomes {s} after shifting at {v}")))?;
        }
        let (sub, map) = subdivide_even_edges(&g);
        let h = decompose_heuristic(&sub, TDM_BUDGET, i).map_err(|e| ctx(e.to_string()))?;
        let back = uncontract_subdivision(&Decomposition::Tdm(h.decomposition), &g, &map)
            .map_err(|e| ctx(e.to_string()))?;
        let vs = validate(&back, &g);
        ensure(vs.is_empty(), || ctx(format!("uncontracted decomposition invalid: {vs:?}")))?;
        let Decomposition::Tdm(back) = back else { unreachable!() };
        let w = tdm_width(&back, &g).map_err(|e| ctx(e.to_string()))?;
        ensure(w == h.width, || ctx(format!("width {} on the subdivision, {w} after uncontracting", h.width)))?;
    }
    Ok("100 graphs: ocp shift-invariant, round trip keeps validity and width".into())
}

fn generator_structure() -> Check {
    for k in 1..=5 {
        let m = 4 * k;
        let expect_edges = k * m + (k - 1) * m + k;
        for (name, (g, _)) in [("handle", make_parity_handle(k).unwrap()), ("vortex", make_parity_vortex(k).unwrap())] {
            ensure(g.vertex_count() == k * m && g.edge_count() == expect_edges, || {
                format!("{name} k={k}: {} vertices, {} edges", g.vertex_count(), g.edge_count())
            })?;
            ensure(g.edges().all(|e| e.parity == Parity::Odd), || format!("{name} k={k}: even edge"))?;
            ensure(g.roots().is_empty(), || format!("{name} k={k}: has roots"))?;
        }
    }
    let (w8, c) = make_rooted_grid(8).unwrap();
    ensure(w8.vertex_count() == 64 && w8.roots().len() == 8 && w8.edge_count() == 112, || {
        format!("rooted grid 8: {} vertices, {} roots, {} edges", w8.vertex_count(), w8.roots().len(), w8.edge_count())
    })?;
    ensure(w8.roots().iter().all(|&r| c.position(r).map(|p| p.0) == Some(1)), || "roots off the first row".into())?;
    ensure(w8.edges().all(|e| e.parity == Parity::Even), || "rooted grid has an odd edge".into())?;
    Ok("handle/vortex k=1..5 and rooted grid of order 8 match".into())
}

fn base(d: &mut Decomposition) -> &mut TreeDecomposition {
    match d {
        Decomposition::Tree(x) => x,
        Decomposition::KFree(x) => &mut x.base,
        Decomposition::TameOcp(x) => &mut x.base,
        Decomposition::Tdm(x) => &mut x.base,
    }
}

/// Corrupts one field of `d` so that a specific clause must fail; returns
/// the clause or `None` if this corruption does not apply to `d`.
fn corrupt(d: &mut Decomposition, g: &RootedSignedGraph, rng: &mut ChaCha8Rng) -> Option<&'static str> {
    let outside = g.next_vertex_id() + rng.gen_range(0..5);
    let n = d.base().node_count();
    let t = rng.gen_range(0..n);
    match rng.gen_range(0..8) {
        0 => {
            base(d).bags[t].insert(outside);
            Some("bag-vertex")
        }
        1 => {
            // drop a vertex from the only bag holding it
            let single: Vec<usize> = g
                .vertices()
                .iter()
                .copied()
                .filter(|v| d.base().bags.iter().filter(|b| b.contains(v)).count() == 1)
                .collect();
            let v = *single.choose(rng)?;
            let b = d.base().bags.iter().position(|b| b.contains(&v)).unwrap();
            base(d).bags[b].remove(&v);
            Some("cover-vertex")
        }
        2 => {
            let td = base(d);
            if td.tree_edges.is_empty() {
                td.tree_edges.push((t, t));
            } else {
                let e = rng.gen_range(0..td.tree_edges.len());
                td.tree_edges[e].1 = n + rng.gen_range(0..3);
            }
            Some("tree")
        }
        3 => match d {
            Decomposition::KFree(k) => {
                let r = *g.roots().iter().collect::<Vec<_>>().choose(rng)?;
                k.free.insert(*r);
                Some("free-root")
            }
            Decomposition::TameOcp(TameOcpDecomposition { protectors, .. })
            | Decomposition::Tdm(TdmDecomposition { protectors, .. }) => {
                protectors[t].insert(outside);
                Some("protector-subset")
            }
            Decomposition::Tree(_) => None,
        },
        4 => match d {
            Decomposition::KFree(k) => {
                k.free.insert(outside);
                Some("free-vertex")
            }
            Decomposition::Tdm(x) => {
                let (node, r) = (0..n).find_map(|s| {
                    let r = x.protectors[s].iter().find(|v| g.is_root(**v))?;
                    Some((s, *r))
                })?;
                x.protectors[node].remove(&r);
                Some("protector-root")
            }
            _ => None,
        },
        5 => match d {
            Decomposition::Tdm(x) => {
                x.strong.insert(n + rng.gen_range(0..3));
                Some("strong-node")
            }
            _ => None,
        },
        6 => match d {
            Decomposition::TameOcp(TameOcpDecomposition { protectors, .. })
            | Decomposition::Tdm(TdmDecomposition { protectors, .. }) => {
                protectors.pop();
                Some("shape")
            }
            _ => None,
        },
        _ => {
            // move an edge's last shared bag away: delete an end from every bag but one
            let e = g.edges().collect::<Vec<_>>().choose(rng).copied()?;
            let (u, v) = e.ends();
            let holders: Vec<usize> =
                (0..n).filter(|&s| d.base().bags[s].contains(&u) && d.base().bags[s].contains(&v)).collect();
            if holders.len() != 1 {
                return None;
            }
            base(d).bags[holders[0]].remove(&v);
            // removing v may also uncover it, either clause names the fault
            Some(if d.base().bags.iter().any(|b| b.contains(&v)) { "cover-edge" } else { "cover-vertex" })
        }
    }
}

fn fixtures(rng: &mut ChaCha8Rng) -> Vec<(RootedSignedGraph, BTreeMap<Kind, Decomposition>)> {
    (0..10)
        .map(|i| {
            let n = rng.gen_range(4..=9);
            let roots = rng.gen_range(1..=3);
            let g = random_graph(rng, n, 0.45, roots);
            let tdm = decompose_heuristic(&g, TDM_BUDGET, i).unwrap().decomposition;
            let kf = kfree_heuristic(&g);
            let tame = tame_heuristic(&g).unwrap();
            let tree = tame.base.clone();
            let ds = BTreeMap::from([
                (Kind::Tree, Decomposition::Tree(tree)),
                (Kind::KFree, Decomposition::KFree(kf)),
                (Kind::TameOcp, Decomposition::TameOcp(tame)),
                (Kind::Tdm, Decomposition::Tdm(tdm)),
            ]);
            (g, ds)
        })
        .collect()
}

fn fuzz_rejection() -> Check {
    let mut rng = rng(8);
    let fx = fixtures(&mut rng);
    for (g, ds) in &fx {
        for d in ds.values() {
            let vs = validate(d, g);
            ensure(vs.is_empty(), || format!("fixture {} invalid: {vs:?}", d.kind().keyword()))?;
        }
    }
    let mut clauses = BTreeSet::new();
    for kind in [Kind::Tree, Kind::KFree, Kind::TameOcp, Kind::Tdm] {
        let mut done = 0;
        while done < 100 {
            let (g, ds) = fx.choose(&mut rng).unwrap();
            let mut d = ds[&kind].clone();
            let Some(clause) = corrupt(&mut d, g, &mut rng) else { continue };
            let vs = validate(&d, g);
            ensure(vs.iter().any(|v| v.clause() == clause), || {
                format!("{} corruption expecting `{clause}` gave {vs:?}", kind.keyword())
            })?;
            clauses.insert(clause);
            done += 1;
        }
    }
    Ok(format!("400 corruptions rejected; clauses hit: {}", clauses.into_iter().collect::<Vec<_>>().join(" ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence, 180),
        ("delta-modularity bounds", dmod_bounds, 120),
        ("even-grid subdivision", even_grid_subdivision, 120),
        ("decomposition sandwich", sandwich, 300),
        ("rooted-grid lower bound", rooted_grid_bound, 120),
        ("shift/subdivision invariance", shift_subdivision_invariance, 180),
        ("generator structure", generator_structure, 60),
        ("fuzz rejection", fuzz_rejection, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > Duration::from_secs(budget) => Err(format!("over budget of {budget}s")),
            o => o,
        };
        let (tag, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} criterion {} {name}: {msg} [{:.2}s]", i + 1, took.as_secs_f64());
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
