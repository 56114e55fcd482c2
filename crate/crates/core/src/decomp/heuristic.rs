//! Best-effort decomposers. Every output is valid; widths are not optimal.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::elim::{components_with_boundary, elimination_decomposition, kfree_from_free_set, min_degree_order, simple_adjacency, torso};
use super::ops::{compose_tdm, compress_tdm, compress_tree};
use super::types::*;
use super::validate::{kfree_width_unchecked, protected_width};
use crate::error::Result;
use crate::sgraph::{ocp_exact, RootedSignedGraph, Vertex};

/// Work counter shared by the heuristics; one unit per width evaluation.
pub(crate) struct Budget {
    left: usize,
    pub exhausted: bool,
}

impl Budget {
    pub fn new(units: usize) -> Self {
        Budget { left: units, exhausted: false }
    }

    fn take(&mut self) -> bool {
        if self.left == 0 {
            self.exhausted = true;
            return false;
        }
        self.left -= 1;
        true
    }
}

/// Default number of width evaluations.
pub const DEFAULT_BUDGET: usize = 2000;
const PROTECTOR_CHOICES: usize = 256;
/// Single-bag candidates with more unprotected vertices than this are not
/// scored: exact packing on them can take exponential time.
pub const SINGLE_BAG_MAX_VERTICES: usize = 20;

/// Min-degree tree decomposition with subsumed bags contracted.
pub fn min_degree_decomposition(g: &RootedSignedGraph) -> TreeDecomposition {
    let adj = simple_adjacency(g);
    let order = min_degree_order::<ChaCha8Rng>(&adj, None);
    compress_tree(&elimination_decomposition(&adj, &order))
}

fn kfree_cost(d: &KFreeDecomposition) -> (usize, u128) {
    let cost = d.base.bags.iter().fold(0u128, |acc, b| acc.saturating_add(4u128.saturating_pow(b.len() as u32)));
    (kfree_width_unchecked(d), cost)
}

fn grow_free_set(g: &RootedSignedGraph, limit: usize) -> BTreeSet<Vertex> {
    let mut cands: Vec<Vertex> = g.vertices().iter().copied().filter(|v| !g.is_root(*v)).collect();
    cands.sort_by_key(|&v| (g.degree(v), v));
    let mut free = BTreeSet::new();
    for v in cands {
        free.insert(v);
        let ok = components_with_boundary(g, &free)
            .iter()
            .all(|(c, b)| b.len() <= limit && c.len() + b.len() <= limit + 3);
        if !ok {
            free.remove(&v);
        }
    }
    free
}

/// K-free decomposition from the best of several free sets: none, every
/// non-root, and greedy growth under a boundary limit. Candidates are ranked
/// by width, then by Σ 4^|β(t)|.
pub fn kfree_heuristic(g: &RootedSignedGraph) -> KFreeDecomposition {
    let non_roots: BTreeSet<Vertex> = g.vertices().iter().copied().filter(|v| !g.is_root(*v)).collect();
    let mut cands = vec![BTreeSet::new(), non_roots];
    for limit in 0..=g.vertex_count() {
        cands.push(grow_free_set(g, limit));
    }
    cands.sort();
    cands.dedup();
    let mut best: Option<((usize, u128), KFreeDecomposition)> = None;
    for free in cands {
        let t = torso(g, &free);
        let order = min_degree_order::<ChaCha8Rng>(&t, None);
        let d = kfree_from_free_set(g, &free, &order);
        let c = kfree_cost(&d);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, d));
        }
    }
    best.unwrap().1
}

/// Protector for node `t` of `base`: the forced set plus all but one vertex
/// of each adhesion, choosing the left-out vertices to minimise
/// |α| + OCP(G[β ∖ α]).
fn choose_protector(
    g: &RootedSignedGraph,
    base: &TreeDecomposition,
    adj: &[Vec<Node>],
    t: Node,
    forced: &BTreeSet<Vertex>,
    budget: &mut Budget,
) -> Result<BTreeSet<Vertex>> {
    let bag = &base.bags[t];
    let adhesions: Vec<Vec<Vertex>> = adj[t]
        .iter()
        .map(|&s| base.adhesion(t, s).difference(forced).copied().collect::<Vec<_>>())
        .filter(|a| !a.is_empty())
        .collect();
    let build = |picks: &[usize]| -> BTreeSet<Vertex> {
        let mut a = forced.clone();
        for (ad, &p) in adhesions.iter().zip(picks) {
            a.extend(ad.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, v)| *v));
        }
        a
    };
    let score = |a: &BTreeSet<Vertex>| -> Result<usize> {
        let rest: BTreeSet<Vertex> = bag.difference(a).copied().collect();
        Ok(a.len() + ocp_exact(&g.induced(&rest))?)
    };
    let mut picks = vec![0usize; adhesions.len()];
    let mut best_set = build(&picks);
    let mut best = score(&best_set)?;
    let combos = adhesions.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len()));
    if combos.is_some_and(|c| c <= PROTECTOR_CHOICES) {
        let mut cur = vec![0usize; adhesions.len()];
        loop {
            let mut i = 0;
            while i < cur.len() {
                cur[i] += 1;
                if cur[i] < adhesions[i].len() {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == cur.len() || !budget.take() {
                break;
            }
            let a = build(&cur);
            let s = score(&a)?;
            if s < best {
                best = s;
                best_set = a;
            }
        }
    } else {
        // coordinate descent over the left-out vertex of each adhesion
        let mut improved = true;
        while improved {
            improved = false;
            for i in 0..adhesions.len() {
                for p in 0..adhesions[i].len() {
                    if p == picks[i] || !budget.take() {
                        continue;
                    }
                    let mut trial = picks.clone();
                    trial[i] = p;
                    let a = build(&trial);
                    let s = score(&a)?;
                    if s < best {
                        best = s;
                        best_set = a;
                        picks = trial;
                        improved = true;
                    }
                }
            }
        }
    }
    Ok(best_set)
}

fn tame_from(g: &RootedSignedGraph, base: TreeDecomposition, budget: &mut Budget) -> Result<TameOcpDecomposition> {
    let adj = base.neighbors();
    let protectors = (0..base.node_count())
        .map(|t| choose_protector(g, &base, &adj, t, &BTreeSet::new(), budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(TameOcpDecomposition { base, protectors })
}

/// Tame decomposition: the better of the single bag with α = ∅ and a
/// min-degree decomposition with chosen protectors. The single bag is only
/// tried up to [`SINGLE_BAG_MAX_VERTICES`] vertices.
pub fn tame_heuristic(g: &RootedSignedGraph) -> Result<TameOcpDecomposition> {
    tame_heuristic_budget(g, &mut Budget::new(DEFAULT_BUDGET))
}

pub(crate) fn tame_heuristic_budget(g: &RootedSignedGraph, budget: &mut Budget) -> Result<TameOcpDecomposition> {
    if g.vertex_count() > SINGLE_BAG_MAX_VERTICES {
        return tame_from(g, min_degree_decomposition(g), budget);
    }
    let single = TameOcpDecomposition {
        base: TreeDecomposition::single(g.vertices().clone()),
        protectors: vec![BTreeSet::new()],
    };
    let single_w = ocp_exact(g)?;
    if single_w == 0 {
        return Ok(single);
    }
    let cand = tame_from(g, min_degree_decomposition(g), budget)?;
    if protected_width(&cand.base, &cand.protectors, g)? < single_w {
        Ok(cand)
    } else {
        Ok(single)
    }
}

/// Smallest subtree containing `targets`.
fn steiner_subtree(base: &TreeDecomposition, targets: &BTreeSet<Node>) -> BTreeSet<Node> {
    if targets.is_empty() {
        return BTreeSet::new();
    }
    let mut keep: BTreeSet<Node> = (0..base.node_count()).collect();
    let adj = base.neighbors();
    loop {
        let leaf = keep
            .iter()
            .copied()
            .find(|&t| !targets.contains(&t) && adj[t].iter().filter(|s| keep.contains(s)).count() <= 1);
        match leaf {
            Some(t) => {
                keep.remove(&t);
            }
            None => return keep,
        }
    }
}

fn tdm_from_tree(g: &RootedSignedGraph, base: TreeDecomposition, budget: &mut Budget) -> Result<TdmDecomposition> {
    let targets: BTreeSet<Node> = g
        .roots()
        .iter()
        .map(|r| (0..base.node_count()).find(|&t| base.bags[t].contains(r)).expect("valid decomposition"))
        .collect();
    let strong = steiner_subtree(&base, &targets);
    let adj = base.neighbors();
    let mut protectors = Vec::with_capacity(base.node_count());
    for t in 0..base.node_count() {
        let forced: BTreeSet<Vertex> = base.bags[t].intersection(g.roots()).copied().collect();
        if strong.contains(&t) {
            let mut a = forced;
            for &s in &adj[t] {
                a.extend(base.adhesion(t, s));
            }
            protectors.push(a);
        } else {
            protectors.push(choose_protector(g, &base, &adj, t, &forced, budget)?);
        }
    }
    Ok(TdmDecomposition { base, protectors, strong })
}

/// Output of [`decompose_heuristic`].
#[derive(Clone, Debug)]
pub struct HeuristicTdm {
    pub decomposition: TdmDecomposition,
    pub width: usize,
    /// True when the budget ran out before every candidate was scored.
    pub exhausted: bool,
}

/// Best-effort TDM decomposition. Candidates: the single bag with α = K
/// (when at most [`SINGLE_BAG_MAX_VERTICES`] vertices are not roots),
/// min-degree decompositions (one by id order, the rest with seeded random
/// tie-breaks) with J spanning the roots, and the composition of
/// [`kfree_heuristic`] with tame leaf decompositions. The narrowest one
/// after bag compression wins.
pub fn decompose_heuristic(g: &RootedSignedGraph, budget: usize, seed: u64) -> Result<HeuristicTdm> {
    let mut budget = Budget::new(budget);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cands: Vec<TdmDecomposition> = Vec::new();

    let k = g.roots().clone();
    if g.vertex_count() - k.len() <= SINGLE_BAG_MAX_VERTICES {
        cands.push(TdmDecomposition {
            base: TreeDecomposition::single(g.vertices().clone()),
            protectors: vec![k],
            strong: BTreeSet::from([0]),
        });
    }

    let adj = simple_adjacency(g);
    let restarts = 1 + (budget.left / 500).min(4);
    for i in 0..restarts {
        let order = if i == 0 {
            min_degree_order::<ChaCha8Rng>(&adj, None)
        } else {
            min_degree_order(&adj, Some(&mut rng))
        };
        let base = compress_tree(&elimination_decomposition(&adj, &order));
        cands.push(tdm_from_tree(g, base, &mut budget)?);
    }

    let kf = kfree_heuristic(g);
    let mut leaves = BTreeMap::new();
    for j in 0..kf.base.node_count() {
        let part: BTreeSet<Vertex> = kf.base.bags[j].intersection(&kf.free).copied().collect();
        if !part.is_empty() {
            leaves.insert(j, tame_heuristic_budget(&g.induced(&part), &mut budget)?);
        }
    }
    cands.push(compose_tdm(g, &kf, &leaves)?);

    let mut best: Option<(usize, usize, TdmDecomposition)> = None;
    for c in cands {
        let c = compress_tdm(&c);
        let w = protected_width(&c.base, &c.protectors, g)?;
        let key = (w, c.base.node_count());
        if best.as_ref().is_none_or(|(bw, bn, _)| key < (*bw, *bn)) {
            best = Some((key.0, key.1, c));
        }
    }
    let (width, _, decomposition) = best.unwrap();
    Ok(HeuristicTdm { decomposition, width, exhausted: budget.exhausted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::validate::{kfree_width, tame_width, tdm_width, validate_tdm};
    use crate::sgraph::Parity;

    #[test]
    fn forest_width_zero() {
        let mut g = RootedSignedGraph::with_vertices(5);
        for (u, v) in [(0, 1), (1, 2), (1, 3)] {
            g.add_edge(u, v, Parity::Odd).unwrap();
        }
        let h = decompose_heuristic(&g, DEFAULT_BUDGET, 0).unwrap();
        assert!(validate_tdm(&h.decomposition, &g).is_empty());
        assert_eq!(h.width, 0);
    }

    #[test]
    fn odd_triangle_width_one() {
        let mut g = RootedSignedGraph::with_vertices(3);
        for (u, v) in [(0, 1), (1, 2), (2, 0)] {
            g.add_edge(u, v, Parity::Odd).unwrap();
        }
        let h = decompose_heuristic(&g, DEFAULT_BUDGET, 0).unwrap();
        assert!(h.width <= 1);
        assert_eq!(tdm_width(&h.decomposition, &g).unwrap(), h.width);
        assert_eq!(tame_width(&tame_heuristic(&g).unwrap(), &g).unwrap(), 1);
    }

    #[test]
    fn rooted_grid_like() {
        let mut g = RootedSignedGraph::with_vertices(9);
        for i in 0..3 {
            for j in 0..3 {
                let v = 3 * i + j;
                if j < 2 {
                    g.add_edge(v, v + 1, Parity::Even).unwrap();
                }
                if i < 2 {
                    g.add_edge(v, v + 3, Parity::Odd).unwrap();
                }
            }
        }
        g.set_roots([0, 1, 2]).unwrap();
        let h = decompose_heuristic(&g, DEFAULT_BUDGET, 7).unwrap();
        assert!(validate_tdm(&h.decomposition, &g).is_empty());
        let k = kfree_heuristic(&g);
        assert!(kfree_width(&k, &g).unwrap() >= 1);
    }

    #[test]
    fn large_graph_skips_single_bag() {
        // all-odd 4 × 9 cylinder with chords: exact packing on the whole graph is slow
        let (g, _) = crate::grids::make_parity_handle(3).unwrap();
        let h = decompose_heuristic(&g, 200, 0).unwrap();
        assert!(validate_tdm(&h.decomposition, &g).is_empty());
        assert!(h.decomposition.base.node_count() > 1);
        let t = tame_heuristic(&g).unwrap();
        assert!(t.base.node_count() > 1);
    }
}
