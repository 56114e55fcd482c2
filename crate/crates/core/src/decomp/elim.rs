//! Elimination orderings and the decompositions they induce.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::types::{KFreeDecomposition, Node, TreeDecomposition};
use crate::sgraph::{RootedSignedGraph, Vertex};

pub(crate) type Adj = BTreeMap<Vertex, BTreeSet<Vertex>>;

/// Tree decomposition from the elimination game on `adj` along `order`
/// (which must list every vertex of `adj` once).
pub(crate) fn elimination_decomposition(adj: &Adj, order: &[Vertex]) -> TreeDecomposition {
    let pos: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut h = adj.clone();
    let mut bags = Vec::with_capacity(order.len());
    let mut parent: Vec<Option<Node>> = Vec::with_capacity(order.len());
    for &v in order {
        let later: BTreeSet<Vertex> = h[&v].clone();
        for &a in &later {
            let row = h.get_mut(&a).unwrap();
            row.remove(&v);
            for &b in &later {
                if a != b {
                    row.insert(b);
                }
            }
        }
        h.remove(&v);
        parent.push(later.iter().map(|x| pos[x]).min());
        let mut bag = later;
        bag.insert(v);
        bags.push(bag);
    }
    let mut tree_edges = Vec::new();
    let mut prev_root: Option<Node> = None;
    for (i, p) in parent.into_iter().enumerate() {
        match p {
            Some(p) => tree_edges.push((i, p)),
            None => {
                if let Some(r) = prev_root {
                    tree_edges.push((r, i));
                }
                prev_root = Some(i);
            }
        }
    }
    if bags.is_empty() {
        bags.push(BTreeSet::new());
    }
    TreeDecomposition { tree_edges, bags }
}

/// Greedy minimum-degree ordering; ties broken by id, or at random when
/// `rng` is given.
pub(crate) fn min_degree_order<R: Rng>(adj: &Adj, mut rng: Option<&mut R>) -> Vec<Vertex> {
    let mut h = adj.clone();
    let mut order = Vec::with_capacity(h.len());
    while !h.is_empty() {
        let best = h.values().map(BTreeSet::len).min().unwrap();
        let mut ties: Vec<Vertex> = h.iter().filter(|(_, n)| n.len() == best).map(|(&v, _)| v).collect();
        if let Some(r) = rng.as_deref_mut() {
            ties.shuffle(r);
        }
        let v = ties[0];
        let nb = h.remove(&v).unwrap();
        for &a in &nb {
            let row = h.get_mut(&a).unwrap();
            row.remove(&v);
            row.extend(nb.iter().copied().filter(|&b| b != a));
        }
        order.push(v);
    }
    order
}

pub(crate) fn simple_adjacency(g: &RootedSignedGraph) -> Adj {
    g.neighbors()
}

/// Connected components of G[set], each with its neighbourhood outside.
pub(crate) fn components_with_boundary(
    g: &RootedSignedGraph,
    set: &BTreeSet<Vertex>,
) -> Vec<(BTreeSet<Vertex>, BTreeSet<Vertex>)> {
    let nb = g.neighbors();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &s in set {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        let mut boundary = BTreeSet::new();
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &nb[&x] {
                if set.contains(&y) {
                    if seen.insert(y) {
                        comp.insert(y);
                        stack.push(y);
                    }
                } else {
                    boundary.insert(y);
                }
            }
        }
        out.push((comp, boundary));
    }
    out
}

/// Torso of V ∖ L: G[V ∖ L] plus a clique on the boundary of every
/// component of G[L].
pub(crate) fn torso(g: &RootedSignedGraph, free: &BTreeSet<Vertex>) -> Adj {
    let nb = g.neighbors();
    let mut adj: Adj = g
        .vertices()
        .iter()
        .filter(|v| !free.contains(v))
        .map(|&v| (v, nb[&v].iter().copied().filter(|w| !free.contains(w)).collect()))
        .collect();
    for (_, boundary) in components_with_boundary(g, free) {
        for &a in &boundary {
            for &b in &boundary {
                if a != b {
                    adj.get_mut(&a).unwrap().insert(b);
                }
            }
        }
    }
    adj
}

/// K-free decomposition with free set `free`: a tree decomposition of the
/// torso along `order`, plus one leaf per component C of G[L] holding
/// C ∪ N(C), hung off the node of the first-eliminated vertex of N(C).
pub(crate) fn kfree_from_free_set(
    g: &RootedSignedGraph,
    free: &BTreeSet<Vertex>,
    order: &[Vertex],
) -> KFreeDecomposition {
    let comps = components_with_boundary(g, free);
    let torso_adj = torso(g, free);
    if torso_adj.is_empty() && comps.len() == 1 {
        let bag = comps[0].0.clone();
        return KFreeDecomposition { base: TreeDecomposition::single(bag), free: free.clone() };
    }
    let mut base = elimination_decomposition(&torso_adj, order);
    let pos: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for (comp, boundary) in comps {
        let anchor = boundary.iter().map(|x| pos[x]).min().unwrap_or(0);
        let node = base.bags.len();
        let mut bag = comp;
        bag.extend(boundary);
        base.bags.push(bag);
        base.tree_edges.push((anchor, node));
    }
    KFreeDecomposition { base, free: free.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::validate::{kfree_width, tree_width};
    use crate::sgraph::Parity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cycle(n: usize) -> RootedSignedGraph {
        let mut g = RootedSignedGraph::with_vertices(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n, Parity::Even).unwrap();
        }
        g
    }

    #[test]
    fn cycle_has_width_two() {
        let g = cycle(6);
        let adj = simple_adjacency(&g);
        let order = min_degree_order::<ChaCha8Rng>(&adj, None);
        let td = elimination_decomposition(&adj, &order);
        assert_eq!(tree_width(&td, &g).unwrap(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let order = min_degree_order(&adj, Some(&mut rng));
        assert_eq!(tree_width(&elimination_decomposition(&adj, &order), &g).unwrap(), 2);
    }

    #[test]
    fn disconnected_graph_still_a_tree() {
        let mut g = RootedSignedGraph::with_vertices(4);
        g.add_edge(0, 1, Parity::Odd).unwrap();
        let adj = simple_adjacency(&g);
        let td = elimination_decomposition(&adj, &[0, 1, 2, 3]);
        assert_eq!(tree_width(&td, &g).unwrap(), 1);
    }

    #[test]
    fn free_set_leaves() {
        let mut g = cycle(5);
        g.set_roots([0]).unwrap();
        let free: BTreeSet<Vertex> = [2, 3].into();
        let order: Vec<Vertex> = vec![0, 1, 4];
        let d = kfree_from_free_set(&g, &free, &order);
        // the torso on {0, 1, 4} is a triangle
        assert_eq!(kfree_width(&d, &g).unwrap(), 2);
        let all: BTreeSet<Vertex> = [1, 2, 3, 4].into();
        let d = kfree_from_free_set(&g, &all, &[0]);
        assert_eq!(kfree_width(&d, &g).unwrap(), 0);
    }
}
