//! Exact odd cycle packing for desk-scale signed graphs.
//!
//! Minimal odd cycles (by vertex set) are enumerated by increasing length,
//! then a maximum family of pairwise disjoint ones is found by
//! branch-and-bound. Two parallel edges of different parity form an odd
//! cycle on two vertices.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::cycles::is_balanced;
use super::graph::{RootedSignedGraph, Vertex};
use crate::error::{Error, Result};

/// Largest connected piece (after pruning tree-like parts) the search accepts.
pub const OCP_MAX_VERTICES: usize = 128;

const EVEN: u8 = 0b01;
const ODD: u8 = 0b10;

/// OCP(G, γ): maximum number of pairwise vertex-disjoint odd cycles.
pub fn ocp_exact(g: &RootedSignedGraph) -> Result<usize> {
    Ok(max_odd_cycle_packing(g)?.len())
}

/// A maximum packing, each cycle given by its vertex set.
pub fn max_odd_cycle_packing(g: &RootedSignedGraph) -> Result<Vec<BTreeSet<Vertex>>> {
    let core = prune_low_degree(g);
    let mut packing = Vec::new();
    for comp in components(&core) {
        let sub = core.induced(&comp);
        if is_balanced(&sub) {
            continue;
        }
        let local = LocalGraph::new(&sub)?;
        let cycles = local.minimal_odd_cycles();
        let best = max_disjoint(&cycles);
        for mask in best {
            packing.push(local.unmask(mask));
        }
    }
    packing.sort();
    Ok(packing)
}

/// Repeatedly drops vertices of multidegree at most one.
fn prune_low_degree(g: &RootedSignedGraph) -> RootedSignedGraph {
    let mut keep: BTreeSet<Vertex> = g.vertices().clone();
    let mut deg: BTreeMap<Vertex, usize> = keep.iter().map(|&v| (v, 0)).collect();
    for e in g.edges() {
        *deg.get_mut(&e.u).unwrap() += 1;
        *deg.get_mut(&e.v).unwrap() += 1;
    }
    let adj = g.adjacency();
    let mut stack: Vec<Vertex> = deg.iter().filter(|(_, &d)| d <= 1).map(|(&v, _)| v).collect();
    while let Some(v) = stack.pop() {
        if !keep.remove(&v) {
            continue;
        }
        for id in &adj[&v] {
            let w = g.edge(*id).unwrap().other(v).unwrap();
            if keep.contains(&w) {
                let d = deg.get_mut(&w).unwrap();
                *d -= 1;
                if *d == 1 {
                    stack.push(w);
                }
            }
        }
    }
    g.induced(&keep)
}

pub(crate) fn components(g: &RootedSignedGraph) -> Vec<BTreeSet<Vertex>> {
    let nb = g.neighbors();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &s in g.vertices() {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &nb[&x] {
                if seen.insert(y) {
                    comp.insert(y);
                    stack.push(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

struct LocalGraph {
    ids: Vec<Vertex>,
    /// (neighbour, available parities) per local vertex, neighbours ascending.
    adj: Vec<Vec<(usize, u8)>>,
}

impl LocalGraph {
    fn new(g: &RootedSignedGraph) -> Result<Self> {
        let ids: Vec<Vertex> = g.vertices().iter().copied().collect();
        if ids.len() > OCP_MAX_VERTICES {
            return Err(Error::limit("odd cycle packing component size", OCP_MAX_VERTICES as u128));
        }
        let index: BTreeMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut pairs: BTreeMap<(usize, usize), u8> = BTreeMap::new();
        for e in g.edges() {
            let (a, b) = (index[&e.u], index[&e.v]);
            let bit = if e.parity.is_odd() { ODD } else { EVEN };
            *pairs.entry((a.min(b), a.max(b))).or_default() |= bit;
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for (&(a, b), &p) in &pairs {
            adj[a].push((b, p));
            adj[b].push((a, p));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(LocalGraph { ids, adj })
    }

    fn unmask(&self, mask: u128) -> BTreeSet<Vertex> {
        (0..self.ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.ids[i]).collect()
    }

    fn pair(&self, a: usize, b: usize) -> Option<u8> {
        self.adj[a].iter().find(|(n, _)| *n == b).map(|(_, p)| *p)
    }

    /// Vertex sets of inclusion-minimal odd cycles, shortest first.
    fn minimal_odd_cycles(&self) -> Vec<u128> {
        let n = self.ids.len();
        let mut found: Vec<u128> = Vec::new();
        let mut seen: HashSet<u128> = HashSet::new();
        for (a, list) in self.adj.iter().enumerate() {
            for &(b, p) in list {
                if a < b && p == EVEN | ODD {
                    let m = 1u128 << a | 1u128 << b;
                    if seen.insert(m) {
                        found.push(m);
                    }
                }
            }
        }
        for len in 3..=n {
            let shorter = found.len();
            for s in 0..n {
                let mut search = CycleSearch {
                    g: self,
                    start: s,
                    len,
                    shorter: &found[..shorter],
                    out: Vec::new(),
                };
                search.extend(s, 1u128 << s, EVEN, 1);
                for m in search.out {
                    if seen.insert(m) {
                        found.push(m);
                    }
                }
            }
        }
        found
    }
}

struct CycleSearch<'a> {
    g: &'a LocalGraph,
    start: usize,
    len: usize,
    shorter: &'a [u128],
    out: Vec<u128>,
}

impl CycleSearch<'_> {
    fn extend(&mut self, cur: usize, mask: u128, parities: u8, depth: usize) {
        if depth == self.len {
            if let Some(q) = self.g.pair(cur, self.start) {
                if combine(parities, q) & ODD != 0 {
                    self.out.push(mask);
                }
            }
            return;
        }
        for &(next, q) in &self.g.adj[cur] {
            if next <= self.start || mask >> next & 1 == 1 {
                continue;
            }
            let m = mask | 1u128 << next;
            if self.shorter.iter().any(|&c| c & !m == 0) {
                continue;
            }
            self.extend(next, m, combine(parities, q), depth + 1);
        }
    }
}

/// Parities reachable by concatenating a walk with parity set `p` and an
/// edge choice with parity set `q`.
fn combine(p: u8, q: u8) -> u8 {
    let mut r = 0;
    for a in 0..2 {
        for b in 0..2 {
            if p >> a & 1 == 1 && q >> b & 1 == 1 {
                r |= 1 << (a ^ b);
            }
        }
    }
    r
}

/// Maximum family of pairwise disjoint masks.
fn max_disjoint(sets: &[u128]) -> Vec<u128> {
    let mut best = greedy(sets);
    let mut chosen = Vec::new();
    branch(sets.to_vec(), &mut chosen, &mut best);
    best
}

fn greedy(sets: &[u128]) -> Vec<u128> {
    let mut order: Vec<u128> = sets.to_vec();
    order.sort_by_key(|m| (m.count_ones(), *m));
    let mut used = 0u128;
    let mut out = Vec::new();
    for m in order {
        if m & used == 0 {
            used |= m;
            out.push(m);
        }
    }
    out
}

/// Upper bound from the fractional cover y_v = 1 / (shortest cycle at v):
/// every cycle C gets sum_{v in C} y_v >= 1.
fn fractional_bound(sets: &[u128]) -> usize {
    let mut shortest = [u32::MAX; 128];
    for &m in sets {
        let len = m.count_ones();
        let mut rest = m;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            shortest[v] = shortest[v].min(len);
        }
    }
    let total: f64 = shortest.iter().filter(|&&l| l != u32::MAX).map(|&l| 1.0 / l as f64).sum();
    (total + 1e-9).floor() as usize
}

fn branch(cands: Vec<u128>, chosen: &mut Vec<u128>, best: &mut Vec<u128>) {
    if cands.is_empty() {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        return;
    }
    if chosen.len() + fractional_bound(&cands) <= best.len() {
        return;
    }
    let union = cands.iter().fold(0u128, |a, m| a | m);
    let mut pivot = 0usize;
    let mut pivot_count = usize::MAX;
    let mut rest = union;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let c = cands.iter().filter(|m| *m >> v & 1 == 1).count();
        if c < pivot_count {
            pivot = v;
            pivot_count = c;
        }
    }
    let bit = 1u128 << pivot;
    for &c in cands.iter().filter(|m| *m & bit != 0) {
        let next: Vec<u128> = cands.iter().copied().filter(|m| m & c == 0).collect();
        chosen.push(c);
        branch(next, chosen, best);
        chosen.pop();
    }
    let without: Vec<u128> = cands.into_iter().filter(|m| m & bit == 0).collect();
    branch(without, chosen, best);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sgraph::Parity::{self, Even, Odd};

    fn complete(n: usize, p: Parity) -> RootedSignedGraph {
        let mut g = RootedSignedGraph::with_vertices(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b, p).unwrap();
            }
        }
        g
    }

    #[test]
    fn forest_has_zero() {
        let mut g = RootedSignedGraph::with_vertices(6);
        for (u, v) in [(0, 1), (1, 2), (1, 3), (4, 5)] {
            g.add_edge(u, v, Odd).unwrap();
        }
        assert_eq!(ocp_exact(&g).unwrap(), 0);
        assert_eq!(ocp_exact(&RootedSignedGraph::default()).unwrap(), 0);
    }

    #[test]
    fn k4_all_odd_is_one() {
        assert_eq!(ocp_exact(&complete(4, Odd)).unwrap(), 1);
        assert_eq!(ocp_exact(&complete(4, Even)).unwrap(), 0);
    }

    #[test]
    fn two_disjoint_triangles() {
        let mut g = RootedSignedGraph::with_vertices(6);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
            g.add_edge(u, v, Odd).unwrap();
        }
        assert_eq!(ocp_exact(&g).unwrap(), 2);
        g.add_edge(2, 3, Even).unwrap();
        assert_eq!(ocp_exact(&g).unwrap(), 2);
    }

    #[test]
    fn digon_counts() {
        let mut g = RootedSignedGraph::with_vertices(4);
        g.add_edge(0, 1, Even).unwrap();
        g.add_edge(0, 1, Odd).unwrap();
        g.add_edge(2, 3, Odd).unwrap();
        g.add_edge(2, 3, Odd).unwrap();
        assert_eq!(ocp_exact(&g).unwrap(), 1);
    }

    #[test]
    fn k6_all_odd_packs_two_triangles() {
        assert_eq!(ocp_exact(&complete(6, Odd)).unwrap(), 2);
        assert_eq!(ocp_exact(&complete(5, Odd)).unwrap(), 1);
    }

    #[test]
    fn combine_table() {
        assert_eq!(combine(EVEN, ODD), ODD);
        assert_eq!(combine(ODD, ODD), EVEN);
        assert_eq!(combine(EVEN | ODD, EVEN), EVEN | ODD);
    }
}
