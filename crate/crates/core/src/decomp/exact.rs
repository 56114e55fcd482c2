//! Exact K-free treewidth by dynamic programming over vertex subsets.
//!
//! For a fixed free set L the best width is the treewidth of the torso of
//! V ∖ L, which the classic elimination recurrence
//! `TW(X) = min_{v ∉ X} max(|Q(X, v)|, TW(X ∪ {v}))`, `TW(V) = −1`,
//! evaluates at X = L. Here Q(X, v) is the set of vertices outside X ∪ {v}
//! reachable from v through X.

use std::collections::BTreeSet;

use super::elim::kfree_from_free_set;
use super::types::KFreeDecomposition;
use crate::error::{Error, Result};
use crate::sgraph::{RootedSignedGraph, Vertex};

pub const EXACT_KFREE_MAX_VERTICES: usize = 16;

struct Table {
    ids: Vec<Vertex>,
    tw: Vec<i8>,
    choice: Vec<u8>,
}

fn q_size(adj: &[u32], x: u32, v: usize) -> u32 {
    let mut inside = adj[v] & x;
    let mut frontier = inside;
    while frontier != 0 {
        let i = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[i] & x & !inside;
        inside |= fresh;
        frontier |= fresh;
    }
    let mut reach = adj[v];
    let mut rest = inside;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        reach |= adj[i];
    }
    (reach & !x & !(1 << v)).count_ones()
}

fn table(g: &RootedSignedGraph) -> Result<Table> {
    let ids: Vec<Vertex> = g.vertices().iter().copied().collect();
    let n = ids.len();
    if n > EXACT_KFREE_MAX_VERTICES {
        return Err(Error::limit("vertex count for exact K-free treewidth", EXACT_KFREE_MAX_VERTICES as u128));
    }
    let index = |v: Vertex| ids.binary_search(&v).unwrap();
    let mut adj = vec![0u32; n];
    for e in g.edges() {
        let (a, b) = (index(e.u), index(e.v));
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let size = 1usize << n;
    let mut tw = vec![i8::MAX; size];
    let mut choice = vec![0u8; size];
    tw[full as usize] = -1;
    for x in (0..full).rev() {
        let mut best = i8::MAX;
        let mut arg = 0u8;
        for v in 0..n {
            if x >> v & 1 == 1 {
                continue;
            }
            let val = (q_size(&adj, x, v) as i8).max(tw[(x | 1 << v) as usize]);
            if val < best {
                best = val;
                arg = v as u8;
            }
        }
        tw[x as usize] = best;
        choice[x as usize] = arg;
    }
    Ok(Table { ids, tw, choice })
}

fn best_free_mask(g: &RootedSignedGraph, t: &Table) -> (u32, i8) {
    let n = t.ids.len();
    let roots: u32 = (0..n).filter(|&i| g.is_root(t.ids[i])).fold(0, |m, i| m | 1 << i);
    let allowed = !roots & if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    // enumerate subsets of `allowed`, keeping the smallest mask among minima
    let mut best = (0u32, t.tw[0]);
    let mut sub = allowed;
    loop {
        let val = t.tw[sub as usize];
        if val < best.1 || (val == best.1 && sub < best.0) {
            best = (sub, val);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & allowed;
    }
    best
}

/// tw_K(G, K) with K = the graph's roots.
pub fn exact_kfree_tw(g: &RootedSignedGraph) -> Result<usize> {
    let t = table(g)?;
    Ok(best_free_mask(g, &t).1.max(0) as usize)
}

/// An optimal K-free decomposition together with its width.
pub fn exact_kfree_decomposition(g: &RootedSignedGraph) -> Result<(usize, KFreeDecomposition)> {
    let t = table(g)?;
    let (mask, val) = best_free_mask(g, &t);
    let n = t.ids.len();
    let free: BTreeSet<Vertex> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| t.ids[i]).collect();
    let mut order = Vec::new();
    let mut x = mask;
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    while x != full {
        let v = t.choice[x as usize] as usize;
        order.push(t.ids[v]);
        x |= 1 << v;
    }
    Ok((val.max(0) as usize, kfree_from_free_set(g, &free, &order)))
}
