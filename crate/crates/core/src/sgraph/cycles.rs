use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::graph::{EdgeId, Parity, RootedSignedGraph, Vertex};
use crate::error::{Error, Result};

/// Vertex sequence of the simple cycle traced by `cycle`, starting at the
/// vertex where the first edge leaves the last one.
pub fn cycle_vertices(g: &RootedSignedGraph, cycle: &[EdgeId]) -> Result<Vec<Vertex>> {
    if cycle.len() < 2 {
        return Err(Error::NotACycle(format!("{} edge(s)", cycle.len())));
    }
    let edges = cycle
        .iter()
        .map(|&id| g.edge(id).copied().ok_or(Error::UnknownEdge(id)))
        .collect::<Result<Vec<_>>>()?;
    let distinct: BTreeSet<EdgeId> = cycle.iter().copied().collect();
    if distinct.len() != cycle.len() {
        return Err(Error::NotACycle("repeated edge".into()));
    }
    let first = edges[0];
    let second = edges[1];
    let start = if cycle.len() > 2 && second.touches(first.u) && !second.touches(first.v) {
        first.v
    } else {
        first.u
    };
    let mut cur = start;
    let mut seen = Vec::with_capacity(cycle.len());
    for e in &edges {
        seen.push(cur);
        cur = e
            .other(cur)
            .ok_or_else(|| Error::NotACycle(format!("edge {} does not continue the walk at {}", e.id, cur)))?;
    }
    if cur != start {
        return Err(Error::NotACycle("walk is not closed".into()));
    }
    let uniq: BTreeSet<Vertex> = seen.iter().copied().collect();
    if uniq.len() != seen.len() {
        return Err(Error::NotACycle("walk repeats a vertex".into()));
    }
    Ok(seen)
}

/// Sum of the labels along a simple cycle, mod 2.
pub fn cycle_parity(g: &RootedSignedGraph, cycle: &[EdgeId]) -> Result<Parity> {
    cycle_vertices(g, cycle)?;
    Ok(cycle.iter().map(|id| g.edge(*id).expect("checked").parity).sum())
}

/// Sum of labels along an edge list with no structural checks.
pub fn path_parity(g: &RootedSignedGraph, edges: &[EdgeId]) -> Result<Parity> {
    let mut p = Parity::Even;
    for &id in edges {
        p = p + g.edge(id).ok_or(Error::UnknownEdge(id))?.parity;
    }
    Ok(p)
}

/// Decides whether `to`'s signing is a shifting of `from`'s.
///
/// Returns the shift set turning `from` into `to` when one exists. Built
/// from a BFS spanning forest of each component: tree edges fix the shift
/// bits, every non-tree edge is then checked.
pub fn shifting_equivalent(
    from: &RootedSignedGraph,
    to: &RootedSignedGraph,
) -> Result<Option<BTreeSet<Vertex>>> {
    if !from.same_underlying(to) {
        return Err(Error::GraphMismatch);
    }
    let adj = from.adjacency();
    let mut shift: BTreeMap<Vertex, Parity> = BTreeMap::new();
    for &root in from.vertices() {
        if shift.contains_key(&root) {
            continue;
        }
        shift.insert(root, Parity::Even);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let sx = shift[&x];
            for id in &adj[&x] {
                let e = from.edge(*id).expect("adjacency");
                let y = e.other(x).expect("incident");
                if shift.contains_key(&y) {
                    continue;
                }
                let target = to.edge(*id).expect("same underlying").parity;
                shift.insert(y, sx + e.parity + target);
                queue.push_back(y);
            }
        }
    }
    for e in from.edges() {
        let target = to.edge(e.id).expect("same underlying").parity;
        if e.parity + shift[&e.u] + shift[&e.v] != target {
            return Ok(None);
        }
    }
    Ok(Some(
        shift.into_iter().filter(|(_, p)| p.is_odd()).map(|(v, _)| v).collect(),
    ))
}

/// True iff every cycle is even.
pub fn is_balanced(g: &RootedSignedGraph) -> bool {
    shifting_equivalent(g, &g.with_uniform_parity(Parity::Even))
        .expect("same graph")
        .is_some()
}
