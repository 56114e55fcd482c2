//! Minor and subdivision models, and their checkers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use super::graph::{EdgeId, Parity, RootedSignedGraph, Vertex};
use crate::error::{Error, Result};

/// A connected subgraph of the host given by vertices and edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BranchTree {
    pub vertices: BTreeSet<Vertex>,
    pub edges: BTreeSet<EdgeId>,
}

impl BranchTree {
    pub fn single(v: Vertex) -> Self {
        BranchTree { vertices: BTreeSet::from([v]), edges: BTreeSet::new() }
    }
}

/// Witness that the guest is a signed (rooted) minor of the host: disjoint
/// branch trees, an injective edge map and the host shift set under which
/// tree edges are even and mapped edges carry the guest parity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinorModel {
    pub trees: BTreeMap<Vertex, BranchTree>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    pub shift_set: BTreeSet<Vertex>,
}

/// Witness that the host contains a subdivision of the guest.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubdivisionModel {
    pub vertex_map: BTreeMap<Vertex, Vertex>,
    /// Host edges of each path, in order from the image of the guest
    /// edge's `u` end to the image of its `v` end.
    pub path_map: BTreeMap<EdgeId, Vec<EdgeId>>,
    pub guest_shift_set: BTreeSet<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelViolation {
    #[error("guest vertex {0} has no image")]
    MissingGuestVertex(Vertex),
    #[error("model maps unknown guest vertex {0}")]
    UnknownGuestVertex(Vertex),
    #[error("guest edge {0} has no image")]
    MissingGuestEdge(EdgeId),
    #[error("model maps unknown guest edge {0}")]
    UnknownGuestEdge(EdgeId),
    #[error("unknown host vertex {0}")]
    UnknownHostVertex(Vertex),
    #[error("unknown host edge {0}")]
    UnknownHostEdge(EdgeId),
    #[error("branch tree of {0} is empty")]
    EmptyTree(Vertex),
    #[error("branch tree of {guest} uses edge {edge} leaving its vertex set")]
    TreeEdgeOutside { guest: Vertex, edge: EdgeId },
    #[error("branch set of {0} is not a tree")]
    NotATree(Vertex),
    #[error("branch trees of {a} and {b} share host vertex {host}")]
    TreesOverlap { a: Vertex, b: Vertex, host: Vertex },
    #[error("host edge {0} is the image of two guest edges")]
    EdgeMapNotInjective(EdgeId),
    #[error("host edge {host} does not join the trees of guest edge {guest}")]
    EdgeEndsWrong { guest: EdgeId, host: EdgeId },
    #[error("tree edge {host} of guest vertex {guest} is odd after shifting")]
    OddTreeEdge { guest: Vertex, host: EdgeId },
    #[error("guest edge {guest} and its image {host} differ in parity")]
    ParityMismatch { guest: EdgeId, host: EdgeId },
    #[error("branch tree of guest root {0} contains no host root")]
    RootNotCovered(Vertex),
    #[error("shift set names unknown vertex {0}")]
    UnknownShiftVertex(Vertex),
    #[error("host vertex {0} is the image of two guest vertices")]
    VertexMapNotInjective(Vertex),
    #[error("path of guest edge {0} is empty")]
    EmptyPath(EdgeId),
    #[error("path of guest edge {0} does not run between the images of its ends")]
    PathEndsWrong(EdgeId),
    #[error("path of guest edge {0} repeats a vertex")]
    PathNotSimple(EdgeId),
    #[error("paths of guest edges {a} and {b} share host vertex {host}")]
    PathsShareInterior { a: EdgeId, b: EdgeId, host: Vertex },
    #[error("paths of guest edges {a} and {b} share host edge {host}")]
    PathsShareEdge { a: EdgeId, b: EdgeId, host: EdgeId },
    #[error("interior of path {guest} passes through branch vertex {host}")]
    InteriorHitsBranchVertex { guest: EdgeId, host: Vertex },
    #[error("path of guest edge {0} has the wrong parity")]
    PathParityMismatch(EdgeId),
}

fn shifted(host: &RootedSignedGraph, id: EdgeId, shift: &BTreeSet<Vertex>) -> Parity {
    let e = host.edge(id).expect("checked edge");
    let mut p = e.parity;
    if shift.contains(&e.u) {
        p = p.flip();
    }
    if shift.contains(&e.v) {
        p = p.flip();
    }
    p
}

fn check_tree(host: &RootedSignedGraph, guest_v: Vertex, t: &BranchTree) -> std::result::Result<(), ModelViolation> {
    if t.vertices.is_empty() {
        return Err(ModelViolation::EmptyTree(guest_v));
    }
    if let Some(&x) = t.vertices.iter().find(|x| !host.has_vertex(**x)) {
        return Err(ModelViolation::UnknownHostVertex(x));
    }
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &id in &t.edges {
        let e = host.edge(id).ok_or(ModelViolation::UnknownHostEdge(id))?;
        if !t.vertices.contains(&e.u) || !t.vertices.contains(&e.v) {
            return Err(ModelViolation::TreeEdgeOutside { guest: guest_v, edge: id });
        }
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    if t.edges.len() + 1 != t.vertices.len() {
        return Err(ModelViolation::NotATree(guest_v));
    }
    let start = *t.vertices.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in adj.get(&x).into_iter().flatten() {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    if seen.len() != t.vertices.len() {
        return Err(ModelViolation::NotATree(guest_v));
    }
    Ok(())
}

/// Checks every clause of a (rooted) signed minor model.
///
/// With `rooted`, the branch tree of each guest root must also contain a
/// host root.
pub fn verify_minor_model(
    host: &RootedSignedGraph,
    guest: &RootedSignedGraph,
    m: &MinorModel,
    rooted: bool,
) -> std::result::Result<(), ModelViolation> {
    if let Some(&v) = m.shift_set.iter().find(|v| !host.has_vertex(**v)) {
        return Err(ModelViolation::UnknownShiftVertex(v));
    }
    if let Some(&v) = m.trees.keys().find(|v| !guest.has_vertex(**v)) {
        return Err(ModelViolation::UnknownGuestVertex(v));
    }
    let mut owner: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for &gv in guest.vertices() {
        let t = m.trees.get(&gv).ok_or(ModelViolation::MissingGuestVertex(gv))?;
        check_tree(host, gv, t)?;
        for &x in &t.vertices {
            if let Some(&other) = owner.get(&x) {
                return Err(ModelViolation::TreesOverlap { a: other, b: gv, host: x });
            }
            owner.insert(x, gv);
        }
        for &id in &t.edges {
            if shifted(host, id, &m.shift_set).is_odd() {
                return Err(ModelViolation::OddTreeEdge { guest: gv, host: id });
            }
        }
    }
    if let Some(&e) = m.edge_map.keys().find(|e| guest.edge(**e).is_none()) {
        return Err(ModelViolation::UnknownGuestEdge(e));
    }
    let mut used = BTreeSet::new();
    for ge in guest.edges() {
        let he_id = *m.edge_map.get(&ge.id).ok_or(ModelViolation::MissingGuestEdge(ge.id))?;
        let he = host.edge(he_id).ok_or(ModelViolation::UnknownHostEdge(he_id))?;
        if !used.insert(he_id) {
            return Err(ModelViolation::EdgeMapNotInjective(he_id));
        }
        let (ou, ov) = (owner.get(&he.u).copied(), owner.get(&he.v).copied());
        let joins = (ou == Some(ge.u) && ov == Some(ge.v)) || (ou == Some(ge.v) && ov == Some(ge.u));
        if !joins {
            return Err(ModelViolation::EdgeEndsWrong { guest: ge.id, host: he_id });
        }
        if shifted(host, he_id, &m.shift_set) != ge.parity {
            return Err(ModelViolation::ParityMismatch { guest: ge.id, host: he_id });
        }
    }
    if rooted {
        for &r in guest.roots() {
            if !m.trees[&r].vertices.iter().any(|x| host.is_root(*x)) {
                return Err(ModelViolation::RootNotCovered(r));
            }
        }
    }
    Ok(())
}

/// Vertex sequence of a host path starting at `from`.
fn walk(host: &RootedSignedGraph, from: Vertex, edges: &[EdgeId], guest_e: EdgeId) -> std::result::Result<Vec<Vertex>, ModelViolation> {
    let mut seq = vec![from];
    let mut cur = from;
    for &id in edges {
        let e = host.edge(id).ok_or(ModelViolation::UnknownHostEdge(id))?;
        cur = e.other(cur).ok_or(ModelViolation::PathEndsWrong(guest_e))?;
        seq.push(cur);
    }
    Ok(seq)
}

/// Checks injectivity, path ends, internal disjointness and that each path
/// carries the shifted guest parity.
pub fn verify_subdivision_model(
    host: &RootedSignedGraph,
    guest: &RootedSignedGraph,
    s: &SubdivisionModel,
) -> std::result::Result<(), ModelViolation> {
    if let Some(&v) = s.guest_shift_set.iter().find(|v| !guest.has_vertex(**v)) {
        return Err(ModelViolation::UnknownShiftVertex(v));
    }
    if let Some(&v) = s.vertex_map.keys().find(|v| !guest.has_vertex(**v)) {
        return Err(ModelViolation::UnknownGuestVertex(v));
    }
    let mut branch: BTreeSet<Vertex> = BTreeSet::new();
    for &gv in guest.vertices() {
        let hv = *s.vertex_map.get(&gv).ok_or(ModelViolation::MissingGuestVertex(gv))?;
        if !host.has_vertex(hv) {
            return Err(ModelViolation::UnknownHostVertex(hv));
        }
        if !branch.insert(hv) {
            return Err(ModelViolation::VertexMapNotInjective(hv));
        }
    }
    if let Some(&e) = s.path_map.keys().find(|e| guest.edge(**e).is_none()) {
        return Err(ModelViolation::UnknownGuestEdge(e));
    }
    let mut interior_owner: BTreeMap<Vertex, EdgeId> = BTreeMap::new();
    let mut edge_owner: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for ge in guest.edges() {
        let path = s.path_map.get(&ge.id).ok_or(ModelViolation::MissingGuestEdge(ge.id))?;
        if path.is_empty() {
            return Err(ModelViolation::EmptyPath(ge.id));
        }
        let seq = walk(host, s.vertex_map[&ge.u], path, ge.id)?;
        if *seq.last().unwrap() != s.vertex_map[&ge.v] {
            return Err(ModelViolation::PathEndsWrong(ge.id));
        }
        let uniq: BTreeSet<Vertex> = seq.iter().copied().collect();
        if uniq.len() != seq.len() {
            return Err(ModelViolation::PathNotSimple(ge.id));
        }
        for &x in &seq[1..seq.len() - 1] {
            if branch.contains(&x) {
                return Err(ModelViolation::InteriorHitsBranchVertex { guest: ge.id, host: x });
            }
            if let Some(&other) = interior_owner.get(&x) {
                return Err(ModelViolation::PathsShareInterior { a: other, b: ge.id, host: x });
            }
            interior_owner.insert(x, ge.id);
        }
        for &id in path {
            if let Some(&other) = edge_owner.get(&id) {
                return Err(ModelViolation::PathsShareEdge { a: other, b: ge.id, host: id });
            }
            edge_owner.insert(id, ge.id);
        }
        let mut want = ge.parity;
        if s.guest_shift_set.contains(&ge.u) {
            want = want.flip();
        }
        if s.guest_shift_set.contains(&ge.v) {
            want = want.flip();
        }
        let got: Parity = path.iter().map(|id| host.edge(*id).unwrap().parity).sum();
        if got != want {
            return Err(ModelViolation::PathParityMismatch(ge.id));
        }
    }
    Ok(())
}

/// Shift set making each listed host edge carry its target parity, if one
/// exists. Vertices not touched by a constraint are left unshifted.
pub fn solve_shift(host: &RootedSignedGraph, targets: &BTreeMap<EdgeId, Parity>) -> Option<BTreeSet<Vertex>> {
    let mut adj: BTreeMap<Vertex, Vec<(Vertex, Parity)>> = BTreeMap::new();
    for (&id, &t) in targets {
        let e = host.edge(id)?;
        let need = e.parity + t;
        adj.entry(e.u).or_default().push((e.v, need));
        adj.entry(e.v).or_default().push((e.u, need));
    }
    let mut bit: BTreeMap<Vertex, Parity> = BTreeMap::new();
    for &s in adj.keys() {
        if bit.contains_key(&s) {
            continue;
        }
        bit.insert(s, Parity::Even);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, need) in &adj[&x] {
                let want = bit[&x] + need;
                match bit.get(&y) {
                    Some(&b) if b != want => return None,
                    Some(_) => {}
                    None => {
                        bit.insert(y, want);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    Some(bit.into_iter().filter(|(_, b)| b.is_odd()).map(|(v, _)| v).collect())
}

/// Turns a subdivision model into a minor model: each path's interior joins
/// the branch tree of its `u` end, the last edge becomes the image edge.
pub fn subdivision_to_minor(
    host: &RootedSignedGraph,
    guest: &RootedSignedGraph,
    s: &SubdivisionModel,
) -> Result<MinorModel> {
    verify_subdivision_model(host, guest, s).map_err(Error::Model)?;
    let mut trees: BTreeMap<Vertex, BranchTree> =
        s.vertex_map.iter().map(|(&g, &h)| (g, BranchTree::single(h))).collect();
    let mut edge_map = BTreeMap::new();
    let mut targets = BTreeMap::new();
    for ge in guest.edges() {
        let path = &s.path_map[&ge.id];
        let seq = walk(host, s.vertex_map[&ge.u], path, ge.id).map_err(Error::Model)?;
        let tree = trees.get_mut(&ge.u).unwrap();
        for (i, &id) in path[..path.len() - 1].iter().enumerate() {
            tree.vertices.insert(seq[i + 1]);
            tree.edges.insert(id);
            targets.insert(id, Parity::Even);
        }
        let last = *path.last().unwrap();
        edge_map.insert(ge.id, last);
        targets.insert(last, ge.parity);
    }
    let shift_set = solve_shift(host, &targets)
        .ok_or(Error::Model(ModelViolation::PathParityMismatch(usize::MAX)))?;
    Ok(MinorModel { trees, edge_map, shift_set })
}

/// Odd-minor model of an unsigned graph: branch trees, edge map and a
/// 2-colouring (colours 1 and 2).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OddMinorModel {
    pub trees: BTreeMap<Vertex, BranchTree>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    pub coloring: BTreeMap<Vertex, u8>,
}

/// Odd-minor model in G → signed minor model of (H, γ₁) in (G, γ₁).
/// The shift set is colour class 2; uncoloured vertices count as colour 1.
pub fn odd_minor_to_signed(host: &RootedSignedGraph, m: &OddMinorModel) -> Result<MinorModel> {
    let color = |v: &Vertex| m.coloring.get(v).copied().unwrap_or(1);
    if let Some((v, c)) = m.coloring.iter().find(|(_, c)| **c != 1 && **c != 2) {
        return Err(Error::Coloring(format!("vertex {v} has colour {c}")));
    }
    for (gv, t) in &m.trees {
        for &id in &t.edges {
            let e = host.edge(id).ok_or(Error::UnknownEdge(id))?;
            if color(&e.u) == color(&e.v) {
                return Err(Error::Coloring(format!(
                    "tree of {gv}: edge {id} is monochromatic"
                )));
            }
        }
    }
    for (ge, he) in &m.edge_map {
        let e = host.edge(*he).ok_or(Error::UnknownEdge(*he))?;
        if color(&e.u) != color(&e.v) {
            return Err(Error::Coloring(format!("image {he} of guest edge {ge} is bichromatic")));
        }
    }
    Ok(MinorModel {
        trees: m.trees.clone(),
        edge_map: m.edge_map.clone(),
        shift_set: host.vertices().iter().copied().filter(|v| color(v) == 2).collect(),
    })
}

/// Inverse of [`odd_minor_to_signed`]: shifted vertices get colour 2.
pub fn signed_to_odd_minor(host: &RootedSignedGraph, m: &MinorModel) -> OddMinorModel {
    OddMinorModel {
        trees: m.trees.clone(),
        edge_map: m.edge_map.clone(),
        coloring: host
            .vertices()
            .iter()
            .map(|&v| (v, if m.shift_set.contains(&v) { 2 } else { 1 }))
            .collect(),
    }
}
