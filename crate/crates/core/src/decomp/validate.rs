//! Clause-by-clause validation and width formulas.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use super::types::*;
use crate::error::{Error, Result};
use crate::sgraph::{ocp_exact, EdgeId, RootedSignedGraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("tree: {0}")]
    TreeShape(String),
    #[error("bag-vertex: node {node} holds unknown vertex {vertex}")]
    UnknownBagVertex { node: Node, vertex: Vertex },
    #[error("cover-vertex: vertex {0} is in no bag")]
    VertexUncovered(Vertex),
    #[error("cover-edge: no bag holds both ends of edge {0}")]
    EdgeUncovered(EdgeId),
    #[error("connectivity: nodes holding vertex {0} do not induce a subtree")]
    Disconnected(Vertex),
    #[error("free-root: free vertex {0} is a root")]
    FreeRoot(Vertex),
    #[error("free-vertex: free set names unknown vertex {0}")]
    FreeUnknown(Vertex),
    #[error("free-unique: free vertex {vertex} lies in {count} bags")]
    FreeNotUnique { vertex: Vertex, count: usize },
    #[error("free-leaf: free vertex {vertex} lies in non-leaf node {node}")]
    FreeNotLeaf { vertex: Vertex, node: Node },
    #[error("shape: {0}")]
    Shape(String),
    #[error("protector-subset: protector of node {node} holds {vertex} outside its bag")]
    ProtectorNotSubset { node: Node, vertex: Vertex },
    #[error("protector-tame: adhesion of nodes {node}-{neighbor} minus the protector of {node} has {size} vertices")]
    NotTame { node: Node, neighbor: Node, size: usize },
    #[error("protector-root: root {vertex} in bag {node} is not protected")]
    RootUnprotected { node: Node, vertex: Vertex },
    #[error("protector-strong: strong node {node} leaves adhesion with {neighbor} unprotected")]
    NotStrong { node: Node, neighbor: Node },
    #[error("strong-node: J names unknown node {0}")]
    StrongUnknown(Node),
    #[error("strong-subtree: J does not induce a subtree")]
    StrongNotSubtree,
    #[error("strong-cover: root {0} lies in no bag of J")]
    RootOutsideStrong(Vertex),
}

impl Violation {
    /// Name of the violated clause.
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::TreeShape(_) => "tree",
            Violation::UnknownBagVertex { .. } => "bag-vertex",
            Violation::VertexUncovered(_) => "cover-vertex",
            Violation::EdgeUncovered(_) => "cover-edge",
            Violation::Disconnected(_) => "connectivity",
            Violation::FreeRoot(_) => "free-root",
            Violation::FreeUnknown(_) => "free-vertex",
            Violation::FreeNotUnique { .. } => "free-unique",
            Violation::FreeNotLeaf { .. } => "free-leaf",
            Violation::Shape(_) => "shape",
            Violation::ProtectorNotSubset { .. } => "protector-subset",
            Violation::NotTame { .. } => "protector-tame",
            Violation::RootUnprotected { .. } => "protector-root",
            Violation::NotStrong { .. } => "protector-strong",
            Violation::StrongUnknown(_) => "strong-node",
            Violation::StrongNotSubtree => "strong-subtree",
            Violation::RootOutsideStrong(_) => "strong-cover",
        }
    }
}

fn connected_within(adj: &[Vec<Node>], nodes: &BTreeSet<Node>) -> bool {
    let Some(&start) = nodes.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for &s in &adj[t] {
            if nodes.contains(&s) && seen.insert(s) {
                queue.push_back(s);
            }
        }
    }
    seen.len() == nodes.len()
}

fn tree_shape(td: &TreeDecomposition) -> Option<Violation> {
    let n = td.node_count();
    if n == 0 {
        return Some(Violation::TreeShape("tree has no nodes".into()));
    }
    let mut seen_edges = BTreeSet::new();
    for &(a, b) in &td.tree_edges {
        if a >= n || b >= n {
            return Some(Violation::TreeShape(format!("edge {a}-{b} names a node outside 0..{n}")));
        }
        if a == b {
            return Some(Violation::TreeShape(format!("loop at node {a}")));
        }
        if !seen_edges.insert((a.min(b), a.max(b))) {
            return Some(Violation::TreeShape(format!("edge {a}-{b} repeated")));
        }
    }
    if td.tree_edges.len() + 1 != n {
        return Some(Violation::TreeShape(format!("{} edges on {n} nodes", td.tree_edges.len())));
    }
    if !connected_within(&td.neighbors(), &(0..n).collect()) {
        return Some(Violation::TreeShape("tree is disconnected".into()));
    }
    None
}

/// (T, β) clauses: shape, bag vertices, vertex and edge cover, connectivity.
pub fn validate_tree(td: &TreeDecomposition, g: &RootedSignedGraph) -> Vec<Violation> {
    if let Some(v) = tree_shape(td) {
        return vec![v];
    }
    let mut out = Vec::new();
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if !g.has_vertex(v) {
                out.push(Violation::UnknownBagVertex { node: t, vertex: v });
            }
        }
    }
    let adj = td.neighbors();
    for &v in g.vertices() {
        let nodes: BTreeSet<Node> = (0..td.node_count()).filter(|&t| td.bags[t].contains(&v)).collect();
        if nodes.is_empty() {
            out.push(Violation::VertexUncovered(v));
        } else if !connected_within(&adj, &nodes) {
            out.push(Violation::Disconnected(v));
        }
    }
    for e in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&e.u) && b.contains(&e.v)) {
            out.push(Violation::EdgeUncovered(e.id));
        }
    }
    out
}

pub fn validate_kfree(d: &KFreeDecomposition, g: &RootedSignedGraph) -> Vec<Violation> {
    let mut out = validate_tree(&d.base, g);
    if matches!(out.first(), Some(Violation::TreeShape(_))) {
        return out;
    }
    for &v in &d.free {
        if !g.has_vertex(v) {
            out.push(Violation::FreeUnknown(v));
            continue;
        }
        if g.is_root(v) {
            out.push(Violation::FreeRoot(v));
        }
        let nodes: Vec<Node> = (0..d.base.node_count()).filter(|&t| d.base.bags[t].contains(&v)).collect();
        if nodes.len() > 1 {
            out.push(Violation::FreeNotUnique { vertex: v, count: nodes.len() });
        }
        for t in nodes {
            if !d.base.is_leaf(t) {
                out.push(Violation::FreeNotLeaf { vertex: v, node: t });
            }
        }
    }
    out
}

fn protector_clauses(
    base: &TreeDecomposition,
    protectors: &[BTreeSet<Vertex>],
    roots: Option<&BTreeSet<Vertex>>,
    out: &mut Vec<Violation>,
) {
    if protectors.len() != base.node_count() {
        out.push(Violation::Shape(format!(
            "{} protectors for {} nodes",
            protectors.len(),
            base.node_count()
        )));
        return;
    }
    let adj = base.neighbors();
    for t in 0..base.node_count() {
        for &v in &protectors[t] {
            if !base.bags[t].contains(&v) {
                out.push(Violation::ProtectorNotSubset { node: t, vertex: v });
            }
        }
        for &s in &adj[t] {
            let size = base.bags[t]
                .intersection(&base.bags[s])
                .filter(|v| !protectors[t].contains(v))
                .count();
            if size > 1 {
                out.push(Violation::NotTame { node: t, neighbor: s, size });
            }
        }
        if let Some(k) = roots {
            for &v in base.bags[t].intersection(k) {
                if !protectors[t].contains(&v) {
                    out.push(Violation::RootUnprotected { node: t, vertex: v });
                }
            }
        }
    }
}

pub fn validate_tame(d: &TameOcpDecomposition, g: &RootedSignedGraph) -> Vec<Violation> {
    let mut out = validate_tree(&d.base, g);
    if matches!(out.first(), Some(Violation::TreeShape(_))) {
        return out;
    }
    protector_clauses(&d.base, &d.protectors, None, &mut out);
    out
}

pub fn validate_tdm(d: &TdmDecomposition, g: &RootedSignedGraph) -> Vec<Violation> {
    let mut out = validate_tree(&d.base, g);
    if matches!(out.first(), Some(Violation::TreeShape(_))) {
        return out;
    }
    protector_clauses(&d.base, &d.protectors, Some(g.roots()), &mut out);
    if out.iter().any(|v| matches!(v, Violation::Shape(_))) {
        return out;
    }
    let n = d.base.node_count();
    let unknown: Vec<Node> = d.strong.iter().copied().filter(|&t| t >= n).collect();
    if !unknown.is_empty() {
        out.extend(unknown.into_iter().map(Violation::StrongUnknown));
        return out;
    }
    let adj = d.base.neighbors();
    if !connected_within(&adj, &d.strong) {
        out.push(Violation::StrongNotSubtree);
    }
    for &t in &d.strong {
        for &s in &adj[t] {
            if !d.base.bags[t].intersection(&d.base.bags[s]).all(|v| d.protectors[t].contains(v)) {
                out.push(Violation::NotStrong { node: t, neighbor: s });
            }
        }
    }
    for &r in g.roots() {
        if !d.strong.iter().any(|&t| d.base.bags[t].contains(&r)) {
            out.push(Violation::RootOutsideStrong(r));
        }
    }
    out
}

pub fn validate(d: &Decomposition, g: &RootedSignedGraph) -> Vec<Violation> {
    match d {
        Decomposition::Tree(x) => validate_tree(x, g),
        Decomposition::KFree(x) => validate_kfree(x, g),
        Decomposition::TameOcp(x) => validate_tame(x, g),
        Decomposition::Tdm(x) => validate_tdm(x, g),
    }
}

fn ensure(v: Vec<Violation>) -> Result<()> {
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidDecomposition(v))
    }
}

/// max |β(t)| − 1, floored at 0.
pub fn tree_width(td: &TreeDecomposition, g: &RootedSignedGraph) -> Result<usize> {
    ensure(validate_tree(td, g))?;
    Ok(td.max_bag().saturating_sub(1))
}

/// max{0, max |β(t) ∖ L| − 1}.
pub fn kfree_width(d: &KFreeDecomposition, g: &RootedSignedGraph) -> Result<usize> {
    ensure(validate_kfree(d, g))?;
    Ok(kfree_width_unchecked(d))
}

pub(crate) fn kfree_width_unchecked(d: &KFreeDecomposition) -> usize {
    d.base
        .bags
        .iter()
        .map(|b| b.difference(&d.free).count())
        .max()
        .unwrap_or(0)
        .saturating_sub(1)
}

/// max |α(t)| + OCP(G[β(t) ∖ α(t)]) without validation.
pub(crate) fn protected_width(
    base: &TreeDecomposition,
    protectors: &[BTreeSet<Vertex>],
    g: &RootedSignedGraph,
) -> Result<usize> {
    let mut best = 0;
    for (bag, prot) in base.bags.iter().zip(protectors) {
        let rest: BTreeSet<Vertex> = bag.difference(prot).copied().collect();
        best = best.max(prot.len() + ocp_exact(&g.induced(&rest))?);
    }
    Ok(best)
}

/// Tame width max |α(t)| + OCP(G[β(t) ∖ α(t)]).
pub fn tame_width(d: &TameOcpDecomposition, g: &RootedSignedGraph) -> Result<usize> {
    ensure(validate_tame(d, g))?;
    protected_width(&d.base, &d.protectors, g)
}

pub fn tdm_width(d: &TdmDecomposition, g: &RootedSignedGraph) -> Result<usize> {
    ensure(validate_tdm(d, g))?;
    protected_width(&d.base, &d.protectors, g)
}

pub fn width(d: &Decomposition, g: &RootedSignedGraph) -> Result<usize> {
    match d {
        Decomposition::Tree(x) => tree_width(x, g),
        Decomposition::KFree(x) => kfree_width(x, g),
        Decomposition::TameOcp(x) => tame_width(x, g),
        Decomposition::Tdm(x) => tdm_width(x, g),
    }
}
