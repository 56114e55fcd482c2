use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// Edge label in Z_2.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::iter::Sum for Parity {
    fn sum<I: Iterator<Item = Parity>>(iter: I) -> Parity {
        iter.fold(Parity::Even, |a, b| a + b)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: Vertex,
    pub v: Vertex,
    pub parity: Parity,
}

impl Edge {
    pub fn new(id: EdgeId, u: Vertex, v: Vertex, parity: Parity) -> Self {
        Edge { id, u, v, parity }
    }

    pub fn touches(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(&self, x: Vertex) -> Option<Vertex> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }

    /// Endpoints in increasing order.
    pub fn ends(&self) -> (Vertex, Vertex) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// A multigraph with Z_2 edge labels and a distinguished root set.
///
/// Loops are rejected at construction. Vertex and edge ids are opaque
/// integers; every iteration order is sorted by id.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RootedSignedGraph {
    vertices: BTreeSet<Vertex>,
    edges: BTreeMap<EdgeId, Edge>,
    roots: BTreeSet<Vertex>,
}

impl RootedSignedGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
        roots: impl IntoIterator<Item = Vertex>,
    ) -> Result<Self> {
        let mut g = RootedSignedGraph {
            vertices: vertices.into_iter().collect(),
            ..Default::default()
        };
        for e in edges {
            g.insert_edge(e)?;
        }
        for r in roots {
            g.add_root(r)?;
        }
        Ok(g)
    }

    /// Graph on vertices `0..n` with no edges and no roots.
    pub fn with_vertices(n: usize) -> Self {
        RootedSignedGraph {
            vertices: (0..n).collect(),
            ..Default::default()
        }
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.vertices.insert(v);
    }

    /// Adds an edge with the next free id and returns that id.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex, parity: Parity) -> Result<EdgeId> {
        let id = self.next_edge_id();
        self.insert_edge(Edge::new(id, u, v, parity))?;
        Ok(id)
    }

    pub fn insert_edge(&mut self, e: Edge) -> Result<()> {
        if e.u == e.v {
            return Err(Error::Graph(format!("edge {} is a loop at vertex {}", e.id, e.u)));
        }
        for x in [e.u, e.v] {
            if !self.vertices.contains(&x) {
                return Err(Error::Graph(format!("edge {} uses unknown vertex {}", e.id, x)));
            }
        }
        if self.edges.contains_key(&e.id) {
            return Err(Error::Graph(format!("duplicate edge id {}", e.id)));
        }
        self.edges.insert(e.id, e);
        Ok(())
    }

    pub fn add_root(&mut self, r: Vertex) -> Result<()> {
        if !self.vertices.contains(&r) {
            return Err(Error::Graph(format!("root {r} is not a vertex")));
        }
        self.roots.insert(r);
        Ok(())
    }

    pub fn set_roots(&mut self, roots: impl IntoIterator<Item = Vertex>) -> Result<()> {
        self.roots.clear();
        for r in roots {
            self.add_root(r)?;
        }
        Ok(())
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn roots(&self) -> &BTreeSet<Vertex> {
        &self.roots
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.values()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn is_root(&self, v: Vertex) -> bool {
        self.roots.contains(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn next_vertex_id(&self) -> Vertex {
        self.vertices.last().map_or(0, |v| v + 1)
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.edges.keys().last().map_or(0, |e| e + 1)
    }

    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.values().filter(move |e| e.touches(v))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incident(v).count()
    }

    /// Incidence lists keyed by vertex, each sorted by edge id.
    pub fn adjacency(&self) -> BTreeMap<Vertex, Vec<EdgeId>> {
        let mut adj: BTreeMap<Vertex, Vec<EdgeId>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in self.edges.values() {
            adj.get_mut(&e.u).expect("endpoint").push(e.id);
            adj.get_mut(&e.v).expect("endpoint").push(e.id);
        }
        adj
    }

    /// Simple neighbourhood (parallel edges collapsed).
    pub fn neighbors(&self) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
        let mut nb: BTreeMap<Vertex, BTreeSet<Vertex>> =
            self.vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for e in self.edges.values() {
            nb.get_mut(&e.u).expect("endpoint").insert(e.v);
            nb.get_mut(&e.v).expect("endpoint").insert(e.u);
        }
        nb
    }

    /// Flips the parity of every edge incident to `v`.
    pub fn shift_at(&self, v: Vertex) -> Result<Self> {
        if !self.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let mut g = self.clone();
        for e in g.edges.values_mut() {
            if e.touches(v) {
                e.parity = e.parity.flip();
            }
        }
        Ok(g)
    }

    /// Shifts at every vertex of `set`. An edge with both ends in the set
    /// is flipped twice.
    pub fn shift_set<'a>(&self, set: impl IntoIterator<Item = &'a Vertex>) -> Result<Self> {
        let set: BTreeSet<Vertex> = set.into_iter().copied().collect();
        if let Some(&v) = set.iter().find(|v| !self.has_vertex(**v)) {
            return Err(Error::UnknownVertex(v));
        }
        let mut g = self.clone();
        for e in g.edges.values_mut() {
            if set.contains(&e.u) != set.contains(&e.v) {
                e.parity = e.parity.flip();
            }
        }
        Ok(g)
    }

    /// Same multigraph and roots, every edge labelled `p` (γ₀ or γ₁).
    pub fn with_uniform_parity(&self, p: Parity) -> Self {
        let mut g = self.clone();
        for e in g.edges.values_mut() {
            e.parity = p;
        }
        g
    }

    pub fn with_parities(&self, mut f: impl FnMut(&Edge) -> Parity) -> Self {
        let mut g = self.clone();
        for e in g.edges.values_mut() {
            e.parity = f(e);
        }
        g
    }

    /// Induced subgraph G[set]; roots are restricted to the set.
    pub fn induced(&self, set: &BTreeSet<Vertex>) -> Self {
        let vertices: BTreeSet<Vertex> = self.vertices.intersection(set).copied().collect();
        let edges = self
            .edges
            .iter()
            .filter(|(_, e)| vertices.contains(&e.u) && vertices.contains(&e.v))
            .map(|(&id, &e)| (id, e))
            .collect();
        let roots = self.roots.intersection(&vertices).copied().collect();
        RootedSignedGraph { vertices, edges, roots }
    }

    pub fn without_vertex(&self, v: Vertex) -> Self {
        let mut keep = self.vertices.clone();
        keep.remove(&v);
        self.induced(&keep)
    }

    /// Contracts the even edge `id`, merging its other endpoint into `into`.
    ///
    /// The merged vertex is a root iff either end was. Fails if the edge is
    /// odd or if a parallel edge would become a loop.
    pub fn contract_even_edge(&self, id: EdgeId, into: Vertex) -> Result<Self> {
        let e = *self.edge(id).ok_or(Error::UnknownEdge(id))?;
        if e.parity.is_odd() {
            return Err(Error::Graph(format!("edge {id} is odd and cannot be contracted")));
        }
        let gone = e
            .other(into)
            .ok_or_else(|| Error::Graph(format!("vertex {into} is not an end of edge {id}")))?;
        let mut g = self.clone();
        g.edges.remove(&id);
        for other in g.edges.values_mut() {
            if other.u == gone {
                other.u = into;
            }
            if other.v == gone {
                other.v = into;
            }
            if other.u == other.v {
                return Err(Error::Graph(format!(
                    "contracting edge {id} turns parallel edge {} into a loop",
                    other.id
                )));
            }
        }
        g.vertices.remove(&gone);
        if g.roots.remove(&gone) {
            g.roots.insert(into);
        }
        Ok(g)
    }

    /// True iff both graphs have the same vertices and the same edge ids
    /// with the same endpoints (parities and roots may differ).
    pub fn same_underlying(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges.len() == other.edges.len()
            && self
                .edges
                .iter()
                .zip(other.edges.iter())
                .all(|((ia, a), (ib, b))| ia == ib && a.ends() == b.ends())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(p: Parity) -> RootedSignedGraph {
        let mut g = RootedSignedGraph::with_vertices(3);
        g.add_edge(0, 1, p).unwrap();
        g.add_edge(1, 2, p).unwrap();
        g.add_edge(0, 2, p).unwrap();
        g
    }

    #[test]
    fn loops_rejected() {
        let mut g = RootedSignedGraph::with_vertices(2);
        assert!(g.add_edge(1, 1, Parity::Odd).is_err());
        assert!(g.add_edge(0, 5, Parity::Odd).is_err());
        assert!(g.add_root(7).is_err());
    }

    #[test]
    fn shift_odd_triangle_at_a() {
        let g = triangle(Parity::Odd).shift_at(0).unwrap();
        let p: Vec<Parity> = g.edges().map(|e| e.parity).collect();
        // ab, bc, ac
        assert_eq!(p, vec![Parity::Even, Parity::Odd, Parity::Even]);
    }

    #[test]
    fn shift_is_involution() {
        let g = triangle(Parity::Odd);
        assert_eq!(g.shift_at(2).unwrap().shift_at(2).unwrap(), g);
        assert!(matches!(g.shift_at(9), Err(Error::UnknownVertex(9))));
    }

    #[test]
    fn shift_path_center() {
        let mut g = RootedSignedGraph::with_vertices(3);
        g.add_edge(0, 1, Parity::Even).unwrap();
        g.add_edge(1, 2, Parity::Even).unwrap();
        let s = g.shift_at(1).unwrap();
        assert!(s.edges().all(|e| e.parity.is_odd()));
    }

    #[test]
    fn contraction_rules() {
        let mut g = RootedSignedGraph::with_vertices(3);
        let a = g.add_edge(0, 1, Parity::Even).unwrap();
        let b = g.add_edge(1, 2, Parity::Odd).unwrap();
        g.add_root(1).unwrap();
        assert!(g.contract_even_edge(b, 1).is_err());
        let h = g.contract_even_edge(a, 0).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert!(h.is_root(0));
        assert_eq!(h.edge(b).unwrap().ends(), (0, 2));

        let mut par = RootedSignedGraph::with_vertices(2);
        let e = par.add_edge(0, 1, Parity::Even).unwrap();
        par.add_edge(0, 1, Parity::Even).unwrap();
        assert!(par.contract_even_edge(e, 0).is_err());
    }
}
