use std::collections::BTreeMap;

use super::graph::{Edge, EdgeId, Parity, RootedSignedGraph, Vertex};

/// Where a subdivided edge went.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdividedEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub parity: Parity,
    pub interior: Vec<Vertex>,
    /// Edges of the replacing path from `u` to `v`.
    pub edges: Vec<EdgeId>,
}

/// Original edge id → replacing path.
pub type PathMap = BTreeMap<EdgeId, SubdividedEdge>;

/// Replaces every even edge `uv` by an odd path `u–x–v`.
///
/// The first path edge keeps the original id; new vertex and edge ids are
/// allocated past the current maxima in edge-id order. The result is
/// all-odd and every cycle keeps its parity.
pub fn subdivide_even_edges(g: &RootedSignedGraph) -> (RootedSignedGraph, PathMap) {
    let mut next_v = g.next_vertex_id();
    let mut next_e = g.next_edge_id();
    let mut vertices: Vec<Vertex> = g.vertices().iter().copied().collect();
    let mut edges = Vec::new();
    let mut map = PathMap::new();
    for e in g.edges() {
        if e.parity.is_odd() {
            edges.push(*e);
            continue;
        }
        let x = next_v;
        next_v += 1;
        let second = next_e;
        next_e += 1;
        vertices.push(x);
        edges.push(Edge::new(e.id, e.u, x, Parity::Odd));
        edges.push(Edge::new(second, x, e.v, Parity::Odd));
        map.insert(
            e.id,
            SubdividedEdge { u: e.u, v: e.v, parity: e.parity, interior: vec![x], edges: vec![e.id, second] },
        );
    }
    let out = RootedSignedGraph::new(vertices, edges, g.roots().iter().copied())
        .expect("subdivision of a valid graph is valid");
    (out, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sgraph::cycles::cycle_parity;
    use Parity::{Even, Odd};

    #[test]
    fn all_odd_unchanged() {
        let mut g = RootedSignedGraph::with_vertices(3);
        g.add_edge(0, 1, Odd).unwrap();
        g.add_edge(1, 2, Odd).unwrap();
        let (h, map) = subdivide_even_edges(&g);
        assert_eq!(h, g);
        assert!(map.is_empty());
    }

    #[test]
    fn single_even_edge() {
        let mut g = RootedSignedGraph::with_vertices(2);
        g.add_edge(0, 1, Even).unwrap();
        let (h, map) = subdivide_even_edges(&g);
        assert_eq!(h.vertex_count(), 3);
        assert!(h.edges().all(|e| e.parity == Odd));
        assert_eq!(map[&0].interior, vec![2]);
        assert_eq!(h.edge(0).unwrap().ends(), (0, 2));
        assert_eq!(h.edge(1).unwrap().ends(), (1, 2));
    }

    #[test]
    fn four_cycle_two_even() {
        let mut g = RootedSignedGraph::with_vertices(4);
        for (i, p) in [Even, Odd, Even, Odd].into_iter().enumerate() {
            g.add_edge(i, (i + 1) % 4, p).unwrap();
        }
        let (h, map) = subdivide_even_edges(&g);
        assert_eq!(h.vertex_count(), 6);
        let cycle: Vec<EdgeId> = [0, 1, 2, 3]
            .iter()
            .flat_map(|id| map.get(id).map(|s| s.edges.clone()).unwrap_or_else(|| vec![*id]))
            .collect();
        assert_eq!(cycle.len(), 6);
        assert_eq!(cycle_parity(&h, &cycle).unwrap(), Even);
    }

    #[test]
    fn contraction_recovers_original() {
        let mut g = RootedSignedGraph::with_vertices(3);
        g.add_edge(0, 1, Even).unwrap();
        g.add_edge(1, 2, Odd).unwrap();
        g.add_edge(0, 2, Even).unwrap();
        g.add_root(2).unwrap();
        let (mut h, map) = subdivide_even_edges(&g);
        for s in map.values() {
            h = h.shift_at(s.interior[0]).unwrap();
            h = h.contract_even_edge(s.edges[1], s.v).unwrap();
        }
        assert_eq!(h, g);
    }
}
