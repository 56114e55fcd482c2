//! Conversions between decomposition kinds.

use std::collections::{BTreeMap, BTreeSet};

use super::types::*;
use super::validate::{validate_kfree, validate_tame, validate_tdm};
use crate::error::{Error, Result};
use crate::sgraph::{PathMap, RootedSignedGraph, Vertex};

fn ensure(v: Vec<super::Violation>) -> Result<()> {
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidDecomposition(v))
    }
}

/// Glues tame decompositions of the free parts of a K-free decomposition's
/// leaves onto its tree.
///
/// J is the whole K-free tree with β(j) = α(j) = β_J(j) ∖ L; each T_j hangs
/// off leaf j by its node 0, with the leaf's non-free part added to every
/// bag and protector. Leaves whose bag holds no free vertex may be omitted
/// from `leaf_ocp`.
pub fn compose_tdm(
    g: &RootedSignedGraph,
    kfree: &KFreeDecomposition,
    leaf_ocp: &BTreeMap<Node, TameOcpDecomposition>,
) -> Result<TdmDecomposition> {
    ensure(validate_kfree(kfree, g))?;
    let base = &kfree.base;
    let n = base.node_count();
    for &j in leaf_ocp.keys() {
        if j >= n || !base.is_leaf(j) {
            return Err(Error::Decomposition(format!("leaf decomposition given for non-leaf node {j}")));
        }
    }
    let mut bags: Vec<BTreeSet<Vertex>> =
        base.bags.iter().map(|b| b.difference(&kfree.free).copied().collect()).collect();
    let mut protectors = bags.clone();
    let mut tree_edges = base.tree_edges.clone();
    for j in 0..n {
        let part: BTreeSet<Vertex> = base.bags[j].intersection(&kfree.free).copied().collect();
        let Some(sub) = leaf_ocp.get(&j) else {
            if part.is_empty() {
                continue;
            }
            return Err(Error::Decomposition(format!("leaf {j} holds free vertices but has no decomposition")));
        };
        ensure(validate_tame(sub, &g.induced(&part)))?;
        let offset = bags.len();
        let keep = bags[j].clone();
        for (b, a) in sub.base.bags.iter().zip(&sub.protectors) {
            bags.push(b.union(&keep).copied().collect());
            protectors.push(a.union(&keep).copied().collect());
        }
        tree_edges.extend(sub.base.tree_edges.iter().map(|&(a, b)| (a + offset, b + offset)));
        tree_edges.push((j, offset));
    }
    Ok(TdmDecomposition {
        base: TreeDecomposition { tree_edges, bags },
        protectors,
        strong: (0..n).collect(),
    })
}

/// Splits a TDM decomposition into a K-free decomposition and the tame
/// decomposition (T, β, α).
///
/// Every non-leaf j of J that has β(j) ≠ α(j) or neighbours outside J gets
/// a new J-leaf copy carrying β(j), α(j) and those outside neighbours; then
/// β(j) := α(j). L = V ∖ ⋃_J α(j), and each J-leaf absorbs the bags of the
/// branches outside J hanging from it. With J empty (so K = ∅) the result
/// is the single bag V with L = V.
pub fn extract_from_tdm(
    g: &RootedSignedGraph,
    tdm: &TdmDecomposition,
) -> Result<(KFreeDecomposition, TameOcpDecomposition)> {
    ensure(validate_tdm(tdm, g))?;
    let tame = tdm.tame();
    if tdm.strong.is_empty() {
        let all = g.vertices().clone();
        return Ok((KFreeDecomposition { base: TreeDecomposition::single(all.clone()), free: all }, tame));
    }
    let mut bags = tdm.base.bags.clone();
    let mut prot = tdm.protectors.clone();
    let mut adj: Vec<BTreeSet<Node>> = tdm.base.neighbors().into_iter().map(|l| l.into_iter().collect()).collect();
    let mut strong = tdm.strong.clone();
    let j_degree = |adj: &Vec<BTreeSet<Node>>, strong: &BTreeSet<Node>, j: Node| {
        adj[j].iter().filter(|s| strong.contains(s)).count()
    };
    for j in tdm.strong.iter().copied() {
        if j_degree(&adj, &strong, j) <= 1 {
            continue;
        }
        let outside: Vec<Node> = adj[j].iter().copied().filter(|s| !strong.contains(s)).collect();
        if bags[j] == prot[j] && outside.is_empty() {
            continue;
        }
        let t = bags.len();
        bags.push(bags[j].clone());
        prot.push(prot[j].clone());
        adj.push(BTreeSet::from([j]));
        adj[j].insert(t);
        for s in outside {
            adj[j].remove(&s);
            adj[s].remove(&j);
            adj[s].insert(t);
            adj[t].insert(s);
        }
        strong.insert(t);
        bags[j] = prot[j].clone();
    }
    let protected: BTreeSet<Vertex> = strong.iter().flat_map(|&j| prot[j].iter().copied()).collect();
    let free: BTreeSet<Vertex> = g.vertices().difference(&protected).copied().collect();
    let index: BTreeMap<Node, Node> = strong.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let mut out_bags = Vec::with_capacity(strong.len());
    for &j in &strong {
        let mut bag = bags[j].clone();
        if j_degree(&adj, &strong, j) <= 1 {
            let mut stack: Vec<Node> = adj[j].iter().copied().filter(|s| !strong.contains(s)).collect();
            let mut seen: BTreeSet<Node> = stack.iter().copied().collect();
            seen.insert(j);
            while let Some(t) = stack.pop() {
                bag.extend(bags[t].iter().copied());
                for &s in &adj[t] {
                    if seen.insert(s) {
                        stack.push(s);
                    }
                }
            }
        }
        out_bags.push(bag);
    }
    let mut tree_edges = Vec::new();
    for &j in &strong {
        for &s in &adj[j] {
            if j < s && strong.contains(&s) {
                tree_edges.push((index[&j], index[&s]));
            }
        }
    }
    let kfree = KFreeDecomposition { base: TreeDecomposition { tree_edges, bags: out_bags }, free };
    Ok((kfree, tame))
}

/// Working form for bag contraction.
struct Contractible {
    bags: Vec<BTreeSet<Vertex>>,
    prot: Option<Vec<BTreeSet<Vertex>>>,
    strong: Option<BTreeSet<Node>>,
    free: Option<BTreeSet<Vertex>>,
    edges: Vec<(Node, Node)>,
}

impl Contractible {
    fn degree(&self, t: Node) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == t || b == t).count()
    }

    /// May node `a` be merged into `b` (keeping b's data)?
    fn allowed(&self, a: Node, b: Node) -> bool {
        if !self.bags[a].is_subset(&self.bags[b]) {
            return false;
        }
        if let Some(j) = &self.strong {
            if j.contains(&a) && !j.contains(&b) {
                return false;
            }
        }
        if let Some(l) = &self.free {
            if !self.bags[b].is_disjoint(l) && self.degree(a) + self.degree(b) > 3 {
                return false;
            }
        }
        true
    }

    fn merge(&mut self, a: Node, b: Node) {
        self.edges.retain(|&(x, y)| !((x == a && y == b) || (x == b && y == a)));
        for e in &mut self.edges {
            if e.0 == a {
                e.0 = b;
            }
            if e.1 == a {
                e.1 = b;
            }
        }
        let shift = |t: Node| if t > a { t - 1 } else { t };
        for e in &mut self.edges {
            *e = (shift(e.0), shift(e.1));
        }
        self.bags.remove(a);
        if let Some(p) = &mut self.prot {
            p.remove(a);
        }
        if let Some(j) = &mut self.strong {
            j.remove(&a);
            *j = j.iter().map(|&t| shift(t)).collect();
        }
    }

    fn run(mut self) -> Self {
        'outer: loop {
            let mut edges = self.edges.clone();
            edges.sort_unstable();
            for (x, y) in edges {
                for (a, b) in [(x, y), (y, x)] {
                    if self.allowed(a, b) {
                        self.merge(a, b);
                        continue 'outer;
                    }
                }
            }
            break;
        }
        self
    }
}

/// Repeatedly contracts tree edges t₁t₂ with β(t₁) ⊆ β(t₂), keeping the
/// data of t₂. A TDM edge from J to outside J is only contracted into the
/// J side; a K-free contraction never turns a node holding free vertices
/// into a non-leaf. Validity is preserved and width never increases.
pub fn compress_bags(d: &Decomposition) -> Decomposition {
    let base = d.base();
    let mut c = Contractible {
        bags: base.bags.clone(),
        prot: None,
        strong: None,
        free: None,
        edges: base.tree_edges.clone(),
    };
    match d {
        Decomposition::Tree(_) => {}
        Decomposition::KFree(k) => c.free = Some(k.free.clone()),
        Decomposition::TameOcp(t) => c.prot = Some(t.protectors.clone()),
        Decomposition::Tdm(t) => {
            c.prot = Some(t.protectors.clone());
            c.strong = Some(t.strong.clone());
        }
    }
    let c = c.run();
    let base = TreeDecomposition { tree_edges: c.edges, bags: c.bags };
    match d {
        Decomposition::Tree(_) => Decomposition::Tree(base),
        Decomposition::KFree(k) => Decomposition::KFree(KFreeDecomposition { base, free: k.free.clone() }),
        Decomposition::TameOcp(_) => {
            Decomposition::TameOcp(TameOcpDecomposition { base, protectors: c.prot.unwrap() })
        }
        Decomposition::Tdm(_) => Decomposition::Tdm(TdmDecomposition {
            base,
            protectors: c.prot.unwrap(),
            strong: c.strong.unwrap(),
        }),
    }
}

pub fn compress_tame(d: &TameOcpDecomposition) -> TameOcpDecomposition {
    match compress_bags(&d.clone().into()) {
        Decomposition::TameOcp(x) => x,
        _ => unreachable!(),
    }
}

pub fn compress_tdm(d: &TdmDecomposition) -> TdmDecomposition {
    match compress_bags(&d.clone().into()) {
        Decomposition::Tdm(x) => x,
        _ => unreachable!(),
    }
}

pub fn compress_tree(d: &TreeDecomposition) -> TreeDecomposition {
    match compress_bags(&d.clone().into()) {
        Decomposition::Tree(x) => x,
        _ => unreachable!(),
    }
}

/// Turns a decomposition of the subdivided graph back into one of `g` by
/// replacing every path-interior vertex with an end of its original edge
/// (a non-root end if there is one, else the smaller) in bags, protectors
/// and the free set. In a TDM decomposition a root renamed into a bag is
/// added to that bag's protector.
pub fn uncontract_subdivision(d: &Decomposition, g: &RootedSignedGraph, map: &PathMap) -> Result<Decomposition> {
    let mut rename: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for (&id, p) in map {
        let e = g.edge(id).ok_or_else(|| Error::Decomposition(format!("path map names unknown edge {id}")))?;
        if e.ends() != (p.u.min(p.v), p.u.max(p.v)) {
            return Err(Error::Decomposition(format!("path map ends of edge {id} differ from the graph")));
        }
        let target = match (g.is_root(p.u), g.is_root(p.v)) {
            (true, false) => p.v,
            (false, true) => p.u,
            _ => p.u.min(p.v),
        };
        for &x in &p.interior {
            if g.has_vertex(x) || rename.insert(x, target).is_some() {
                return Err(Error::Decomposition(format!("interior vertex {x} is not new")));
            }
        }
    }
    let f = |s: &BTreeSet<Vertex>| -> Result<BTreeSet<Vertex>> {
        s.iter()
            .map(|v| match rename.get(v) {
                Some(&u) => Ok(u),
                None if g.has_vertex(*v) => Ok(*v),
                None => Err(Error::Decomposition(format!("vertex {v} is neither in the graph nor a path interior"))),
            })
            .collect()
    };
    let fs = |xs: &[BTreeSet<Vertex>]| xs.iter().map(f).collect::<Result<Vec<_>>>();
    let base = d.base();
    let nb = TreeDecomposition { tree_edges: base.tree_edges.clone(), bags: fs(&base.bags)? };
    Ok(match d {
        Decomposition::Tree(_) => Decomposition::Tree(nb),
        Decomposition::KFree(k) => Decomposition::KFree(KFreeDecomposition {
            base: nb,
            free: k.free.iter().copied().filter(|v| !rename.contains_key(v)).collect(),
        }),
        Decomposition::TameOcp(t) => {
            Decomposition::TameOcp(TameOcpDecomposition { base: nb, protectors: fs(&t.protectors)? })
        }
        Decomposition::Tdm(t) => {
            let mut protectors = fs(&t.protectors)?;
            for (a, b) in protectors.iter_mut().zip(&nb.bags) {
                a.extend(b.iter().copied().filter(|v| g.is_root(*v)));
            }
            Decomposition::Tdm(TdmDecomposition { base: nb, protectors, strong: t.strong.clone() })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::validate::{kfree_width, tame_width, tdm_width, validate, width};
    use crate::sgraph::{subdivide_even_edges, Parity};

    fn set(xs: &[Vertex]) -> BTreeSet<Vertex> {
        xs.iter().copied().collect()
    }

    fn triangle_with_tail() -> RootedSignedGraph {
        let mut g = RootedSignedGraph::with_vertices(4);
        g.add_edge(0, 1, Parity::Odd).unwrap();
        g.add_edge(1, 2, Parity::Odd).unwrap();
        g.add_edge(2, 0, Parity::Odd).unwrap();
        g.add_edge(2, 3, Parity::Even).unwrap();
        g.set_roots([3]).unwrap();
        g
    }

    #[test]
    fn compose_empty_free_set() {
        let g = triangle_with_tail();
        let base = TreeDecomposition { tree_edges: vec![(0, 1)], bags: vec![set(&[0, 1, 2]), set(&[2, 3])] };
        let k = KFreeDecomposition { base: base.clone(), free: BTreeSet::new() };
        let t = compose_tdm(&g, &k, &BTreeMap::new()).unwrap();
        assert_eq!(t.base, base);
        assert_eq!(t.protectors, base.bags);
        assert_eq!(t.strong, set(&[0, 1]));
    }

    #[test]
    fn compose_then_extract() {
        let g = triangle_with_tail();
        let k = KFreeDecomposition {
            base: TreeDecomposition { tree_edges: vec![(0, 1)], bags: vec![set(&[0, 1, 2]), set(&[2, 3])] },
            free: set(&[0, 1]),
        };
        let leaf = TameOcpDecomposition {
            base: TreeDecomposition::single(set(&[0, 1])),
            protectors: vec![BTreeSet::new()],
        };
        let tdm = compose_tdm(&g, &k, &BTreeMap::from([(0, leaf)])).unwrap();
        assert!(validate(&tdm.clone().into(), &g).is_empty());
        let w = tdm_width(&tdm, &g).unwrap();
        assert!(w <= kfree_width(&k, &g).unwrap() + 1);
        let (k2, tame) = extract_from_tdm(&g, &tdm).unwrap();
        assert!(kfree_width(&k2, &g).unwrap() <= w.saturating_sub(1));
        assert!(tame_width(&tame, &g).unwrap() <= w);
    }

    #[test]
    fn extract_single_node() {
        let g = triangle_with_tail();
        let tdm = TdmDecomposition {
            base: TreeDecomposition::single(set(&[0, 1, 2, 3])),
            protectors: vec![set(&[3])],
            strong: set(&[0]),
        };
        let (k, _) = extract_from_tdm(&g, &tdm).unwrap();
        assert_eq!(k.base.bags, vec![set(&[0, 1, 2, 3])]);
        assert_eq!(k.free, set(&[0, 1, 2]));
    }

    #[test]
    fn extract_moves_side_branches_of_inner_strong_nodes() {
        // J = path 0-1-2 (roots 0 and 4), node 3 hangs off inner node 1
        let mut g = RootedSignedGraph::with_vertices(5);
        for (u, v) in [(0, 1), (1, 2), (2, 4), (1, 3)] {
            g.add_edge(u, v, Parity::Even).unwrap();
        }
        g.set_roots([0, 4]).unwrap();
        let tdm = TdmDecomposition {
            base: TreeDecomposition {
                tree_edges: vec![(0, 1), (1, 2), (1, 3)],
                bags: vec![set(&[0, 1]), set(&[1, 2]), set(&[2, 4]), set(&[1, 3])],
            },
            protectors: vec![set(&[0, 1]), set(&[1, 2]), set(&[2, 4]), set(&[1])],
            strong: set(&[0, 1, 2]),
        };
        let (k, _) = extract_from_tdm(&g, &tdm).unwrap();
        assert!(validate(&k.clone().into(), &g).is_empty(), "{:?}", validate(&k.clone().into(), &g));
        assert_eq!(k.free, set(&[3]));
    }

    #[test]
    fn compress_chain() {
        let g = triangle_with_tail();
        let all = set(&[0, 1, 2, 3]);
        let chain = TameOcpDecomposition {
            base: TreeDecomposition { tree_edges: vec![(0, 1), (1, 2)], bags: vec![all.clone(); 3] },
            protectors: vec![set(&[0, 1, 2]); 3],
        };
        let c = compress_tame(&chain);
        assert_eq!(c.base.node_count(), 1);
        assert_eq!(tame_width(&c, &g).unwrap(), tame_width(&chain, &g).unwrap());
        assert_eq!(compress_tame(&c), c);
    }

    #[test]
    fn uncontract_single_edge() {
        let mut g = RootedSignedGraph::with_vertices(2);
        g.add_edge(0, 1, Parity::Even).unwrap();
        let (h, map) = subdivide_even_edges(&g);
        let d: Decomposition = TameOcpDecomposition {
            base: TreeDecomposition { tree_edges: vec![(0, 1)], bags: vec![set(&[0, 2]), set(&[2, 1])] },
            protectors: vec![BTreeSet::new(); 2],
        }
        .into();
        assert!(validate(&d, &h).is_empty());
        let back = uncontract_subdivision(&d, &g, &map).unwrap();
        assert!(validate(&back, &g).is_empty());
        assert_eq!(back.base().bags, vec![set(&[0]), set(&[0, 1])]);
        assert_eq!(uncontract_subdivision(&back, &g, &PathMap::new()).unwrap(), back);
    }

    #[test]
    fn uncontract_avoids_roots() {
        // 0 is a root; the interior vertex must fold into 1
        let mut g = RootedSignedGraph::with_vertices(3);
        g.add_edge(0, 1, Parity::Even).unwrap();
        g.add_edge(1, 2, Parity::Odd).unwrap();
        g.set_roots([0]).unwrap();
        let (h, map) = subdivide_even_edges(&g);
        let x = map[&0].interior[0];
        let d: Decomposition = TdmDecomposition {
            base: TreeDecomposition {
                tree_edges: vec![(0, 1), (1, 2)],
                bags: vec![set(&[0, x]), set(&[x, 1]), set(&[1, 2])],
            },
            protectors: vec![set(&[0, x]), set(&[x, 1]), set(&[1])],
            strong: BTreeSet::from([0]),
        }
        .into();
        assert!(validate(&d, &h).is_empty());
        let back = uncontract_subdivision(&d, &g, &map).unwrap();
        assert!(validate(&back, &g).is_empty());
        assert_eq!(back.base().bags[0], set(&[0, 1]));
        assert_eq!(width(&back, &g).unwrap(), width(&d, &h).unwrap());
    }

    #[test]
    fn uncontract_between_roots_protects() {
        let mut g = RootedSignedGraph::with_vertices(2);
        g.add_edge(0, 1, Parity::Even).unwrap();
        g.set_roots([0, 1]).unwrap();
        let (h, map) = subdivide_even_edges(&g);
        let d: Decomposition = TdmDecomposition {
            base: TreeDecomposition {
                tree_edges: vec![(0, 1), (1, 2)],
                bags: vec![set(&[0, 2]), set(&[2, 1]), set(&[2])],
            },
            protectors: vec![set(&[0, 2]), set(&[2, 1]), BTreeSet::new()],
            strong: BTreeSet::from([0, 1]),
        }
        .into();
        assert!(validate(&d, &h).is_empty(), "{:?}", validate(&d, &h));
        let back = uncontract_subdivision(&d, &g, &map).unwrap();
        assert!(validate(&back, &g).is_empty());
        let Decomposition::Tdm(t) = back else { unreachable!() };
        assert_eq!(t.protectors[2], set(&[0]));
    }
}
