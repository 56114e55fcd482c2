use std::collections::BTreeSet;

use crate::sgraph::Vertex;

/// Tree node index; nodes of a decomposition are `0..node_count`.
pub type Node = usize;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree_edges: Vec<(Node, Node)>,
    pub bags: Vec<BTreeSet<Vertex>>,
}

impl TreeDecomposition {
    pub fn single(bag: BTreeSet<Vertex>) -> Self {
        TreeDecomposition { tree_edges: Vec::new(), bags: vec![bag] }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Sorted neighbour lists; edges naming unknown nodes are skipped.
    pub fn neighbors(&self) -> Vec<Vec<Node>> {
        let n = self.bags.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.tree_edges {
            if a < n && b < n && a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    pub fn degree(&self, t: Node) -> usize {
        self.tree_edges.iter().filter(|&&(a, b)| a == t || b == t).count()
    }

    /// A leaf has at most one neighbour (a single node counts as a leaf).
    pub fn is_leaf(&self, t: Node) -> bool {
        self.degree(t) <= 1
    }

    pub fn adhesion(&self, a: Node, b: Node) -> BTreeSet<Vertex> {
        self.bags[a].intersection(&self.bags[b]).copied().collect()
    }

    pub fn max_bag(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0)
    }
}

/// Tree decomposition whose free set L ⊆ V ∖ K lives in single leaf bags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KFreeDecomposition {
    pub base: TreeDecomposition,
    pub free: BTreeSet<Vertex>,
}

/// Tree decomposition with tame protectors α(t) ⊆ β(t).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TameOcpDecomposition {
    pub base: TreeDecomposition,
    pub protectors: Vec<BTreeSet<Vertex>>,
}

/// Tame decomposition whose protectors hold the bag's roots, plus a strong
/// subtree J covering every root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TdmDecomposition {
    pub base: TreeDecomposition,
    pub protectors: Vec<BTreeSet<Vertex>>,
    pub strong: BTreeSet<Node>,
}

impl TdmDecomposition {
    /// (T, β, α) as a tame decomposition.
    pub fn tame(&self) -> TameOcpDecomposition {
        TameOcpDecomposition { base: self.base.clone(), protectors: self.protectors.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Tree,
    KFree,
    TameOcp,
    Tdm,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Tree => "tree",
            Kind::KFree => "kfree",
            Kind::TameOcp => "tocp",
            Kind::Tdm => "tdm",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "tree" => Kind::Tree,
            "kfree" => Kind::KFree,
            "tocp" => Kind::TameOcp,
            "tdm" => Kind::Tdm,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Tree(TreeDecomposition),
    KFree(KFreeDecomposition),
    TameOcp(TameOcpDecomposition),
    Tdm(TdmDecomposition),
}

impl Decomposition {
    pub fn kind(&self) -> Kind {
        match self {
            Decomposition::Tree(_) => Kind::Tree,
            Decomposition::KFree(_) => Kind::KFree,
            Decomposition::TameOcp(_) => Kind::TameOcp,
            Decomposition::Tdm(_) => Kind::Tdm,
        }
    }

    pub fn base(&self) -> &TreeDecomposition {
        match self {
            Decomposition::Tree(d) => d,
            Decomposition::KFree(d) => &d.base,
            Decomposition::TameOcp(d) => &d.base,
            Decomposition::Tdm(d) => &d.base,
        }
    }
}

impl From<TreeDecomposition> for Decomposition {
    fn from(d: TreeDecomposition) -> Self {
        Decomposition::Tree(d)
    }
}

impl From<KFreeDecomposition> for Decomposition {
    fn from(d: KFreeDecomposition) -> Self {
        Decomposition::KFree(d)
    }
}

impl From<TameOcpDecomposition> for Decomposition {
    fn from(d: TameOcpDecomposition) -> Self {
        Decomposition::TameOcp(d)
    }
}

impl From<TdmDecomposition> for Decomposition {
    fn from(d: TdmDecomposition) -> Self {
        Decomposition::Tdm(d)
    }
}
