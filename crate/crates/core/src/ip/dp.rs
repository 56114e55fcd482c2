//! Dynamic program over a K-free tree decomposition of G⁺•(A).
//!
//! Every node t has key variables β(t) ∖ L. Leaves are evaluated with the
//! bag solver for each assignment η of the key; inner nodes add their own
//! weights to the best child values, keyed by the adhesion with the parent
//! (whose weights the child subtracts so nothing is counted twice).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::leaf::{leaf_solve, LeafPlan};
use super::scalar::{fits_i128, Prepared, Scalar};
use super::{ExtInt, SolveResult};
use crate::decomp::{validate_kfree, KFreeDecomposition, Node, TreeDecomposition};
use crate::error::{Error, Result};
use crate::matrix::IpInstance;
use crate::sgraph::Vertex;

/// Largest number of key assignments enumerated at one node.
pub const DP_MAX_ASSIGNMENTS: usize = 1 << 22;

/// The rooted tree the program runs on. Single-node and single-edge trees
/// receive an extra inner node holding β(t) ∖ L of the first node so that
/// the root is never a leaf.
#[derive(Clone, Debug)]
pub struct DpTree {
    pub tree: TreeDecomposition,
    pub root: Node,
    pub parent: Vec<Option<Node>>,
    pub children: Vec<Vec<Node>>,
    pub leaves: BTreeSet<Node>,
}

impl DpTree {
    pub fn new(d: &KFreeDecomposition) -> Self {
        let mut tree = d.base.clone();
        let key0: BTreeSet<Vertex> = tree.bags[0].difference(&d.free).copied().collect();
        let added = match tree.node_count() {
            1 => {
                tree.bags.push(key0);
                tree.tree_edges.push((1, 0));
                Some(1)
            }
            2 => {
                tree.bags.push(key0);
                tree.tree_edges = vec![(0, 2), (2, 1)];
                Some(2)
            }
            _ => None,
        };
        let adj = tree.neighbors();
        let root = added.unwrap_or_else(|| (0..tree.node_count()).find(|&t| adj[t].len() > 1).expect("tree has an inner node"));
        let leaves: BTreeSet<Node> = (0..tree.node_count()).filter(|&t| t != root && adj[t].len() <= 1).collect();
        let mut parent = vec![None; tree.node_count()];
        let mut children = vec![Vec::new(); tree.node_count()];
        let mut stack = vec![root];
        let mut seen = vec![false; tree.node_count()];
        seen[root] = true;
        while let Some(t) = stack.pop() {
            for &s in &adj[t] {
                if !seen[s] {
                    seen[s] = true;
                    parent[s] = Some(t);
                    children[t].push(s);
                    stack.push(s);
                }
            }
        }
        DpTree { tree, root, parent, children, leaves }
    }

    /// Nodes with every child before its parent.
    fn post_order(&self) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.tree.node_count());
        let mut stack = vec![self.root];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(self.children[t].iter().copied());
        }
        out.reverse();
        out
    }
}

/// Mixed-radix indexing of assignments to sorted variables, first variable
/// most significant, each digit being x_v − ℓ_v.
#[derive(Clone, Debug, Default)]
struct Radix {
    sizes: Vec<usize>,
    total: usize,
}

impl Radix {
    fn new(inst: &IpInstance, vars: &[Vertex]) -> Result<Self> {
        let mut sizes = Vec::with_capacity(vars.len());
        let mut total: usize = 1;
        for &v in vars {
            let s = usize::try_from(&inst.u[v] - &inst.l[v] + 1u32)
                .ok()
                .filter(|&s| s <= DP_MAX_ASSIGNMENTS)
                .ok_or_else(|| Error::limit("assignments per decomposition node", DP_MAX_ASSIGNMENTS as u128))?;
            total = total
                .checked_mul(s)
                .filter(|&t| t <= DP_MAX_ASSIGNMENTS)
                .ok_or_else(|| Error::limit("assignments per decomposition node", DP_MAX_ASSIGNMENTS as u128))?;
            sizes.push(s);
        }
        Ok(Radix { sizes, total })
    }

    fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut d = vec![0; self.sizes.len()];
        for i in (0..self.sizes.len()).rev() {
            d[i] = idx % self.sizes[i];
            idx /= self.sizes[i];
        }
        d
    }

    fn index(&self, digits: impl Iterator<Item = usize>) -> usize {
        digits.zip(&self.sizes).fold(0, |acc, (d, s)| acc * s + d)
    }
}

#[derive(Clone, Debug)]
struct NodePlan {
    key: Vec<Vertex>,
    radix: Radix,
    /// Rows with both columns in the key (inner nodes).
    rows: Vec<usize>,
    leaf: Option<LeafPlan>,
    adhesion: Vec<Vertex>,
    adh_radix: Radix,
    adh_in_key: Vec<usize>,
    adh_in_parent: Vec<usize>,
}

struct Plan {
    tree: DpTree,
    nodes: Vec<NodePlan>,
}

impl Plan {
    fn new<S>(inst: &IpInstance, p: &Prepared<S>, d: &KFreeDecomposition) -> Result<Self> {
        let g = inst.graph();
        let violations = validate_kfree(d, &g);
        if !violations.is_empty() {
            return Err(Error::InvalidDecomposition(violations));
        }
        let tree = DpTree::new(d);
        let keys: Vec<Vec<Vertex>> =
            tree.tree.bags.iter().map(|b| b.difference(&d.free).copied().collect()).collect();
        let mut nodes = Vec::with_capacity(keys.len());
        for (t, key) in keys.iter().enumerate() {
            let radix = Radix::new(inst, key)?;
            let leaf = tree.leaves.contains(&t).then(|| {
                let free: Vec<Vertex> = tree.tree.bags[t].intersection(&d.free).copied().collect();
                LeafPlan::new(p, key, free)
            });
            let rows = p
                .rows
                .iter()
                .enumerate()
                .filter(|(_, r)| key.binary_search(&r.ca).is_ok() && key.binary_search(&r.cb).is_ok())
                .map(|(i, _)| i)
                .collect();
            let (adhesion, adh_in_parent) = match tree.parent[t] {
                Some(par) => {
                    let adh: Vec<Vertex> = tree.tree.adhesion(t, par).into_iter().collect();
                    let pos = adh.iter().map(|v| keys[par].binary_search(v).unwrap()).collect();
                    (adh, pos)
                }
                None => (Vec::new(), Vec::new()),
            };
            let adh_in_key = adhesion.iter().map(|v| key.binary_search(v).unwrap()).collect();
            let adh_radix = Radix::new(inst, &adhesion)?;
            nodes.push(NodePlan { key: key.clone(), radix, rows, leaf, adhesion, adh_radix, adh_in_key, adh_in_parent });
        }
        Ok(Plan { tree, nodes })
    }
}

struct Tables<S> {
    p: Vec<Vec<Option<S>>>,
    s: Vec<Vec<Option<S>>>,
    arg: Vec<Vec<usize>>,
}

fn values<S: Scalar>(p: &Prepared<S>, key: &[Vertex], digits: &[usize]) -> Vec<S> {
    key.iter().zip(digits).map(|(&v, &d)| p.l[v].clone() + S::from_usize(d)).collect()
}

fn run<S: Scalar>(p: &Prepared<S>, plan: &Plan, keep_p: bool) -> (SolveResult, Tables<S>) {
    let n = plan.nodes.len();
    let mut t = Tables { p: vec![Vec::new(); n], s: vec![Vec::new(); n], arg: vec![Vec::new(); n] };
    for node in plan.tree.post_order() {
        let np = &plan.nodes[node];
        let children = &plan.tree.children[node];
        let pt: Vec<Option<S>> = (0..np.radix.total)
            .into_par_iter()
            .map(|idx| {
                let digits = np.radix.digits(idx);
                let vals = values(p, &np.key, &digits);
                if let Some(lp) = &np.leaf {
                    return leaf_solve(p, lp, &np.key, &vals).0;
                }
                for &r in &np.rows {
                    let row = &p.rows[r];
                    let xa = vals[np.key.binary_search(&row.ca).unwrap()].clone();
                    let xb = vals[np.key.binary_search(&row.cb).unwrap()].clone();
                    if row.a.clone() * xa + row.b.clone() * xb > row.rhs {
                        return None;
                    }
                }
                let mut acc = np.key.iter().zip(&vals).fold(S::zero(), |a, (&v, x)| a + p.w[v].clone() * x.clone());
                for &c in children {
                    let cp = &plan.nodes[c];
                    let a = cp.adh_radix.index(cp.adh_in_parent.iter().map(|&i| digits[i]));
                    acc = acc + t.s[c][a].clone()?;
                }
                Some(acc)
            })
            .collect();
        if plan.tree.parent[node].is_some() {
            let mut s = vec![None::<S>; np.adh_radix.total];
            let mut arg = vec![usize::MAX; np.adh_radix.total];
            for (idx, v) in pt.iter().enumerate() {
                let Some(v) = v else { continue };
                let digits = np.radix.digits(idx);
                let a = np.adh_radix.index(np.adh_in_key.iter().map(|&i| digits[i]));
                let mut val = v.clone();
                for &i in &np.adh_in_key {
                    let x = p.l[np.key[i]].clone() + S::from_usize(digits[i]);
                    val = val - p.w[np.key[i]].clone() * x;
                }
                if s[a].as_ref().is_none_or(|cur| val > *cur) {
                    s[a] = Some(val);
                    arg[a] = idx;
                }
            }
            t.s[node] = s;
            t.arg[node] = arg;
        }
        if keep_p || node == plan.tree.root {
            t.p[node] = pt;
        }
    }

    let root = plan.tree.root;
    let mut best: Option<(usize, S)> = None;
    for (idx, v) in t.p[root].iter().enumerate() {
        if let Some(v) = v {
            if best.as_ref().is_none_or(|(_, b)| v > b) {
                best = Some((idx, v.clone()));
            }
        }
    }
    let Some((root_idx, objective)) = best else {
        return (SolveResult::Infeasible, t);
    };
    let mut x: Vec<Option<S>> = vec![None; p.w.len()];
    let mut stack = vec![(root, root_idx)];
    while let Some((node, idx)) = stack.pop() {
        let np = &plan.nodes[node];
        let digits = np.radix.digits(idx);
        let vals = values(p, &np.key, &digits);
        for (&v, val) in np.key.iter().zip(&vals) {
            x[v] = Some(val.clone());
        }
        if let Some(lp) = &np.leaf {
            let (_, free) = leaf_solve(p, lp, &np.key, &vals);
            for (&v, val) in lp.free.iter().zip(free) {
                x[v] = Some(val);
            }
        }
        for &c in &plan.tree.children[node] {
            let cp = &plan.nodes[c];
            let a = cp.adh_radix.index(cp.adh_in_parent.iter().map(|&i| digits[i]));
            stack.push((c, t.arg[c][a]));
        }
    }
    let x = x.into_iter().map(|v| v.expect("every variable lies in a bag").to_big()).collect();
    (SolveResult::Optimal { objective: objective.to_big(), x }, t)
}

/// Optimum of the instance by dynamic programming over a K-free tree
/// decomposition of its graph. Ties go to the lexicographically smallest
/// assignment at each node, from the root down.
pub fn solve_dp(inst: &IpInstance, d: &KFreeDecomposition) -> Result<SolveResult> {
    Ok(solve_dp_with_tables(inst, d, false)?.0)
}

/// Computed tables, values converted to extended integers.
#[derive(Clone, Debug)]
pub struct DpTables {
    pub tree: DpTree,
    /// Per node: β(t) ∖ L in increasing order.
    pub keys: Vec<Vec<Vertex>>,
    /// Per node: its adhesion with the parent, in increasing order.
    pub adhesions: Vec<Vec<Vertex>>,
    /// p[t][η], η enumerated lexicographically over `keys[t]`. Only filled
    /// when requested (the root's is always kept).
    pub p: Vec<Vec<ExtInt>>,
    /// s[t][ξ], ξ enumerated lexicographically over `adhesions[t]`.
    pub s: Vec<Vec<ExtInt>>,
    lower: Vec<BigInt>,
    sizes: Vec<Vec<usize>>,
}

impl DpTables {
    /// Assignment with the given lexicographic index over `vars`.
    fn decode(&self, vars: &[Vertex], sizes: &[usize], mut idx: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::from(0); vars.len()];
        for i in (0..vars.len()).rev() {
            out[i] = &self.lower[vars[i]] + idx % sizes[i];
            idx /= sizes[i];
        }
        out
    }

    /// η for p[t][idx].
    pub fn key_assignment(&self, t: Node, idx: usize) -> Vec<BigInt> {
        self.decode(&self.keys[t], &self.sizes[t], idx)
    }

    /// ξ for s[t][idx].
    pub fn adhesion_assignment(&self, t: Node, idx: usize) -> Vec<BigInt> {
        let sizes: Vec<usize> = self.adhesions[t]
            .iter()
            .map(|v| self.sizes[t][self.keys[t].binary_search(v).unwrap()])
            .collect();
        self.decode(&self.adhesions[t], &sizes, idx)
    }
}

/// [`solve_dp`] that also returns the tables; `all_p` keeps p for every
/// node rather than only the root.
pub fn solve_dp_with_tables(inst: &IpInstance, d: &KFreeDecomposition, all_p: bool) -> Result<(SolveResult, DpTables)> {
    if fits_i128(inst) {
        solve_generic::<i128>(inst, d, all_p)
    } else {
        solve_generic::<BigInt>(inst, d, all_p)
    }
}

fn solve_generic<S: Scalar>(inst: &IpInstance, d: &KFreeDecomposition, all_p: bool) -> Result<(SolveResult, DpTables)> {
    let p = Prepared::<S>::new(inst);
    let plan = Plan::new(inst, &p, d)?;
    let (res, t) = run(&p, &plan, all_p);
    let conv = |v: Vec<Option<S>>| v.into_iter().map(|x| x.map_or(ExtInt::NegInf, |x| ExtInt::Finite(x.to_big()))).collect();
    let tables = DpTables {
        keys: plan.nodes.iter().map(|n| n.key.clone()).collect(),
        adhesions: plan.nodes.iter().map(|n| n.adhesion.clone()).collect(),
        sizes: plan.nodes.iter().map(|n| n.radix.sizes.clone()).collect(),
        p: t.p.into_iter().map(conv).collect(),
        s: t.s.into_iter().map(conv).collect(),
        lower: inst.l.clone(),
        tree: plan.tree,
    };
    Ok((res, tables))
}
