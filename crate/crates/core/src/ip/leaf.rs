//! Exact solver for a bag with some variables fixed: depth-first search with
//! interval propagation and an optimistic bound.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::scalar::{div_ceil, div_floor, fits_i128, Prepared, Scalar};
use super::ExtInt;
use crate::error::{Error, Result};
use crate::matrix::IpInstance;
use crate::sgraph::Vertex;

/// Row bookkeeping for one bag, independent of the fixed values. Rows with
/// a column outside key ∪ free are ignored.
#[derive(Clone, Debug, Default)]
pub(crate) struct LeafPlan {
    pub free: Vec<Vertex>,
    /// Rows with both ends fixed.
    fixed_rows: Vec<usize>,
    /// (row, key position, free position)
    mixed_rows: Vec<(usize, usize, usize)>,
    /// Per free variable: (row, other free position) for rows inside the
    /// free set.
    free_adj: Vec<Vec<(usize, usize)>>,
}

impl LeafPlan {
    pub fn new<S>(p: &Prepared<S>, key: &[Vertex], free: Vec<Vertex>) -> Self {
        let kpos = |v: Vertex| key.binary_search(&v).ok();
        let fpos = |v: Vertex| free.binary_search(&v).ok();
        let mut plan = LeafPlan { free_adj: vec![Vec::new(); free.len()], ..Default::default() };
        for (i, r) in p.rows.iter().enumerate() {
            match ((kpos(r.ca), fpos(r.ca)), (kpos(r.cb), fpos(r.cb))) {
                ((Some(_), _), (Some(_), _)) => plan.fixed_rows.push(i),
                ((Some(k), _), (_, Some(f))) | ((_, Some(f)), (Some(k), _)) => plan.mixed_rows.push((i, k, f)),
                ((_, Some(f)), (_, Some(g))) => {
                    plan.free_adj[f].push((i, g));
                    plan.free_adj[g].push((i, f));
                }
                _ => {}
            }
        }
        plan.free = free;
        plan
    }
}

fn coef<S: Scalar>(p: &Prepared<S>, row: usize, var: Vertex) -> (S, S, Vertex) {
    let r = &p.rows[row];
    if r.ca == var {
        (r.a.clone(), r.b.clone(), r.cb)
    } else {
        (r.b.clone(), r.a.clone(), r.ca)
    }
}

/// Intersects [lo, hi] with {x : c·x ≤ rhs}.
fn tighten<S: Scalar>(lo: &mut S, hi: &mut S, c: S, rhs: S) {
    if c > S::zero() {
        let t = div_floor(rhs, c);
        if t < *hi {
            *hi = t;
        }
    } else {
        let t = div_ceil(rhs, c);
        if t > *lo {
            *lo = t;
        }
    }
}

struct Search<'a, S> {
    p: &'a Prepared<S>,
    plan: &'a LeafPlan,
    w: Vec<S>,
    cur: Vec<S>,
    best: Option<S>,
    best_x: Vec<S>,
}

impl<S: Scalar> Search<'_, S> {
    fn run(&mut self, i: usize, acc: S, lo: &[S], hi: &[S]) {
        let n = self.plan.free.len();
        if i == n {
            if self.best.as_ref().is_none_or(|b| acc > *b) {
                self.best = Some(acc);
                self.best_x = self.cur.clone();
            }
            return;
        }
        if let Some(b) = &self.best {
            let mut ub = acc.clone();
            for j in i..n {
                let (x, y) = (self.w[j].clone() * lo[j].clone(), self.w[j].clone() * hi[j].clone());
                ub = ub + x.max(y);
            }
            if ub <= *b {
                return;
            }
        }
        let mut x = lo[i].clone();
        while x <= hi[i] {
            let (mut nlo, mut nhi) = (lo.to_vec(), hi.to_vec());
            let mut ok = true;
            for &(row, j) in &self.plan.free_adj[i] {
                if j <= i {
                    continue;
                }
                let (ci, cj, _) = coef(self.p, row, self.plan.free[i]);
                let rhs = self.p.rows[row].rhs.clone() - ci * x.clone();
                tighten(&mut nlo[j], &mut nhi[j], cj, rhs);
                if nlo[j] > nhi[j] {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.cur[i] = x.clone();
                let acc2 = acc.clone() + self.w[i].clone() * x.clone();
                self.run(i + 1, acc2, &nlo, &nhi);
            }
            x = x + S::one();
        }
    }
}

/// Best value of Σ_{v ∈ bag} w_v x_v over the free variables of `plan`,
/// with key variables fixed to `vals` and every row inside the bag
/// enforced. Returns the free values of the lexicographically smallest
/// optimum.
pub(crate) fn leaf_solve<S: Scalar>(
    p: &Prepared<S>,
    plan: &LeafPlan,
    key: &[Vertex],
    vals: &[S],
) -> (Option<S>, Vec<S>) {
    for &row in &plan.fixed_rows {
        let r = &p.rows[row];
        let xa = &vals[key.binary_search(&r.ca).unwrap()];
        let xb = &vals[key.binary_search(&r.cb).unwrap()];
        if r.a.clone() * xa.clone() + r.b.clone() * xb.clone() > r.rhs {
            return (None, Vec::new());
        }
    }
    let n = plan.free.len();
    let mut lo: Vec<S> = plan.free.iter().map(|&v| p.l[v].clone()).collect();
    let mut hi: Vec<S> = plan.free.iter().map(|&v| p.u[v].clone()).collect();
    for &(row, k, f) in &plan.mixed_rows {
        let (cf, ck, _) = coef(p, row, plan.free[f]);
        let rhs = p.rows[row].rhs.clone() - ck * vals[k].clone();
        tighten(&mut lo[f], &mut hi[f], cf, rhs);
        if lo[f] > hi[f] {
            return (None, Vec::new());
        }
    }
    let base = key.iter().zip(vals).fold(S::zero(), |acc, (&v, x)| acc + p.w[v].clone() * x.clone());
    let mut s = Search {
        p,
        plan,
        w: plan.free.iter().map(|&v| p.w[v].clone()).collect(),
        cur: vec![S::zero(); n],
        best: None,
        best_x: Vec::new(),
    };
    s.run(0, base, &lo, &hi);
    (s.best, s.best_x)
}

fn solve_leaf_with<S: Scalar>(
    inst: &IpInstance,
    bag: &BTreeSet<Vertex>,
    fixed: &BTreeMap<Vertex, BigInt>,
) -> ExtInt {
    let p = Prepared::<S>::new(inst);
    let key: Vec<Vertex> = fixed.keys().copied().collect();
    let vals: Vec<S> = fixed.values().map(S::from_big).collect();
    let free: Vec<Vertex> = bag.iter().copied().filter(|v| !fixed.contains_key(v)).collect();
    let plan = LeafPlan::new(&p, &key, free);
    leaf_solve(&p, &plan, &key, &vals).0.map_or(ExtInt::NegInf, |v| ExtInt::Finite(v.to_big()))
}

/// Optimum of the instance restricted to the variables of `bag`, with the
/// variables in `fixed` set to the given values: Σ_{v ∈ bag} w_v x_v over
/// the remaining variables in their boxes, subject to every row with both
/// columns in `bag`. −∞ when no extension is feasible.
pub fn solve_leaf(inst: &IpInstance, bag: &BTreeSet<Vertex>, fixed: &BTreeMap<Vertex, BigInt>) -> Result<ExtInt> {
    for (&v, x) in fixed {
        if !bag.contains(&v) || v >= inst.var_count() {
            return Err(Error::Instance(format!("fixed variable {v} outside the bag")));
        }
        if *x < inst.l[v] || *x > inst.u[v] {
            return Err(Error::Instance(format!("fixed value {x} of variable {v} outside its box")));
        }
    }
    if let Some(&v) = bag.iter().find(|&&v| v >= inst.var_count()) {
        return Err(Error::Instance(format!("bag variable {v} does not exist")));
    }
    Ok(if fits_i128(inst) {
        solve_leaf_with::<i128>(inst, bag, fixed)
    } else {
        solve_leaf_with::<BigInt>(inst, bag, fixed)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::TwoNonzeroMatrix;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn inst(rows: &[Vec<i64>], b: &[i64], w: &[i64], l: &[i64], u: &[i64]) -> IpInstance {
        IpInstance::new(TwoNonzeroMatrix::from_i64(rows).unwrap(), big(b), big(w), big(l), big(u)).unwrap()
    }

    #[test]
    fn nothing_free() {
        let i = inst(&[vec![1, 1]], &[1], &[2, 3], &[0, 0], &[1, 1]);
        let fixed = BTreeMap::from([(0, BigInt::from(1)), (1, BigInt::from(0))]);
        assert_eq!(solve_leaf(&i, &[0, 1].into(), &fixed).unwrap(), ExtInt::from(2));
        let fixed = BTreeMap::from([(0, BigInt::from(1)), (1, BigInt::from(1))]);
        assert_eq!(solve_leaf(&i, &[0, 1].into(), &fixed).unwrap(), ExtInt::NegInf);
    }

    #[test]
    fn single_free_variable() {
        let i = inst(&[vec![1, -1]], &[5], &[5, 0], &[0, 0], &[1, 1]);
        let fixed = BTreeMap::from([(1, BigInt::from(0))]);
        assert_eq!(solve_leaf(&i, &[0, 1].into(), &fixed).unwrap(), ExtInt::from(5));
    }

    #[test]
    fn mixed_rows_tighten() {
        // x0 + 2 x1 ≤ 4 with x1 = 1 fixed leaves x0 ≤ 2
        let i = inst(&[vec![1, 2]], &[4], &[1, 0], &[-3, 0], &[3, 1]);
        let fixed = BTreeMap::from([(1, BigInt::from(1))]);
        assert_eq!(solve_leaf(&i, &[0, 1].into(), &fixed).unwrap(), ExtInt::from(2));
    }

    #[test]
    fn rows_outside_bag_ignored() {
        let i = inst(&[vec![1, 1, 0], vec![0, 1, 1]], &[0, -10], &[1, 1, 0], &[0, 0, 0], &[2, 2, 2]);
        // the second row is infeasible but touches 2, which is outside
        let v = solve_leaf(&i, &[0, 1].into(), &BTreeMap::new()).unwrap();
        assert_eq!(v, ExtInt::from(0));
        assert!(solve_leaf(&i, &[0].into(), &BTreeMap::from([(1, BigInt::from(0))])).is_err());
    }
}
