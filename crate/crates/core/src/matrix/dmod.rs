use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;

use super::{to_rooted_signed_graph, TwoNonzeroMatrix};
use crate::error::{Error, Result};
use crate::sgraph::ocp_exact;

/// Largest min(m, n) accepted by [`max_abs_subdeterminant`].
pub const SUBDET_MAX_MINOR: usize = 8;
const SUBDET_MAX_SQUARES: u128 = 5_000_000;

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

fn binom(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Δ: the largest |det| over all square submatrices, counting the empty
/// one (so Δ ≥ 1).
pub fn max_abs_subdeterminant(a: &TwoNonzeroMatrix) -> Result<BigInt> {
    let (m, n) = (a.row_count(), a.col_count());
    let r = m.min(n);
    if r > SUBDET_MAX_MINOR {
        return Err(Error::limit(
            "min(rows, cols) for exact subdeterminant enumeration (use a sampling mode instead)",
            SUBDET_MAX_MINOR as u128,
        ));
    }
    let squares: u128 = (1..=r).map(|s| binom(m, s) * binom(n, s)).sum();
    if squares > SUBDET_MAX_SQUARES {
        return Err(Error::limit("square submatrix count", SUBDET_MAX_SQUARES));
    }
    let dense = a.dense();
    let mut best = BigInt::one();
    for s in 1..=r {
        let col_sets = subsets(n, s);
        let local = subsets(m, s)
            .par_iter()
            .map(|rows| {
                let mut best = BigInt::zero();
                for cols in &col_sets {
                    let sub: Vec<Vec<BigInt>> =
                        rows.iter().map(|&i| cols.iter().map(|&j| dense[i][j].clone()).collect()).collect();
                    let d = determinant(&sub).abs();
                    if d > best {
                        best = d;
                    }
                }
                best
            })
            .max()
            .unwrap_or_else(BigInt::zero);
        if local > best {
            best = local;
        }
    }
    Ok(best)
}

/// The quantities of the Δ-modularity equivalence and whether each bound holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmodReport {
    pub delta: BigInt,
    pub max_abs_entry: BigInt,
    pub roots: usize,
    pub ocp: usize,
    /// ⌊log₂ Δ⌋
    pub log2_delta_floor: u64,
    pub entry_bound: bool,
    pub root_bound: bool,
    pub ocp_bound: bool,
    pub converse_bound: bool,
}

impl DmodReport {
    pub fn all_hold(&self) -> bool {
        self.entry_bound && self.root_bound && self.ocp_bound && self.converse_bound
    }
}

impl std::fmt::Display for DmodReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let flag = |b: bool| if b { "pass" } else { "FAIL" };
        writeln!(f, "delta {}", self.delta)?;
        writeln!(f, "max_abs_entry {}", self.max_abs_entry)?;
        writeln!(f, "roots {}", self.roots)?;
        writeln!(f, "ocp {}", self.ocp)?;
        writeln!(f, "log2_delta_floor {}", self.log2_delta_floor)?;
        writeln!(f, "check max_abs_entry<=delta {}", flag(self.entry_bound))?;
        writeln!(f, "check roots<=2log2(delta) {}", flag(self.root_bound))?;
        writeln!(f, "check ocp<=log2(delta) {}", flag(self.ocp_bound))?;
        writeln!(f, "check delta<=2^ocp*max_abs_entry^roots {}", flag(self.converse_bound))
    }
}

/// Computes Δ, ‖A‖∞, |K|, OCP and checks the four inequalities exactly
/// (logarithms are cleared: 2^|K| ≤ Δ², 2^OCP ≤ Δ).
pub fn check_dmod_bounds(a: &TwoNonzeroMatrix) -> Result<DmodReport> {
    let delta = max_abs_subdeterminant(a)?;
    let g = to_rooted_signed_graph(a);
    let ocp = ocp_exact(&g)?;
    let max_abs_entry = a.max_abs_entry();
    let roots = g.roots().len();
    let two = BigInt::from(2);
    let pow2 = |e: usize| Pow::pow(&two, e);
    Ok(DmodReport {
        entry_bound: max_abs_entry <= delta,
        root_bound: pow2(roots) <= &delta * &delta,
        ocp_bound: pow2(ocp) <= delta,
        converse_bound: delta <= pow2(ocp) * Pow::pow(&max_abs_entry, roots),
        log2_delta_floor: delta.bits() - 1,
        delta,
        max_abs_entry,
        roots,
        ocp,
    })
}
