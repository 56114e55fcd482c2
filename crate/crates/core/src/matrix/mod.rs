//! Two-nonzero-per-row matrices, IP instances and their rooted signed graphs.

mod dmod;
pub mod format;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::sgraph::{Edge, Parity, RootedSignedGraph};

pub use dmod::{check_dmod_bounds, determinant, max_abs_subdeterminant, DmodReport, SUBDET_MAX_MINOR};

/// One row: two distinct columns with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub a: (usize, BigInt),
    pub b: (usize, BigInt),
}

impl Row {
    pub fn entries(&self) -> [(usize, &BigInt); 2] {
        [(self.a.0, &self.a.1), (self.b.0, &self.b.1)]
    }

    pub fn coef(&self, col: usize) -> Option<&BigInt> {
        if self.a.0 == col {
            Some(&self.a.1)
        } else if self.b.0 == col {
            Some(&self.b.1)
        } else {
            None
        }
    }
}

/// An integer matrix with exactly two nonzero entries in every row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoNonzeroMatrix {
    cols: usize,
    rows: Vec<Row>,
}

impl TwoNonzeroMatrix {
    pub fn new(cols: usize, rows: Vec<Row>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.a.0 == r.b.0 {
                return Err(Error::Matrix(format!("row {i} uses column {} twice", r.a.0)));
            }
            if r.a.0 >= cols || r.b.0 >= cols {
                return Err(Error::Matrix(format!("row {i} names a column outside 0..{cols}")));
            }
            if r.a.1.is_zero() || r.b.1.is_zero() {
                return Err(Error::Matrix(format!("row {i} has a zero coefficient")));
            }
        }
        Ok(TwoNonzeroMatrix { cols, rows })
    }

    pub fn from_dense(entries: &[Vec<BigInt>]) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(entries.len());
        for (i, r) in entries.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Matrix(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            let nz: Vec<(usize, BigInt)> =
                r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
            let [a, b]: [(usize, BigInt); 2] = nz.try_into().map_err(|v: Vec<_>| {
                Error::Matrix(format!("row {i} has {} nonzero entries, expected 2", v.len()))
            })?;
            rows.push(Row { a, b });
        }
        Self::new(cols, rows)
    }

    pub fn from_i64(entries: &[Vec<i64>]) -> Result<Self> {
        let big: Vec<Vec<BigInt>> = entries.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_dense(&big)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn dense(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![BigInt::zero(); self.cols];
                d[r.a.0] = r.a.1.clone();
                d[r.b.0] = r.b.1.clone();
                d
            })
            .collect()
    }

    /// ‖A‖∞: largest absolute entry (0 for a matrix without rows).
    pub fn max_abs_entry(&self) -> BigInt {
        self.rows
            .iter()
            .flat_map(|r| [r.a.1.abs(), r.b.1.abs()])
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Multiplies column `c` by −1.
    pub fn negate_column(&self, c: usize) -> Self {
        let mut m = self.clone();
        for r in &mut m.rows {
            if r.a.0 == c {
                r.a.1 = -r.a.1.clone();
            }
            if r.b.0 == c {
                r.b.1 = -r.b.1.clone();
            }
        }
        m
    }
}

/// G⁺•(A): column vertices, row edges, same-sign rows odd, roots at the
/// columns holding an entry outside {−1, 0, 1}.
pub fn to_rooted_signed_graph(a: &TwoNonzeroMatrix) -> RootedSignedGraph {
    let one = BigInt::from(1);
    let edges = a.rows.iter().enumerate().map(|(i, r)| {
        let same = r.a.1.is_positive() == r.b.1.is_positive();
        Edge::new(i, r.a.0, r.b.0, if same { Parity::Odd } else { Parity::Even })
    });
    let roots: Vec<usize> = (0..a.cols)
        .filter(|&c| a.rows.iter().any(|r| r.coef(c).is_some_and(|x| x.abs() > one)))
        .collect();
    RootedSignedGraph::new(0..a.cols, edges, roots).expect("matrix rows are valid edges")
}

/// max{wᵀx : Ax ≤ b, ℓ ≤ x ≤ u, x integral}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpInstance {
    pub a: TwoNonzeroMatrix,
    pub b: Vec<BigInt>,
    pub w: Vec<BigInt>,
    pub l: Vec<BigInt>,
    pub u: Vec<BigInt>,
}

impl IpInstance {
    pub fn new(a: TwoNonzeroMatrix, b: Vec<BigInt>, w: Vec<BigInt>, l: Vec<BigInt>, u: Vec<BigInt>) -> Result<Self> {
        let (m, n) = (a.row_count(), a.col_count());
        if b.len() != m {
            return Err(Error::Instance(format!("b has {} entries, expected {m}", b.len())));
        }
        for (name, v) in [("w", &w), ("l", &l), ("u", &u)] {
            if v.len() != n {
                return Err(Error::Instance(format!("{name} has {} entries, expected {n}", v.len())));
            }
        }
        if let Some(j) = (0..n).find(|&j| l[j] > u[j]) {
            return Err(Error::Instance(format!("l[{j}] > u[{j}]")));
        }
        Ok(IpInstance { a, b, w, l, u })
    }

    pub fn var_count(&self) -> usize {
        self.a.col_count()
    }

    /// d = ‖u − ℓ‖∞.
    pub fn box_width(&self) -> BigInt {
        self.l.iter().zip(&self.u).map(|(l, u)| u - l).max().unwrap_or_else(BigInt::zero)
    }

    pub fn graph(&self) -> RootedSignedGraph {
        to_rooted_signed_graph(&self.a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_examples() {
        let g = to_rooted_signed_graph(&TwoNonzeroMatrix::from_i64(&[vec![1, -1]]).unwrap());
        assert_eq!(g.edge(0).unwrap().parity, Parity::Even);
        assert!(g.roots().is_empty());

        let g = to_rooted_signed_graph(&TwoNonzeroMatrix::from_i64(&[vec![1, 1]]).unwrap());
        assert_eq!(g.edge(0).unwrap().parity, Parity::Odd);

        let g = to_rooted_signed_graph(&TwoNonzeroMatrix::from_i64(&[vec![2, 1], vec![-1, 1]]).unwrap());
        assert_eq!(g.edge(0).unwrap().parity, Parity::Odd);
        assert_eq!(g.edge(1).unwrap().parity, Parity::Even);
        assert_eq!(g.roots().iter().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn row_support_checked() {
        assert!(TwoNonzeroMatrix::from_i64(&[vec![1, 0, 0]]).is_err());
        assert!(TwoNonzeroMatrix::from_i64(&[vec![1, 1, 1]]).is_err());
        assert!(TwoNonzeroMatrix::from_i64(&[vec![0, 0]]).is_err());
        // zero columns are fine
        let a = TwoNonzeroMatrix::from_i64(&[vec![1, 0, 1]]).unwrap();
        assert_eq!(to_rooted_signed_graph(&a).vertex_count(), 3);
    }

    #[test]
    fn column_negation_is_shifting() {
        let a = TwoNonzeroMatrix::from_i64(&[vec![2, 1, 0], vec![0, -1, 3], vec![1, 0, 1]]).unwrap();
        for c in 0..3 {
            assert_eq!(
                to_rooted_signed_graph(&a.negate_column(c)),
                to_rooted_signed_graph(&a).shift_at(c).unwrap()
            );
        }
    }

    #[test]
    fn instance_dimensions() {
        let a = TwoNonzeroMatrix::from_i64(&[vec![1, 1]]).unwrap();
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(IpInstance::new(a.clone(), v(&[1]), v(&[1, 1]), v(&[0, 0]), v(&[1, 1])).is_ok());
        assert!(IpInstance::new(a.clone(), v(&[]), v(&[1, 1]), v(&[0, 0]), v(&[1, 1])).is_err());
        assert!(IpInstance::new(a, v(&[1]), v(&[1, 1]), v(&[2, 0]), v(&[1, 1])).is_err());
    }
}
