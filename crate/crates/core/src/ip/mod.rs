//! Solvers for max{wᵀx : Ax ≤ b, ℓ ≤ x ≤ u, x ∈ ℤⁿ} with two nonzeros per
//! row of A.

mod dp;
pub mod format;
mod leaf;
mod oracle;
mod scalar;

use std::fmt;

use num_bigint::BigInt;

use crate::matrix::IpInstance;

pub use dp::{solve_dp, solve_dp_with_tables, DpTables, DpTree, DP_MAX_ASSIGNMENTS};
pub use leaf::solve_leaf;
pub use oracle::{brute_force_oracle, ORACLE_MAX_POINTS};

/// An integer or −∞.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Finite(BigInt),
}

impl ExtInt {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            ExtInt::Finite(x) => Some(x),
            ExtInt::NegInf => None,
        }
    }

    /// −∞ stays −∞.
    pub fn add_finite(&self, x: &BigInt) -> ExtInt {
        match self {
            ExtInt::Finite(v) => ExtInt::Finite(v + x),
            ExtInt::NegInf => ExtInt::NegInf,
        }
    }

    pub fn sub_finite(&self, x: &BigInt) -> ExtInt {
        match self {
            ExtInt::Finite(v) => ExtInt::Finite(v - x),
            ExtInt::NegInf => ExtInt::NegInf,
        }
    }
}

impl From<i64> for ExtInt {
    fn from(x: i64) -> Self {
        ExtInt::Finite(BigInt::from(x))
    }
}

impl From<BigInt> for ExtInt {
    fn from(x: BigInt) -> Self {
        ExtInt::Finite(x)
    }
}

impl std::ops::Add for ExtInt {
    type Output = ExtInt;

    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => ExtInt::Finite(a + b),
            _ => ExtInt::NegInf,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Finite(x) => write!(f, "{x}"),
            ExtInt::NegInf => f.write_str("-inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
}

impl Status {
    pub fn keyword(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
        }
    }

    /// Process exit code for the CLI: 0 optimal, 2 infeasible.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Optimal => 0,
            Status::Infeasible => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Optimal { objective: BigInt, x: Vec<BigInt> },
    Infeasible,
}

impl SolveResult {
    pub fn status(&self) -> Status {
        match self {
            SolveResult::Optimal { .. } => Status::Optimal,
            SolveResult::Infeasible => Status::Infeasible,
        }
    }

    pub fn objective(&self) -> Option<&BigInt> {
        match self {
            SolveResult::Optimal { objective, .. } => Some(objective),
            SolveResult::Infeasible => None,
        }
    }

    pub fn witness(&self) -> Option<&[BigInt]> {
        match self {
            SolveResult::Optimal { x, .. } => Some(x),
            SolveResult::Infeasible => None,
        }
    }
}

/// wᵀx.
pub fn objective_value(inst: &IpInstance, x: &[BigInt]) -> BigInt {
    inst.w.iter().zip(x).map(|(w, x)| w * x).sum()
}

/// True when x has the right length, lies in the box and satisfies every
/// row.
pub fn check_witness(inst: &IpInstance, x: &[BigInt]) -> bool {
    x.len() == inst.var_count()
        && x.iter().zip(&inst.l).zip(&inst.u).all(|((x, l), u)| l <= x && x <= u)
        && inst
            .a
            .rows()
            .iter()
            .zip(&inst.b)
            .all(|(r, b)| &r.a.1 * &x[r.a.0] + &r.b.1 * &x[r.b.0] <= *b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::TwoNonzeroMatrix;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn witness_checks() {
        let a = TwoNonzeroMatrix::from_i64(&[vec![1, 1]]).unwrap();
        let i = IpInstance::new(a, big(&[1]), big(&[1, 1]), big(&[0, 0]), big(&[1, 1])).unwrap();
        assert!(check_witness(&i, &big(&[1, 0])));
        assert!(!check_witness(&i, &big(&[2, -1])));
        assert!(!check_witness(&i, &big(&[1, 1])));
        assert!(!check_witness(&i, &big(&[1])));
        assert_eq!(objective_value(&i, &big(&[1, 0])), BigInt::from(1));
    }

    #[test]
    fn ext_int_order() {
        assert!(ExtInt::NegInf < ExtInt::from(-1000));
        assert!(ExtInt::from(1) < ExtInt::from(2));
        assert_eq!(ExtInt::NegInf + ExtInt::from(3), ExtInt::NegInf);
        assert_eq!(ExtInt::from(2).sub_finite(&BigInt::from(5)), ExtInt::from(-3));
        assert_eq!(ExtInt::NegInf.to_string(), "-inf");
    }
}
