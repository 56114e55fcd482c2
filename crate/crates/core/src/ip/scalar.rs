//! Integer arithmetic used by the solvers: i128 when every intermediate
//! provably fits, BigInt otherwise.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Rem, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::matrix::IpInstance;

pub(crate) trait Scalar:
    Clone
    + Ord
    + Send
    + Sync
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Rem<Output = Self>
{
    fn from_big(b: &BigInt) -> Self;
    fn from_usize(x: usize) -> Self;
    fn to_big(&self) -> BigInt;

    fn zero() -> Self {
        Self::from_usize(0)
    }

    fn one() -> Self {
        Self::from_usize(1)
    }
}

impl Scalar for i128 {
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("value checked to fit")
    }

    fn from_usize(x: usize) -> Self {
        x as i128
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }

    fn from_usize(x: usize) -> Self {
        BigInt::from(x)
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

pub(crate) fn div_floor<S: Scalar>(a: S, b: S) -> S {
    let q = a.clone() / b.clone();
    let r = a % b.clone();
    if r != S::zero() && ((r < S::zero()) != (b < S::zero())) {
        q - S::one()
    } else {
        q
    }
}

pub(crate) fn div_ceil<S: Scalar>(a: S, b: S) -> S {
    S::zero() - div_floor(S::zero() - a, b)
}

// 2^40-bounded data keeps every sum of at most 2^20 products below 2^101.
const SMALL_BITS: u64 = 40;

/// True when i128 arithmetic cannot overflow on this instance.
pub(crate) fn fits_i128(inst: &IpInstance) -> bool {
    let small = |x: &BigInt| x.bits() <= SMALL_BITS;
    inst.var_count() <= 1 << 20
        && inst.w.iter().chain(&inst.l).chain(&inst.u).chain(&inst.b).all(small)
        && inst.a.rows().iter().all(|r| small(&r.a.1) && small(&r.b.1))
}

/// Row `coef_a · x[col_a] + coef_b · x[col_b] ≤ rhs`.
#[derive(Clone, Debug)]
pub(crate) struct PRow<S> {
    pub ca: usize,
    pub a: S,
    pub cb: usize,
    pub b: S,
    pub rhs: S,
}

/// An instance converted to the working scalar.
#[derive(Clone, Debug)]
pub(crate) struct Prepared<S> {
    pub w: Vec<S>,
    pub l: Vec<S>,
    pub u: Vec<S>,
    pub rows: Vec<PRow<S>>,
}

impl<S: Scalar> Prepared<S> {
    pub fn new(inst: &IpInstance) -> Self {
        let conv = |v: &[BigInt]| v.iter().map(S::from_big).collect::<Vec<_>>();
        let rows = inst
            .a
            .rows()
            .iter()
            .zip(&inst.b)
            .map(|(r, rhs)| PRow {
                ca: r.a.0,
                a: S::from_big(&r.a.1),
                cb: r.b.0,
                b: S::from_big(&r.b.1),
                rhs: S::from_big(rhs),
            })
            .collect();
        Prepared { w: conv(&inst.w), l: conv(&inst.l), u: conv(&inst.u), rows }
    }
}
