//! Exhaustive enumeration over the box.

use num_bigint::BigInt;

use super::scalar::{fits_i128, Prepared, Scalar};
use super::SolveResult;
use crate::error::{Error, Result};
use crate::matrix::IpInstance;

/// Largest box the oracle enumerates.
pub const ORACLE_MAX_POINTS: u64 = 10_000_000;

fn enumerate<S: Scalar>(inst: &IpInstance) -> SolveResult {
    let p = Prepared::<S>::new(inst);
    let n = p.w.len();
    let mut x = p.l.clone();
    let mut best: Option<(S, Vec<S>)> = None;
    loop {
        let feasible = p
            .rows
            .iter()
            .all(|r| r.a.clone() * x[r.ca].clone() + r.b.clone() * x[r.cb].clone() <= r.rhs);
        if feasible {
            let val = p.w.iter().zip(&x).fold(S::zero(), |acc, (w, x)| acc + w.clone() * x.clone());
            if best.as_ref().is_none_or(|(b, _)| val > *b) {
                best = Some((val, x.clone()));
            }
        }
        // odometer, last variable fastest, so points come in lex order
        let mut i = n;
        loop {
            if i == 0 {
                return match best {
                    Some((v, x)) => SolveResult::Optimal { objective: v.to_big(), x: x.iter().map(S::to_big).collect() },
                    None => SolveResult::Infeasible,
                };
            }
            i -= 1;
            if x[i] < p.u[i] {
                x[i] = x[i].clone() + S::one();
                break;
            }
            x[i] = p.l[i].clone();
        }
    }
}

/// Optimum by trying every point of the box; the witness is the
/// lexicographically smallest optimal point.
pub fn brute_force_oracle(inst: &IpInstance) -> Result<SolveResult> {
    let mut points = BigInt::from(1);
    for (l, u) in inst.l.iter().zip(&inst.u) {
        points *= u - l + 1u32;
        if points > BigInt::from(ORACLE_MAX_POINTS) {
            return Err(Error::limit("oracle box size", ORACLE_MAX_POINTS as u128));
        }
    }
    Ok(if fits_i128(inst) { enumerate::<i128>(inst) } else { enumerate::<BigInt>(inst) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ip::check_witness;
    use crate::matrix::TwoNonzeroMatrix;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn box_only() {
        let a = TwoNonzeroMatrix::new(1, Vec::new()).unwrap();
        let i = IpInstance::new(a, Vec::new(), big(&[3]), big(&[-2]), big(&[2])).unwrap();
        assert_eq!(
            brute_force_oracle(&i).unwrap(),
            SolveResult::Optimal { objective: BigInt::from(6), x: big(&[2]) }
        );
    }

    #[test]
    fn small_examples() {
        let a = TwoNonzeroMatrix::from_i64(&[vec![1, 1]]).unwrap();
        let i = IpInstance::new(a, big(&[1]), big(&[1, 1]), big(&[0, 0]), big(&[1, 1])).unwrap();
        let r = brute_force_oracle(&i).unwrap();
        assert_eq!(r.witness().unwrap(), big(&[0, 1]).as_slice());
        assert!(check_witness(&i, r.witness().unwrap()));
        let a = TwoNonzeroMatrix::from_i64(&[vec![2, 2]]).unwrap();
        let i = IpInstance::new(a, big(&[1]), big(&[1, 1]), big(&[1, 1]), big(&[2, 2])).unwrap();
        assert_eq!(brute_force_oracle(&i).unwrap(), SolveResult::Infeasible);
    }

    #[test]
    fn guard() {
        let a = TwoNonzeroMatrix::new(2, Vec::new()).unwrap();
        let i = IpInstance::new(a, Vec::new(), big(&[1, 1]), big(&[0, 0]), big(&[10_000, 10_000])).unwrap();
        assert!(brute_force_oracle(&i).is_err());
    }
}
