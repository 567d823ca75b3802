//! Simultaneous Diophantine approximation by lattice basis reduction.
//!
//! Given rationals `alpha_1..alpha_r` and `0 < eps < 1`, find a single
//! denominator `q >= 1` and integers `p_i` with `|alpha_i - p_i/q| <= eps/q`
//! and `q <= 2^(r(r+1)/4) * eps^-r`. This is the classical reduction-based
//! construction: reduce the lattice spanned by the unit vectors together with
//! `(-alpha, C)` and read the answer off the first reduced basis vector.
//!
//! The textbook proof takes `C = 2^(-r(r+1)/4) * eps^(r+1)`, which is
//! irrational whenever `r(r+1)/4` is fractional. `C` only ever enters through
//! the Gram matrix, and `C^2 = 2^(-r(r+1)/2) * eps^(2r+2)` has an integer
//! exponent, so running the reduction on the Gram matrix keeps every step
//! exact and preserves the classical denominator bound verbatim.
//!
//! Smaller exponents make the lattice cheaper to reduce, so a deterministic
//! ladder of larger `C^2` values is tried first; every candidate answer is
//! checked against the contract exactly, and the final ladder step is the
//! worst-case value for which the LLL guarantee applies.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lll::reduce_gram;
use crate::ratio::{IntegerVector, RationalVector};

/// Approximate `alpha` by `p/q` with error at most `eps/q` per coordinate.
pub fn simultaneous_approx(
    alpha: &RationalVector,
    eps: &BigRational,
) -> Result<(IntegerVector, BigInt)> {
    if *eps <= BigRational::zero() || *eps >= BigRational::one() {
        return Err(Error::validation(format!(
            "approximation quality must satisfy 0 < eps < 1, got {eps}"
        )));
    }
    let r = alpha.len();
    if r == 0 {
        return Ok((IntegerVector::default(), BigInt::one()));
    }
    let full_exponent = (r as u64) * (r as u64 + 1) / 2;
    let mut rungs: Vec<u64> = vec![
        (r as u64 + 2).min(full_exponent),
        full_exponent.div_ceil(2),
        full_exponent,
    ];
    rungs.sort_unstable();
    rungs.dedup();

    let sq = |x: &BigRational| x * x;
    let eps_sq_pow_r: BigRational = num_traits::pow(sq(eps), r);
    // q <= 2^(r(r+1)/4) eps^-r, squared so every quantity stays rational
    let q_bound_sq = BigRational::from_integer(BigInt::one() << full_exponent) / &eps_sq_pow_r;

    for &exponent in &rungs {
        let c_sq = num_traits::pow(sq(eps), r + 1)
            / BigRational::from_integer(BigInt::one() << exponent);
        let gram = approximation_gram(&alpha.entries, &c_sq);
        let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
        let reduction = reduce_gram(&gram, &delta).expect("approximation lattice is full rank");
        let first = &reduction.transform[0];
        let mut p: Vec<BigInt> = first[..r].to_vec();
        let mut q = first[r].clone();
        if q.is_zero() {
            continue;
        }
        if q.is_negative() {
            q = -q;
            for x in &mut p {
                *x = -x.clone();
            }
        }
        let q_rat = BigRational::from_integer(q.clone());
        let contract_ok = alpha
            .entries
            .iter()
            .zip(&p)
            .all(|(a, pi)| (a * &q_rat - BigRational::from_integer(pi.clone())).abs() <= *eps);
        let bound_ok = sq(&q_rat) <= q_bound_sq;
        if contract_ok && bound_ok {
            return Ok((IntegerVector::new(p), q));
        }
    }
    unreachable!("final ladder step carries the worst-case LLL guarantee");
}

/// Gram matrix of the lattice spanned by `e_1..e_r` and `(-alpha, C)`.
fn approximation_gram(alpha: &[BigRational], c_sq: &BigRational) -> Vec<Vec<BigRational>> {
    let r = alpha.len();
    let mut gram = vec![vec![BigRational::zero(); r + 1]; r + 1];
    for (i, row) in gram.iter_mut().enumerate().take(r) {
        row[i] = BigRational::one();
        row[r] = -alpha[i].clone();
    }
    for i in 0..r {
        gram[r][i] = -alpha[i].clone();
    }
    gram[r][r] = alpha.iter().map(|a| a * a).sum::<BigRational>() + c_sq;
    gram
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    /// Check the full contract of a returned approximation exactly.
    fn assert_admissible(alpha: &RationalVector, eps: &BigRational, p: &IntegerVector, q: &BigInt) {
        assert!(*q >= BigInt::one());
        let q_rat = BigRational::from_integer(q.clone());
        for (a, pi) in alpha.entries.iter().zip(&p.entries) {
            let err = (a - BigRational::from_integer(pi.clone()) / &q_rat).abs();
            assert!(err <= eps / &q_rat, "entry error {err} exceeds eps/q");
        }
        let r = alpha.len() as u64;
        let lhs = num_traits::pow(q_rat, 2) * num_traits::pow(eps * eps, r as usize);
        let rhs = BigRational::from_integer(BigInt::one() << (r * (r + 1) / 2));
        assert!(lhs <= rhs, "denominator exceeds the classical bound");
    }

    #[test]
    fn zero_vector_needs_no_denominator() {
        for eps in [rat(1, 2), rat(9, 10), rat(1, 100)] {
            let alpha = RationalVector::from_ints([0, 0, 0]);
            let (p, q) = simultaneous_approx(&alpha, &eps).unwrap();
            assert_eq!(q, BigInt::one());
            assert!(p.entries.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn one_half_within_quarter() {
        let alpha = RationalVector::new(vec![rat(1, 2)]);
        let eps = rat(1, 4);
        // an admissible answer exists within the bound (q = 2, p = 1);
        // exhaustive search below re-derives this independently
        let mut witness = None;
        'outer: for q in 1i64..=8 {
            for p in -8i64..=8 {
                if (rat(1, 2) - rat(p, q)).abs() <= eps.clone() / rat(q, 1) {
                    witness = Some((p, q));
                    break 'outer;
                }
            }
        }
        assert!(witness.is_some());
        let (p, q) = simultaneous_approx(&alpha, &eps).unwrap();
        assert_admissible(&alpha, &eps, &p, &q);
    }

    #[test]
    fn thirds_within_tenth() {
        let alpha = RationalVector::new(vec![rat(1, 3), rat(2, 3)]);
        let eps = rat(1, 10);
        // q = 3, p = (1, 2) is admissible: exact match
        let (p, q) = simultaneous_approx(&alpha, &eps).unwrap();
        assert_admissible(&alpha, &eps, &p, &q);
    }

    #[test]
    fn eps_domain_checked() {
        let alpha = RationalVector::new(vec![rat(1, 2)]);
        for eps in [rat(0, 1), rat(1, 1), rat(3, 2), rat(-1, 2)] {
            assert!(simultaneous_approx(&alpha, &eps).is_err());
        }
    }

    #[test]
    fn empty_vector() {
        let (p, q) = simultaneous_approx(&RationalVector::default(), &rat(1, 2)).unwrap();
        assert!(p.is_empty());
        assert_eq!(q, BigInt::one());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn random_vectors_satisfy_the_contract(
            nums in proptest::collection::vec(-50i64..50, 1..4),
            eps_den in 2i64..12,
        ) {
            let alpha = RationalVector::new(
                nums.iter().map(|&n| rat(n, 7)).collect(),
            );
            let eps = rat(1, eps_den);
            let (p, q) = simultaneous_approx(&alpha, &eps).unwrap();
            assert_admissible(&alpha, &eps, &p, &q);
        }
    }
}
