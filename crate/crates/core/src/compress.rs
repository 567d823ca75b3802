//! Frank-Tardos weight compression.
//!
//! `reduce_vector` replaces a rational vector `w` by an integer vector that
//! agrees with `w` on the sign of `w . b` for every integer test vector `b`
//! of 1-norm below the requested radius, while keeping every entry below
//! `2^(4r^3) * N^(r(r+2))` (Frank and Tardos, Combinatorica 1987).
//!
//! The construction is the classical support-reduction loop: scale the
//! current vector so its largest entry is +-1, take a simultaneous
//! Diophantine approximation `p/q` of quality `1/N`, and recurse on the
//! residual `q*w - p`. The residual vanishes at the scaling pivot, so the
//! support shrinks every round and there are at most `r` rounds. The rounded
//! layers are then recombined with multipliers large enough that an earlier
//! layer dominates whenever it is nonzero on a test vector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::diophantine::simultaneous_approx;
use crate::error::{Error, Result};
use crate::ratio::{sign_int, sign_rat, IntegerVector, RationalVector};

/// A vector together with the sign-preservation radius `N`: signs of `w . b`
/// are preserved for every integer `b` with `||b||_1 <= N - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionRequest {
    pub vector: RationalVector,
    pub radius: BigInt,
}

impl CompressionRequest {
    pub fn new(vector: RationalVector, radius: BigInt) -> Result<Self> {
        if radius < BigInt::one() {
            return Err(Error::validation(format!(
                "sign-preservation radius must be at least 1, got {radius}"
            )));
        }
        Ok(CompressionRequest { vector, radius })
    }
}

/// Replace `w` by a small integer vector with the same sign pattern against
/// all test vectors of 1-norm at most `radius - 1`. Deterministic.
pub fn reduce_vector(req: &CompressionRequest) -> IntegerVector {
    let r = req.vector.len();
    // Approximation quality 1/N makes every residual contribution
    // |(q*w - p) . b| <= (N-1)/N < 1, so integer layers decide all signs.
    // For N = 1 nothing is constrained and any quality below 1 works.
    let eps_denom = std::cmp::max(req.radius.clone(), BigInt::from(2));
    let eps = BigRational::new(BigInt::one(), eps_denom);

    let mut layers: Vec<Vec<BigInt>> = Vec::new();
    let mut current: Vec<BigRational> = req.vector.entries.clone();
    loop {
        let Some(pivot) = argmax_abs(&current) else {
            break;
        };
        let scale = current[pivot].abs();
        let alpha: Vec<BigRational> = current.iter().map(|x| x / &scale).collect();
        let support: Vec<usize> = (0..r).filter(|&i| !alpha[i].is_zero()).collect();
        let restricted =
            RationalVector::new(support.iter().map(|&i| alpha[i].clone()).collect());
        let (p_restricted, q) =
            simultaneous_approx(&restricted, &eps).expect("quality is in (0,1)");
        let mut layer = vec![BigInt::zero(); r];
        for (slot, &i) in support.iter().enumerate() {
            layer[i] = p_restricted.entries[slot].clone();
        }
        let q_rat = BigRational::from_integer(q);
        current = alpha
            .iter()
            .zip(&layer)
            .map(|(a, p)| a * &q_rat - BigRational::from_integer(p.clone()))
            .collect();
        // the pivot entry is +-1, so q*alpha - p is an integer below 1 there
        debug_assert!(current[pivot].is_zero());
        layers.push(layer);
    }

    // Combine innermost-first: each layer is scaled past everything after it.
    let ball = &req.radius - BigInt::one();
    let mut acc = vec![BigInt::zero(); r];
    for layer in layers.iter().rev() {
        let max_abs = acc
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let multiplier = &ball * max_abs + BigInt::one();
        for (a, p) in acc.iter_mut().zip(layer) {
            *a += &multiplier * p;
        }
    }
    IntegerVector::new(acc)
}

fn argmax_abs(values: &[BigRational]) -> Option<usize> {
    let mut best: Option<(usize, BigRational)> = None;
    for (i, v) in values.iter().enumerate() {
        let a = v.abs();
        if a.is_zero() {
            continue;
        }
        match &best {
            Some((_, cur)) if *cur >= a => {}
            _ => best = Some((i, a)),
        }
    }
    best.map(|(i, _)| i)
}

/// Compress the inequality `w . x <= bound` over binary `x`: the joint vector
/// `(w, bound)` is reduced with radius `len(w) + 2`, which covers every test
/// vector `(x, -1)`.
pub fn compress_inequality(
    weights: &RationalVector,
    bound: &BigRational,
) -> (IntegerVector, BigInt) {
    let mut joint = weights.entries.clone();
    joint.push(bound.clone());
    let radius = BigInt::from(weights.len() as u64 + 2);
    let req = CompressionRequest::new(RationalVector::new(joint), radius)
        .expect("radius is at least 2");
    let mut reduced = reduce_vector(&req);
    let new_bound = reduced.entries.pop().expect("joint vector is nonempty");
    (reduced, new_bound)
}

/// Outcome of an exhaustive sign-preservation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompressionVerdict {
    Pass,
    /// First test vector (smallest 1-norm, ties lexicographically from
    /// positive to negative) on which the signs disagree.
    Fail { witness: Vec<BigInt> },
}

impl CompressionVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, CompressionVerdict::Pass)
    }
}

/// Exhaustively compare `sign(w . b)` with `sign(w_bar . b)` over all integer
/// vectors with `||b||_1 <= radius - 1`. Refuses when the `(2N-1)^r` ball
/// estimate exceeds `cap`.
pub fn verify_compression(
    original: &RationalVector,
    reduced: &IntegerVector,
    radius: &BigInt,
    cap: u64,
) -> Result<CompressionVerdict> {
    if original.len() != reduced.len() {
        return Err(Error::validation(format!(
            "vector lengths differ: {} vs {}",
            original.len(),
            reduced.len()
        )));
    }
    if *radius < BigInt::one() {
        return Err(Error::validation("radius must be at least 1"));
    }
    let r = original.len() as u32;
    let diameter = BigInt::from(2) * radius - BigInt::one();
    let ball_estimate = num_traits::pow(diameter, r as usize);
    if ball_estimate > BigInt::from(cap) {
        let needed = u128::try_from(&ball_estimate).unwrap_or(u128::MAX);
        return Err(Error::RefusedScale {
            needed,
            cap: cap as u128,
        });
    }
    let budget = i64::try_from(radius - BigInt::one()).expect("radius fits after cap check");
    let mut prefix = vec![BigInt::zero(); original.len()];
    let verdict = search_shells(original, reduced, budget, &mut prefix);
    Ok(match verdict {
        Some(witness) => CompressionVerdict::Fail { witness },
        None => CompressionVerdict::Pass,
    })
}

fn search_shells(
    original: &RationalVector,
    reduced: &IntegerVector,
    budget: i64,
    prefix: &mut Vec<BigInt>,
) -> Option<Vec<BigInt>> {
    for norm in 0..=budget {
        if let Some(w) = search_shell(original, reduced, norm, 0, prefix) {
            return Some(w);
        }
    }
    None
}

/// Enumerate the shell of exact 1-norm `remaining` over coordinates
/// `position..`, lexicographically descending, and report the first mismatch.
fn search_shell(
    original: &RationalVector,
    reduced: &IntegerVector,
    remaining: i64,
    position: usize,
    prefix: &mut Vec<BigInt>,
) -> Option<Vec<BigInt>> {
    let r = original.len();
    if position == r {
        if remaining != 0 {
            return None;
        }
        let lhs = sign_rat(&original.dot_int(prefix));
        let rhs = sign_int(&reduced.dot(prefix));
        if lhs != rhs {
            return Some(prefix.clone());
        }
        return None;
    }
    if position == r - 1 {
        // last coordinate must absorb the whole remaining norm
        let candidates: &[i64] = if remaining == 0 { &[0] } else { &[remaining, -remaining] };
        for &v in candidates {
            prefix[position] = BigInt::from(v);
            if let Some(w) = search_shell(original, reduced, 0, position + 1, prefix) {
                return Some(w);
            }
        }
        prefix[position] = BigInt::zero();
        return None;
    }
    let mut v = remaining;
    while v >= -remaining {
        prefix[position] = BigInt::from(v);
        if let Some(w) = search_shell(original, reduced, remaining - v.abs(), position + 1, prefix)
        {
            return Some(w);
        }
        v -= 1;
    }
    prefix[position] = BigInt::zero();
    None
}

/// The worst-case entry bound `2^(4r^3) * N^(r(r+2))` for a compressed vector
/// of length `dim` at radius `N`.
pub fn compression_norm_bound(dim: usize, radius: &BigInt) -> BigInt {
    if dim == 0 {
        return BigInt::one();
    }
    let d = dim as u64;
    let two_pow = BigInt::one() << (4 * d * d * d);
    let radius_pow = num_traits::pow(radius.clone(), (d * (d + 2)) as usize);
    two_pow * radius_pow
}

/// Check the Frank-Tardos magnitude bound for every entry.
pub fn within_norm_bound(reduced: &IntegerVector, radius: &BigInt) -> bool {
    reduced.max_abs() <= compression_norm_bound(reduced.len(), radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn request(entries: Vec<BigRational>, radius: i64) -> CompressionRequest {
        CompressionRequest::new(RationalVector::new(entries), BigInt::from(radius)).unwrap()
    }

    #[test]
    fn zero_vector_stays_zero() {
        let out = reduce_vector(&request(vec![rat(0, 1); 3], 4));
        assert_eq!(out, IntegerVector::zeros(3));
    }

    #[test]
    fn two_thirds_one_third_keeps_order_and_signs() {
        let req = request(vec![rat(2, 3), rat(1, 3)], 2);
        let out = reduce_vector(&req);
        // signs of b = (1,0), (0,1), (1,-1) must survive
        assert_eq!(sign_int(&out.entries[0]), 1);
        assert_eq!(sign_int(&out.entries[1]), 1);
        assert!(out.entries[0] > out.entries[1]);
        let verdict =
            verify_compression(&req.vector, &out, &req.radius, 1 << 20).unwrap();
        assert!(verdict.passed());
        assert!(within_norm_bound(&out, &req.radius));
    }

    #[test]
    fn positive_scaling_gives_identical_sign_patterns() {
        let a = request(vec![rat(1, 2)], 3);
        let b = request(vec![rat(5, 2)], 3);
        let out_a = reduce_vector(&a);
        let out_b = reduce_vector(&b);
        for bv in [-2i64, -1, 0, 1, 2] {
            let b_vec = vec![BigInt::from(bv)];
            assert_eq!(sign_int(&out_a.dot(&b_vec)), sign_int(&out_b.dot(&b_vec)));
        }
    }

    #[test]
    fn reduction_is_deterministic() {
        let req = request(vec![rat(355, 113), rat(-22, 7), rat(1, 1000003)], 5);
        assert_eq!(reduce_vector(&req), reduce_vector(&req));
    }

    #[test]
    fn radius_must_be_positive() {
        assert!(CompressionRequest::new(RationalVector::default(), BigInt::zero()).is_err());
    }

    #[test]
    fn verify_passes_half_versus_one() {
        let w = RationalVector::new(vec![rat(1, 2)]);
        let wbar = IntegerVector::new(vec![BigInt::one()]);
        let verdict = verify_compression(&w, &wbar, &BigInt::from(2), 1 << 10).unwrap();
        assert!(verdict.passed());
    }

    #[test]
    fn verify_reports_first_witness() {
        let w = RationalVector::new(vec![rat(1, 2), rat(1, 2)]);
        let wbar = IntegerVector::new(vec![BigInt::one(), BigInt::from(-1)]);
        let verdict = verify_compression(&w, &wbar, &BigInt::from(2), 1 << 10).unwrap();
        assert_eq!(
            verdict,
            CompressionVerdict::Fail {
                witness: vec![BigInt::zero(), BigInt::one()],
            }
        );
    }

    #[test]
    fn verify_empty_vector_passes() {
        let verdict = verify_compression(
            &RationalVector::default(),
            &IntegerVector::default(),
            &BigInt::from(7),
            16,
        )
        .unwrap();
        assert!(verdict.passed());
    }

    #[test]
    fn verify_refuses_oversized_balls() {
        let w = RationalVector::from_ints([1, 2, 3, 4, 5]);
        let wbar = IntegerVector::new((1..=5).map(BigInt::from).collect());
        let err = verify_compression(&w, &wbar, &BigInt::from(50), 1 << 10).unwrap_err();
        assert!(matches!(err, Error::RefusedScale { .. }));
    }

    #[test]
    fn inequality_on_zero_weights_keeps_everything_feasible() {
        let (wbar, bound) = compress_inequality(&RationalVector::from_ints([0, 0]), &rat(0, 1));
        for x in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            let lhs = wbar.dot(&[BigInt::from(x[0]), BigInt::from(x[1])]);
            assert!(lhs <= bound);
        }
    }

    #[test]
    fn unit_weights_budget_one_keeps_exactly_singletons() {
        let w = RationalVector::from_ints([1, 1]);
        let (wbar, bound) = compress_inequality(&w, &rat(1, 1));
        let mut feasible = Vec::new();
        for x in [[0i64, 0], [1, 0], [0, 1], [1, 1]] {
            let lhs = wbar.dot(&[BigInt::from(x[0]), BigInt::from(x[1])]);
            if lhs <= bound {
                feasible.push(x);
            }
        }
        assert_eq!(feasible, vec![[0, 0], [1, 0], [0, 1]]);
    }

    #[test]
    fn thirds_budget_two_thirds_keeps_pairs() {
        let w = RationalVector::new(vec![rat(1, 3); 3]);
        let (wbar, bound) = compress_inequality(&w, &rat(2, 3));
        for mask in 0u32..8 {
            let x: Vec<BigInt> = (0..3).map(|i| BigInt::from((mask >> i) & 1)).collect();
            let ones = mask.count_ones();
            let lhs = wbar.dot(&x);
            assert_eq!(lhs <= bound, ones <= 2, "mask {mask:03b}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_compressions_verify_and_respect_the_bound(
            nums in proptest::collection::vec(-1000i64..1000, 1..4),
            dens in proptest::collection::vec(1i64..1000, 1..4),
            radius in 2i64..5,
            scale_num in 1i64..20,
        ) {
            let len = nums.len().min(dens.len());
            let entries: Vec<BigRational> =
                (0..len).map(|i| rat(nums[i], dens[i])).collect();
            let req = request(entries.clone(), radius);
            let out = reduce_vector(&req);
            prop_assert!(within_norm_bound(&out, &req.radius));
            let verdict = verify_compression(&req.vector, &out, &req.radius, 1 << 20).unwrap();
            prop_assert!(verdict.passed());

            // positive scaling leaves the integer output's sign pattern intact
            let scaled = request(
                entries.iter().map(|e| e * rat(scale_num, 3)).collect(),
                radius,
            );
            let out_scaled = reduce_vector(&scaled);
            let budget = (radius - 1) as usize;
            let mut test = vec![BigInt::zero(); len];
            check_cross_signs(&out, &out_scaled, budget as i64, 0, &mut test);
        }
    }

    fn check_cross_signs(
        a: &IntegerVector,
        b: &IntegerVector,
        budget: i64,
        pos: usize,
        test: &mut Vec<BigInt>,
    ) {
        if pos == test.len() {
            assert_eq!(sign_int(&a.dot(test)), sign_int(&b.dot(test)));
            return;
        }
        for v in -budget..=budget {
            test[pos] = BigInt::from(v);
            check_cross_signs(a, b, budget - v.abs(), pos + 1, test);
        }
        test[pos] = BigInt::zero();
    }
}
