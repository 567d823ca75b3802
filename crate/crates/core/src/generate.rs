//! Seeded random instance families.
//!
//! Reproducibility matters more than variety here: every family is driven by
//! a ChaCha8 stream cipher seeded from a single u64, so a corpus is pinned by
//! `(family, seed, knobs)` across platforms and releases.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fewsizes::{GroupedKnapsack, GroupedSubsetSum, WeightGroup};
use crate::numeric::{BinPackingInstance, KnapsackInstance, MaxCutInstance, SubsetSumInstance};
use crate::oracles::CnfFormula;
use crate::polyprog::{IppInstance, Monomial, Polynomial};
use crate::ratio::RationalVector;
use crate::setsystems::{ElementId, ElementSet, SetSystemInstance, SetVariant};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rational with numerator in `[-max_num, max_num]` and denominator
/// in `[1, max_den]`.
pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> BigRational {
    let num = rng.random_range(-max_num..=max_num);
    let den = rng.random_range(1..=max_den);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Uniform nonnegative rational.
pub fn random_nonneg_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> BigRational {
    let num = rng.random_range(0..=max_num);
    let den = rng.random_range(1..=max_den);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_rational_vector(
    rng: &mut ChaCha8Rng,
    len: usize,
    max_num: i64,
    max_den: i64,
) -> RationalVector {
    RationalVector::new((0..len).map(|_| random_rational(rng, max_num, max_den)).collect())
}

/// Knapsack with rational data sized to keep exhaustive verification cheap.
pub fn random_knapsack(rng: &mut ChaCha8Rng, items: usize) -> KnapsackInstance {
    let weights = random_rational_vector(rng, items, 20, 8);
    let profits = random_rational_vector(rng, items, 20, 8);
    // capacity and target in the range of achievable sums
    let scale = items as i64 + 1;
    KnapsackInstance {
        weights,
        profits,
        capacity: random_rational(rng, 10 * scale, 8),
        profit_target: random_rational(rng, 10 * scale, 8),
    }
}

pub fn random_subset_sum(rng: &mut ChaCha8Rng, items: usize, max_value: u64) -> SubsetSumInstance {
    let values: Vec<BigUint> = (0..items)
        .map(|_| BigUint::from(rng.random_range(0..=max_value)))
        .collect();
    // half the time aim at an achievable sum
    let target = if rng.random_bool(0.5) {
        let mut sum = BigUint::ZERO;
        for v in &values {
            if rng.random_bool(0.5) {
                sum += v;
            }
        }
        sum
    } else {
        BigUint::from(rng.random_range(0..=max_value * (items as u64).max(1)))
    };
    SubsetSumInstance {
        items: values,
        target,
    }
}

/// Up to `sets` distinct d-subsets of a universe of the given size.
fn random_family(
    rng: &mut ChaCha8Rng,
    universe: &[ElementId],
    d: usize,
    sets: usize,
) -> Vec<ElementSet> {
    let mut family: Vec<ElementSet> = Vec::new();
    let mut seen: BTreeSet<ElementSet> = BTreeSet::new();
    let mut attempts = 0usize;
    while family.len() < sets && attempts < 60 * sets + 60 {
        attempts += 1;
        let mut set = BTreeSet::new();
        while set.len() < d {
            set.insert(universe[rng.random_range(0..universe.len())]);
        }
        if seen.insert(set.clone()) {
            family.push(set);
        }
    }
    family
}

pub fn random_hitting_set(
    rng: &mut ChaCha8Rng,
    d: usize,
    k: u64,
    universe_size: usize,
    sets: usize,
) -> SetSystemInstance {
    let universe: Vec<ElementId> = (1..=universe_size as u64).collect();
    let family = random_family(rng, &universe, d, sets);
    let element_weights = (0..universe.len())
        .map(|_| random_nonneg_rational(rng, 12, 4))
        .collect();
    // weight bound around what k moderate elements cost
    let weight_bound = random_nonneg_rational(rng, 12 * k as i64 + 6, 4);
    SetSystemInstance {
        variant: SetVariant::HittingSet,
        set_size: d,
        budget: k,
        weight_bound,
        universe,
        element_weights,
        family,
        set_weights: Vec::new(),
    }
}

pub fn random_set_packing(
    rng: &mut ChaCha8Rng,
    d: usize,
    k: u64,
    universe_size: usize,
    sets: usize,
) -> SetSystemInstance {
    let universe: Vec<ElementId> = (1..=universe_size as u64).collect();
    let family = random_family(rng, &universe, d, sets);
    let set_weights: Vec<BigRational> = (0..family.len())
        .map(|_| random_rational(rng, 12, 4))
        .collect();
    let weight_bound = random_rational(rng, 12 * k as i64 + 6, 4);
    SetSystemInstance {
        variant: SetVariant::SetPacking,
        set_size: d,
        budget: k,
        weight_bound,
        universe,
        element_weights: Vec::new(),
        family,
        set_weights,
    }
}

/// Random graph with weights at least one and a target that lands on either
/// side of half the total weight.
pub fn random_max_cut(rng: &mut ChaCha8Rng, vertices: usize, edge_permille: u32) -> MaxCutInstance {
    let mut edges = Vec::new();
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.random_range(0..1000) < edge_permille {
                let weight = BigRational::one()
                    + random_nonneg_rational(rng, 4, 3);
                edges.push((u, v, weight));
            }
        }
    }
    let total: BigRational = edges.iter().map(|(_, _, w)| w.clone()).sum();
    let numer = rng.random_range(1..=1000);
    // target between 1 and slightly above the total weight
    let cut_target = std::cmp::max(
        BigRational::one(),
        total * BigRational::new(BigInt::from(numer), BigInt::from(900)),
    );
    MaxCutInstance {
        num_vertices: vertices,
        edges,
        cut_target,
    }
}

pub fn random_bin_packing(
    rng: &mut ChaCha8Rng,
    items: usize,
    bin_size: u64,
    bins: u64,
) -> BinPackingInstance {
    BinPackingInstance {
        items: (0..items)
            .map(|_| BigUint::from(rng.random_range(1..=bin_size + bin_size / 4 + 1)))
            .collect(),
        bin_size: BigUint::from(bin_size),
        bins,
    }
}

pub fn random_grouped_knapsack(
    rng: &mut ChaCha8Rng,
    groups: usize,
    total_items: usize,
) -> GroupedKnapsack {
    let groups = groups.max(1).min(total_items.max(1));
    let mut weights: BTreeSet<(i64, i64)> = BTreeSet::new();
    while weights.len() < groups {
        weights.insert((rng.random_range(1..=12), rng.random_range(1..=4)));
    }
    let mut remaining = total_items.max(groups);
    let weights: Vec<(i64, i64)> = weights.into_iter().collect();
    let mut out = Vec::new();
    for (i, (num, den)) in weights.iter().enumerate() {
        let left = groups - i - 1;
        let take = if left == 0 {
            remaining
        } else {
            rng.random_range(1..=remaining - left)
        };
        remaining -= take;
        let mut values: Vec<BigInt> = (0..take)
            .map(|_| BigInt::from(rng.random_range(0..=20i64)))
            .collect();
        values.sort_by(|a, b| b.cmp(a));
        out.push(WeightGroup {
            weight: BigRational::new(BigInt::from(*num), BigInt::from(*den)),
            values,
        });
    }
    GroupedKnapsack {
        groups: out,
        capacity: random_nonneg_rational(rng, 12 * total_items as i64, 4),
        profit_target: random_nonneg_rational(rng, 20 * total_items as i64, 1),
    }
}

pub fn random_grouped_subset_sum(
    rng: &mut ChaCha8Rng,
    sizes: usize,
    max_multiplicity: u64,
) -> GroupedSubsetSum {
    let mut distinct: BTreeSet<u64> = BTreeSet::new();
    while distinct.len() < sizes {
        distinct.insert(rng.random_range(1..=30));
    }
    let sizes: Vec<BigUint> = distinct.into_iter().map(BigUint::from).collect();
    let multiplicities: Vec<u64> = (0..sizes.len())
        .map(|_| rng.random_range(1..=max_multiplicity))
        .collect();
    let target = if rng.random_bool(0.5) {
        sizes
            .iter()
            .zip(&multiplicities)
            .map(|(s, &m)| s * BigUint::from(rng.random_range(0..=m)))
            .sum()
    } else {
        BigUint::from(rng.random_range(0..=30 * max_multiplicity * sizes.len() as u64))
    };
    GroupedSubsetSum {
        sizes,
        multiplicities,
        target,
    }
}

/// Sparse polynomial with distinct exponent vectors of total degree at most
/// `degree`.
pub fn random_polynomial(
    rng: &mut ChaCha8Rng,
    vars: usize,
    degree: u32,
    terms: usize,
) -> Polynomial {
    let mut exponents: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut attempts = 0;
    while exponents.len() < terms && attempts < 50 * terms + 50 {
        attempts += 1;
        let mut remaining = degree;
        let exps: Vec<u32> = (0..vars)
            .map(|_| {
                let e = rng.random_range(0..=remaining);
                remaining -= e;
                e
            })
            .collect();
        exponents.insert(exps);
    }
    let monomials = exponents
        .into_iter()
        .map(|exponents| {
            let mut coefficient = random_rational(rng, 10, 6);
            if coefficient == BigRational::zero() {
                coefficient = BigRational::one();
            }
            Monomial {
                exponents,
                coefficient,
            }
        })
        .collect();
    Polynomial::new(vars, degree, monomials).expect("generated monomials are valid")
}

pub fn random_ipp(
    rng: &mut ChaCha8Rng,
    vars: usize,
    degree: u32,
    terms: usize,
    constraints: usize,
    box_radius: u64,
) -> IppInstance {
    let objective = random_polynomial(rng, vars, degree, terms);
    let constraints = (0..constraints)
        .map(|_| {
            (
                random_polynomial(rng, vars, degree, terms),
                random_rational(rng, 20, 4),
            )
        })
        .collect();
    IppInstance {
        objective,
        threshold: random_rational(rng, 20, 4),
        constraints,
        box_radius: BigUint::from(box_radius.max(1)),
    }
}

pub fn random_cnf(rng: &mut ChaCha8Rng, vars: usize, clauses: usize) -> CnfFormula {
    let lits = |rng: &mut ChaCha8Rng| {
        let v = rng.random_range(1..=vars as i64);
        if rng.random_bool(0.5) {
            v
        } else {
            -v
        }
    };
    let clauses = (0..clauses)
        .map(|_| [lits(rng), lits(rng), lits(rng)])
        .collect();
    CnfFormula::new(vars, clauses).expect("generated literals are in range")
}

use num_traits::{One, Zero};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_per_seed() {
        let mut a = rng_from_seed(42);
        let mut b = rng_from_seed(42);
        assert_eq!(random_knapsack(&mut a, 5), random_knapsack(&mut b, 5));
        assert_eq!(
            random_hitting_set(&mut a, 2, 2, 8, 12),
            random_hitting_set(&mut b, 2, 2, 8, 12)
        );
        assert_eq!(random_cnf(&mut a, 4, 4), random_cnf(&mut b, 4, 4));
        let mut c = rng_from_seed(43);
        assert_ne!(random_knapsack(&mut a, 5), random_knapsack(&mut c, 5));
    }

    #[test]
    fn generated_instances_validate() {
        let mut rng = rng_from_seed(7);
        for _ in 0..20 {
            random_knapsack(&mut rng, 6).validate().unwrap();
            random_hitting_set(&mut rng, 2, 2, 8, 10).validate().unwrap();
            random_set_packing(&mut rng, 2, 2, 8, 10).validate().unwrap();
            random_max_cut(&mut rng, 6, 400).validate().unwrap();
            random_bin_packing(&mut rng, 6, 12, 2).validate().unwrap();
            random_grouped_knapsack(&mut rng, 2, 6).validate().unwrap();
            random_grouped_subset_sum(&mut rng, 3, 6).validate().unwrap();
            random_ipp(&mut rng, 2, 2, 3, 1, 2).validate().unwrap();
        }
    }
}
