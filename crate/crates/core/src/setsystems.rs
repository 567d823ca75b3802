//! Sunflower finding and the kernels for weighted d-hitting set and weighted
//! d-set packing.
//!
//! Both kernels follow the same two-step pattern: shrink the family with the
//! Erdős-Rado sunflower rule until its size is bounded by a function of the
//! parameter alone, then compress the remaining weights so the whole instance
//! fits in polynomially many bits. Deleting a petal of a large sunflower is
//! safe because the surviving petals still pin down every candidate solution.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::compress::{reduce_vector, within_norm_bound, CompressionRequest};
use crate::error::{Error, Result};
use crate::ratio::{int_bits, rat_bits, RationalVector};
use crate::report::KernelReport;

pub type ElementId = u64;
pub type ElementSet = BTreeSet<ElementId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetVariant {
    HittingSet,
    SetPacking,
}

/// A weighted set-system instance shared by the hitting-set and set-packing
/// kernels. Exactly one of `element_weights` / `set_weights` is populated,
/// depending on the variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystemInstance {
    pub variant: SetVariant,
    /// Every set in the family has exactly this many elements.
    pub set_size: usize,
    /// Solution budget k: sets picked (packing) or elements picked (hitting).
    pub budget: u64,
    /// Weight bound W: upper bound for hitting set, lower bound for packing.
    pub weight_bound: BigRational,
    pub universe: Vec<ElementId>,
    /// Aligned with `universe`; populated for hitting set, nonnegative.
    pub element_weights: Vec<BigRational>,
    pub family: Vec<ElementSet>,
    /// Aligned with `family`; populated for set packing.
    pub set_weights: Vec<BigRational>,
}

impl SetSystemInstance {
    pub fn validate(&self) -> Result<()> {
        if self.set_size == 0 {
            return Err(Error::validation("set size d must be at least 1"));
        }
        let universe: BTreeSet<ElementId> = self.universe.iter().copied().collect();
        if universe.len() != self.universe.len() {
            return Err(Error::validation("universe contains duplicate elements"));
        }
        let mut seen: BTreeSet<&ElementSet> = BTreeSet::new();
        for (i, set) in self.family.iter().enumerate() {
            if set.len() != self.set_size {
                return Err(Error::validation(format!(
                    "set {i} has {} elements, expected {}",
                    set.len(),
                    self.set_size
                )));
            }
            if let Some(stray) = set.iter().find(|e| !universe.contains(e)) {
                return Err(Error::validation(format!(
                    "set {i} uses element {stray} outside the universe"
                )));
            }
            if !seen.insert(set) {
                return Err(Error::validation(format!("set {i} appears twice")));
            }
        }
        match self.variant {
            SetVariant::HittingSet => {
                if self.element_weights.len() != self.universe.len() {
                    return Err(Error::validation(
                        "hitting set needs one weight per universe element",
                    ));
                }
                if !self.set_weights.is_empty() {
                    return Err(Error::validation("hitting set carries no set weights"));
                }
                if let Some(w) = self.element_weights.iter().find(|w| w.is_negative()) {
                    // restricting the universe to covered elements is only
                    // sound when dropping an element can never lower a
                    // solution's weight
                    return Err(Error::validation(format!(
                        "element weights must be nonnegative, got {w}"
                    )));
                }
            }
            SetVariant::SetPacking => {
                if self.set_weights.len() != self.family.len() {
                    return Err(Error::validation("set packing needs one weight per set"));
                }
                if !self.element_weights.is_empty() {
                    return Err(Error::validation("set packing carries no element weights"));
                }
            }
        }
        Ok(())
    }

    /// Total encoding size: weights, the bound, element ids, and set members.
    pub fn encoding_bits(&self) -> u64 {
        let ids: u64 = self
            .universe
            .iter()
            .map(|&e| int_bits(&BigInt::from(e)))
            .sum();
        let members: u64 = self
            .family
            .iter()
            .flat_map(|s| s.iter())
            .map(|&e| int_bits(&BigInt::from(e)))
            .sum();
        let weights: u64 = self
            .element_weights
            .iter()
            .chain(&self.set_weights)
            .map(rat_bits)
            .sum();
        ids + members + weights + rat_bits(&self.weight_bound)
    }
}

/// A family of sets whose pairwise intersections all equal one common core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sunflower {
    /// Indices into the family that was searched.
    pub petals: Vec<usize>,
    pub core: ElementSet,
}

impl Sunflower {
    /// Exact check of the defining property against the searched family.
    pub fn is_valid(&self, family: &[ElementSet]) -> bool {
        for (i, &a) in self.petals.iter().enumerate() {
            for &b in &self.petals[i + 1..] {
                let inter: ElementSet = family[a].intersection(&family[b]).copied().collect();
                if inter != self.core {
                    return false;
                }
            }
        }
        self.petals.iter().all(|&p| self.core.is_subset(&family[p]))
    }
}

/// Find a (k+1)-sunflower in a family of d-sets. Guaranteed to succeed when
/// `|family| > d! * k^d` (Erdős and Rado 1960); may return `None` otherwise.
///
/// Greedy and deterministic: take a maximal pairwise-disjoint subfamily in
/// input order; if it is too small, recurse on the most frequent element
/// (ties broken by smallest element id).
pub fn find_sunflower(family: &[ElementSet], set_size: usize, k: u64) -> Option<Sunflower> {
    let want = k as usize + 1;
    let indexed: Vec<(usize, ElementSet)> =
        family.iter().cloned().enumerate().collect();
    search_sunflower(&indexed, set_size, want)
}

fn search_sunflower(
    sets: &[(usize, ElementSet)],
    set_size: usize,
    want: usize,
) -> Option<Sunflower> {
    let mut petals = Vec::with_capacity(want);
    let mut used: ElementSet = BTreeSet::new();
    for (index, set) in sets {
        if set.iter().all(|e| !used.contains(e)) {
            petals.push(*index);
            used.extend(set.iter().copied());
            if petals.len() == want {
                return Some(Sunflower {
                    petals,
                    core: BTreeSet::new(),
                });
            }
        }
    }
    if set_size == 0 {
        return None;
    }
    let mut freq: BTreeMap<ElementId, usize> = BTreeMap::new();
    for (_, set) in sets {
        for &e in set {
            *freq.entry(e).or_insert(0) += 1;
        }
    }
    // ascending iteration keeps the smallest id among maxima
    let (&pivot, _) = freq.iter().max_by_key(|(_, &c)| c)?;
    let sub: Vec<(usize, ElementSet)> = sets
        .iter()
        .filter(|(_, s)| s.contains(&pivot))
        .map(|(i, s)| {
            let mut t = s.clone();
            t.remove(&pivot);
            (*i, t)
        })
        .collect();
    let mut flower = search_sunflower(&sub, set_size - 1, want)?;
    flower.core.insert(pivot);
    Some(flower)
}

/// `d! * base^d` as a big integer, the family-size threshold of the rule.
fn family_threshold(set_size: usize, base: u64) -> BigUint {
    let mut factorial = BigUint::one();
    for i in 2..=set_size as u64 {
        factorial *= BigUint::from(i);
    }
    factorial * BigUint::from(base).pow(set_size as u32)
}

/// Shrink a hitting-set family to at most `d!(k+1)^d` sets, restrict the
/// universe to covered elements, and compress the weights.
pub fn kernelize_hitting_set(
    inst: &SetSystemInstance,
) -> Result<(SetSystemInstance, KernelReport)> {
    inst.validate()?;
    if inst.variant != SetVariant::HittingSet {
        return Err(Error::validation("kernelize_hitting_set needs a hitting-set instance"));
    }
    let mut report = KernelReport::new("hitting-set");
    report.original_bits = inst.encoding_bits();

    let d = inst.set_size;
    let k = inst.budget;
    let threshold = family_threshold(d, k + 1);
    let mut family: Vec<(usize, ElementSet)> =
        inst.family.iter().cloned().enumerate().collect();
    while BigUint::from(family.len()) > threshold {
        let sets: Vec<ElementSet> = family.iter().map(|(_, s)| s.clone()).collect();
        // one more petal than the budget-forced k+1, so one petal is spare
        let flower = find_sunflower(&sets, d, k + 1)
            .expect("families above d!(k+1)^d contain a (k+2)-sunflower");
        debug_assert!(flower.is_valid(&sets));
        let victim_pos = flower
            .petals
            .iter()
            .copied()
            .max_by_key(|&p| family[p].0)
            .expect("sunflower has petals");
        let (orig_index, set) = family.remove(victim_pos);
        report.rule_firings += 1;
        report.trace.push(format!(
            "dropped set {orig_index} {{{}}} from a {}-sunflower with core {{{}}}",
            join_ids(&set),
            flower.petals.len(),
            join_ids(&flower.core),
        ));
    }

    let kept_sets: Vec<ElementSet> = family.into_iter().map(|(_, s)| s).collect();
    let covered: ElementSet = kept_sets.iter().flatten().copied().collect();
    let universe: Vec<ElementId> = inst
        .universe
        .iter()
        .copied()
        .filter(|e| covered.contains(e))
        .collect();
    let weights: Vec<BigRational> = inst
        .universe
        .iter()
        .zip(&inst.element_weights)
        .filter(|(e, _)| covered.contains(e))
        .map(|(_, w)| w.clone())
        .collect();

    let radius = BigInt::from(k + 2);
    let (new_weights, new_bound) = compress_weights(&weights, &inst.weight_bound, &radius);
    report.compression_dim = Some(weights.len() + 1);
    report.compression_radius = Some(radius.clone());
    report.bound_ok = bound_ok(&new_weights, &new_bound, &radius);

    let kernel = SetSystemInstance {
        variant: SetVariant::HittingSet,
        set_size: d,
        budget: k,
        weight_bound: BigRational::from_integer(new_bound),
        universe,
        element_weights: new_weights
            .into_iter()
            .map(BigRational::from_integer)
            .collect(),
        family: kept_sets,
        set_weights: Vec::new(),
    };
    report.kernel_bits = kernel.encoding_bits();
    Ok((kernel, report))
}

/// Shrink a set-packing family to at most `d!(dk)^d` sets and compress the
/// set weights.
pub fn kernelize_set_packing(
    inst: &SetSystemInstance,
) -> Result<(SetSystemInstance, KernelReport)> {
    inst.validate()?;
    if inst.variant != SetVariant::SetPacking {
        return Err(Error::validation("kernelize_set_packing needs a set-packing instance"));
    }
    let mut report = KernelReport::new("set-packing");
    report.original_bits = inst.encoding_bits();

    let d = inst.set_size;
    let k = inst.budget;
    let threshold = family_threshold(d, d as u64 * k);
    let mut family: Vec<(usize, ElementSet, BigRational)> = inst
        .family
        .iter()
        .zip(&inst.set_weights)
        .enumerate()
        .map(|(i, (s, w))| (i, s.clone(), w.clone()))
        .collect();
    while BigUint::from(family.len()) > threshold {
        let sets: Vec<ElementSet> = family.iter().map(|(_, s, _)| s.clone()).collect();
        let flower = find_sunflower(&sets, d, d as u64 * k)
            .expect("families above d!(dk)^d contain a (dk+1)-sunflower");
        debug_assert!(flower.is_valid(&sets));
        // lightest petal; a heavier disjoint replacement always exists
        let victim_pos = flower
            .petals
            .iter()
            .copied()
            .min_by(|&a, &b| {
                family[a]
                    .2
                    .cmp(&family[b].2)
                    .then(family[b].0.cmp(&family[a].0))
            })
            .expect("sunflower has petals");
        let (orig_index, set, weight) = family.remove(victim_pos);
        report.rule_firings += 1;
        report.trace.push(format!(
            "dropped set {orig_index} {{{}}} (weight {weight}) from a {}-sunflower",
            join_ids(&set),
            flower.petals.len(),
        ));
    }

    let kept_sets: Vec<ElementSet> = family.iter().map(|(_, s, _)| s.clone()).collect();
    let weights: Vec<BigRational> = family.iter().map(|(_, _, w)| w.clone()).collect();
    let covered: ElementSet = kept_sets.iter().flatten().copied().collect();
    let universe: Vec<ElementId> = inst
        .universe
        .iter()
        .copied()
        .filter(|e| covered.contains(e))
        .collect();

    let radius = BigInt::from(k + 2);
    let (new_weights, new_bound) = compress_weights(&weights, &inst.weight_bound, &radius);
    report.compression_dim = Some(weights.len() + 1);
    report.compression_radius = Some(radius.clone());
    report.bound_ok = bound_ok(&new_weights, &new_bound, &radius);

    let kernel = SetSystemInstance {
        variant: SetVariant::SetPacking,
        set_size: d,
        budget: k,
        weight_bound: BigRational::from_integer(new_bound),
        universe,
        element_weights: Vec::new(),
        family: kept_sets,
        set_weights: new_weights.into_iter().map(BigRational::from_integer).collect(),
    };
    report.kernel_bits = kernel.encoding_bits();
    Ok((kernel, report))
}

/// Reduce `(weights..., bound)` jointly; radius `k+2` covers every comparison
/// of at most `k+1` weights against the bound.
fn compress_weights(
    weights: &[BigRational],
    bound: &BigRational,
    radius: &BigInt,
) -> (Vec<BigInt>, BigInt) {
    let mut joint = weights.to_vec();
    joint.push(bound.clone());
    let req = CompressionRequest::new(RationalVector::new(joint), radius.clone())
        .expect("radius at least 2");
    let mut reduced = reduce_vector(&req);
    let new_bound = reduced.entries.pop().expect("joint vector nonempty");
    (reduced.entries, new_bound)
}

fn bound_ok(weights: &[BigInt], bound: &BigInt, radius: &BigInt) -> bool {
    let mut joint = weights.to_vec();
    joint.push(bound.clone());
    within_norm_bound(&crate::ratio::IntegerVector::new(joint), radius)
}

fn join_ids(set: &ElementSet) -> String {
    set.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{
        solve_hitting_set_brute, solve_set_packing_brute, PackingMode,
    };

    fn set(elems: &[ElementId]) -> ElementSet {
        elems.iter().copied().collect()
    }

    fn rat(p: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(p))
    }

    fn hitting(
        d: usize,
        k: u64,
        bound: BigRational,
        universe: &[ElementId],
        weights: &[i64],
        family: &[&[ElementId]],
    ) -> SetSystemInstance {
        SetSystemInstance {
            variant: SetVariant::HittingSet,
            set_size: d,
            budget: k,
            weight_bound: bound,
            universe: universe.to_vec(),
            element_weights: weights.iter().map(|&w| rat(w)).collect(),
            family: family.iter().map(|s| set(s)).collect(),
            set_weights: Vec::new(),
        }
    }

    fn packing(
        d: usize,
        k: u64,
        bound: BigRational,
        universe: &[ElementId],
        family: &[(&[ElementId], i64)],
    ) -> SetSystemInstance {
        SetSystemInstance {
            variant: SetVariant::SetPacking,
            set_size: d,
            budget: k,
            weight_bound: bound,
            universe: universe.to_vec(),
            element_weights: Vec::new(),
            family: family.iter().map(|(s, _)| set(s)).collect(),
            set_weights: family.iter().map(|&(_, w)| rat(w)).collect(),
        }
    }

    #[test]
    fn shared_element_sunflower() {
        let family = vec![set(&[1, 2]), set(&[1, 3]), set(&[1, 4])];
        let flower = find_sunflower(&family, 2, 2).unwrap();
        assert_eq!(flower.petals.len(), 3);
        assert_eq!(flower.core, set(&[1]));
        assert!(flower.is_valid(&family));
    }

    #[test]
    fn disjoint_sets_make_a_coreless_sunflower() {
        let family = vec![set(&[1, 2]), set(&[3, 4]), set(&[5, 6])];
        let flower = find_sunflower(&family, 2, 2).unwrap();
        assert_eq!(flower.petals, vec![0, 1, 2]);
        assert!(flower.core.is_empty());
        assert!(flower.is_valid(&family));
    }

    #[test]
    fn at_the_threshold_none_is_acceptable() {
        // |F| = d! k^d = 2 * 1 = 2 for d = 2, k = 1; existence is only
        // guaranteed strictly above the threshold
        let family = vec![set(&[1, 2]), set(&[2, 3])];
        if let Some(flower) = find_sunflower(&family, 2, 1) {
            assert!(flower.is_valid(&family));
            assert_eq!(flower.petals.len(), 2);
        }
    }

    #[test]
    fn hitting_set_without_firings_keeps_the_family() {
        let inst = hitting(2, 2, rat(3), &[1, 2, 3, 4], &[1, 1, 2, 2], &[&[1, 2], &[3, 4]]);
        let (kernel, report) = kernelize_hitting_set(&inst).unwrap();
        assert_eq!(report.rule_firings, 0);
        assert_eq!(kernel.family, inst.family);
        assert!(report.bound_ok);
        let before = solve_hitting_set_brute(&inst, 1 << 20).unwrap();
        let after = solve_hitting_set_brute(&kernel, 1 << 20).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn singleton_family_shrinks_to_the_threshold() {
        let inst = hitting(
            1,
            1,
            rat(1),
            &[1, 2, 3, 4],
            &[1, 1, 1, 1],
            &[&[1], &[2], &[3], &[4]],
        );
        let (kernel, report) = kernelize_hitting_set(&inst).unwrap();
        // threshold d!(k+1)^d = 2, so two deletions happen; the remaining
        // two disjoint singletons still force a "no" for budget 1
        assert_eq!(kernel.family.len(), 2);
        assert_eq!(report.rule_firings, 2);
        assert!(!solve_hitting_set_brute(&inst, 1 << 20).unwrap());
        assert!(!solve_hitting_set_brute(&kernel, 1 << 20).unwrap());
    }

    #[test]
    fn hitting_set_rejects_negative_weights() {
        let inst = hitting(1, 1, rat(0), &[1], &[-1], &[&[1]]);
        assert!(matches!(kernelize_hitting_set(&inst), Err(Error::Validation(_))));
    }

    #[test]
    fn packing_keeps_small_families_untouched() {
        let inst = packing(
            2,
            2,
            rat(4),
            &[1, 2, 3, 4],
            &[(&[1, 2], 5), (&[3, 4], 3)],
        );
        let (kernel, report) = kernelize_set_packing(&inst).unwrap();
        assert_eq!(report.rule_firings, 0);
        assert_eq!(kernel.family, inst.family);
        assert!(report.bound_ok);
    }

    #[test]
    fn packing_rule_preserves_a_yes_answer() {
        let inst = packing(
            1,
            1,
            rat(4),
            &[1, 2, 3],
            &[(&[1], 5), (&[2], 3), (&[3], 2)],
        );
        let (kernel, report) = kernelize_set_packing(&inst).unwrap();
        // threshold d!(dk)^d = 1, so the lightest set goes twice
        assert_eq!(kernel.family.len(), 1);
        assert_eq!(report.rule_firings, 2);
        assert!(solve_set_packing_brute(&inst, PackingMode::ExactlyK, 1 << 20).unwrap());
        assert!(solve_set_packing_brute(&kernel, PackingMode::ExactlyK, 1 << 20).unwrap());
    }

    #[test]
    fn packing_survives_deleting_a_petal_used_by_an_optimum() {
        // d = 2, k = 2: threshold is 2 * 16 = 32, so 33 sets fire the rule.
        // 32 sets through core {1}, one set disjoint from all of them; the
        // lightest petal {1,2} participates in the optimal solution, and the
        // exchange argument must still find {1,j} + {99,100}.
        let mut family: Vec<(Vec<ElementId>, i64)> = vec![(vec![1, 2], 3)];
        for j in 3..34 {
            family.push((vec![1, j], 4));
        }
        family.push((vec![99, 100], 5));
        let mut universe: Vec<ElementId> = (1..34).collect();
        universe.push(99);
        universe.push(100);
        let refs: Vec<(&[ElementId], i64)> =
            family.iter().map(|(s, w)| (s.as_slice(), *w)).collect();
        let inst = packing(2, 2, rat(8), &universe, &refs);
        let (kernel, report) = kernelize_set_packing(&inst).unwrap();
        assert_eq!(report.rule_firings, 1);
        assert!(report
            .trace
            .iter()
            .any(|t| t.contains("dropped set 0")), "the lightest petal goes");
        let before = solve_set_packing_brute(&inst, PackingMode::ExactlyK, 1 << 20).unwrap();
        let after = solve_set_packing_brute(&kernel, PackingMode::ExactlyK, 1 << 20).unwrap();
        assert!(before);
        assert_eq!(before, after);
    }

    #[test]
    fn duplicate_sets_are_rejected() {
        let inst = hitting(2, 1, rat(1), &[1, 2], &[1, 1], &[&[1, 2], &[2, 1]]);
        assert!(matches!(inst.validate(), Err(Error::Validation(_))));
    }

    #[test]
    fn family_size_bounds_hold_after_kernelization() {
        // adversarial family: all pairs over ten elements, d = 2, k = 1
        let universe: Vec<ElementId> = (0..10).collect();
        let mut family = Vec::new();
        for a in 0..10u64 {
            for b in a + 1..10 {
                family.push(vec![a, b]);
            }
        }
        let refs: Vec<&[ElementId]> = family.iter().map(|s| s.as_slice()).collect();
        let weights = vec![1i64; 10];
        let inst = hitting(2, 1, rat(2), &universe, &weights, &refs);
        let (kernel, _) = kernelize_hitting_set(&inst).unwrap();
        assert!(kernel.family.len() as u64 <= 2 * 2 * 2); // d!(k+1)^d = 8
        let before = solve_hitting_set_brute(&inst, 1 << 20).unwrap();
        let after = solve_hitting_set_brute(&kernel, 1 << 20).unwrap();
        assert_eq!(before, after);

        let packing_refs: Vec<(&[ElementId], i64)> =
            family.iter().map(|s| (s.as_slice(), 1)).collect();
        let pack = packing(2, 1, rat(2), &universe, &packing_refs);
        let (pack_kernel, _) = kernelize_set_packing(&pack).unwrap();
        assert!(pack_kernel.family.len() as u64 <= 2 * 2 * 2); // d!(dk)^d = 8
        let before = solve_set_packing_brute(&pack, PackingMode::ExactlyK, 1 << 20).unwrap();
        let after = solve_set_packing_brute(&pack_kernel, PackingMode::ExactlyK, 1 << 20).unwrap();
        assert_eq!(before, after);
    }
}
