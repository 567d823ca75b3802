//! Brute-force reference solvers for every problem in scope, a tiny 3-SAT
//! enumerator, and Gurari's digit-column reduction from 3-SAT to subset sum.
//!
//! The solvers here are deliberately independent of the kernelizers: they
//! enumerate candidate solutions outright (guarded by a cap) and act as the
//! arbiter in every equivalence test. Exceeding a cap is an error, never an
//! approximation.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fewsizes::{GroupedKnapsack, GroupedSubsetSum};
use crate::numeric::{KnapsackInstance, MaxCutInstance};
use crate::setsystems::{SetSystemInstance, SetVariant};

/// Default candidate-enumeration budget shared by all oracles.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;

/// The default cap, overridable through `KERNELCUT_ENUM_CAP`.
pub fn default_enum_cap() -> u64 {
    std::env::var("KERNELCUT_ENUM_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

fn ensure_cap(needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        Err(Error::RefusedScale {
            needed,
            cap: cap as u128,
        })
    } else {
        Ok(())
    }
}

/// A 3-CNF formula; every clause has exactly three literals (repeats
/// allowed). Literal `v` is the DIMACS convention: positive for the
/// variable, negative for its negation, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[i64; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i64; 3]>) -> Result<Self> {
        for (i, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::validation(format!(
                        "clause {i} has literal {lit} outside 1..={num_vars}"
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as usize - 1;
                let value = assignment >> var & 1 == 1;
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }
}

/// The subset-sum instance produced by the digit-column encoding, plus the
/// digit matrix for audits. Row h of the matrix is digit position h (most
/// significant first); column j belongs to number j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GurariOutput {
    pub numbers: Vec<BigUint>,
    pub target: BigUint,
    pub digit_matrix: Vec<Vec<u8>>,
}

impl GurariOutput {
    /// Sum of one digit position across all numbers; carry-freeness needs
    /// every row sum below 10.
    pub fn row_sums(&self) -> Vec<u32> {
        self.digit_matrix
            .iter()
            .map(|row| row.iter().map(|&d| d as u32).sum())
            .collect()
    }
}

/// Gurari's reduction (Gurari, "An Introduction to the Theory of
/// Computation", 1989): one decimal digit position per variable equation
/// `v + not v = 1` and per clause equation `l1 + l2 + l3 + y + y' = 3`.
/// Column sums never exceed five, so no carries occur and the single
/// equation `a . z = C` is equivalent to the whole system.
///
/// Number order: variable columns `v_1, not v_1, ..., v_n, not v_n`, then
/// slack columns `y_1, y_1', ..., y_m, y_m'`.
pub fn gurari_reduce(phi: &CnfFormula) -> GurariOutput {
    let n = phi.num_vars;
    let m = phi.clauses.len();
    let rows = n + m;
    let cols = 2 * n + 2 * m;
    let mut digits = vec![vec![0u8; cols]; rows];
    for var in 0..n {
        digits[var][2 * var] = 1; // v_i
        digits[var][2 * var + 1] = 1; // not v_i
    }
    for (j, clause) in phi.clauses.iter().enumerate() {
        for &lit in clause {
            let var = lit.unsigned_abs() as usize - 1;
            let col = if lit > 0 { 2 * var } else { 2 * var + 1 };
            digits[n + j][col] += 1;
        }
        digits[n + j][2 * n + 2 * j] = 1; // y_j
        digits[n + j][2 * n + 2 * j + 1] = 1; // y_j'
    }
    let ten = BigUint::from(10u32);
    let numbers = (0..cols)
        .map(|col| {
            digits
                .iter()
                .fold(BigUint::zero(), |acc, row| &acc * &ten + BigUint::from(row[col]))
        })
        .collect();
    let target = (0..rows).fold(BigUint::zero(), |acc, row| {
        let digit = if row < n { 1u32 } else { 3 };
        &acc * &ten + BigUint::from(digit)
    });
    GurariOutput {
        numbers,
        target,
        digit_matrix: digits,
    }
}

/// Exhaustive satisfiability over all `2^n` assignments.
pub fn solve_sat_brute(phi: &CnfFormula, cap: u64) -> Result<bool> {
    if phi.num_vars >= 64 {
        return Err(Error::RefusedScale {
            needed: u128::MAX,
            cap: cap as u128,
        });
    }
    ensure_cap(1u128 << phi.num_vars, cap)?;
    Ok((0..1u64 << phi.num_vars).any(|a| phi.satisfied_by(a)))
}

/// Exhaustive subset sum over all subsets, with running-sum pruning.
pub fn solve_subset_sum_brute(items: &[BigUint], target: &BigUint, cap: u64) -> Result<bool> {
    if items.len() >= 128 {
        return Err(Error::RefusedScale {
            needed: u128::MAX,
            cap: cap as u128,
        });
    }
    ensure_cap(1u128 << items.len(), cap)?;
    fn search(items: &[BigUint], remaining: &BigUint) -> bool {
        if remaining.is_zero() {
            return true;
        }
        let Some((first, rest)) = items.split_first() else {
            return false;
        };
        if first <= remaining && search(rest, &(remaining - first)) {
            return true;
        }
        search(rest, remaining)
    }
    Ok(search(items, target))
}

/// Pseudo-polynomial dynamic program over reachable sums up to the target.
/// Cross-checks the enumeration oracle; refuses when the target exceeds the
/// cap.
pub fn solve_subset_sum_dp(items: &[BigUint], target: &BigUint, cap: u64) -> Result<bool> {
    let Ok(target) = usize::try_from(target) else {
        return Err(Error::RefusedScale {
            needed: u128::MAX,
            cap: cap as u128,
        });
    };
    ensure_cap(target as u128, cap)?;
    let mut reachable = vec![false; target + 1];
    reachable[0] = true;
    for item in items {
        let Ok(step) = usize::try_from(item) else {
            continue; // larger than the target, can never participate
        };
        if step > target {
            continue;
        }
        for sum in (step..=target).rev() {
            if reachable[sum - step] {
                reachable[sum] = true;
            }
        }
    }
    Ok(reachable[target])
}

/// Exhaustive knapsack decision over all binary choices.
pub fn solve_knapsack_brute(inst: &KnapsackInstance, cap: u64) -> Result<bool> {
    inst.validate()?;
    let n = inst.item_count();
    if n >= 64 {
        return Err(Error::RefusedScale {
            needed: u128::MAX,
            cap: cap as u128,
        });
    }
    ensure_cap(1u128 << n, cap)?;
    Ok((0..1u64 << n).any(|mask| {
        let choice: Vec<BigInt> = (0..n).map(|i| BigInt::from(mask >> i & 1)).collect();
        inst.accepts(&choice)
    }))
}

/// Exhaustive weighted hitting set: all element subsets of size at most the
/// budget, weight within the bound, hitting every set.
pub fn solve_hitting_set_brute(inst: &SetSystemInstance, cap: u64) -> Result<bool> {
    inst.validate()?;
    if inst.variant != SetVariant::HittingSet {
        return Err(Error::validation("expected a hitting-set instance"));
    }
    let n = inst.universe.len();
    let k = inst.budget as usize;
    ensure_cap(count_combinations(n, k), cap)?;
    let mut chosen: Vec<usize> = Vec::new();
    Ok(hitting_search(inst, &mut chosen, 0, k))
}

fn hitting_search(
    inst: &SetSystemInstance,
    chosen: &mut Vec<usize>,
    from: usize,
    budget: usize,
) -> bool {
    let weight: BigRational = chosen.iter().map(|&i| inst.element_weights[i].clone()).sum();
    if weight <= inst.weight_bound {
        let hits_all = inst.family.iter().all(|set| {
            chosen
                .iter()
                .any(|&i| set.contains(&inst.universe[i]))
        });
        if hits_all {
            return true;
        }
    }
    if chosen.len() == budget {
        return false;
    }
    for next in from..inst.universe.len() {
        chosen.push(next);
        if hitting_search(inst, chosen, next + 1, budget) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Whether the packing oracle asks for exactly k sets or at most k sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackingMode {
    ExactlyK,
    AtMostK,
}

/// Exhaustive weighted set packing: disjoint subfamilies with total weight
/// at least the bound.
pub fn solve_set_packing_brute(
    inst: &SetSystemInstance,
    mode: PackingMode,
    cap: u64,
) -> Result<bool> {
    inst.validate()?;
    if inst.variant != SetVariant::SetPacking {
        return Err(Error::validation("expected a set-packing instance"));
    }
    let k = inst.budget as usize;
    ensure_cap(count_combinations(inst.family.len(), k), cap)?;
    let mut chosen: Vec<usize> = Vec::new();
    Ok(packing_search(inst, mode, &mut chosen, 0, k))
}

fn packing_search(
    inst: &SetSystemInstance,
    mode: PackingMode,
    chosen: &mut Vec<usize>,
    from: usize,
    budget: usize,
) -> bool {
    let size_ok = match mode {
        PackingMode::ExactlyK => chosen.len() == budget,
        PackingMode::AtMostK => chosen.len() <= budget,
    };
    if size_ok {
        let weight: BigRational = chosen.iter().map(|&i| inst.set_weights[i].clone()).sum();
        if weight >= inst.weight_bound {
            return true;
        }
    }
    if chosen.len() == budget {
        return false;
    }
    for next in from..inst.family.len() {
        let disjoint = chosen
            .iter()
            .all(|&i| inst.family[i].is_disjoint(&inst.family[next]));
        if !disjoint {
            continue;
        }
        chosen.push(next);
        if packing_search(inst, mode, chosen, next + 1, budget) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn count_combinations(n: usize, k: usize) -> u128 {
    // sum of C(n, i) for i <= k, saturating
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..=k.min(n) {
        total = total.saturating_add(binom);
        binom = binom
            .saturating_mul((n - i) as u128)
            .checked_div((i + 1) as u128)
            .unwrap_or(u128::MAX);
    }
    total
}

/// Exact maximum cut weight by enumerating all `2^(v-1)` sides.
pub fn max_cut_optimum(inst: &MaxCutInstance, cap: u64) -> Result<BigRational> {
    inst.validate()?;
    let n = inst.num_vertices;
    if n >= 64 {
        return Err(Error::RefusedScale {
            needed: u128::MAX,
            cap: cap as u128,
        });
    }
    let count = 1u128 << n.saturating_sub(1);
    ensure_cap(count, cap)?;
    let mut best = BigRational::zero();
    // vertex 0 stays on the right; complements give the same cut
    for mask in 0..count as u64 {
        let in_left: Vec<bool> = (0..n).map(|v| v > 0 && mask >> (v - 1) & 1 == 1).collect();
        let weight = inst.cut_weight(&in_left);
        if weight > best {
            best = weight;
        }
    }
    Ok(best)
}

/// Exhaustive max-cut decision: is there a cut of weight at least the
/// target?
pub fn solve_max_cut_brute(inst: &MaxCutInstance, cap: u64) -> Result<bool> {
    Ok(max_cut_optimum(inst, cap)? >= inst.cut_target)
}

/// Exact k-bin packing by backtracking; returns an assignment when one
/// exists. The cap guards the worst-case `k^n` search space.
pub fn solve_bin_packing_brute(
    items: &[BigUint],
    bin_size: &BigUint,
    bins: u64,
    cap: u64,
) -> Result<Option<Vec<usize>>> {
    let needed = (bins as u128).saturating_pow(items.len().min(u32::MAX as usize) as u32);
    ensure_cap(needed, cap)?;
    let mut loads = vec![BigUint::zero(); bins as usize];
    let mut assignment = vec![usize::MAX; items.len()];
    if pack_items(items, bin_size, &mut loads, &mut assignment, 0) {
        Ok(Some(assignment))
    } else {
        Ok(None)
    }
}

fn pack_items(
    items: &[BigUint],
    bin_size: &BigUint,
    loads: &mut Vec<BigUint>,
    assignment: &mut Vec<usize>,
    depth: usize,
) -> bool {
    if depth == items.len() {
        return true;
    }
    let mut tried_empty = false;
    for j in 0..loads.len() {
        if loads[j].is_zero() {
            if tried_empty {
                break;
            }
            tried_empty = true;
        }
        if &loads[j] + &items[depth] <= *bin_size {
            loads[j] += &items[depth];
            assignment[depth] = j;
            if pack_items(items, bin_size, loads, assignment, depth + 1) {
                return true;
            }
            loads[j] -= &items[depth];
            assignment[depth] = usize::MAX;
        }
    }
    false
}

/// Exhaustive grouped-knapsack optimum over all item subsets (`None` when no
/// subset satisfies the capacity).
pub fn solve_grouped_knapsack_brute(
    inst: &GroupedKnapsack,
    cap: u64,
) -> Result<Option<BigRational>> {
    inst.validate()?;
    let items: Vec<(BigRational, BigInt)> = inst
        .groups
        .iter()
        .flat_map(|g| {
            g.values
                .iter()
                .map(|v| (g.weight.clone(), v.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    let n = items.len();
    if n >= 64 {
        return Err(Error::RefusedScale {
            needed: u128::MAX,
            cap: cap as u128,
        });
    }
    ensure_cap(1u128 << n, cap)?;
    let mut best: Option<BigRational> = None;
    for mask in 0..1u64 << n {
        let mut weight = BigRational::zero();
        let mut value = BigRational::zero();
        for (i, (w, v)) in items.iter().enumerate() {
            if mask >> i & 1 == 1 {
                weight += w;
                value += BigRational::from_integer(v.clone());
            }
        }
        if weight <= inst.capacity && best.as_ref().is_none_or(|b| value > *b) {
            best = Some(value);
        }
    }
    Ok(best)
}

/// Exhaustive grouped subset sum over all count vectors `0 <= x_i <= mu_i`.
pub fn solve_grouped_subset_sum_brute(inst: &GroupedSubsetSum, cap: u64) -> Result<bool> {
    inst.validate()?;
    let mut needed: u128 = 1;
    for &m in &inst.multiplicities {
        needed = needed.saturating_mul(m as u128 + 1);
    }
    ensure_cap(needed, cap)?;
    let mut counts = vec![0u64; inst.sizes.len()];
    loop {
        let sum: BigUint = inst
            .sizes
            .iter()
            .zip(&counts)
            .map(|(s, &c)| s * BigUint::from(c))
            .sum();
        if sum == inst.target {
            return Ok(true);
        }
        let mut idx = 0;
        loop {
            if idx == counts.len() {
                return Ok(false);
            }
            if counts[idx] < inst.multiplicities[idx] {
                counts[idx] += 1;
                break;
            }
            counts[idx] = 0;
            idx += 1;
        }
    }
}
