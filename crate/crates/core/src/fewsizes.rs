//! Knapsack with few distinct item weights and subset sum with few distinct
//! item sizes.
//!
//! Within one weight class it is always best to take the most valuable items
//! first, so the class's profit as a function of the count taken is a concave
//! prefix-sum function. Replacing it by the minimum of its chords turns the
//! whole problem into a small integer linear program over one count variable
//! and one profit variable per class. The subset-sum variant either
//! compresses the size vector and re-expands multiplicities by binary
//! splitting, or, when the multiplicities are large enough, solves the small
//! ILP directly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::compress::{reduce_vector, within_norm_bound, CompressionRequest};
use crate::error::{Error, Result};
use crate::numeric::SubsetSumInstance;
use crate::oracles::default_enum_cap;
use crate::ratio::{int_bits, rat_bits, IntegerVector, RationalVector};
use crate::report::KernelReport;

/// One weight class: a common weight and the item values of the class,
/// sorted non-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightGroup {
    pub weight: BigRational,
    pub values: Vec<BigInt>,
}

/// Knapsack instance grouped by its k distinct item weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedKnapsack {
    pub groups: Vec<WeightGroup>,
    pub capacity: BigRational,
    pub profit_target: BigRational,
}

impl GroupedKnapsack {
    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.groups.iter().enumerate() {
            if g.values.is_empty() {
                return Err(Error::validation(format!("group {i} has no items")));
            }
            if g.values.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::validation(format!(
                    "group {i} values must be sorted non-increasing"
                )));
            }
            if g.values.iter().any(|v| v.is_negative()) {
                // the profit variables of the ILP are nonnegative integers
                return Err(Error::validation(format!(
                    "group {i} has a negative value; values must be nonnegative integers"
                )));
            }
            for other in &self.groups[..i] {
                if other.weight == g.weight {
                    return Err(Error::validation(format!(
                        "duplicate group weight {}",
                        g.weight
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn item_count(&self) -> usize {
        self.groups.iter().map(|g| g.values.len()).sum()
    }

    pub fn encoding_bits(&self) -> u64 {
        let groups: u64 = self
            .groups
            .iter()
            .map(|g| {
                rat_bits(&g.weight) + g.values.iter().map(int_bits).sum::<u64>()
            })
            .sum();
        groups + rat_bits(&self.capacity) + rat_bits(&self.profit_target)
    }
}

/// Prefix sums of a sorted value list, with one chord per step; the prefix
/// function equals the minimum of the chords on `{0..n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcaveEnvelope {
    /// `prefix[s]` is the best total value of `s` items.
    pub prefix: Vec<BigInt>,
    pub pieces: Vec<LinearPiece>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPiece {
    pub slope: BigInt,
    pub intercept: BigInt,
}

impl LinearPiece {
    pub fn eval(&self, s: &BigInt) -> BigInt {
        &self.slope * s + &self.intercept
    }
}

impl ConcaveEnvelope {
    pub fn item_count(&self) -> usize {
        self.prefix.len() - 1
    }

    /// Pointwise minimum of the pieces; for `s` in `{0..n}` this equals
    /// `prefix[s]`.
    pub fn min_over_pieces(&self, s: &BigInt) -> Option<BigInt> {
        self.pieces.iter().map(|p| p.eval(s)).min()
    }
}

/// Build the chord envelope of the prefix sums of a non-increasing value
/// list. Piece `l` agrees with the prefix function at `l-1` and `l`.
pub fn build_envelope(values: &[BigInt]) -> Result<ConcaveEnvelope> {
    if values.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::validation("values must be sorted non-increasing"));
    }
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(BigInt::zero());
    for v in values {
        let last = prefix.last().expect("prefix starts at 0").clone();
        prefix.push(last + v);
    }
    let pieces = values
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            // passes through (idx, prefix[idx]) with slope v
            LinearPiece {
                slope: v.clone(),
                intercept: &prefix[idx] - v * BigInt::from(idx as u64),
            }
        })
        .collect();
    Ok(ConcaveEnvelope { prefix, pieces })
}

/// Inclusive integer box per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBounds {
    pub lower: BigInt,
    pub upper: BigInt,
}

/// `coeffs . x <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<BigRational>,
    pub bound: BigRational,
}

/// Maximize a linear objective over integer points of a box intersected with
/// linear inequalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedIlp {
    pub bounds: Vec<VarBounds>,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Vec<BigRational>,
}

impl BoundedIlp {
    fn satisfied(&self, point: &[BigInt]) -> bool {
        self.constraints.iter().all(|c| {
            let lhs: BigRational = c
                .coeffs
                .iter()
                .zip(point)
                .map(|(a, x)| a * BigRational::from_integer(x.clone()))
                .sum();
            lhs <= c.bound
        })
    }

    fn objective_value(&self, point: &[BigInt]) -> BigRational {
        self.objective
            .iter()
            .zip(point)
            .map(|(a, x)| a * BigRational::from_integer(x.clone()))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IlpOutcome {
    Optimal {
        assignment: Vec<BigInt>,
        value: BigRational,
    },
    Infeasible,
}

/// Knobs for the exact solver.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Box sizes up to this are enumerated outright.
    pub enumeration_cap: u64,
    /// Above the cap, fall back to exact branch-and-bound instead of refusing.
    pub branch_and_bound: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            enumeration_cap: default_enum_cap(),
            branch_and_bound: true,
        }
    }
}

/// Exact optimum over the integer box, by plain enumeration when the box is
/// small and otherwise by depth-first branch-and-bound with interval
/// propagation. Deterministic.
pub fn solve_bounded_ilp(ilp: &BoundedIlp, config: &SolverConfig) -> Result<IlpOutcome> {
    for c in &ilp.constraints {
        if c.coeffs.len() != ilp.bounds.len() {
            return Err(Error::validation("constraint arity mismatch"));
        }
    }
    if ilp.objective.len() != ilp.bounds.len() {
        return Err(Error::validation("objective arity mismatch"));
    }
    if ilp.bounds.iter().any(|b| b.lower > b.upper) {
        return Ok(IlpOutcome::Infeasible);
    }
    let mut box_size = BigUint::one();
    for b in &ilp.bounds {
        let width = (&b.upper - &b.lower + BigInt::one())
            .to_biguint()
            .expect("upper >= lower");
        box_size *= width;
    }
    if box_size <= BigUint::from(config.enumeration_cap) {
        return Ok(enumerate_box(ilp));
    }
    if !config.branch_and_bound {
        let needed = u128::try_from(&box_size).unwrap_or(u128::MAX);
        return Err(Error::RefusedScale {
            needed,
            cap: config.enumeration_cap as u128,
        });
    }
    let mut best: Option<(Vec<BigInt>, BigRational)> = None;
    let bounds: Vec<(BigInt, BigInt)> = ilp
        .bounds
        .iter()
        .map(|b| (b.lower.clone(), b.upper.clone()))
        .collect();
    branch_and_bound(ilp, bounds, &mut best);
    Ok(match best {
        Some((assignment, value)) => IlpOutcome::Optimal { assignment, value },
        None => IlpOutcome::Infeasible,
    })
}

fn enumerate_box(ilp: &BoundedIlp) -> IlpOutcome {
    let mut point: Vec<BigInt> = ilp.bounds.iter().map(|b| b.lower.clone()).collect();
    let mut best: Option<(Vec<BigInt>, BigRational)> = None;
    loop {
        if ilp.satisfied(&point) {
            let value = ilp.objective_value(&point);
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                best = Some((point.clone(), value));
            }
        }
        // odometer step
        let mut idx = 0;
        loop {
            if idx == point.len() {
                return match best {
                    Some((assignment, value)) => IlpOutcome::Optimal { assignment, value },
                    None => IlpOutcome::Infeasible,
                };
            }
            if point[idx] < ilp.bounds[idx].upper {
                point[idx] += 1;
                break;
            }
            point[idx] = ilp.bounds[idx].lower.clone();
            idx += 1;
        }
    }
}

fn branch_and_bound(
    ilp: &BoundedIlp,
    mut bounds: Vec<(BigInt, BigInt)>,
    best: &mut Option<(Vec<BigInt>, BigRational)>,
) {
    // interval propagation: tighten each variable against each constraint
    for _round in 0..3 {
        let mut changed = false;
        for c in &ilp.constraints {
            let mins: Vec<BigRational> = c
                .coeffs
                .iter()
                .zip(&bounds)
                .map(|(a, (lo, hi))| interval_min(a, lo, hi))
                .collect();
            let total_min: BigRational = mins.iter().cloned().sum();
            if total_min > c.bound {
                return; // no point of the box satisfies this constraint
            }
            for (j, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let slack = &c.bound - (&total_min - &mins[j]);
                let limit = slack / a;
                if a.is_positive() {
                    let hi = limit.floor().to_integer();
                    if hi < bounds[j].1 {
                        bounds[j].1 = hi;
                        changed = true;
                    }
                } else {
                    let lo = limit.ceil().to_integer();
                    if lo > bounds[j].0 {
                        bounds[j].0 = lo;
                        changed = true;
                    }
                }
                if bounds[j].0 > bounds[j].1 {
                    return;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // optimistic objective over the box
    let optimistic: BigRational = ilp
        .objective
        .iter()
        .zip(&bounds)
        .map(|(a, (lo, hi))| interval_max(a, lo, hi))
        .sum();
    if let Some((_, incumbent)) = best {
        if optimistic <= *incumbent {
            return;
        }
    }
    // branch on the widest interval
    let widest = bounds
        .iter()
        .enumerate()
        .filter(|(_, (lo, hi))| lo < hi)
        .max_by(|(i, (lo_a, hi_a)), (j, (lo_b, hi_b))| {
            (hi_a - lo_a).cmp(&(hi_b - lo_b)).then(j.cmp(i))
        });
    match widest {
        None => {
            let point: Vec<BigInt> = bounds.iter().map(|(lo, _)| lo.clone()).collect();
            if ilp.satisfied(&point) {
                let value = ilp.objective_value(&point);
                if best.as_ref().is_none_or(|(_, b)| value > *b) {
                    *best = Some((point, value));
                }
            }
        }
        Some((j, (lo, hi))) => {
            let mid = (lo + hi).div_floor(&BigInt::from(2));
            let mut lower_half = bounds.clone();
            lower_half[j].1 = mid.clone();
            branch_and_bound(ilp, lower_half, best);
            let mut upper_half = bounds;
            upper_half[j].0 = mid + BigInt::one();
            branch_and_bound(ilp, upper_half, best);
        }
    }
}

fn interval_min(a: &BigRational, lo: &BigInt, hi: &BigInt) -> BigRational {
    let lo = BigRational::from_integer(lo.clone());
    let hi = BigRational::from_integer(hi.clone());
    std::cmp::min(a * lo, a * hi)
}

fn interval_max(a: &BigRational, lo: &BigInt, hi: &BigInt) -> BigRational {
    let lo = BigRational::from_integer(lo.clone());
    let hi = BigRational::from_integer(hi.clone());
    std::cmp::max(a * lo, a * hi)
}

/// Formulate the grouped knapsack as a bounded ILP with one count variable
/// and one profit variable per group; the chords of the envelope bound each
/// profit variable from above.
pub fn build_knapsack_ilp(inst: &GroupedKnapsack) -> Result<BoundedIlp> {
    inst.validate()?;
    let k = inst.groups.len();
    let envelopes: Vec<ConcaveEnvelope> = inst
        .groups
        .iter()
        .map(|g| build_envelope(&g.values))
        .collect::<Result<_>>()?;
    let mut bounds = Vec::with_capacity(2 * k);
    for g in &inst.groups {
        bounds.push(VarBounds {
            lower: BigInt::zero(),
            upper: BigInt::from(g.values.len() as u64),
        });
    }
    for env in &envelopes {
        bounds.push(VarBounds {
            lower: BigInt::zero(),
            upper: env.prefix.last().expect("prefix nonempty").clone(),
        });
    }
    let mut constraints = Vec::new();
    let mut weight_row = vec![BigRational::zero(); 2 * k];
    for (i, g) in inst.groups.iter().enumerate() {
        weight_row[i] = g.weight.clone();
    }
    constraints.push(LinearConstraint {
        coeffs: weight_row,
        bound: inst.capacity.clone(),
    });
    for (i, env) in envelopes.iter().enumerate() {
        for piece in &env.pieces {
            // g_i - slope * x_i <= intercept
            let mut coeffs = vec![BigRational::zero(); 2 * k];
            coeffs[i] = -BigRational::from_integer(piece.slope.clone());
            coeffs[k + i] = BigRational::one();
            constraints.push(LinearConstraint {
                coeffs,
                bound: BigRational::from_integer(piece.intercept.clone()),
            });
        }
    }
    let mut objective = vec![BigRational::zero(); 2 * k];
    for slot in objective.iter_mut().skip(k) {
        *slot = BigRational::one();
    }
    Ok(BoundedIlp {
        bounds,
        constraints,
        objective,
    })
}

/// Exact optimum of a grouped knapsack (None when even the empty choice
/// violates the capacity), via envelope, ILP, and the exact solver.
pub fn solve_knapsack_few_weights(
    inst: &GroupedKnapsack,
    config: &SolverConfig,
) -> Result<Option<BigRational>> {
    let ilp = build_knapsack_ilp(inst)?;
    match solve_bounded_ilp(&ilp, config)? {
        IlpOutcome::Optimal { value, .. } => Ok(Some(value)),
        IlpOutcome::Infeasible => Ok(None),
    }
}

/// Subset sum grouped by its k distinct sizes with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedSubsetSum {
    pub sizes: Vec<BigUint>,
    pub multiplicities: Vec<u64>,
    pub target: BigUint,
}

impl GroupedSubsetSum {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.len() != self.multiplicities.len() {
            return Err(Error::validation("one multiplicity per size required"));
        }
        for (i, s) in self.sizes.iter().enumerate() {
            if s.is_zero() {
                return Err(Error::validation(format!("size {i} must be positive")));
            }
            if self.sizes[..i].contains(s) {
                return Err(Error::validation(format!("duplicate size {s}")));
            }
        }
        if self.multiplicities.iter().any(|&m| m == 0) {
            return Err(Error::validation("multiplicities must be positive"));
        }
        Ok(())
    }

    pub fn total_items(&self) -> u128 {
        self.multiplicities.iter().map(|&m| m as u128).sum()
    }

    pub fn encoding_bits(&self) -> u64 {
        let sizes: u64 = self
            .sizes
            .iter()
            .map(|s| int_bits(&BigInt::from(s.clone())))
            .sum();
        let mults: u64 = self
            .multiplicities
            .iter()
            .map(|&m| int_bits(&BigInt::from(m)))
            .sum();
        sizes + mults + int_bits(&BigInt::from(self.target.clone()))
    }
}

/// Either a re-expanded subset-sum kernel or a directly solved verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FewSizesOutcome {
    Kernel(SubsetSumInstance),
    Solved(SolvedVerdict),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedVerdict {
    pub feasible: bool,
    /// Item counts per size when feasible.
    pub witness: Option<Vec<BigInt>>,
}

/// `ceil(log2(x))` for positive x.
fn ceil_log2(x: u128) -> u32 {
    debug_assert!(x > 0);
    (x - 1).checked_ilog2().map_or(0, |b| b + 1)
}

/// Multiset of power-of-two multiples of `size` whose subset sums realize
/// exactly `{0, size, 2*size, ..., mult*size}`.
pub fn binary_split(size: &BigUint, mult: u64) -> Vec<BigUint> {
    let mut items = Vec::new();
    let mut covered: u128 = 0;
    let mut power: u128 = 1;
    // powers 2^0..2^l while 2^(l+1)-1 < mult, then one remainder item
    while covered + power < mult as u128 {
        items.push(size * BigUint::from(power));
        covered += power;
        power *= 2;
    }
    let remainder = mult as u128 - covered;
    items.push(size * BigUint::from(remainder));
    items
}

/// Kernelize subset sum with few sizes.
///
/// When `log2 n <= k log2 k` (ties included), the size vector and target are
/// compressed jointly at radius `sum(mu) + 2`, which covers every count
/// vector `0 <= x_i <= mu_i`, and the multiplicities are re-expanded by
/// binary splitting into at most `k * bits(n)` items. Otherwise the count
/// ILP is small enough to solve outright and a verdict is returned.
pub fn kernelize_subset_sum_few_sizes(
    inst: &GroupedSubsetSum,
    config: &SolverConfig,
) -> Result<(FewSizesOutcome, KernelReport)> {
    inst.validate()?;
    let k = inst.sizes.len();
    let n = inst.total_items();
    let mut report = KernelReport::new("grouped-subset-sum");
    report.original_bits = inst.encoding_bits();
    report.note("distinct_sizes", k.to_string());
    report.note("total_items", n.to_string());

    let compress_branch = ceil_log2(n) as u64 <= (k as u64) * ceil_log2(k as u128) as u64;
    if compress_branch {
        report.note("branch", "compress-and-split");
        let radius = BigInt::from(n) + BigInt::from(2);
        let mut joint: Vec<BigRational> = inst
            .sizes
            .iter()
            .map(|s| BigRational::from_integer(BigInt::from(s.clone())))
            .collect();
        joint.push(BigRational::from_integer(BigInt::from(inst.target.clone())));
        let req = CompressionRequest::new(RationalVector::new(joint), radius.clone())
            .expect("radius at least 2");
        let mut reduced = reduce_vector(&req);
        let new_target = reduced.entries.pop().expect("joint vector nonempty");
        report.compression_dim = Some(k + 1);
        report.compression_radius = Some(radius.clone());
        report.bound_ok = {
            let mut joint = reduced.entries.clone();
            joint.push(new_target.clone());
            within_norm_bound(&IntegerVector::new(joint), &radius)
        };

        let mut items = Vec::new();
        for (size, &mult) in reduced.entries.iter().zip(&inst.multiplicities) {
            let size = size.to_biguint().expect("positive sizes stay positive");
            items.extend(binary_split(&size, mult));
        }
        // item count <= k * bits(n), constant 1
        let bits_n = 128 - n.leading_zeros() as u64;
        report.note("split_items", items.len().to_string());
        report.note("item_bound", format!("{}", k as u64 * bits_n));
        report.note("item_bound_constant", "1");
        let kernel = SubsetSumInstance {
            items,
            target: new_target
                .to_biguint()
                .expect("nonnegative target stays nonnegative"),
        };
        report.kernel_bits = kernel.encoding_bits();
        Ok((FewSizesOutcome::Kernel(kernel), report))
    } else {
        report.note("branch", "solve-ilp");
        let ilp = count_ilp(inst);
        let outcome = solve_bounded_ilp(&ilp, config)?;
        let verdict = match outcome {
            IlpOutcome::Optimal { assignment, .. } => SolvedVerdict {
                feasible: true,
                witness: Some(assignment),
            },
            IlpOutcome::Infeasible => SolvedVerdict {
                feasible: false,
                witness: None,
            },
        };
        report.note("feasible", verdict.feasible.to_string());
        Ok((FewSizesOutcome::Solved(verdict), report))
    }
}

/// Feasibility ILP for the count formulation `sum s_i x_i = t`.
fn count_ilp(inst: &GroupedSubsetSum) -> BoundedIlp {
    let k = inst.sizes.len();
    let bounds = inst
        .multiplicities
        .iter()
        .map(|&m| VarBounds {
            lower: BigInt::zero(),
            upper: BigInt::from(m),
        })
        .collect();
    let coeffs: Vec<BigRational> = inst
        .sizes
        .iter()
        .map(|s| BigRational::from_integer(BigInt::from(s.clone())))
        .collect();
    let target = BigRational::from_integer(BigInt::from(inst.target.clone()));
    let constraints = vec![
        LinearConstraint {
            coeffs: coeffs.clone(),
            bound: target.clone(),
        },
        LinearConstraint {
            coeffs: coeffs.iter().map(|c| -c).collect(),
            bound: -target,
        },
    ];
    BoundedIlp {
        bounds,
        constraints,
        objective: vec![BigRational::zero(); k],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{solve_grouped_knapsack_brute, solve_grouped_subset_sum_brute, solve_subset_sum_brute};

    fn rat(p: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(p))
    }

    fn ints(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    fn grouped(groups: &[(i64, &[i64])], capacity: i64, target: i64) -> GroupedKnapsack {
        GroupedKnapsack {
            groups: groups
                .iter()
                .map(|&(w, vals)| WeightGroup {
                    weight: rat(w),
                    values: ints(vals),
                })
                .collect(),
            capacity: rat(capacity),
            profit_target: rat(target),
        }
    }

    #[test]
    fn envelope_prefix_sums_and_slopes() {
        let env = build_envelope(&ints(&[5, 3, 2])).unwrap();
        assert_eq!(env.prefix, ints(&[0, 5, 8, 10]));
        let slopes: Vec<BigInt> = env.pieces.iter().map(|p| p.slope.clone()).collect();
        assert_eq!(slopes, ints(&[5, 3, 2]));
    }

    #[test]
    fn constant_values_make_a_linear_envelope() {
        let env = build_envelope(&ints(&[4, 4, 4])).unwrap();
        for s in 0..=3i64 {
            let min = env.min_over_pieces(&BigInt::from(s)).unwrap();
            assert_eq!(min, BigInt::from(4 * s));
        }
    }

    #[test]
    fn envelope_is_the_minimum_of_its_pieces() {
        let env = build_envelope(&ints(&[7, 1])).unwrap();
        for s in 0..=2usize {
            let min = env.min_over_pieces(&BigInt::from(s as u64)).unwrap();
            assert_eq!(min, env.prefix[s], "mismatch at s = {s}");
        }
    }

    #[test]
    fn unsorted_values_are_rejected() {
        assert!(matches!(
            build_envelope(&ints(&[1, 7])),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn single_group_optimum() {
        let inst = grouped(&[(1, &[5, 3])], 2, 0);
        let opt = solve_knapsack_few_weights(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(opt, Some(rat(8)));
        assert_eq!(
            solve_grouped_knapsack_brute(&inst, 1 << 20).unwrap(),
            Some(rat(8))
        );
    }

    #[test]
    fn capacity_one_picks_the_single_best_item() {
        let inst = grouped(&[(1, &[5, 3]), (2, &[9])], 1, 0);
        // capacity admits one weight-1 item only
        let opt = solve_knapsack_few_weights(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(opt, Some(rat(5)));
        assert_eq!(
            solve_grouped_knapsack_brute(&inst, 1 << 20).unwrap(),
            Some(rat(5))
        );
    }

    #[test]
    fn zero_capacity_packs_nothing() {
        let inst = grouped(&[(3, &[5, 3]), (7, &[2])], 0, 0);
        let opt = solve_knapsack_few_weights(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(opt, Some(rat(0)));
    }

    #[test]
    fn ilp_simple_box_maximization() {
        let ilp = BoundedIlp {
            bounds: vec![VarBounds {
                lower: BigInt::zero(),
                upper: BigInt::from(3),
            }],
            constraints: vec![],
            objective: vec![BigRational::one()],
        };
        match solve_bounded_ilp(&ilp, &SolverConfig::default()).unwrap() {
            IlpOutcome::Optimal { value, .. } => assert_eq!(value, rat(3)),
            IlpOutcome::Infeasible => panic!("box is nonempty"),
        }
    }

    #[test]
    fn ilp_detects_infeasible_constraints() {
        let ilp = BoundedIlp {
            bounds: vec![VarBounds {
                lower: BigInt::zero(),
                upper: BigInt::from(3),
            }],
            constraints: vec![LinearConstraint {
                coeffs: vec![BigRational::zero()],
                bound: rat(-1),
            }],
            objective: vec![BigRational::one()],
        };
        assert_eq!(
            solve_bounded_ilp(&ilp, &SolverConfig::default()).unwrap(),
            IlpOutcome::Infeasible
        );
    }

    #[test]
    fn ilp_refuses_big_boxes_without_branch_and_bound() {
        let ilp = BoundedIlp {
            bounds: vec![
                VarBounds {
                    lower: BigInt::zero(),
                    upper: BigInt::from(100),
                },
                VarBounds {
                    lower: BigInt::zero(),
                    upper: BigInt::from(100),
                },
            ],
            constraints: vec![],
            objective: vec![BigRational::one(), BigRational::one()],
        };
        let config = SolverConfig {
            enumeration_cap: 64,
            branch_and_bound: false,
        };
        assert!(matches!(
            solve_bounded_ilp(&ilp, &config),
            Err(Error::RefusedScale { .. })
        ));
        let config = SolverConfig {
            enumeration_cap: 64,
            branch_and_bound: true,
        };
        match solve_bounded_ilp(&ilp, &config).unwrap() {
            IlpOutcome::Optimal { value, .. } => assert_eq!(value, rat(200)),
            IlpOutcome::Infeasible => panic!("box is nonempty"),
        }
    }

    #[test]
    fn branch_and_bound_matches_enumeration() {
        let inst = grouped(&[(2, &[7, 5, 1]), (3, &[6, 6])], 8, 0);
        let ilp = build_knapsack_ilp(&inst).unwrap();
        let enumerated = solve_bounded_ilp(
            &ilp,
            &SolverConfig {
                enumeration_cap: 1 << 20,
                branch_and_bound: false,
            },
        )
        .unwrap();
        let branched = solve_bounded_ilp(
            &ilp,
            &SolverConfig {
                enumeration_cap: 1,
                branch_and_bound: true,
            },
        )
        .unwrap();
        let value_of = |o: &IlpOutcome| match o {
            IlpOutcome::Optimal { value, .. } => value.clone(),
            IlpOutcome::Infeasible => panic!("feasible instance"),
        };
        assert_eq!(value_of(&enumerated), value_of(&branched));
    }

    #[test]
    fn splitting_multiplicity_five() {
        let items = binary_split(&BigUint::from(7u32), 5);
        assert_eq!(
            items,
            vec![BigUint::from(7u32), BigUint::from(14u32), BigUint::from(14u32)]
        );
        // realizes exactly the multiples 0..5 of 7
        let mut sums: Vec<BigUint> = Vec::new();
        for mask in 0u32..8 {
            let sum: BigUint = (0..3)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| items[i].clone())
                .sum();
            sums.push(sum);
        }
        sums.sort();
        sums.dedup();
        let expected: Vec<BigUint> = (0..=5u32).map(|m| BigUint::from(7u32 * m)).collect();
        assert_eq!(sums, expected);
    }

    #[test]
    fn single_size_goes_to_the_ilp_branch() {
        let inst = GroupedSubsetSum {
            sizes: vec![BigUint::from(3u32)],
            multiplicities: vec![4],
            target: BigUint::from(9u32),
        };
        // log2(4) = 2 > 1 * log2(1) = 0, so the ILP branch answers directly
        let (outcome, report) =
            kernelize_subset_sum_few_sizes(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(report.extra["branch"], "solve-ilp");
        match outcome {
            FewSizesOutcome::Solved(v) => {
                assert!(v.feasible);
                assert_eq!(v.witness, Some(ints(&[3])));
            }
            FewSizesOutcome::Kernel(_) => panic!("expected a direct verdict"),
        }
        assert!(solve_grouped_subset_sum_brute(&inst, 1 << 20).unwrap());
    }

    #[test]
    fn two_sizes_compress_and_split() {
        let inst = GroupedSubsetSum {
            sizes: vec![BigUint::from(2u32), BigUint::from(3u32)],
            multiplicities: vec![2, 2],
            target: BigUint::from(10u32),
        };
        // log2(4) = 2 <= 2 * log2(2) = 2: tie goes to compression
        let (outcome, report) =
            kernelize_subset_sum_few_sizes(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(report.extra["branch"], "compress-and-split");
        let kernel = match outcome {
            FewSizesOutcome::Kernel(k) => k,
            FewSizesOutcome::Solved(_) => panic!("expected a kernel"),
        };
        assert!(solve_grouped_subset_sum_brute(&inst, 1 << 20).unwrap());
        assert!(solve_subset_sum_brute(&kernel.items, &kernel.target, 1 << 20).unwrap());
    }
}
