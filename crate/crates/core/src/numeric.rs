//! Kernelizations for the number problems: knapsack and subset sum
//! parameterized by the item count, weighted max cut parameterized by the
//! cut target, and bin packing with one extra bin.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::compress::{reduce_vector, within_norm_bound, CompressionRequest};
use crate::error::{Error, Result};
use crate::ratio::{int_bits, rat_bits, IntegerVector, RationalVector};
use crate::report::KernelReport;

/// Knapsack over binary item choices: is there `x` with `w . x <= W` and
/// `p . x >= P`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub weights: RationalVector,
    pub profits: RationalVector,
    pub capacity: BigRational,
    pub profit_target: BigRational,
}

impl KnapsackInstance {
    pub fn validate(&self) -> Result<()> {
        if self.weights.len() != self.profits.len() {
            return Err(Error::validation(format!(
                "weight and profit vectors differ in length: {} vs {}",
                self.weights.len(),
                self.profits.len()
            )));
        }
        Ok(())
    }

    pub fn item_count(&self) -> usize {
        self.weights.len()
    }

    pub fn encoding_bits(&self) -> u64 {
        let scalars: u64 = self
            .weights
            .entries
            .iter()
            .chain(&self.profits.entries)
            .map(rat_bits)
            .sum();
        scalars + rat_bits(&self.capacity) + rat_bits(&self.profit_target)
    }

    /// Feasibility of one binary choice vector under both predicates.
    pub fn accepts(&self, choice: &[BigInt]) -> bool {
        let weight = self.weights.dot_int(choice);
        let profit = self.profits.dot_int(choice);
        weight <= self.capacity && profit >= self.profit_target
    }
}

/// Subset sum: do some of the numbers add up exactly to the target?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    pub items: Vec<BigUint>,
    pub target: BigUint,
}

impl SubsetSumInstance {
    pub fn encoding_bits(&self) -> u64 {
        let items: u64 = self
            .items
            .iter()
            .map(|a| int_bits(&BigInt::from(a.clone())))
            .sum();
        items + int_bits(&BigInt::from(self.target.clone()))
    }
}

/// Weighted max cut: every edge weight is at least one, and so is the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCutInstance {
    pub num_vertices: usize,
    /// `(u, v, weight)` with `u != v`; parallel edges are allowed.
    pub edges: Vec<(usize, usize, BigRational)>,
    pub cut_target: BigRational,
}

impl MaxCutInstance {
    pub fn validate(&self) -> Result<()> {
        let one = BigRational::one();
        if self.cut_target < one {
            return Err(Error::validation(format!(
                "cut target must be at least 1, got {}",
                self.cut_target
            )));
        }
        for (i, (u, v, w)) in self.edges.iter().enumerate() {
            if u == v {
                return Err(Error::validation(format!("edge {i} is a self-loop")));
            }
            if *u >= self.num_vertices || *v >= self.num_vertices {
                return Err(Error::validation(format!(
                    "edge {i} references a vertex outside 0..{}",
                    self.num_vertices
                )));
            }
            if *w < one {
                // below weight one the problem is as hard as the unparameterized one
                return Err(Error::validation(format!(
                    "edge {i} has weight {w}, all weights must be at least 1"
                )));
            }
        }
        Ok(())
    }

    pub fn total_weight(&self) -> BigRational {
        self.edges.iter().map(|(_, _, w)| w.clone()).sum()
    }

    pub fn cut_weight(&self, in_left: &[bool]) -> BigRational {
        self.edges
            .iter()
            .filter(|(u, v, _)| in_left[*u] != in_left[*v])
            .map(|(_, _, w)| w.clone())
            .sum()
    }

    pub fn encoding_bits(&self) -> u64 {
        let edges: u64 = self
            .edges
            .iter()
            .map(|(u, v, w)| {
                int_bits(&BigInt::from(*u as u64)) + int_bits(&BigInt::from(*v as u64)) + rat_bits(w)
            })
            .sum();
        edges + rat_bits(&self.cut_target)
    }
}

/// Bin packing input: positive item sizes, bin size, and the bin budget k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinPackingInstance {
    pub items: Vec<BigUint>,
    pub bin_size: BigUint,
    pub bins: u64,
}

impl BinPackingInstance {
    pub fn validate(&self) -> Result<()> {
        if self.bin_size.is_zero() {
            return Err(Error::validation("bin size must be positive"));
        }
        if self.bins == 0 {
            return Err(Error::validation("bin count must be positive"));
        }
        if let Some(i) = self.items.iter().position(|a| a.is_zero()) {
            return Err(Error::validation(format!("item {i} has size 0")));
        }
        Ok(())
    }

    pub fn encoding_bits(&self) -> u64 {
        let items: u64 = self
            .items
            .iter()
            .map(|a| int_bits(&BigInt::from(a.clone())))
            .sum();
        items
            + int_bits(&BigInt::from(self.bin_size.clone()))
            + int_bits(&BigInt::from(self.bins))
    }
}

/// Answer of the relaxed packing task: a packing into at most k+1 bins, or
/// the statement that even k bins cannot work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackingAnswer {
    /// Bin index (0-based, at most k+1 bins) per item, in input order.
    Assignment(Vec<usize>),
    NoKPacking,
}

/// Compress both knapsack constraints with radius n+2; the item set is
/// unchanged and every binary choice keeps its feasibility under both the
/// capacity and the profit predicate.
pub fn kernelize_knapsack(inst: &KnapsackInstance) -> Result<(KnapsackInstance, KernelReport)> {
    inst.validate()?;
    let n = inst.item_count();
    let radius = BigInt::from(n as u64 + 2);
    let mut report = KernelReport::new("knapsack");
    report.original_bits = inst.encoding_bits();
    report.compression_dim = Some(n + 1);
    report.compression_radius = Some(radius.clone());

    let (weights, capacity) = compress_joint(&inst.weights, &inst.capacity, &radius);
    let (profits, profit_target) = compress_joint(&inst.profits, &inst.profit_target, &radius);
    report.bound_ok = joint_bound_ok(&weights, &capacity, &radius)
        && joint_bound_ok(&profits, &profit_target, &radius);

    let kernel = KnapsackInstance {
        weights: ints_to_rationals(&weights),
        profits: ints_to_rationals(&profits),
        capacity: BigRational::from_integer(capacity),
        profit_target: BigRational::from_integer(profit_target),
    };
    report.kernel_bits = kernel.encoding_bits();
    Ok((kernel, report))
}

/// Compress `(a..., b)` once with radius n+2. Sign preservation keeps the
/// equality `a . x = b` intact for every binary `x`, and also keeps every
/// compressed number nonnegative, so the kernel is again a subset-sum
/// instance.
pub fn kernelize_subset_sum(
    inst: &SubsetSumInstance,
) -> Result<(SubsetSumInstance, KernelReport)> {
    let n = inst.items.len();
    let radius = BigInt::from(n as u64 + 2);
    let mut report = KernelReport::new("subset-sum");
    report.original_bits = inst.encoding_bits();
    report.compression_dim = Some(n + 1);
    report.compression_radius = Some(radius.clone());

    let rationals = RationalVector::new(
        inst.items
            .iter()
            .map(|a| BigRational::from_integer(BigInt::from(a.clone())))
            .collect(),
    );
    let target = BigRational::from_integer(BigInt::from(inst.target.clone()));
    let (items, new_target) = compress_joint(&rationals, &target, &radius);
    report.bound_ok = joint_bound_ok(&items, &new_target, &radius);

    let kernel = SubsetSumInstance {
        items: items
            .iter()
            .map(|a| a.to_biguint().expect("signs of nonnegative inputs survive"))
            .collect(),
        target: new_target
            .to_biguint()
            .expect("signs of nonnegative inputs survive"),
    };
    report.kernel_bits = kernel.encoding_bits();
    Ok((kernel, report))
}

/// The constant-size positive instance used when the greedy cut already
/// reaches the target.
pub fn canonical_max_cut_yes() -> MaxCutInstance {
    MaxCutInstance {
        num_vertices: 2,
        edges: vec![(0, 1, BigRational::one())],
        cut_target: BigRational::one(),
    }
}

/// If the total weight reaches twice the target, the greedy cut settles the
/// instance and a constant-size yes-instance is returned. Otherwise there
/// are fewer than 2W edges and the weights are compressed with radius |E|+2.
pub fn kernelize_max_cut(inst: &MaxCutInstance) -> Result<(MaxCutInstance, KernelReport)> {
    inst.validate()?;
    let mut report = KernelReport::new("max-cut");
    report.original_bits = inst.encoding_bits();

    let total = inst.total_weight();
    if total >= BigRational::from_integer(BigInt::from(2)) * &inst.cut_target {
        report.note("branch", "greedy-settles");
        report
            .trace
            .push(format!("total weight {total} reaches twice the target"));
        let kernel = canonical_max_cut_yes();
        report.kernel_bits = kernel.encoding_bits();
        return Ok((kernel, report));
    }

    let m = inst.edges.len();
    let radius = BigInt::from(m as u64 + 2);
    report.note("branch", "compressed");
    report.compression_dim = Some(m + 1);
    report.compression_radius = Some(radius.clone());
    let weights = RationalVector::new(inst.edges.iter().map(|(_, _, w)| w.clone()).collect());
    let (new_weights, new_target) = compress_joint(&weights, &inst.cut_target, &radius);
    report.bound_ok = joint_bound_ok(&new_weights, &new_target, &radius);

    let kernel = MaxCutInstance {
        num_vertices: inst.num_vertices,
        edges: inst
            .edges
            .iter()
            .zip(&new_weights)
            .map(|((u, v, _), w)| (*u, *v, BigRational::from_integer(w.clone())))
            .collect(),
        cut_target: BigRational::from_integer(new_target),
    };
    report.kernel_bits = kernel.encoding_bits();
    Ok((kernel, report))
}

/// Result of the greedy cut: the left side and its exact crossing weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub in_left: Vec<bool>,
    pub weight: BigRational,
}

/// Place vertices one by one on the side that maximizes the crossing weight
/// to already-placed neighbors (ties go left). The final cut weighs at least
/// half the total edge weight.
pub fn greedy_cut(inst: &MaxCutInstance) -> Result<CutResult> {
    inst.validate()?;
    let n = inst.num_vertices;
    let mut in_left = vec![false; n];
    let mut placed = vec![false; n];
    for v in 0..n {
        let mut to_left = BigRational::zero();
        let mut to_right = BigRational::zero();
        for (a, b, w) in &inst.edges {
            let other = match (*a == v, *b == v) {
                (true, false) => *b,
                (false, true) => *a,
                _ => continue,
            };
            if placed[other] {
                if in_left[other] {
                    to_left += w;
                } else {
                    to_right += w;
                }
            }
        }
        // going left cuts the edges into the right side and vice versa
        in_left[v] = to_right >= to_left;
        placed[v] = true;
    }
    let weight = inst.cut_weight(&in_left);
    Ok(CutResult { in_left, weight })
}

/// The constant-size no-instance for bin packing.
pub fn canonical_bin_packing_no() -> BinPackingInstance {
    BinPackingInstance {
        items: vec![BigUint::from(2u32)],
        bin_size: BigUint::one(),
        bins: 1,
    }
}

enum BinKernel {
    /// Oversized item or total weight beyond k*b: no k-packing exists.
    Infeasible(String),
    Split {
        kept: Vec<usize>,
        small: Vec<usize>,
        compressed_sizes: Vec<BigInt>,
        compressed_bin: BigInt,
        radius: BigInt,
    },
}

fn split_and_compress(inst: &BinPackingInstance) -> BinKernel {
    let total: BigUint = inst.items.iter().sum();
    if let Some(i) = inst.items.iter().position(|a| *a > inst.bin_size) {
        return BinKernel::Infeasible(format!("item {i} exceeds the bin size"));
    }
    if total > BigUint::from(inst.bins) * &inst.bin_size {
        return BinKernel::Infeasible(format!(
            "total size {total} exceeds {} bins of {}",
            inst.bins, inst.bin_size
        ));
    }
    // keep items with a*(k+1) >= b; boundary items stay
    let threshold_scale = BigUint::from(inst.bins + 1);
    let (kept, small): (Vec<usize>, Vec<usize>) = (0..inst.items.len())
        .partition(|&i| &inst.items[i] * &threshold_scale >= inst.bin_size);
    let radius = BigInt::from(inst.bins * (inst.bins + 1) + 2);
    let sizes = RationalVector::new(
        kept.iter()
            .map(|&i| BigRational::from_integer(BigInt::from(inst.items[i].clone())))
            .collect(),
    );
    let bin = BigRational::from_integer(BigInt::from(inst.bin_size.clone()));
    let (compressed_sizes, compressed_bin) = compress_joint(&sizes, &bin, &radius);
    BinKernel::Split {
        kept,
        small,
        compressed_sizes,
        compressed_bin,
        radius,
    }
}

/// Keep only the at most k(k+1) items of size at least b/(k+1) and compress
/// their sizes together with the bin size; small items can always be added
/// greedily to any packing of the kept items into k+1 bins.
pub fn kernelize_bin_packing(
    inst: &BinPackingInstance,
) -> Result<(BinPackingInstance, KernelReport)> {
    inst.validate()?;
    let mut report = KernelReport::new("bin-packing");
    report.original_bits = inst.encoding_bits();
    report.note("bitsize_target", format!("{}", inst.bins.pow(3)));

    match split_and_compress(inst) {
        BinKernel::Infeasible(reason) => {
            report.note("branch", "no-instance");
            report.trace.push(reason);
            let kernel = canonical_bin_packing_no();
            report.kernel_bits = kernel.encoding_bits();
            Ok((kernel, report))
        }
        BinKernel::Split {
            kept,
            small,
            compressed_sizes,
            compressed_bin,
            radius,
        } => {
            debug_assert!(kept.len() as u64 <= inst.bins * (inst.bins + 1));
            report.note("branch", "compressed");
            report.note("kept_items", kept.len().to_string());
            report.note("small_items", small.len().to_string());
            report.compression_dim = Some(kept.len() + 1);
            report.compression_radius = Some(radius.clone());
            report.bound_ok = joint_bound_ok(&compressed_sizes, &compressed_bin, &radius);
            for &i in &kept {
                report.trace.push(format!("kept item {i} of size {}", inst.items[i]));
            }
            let kernel = BinPackingInstance {
                items: compressed_sizes
                    .iter()
                    .map(|a| a.to_biguint().expect("positive sizes stay positive"))
                    .collect(),
                bin_size: compressed_bin
                    .to_biguint()
                    .expect("positive bin size stays positive"),
                bins: inst.bins,
            };
            report.kernel_bits = kernel.encoding_bits();
            Ok((kernel, report))
        }
    }
}

/// Pack into at most k+1 bins or certify that k bins are impossible.
///
/// Pipeline: the infeasibility pre-checks, an exact search for a (k+1)-packing
/// of the kept (compressed) items, then greedy first-fit of the small items
/// in decreasing size, which cannot fail while the total is at most k*b.
pub fn solve_additive_one(inst: &BinPackingInstance) -> Result<PackingAnswer> {
    inst.validate()?;
    let kernel = split_and_compress(inst);
    let (kept, small, sizes, bin) = match kernel {
        BinKernel::Infeasible(_) => return Ok(PackingAnswer::NoKPacking),
        BinKernel::Split {
            kept,
            small,
            compressed_sizes,
            compressed_bin,
            ..
        } => (kept, small, compressed_sizes, compressed_bin),
    };
    let bins = inst.bins as usize + 1;
    // order kept items by compressed size, largest first
    let mut order: Vec<usize> = (0..kept.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let mut loads = vec![BigInt::zero(); bins];
    let mut placement = vec![usize::MAX; kept.len()];
    if !place_kept(&order, &sizes, &bin, &mut loads, &mut placement, 0) {
        // no k+1 bins for the kept items, so certainly no k bins for everything
        return Ok(PackingAnswer::NoKPacking);
    }

    let mut assignment = vec![usize::MAX; inst.items.len()];
    for (slot, &orig) in kept.iter().enumerate() {
        assignment[orig] = placement[slot];
    }
    // small items: decreasing size, first fit against the original sizes
    let mut orig_loads = vec![BigUint::zero(); bins];
    for &orig in &kept {
        orig_loads[assignment[orig]] += &inst.items[orig];
    }
    let mut small_order = small;
    small_order.sort_by(|&a, &b| inst.items[b].cmp(&inst.items[a]).then(a.cmp(&b)));
    for orig in small_order {
        let slot = (0..bins)
            .find(|&j| &orig_loads[j] + &inst.items[orig] <= inst.bin_size)
            .expect("a small item always fits while the total is at most k*b");
        orig_loads[slot] += &inst.items[orig];
        assignment[orig] = slot;
    }
    Ok(PackingAnswer::Assignment(assignment))
}

fn place_kept(
    order: &[usize],
    sizes: &[BigInt],
    bin: &BigInt,
    loads: &mut Vec<BigInt>,
    placement: &mut Vec<usize>,
    depth: usize,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let item = order[depth];
    let mut seen_empty = false;
    for j in 0..loads.len() {
        if loads[j].is_zero() {
            // identical empty bins: try only the first
            if seen_empty {
                break;
            }
            seen_empty = true;
        }
        if &loads[j] + &sizes[item] <= *bin {
            loads[j] += &sizes[item];
            placement[item] = j;
            if place_kept(order, sizes, bin, loads, placement, depth + 1) {
                return true;
            }
            loads[j] -= &sizes[item];
            placement[item] = usize::MAX;
        }
    }
    false
}

/// Validity check for a returned assignment against the original instance.
pub fn packing_is_valid(inst: &BinPackingInstance, assignment: &[usize]) -> bool {
    if assignment.len() != inst.items.len() {
        return false;
    }
    let bins = inst.bins as usize + 1;
    let mut loads = vec![BigUint::zero(); bins];
    for (item, &slot) in inst.items.iter().zip(assignment) {
        if slot >= bins {
            return false;
        }
        loads[slot] += item;
    }
    loads.iter().all(|l| *l <= inst.bin_size)
}

fn compress_joint(
    vector: &RationalVector,
    bound: &BigRational,
    radius: &BigInt,
) -> (Vec<BigInt>, BigInt) {
    let mut joint = vector.entries.clone();
    joint.push(bound.clone());
    let req = CompressionRequest::new(RationalVector::new(joint), radius.clone())
        .expect("radius at least 2");
    let mut reduced = reduce_vector(&req);
    let new_bound = reduced.entries.pop().expect("joint vector nonempty");
    (reduced.entries, new_bound)
}

fn joint_bound_ok(entries: &[BigInt], bound: &BigInt, radius: &BigInt) -> bool {
    let mut joint = entries.to_vec();
    joint.push(bound.clone());
    within_norm_bound(&IntegerVector::new(joint), radius)
}

fn ints_to_rationals(entries: &[BigInt]) -> RationalVector {
    RationalVector::new(
        entries
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect(),
    )
}
