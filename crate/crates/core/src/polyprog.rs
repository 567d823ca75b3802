//! Sparse polynomials over the rationals, coefficient compression, and
//! instance compression for integer polynomial programs over a box.
//!
//! Compressing a polynomial's coefficient vector with a radius that covers
//! all monomial-value differences over the box preserves the sign of
//! `f(x) - f(y)` for every pair of box points. Thresholded predicates like
//! `c(x) <= z` reduce to such differences after introducing one 0/1 switch
//! variable whose coefficient is the threshold.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::compress::{reduce_vector, within_norm_bound, CompressionRequest};
use crate::error::{Error, Result};
use crate::ratio::{int_bits, rat_bits, IntegerVector, RationalVector};
use crate::report::KernelReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: BigRational,
}

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// A sparse polynomial in `num_vars` variables of total degree at most
/// `degree_bound`, kept in graded-lexicographic monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub num_vars: usize,
    pub degree_bound: u32,
    pub monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(num_vars: usize, degree_bound: u32, mut monomials: Vec<Monomial>) -> Result<Self> {
        for m in &monomials {
            if m.exponents.len() != num_vars {
                return Err(Error::validation(format!(
                    "monomial has {} exponents, expected {num_vars}",
                    m.exponents.len()
                )));
            }
            if m.total_degree() > degree_bound {
                return Err(Error::validation(format!(
                    "monomial degree {} exceeds the bound {degree_bound}",
                    m.total_degree()
                )));
            }
            if m.coefficient.is_zero() {
                return Err(Error::validation("zero coefficients are not stored"));
            }
        }
        monomials.sort_by(|a, b| {
            (a.total_degree(), &a.exponents).cmp(&(b.total_degree(), &b.exponents))
        });
        if monomials
            .windows(2)
            .any(|w| w[0].exponents == w[1].exponents)
        {
            return Err(Error::validation("duplicate monomial"));
        }
        Ok(Polynomial {
            num_vars,
            degree_bound,
            monomials,
        })
    }

    pub fn zero(num_vars: usize, degree_bound: u32) -> Self {
        Polynomial {
            num_vars,
            degree_bound,
            monomials: Vec::new(),
        }
    }

    /// Number of (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.monomials.len()
    }

    pub fn encoding_bits(&self) -> u64 {
        self.monomials
            .iter()
            .map(|m| {
                let exps: u64 = m
                    .exponents
                    .iter()
                    .map(|&e| int_bits(&BigInt::from(e)))
                    .sum();
                exps + rat_bits(&m.coefficient)
            })
            .sum()
    }
}

/// Exact evaluation at an integer point.
pub fn eval(f: &Polynomial, point: &[BigInt]) -> Result<BigRational> {
    if point.len() != f.num_vars {
        return Err(Error::validation(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            f.num_vars
        )));
    }
    let mut total = BigRational::zero();
    for m in &f.monomials {
        let mut term = m.coefficient.clone();
        for (x, &e) in point.iter().zip(&m.exponents) {
            if e > 0 {
                term *= BigRational::from_integer(x.pow(e));
            }
        }
        total += term;
    }
    Ok(total)
}

/// Largest possible `|f_i(x) - f_i(y)|` over the box for a single monomial:
/// `2 u^d`.
fn monomial_spread(box_radius: &BigUint, degree_bound: u32) -> BigInt {
    BigInt::from(2) * BigInt::from(box_radius.pow(degree_bound))
}

/// Compress the coefficients of `f` into integers so that
/// `sign(f(x) - f(y))` is unchanged for all `x, y` in the box
/// `{-u..u}^n`. The radius is `2 r u^d + 1`: test vectors are the per-monomial
/// value differences, each within `2u^d` in absolute value.
pub fn compress_polynomial(f: &Polynomial, box_radius: &BigUint) -> Result<Polynomial> {
    if box_radius.is_zero() {
        return Err(Error::validation("box radius must be at least 1"));
    }
    let r = f.term_count();
    if r == 0 {
        return Ok(f.clone());
    }
    let radius =
        BigInt::from(r as u64) * monomial_spread(box_radius, f.degree_bound) + BigInt::one();
    let coefficients = RationalVector::new(
        f.monomials.iter().map(|m| m.coefficient.clone()).collect(),
    );
    let req = CompressionRequest::new(coefficients, radius).expect("radius is positive");
    let reduced = reduce_vector(&req);
    let monomials = f
        .monomials
        .iter()
        .zip(&reduced.entries)
        .map(|(m, c)| {
            // nonzero coefficients keep their sign, so the support is stable
            debug_assert!(!c.is_zero());
            Monomial {
                exponents: m.exponents.clone(),
                coefficient: BigRational::from_integer(c.clone()),
            }
        })
        .collect();
    Polynomial::new(f.num_vars, f.degree_bound, monomials)
}

/// Decide `exists x in {-u..u}^n: c(x) <= z and g_i(x) <= b_i for all i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IppInstance {
    pub objective: Polynomial,
    pub threshold: BigRational,
    pub constraints: Vec<(Polynomial, BigRational)>,
    pub box_radius: BigUint,
}

impl IppInstance {
    pub fn validate(&self) -> Result<()> {
        if self.box_radius.is_zero() {
            return Err(Error::validation("box radius must be at least 1"));
        }
        let n = self.objective.num_vars;
        let d = self.objective.degree_bound;
        for (g, _) in &self.constraints {
            if g.num_vars != n || g.degree_bound != d {
                return Err(Error::validation(
                    "all polynomials must share the variable count and degree bound",
                ));
            }
        }
        Ok(())
    }

    pub fn encoding_bits(&self) -> u64 {
        let polys: u64 = std::iter::once(&self.objective)
            .chain(self.constraints.iter().map(|(g, _)| g))
            .map(Polynomial::encoding_bits)
            .sum();
        let bounds: u64 = self
            .constraints
            .iter()
            .map(|(_, b)| rat_bits(b))
            .sum();
        polys
            + bounds
            + rat_bits(&self.threshold)
            + int_bits(&BigInt::from(self.box_radius.clone()))
    }

    /// Feasibility of one box point.
    pub fn accepts(&self, point: &[BigInt]) -> Result<bool> {
        if eval(&self.objective, point)? > self.threshold {
            return Ok(false);
        }
        for (g, b) in &self.constraints {
            if eval(g, point)? > *b {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Compress every (polynomial, bound) pair of the instance. The feasible set
/// over the box is unchanged.
///
/// Each pair is lifted to one polynomial with an extra 0/1 variable carrying
/// the bound as its coefficient, compressed, and split back. Constant terms
/// are folded into the bound first: the lift identity evaluates the lifted
/// polynomial at the all-zeros point, so the compressed comparison only
/// matches when the constant term is zero.
pub fn compress_ipp(inst: &IppInstance) -> Result<(IppInstance, KernelReport)> {
    inst.validate()?;
    let mut report = KernelReport::new("ipp");
    report.original_bits = inst.encoding_bits();

    let (objective, threshold) =
        lift_and_compress(&inst.objective, &inst.threshold, &inst.box_radius)?;
    report.trace.push(format!(
        "objective: {} terms compressed",
        inst.objective.term_count()
    ));
    let mut constraints = Vec::with_capacity(inst.constraints.len());
    for (i, (g, b)) in inst.constraints.iter().enumerate() {
        let (gc, bc) = lift_and_compress(g, b, &inst.box_radius)?;
        report
            .trace
            .push(format!("constraint {i}: {} terms compressed", g.term_count()));
        constraints.push((gc, bc));
    }

    let kernel = IppInstance {
        objective,
        threshold,
        constraints,
        box_radius: inst.box_radius.clone(),
    };
    report.bound_ok = ipp_bound_ok(inst, &kernel);
    report.kernel_bits = kernel.encoding_bits();
    Ok((kernel, report))
}

/// Compress `f(x) <= bound` into `(f~, bound~)` with identical truth over the
/// box. The returned polynomial has no constant term.
fn lift_and_compress(
    f: &Polynomial,
    bound: &BigRational,
    box_radius: &BigUint,
) -> Result<(Polynomial, BigRational)> {
    let n = f.num_vars;
    let d = f.degree_bound;
    // fold the constant term into the bound
    let mut constant = BigRational::zero();
    let mut body: Vec<Monomial> = Vec::with_capacity(f.term_count());
    for m in &f.monomials {
        if m.total_degree() == 0 {
            constant = m.coefficient.clone();
        } else {
            body.push(m.clone());
        }
    }
    let shifted = bound - &constant;
    if shifted.is_zero() {
        // f(x) <= f-const(x) + 0: compare against the all-zeros point directly
        let compressed = compress_polynomial(&Polynomial::new(n, d, body)?, box_radius)?;
        return Ok((compressed, BigRational::zero()));
    }
    // lift: one extra 0/1 variable whose coefficient is the shifted bound
    let lifted_degree = d.max(1);
    let mut lifted: Vec<Monomial> = body
        .iter()
        .map(|m| {
            let mut exps = m.exponents.clone();
            exps.push(0);
            Monomial {
                exponents: exps,
                coefficient: m.coefficient.clone(),
            }
        })
        .collect();
    let mut switch = vec![0u32; n];
    switch.push(1);
    lifted.push(Monomial {
        exponents: switch.clone(),
        coefficient: shifted,
    });
    let lifted = Polynomial::new(n + 1, lifted_degree, lifted)?;
    let compressed = compress_polynomial(&lifted, box_radius)?;
    let mut new_bound = BigRational::zero();
    let mut new_body = Vec::with_capacity(compressed.term_count());
    for m in &compressed.monomials {
        if m.exponents == switch {
            new_bound = m.coefficient.clone();
        } else {
            let mut exps = m.exponents.clone();
            let last = exps.pop().expect("lifted monomials have n+1 exponents");
            debug_assert_eq!(last, 0);
            new_body.push(Monomial {
                exponents: exps,
                coefficient: m.coefficient.clone(),
            });
        }
    }
    Ok((Polynomial::new(n, d, new_body)?, new_bound))
}

fn ipp_bound_ok(original: &IppInstance, kernel: &IppInstance) -> bool {
    let pairs = std::iter::once((&original.objective, &kernel.objective)).chain(
        original
            .constraints
            .iter()
            .map(|(g, _)| g)
            .zip(kernel.constraints.iter().map(|(g, _)| g)),
    );
    for (orig, comp) in pairs {
        // lifted dimension r+1 and radius 2(r+1)u^max(d,1) + 1
        let r = orig.term_count() + 1;
        let radius = BigInt::from(r as u64)
            * monomial_spread(&original.box_radius, orig.degree_bound.max(1))
            + BigInt::one();
        let entries: Vec<BigInt> = comp
            .monomials
            .iter()
            .map(|m| m.coefficient.numer().clone())
            .collect();
        if !within_norm_bound(&IntegerVector::new(entries), &radius) {
            return false;
        }
    }
    true
}

/// Decide the instance by enumerating the whole box. Refuses when
/// `(2u+1)^n` exceeds the cap.
pub fn solve_ipp_brute(inst: &IppInstance, cap: u64) -> Result<(bool, Option<Vec<BigInt>>)> {
    inst.validate()?;
    let n = inst.objective.num_vars;
    let side = BigUint::from(2u32) * &inst.box_radius + BigUint::one();
    let count = side.pow(n as u32);
    if count > BigUint::from(cap) {
        return Err(Error::RefusedScale {
            needed: u128::try_from(&count).unwrap_or(u128::MAX),
            cap: cap as u128,
        });
    }
    // per-coordinate order 0, 1, -1, 2, -2, ...: the first witness found is
    // the smallest in magnitude
    let u = BigInt::from(inst.box_radius.clone());
    let mut values = vec![BigInt::zero()];
    let mut v = BigInt::one();
    while v <= u {
        values.push(v.clone());
        values.push(-&v);
        v += 1;
    }
    let mut cursor = vec![0usize; n];
    loop {
        let point: Vec<BigInt> = cursor.iter().map(|&c| values[c].clone()).collect();
        if inst.accepts(&point)? {
            return Ok((true, Some(point)));
        }
        let mut idx = 0;
        loop {
            if idx == n {
                return Ok((false, None));
            }
            if cursor[idx] + 1 < values.len() {
                cursor[idx] += 1;
                break;
            }
            cursor[idx] = 0;
            idx += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn mono(exps: &[u32], p: i64, q: i64) -> Monomial {
        Monomial {
            exponents: exps.to_vec(),
            coefficient: rat(p, q),
        }
    }

    fn ints(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    /// All box points of `{-u..u}^n`.
    fn box_points(n: usize, u: i64) -> Vec<Vec<BigInt>> {
        let mut points = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &points {
                for v in -u..=u {
                    let mut q = p.clone();
                    q.push(BigInt::from(v));
                    next.push(q);
                }
            }
            points = next;
        }
        points
    }

    #[test]
    fn eval_basics() {
        let zero = Polynomial::zero(2, 2);
        assert_eq!(eval(&zero, &ints(&[5, -7])).unwrap(), rat(0, 1));

        let product = Polynomial::new(2, 2, vec![mono(&[1, 1], 1, 1)]).unwrap();
        assert_eq!(eval(&product, &ints(&[2, 3])).unwrap(), rat(6, 1));

        let mixed =
            Polynomial::new(2, 2, vec![mono(&[2, 0], 1, 1), mono(&[0, 1], -1, 1)]).unwrap();
        assert_eq!(eval(&mixed, &ints(&[-2, 1])).unwrap(), rat(3, 1));

        assert!(eval(&mixed, &ints(&[1])).is_err());
    }

    #[test]
    fn monomial_order_is_graded_lexicographic() {
        let f = Polynomial::new(
            2,
            2,
            vec![mono(&[0, 2], 1, 1), mono(&[1, 0], 2, 1), mono(&[1, 1], 3, 1)],
        )
        .unwrap();
        let degrees: Vec<u32> = f.monomials.iter().map(|m| m.total_degree()).collect();
        assert_eq!(degrees, vec![1, 2, 2]);
        assert!(f.monomials[1].exponents < f.monomials[2].exponents);
    }

    #[test]
    fn constant_polynomial_compresses_to_some_constant() {
        let f = Polynomial::new(1, 1, vec![mono(&[0], -22, 7)]).unwrap();
        let c = compress_polynomial(&f, &BigUint::from(2u32)).unwrap();
        assert_eq!(c.term_count(), 1);
        assert!(c.monomials[0].coefficient.is_negative());
        // all differences f(x)-f(y) vanish, so any constant preserves them
    }

    #[test]
    fn linear_third_keeps_the_box_order() {
        let f = Polynomial::new(1, 1, vec![mono(&[1], 1, 3)]).unwrap();
        let u = BigUint::from(2u32);
        let c = compress_polynomial(&f, &u).unwrap();
        assert!(c.monomials[0].coefficient.numer() > &BigInt::zero());
        for x in box_points(1, 2) {
            for y in box_points(1, 2) {
                let orig = eval(&f, &x).unwrap() - eval(&f, &y).unwrap();
                let comp = eval(&c, &x).unwrap() - eval(&c, &y).unwrap();
                assert_eq!(
                    crate::ratio::sign_rat(&orig),
                    crate::ratio::sign_rat(&comp)
                );
            }
        }
    }

    #[test]
    fn quadratic_pair_signs_survive_over_the_whole_box() {
        let f = Polynomial::new(
            2,
            2,
            vec![mono(&[2, 0], 1, 2), mono(&[0, 1], -1, 3)],
        )
        .unwrap();
        let u = BigUint::from(2u32);
        let c = compress_polynomial(&f, &u).unwrap();
        let points = box_points(2, 2);
        for x in &points {
            for y in &points {
                let orig = eval(&f, x).unwrap() - eval(&f, y).unwrap();
                let comp = eval(&c, x).unwrap() - eval(&c, y).unwrap();
                assert_eq!(crate::ratio::sign_rat(&orig), crate::ratio::sign_rat(&comp));
            }
        }
    }

    #[test]
    fn trivial_ipp_keeps_zero_feasible() {
        let inst = IppInstance {
            objective: Polynomial::zero(2, 2),
            threshold: rat(0, 1),
            constraints: vec![],
            box_radius: BigUint::from(1u32),
        };
        let (kernel, report) = compress_ipp(&inst).unwrap();
        assert!(report.bound_ok);
        assert!(kernel.accepts(&ints(&[0, 0])).unwrap());
        let (feasible, witness) = solve_ipp_brute(&kernel, 1 << 20).unwrap();
        assert!(feasible);
        assert_eq!(witness, Some(ints(&[0, 0])));
    }

    #[test]
    fn one_dimensional_feasible_set_is_identical() {
        let inst = IppInstance {
            objective: Polynomial::new(1, 1, vec![mono(&[1], 1, 7)]).unwrap(),
            threshold: rat(0, 1),
            constraints: vec![(Polynomial::new(1, 1, vec![mono(&[1], 1, 1)]).unwrap(), rat(0, 1))],
            box_radius: BigUint::from(3u32),
        };
        let (kernel, _) = compress_ipp(&inst).unwrap();
        for x in box_points(1, 3) {
            assert_eq!(
                inst.accepts(&x).unwrap(),
                kernel.accepts(&x).unwrap(),
                "disagreement at {x:?}"
            );
        }
        // the feasible set is exactly {-3..0}
        for x in -3i64..=3 {
            assert_eq!(inst.accepts(&ints(&[x])).unwrap(), x <= 0);
        }
    }

    #[test]
    fn constant_terms_are_folded_into_the_bound() {
        // c(x) = x + 5 <= 5 must stay equivalent to x <= 0
        let inst = IppInstance {
            objective: Polynomial::new(1, 1, vec![mono(&[1], 1, 1), mono(&[0], 5, 1)]).unwrap(),
            threshold: rat(5, 1),
            constraints: vec![],
            box_radius: BigUint::from(2u32),
        };
        let (kernel, _) = compress_ipp(&inst).unwrap();
        for x in box_points(1, 2) {
            assert_eq!(inst.accepts(&x).unwrap(), kernel.accepts(&x).unwrap());
        }
    }

    #[test]
    fn brute_solver_handles_trivial_cases() {
        let infeasible = IppInstance {
            objective: Polynomial::zero(1, 1),
            threshold: rat(0, 1),
            constraints: vec![(Polynomial::zero(1, 1), rat(-1, 1))],
            box_radius: BigUint::from(1u32),
        };
        assert_eq!(solve_ipp_brute(&infeasible, 1 << 10).unwrap(), (false, None));

        let free = IppInstance {
            objective: Polynomial::zero(1, 1),
            threshold: rat(0, 1),
            constraints: vec![],
            box_radius: BigUint::from(1u32),
        };
        let (feasible, witness) = solve_ipp_brute(&free, 1 << 10).unwrap();
        assert!(feasible);
        assert_eq!(witness, Some(ints(&[0])));
    }

    #[test]
    fn brute_solver_refuses_big_boxes() {
        let inst = IppInstance {
            objective: Polynomial::zero(8, 1),
            threshold: rat(0, 1),
            constraints: vec![],
            box_radius: BigUint::from(100u32),
        };
        assert!(matches!(
            solve_ipp_brute(&inst, 1 << 10),
            Err(Error::RefusedScale { .. })
        ));
    }
}
