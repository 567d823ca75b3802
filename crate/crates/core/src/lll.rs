//! Lattice basis reduction over exact rationals.
//!
//! The engine maintains Gram-Schmidt data (`mu` coefficients and squared
//! norms) derived from the Gram matrix only, plus the integer transform that
//! maps input rows to output rows. Driving the reduction off the Gram matrix
//! lets callers reduce lattices whose basis vectors are irrational as long as
//! all pairwise inner products are rational; the simultaneous-approximation
//! lattice is exactly such a case.
//!
//! The sweep is the classic size-reduce/exchange loop (Lenstra, Lenstra,
//! Lovász 1982; see also Cohen, "A Course in Computational Algebraic Number
//! Theory", alg. 2.6.3). All steps are deterministic: the working index only
//! ever moves to the first position where the exchange condition fails.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio::{int_determinant, round_half_up};

/// Result of reducing a rational basis: the reduced rows together with the
/// unimodular transform that produced them (`basis = transform * input`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedBasis {
    pub basis: Vec<Vec<BigRational>>,
    pub transform: Vec<Vec<BigInt>>,
}

impl ReducedBasis {
    /// Determinant of the transform; ±1 certifies that input and output
    /// generate the same lattice.
    pub fn transform_determinant(&self) -> BigInt {
        int_determinant(&self.transform)
    }
}

/// Size-reduce and exchange until the Lovász condition holds with `delta`.
///
/// Rows must be linearly independent and `1/4 < delta < 1`.
pub fn lll_reduce(basis: &[Vec<BigRational>], delta: &BigRational) -> Result<ReducedBasis> {
    if basis.is_empty() {
        return Ok(ReducedBasis {
            basis: Vec::new(),
            transform: Vec::new(),
        });
    }
    let cols = basis[0].len();
    if basis.iter().any(|row| row.len() != cols) {
        return Err(Error::validation("basis rows have unequal lengths"));
    }
    if basis.len() > cols {
        return Err(Error::DegenerateBasis(format!(
            "{} rows cannot be independent in dimension {}",
            basis.len(),
            cols
        )));
    }
    let n = basis.len();
    let mut gram = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let dot: BigRational = basis[i]
                .iter()
                .zip(&basis[j])
                .map(|(a, b)| a * b)
                .sum();
            gram[i][j] = dot.clone();
            gram[j][i] = dot;
        }
    }
    let reduction = reduce_gram(&gram, delta)?;
    let reduced = (0..n)
        .map(|i| {
            (0..cols)
                .map(|c| {
                    (0..n)
                        .map(|j| {
                            BigRational::from_integer(reduction.transform[i][j].clone())
                                * &basis[j][c]
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(ReducedBasis {
        basis: reduced,
        transform: reduction.transform,
    })
}

/// Outcome of reducing a lattice presented by its Gram matrix.
#[derive(Debug, Clone)]
pub struct GramReduction {
    /// Integer coefficient rows: output vector i equals
    /// `sum_j transform[i][j] * input vector j`.
    pub transform: Vec<Vec<BigInt>>,
    /// Squared Gram-Schmidt norms of the reduced basis.
    pub gso_norms: Vec<BigRational>,
}

/// Run the reduction on a symmetric positive-definite rational Gram matrix.
pub fn reduce_gram(gram: &[Vec<BigRational>], delta: &BigRational) -> Result<GramReduction> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta >= BigRational::one() {
        return Err(Error::validation(format!(
            "reduction parameter delta must satisfy 1/4 < delta < 1, got {delta}"
        )));
    }
    let mut state = State::init(gram)?;
    let n = state.dim();
    let mut k = 1;
    while k < n {
        state.size_reduce(k, k - 1);
        // Lovász exchange condition with parameter delta.
        let lhs = &state.norms[k];
        let rhs = (delta - &state.mu[k][k - 1] * &state.mu[k][k - 1]) * &state.norms[k - 1];
        if *lhs >= rhs {
            for l in (0..k.saturating_sub(1)).rev() {
                state.size_reduce(k, l);
            }
            k += 1;
        } else {
            state.swap(k);
            k = std::cmp::max(1, k - 1);
        }
    }
    Ok(GramReduction {
        transform: state.transform,
        gso_norms: state.norms,
    })
}

struct State {
    /// mu[i][j] for j < i; lower triangle of the GSO coefficient matrix.
    mu: Vec<Vec<BigRational>>,
    /// Squared norms of the orthogonalized vectors.
    norms: Vec<BigRational>,
    transform: Vec<Vec<BigInt>>,
}

impl State {
    fn dim(&self) -> usize {
        self.norms.len()
    }

    fn init(gram: &[Vec<BigRational>]) -> Result<State> {
        let n = gram.len();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut norms = vec![BigRational::zero(); n];
        for i in 0..n {
            for j in 0..i {
                let mut v = gram[i][j].clone();
                for l in 0..j {
                    v -= &mu[i][l] * &mu[j][l] * &norms[l];
                }
                mu[i][j] = v / &norms[j];
            }
            let mut v = gram[i][i].clone();
            for l in 0..i {
                v -= &mu[i][l] * &mu[i][l] * &norms[l];
            }
            if v <= BigRational::zero() {
                return Err(Error::DegenerateBasis(format!(
                    "row {i} is linearly dependent on earlier rows"
                )));
            }
            norms[i] = v;
        }
        let transform = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Ok(State { mu, norms, transform })
    }

    /// Subtract the nearest-integer multiple of row `l` from row `k`.
    fn size_reduce(&mut self, k: usize, l: usize) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if self.mu[k][l].abs() <= half {
            return;
        }
        let q = round_half_up(&self.mu[k][l]);
        let qr = BigRational::from_integer(q.clone());
        for j in 0..l {
            let delta = &qr * &self.mu[l][j];
            self.mu[k][j] -= delta;
        }
        self.mu[k][l] -= qr;
        for j in 0..self.transform[k].len() {
            let delta = &q * &self.transform[l][j];
            self.transform[k][j] -= delta;
        }
    }

    /// Exchange rows k-1 and k and patch the GSO data in place.
    fn swap(&mut self, k: usize) {
        self.transform.swap(k - 1, k);
        for j in 0..k.saturating_sub(1) {
            let tmp = self.mu[k][j].clone();
            self.mu[k][j] = self.mu[k - 1][j].clone();
            self.mu[k - 1][j] = tmp;
        }
        let mu = self.mu[k][k - 1].clone();
        let b_new = &self.norms[k] + &mu * &mu * &self.norms[k - 1];
        self.mu[k][k - 1] = &mu * &self.norms[k - 1] / &b_new;
        self.norms[k] = &self.norms[k - 1] * &self.norms[k] / &b_new;
        self.norms[k - 1] = b_new;
        for i in k + 1..self.dim() {
            let t = self.mu[i][k].clone();
            self.mu[i][k] = &self.mu[i][k - 1] - &mu * &t;
            self.mu[i][k - 1] = &t + &self.mu[k][k - 1] * &self.mu[i][k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn rat(p: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(p))
    }

    fn rational_rows(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    fn delta_three_quarters() -> BigRational {
        BigRational::new(BigInt::from(3), BigInt::from(4))
    }

    /// Recompute GSO of the output rows and check size reduction plus the
    /// exchange condition, independently of the engine internals.
    fn assert_reduced(basis: &[Vec<BigRational>], delta: &BigRational) {
        let n = basis.len();
        let cols = basis.first().map_or(0, |r| r.len());
        let mut ortho: Vec<Vec<BigRational>> = Vec::new();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut norms = Vec::new();
        for i in 0..n {
            let mut v = basis[i].clone();
            for j in 0..i {
                let num: BigRational = basis[i]
                    .iter()
                    .zip(&ortho[j])
                    .map(|(a, b)| a * b)
                    .sum();
                mu[i][j] = num / &norms[j];
                for c in 0..cols {
                    let d = &mu[i][j] * &ortho[j][c];
                    v[c] -= d;
                }
            }
            let norm: BigRational = v.iter().map(|x| x * x).sum();
            assert!(norm > BigRational::zero(), "output basis degenerate");
            ortho.push(v);
            norms.push(norm);
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for i in 0..n {
            for j in 0..i {
                assert!(mu[i][j].abs() <= half, "not size-reduced at ({i},{j})");
            }
        }
        for k in 1..n {
            let rhs = (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
            assert!(norms[k] >= rhs, "exchange condition fails at {k}");
        }
    }

    #[test]
    fn identity_basis_is_already_reduced() {
        let basis = rational_rows(&[&[1, 0], &[0, 1]]);
        let out = lll_reduce(&basis, &delta_three_quarters()).unwrap();
        assert_eq!(out.basis, basis);
        assert_eq!(out.transform_determinant().to_i64(), Some(1));
    }

    #[test]
    fn two_dim_lattice_preserved() {
        let basis = rational_rows(&[&[1, 1], &[1, 0]]);
        let out = lll_reduce(&basis, &delta_three_quarters()).unwrap();
        let det = out.transform_determinant();
        assert!(det.to_i64() == Some(1) || det.to_i64() == Some(-1));
        assert_reduced(&out.basis, &delta_three_quarters());
        // transform really maps input rows to output rows
        for i in 0..2 {
            for c in 0..2 {
                let recomputed: BigRational = (0..2)
                    .map(|j| BigRational::from_integer(out.transform[i][j].clone()) * &basis[j][c])
                    .sum();
                assert_eq!(recomputed, out.basis[i][c]);
            }
        }
    }

    #[test]
    fn rank_one_lattice_untouched() {
        let basis = rational_rows(&[&[5]]);
        let out = lll_reduce(&basis, &delta_three_quarters()).unwrap();
        assert_eq!(out.basis, basis);
        assert_eq!(out.transform_determinant().to_i64(), Some(1));
    }

    #[test]
    fn dependent_rows_rejected() {
        let basis = rational_rows(&[&[1, 2], &[2, 4]]);
        let err = lll_reduce(&basis, &delta_three_quarters()).unwrap_err();
        assert!(matches!(err, Error::DegenerateBasis(_)));
        let wide = rational_rows(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(matches!(
            lll_reduce(&wide, &delta_three_quarters()),
            Err(Error::DegenerateBasis(_))
        ));
    }

    #[test]
    fn delta_out_of_range_rejected() {
        let basis = rational_rows(&[&[1]]);
        for bad in [(1i64, 4i64), (1, 8), (1, 1), (5, 4)] {
            let delta = BigRational::new(BigInt::from(bad.0), BigInt::from(bad.1));
            assert!(lll_reduce(&basis, &delta).is_err());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_bases_stay_in_the_same_lattice(
            entries in proptest::collection::vec(-30i64..30, 9),
        ) {
            let basis: Vec<Vec<BigRational>> = entries
                .chunks(3)
                .map(|c| c.iter().map(|&x| rat(x)).collect())
                .collect();
            let delta = delta_three_quarters();
            match lll_reduce(&basis, &delta) {
                Ok(out) => {
                    let det = out.transform_determinant();
                    prop_assert!(det.clone().to_i64() == Some(1) || det.to_i64() == Some(-1));
                    assert_reduced(&out.basis, &delta);
                }
                Err(Error::DegenerateBasis(_)) => {
                    // dependent random rows are fine; nothing further to check
                }
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
