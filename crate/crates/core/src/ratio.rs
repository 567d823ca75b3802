//! Exact rational/integer scalar helpers and the two vector newtypes used by
//! the weight-compression routines.
//!
//! Everything in this crate computes over unbounded-precision rationals and
//! integers; there is no floating point anywhere. `num_rational::BigRational`
//! keeps values canonical (gcd-reduced, positive denominator), which is what
//! the serialization layer relies on for byte-identical output.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sign of a quantity, encoded as -1, 0 or +1.
pub fn sign_int(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of a rational, encoded as -1, 0 or +1.
pub fn sign_rat(x: &BigRational) -> i8 {
    sign_int(x.numer())
}

/// Nearest integer with halves rounded up: `round_half_up(5/2) = 3`,
/// `round_half_up(-5/2) = -2`.
pub fn round_half_up(x: &BigRational) -> BigInt {
    let shifted = x + BigRational::new(BigInt::one(), BigInt::from(2));
    shifted.floor().to_integer()
}

/// Bit length of an integer's magnitude; zero is counted as one bit.
pub fn int_bits(x: &BigInt) -> u64 {
    if x.is_zero() {
        1
    } else {
        x.bits()
    }
}

/// Bit length of a rational: numerator plus denominator bits.
pub fn rat_bits(x: &BigRational) -> u64 {
    int_bits(x.numer()) + int_bits(x.denom())
}

/// Render a rational as `p/q`, or just `p` when the denominator is one.
pub fn format_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p` or `p/q` into a canonical rational.
pub fn parse_rat(token: &str) -> Result<BigRational> {
    let mk_err = || Error::validation(format!("expected rational `p` or `p/q`, got `{token}`"));
    match token.split_once('/') {
        None => {
            let n: BigInt = token.parse().map_err(|_| mk_err())?;
            Ok(BigRational::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| mk_err())?;
            let q: BigInt = q.parse().map_err(|_| mk_err())?;
            if q.is_zero() {
                return Err(Error::validation(format!("zero denominator in `{token}`")));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

pub fn parse_int(token: &str) -> Result<BigInt> {
    token
        .parse()
        .map_err(|_| Error::validation(format!("expected integer, got `{token}`")))
}

pub fn parse_uint(token: &str) -> Result<BigUint> {
    token
        .parse()
        .map_err(|_| Error::validation(format!("expected non-negative integer, got `{token}`")))
}

/// A vector of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalVector {
    pub entries: Vec<BigRational>,
}

impl RationalVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        RationalVector { entries }
    }

    pub fn from_ints<I: Into<BigInt>>(items: impl IntoIterator<Item = I>) -> Self {
        RationalVector {
            entries: items
                .into_iter()
                .map(|x| BigRational::from_integer(x.into()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    /// Largest absolute entry, or zero for an empty vector.
    pub fn max_abs(&self) -> BigRational {
        self.entries
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn dot_int(&self, other: &[BigInt]) -> BigRational {
        debug_assert_eq!(self.entries.len(), other.len());
        self.entries
            .iter()
            .zip(other)
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .sum()
    }
}

/// A vector of exact integers, as produced by weight compression.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntegerVector {
    pub entries: Vec<BigInt>,
}

impl IntegerVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntegerVector { entries }
    }

    pub fn zeros(len: usize) -> Self {
        IntegerVector {
            entries: vec![BigInt::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn dot(&self, other: &[BigInt]) -> BigInt {
        debug_assert_eq!(self.entries.len(), other.len());
        self.entries.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

/// Exact determinant of a square integer matrix (Bareiss fraction-free
/// elimination; all intermediate divisions are exact).
pub fn int_determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(matrix.iter().all(|row| row.len() == n));
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, pivot);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// lcm of the denominators of a list of rationals (at least one).
pub fn common_denominator<'a>(items: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    items
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
