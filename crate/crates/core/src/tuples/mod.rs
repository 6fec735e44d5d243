//! Coefficient tuples (a_0, ..., a_{k-1}) with n + i*d = a_i * x_i^2.

mod enumerate;
mod reduce;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{greatest_prime_factor, is_squarefree_u64, squarefree_decompose};

pub use enumerate::{
    coefficient_alphabet, generate_candidates, generate_k5_candidates, satisfies_constraints,
    TupleConstraints,
};
pub use reduce::{find_subtuple, half_subprogression, parity_classes};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TupleError {
    #[error("coefficient {0} is zero or not squarefree")]
    BadCoefficient(i64),
    #[error("empty tuple")]
    Empty,
    #[error("term {index} of the progression is zero")]
    ZeroTerm { index: usize },
    #[error("term {index} has squarefree part {a} with a prime factor above {bound}")]
    PrimeBound { index: usize, a: BigInt, bound: u64 },
    #[error("coefficient {a} does not fit in 64 bits")]
    Overflow { a: BigInt },
    #[error("gcd(n, d) != 1 or d < 1 for (n, d) = ({n}, {d})")]
    BadProgression { n: BigInt, d: BigInt },
}

/// A coefficient tuple. Coefficients are squarefree and nonzero; the prime bound
/// P(a_i) <= max(P(b), k-1) depends on the context and is checked where it matters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ATuple {
    a: Vec<i64>,
}

impl ATuple {
    pub fn new(a: Vec<i64>) -> Result<Self, TupleError> {
        if a.is_empty() {
            return Err(TupleError::Empty);
        }
        if let Some(&bad) = a.iter().find(|&&x| x == 0 || !is_squarefree_u64(x.unsigned_abs())) {
            return Err(TupleError::BadCoefficient(bad));
        }
        Ok(ATuple { a })
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.a
    }

    pub fn get(&self, i: usize) -> i64 {
        self.a[i]
    }

    /// The tuple read backwards, realized by (n + (k-1)d, -d).
    pub fn mirror(&self) -> ATuple {
        ATuple { a: self.a.iter().rev().copied().collect() }
    }

    pub fn sign_changes(&self) -> usize {
        self.a.windows(2).filter(|w| (w[0] < 0) != (w[1] < 0)).count()
    }

    pub fn product_sign(&self) -> i8 {
        if self.a.iter().filter(|&&x| x < 0).count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Largest prime factor among the coefficients.
    pub fn max_prime(&self) -> u64 {
        self.a
            .iter()
            .map(|&x| crate::arith::greatest_prime_factor_u64(x.unsigned_abs()))
            .max()
            .unwrap_or(1)
    }

    pub fn window(&self, start: usize, len: usize) -> Option<ATuple> {
        self.a.get(start..start + len).map(|w| ATuple { a: w.to_vec() })
    }
}

impl fmt::Display for ATuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.a.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct TupleRecord {
    k: usize,
    a: Vec<i64>,
}

impl Serialize for ATuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TupleRecord { k: self.k(), a: self.a.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ATuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = TupleRecord::deserialize(d)?;
        if r.k != r.a.len() {
            return Err(D::Error::custom(format!("k = {} but {} coefficients", r.k, r.a.len())));
        }
        ATuple::new(r.a).map_err(D::Error::custom)
    }
}

/// sign_changes as a free function.
pub fn sign_changes(t: &ATuple) -> usize {
    t.sign_changes()
}

pub fn mirror(t: &ATuple) -> ATuple {
    t.mirror()
}

/// The progression n, n+d, ..., n+(k-1)d with gcd(n, d) = 1 and d >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Progression {
    #[serde(with = "crate::jsonnum")]
    pub n: BigInt,
    #[serde(with = "crate::jsonnum")]
    pub d: BigInt,
    pub k: usize,
}

impl Progression {
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>, k: usize) -> Result<Self, TupleError> {
        let (n, d) = (n.into(), d.into());
        if d < BigInt::one() || !n.gcd(&d).is_one() {
            return Err(TupleError::BadProgression { n, d });
        }
        Ok(Progression { n, d, k })
    }

    /// Normalizes a signed difference: (n, -d) is read backwards as (n+(k-1)(-d), d).
    /// Returns the progression and whether it was mirrored.
    pub fn from_signed(n: BigInt, d: BigInt, k: usize) -> Result<(Self, bool), TupleError> {
        if d.is_negative() {
            let last = &n + &d * BigInt::from(k as i64 - 1);
            Ok((Progression::new(last, -d, k)?, true))
        } else {
            Ok((Progression::new(n, d, k)?, false))
        }
    }

    pub fn terms(&self) -> Vec<BigInt> {
        progression_terms(&self.n, &self.d, self.k)
    }

    pub fn product(&self) -> BigInt {
        self.terms().iter().product()
    }
}

pub fn progression_terms(n: &BigInt, d: &BigInt, k: usize) -> Vec<BigInt> {
    (0..k).map(|i| n + d * BigInt::from(i)).collect()
}

/// Squarefree parts and square roots of the terms, with the prime bound max(pmax_b, k-1).
pub fn tuple_of_terms(terms: &[BigInt], pmax_b: u64) -> Result<(ATuple, Vec<BigInt>), TupleError> {
    let bound = pmax_b.max(terms.len().saturating_sub(1) as u64);
    let mut a = Vec::with_capacity(terms.len());
    let mut x = Vec::with_capacity(terms.len());
    for (index, t) in terms.iter().enumerate() {
        if t.is_zero() {
            return Err(TupleError::ZeroTerm { index });
        }
        let sd = squarefree_decompose(t).expect("nonzero");
        let p = greatest_prime_factor(&sd.b.abs()).expect("positive");
        if p > BigInt::from(bound) {
            return Err(TupleError::PrimeBound { index, a: sd.b, bound });
        }
        a.push(sd.b.to_i64().ok_or(TupleError::Overflow { a: sd.b.clone() })?);
        x.push(sd.y);
    }
    Ok((ATuple { a }, x))
}

/// The coefficient tuple and square roots realized by a progression.
pub fn extract_tuple(p: &Progression, pmax_b: u64) -> Result<(ATuple, Vec<BigInt>), TupleError> {
    tuple_of_terms(&p.terms(), pmax_b)
}

/// A progression together with the witness (b, y) of n(n+d)...(n+(k-1)d) = b*y^2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub progression: Progression,
    #[serde(with = "crate::jsonnum")]
    pub b: BigInt,
    #[serde(with = "crate::jsonnum")]
    pub y: BigInt,
    #[serde(with = "crate::jsonnum::vec")]
    pub x: Vec<BigInt>,
    pub tuple: ATuple,
}
