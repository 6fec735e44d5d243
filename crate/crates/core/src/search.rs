//! Exhaustive search of (n, d) boxes and direct verification of claimed solutions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorize, factorize_u64, greatest_prime_factor, is_squarefree};
use crate::tuples::{progression_terms, tuple_of_terms, ATuple, Progression, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("empty or reversed range {0}")]
    Range(String),
    #[error("d_min must be at least 1")]
    NonPositiveD,
    #[error("k must be at least 2")]
    SmallK,
    #[error("bad b-condition {0:?}; expected eq:P, le:P or one")]
    BadCondition(String),
}

/// Condition on the squarefree part b of the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BCondition {
    /// P(b) = p
    Eq(u64),
    /// P(b) <= p
    Le(u64),
    /// b = 1
    One,
}

impl BCondition {
    pub fn holds(&self, b: &BigInt) -> bool {
        if !b.is_positive() {
            return false;
        }
        let p = greatest_prime_factor(b).expect("positive");
        match *self {
            BCondition::Eq(p0) => p == BigInt::from(p0),
            BCondition::Le(p0) => p <= BigInt::from(p0),
            BCondition::One => b.is_one(),
        }
    }

    /// No prime above this can divide b.
    fn b_prime_bound(&self) -> u64 {
        match *self {
            BCondition::Eq(p) | BCondition::Le(p) => p,
            BCondition::One => 1,
        }
    }
}

impl fmt::Display for BCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BCondition::Eq(p) => write!(f, "eq:{p}"),
            BCondition::Le(p) => write!(f, "le:{p}"),
            BCondition::One => write!(f, "one"),
        }
    }
}

impl FromStr for BCondition {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SearchError::BadCondition(s.to_string());
        if s == "one" {
            return Ok(BCondition::One);
        }
        let (tag, p) = s.split_once(':').ok_or_else(bad)?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        match tag {
            "eq" => Ok(BCondition::Eq(p)),
            "le" => Ok(BCondition::Le(p)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchSpec {
    pub k: usize,
    pub n_min: i64,
    pub n_max: i64,
    pub d_min: i64,
    pub d_max: i64,
    pub b: BCondition,
}

impl SearchSpec {
    pub fn new(k: usize, n: (i64, i64), d: (i64, i64), b: BCondition) -> Result<Self, SearchError> {
        if k < 2 {
            return Err(SearchError::SmallK);
        }
        if n.0 > n.1 {
            return Err(SearchError::Range(format!("n in [{}, {}]", n.0, n.1)));
        }
        if d.0 > d.1 {
            return Err(SearchError::Range(format!("d in [{}, {}]", d.0, d.1)));
        }
        if d.0 < 1 {
            return Err(SearchError::NonPositiveD);
        }
        Ok(SearchSpec { k, n_min: n.0, n_max: n.1, d_min: d.0, d_max: d.1, b })
    }

    /// Bound on the primes allowed to appear to an odd power in a single term.
    pub fn term_prime_bound(&self) -> u64 {
        self.b.b_prime_bound().max(self.k as u64 - 1)
    }

    pub fn box_size(&self) -> u128 {
        (self.n_max as i128 - self.n_min as i128 + 1) as u128 * (self.d_max as i128 - self.d_min as i128 + 1) as u128
    }
}

fn factor_term(t: i128) -> Vec<(u64, u32)> {
    let a = t.unsigned_abs();
    if a <= u64::MAX as u128 {
        factorize_u64(a as u64)
    } else {
        // primes of a u128 need not fit in u64, but then they exceed every bound we use
        factorize(&BigInt::from(a))
            .expect("nonzero")
            .into_iter()
            .map(|(p, e)| (u64::try_from(&p).unwrap_or(u64::MAX), e))
            .collect()
    }
}

/// Tests one (n, d). Terms with a large prime to an odd power are rejected as soon as
/// they are factored: such a prime divides no other term, so it would divide b.
fn check_point(n: i64, d: i64, spec: &SearchSpec) -> Option<Solution> {
    if n.gcd(&d) != 1 {
        return None;
    }
    let k = spec.k;
    let terms: Vec<i128> = (0..k).map(|i| n as i128 + i as i128 * d as i128).collect();
    if terms.iter().any(|&t| t == 0) {
        return None;
    }
    if terms.iter().filter(|&&t| t < 0).count() % 2 == 1 {
        return None;
    }
    let bound = spec.term_prime_bound();
    let mut odd: BTreeMap<u64, u32> = BTreeMap::new();
    for &t in &terms {
        for (p, e) in factor_term(t) {
            if e % 2 == 1 && p > bound {
                return None;
            }
            *odd.entry(p).or_default() += e;
        }
    }
    let b: BigInt = odd.iter().filter(|(_, &e)| e % 2 == 1).map(|(&p, _)| BigInt::from(p)).product();
    if !spec.b.holds(&b) {
        return None;
    }
    let y: BigInt = odd.iter().map(|(&p, &e)| BigInt::from(p).pow(e / 2)).product();
    let big: Vec<BigInt> = terms.iter().map(|&t| BigInt::from(t)).collect();
    let (tuple, x) = tuple_of_terms(&big, spec.b.b_prime_bound()).ok()?;
    Some(Solution { progression: Progression::new(n, d, k).ok()?, b, y, x, tuple })
}

/// Every solution in the box, in (d, n) order.
pub fn search_box(spec: &SearchSpec) -> Vec<Solution> {
    let per_d: Vec<Vec<Solution>> = (spec.d_min..=spec.d_max)
        .into_par_iter()
        .map(|d| (spec.n_min..=spec.n_max).filter_map(|n| check_point(n, d, spec)).collect())
        .collect();
    per_d.into_iter().flatten().collect()
}

/// What `verify_solution` checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub coprime: bool,
    pub nonzero_terms: bool,
    pub product_matches: bool,
    pub b_squarefree: bool,
    #[serde(with = "crate::jsonnum")]
    pub product: BigInt,
    /// squarefree part of the product, for comparison with the claimed b
    #[serde(serialize_with = "ser_opt_big")]
    pub actual_b: Option<BigInt>,
    pub tuple: Option<ATuple>,
}

fn ser_opt_big<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(b) => crate::jsonnum::serialize(b, s),
        None => s.serialize_none(),
    }
}

/// Checks n(n+d)...(n+(k-1)d) = b y^2 directly.
pub fn verify_solution(n: &BigInt, d: &BigInt, k: usize, b: &BigInt, y: &BigInt) -> VerifyReport {
    let terms = progression_terms(n, d, k);
    let product: BigInt = terms.iter().product();
    let coprime = n.gcd(d).is_one();
    let nonzero_terms = terms.iter().all(|t| !t.is_zero());
    let product_matches = product == b * y * y;
    let b_squarefree = !b.is_zero() && is_squarefree(b);
    let actual_b = (!product.is_zero()).then(|| crate::arith::squarefree_decompose(&product).expect("nonzero").b);
    let tuple = if nonzero_terms { tuple_of_terms(&terms, u64::MAX).ok().map(|(a, _)| a) } else { None };
    VerifyReport {
        ok: coprime && nonzero_terms && product_matches && b_squarefree,
        coprime,
        nonzero_terms,
        product_matches,
        b_squarefree,
        product,
        actual_b,
        tuple,
    }
}

/// JSON line for a found solution.
pub fn solution_json(s: &Solution) -> serde_json::Value {
    let num = |b: &BigInt| -> serde_json::Value { serde_json::from_str(&b.to_string()).expect("integer") };
    serde_json::json!({
        "n": num(&s.progression.n),
        "d": num(&s.progression.d),
        "k": s.progression.k,
        "b": num(&s.b),
        "y": num(&s.y),
        "tuple": s.tuple.coeffs(),
    })
}

/// Integer square root when exact.
pub fn exact_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nd(v: &[Solution]) -> Vec<(i64, i64)> {
        v.iter().map(|s| (s.progression.n.clone().try_into().unwrap(), s.progression.d.clone().try_into().unwrap())).collect()
    }

    #[test]
    fn condition_parsing() {
        assert_eq!("eq:5".parse::<BCondition>().unwrap(), BCondition::Eq(5));
        assert_eq!("le:3".parse::<BCondition>().unwrap(), BCondition::Le(3));
        assert_eq!("one".parse::<BCondition>().unwrap(), BCondition::One);
        assert!("lt:3".parse::<BCondition>().is_err());
        assert!(BCondition::Eq(5).holds(&BigInt::from(30)));
        assert!(!BCondition::Le(3).holds(&BigInt::from(30)));
        assert!(BCondition::Le(3).holds(&BigInt::from(1)));
    }

    #[test]
    fn small_k5_box() {
        let s = SearchSpec::new(5, (-20, 20), (2, 10), BCondition::Eq(5)).unwrap();
        let found = search_box(&s);
        // (-3, 2) has 5 | n + 4d only
        assert_eq!(nd(&found), [(-3, 2), (-4, 3), (-12, 7)]);
        assert_eq!(found[0].tuple.coeffs(), [-3, -1, 1, 3, 5]);
        assert_eq!(found[2].b, BigInt::from(30));
        assert_eq!(found[2].y, BigInt::from(24));
    }

    #[test]
    fn verification() {
        let b = |v: i64| BigInt::from(v);
        let r = verify_solution(&b(-12), &b(7), 5, &b(30), &b(24));
        assert!(r.ok);
        assert_eq!(r.tuple.unwrap().coeffs(), [-3, -5, 2, 1, 1]);
        let r = verify_solution(&b(-4), &b(3), 5, &b(5), &b(8));
        assert!(r.ok);
        // read from n = -4 this is the mirror of (2, 5, 2, -1, -1)
        assert_eq!(r.tuple.unwrap().coeffs(), [-1, -1, 2, 5, 2]);
        let r = verify_solution(&b(2), &b(1), 5, &b(7), &b(12));
        assert!(!r.ok);
        assert!(!r.product_matches);
        assert_eq!(r.actual_b, Some(b(5)));
    }
}
