//! Rank-0 elimination: when the Jacobian of a quartic from four terms has rank 0,
//! all of its rational points can be listed and each one checked.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::family::is_rat_square;
use super::quartic::GenusOneQuartic;
use super::torsion::{torsion_bound, torsion_order, RationalCurve};
use super::CurveError;
use crate::arith::QuadField;
use crate::oracle::CurveOracle;
use crate::tuples::{progression_terms, tuple_of_terms, ATuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// points X = n/d with |n|, d up to this bound are searched
    pub height: u64,
    /// primes below this are used for the torsion bound
    pub prime_limit: u32,
    pub min_primes: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { height: 10_000, prime_limit: 200, min_primes: 5 }
    }
}

/// Points of a quartic whose Jacobian has rank 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankZeroEnumeration {
    pub key: String,
    pub torsion_bound: u64,
    pub torsion: u64,
    /// affine X-coordinates found, ascending
    #[serde(serialize_with = "ser_rats")]
    pub points: Vec<BigRational>,
    pub points_at_infinity: u64,
    /// projective points counted
    pub point_count: u64,
    pub height: u64,
    /// count equals the torsion order, so nothing was missed
    pub complete: bool,
}

fn ser_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

const SQ64: u64 = {
    let mut m = 0u64;
    let mut i = 0;
    while i < 64 {
        m |= 1 << (i * i % 64);
        i += 1;
    }
    m
};

fn sq_mask(m: u32) -> u128 {
    let mut r = 0u128;
    for i in 0..m {
        r |= 1 << (i * i % m);
    }
    r
}

struct SquareTest {
    m63: u128,
    m65: u128,
    m11: u128,
}

impl SquareTest {
    fn new() -> Self {
        SquareTest { m63: sq_mask(63), m65: sq_mask(65), m11: sq_mask(11) }
    }

    fn is_square(&self, v: i128) -> bool {
        if v < 0 {
            return false;
        }
        let u = v as u128;
        if SQ64 >> (u & 63) & 1 == 0 || self.m63 >> (u % 63) & 1 == 0 || self.m65 >> (u % 65) & 1 == 0 || self.m11 >> (u % 11) & 1 == 0 {
            return false;
        }
        let r = u.sqrt();
        r * r == u
    }
}

fn int_coeffs(q: &GenusOneQuartic) -> Result<[BigInt; 5], CurveError> {
    if !q.field().is_rational() {
        return Err(CurveError::NotRational(q.field().d()));
    }
    let c = q.canonical();
    Ok(c.coeffs().clone().map(|x| x.u().to_integer()))
}

/// Affine points with |n| <= h, 1 <= d <= h, stopping once `target` points are counted.
fn search_points(c: &[BigInt; 5], h: u64, base: u64, target: u64) -> Vec<(i64, i64)> {
    let hi = h as i64;
    let fits = {
        let m = c.iter().map(|x| x.abs()).max().unwrap();
        let h4 = BigInt::from(h).pow(4);
        m * h4 * BigInt::from(8) < BigInt::from(1u128 << 125)
    };
    let found = Mutex::new(Vec::new());
    let count = std::sync::atomic::AtomicU64::new(base);
    let done = || count.load(std::sync::atomic::Ordering::Relaxed) >= target;
    let hit = |n: i64, d: i64, zero: bool| {
        if n.gcd(&d) == 1 {
            found.lock().unwrap().push((n, d));
            count.fetch_add(if zero { 1 } else { 2 }, std::sync::atomic::Ordering::Relaxed);
        }
    };
    if fits {
        let ci: Vec<i128> = c.iter().map(|x| x.to_i128().unwrap()).collect();
        let sq = SquareTest::new();
        (1..=hi).into_par_iter().for_each(|d| {
            if done() {
                return;
            }
            let d = d as i128;
            let (e3, e2, e1, e0) = (ci[1] * d, ci[2] * d * d, ci[3] * d * d * d, ci[4] * d * d * d * d);
            for n in -(hi as i128)..=hi as i128 {
                let v = (((ci[0] * n + e3) * n + e2) * n + e1) * n + e0;
                if v == 0 {
                    hit(n as i64, d as i64, true);
                } else if sq.is_square(v) {
                    hit(n as i64, d as i64, false);
                }
            }
        });
    } else {
        (1..=hi).into_par_iter().for_each(|d| {
            if done() {
                return;
            }
            let db = BigInt::from(d);
            for n in -hi..=hi {
                let nb = BigInt::from(n);
                let v = c.iter().enumerate().fold(BigInt::zero(), |acc, (i, ci)| acc * &nb + ci * db.pow(i as u32));
                if v.is_zero() {
                    hit(n, d, true);
                } else if !v.is_negative() && {
                    let r = v.sqrt();
                    &r * &r == v
                } {
                    hit(n, d, false);
                }
            }
        });
    }
    let mut v = found.into_inner().unwrap();
    v.sort_by(|a, b| BigRational::new(a.0.into(), a.1.into()).cmp(&BigRational::new(b.0.into(), b.1.into())));
    v
}

/// Lists the rational points of a quartic over Q whose Jacobian has rank 0.
///
/// The list is declared complete only when the number of points found equals the
/// torsion order of the Jacobian, since C(Q) and E(Q) are then in bijection.
pub fn rank0_points(q: &GenusOneQuartic, opts: &SearchOptions) -> Result<RankZeroEnumeration, CurveError> {
    let c = int_coeffs(q)?;
    let key = q.canonical_key();
    let jac = RationalCurve::from_model(&q.canonical().jacobian_model())?;
    let bound = torsion_bound(&jac, opts.prime_limit, opts.min_primes)?;
    let torsion = if bound == 1 { 1 } else { torsion_order(&jac) };
    let at_inf = if c[0].is_zero() {
        1
    } else if is_rat_square(&BigRational::from_integer(c[0].clone())) {
        2
    } else {
        0
    };
    let found = search_points(&c, opts.height, at_inf, torsion);
    let c0 = q.canonical();
    let mut points = Vec::new();
    let mut count = at_inf;
    for (n, d) in found {
        let x = BigRational::new(n.into(), d.into());
        let v = c0.eval_rat(&x);
        count += if v.is_zero() { 1 } else { 2 };
        points.push(x);
    }
    Ok(RankZeroEnumeration {
        key,
        torsion_bound: bound,
        torsion,
        points,
        points_at_infinity: at_inf,
        point_count: count,
        height: opts.height,
        complete: count == torsion,
    })
}

/// A choice of four indices and the quartic A (X + i1)(X + i2)(X + i3)(X + i4) they give,
/// where X = n/d and A is the product of the four coefficients.
pub fn quadruple_quartic(t: &ATuple, idx: [usize; 4]) -> Result<GenusOneQuartic, CurveError> {
    use super::quartic::Poly;
    let f = QuadField::RATIONAL;
    let a: i64 = idx.iter().map(|&i| t.get(i)).product();
    let p = idx
        .iter()
        .fold(Poly::from_ints(f, &[a]), |acc, &i| acc.mul(&Poly::from_ints(f, &[i as i64, 1])));
    Ok(GenusOneQuartic::from_poly(&p)?.with_label(format!("{t}@{idx:?}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum QuadrupleVerdict {
    NoRank { key: String },
    PositiveRank { key: String, rank: u32 },
    Incomplete { key: String, found: u64, torsion: u64 },
    Complete { key: String, points: usize, realized: Vec<(i64, i64)> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Rank0Outcome {
    /// all points found and none realizes the tuple with |d| > 1
    Eliminated { quadruple: [usize; 4], key: String, realized: Vec<(i64, i64)> },
    SurvivesWith { quadruple: [usize; 4], key: String, realized: Vec<(i64, i64)> },
    Unresolved { verdicts: Vec<([usize; 4], QuadrupleVerdict)> },
}

impl Rank0Outcome {
    pub fn is_eliminated(&self) -> bool {
        matches!(self, Rank0Outcome::Eliminated { .. })
    }
}

/// Shared per-key results, so a curve met by several tuples is searched once.
#[derive(Default)]
pub struct Rank0Cache {
    map: Mutex<HashMap<String, Result<RankZeroEnumeration, CurveError>>>,
}

impl Rank0Cache {
    pub fn new() -> Self {
        Self::default()
    }

    fn get(&self, q: &GenusOneQuartic, key: &str, opts: &SearchOptions) -> Result<RankZeroEnumeration, CurveError> {
        if let Some(r) = self.map.lock().unwrap().get(key) {
            return r.clone();
        }
        let r = rank0_points(q, opts);
        self.map.lock().unwrap().insert(key.to_string(), r.clone());
        r
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// (n, d) pairs with n/d = x that realize the tuple, trying both signs of d.
pub fn realizations(t: &ATuple, x: &BigRational) -> Vec<(i64, i64)> {
    let (n, d) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    for s in [1i64, -1] {
        let (n, d) = (&n * s, &d * s);
        let terms = progression_terms(&n, &d, t.k());
        if let Ok((a, _)) = tuple_of_terms(&terms, u64::MAX) {
            if &a == t {
                out.push((n.to_i64().unwrap(), d.to_i64().unwrap()));
            }
        }
    }
    out
}

fn quadruples(k: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Tries every quadruple of indices until one has a rank-0 Jacobian with a complete point list.
pub fn rank0_eliminate_tuple(
    t: &ATuple,
    oracle: &dyn CurveOracle,
    opts: &SearchOptions,
    cache: &Rank0Cache,
) -> Result<Rank0Outcome, CurveError> {
    let mut verdicts = Vec::new();
    for idx in quadruples(t.k()) {
        let q = quadruple_quartic(t, idx)?;
        let key = q.canonical_key();
        let rank = oracle.rank(&key).map_err(|e| CurveError::Oracle(e.to_string()))?;
        let v = match rank {
            None => QuadrupleVerdict::NoRank { key },
            Some(r) if r > 0 => QuadrupleVerdict::PositiveRank { key, rank: r },
            Some(_) => {
                let e = cache.get(&q, &key, opts)?;
                if !e.complete {
                    QuadrupleVerdict::Incomplete { key, found: e.point_count, torsion: e.torsion }
                } else {
                    let realized: Vec<(i64, i64)> = e.points.iter().flat_map(|x| realizations(t, x)).collect();
                    let survives = realized.iter().any(|&(_, d)| d.abs() > 1);
                    return Ok(if survives {
                        Rank0Outcome::SurvivesWith { quadruple: idx, key, realized }
                    } else {
                        Rank0Outcome::Eliminated { quadruple: idx, key, realized }
                    });
                }
            }
        };
        verdicts.push((idx, v));
    }
    Ok(Rank0Outcome::Unresolved { verdicts })
}

/// Keys of every quadruple quartic of the tuples, sorted and deduplicated.
pub fn quadruple_keys(tuples: &[ATuple]) -> Result<Vec<String>, CurveError> {
    let mut keys = Vec::new();
    for t in tuples {
        for idx in quadruples(t.k()) {
            keys.push(quadruple_quartic(t, idx)?.canonical_key());
        }
    }
    keys.sort();
    keys.dedup();
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_filter_agrees_with_isqrt() {
        let sq = SquareTest::new();
        for v in 0..20_000i128 {
            let r = (v as f64).sqrt() as i128;
            let exact = (r - 1..=r + 1).any(|s| s >= 0 && s * s == v);
            assert_eq!(sq.is_square(v), exact, "{v}");
        }
        assert!(!sq.is_square(-4));
    }

    #[test]
    fn euler_quartic_is_complete() {
        // Y^2 = X(X+1)(X+2)(X+3): the four roots, X = -3/2 and two points at infinity
        let t = ATuple::new(vec![1, 1, 1, 1]).unwrap();
        let q = quadruple_quartic(&t, [0, 1, 2, 3]).unwrap();
        let e = rank0_points(&q, &SearchOptions { height: 200, ..Default::default() }).unwrap();
        assert_eq!(e.torsion, 8);
        assert_eq!(e.point_count, 8);
        assert!(e.complete);
        let xs: Vec<String> = e.points.iter().map(|x| x.to_string()).collect();
        assert_eq!(xs, ["-3", "-2", "-3/2", "-1", "0"]);
    }

    #[test]
    fn realization_signs() {
        let t = ATuple::new(vec![-3, -5, 2, 1, 1]).unwrap();
        assert_eq!(realizations(&t, &BigRational::new((-12).into(), 7.into())), vec![(-12, 7)]);
        let m = t.mirror();
        // read backwards: 16, 9, 2, -5, -12 = (16, -7)
        assert_eq!(realizations(&m, &BigRational::new((-16).into(), 7.into())), vec![(16, -7)]);
    }
}
