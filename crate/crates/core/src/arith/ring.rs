//! The rings Z[i] and Z[sqrt3]: Euclidean gcd, prime factorization, squarefree classes.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::{factorize, squarefree_decompose};
use super::quad::{QuadElem, QuadField};
use super::residue::{legendre_u64, sqrt_mod_prime};
use super::ArithError;

fn round_half_up(r: &BigRational) -> BigInt {
    (r + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Division with remainder: a = q*b + r with |N(r)| < |N(b)|.
fn euclid_div(a: &QuadElem, b: &QuadElem) -> (QuadElem, QuadElem) {
    let exact = a.checked_div(b).expect("nonzero divisor");
    let q = QuadElem::from_bigints(a.field(), round_half_up(exact.u()), round_half_up(exact.v()));
    let r = a - &(&q * b);
    (q, r)
}

fn require_integral(a: &QuadElem) -> Result<(), ArithError> {
    if a.is_integral() {
        Ok(())
    } else {
        Err(ArithError::NotIntegral(a.to_string()))
    }
}

/// Picks the lexicographically largest element of `cands` among those of least size.
fn pick(cands: impl IntoIterator<Item = QuadElem>) -> QuadElem {
    cands
        .into_iter()
        .min_by(|x, y| x.size().cmp(&y.size()).then_with(|| y.lex_cmp(x)))
        .expect("nonempty candidate set")
}

/// Walks `a * w^k` downhill in size and returns the minimizers' best representative.
fn reduce_by_unit(a: &QuadElem, w: &QuadElem) -> QuadElem {
    let winv = w.inv().expect("unit");
    let mut cur = a.clone();
    loop {
        let up = &cur * w;
        let down = &cur * &winv;
        let s = cur.size();
        if up.size() < s {
            cur = up;
        } else if down.size() < s {
            cur = down;
        } else {
            return pick([cur.clone(), up, down]);
        }
    }
}

/// Canonical associate: fixed representative of {unit * a}.
pub fn normalize_associate(a: &QuadElem) -> QuadElem {
    let f = a.field();
    if a.is_zero() {
        return a.clone();
    }
    match f.d() {
        -1 => {
            let i = f.gen();
            let mut all = vec![a.clone()];
            for _ in 0..3 {
                let next = all.last().unwrap() * &i;
                all.push(next);
            }
            all.into_iter().max_by(|x, y| x.lex_cmp(y)).unwrap()
        }
        3 => {
            let e = f.fundamental_unit();
            let p = reduce_by_unit(a, &e);
            pick([p.clone(), -p])
        }
        _ => QuadElem::from_rational(f, a.u().abs()),
    }
}

/// Greatest common divisor in Z[i] or Z[sqrt3] (or Z), normalized up to units.
pub fn quad_int_gcd(a: &QuadElem, b: &QuadElem) -> Result<QuadElem, ArithError> {
    if a.field() != b.field() {
        return Err(ArithError::FieldMismatch(a.field().d(), b.field().d()));
    }
    require_integral(a)?;
    require_integral(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(ArithError::Zero);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = euclid_div(&x, &y);
        x = y;
        y = r;
    }
    Ok(normalize_associate(&x))
}

/// Primes of the ring lying above the rational prime `p`, with ramification index.
pub fn primes_above(field: QuadField, p: u64) -> Vec<(QuadElem, u32)> {
    let pe = |e: QuadElem| normalize_associate(&e);
    match field.d() {
        -1 => {
            if p == 2 {
                vec![(pe(QuadElem::from_ints(field, 1, 1)), 2)]
            } else if p % 4 == 3 {
                vec![(QuadElem::from_int(field, p as i64), 1)]
            } else {
                let t = sqrt_mod_prime(p - 1, p).expect("-1 is a square mod p");
                split_pair(field, p, t)
            }
        }
        3 => {
            if p == 2 {
                vec![(pe(QuadElem::from_ints(field, 1, 1)), 2)]
            } else if p == 3 {
                vec![(pe(field.gen()), 2)]
            } else if legendre_u64(3, p) == 1 {
                let t = sqrt_mod_prime(3, p).expect("3 is a square mod p");
                split_pair(field, p, t)
            } else {
                vec![(QuadElem::from_int(field, p as i64), 1)]
            }
        }
        _ => vec![(QuadElem::from_int(field, p as i64), 1)],
    }
}

fn split_pair(field: QuadField, p: u64, t: u64) -> Vec<(QuadElem, u32)> {
    let pp = QuadElem::from_int(field, p as i64);
    let lift = QuadElem::from_bigints(field, BigInt::from(t), BigInt::one());
    let pi = quad_int_gcd(&pp, &lift).expect("integral");
    let other = normalize_associate(&pi.conj());
    let mut v = vec![(pi, 1), (other, 1)];
    v.sort_by(|a, b| b.0.lex_cmp(&a.0));
    v
}

/// Exponent of the prime `pi` in the nonzero integral element `a`, and the cofactor.
pub fn valuation(a: &QuadElem, pi: &QuadElem) -> (u32, QuadElem) {
    assert!(!a.is_zero(), "valuation of zero");
    let mut v = 0;
    let mut cur = a.clone();
    while let Some(q) = pi.divides_into(&cur) {
        cur = q;
        v += 1;
    }
    (v, cur)
}

/// Factorization a = unit * prod(pi^e) with normalized primes.
pub fn factor_in_ring(a: &QuadElem) -> Result<(QuadElem, Vec<(QuadElem, u32)>), ArithError> {
    require_integral(a)?;
    if a.is_zero() {
        return Err(ArithError::Zero);
    }
    let f = a.field();
    let norm = if f.is_rational() { a.u().to_integer() } else { a.int_norm()? };
    let mut rest = a.clone();
    let mut out = Vec::new();
    if !norm.abs().is_one() {
        for (p, _) in factorize(&norm)? {
            let p = p.to_u64().expect("prime factors of norms fit in u64");
            for (pi, _) in primes_above(f, p) {
                let (e, r) = valuation(&rest, &pi);
                if e > 0 {
                    out.push((pi, e));
                    rest = r;
                }
            }
        }
    }
    debug_assert!(rest.int_norm().map(|n| n.abs().is_one()).unwrap_or(false));
    Ok((rest, out))
}

/// Canonical representative of the class of `a` in K*/K*^2 (unit squares included).
///
/// The representative is the squarefree integral element of the class, chosen among its
/// unit-square multiples by least size u^2+|D|v^2 and then lexicographically largest (u, v).
pub fn squarefree_class(a: &QuadElem) -> Result<QuadElem, ArithError> {
    if a.is_zero() {
        return Err(ArithError::Zero);
    }
    let f = a.field();
    let m = BigRational::from_integer(a.denominator());
    let a = a.scale(&(&m * &m));
    if f.is_rational() {
        let num = a.u().to_integer();
        return Ok(QuadElem::from_bigint(f, squarefree_decompose(&num)?.b));
    }
    let (unit, primes) = factor_in_ring(&a)?;
    let mut s = unit;
    for (pi, e) in primes {
        if e % 2 == 1 {
            s = &s * &pi;
        }
    }
    Ok(match f.d() {
        -1 => pick([s.clone(), -s]),
        _ => {
            let e = f.fundamental_unit();
            reduce_by_unit(&s, &(&e * &e))
        }
    })
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// A square root of `a` inside its own field, if one exists.
pub fn is_square_in_field(a: &QuadElem) -> Option<QuadElem> {
    let f = a.field();
    if a.is_zero() {
        return Some(f.zero());
    }
    let d = BigRational::from_integer(BigInt::from(f.d()));
    let check = |b: QuadElem| (&b * &b == *a).then_some(b);
    if a.v().is_zero() {
        if let Some(r) = rational_sqrt(a.u()) {
            return check(QuadElem::from_rational(f, r));
        }
        if f.is_rational() {
            return None;
        }
        let y = rational_sqrt(&(a.u() / &d))?;
        return check(QuadElem::new(f, BigRational::zero(), y));
    }
    // (x + y s)^2 = x^2 + D y^2 + 2xy s, and x^2 - D y^2 = +-sqrt(N(a))
    let n = rational_sqrt(&a.norm())?;
    let two = BigRational::from_integer(BigInt::from(2));
    for sgn in [n.clone(), -n] {
        if let Some(x) = rational_sqrt(&((a.u() + &sgn) / &two)) {
            if x.is_zero() {
                continue;
            }
            let y = a.v() / (&two * &x);
            if let Some(b) = check(QuadElem::new(f, x, y)) {
                return Some(b);
            }
        }
    }
    None
}

/// Sign pattern of a real-field element under both embeddings.
pub fn real_signs(a: &QuadElem) -> (Ordering, Ordering) {
    (a.real_sign(false), a.real_sign(true))
}
