//! Torsion of elliptic curves y^2 = x^3 + a2 x^2 + a4 x + a6 over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::quartic::WeierstrassModel;
use super::CurveError;
use crate::arith::{factorize, odd_primes_up_to};

/// A curve with integral coefficients over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCurve {
    pub a2: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

type Point = Option<(BigRational, BigRational)>;

impl RationalCurve {
    pub fn new(a2: impl Into<BigInt>, a4: impl Into<BigInt>, a6: impl Into<BigInt>) -> Result<Self, CurveError> {
        let e = RationalCurve { a2: a2.into(), a4: a4.into(), a6: a6.into() };
        if e.cubic_discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(e)
    }

    /// Integral model of a rational Weierstrass model, scaling x by u^2 and y by u^3.
    pub fn from_model(m: &WeierstrassModel) -> Result<Self, CurveError> {
        let f = m.field();
        if !f.is_rational() && [&m.a2, &m.a4, &m.a6].iter().any(|c| !c.is_rational()) {
            return Err(CurveError::NotRational(f.d()));
        }
        let (a2, a4, a6) = (m.a2.u().clone(), m.a4.u().clone(), m.a6.u().clone());
        let mut u = BigInt::one();
        for (c, w) in [(&a2, 2u32), (&a4, 4), (&a6, 6)] {
            // smallest u with u^w * c integral, then combine by lcm
            let den = c.denom();
            let mut v = BigInt::one();
            while !(num_traits::pow(v.clone(), w as usize) % den).is_zero() {
                v += 1;
            }
            u = u.lcm(&v);
        }
        let sc = |c: &BigRational, w: usize| (c * BigRational::from_integer(num_traits::pow(u.clone(), w))).to_integer();
        RationalCurve::new(sc(&a2, 2), sc(&a4, 4), sc(&a6, 6))
    }

    /// Discriminant of the cubic on the right.
    pub fn cubic_discriminant(&self) -> BigInt {
        let (a, b, c) = (&self.a2, &self.a4, &self.a6);
        let four = BigInt::from(4);
        -&four * a * a * a * c + a * a * b * b + BigInt::from(18) * a * b * c - &four * b * b * b - BigInt::from(27) * c * c
    }

    fn rhs(&self, x: &BigInt) -> BigInt {
        ((x + &self.a2) * x + &self.a4) * x + &self.a6
    }

    /// #E(F_p) for an odd prime of good reduction.
    pub fn count_points(&self, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let r = |c: &BigInt| c.mod_floor(&pb).to_u64().unwrap();
        let (a, b, c) = (r(&self.a2), r(&self.a4), r(&self.a6));
        let mut chi = vec![-1i64; p as usize];
        chi[0] = 0;
        for x in 1..p {
            chi[(x * x % p) as usize] = 1;
        }
        let mut n = 1 + p as i64;
        for x in 0..p {
            let v = (((x + a) % p * x + b) % p * x + c) % p;
            n += chi[v as usize];
        }
        n as u64
    }

    fn is_good(&self, p: u64) -> bool {
        !(self.cubic_discriminant() % BigInt::from(p)).is_zero()
    }

    fn add(&self, p: &Point, q: &Point) -> Point {
        let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
            return p.clone().or_else(|| q.clone());
        };
        let a2 = BigRational::from_integer(self.a2.clone());
        let a4 = BigRational::from_integer(self.a4.clone());
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return None;
            }
            let three = BigRational::from_integer(3.into());
            let two = BigRational::from_integer(2.into());
            (three * x1 * x1 + &two * &a2 * x1 + a4) / (two * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - a2 - x1 - x2;
        let y3 = -(lambda * (&x3 - x1) + y1);
        Some((x3, y3))
    }

    /// Order of a point if it is at most `max`, otherwise None.
    pub fn small_order(&self, p: &(BigInt, BigInt), max: u32) -> Option<u32> {
        let p0: Point = Some((BigRational::from_integer(p.0.clone()), BigRational::from_integer(p.1.clone())));
        let mut acc = p0.clone();
        for n in 1..=max {
            match &acc {
                None => return Some(n),
                Some((x, _)) if !x.is_integer() => return None,
                _ => {}
            }
            acc = self.add(&acc, &p0);
        }
        None
    }
}

/// Integer roots of x^3 + a x^2 + b x + c.
pub fn integer_roots_cubic(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let g = |x: &BigInt| ((x + a) * x + b) * x + c;
    let bound = BigInt::one() + a.abs().max(b.abs()).max(c.abs());
    let mut roots = Vec::new();
    let mut search = |lo: BigInt, hi: BigInt| {
        if lo > hi {
            return;
        }
        let (glo, ghi) = (g(&lo), g(&hi));
        if glo.is_zero() {
            roots.push(lo.clone());
        }
        if ghi.is_zero() {
            roots.push(hi.clone());
        }
        if glo.signum() == ghi.signum() {
            return;
        }
        let increasing = glo < ghi;
        let (mut l, mut h) = (lo, hi);
        while &h - &l > BigInt::one() {
            let mid: BigInt = (&l + &h).div_floor(&BigInt::from(2));
            let gm = g(&mid);
            if gm.is_zero() {
                roots.push(mid);
                return;
            }
            if (gm < BigInt::zero()) == increasing {
                l = mid;
            } else {
                h = mid;
            }
        }
    };
    // monotone pieces split at the critical points (-a +- sqrt(a^2 - 3b)) / 3
    let disc = a * a - BigInt::from(3) * b;
    let three = BigInt::from(3);
    if disc <= BigInt::zero() {
        search(-&bound, bound.clone());
    } else {
        let s: BigInt = disc.sqrt();
        let one = BigInt::one();
        let l1 = (-a - &s - &one).div_floor(&three);
        let h1 = (-a - &s).div_ceil(&three);
        let l2 = (-a + &s).div_floor(&three);
        let h2 = (-a + &s + &one).div_ceil(&three);
        search(-&bound, l1.clone());
        search(h1.clone(), l2.clone());
        search(h2.clone(), bound.clone());
        let mut x = l1 + 1;
        while x < h1 {
            if g(&x).is_zero() {
                roots.push(x.clone());
            }
            x += 1;
        }
        let mut x = l2 + 1;
        while x < h2 {
            if g(&x).is_zero() {
                roots.push(x.clone());
            }
            x += 1;
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn divisors_of_square_root(n: &BigInt) -> Vec<BigInt> {
    // all s >= 0 with s^2 | n
    let mut out = vec![BigInt::one()];
    for (p, e) in factorize(&n.abs()).expect("nonzero") {
        let p = BigInt::from(p);
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e / 2 {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// gcd of #E(F_p) over good odd primes below `limit`; needs at least `min_primes` of them.
pub fn torsion_bound(e: &RationalCurve, limit: u32, min_primes: usize) -> Result<u64, CurveError> {
    let good: Vec<u64> = odd_primes_up_to(limit).into_iter().map(u64::from).filter(|&p| e.is_good(p)).collect();
    if good.len() < min_primes {
        return Err(CurveError::TooFewPrimes(limit as u64));
    }
    Ok(good.iter().fold(0, |g, &p| g.gcd(&e.count_points(p))))
}

/// #E(Q)_tors by Nagell-Lutz: torsion points are integral with y = 0 or y^2 | disc.
pub fn torsion_order(e: &RationalCurve) -> u64 {
    let disc = e.cubic_discriminant();
    let mut count = 1;
    let mut ys = vec![BigInt::zero()];
    ys.extend(divisors_of_square_root(&disc));
    for y in ys {
        let c = &e.a6 - &y * &y;
        for x in integer_roots_cubic(&e.a2, &e.a4, &c) {
            debug_assert_eq!(e.rhs(&x), &y * &y);
            if y.is_zero() {
                count += 1;
            } else if e.small_order(&(x, y.clone()), 12).is_some() {
                count += 2;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn cubic_roots() {
        // (x-1)(x+2)(x-5) = x^3 - 4x^2 - 7x + 10
        assert_eq!(integer_roots_cubic(&b(-4), &b(-7), &b(10)), vec![b(-2), b(1), b(5)]);
        // x^3 - 2 has no integer root
        assert!(integer_roots_cubic(&b(0), &b(0), &b(-2)).is_empty());
        // (x-3)^2 (x+1) = x^3 - 5x^2 + 3x + 9
        assert_eq!(integer_roots_cubic(&b(-5), &b(3), &b(9)), vec![b(-1), b(3)]);
        let big = b(10).pow(30);
        // (x - 10^30)(x^2 + 1)
        assert_eq!(integer_roots_cubic(&-&big, &b(1), &-&big), vec![big]);
    }

    #[test]
    fn known_torsion() {
        // y^2 = x^3 - x: Z/2 x Z/2
        let e = RationalCurve::new(0, -1, 0).unwrap();
        assert_eq!(torsion_order(&e), 4);
        assert_eq!(torsion_bound(&e, 200, 5).unwrap(), 4);
        // y^2 = x^3 + 1: Z/6
        let e = RationalCurve::new(0, 0, 1).unwrap();
        assert_eq!(torsion_order(&e), 6);
        // y^2 = x^3 - 2: trivial torsion, rank 1
        let e = RationalCurve::new(0, 0, -2).unwrap();
        assert_eq!(torsion_order(&e), 1);
        // y^2 = x^3 - 4x^2 + 16, conductor 11: Z/5
        let e = RationalCurve::new(-4, 0, 16).unwrap();
        assert_eq!(torsion_order(&e), 5);
        assert_eq!(torsion_bound(&e, 200, 5).unwrap(), 5);
        // y^2 = x^3 + 5x^2 + 4x = x(x+1)(x+4): Z/2 x Z/4
        let e = RationalCurve::new(5, 4, 0).unwrap();
        assert_eq!(torsion_order(&e), 8);
        assert!(RationalCurve::new(0, 0, 0).is_err());
    }
}
