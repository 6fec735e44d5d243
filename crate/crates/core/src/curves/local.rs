//! Squares in completions and local solubility of quartics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::quartic::{GenusOneQuartic, Poly};
use crate::arith::{primes_above, valuation, QuadElem, QuadField};

/// A place of Q: a finite prime or the archimedean one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Finite(u64),
    Infinity,
}

impl std::str::FromStr for Place {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inf" | "infinity" | "oo" => Ok(Place::Infinity),
            _ => s.parse().map(Place::Finite).map_err(|_| format!("bad place {s:?}")),
        }
    }
}

fn vp_int(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    while !m.is_zero() && (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    (v, m)
}

/// Whether the rational x is a square in Q_p (zero counts as a square).
pub fn is_qp_square(x: &BigRational, p: u64) -> bool {
    if x.is_zero() {
        return true;
    }
    let n = x.numer() * x.denom();
    let (v, u) = vp_int(&n, p);
    if v % 2 == 1 {
        return false;
    }
    if p == 2 {
        u.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        let r = u.mod_floor(&BigInt::from(p)).to_u64().unwrap();
        crate::arith::legendre_u64(r, p) == 1
    }
}

/// Integral representatives of O_K / pi^n for a prime pi over p with ramification e.
fn residue_reps(field: QuadField, pi: &QuadElem, e: u32, split: bool, p: u64, n: u32) -> Vec<QuadElem> {
    let pw = |k: u32| p.pow(k) as i64;
    if field.is_rational() || split {
        return (0..pw(n)).map(|a| QuadElem::from_int(field, a)).collect();
    }
    if e == 2 {
        let (ha, hb) = (n.div_ceil(2), n / 2);
        let mut out = Vec::new();
        for a in 0..pw(ha) {
            for b in 0..pw(hb) {
                out.push(&QuadElem::from_int(field, a) + &pi.scale(&BigRational::from_integer(b.into())));
            }
        }
        return out;
    }
    let mut out = Vec::new();
    for a in 0..pw(n) {
        for b in 0..pw(n) {
            out.push(QuadElem::from_ints(field, a, b));
        }
    }
    out
}

/// Place data for the primes of K over p.
#[derive(Debug, Clone)]
pub struct LocalPrime {
    pub p: u64,
    pub pi: QuadElem,
    pub e: u32,
    pub split: bool,
    /// squares of units modulo pi^(2 e v_pi(2) + 1), as representatives
    squares: Vec<QuadElem>,
    modulus: QuadElem,
}

impl LocalPrime {
    pub fn all_over(field: QuadField, p: u64) -> Vec<LocalPrime> {
        let ps = primes_above(field, p);
        let split = ps.len() == 2;
        ps.into_iter()
            .map(|(pi, e)| {
                let v2 = if p == 2 { e } else { 0 };
                let k = 2 * v2 + 1;
                let modulus = pi.pow(k);
                let squares = residue_reps(field, &pi, e, split, p, k)
                    .into_iter()
                    .filter(|r| pi.divides_into(r).is_none())
                    .map(|r| &r * &r)
                    .collect();
                LocalPrime { p, pi, e, split, squares, modulus }
            })
            .collect()
    }

    /// Exponent of pi in a nonzero element (denominators allowed).
    pub fn val(&self, z: &QuadElem) -> i64 {
        let den = z.denominator();
        let zi = z.scale(&BigRational::from_integer(den.clone()));
        let (vz, _) = valuation(&zi, &self.pi);
        let (vd, _) = valuation(&QuadElem::from_bigint(z.field(), den), &self.pi);
        vz as i64 - vd as i64
    }

    /// Whether z is a square in the completion at pi (zero counts as a square).
    pub fn is_square(&self, z: &QuadElem) -> bool {
        if z.is_zero() {
            return true;
        }
        let den = z.denominator();
        let zi = z.scale(&BigRational::from_integer(&den * &den));
        let (v, u) = valuation(&zi, &self.pi);
        if v % 2 == 1 {
            return false;
        }
        // u is a pi-unit, possibly divisible by other primes; that does not matter here
        self.squares.iter().any(|s| self.modulus.divides_into(&(&u - s)).is_some())
    }

    /// Representatives of O_K / pi^n.
    pub fn reps(&self, field: QuadField, n: u32) -> Vec<QuadElem> {
        residue_reps(field, &self.pi, self.e, self.split, self.p, n)
    }
}

fn sturm_count(p: &Poly, conj: bool) -> usize {
    // number of distinct real roots of sigma(p) via sign changes at -inf and +inf
    let field = p.coeff(0).field();
    let deriv = {
        let d = p.degree().unwrap_or(0);
        Poly::new(field, (1..=d).map(|i| p.coeff(i).scale(&BigRational::from_integer(i.into()))).collect())
    };
    let mut seq = vec![p.clone(), deriv];
    while seq.last().and_then(|q| q.degree()).is_some_and(|d| d > 0) {
        let n = seq.len();
        let r = poly_rem(&seq[n - 2], &seq[n - 1]);
        if r.degree().is_none() {
            break;
        }
        seq.push(r.scale(&QuadElem::from_int(field, -1)));
    }
    let sign_at = |q: &Poly, neg_inf: bool| -> i32 {
        let Some(d) = q.degree() else { return 0 };
        let lc = q.coeff(d);
        let s = match if field.d() > 0 && !field.is_rational() { lc.real_sign(conj) } else { lc.u().cmp(&BigRational::zero()) } {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        };
        if neg_inf && d % 2 == 1 {
            -s
        } else {
            s
        }
    };
    let changes = |neg: bool| {
        let signs: Vec<i32> = seq.iter().map(|q| sign_at(q, neg)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(true) - changes(false)
}

fn poly_rem(a: &Poly, b: &Poly) -> Poly {
    let field = a.coeff(0).field();
    let db = b.degree().expect("nonzero divisor");
    let lb = b.coeff(db).inv().expect("nonzero");
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let factor = &r.coeff(dr) * &lb;
        let mut c: Vec<QuadElem> = (0..=dr).map(|i| r.coeff(i)).collect();
        for i in 0..=db {
            c[i + dr - db] = &c[i + dr - db] - &(&factor * &b.coeff(i));
        }
        c.pop();
        r = Poly::new(field, c);
    }
    r
}

fn real_soluble(q: &GenusOneQuartic) -> bool {
    let f = q.field();
    if f.d() < 0 {
        return true;
    }
    let embeddings: &[bool] = if f.is_rational() { &[false] } else { &[false, true] };
    embeddings.iter().all(|&conj| {
        let lead = &q.coeffs()[0];
        let positive = if f.is_rational() { lead.u().is_positive() } else { lead.real_sign(conj).is_gt() };
        // a real root gives the real point (root, 0)
        positive || lead.is_zero() || sturm_count(&q.poly(), conj) > 0
    })
}

/// Precision used for the p-adic search: 2 v(disc) + 3, capped to keep the search small.
fn precision(q: &GenusOneQuartic, lp: &LocalPrime) -> u32 {
    let disc = q.discriminant();
    let v = if disc.is_zero() { 0 } else { lp.val(&disc).max(0) as u32 };
    let want = 2 * v + 3;
    let per_level = if q.field().is_rational() || lp.split || lp.e == 2 { lp.p } else { lp.p * lp.p };
    let mut cap = 1;
    while (per_level as f64).powi(cap as i32 + 1) <= 20_000.0 {
        cap += 1;
    }
    want.min(cap)
}

/// Whether the quartic has a point over every completion of K above the place.
///
/// At a finite prime the search runs over residues X mod pi^N and the chart X = 1/W
/// with W in pi*O; a point found is a genuine local point, so `true` is certain while
/// `false` is relative to the precision N.
pub fn local_solubility(q: &GenusOneQuartic, place: Place) -> bool {
    let p = match place {
        Place::Infinity => return real_soluble(q),
        Place::Finite(p) => p,
    };
    let field = q.field();
    let poly = q.poly();
    let rev = Poly::new(field, (0..5).map(|i| poly.coeff(4 - i)).collect());
    LocalPrime::all_over(field, p).iter().all(|lp| {
        if lp.is_square(&q.coeffs()[0]) {
            return true;
        }
        let n = precision(q, lp);
        let reps = lp.reps(field, n);
        reps.iter().any(|x| lp.is_square(&poly.eval(x))) || reps.iter().any(|w| lp.is_square(&rev.eval(&(&lp.pi * w))))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qp_squares() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert!(is_qp_square(&r(17, 1), 2));
        assert!(!is_qp_square(&r(3, 1), 2));
        assert!(is_qp_square(&r(1, 4), 2));
        assert!(!is_qp_square(&r(2, 1), 3));
        assert!(is_qp_square(&r(-2, 1), 3));
        assert!(!is_qp_square(&r(5, 1), 5));
    }

    #[test]
    fn gaussian_local_squares() {
        let f = QuadField::GAUSSIAN;
        let lp = &LocalPrime::all_over(f, 2)[0];
        assert!(lp.is_square(&QuadElem::from_ints(f, 0, 2)));
        assert!(lp.is_square(&QuadElem::from_int(f, -1)));
        assert!(!lp.is_square(&QuadElem::from_ints(f, 0, 1)));
        assert!(!lp.is_square(&QuadElem::from_ints(f, 1, 1)));
        let at3 = &LocalPrime::all_over(f, 3)[0];
        assert!(at3.is_square(&QuadElem::from_int(f, 2)));
    }

    #[test]
    fn solubility_examples() {
        let q = GenusOneQuartic::from_ints(QuadField::RATIONAL, [1, 0, 0, 0, 1]).unwrap();
        assert!(local_solubility(&q, Place::Finite(3)));
        assert!(local_solubility(&q, Place::Infinity));
        // -(X^2+1)^2 - 1
        let neg = GenusOneQuartic::from_ints(QuadField::RATIONAL, [-1, 0, -2, 0, -2]).unwrap();
        assert!(!local_solubility(&neg, Place::Infinity));
        // Y^2 = 3(X^4 + 1) has odd 3-adic valuation everywhere
        let obs = GenusOneQuartic::from_ints(QuadField::RATIONAL, [3, 0, 0, 0, 3]).unwrap();
        assert!(!local_solubility(&obs, Place::Finite(3)));
        assert!(local_solubility(&obs, Place::Finite(5)));
    }
}
