//! Elements u + v*sqrt(D) of Q(sqrt D) with exact rational coordinates.
//!
//! `D = 1` stands for the rational field itself (v is always zero there);
//! the two genuine quadratic fields are `D = -1` and `D = 3`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ArithError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    pub const RATIONAL: QuadField = QuadField { d: 1 };
    pub const GAUSSIAN: QuadField = QuadField { d: -1 };
    pub const SQRT3: QuadField = QuadField { d: 3 };

    pub fn new(d: i64) -> Result<Self, ArithError> {
        match d {
            1 | -1 | 3 => Ok(QuadField { d }),
            _ => Err(ArithError::UnsupportedField(d)),
        }
    }

    pub fn d(self) -> i64 {
        self.d
    }

    pub fn is_rational(self) -> bool {
        self.d == 1
    }

    /// The generator sqrt(D) (i for the Gaussian field).
    pub fn gen(self) -> QuadElem {
        assert!(!self.is_rational(), "Q has no quadratic generator");
        QuadElem::new(self, BigRational::zero(), BigRational::one())
    }

    pub fn one(self) -> QuadElem {
        QuadElem::from_int(self, 1)
    }

    pub fn zero(self) -> QuadElem {
        QuadElem::from_int(self, 0)
    }

    /// Fundamental unit modulo torsion: i for Q(i) (torsion generator), 2+sqrt3 for Q(sqrt3).
    pub fn fundamental_unit(self) -> QuadElem {
        match self.d {
            -1 => self.gen(),
            3 => QuadElem::from_ints(self, 2, 1),
            _ => QuadElem::from_int(self, -1),
        }
    }

    /// Representatives of the unit group modulo squares.
    pub fn units_mod_squares(self) -> Vec<QuadElem> {
        match self.d {
            -1 => vec![self.one(), self.gen()],
            3 => {
                let e = self.fundamental_unit();
                vec![self.one(), -self.one(), e.clone(), -e]
            }
            _ => vec![self.one(), -self.one()],
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            1 => write!(f, "Q"),
            -1 => write!(f, "Q(i)"),
            d => write!(f, "Q(sqrt{d})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadElem {
    field: QuadField,
    #[serde(with = "rat_string")]
    u: BigRational,
    #[serde(with = "rat_string")]
    v: BigRational,
}

mod rat_string {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad rational {s:?}")))
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadElem {
    pub fn new(field: QuadField, u: BigRational, v: BigRational) -> Self {
        assert!(
            !field.is_rational() || v.is_zero(),
            "rational field element with nonzero sqrt part"
        );
        QuadElem { field, u, v }
    }

    pub fn from_rational(field: QuadField, u: BigRational) -> Self {
        QuadElem { field, u, v: BigRational::zero() }
    }

    pub fn from_int(field: QuadField, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    pub fn from_bigint(field: QuadField, n: BigInt) -> Self {
        Self::from_rational(field, BigRational::from_integer(n))
    }

    pub fn from_ints(field: QuadField, u: i64, v: i64) -> Self {
        Self::new(field, rat(u), rat(v))
    }

    pub fn from_bigints(field: QuadField, u: BigInt, v: BigInt) -> Self {
        Self::new(field, BigRational::from_integer(u), BigRational::from_integer(v))
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn u(&self) -> &BigRational {
        &self.u
    }

    pub fn v(&self) -> &BigRational {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.u.is_one() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    /// Integral coordinates with respect to Z[sqrt D], the ring of integers for D in {-1, 3}.
    pub fn is_integral(&self) -> bool {
        self.u.is_integer() && self.v.is_integer()
    }

    pub fn conj(&self) -> Self {
        QuadElem { field: self.field, u: self.u.clone(), v: -self.v.clone() }
    }

    pub fn norm(&self) -> BigRational {
        &self.u * &self.u - rat(self.field.d) * &self.v * &self.v
    }

    pub fn trace(&self) -> BigRational {
        &self.u + &self.u
    }

    /// Norm of an integral element as an integer.
    pub fn int_norm(&self) -> Result<BigInt, ArithError> {
        if !self.is_integral() {
            return Err(ArithError::NotIntegral(self.to_string()));
        }
        Ok(self.norm().to_integer())
    }

    /// Coordinates as integers, failing for non-integral elements.
    pub fn int_coords(&self) -> Result<(BigInt, BigInt), ArithError> {
        if !self.is_integral() {
            return Err(ArithError::NotIntegral(self.to_string()));
        }
        Ok((self.u.to_integer(), self.v.to_integer()))
    }

    /// Least positive integer m with m*self integral.
    pub fn denominator(&self) -> BigInt {
        self.u.denom().lcm(self.v.denom())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QuadElem { field: self.field, u: &self.u * c, v: &self.v * c }
    }

    fn check(&self, other: &Self) -> Result<(), ArithError> {
        if self.field != other.field {
            Err(ArithError::FieldMismatch(self.field.d, other.field.d))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(QuadElem { field: self.field, u: &self.u + &other.u, v: &self.v + &other.v })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(QuadElem { field: self.field, u: &self.u - &other.u, v: &self.v - &other.v })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        let d = rat(self.field.d);
        Ok(QuadElem {
            field: self.field,
            u: &self.u * &other.u + d * &self.v * &other.v,
            v: &self.u * &other.v + &self.v * &other.u,
        })
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(QuadElem { field: self.field, u: c.u / &n, v: c.v / n })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact quotient when `other` divides `self` in the ring of integers.
    pub fn divides_into(&self, other: &Self) -> Option<Self> {
        let q = other.checked_div(self).ok()?;
        q.is_integral().then_some(q)
    }

    /// u^2 + |D| v^2, a size measure used for choosing representatives.
    pub fn size(&self) -> BigRational {
        &self.u * &self.u + rat(self.field.d.abs()) * &self.v * &self.v
    }

    /// Real value under the embedding sqrt3 -> +sqrt3 (or -sqrt3 when `conjugate`), as a sign.
    /// Only meaningful for real fields.
    pub fn real_sign(&self, conjugate: bool) -> Ordering {
        assert!(self.field.d > 0, "real embedding of an imaginary field");
        let v = if conjugate { -self.v.clone() } else { self.v.clone() };
        let d = rat(self.field.d);
        // sign of u + v sqrt(d)
        match (self.u.signum(), v.signum()) {
            (a, b) if b.is_zero() => a.cmp(&BigRational::zero()),
            (a, b) if a.is_zero() => b.cmp(&BigRational::zero()),
            (a, b) if a == b => a.cmp(&BigRational::zero()),
            (a, _) => {
                let lhs = &self.u * &self.u;
                let rhs = d * &v * &v;
                match lhs.cmp(&rhs) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => a.cmp(&BigRational::zero()),
                    Ordering::Less => (-a).cmp(&BigRational::zero()),
                }
            }
        }
    }

    /// Lexicographic comparison on (u, v).
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.u.cmp(&other.u).then_with(|| self.v.cmp(&other.v))
    }

    pub fn parse_in(field: QuadField, s: &str) -> Result<Self, ArithError> {
        parse_elem(field, s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&QuadElem> for &QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: &QuadElem) -> QuadElem {
                self.$checked(rhs).expect("quadratic field mismatch")
            }
        }
        impl $tr<QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: QuadElem) -> QuadElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: &QuadElem) -> QuadElem {
                (&self).$m(rhs)
            }
        }
        impl $tr<QuadElem> for &QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: QuadElem) -> QuadElem {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { field: self.field, u: -self.u, v: -self.v }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -(self.clone())
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.field.d {
            -1 => "i".to_string(),
            1 => return write!(f, "{}", fmt_rat(&self.u)),
            d => format!("sqrt{d}"),
        };
        if self.v.is_zero() {
            return write!(f, "{}", fmt_rat(&self.u));
        }
        let coef = |v: &BigRational| -> String {
            let a = v.abs();
            if a.is_one() {
                String::new()
            } else if self.field.d == -1 || a.is_integer() {
                fmt_rat(&a)
            } else {
                format!("({})", fmt_rat(&a))
            }
        };
        let sep = if self.field.d == -1 { "" } else { "*" };
        let c = coef(&self.v);
        let body = if c.is_empty() { sym } else { format!("{c}{sep}{sym}") };
        if self.u.is_zero() {
            let sign = if self.v.is_negative() { "-" } else { "" };
            write!(f, "{sign}{body}")
        } else {
            let sign = if self.v.is_negative() { "-" } else { "+" };
            write!(f, "{}{sign}{body}", fmt_rat(&self.u))
        }
    }
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return None;
    }
    s.parse().ok()
}

/// Parses "a+bi", "-3i", "2+sqrt3", "1-2*sqrt3", "5/2".
fn parse_elem(field: QuadField, text: &str) -> Result<QuadElem, ArithError> {
    let err = || ArithError::Parse(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let sym = match field.d {
        -1 => "i".to_string(),
        1 => {
            return parse_rat(&s).map(|u| QuadElem::from_rational(field, u)).ok_or_else(err);
        }
        d => format!("sqrt{d}"),
    };
    if !s.ends_with(&sym) {
        return parse_rat(&s).map(|u| QuadElem::from_rational(field, u)).ok_or_else(err);
    }
    let head = &s[..s.len() - sym.len()];
    let head = head.strip_suffix('*').unwrap_or(head);
    // split at the last +/- that is not leading and not inside a rational's sign position
    let split = head
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
        .map(|(i, _)| i)
        .last();
    let (ustr, vstr) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("0", head),
    };
    let v = match vstr {
        "" | "+" => rat(1),
        "-" => rat(-1),
        t => parse_rat(t.strip_prefix('+').unwrap_or(t)).ok_or_else(err)?,
    };
    let u = parse_rat(ustr).ok_or_else(err)?;
    Ok(QuadElem::new(field, u, v))
}

impl FromStr for QuadElem {
    type Err = ArithError;

    /// Parses with the field inferred from the symbol: `i` means Q(i), `sqrt3` Q(sqrt3),
    /// and a bare rational lands in Q.
    fn from_str(s: &str) -> Result<Self, ArithError> {
        let t = s.trim();
        if t.ends_with("sqrt3") {
            parse_elem(QuadField::SQRT3, t)
        } else if t.ends_with('i') {
            parse_elem(QuadField::GAUSSIAN, t)
        } else {
            parse_elem(QuadField::RATIONAL, t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(u: i64, v: i64) -> QuadElem {
        QuadElem::from_ints(QuadField::GAUSSIAN, u, v)
    }

    #[test]
    fn norm_of_lemma_deltas() {
        assert_eq!(g(1, 3) * g(1, -3), g(10, 0));
        assert_eq!(g(1, 3).norm(), rat(10));
        assert_eq!(g(3, 1).conj(), g(3, -1));
        let e = QuadField::SQRT3.fundamental_unit();
        assert_eq!(&e * &e.conj(), QuadField::SQRT3.one());
    }

    #[test]
    fn mismatch_and_zero_division() {
        let a = g(1, 1);
        let b = QuadElem::from_ints(QuadField::SQRT3, 1, 1);
        assert_eq!(a.checked_mul(&b), Err(ArithError::FieldMismatch(-1, 3)));
        assert_eq!(a.checked_div(&QuadField::GAUSSIAN.zero()), Err(ArithError::DivisionByZero));
        assert!(QuadField::new(5).is_err());
    }

    #[test]
    fn division_roundtrip() {
        let a = g(7, -2);
        let b = g(3, 5);
        let q = a.checked_div(&b).unwrap();
        assert_eq!(&q * &b, a);
    }

    #[test]
    fn display_and_parse() {
        for (s, e) in [("1-3i", g(1, -3)), ("-i", g(0, -1)), ("3+i", g(3, 1)), ("4", g(4, 0))] {
            assert_eq!(e.to_string(), s);
            assert_eq!(QuadElem::parse_in(QuadField::GAUSSIAN, s).unwrap(), e);
        }
        let e = QuadElem::from_ints(QuadField::SQRT3, 2, -1);
        assert_eq!(e.to_string(), "2-sqrt3");
        assert_eq!("2-sqrt3".parse::<QuadElem>().unwrap(), e);
        assert_eq!("1-2*sqrt3".parse::<QuadElem>().unwrap(), QuadElem::from_ints(QuadField::SQRT3, 1, -2));
        assert_eq!("-1/2+3/4i".parse::<QuadElem>().unwrap().v(), &BigRational::new(3.into(), 4.into()));
    }

    #[test]
    fn real_sign_of_units() {
        let e = QuadElem::from_ints(QuadField::SQRT3, 2, -1);
        assert_eq!(e.real_sign(false), Ordering::Greater);
        let x = QuadElem::from_ints(QuadField::SQRT3, 1, -1);
        assert_eq!(x.real_sign(false), Ordering::Less);
        assert_eq!(x.real_sign(true), Ordering::Greater);
    }

    #[test]
    fn serde_roundtrip() {
        let e = QuadElem::new(QuadField::GAUSSIAN, BigRational::new(1.into(), 3.into()), rat(-2));
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<QuadElem>(&s).unwrap(), e);
    }
}
