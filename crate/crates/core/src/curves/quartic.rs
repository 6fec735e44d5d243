//! Quartic curves Y^2 = q(X) over Q, Q(i) or Q(sqrt3): canonical scaling, invariants, Jacobians.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::CurveError;
use crate::arith::{factor_in_ring, quad_int_gcd, squarefree_decompose, QuadElem, QuadField};

/// Polynomial with coefficients in a quadratic field, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: QuadField,
    c: Vec<QuadElem>,
}

impl Poly {
    pub fn new(field: QuadField, mut c: Vec<QuadElem>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { field, c }
    }

    pub fn constant(x: QuadElem) -> Self {
        Poly::new(x.field(), vec![x])
    }

    /// u*X + w
    pub fn linear(u: QuadElem, w: QuadElem) -> Self {
        Poly::new(u.field(), vec![w, u])
    }

    pub fn from_ints(field: QuadField, low_first: &[i64]) -> Self {
        Poly::new(field, low_first.iter().map(|&x| QuadElem::from_int(field, x)).collect())
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> QuadElem {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.c.is_empty() || o.c.is_empty() {
            return Poly::new(self.field, vec![]);
        }
        let mut out = vec![self.field.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    pub fn scale(&self, s: &QuadElem) -> Poly {
        Poly::new(self.field, self.c.iter().map(|x| x * s).collect())
    }

    pub fn eval(&self, x: &QuadElem) -> QuadElem {
        self.c.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_rat(&self, x: &BigRational) -> QuadElem {
        self.eval(&QuadElem::from_rational(self.field, x.clone()))
    }
}

/// Y^2 = c4 X^4 + c3 X^3 + c2 X^2 + c1 X + c0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenusOneQuartic {
    field: QuadField,
    /// c4, c3, c2, c1, c0
    coeffs: [QuadElem; 5],
    pub label: Option<String>,
}

/// Classical invariants of a binary quartic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticInvariants {
    pub i: QuadElem,
    pub j: QuadElem,
}

/// y^2 = x^3 + a2 x^2 + a4 x + a6.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassModel {
    pub a2: QuadElem,
    pub a4: QuadElem,
    pub a6: QuadElem,
}

impl WeierstrassModel {
    pub fn new(a2: QuadElem, a4: QuadElem, a6: QuadElem) -> Result<Self, CurveError> {
        let m = WeierstrassModel { a2, a4, a6 };
        if m.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(m)
    }

    pub fn field(&self) -> QuadField {
        self.a4.field()
    }

    fn b_invariants(&self) -> (QuadElem, QuadElem, QuadElem, QuadElem) {
        let f = self.field();
        let k = |n: i64| QuadElem::from_int(f, n);
        let b2 = &k(4) * &self.a2;
        let b4 = &k(2) * &self.a4;
        let b6 = &k(4) * &self.a6;
        let b8 = &(&k(4) * &(&self.a2 * &self.a6)) - &(&self.a4 * &self.a4);
        (b2, b4, b6, b8)
    }

    pub fn c4(&self) -> QuadElem {
        let (b2, b4, _, _) = self.b_invariants();
        &(&b2 * &b2) - &(&QuadElem::from_int(self.field(), 24) * &b4)
    }

    pub fn discriminant(&self) -> QuadElem {
        let f = self.field();
        let k = |n: i64| QuadElem::from_int(f, n);
        let (b2, b4, b6, b8) = self.b_invariants();
        let t1 = -(&(&b2 * &b2) * &b8);
        let t2 = &k(8) * &b4.pow(3);
        let t3 = &k(27) * &(&b6 * &b6);
        let t4 = &k(9) * &(&(&b2 * &b4) * &b6);
        &(&(&t1 - &t2) - &t3) + &t4
    }

    pub fn j_invariant(&self) -> QuadElem {
        self.c4().pow(3).checked_div(&self.discriminant()).expect("nonsingular model")
    }

    /// Evaluates the cubic x^3 + a2 x^2 + a4 x + a6.
    pub fn rhs(&self, x: &QuadElem) -> QuadElem {
        &(&(&(&(x + &self.a2) * x) + &self.a4) * x) + &self.a6
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x^2 + ({})x + ({})", self.a2, self.a4, self.a6)
    }
}

fn lex_vec(a: &[QuadElem], b: &[QuadElem]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.lex_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

impl GenusOneQuartic {
    /// From c4, c3, c2, c1, c0 (highest degree first).
    pub fn new(coeffs: [QuadElem; 5]) -> Result<Self, CurveError> {
        let field = coeffs[0].field();
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(CurveError::FieldMismatch);
        }
        if coeffs[0].is_zero() && coeffs[1].is_zero() {
            return Err(CurveError::Degenerate("degree below 3".into()));
        }
        let q = GenusOneQuartic { field, coeffs, label: None };
        if q.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(q)
    }

    pub fn from_poly(p: &Poly) -> Result<Self, CurveError> {
        if p.degree().map_or(true, |d| d > 4) {
            return Err(CurveError::Degenerate("degree above 4".into()));
        }
        Self::new([p.coeff(4), p.coeff(3), p.coeff(2), p.coeff(1), p.coeff(0)])
    }

    pub fn from_ints(field: QuadField, high_first: [i64; 5]) -> Result<Self, CurveError> {
        Self::new(high_first.map(|x| QuadElem::from_int(field, x)))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    /// c4, c3, c2, c1, c0
    pub fn coeffs(&self) -> &[QuadElem; 5] {
        &self.coeffs
    }

    pub fn poly(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().rev().cloned().collect())
    }

    pub fn eval(&self, x: &QuadElem) -> QuadElem {
        self.poly().eval(x)
    }

    pub fn eval_rat(&self, x: &BigRational) -> QuadElem {
        self.poly().eval_rat(x)
    }

    pub fn invariants(&self) -> QuarticInvariants {
        let f = self.field;
        let k = |n: i64| QuadElem::from_int(f, n);
        let [a, b, c, d, e] = &self.coeffs;
        let i = &(&(&k(12) * &(a * e)) - &(&k(3) * &(b * d))) + &(c * c);
        let j = &(&(&(&(&k(72) * &(&(a * c) * e)) + &(&k(9) * &(&(b * c) * d))) - &(&k(27) * &(&(a * d) * d)))
            - &(&k(27) * &(&(e * b) * b)))
            - &(&k(2) * &c.pow(3));
        QuarticInvariants { i, j }
    }

    /// 4I^3 - J^2, which vanishes exactly when q has a repeated root (or degree < 3).
    pub fn discriminant(&self) -> QuadElem {
        let QuarticInvariants { i, j } = self.invariants();
        &(&QuadElem::from_int(self.field, 4) * &i.pow(3)) - &(&j * &j)
    }

    /// Y^2 = X^3 - 27 I X - 27 J.
    pub fn jacobian_model(&self) -> WeierstrassModel {
        let QuarticInvariants { i, j } = self.invariants();
        let m27 = QuadElem::from_int(self.field, -27);
        WeierstrassModel::new(self.field.zero(), &m27 * &i, &m27 * &j).expect("nonsingular quartic")
    }

    pub fn j_invariant(&self) -> QuadElem {
        self.jacobian_model().j_invariant()
    }

    pub fn scale(&self, s: &QuadElem) -> GenusOneQuartic {
        GenusOneQuartic { field: self.field, coeffs: self.coeffs.clone().map(|c| &c * s), label: self.label.clone() }
    }

    /// q(X + c)
    pub fn shift(&self, c: &QuadElem) -> GenusOneQuartic {
        let lin = Poly::linear(self.field.one(), c.clone());
        let mut acc = Poly::new(self.field, vec![]);
        let mut pow = Poly::constant(self.field.one());
        for coef in self.coeffs.iter().rev() {
            let term = pow.scale(coef);
            acc = Poly::new(self.field, (0..5).map(|i| &acc.coeff(i) + &term.coeff(i)).collect());
            pow = pow.mul(&lin);
        }
        let mut out = GenusOneQuartic::from_poly(&acc).expect("shift keeps the discriminant");
        out.label = self.label.clone();
        out
    }

    /// Integral, square-content-free representative of the class {lambda^2 q}.
    ///
    /// Denominators are cleared with a square, the square part of the content is divided
    /// out, and the remaining unit-square freedom is fixed: -q vs q for Q(i) (the larger
    /// coefficient vector wins lexicographically), eps^(2k) q of least total size for Q(sqrt3).
    pub fn canonical(&self) -> GenusOneQuartic {
        let f = self.field;
        let den = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(&c.denominator()));
        let den2 = QuadElem::from_bigint(f, &den * &den);
        let mut cs: Vec<QuadElem> = self.coeffs.iter().map(|c| c * &den2).collect();

        let nonzero: Vec<&QuadElem> = cs.iter().filter(|c| !c.is_zero()).collect();
        let t = if f.is_rational() {
            let g = nonzero.iter().fold(BigInt::zero(), |g, c| g.gcd(&c.u().to_integer()));
            QuadElem::from_bigint(f, squarefree_decompose(&g).expect("nonzero content").y)
        } else {
            let g = nonzero[1..]
                .iter()
                .fold(nonzero[0].clone(), |g, c| quad_int_gcd(&g, c).expect("integral"));
            let (_, primes) = factor_in_ring(&g).expect("nonzero content");
            primes.iter().fold(f.one(), |acc, (pi, e)| &acc * &pi.pow(e / 2))
        };
        let t2inv = (&t * &t).inv().expect("nonzero");
        cs = cs.iter().map(|c| c * &t2inv).collect();

        cs = match f.d() {
            -1 => {
                let neg: Vec<QuadElem> = cs.iter().map(|c| -c).collect();
                if lex_vec(&neg, &cs) == Ordering::Greater {
                    neg
                } else {
                    cs
                }
            }
            3 => {
                let e = f.fundamental_unit();
                let e2 = &e * &e;
                let e2inv = e2.inv().expect("unit");
                let size = |v: &[QuadElem]| v.iter().map(|c| c.size()).fold(BigRational::zero(), |a, b| a + b);
                let mul = |v: &[QuadElem], w: &QuadElem| v.iter().map(|c| c * w).collect::<Vec<_>>();
                let mut cur = cs;
                loop {
                    let up = mul(&cur, &e2);
                    let down = mul(&cur, &e2inv);
                    let s = size(&cur);
                    if size(&up) < s {
                        cur = up;
                    } else if size(&down) < s {
                        cur = down;
                    } else {
                        let mut best = cur;
                        for cand in [up, down] {
                            if size(&cand) == size(&best) && lex_vec(&cand, &best) == Ordering::Greater {
                                best = cand;
                            }
                        }
                        break best;
                    }
                }
            }
            _ => cs,
        };
        let coeffs: [QuadElem; 5] = cs.try_into().expect("five coefficients");
        GenusOneQuartic { field: f, coeffs, label: self.label.clone() }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical().coeffs == self.coeffs
    }

    /// "D=<d>|c4,c3,c2,c1,c0" with each coefficient written "un/ud+vn/vd*s".
    pub fn canonical_key(&self) -> String {
        let c = self.canonical();
        key_of(&c)
    }

    /// Parses a key back into the (canonical) quartic it names.
    pub fn from_key(key: &str) -> Result<Self, CurveError> {
        let bad = || CurveError::BadKey(key.to_string());
        let rest = key.strip_prefix("D=").ok_or_else(bad)?;
        let (d, coeffs) = rest.split_once('|').ok_or_else(bad)?;
        let field = QuadField::new(d.parse().map_err(|_| bad())?).map_err(|_| bad())?;
        let parts: Vec<&str> = coeffs.split(',').collect();
        if parts.len() != 5 {
            return Err(bad());
        }
        let mut cs = Vec::with_capacity(5);
        for p in parts {
            let body = p.strip_suffix("*s").ok_or_else(bad)?;
            let split = body.char_indices().skip(1).find(|&(_, ch)| ch == '+' || ch == '-').map(|(i, _)| i).ok_or_else(bad)?;
            let u: BigRational = body[..split].parse().map_err(|_| bad())?;
            let vtxt = body[split..].strip_prefix('+').unwrap_or(&body[split..]);
            let v: BigRational = vtxt.parse().map_err(|_| bad())?;
            if field.is_rational() && !v.is_zero() {
                return Err(bad());
            }
            cs.push(QuadElem::new(field, u, v));
        }
        let q = GenusOneQuartic::new(cs.try_into().expect("five"))?;
        if key_of(&q) != key {
            return Err(bad());
        }
        Ok(q)
    }
}

fn key_coeff(c: &QuadElem) -> String {
    let (u, v) = (c.u(), c.v());
    let sign = if v.is_negative() { '-' } else { '+' };
    format!("{}/{}{}{}/{}*s", u.numer(), u.denom(), sign, v.numer().abs(), v.denom())
}

fn key_of(q: &GenusOneQuartic) -> String {
    let body: Vec<String> = q.coeffs.iter().map(key_coeff).collect();
    format!("D={}|{}", q.field.d(), body.join(","))
}

impl fmt::Display for GenusOneQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y^2 = ")?;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let deg = 4 - k;
            match deg {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})X")?,
                _ => write!(f, "({c})X^{deg}")?,
            }
        }
        Ok(())
    }
}

/// (X, Y) on C_delta gives (X, iY) on C_{-delta}.
pub fn neg_delta_map(x: &QuadElem, y: &QuadElem) -> Result<(QuadElem, QuadElem), CurveError> {
    if x.field().d() != -1 || y.field().d() != -1 {
        return Err(CurveError::NeedsGaussian);
    }
    Ok((x.clone(), y * &y.field().gen()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(u: i64, v: i64) -> QuadElem {
        QuadElem::from_ints(QuadField::GAUSSIAN, u, v)
    }

    fn lemma1_curve(delta: &QuadElem) -> GenusOneQuartic {
        let f = QuadField::GAUSSIAN;
        let p = Poly::linear(f.one(), g(0, 1))
            .mul(&Poly::linear(f.one(), g(0, 4)))
            .mul(&Poly::from_ints(f, &[-2, 0, 3]))
            .scale(delta);
        GenusOneQuartic::from_poly(&p).unwrap()
    }

    #[test]
    fn lemma1_case_one_j() {
        let q = lemma1_curve(&g(1, -3));
        let e = WeierstrassModel::new(g(0, 1), g(-23, -17), g(1597, 2291)).unwrap();
        assert_eq!(q.j_invariant(), e.j_invariant());
    }

    #[test]
    fn j_is_shift_and_scale_invariant() {
        let q = lemma1_curve(&g(3, 1));
        let j = q.j_invariant();
        assert_eq!(q.shift(&g(2, -1)).j_invariant(), j);
        assert_eq!(q.scale(&g(4, 4).pow(2)).j_invariant(), j);
        assert_eq!(lemma1_curve(&g(-3, -1)).j_invariant(), j);
    }

    #[test]
    fn canonical_removes_squares_and_units() {
        let q = lemma1_curve(&g(1, -3));
        let c = q.canonical();
        assert!(c.is_canonical());
        assert_eq!(q.scale(&g(2, 7).pow(2)).canonical(), c);
        assert_eq!(q.scale(&g(-1, 0)).canonical(), c);
        let half = QuadElem::new(QuadField::GAUSSIAN, BigRational::new(1.into(), 3.into()), BigRational::zero());
        assert_eq!(q.scale(&half.pow(2)).canonical_key(), q.canonical_key());
        assert_ne!(q.scale(&g(0, 1)).canonical_key(), q.canonical_key());
        let e = QuadField::SQRT3.fundamental_unit();
        let r = GenusOneQuartic::from_ints(QuadField::SQRT3, [3, 1, 0, -2, 5]).unwrap();
        assert_eq!(r.scale(&e.pow(4)).canonical(), r.canonical());
        assert_ne!(r.scale(&e).canonical(), r.canonical());
    }

    #[test]
    fn keys_roundtrip() {
        let q = lemma1_curve(&g(3, -1));
        let key = q.canonical_key();
        assert!(key.starts_with("D=-1|"));
        let back = GenusOneQuartic::from_key(&key).unwrap();
        assert_eq!(back.canonical_key(), key);
        assert!(GenusOneQuartic::from_key("D=-1|1/1+0/1*s").is_err());
        let r = GenusOneQuartic::from_ints(QuadField::RATIONAL, [4, 0, 0, 0, 4]).unwrap();
        assert_eq!(r.canonical_key(), "D=1|1/1+0/1*s,0/1+0/1*s,0/1+0/1*s,0/1+0/1*s,1/1+0/1*s");
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(GenusOneQuartic::from_ints(QuadField::RATIONAL, [1, 0, -2, 0, 1]), Err(CurveError::Singular));
    }

    #[test]
    fn negation_map() {
        let (x, y) = neg_delta_map(&g(2, 0), &g(1, 1)).unwrap();
        assert_eq!((x, y), (g(2, 0), g(-1, 1)));
        let r = QuadElem::from_int(QuadField::SQRT3, 1);
        assert!(neg_delta_map(&r, &r).is_err());
    }
}
