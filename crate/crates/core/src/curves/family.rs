//! The two-linear-plus-one-quadratic families of genus-one curves.
//!
//! With pivots (i, j) and X = s*x_j/x_i, each relation for a third index m reads
//! r_m(X) = beta X^2 + alpha s^2 = gamma s^2 (x_m/x_i)^2. Two of them split into
//! conjugate linear factors over K; the third stays quadratic. A rational point gives
//! delta * k3 * L1(X) * L2(X) * Q(X) = square in K for some delta.

use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::quartic::{GenusOneQuartic, Poly};
use super::relation::TernaryRelation;
use super::CurveError;
use crate::arith::{squarefree_part_i64, QuadElem, QuadField};
use crate::tuples::ATuple;

/// L(X) = u X + w with c (uX + w)(uX - w) = r_m(X), and k = sqf(c * gamma).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearFactor {
    pub relation: TernaryRelation,
    pub c: i64,
    pub u: i64,
    pub w: QuadElem,
    pub k: i64,
}

/// Q(X) = a X^2 + b primitive with c Q = r_m, and k = sqf(c * gamma).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticFactor {
    pub relation: TernaryRelation,
    pub c: i64,
    pub a: i64,
    pub b: i64,
    pub k: i64,
}

fn perfect_sqrt(n: i64) -> Option<i64> {
    (n >= 0).then(|| n.sqrt()).filter(|r| r * r == n)
}

fn rel_coeffs(rel: &TernaryRelation, s: i64) -> (i64, i64) {
    (rel.beta, rel.alpha * s * s)
}

impl LinearFactor {
    pub fn new(field: QuadField, rel: TernaryRelation, s: i64) -> Result<Self, CurveError> {
        let bad = |why: &str| CurveError::BadFamily { m: rel.m, why: why.into() };
        let (b, a) = rel_coeffs(&rel, s);
        let mut c = b.abs().gcd(&a.abs());
        if b < 0 {
            c = -c;
        }
        let u = perfect_sqrt(b / c).ok_or_else(|| bad("leading coefficient is not a square"))?;
        let w2 = -a / c;
        let w = if let Some(r) = perfect_sqrt(w2) {
            QuadElem::from_int(field, r)
        } else if field.d() == -1 && w2 < 0 && perfect_sqrt(-w2).is_some() {
            QuadElem::from_ints(field, 0, perfect_sqrt(-w2).unwrap())
        } else if field.d() == 3 && w2 % 3 == 0 && perfect_sqrt(w2 / 3).is_some() {
            QuadElem::from_ints(field, 0, perfect_sqrt(w2 / 3).unwrap())
        } else {
            return Err(bad("constant term is not minus a square in the field"));
        };
        let k = squarefree_part_i64(c * rel.gamma);
        Ok(LinearFactor { relation: rel, c, u, w, k })
    }

    pub fn m(&self) -> usize {
        self.relation.m
    }

    pub fn poly(&self) -> Poly {
        let f = self.w.field();
        Poly::linear(QuadElem::from_int(f, self.u), self.w.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.w.is_rational()
    }

    /// w^2 as a rational number.
    pub fn w_squared(&self) -> BigRational {
        (&self.w * &self.w).u().clone()
    }

    /// k ((uX)^2 - w^2), which must be a rational square at a genuine point.
    pub fn side_value(&self, x: &BigRational) -> BigRational {
        let ux = x * BigRational::from_integer(self.u.into());
        (&ux * &ux - self.w_squared()) * BigRational::from_integer(self.k.into())
    }

    /// Homogeneous form at (1 : W): k (u^2 - w^2 W^2).
    pub fn side_value_at_infinity(&self, w: &BigRational) -> BigRational {
        let u2 = BigRational::from_integer((self.u * self.u).into());
        (u2 - self.w_squared() * w * w) * BigRational::from_integer(self.k.into())
    }
}

impl QuadraticFactor {
    pub fn new(rel: TernaryRelation, s: i64) -> Result<Self, CurveError> {
        let (b, a) = rel_coeffs(&rel, s);
        if b == 0 || a == 0 {
            return Err(CurveError::BadFamily { m: rel.m, why: "relation is not a binary quadratic".into() });
        }
        let mut c = b.abs().gcd(&a.abs());
        if b < 0 {
            c = -c;
        }
        let k = squarefree_part_i64(c * rel.gamma);
        Ok(QuadraticFactor { relation: rel, c, a: b / c, b: a / c, k })
    }

    pub fn m(&self) -> usize {
        self.relation.m
    }

    pub fn poly(&self, field: QuadField) -> Poly {
        Poly::from_ints(field, &[self.b, 0, self.a])
    }

    pub fn side_value(&self, x: &BigRational) -> BigRational {
        let q = x * x * BigRational::from_integer(self.a.into()) + BigRational::from_integer(self.b.into());
        q * BigRational::from_integer(self.k.into())
    }

    pub fn side_value_at_infinity(&self, w: &BigRational) -> BigRational {
        let q = BigRational::from_integer(self.a.into()) + w * w * BigRational::from_integer(self.b.into());
        q * BigRational::from_integer(self.k.into())
    }
}

/// A tuple, its pivots and scale, and the three relations the curves are built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveFamily {
    pub tuple: ATuple,
    pub i: usize,
    pub j: usize,
    pub scale: i64,
    pub field: QuadField,
    pub linear: [LinearFactor; 2],
    pub quadratic: QuadraticFactor,
}

impl CurveFamily {
    /// `linear` names the two indices whose relations split over K, `quad` the third.
    pub fn derive(
        tuple: &ATuple,
        (i, j): (usize, usize),
        scale: i64,
        field: QuadField,
        linear: [usize; 2],
        quad: usize,
    ) -> Result<Self, CurveError> {
        let k = tuple.k();
        let mut used = vec![i, j, linear[0], linear[1], quad];
        used.sort_unstable();
        used.dedup();
        if used.len() != 5 || used[4] >= k || i >= j || scale < 1 {
            return Err(CurveError::BadFamily { m: quad, why: "indices must be distinct and inside the tuple".into() });
        }
        let rel = |m: usize| TernaryRelation::derive(tuple, i, j, m);
        let l1 = LinearFactor::new(field, rel(linear[0]), scale)?;
        let l2 = LinearFactor::new(field, rel(linear[1]), scale)?;
        let q = QuadraticFactor::new(rel(quad), scale)?;
        Ok(CurveFamily { tuple: tuple.clone(), i, j, scale, field, linear: [l1, l2], quadratic: q })
    }

    /// delta * k3 * L1 * L2 * Q.
    pub fn curve_poly(&self, delta: &QuadElem) -> Poly {
        let k3 = QuadElem::from_int(self.field, self.quadratic.k);
        self.linear[0]
            .poly()
            .mul(&self.linear[1].poly())
            .mul(&self.quadratic.poly(self.field))
            .scale(&(delta * &k3))
    }

    pub fn curve(&self, delta: &QuadElem) -> Result<GenusOneQuartic, CurveError> {
        Ok(GenusOneQuartic::from_poly(&self.curve_poly(delta))?.with_label(format!("{}|delta={delta}", self.tuple)))
    }

    /// Every relation at X holds with a rational right-hand side: all side values are squares.
    pub fn side_conditions_hold(&self, x: &BigRational) -> bool {
        let sq = |v: BigRational| v.is_zero() || (!v.is_negative() && is_rat_square(&v));
        self.linear.iter().all(|l| sq(l.side_value(x))) && sq(self.quadratic.side_value(x))
    }
}

pub(crate) fn is_rat_square(v: &BigRational) -> bool {
    let ok = |n: &num_bigint::BigInt| !n.is_negative() && {
        let r = n.sqrt();
        &(&r * &r) == n
    };
    ok(v.numer()) && ok(v.denom())
}
