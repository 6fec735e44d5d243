//! From a curve coordinate back to the progression (n, d).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::tuples::{progression_terms, tuple_of_terms, ATuple, Progression};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackSubstitution {
    pub progression: Progression,
    /// d came out negative and the progression was read backwards
    pub mirrored: bool,
    /// the tuple realized by `progression` (t or its mirror image)
    pub realized: ATuple,
}

impl BackSubstitution {
    pub fn n(&self) -> &BigInt {
        &self.progression.n
    }

    pub fn d(&self) -> &BigInt {
        &self.progression.d
    }
}

/// Solves n + i d = a_i x_i^2, n + j d = a_j x_j^2 with x_j / x_i = X / scale.
///
/// Returns None when the coprime (n, d) so obtained has a zero term or does not realize
/// t (or its mirror image when d had to be negated).
pub fn backsubstitute(t: &ATuple, (i, j): (usize, usize), scale: i64, x: &BigRational) -> Option<BackSubstitution> {
    let ratio = x / BigRational::from_integer(scale.into());
    let (p, q) = (ratio.numer().clone(), ratio.denom().clone());
    let (ai, aj) = (BigInt::from(t.get(i)), BigInt::from(t.get(j)));
    // x_i = q, x_j = p up to a common factor; (j - i) d = a_j p^2 - a_i q^2
    let d0 = &aj * &p * &p - &ai * &q * &q;
    if d0.is_zero() {
        return None;
    }
    let n0 = &ai * &q * &q * BigInt::from((j - i) as i64) - BigInt::from(i as i64) * &d0;
    let g = n0.gcd(&d0);
    let (n, d) = (n0 / &g, d0 / &g);
    let (prog, mirrored) = Progression::from_signed(n.clone(), d.clone(), t.k()).ok()?;
    let (realized, _) = tuple_of_terms(&prog.terms(), u64::MAX).ok()?;
    let expect = if mirrored { t.mirror() } else { t.clone() };
    if realized != expect {
        return None;
    }
    debug_assert!(tuple_of_terms(&progression_terms(&n, &d, t.k()), u64::MAX).is_ok_and(|(a, _)| &a == t));
    debug_assert!(d.is_positive() != mirrored);
    Some(BackSubstitution { progression: prog, mirrored, realized })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i64]) -> ATuple {
        ATuple::new(v.to_vec()).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn nd(b: &BackSubstitution) -> (i64, i64) {
        use num_traits::ToPrimitive;
        (b.n().to_i64().unwrap(), b.d().to_i64().unwrap())
    }

    #[test]
    fn sqrt3_case() {
        let tup = t(&[-3, -5, 2, 1, 1]);
        for x in [2, -2] {
            let b = backsubstitute(&tup, (0, 4), 1, &r(x, 1)).unwrap();
            assert_eq!(nd(&b), (-12, 7));
            assert!(!b.mirrored);
        }
        // +-1 and -3 give a zero term
        for x in [1, -1, -3, 3] {
            assert!(backsubstitute(&tup, (0, 4), 1, &r(x, 1)).is_none(), "{x}");
        }
    }

    #[test]
    fn mirrored_case() {
        let b = backsubstitute(&t(&[2, 5, 2, -1, -1]), (2, 3), 1, &r(1, 1)).unwrap();
        assert_eq!(nd(&b), (-4, 3));
        assert!(b.mirrored);
    }

    #[test]
    fn scaled_pivot() {
        let b = backsubstitute(&t(&[1, 5, 6, 7, 2, 1, 10]), (0, 5), 2, &r(-3, 1)).unwrap();
        assert_eq!(nd(&b), (4, 1));
        assert!(backsubstitute(&t(&[3, 1, 5, 6, 7, 2, 1]), (0, 3), 1, &r(1, 2)).is_none());
        assert_eq!(nd(&backsubstitute(&t(&[3, 1, 5, 6, 7, 2, 1]), (0, 3), 1, &r(-1, 1)).unwrap()), (3, 1));
    }
}
