//! Ternary quadratic relations between three terms of a progression.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::tuples::ATuple;

/// alpha * x_i^2 + beta * x_j^2 = gamma * x_m^2, primitive with gamma > 0.
///
/// Comes from (j-m)(n+id) + (m-i)(n+jd) = (j-i)(n+md) with n+ld = a_l x_l^2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TernaryRelation {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
}

impl TernaryRelation {
    pub fn derive(t: &ATuple, i: usize, j: usize, m: usize) -> Self {
        let (ii, jj, mm) = (i as i64, j as i64, m as i64);
        let mut alpha = (jj - mm) * t.get(i);
        let mut beta = (mm - ii) * t.get(j);
        let mut gamma = (jj - ii) * t.get(m);
        let g = alpha.gcd(&beta).gcd(&gamma);
        alpha /= g;
        beta /= g;
        gamma /= g;
        if gamma < 0 {
            alpha = -alpha;
            beta = -beta;
            gamma = -gamma;
        }
        TernaryRelation { i, j, m, alpha, beta, gamma }
    }

    /// Checks the relation on integer values of x_i, x_j, x_m.
    pub fn holds(&self, xi: &BigInt, xj: &BigInt, xm: &BigInt) -> bool {
        BigInt::from(self.alpha) * xi * xi + BigInt::from(self.beta) * xj * xj
            == BigInt::from(self.gamma) * xm * xm
    }

    /// Coefficient triple scaled by a rational c = num/den, as exact integers when possible.
    pub fn scaled(&self, num: i64, den: i64) -> Option<(i64, i64, i64)> {
        let s = |x: i64| (x * num % den == 0).then(|| x * num / den);
        Some((s(self.alpha)?, s(self.beta)?, s(self.gamma)?))
    }
}

impl fmt::Display for TernaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |c: i64, idx: usize, first: bool| -> String {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            format!("{sign}{mag}x{idx}^2")
        };
        write!(
            f,
            "{}{}={}",
            term(self.alpha, self.i, true),
            term(self.beta, self.j, false),
            term(self.gamma, self.m, true)
        )
    }
}

/// One relation for every m outside {i, j}.
pub fn pivot_system(t: &ATuple, i: usize, j: usize) -> Vec<TernaryRelation> {
    assert!(i < j && j < t.k(), "pivots must satisfy i < j < k");
    (0..t.k())
        .filter(|&m| m != i && m != j)
        .map(|m| TernaryRelation::derive(t, i, j, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i64]) -> ATuple {
        ATuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn lemma_systems() {
        let sys = pivot_system(&t(&[1, 5, 6, 7, 2, 1, 10]), 0, 5);
        let by_m = |m: usize| sys.iter().find(|r| r.m == m).unwrap().clone();
        // x5^2 + 4x0^2 = 25x1^2
        assert_eq!((by_m(1).alpha, by_m(1).beta, by_m(1).gamma), (4, 1, 25));
        assert_eq!((by_m(4).alpha, by_m(4).beta, by_m(4).gamma), (1, 4, 10));
        assert_eq!((by_m(6).alpha, by_m(6).beta, by_m(6).gamma), (-1, 6, 50));
        let sys = pivot_system(&t(&[3, 1, 5, 6, 7, 2, 1]), 0, 3);
        let r6 = sys.iter().find(|r| r.m == 6).unwrap();
        assert_eq!((r6.alpha, r6.beta, r6.gamma), (-3, 12, 1));
        assert_eq!(r6.to_string(), "-3x0^2+12x3^2=x6^2");
    }

    #[test]
    fn relations_hold_on_real_progression() {
        // (n, d) = (-12, 7): x = (2, 1, 1, 3, 4)
        let x: Vec<BigInt> = [2, 1, 1, 3, 4].map(BigInt::from).to_vec();
        let tup = t(&[-3, -5, 2, 1, 1]);
        for i in 0..5 {
            for j in i + 1..5 {
                for r in pivot_system(&tup, i, j) {
                    assert!(r.holds(&x[r.i], &x[r.j], &x[r.m]), "{r}");
                }
            }
        }
    }
}
