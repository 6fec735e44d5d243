//! Candidate tuple generation.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ATuple;
use crate::arith::primes_below;

/// Restrictions on the tuples emitted by [`generate_candidates`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleConstraints {
    /// Bound on P(b); coefficients satisfy P(a_i) <= max(pmax_b, k-1).
    pub pmax_b: u64,
    pub max_sign_changes: usize,
    /// Required sign of the product of the coefficients (+1, -1, or 0 for either).
    pub product_sign: i8,
    /// Pairs (index, p) with p | a_index.
    pub forced_divisibility: Vec<(usize, u64)>,
}

impl TupleConstraints {
    pub fn new(pmax_b: u64) -> Self {
        TupleConstraints { pmax_b, max_sign_changes: 1, product_sign: 1, forced_divisibility: vec![] }
    }

    pub fn forcing(mut self, index: usize, p: u64) -> Self {
        self.forced_divisibility.push((index, p));
        self
    }
}

/// All signed squarefree integers whose prime factors are at most `pmax`, ascending.
pub fn coefficient_alphabet(pmax: u64) -> Vec<i64> {
    let primes: Vec<i64> = primes_below(pmax.min(u32::MAX as u64 - 1) as u32 + 1)
        .into_iter()
        .map(i64::from)
        .collect();
    let mut pos = vec![1i64];
    for p in primes {
        let more: Vec<i64> = pos.iter().filter_map(|&s| s.checked_mul(p)).collect();
        pos.extend(more);
    }
    let mut all: Vec<i64> = pos.iter().flat_map(|&s| [s, -s]).collect();
    all.sort_unstable();
    all
}

/// gcd(|a_i|, |a_j|) must divide j - i: a common prime divides both terms and hence
/// (j - i)d, and it cannot divide d because gcd(n, d) = 1.
fn pair_ok(ai: i64, aj: i64, gap: usize) -> bool {
    (gap as i64) % ai.unsigned_abs().gcd(&aj.unsigned_abs()) as i64 == 0
}

/// The full constraint predicate, independent of the generator.
pub fn satisfies_constraints(t: &ATuple, c: &TupleConstraints) -> bool {
    let a = t.coeffs();
    let k = a.len();
    let bound = c.pmax_b.max(k as u64 - 1);
    if t.max_prime() > bound {
        return false;
    }
    for i in 0..k {
        for j in i + 1..k {
            if !pair_ok(a[i], a[j], j - i) {
                return false;
            }
        }
    }
    t.sign_changes() <= c.max_sign_changes
        && (c.product_sign == 0 || t.product_sign() == c.product_sign)
        && c.forced_divisibility.iter().all(|&(i, p)| i < k && a[i] % p as i64 == 0)
}

fn extend(prefix: &mut Vec<i64>, k: usize, alpha: &[i64], c: &TupleConstraints, changes: usize, out: &mut Vec<ATuple>) {
    let pos = prefix.len();
    if pos == k {
        let t = ATuple { a: prefix.clone() };
        if c.product_sign == 0 || t.product_sign() == c.product_sign {
            out.push(t);
        }
        return;
    }
    for &x in alpha {
        if c.forced_divisibility.iter().any(|&(i, p)| i == pos && x % p as i64 != 0) {
            continue;
        }
        let ch = changes + usize::from(pos > 0 && (prefix[pos - 1] < 0) != (x < 0));
        if ch > c.max_sign_changes {
            continue;
        }
        if !prefix.iter().enumerate().all(|(i, &y)| pair_ok(y, x, pos - i)) {
            continue;
        }
        prefix.push(x);
        extend(prefix, k, alpha, c, ch, out);
        prefix.pop();
    }
}

/// Tuples of length k over the alphabet satisfying the constraints, in lexicographic order.
///
/// Work is split by the leading coefficient; the per-branch results are concatenated
/// in alphabet order so the output is the same for any thread count.
pub fn generate_candidates(k: usize, c: &TupleConstraints) -> Vec<ATuple> {
    if k == 0 || c.forced_divisibility.iter().any(|&(i, _)| i >= k) {
        return vec![];
    }
    let alpha = coefficient_alphabet(c.pmax_b.max(k as u64 - 1));
    alpha
        .par_iter()
        .map(|&first| {
            let mut out = Vec::new();
            let head = TupleConstraints {
                forced_divisibility: c.forced_divisibility.clone(),
                ..c.clone()
            };
            if head.forced_divisibility.iter().any(|&(i, p)| i == 0 && first % p as i64 != 0) {
                return out;
            }
            let mut prefix = vec![first];
            extend(&mut prefix, k, &alpha, &head, 0, &mut out);
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// The k = 5, P(b) = 5 candidate set: union of the runs with 5 | a_1 and with 5 | a_2.
pub fn generate_k5_candidates() -> Vec<ATuple> {
    let base = TupleConstraints::new(5);
    let mut all = generate_candidates(5, &base.clone().forcing(1, 5));
    all.extend(generate_candidates(5, &base.forcing(2, 5)));
    all.sort();
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_examples() {
        assert_eq!(coefficient_alphabet(5), vec![-30, -15, -10, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 10, 15, 30]);
        assert_eq!(coefficient_alphabet(1), vec![-1, 1]);
        assert_eq!(coefficient_alphabet(2), vec![-2, -1, 1, 2]);
        assert_eq!(coefficient_alphabet(7).len(), 32);
    }

    #[test]
    fn k5_candidates_contain_paper_tuples() {
        let all = generate_k5_candidates();
        for t in [[-3, -5, 2, 1, 1], [-2, -5, 3, 1, 1], [-1, -15, -1, -2, 3], [2, 5, 2, -1, -1], [6, 5, 1, 3, 2]] {
            assert!(all.contains(&ATuple::new(t.to_vec()).unwrap()), "{t:?}");
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn unforced_and_forbidden() {
        let c = TupleConstraints::new(5);
        let all = generate_candidates(5, &c);
        assert!(all.contains(&ATuple::new(vec![1; 5]).unwrap()));
        assert!(!all.contains(&ATuple::new(vec![2, 2, 1, 1, 1]).unwrap()));
    }
}
