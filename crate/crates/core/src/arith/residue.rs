//! Quadratic residues modulo primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::factor::is_prime_u64;
use super::ArithError;

/// Legendre symbol `(a/p)` for an odd prime `p`, returned as -1, 0 or +1.
pub fn jacobi_symbol(a: &BigInt, p: &BigInt) -> Result<i8, ArithError> {
    let p_small = p
        .to_u64()
        .filter(|&q| q % 2 == 1 && is_prime_u64(q))
        .ok_or_else(|| ArithError::NotOddPrime(p.clone()))?;
    let r = a.mod_floor(p).to_u64().expect("residue below modulus");
    Ok(legendre_u64(r, p_small))
}

/// Legendre symbol for machine-size arguments; `p` must be an odd prime.
pub fn legendre_u64(a: u64, p: u64) -> i8 {
    // binary Jacobi algorithm; agrees with Legendre for prime p
    let mut a = a % p;
    let mut n = p;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

pub fn legendre_i64(a: i64, p: u64) -> i8 {
    legendre_u64(a.rem_euclid(p as i64) as u64, p)
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| legendre_u64(z, p) == -1)?;
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

/// True iff `a` is a square in `Z/pZ` (zero included).
pub fn is_square_mod(a: &BigInt, p: u64) -> bool {
    let r = a.mod_floor(&BigInt::from(p)).abs().to_u64().unwrap();
    r == 0 || legendre_u64(r, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_examples() {
        let j = |a: i64, p: i64| jacobi_symbol(&BigInt::from(a), &BigInt::from(p));
        assert_eq!(j(1, 3), Ok(1));
        assert_eq!(j(2, 3), Ok(-1));
        assert_eq!(j(0, 5), Ok(0));
        assert_eq!(j(-1, 5), Ok(1));
        assert!(j(3, 9).is_err());
        assert!(j(3, 2).is_err());
        assert!(j(3, -7).is_err());
    }

    #[test]
    fn symbol_matches_exhaustive_search() {
        for p in super::super::factor::odd_primes_up_to(1000) {
            let p = p as u64;
            let squares: std::collections::HashSet<u64> = (1..p).map(|t| t * t % p).collect();
            for a in 0..p {
                let expect = if a == 0 { 0 } else if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(legendre_u64(a, p), expect, "({a}/{p})");
            }
        }
    }

    #[test]
    fn tonelli_shanks_roots() {
        for p in [3u64, 5, 13, 17, 41, 97, 193, 7681, 1_000_000_007] {
            for a in 0..60 {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!((r as u128 * r as u128 % p as u128) as u64, a % p);
                } else {
                    assert_eq!(legendre_u64(a, p), -1);
                }
            }
        }
    }
}
