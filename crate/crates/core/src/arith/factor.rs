//! Integer factorization: trial division by primes below 10^6, deterministic
//! Miller-Rabin below 2^64 and Brent's variant of Pollard rho for whatever
//! composite cofactor is left.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::ArithError;

const TRIAL_LIMIT: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_LIMIT))
}

/// All primes `p < limit` (sieve of Eratosthenes).
pub fn primes_below(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Odd primes up to and including `bound`.
pub fn odd_primes_up_to(bound: u32) -> Vec<u32> {
    primes_below(bound.saturating_add(1))
        .into_iter()
        .filter(|&p| p != 2)
        .collect()
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for every `n < 2^64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Probabilistic primality for big values (deterministic below 2^64).
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..r.min(128).min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn rho_big(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    if n.is_even() {
        return two;
    }
    let mut c = BigUint::one();
    loop {
        let (mut x, mut y) = (two.clone(), two.clone());
        let mut g = BigUint::one();
        while g.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            g = diff.gcd(n);
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn push_factor(out: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    match out.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += e,
        None => out.push((p, e)),
    }
}

fn split_composite(n: BigUint, out: &mut Vec<(BigUint, u32)>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        push_factor(out, n, 1);
        return;
    }
    let d = match n.to_u64() {
        Some(small) => BigUint::from(rho_u64(small)),
        None => rho_big(&n),
    };
    let rest = &n / &d;
    split_composite(d, out);
    split_composite(rest, out);
}

/// Prime factorization of `|n|` as ascending `(prime, exponent)` pairs.
/// Zero is rejected; `1` factors as the empty product.
pub fn factorize(n: &BigInt) -> Result<Vec<(BigUint, u32)>, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    if let Some(small) = n.magnitude().to_u64() {
        return Ok(factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect());
    }
    let mut rest = n.magnitude().clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for (idx, &p) in small_primes().iter().enumerate() {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        // a prime cofactor ends trial division early
        if idx % 256 == 255 && is_prime(&rest) {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    if !rest.is_one() {
        split_composite(rest, &mut out);
    }
    out.sort();
    Ok(out)
}

/// Fast path for machine-size inputs: returns `(prime, exponent)` pairs of `n >= 1`.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for (idx, &p) in small_primes().iter().enumerate() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if idx % 256 == 255 && is_prime_u64(n) {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime_u64(m) {
                match out.iter_mut().find(|(q, _)| *q == m) {
                    Some(entry) => entry.1 += 1,
                    None => out.push((m, 1)),
                }
            } else {
                let d = rho_u64(m);
                stack.push(d);
                stack.push(m / d);
            }
        }
    }
    out.sort_unstable();
    out
}

/// `m = b * y^2` with `b` squarefree carrying the sign of `m` and `y >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomp {
    pub b: BigInt,
    pub y: BigInt,
}

pub fn squarefree_decompose(m: &BigInt) -> Result<SquarefreeDecomp, ArithError> {
    if m.is_zero() {
        return Err(ArithError::Zero);
    }
    let mut b = BigInt::one();
    let mut y = BigInt::one();
    for (p, e) in factorize(m)? {
        let p = BigInt::from(p);
        if e % 2 == 1 {
            b *= &p;
        }
        y *= num_traits::pow(p, (e / 2) as usize);
    }
    if m.sign() == Sign::Minus {
        b = -b;
    }
    Ok(SquarefreeDecomp { b, y })
}

/// Signed squarefree part of a nonzero machine integer.
pub fn squarefree_part_i64(m: i64) -> i64 {
    assert!(m != 0, "squarefree part of zero");
    let mut core = 1i64;
    for (p, e) in factorize_u64(m.unsigned_abs()) {
        if e % 2 == 1 {
            core *= p as i64;
        }
    }
    core * m.signum()
}

/// Largest prime divisor, with the convention `P(1) = 1`.
pub fn greatest_prime_factor(m: &BigInt) -> Result<BigInt, ArithError> {
    if m.sign() != Sign::Plus {
        return Err(ArithError::NotPositive(m.clone()));
    }
    Ok(factorize(m)?
        .into_iter()
        .map(|(p, _)| BigInt::from(p))
        .next_back()
        .unwrap_or_else(BigInt::one))
}

pub fn greatest_prime_factor_u64(m: u64) -> u64 {
    factorize_u64(m).last().map(|&(p, _)| p).unwrap_or(1)
}

pub fn is_squarefree_u64(m: u64) -> bool {
    m != 0 && factorize_u64(m).iter().all(|&(_, e)| e == 1)
}

pub fn is_squarefree(m: &BigInt) -> bool {
    !m.is_zero() && factorize(m).map(|f| f.iter().all(|(_, e)| *e == 1)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn decompose_progression_product() {
        // -12 * -5 * 2 * 9 * 16
        let d = squarefree_decompose(&big(17280)).unwrap();
        assert_eq!((d.b, d.y), (big(30), big(24)));
    }

    #[test]
    fn decompose_trivial_and_negative() {
        let one = squarefree_decompose(&big(1)).unwrap();
        assert_eq!((one.b, one.y), (big(1), big(1)));
        let neg = squarefree_decompose(&big(-8)).unwrap();
        assert_eq!((neg.b, neg.y), (big(-2), big(2)));
        assert_eq!(squarefree_decompose(&big(0)), Err(ArithError::Zero));
    }

    #[test]
    fn greatest_prime_factor_examples() {
        assert_eq!(greatest_prime_factor(&big(1)).unwrap(), big(1));
        assert_eq!(greatest_prime_factor(&big(30)).unwrap(), big(5));
        assert_eq!(greatest_prime_factor(&big(7)).unwrap(), big(7));
        assert!(greatest_prime_factor(&big(0)).is_err());
        assert!(greatest_prime_factor(&big(-6)).is_err());
    }

    #[test]
    fn miller_rabin_against_sieve() {
        let sieve = primes_below(20_000);
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), sieve.binary_search(&(n as u32)).is_ok(), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn factors_large_semiprimes() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        assert_eq!(factorize_u64(p * q), vec![(q, 1), (p, 1)]);
        let n = BigInt::from(p) * BigInt::from(q) * BigInt::from(1_000_000_009u64);
        let f = factorize(&n).unwrap();
        assert_eq!(f.len(), 3);
        let back: BigInt = f
            .iter()
            .map(|(p, e)| num_traits::pow(BigInt::from(p.clone()), *e as usize))
            .product();
        assert_eq!(back, n);
    }

    #[test]
    fn squarefree_part_small() {
        assert_eq!(squarefree_part_i64(-12), -3);
        assert_eq!(squarefree_part_i64(16), 1);
        assert_eq!(squarefree_part_i64(-5), -5);
        assert_eq!(squarefree_part_i64(72), 2);
    }
}
