//! Congruence sieve: can n + i*d = a_i x_i^2 hold modulo an odd prime p?

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime_u64, odd_primes_up_to};
use crate::tuples::ATuple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Survives,
    Eliminated,
}

/// Verdict for one tuple at one prime; `witness` is (n mod p, d mod p) when it survives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveVerdict {
    pub p: u64,
    pub outcome: Outcome,
    pub witness: Option<(u64, u64)>,
}

impl SieveVerdict {
    pub fn survives(&self) -> bool {
        self.outcome == Outcome::Survives
    }
}

/// Replayable record of a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tuple: ATuple,
    pub p: u64,
    pub outcome: Outcome,
    pub witness: Option<[u64; 2]>,
}

impl Certificate {
    pub fn new(tuple: &ATuple, v: &SieveVerdict) -> Self {
        Certificate { tuple: tuple.clone(), p: v.p, outcome: v.outcome, witness: v.witness.map(|(n, d)| [n, d]) }
    }
}

struct Residues {
    p: u64,
    square: Vec<bool>,
    /// inverse of a_i mod p, or None when p divides a_i
    inv_a: Vec<Option<u64>>,
}

impl Residues {
    fn new(t: &ATuple, p: u64) -> Self {
        let mut square = vec![false; p as usize];
        for x in 0..p {
            square[(x * x % p) as usize] = true;
        }
        let inv_a = t
            .coeffs()
            .iter()
            .map(|&a| {
                let r = a.rem_euclid(p as i64) as u64;
                (r != 0).then(|| pow_mod(r, p - 2, p))
            })
            .collect();
        Residues { p, square, inv_a }
    }

    fn consistent(&self, n: u64, d: u64) -> bool {
        let p = self.p;
        if n == 0 && d == 0 {
            return false;
        }
        self.inv_a.iter().enumerate().all(|(i, inv)| {
            let v = (n + (i as u64 % p) * d) % p;
            match inv {
                None => v == 0,
                Some(ai) => self.square[(v * ai % p) as usize],
            }
        })
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn check_prime(p: u64) -> Result<(), SieveError> {
    if p % 2 == 0 || p > 1 << 31 || !is_prime_u64(p) {
        Err(SieveError::NotOddPrime(p))
    } else {
        Ok(())
    }
}

/// Decides by exhausting (Z/p)^2 whether the tuple is consistent modulo p.
pub fn survives_mod_p(t: &ATuple, p: u64) -> Result<SieveVerdict, SieveError> {
    check_prime(p)?;
    let r = Residues::new(t, p);
    for n in 0..p {
        for d in 0..p {
            if r.consistent(n, d) {
                return Ok(SieveVerdict { p, outcome: Outcome::Survives, witness: Some((n, d)) });
            }
        }
    }
    Ok(SieveVerdict { p, outcome: Outcome::Eliminated, witness: None })
}

/// Verdicts at each prime in order, stopping at the first elimination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveReport {
    pub tuple: ATuple,
    pub verdicts: Vec<SieveVerdict>,
}

impl SieveReport {
    pub fn eliminated_at(&self) -> Option<u64> {
        self.verdicts.iter().find(|v| !v.survives()).map(|v| v.p)
    }

    pub fn certificate(&self) -> Option<Certificate> {
        self.verdicts.iter().find(|v| !v.survives()).map(|v| Certificate::new(&self.tuple, v))
    }
}

pub fn sieve_tuple(t: &ATuple, primes: &[u64]) -> Result<SieveReport, SieveError> {
    let mut verdicts = Vec::with_capacity(primes.len());
    for &p in primes {
        let v = survives_mod_p(t, p)?;
        let stop = !v.survives();
        verdicts.push(v);
        if stop {
            break;
        }
    }
    Ok(SieveReport { tuple: t.clone(), verdicts })
}

/// Survivors and elimination certificates, each in input order.
pub fn auto_eliminate(tuples: &[ATuple], primes: &[u64]) -> Result<(Vec<ATuple>, Vec<Certificate>), SieveError> {
    for &p in primes {
        check_prime(p)?;
    }
    let reports: Vec<SieveReport> = tuples
        .par_iter()
        .map(|t| sieve_tuple(t, primes))
        .collect::<Result<_, _>>()?;
    let mut survivors = Vec::new();
    let mut eliminated = Vec::new();
    for r in reports {
        match r.certificate() {
            Some(c) => eliminated.push(c),
            None => survivors.push(r.tuple),
        }
    }
    Ok((survivors, eliminated))
}

/// Re-checks a certificate: a witness must satisfy the predicate, an elimination is
/// re-derived by full enumeration.
pub fn replay(cert: &Certificate) -> Result<bool, SieveError> {
    check_prime(cert.p)?;
    match (cert.outcome, cert.witness) {
        (Outcome::Survives, Some([n, d])) => {
            Ok(n < cert.p && d < cert.p && Residues::new(&cert.tuple, cert.p).consistent(n, d))
        }
        (Outcome::Survives, None) => Ok(false),
        (Outcome::Eliminated, Some(_)) => Ok(false),
        (Outcome::Eliminated, None) => Ok(!survives_mod_p(&cert.tuple, cert.p)?.survives()),
    }
}

/// All odd primes up to 31.
pub fn default_primes() -> Vec<u64> {
    odd_primes_up_to(31).into_iter().map(u64::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i64]) -> ATuple {
        ATuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn mod3_eliminations() {
        for tup in [t(&[-2, -5, 3, 1, 1]), t(&[-1, -15, -1, -2, 3])] {
            let v = survives_mod_p(&tup, 3).unwrap();
            assert_eq!(v.outcome, Outcome::Eliminated);
            assert!(replay(&Certificate::new(&tup, &v)).unwrap());
        }
        let v = survives_mod_p(&t(&[-3, -5, 2, 1, 1]), 3).unwrap();
        assert_eq!(v.witness, Some((0, 1)));
    }

    #[test]
    fn prime_checks() {
        assert!(survives_mod_p(&t(&[1, 1]), 9).is_err());
        assert!(survives_mod_p(&t(&[1, 1]), 2).is_err());
    }

    #[test]
    fn reports() {
        let r = sieve_tuple(&t(&[-2, -5, 3, 1, 1]), &[3, 7, 11]).unwrap();
        assert_eq!(r.eliminated_at(), Some(3));
        assert_eq!(r.verdicts.len(), 1);
        let primes: Vec<u64> = odd_primes_up_to(100).into_iter().map(u64::from).collect();
        assert_eq!(sieve_tuple(&t(&[2, 5, 2, -1, -1]), &primes).unwrap().eliminated_at(), None);
        assert_eq!(sieve_tuple(&t(&[1, 1, 1, 1, 1]), &default_primes()).unwrap().eliminated_at(), None);
    }

    #[test]
    fn batch_partition() {
        let five = [t(&[-3, -5, 2, 1, 1]), t(&[-2, -5, 3, 1, 1]), t(&[-1, -15, -1, -2, 3]), t(&[2, 5, 2, -1, -1]), t(&[6, 5, 1, 3, 2])];
        let (s, e) = auto_eliminate(&five, &default_primes()).unwrap();
        assert_eq!(s, vec![five[0].clone(), five[3].clone(), five[4].clone()]);
        assert_eq!(e.iter().map(|c| (c.tuple.clone(), c.p)).collect::<Vec<_>>(), vec![(five[1].clone(), 3), (five[2].clone(), 3)]);
        assert_eq!(auto_eliminate(&[], &[3]).unwrap(), (vec![], vec![]));
        let json = serde_json::to_string(&e[0]).unwrap();
        assert_eq!(json, r#"{"tuple":{"k":5,"a":[-2,-5,3,1,1]},"p":3,"outcome":"eliminated","witness":null}"#);
    }
}
