//! The finite set of twists delta for which the family can have a rational point.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::family::{is_rat_square, CurveFamily};
use super::local::{is_qp_square, LocalPrime};
use super::CurveError;
use crate::arith::{factorize, primes_above, squarefree_class, QuadElem};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn prime_divisors(n: &BigInt, into: &mut BTreeSet<u64>) {
    if n.is_zero() {
        return;
    }
    for (p, _) in factorize(&n.abs()).expect("nonzero") {
        into.insert(p.to_u64().expect("small prime"));
    }
}

/// Rational primes where delta can have odd valuation, always including 2.
pub fn bad_primes(fam: &CurveFamily) -> Vec<u64> {
    let mut ps = BTreeSet::from([2u64]);
    let [l1, l2] = &fam.linear;
    prime_divisors(&BigInt::from(l1.k * l2.k), &mut ps);
    prime_divisors(&BigInt::from(l1.u * l2.u), &mut ps);
    for l in [l1, l2] {
        if !l.is_rational() {
            // Res(L, conj L) = u (conj w - w)
            let r = (&l.w.conj() - &l.w).scale(&rat(l.u));
            prime_divisors(&r.int_norm().expect("integral"), &mut ps);
        }
    }
    let res = &l1.w.scale(&rat(l2.u)) - &l2.w.scale(&rat(l1.u));
    prime_divisors(&res.int_norm().expect("integral"), &mut ps);
    ps.into_iter().collect()
}

fn search_depth(p: u64) -> u32 {
    if p == 2 {
        return 7;
    }
    let mut n = 2;
    while p.pow(n) < 64 {
        n += 1;
    }
    n
}

/// Whether some X in Q_p satisfies the side conditions at p and makes delta L1(X) L2(X)
/// of even valuation at every prime of K over p.
fn locally_admissible(fam: &CurveFamily, delta: &QuadElem, p: u64, places: &[LocalPrime]) -> bool {
    let n = search_depth(p);
    let f = fam.field;
    let even = |z: &QuadElem| z.is_zero() || places.iter().all(|lp| lp.val(z) % 2 == 0);
    let [l1, l2] = &fam.linear;
    let affine = (0..p.pow(n) as i64).map(|r| (rat(r), false));
    let chart = (0..p.pow(n - 1) as i64).map(|r| (rat(r * p as i64), true));
    affine.chain(chart).any(|(x, inf)| {
        let side = if inf {
            is_qp_square(&l1.side_value_at_infinity(&x), p)
                && is_qp_square(&l2.side_value_at_infinity(&x), p)
                && is_qp_square(&fam.quadratic.side_value_at_infinity(&x), p)
        } else {
            is_qp_square(&l1.side_value(&x), p)
                && is_qp_square(&l2.side_value(&x), p)
                && is_qp_square(&fam.quadratic.side_value(&x), p)
        };
        if !side {
            return false;
        }
        let lin = |l: &super::family::LinearFactor| {
            let u = QuadElem::from_int(f, l.u);
            if inf {
                &u + &l.w.scale(&x)
            } else {
                &u.scale(&x) + &l.w
            }
        };
        even(&(&(delta * &lin(l1)) * &lin(l2)))
    })
}

fn real_roots(fam: &CurveFamily, conj: bool) -> Vec<f64> {
    let mut roots = Vec::new();
    let emb = |z: &QuadElem| {
        let s = if conj { -1.0 } else { 1.0 };
        z.u().to_f64().unwrap() + s * z.v().to_f64().unwrap() * (fam.field.d() as f64).sqrt()
    };
    for l in &fam.linear {
        roots.push(-emb(&l.w) / l.u as f64);
        let w2 = l.w_squared().to_f64().unwrap();
        if w2 >= 0.0 {
            roots.push(w2.sqrt() / l.u as f64);
            roots.push(-w2.sqrt() / l.u as f64);
        }
    }
    let q = &fam.quadratic;
    let r2 = -(q.b as f64) / q.a as f64;
    if r2 >= 0.0 {
        roots.push(r2.sqrt());
        roots.push(-r2.sqrt());
    }
    roots
}

/// For a real quadratic field: some real X meets all sign conditions at both embeddings.
fn real_admissible(fam: &CurveFamily, delta: &QuadElem) -> bool {
    if fam.field.d() <= 0 || fam.field.is_rational() {
        return true;
    }
    let mut roots: Vec<f64> = [false, true].iter().flat_map(|&c| real_roots(fam, c)).collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut tests = vec![roots[0] - 1.0, roots[roots.len() - 1] + 1.0];
    tests.extend(roots.windows(2).filter(|w| w[1] - w[0] > 1e-9).map(|w| (w[0] + w[1]) / 2.0));
    let f = fam.field;
    tests.into_iter().any(|t| {
        let x = BigRational::from_float(t).expect("finite");
        let sides = fam.linear.iter().all(|l| !l.side_value(&x).is_negative())
            && !fam.quadratic.side_value(&x).is_negative();
        let prod = {
            let [l1, l2] = &fam.linear;
            let ev = |l: &super::family::LinearFactor| &QuadElem::from_int(f, l.u).scale(&x) + &l.w;
            &(delta * &ev(l1)) * &ev(l2)
        };
        sides && [false, true].iter().all(|&c| prod.real_sign(c).is_ge())
    })
}

/// Squarefree classes delta with delta L1(X) L2(X) possibly a square for a rational X
/// meeting the side conditions, sorted by their display form.
pub fn delta_candidates(fam: &CurveFamily) -> Result<Vec<QuadElem>, CurveError> {
    let f = fam.field;
    if f.is_rational() {
        return Err(CurveError::BadFamily { m: fam.quadratic.m(), why: "delta needs a quadratic field".into() });
    }
    let bad = bad_primes(fam);
    let mut gens: Vec<QuadElem> = f.units_mod_squares().into_iter().filter(|u| !u.is_one()).collect();
    if f.d() == 3 {
        // {+-1, +-eps} is generated by -1 and eps
        gens = vec![QuadElem::from_int(f, -1), f.fundamental_unit()];
    }
    for &p in &bad {
        gens.extend(primes_above(f, p).into_iter().map(|(pi, _)| pi));
    }
    let places: Vec<(u64, Vec<LocalPrime>)> = bad.iter().map(|&p| (p, LocalPrime::all_over(f, p))).collect();
    let irr_k: i64 = fam.linear.iter().filter(|l| !l.is_rational()).map(|l| l.k).product();
    let mut out = std::collections::BTreeMap::new();
    for mask in 0u32..(1 << gens.len()) {
        let mut delta = QuadElem::from_int(f, 1);
        for (b, g) in gens.iter().enumerate() {
            if mask >> b & 1 == 1 {
                delta = &delta * g;
            }
        }
        let delta = squarefree_class(&delta)?;
        if !is_rat_square(&(delta.norm() * rat(irr_k)).abs()) || (delta.norm() * rat(irr_k)).is_negative() {
            continue;
        }
        if !places.iter().all(|(p, lps)| locally_admissible(fam, &delta, *p, lps)) {
            continue;
        }
        if !real_admissible(fam, &delta) {
            continue;
        }
        out.insert(delta.to_string(), delta);
    }
    Ok(out.into_values().collect())
}

/// Classes of a list of deltas, as used to compare with tabulated values.
pub fn classes(deltas: &[QuadElem]) -> Result<BTreeSet<String>, CurveError> {
    deltas.iter().map(|d| Ok(squarefree_class(d)?.to_string())).collect()
}
