//! Reductions of long tuples to shorter ones: sub-runs and halving along step 2.

use super::ATuple;

/// Parities (n mod 2, d mod 2) compatible with gcd(n, d) = 1 and with every even
/// coefficient sitting on an even term.
pub fn parity_classes(t: &ATuple) -> Vec<(u8, u8)> {
    [(0u8, 1u8), (1, 0), (1, 1)]
        .into_iter()
        .filter(|&(n, d)| {
            t.coeffs()
                .iter()
                .enumerate()
                .all(|(i, &a)| a % 2 != 0 || (n as usize + i * d as usize) % 2 == 0)
        })
        .collect()
}

/// Halves the sub-progression at indices start, start+2, ..., start+2(count-1).
///
/// Succeeds when every admissible parity class makes all selected terms even; the
/// selected terms divided by 2 then form a progression with difference d whose
/// coefficients are a/2 for even a and 2a for odd a (x is even there).
pub fn half_subprogression(t: &ATuple, start: usize, count: usize) -> Option<ATuple> {
    if count == 0 || start + 2 * (count - 1) >= t.k() {
        return None;
    }
    let classes = parity_classes(t);
    if classes.is_empty() {
        return None;
    }
    let idx: Vec<usize> = (0..count).map(|j| start + 2 * j).collect();
    let forced = classes
        .iter()
        .all(|&(n, d)| idx.iter().all(|&i| (n as usize + i * d as usize) % 2 == 0));
    if !forced {
        return None;
    }
    let a = idx
        .iter()
        .map(|&i| {
            let x = t.get(i);
            if x % 2 == 0 {
                x / 2
            } else {
                2 * x
            }
        })
        .collect();
    ATuple::new(a).ok()
}

/// First contiguous run of `t` equal to a member of `known` or to its mirror image.
pub fn find_subtuple(t: &ATuple, known: &[ATuple]) -> Option<(usize, ATuple)> {
    for offset in 0..t.k() {
        for kt in known {
            if let Some(w) = t.window(offset, kt.k()) {
                if w == *kt || w == kt.mirror() {
                    return Some((offset, kt.clone()));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i64]) -> ATuple {
        ATuple::new(v.to_vec()).unwrap()
    }

    const K23A: [i64; 23] = [5, 6, 7, 2, 1, 10, 11, 3, 13, 14, 15, 1, 17, 2, 19, 5, 21, 22, 23, 6, 1, 26, 3];
    const K23B: [i64; 23] = [6, 7, 2, 1, 10, 11, 3, 13, 14, 15, 1, 17, 2, 19, 5, 21, 22, 23, 6, 1, 26, 3, 7];

    #[test]
    fn halving_k23() {
        let target = t(&[3, 1, 5, 6, 7, 2, 1]);
        assert_eq!(half_subprogression(&t(&K23A), 1, 7), Some(target.clone()));
        assert_eq!(half_subprogression(&t(&K23B), 0, 7), Some(target));
        assert_eq!(parity_classes(&t(&K23A)), vec![(1, 1)]);
    }

    #[test]
    fn halving_needs_forced_parity() {
        assert_eq!(half_subprogression(&t(&[1, 3, 5, 7, 11]), 0, 3), None);
        assert_eq!(half_subprogression(&t(&K23A), 0, 7), None);
        assert_eq!(half_subprogression(&t(&K23A), 20, 7), None);
    }

    #[test]
    fn subtuple_lookup() {
        let known = [t(&[2, 3, 1, 5, 6, 7, 2]), t(&[3, 1, 5, 6, 7, 2, 1]), t(&[1, 5, 6, 7, 2, 1, 10])];
        let k13 = t(&[3, 1, 5, 6, 7, 2, 1, 10, 11, 3, 13, 14, 15]);
        assert_eq!(find_subtuple(&k13, &known), Some((0, known[1].clone())));
        let k19 = t(&[1, 5, 6, 7, 2, 1, 10, 11, 3, 13, 14, 15, 1, 17, 2, 19, 5, 21, 22]);
        assert_eq!(find_subtuple(&k19, &known), Some((0, known[2].clone())));
        assert_eq!(find_subtuple(&t(&[1, 1, 1, 1, 1, 1, 1, 1]), &known), None);
        let mirrored = t(&[7, 2, 7, 6, 5, 1, 3, 2]);
        assert_eq!(find_subtuple(&mirrored, &known), Some((1, known[0].clone())));
    }
}
