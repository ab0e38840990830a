//! Brute-force reference implementations, independent of the library.

#![allow(dead_code)]

/// Every assignment of weights to the chosen indices, checked directly.
fn some_weighting_vanishes(n: u64, terms: &[u64], idx: &[usize], weights: &[u64]) -> bool {
    let mut choice = vec![0usize; idx.len()];
    loop {
        let sum = idx
            .iter()
            .zip(&choice)
            .fold(0u64, |acc, (&i, &c)| (acc + weights[c] * terms[i]) % n);
        if sum == 0 {
            return true;
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return false;
            }
            choice[k] += 1;
            if choice[k] < weights.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Whether some nonempty subset of positions admits a zero weighted sum.
pub fn has_zero_sum_subsequence(n: u64, terms: &[u64], weights: &[u64]) -> bool {
    let k = terms.len();
    (1u32..(1 << k)).any(|mask| {
        let idx: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        some_weighting_vanishes(n, terms, &idx, weights)
    })
}

/// Whether some nonempty window admits a zero weighted sum.
pub fn has_zero_sum_consecutive(n: u64, terms: &[u64], weights: &[u64]) -> bool {
    let k = terms.len();
    (0..k).any(|i| {
        (i + 1..=k).any(|j| some_weighting_vanishes(n, terms, &(i..j).collect::<Vec<_>>(), weights))
    })
}

/// Nonzero squares mod `n` by direct enumeration.
pub fn nonzero_squares(n: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (0..n).map(|x| x * x % n).filter(|&s| s != 0).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn unit_squares(n: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..n)
        .filter(|&x| gcd(x, n) == 1)
        .map(|x| x * x % n)
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Smallest `k` such that every length-`k` sequence has a zero-sum of the
/// requested kind, by enumerating all sequences of each length.
pub fn constant(n: u64, weights: &[u64], consecutive: bool) -> u64 {
    let check = |t: &[u64]| {
        if consecutive {
            has_zero_sum_consecutive(n, t, weights)
        } else {
            has_zero_sum_subsequence(n, t, weights)
        }
    };
    for len in 1..=n as usize {
        let mut terms = vec![0u64; len];
        let mut all = true;
        'outer: loop {
            if !check(&terms) {
                all = false;
                break;
            }
            let mut k = 0;
            loop {
                if k == len {
                    break 'outer;
                }
                terms[k] += 1;
                if terms[k] < n {
                    break;
                }
                terms[k] = 0;
                k += 1;
            }
        }
        if all {
            return len as u64;
        }
    }
    n
}
