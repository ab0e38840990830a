//! Computational checks of the structural lemmas the bounds rely on.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::arith::{checked_pow, component, factorize, is_prime, Modulus, Residue};
use crate::engine::{
    self, minkowski_sum, weight_multiples, Mode, Sequence, SumSet, WeightSet, Witness,
};
use crate::error::{Error, Result};
use crate::sets::{self, ResidueSet};

/// Shape of the sumset in a coverage statement over `Z_{p^r}`, with
/// `Q = U(p^r)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoverageVariant {
    /// `Q x_1 + ... + Q x_k = Z_{p^r}` for all units `x_i`.
    AllUnits,
    /// `Q y_1 + (Q y_2 ∪ {0}) + (Q y_3 ∪ {0}) = Z_{p^r}` for all units `y_i`.
    WithZeroAugment,
}

fn odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::Domain("hypothesis violated: p must be odd".into()));
    }
    Ok(())
}

/// Checks a coverage lemma exhaustively, rejecting parameters outside its
/// hypotheses:
///
/// * `AllUnits`, arity 3: `p >= 7`.
/// * `AllUnits`, arity 4 (at least four unit terms): `p >= 5`.
/// * `WithZeroAugment`, arity 3: any odd `p`.
pub fn verify_coverage_lemma(
    p: u64,
    r: u32,
    arity: usize,
    variant: CoverageVariant,
) -> Result<bool> {
    odd_prime(p)?;
    if r == 0 {
        return Err(Error::Domain("hypothesis violated: r >= 1".into()));
    }
    match (variant, arity) {
        (CoverageVariant::AllUnits, 3) if p < 7 => {
            return Err(Error::Domain(format!(
                "hypothesis violated: three-unit coverage needs p >= 7, got {p}"
            )))
        }
        (CoverageVariant::AllUnits, 4) if p < 5 => {
            return Err(Error::Domain(format!(
                "hypothesis violated: four-unit coverage needs p >= 5, got {p}"
            )))
        }
        (CoverageVariant::AllUnits, 3 | 4) | (CoverageVariant::WithZeroAugment, 3) => {}
        _ => {
            return Err(Error::Domain(format!(
                "hypothesis violated: arity {arity} not covered by {variant:?}"
            )))
        }
    }
    coverage_holds(p, r, arity, variant)
}

/// Whether the coverage statement holds for every unit tuple over
/// `Z_{p^r}`, without checking hypotheses. Scaling by a unit preserves
/// coverage, so the first unit is fixed to `1`; the remaining ones range over
/// all units.
pub fn coverage_holds(p: u64, r: u32, arity: usize, variant: CoverageVariant) -> Result<bool> {
    if arity == 0 {
        return Err(Error::Domain("arity must be at least 1".into()));
    }
    let q = Modulus::new(checked_pow(p, r)?)?;
    let squares = WeightSet::unit_squares(q)?;
    let units = sets::units(q)?.to_vec();
    let orbit = |x: u64, slot: usize| -> Result<SumSet> {
        let m = weight_multiples(Residue::new(x, q)?, &squares)?;
        if slot > 0 && variant == CoverageVariant::WithZeroAugment {
            let mut set = m.achievable().clone();
            set.insert(0)?;
            return Ok(SumSet::from_set(set));
        }
        Ok(m)
    };
    // Later slots are interchangeable, so non-decreasing tuples suffice.
    let mut idx = vec![0usize; arity - 1];
    let first = orbit(1, 0)?;
    loop {
        let mut acc = first.clone();
        for (slot, &i) in idx.iter().enumerate() {
            acc = minkowski_sum(&acc, &orbit(units[i], slot + 1)?)?;
        }
        if acc.achievable().len() as u64 != q.get() {
            return Ok(false);
        }
        // Advance to the next non-decreasing index tuple.
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(true);
            }
            k -= 1;
            if idx[k] + 1 < units.len() {
                idx[k] += 1;
                let v = idx[k];
                for later in &mut idx[k + 1..] {
                    *later = v;
                }
                break;
            }
        }
    }
}

/// Outcome of sampling the lift from a reduced zero-sum to an
/// `S(p^r)^*`-weighted one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftCheck {
    pub p: u64,
    pub r: u32,
    pub samples: usize,
    /// Samples whose reduction had a zero-sum subsequence.
    pub reduced_zero_sums: usize,
    /// Of those, how many lifted witnesses verified mod `p^r`.
    pub lifted: usize,
}

impl LiftCheck {
    pub fn pass(&self) -> bool {
        self.lifted == self.reduced_zero_sums
    }
}

/// Samples sequences of length 1..=4 over `Z_{p^r}` and, whenever the image
/// mod `p` (odd `r`) or mod `p^2` (even `r`) has a unit-square-weighted
/// zero-sum subsequence, lifts its coefficients to `U(p^r)^2`, multiplies by
/// `p^{r-1}` (resp. `p^{r-2}`) and checks the result is an
/// `S(p^r)^*`-weighted zero-sum of the same terms.
pub fn check_square_lift(p: u64, r: u32, samples: usize, seed: u64) -> Result<LiftCheck> {
    odd_prime(p)?;
    if r == 0 {
        return Err(Error::Domain("exponent must be at least 1".into()));
    }
    let big = Modulus::new(checked_pow(p, r)?)?;
    let (small, c) = if r % 2 == 1 {
        (Modulus::new(p)?, p.pow(r - 1))
    } else {
        (Modulus::new(p * p)?, p.pow(r - 2))
    };
    let small_weights = WeightSet::unit_squares(small)?;
    let big_weights = WeightSet::nonzero_squares(big)?;
    // Smallest preimage in U(p^r)^2 of each element of the reduced unit squares.
    let mut preimage = vec![0u64; small.get() as usize];
    for a in sets::unit_squares(big)?.to_vec().into_iter().rev() {
        preimage[(a % small.get()) as usize] = a;
    }

    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = LiftCheck {
        p,
        r,
        samples,
        reduced_zero_sums: 0,
        lifted: 0,
    };
    for _ in 0..samples {
        let len = rng.gen_range(1..=4);
        let terms: Vec<u64> = (0..len).map(|_| rng.gen_range(0..big.get())).collect();
        let seq = Sequence::new(big, terms)?;
        let image = Sequence::new(
            small,
            seq.terms().iter().map(|&x| x % small.get()).collect(),
        )?;
        let Some(w) = engine::has_zero_sum_subsequence(&image, &small_weights)? else {
            continue;
        };
        out.reduced_zero_sums += 1;
        let coefficients = w
            .coefficients
            .iter()
            .map(|&a| big.mul(c, preimage[a as usize]))
            .collect();
        let lifted = Witness {
            indices: w.indices.clone(),
            coefficients,
        };
        if engine::verify_witness(&seq, &big_weights, &lifted, Mode::Subsequence).is_ok() {
            out.lifted += 1;
        }
    }
    Ok(out)
}

/// Samples `samples` random sequences of length `len` and returns the first
/// with no consecutive `weights`-weighted zero-sum, if any.
pub fn check_sampled_consecutive_bound(
    weights: &WeightSet,
    len: usize,
    samples: usize,
    seed: u64,
) -> Result<Option<Sequence>> {
    let n = weights.modulus();
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        let seq = Sequence::new(n, (0..len).map(|_| rng.gen_range(0..n.get())).collect())?;
        if engine::is_blocking(&seq, weights, Mode::Consecutive)? {
            return Ok(Some(seq));
        }
    }
    Ok(None)
}

/// Structured length-9 sequences over `Z_25` that the case analysis for
/// `C_{U(25)^2} <= 9` treats separately: all units, one unit in each block of
/// three, at most two units, and no units at all. Non-unit terms are nonzero
/// multiples of 5. `per_family` sequences of each shape are drawn.
pub fn u25_adversarial_sequences(per_family: usize, seed: u64) -> Vec<Sequence> {
    let n = Modulus::new(25).expect("25 is a valid modulus");
    let units: Vec<u64> = (1..25).filter(|x| x % 5 != 0).collect();
    let fives = [5u64, 10, 15, 20];
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(4 * per_family);
    for family in 0..4 {
        for _ in 0..per_family {
            let mut terms: Vec<u64> = (0..9).map(|_| fives[rng.gen_range(0..4)]).collect();
            match family {
                0 => terms
                    .iter_mut()
                    .for_each(|t| *t = units[rng.gen_range(0..units.len())]),
                1 => {
                    for block in 0..3 {
                        terms[3 * block + rng.gen_range(0..3)] =
                            units[rng.gen_range(0..units.len())];
                    }
                }
                2 => {
                    for _ in 0..rng.gen_range(1..=2) {
                        terms[rng.gen_range(0..9)] = units[rng.gen_range(0..units.len())];
                    }
                }
                _ => {}
            }
            out.push(Sequence::new(n, terms).expect("terms are reduced"));
        }
    }
    out
}

/// `S(p^r)^*` is the disjoint union of `p^{2k} U(p^r)^2` over `0 <= 2k < r`.
pub fn check_square_partition(p: u64, r: u32) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = Modulus::new(checked_pow(p, r)?)?;
    let unit_squares = sets::unit_squares(q)?;
    let mut union = ResidueSet::empty(q)?;
    let mut total = 0;
    let mut k = 0;
    while 2 * k < r {
        let part = unit_squares.scaled(p.pow(2 * k));
        if !union.is_disjoint(&part) {
            return Ok(false);
        }
        total += part.len();
        union = union.union(&part)?;
        k += 1;
    }
    Ok(total == union.len() && union == sets::nonzero_squares(q)?)
}

/// `x in S(n)^*` iff every component `x^{(p)}` is a square mod `p^{v_p(n)}`
/// and `x != 0`, checked for every `x` in `Z_n`.
pub fn check_crt_membership(n: u64) -> Result<bool> {
    let m = Modulus::new(n)?;
    let fact = factorize(n)?;
    let local: Vec<(u64, ResidueSet)> = fact
        .factors()
        .iter()
        .map(|&(p, r)| Ok((p, sets::squares(Modulus::new(p.pow(r))?)?)))
        .collect::<Result<_>>()?;
    let direct = sets::nonzero_squares(m)?;
    for x in 0..n {
        let xr = Residue::new(x, m)?;
        let mut all_square = true;
        let mut some_nonzero = false;
        for (p, sq) in &local {
            let c = component(xr, *p)?;
            all_square &= sq.contains(c.value());
            some_nonzero |= !c.is_zero();
        }
        if (all_square && some_nonzero) != direct.contains(x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closed-form `|S(n)|` agrees with enumeration.
pub fn check_size_formula(n: u64) -> Result<bool> {
    let m = Modulus::new(n)?;
    Ok(sets::size_squares(m)? == sets::squares(m)?.len() as u64)
}
