//! Decision procedures for weighted zero-sum subsequences.
//!
//! A sequence `(x_1, ..., x_k)` over `Z_n` has an `A`-weighted zero-sum
//! subsequence if some nonempty index set `I` and weights `a_i in A` give
//! `sum_{i in I} a_i x_i = 0`. The consecutive variant additionally requires
//! `I` to be a contiguous range.
//!
//! Both decisions run a forward reachability pass over sum-sets stored as
//! bit vectors. Witnesses are recovered afterwards by walking the stored
//! prefix sets backwards.

use std::fmt;

use serde::Serialize;

use crate::arith::{Modulus, Residue};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::sets::{self, ResidueSet};

/// Which kind of zero-sum subsequence is asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Subsequence,
    Consecutive,
}

/// The weight set `A`: a nonempty subset of `Z_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSet {
    set: ResidueSet,
    members: Vec<u64>,
}

impl WeightSet {
    pub fn new(set: ResidueSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptyWeights);
        }
        let members = set.to_vec();
        Ok(WeightSet { set, members })
    }

    /// Arbitrary weights, reduced mod `n`.
    pub fn custom(n: Modulus, values: &[u64]) -> Result<Self> {
        WeightSet::new(ResidueSet::from_values(
            n,
            values.iter().map(|&v| n.reduce(v)),
        )?)
    }

    pub fn nonzero_squares(n: Modulus) -> Result<Self> {
        WeightSet::new(sets::nonzero_squares(n)?)
    }

    pub fn unit_squares(n: Modulus) -> Result<Self> {
        WeightSet::new(sets::unit_squares(n)?)
    }

    pub fn units(n: Modulus) -> Result<Self> {
        WeightSet::new(sets::units(n)?)
    }

    pub fn q_p(p: u64) -> Result<Self> {
        WeightSet::new(sets::q_p(p)?)
    }

    pub fn modulus(&self) -> Modulus {
        self.set.modulus()
    }

    pub fn set(&self) -> &ResidueSet {
        &self.set
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn contains(&self, a: u64) -> bool {
        self.set.contains(a)
    }
}

/// An ordered sequence of residues sharing one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    modulus: Modulus,
    terms: Vec<u64>,
}

impl Sequence {
    pub fn new(modulus: Modulus, terms: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = terms.iter().find(|&&t| t >= modulus.get()) {
            return Err(Error::OutOfRange {
                value: bad,
                modulus: modulus.get(),
            });
        }
        Ok(Sequence { modulus, terms })
    }

    pub fn from_residues(modulus: Modulus, terms: &[Residue]) -> Result<Self> {
        if let Some(bad) = terms.iter().find(|t| t.modulus() != modulus) {
            return Err(Error::ModulusMismatch {
                expected: modulus.get(),
                found: bad.modulus().get(),
            });
        }
        Ok(Sequence {
            modulus,
            terms: terms.iter().map(|t| t.value()).collect(),
        })
    }

    pub fn empty(modulus: Modulus) -> Self {
        Sequence {
            modulus,
            terms: Vec::new(),
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> Residue {
        Residue::reduced(self.terms[i], self.modulus)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `u * S`, termwise.
    pub fn scaled(&self, u: u64) -> Sequence {
        let m = self.modulus;
        Sequence {
            modulus: m,
            terms: self.terms.iter().map(|&t| m.mul(u, t)).collect(),
        }
    }

    pub fn into_terms(self) -> Vec<u64> {
        self.terms
    }
}

/// A set of achievable weighted sums.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SumSet(ResidueSet);

impl SumSet {
    pub fn empty(modulus: Modulus) -> Result<Self> {
        Ok(SumSet(ResidueSet::empty(modulus)?))
    }

    pub fn from_set(set: ResidueSet) -> Self {
        SumSet(set)
    }

    pub fn achievable(&self) -> &ResidueSet {
        &self.0
    }

    pub fn modulus(&self) -> Modulus {
        self.0.modulus()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.0.contains(s)
    }

    pub fn contains_zero(&self) -> bool {
        self.0.contains(0)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.0.to_vec()
    }
}

/// Indices (0-based, ascending) and weights certifying a zero-sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub coefficients: Vec<u64>,
}

impl Witness {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn one_based_indices(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn weighted_sum(&self, seq: &Sequence) -> u64 {
        let m = seq.modulus();
        self.indices
            .iter()
            .zip(&self.coefficients)
            .fold(0, |acc, (&i, &a)| m.add(acc, m.mul(a, seq.terms[i])))
    }
}

fn check_modulus(seq_mod: Modulus, weights: &WeightSet) -> Result<()> {
    if seq_mod != weights.modulus() {
        return Err(Error::ModulusMismatch {
            expected: weights.modulus().get(),
            found: seq_mod.get(),
        });
    }
    Ok(())
}

pub(crate) fn multiples_bits(m: Modulus, x: u64, weights: &[u64]) -> BitSet {
    let mut b = BitSet::new(m.get() as usize);
    for &a in weights {
        b.insert(m.mul(a, x) as usize);
    }
    b
}

/// Minkowski sum `{ a + b }` mod `len`.
pub(crate) fn minkowski_bits(a: &BitSet, b: &BitSet) -> BitSet {
    let mut out = BitSet::new(a.len());
    minkowski_into(a, b, &mut out);
    out
}

pub(crate) fn minkowski_into(a: &BitSet, b: &BitSet, out: &mut BitSet) {
    let (small, large) = if a.count() <= b.count() {
        (a, b)
    } else {
        (b, a)
    };
    for s in small.iter() {
        large.or_rotated_into(s, out);
        if out.is_full() {
            break;
        }
    }
}

/// `A * x = { a x mod n : a in A }`.
pub fn weight_multiples(x: Residue, weights: &WeightSet) -> Result<SumSet> {
    check_modulus(x.modulus(), weights)?;
    let m = x.modulus();
    Ok(SumSet(ResidueSet::from_bits(
        m,
        multiples_bits(m, x.value(), weights.members()),
    )))
}

pub fn minkowski_sum(a: &SumSet, b: &SumSet) -> Result<SumSet> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch {
            expected: a.modulus().get(),
            found: b.modulus().get(),
        });
    }
    Ok(SumSet(ResidueSet::from_bits(
        a.modulus(),
        minkowski_bits(a.0.bits(), b.0.bits()),
    )))
}

fn extend_bits(reach: &BitSet, mult: &BitSet) -> BitSet {
    let mut out = reach.clone();
    out.union_with(mult);
    if !reach.is_empty() {
        minkowski_into(reach, mult, &mut out);
    }
    out
}

/// One step of the subset-sum pass: `R ∪ M ∪ (R ⊕ M)` with `M = A * x`.
pub fn extend_reachable(reach: &SumSet, x: Residue, weights: &WeightSet) -> Result<SumSet> {
    check_modulus(reach.modulus(), weights)?;
    let mult = weight_multiples(x, weights)?;
    Ok(SumSet(ResidueSet::from_bits(
        reach.modulus(),
        extend_bits(reach.0.bits(), mult.0.bits()),
    )))
}

/// Sum-set of all nonempty weighted subsequence sums of `seq`.
pub fn subsequence_sums(seq: &Sequence, weights: &WeightSet) -> Result<SumSet> {
    check_modulus(seq.modulus(), weights)?;
    let m = seq.modulus();
    let mut reach = BitSet::new(m.get() as usize);
    for &x in seq.terms() {
        reach = extend_bits(&reach, &multiples_bits(m, x, weights.members()));
    }
    Ok(SumSet(ResidueSet::from_bits(m, reach)))
}

/// Decides whether `seq` has an `A`-weighted zero-sum subsequence and, if so,
/// returns one.
///
/// The witness ends at the first prefix whose sum-set contains zero. Walking
/// back, each step takes the smallest weight that either closes the sum on
/// its own or leaves a remainder reachable from the earlier prefix, and then
/// jumps to the first prefix where that remainder became reachable.
pub fn has_zero_sum_subsequence(seq: &Sequence, weights: &WeightSet) -> Result<Option<Witness>> {
    check_modulus(seq.modulus(), weights)?;
    let m = seq.modulus();
    let mut prefixes: Vec<BitSet> = Vec::with_capacity(seq.len());
    let mut reach = BitSet::new(m.get() as usize);
    let mut end = None;
    for (i, &x) in seq.terms().iter().enumerate() {
        reach = extend_bits(&reach, &multiples_bits(m, x, weights.members()));
        prefixes.push(reach.clone());
        if reach.contains(0) {
            end = Some(i);
            break;
        }
    }
    let Some(end) = end else { return Ok(None) };

    let mut picked: Vec<(usize, u64)> = Vec::new();
    let mut target = 0u64;
    let mut i = end;
    'walk: loop {
        let x = seq.terms()[i];
        for &a in weights.members() {
            let ax = m.mul(a, x);
            if ax == target {
                picked.push((i, a));
                break 'walk;
            }
            let rest = m.add(target, m.neg(ax));
            if i > 0 && prefixes[i - 1].contains(rest as usize) {
                picked.push((i, a));
                target = rest;
                i = prefixes.partition_point(|p| !p.contains(rest as usize));
                continue 'walk;
            }
        }
        unreachable!("sum {target} was reachable at prefix {i} but no predecessor exists");
    }
    Ok(Some(normalize(picked)))
}

fn normalize(mut picked: Vec<(usize, u64)>) -> Witness {
    picked.sort_unstable();
    if picked.iter().any(|&(_, a)| a != 0) {
        picked.retain(|&(_, a)| a != 0);
    } else {
        picked.truncate(1);
    }
    let (indices, coefficients) = picked.into_iter().unzip();
    Witness {
        indices,
        coefficients,
    }
}

/// Decides whether some contiguous window of `seq` is an `A`-weighted
/// zero-sum and, if so, returns the window with the smallest end, breaking
/// ties by smallest start.
pub fn has_zero_sum_consecutive(seq: &Sequence, weights: &WeightSet) -> Result<Option<Witness>> {
    check_modulus(seq.modulus(), weights)?;
    let m = seq.modulus();
    let mults: Vec<BitSet> = seq
        .terms()
        .iter()
        .map(|&x| multiples_bits(m, x, weights.members()))
        .collect();
    // windows[j] holds the sum-set of the window starting at j and ending at the current term.
    let mut windows: Vec<BitSet> = Vec::with_capacity(seq.len());
    let mut found = None;
    'scan: for (i, mult) in mults.iter().enumerate() {
        for w in windows.iter_mut() {
            *w = minkowski_bits(w, mult);
        }
        windows.push(mult.clone());
        for (j, w) in windows.iter().enumerate() {
            if w.contains(0) {
                found = Some((j, i));
                break 'scan;
            }
        }
    }
    let Some((start, end)) = found else {
        return Ok(None);
    };

    let mut chain: Vec<BitSet> = Vec::with_capacity(end - start + 1);
    chain.push(mults[start].clone());
    for mult in &mults[start + 1..=end] {
        let next = minkowski_bits(chain.last().unwrap(), mult);
        chain.push(next);
    }
    let mut coefficients = vec![0u64; end - start + 1];
    let mut target = 0u64;
    for i in (start..=end).rev() {
        let x = seq.terms()[i];
        let k = i - start;
        let a = weights
            .members()
            .iter()
            .copied()
            .find(|&a| {
                let ax = m.mul(a, x);
                if k == 0 {
                    ax == target
                } else {
                    chain[k - 1].contains(m.add(target, m.neg(ax)) as usize)
                }
            })
            .expect("window sum-set chain is consistent");
        coefficients[k] = a;
        target = m.add(target, m.neg(m.mul(a, x)));
    }
    Ok(Some(Witness {
        indices: (start..=end).collect(),
        coefficients,
    }))
}

pub fn has_zero_sum(seq: &Sequence, weights: &WeightSet, mode: Mode) -> Result<Option<Witness>> {
    match mode {
        Mode::Subsequence => has_zero_sum_subsequence(seq, weights),
        Mode::Consecutive => has_zero_sum_consecutive(seq, weights),
    }
}

/// True iff `seq` has no zero-sum subsequence of the given kind.
pub fn is_blocking(seq: &Sequence, weights: &WeightSet, mode: Mode) -> Result<bool> {
    Ok(has_zero_sum(seq, weights, mode)?.is_none())
}

/// Why a witness was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessDefect {
    ModulusMismatch,
    Empty,
    LengthMismatch { indices: usize, coefficients: usize },
    IndexOutOfRange(usize),
    NotStrictlyIncreasing,
    CoefficientNotInWeights { index: usize, coefficient: u64 },
    NonzeroSum(u64),
    NotContiguous,
}

impl fmt::Display for WitnessDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessDefect::ModulusMismatch => {
                write!(f, "sequence and weights use different moduli")
            }
            WitnessDefect::Empty => write!(f, "witness has no indices"),
            WitnessDefect::LengthMismatch {
                indices,
                coefficients,
            } => {
                write!(f, "{indices} indices but {coefficients} coefficients")
            }
            WitnessDefect::IndexOutOfRange(i) => write!(f, "index {i} is out of range"),
            WitnessDefect::NotStrictlyIncreasing => {
                write!(f, "indices are not strictly increasing")
            }
            WitnessDefect::CoefficientNotInWeights { index, coefficient } => {
                write!(
                    f,
                    "coefficient {coefficient} at index {index} is not a weight"
                )
            }
            WitnessDefect::NonzeroSum(s) => write!(f, "weighted sum is {s}, not 0"),
            WitnessDefect::NotContiguous => write!(f, "indices do not form a contiguous window"),
        }
    }
}

impl std::error::Error for WitnessDefect {}

pub fn verify_witness(
    seq: &Sequence,
    weights: &WeightSet,
    witness: &Witness,
    mode: Mode,
) -> std::result::Result<(), WitnessDefect> {
    if seq.modulus() != weights.modulus() {
        return Err(WitnessDefect::ModulusMismatch);
    }
    if witness.indices.is_empty() {
        return Err(WitnessDefect::Empty);
    }
    if witness.indices.len() != witness.coefficients.len() {
        return Err(WitnessDefect::LengthMismatch {
            indices: witness.indices.len(),
            coefficients: witness.coefficients.len(),
        });
    }
    if let Some(&i) = witness.indices.iter().find(|&&i| i >= seq.len()) {
        return Err(WitnessDefect::IndexOutOfRange(i));
    }
    if witness.indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WitnessDefect::NotStrictlyIncreasing);
    }
    for (&index, &coefficient) in witness.indices.iter().zip(&witness.coefficients) {
        if !weights.contains(coefficient) {
            return Err(WitnessDefect::CoefficientNotInWeights { index, coefficient });
        }
    }
    if mode == Mode::Consecutive && witness.indices.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(WitnessDefect::NotContiguous);
    }
    match witness.weighted_sum(seq) {
        0 => Ok(()),
        s => Err(WitnessDefect::NonzeroSum(s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn seq(n: u64, t: &[u64]) -> Sequence {
        Sequence::new(m(n), t.to_vec()).unwrap()
    }

    fn s9() -> WeightSet {
        WeightSet::nonzero_squares(m(9)).unwrap()
    }

    #[test]
    fn multiples_examples() {
        let w = s9();
        assert_eq!(
            weight_multiples(Residue::reduced(3, m(9)), &w)
                .unwrap()
                .to_vec(),
            vec![3]
        );
        assert_eq!(
            weight_multiples(Residue::reduced(0, m(9)), &w)
                .unwrap()
                .to_vec(),
            vec![0]
        );
        assert_eq!(
            weight_multiples(Residue::reduced(1, m(9)), &w)
                .unwrap()
                .to_vec(),
            vec![1, 4, 7]
        );
    }

    #[test]
    fn extend_examples() {
        let w = s9();
        let one = Residue::reduced(1, m(9));
        let r0 = SumSet::empty(m(9)).unwrap();
        let r1 = extend_reachable(&r0, one, &w).unwrap();
        assert_eq!(r1.to_vec(), vec![1, 4, 7]);
        let r2 = extend_reachable(&r1, one, &w).unwrap();
        assert_eq!(r2.to_vec(), vec![1, 2, 4, 5, 7, 8]);
        let full = SumSet::from_set(ResidueSet::full(m(9)).unwrap());
        for x in 0..9 {
            let r = extend_reachable(&full, Residue::reduced(x, m(9)), &w).unwrap();
            assert_eq!(r.achievable().len(), 9);
        }
    }

    #[test]
    fn subsequence_examples() {
        let w = s9();
        let wit = has_zero_sum_subsequence(&seq(9, &[1, 8]), &w)
            .unwrap()
            .unwrap();
        assert_eq!(wit.one_based_indices(), vec![1, 2]);
        assert_eq!(wit.coefficients, vec![1, 1]);
        assert_eq!(
            has_zero_sum_subsequence(&seq(9, &[1, 1, 3, 3]), &w).unwrap(),
            None
        );
        let wit = has_zero_sum_subsequence(&seq(9, &[0]), &w)
            .unwrap()
            .unwrap();
        assert_eq!(wit.indices, vec![0]);
        assert_eq!(
            has_zero_sum_subsequence(&Sequence::empty(m(9)), &w).unwrap(),
            None
        );
    }

    #[test]
    fn consecutive_examples() {
        let w = s9();
        assert_eq!(
            has_zero_sum_consecutive(&seq(9, &[1, 3, 1]), &w).unwrap(),
            None
        );
        let plain = WeightSet::custom(m(9), &[1]).unwrap();
        let wit = has_zero_sum_consecutive(&seq(9, &[5, 4]), &plain)
            .unwrap()
            .unwrap();
        assert_eq!(wit.indices, vec![0, 1]);
        assert_eq!(wit.coefficients, vec![1, 1]);
        assert_eq!(
            has_zero_sum_consecutive(&seq(9, &[3, 3, 1, 3, 3, 1, 3, 3]), &w).unwrap(),
            None
        );
        // Order matters only in consecutive mode.
        let wit = has_zero_sum_subsequence(&seq(9, &[1, 3, 8]), &w)
            .unwrap()
            .unwrap();
        assert_eq!(wit.indices, vec![0, 2]);
        assert_eq!(
            has_zero_sum_consecutive(&seq(9, &[1, 3, 8]), &w)
                .unwrap()
                .unwrap()
                .indices,
            vec![0, 1, 2]
        );
    }

    #[test]
    fn zero_weight_is_a_legal_choice() {
        let w = WeightSet::custom(m(7), &[0, 3]).unwrap();
        let wit = has_zero_sum_subsequence(&seq(7, &[2, 5]), &w)
            .unwrap()
            .unwrap();
        assert_eq!(wit.len(), 1);
        assert!(verify_witness(&seq(7, &[2, 5]), &w, &wit, Mode::Subsequence).is_ok());
        let wit = has_zero_sum_consecutive(&seq(7, &[2, 5]), &w)
            .unwrap()
            .unwrap();
        assert_eq!(
            wit,
            Witness {
                indices: vec![0],
                coefficients: vec![0]
            }
        );
    }

    #[test]
    fn verify_rejections() {
        let w = s9();
        let s = seq(9, &[1, 8, 2]);
        let good = Witness {
            indices: vec![0, 1],
            coefficients: vec![1, 1],
        };
        assert_eq!(verify_witness(&s, &w, &good, Mode::Consecutive), Ok(()));
        let bad_coeff = Witness {
            indices: vec![0, 1],
            coefficients: vec![2, 1],
        };
        assert!(matches!(
            verify_witness(&s, &w, &bad_coeff, Mode::Subsequence),
            Err(WitnessDefect::CoefficientNotInWeights { coefficient: 2, .. })
        ));
        // 1*1 + 4*2 = 9: a zero-sum, but skipping index 1.
        let gap = Witness {
            indices: vec![0, 2],
            coefficients: vec![1, 4],
        };
        assert_eq!(verify_witness(&s, &w, &gap, Mode::Subsequence), Ok(()));
        assert_eq!(
            verify_witness(&s, &w, &gap, Mode::Consecutive),
            Err(WitnessDefect::NotContiguous)
        );
        let empty = Witness {
            indices: vec![],
            coefficients: vec![],
        };
        assert_eq!(
            verify_witness(&s, &w, &empty, Mode::Subsequence),
            Err(WitnessDefect::Empty)
        );
        let oob = Witness {
            indices: vec![5],
            coefficients: vec![1],
        };
        assert_eq!(
            verify_witness(&s, &w, &oob, Mode::Subsequence),
            Err(WitnessDefect::IndexOutOfRange(5))
        );
        let nonzero = Witness {
            indices: vec![0],
            coefficients: vec![1],
        };
        assert_eq!(
            verify_witness(&s, &w, &nonzero, Mode::Subsequence),
            Err(WitnessDefect::NonzeroSum(1))
        );
    }

    #[test]
    fn modulus_mismatch_is_an_error() {
        assert!(has_zero_sum_subsequence(&seq(8, &[1]), &s9()).is_err());
        assert!(WeightSet::custom(m(9), &[]).is_err());
    }
}
