//! Residue sets over `Z_n`: units, squares and their closed-form sizes.

use serde::{Serialize, Serializer};

use crate::arith::{checked_pow, euler_phi, factorize, gcd, is_prime, Modulus};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Largest modulus for which sets are enumerated. Size-only operations have
/// no such limit.
pub const MAX_ENUMERABLE: u64 = 1 << 31;

/// A subset of `Z_n`, stored as a bit vector of length `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: Modulus,
    bits: BitSet,
}

fn check_enumerable(m: Modulus) -> Result<()> {
    if m.get() > MAX_ENUMERABLE {
        return Err(Error::TooLarge {
            n: m.get(),
            limit: MAX_ENUMERABLE,
        });
    }
    Ok(())
}

impl ResidueSet {
    pub fn empty(modulus: Modulus) -> Result<Self> {
        check_enumerable(modulus)?;
        Ok(ResidueSet {
            modulus,
            bits: BitSet::new(modulus.get() as usize),
        })
    }

    pub fn full(modulus: Modulus) -> Result<Self> {
        check_enumerable(modulus)?;
        Ok(ResidueSet {
            modulus,
            bits: BitSet::full(modulus.get() as usize),
        })
    }

    /// Builds a set from values that must already lie in `[0, n)`.
    pub fn from_values(modulus: Modulus, values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut s = ResidueSet::empty(modulus)?;
        for v in values {
            if v >= modulus.get() {
                return Err(Error::OutOfRange {
                    value: v,
                    modulus: modulus.get(),
                });
            }
            s.bits.insert(v as usize);
        }
        Ok(s)
    }

    pub(crate) fn from_bits(modulus: Modulus, bits: BitSet) -> Self {
        debug_assert_eq!(bits.len() as u64, modulus.get());
        ResidueSet { modulus, bits }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.modulus.get() && self.bits.contains(x as usize)
    }

    pub fn insert(&mut self, x: u64) -> Result<()> {
        if x >= self.modulus.get() {
            return Err(Error::OutOfRange {
                value: x,
                modulus: self.modulus.get(),
            });
        }
        self.bits.insert(x as usize);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().map(|i| i as u64)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn is_disjoint(&self, other: &ResidueSet) -> bool {
        !self.bits.intersects(&other.bits)
    }

    pub fn union(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.same_modulus(other)?;
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        Ok(out)
    }

    /// `{ c * x : x in self }`.
    pub fn scaled(&self, c: u64) -> ResidueSet {
        let m = self.modulus;
        let mut out = BitSet::new(m.get() as usize);
        for x in self.iter() {
            out.insert(m.mul(c, x) as usize);
        }
        ResidueSet::from_bits(m, out)
    }

    /// Image under the natural map `Z_n -> Z_m`.
    pub fn image(&self, m: u64) -> Result<ResidueSet> {
        let target = Modulus::new(m)?;
        if !self.modulus.get().is_multiple_of(m) {
            return Err(Error::NotDivisor {
                n: self.modulus.get(),
                divisor: m,
            });
        }
        ResidueSet::from_values(target, self.iter().map(|x| x % m))
    }

    fn same_modulus(&self, other: &ResidueSet) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus.get(),
                found: other.modulus.get(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} mod {}", self.to_vec(), self.modulus)
    }
}

/// Serialized as the ascending list of members.
impl Serialize for ResidueSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

pub fn units(n: Modulus) -> Result<ResidueSet> {
    let mut s = ResidueSet::empty(n)?;
    for x in 1..n.get() {
        if gcd(x, n.get()) == 1 {
            s.bits.insert(x as usize);
        }
    }
    Ok(s)
}

/// `S(n) = { x^2 : x in Z_n }`.
pub fn squares(n: Modulus) -> Result<ResidueSet> {
    let mut s = ResidueSet::empty(n)?;
    for x in 0..n.get() {
        s.bits.insert(n.mul(x, x) as usize);
    }
    Ok(s)
}

/// `S(n)* = S(n) \ {0}`.
pub fn nonzero_squares(n: Modulus) -> Result<ResidueSet> {
    let mut s = squares(n)?;
    s.bits.remove(0);
    Ok(s)
}

/// `U(n)^2 = { x^2 : x in U(n) }`.
pub fn unit_squares(n: Modulus) -> Result<ResidueSet> {
    let mut s = ResidueSet::empty(n)?;
    for x in 1..n.get() {
        if gcd(x, n.get()) == 1 {
            s.bits.insert(n.mul(x, x) as usize);
        }
    }
    Ok(s)
}

/// Quadratic residues `Q_p = U(p)^2` for an odd prime `p`.
pub fn q_p(p: u64) -> Result<ResidueSet> {
    if p == 2 {
        return Err(Error::Domain("Q_p requires an odd prime, got 2".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    unit_squares(Modulus::new(p)?)
}

fn check_prime_power(p: u64, r: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::Domain("exponent must be at least 1".into()));
    }
    checked_pow(p, r).map(|_| ())
}

/// `|U(p^r)^2|`: `p^{r-1}(p-1)/2` for odd `p`; `1` for `2` and `4`; `2^{r-3}` for `2^r`, `r >= 3`.
pub fn size_unit_squares_prime_power(p: u64, r: u32) -> Result<u64> {
    check_prime_power(p, r)?;
    Ok(match (p, r) {
        (2, 1 | 2) => 1,
        (2, r) => 1 << (r - 3),
        (p, r) => p.pow(r - 1) * (p - 1) / 2,
    })
}

/// `|S(p^r)^*| = sum_{k=0}^{floor((r-1)/2)} |U(p^{r-2k})^2|`.
pub fn size_nonzero_squares_prime_power(p: u64, r: u32) -> Result<u64> {
    check_prime_power(p, r)?;
    (0..=(r - 1) / 2)
        .map(|k| size_unit_squares_prime_power(p, r - 2 * k))
        .sum()
}

/// `|S(n)|` as the product of `|S(p_i^{r_i})|` over the prime-power factors.
pub fn size_squares(n: Modulus) -> Result<u64> {
    factorize(n.get())?
        .factors()
        .iter()
        .map(|&(p, r)| size_nonzero_squares_prime_power(p, r).map(|s| s + 1))
        .product()
}

pub fn size_nonzero_squares(n: Modulus) -> Result<u64> {
    Ok(size_squares(n)? - 1)
}

/// `|U(n)^2|` as the product of the prime-power sizes.
pub fn size_unit_squares(n: Modulus) -> Result<u64> {
    factorize(n.get())?
        .factors()
        .iter()
        .map(|&(p, r)| size_unit_squares_prime_power(p, r))
        .product()
}

pub fn size_units(n: Modulus) -> Result<u64> {
    euler_phi(n.get())
}
