//! Integer and residue arithmetic over `Z_n`: factorization, valuations,
//! natural maps between residue rings and CRT decomposition.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A modulus `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::ModulusTooSmall(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduces an arbitrary integer into `[0, n)`.
    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        let a = a % self.0;
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn residue(self, value: u64) -> Result<Residue> {
        Residue::new(value, self)
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(n: u64) -> Result<Self> {
        Modulus::new(n)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Result<Self> {
        if value >= modulus.get() {
            return Err(Error::OutOfRange {
                value,
                modulus: modulus.get(),
            });
        }
        Ok(Residue { value, modulus })
    }

    /// Builds a residue from any integer by reducing it.
    pub fn reduced(value: u64, modulus: Modulus) -> Self {
        Residue {
            value: modulus.reduce(value),
            modulus,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value, self.modulus.get()) == 1
    }

    fn same_modulus(self, other: Residue) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus.get(),
                found: other.modulus.get(),
            });
        }
        Ok(())
    }

    pub fn checked_add(self, other: Residue) -> Result<Residue> {
        self.same_modulus(other)?;
        Ok(Residue {
            value: self.modulus.add(self.value, other.value),
            modulus: self.modulus,
        })
    }

    pub fn checked_mul(self, other: Residue) -> Result<Residue> {
        self.same_modulus(other)?;
        Ok(Residue {
            value: self.modulus.mul(self.value, other.value),
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// Prime factorization `n = p_1^{r_1} ... p_k^{r_k}` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// The prime-power components `p_i^{r_i}`.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, r)| p.pow(r))
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, r)| r)
    }

    pub fn product(&self) -> u64 {
        self.prime_powers().product()
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::ModulusTooSmall(n));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |m: &mut u64, p: u64| {
        let mut r = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            r += 1;
        }
        if r > 0 {
            factors.push((p, r));
        }
    };
    push(&mut m, 2);
    push(&mut m, 3);
    let mut d = 5u64;
    while d.saturating_mul(d) <= m {
        push(&mut m, d);
        push(&mut m, d + 2);
        d += 6;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(Factorization { factors })
}

/// The exponent of the prime `p` in `n`.
pub fn v_p(n: u64, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::Domain("v_p is undefined at 0".into()));
    }
    let mut n = n;
    let mut r = 0;
    while n.is_multiple_of(p) {
        n /= p;
        r += 1;
    }
    Ok(r)
}

pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> Result<u64> {
    Ok(factorize(n)?.primes().product())
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?
        .factors()
        .iter()
        .map(|&(p, r)| p.pow(r - 1) * (p - 1))
        .product())
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// The natural map `f_{n,m}: Z_n -> Z_m` for `m | n`.
pub fn natural_map(x: Residue, m: u64) -> Result<Residue> {
    let n = x.modulus().get();
    let target = Modulus::new(m)?;
    if !n.is_multiple_of(m) {
        return Err(Error::NotDivisor { n, divisor: m });
    }
    Ok(Residue::reduced(x.value(), target))
}

/// `x^{(p)}`: the image of `x` in `Z_{p^{v_p(n)}}`.
pub fn component(x: Residue, p: u64) -> Result<Residue> {
    let n = x.modulus().get();
    let r = v_p(n, p)?;
    if r == 0 {
        return Err(Error::NotDivisor { n, divisor: p });
    }
    natural_map(x, p.pow(r))
}

/// Splits `x` into its prime-power components, ordered by prime.
pub fn split(x: Residue) -> Result<Vec<Residue>> {
    factorize(x.modulus().get())?
        .prime_powers()
        .map(|q| natural_map(x, q))
        .collect()
}

/// Inverse of the CRT isomorphism `Z_n -> Z_{p_1^{r_1}} x ... x Z_{p_k^{r_k}}`.
///
/// `parts` must contain exactly one residue per prime-power factor of `n`, in
/// any order.
pub fn crt_combine(parts: &[Residue], target: Modulus) -> Result<Residue> {
    let n = target.get();
    let fact = factorize(n)?;
    if parts.len() != fact.factors().len() {
        return Err(Error::Domain(format!(
            "expected {} components for modulus {n}, got {}",
            fact.factors().len(),
            parts.len()
        )));
    }
    let mut acc: u128 = 0;
    for q in fact.prime_powers() {
        let mut matching = parts.iter().filter(|r| r.modulus().get() == q);
        let part = matching.next().ok_or_else(|| {
            Error::Domain(format!("missing component modulo {q} for modulus {n}"))
        })?;
        if matching.next().is_some() {
            return Err(Error::Domain(format!("component modulo {q} given twice")));
        }
        let cofactor = n / q;
        let inv = mod_inverse(cofactor % q, q).expect("prime-power cofactors are coprime");
        let basis = (cofactor as u128 * inv as u128) % n as u128;
        acc = (acc + basis * part.value() as u128) % n as u128;
    }
    Ok(Residue::reduced(acc as u64, target))
}

/// Writes a nonzero `x` in `Z_{p^r}` as `p^k * u` with `u` a unit and `k in [0, r-1]`.
///
/// The unit returned is the canonical representative `x / p^k`.
pub fn unit_power_decomposition(x: Residue) -> Result<(u32, Residue)> {
    let n = x.modulus().get();
    let fact = factorize(n)?;
    if !fact.is_prime_power() {
        return Err(Error::Domain(format!("{n} is not a prime power")));
    }
    if x.is_zero() {
        return Err(Error::Domain("zero has no unit-power decomposition".into()));
    }
    let (p, _) = fact.factors()[0];
    let mut k = 0;
    let mut u = x.value();
    while u.is_multiple_of(p) {
        u /= p;
        k += 1;
    }
    Ok((k, Residue::reduced(u, x.modulus())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(v: u64, n: u64) -> Residue {
        Residue::new(v, Modulus::new(n).unwrap()).unwrap()
    }

    #[test]
    fn modulus_rejects_small() {
        assert_eq!(Modulus::new(1), Err(Error::ModulusTooSmall(1)));
        assert_eq!(Modulus::new(0), Err(Error::ModulusTooSmall(0)));
        assert!(Modulus::new(2).is_ok());
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(9).unwrap().factors(), &[(3, 2)]);
        assert_eq!(factorize(2401).unwrap().factors(), &[(7, 4)]);
        assert_eq!(factorize(2).unwrap().factors(), &[(2, 1)]);
        assert!(factorize(1).is_err());
        for n in 2..3000 {
            let f = factorize(n).unwrap();
            assert_eq!(f.product(), n);
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.primes().all(is_prime));
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(v_p(12, 2), Ok(2));
        assert_eq!(v_p(12, 5), Ok(0));
        assert_eq!(v_p(2401, 7), Ok(4));
        assert_eq!(v_p(12, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn natural_map_examples() {
        assert_eq!(natural_map(res(7, 12), 4).unwrap(), res(3, 4));
        assert_eq!(natural_map(res(10, 12), 4).unwrap(), res(2, 4));
        assert_eq!(natural_map(res(10, 12), 12).unwrap(), res(10, 12));
        assert!(matches!(
            natural_map(res(10, 12), 5),
            Err(Error::NotDivisor { .. })
        ));
        assert_eq!(natural_map(res(10, 12), 1), Err(Error::ModulusTooSmall(1)));
    }

    #[test]
    fn component_examples() {
        assert_eq!(component(res(10, 12), 3).unwrap(), res(1, 3));
        assert_eq!(component(res(10, 12), 2).unwrap(), res(2, 4));
        assert_eq!(component(res(0, 360), 5).unwrap(), res(0, 5));
        assert!(component(res(10, 12), 5).is_err());
    }

    #[test]
    fn crt_examples() {
        let n = Modulus::new(12).unwrap();
        assert_eq!(crt_combine(&[res(1, 4), res(1, 3)], n).unwrap().value(), 1);
        assert_eq!(crt_combine(&[res(2, 4), res(0, 3)], n).unwrap().value(), 6);
        assert_eq!(crt_combine(&[res(0, 3), res(2, 4)], n).unwrap().value(), 6);
        assert_eq!(crt_combine(&[res(0, 4), res(0, 3)], n).unwrap().value(), 0);
        assert!(crt_combine(&[res(0, 2), res(0, 3)], n).is_err());
        assert!(crt_combine(&[res(0, 4)], n).is_err());
        assert!(crt_combine(&[res(0, 4), res(1, 4)], n).is_err());
    }

    #[test]
    fn unit_power_examples() {
        assert_eq!(
            unit_power_decomposition(res(18, 27)).unwrap(),
            (2, res(2, 27))
        );
        assert_eq!(
            unit_power_decomposition(res(5, 27)).unwrap(),
            (0, res(5, 27))
        );
        assert_eq!(unit_power_decomposition(res(3, 9)).unwrap(), (1, res(1, 9)));
        assert!(unit_power_decomposition(res(0, 9)).is_err());
        assert!(unit_power_decomposition(res(5, 12)).is_err());
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(9), Ok(3));
        assert_eq!(radical(225), Ok(15));
        assert_eq!(radical(30), Ok(30));
    }

    #[test]
    fn inverse_and_squares() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
        assert!(is_perfect_square(2401));
        assert!(!is_perfect_square(2400));
        assert_eq!(euler_phi(36), Ok(12));
    }
}
