//! Explicit blocking sequences certifying the lower bounds.

use crate::arith::{
    component, crt_combine, factorize, is_perfect_square, is_prime, radical, Modulus, Residue,
};
use crate::engine::{self, Mode, Sequence, WeightSet};
use crate::error::{Error, Result};
use crate::sets;

/// Least `(u, v)` in `U(p) x U(p)` (lexicographically) such that `(u, v)` has
/// no `Q_p`-weighted zero-sum subsequence, returned as residues mod `p^r`.
///
/// Values below `p` are units mod `p^r` reducing to themselves, so they are
/// used directly as preimages.
pub fn find_non_qp_pair(p: u64, r: u32) -> Result<(Residue, Residue)> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain(format!("expected an odd prime, got {p}")));
    }
    if r == 0 {
        return Err(Error::Domain("exponent must be at least 1".into()));
    }
    let qp = WeightSet::q_p(p)?;
    let zp = Modulus::new(p)?;
    let target = Modulus::new(crate::arith::checked_pow(p, r)?)?;
    for u in 1..p {
        for v in 1..p {
            let pair = Sequence::new(zp, vec![u, v])?;
            if engine::is_blocking(&pair, &qp, Mode::Subsequence)? {
                return Ok((Residue::new(u, target)?, Residue::new(v, target)?));
            }
        }
    }
    unreachable!("every odd prime admits a pair without a Q_p-weighted zero-sum")
}

/// Combines one value per prime-power factor of `n` into a residue mod `n`.
fn lift(n: Modulus, mut part: impl FnMut(u64, u32, u64) -> Result<u64>) -> Result<u64> {
    let fact = factorize(n.get())?;
    let parts = fact
        .factors()
        .iter()
        .map(|&(p, r)| {
            let q = p.pow(r);
            Residue::new(part(p, r, q)? % q, Modulus::new(q)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(crt_combine(&parts, n)?.value())
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

/// `(u, v)` in `U(n)`, odd `n`, whose image mod every prime `p | n` has no
/// `Q_p`-weighted zero-sum subsequence. Blocks `S(n)*` with length 2.
pub fn construct_nonsquare_odd_witness(n: u64) -> Result<Sequence> {
    require(n >= 3 && n % 2 == 1, || {
        format!("expected odd n >= 3, got {n}")
    })?;
    let m = Modulus::new(n)?;
    let u = lift(m, |p, r, _| Ok(find_non_qp_pair(p, r)?.0.value()))?;
    let v = lift(m, |p, r, _| Ok(find_non_qp_pair(p, r)?.1.value()))?;
    Sequence::new(m, vec![u, v])
}

/// `(v_1, v_2)` for `v_2(n) >= 2` even: the `2`-part is `(1, 1)` and every odd
/// prime contributes its non-`Q_p` pair.
pub fn construct_even_v2_pair_witness(n: u64) -> Result<Sequence> {
    let v2 = crate::arith::v_p(n, 2)?;
    require(v2 >= 2 && v2 % 2 == 0, || {
        format!("expected v_2({n}) even and at least 2")
    })?;
    let m = Modulus::new(n)?;
    let pick = |first: bool| {
        lift(m, |p, r, _| {
            if p == 2 {
                return Ok(1);
            }
            let (u, v) = find_non_qp_pair(p, r)?;
            Ok(if first { u.value() } else { v.value() })
        })
    };
    Sequence::new(m, vec![pick(true)?, pick(false)?])
}

/// Three terms with image `(1, 1, 1)` mod `4` and `(u_p, v_p, p)` mod `p^2`
/// for each odd prime `p | n`. Blocks `S(n)*` for even squares `n`.
pub fn construct_even_square_witness(n: u64) -> Result<Sequence> {
    require(n.is_multiple_of(2) && is_perfect_square(n), || {
        format!("{n} is not an even square")
    })?;
    let m = Modulus::new(n)?;
    let mut terms = Vec::with_capacity(3);
    for slot in 0..3 {
        terms.push(lift(m, |p, r, _| {
            if p == 2 {
                return Ok(1);
            }
            let (u, v) = find_non_qp_pair(p, r)?;
            Ok([u.value(), v.value(), p][slot])
        })?);
    }
    Sequence::new(m, terms)
}

/// `(u, v, m u, m v)` with `m` the radical of `n` and `(u, v)` from
/// [`construct_nonsquare_odd_witness`]. Blocks `S(n)*` for odd squares `n`.
pub fn construct_odd_square_d_witness(n: u64) -> Result<Sequence> {
    require(n % 2 == 1 && n >= 9 && is_perfect_square(n), || {
        format!("{n} is not an odd square >= 9")
    })?;
    let modulus = Modulus::new(n)?;
    let pair = construct_nonsquare_odd_witness(n)?;
    let (u, v) = (pair.terms()[0], pair.terms()[1]);
    let rad = radical(n)?;
    Sequence::new(
        modulus,
        vec![u, v, modulus.mul(rad, u), modulus.mul(rad, v)],
    )
}

/// `(x, y, u, x, y, v, x, y)` for `n = m^2`, `m` odd and squarefree, where
/// `x ≡ p u` and `y ≡ p v` mod `p^2` for each `p | m`. Blocks `S(n)*` in
/// consecutive mode.
pub fn construct_consecutive_witness(n: u64) -> Result<Sequence> {
    let fact = factorize(n)?;
    require(
        n % 2 == 1 && fact.factors().iter().all(|&(_, r)| r == 2),
        || format!("{n} is not the square of an odd squarefree number"),
    )?;
    let modulus = Modulus::new(n)?;
    let pair = construct_nonsquare_odd_witness(n)?;
    let (u, v) = (pair.terms()[0], pair.terms()[1]);
    let x = lift(modulus, |p, _, q| Ok(p * (u % q)))?;
    let y = lift(modulus, |p, _, q| Ok(p * (v % q)))?;
    Sequence::new(modulus, vec![x, y, u, x, y, v, x, y])
}

/// Lifts weights `b_i in S(p^r)*` witnessing a zero-sum of the `p`-component
/// of `seq` to weights `a_i in S(n)*` witnessing a zero-sum of `seq` itself:
/// `a_i ≡ b_i` mod `p^r` and `a_i ≡ 0` mod every other prime-power factor.
pub fn crt_weight_lift(seq: &Sequence, p: u64, component_weights: &[u64]) -> Result<Vec<u64>> {
    let n = seq.modulus();
    let fact = factorize(n.get())?;
    let r = fact.exponent_of(p);
    require(is_prime(p) && r > 0, || {
        format!("{p} is not a prime divisor of {n}")
    })?;
    require(component_weights.len() == seq.len(), || {
        format!(
            "{} weights for a sequence of length {}",
            component_weights.len(),
            seq.len()
        )
    })?;
    let q = Modulus::new(p.pow(r))?;
    let local = sets::nonzero_squares(q)?;
    if let Some(&b) = component_weights.iter().find(|&&b| !local.contains(b)) {
        return Err(Error::Domain(format!(
            "{b} is not a nonzero square mod {q}"
        )));
    }
    let mut sum = 0;
    for (i, &b) in component_weights.iter().enumerate() {
        sum = q.add(sum, q.mul(b, component(seq.term(i), p)?.value()));
    }
    require(sum == 0, || {
        format!("weights do not give a zero-sum mod {q} (sum {sum})")
    })?;
    component_weights
        .iter()
        .map(|&b| lift(n, |pi, _, _| Ok(if pi == p { b } else { 0 })))
        .collect()
}
