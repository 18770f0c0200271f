//! Deciding whether two 2-cocycles differ by a coboundary.
//!
//! For each prime power `q || m` the unknown 1-cochain `beta` is fixed by its
//! values on the generators: `beta(1) = delta(1,1)` and
//! `beta(g s) = beta(g) + g.beta(s) - delta(g, s)` along a spanning tree. The
//! generator values are enumerated in lexicographic order, every Cayley edge
//! is checked, and the surviving candidates are glued by CRT and verified on
//! all pairs.

use num_integer::Integer;

use super::cochain::{pow_mod, TwistedCochain, TwistedModule};
use super::group::FiniteGroup;
use crate::error::{Error, Result};

/// Upper limit on `q^|S|` per prime power.
pub const MAX_CANDIDATES: u64 = 10_000_000;

/// `Some(beta)` with `w1 - w2 = d(beta)` on every pair, or `None` if no such
/// 1-cochain exists.
pub fn cohomologous(
    w1: &TwistedCochain,
    w2: &TwistedCochain,
    group: &FiniteGroup,
) -> Result<Option<TwistedCochain>> {
    if w1.arity() != 2 || w2.arity() != 2 {
        return Err(Error::invalid("cohomologous compares 2-cochains"));
    }
    let delta = w1.sub(w2)?;
    if delta.order() != group.order() {
        return Err(Error::invalid("cochains do not live on this group"));
    }
    let module = delta.module();
    let tree = group.spanning_tree();
    let mut beta = vec![0u64; group.order()];
    let mut glued_modulus = 1u64;
    for (p, k) in factorize(module.modulus) {
        let q = p.pow(k);
        let Some(part) = solve_prime_power(&delta, group, &tree, module, q)? else {
            return Ok(None);
        };
        for (b, v) in beta.iter_mut().zip(part) {
            *b = crt(*b, glued_modulus, v, q);
        }
        glued_modulus *= q;
    }
    let beta = TwistedCochain::from_values(
        TwistedModule::new(module.modulus, module.twist)?,
        1,
        group.order(),
        beta.into_iter().map(|v| v as u32).collect(),
    )?;
    if beta.coboundary(group)? != delta {
        return Err(Error::Internal("transport candidate failed the full check".into()));
    }
    Ok(Some(beta))
}

/// Checks a claimed witness on all pairs.
pub fn verify_transport(
    w1: &TwistedCochain,
    w2: &TwistedCochain,
    beta: &TwistedCochain,
    group: &FiniteGroup,
) -> Result<bool> {
    Ok(beta.coboundary(group)? == w1.sub(w2)?)
}

fn solve_prime_power(
    delta: &TwistedCochain,
    group: &FiniteGroup,
    tree: &[(usize, Option<(usize, usize)>)],
    module: TwistedModule,
    q: u64,
) -> Result<Option<Vec<u64>>> {
    let gens = group.generators();
    let space = (q as u128).checked_pow(gens.len() as u32).unwrap_or(u128::MAX);
    if space > MAX_CANDIDATES as u128 {
        return Err(Error::invalid(format!(
            "transport search space {q}^{} exceeds {MAX_CANDIDATES}",
            gens.len()
        )));
    }
    let n = group.order();
    let mult: Vec<u64> = (0..n).map(|g| pow_mod(group.chi(g), module.twist as u64, q)).collect();
    let d = |g: usize, h: usize| delta.at2(g, h) % q;
    let mut values = vec![0u64; gens.len()];
    let mut beta = vec![0u64; n];
    for _ in 0..space as u64 {
        beta[0] = d(0, 0);
        for &(h, link) in &tree[1..] {
            let (g, slot) = link.expect("non-root tree node has a parent");
            beta[h] = (beta[g] + mult[g] * values[slot] + q - d(g, gens[slot])) % q;
        }
        let consistent = (0..n).all(|g| {
            gens.iter().zip(&values).all(|(&s, &vs)| {
                beta[group.mul(g, s)] == (beta[g] + mult[g] * vs + q - d(g, s)) % q
            })
        });
        if consistent {
            return Ok(Some(beta));
        }
        // lexicographic successor, last generator fastest
        for v in values.iter_mut().rev() {
            *v += 1;
            if *v < q {
                break;
            }
            *v = 0;
        }
    }
    Ok(None)
}

pub(crate) fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut k = 0;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// `x = a mod m1`, `x = b mod m2` with coprime moduli.
fn crt(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    if m1 == 1 {
        return b % m2;
    }
    let e = (m1 as i128).extended_gcd(&(m2 as i128));
    debug_assert_eq!(e.gcd, 1);
    let m1_inv = e.x.rem_euclid(m2 as i128);
    let t = ((b as i128 - a as i128).rem_euclid(m2 as i128) * m1_inv).rem_euclid(m2 as i128);
    (a as i128 + m1 as i128 * t) as u64
}
