//! Quadratic arithmetic over Q: Legendre and local Hilbert symbols, square
//! classes, cup-product vectors and pairing witnesses, plus explicit
//! cyclotomic models of `sqrt(-1)` and `sqrt(2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

fn pow_mod(b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    let mut b = b % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Quadratic residue symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i128, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    let r = a.rem_euclid(p as i128) as u128;
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p as u128 - 1) / 2, p as u128) == 1 { 1 } else { -1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not a prime")));
        }
        Ok(Place::Prime(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Place::Infinity),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::invalid(format!("bad place {t:?}")))?;
                Place::prime(p)
            }
        }
    }
}

impl From<Place> for String {
    fn from(p: Place) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Place {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Integer in the same square class as `q`.
fn square_class_integer(q: Rational64) -> Result<i128> {
    if *q.numer() == 0 {
        return Err(Error::invalid("Hilbert symbols need nonzero arguments"));
    }
    Ok(*q.numer() as i128 * *q.denom() as i128)
}

fn split_valuation(mut a: i128, p: u64) -> (u32, i128) {
    let p = p as i128;
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    (v, a)
}

/// `(a, b)_v`.
pub fn hilbert_local(a: Rational64, b: Rational64, place: Place) -> Result<i8> {
    let a = square_class_integer(a)?;
    let b = square_class_integer(b)?;
    hilbert_integers(a, b, place)
}

pub(crate) fn hilbert_integers(a: i128, b: i128, place: Place) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::invalid("Hilbert symbols need nonzero arguments"));
    }
    match place {
        Place::Infinity => Ok(if a < 0 && b < 0 { -1 } else { 1 }),
        Place::Prime(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, v) = split_valuation(b, 2);
            let eps = |t: i128| ((t.rem_euclid(4) - 1) / 2) as u32;
            let omega = |t: i128| {
                let r = t.rem_euclid(8);
                ((r * r - 1) / 8 % 2) as u32
            };
            let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(p) => {
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not a prime")));
            }
            let (alpha, u) = split_valuation(a, p);
            let (beta, v) = split_valuation(b, p);
            let mut s: i8 = if (alpha * beta) % 2 == 1 && (p % 4 == 3) { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre(u, p)?;
            }
            if alpha % 2 == 1 {
                s *= legendre(v, p)?;
            }
            Ok(s)
        }
    }
}

/// Element of `Q^* / (Q^*)^2`: a sign and a squarefree radical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SquareClass {
    pub sign: i8,
    pub radical: u64,
}

impl SquareClass {
    pub const ONE: SquareClass = SquareClass { sign: 1, radical: 1 };

    pub fn of_integer(a: i128) -> Result<Self> {
        if a == 0 {
            return Err(Error::invalid("0 has no square class"));
        }
        let mut m = a.unsigned_abs();
        let mut radical: u128 = 1;
        let mut p = 2u128;
        while p * p <= m {
            let mut k = 0;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            if k % 2 == 1 {
                radical *= p;
            }
            p += 1;
        }
        radical *= m;
        let radical = u64::try_from(radical).map_err(|_| Error::invalid("radical too large"))?;
        Ok(SquareClass { sign: if a < 0 { -1 } else { 1 }, radical })
    }

    pub fn of_rational(q: Rational64) -> Result<Self> {
        Self::of_integer(square_class_integer(q)?)
    }

    /// Builds from sign and radical, checking squarefreeness.
    pub fn new(sign: i8, radical: u64) -> Result<Self> {
        let c = Self::of_integer(radical as i128)?;
        if c.radical != radical || !(sign == 1 || sign == -1) {
            return Err(Error::invalid(format!("({sign}, {radical}) is not a canonical square class")));
        }
        Ok(SquareClass { sign, radical })
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::ONE
    }

    pub fn value(&self) -> i128 {
        self.sign as i128 * self.radical as i128
    }

    pub fn mul(&self, other: &Self) -> Self {
        let g = num_integer::gcd(self.radical, other.radical);
        SquareClass {
            sign: self.sign * other.sign,
            radical: (self.radical / g) * (other.radical / g),
        }
    }

    pub fn prime_factors(&self) -> Vec<u64> {
        let mut m = self.radical;
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                out.push(p);
                m /= p;
            }
            p += 1;
        }
        if m > 1 {
            out.push(m);
        }
        out
    }

    /// Every canonical class with radical at most `bound`, trivial first.
    pub fn enumerate(bound: u64) -> Vec<SquareClass> {
        let mut out = Vec::new();
        for r in 1..=bound {
            if let Ok(c) = SquareClass::new(1, r) {
                out.push(c);
                out.push(SquareClass { sign: -1, ..c });
            }
        }
        out
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Local symbols of a cup product at the relevant places.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerVector {
    pub symbols: BTreeMap<Place, i8>,
}

impl BrauerVector {
    pub fn is_zero(&self) -> bool {
        self.symbols.values().all(|&s| s == 1)
    }

    /// Places carrying `-1`.
    pub fn support(&self) -> Vec<Place> {
        self.symbols.iter().filter(|(_, &s)| s == -1).map(|(&p, _)| p).collect()
    }

    pub fn product(&self) -> i8 {
        self.symbols.values().product()
    }
}

/// Places where `(u, w)_v` can be nontrivial: `inf`, `2` and the primes of
/// both radicals.
pub fn relevant_places(u: &SquareClass, w: &SquareClass) -> Vec<Place> {
    let mut primes: Vec<u64> = u.prime_factors();
    primes.extend(w.prime_factors());
    primes.push(2);
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![Place::Infinity];
    out.extend(primes.into_iter().map(Place::Prime));
    out
}

pub fn cup_pairing(u: &SquareClass, w: &SquareClass) -> Result<BrauerVector> {
    let mut symbols = BTreeMap::new();
    for place in relevant_places(u, w) {
        symbols.insert(place, hilbert_integers(u.value(), w.value(), place)?);
    }
    let v = BrauerVector { symbols };
    if v.product() != 1 {
        return Err(Error::Internal(format!("product formula fails for ({u}, {w})")));
    }
    Ok(v)
}

/// Result of a witness search for a class `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessSearch {
    /// `u` is the trivial class: nothing can pair nontrivially with it.
    TrivialClass,
    Found { partner: SquareClass, place: Place },
    NotFound { bound: u64 },
}

/// Candidate partners in search order: `-1`, then `p`, `-p` for primes
/// `p <= bound` ascending.
pub fn search_set(bound: u64) -> Vec<SquareClass> {
    let mut out = vec![SquareClass { sign: -1, radical: 1 }];
    for p in primes_up_to(bound) {
        out.push(SquareClass { sign: 1, radical: p });
        out.push(SquareClass { sign: -1, radical: p });
    }
    out
}

/// Preferred place among those carrying `-1`: `inf`, then odd primes
/// ascending, then `2`.
pub fn preferred_place(v: &BrauerVector) -> Option<Place> {
    let support = v.support();
    support
        .iter()
        .copied()
        .find(|p| *p != Place::Prime(2))
        .or_else(|| support.first().copied())
}

pub fn nondegeneracy_witness(u: &SquareClass, bound: u64) -> Result<WitnessSearch> {
    if u.is_trivial() {
        return Ok(WitnessSearch::TrivialClass);
    }
    for w in search_set(bound) {
        let v = cup_pairing(u, &w)?;
        if let Some(place) = preferred_place(&v) {
            return Ok(WitnessSearch::Found { partner: w, place });
        }
    }
    Ok(WitnessSearch::NotFound { bound })
}

/// Element of `Q(zeta_{2^k})` in the power basis, `zeta^(2^(k-1)) = -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPowerCyclotomic {
    order: u64,
    coefficients: Vec<i64>,
}

impl TwoPowerCyclotomic {
    pub fn zero(order: u64) -> Result<Self> {
        if order < 4 || !order.is_power_of_two() {
            return Err(Error::invalid("cyclotomic order must be a power of two >= 4"));
        }
        Ok(TwoPowerCyclotomic { order, coefficients: vec![0; order as usize / 2] })
    }

    pub fn root_power(order: u64, k: u64) -> Result<Self> {
        let mut z = Self::zero(order)?;
        z.add_root(k, 1);
        Ok(z)
    }

    fn add_root(&mut self, k: u64, coefficient: i64) {
        let half = self.order / 2;
        let k = k % self.order;
        if k < half {
            self.coefficients[k as usize] += coefficient;
        } else {
            self.coefficients[(k - half) as usize] -= coefficient;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect();
        TwoPowerCyclotomic { order: self.order, coefficients }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = TwoPowerCyclotomic { order: self.order, coefficients: vec![0; self.coefficients.len()] };
        for (i, &a) in self.coefficients.iter().enumerate() {
            for (j, &b) in other.coefficients.iter().enumerate() {
                out.add_root((i + j) as u64, a * b);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        TwoPowerCyclotomic { order: self.order, coefficients: self.coefficients.iter().map(|a| -a).collect() }
    }

    pub fn rational(order: u64, q: i64) -> Result<Self> {
        let mut z = Self::zero(order)?;
        z.coefficients[0] = q;
        Ok(z)
    }

    /// `zeta -> zeta^g` for odd `g`.
    pub fn galois(&self, g: u64) -> Self {
        let mut out = TwoPowerCyclotomic { order: self.order, coefficients: vec![0; self.coefficients.len()] };
        for (i, &a) in self.coefficients.iter().enumerate() {
            out.add_root(i as u64 * (g % self.order), a);
        }
        out
    }
}

/// `sqrt(-1) = zeta_4`.
pub fn sqrt_minus_one() -> TwoPowerCyclotomic {
    TwoPowerCyclotomic::root_power(4, 1).expect("valid order")
}

/// `sqrt(2) = zeta_8 + zeta_8^7`.
pub fn sqrt_two() -> TwoPowerCyclotomic {
    TwoPowerCyclotomic::root_power(8, 1).expect("valid order").add(&TwoPowerCyclotomic::root_power(8, 7).expect("valid order"))
}

/// Mod-2 Kummer value of `g` on a square root: 0 if fixed, 1 if negated.
pub fn kummer_bit(root: &TwoPowerCyclotomic, g: u64) -> Result<u8> {
    if g.is_multiple_of(2) {
        return Err(Error::invalid("Galois element must be odd"));
    }
    let image = root.galois(g);
    if image == *root {
        Ok(0)
    } else if image == root.neg() {
        Ok(1)
    } else {
        Err(Error::Internal("image is not a square root of the same element".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(2, 3).unwrap(), -1);
        assert_eq!(legendre(14, 7).unwrap(), 0);
        assert!(legendre(2, 9).is_err());
        assert!(legendre(3, 2).is_err());
    }

    #[test]
    fn hilbert_examples() {
        for place in [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            assert_eq!(hilbert_local(r(1), r(-7), place).unwrap(), 1);
        }
        assert_eq!(hilbert_local(r(-1), r(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_local(r(-1), r(-1), Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_local(r(2), r(3), Place::Prime(3)).unwrap(), -1);
        assert_eq!(hilbert_local(r(2), r(3), Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_local(Rational64::new(2, 9), Rational64::new(3, 4), Place::Prime(3)).unwrap(), -1);
        assert!(hilbert_local(r(0), r(3), Place::Prime(3)).is_err());
        assert!("4".parse::<Place>().is_err());
    }

    #[test]
    fn square_classes() {
        assert_eq!(SquareClass::of_integer(72).unwrap(), SquareClass { sign: 1, radical: 2 });
        assert_eq!(SquareClass::of_integer(-45).unwrap(), SquareClass { sign: -1, radical: 5 });
        assert_eq!(SquareClass::of_rational(Rational64::new(3, 12)).unwrap(), SquareClass::ONE);
        let six = SquareClass::of_integer(6).unwrap();
        assert_eq!(six.mul(&SquareClass::of_integer(-10).unwrap()).value(), -15);
        assert!(SquareClass::new(1, 12).is_err());
    }

    #[test]
    fn cup_pairing_examples() {
        let two = SquareClass::of_integer(2).unwrap();
        let three = SquareClass::of_integer(3).unwrap();
        assert!(cup_pairing(&SquareClass::ONE, &three).unwrap().is_zero());
        assert!(cup_pairing(&two, &two).unwrap().is_zero());
        let v = cup_pairing(&two, &three).unwrap();
        assert_eq!(v.support(), vec![Place::Prime(2), Place::Prime(3)]);
        assert_eq!(preferred_place(&v), Some(Place::Prime(3)));
    }

    #[test]
    fn witnesses() {
        assert_eq!(nondegeneracy_witness(&SquareClass::ONE, 100).unwrap(), WitnessSearch::TrivialClass);
        let two = SquareClass::of_integer(2).unwrap();
        assert_eq!(
            nondegeneracy_witness(&two, 100).unwrap(),
            WitnessSearch::Found { partner: SquareClass::of_integer(3).unwrap(), place: Place::Prime(3) }
        );
        let minus_one = SquareClass::of_integer(-1).unwrap();
        assert_eq!(
            nondegeneracy_witness(&minus_one, 100).unwrap(),
            WitnessSearch::Found { partner: minus_one, place: Place::Infinity }
        );
        assert_eq!(nondegeneracy_witness(&two, 2).unwrap(), WitnessSearch::NotFound { bound: 2 });
    }

    #[test]
    fn cyclotomic_square_roots() {
        let i = sqrt_minus_one();
        assert_eq!(i.mul(&i), TwoPowerCyclotomic::rational(4, -1).unwrap());
        let s = sqrt_two();
        assert_eq!(s.mul(&s), TwoPowerCyclotomic::rational(8, 2).unwrap());
        assert_eq!(kummer_bit(&i, 5).unwrap(), 0);
        assert_eq!(kummer_bit(&i, 7).unwrap(), 1);
        assert_eq!(kummer_bit(&s, 7).unwrap(), 0);
        assert_eq!(kummer_bit(&s, 3).unwrap(), 1);
        assert!(kummer_bit(&s, 2).is_err());
    }

    #[test]
    fn place_serde_roundtrip() {
        let json = serde_json::to_string(&vec![Place::Infinity, Place::Prime(3)]).unwrap();
        assert_eq!(json, r#"["inf","3"]"#);
        let back: Vec<Place> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Place::Infinity, Place::Prime(3)]);
    }
}
