//! Magnus embedding `x -> 1 + X`, `y -> 1 + Y` into noncommutative power
//! series truncated above degree 3.
//!
//! This is an independent model of the class-3 free nilpotent group: its
//! multiplication is plain series multiplication, with no knowledge of the
//! collection formulas in [`crate::nilpotent`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::nilpotent::{Class, NilpotentElement};

/// Maximum monomial degree kept.
pub const MAX_DEGREE: usize = 3;
/// Monomials of degree 0..=3 in two letters: 1 + 2 + 4 + 8.
pub const MONOMIALS: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Letter {
    X,
    Y,
}

/// Index of a monomial: degree `k` monomials occupy `2^k - 1 .. 2^(k+1) - 1`,
/// ordered as binary numbers with `X = 0`, `Y = 1`.
pub fn monomial_index(word: &[Letter]) -> Option<usize> {
    if word.len() > MAX_DEGREE {
        return None;
    }
    let bits = word
        .iter()
        .fold(0usize, |acc, l| (acc << 1) | matches!(l, Letter::Y) as usize);
    Some((1 << word.len()) - 1 + bits)
}

fn index_degree(i: usize) -> usize {
    (usize::BITS - (i + 1).leading_zeros() - 1) as usize
}

fn index_word(i: usize) -> Vec<Letter> {
    let deg = index_degree(i);
    let bits = i + 1 - (1 << deg);
    (0..deg)
        .rev()
        .map(|k| if (bits >> k) & 1 == 1 { Letter::Y } else { Letter::X })
        .collect()
}

fn concat_index(i: usize, j: usize) -> Option<usize> {
    let (di, dj) = (index_degree(i), index_degree(j));
    if di + dj > MAX_DEGREE {
        return None;
    }
    let bi = i + 1 - (1 << di);
    let bj = j + 1 - (1 << dj);
    Some((1 << (di + dj)) - 1 + ((bi << dj) | bj))
}

/// A truncated series with integer coefficients. Series coming from group
/// elements have constant term 1.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coefficients: [BigInt; MONOMIALS],
}

impl TruncatedSeries {
    pub fn one() -> Self {
        let mut coefficients: [BigInt; MONOMIALS] = Default::default();
        coefficients[0] = BigInt::one();
        TruncatedSeries { coefficients }
    }

    fn letter(l: Letter) -> Self {
        let mut s = Self::one();
        s.coefficients[monomial_index(&[l]).unwrap()] = BigInt::one();
        s
    }

    pub fn coefficient(&self, word: &[Letter]) -> BigInt {
        monomial_index(word).map_or_else(BigInt::zero, |i| self.coefficients[i].clone())
    }

    pub fn coefficients(&self) -> &[BigInt; MONOMIALS] {
        &self.coefficients
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out: [BigInt; MONOMIALS] = Default::default();
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = concat_index(i, j) {
                    out[k] += a * b;
                }
            }
        }
        TruncatedSeries { coefficients: out }
    }

    /// `(1 + D)^e = sum_{k<=3} C(e, k) D^k`, valid for every integer `e`
    /// because `D` has no constant term and `D^4 = 0`.
    pub fn pow(&self, e: &BigInt) -> Self {
        assert!(self.coefficients[0].is_one(), "power needs constant term 1");
        let mut nil = self.clone();
        nil.coefficients[0] = BigInt::zero();
        let mut out = Self::one();
        let mut term = Self::one();
        let mut binom = BigInt::one();
        for k in 1..=MAX_DEGREE {
            term = term.multiply(&nil);
            // C(e, k) = C(e, k-1) (e - k + 1) / k, exact at every step
            binom *= e - BigInt::from(k - 1);
            let (q, r) = binom.div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            binom = q;
            for (o, t) in out.coefficients.iter_mut().zip(&term.coefficients) {
                *o += &binom * t;
            }
        }
        out
    }

    pub fn inverse(&self) -> Self {
        self.pow(&BigInt::from(-1))
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let w: String = index_word(i)
                .iter()
                .map(|l| if *l == Letter::X { 'X' } else { 'Y' })
                .collect();
            write!(f, "{c}{w}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn basis_series() -> [TruncatedSeries; 5] {
    let x = TruncatedSeries::letter(Letter::X);
    let y = TruncatedSeries::letter(Letter::Y);
    let comm = |u: &TruncatedSeries, v: &TruncatedSeries| {
        u.multiply(v).multiply(&u.inverse()).multiply(&v.inverse())
    };
    let z = comm(&x, &y);
    let zx = comm(&z, &x);
    let zy = comm(&z, &y);
    [y, x, z, zx, zy]
}

/// Image of a normal form under the Magnus map (computed at class 3).
pub fn group_to_series(w: &NilpotentElement) -> TruncatedSeries {
    let basis = basis_series();
    basis
        .iter()
        .zip(w.exponents())
        .fold(TruncatedSeries::one(), |acc, (s, e)| acc.multiply(&s.pow(e)))
}

/// Inverse of [`group_to_series`] on its image; `None` if the series is not
/// the image of a class-3 element.
pub fn series_to_group(s: &TruncatedSeries) -> Option<NilpotentElement> {
    use Letter::{X, Y};
    if !s.coefficients[0].is_one() {
        return None;
    }
    let a = s.coefficient(&[Y]);
    let b = s.coefficient(&[X]);
    let head = NilpotentElement::new(Class::Three, a.clone(), b.clone(), 0.into(), 0.into(), 0.into());
    let rest = group_to_series(&head).inverse().multiply(s);
    // [x,y] = 1 + XY - YX + (cubic)
    let c = rest.coefficient(&[X, Y]);
    let mid = NilpotentElement::new(Class::Three, 0.into(), 0.into(), c.clone(), 0.into(), 0.into());
    let rest = group_to_series(&mid).inverse().multiply(&rest);
    // [[x,y],x] = 1 + 2XYX - YXX - XXY,  [[x,y],y] = 1 + XYY - 2YXY + YYX
    let (d, r) = rest.coefficient(&[X, Y, X]).div_rem(&BigInt::from(2));
    if !r.is_zero() {
        return None;
    }
    let e = rest.coefficient(&[X, Y, Y]);
    let out = NilpotentElement::new(Class::Three, a, b, c, d, e);
    (group_to_series(&out) == *s).then_some(out)
}

/// Product computed through the Magnus map, projected back to the class of
/// the inputs.
pub fn oracle_multiply(u: &NilpotentElement, v: &NilpotentElement) -> Option<NilpotentElement> {
    let s = group_to_series(u).multiply(&group_to_series(v));
    let w = series_to_group(&s)?;
    w.project(u.class()).ok()
}

pub fn oracle_inverse(u: &NilpotentElement) -> Option<NilpotentElement> {
    let w = series_to_group(&group_to_series(u).inverse())?;
    w.project(u.class()).ok()
}
