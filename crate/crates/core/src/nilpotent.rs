//! The free nilpotent group of class at most 3 on two generators `x`, `y`.
//!
//! Elements are kept in the normal form
//!
//! ```text
//! y^a x^b [x,y]^c [[x,y],x]^d [[x,y],y]^e
//! ```
//!
//! with the commutator convention `[u,v] = u v u^-1 v^-1`. Products are
//! computed with closed-form collection formulas; the Magnus truncation in
//! [`crate::magnus`] is an independent check of those formulas.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of normal-form coordinates at class 3.
pub const RANK: usize = 5;

/// Nilpotency class of a quotient `F / [F]_{k+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Class {
    One,
    Two,
    Three,
}

impl Class {
    pub fn new(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Class::One),
            2 => Ok(Class::Two),
            3 => Ok(Class::Three),
            _ => Err(Error::invalid(format!("nilpotency class must be 1, 2 or 3, got {k}"))),
        }
    }

    pub fn get(self) -> u8 {
        match self {
            Class::One => 1,
            Class::Two => 2,
            Class::Three => 3,
        }
    }

    /// Number of live normal-form coordinates.
    pub fn dims(self) -> usize {
        match self {
            Class::One => 2,
            Class::Two => 3,
            Class::Three => 5,
        }
    }

    pub fn next(self) -> Option<Self> {
        match self {
            Class::One => Some(Class::Two),
            Class::Two => Some(Class::Three),
            Class::Three => None,
        }
    }

    /// Coordinate range spanning the top graded piece `[F]_k / [F]_{k+1}`.
    pub fn top_coordinates(self) -> std::ops::Range<usize> {
        match self {
            Class::One => 0..2,
            Class::Two => 2..3,
            Class::Three => 3..5,
        }
    }
}

impl TryFrom<u8> for Class {
    type Error = Error;
    fn try_from(k: u8) -> Result<Self> {
        Class::new(k)
    }
}

impl From<Class> for u8 {
    fn from(c: Class) -> u8 {
        c.get()
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// Degree (lower-central-series weight) of each coordinate.
pub const COORDINATE_DEGREE: [u8; RANK] = [1, 1, 2, 3, 3];

/// Human-readable names of the Hall basis elements, in coordinate order.
pub const BASIS_NAMES: [&str; RANK] = ["y", "x", "[x,y]", "[[x,y],x]", "[[x,y],y]"];

/// Ring operations the collection formulas need. The only division is an
/// exact halving of a product of consecutive integers.
pub trait Exponent:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn halve(self) -> Self;
}

impl Exponent for BigInt {
    fn halve(self) -> Self {
        debug_assert!(self.is_even());
        self / 2
    }
}

impl Exponent for i64 {
    fn halve(self) -> Self {
        debug_assert!(self % 2 == 0);
        self / 2
    }
}

impl Exponent for i128 {
    fn halve(self) -> Self {
        debug_assert!(self % 2 == 0);
        self / 2
    }
}

fn binom2_shifted<E: Exponent>(t: &E) -> E {
    // t (t + 1) / 2 = C(t+1, 2)
    (t.clone() * (t.clone() + E::one())).halve()
}

/// Normal form of `u * v` at class 3. Lower classes are obtained by
/// dropping the coordinates above the class, since none of the lower
/// coordinates of the product depends on them.
pub fn collect<E: Exponent>(u: &[E; RANK], v: &[E; RANK]) -> [E; RANK] {
    let [a1, b1, c1, d1, e1] = u.clone();
    let [a2, b2, c2, d2, e2] = v.clone();
    let a = a1 + a2.clone();
    let b = b1.clone() + b2.clone();
    let c = c1.clone() + c2 + a2.clone() * b1.clone();
    let d = d1
        + d2
        + b2.clone() * c1.clone()
        + a2.clone() * b1.clone() * b2
        + a2.clone() * binom2_shifted(&b1);
    let e = e1 + e2 + a2.clone() * c1 + b1 * binom2_shifted(&a2);
    [a, b, c, d, e]
}

/// Normal form of `u^-1` at class 3.
pub fn collect_inverse<E: Exponent>(u: &[E; RANK]) -> [E; RANK] {
    let [a, b, c, d, e] = u.clone();
    let ab = a.clone() * b.clone();
    let c_inv = ab.clone() - c.clone();
    // b(b+1)/2 and a(a-1)/2 stay exact on every integer
    let d_inv = -d + b.clone() * c.clone() - ab.clone() * b.clone() + a.clone() * binom2_shifted(&b);
    let a_minus = a.clone() - E::one();
    let e_inv = -e + a.clone() * c - b * binom2_shifted(&a_minus);
    [-a, -u[1].clone(), c_inv, d_inv, e_inv]
}

/// An element of the free nilpotent group of the given class, in normal form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NilpotentElement {
    exponents: [BigInt; RANK],
    class: Class,
}

impl NilpotentElement {
    /// Builds `y^a x^b [x,y]^c [[x,y],x]^d [[x,y],y]^e`, discarding the
    /// exponents of basis elements that vanish at this class.
    pub fn new<T: Into<BigInt>>(class: Class, a: T, b: T, c: T, d: T, e: T) -> Self {
        Self::from_exponents(class, [a.into(), b.into(), c.into(), d.into(), e.into()])
    }

    pub fn from_exponents(class: Class, mut exponents: [BigInt; RANK]) -> Self {
        for slot in exponents.iter_mut().skip(class.dims()) {
            *slot = BigInt::zero();
        }
        NilpotentElement { exponents, class }
    }

    pub fn identity(class: Class) -> Self {
        Self::new(class, 0, 0, 0, 0, 0)
    }

    pub fn x(class: Class) -> Self {
        Self::new(class, 0, 1, 0, 0, 0)
    }

    pub fn y(class: Class) -> Self {
        Self::new(class, 1, 0, 0, 0, 0)
    }

    pub fn class(&self) -> Class {
        self.class
    }

    pub fn exponents(&self) -> &[BigInt; RANK] {
        &self.exponents
    }

    /// Exponent of `y`.
    pub fn a(&self) -> &BigInt {
        &self.exponents[0]
    }

    /// Exponent of `x`.
    pub fn b(&self) -> &BigInt {
        &self.exponents[1]
    }

    /// Exponent of `[x,y]`.
    pub fn c(&self) -> &BigInt {
        &self.exponents[2]
    }

    /// Exponent of `[[x,y],x]`.
    pub fn d(&self) -> &BigInt {
        &self.exponents[3]
    }

    /// Exponent of `[[x,y],y]`.
    pub fn e(&self) -> &BigInt {
        &self.exponents[4]
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    fn check_class(&self, other: &Self) -> Result<()> {
        if self.class != other.class {
            return Err(Error::ClassMismatch { left: self.class.get(), right: other.class.get() });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_class(other)?;
        Ok(self.mul_same_class(other))
    }

    pub(crate) fn mul_same_class(&self, other: &Self) -> Self {
        debug_assert_eq!(self.class, other.class);
        Self::from_exponents(self.class, collect(&self.exponents, &other.exponents))
    }

    pub fn inverse(&self) -> Self {
        Self::from_exponents(self.class, collect_inverse(&self.exponents))
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_class(other)?;
        let uv = self.mul_same_class(other);
        let inv = self.inverse().mul_same_class(&other.inverse());
        Ok(uv.mul_same_class(&inv))
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: &BigInt) -> Self {
        let (mut base, mut k) = if k.is_negative() {
            (self.inverse(), -k.clone())
        } else {
            (self.clone(), k.clone())
        };
        let mut acc = Self::identity(self.class);
        while !k.is_zero() {
            if k.is_odd() {
                acc = acc.mul_same_class(&base);
            }
            k >>= 1;
            if !k.is_zero() {
                base = base.mul_same_class(&base);
            }
        }
        acc
    }

    pub fn pow_i64(&self, k: i64) -> Self {
        self.pow(&BigInt::from(k))
    }

    /// Image in the quotient of smaller class.
    pub fn project(&self, class: Class) -> Result<Self> {
        if class > self.class {
            return Err(Error::invalid(format!(
                "cannot project class {} element to class {class}",
                self.class
            )));
        }
        Ok(Self::from_exponents(class, self.exponents.clone()))
    }

    /// The normalized set-theoretic section into the next class: every new
    /// coordinate is set to zero.
    pub fn lift(&self) -> Result<Self> {
        let next = self
            .class
            .next()
            .ok_or_else(|| Error::invalid("no section above class 3"))?;
        Ok(NilpotentElement { exponents: self.exponents.clone(), class: next })
    }

    /// Reinterprets the same exponents at a different class (zeroing any that
    /// do not exist there).
    pub fn with_class(&self, class: Class) -> Self {
        Self::from_exponents(class, self.exponents.clone())
    }

    /// Exponents as machine integers, if they fit.
    pub fn to_i64(&self) -> Option<[i64; RANK]> {
        let mut out = [0i64; RANK];
        for (slot, e) in out.iter_mut().zip(&self.exponents) {
            *slot = e.to_i64()?;
        }
        Some(out)
    }
}

impl fmt::Debug for NilpotentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.exponents[0])?;
        for e in &self.exponents[1..self.class.dims()] {
            write!(f, ",{e}")?;
        }
        write!(f, ")@{}", self.class)
    }
}

impl fmt::Display for NilpotentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (name, e) in BASIS_NAMES.iter().zip(&self.exponents) {
            if e.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " ")?;
            }
            if e.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Left-normed iterated commutators of `x`, `y` of the given degree, computed
/// in the class-3 group.
pub fn iterated_commutators(degree: u8) -> Result<Vec<NilpotentElement>> {
    let gens = [NilpotentElement::x(Class::Three), NilpotentElement::y(Class::Three)];
    let mut layer: Vec<NilpotentElement> = gens.to_vec();
    match degree {
        1..=3 => {}
        _ => return Err(Error::invalid(format!("degree must be 1, 2 or 3, got {degree}"))),
    }
    for _ in 1..degree {
        let mut next = Vec::with_capacity(layer.len() * 4);
        for u in &layer {
            for g in &gens {
                next.push(u.commutator(g)?);
                next.push(g.commutator(u)?);
            }
        }
        layer = next;
    }
    Ok(layer)
}

/// Rank of `[F]_k / [F]_{k+1}`, found by generating every iterated commutator
/// of weight `degree` and taking the rank of their exponent vectors restricted
/// to the weight-`degree` coordinates.
pub fn lcs_graded_rank(degree: u8) -> Result<usize> {
    let elems = iterated_commutators(degree)?;
    let coords: Vec<usize> = (0..RANK).filter(|&i| COORDINATE_DEGREE[i] == degree).collect();
    let mut rows = Vec::with_capacity(elems.len());
    for w in &elems {
        // commutators of weight k lie in [F]_k
        for (deg, e) in COORDINATE_DEGREE.iter().zip(&w.exponents) {
            if *deg < degree && !e.is_zero() {
                return Err(Error::Internal(format!(
                    "weight-{degree} commutator {w:?} has a nonzero lower coordinate"
                )));
            }
        }
        rows.push(coords.iter().map(|&i| w.exponents[i].clone()).collect::<Vec<_>>());
    }
    Ok(integer_rank(rows))
}

/// Rank over the rationals by fraction-free elimination.
pub(crate) fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            let pivot_row = rows[rank].clone();
            for (v, q) in rows[r].iter_mut().zip(&pivot_row) {
                *v = &*v * &p - &factor * q;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(class: Class, e: [i64; 5]) -> NilpotentElement {
        NilpotentElement::new(class, e[0], e[1], e[2], e[3], e[4])
    }

    #[test]
    fn identity_is_neutral() {
        let v = el(Class::Three, [3, -2, 5, 1, -7]);
        let id = NilpotentElement::identity(Class::Three);
        assert_eq!(id.multiply(&v).unwrap(), v);
        assert_eq!(v.multiply(&id).unwrap(), v);
    }

    #[test]
    fn basis_commutators() {
        for class in [Class::Two, Class::Three] {
            let x = NilpotentElement::x(class);
            let y = NilpotentElement::y(class);
            assert_eq!(x.commutator(&y).unwrap(), el(class, [0, 0, 1, 0, 0]));
        }
        let x = NilpotentElement::x(Class::Three);
        let y = NilpotentElement::y(Class::Three);
        let z = x.commutator(&y).unwrap();
        assert_eq!(z.commutator(&x).unwrap(), el(Class::Three, [0, 0, 0, 1, 0]));
        assert_eq!(z.commutator(&y).unwrap(), el(Class::Three, [0, 0, 0, 0, 1]));
        // abelian at class 1
        let x1 = NilpotentElement::x(Class::One);
        let y1 = NilpotentElement::y(Class::One);
        assert!(x1.commutator(&y1).unwrap().is_identity());
    }

    #[test]
    fn class_mismatch_is_rejected() {
        let u = NilpotentElement::x(Class::Two);
        let v = NilpotentElement::x(Class::Three);
        assert_eq!(u.multiply(&v), Err(Error::ClassMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn inverse_of_x_abelian() {
        let x = NilpotentElement::x(Class::One);
        assert_eq!(x.inverse(), el(Class::One, [0, -1, 0, 0, 0]));
        assert!(NilpotentElement::identity(Class::Three).inverse().is_identity());
    }

    #[test]
    fn self_commutator_trivial() {
        let u = el(Class::Three, [2, -3, 4, 1, 1]);
        assert!(u.commutator(&u).unwrap().is_identity());
    }

    #[test]
    fn exponents_above_class_are_dropped() {
        let u = el(Class::Two, [1, 2, 3, 4, 5]);
        assert_eq!(u.d(), &BigInt::zero());
        assert_eq!(u.e(), &BigInt::zero());
        let one = el(Class::One, [1, 2, 3, 4, 5]);
        assert!(one.c().is_zero());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let u = el(Class::Three, [1, 2, -1, 0, 3]);
        let mut acc = NilpotentElement::identity(Class::Three);
        for k in 0..9 {
            assert_eq!(u.pow_i64(k), acc);
            acc = acc.multiply(&u).unwrap();
        }
        assert_eq!(u.pow_i64(-3), u.pow_i64(3).inverse());
    }

    #[test]
    fn section_and_projection() {
        let w = el(Class::Two, [1, 1, 2, 0, 0]);
        let lifted = w.lift().unwrap();
        assert_eq!(lifted.class(), Class::Three);
        assert_eq!(lifted.project(Class::Two).unwrap(), w);
        assert!(NilpotentElement::identity(Class::One).lift().unwrap().is_identity());
        assert!(lifted.lift().is_err());
        assert!(w.project(Class::Three).is_err());
    }

    #[test]
    fn graded_ranks() {
        assert_eq!(lcs_graded_rank(1).unwrap(), 2);
        assert_eq!(lcs_graded_rank(2).unwrap(), 1);
        assert_eq!(lcs_graded_rank(3).unwrap(), 2);
        assert!(lcs_graded_rank(4).is_err());
    }

    #[test]
    fn display_normal_form() {
        assert_eq!(el(Class::Three, [0, 0, 0, 0, 0]).to_string(), "1");
        assert_eq!(el(Class::Three, [1, -1, 2, 0, 0]).to_string(), "y x^-1 [x,y]^2");
    }
}
