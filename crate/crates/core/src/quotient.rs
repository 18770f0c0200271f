//! Finite quotients of the free nilpotent group: normal-form coordinates
//! reduced mod `n`.
//!
//! The collection formulas have integer coefficients apart from exact halves
//! of `t (t + 1)`, so reducing every coordinate mod `n` is a homomorphism at
//! class 3 whenever `n` is odd, and at class at most 2 for every `n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::nilpotent::{collect, collect_inverse, Class, NilpotentElement, RANK};

/// Coordinates `(a, b, c, d, e)` reduced into `0..n`.
pub type ModWord = [u32; RANK];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroup {
    class: Class,
    modulus: u64,
}

impl QuotientGroup {
    pub fn new(class: Class, modulus: u64) -> Result<Self> {
        if modulus == 0 || modulus > u32::MAX as u64 {
            return Err(Error::invalid(format!("modulus {modulus} out of range")));
        }
        if class == Class::Three && modulus.is_multiple_of(2) {
            return Err(Error::UnsupportedModulus {
                modulus,
                reason: "class-3 collection halves t(t+1); the reduction needs 2 invertible",
            });
        }
        Ok(QuotientGroup { class, modulus })
    }

    pub fn class(&self) -> Class {
        self.class
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        (self.modulus as usize).pow(self.class.dims() as u32)
    }

    pub fn identity(&self) -> ModWord {
        [0; RANK]
    }

    pub fn generator_x(&self) -> ModWord {
        self.reduce_i128(&[0, 1, 0, 0, 0])
    }

    pub fn generator_y(&self) -> ModWord {
        self.reduce_i128(&[1, 0, 0, 0, 0])
    }

    /// Mixed-radix index, `a` most significant.
    pub fn index(&self, w: &ModWord) -> usize {
        let n = self.modulus as usize;
        w[..self.class.dims()].iter().fold(0, |acc, &t| acc * n + t as usize)
    }

    pub fn word(&self, mut idx: usize) -> ModWord {
        let n = self.modulus as usize;
        let dims = self.class.dims();
        let mut w = [0u32; RANK];
        for slot in w[..dims].iter_mut().rev() {
            *slot = (idx % n) as u32;
            idx /= n;
        }
        w
    }

    fn reduce_i128(&self, e: &[i128; RANK]) -> ModWord {
        let n = self.modulus as i128;
        let mut w = [0u32; RANK];
        for i in 0..self.class.dims() {
            w[i] = e[i].rem_euclid(n) as u32;
        }
        w
    }

    fn widen(w: &ModWord) -> [i128; RANK] {
        w.map(i128::from)
    }

    pub fn mul(&self, u: &ModWord, v: &ModWord) -> ModWord {
        self.reduce_i128(&collect(&Self::widen(u), &Self::widen(v)))
    }

    pub fn inv(&self, u: &ModWord) -> ModWord {
        self.reduce_i128(&collect_inverse(&Self::widen(u)))
    }

    pub fn pow(&self, u: &ModWord, mut k: u64) -> ModWord {
        let mut acc = self.identity();
        let mut base = *u;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn commutator(&self, u: &ModWord, v: &ModWord) -> ModWord {
        let uv = self.mul(u, v);
        let inv = self.mul(&self.inv(u), &self.inv(v));
        self.mul(&uv, &inv)
    }

    /// Image of an integer normal form.
    pub fn reduce(&self, w: &NilpotentElement) -> Result<ModWord> {
        if w.class() < self.class {
            return Err(Error::ClassMismatch { left: w.class().get(), right: self.class.get() });
        }
        let n = BigInt::from(self.modulus);
        let mut out = [0u32; RANK];
        for (slot, e) in out.iter_mut().zip(w.exponents()).take(self.class.dims()) {
            *slot = e.mod_floor(&n).to_u32().expect("residue fits");
        }
        Ok(out)
    }

    /// Canonical representative with coordinates in `0..n`.
    pub fn lift(&self, w: &ModWord) -> NilpotentElement {
        NilpotentElement::from_exponents(self.class, w.map(BigInt::from))
    }

    /// Drops the coordinates above `class`.
    pub fn project(&self, w: &ModWord, class: Class) -> ModWord {
        let mut out = *w;
        for slot in out.iter_mut().skip(class.dims()) {
            *slot = 0;
        }
        out
    }
}

/// An endomorphism of a quotient group given by the images of `x` and `y`.
#[derive(Clone, Debug)]
pub struct QuotientEndomorphism {
    images: [ModWord; RANK],
}

impl QuotientEndomorphism {
    pub fn new(group: &QuotientGroup, x_image: ModWord, y_image: ModWord) -> Self {
        let z = group.commutator(&x_image, &y_image);
        let zx = group.commutator(&z, &x_image);
        let zy = group.commutator(&z, &y_image);
        QuotientEndomorphism { images: [y_image, x_image, z, zx, zy] }
    }

    pub fn identity(group: &QuotientGroup) -> Self {
        Self::new(group, group.generator_x(), group.generator_y())
    }

    /// `y'^a x'^b [x',y']^c [[x',y'],x']^d [[x',y'],y']^e`.
    pub fn apply(&self, group: &QuotientGroup, w: &ModWord) -> ModWord {
        let mut acc = group.identity();
        for (img, &e) in self.images.iter().zip(w.iter()).take(group.class().dims()) {
            if e != 0 {
                acc = group.mul(&acc, &group.pow(img, e as u64));
            }
        }
        acc
    }

    pub fn x_image(&self) -> &ModWord {
        &self.images[1]
    }

    pub fn y_image(&self) -> &ModWord {
        &self.images[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_modulus_rejected_at_class_three() {
        assert!(matches!(
            QuotientGroup::new(Class::Three, 4),
            Err(Error::UnsupportedModulus { modulus: 4, .. })
        ));
        assert!(QuotientGroup::new(Class::Two, 2).is_ok());
    }

    #[test]
    fn index_roundtrip() {
        let g = QuotientGroup::new(Class::Three, 3).unwrap();
        assert_eq!(g.order(), 243);
        for i in 0..g.order() {
            assert_eq!(g.index(&g.word(i)), i);
        }
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let g = QuotientGroup::new(Class::Three, 5).unwrap();
        let u = NilpotentElement::new(Class::Three, 7, -3, 11, 2, -9);
        let v = NilpotentElement::new(Class::Three, -6, 13, 4, 8, 1);
        let uv = u.multiply(&v).unwrap();
        assert_eq!(g.reduce(&uv).unwrap(), g.mul(&g.reduce(&u).unwrap(), &g.reduce(&v).unwrap()));
    }

    #[test]
    fn inverse_and_power() {
        let g = QuotientGroup::new(Class::Three, 3).unwrap();
        for i in 0..g.order() {
            let w = g.word(i);
            assert_eq!(g.mul(&w, &g.inv(&w)), g.identity());
            // exponent 9 kills every element of the class-3 quotient mod 3
            assert_eq!(g.pow(&w, 9), g.identity());
        }
    }
}
