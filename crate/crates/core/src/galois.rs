//! Finite-level model of the Galois side: the unit group `(Z/N)^*` (or a
//! subgroup of it) with cyclotomic character `chi(g) = g` and the map
//! `f(g) = (g^2 - 1) / 24`, acting on the free nilpotent group either
//! untwisted (`x -> x^chi`, `y -> y^chi`) or twisted by conjugating the image
//! of `y` with `[x,y]^f`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nilpotent::{Class, NilpotentElement};
use crate::quotient::{ModWord, QuotientEndomorphism, QuotientGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionMode {
    /// `x -> x^chi`, `y -> y^chi`.
    Untwisted,
    /// `x -> x^chi`, `y -> [x,y]^-f y^chi [x,y]^f`.
    Twisted,
}

/// Unit group `(Z/N)^*` or one of its subgroups, together with the
/// coefficient modulus `n` (`24 n | N`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisModel {
    level: u64,
    modulus: u64,
    elements: Vec<u64>,
    generators: Vec<u64>,
}

fn check_parameters(level: u64, modulus: u64) -> Result<()> {
    if modulus == 0 || level == 0 {
        return Err(Error::invalid("N and n must be positive"));
    }
    if !level.is_multiple_of(24 * modulus) {
        return Err(Error::invalid(format!("24 n must divide N (N = {level}, n = {modulus})")));
    }
    if level > 1 << 20 {
        return Err(Error::invalid(format!("level N = {level} is too large for a finite model")));
    }
    Ok(())
}

impl GaloisModel {
    /// The full unit group `(Z/N)^*`.
    pub fn full(level: u64, modulus: u64) -> Result<Self> {
        check_parameters(level, modulus)?;
        let units: Vec<u64> = (1..level).filter(|g| g.gcd(&level) == 1).collect();
        let generators = minimal_generators(level, &units);
        Self::with_generators(level, modulus, &generators)
    }

    /// The subgroup of `(Z/N)^*` generated by `generators`.
    pub fn with_generators(level: u64, modulus: u64, generators: &[u64]) -> Result<Self> {
        check_parameters(level, modulus)?;
        let mut gens = Vec::new();
        for &g in generators {
            let g = g % level;
            if g.gcd(&level) != 1 {
                return Err(Error::invalid(format!("{g} is not a unit mod {level}")));
            }
            if g != 1 && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let mut seen = BTreeSet::from([1u64]);
        let mut frontier = vec![1u64];
        while let Some(h) = frontier.pop() {
            for &g in &gens {
                let p = h * g % level;
                if seen.insert(p) {
                    frontier.push(p);
                }
            }
        }
        Ok(GaloisModel { level, modulus, elements: seen.into_iter().collect(), generators: gens })
    }

    /// A cyclic subgroup of the given order. Among the candidate generators
    /// the first (smallest) one with `chi` and `f` both nontrivial mod `n` is
    /// chosen, falling back to nontrivial `chi`, then to the smallest.
    pub fn cyclic(level: u64, modulus: u64, order: usize) -> Result<Self> {
        check_parameters(level, modulus)?;
        let candidates: Vec<u64> = (1..level)
            .filter(|g| g.gcd(&level) == 1 && multiplicative_order(*g, level) == order)
            .collect();
        let score = |g: &u64| {
            let chi_nontrivial = g % modulus != 1 % modulus;
            let f_nontrivial = !((g * g - 1) / 24).is_multiple_of(modulus);
            (chi_nontrivial && f_nontrivial) as u8 * 2 + chi_nontrivial as u8
        };
        let best = candidates
            .iter()
            .max_by_key(|g| (score(g), std::cmp::Reverse(**g)))
            .copied()
            .ok_or_else(|| {
                Error::invalid(format!("(Z/{level})^* has no cyclic subgroup of order {order}"))
            })?;
        Self::with_generators(level, modulus, &[best])
    }

    /// `N`.
    pub fn level(&self) -> u64 {
        self.level
    }

    /// `n`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: u64) -> Option<usize> {
        self.elements.binary_search(&(g % self.level)).ok()
    }

    pub fn contains(&self, g: u64) -> bool {
        self.index_of(g).is_some()
    }

    pub fn mul(&self, g: u64, h: u64) -> u64 {
        g * h % self.level
    }

    pub fn inv(&self, g: u64) -> u64 {
        // the unit group is small; walk powers until we hit 1
        let mut h = g % self.level;
        while self.mul(h, g) != 1 {
            h = self.mul(h, g);
        }
        h
    }

    /// Odd integer representative of `chi(g)` in `1..N`.
    pub fn chi_rep(&self, g: u64) -> u64 {
        g % self.level
    }

    /// `chi(g) mod n`.
    pub fn chi(&self, g: u64) -> u64 {
        self.chi_rep(g) % self.modulus
    }

    /// `(g^2 - 1) / 24` on the representative in `1..N`.
    pub fn f_rep(&self, g: u64) -> u64 {
        let r = self.chi_rep(g);
        debug_assert_eq!((r * r - 1) % 24, 0);
        (r * r - 1) / 24
    }

    /// `f(g) mod n`; independent of the representative because `24 n | N`.
    pub fn f_map(&self, g: u64) -> u64 {
        self.f_rep(g) % self.modulus
    }

    /// Action of `g` on an integer normal form.
    pub fn act(&self, g: u64, w: &NilpotentElement, mode: ActionMode) -> NilpotentElement {
        act_with(&BigInt::from(self.chi_rep(g)), &BigInt::from(self.f_rep(g)), w, mode)
    }

    /// Action of `g` on the mod-`quotient.modulus()` quotient.
    pub fn quotient_action(
        &self,
        g: u64,
        quotient: &QuotientGroup,
        mode: ActionMode,
    ) -> QuotientEndomorphism {
        let chi = self.chi_rep(g);
        let x_image = quotient.pow(&quotient.generator_x(), chi);
        let mut y_image = quotient.pow(&quotient.generator_y(), chi);
        if mode == ActionMode::Twisted {
            let mut z: ModWord = quotient.identity();
            if quotient.class() >= Class::Two {
                z[2] = 1;
            }
            let frak_f = quotient.pow(&z, self.f_rep(g));
            y_image = quotient.mul(&quotient.mul(&quotient.inv(&frak_f), &y_image), &frak_f);
        }
        QuotientEndomorphism::new(quotient, x_image, y_image)
    }
}

fn multiplicative_order(g: u64, level: u64) -> usize {
    let mut k = 1;
    let mut h = g % level;
    while h != 1 % level {
        h = h * g % level;
        k += 1;
    }
    k
}

/// Greedy generating set: repeatedly add the smallest unit not yet reached.
fn minimal_generators(level: u64, units: &[u64]) -> Vec<u64> {
    let mut gens = Vec::new();
    let mut reached = BTreeSet::from([1u64]);
    for &u in units {
        if reached.contains(&u) {
            continue;
        }
        gens.push(u);
        let mut frontier: Vec<u64> = reached.iter().copied().collect();
        while let Some(h) = frontier.pop() {
            for &g in &gens {
                let p = h * g % level;
                if reached.insert(p) {
                    frontier.push(p);
                }
            }
        }
    }
    gens
}

/// Action by an integer cyclotomic value `chi` and twist exponent `f`.
pub fn act_with(chi: &BigInt, f: &BigInt, w: &NilpotentElement, mode: ActionMode) -> NilpotentElement {
    let class = w.class();
    let x_image = NilpotentElement::x(class).pow(chi);
    let mut y_image = NilpotentElement::y(class).pow(chi);
    if mode == ActionMode::Twisted {
        let frak_f = NilpotentElement::new(class, 0.into(), 0.into(), f.clone(), 0.into(), 0.into());
        y_image = frak_f.inverse().mul_same_class(&y_image).mul_same_class(&frak_f);
    }
    apply_images(&x_image, &y_image, w)
}

/// Evaluates the endomorphism `x -> x_image`, `y -> y_image` on `w`.
pub fn apply_images(
    x_image: &NilpotentElement,
    y_image: &NilpotentElement,
    w: &NilpotentElement,
) -> NilpotentElement {
    let zc = x_image.commutator(y_image).expect("same class");
    let zx = zc.commutator(x_image).expect("same class");
    let zy = zc.commutator(y_image).expect("same class");
    let images = [y_image, x_image, &zc, &zx, &zy];
    images
        .iter()
        .zip(w.exponents())
        .fold(NilpotentElement::identity(w.class()), |acc, (img, e)| {
            acc.mul_same_class(&img.pow(e))
        })
}

/// `(word, g)` in `F / [F]_{k+1}` semidirect the Galois model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectElement {
    pub word: NilpotentElement,
    pub g: u64,
}

impl SemidirectElement {
    pub fn new(word: NilpotentElement, g: u64) -> Self {
        SemidirectElement { word, g }
    }

    pub fn identity(class: Class) -> Self {
        SemidirectElement { word: NilpotentElement::identity(class), g: 1 }
    }
}

/// `(w1, g1)(w2, g2) = (w1 g1(w2), g1 g2)`. Over the integers this uses the
/// representative of `g1` in `1..N`, so the law is associative after
/// reduction mod `n`.
pub fn semidirect_multiply(
    model: &GaloisModel,
    mode: ActionMode,
    u: &SemidirectElement,
    v: &SemidirectElement,
) -> Result<SemidirectElement> {
    for g in [u.g, v.g] {
        if !model.contains(g) {
            return Err(Error::invalid(format!("{g} is not in the Galois model")));
        }
    }
    let acted = model.act(u.g, &v.word, mode);
    Ok(SemidirectElement { word: u.word.multiply(&acted)?, g: model.mul(u.g, v.g) })
}

/// Normalized section from class `k` to class `k + 1`.
pub fn section_lift(w: &NilpotentElement) -> Result<NilpotentElement> {
    w.lift()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(class: Class, e: [i64; 5]) -> NilpotentElement {
        NilpotentElement::new(class, e[0], e[1], e[2], e[3], e[4])
    }

    #[test]
    fn parameters_validated() {
        assert!(GaloisModel::full(72, 3).is_ok());
        assert!(GaloisModel::full(72, 5).is_err());
        assert!(GaloisModel::full(48, 3).is_err());
    }

    #[test]
    fn chi_examples() {
        let m = GaloisModel::full(72, 3).unwrap();
        assert_eq!(m.order(), 24);
        assert_eq!(m.chi(1), 1);
        assert_eq!(m.chi(5), 2);
        assert_eq!(m.chi(7), 1);
    }

    #[test]
    fn f_examples() {
        let m = GaloisModel::full(24 * 1000, 1000).unwrap();
        assert_eq!(m.f_map(1), 0);
        assert_eq!(m.f_map(5), 1);
        assert_eq!(m.f_map(7), 2);
    }

    #[test]
    fn representative_independence() {
        let m = GaloisModel::full(120, 5).unwrap();
        for &g in m.elements() {
            let r = g + m.level();
            assert_eq!(r % 5, m.chi(g));
            assert_eq!(((r * r - 1) / 24) % 5, m.f_map(g));
        }
    }

    #[test]
    fn identity_acts_trivially() {
        let m = GaloisModel::full(72, 3).unwrap();
        let w = el(Class::Three, [2, -1, 3, 4, -5]);
        for mode in [ActionMode::Untwisted, ActionMode::Twisted] {
            assert_eq!(m.act(1, &w, mode), w);
        }
    }

    #[test]
    fn untwisted_commutator_scales_by_chi_squared_mod_class_three() {
        let m = GaloisModel::full(72, 3).unwrap();
        let z = el(Class::Two, [0, 0, 1, 0, 0]);
        for &g in m.elements() {
            let chi = m.chi_rep(g) as i64;
            assert_eq!(m.act(g, &z, ActionMode::Untwisted), el(Class::Two, [0, 0, chi * chi, 0, 0]));
        }
    }

    #[test]
    fn twisted_y_at_class_two_is_plain_power() {
        let m = GaloisModel::full(72, 3).unwrap();
        for &g in m.elements() {
            let y = NilpotentElement::y(Class::Two);
            assert_eq!(m.act(g, &y, ActionMode::Twisted), y.pow_i64(m.chi_rep(g) as i64));
        }
    }

    #[test]
    fn cyclic_subgroup_selection() {
        assert!(GaloisModel::cyclic(72, 3, 4).is_err());
        let h = GaloisModel::cyclic(288, 3, 8).unwrap();
        assert_eq!(h.order(), 8);
        let h6 = GaloisModel::cyclic(72, 3, 6).unwrap();
        assert_eq!(h6.generators(), &[5]);
    }

    #[test]
    fn semidirect_examples() {
        let m = GaloisModel::full(72, 3).unwrap();
        let mode = ActionMode::Untwisted;
        let id = SemidirectElement::identity(Class::Three);
        let v = SemidirectElement::new(el(Class::Three, [1, 2, 0, 1, 0]), 5);
        assert_eq!(semidirect_multiply(&m, mode, &id, &v).unwrap(), v);

        // (y, g)(y, h) = y^{1 + chi(g)} at class 1
        let y1 = NilpotentElement::y(Class::One);
        let p = semidirect_multiply(
            &m,
            mode,
            &SemidirectElement::new(y1.clone(), 5),
            &SemidirectElement::new(y1, 7),
        )
        .unwrap();
        assert_eq!(p, SemidirectElement::new(el(Class::One, [6, 0, 0, 0, 0]), 35));

        // conjugation (1, g)(y, 1)(1, g)^-1 = (y^chi, 1)
        let g = SemidirectElement::new(NilpotentElement::identity(Class::Three), 5);
        let g_inv = SemidirectElement::new(NilpotentElement::identity(Class::Three), m.inv(5));
        let y = SemidirectElement::new(NilpotentElement::y(Class::Three), 1);
        let conj = semidirect_multiply(&m, mode, &semidirect_multiply(&m, mode, &g, &y).unwrap(), &g_inv)
            .unwrap();
        assert_eq!(conj, SemidirectElement::new(el(Class::Three, [5, 0, 0, 0, 0]), 1));

        let bad = SemidirectElement::new(NilpotentElement::y(Class::Three), 2);
        assert!(semidirect_multiply(&m, mode, &bad, &id).is_err());
        let other_class = SemidirectElement::identity(Class::Two);
        assert!(semidirect_multiply(&m, mode, &v, &other_class).is_err());
    }

    #[test]
    fn section_examples() {
        assert!(section_lift(&NilpotentElement::identity(Class::One)).unwrap().is_identity());
        let w = el(Class::One, [3, -2, 0, 0, 0]);
        assert_eq!(section_lift(&w).unwrap(), el(Class::Two, [3, -2, 0, 0, 0]));
        let w2 = el(Class::Two, [1, 1, 2, 0, 0]);
        let l = section_lift(&w2).unwrap();
        assert_eq!(l, el(Class::Three, [1, 1, 2, 0, 0]));
        assert_eq!(l.project(Class::Two).unwrap(), w2);
    }

    #[test]
    fn quotient_action_matches_integer_action() {
        let m = GaloisModel::full(120, 5).unwrap();
        let q = QuotientGroup::new(Class::Three, 5).unwrap();
        let w = el(Class::Three, [3, 1, 4, 2, 0]);
        for mode in [ActionMode::Untwisted, ActionMode::Twisted] {
            for &g in m.elements() {
                let exact = q.reduce(&m.act(g, &w, mode)).unwrap();
                let finite = m.quotient_action(g, &q, mode).apply(&q, &q.reduce(&w).unwrap());
                assert_eq!(exact, finite);
            }
        }
    }
}
