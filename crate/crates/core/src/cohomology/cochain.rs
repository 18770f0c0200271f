//! Inhomogeneous 1- and 2-cochains with values in `Z/m(j)`.

use serde::{Deserialize, Serialize};

use super::group::{FiniteGroup, Homomorphism};
use crate::error::{Error, Result};

/// `Z/m` with `g` acting by `chi(g)^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistedModule {
    pub modulus: u64,
    pub twist: u32,
}

impl TwistedModule {
    pub fn new(modulus: u64, twist: u32) -> Result<Self> {
        if modulus == 0 || modulus > u32::MAX as u64 {
            return Err(Error::invalid(format!("coefficient modulus {modulus} out of range")));
        }
        Ok(TwistedModule { modulus, twist })
    }

    /// `chi^j mod m` for every element of `group`.
    pub fn multipliers(&self, group: &FiniteGroup) -> Vec<u64> {
        (0..group.order()).map(|g| pow_mod(group.chi(g), self.twist as u64, self.modulus)).collect()
    }

    pub fn reduce(&self, v: i128) -> u32 {
        v.rem_euclid(self.modulus as i128) as u32
    }
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1 % m128;
    let mut b = base as u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// A cochain stored as a flat table: arity 1 indexes by `g`, arity 2 by
/// `g * order + h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCochain {
    module: TwistedModule,
    arity: u8,
    order: usize,
    values: Vec<u32>,
}

impl TwistedCochain {
    pub fn zero(module: TwistedModule, arity: u8, order: usize) -> Self {
        assert!(arity == 1 || arity == 2, "arity must be 1 or 2");
        TwistedCochain { module, arity, order, values: vec![0; order.pow(arity as u32)] }
    }

    pub fn from_fn1(module: TwistedModule, group: &FiniteGroup, f: impl Fn(usize) -> i128) -> Self {
        let values = (0..group.order()).map(|g| module.reduce(f(g))).collect();
        TwistedCochain { module, arity: 1, order: group.order(), values }
    }

    pub fn from_fn2(
        module: TwistedModule,
        group: &FiniteGroup,
        f: impl Fn(usize, usize) -> i128,
    ) -> Self {
        let n = group.order();
        let mut values = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                values.push(module.reduce(f(g, h)));
            }
        }
        TwistedCochain { module, arity: 2, order: n, values }
    }

    pub fn from_values(module: TwistedModule, arity: u8, order: usize, values: Vec<u32>) -> Result<Self> {
        if !(arity == 1 || arity == 2) || values.len() != order.pow(arity as u32) {
            return Err(Error::invalid("cochain table has the wrong shape"));
        }
        if values.iter().any(|&v| v as u64 >= module.modulus) {
            return Err(Error::invalid("cochain value not reduced"));
        }
        Ok(TwistedCochain { module, arity, order, values })
    }

    pub fn module(&self) -> TwistedModule {
        self.module
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn at1(&self, g: usize) -> u64 {
        self.values[g] as u64
    }

    #[inline]
    pub fn at2(&self, g: usize, h: usize) -> u64 {
        self.values[g * self.order + h] as u64
    }

    pub fn set1(&mut self, g: usize, v: i128) {
        self.values[g] = self.module.reduce(v);
    }

    pub fn set2(&mut self, g: usize, h: usize, v: i128) {
        self.values[g * self.order + h] = self.module.reduce(v);
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Vanishes whenever an argument is the identity.
    pub fn is_normalized(&self) -> bool {
        match self.arity {
            1 => self.values[0] == 0,
            _ => (0..self.order).all(|g| self.at2(0, g) == 0 && self.at2(g, 0) == 0),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.module != other.module || self.arity != other.arity || self.order != other.order {
            return Err(Error::invalid("cochains live on different groups or modules"));
        }
        Ok(())
    }

    fn check_domain(&self, group: &FiniteGroup) -> Result<()> {
        if self.order != group.order() {
            return Err(Error::invalid("cochain does not live on this group"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.module.modulus;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| ((u as u64 + v as u64) % m) as u32)
            .collect();
        Ok(self.with_values(values))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let m = self.module.modulus;
        let values = self.values.iter().map(|&v| ((m - v as u64) % m) as u32).collect();
        self.with_values(values)
    }

    pub fn scale(&self, k: i128) -> Self {
        let values = self
            .values
            .iter()
            .map(|&v| self.module.reduce(v as i128 * k))
            .collect();
        self.with_values(values)
    }

    fn with_values(&self, values: Vec<u32>) -> Self {
        TwistedCochain { module: self.module, arity: self.arity, order: self.order, values }
    }

    /// Same table read in a different module; used when a coefficient
    /// identification is the identity on residues.
    pub fn with_module(&self, module: TwistedModule) -> Result<Self> {
        Self::from_values(module, self.arity, self.order, self.values.clone())
    }

    /// Reduction `Z/m -> Z/d` for `d | m`.
    pub fn reduce_modulus(&self, d: u64) -> Result<Self> {
        if d == 0 || !self.module.modulus.is_multiple_of(d) {
            return Err(Error::invalid(format!("{d} does not divide {}", self.module.modulus)));
        }
        let module = TwistedModule::new(d, self.module.twist)?;
        let values = self.values.iter().map(|&v| (v as u64 % d) as u32).collect();
        Ok(TwistedCochain { module, arity: self.arity, order: self.order, values })
    }

    /// `is_cocycle` over every pair (arity 1) or every triple (arity 2).
    pub fn is_cocycle_exhaustive(&self, group: &FiniteGroup) -> Result<bool> {
        self.check_domain(group)?;
        Ok(match self.arity {
            1 => self.cocycle1_defect(group).is_none(),
            _ => self.cocycle2_defect(group, &(0..group.order()).collect::<Vec<_>>()).is_none(),
        })
    }

    /// Cocycle test. In degree 2 the last argument runs over the generators
    /// and the identity only: the condition on `(g, h, k)` for all `g, h`
    /// is closed under products in `k`, and every element of the extension
    /// `M x G` is a product of elements `(m, 1)` and `(0, s)`.
    pub fn is_cocycle(&self, group: &FiniteGroup) -> Result<bool> {
        self.check_domain(group)?;
        Ok(match self.arity {
            1 => self.cocycle1_defect(group).is_none(),
            _ => {
                let mut last = vec![0];
                last.extend_from_slice(group.generators());
                self.cocycle2_defect(group, &last).is_none()
            }
        })
    }

    /// First pair with `u(gh) != u(g) + g.u(h)`.
    pub fn cocycle1_defect(&self, group: &FiniteGroup) -> Option<(usize, usize)> {
        let m = self.module.modulus;
        let mult = self.module.multipliers(group);
        for (g, &mg) in mult.iter().enumerate() {
            for h in 0..self.order {
                let rhs = (self.at1(g) + mg * self.at1(h)) % m;
                if self.at1(group.mul(g, h)) != rhs {
                    return Some((g, h));
                }
            }
        }
        None
    }

    /// First triple with `g.w(h,k) - w(gh,k) + w(g,hk) - w(g,h) != 0`,
    /// `k` restricted to `last`.
    pub fn cocycle2_defect(&self, group: &FiniteGroup, last: &[usize]) -> Option<(usize, usize, usize)> {
        let m = self.module.modulus;
        let mult = self.module.multipliers(group);
        for (g, &mg) in mult.iter().enumerate() {
            for h in 0..self.order {
                let gh = group.mul(g, h);
                let wgh = self.at2(g, h);
                for &k in last {
                    let lhs = (mg * self.at2(h, k) + self.at2(g, group.mul(h, k))) % m;
                    let rhs = (self.at2(gh, k) + wgh) % m;
                    if lhs != rhs {
                        return Some((g, h, k));
                    }
                }
            }
        }
        None
    }

    /// `d(beta)(g, h) = g.beta(h) - beta(gh) + beta(g)`.
    pub fn coboundary(&self, group: &FiniteGroup) -> Result<Self> {
        self.check_domain(group)?;
        if self.arity != 1 {
            return Err(Error::invalid("coboundary is implemented for 1-cochains"));
        }
        let mult = self.module.multipliers(group);
        Ok(Self::from_fn2(self.module, group, |g, h| {
            (mult[g] * self.at1(h)) as i128 - self.at1(group.mul(g, h)) as i128 + self.at1(g) as i128
        }))
    }

    /// `g -> g.v - v`.
    pub fn coboundary0(module: TwistedModule, group: &FiniteGroup, v: u64) -> Self {
        let mult = module.multipliers(group);
        Self::from_fn1(module, group, |g| mult[g] as i128 * v as i128 - v as i128)
    }

    /// `(u cup v)(s, t) = u(s) . chi(s)^j_v . v(t)`.
    pub fn cup11(&self, other: &Self, group: &FiniteGroup) -> Result<Self> {
        self.check_domain(group)?;
        other.check_domain(group)?;
        if self.arity != 1 || other.arity != 1 {
            return Err(Error::invalid("cup11 takes two 1-cochains"));
        }
        if self.module.modulus != other.module.modulus {
            return Err(Error::invalid("cup11 needs a common coefficient modulus"));
        }
        let module = TwistedModule::new(self.module.modulus, self.module.twist + other.module.twist)?;
        let mult = other.module.multipliers(group);
        let m = module.modulus as u128;
        Ok(Self::from_fn2(module, group, |s, t| {
            (self.at1(s) as u128 * mult[s] as u128 % m * other.at1(t) as u128 % m) as i128
        }))
    }

    /// Composition with a verified homomorphism `hom: domain -> codomain`.
    /// The coefficient identification is the identity on residues; it must be
    /// equivariant, i.e. `chi_domain(g)^j = chi_codomain(hom(g))^j mod m`.
    pub fn pullback(&self, hom: &Homomorphism, domain: &FiniteGroup, codomain: &FiniteGroup) -> Result<Self> {
        self.check_domain(codomain)?;
        if hom.images().len() != domain.order() {
            return Err(Error::invalid("homomorphism does not start at this domain"));
        }
        let here = self.module.multipliers(domain);
        let there = self.module.multipliers(codomain);
        if let Some(g) = (0..domain.order()).find(|&g| here[g] != there[hom.image(g)]) {
            return Err(Error::invalid(format!(
                "coefficient identification is not equivariant at domain element {g}"
            )));
        }
        Ok(match self.arity {
            1 => Self::from_fn1(self.module, domain, |g| self.at1(hom.image(g)) as i128),
            _ => Self::from_fn2(self.module, domain, |g, h| {
                self.at2(hom.image(g), hom.image(h)) as i128
            }),
        })
    }
}
