//! Finite groups given by multiplication tables.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A finite group with identity at index 0, a generating set, and for each
/// element an integer cyclotomic representative `chi` through which twisted
/// coefficient modules are acted on.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<usize>,
    chi: Vec<u64>,
}

impl FiniteGroup {
    /// Tabulates `mul`. Checks that index 0 is a two-sided identity, that
    /// every element has an inverse, and that `generators` generate.
    /// Associativity is not checked here; see [`FiniteGroup::associativity_defect`].
    pub fn from_fn(
        order: usize,
        mul: impl Fn(usize, usize) -> usize,
        generators: Vec<usize>,
        chi: Vec<u64>,
    ) -> Result<Self> {
        if order == 0 || order > u32::MAX as usize {
            return Err(Error::invalid("group order out of range"));
        }
        if chi.len() != order {
            return Err(Error::invalid("one cyclotomic value per element required"));
        }
        let mut table = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                let k = mul(i, j);
                if k >= order {
                    return Err(Error::invalid(format!("product {i}*{j} = {k} out of range")));
                }
                table.push(k as u32);
            }
        }
        Self::from_table(order, table, generators, chi)
    }

    pub fn from_table(
        order: usize,
        table: Vec<u32>,
        generators: Vec<usize>,
        chi: Vec<u64>,
    ) -> Result<Self> {
        if table.len() != order * order || chi.len() != order {
            return Err(Error::invalid("table shape does not match the order"));
        }
        for i in 0..order {
            if table[i] as usize != i || table[i * order] as usize != i {
                return Err(Error::invalid("index 0 is not the identity"));
            }
        }
        let mut inverse = vec![u32::MAX; order];
        for i in 0..order {
            let row = &table[i * order..(i + 1) * order];
            let j = row
                .iter()
                .position(|&k| k == 0)
                .ok_or_else(|| Error::invalid(format!("element {i} has no inverse")))?;
            inverse[i] = j as u32;
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= order) {
            return Err(Error::invalid(format!("generator {g} out of range")));
        }
        let group = FiniteGroup { order, table, inverse, generators, chi };
        if group.spanning_tree().len() != order {
            return Err(Error::invalid("the generators do not generate the group"));
        }
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j] as usize
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn chi(&self, i: usize) -> u64 {
        self.chi[i]
    }

    /// Breadth-first order from the identity along right multiplication by
    /// generators: `(element, Some((parent, generator slot)))`.
    pub fn spanning_tree(&self) -> Vec<(usize, Option<(usize, usize)>)> {
        let mut seen = vec![false; self.order];
        let mut out = vec![(0, None)];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for (slot, &s) in self.generators.iter().enumerate() {
                let h = self.mul(g, s);
                if !seen[h] {
                    seen[h] = true;
                    out.push((h, Some((g, slot))));
                    queue.push_back(h);
                }
            }
        }
        out
    }

    /// First triple violating associativity, if any. Cubic in the order.
    pub fn associativity_defect(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.order {
            for b in 0..self.order {
                let ab = self.mul(a, b);
                for c in 0..self.order {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

/// A map between finite groups that has been checked on every pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    images: Vec<usize>,
}

impl Homomorphism {
    /// Exhaustively checks `images[i*j] == images[i] * images[j]`; the error
    /// carries the first failing pair in row-major order.
    pub fn verified(domain: &FiniteGroup, codomain: &FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.order() {
            return Err(Error::invalid("one image per domain element required"));
        }
        if images.iter().any(|&i| i >= codomain.order()) {
            return Err(Error::invalid("image outside the codomain"));
        }
        if let Some((left, right)) = homomorphism_defect(domain, codomain, &images) {
            return Err(Error::NotHomomorphism { left, right });
        }
        Ok(Homomorphism { images })
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

pub fn homomorphism_defect(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    images: &[usize],
) -> Option<(usize, usize)> {
    for i in 0..domain.order() {
        for j in 0..domain.order() {
            if images[domain.mul(i, j)] != codomain.mul(images[i], images[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Cyclic group Z/k with chi(g^i) = c^i mod level.
    pub(crate) fn cyclic(k: usize, c: u64, level: u64) -> FiniteGroup {
        let mut chi = vec![1u64; k];
        for i in 1..k {
            chi[i] = chi[i - 1] * c % level;
        }
        FiniteGroup::from_fn(k, |i, j| (i + j) % k, vec![1 % k], chi).unwrap()
    }

    #[test]
    fn cyclic_group_basics() {
        let g = cyclic(6, 5, 72);
        assert_eq!(g.inv(2), 4);
        assert_eq!(g.associativity_defect(), None);
        assert_eq!(g.spanning_tree().len(), 6);
    }

    #[test]
    fn rejects_non_generating_set() {
        let err = FiniteGroup::from_fn(4, |i, j| (i + j) % 4, vec![2], vec![1; 4]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn homomorphism_witness() {
        let g = cyclic(4, 1, 1);
        let doubling = Homomorphism::verified(&g, &g, vec![0, 2, 0, 2]);
        assert!(doubling.is_ok());
        let bad = Homomorphism::verified(&g, &g, vec![0, 1, 1, 3]).unwrap_err();
        assert_eq!(bad, Error::NotHomomorphism { left: 1, right: 1 });
    }
}
