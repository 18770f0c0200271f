//! Finite semidirect products `F/[F]_{k+1} mod n  x|  H` and the 2-cocycles
//! of the central extensions between consecutive classes.

use super::cochain::{TwistedCochain, TwistedModule};
use super::group::{FiniteGroup, Homomorphism};
use crate::error::{Error, Result};
use crate::galois::{ActionMode, GaloisModel};
use crate::nilpotent::{Class, COORDINATE_DEGREE};
use crate::quotient::{ModWord, QuotientGroup};

/// The unit subgroup of a Galois model as a table group (`1` at index 0).
pub fn galois_group(model: &GaloisModel) -> Result<FiniteGroup> {
    let els = model.elements();
    let gens = model.generators().iter().map(|&g| model.index_of(g).expect("generator")).collect();
    FiniteGroup::from_fn(
        els.len(),
        |i, j| model.index_of(model.mul(els[i], els[j])).expect("closed"),
        gens,
        els.to_vec(),
    )
}

/// `Q x| H` with `Q` the class-`k` quotient mod `n`. Element index is
/// `word_index * |H| + h_index`.
#[derive(Clone, Debug)]
pub struct FiniteSemidirect {
    model: GaloisModel,
    mode: ActionMode,
    quotient: QuotientGroup,
    action: Vec<Vec<u32>>,
    group: FiniteGroup,
}

impl FiniteSemidirect {
    pub fn new(model: &GaloisModel, class: Class, mode: ActionMode) -> Result<Self> {
        let quotient = QuotientGroup::new(class, model.modulus())?;
        let words = quotient.order();
        let hs = model.order();
        if words.checked_mul(hs).is_none_or(|o| o > 1 << 14) {
            return Err(Error::invalid(format!(
                "semidirect product of order {words} * {hs} is too large to tabulate"
            )));
        }
        let action: Vec<Vec<u32>> = model
            .elements()
            .iter()
            .map(|&g| {
                let endo = model.quotient_action(g, &quotient, mode);
                (0..words)
                    .map(|w| quotient.index(&endo.apply(&quotient, &quotient.word(w))) as u32)
                    .collect()
            })
            .collect();
        let els = model.elements();
        let h_mul: Vec<usize> = (0..hs * hs)
            .map(|k| model.index_of(model.mul(els[k / hs], els[k % hs])).expect("closed"))
            .collect();
        let word_table: Vec<ModWord> = (0..words).map(|w| quotient.word(w)).collect();
        let mul = |i: usize, j: usize| {
            let (w1, h1) = (i / hs, i % hs);
            let (w2, h2) = (j / hs, j % hs);
            let acted = action[h1][w2] as usize;
            let w = quotient.index(&quotient.mul(&word_table[w1], &word_table[acted]));
            w * hs + h_mul[h1 * hs + h2]
        };
        let mut generators = vec![quotient.index(&quotient.generator_x()) * hs, quotient.index(&quotient.generator_y()) * hs];
        generators.extend(model.generators().iter().map(|&g| model.index_of(g).expect("generator")));
        generators.retain(|&g| g != 0);
        let chi = (0..words * hs).map(|i| model.chi_rep(els[i % hs])).collect();
        let group = FiniteGroup::from_fn(words * hs, mul, generators, chi)?;
        Ok(FiniteSemidirect { model: model.clone(), mode, quotient, action, group })
    }

    pub fn model(&self) -> &GaloisModel {
        &self.model
    }

    pub fn mode(&self) -> ActionMode {
        self.mode
    }

    pub fn class(&self) -> Class {
        self.quotient.class()
    }

    pub fn quotient(&self) -> &QuotientGroup {
        &self.quotient
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn encode(&self, word: &ModWord, g: u64) -> Result<usize> {
        let h = self
            .model
            .index_of(g)
            .ok_or_else(|| Error::invalid(format!("{g} is not in the Galois model")))?;
        Ok(self.quotient.index(word) * self.model.order() + h)
    }

    /// `(word, g)` with `g` the unit representative in `1..N`.
    pub fn decode(&self, i: usize) -> (ModWord, u64) {
        let hs = self.model.order();
        (self.quotient.word(i / hs), self.model.elements()[i % hs])
    }

    /// Index in `H` of the group component.
    pub fn h_index(&self, i: usize) -> usize {
        i % self.model.order()
    }

    /// `g.w` on word indices.
    pub fn act_index(&self, h_index: usize, word_index: usize) -> usize {
        self.action[h_index][word_index] as usize
    }

    /// `(w, g) -> g`, a verified homomorphism onto `H`.
    pub fn projection(&self, h: &FiniteGroup) -> Result<Homomorphism> {
        Homomorphism::verified(&self.group, h, (0..self.order()).map(|i| self.h_index(i)).collect())
    }

    /// Integer cochain on this group built from `(word, g)`.
    pub fn cochain1(&self, module: TwistedModule, f: impl Fn(&ModWord, u64) -> i128) -> TwistedCochain {
        TwistedCochain::from_fn1(module, &self.group, |i| {
            let (w, g) = self.decode(i);
            f(&w, g)
        })
    }

    pub fn cochain2(
        &self,
        module: TwistedModule,
        f: impl Fn(&ModWord, u64, &ModWord, u64) -> i128,
    ) -> TwistedCochain {
        let decoded: Vec<(ModWord, u64)> = (0..self.order()).map(|i| self.decode(i)).collect();
        TwistedCochain::from_fn2(module, &self.group, |i, j| {
            let (w1, g1) = &decoded[i];
            let (w2, g2) = &decoded[j];
            f(w1, *g1, w2, *g2)
        })
    }
}

/// The cocycle `(u, v) -> s(u) s(v) s(uv)^-1` of
/// `1 -> [F]_{k+1} -> F/[F]_{k+2} x| H -> F/[F]_{k+1} x| H -> 1`, with the
/// normalized section `s(w, g) = (lift(w), g)`. One cochain per basis
/// coordinate of the kernel; each lives in `Z/n(k+1)`.
pub fn extension_cocycle(base: &FiniteSemidirect) -> Result<Vec<TwistedCochain>> {
    let total_class = base
        .class()
        .next()
        .ok_or_else(|| Error::invalid("no class above 3 is modelled"))?;
    let total = QuotientGroup::new(total_class, base.model.modulus())?;
    let q = &base.quotient;
    let model = &base.model;
    let hs = model.order();
    let words = q.order();
    let lift = |w: &ModWord| -> ModWord { *w };
    // g.lift(w) in the total quotient
    let lifted_action: Vec<Vec<ModWord>> = model
        .elements()
        .iter()
        .map(|&g| {
            let endo = model.quotient_action(g, &total, base.mode);
            (0..words).map(|w| endo.apply(&total, &lift(&q.word(w)))).collect()
        })
        .collect();
    let base_dims = base.class().dims();
    let top = total_class.top_coordinates();
    let modules: Vec<TwistedModule> = top
        .clone()
        .map(|i| TwistedModule::new(model.modulus(), COORDINATE_DEGREE[i] as u32))
        .collect::<Result<_>>()?;
    let n = base.order();
    let mut tables: Vec<Vec<u32>> = vec![Vec::with_capacity(n * n); top.len()];
    for i in 0..n {
        let (w1, _) = base.decode(i);
        let h1 = i % hs;
        for j in 0..n {
            let w2 = j / hs;
            let product = total.mul(&lift(&w1), &lifted_action[h1][w2]);
            let (w3, _) = base.decode(base.group.mul(i, j));
            let kernel = total.mul(&product, &total.inv(&lift(&w3)));
            if kernel[..base_dims].iter().any(|&t| t != 0) {
                return Err(Error::Internal(format!("section defect ({i}, {j}) left the kernel")));
            }
            for (table, k) in tables.iter_mut().zip(top.clone()) {
                table.push(kernel[k]);
            }
        }
    }
    tables
        .into_iter()
        .zip(modules)
        .map(|(values, module)| TwistedCochain::from_values(module, 2, n, values))
        .collect()
}
