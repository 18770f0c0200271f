//! Closed-form cochains on the semidirect products: coordinate cochains,
//! the extension classes in degrees 2 and 3, the maps `theta3`, and the
//! difference class with its cup-product forms.

use serde::{Deserialize, Serialize};

use crate::cohomology::{FiniteGroup, FiniteSemidirect, Homomorphism, TwistedCochain, TwistedModule};
use crate::error::{Error, Result};
use crate::galois::{ActionMode, GaloisModel};
use crate::magnus::Letter;
use crate::nilpotent::{Class, NilpotentElement};
use crate::quotient::ModWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinate {
    /// Exponent of `y`.
    A,
    /// Exponent of `x`.
    B,
    /// Exponent of `[x,y]`.
    C,
}

impl Coordinate {
    pub fn slot(self) -> usize {
        match self {
            Coordinate::A => 0,
            Coordinate::B => 1,
            Coordinate::C => 2,
        }
    }

    pub fn twist(self) -> u32 {
        if self == Coordinate::C { 2 } else { 1 }
    }
}

fn module(n: u64, twist: u32) -> Result<TwistedModule> {
    TwistedModule::new(n, twist)
}

fn require_odd(n: u64) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::UnsupportedModulus {
            modulus: n,
            reason: "binomial terms of the degree-3 formulas need 2 invertible",
        });
    }
    Ok(())
}

/// `C(t, 2) mod n`; depends only on `t mod n` for odd `n`, and only on
/// `t mod 2n` in general.
fn binom2(t: i128, n: i128) -> i128 {
    let t = t.rem_euclid(2 * n);
    (t * (t - 1) / 2).rem_euclid(n)
}

/// Cyclotomic data of `g`, reduced so that `(chi - 1)/2` and the binomials
/// stay exact: `chi mod 2n` (odd) and `f mod n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    pub chi: i128,
    pub f: i128,
}

impl Cyclotomic {
    pub fn of(model: &GaloisModel, g: u64) -> Self {
        Self::from_representative(model.chi_rep(g) as i128, model.modulus())
    }

    /// From any odd integer representative `chi` coprime to 3.
    pub fn from_representative(chi: i128, n: u64) -> Self {
        let n = n as i128;
        let f = ((chi * chi - 1) / 24).rem_euclid(n);
        Cyclotomic { chi: chi.rem_euclid(2 * n), f }
    }

    fn untwisted(self) -> Self {
        Cyclotomic { f: 0, ..self }
    }
}

/// Residues `(a, b, c)` of a word.
pub fn residues(w: &ModWord) -> [i128; 3] {
    [w[0] as i128, w[1] as i128, w[2] as i128]
}

pub fn phi2_value(n: u64, g1: Cyclotomic, u: [i128; 3], v: [i128; 3]) -> u64 {
    let n = n as i128;
    (u[1] * g1.chi % n * v[0]).rem_euclid(n) as u64
}

/// `c1 chi b2 + C(b1+1,2) chi a2 + b1 chi^2 a2 b2 - ((chi-1)/2) chi^2 c2`.
pub fn phi3_x_value(n: u64, g1: Cyclotomic, u: [i128; 3], v: [i128; 3]) -> Result<u64> {
    require_odd(n)?;
    let m = n as i128;
    let [_, b1, c1] = u;
    let [a2, b2, c2] = v;
    let chi = g1.chi % m;
    let half = ((g1.chi - 1) / 2).rem_euclid(m);
    let chi2 = chi * chi % m;
    let terms = [
        c1 * chi % m * b2,
        binom2(b1 + 1, m) * chi % m * a2,
        b1 * chi2 % m * a2 % m * b2,
        -(half * chi2 % m * c2),
    ];
    Ok(terms.iter().fold(0, |acc, t| (acc + t).rem_euclid(m)) as u64)
}

/// `c1 chi a2 + b1 C(chi a2 + 1, 2) - chi C(chi,2) c2 - f chi a2`.
pub fn phi3_y_value(n: u64, g1: Cyclotomic, u: [i128; 3], v: [i128; 3]) -> Result<u64> {
    require_odd(n)?;
    let m = n as i128;
    let [_, b1, c1] = u;
    let [a2, _, c2] = v;
    let chi = g1.chi % m;
    let chi_a2 = chi * a2 % m;
    let terms = [
        c1 * chi_a2,
        b1 * binom2(chi_a2 + 1, m),
        -(chi * binom2(g1.chi, m) % m * c2),
        -(g1.f * chi_a2),
    ];
    Ok(terms.iter().fold(0, |acc, t| (acc + t).rem_euclid(m)) as u64)
}

fn element_residues(w: &NilpotentElement, n: u64) -> Result<[i128; 3]> {
    let q = crate::quotient::QuotientGroup::new(w.class().min(Class::Two), n)?;
    Ok(residues(&q.reduce(&w.project(w.class().min(Class::Two))?)?))
}

/// Scalar forms on integer semidirect elements; the Galois component must
/// lie in `model`.
pub fn phi2_formula(
    model: &GaloisModel,
    u: &crate::galois::SemidirectElement,
    v: &crate::galois::SemidirectElement,
) -> Result<u64> {
    check_members(model, u, v)?;
    let n = model.modulus();
    Ok(phi2_value(n, Cyclotomic::of(model, u.g), element_residues(&u.word, n)?, element_residues(&v.word, n)?))
}

pub fn phi3_x_formula(
    model: &GaloisModel,
    u: &crate::galois::SemidirectElement,
    v: &crate::galois::SemidirectElement,
) -> Result<u64> {
    check_members(model, u, v)?;
    let n = model.modulus();
    require_odd(n)?;
    phi3_x_value(n, Cyclotomic::of(model, u.g), element_residues(&u.word, n)?, element_residues(&v.word, n)?)
}

/// `mode` selects whether the `f` term is present.
pub fn phi3_y_formula(
    model: &GaloisModel,
    mode: ActionMode,
    u: &crate::galois::SemidirectElement,
    v: &crate::galois::SemidirectElement,
) -> Result<u64> {
    check_members(model, u, v)?;
    let n = model.modulus();
    require_odd(n)?;
    let mut g1 = Cyclotomic::of(model, u.g);
    if mode == ActionMode::Untwisted {
        g1 = g1.untwisted();
    }
    phi3_y_value(n, g1, element_residues(&u.word, n)?, element_residues(&v.word, n)?)
}

fn check_members(
    model: &GaloisModel,
    u: &crate::galois::SemidirectElement,
    v: &crate::galois::SemidirectElement,
) -> Result<()> {
    if !model.contains(u.g) || !model.contains(v.g) {
        return Err(Error::invalid("Galois component outside the model"));
    }
    if u.word.class() != v.word.class() {
        return Err(Error::ClassMismatch { left: u.word.class().get(), right: v.word.class().get() });
    }
    Ok(())
}

pub fn coordinate_cochain(group: &FiniteSemidirect, which: Coordinate) -> Result<TwistedCochain> {
    if which == Coordinate::C && group.class() < Class::Two {
        return Err(Error::invalid("the [x,y] coordinate needs class at least 2"));
    }
    let md = module(group.model().modulus(), which.twist())?;
    Ok(group.cochain1(md, |w, _| w[which.slot()] as i128))
}

/// `g -> (chi(g) - 1)/2`, twist 1, on any group carrying odd `chi`.
pub fn chi_minus_one_half(group: &FiniteGroup, n: u64) -> Result<TwistedCochain> {
    Ok(TwistedCochain::from_fn1(module(n, 1)?, group, |g| {
        let chi = group.chi(g) as i128;
        (chi - 1) / 2
    }))
}

/// `g -> (chi(g)^2 - 1)/24`, twist 2.
pub fn f_cochain(group: &FiniteGroup, n: u64) -> Result<TwistedCochain> {
    Ok(TwistedCochain::from_fn1(module(n, 2)?, group, |g| {
        let chi = group.chi(g) as i128;
        (chi * chi - 1) / 24
    }))
}

pub fn phi2(base: &FiniteSemidirect) -> Result<TwistedCochain> {
    let model = base.model();
    let n = model.modulus();
    Ok(base.cochain2(module(n, 2)?, |u, g1, v, _| {
        phi2_value(n, Cyclotomic::of(model, g1), residues(u), residues(v)) as i128
    }))
}

/// The two degree-3 cochains `[phi3_x, phi3_y]` on a class-2 base; the `f`
/// term follows the base's action mode.
pub fn phi3(base: &FiniteSemidirect) -> Result<[TwistedCochain; 2]> {
    if base.class() != Class::Two {
        return Err(Error::invalid("degree-3 formulas live on the class-2 quotient"));
    }
    let model = base.model();
    let n = model.modulus();
    require_odd(n)?;
    let hs = model.order();
    let coeffs: Vec<Cyclotomic> = model
        .elements()
        .iter()
        .map(|&g| match base.mode() {
            ActionMode::Twisted => Cyclotomic::of(model, g),
            ActionMode::Untwisted => Cyclotomic::of(model, g).untwisted(),
        })
        .collect();
    let words: Vec<[i128; 3]> = (0..base.quotient().order()).map(|w| residues(&base.quotient().word(w))).collect();
    let md = module(n, 3)?;
    let eval = |which: fn(u64, Cyclotomic, [i128; 3], [i128; 3]) -> Result<u64>| {
        TwistedCochain::from_fn2(md, base.group(), |i, j| {
            which(n, coeffs[i % hs], words[i / hs], words[j / hs]).expect("odd modulus") as i128
        })
    };
    Ok([eval(phi3_x_value), eval(phi3_y_value)])
}

/// `y^a x^b [x,y]^g x| h -> y^a x^b [x,y]^(g + c1 b + c(h)) x| h` as an index
/// map between two class-2 semidirect products over the same `H`.
pub fn theta3_images(
    domain: &FiniteSemidirect,
    codomain: &FiniteSemidirect,
    c: &TwistedCochain,
    c1: u64,
) -> Result<Vec<usize>> {
    if domain.class() != Class::Two || codomain.class() != Class::Two {
        return Err(Error::invalid("theta3 acts between class-2 quotients"));
    }
    if domain.model() != codomain.model() {
        return Err(Error::invalid("theta3 needs the same Galois model on both sides"));
    }
    let n = domain.model().modulus();
    if c.arity() != 1 || c.order() != domain.model().order() || c.module() != module(n, 2)? {
        return Err(Error::invalid("c must be a 1-cochain on H with values in Z/n(2)"));
    }
    (0..domain.order())
        .map(|i| {
            let (mut w, g) = domain.decode(i);
            let h = domain.h_index(i);
            w[2] = ((w[2] as u64 + c1 * w[1] as u64 + c.at1(h)) % n) as u32;
            codomain.encode(&w, g)
        })
        .collect()
}

/// `theta3(1 x| g) = [x,y]^c(g) x| g`, extended over `x`, `y`; verified to be
/// a homomorphism.
pub fn theta3_build(
    domain: &FiniteSemidirect,
    codomain: &FiniteSemidirect,
    c: &TwistedCochain,
) -> Result<Homomorphism> {
    theta3_perturbed(domain, codomain, c, 0)
}

/// The family with `x x| 1 -> x [x,y]^c1 x| 1`.
pub fn theta3_perturbed(
    domain: &FiniteSemidirect,
    codomain: &FiniteSemidirect,
    c: &TwistedCochain,
    c1: u64,
) -> Result<Homomorphism> {
    let images = theta3_images(domain, codomain, c, c1)?;
    Homomorphism::verified(domain.group(), codomain.group(), images)
}

pub type Matrix2 = [[i64; 2]; 2];

/// Graded pieces of a map whose restriction to the word part sends `x`, `y`
/// to the given class-2 words: the degree-1 matrix and the degree-3 matrix
/// of its lift to class 3 (columns are images of `x, y` resp.
/// `[[x,y],x], [[x,y],y]`, rows the coordinates).
pub fn graded_maps(x_image: &ModWord, y_image: &ModWord) -> Result<(Matrix2, Matrix2)> {
    let lift = |w: &ModWord| NilpotentElement::new(Class::Three, w[0] as i64, w[1] as i64, w[2] as i64, 0, 0);
    let (x, y) = (lift(x_image), lift(y_image));
    let degree1 = [[x_image[1] as i64, y_image[1] as i64], [x_image[0] as i64, y_image[0] as i64]];
    let z = x.commutator(&y)?;
    let zx = z.commutator(&x)?;
    let zy = z.commutator(&y)?;
    let mut degree3 = [[0i64; 2]; 2];
    for (col, img) in [zx, zy].iter().enumerate() {
        let e = img.to_i64().ok_or_else(|| Error::Internal("exponent overflow".into()))?;
        if e[..3].iter().any(|&t| t != 0) {
            return Err(Error::Internal("degree-3 commutator left [F]_3".into()));
        }
        degree3[0][col] = e[3];
        degree3[1][col] = e[4];
    }
    Ok((degree1, degree3))
}

/// Images of `x x| 1` and `y x| 1` under a homomorphism of semidirect
/// products, as words.
pub fn word_images(
    hom: &Homomorphism,
    domain: &FiniteSemidirect,
    codomain: &FiniteSemidirect,
) -> Result<(ModWord, ModWord)> {
    let q = domain.quotient();
    let read = |w: ModWord| -> Result<ModWord> {
        let (img, g) = codomain.decode(hom.image(domain.encode(&w, 1)?));
        if g != 1 {
            return Err(Error::invalid("map does not preserve the word subgroup"));
        }
        Ok(img)
    };
    Ok((read(q.generator_x())?, read(q.generator_y())?))
}

/// `[D_x, D_y]` with
/// `D_x = -c(g1) chi b2 + ((chi-1)/2) chi^2 c(g2)` and
/// `D_y = -c(g1) chi a2 + chi C(chi,2) c(g2) + f(g1) chi a2`,
/// where `c`, `f` are 1-cochains on `H` with values in `Z/n(2)`.
pub fn difference_class(
    base: &FiniteSemidirect,
    c: &TwistedCochain,
    f: &TwistedCochain,
) -> Result<[TwistedCochain; 2]> {
    let model = base.model();
    let n = model.modulus();
    require_odd(n)?;
    let hs = model.order();
    for ch in [c, f] {
        if ch.arity() != 1 || ch.order() != hs || ch.module() != module(n, 2)? {
            return Err(Error::invalid("c and f must be 1-cochains on H with values in Z/n(2)"));
        }
    }
    let m = n as i128;
    let md = module(n, 3)?;
    let dx = base.cochain2(md, |_, g1, v, g2| {
        let h1 = model.index_of(g1).expect("member");
        let h2 = model.index_of(g2).expect("member");
        let k = Cyclotomic::of(model, g1);
        let chi = k.chi % m;
        let half = ((k.chi - 1) / 2).rem_euclid(m);
        -(c.at1(h1) as i128 * chi % m * v[1] as i128) + half * (chi * chi % m) % m * c.at1(h2) as i128
    });
    let dy = base.cochain2(md, |_, g1, v, g2| {
        let h1 = model.index_of(g1).expect("member");
        let h2 = model.index_of(g2).expect("member");
        let k = Cyclotomic::of(model, g1);
        let chi = k.chi % m;
        let a2 = v[0] as i128;
        -(c.at1(h1) as i128 * chi % m * a2)
            + chi * binom2(k.chi, m) % m * c.at1(h2) as i128
            + f.at1(h1) as i128 * chi % m * a2
    });
    Ok([dx, dy])
}

/// `[-c u b + h u c, -c u a + h u c + f u a]` with `h = (chi-1)/2`, all
/// built from cup products of pulled-back 1-cochains.
pub fn cup_forms(
    base: &FiniteSemidirect,
    h_group: &FiniteGroup,
    c: &TwistedCochain,
    f: &TwistedCochain,
) -> Result<[TwistedCochain; 2]> {
    let n = base.model().modulus();
    let proj = base.projection(h_group)?;
    let g = base.group();
    let c = c.pullback(&proj, g, h_group)?;
    let f = f.pullback(&proj, g, h_group)?;
    let half = chi_minus_one_half(h_group, n)?.pullback(&proj, g, h_group)?;
    let a = coordinate_cochain(base, Coordinate::A)?;
    let b = coordinate_cochain(base, Coordinate::B)?;
    let half_c = half.cup11(&c, g)?;
    let x = c.cup11(&b, g)?.neg().add(&half_c)?;
    let y = c.cup11(&a, g)?.neg().add(&half_c)?.add(&f.cup11(&a, g)?)?;
    Ok([x, y])
}

/// `g -> letter^kappa(g) x| g` from `H` into a semidirect product over `H`;
/// a homomorphism exactly when `kappa` is a `chi`-twisted 1-cocycle.
pub fn kummer_section(
    target: &FiniteSemidirect,
    h_group: &FiniteGroup,
    kappa: &TwistedCochain,
    letter: Letter,
) -> Result<Homomorphism> {
    let model = target.model();
    if kappa.arity() != 1 || kappa.order() != model.order() || kappa.module().modulus != model.modulus() {
        return Err(Error::invalid("kappa must be a 1-cochain on H mod n"));
    }
    let images = model
        .elements()
        .iter()
        .enumerate()
        .map(|(h, &g)| {
            let mut w = target.quotient().identity();
            let slot = if letter == Letter::Y { 0 } else { 1 };
            w[slot] = kappa.at1(h) as u32;
            target.encode(&w, g)
        })
        .collect::<Result<Vec<_>>>()?;
    Homomorphism::verified(h_group, target.group(), images)
}

/// All twisted 1-cocycles `H -> Z/n(j)`, by enumeration of generator values
/// (lexicographic). Bounded by `n^|gens| <= 10^6`.
pub fn enumerate_cocycles(h_group: &FiniteGroup, md: TwistedModule) -> Result<Vec<TwistedCochain>> {
    let gens = h_group.generators();
    let n = md.modulus;
    let space = (n as u128).checked_pow(gens.len() as u32).unwrap_or(u128::MAX);
    if space > 1_000_000 {
        return Err(Error::invalid("too many candidate 1-cochains to enumerate"));
    }
    let tree = h_group.spanning_tree();
    let mult = md.multipliers(h_group);
    let mut out = Vec::new();
    let mut values = vec![0u64; gens.len()];
    for _ in 0..space as u64 {
        let mut table = vec![0u64; h_group.order()];
        for &(h, link) in &tree[1..] {
            let (g, slot) = link.expect("parent");
            table[h] = (table[g] + mult[g] * values[slot]) % n;
        }
        let ch = TwistedCochain::from_values(md, 1, h_group.order(), table.iter().map(|&v| v as u32).collect())?;
        if ch.is_cocycle(h_group)? {
            out.push(ch);
        }
        for v in values.iter_mut().rev() {
            *v += 1;
            if *v < n {
                break;
            }
            *v = 0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::galois_group;
    use crate::galois::SemidirectElement;

    fn el(a: i64, b: i64, c: i64) -> NilpotentElement {
        NilpotentElement::new(Class::Two, a, b, c, 0, 0)
    }

    #[test]
    fn phi2_examples() {
        let m = GaloisModel::full(72, 3).unwrap();
        let y = SemidirectElement::new(el(1, 0, 0), 1);
        let x = SemidirectElement::new(el(0, 1, 0), 1);
        assert_eq!(phi2_formula(&m, &y, &x).unwrap(), 0);
        assert_eq!(phi2_formula(&m, &x, &y).unwrap(), 1);
    }

    #[test]
    fn phi3_examples() {
        let m = GaloisModel::full(72, 3).unwrap();
        let x = SemidirectElement::new(el(0, 1, 0), 1);
        let y = SemidirectElement::new(el(1, 0, 0), 1);
        assert_eq!(phi3_x_formula(&m, &x, &y).unwrap(), 1);
        let u = SemidirectElement::new(el(5, 0, 0), 1);
        let v = SemidirectElement::new(el(0, 2, 0), 7);
        assert_eq!(phi3_x_formula(&m, &u, &v).unwrap(), 0);
        let id = SemidirectElement::identity(Class::Two);
        assert_eq!(phi3_y_formula(&m, ActionMode::Twisted, &id, &id).unwrap(), 0);
    }

    #[test]
    fn phi3_y_f_term_at_large_modulus() {
        let n = 1001;
        let m = GaloisModel::full(24 * 1001, n).unwrap();
        let g = SemidirectElement::new(NilpotentElement::identity(Class::Two), 5);
        let y = SemidirectElement::new(el(1, 0, 0), 1);
        assert_eq!(phi3_y_formula(&m, ActionMode::Twisted, &g, &y).unwrap(), n - 5);
        assert_eq!(phi3_y_formula(&m, ActionMode::Untwisted, &g, &y).unwrap(), 0);
    }

    #[test]
    fn even_modulus_unsupported() {
        let m = GaloisModel::full(48, 2).unwrap();
        let x = SemidirectElement::new(el(0, 1, 0), 1);
        assert!(matches!(phi3_x_formula(&m, &x, &x), Err(Error::UnsupportedModulus { modulus: 2, .. })));
    }

    #[test]
    fn representative_independence() {
        for n in [3u64, 5, 7] {
            let level = 24 * n;
            for chi in (1..level as i128).filter(|c| c % 2 == 1 && c % 3 != 0) {
                let k = Cyclotomic::from_representative(chi, n);
                let k2 = Cyclotomic::from_representative(chi + level as i128, n);
                assert_eq!(k.f, k2.f);
                for u in [[1, 2, 0], [0, n as i128 - 1, 2], [2, 1, 1]] {
                    let v = [u[2], u[0], u[1]];
                    assert_eq!(phi3_x_value(n, k, u, v).unwrap(), phi3_x_value(n, k2, u, v).unwrap());
                    assert_eq!(phi3_y_value(n, k, u, v).unwrap(), phi3_y_value(n, k2, u, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn coordinate_cochains() {
        let m = GaloisModel::cyclic(72, 3, 6).unwrap();
        let base = FiniteSemidirect::new(&m, Class::Two, ActionMode::Untwisted).unwrap();
        let g = base.group();
        let a = coordinate_cochain(&base, Coordinate::A).unwrap();
        let b = coordinate_cochain(&base, Coordinate::B).unwrap();
        assert!(a.is_cocycle(g).unwrap() && b.is_cocycle(g).unwrap());
        // the [x,y] coordinate trivializes b u a instead
        let c = coordinate_cochain(&base, Coordinate::C).unwrap();
        assert_eq!(c.coboundary(g).unwrap(), b.cup11(&a, g).unwrap().neg());
    }

    #[test]
    fn theta3_zero_is_the_inclusion() {
        let m = GaloisModel::cyclic(120, 5, 4).unwrap();
        let h = galois_group(&m).unwrap();
        let dom = FiniteSemidirect::new(&m, Class::Two, ActionMode::Untwisted).unwrap();
        let cod = FiniteSemidirect::new(&m, Class::Two, ActionMode::Twisted).unwrap();
        let zero = TwistedCochain::zero(TwistedModule::new(5, 2).unwrap(), 1, h.order());
        let hom = theta3_build(&dom, &cod, &zero).unwrap();
        assert_eq!(hom.images(), (0..dom.order()).collect::<Vec<_>>());
        let (xi, yi) = word_images(&hom, &dom, &cod).unwrap();
        assert_eq!(graded_maps(&xi, &yi).unwrap(), ([[1, 0], [0, 1]], [[1, 0], [0, 1]]));
    }

    #[test]
    fn perturbed_theta3_fails() {
        let m = GaloisModel::cyclic(72, 3, 6).unwrap();
        let dom = FiniteSemidirect::new(&m, Class::Two, ActionMode::Untwisted).unwrap();
        let cod = FiniteSemidirect::new(&m, Class::Two, ActionMode::Twisted).unwrap();
        let zero = TwistedCochain::zero(TwistedModule::new(3, 2).unwrap(), 1, m.order());
        assert!(matches!(
            theta3_perturbed(&dom, &cod, &zero, 1),
            Err(Error::NotHomomorphism { .. })
        ));
    }

    #[test]
    fn difference_class_with_zero_inputs() {
        let m = GaloisModel::cyclic(72, 3, 6).unwrap();
        let h = galois_group(&m).unwrap();
        let base = FiniteSemidirect::new(&m, Class::Two, ActionMode::Untwisted).unwrap();
        let zero = TwistedCochain::zero(TwistedModule::new(3, 2).unwrap(), 1, h.order());
        let [dx, dy] = difference_class(&base, &zero, &zero).unwrap();
        assert!(dx.is_zero() && dy.is_zero());
        let f = f_cochain(&h, 3).unwrap();
        let [dx, dy] = difference_class(&base, &zero, &f).unwrap();
        assert!(dx.is_zero());
        let proj = base.projection(&h).unwrap();
        let fa = f
            .pullback(&proj, base.group(), &h)
            .unwrap()
            .cup11(&coordinate_cochain(&base, Coordinate::A).unwrap(), base.group())
            .unwrap();
        assert_eq!(dy, fa);
    }

    #[test]
    fn enumerated_cocycles_for_cyclic_h() {
        let m = GaloisModel::cyclic(120, 5, 4).unwrap();
        let h = galois_group(&m).unwrap();
        let z1 = enumerate_cocycles(&h, TwistedModule::new(5, 2).unwrap()).unwrap();
        assert_eq!(z1.len(), 5);
    }
}
