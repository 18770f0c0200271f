//! The end-to-end pipeline: `theta3` normal form and `c1` forcing, the
//! difference identity, the mod-2 pullbacks along Kummer sections, and the
//! Hilbert-symbol contradiction; plus the reduction to `rho^ab = iota^ab`.

use serde::{Deserialize, Serialize};

use crate::arithmetic::{cup_pairing, nondegeneracy_witness, preferred_place, SquareClass, WitnessSearch};
use crate::cocycles::{
    chi_minus_one_half, coordinate_cochain, enumerate_cocycles, f_cochain, kummer_section, phi2, Coordinate,
};
use crate::cohomology::{cohomologous, galois_group, FiniteSemidirect, TwistedCochain, TwistedModule};
use crate::error::{Error, Result};
use crate::galois::{ActionMode, GaloisModel};
use crate::magnus::Letter;
use crate::models::{h_cochain, shift_map, Axis, CochainIdentity, DifferenceContext, ModelSpec};
use crate::nilpotent::Class;
use crate::quotient::QuotientGroup;
use crate::report::{Check, PullbackClaim, Report, Verdict, Witness};
use crate::suites::{anchors, kummer_checks, model_label, run_theta3};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionConfig {
    pub level: u64,
    pub modulus: u64,
    pub bound: u64,
    pub seed: u64,
    pub samples: usize,
    /// Subgroup generators; the full unit group when `None`.
    pub generators: Option<Vec<u64>>,
    /// Treat 2 as a square in the ground field.
    pub control_sqrt2: bool,
}

impl Default for ObstructionConfig {
    fn default() -> Self {
        ObstructionConfig {
            level: 72,
            modulus: 3,
            bound: 100,
            seed: 0,
            samples: 10_000,
            generators: None,
            control_sqrt2: false,
        }
    }
}

impl ObstructionConfig {
    pub fn model(&self) -> Result<GaloisModel> {
        match &self.generators {
            Some(g) => GaloisModel::with_generators(self.level, self.modulus, g),
            None => GaloisModel::full(self.level, self.modulus),
        }
    }
}

const TWO: SquareClass = SquareClass { sign: 1, radical: 2 };

/// Level of the mod-2 model: the least multiple of `level` divisible by 48.
pub fn mod2_level(level: u64) -> u64 {
    num_integer::lcm(level, 48)
}

/// Deterministic subsample of at most `k` items.
fn sample<T: Clone>(items: &[T], k: usize, seed: u64) -> Vec<T> {
    use rand::seq::index;
    use rand::SeedableRng;
    if items.len() <= k {
        return items.to_vec();
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, items.len(), k).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| items[i].clone()).collect()
}

pub fn run_obstruction(cfg: &ObstructionConfig) -> Result<Report> {
    let model = cfg.model()?;
    let n = cfg.modulus;
    if n.is_multiple_of(2) {
        return Err(Error::invalid("the degree-3 steps need an odd coefficient modulus n"));
    }
    let level2 = mod2_level(cfg.level);
    let mut report = Report::new(if cfg.control_sqrt2 { "obstruct --control-sqrt2" } else { "obstruct" })
        .parameter("N", cfg.level)
        .parameter("n", n)
        .parameter("bound", cfg.bound)
        .parameter("seed", cfg.seed)
        .parameter("samples", cfg.samples)
        .parameter("model", model_label(&model))
        .parameter("mod2_level", level2)
        .parameter("control_sqrt2", cfg.control_sqrt2);

    // (1) theta3 normal form, c1 forcing
    let theta = run_theta3(std::slice::from_ref(&model))?;
    for mut check in theta.checks {
        check.name = format!("step 1: {}", check.name);
        report.push(check);
    }

    // (2) difference identity for sampled twist-2 cocycles
    let ctx = DifferenceContext::new(&model)?;
    let spec = ModelSpec::new(&model, Class::Two, ActionMode::Untwisted);
    let cocycles = enumerate_cocycles(&ctx.h, TwistedModule::new(n, 2)?)?;
    for c in sample(&cocycles, cfg.samples, cfg.seed) {
        let values = c.values().to_vec();
        let pairs = [
            (ctx.extracted(&c)?, ctx.formula(&c)?, "extracted difference ~ formula", true),
            (ctx.formula(&c)?, ctx.cup(&c)?, "formula ~ cup form", false),
        ];
        for (left, right, what, extracted) in pairs {
            for axis in Axis::BOTH {
                let i = axis.index();
                let beta = cohomologous(&left[i], &right[i], ctx.untwisted.group())?;
                let identity = if extracted {
                    CochainIdentity::Difference { axis, c: values.clone() }
                } else {
                    CochainIdentity::CupForm { axis, c: values.clone() }
                };
                report.push(Check::new(
                    format!("step 2: c={values:?}: {what} {:?}", axis),
                    anchors::DIFFERENCE,
                    beta.is_some(),
                    beta.map(|b| Witness::Coboundary { model: spec.clone(), identity, beta: b.values().to_vec() }),
                ));
            }
        }
    }

    // (3) mod-2 shadow of the first equality: c-bar pairs trivially with
    // every class, hence vanishes
    let model2 = GaloisModel::full(level2, 2)?;
    let spec2 = ModelSpec::new(&model2, Class::Two, ActionMode::Untwisted);
    let h2 = galois_group(&model2)?;
    let kummer2 = enumerate_cocycles(&h2, TwistedModule::new(2, 1)?)?;
    let [minus_one_check, two_check] = <[Check; 2]>::try_from(kummer_checks(level2)?).expect("two checks");
    report.push(Check { name: format!("step 3: {}", minus_one_check.name), ..minus_one_check });
    for kappa in &kummer2 {
        let values = kappa.values().to_vec();
        let ok = kummer_pullback_holds(&spec2, &values, PullbackClaim::XSectionLinear)?;
        report.push(Check::new(
            format!("step 3: x-section kappa={}: pullback of b + (chi-1)/2 is kappa + (chi-1)/2", bits(&values)),
            anchors::C_BAR,
            ok,
            Some(Witness::KummerPullback { model: spec2.clone(), kappa: values, claim: PullbackClaim::XSectionLinear }),
        ));
    }
    for u in SquareClass::enumerate(cfg.bound).into_iter().filter(|u| !u.is_trivial()) {
        let check = match nondegeneracy_witness(&u, cfg.bound)? {
            WitnessSearch::Found { partner, place } => Check::new(
                format!("step 3: c-bar = {u} excluded: the x-section at beta = {} pairs it with kappa({partner}) nontrivially", -partner.value()),
                anchors::C_BAR,
                true,
                Some(Witness::Pairing { u, partner, place }),
            ),
            _ => Check::new(format!("step 3: c-bar = {u} not excluded"), anchors::C_BAR, false, None),
        };
        report.push(check);
    }

    // (4) second equality with c-bar = 0: f-bar u kappa(alpha) = 0
    report.push(Check { name: format!("step 4: {}", two_check.name), ..two_check });
    for kappa in &kummer2 {
        let values = kappa.values().to_vec();
        let ok = kummer_pullback_holds(&spec2, &values, PullbackClaim::YSectionCup)?;
        report.push(Check::new(
            format!("step 4: y-section kappa={}: pullback of f u a is f u kappa", bits(&values)),
            anchors::F_CUP_A,
            ok,
            Some(Witness::KummerPullback { model: spec2.clone(), kappa: values, claim: PullbackClaim::YSectionCup }),
        ));
    }

    // (5) kappa(2) u kappa(alpha) = 0 for all alpha contradicts nondegeneracy
    let two = if cfg.control_sqrt2 { SquareClass::ONE } else { TWO };
    match nondegeneracy_witness(&two, cfg.bound)? {
        WitnessSearch::Found { partner, place } => {
            report.push(Check::new(
                format!("step 5: (2, {partner})_{place} = -1"),
                anchors::CONTRADICTION,
                true,
                Some(Witness::Pairing { u: TWO, partner, place }),
            ));
            report.verdict = Some(Verdict::Contradiction);
        }
        WitnessSearch::TrivialClass => {
            report.push(Check::new(
                "step 5: 2 is a square, so kappa(2) vanishes and no partner exists",
                anchors::CONTRADICTION,
                true,
                Some(Witness::TrivialClass { class: TWO, modulo: Some(TWO) }),
            ));
            report.verdict = Some(Verdict::NoObstruction);
        }
        WitnessSearch::NotFound { bound } => {
            report.push(Check::new(
                format!("step 5: no partner for 2 among primes up to {bound}"),
                anchors::CONTRADICTION,
                false,
                None,
            ));
        }
    }
    Ok(report)
}

fn bits(values: &[u32]) -> String {
    values.iter().map(|v| char::from(b'0' + *v as u8)).collect()
}

/// Pullback identities along Kummer sections in the class-2 untwisted model.
pub fn kummer_pullback_holds(spec: &ModelSpec, kappa: &[u32], claim: PullbackClaim) -> Result<bool> {
    let target = spec.with(Class::Two, ActionMode::Untwisted).semidirect()?;
    let h = galois_group(target.model())?;
    let n = spec.modulus;
    let k = h_cochain(&h, n, 1, kappa)?;
    let proj = target.projection(&h)?;
    let g = target.group();
    match claim {
        PullbackClaim::XSectionLinear => {
            let section = kummer_section(&target, &h, &k, Letter::X)?;
            let half = chi_minus_one_half(&h, n)?;
            let total = coordinate_cochain(&target, Coordinate::B)?.add(&half.pullback(&proj, g, &h)?)?;
            Ok(total.pullback(&section, &h, g)? == k.add(&half)?)
        }
        PullbackClaim::YSectionCup => {
            let section = kummer_section(&target, &h, &k, Letter::Y)?;
            let f = f_cochain(&h, n)?;
            let cup = f.pullback(&proj, g, &h)?.cup11(&coordinate_cochain(&target, Coordinate::A)?, g)?;
            Ok(cup.pullback(&section, &h, g)? == f.cup11(&k, &h)?)
        }
    }
}

/// `rho^*(b u a) = (b + beta) u (a + alpha)` on the nose, `rho` the shift map.
pub fn shifted_pullback_holds(spec: &ModelSpec, alpha: &[u32], beta: &[u32]) -> Result<bool> {
    let base = spec.with(Class::One, spec.mode).semidirect()?;
    let h = galois_group(base.model())?;
    let n = spec.modulus;
    let (al, be) = (h_cochain(&h, n, 1, alpha)?, h_cochain(&h, n, 1, beta)?);
    let rho = shift_map(&base, &al, &be)?;
    let g = base.group();
    let proj = base.projection(&h)?;
    let a = coordinate_cochain(&base, Coordinate::A)?.add(&al.pullback(&proj, g, &h)?)?;
    let b = coordinate_cochain(&base, Coordinate::B)?.add(&be.pullback(&proj, g, &h)?)?;
    Ok(phi2(&base)?.pullback(&rho, g, g)? == b.cup11(&a, g)?)
}

/// Images of conjugation by `y^s x^t x| 1`, `conjugator = [s, t]`.
pub fn conjugation_images(base: &FiniteSemidirect, conjugator: [u32; 2]) -> Result<Vec<usize>> {
    let mut w = base.quotient().identity();
    w[0] = conjugator[0];
    w[1] = conjugator[1];
    let c = base.encode(&w, 1)?;
    let g = base.group();
    let c_inv = g.inv(c);
    Ok((0..base.order()).map(|u| g.mul(g.mul(c, u), c_inv)).collect())
}

pub fn shift_reduction(level: u64, modulus: u64, radical_bound: u64, bound: u64) -> Result<Report> {
    let mut report = Report::new("verify reduction")
        .parameter("N", level)
        .parameter("n", modulus)
        .parameter("radical_bound", radical_bound)
        .parameter("bound", bound);

    // square-class model of (b + beta) u (a + alpha) = b u a
    let classes = SquareClass::enumerate(radical_bound);
    for &alpha in &classes {
        for &beta in &classes {
            if alpha.is_trivial() && beta.is_trivial() {
                report.push(Check::new(
                    "shift (1, 1): the shifted pairing is the original one",
                    anchors::SHIFT,
                    true,
                    Some(Witness::TrivialClass { class: SquareClass::ONE, modulo: None }),
                ));
                continue;
            }
            report.push(shift_rejection(alpha, beta, bound)?);
        }
    }

    // finite model: shifts by cocycles, coboundary shifts are inner
    let model = GaloisModel::full(level, modulus)?;
    let spec = ModelSpec::new(&model, Class::One, ActionMode::Untwisted);
    let base = spec.semidirect()?;
    let h = galois_group(&model)?;
    let label = model_label(&model);
    let md = TwistedModule::new(modulus, 1)?;
    let z1 = enumerate_cocycles(&h, md)?;
    for alpha in &z1 {
        for beta in &z1 {
            let (a, b) = (alpha.values().to_vec(), beta.values().to_vec());
            let ok = shifted_pullback_holds(&spec, &a, &b)?;
            report.push(Check::new(
                format!("{label}: shift by alpha={a:?}, beta={b:?} pulls b u a back to (b + beta) u (a + alpha)"),
                anchors::SHIFT,
                ok,
                Some(Witness::ShiftedPullback { model: spec.clone(), alpha: a, beta: b }),
            ));
        }
    }
    let phi = phi2(&base)?;
    for va in 0..modulus {
        for vb in 0..modulus {
            let alpha = TwistedCochain::coboundary0(md, &h, va);
            let beta = TwistedCochain::coboundary0(md, &h, vb);
            let (a, b) = (alpha.values().to_vec(), beta.values().to_vec());
            let rho = shift_map(&base, &alpha, &beta)?;
            let conjugator = (0..modulus * modulus)
                .map(|k| [(k / modulus) as u32, (k % modulus) as u32])
                .find(|&cj| conjugation_images(&base, cj).is_ok_and(|img| img == rho.images()));
            report.push(Check::new(
                format!("{label}: coboundary shift ({va}, {vb}) is an inner automorphism"),
                anchors::INNER,
                conjugator.is_some(),
                conjugator.map(|conjugator| Witness::InnerShift { model: spec.clone(), alpha: a.clone(), beta: b.clone(), conjugator }),
            ));
            let shifted = phi.pullback(&rho, base.group(), base.group())?;
            let witness = cohomologous(&shifted, &phi, base.group())?;
            report.push(Check::new(
                format!("{label}: coboundary shift ({va}, {vb}) keeps b u a in its class"),
                anchors::INNER,
                witness.is_some(),
                witness.map(|w| Witness::Coboundary {
                    model: spec.clone(),
                    identity: CochainIdentity::ShiftedPhi2 { alpha: a, beta: b },
                    beta: w.values().to_vec(),
                }),
            ));
        }
    }
    for check in verify_h1_basis(modulus, None)? {
        report.push(check);
    }
    Ok(report)
}

/// Pulls `b u a` back along `g -> y^kappa(s) x^kappa(t) x| g`: the original
/// side becomes `(t, s)` and the shifted side `(t beta, s alpha)`. Chooses
/// `t, s` so that the first vanishes and the second does not.
pub fn shift_rejection(alpha: SquareClass, beta: SquareClass, bound: u64) -> Result<Check> {
    let (t, s, partner_of) = if !beta.is_trivial() {
        match nondegeneracy_witness(&beta, bound)? {
            WitnessSearch::Found { partner, .. } => (SquareClass::ONE, alpha.mul(&partner), beta),
            _ => return Ok(Check::new(format!("shift ({alpha}, {beta}) not rejected"), anchors::SHIFT, false, None)),
        }
    } else {
        match nondegeneracy_witness(&alpha, bound)? {
            WitnessSearch::Found { partner, .. } => (partner, SquareClass::ONE, alpha),
            _ => return Ok(Check::new(format!("shift ({alpha}, {beta}) not rejected"), anchors::SHIFT, false, None)),
        }
    };
    let original = cup_pairing(&t, &s)?;
    let shifted = cup_pairing(&t.mul(&beta), &s.mul(&alpha))?;
    let place = preferred_place(&shifted);
    let ok = original.is_zero() && place.is_some();
    Ok(Check::new(
        format!("shift (alpha={alpha}, beta={beta}) rejected via ({t}, {s}); nontrivial class {partner_of}"),
        anchors::SHIFT,
        ok,
        place.map(|place| Witness::ShiftRejection { alpha, beta, s, t, place }),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct H1BasisResult {
    pub basis_ok: bool,
    /// Matrix of the induced map on `Hom(F^ab, Z/n)` in the basis `x*, y*`.
    pub pulled_back: [[u64; 2]; 2],
    pub identity: bool,
}

/// `x*`, `y*` form a basis of `Hom(F/[F]_2, Z/n)`, and the map induced by
/// the endomorphism with matrix `matrix` (columns: images of `x`, `y` in
/// the coordinates `x`, `y`; the identity when `None`) is computed in it.
pub fn h1_basis_check(n: u64, matrix: Option<[[u64; 2]; 2]>) -> Result<H1BasisResult> {
    let q = QuotientGroup::new(Class::One, n)?;
    let order = q.order();
    let words: Vec<_> = (0..order).map(|i| q.word(i)).collect();
    let x_star: Vec<u64> = words.iter().map(|w| w[1] as u64).collect();
    let y_star: Vec<u64> = words.iter().map(|w| w[0] as u64).collect();
    let is_hom = |f: &[u64]| {
        (0..order).all(|i| (0..order).all(|j| f[q.index(&q.mul(&words[i], &words[j]))] == (f[i] + f[j]) % n))
    };
    let (xi, yi) = (q.index(&q.generator_x()), q.index(&q.generator_y()));
    let mut basis_ok = is_hom(&x_star) && is_hom(&y_star);
    basis_ok &= x_star[xi] == 1 % n && x_star[yi] == 0 && y_star[xi] == 0 && y_star[yi] == 1 % n;
    let mut combos = std::collections::BTreeSet::new();
    for s in 0..n {
        for t in 0..n {
            combos.insert((0..order).map(|i| (s * x_star[i] + t * y_star[i]) % n).collect::<Vec<_>>());
        }
    }
    // homomorphisms of a free abelian group of rank 2 are fixed by two values
    basis_ok &= combos.len() as u64 == n * n;
    let m = matrix.unwrap_or([[1, 0], [0, 1]]);
    let endo = |w: &crate::quotient::ModWord| {
        let (b, a) = (w[1] as u64, w[0] as u64);
        let x_coord = (m[0][0] * b + m[0][1] * a) % n;
        let y_coord = (m[1][0] * b + m[1][1] * a) % n;
        q.index(&[y_coord as u32, x_coord as u32, 0, 0, 0])
    };
    let pull = |f: &[u64]| -> [u64; 2] {
        [f[endo(&words[xi])], f[endo(&words[yi])]]
    };
    let px = pull(&x_star);
    let py = pull(&y_star);
    let pulled_back = [[px[0], py[0]], [px[1], py[1]]];
    let identity = pulled_back == [[1 % n, 0], [0, 1 % n]];
    Ok(H1BasisResult { basis_ok, pulled_back, identity })
}

pub fn verify_h1_basis(n: u64, matrix: Option<[[u64; 2]; 2]>) -> Result<Vec<Check>> {
    let r = h1_basis_check(n, matrix)?;
    let m = matrix.unwrap_or([[1, 0], [0, 1]]);
    let mut out = vec![Check::new(
        format!("x*, y* form a basis of Hom(F^ab, Z/{n})"),
        anchors::H1_BASIS,
        r.basis_ok,
        Some(Witness::H1Basis { modulus: n, matrix: m, identity: r.identity }),
    )];
    if matrix.is_none() {
        out.push(Check::new(
            format!("the inclusion induces the identity matrix on Hom(F^ab, Z/{n})"),
            anchors::H1_BASIS,
            r.identity,
            Some(Witness::H1Basis { modulus: n, matrix: m, identity: r.identity }),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::Place;

    #[test]
    fn h1_basis_identity_and_non_identity() {
        for n in [2, 3, 5] {
            let r = h1_basis_check(n, None).unwrap();
            assert!(r.basis_ok && r.identity, "n = {n}");
        }
        // x -> x + y, y -> y; the dual map is the transpose
        let r = h1_basis_check(3, Some([[1, 0], [1, 1]])).unwrap();
        assert!(r.basis_ok);
        assert!(!r.identity);
        assert_eq!(r.pulled_back, [[1, 1], [0, 1]]);
        // scalar 1 + n is the identity mod n
        assert!(h1_basis_check(3, Some([[4, 0], [0, 4]])).unwrap().identity);
    }

    #[test]
    fn shift_by_three_rejected() {
        let three = SquareClass::new(1, 3).unwrap();
        let check = shift_rejection(SquareClass::ONE, three, 100).unwrap();
        assert!(check.passed());
        let Some(Witness::ShiftRejection { s, t, place, .. }) = check.witness else { panic!("no witness") };
        assert!(t.is_trivial());
        assert!(cup_pairing(&t, &s).unwrap().is_zero());
        assert_eq!(cup_pairing(&three, &s).unwrap().symbols[&place], -1);
        assert_ne!(place, Place::Infinity);
    }

    #[test]
    fn kummer_pullbacks_on_mod_two_model() {
        let model = GaloisModel::full(48, 2).unwrap();
        let spec = ModelSpec::new(&model, Class::Two, ActionMode::Untwisted);
        let h = galois_group(&model).unwrap();
        let cocycles = enumerate_cocycles(&h, TwistedModule::new(2, 1).unwrap()).unwrap();
        // (Z/48)^* = Z/2 x Z/4 x Z/2
        assert_eq!(cocycles.len(), 8);
        for kappa in &cocycles {
            for claim in [PullbackClaim::XSectionLinear, PullbackClaim::YSectionCup] {
                assert!(kummer_pullback_holds(&spec, kappa.values(), claim).unwrap());
            }
        }
    }

    #[test]
    fn control_toggle_flips_the_verdict() {
        let cfg = ObstructionConfig { samples: 3, bound: 20, ..Default::default() };
        let report = run_obstruction(&cfg).unwrap();
        assert!(report.passed());
        assert_eq!(report.verdict, Some(Verdict::Contradiction));
        let control = run_obstruction(&ObstructionConfig { control_sqrt2: true, ..cfg }).unwrap();
        assert!(control.passed());
        assert_eq!(control.verdict, Some(Verdict::NoObstruction));
    }

    #[test]
    fn even_modulus_rejected() {
        let cfg = ObstructionConfig { level: 48, modulus: 2, ..Default::default() };
        assert!(matches!(run_obstruction(&cfg), Err(Error::InvalidInput(_))));
    }
}
