//! Check suites behind the `verify` subcommands. Each returns a report whose
//! witnesses can be re-verified independently.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arithmetic::{hilbert_integers, kummer_bit, relevant_places, sqrt_minus_one, sqrt_two, Place};
use crate::cocycles::{
    enumerate_cocycles, graded_maps, kummer_section, phi2, phi3, theta3_perturbed, word_images,
};
use crate::cohomology::{
    cohomologous, extension_cocycle, galois_group, FiniteSemidirect, TwistedCochain, TwistedModule,
};
use crate::error::{Error, Result};
use crate::galois::{ActionMode, GaloisModel};
use crate::magnus::{oracle_inverse, oracle_multiply, Letter};
use crate::models::{Axis, CochainIdentity, DifferenceContext, ModelSpec};
use crate::nilpotent::{lcs_graded_rank, Class, NilpotentElement};
use crate::report::{Check, KummerRoot, NamedCochain, Report, Witness};

pub mod anchors {
    pub const GROUP_LAW: &str = "collection-law";
    pub const LCS: &str = "lcs-graded-ranks";
    pub const PHI2: &str = "degree-2-extension-class";
    pub const PHI3: &str = "degree-3-extension-class";
    pub const DIFFERENCE: &str = "difference-class-cup-identity";
    pub const THETA3: &str = "theta3-normal-form";
    pub const C1_FORCING: &str = "c1-vanishes";
    pub const KUMMER_SECTION: &str = "kummer-section-homomorphism";
    pub const HILBERT: &str = "hilbert-symbol";
    pub const KUMMER_TWO: &str = "f-mod-2-is-kummer-of-2";
    pub const KUMMER_MINUS_ONE: &str = "half-chi-minus-one-mod-2-is-kummer-of-minus-1";
    pub const C_BAR: &str = "c-bar-trivial";
    pub const F_CUP_A: &str = "kummer-2-pairs-trivially";
    pub const CONTRADICTION: &str = "nondegenerate-cup-product";
    pub const SHIFT: &str = "shift-classes-trivial";
    pub const INNER: &str = "inner-automorphism-normalization";
    pub const H1_BASIS: &str = "h1-dual-basis";
}

pub fn model_label(model: &GaloisModel) -> String {
    let gens: Vec<String> = model.generators().iter().map(u64::to_string).collect();
    format!("N={} n={} H=<{}> |H|={}", model.level(), model.modulus(), gens.join(","), model.order())
}

fn mode_label(mode: ActionMode) -> &'static str {
    match mode {
        ActionMode::Untwisted => "untwisted",
        ActionMode::Twisted => "twisted",
    }
}

fn random_element(rng: &mut ChaCha8Rng, class: Class, bound: i64) -> NilpotentElement {
    let mut e = [0i64; 5];
    for slot in e.iter_mut() {
        *slot = rng.gen_range(-bound..=bound);
    }
    NilpotentElement::new(class, e[0], e[1], e[2], e[3], e[4])
}

/// First disagreement between collection and the Magnus oracle (products,
/// inverses, associativity) over `samples` seeded pairs.
pub fn group_law_mismatch(seed: u64, samples: usize, bound: i64) -> Option<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let class = [Class::One, Class::Two, Class::Three][i % 3];
        let u = random_element(&mut rng, class, bound);
        let v = random_element(&mut rng, class, bound);
        let w = random_element(&mut rng, class, bound);
        let uv = u.multiply(&v).expect("same class");
        if oracle_multiply(&u, &v).as_ref() != Some(&uv) {
            return Some(format!("product of {u} and {v}"));
        }
        if oracle_inverse(&u).as_ref() != Some(&u.inverse()) || !u.multiply(&u.inverse()).ok()?.is_identity() {
            return Some(format!("inverse of {u}"));
        }
        let left = uv.multiply(&w).ok()?;
        let right = u.multiply(&v.multiply(&w).ok()?).ok()?;
        if left != right {
            return Some(format!("associativity at ({u}, {v}, {w})"));
        }
    }
    None
}

pub fn run_group_law(samples: usize, seed: u64) -> Report {
    const BOUND: i64 = 20;
    let mut report = Report::new("verify group-law")
        .parameter("samples", samples)
        .parameter("seed", seed)
        .parameter("exponent_bound", BOUND);
    let mismatch = group_law_mismatch(seed, samples, BOUND);
    report.push(Check::new(
        format!("collection agrees with the Magnus oracle on {samples} samples"),
        anchors::GROUP_LAW,
        mismatch.is_none(),
        Some(Witness::GroupLaw { seed, samples, exponent_bound: BOUND }),
    ));
    report
}

pub fn run_lcs_ranks() -> Result<Report> {
    let ranks = (1..=3).map(lcs_graded_rank).collect::<Result<Vec<_>>>()?;
    let mut report = Report::new("verify lcs-ranks");
    for (degree, (&rank, expected)) in ranks.iter().zip([2, 1, 2]).enumerate() {
        report.push(Check::new(
            format!("graded rank in degree {} is {rank}", degree + 1),
            anchors::LCS,
            rank == expected,
            Some(Witness::LcsRanks { ranks: ranks.clone() }),
        ));
    }
    Ok(report)
}

pub fn named_cochain(base: &FiniteSemidirect, which: NamedCochain) -> Result<TwistedCochain> {
    match which {
        NamedCochain::Extension { coordinate } => extension_cocycle(base)?
            .into_iter()
            .nth(coordinate)
            .ok_or_else(|| Error::invalid("no such kernel coordinate")),
        NamedCochain::Phi2 => phi2(base),
        NamedCochain::Phi3 { axis } => Ok(phi3(base)?[axis.index()].clone()),
    }
}

/// Models used when no explicit model is requested. Degree 2: `n = 3`
/// with cyclic `H` of orders 4 and 8 (inside `(Z/144)^*`, `(Z/288)^*`) and
/// `<5>` of order 6 inside `(Z/72)^*`. Degree 3 adds `n = 5`.
pub fn default_models(class: Class) -> Result<Vec<GaloisModel>> {
    let mut out = vec![
        GaloisModel::cyclic(144, 3, 4)?,
        GaloisModel::cyclic(288, 3, 8)?,
        GaloisModel::with_generators(72, 3, &[5])?,
    ];
    if class == Class::Three {
        out.push(GaloisModel::cyclic(120, 5, 4)?);
        out.push(GaloisModel::cyclic(480, 5, 8)?);
    }
    Ok(out)
}

/// Models for the difference identity, chosen so that their twist-2
/// 1-cocycles number at least 20.
pub fn difference_models() -> Result<Vec<GaloisModel>> {
    Ok(vec![
        GaloisModel::with_generators(72, 3, &[5])?,
        GaloisModel::cyclic(144, 3, 12)?,
        GaloisModel::cyclic(216, 3, 18)?,
        GaloisModel::cyclic(120, 5, 4)?,
        GaloisModel::cyclic(480, 5, 8)?,
        GaloisModel::cyclic(240, 5, 4)?,
    ])
}

fn transport_check(
    report: &mut Report,
    name: String,
    anchor: &str,
    spec: &ModelSpec,
    identity: CochainIdentity,
    (left, right): (&TwistedCochain, &TwistedCochain),
    base: &FiniteSemidirect,
) -> Result<()> {
    let beta = cohomologous(left, right, base.group())?;
    let exact = left == right;
    let name = format!("{name}{}", if exact { " (equal as cochains)" } else { "" });
    let witness = beta.as_ref().map(|b| Witness::Coboundary {
        model: spec.clone(),
        identity,
        beta: b.values().to_vec(),
    });
    report.push(Check::new(name, anchor, beta.is_some(), witness));
    Ok(())
}

fn cocycle_check(report: &mut Report, name: String, anchor: &str, spec: &ModelSpec, ch: &TwistedCochain, base: &FiniteSemidirect, which: NamedCochain) -> Result<()> {
    let ok = ch.is_normalized() && ch.is_cocycle(base.group())?;
    report.push(Check::new(name, anchor, ok, Some(Witness::Cocycle { model: spec.clone(), cochain: which })));
    Ok(())
}

/// Extension class of class `class` over `class - 1` against the closed
/// formulas, in both action modes.
pub fn run_extension(class: Class, models: &[GaloisModel]) -> Result<Report> {
    let base_class = match class {
        Class::Two => Class::One,
        Class::Three => Class::Two,
        Class::One => return Err(Error::invalid("extension classes start at class 2")),
    };
    let mut report = Report::new(&format!("verify extension --class {}", class.get()))
        .parameter("models", models.iter().map(model_label).collect::<Vec<_>>());
    for model in models {
        for mode in [ActionMode::Untwisted, ActionMode::Twisted] {
            let spec = ModelSpec::new(model, base_class, mode);
            let base = spec.semidirect()?;
            let label = format!("{} {}", model_label(model), mode_label(mode));
            let extension = extension_cocycle(&base)?;
            if class == Class::Two {
                cocycle_check(&mut report, format!("{label}: extension cocycle"), anchors::PHI2, &spec, &extension[0], &base, NamedCochain::Extension { coordinate: 0 })?;
                let formula = phi2(&base)?;
                transport_check(&mut report, format!("{label}: extension ~ b u a"), anchors::PHI2, &spec, CochainIdentity::Phi2, (&extension[0], &formula), &base)?;
            } else {
                let formulas = phi3(&base)?;
                for axis in Axis::BOTH {
                    let i = axis.index();
                    let tag = if axis == Axis::X { "x" } else { "y" };
                    cocycle_check(&mut report, format!("{label}: extension cocycle, [[x,y],{tag}] coordinate"), anchors::PHI3, &spec, &extension[i], &base, NamedCochain::Extension { coordinate: i })?;
                    cocycle_check(&mut report, format!("{label}: closed formula {tag} is a cocycle"), anchors::PHI3, &spec, &formulas[i], &base, NamedCochain::Phi3 { axis })?;
                    transport_check(&mut report, format!("{label}: extension ~ formula {tag}"), anchors::PHI3, &spec, CochainIdentity::Phi3 { axis }, (&extension[i], &formulas[i]), &base)?;
                }
            }
        }
    }
    Ok(report)
}

/// Difference of the degree-3 classes along `theta3(c)` against the closed
/// difference formula and the cup-product forms, for every twist-2 cocycle
/// `c` of each model.
pub fn run_difference(models: &[GaloisModel]) -> Result<Report> {
    let mut report = Report::new("verify difference")
        .parameter("models", models.iter().map(model_label).collect::<Vec<_>>());
    let mut sampled = 0usize;
    for model in models {
        let ctx = DifferenceContext::new(model)?;
        let spec = ModelSpec::new(model, Class::Two, ActionMode::Untwisted);
        let label = model_label(model);
        let cocycles = enumerate_cocycles(&ctx.h, TwistedModule::new(model.modulus(), 2)?)?;
        for c in &cocycles {
            sampled += 1;
            let values = c.values().to_vec();
            let extracted = ctx.extracted(c)?;
            let formula = ctx.formula(c)?;
            let cup = ctx.cup(c)?;
            for axis in Axis::BOTH {
                let i = axis.index();
                let tag = if axis == Axis::X { "x" } else { "y" };
                transport_check(
                    &mut report,
                    format!("{label} c={values:?}: extracted difference ~ formula {tag}"),
                    anchors::DIFFERENCE,
                    &spec,
                    CochainIdentity::Difference { axis, c: values.clone() },
                    (&extracted[i], &formula[i]),
                    &ctx.untwisted,
                )?;
                transport_check(
                    &mut report,
                    format!("{label} c={values:?}: formula ~ cup form {tag}"),
                    anchors::DIFFERENCE,
                    &spec,
                    CochainIdentity::CupForm { axis, c: values.clone() },
                    (&formula[i], &cup[i]),
                    &ctx.untwisted,
                )?;
            }
        }
    }
    report = report.parameter("sampled_cocycles", sampled);
    Ok(report)
}

/// `theta3(c)` for every twist-2 cocycle, its graded maps, rejection of
/// non-cocycles, the `c1` perturbation, and Kummer sections.
pub fn run_theta3(models: &[GaloisModel]) -> Result<Report> {
    let mut report = Report::new("verify theta3")
        .parameter("models", models.iter().map(model_label).collect::<Vec<_>>());
    for model in models {
        let n = model.modulus();
        let spec = ModelSpec::new(model, Class::Two, ActionMode::Untwisted);
        let label = model_label(model);
        let h = galois_group(model)?;
        let dom = FiniteSemidirect::new(model, Class::Two, ActionMode::Untwisted)?;
        let cod = FiniteSemidirect::new(model, Class::Two, ActionMode::Twisted)?;
        let module = TwistedModule::new(n, 2)?;
        let cocycles = enumerate_cocycles(&h, module)?;
        for c in &cocycles {
            let values = c.values().to_vec();
            let hom = theta3_perturbed(&dom, &cod, c, 0);
            let ok = hom.is_ok();
            report.push(Check::new(
                format!("{label} c={values:?}: theta3 is a homomorphism"),
                anchors::THETA3,
                ok,
                Some(Witness::Homomorphism { model: spec.clone(), c: values.clone() }),
            ));
            if let Ok(hom) = hom {
                let (xi, yi) = word_images(&hom, &dom, &cod)?;
                let (degree1, degree3) = graded_maps(&xi, &yi)?;
                let identity = [[1, 0], [0, 1]];
                report.push(Check::new(
                    format!("{label} c={values:?}: graded maps in degrees 1 and 3 are the identity"),
                    anchors::THETA3,
                    degree1 == identity && degree3 == identity,
                    Some(Witness::GradedMaps { model: spec.clone(), c: values.clone(), degree1, degree3 }),
                ));
            }
        }
        // a non-cocycle: bump the value at the first generator
        if let Some(&s) = h.generators().first() {
            let mut bad = TwistedCochain::zero(module, 1, h.order());
            bad.set1(s, 1);
            if !bad.is_cocycle(&h)? {
                report.push(non_homomorphism_check(&spec, &dom, &cod, &bad, 0, format!("{label}: non-cocycle c rejected"), anchors::THETA3)?);
            }
        }
        let moves_chi = model.elements().iter().any(|&g| {
            let chi = model.chi(g);
            chi * chi % n != chi
        });
        if moves_chi {
            let zero = TwistedCochain::zero(module, 1, h.order());
            for c1 in 1..n {
                report.push(non_homomorphism_check(&spec, &dom, &cod, &zero, c1, format!("{label}: perturbation c1={c1} rejected"), anchors::C1_FORCING)?);
            }
        }
        for letter in [Letter::Y, Letter::X] {
            let count = kummer_sections_exhaustive(&spec, letter)?;
            report.push(Check::new(
                format!("{label}: {letter:?}-sections are homomorphisms exactly for cocycles"),
                anchors::KUMMER_SECTION,
                count.is_some(),
                count.map(|cochains| Witness::KummerSections { model: spec.clone(), letter, cochains }),
            ));
        }
    }
    Ok(report)
}

fn non_homomorphism_check(
    spec: &ModelSpec,
    dom: &FiniteSemidirect,
    cod: &FiniteSemidirect,
    c: &TwistedCochain,
    c1: u64,
    name: String,
    anchor: &str,
) -> Result<Check> {
    Ok(match theta3_perturbed(dom, cod, c, c1) {
        Err(Error::NotHomomorphism { left, right }) => Check::new(
            name,
            anchor,
            true,
            Some(Witness::NonHomomorphism { model: spec.clone(), c: c.values().to_vec(), c1, left, right }),
        ),
        Ok(_) => Check::new(name, anchor, false, None),
        Err(e) => return Err(e),
    })
}

const SECTION_SWEEP_LIMIT: u128 = 100_000;

/// Checks that the `letter`-section of `kappa: H -> Z/n(1)` is a
/// homomorphism exactly when `kappa` is a cocycle. Runs over every
/// normalized 1-cochain when there are at most 10^5 of them, otherwise over
/// all cocycles and every cochain differing from one in a single value.
/// Returns the number of cochains examined.
pub fn kummer_sections_exhaustive(spec: &ModelSpec, letter: Letter) -> Result<Option<usize>> {
    let target = spec.with(Class::Two, ActionMode::Untwisted).semidirect()?;
    let h = galois_group(target.model())?;
    let n = spec.modulus;
    let module = TwistedModule::new(n, 1)?;
    let agrees = |values: Vec<u32>| -> Result<bool> {
        let kappa = TwistedCochain::from_values(module, 1, h.order(), values)?;
        Ok(kummer_section(&target, &h, &kappa, letter).is_ok() == kappa.is_cocycle(&h)?)
    };
    let free = h.order() - 1;
    let total = (n as u128).checked_pow(free as u32).filter(|&t| t <= SECTION_SWEEP_LIMIT);
    let mut examined = 0;
    if let Some(total) = total {
        let mut values = vec![0u32; h.order()];
        for _ in 0..total {
            if !agrees(values.clone())? {
                return Ok(None);
            }
            examined += 1;
            for v in values[1..].iter_mut().rev() {
                *v += 1;
                if (*v as u64) < n {
                    break;
                }
                *v = 0;
            }
        }
        return Ok(Some(examined));
    }
    for kappa in enumerate_cocycles(&h, module)? {
        if !agrees(kappa.values().to_vec())? {
            return Ok(None);
        }
        examined += 1;
        for s in 1..h.order() {
            for shift in 1..n as u32 {
                let mut values = kappa.values().to_vec();
                values[s] = (values[s] + shift) % n as u32;
                if !agrees(values)? {
                    return Ok(None);
                }
                examined += 1;
            }
        }
    }
    Ok(Some(examined))
}

/// First seeded pair `(a, b)`, `0 < |a|, |b| <= range`, violating the
/// product formula.
pub fn product_formula_failure(seed: u64, samples: usize, range: i64) -> Result<Option<(i64, i64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let t = rng.gen_range(-range..=range);
        if t != 0 {
            return t;
        }
    };
    for _ in 0..samples {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let ua = crate::arithmetic::SquareClass::of_integer(a as i128)?;
        let ub = crate::arithmetic::SquareClass::of_integer(b as i128)?;
        let mut product = 1i8;
        for place in relevant_places(&ua, &ub) {
            product *= hilbert_integers(a as i128, b as i128, place)?;
        }
        if product != 1 {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

/// First unit `g mod level` where the explicit Galois action on the root
/// disagrees with `(g-1)/2 mod 2` (root `-1`) or `(g^2-1)/24 mod 2` (root 2).
pub fn kummer_mod2_mismatch(level: u64, root: KummerRoot) -> Result<Option<u64>> {
    if level == 0 || !level.is_multiple_of(48) {
        return Err(Error::invalid("the mod-2 Kummer comparison needs 48 | level"));
    }
    let element = match root {
        KummerRoot::MinusOne => sqrt_minus_one(),
        KummerRoot::Two => sqrt_two(),
    };
    for g in (1..level).filter(|g| num_integer::gcd(*g, level) == 1) {
        let explicit = kummer_bit(&element, g)? as u64;
        let closed = match root {
            KummerRoot::MinusOne => (g - 1) / 2 % 2,
            KummerRoot::Two => (g * g - 1) / 24 % 2,
        };
        if explicit != closed {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

pub fn kummer_checks(level: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (root, anchor, name) in [
        (KummerRoot::MinusOne, anchors::KUMMER_MINUS_ONE, "(chi-1)/2 mod 2 matches the action on sqrt(-1)"),
        (KummerRoot::Two, anchors::KUMMER_TWO, "f mod 2 matches the action on sqrt(2)"),
    ] {
        let mismatch = kummer_mod2_mismatch(level, root)?;
        out.push(Check::new(
            format!("(Z/{level})^*: {name}"),
            anchor,
            mismatch.is_none(),
            Some(Witness::KummerMod2 { level, root }),
        ));
    }
    Ok(out)
}

pub fn run_hilbert_suite(seed: u64, samples: usize) -> Result<Report> {
    const RANGE: i64 = 500;
    let mut report = Report::new("verify hilbert")
        .parameter("seed", seed)
        .parameter("samples", samples)
        .parameter("range", RANGE);
    let failure = product_formula_failure(seed, samples, RANGE)?;
    report.push(Check::new(
        format!("product formula on {samples} seeded pairs"),
        anchors::HILBERT,
        failure.is_none(),
        Some(Witness::ProductFormula { seed, samples, range: RANGE }),
    ));
    let value = hilbert_integers(2, 3, Place::Prime(3))?;
    report.push(Check::new(
        "(2, 3)_3 = -1",
        anchors::HILBERT,
        value == -1,
        Some(Witness::Hilbert { a: "2".into(), b: "3".into(), place: Place::Prime(3), value }),
    ));
    for check in kummer_checks(48)? {
        report.push(check);
    }
    Ok(report)
}
