use std::sync::OnceLock;

use desusp::arithmetic::{
    cup_pairing, hilbert_local, nondegeneracy_witness, primes_up_to, Place, SquareClass, WitnessSearch,
};
use desusp::cocycles::{
    enumerate_cocycles, f_cochain, kummer_section, phi2_value, phi3_x_value, phi3_y_value, Cyclotomic,
};
use desusp::cohomology::{cohomologous, galois_group, FiniteGroup, FiniteSemidirect, TwistedCochain, TwistedModule};
use desusp::galois::{ActionMode, GaloisModel};
use desusp::magnus::{oracle_inverse, oracle_multiply};
use desusp::nilpotent::{Class, NilpotentElement};
use desusp::quotient::QuotientGroup;
use num_rational::Rational64;
use proptest::prelude::*;

fn class() -> impl Strategy<Value = Class> {
    prop_oneof![Just(Class::One), Just(Class::Two), Just(Class::Three)]
}

fn element(class: Class) -> impl Strategy<Value = NilpotentElement> {
    proptest::array::uniform5(-40i64..=40).prop_map(move |e| NilpotentElement::new(class, e[0], e[1], e[2], e[3], e[4]))
}

fn elements<const K: usize>() -> impl Strategy<Value = (Class, [NilpotentElement; K])> {
    class().prop_flat_map(|c| (Just(c), proptest::array::uniform(element(c))))
}

fn nonzero(range: i64) -> impl Strategy<Value = i64> {
    (-range..=range).prop_filter("nonzero", |v| *v != 0)
}

fn place() -> impl Strategy<Value = Place> {
    prop_oneof![
        Just(Place::Infinity),
        proptest::sample::select(primes_up_to(23)).prop_map(Place::Prime),
    ]
}

fn hilbert(a: i64, b: i64, v: Place) -> i8 {
    hilbert_local(Rational64::from(a), Rational64::from(b), v).unwrap()
}

/// Small Galois models, cached: `(model, H)`.
fn models() -> &'static [(GaloisModel, FiniteGroup)] {
    static MODELS: OnceLock<Vec<(GaloisModel, FiniteGroup)>> = OnceLock::new();
    MODELS.get_or_init(|| {
        [
            GaloisModel::cyclic(144, 3, 4).unwrap(),
            GaloisModel::with_generators(72, 3, &[5]).unwrap(),
            GaloisModel::cyclic(120, 5, 4).unwrap(),
            GaloisModel::full(48, 2).unwrap(),
            GaloisModel::cyclic(240, 5, 4).unwrap(),
        ]
        .into_iter()
        .map(|m| {
            let h = galois_group(&m).unwrap();
            (m, h)
        })
        .collect()
    })
}

fn model_index() -> impl Strategy<Value = usize> {
    0..models().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn collection_matches_magnus((_, [u, v]) in elements::<2>()) {
        prop_assert_eq!(Some(u.multiply(&v).unwrap()), oracle_multiply(&u, &v));
        prop_assert_eq!(Some(u.inverse()), oracle_inverse(&u));
    }

    #[test]
    fn associativity((_, [u, v, w]) in elements::<3>()) {
        let left = u.multiply(&v).unwrap().multiply(&w).unwrap();
        let right = u.multiply(&v.multiply(&w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn projection_is_a_homomorphism((c, [u, v]) in elements::<2>()) {
        for lower in [Class::One, Class::Two, Class::Three].into_iter().filter(|k| *k <= c) {
            let p = |w: &NilpotentElement| w.project(lower).unwrap();
            prop_assert_eq!(p(&u.multiply(&v).unwrap()), p(&u).multiply(&p(&v)).unwrap());
        }
    }

    #[test]
    fn galois_action_is_an_automorphism_and_composes(
        mi in model_index(),
        gi in any::<prop::sample::Index>(),
        hi in any::<prop::sample::Index>(),
        twisted in any::<bool>(),
        (_, [u, v]) in elements::<2>(),
    ) {
        let (model, _) = &models()[mi];
        let mode = if twisted { ActionMode::Twisted } else { ActionMode::Untwisted };
        let g = *gi.get(model.elements());
        let h = *hi.get(model.elements());
        let act = |g: u64, w: &NilpotentElement| model.act(g, w, mode);
        prop_assert_eq!(act(g, &u.multiply(&v).unwrap()), act(g, &u).multiply(&act(g, &v)).unwrap());
        // on the finite quotient, composition matches the group law of H
        let q = QuotientGroup::new(u.class().min(if model.modulus() % 2 == 0 { Class::Two } else { Class::Three }), model.modulus()).unwrap();
        let (ag, ah, agh) = (
            model.quotient_action(g, &q, mode),
            model.quotient_action(h, &q, mode),
            model.quotient_action(model.mul(g, h), &q, mode),
        );
        let w = q.reduce(&u.with_class(Class::Three)).unwrap();
        prop_assert_eq!(ag.apply(&q, &ah.apply(&q, &w)), agh.apply(&q, &w));
        let w2 = q.reduce(&v.with_class(Class::Three)).unwrap();
        prop_assert_eq!(ag.apply(&q, &q.mul(&w, &w2)), q.mul(&ag.apply(&q, &w), &ag.apply(&q, &w2)));
    }

    #[test]
    fn top_coordinates_are_central((c, [u, _]) in elements::<2>(), t in proptest::array::uniform3(-30i64..=30)) {
        // [x,y] at class 2, [[x,y],x] and [[x,y],y] at class 3
        let z = match c {
            Class::One => NilpotentElement::new(c, t[0], t[1], 0, 0, 0),
            Class::Two => NilpotentElement::new(c, 0, 0, t[0], 0, 0),
            Class::Three => NilpotentElement::new(c, 0, 0, 0, t[1], t[2]),
        };
        prop_assert_eq!(u.multiply(&z).unwrap(), z.multiply(&u).unwrap());
        prop_assert!(u.commutator(&z).unwrap().is_identity());
    }

    #[test]
    fn central_change_of_frak_f_is_invisible(
        w in element(Class::Three),
        g in (1i64..500).prop_filter("unit mod 6", |g| g % 2 == 1 && g % 3 != 0),
        zd in -9i64..=9,
        ze in -9i64..=9,
    ) {
        use desusp::galois::{act_with, apply_images};
        use num_bigint::BigInt;
        let f = (g * g - 1) / 24;
        let chi = BigInt::from(g);
        let frak_f = NilpotentElement::new(Class::Three, 0, 0, f, zd, ze);
        let x_image = NilpotentElement::x(Class::Three).pow(&chi);
        let y_image = frak_f.inverse().multiply(&NilpotentElement::y(Class::Three).pow(&chi)).unwrap().multiply(&frak_f).unwrap();
        prop_assert_eq!(
            apply_images(&x_image, &y_image, &w),
            act_with(&chi, &BigInt::from(f), &w, ActionMode::Twisted)
        );
    }

    #[test]
    fn hilbert_symmetric_and_bimultiplicative(a in nonzero(60), b in nonzero(60), c in nonzero(60), v in place()) {
        prop_assert_eq!(hilbert(a, b, v), hilbert(b, a, v));
        prop_assert_eq!(hilbert(a, b * c, v), hilbert(a, b, v) * hilbert(a, c, v));
        prop_assert_eq!(hilbert(a, -a, v), 1);
        prop_assert_eq!(hilbert(a, b * b, v), 1);
    }

    #[test]
    fn product_formula(a in nonzero(1000), b in nonzero(1000)) {
        let u = SquareClass::of_integer(a as i128).unwrap();
        let w = SquareClass::of_integer(b as i128).unwrap();
        let v = cup_pairing(&u, &w).unwrap();
        prop_assert_eq!(v.product(), 1);
        prop_assert_eq!(v.support().len() % 2, 0);
    }

    #[test]
    fn representative_independence(
        g in (1i128..5000).prop_filter("unit mod 6", |g| g % 2 == 1 && g % 3 != 0),
        k in -20i128..20,
        n in prop_oneof![Just(3u64), Just(5), Just(7)],
        u in proptest::array::uniform3(-30i128..30),
        v in proptest::array::uniform3(-30i128..30),
    ) {
        // shifting a lift by a multiple of 24n changes neither chi mod 2n nor f mod n
        let a = Cyclotomic::from_representative(g, n);
        let b = Cyclotomic::from_representative(g + 24 * n as i128 * k, n);
        prop_assert_eq!(a, b);
        let shift = |w: [i128; 3]| w.map(|t| t + n as i128 * k);
        prop_assert_eq!(phi2_value(n, a, u, v), phi2_value(n, a, shift(u), shift(v)));
        prop_assert_eq!(phi3_x_value(n, a, u, v).unwrap(), phi3_x_value(n, b, shift(u), shift(v)).unwrap());
        prop_assert_eq!(phi3_y_value(n, a, u, v).unwrap(), phi3_y_value(n, b, shift(u), shift(v)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cup_of_cocycles_is_a_cocycle(mi in model_index(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), tw in 1u32..3) {
        let (model, h) = &models()[mi];
        let n = model.modulus();
        let z1 = enumerate_cocycles(h, TwistedModule::new(n, 1).unwrap()).unwrap();
        let zt = enumerate_cocycles(h, TwistedModule::new(n, tw).unwrap()).unwrap();
        let cup = i.get(&z1).cup11(j.get(&zt), h).unwrap();
        prop_assert!(cup.is_cocycle_exhaustive(h).unwrap());
        prop_assert_eq!(cup.module().twist, 1 + tw);
    }

    #[test]
    fn kummer_section_iff_cocycle(mi in model_index(), seed in proptest::collection::vec(0u32..5, 48), perturb in any::<bool>()) {
        let (model, h) = &models()[mi];
        let n = model.modulus();
        let md = TwistedModule::new(n, 1).unwrap();
        let target = FiniteSemidirect::new(model, Class::Two, ActionMode::Untwisted).unwrap();
        let kappa = if perturb {
            let mut values: Vec<u32> = seed.iter().take(h.order()).map(|v| v % n as u32).collect();
            values[0] = 0;
            TwistedCochain::from_values(md, 1, h.order(), values).unwrap()
        } else {
            let z1 = enumerate_cocycles(h, md).unwrap();
            z1[seed[0] as usize % z1.len()].clone()
        };
        let cocycle = kappa.is_cocycle_exhaustive(h).unwrap();
        for letter in [desusp::magnus::Letter::X, desusp::magnus::Letter::Y] {
            prop_assert_eq!(kummer_section(&target, h, &kappa, letter).is_ok(), cocycle);
        }
    }

    #[test]
    fn cohomologous_is_an_equivalence(
        mi in model_index(),
        tw in 1u32..4,
        i in any::<prop::sample::Index>(),
        b1 in proptest::collection::vec(0u32..7, 48),
        b2 in proptest::collection::vec(0u32..7, 48),
    ) {
        let (model, h) = &models()[mi];
        let n = model.modulus();
        let md = TwistedModule::new(n, tw).unwrap();
        let z1 = enumerate_cocycles(h, md).unwrap();
        let base = i.get(&z1).cup11(i.get(&z1), h).unwrap();
        let md2 = base.module();
        let beta = |b: &[u32]| {
            let values: Vec<u32> = b.iter().take(h.order()).map(|v| v % n as u32).collect();
            TwistedCochain::from_values(md2, 1, h.order(), values).unwrap()
        };
        let w1 = base.add(&beta(&b1).coboundary(h).unwrap()).unwrap();
        let w2 = w1.add(&beta(&b2).coboundary(h).unwrap()).unwrap();
        prop_assert!(cohomologous(&base, &base, h).unwrap().is_some());
        let forward = cohomologous(&base, &w1, h).unwrap();
        let backward = cohomologous(&w1, &base, h).unwrap();
        prop_assert!(forward.is_some() && backward.is_some());
        prop_assert!(cohomologous(&w1, &w2, h).unwrap().is_some());
        prop_assert!(cohomologous(&base, &w2, h).unwrap().is_some());
        let b = forward.unwrap();
        prop_assert_eq!(b.coboundary(h).unwrap(), base.sub(&w1).unwrap());
    }
}

#[test]
fn f_is_a_cocycle_for_every_small_level() {
    for level in (24..=120).step_by(24) {
        for n in (1..=level / 24).filter(|n| level % (24 * n) == 0) {
            let model = GaloisModel::full(level, n).unwrap();
            let h = galois_group(&model).unwrap();
            let f = f_cochain(&h, n).unwrap();
            assert!(f.is_cocycle_exhaustive(&h).unwrap(), "N = {level}, n = {n}");
        }
    }
}

#[test]
fn every_small_class_has_a_witness() {
    for u in SquareClass::enumerate(50).into_iter().filter(|u| !u.is_trivial()) {
        match nondegeneracy_witness(&u, 100).unwrap() {
            WitnessSearch::Found { partner, place } => {
                let symbol = hilbert(u.value() as i64, partner.value() as i64, place);
                assert_eq!(symbol, -1, "{u} with {partner} at {place}");
            }
            other => panic!("{u}: {other:?}"),
        }
    }
    assert_eq!(nondegeneracy_witness(&SquareClass::ONE, 100).unwrap(), WitnessSearch::TrivialClass);
}

#[test]
fn library_reports_are_byte_identical() {
    let cfg = desusp::obstruction::ObstructionConfig { samples: 3, seed: 11, ..Default::default() };
    let a = desusp::obstruction::run_obstruction(&cfg).unwrap().to_json();
    let b = desusp::obstruction::run_obstruction(&cfg).unwrap().to_json();
    assert_eq!(a, b);
    assert_eq!(
        desusp::suites::run_group_law(50, 3).to_json(),
        desusp::suites::run_group_law(50, 3).to_json()
    );
}
