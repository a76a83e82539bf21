use braidcomb::artin::{a_word, braid_equal, braid_equal_sketch, braid_images};
use braidcomb::braid::{coset_decompose, BraidWord, PureGenerator, PureLetter, PureWord};
use braidcomb::comb::{mi_braid, mi_pure, mi_pure_by_split, CombState, MIForm};
use braidcomb::point::{
    gromov, left_translate, pow_infinity, rho, BoundaryPoint, GromovValue, Point,
};
use braidcomb::schreier::sigma_to_pure;
use braidcomb::word::{Letter, ReducedWord};
use proptest::prelude::*;

fn letters(rank: u32, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (1..=rank, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)),
        0..=max,
    )
}

fn free_word(rank: u32, max: usize) -> impl Strategy<Value = ReducedWord> {
    letters(rank, max).prop_map(move |l| ReducedWord::reduce(rank, l).unwrap())
}

fn nonempty_word(rank: u32, max: usize) -> impl Strategy<Value = ReducedWord> {
    free_word(rank, max).prop_filter("nontrivial", |w| !w.is_empty())
}

fn sigma_word(n: u32, max: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec(
        (1..n, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)),
        0..=max,
    )
    .prop_map(move |l| BraidWord::new(n, l).unwrap())
}

fn pure_word(n: u32, max: usize) -> impl Strategy<Value = PureWord> {
    let gens: Vec<PureGenerator> = PureGenerator::all(n).collect();
    prop::collection::vec((prop::sample::select(gens), any::<bool>()), 0..=max).prop_map(move |v| {
        PureWord::new(
            n,
            v.into_iter()
                .map(|(gen, inverse)| PureLetter { gen, inverse })
                .collect(),
        )
        .unwrap()
    })
}

fn boundary(rank: u32) -> impl Strategy<Value = BoundaryPoint> {
    (free_word(rank, 6), nonempty_word(rank, 4)).prop_filter_map(
        "cyclically reduced period",
        |(h, p)| {
            p.is_cyclically_reduced()
                .then(|| BoundaryPoint::new(h, p).ok())
                .flatten()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn free_group_axioms(a in free_word(3, 12), b in free_word(3, 12), c in free_word(3, 12)) {
        let e = ReducedWord::identity(3);
        prop_assert_eq!(a.concat(&b)?.concat(&c)?, a.concat(&b.concat(&c)?)?);
        prop_assert_eq!(a.concat(&a.invert())?, e.clone());
        prop_assert_eq!(a.concat(&e)?, a.clone());
        prop_assert_eq!(a.invert().invert(), a.clone());
        prop_assert!(a.letters().windows(2).all(|w| !w[0].cancels(w[1])));
    }

    #[test]
    fn powers_add(a in free_word(2, 8), p in -4i64..=4, q in -4i64..=4) {
        prop_assert_eq!(a.power(p).concat(&a.power(q))?, a.power(p + q));
    }

    #[test]
    fn wing_core_rebuilds_word(a in nonempty_word(3, 16)) {
        let wc = a.wing_core()?;
        prop_assert!(wc.core.is_cyclically_reduced());
        prop_assert_eq!(wc.wing.concat(&wc.core)?.concat(&wc.wing.invert())?, a.clone());
        prop_assert_eq!(a.wing_len(), wc.wing.len());
    }

    #[test]
    fn gromov_is_symmetric_and_ultrametric(x in boundary(2), y in boundary(2), z in boundary(2)) {
        let (x, y, z) = (Point::Boundary(x), Point::Boundary(y), Point::Boundary(z));
        let xy = gromov(&x, &y)?;
        prop_assert_eq!(xy, gromov(&y, &x)?);
        prop_assert_eq!(xy == GromovValue::Infinite, x == y);
        let (yz, xz) = (gromov(&y, &z)?, gromov(&x, &z)?);
        prop_assert!(xz >= xy.min(yz));
        prop_assert!(rho(&x, &z)? <= rho(&x, &y)?.max(rho(&y, &z)?));
    }

    #[test]
    fn translation_is_an_action(a in free_word(2, 6), b in free_word(2, 6), w in boundary(2)) {
        let ab = a.concat(&b)?;
        prop_assert_eq!(left_translate(&ab, &w)?, left_translate(&a, &left_translate(&b, &w)?)?);
        prop_assert_eq!(left_translate(&a.invert(), &left_translate(&a, &w)?)?, w.clone());
    }

    #[test]
    fn power_limits_are_fixed(a in nonempty_word(2, 10)) {
        let plus = pow_infinity(&a, true)?;
        prop_assert_eq!(left_translate(&a, &plus)?, plus.clone());
        let minus = pow_infinity(&a, false)?;
        prop_assert_eq!(left_translate(&a, &minus)?, minus.clone());
        prop_assert_ne!(plus, minus);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn artin_is_a_homomorphism(u in sigma_word(4, 8), v in sigma_word(4, 8)) {
        let uv = u.concat(&v)?;
        prop_assert!(braid_equal(&uv.concat(&uv.invert())?, &BraidWord::identity(4))?);
        prop_assert!(braid_equal_sketch(&uv, &uv.free_reduce())?);
        prop_assert_eq!(braid_images(&uv.free_reduce()), braid_images(&uv));
    }

    #[test]
    fn braid_relations_hold(w in sigma_word(4, 6)) {
        let rel = BraidWord::parse("b1 b2 b1 b2^-1 b1^-1 b2^-1", 4)?;
        let far = BraidWord::parse("b1 b3 b1^-1 b3^-1", 4)?;
        for r in [rel, far] {
            let conj = w.concat(&r)?.concat(&w.invert())?;
            prop_assert!(braid_equal(&conj, &BraidWord::identity(4))?);
        }
    }

    #[test]
    fn pure_images_are_conjugates(g in pure_word(4, 5)) {
        let b = g.to_braid();
        let images = braid_images(&b);
        for i in 1..=4u32 {
            let a = a_word(&b, i)?;
            let xi = ReducedWord::generator(4, i)?;
            prop_assert_eq!(&a.concat(&xi)?.concat(&a.invert())?, &images[(i - 1) as usize]);
        }
    }

    #[test]
    fn schreier_rewrite_is_sound(w in sigma_word(4, 12)) {
        let (gamma, pi) = coset_decompose(&w);
        prop_assert!(gamma.is_pure());
        prop_assert!(braid_equal(&gamma.concat(&pi)?, &w)?);
        let p = sigma_to_pure(&gamma)?;
        prop_assert!(braid_equal(&p.to_braid(), &gamma)?);
    }

    #[test]
    fn combing_routes_agree(g in pure_word(4, 10)) {
        let left = mi_pure(&g)?;
        let mut st = CombState::new(4);
        for &l in g.letters() {
            st.step_pure(l)?;
        }
        prop_assert_eq!(&st.form(), &left);
        prop_assert_eq!(&mi_pure_by_split(&g)?, &left);
        prop_assert!(braid_equal(&left.flatten(), &g.to_braid())?);
        prop_assert_eq!(&MIForm::parse(&left.to_string())?, &left);
    }

    #[test]
    fn combing_braids(w in sigma_word(5, 12)) {
        let form = mi_braid(&w)?;
        prop_assert!(braid_equal(&form.flatten(), &w)?);
        prop_assert_eq!(&mi_braid(&form.flatten())?, &form);
        let mut st = CombState::new(5);
        for &l in w.letters() {
            st.step_sigma(l)?;
        }
        prop_assert_eq!(&st.form(), &form);
    }

    #[test]
    fn combing_is_multiplicative(g in pure_word(4, 6), h in pure_word(4, 6)) {
        let gh = PureWord::new(4, [g.letters(), h.letters()].concat())?;
        let direct = mi_pure(&gh)?;
        let via = mi_braid(&mi_pure(&g)?.flatten().concat(&mi_pure(&h)?.flatten())?)?;
        prop_assert_eq!(direct, via);
    }
}
