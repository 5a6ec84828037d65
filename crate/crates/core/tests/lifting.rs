use ccj::error::Error;
use ccj::finset::FinSet;
use ccj::lifting::{
    check_closure_lemmas, check_conditions, derive_j, enumerate_family, has_rlp, model_j,
    rlp_witness, ClassPair, Conditions, ModelClause, MorphismFamily, Theorem,
};
use ccj::models::{coded_universe, extensional_j, CodedFamilySpec};
use proptest::prelude::*;

fn pair(tc: &str, fb: &str) -> ClassPair<FinSet> {
    ClassPair {
        tc: MorphismFamily::by_name(tc).unwrap(),
        fb: MorphismFamily::by_name(fb).unwrap(),
    }
}

fn falling(b: u64, a: u64) -> u64 {
    (0..a).map(|k| b.saturating_sub(k)).product()
}

fn stirling2(n: u64, k: u64) -> u64 {
    if n == 0 && k == 0 {
        return 1;
    }
    if n == 0 || k == 0 {
        return 0;
    }
    k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

#[test]
fn family_sizes_match_closed_forms() {
    let c = FinSet::default();
    for bound in 0..=3u64 {
        let inj: u64 = (0..=bound)
            .flat_map(|a| (0..=bound).map(move |b| falling(b, a)))
            .sum();
        let surj: u64 = (0..=bound)
            .flat_map(|a| (0..=bound).map(move |b| factorial(b) * stirling2(a, b)))
            .sum();
        let iso: u64 = (0..=bound).map(factorial).sum();
        let n = |name: &str| {
            enumerate_family(&c, &MorphismFamily::by_name(name).unwrap(), bound as usize)
                .unwrap()
                .len() as u64
        };
        assert_eq!(n("injections"), inj);
        assert_eq!(n("surjections"), surj);
        assert_eq!(n("isos"), iso);
    }
    assert_eq!(
        enumerate_family(&c, &MorphismFamily::injections(), 2)
            .unwrap()
            .len(),
        8
    );
    assert_eq!(
        enumerate_family(&c, &MorphismFamily::surjections(), 2)
            .unwrap()
            .len(),
        5
    );
}

#[test]
fn conditions_hold_at_bound_three() {
    let c = FinSet::default();
    for (tc, fb) in [("isos", "all"), ("injections", "surjections")] {
        for cond in [Conditions::Cond1, Conditions::Cond2] {
            for chk in check_conditions(&c, &pair(tc, fb), cond, 3) {
                assert!(chk.passed(), "{tc}/{fb} {cond:?}: {chk:?}");
                assert!(chk.instances > 0);
            }
        }
    }
}

#[test]
fn all_against_all_is_not_a_lifting_pair() {
    let c = FinSet::default();
    let cs = check_conditions(&c, &pair("all", "all"), Conditions::Cond2, 2);
    let ids: Vec<&str> = cs
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.id.as_str())
        .collect();
    assert_eq!(ids, vec![ccj::lifting::CHECK_COND2_RLP]);
}

#[test]
fn closure_lemmas_hold() {
    let c = FinSet::new(4096);
    for (tc, fb) in [("isos", "all"), ("injections", "surjections")] {
        for chk in check_closure_lemmas(&c, &pair(tc, fb), 3) {
            assert!(chk.passed(), "{tc}/{fb}: {chk:?}");
        }
    }
}

#[test]
fn derived_structures_are_the_extensional_one() {
    let u3 = coded_universe(&CodedFamilySpec::u3()).unwrap();
    let e3 = extensional_j(&u3).unwrap();
    let d = derive_j(
        &u3.universe,
        &e3.eq,
        &e3.omega,
        &pair("isos", "all"),
        Theorem::Th1,
        3,
    )
    .unwrap();
    assert_eq!(d.jp, e3.jp);

    let u1 = coded_universe(&CodedFamilySpec::u1()).unwrap();
    let e1 = extensional_j(&u1).unwrap();
    for th in [Theorem::Th1, Theorem::Th2] {
        let d = derive_j(
            &u1.universe,
            &e1.eq,
            &e1.omega,
            &pair("injections", "surjections"),
            th,
            3,
        )
        .unwrap();
        assert_eq!(d.jp, e1.jp, "{th:?}");
    }
    let m = model_j(
        &u1.universe,
        &e1.eq,
        &e1.omega,
        &MorphismFamily::surjections(),
        &MorphismFamily::injections(),
        ModelClause::FibrantBase,
        3,
    )
    .unwrap();
    assert_eq!(m.jp, e1.jp);
}

#[test]
fn empty_fiber_is_not_a_surjection() {
    let u3 = coded_universe(&CodedFamilySpec::u3()).unwrap();
    let e3 = extensional_j(&u3).unwrap();
    let r = derive_j(
        &u3.universe,
        &e3.eq,
        &e3.omega,
        &pair("injections", "surjections"),
        Theorem::Th1,
        3,
    );
    match r {
        Err(Error::Hypothesis(m)) => assert!(m.starts_with("p-in-fb"), "{m}"),
        other => panic!("expected a hypothesis failure, got {:?}", other.map(|_| ())),
    }
}

#[test]
fn theorem_names() {
    assert_eq!(
        Theorem::parse("th1").unwrap().conditions(),
        Conditions::Cond2
    );
    assert_eq!(
        Theorem::parse("th2").unwrap().conditions(),
        Conditions::Cond1
    );
    assert!(Theorem::parse("th3").is_err());
}

fn small_map() -> impl Strategy<Value = (usize, usize, Vec<u32>)> {
    (0usize..=3, 0usize..=3)
        .prop_flat_map(|(a, b)| {
            let v = if b == 0 {
                Just(vec![]).boxed()
            } else {
                prop::collection::vec(0u32..b as u32, a).boxed()
            };
            (Just(a), Just(b), v)
        })
        .prop_filter("no map into the empty set", |(a, b, _)| *b > 0 || *a == 0)
}

proptest! {
    #[test]
    fn rlp_against_injections_is_surjectivity((a, b, t) in small_map()) {
        let c = FinSet::default();
        let p = c.from_table(&c.skeletal(a), &c.skeletal(b), t).unwrap();
        let inj = MorphismFamily::injections();
        prop_assert_eq!(has_rlp(&c, &p, &inj, 3), p.is_surjective());
        prop_assert!(has_rlp(&c, &p, &MorphismFamily::isos(), 3));
        if !p.is_surjective() {
            let (i, _, _) = rlp_witness(&c, &p, &inj, 3).unwrap().unwrap();
            prop_assert!(i.is_injective());
        }
    }
}
