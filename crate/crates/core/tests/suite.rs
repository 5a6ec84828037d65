use ccj::error::Error;
use ccj::models::CodedFamilySpec;
use ccj::suite::{
    construct, verify, Bounds, CodeEntry, FiberOverride, FiberRef, FixtureDoc, FunctorBlock,
    Options, PairSel, Suite, Target, UniverseBlock,
};
use proptest::prelude::*;
use std::collections::BTreeMap;

const U3: &str = include_str!("../../../fixtures/u3.toml");

fn u3() -> FixtureDoc {
    FixtureDoc::parse(U3).unwrap()
}

#[test]
fn bundled_fixture_parses() {
    let d = u3();
    assert_eq!(d.name, "U3");
    assert_eq!(d.codes.len(), 3);
    assert_eq!(d.functor.len(), 2);
    assert_eq!(d.options.pair, Some(PairSel::IsosAll));
    assert_eq!(FixtureDoc::parse(&d.to_toml().unwrap()).unwrap(), d);
}

#[test]
fn parse_errors_carry_a_location() {
    let e = FixtureDoc::parse("format = \"ccj-fixture/1\"\nname = 3\n").unwrap_err();
    match e {
        Error::Parse(m) => assert!(m.contains("line 2"), "{m}"),
        other => panic!("{other:?}"),
    }
    let e = FixtureDoc::parse("format = \"ccj-fixture/1\"\nname = \"x\"\ncodes = []\nextra = 1\n");
    assert!(matches!(e, Err(Error::Parse(_))));
    let e = FixtureDoc::parse("format = \"other/2\"\nname = \"x\"\ncodes = []\n");
    assert!(matches!(e, Err(Error::Parse(_))));
}

#[test]
fn validation_rejects_bad_documents() {
    let empty = FixtureDoc::parse("format = \"ccj-fixture/1\"\nname = \"E\"\ncodes = []\n");
    assert!(matches!(empty, Err(Error::Spec(_))));

    let mut d = u3();
    d.functor[0].code_map.remove("1");
    assert!(matches!(d.validate(), Err(Error::Spec(_))));

    let mut d = u3();
    d.functor[0].code_map.insert("1".into(), "2".into());
    assert!(matches!(d.validate(), Err(Error::Spec(_))));

    let mut d = u3();
    d.functor[0].target_omega = Some(FiberRef {
        code: "0".into(),
        index: 0,
    });
    assert!(matches!(d.validate(), Err(Error::Spec(_))));

    let mut d = u3();
    d.options.skew = Some(u64::MAX);
    assert!(matches!(d.validate(), Err(Error::Spec(_))));

    let mut d = u3();
    d.options.theorem = Some("th9".into());
    assert!(d.validate().is_err());
}

#[test]
fn bounds_over_the_limit() {
    let d = u3();
    let b = Bounds {
        bound: Some(4),
        ..Bounds::default()
    };
    assert!(matches!(
        verify(&d, &[Suite::Csystem], &b),
        Err(Error::Bound(_))
    ));
    let b = Bounds {
        lifting_bound: Some(5),
        ..Bounds::default()
    };
    assert!(matches!(
        construct(&d, Target::Cc, &b),
        Err(Error::Bound(_))
    ));
}

#[test]
fn suite_names() {
    assert_eq!(Suite::parse("all").unwrap().len(), 9);
    assert_eq!(Suite::parse("j2").unwrap(), vec![Suite::J2]);
    assert!(Suite::parse("j3").is_err());
    assert!(Target::parse("h-of").is_ok());
    assert!(Target::parse("h").is_err());
}

#[test]
fn reports_are_deterministic() {
    let d = u3();
    let s = [Suite::Csystem, Suite::J2, Suite::Functors];
    let a = verify(&d, &s, &Bounds::default()).unwrap();
    let b = verify(&d, &s, &Bounds::default()).unwrap();
    assert!(a.all_pass());
    assert_eq!(a.without_timing().to_json(), b.without_timing().to_json());
    let x = construct(&d, Target::JCc, &Bounds::default()).unwrap();
    let y = construct(&d, Target::JCc, &Bounds::default()).unwrap();
    assert_eq!(x.render_text(), y.render_text());
    assert!(x
        .render_text()
        .starts_with("# ccj-construct/1 j-cc\n# construction: j-from-jp\n"));
}

#[test]
fn cc_counts_on_u1() {
    let d = FixtureDoc::from_spec(&CodedFamilySpec::u1());
    let b = Bounds {
        bound: Some(3),
        ..Bounds::default()
    };
    let c = construct(&d, Target::Cc, &b).unwrap();
    assert_eq!(c.sections[0].lines, vec!["0: 1", "1: 2", "2: 4", "3: 8"]);
}

#[test]
fn broken_functor_names_the_failing_check() {
    let mut d = u3();
    d.functor[1].fiber_override.push(FiberOverride {
        from: FiberRef {
            code: "1".into(),
            index: 0,
        },
        to: FiberRef {
            code: "2".into(),
            index: 1,
        },
    });
    let r = verify(&d, &[Suite::Functors], &Bounds::default()).unwrap();
    let ids = r.failing_ids();
    assert!(ids.contains(&"id/comparison-iso"), "{ids:?}");
    assert!(ids.iter().all(|i| i.starts_with("id/")));
}

fn name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9]{0,3}"
}

fn codes() -> impl Strategy<Value = Vec<CodeEntry>> {
    prop::collection::btree_map(name(), 0usize..4, 1..4).prop_map(|m| {
        m.into_iter()
            .map(|(name, fiber)| CodeEntry { name, fiber })
            .collect()
    })
}

fn options() -> impl Strategy<Value = Options> {
    (
        prop::option::of(0..=i64::MAX as u64),
        prop::option::of(0usize..4),
        prop::option::of(0usize..3),
        prop::option::of(prop::sample::select(vec![
            PairSel::IsosAll,
            PairSel::InjSurj,
        ])),
        prop::option::of(prop::sample::select(vec![
            "th1".to_string(),
            "th2".to_string(),
        ])),
    )
        .prop_map(|(skew, bound, j2_bound, pair, theorem)| Options {
            skew,
            cap: None,
            bound,
            j2_bound,
            lifting_bound: bound,
            pair,
            theorem,
        })
}

fn doc() -> impl Strategy<Value = FixtureDoc> {
    (name(), codes(), options(), any::<bool>(), any::<bool>()).prop_map(
        |(n, codes, options, with_u, with_omega)| {
            let mut d = FixtureDoc {
                format: "ccj-fixture/1".into(),
                name: n.clone(),
                codes: codes.clone(),
                options,
                universe: Vec::new(),
                functor: Vec::new(),
            };
            if with_u {
                let other = format!("{n}x");
                d.universe.push(UniverseBlock {
                    name: other.clone(),
                    codes: codes.clone(),
                });
                let code_map: BTreeMap<String, String> = codes
                    .iter()
                    .map(|c| (c.name.clone(), c.name.clone()))
                    .collect();
                let pt = codes.iter().find(|c| c.fiber > 0).map(|c| FiberRef {
                    code: c.name.clone(),
                    index: c.fiber - 1,
                });
                d.functor.push(FunctorBlock {
                    name: "f".into(),
                    source: other,
                    target: n,
                    code_map,
                    fiber_override: pt
                        .iter()
                        .map(|p| FiberOverride {
                            from: p.clone(),
                            to: p.clone(),
                        })
                        .collect(),
                    target_omega: if with_omega { pt } else { None },
                });
            }
            d
        },
    )
}

proptest! {
    #[test]
    fn toml_round_trip_is_lossless(d in doc()) {
        d.validate().unwrap();
        let text = d.to_toml().unwrap();
        let back = FixtureDoc::parse(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(back.to_toml().unwrap(), text);
    }
}
