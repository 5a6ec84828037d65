use ccj::cc_univ::{build_cc, canonical_graph, Cc, CcObj};
use ccj::csystem::{objects, pullback_section1, CSystem};
use ccj::fincat::Category;
use ccj::finset::{FinSet, Val};
use ccj::jcs::{count_extensional_j0, jdom_enum, rf, JBundle};
use ccj::lcc::{eta, DpElement};
use ccj::models::{code_val, coded_universe, extensional_j, fiber_val, CodedFamilySpec, Fixture};
use ccj::suite::{construct, Bounds, FixtureDoc, Target};
use ccj::transfer::{j_from_jp, phi, transfer_bundle};

fn el(c: &str, i: usize) -> Val {
    fiber_val(c, i)
}

fn setup(spec: &CodedFamilySpec) -> (Fixture, Cc<FinSet>, JBundle<Cc<FinSet>>) {
    let fx = coded_universe(spec).unwrap();
    let cc = build_cc(&fx.universe);
    let b = transfer_bundle(&cc, &extensional_j(&fx).unwrap()).unwrap();
    (fx, cc, b)
}

fn counts(cc: &Cc<FinSet>, bound: usize) -> Vec<usize> {
    let mut out = vec![0; bound + 1];
    for g in objects(cc, bound).unwrap() {
        out[cc.length(&g)] += 1;
    }
    out
}

fn t2(fx: &Fixture, cc: &Cc<FinSet>) -> CcObj<FinSet> {
    cc.extend(&cc.root(), &fx.code_point("2").unwrap()).unwrap()
}

#[test]
fn object_counts_by_length() {
    let (_, cc, _) = setup(&CodedFamilySpec::u3());
    assert_eq!(counts(&cc, 3), vec![1, 3, 13, 183]);
    let (_, cc1, _) = setup(&CodedFamilySpec::u1());
    assert_eq!(counts(&cc1, 3), vec![1, 2, 4, 8]);
}

#[test]
fn nine_types_over_code_two() {
    let (fx, cc, _) = setup(&CodedFamilySpec::u3());
    assert_eq!(cc.objects_over(&t2(&fx, &cc)).unwrap().len(), 9);
}

#[test]
fn identity_types_of_points() {
    let (fx, cc, b) = setup(&CodedFamilySpec::u3());
    let t = t2(&fx, &cc);
    let secs = cc.sections(&t).unwrap();
    assert_eq!(secs.len(), 2);
    let c = cc.cat();
    for o in &secs {
        for o2 in &secs {
            let i = b.idt.idt(&cc, o, o2).unwrap();
            let code = cc.u1(&i).unwrap();
            let want = if o == o2 { "1" } else { "0" };
            assert_eq!(code.apply(&c.point().elems()[0]), Some(&code_val(want)));
        }
        let r = b.refl.refl(&cc, o).unwrap();
        assert_eq!(r.cod, b.idt.idt(&cc, o, o).unwrap());
        let v = cc.u1_tilde(&r).unwrap();
        assert!(v.graph().iter().all(|(_, y)| *y == el("1", 0)));
    }
}

#[test]
fn worked_j_entry() {
    let (fx, cc, b) = setup(&CodedFamilySpec::u3());
    let t = t2(&fx, &cc);
    let (a, bb) = (el("2", 0), el("2", 1));
    let s0_want = vec![
        (vec![a.clone()], vec![a.clone(), el("2", 0)]),
        (vec![bb.clone()], vec![bb.clone(), el("1", 0)]),
    ];
    let entries: Vec<_> = jdom_enum(&cc, &b, 1)
        .unwrap()
        .into_iter()
        .filter(|e| e.t == t && canonical_graph(&cc, &e.s0).unwrap() == s0_want)
        .collect();
    assert_eq!(entries.len(), 1);
    let e = &entries[0];
    let j = b.j.as_ref().unwrap().j(&cc, e).unwrap();
    let r = el("1", 0);
    assert_eq!(
        canonical_graph(&cc, &j).unwrap(),
        vec![
            (
                vec![a.clone(), a.clone(), r.clone()],
                vec![a.clone(), a.clone(), r.clone(), el("2", 0)]
            ),
            (
                vec![bb.clone(), bb.clone(), r.clone()],
                vec![bb.clone(), bb.clone(), r.clone(), el("1", 0)]
            ),
        ]
    );
    let back = pullback_section1(&cc, &rf(&cc, &b, &t).unwrap(), &j).unwrap();
    assert_eq!(back, e.s0);
}

/// Every section of `P` is tried against the defining equation
/// `η(F, ũ_1(v)) = φ∘Jp`; exactly one solves it, and it is `J`.
#[test]
fn j_is_the_unique_solution() {
    for spec in [CodedFamilySpec::u3(), CodedFamilySpec::u1()] {
        let (fx, cc, b) = setup(&spec);
        let jj = j_from_jp(&cc, &extensional_j(&fx).unwrap()).unwrap();
        let d = &*jj.data;
        let c = cc.cat();
        let entries = jdom_enum(&cc, &b, 1).unwrap();
        assert!(!entries.is_empty());
        for e in &entries {
            let ph = phi(&cc, d, e).unwrap();
            let target = c.compose(&ph.phi, &jj.jp).unwrap();
            let sols: Vec<_> = cc
                .sections(&e.p)
                .unwrap()
                .into_iter()
                .filter(|v| {
                    let dv = DpElement {
                        code: ph.f.clone(),
                        value: cc.u1_tilde(v).unwrap(),
                    };
                    eta(&d.e.universe, &dv, &d.base.total()).unwrap() == target
                })
                .collect();
            assert_eq!(sols.len(), 1, "{e:?}");
            assert_eq!(sols[0], b.j.as_ref().unwrap().j(&cc, e).unwrap());
        }
    }
}

#[test]
fn jdom_sizes() {
    let (_, cc, b) = setup(&CodedFamilySpec::u3());
    assert_eq!(jdom_enum(&cc, &b, 1).unwrap().len(), 196);
    let (_, cc1, b1) = setup(&CodedFamilySpec::u1());
    assert!(!jdom_enum(&cc1, &b1, 1).unwrap().is_empty());
}

#[test]
fn one_extensional_j0_at_bound_one() {
    let (_, cc, _) = setup(&CodedFamilySpec::u3());
    assert_eq!(count_extensional_j0(&cc, 1, 1000).unwrap(), 1);
}

#[test]
fn tables_ignore_the_chooser() {
    let base = FixtureDoc::from_spec(&CodedFamilySpec::u3());
    let mut skewed = base.clone();
    skewed.options.skew = Some(11);
    for t in [Target::Cc, Target::JCc] {
        let b = Bounds::default();
        let x = construct(&base, t, &b).unwrap();
        let y = construct(&skewed, t, &b).unwrap();
        assert_eq!(x.sections, y.sections, "{t:?}");
    }
}
