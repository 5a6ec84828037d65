use ccj::cc_univ::canonical_obj;
use ccj::csystem::{objects, CsHom};
use ccj::fincat::{Category, FinCategory};
use ccj::finset::{FinMor, FinObj, FinSet, Val};
use ccj::functors::{
    check_h, check_h_j_compat, check_ucfunctor, chi, code_inclusion, extensional_pair, h_of,
    identity_functor, phi2, with_phi_t_value, with_target_omega, UnivCatFunctor,
};
use ccj::lcc::{eta_bang, i_p_obj, DpElement};
use ccj::models::{code_val, coded_universe, fiber_val, CodedFamilySpec, Fixture};
use ccj::report::Check;
use ccj::universe::Universe;

fn incl() -> (Fixture, Fixture, UnivCatFunctor<FinSet>) {
    let small = coded_universe(&CodedFamilySpec::small()).unwrap();
    let big = coded_universe(&CodedFamilySpec::u3()).unwrap();
    let f = code_inclusion(&small, &big).unwrap();
    (small, big, f)
}

fn failing(cs: &[Check]) -> Vec<&str> {
    cs.iter()
        .filter(|c| !c.passed())
        .map(|c| c.id.as_str())
        .collect()
}

/// Point of `(X;F)` with the given base and `Ũ` components.
fn point_with(u: &Universe<FinSet>, code: &FinMor, x: &Val, t: &Val) -> Val {
    let sq = u.ext(code).unwrap();
    let hits: Vec<&Val> = sq
        .apex
        .elems()
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let i = *i as u32;
            sq.proj.cod().elem(sq.proj.at(i)) == x && sq.q.cod().elem(sq.q.at(i)) == t
        })
        .map(|(_, z)| z)
        .collect();
    assert_eq!(hits.len(), 1);
    hits[0].clone()
}

/// `Φ²(F,a)` read componentwise: the value at `(x,t)` is `a(x,t)`.
fn assert_componentwise(f: &UnivCatFunctor<FinSet>, d: &DpElement<FinSet>, d2: &DpElement<FinSet>) {
    let c = f.src.cat();
    assert_eq!(d2.code, c.compose(&d.code, &f.phi).unwrap());
    let sq2 = f.dst.ext(&d2.code).unwrap();
    for (k, z) in sq2.apex.elems().iter().enumerate() {
        let k = k as u32;
        let x = sq2.proj.cod().elem(sq2.proj.at(k));
        let t = sq2.q.cod().elem(sq2.q.at(k));
        let w = point_with(&f.src, &d.code, x, t);
        assert_eq!(d2.value.apply(z), d.value.apply(&w));
    }
}

#[test]
fn phi2_is_componentwise_on_the_inclusion() {
    let (small, _, f) = incl();
    let c = &*small.cat;
    let v = c.skeletal(2);
    let mut n = 0;
    for x in [c.skeletal(1), c.skeletal(2)] {
        for code in c.hom(&x, &small.u()).unwrap() {
            let sq = f.src.ext(&code).unwrap();
            for value in c.hom(&sq.apex, &v).unwrap() {
                let d = DpElement {
                    code: code.clone(),
                    value,
                };
                assert_componentwise(&f, &d, &phi2(&f, &d).unwrap());
                n += 1;
            }
        }
    }
    assert_eq!(n, 12);
}

#[test]
fn chi_is_componentwise_on_the_inclusion() {
    let (small, big, f) = incl();
    let c = &*small.cat;
    let v: FinObj = small.u();
    let ip = i_p_obj(c, f.src.p(), &v).unwrap();
    let ip2 = i_p_obj(c, f.dst.p(), &v).unwrap();
    assert_eq!(ip.obj().len(), 3);
    assert_eq!(ip2.obj().len(), 7);
    let x = chi(&f, &v).unwrap();
    assert!(x.is_injective());
    for e in ip.obj().elems() {
        let d = eta_bang(&f.src, &c.point_at(ip.obj(), e).unwrap(), &v).unwrap();
        let img = x.apply(e).unwrap();
        let d2 = eta_bang(&f.dst, &c.point_at(ip2.obj(), img).unwrap(), &v).unwrap();
        assert_componentwise(&f, &d, &d2);
    }
    assert_eq!(big.u().len(), 3);
}

#[test]
fn inclusion_passes_everything() {
    let (small, big, f) = incl();
    let j = extensional_pair(&small, &big).unwrap();
    let cs = check_ucfunctor(&f, Some(&j), 2);
    assert_eq!(failing(&cs), Vec::<&str>::new());
    assert_eq!(cs.len(), 21);
    let h = h_of(&f).unwrap();
    let hs = check_h(&h, 2);
    assert_eq!(failing(&hs), Vec::<&str>::new());
    let js = check_h_j_compat(&h, &j, 2, 2).unwrap();
    assert_eq!(failing(&js), Vec::<&str>::new());
}

#[test]
fn h_keeps_decoded_tables() {
    let (_, _, f) = incl();
    let h = h_of(&f).unwrap();
    let objs = objects(&h.src, 2).unwrap();
    assert_eq!(objs.len(), 6);
    for g in &objs {
        let hg = h.obj(g).unwrap();
        assert_eq!(
            canonical_obj(&h.src, g).unwrap(),
            canonical_obj(&h.dst, &hg).unwrap()
        );
    }
}

#[test]
fn identity_passes_everything() {
    for spec in [CodedFamilySpec::u3(), CodedFamilySpec::u1()] {
        let fx = coded_universe(&spec).unwrap();
        let f = identity_functor(&fx).unwrap();
        let j = extensional_pair(&fx, &fx).unwrap();
        assert_eq!(
            failing(&check_ucfunctor(&f, Some(&j), 2)),
            Vec::<&str>::new()
        );
        let h = h_of(&f).unwrap();
        assert_eq!(failing(&check_h(&h, 2)), Vec::<&str>::new());
        assert_eq!(
            failing(&check_h_j_compat(&h, &j, 2, 1).unwrap()),
            Vec::<&str>::new()
        );
    }
}

#[test]
fn misplaced_point_breaks_the_comparison() {
    let fx = coded_universe(&CodedFamilySpec::u3()).unwrap();
    let f = identity_functor(&fx).unwrap();
    let bad = with_phi_t_value(&f, &fiber_val("1", 0), &fiber_val("2", 1)).unwrap();
    let cs = check_ucfunctor(&bad, None, 2);
    let ids = failing(&cs);
    assert!(ids.contains(&ccj::functors::CHECK_PHI_XF_ISO), "{ids:?}");
    assert!(ids.contains(&ccj::functors::CHECK_UNIV_SQUARE), "{ids:?}");
    assert!(!ids.contains(&ccj::functors::CHECK_UCF_FINAL));
}

#[test]
fn constant_target_refl_is_incompatible() {
    let fx = coded_universe(&CodedFamilySpec::u3()).unwrap();
    let f = identity_functor(&fx).unwrap();
    let j = with_target_omega(&extensional_pair(&fx, &fx).unwrap(), &fiber_val("2", 0)).unwrap();
    let cs = check_ucfunctor(&f, Some(&j), 2);
    assert_eq!(failing(&cs), vec![ccj::functors::CHECK_OMEGA_COMPAT]);
    let h = h_of(&f).unwrap();
    let err = check_h_j_compat(&h, &j, 2, 1).err().unwrap().to_string();
    assert!(err.contains(ccj::functors::CHECK_OMEGA_COMPAT), "{err}");
}

#[test]
fn codes_map_by_name() {
    let (_, _, f) = incl();
    let g: Vec<(Val, Val)> = f.phi.graph();
    assert_eq!(
        g,
        vec![
            (code_val("0"), code_val("0")),
            (code_val("1"), code_val("1"))
        ]
    );
}
