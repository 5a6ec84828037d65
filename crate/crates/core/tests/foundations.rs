use ccj::juniv::{build_coj, check_filler_bijection, check_univ_j, enumerate_jp};
use ccj::lcc::i_p_obj;
use ccj::models::{coded_universe, extensional_j, CodedFamilySpec};

#[test]
fn u3_counts() {
    let f = coded_universe(&CodedFamilySpec::u3()).unwrap();
    let c = &*f.cat;
    assert_eq!(f.ut().len(), 3);
    let up = f.universe.ext(f.universe.p()).unwrap();
    assert_eq!(up.apex.len(), 5);
    let ip = i_p_obj(c, f.universe.p(), &f.u()).unwrap();
    let sizes: Vec<usize> = ip.proj().fibers().iter().map(|v| v.len()).collect();
    assert_eq!(sizes, vec![1, 3, 9]);
    let b = extensional_j(&f).unwrap();
    let d = build_coj(&f.universe, &b.eq, &b.omega).unwrap();
    assert_eq!(d.e.total().len(), 3);
    assert_eq!(d.fp.apex.len(), 13);
    assert_eq!(d.filler.big.apex.len(), 21);
    assert!(check_univ_j(&f.universe, &b).iter().all(|c| c.passed()));
    assert_eq!(enumerate_jp(&d, 1000).unwrap().len(), 1);
    let chk = check_filler_bijection(&d, 1000);
    assert!(chk.passed(), "{chk:?}");
}
