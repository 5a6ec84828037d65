//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdict lines are always printed.

use ccj::cc_univ::{build_cc, Cc};
use ccj::csystem::{check_csystem_axioms, check_csystem_derived, CSystem, IdentityHom};
use ccj::defects::{
    constant_omega, corrupt_ft, corrupted_category, mismatched_refl, parallel_category,
    permuted_jp, tweak_j, WrongImage,
};
use ccj::error::Error;
use ccj::fincat::{check_category_axioms, check_functor, Category, FinCategory};
use ccj::finset::{FinSet, Val};
use ccj::functors::{
    check_h, check_h_j_compat, check_ucfunctor, code_inclusion, extensional_pair, h_of,
    identity_functor, with_phi_t_value, with_target_omega,
};
use ccj::jcs::{
    check_extensional, check_hom_j, check_idxt_rf, check_j01, check_j2, is_extensional, jdom_enum,
};
use ccj::juniv::{
    build_coj, check_filler_bijection, check_univ_j, enumerate_fillers, enumerate_jp, filler_to_j,
    j_to_filler, UnivJ,
};
use ccj::lcc::{check_lcc_laws, eta, DpElement};
use ccj::lifting::{
    check_closure_lemmas, check_conditions, derive_j, ClassPair, Conditions, MorphismFamily,
    Theorem,
};
use ccj::models::{coded_universe, extensional_j, fiber_val, CodedFamilySpec, Fixture};
use ccj::report::Check;
use ccj::suite::{construct, verify, Bounds, FixtureDoc, Suite, Target};
use ccj::transfer::{check_transfer_lemmas, j_from_jp, phi, transfer_bundle};
use ccj::universe::check_canonical_squares;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

type Verdict = Result<String, String>;

const U3_DOC: &str = include_str!("../../../fixtures/u3.toml");
const LIMIT: usize = 100_000;

fn fx(spec: CodedFamilySpec) -> Fixture {
    coded_universe(&spec).unwrap()
}

fn all_pass(what: &str, cs: &[Check]) -> Result<u64, String> {
    let bad: Vec<String> = cs
        .iter()
        .filter(|c| !c.passed() || c.status == ccj::report::Status::Skipped)
        .map(|c| {
            format!(
                "{}: {}",
                c.id,
                c.counterexamples
                    .first()
                    .cloned()
                    .unwrap_or_else(|| format!("{:?}", c.status))
            )
        })
        .collect();
    if bad.is_empty() {
        Ok(cs.iter().map(|c| c.instances).sum())
    } else {
        Err(format!("{what}: {}", bad.join("; ")))
    }
}

fn fails_with(what: &str, cs: &[Check], id: &str) -> Result<(), String> {
    match cs.iter().find(|c| c.id == id) {
        Some(c) if !c.passed() => Ok(()),
        Some(_) => Err(format!("{what}: {id} did not fail")),
        None => Err(format!("{what}: no check {id}")),
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Sections `v` of `P` with `η(F, ũ_1(v)) = φ∘Jp`, counted per entry and
/// compared with `J`.
fn uniqueness(cc: &Cc<FinSet>, b: &UnivJ<FinSet>, bound: usize) -> Result<usize, String> {
    let jj = j_from_jp(cc, b).map_err(err)?;
    let bundle = transfer_bundle(cc, b).map_err(err)?;
    let j = bundle.j.as_ref().unwrap();
    let d = &*jj.data;
    let c = cc.cat();
    let entries = jdom_enum(cc, &bundle, bound).map_err(err)?;
    for e in &entries {
        let ph = phi(cc, d, e).map_err(err)?;
        let target = c.compose(&ph.phi, &jj.jp).map_err(err)?;
        let mut sols = Vec::new();
        for v in cc.sections(&e.p).map_err(err)? {
            let dv = DpElement {
                code: ph.f.clone(),
                value: cc.u1_tilde(&v).map_err(err)?,
            };
            if eta(&d.e.universe, &dv, &d.base.total()).map_err(err)? == target {
                sols.push(v);
            }
        }
        if sols.len() != 1 {
            return Err(format!("{} solutions at {e:?}", sols.len()));
        }
        if sols[0] != j.j(cc, e).map_err(err)? {
            return Err(format!("J differs from the unique solution at {e:?}"));
        }
    }
    if entries.is_empty() {
        return Err("no Jdom entries".into());
    }
    Ok(entries.len())
}

fn c1() -> Verdict {
    let mut n = 0;
    for spec in [CodedFamilySpec::u3(), CodedFamilySpec::u1()] {
        let f = fx(spec);
        let c = &*f.cat;
        let j = extensional_j(&f).map_err(err)?;
        let e = f.universe.e_universe(&j.eq).map_err(err)?.universe;
        let cs = vec![
            check_category_axioms(c, c.objects().len()),
            check_canonical_squares(&f.universe, 2),
            check_canonical_squares(&e, 2),
        ];
        n += all_pass(f.name(), &cs)?;
    }
    Ok(format!("{n} instances over U3 and U1, 0 violations"))
}

fn c2() -> Verdict {
    let base = FixtureDoc::parse(U3_DOC).map_err(err)?;
    let mut skewed = base.clone();
    skewed.options.skew = Some(7);
    let sf = skewed.fixture("U3").map_err(err)?;
    let c = &*sf.cat;
    let q = sf.universe.ext(&c.id(&sf.u())).map_err(err)?.q;
    if q == c.id(&sf.ut()) {
        return Err("skewed chooser has Q(Id_U) = Id_Ũ".into());
    }
    let b = Bounds::default();
    let key = |r: &ccj::report::Report| {
        r.checks
            .iter()
            .map(|c| (c.id.clone(), c.status, c.instances, c.violations))
            .collect::<Vec<_>>()
    };
    let r0 = verify(&base, &Suite::ALL, &b).map_err(err)?;
    let r1 = verify(&skewed, &Suite::ALL, &b).map_err(err)?;
    if !r0.all_pass() {
        return Err(format!("unskewed suite fails: {:?}", r0.failing_ids()));
    }
    if key(&r0) != key(&r1) {
        return Err(format!(
            "verdicts differ: skewed failing {:?}",
            r1.failing_ids()
        ));
    }
    for t in [
        Target::Cc,
        Target::JUniverse,
        Target::JCc,
        Target::DeriveJ,
        Target::HOf,
    ] {
        let mut x = construct(&base, t, &b).map_err(err)?.sections;
        let mut y = construct(&skewed, t, &b).map_err(err)?.sections;
        if t == Target::JUniverse {
            x.pop();
            y.pop();
        }
        if x != y {
            return Err(format!("{} tables differ", t.name()));
        }
    }
    Ok(format!(
        "{} identical verdicts, 5 identical construction dumps",
        r0.checks.len()
    ))
}

fn c3() -> Verdict {
    let f = fx(CodedFamilySpec::u3());
    let cc = build_cc(&f.universe);
    let n = all_pass(
        "CC(U3)",
        &[check_csystem_axioms(&cc, 3), check_csystem_derived(&cc, 3)],
    )?;
    Ok(format!("{n} instances at length ≤ 3"))
}

fn c4() -> Verdict {
    let f = fx(CodedFamilySpec::u3());
    let cc = build_cc(&f.universe);
    let bd = transfer_bundle(&cc, &extensional_j(&f).map_err(err)?).map_err(err)?;
    let mut cs = check_j01(&cc, &bd, 2);
    cs.push(check_extensional(&cc, &*bd.idt, 2));
    let n = all_pass("J0/J1", &cs)?;
    if !is_extensional(&cc, &*bd.idt, 2) {
        return Err("IdT is not extensional".into());
    }
    Ok(format!("{n} instances at length ≤ 2, extensional"))
}

fn c5() -> Verdict {
    let f = fx(CodedFamilySpec::u3());
    let cc = build_cc(&f.universe);
    let j = extensional_j(&f).map_err(err)?;
    let bd = transfer_bundle(&cc, &j).map_err(err)?;
    let mut cs = check_idxt_rf(&cc, &bd, 1);
    cs.extend(check_transfer_lemmas(&cc, &j, 1));
    let n = all_pass("bridge", &cs)?;
    Ok(format!("{n} instances for T of length ≤ 2"))
}

fn j2_and_unique(what: &str, cc: &Cc<FinSet>, j: &UnivJ<FinSet>) -> Result<String, String> {
    let bd = transfer_bundle(cc, j).map_err(err)?;
    let n = all_pass(what, &check_j2(cc, &bd, 1))?;
    let k = uniqueness(cc, j, 1).map_err(|e| format!("{what}: {e}"))?;
    Ok(format!(
        "{n} instances, {k} entries with exactly 1 solution"
    ))
}

fn c6() -> Verdict {
    let f = fx(CodedFamilySpec::u3());
    let cc = build_cc(&f.universe);
    j2_and_unique("U3", &cc, &extensional_j(&f).map_err(err)?)
}

fn c7() -> Verdict {
    let f = fx(CodedFamilySpec::u3());
    let j = extensional_j(&f).map_err(err)?;
    let d = build_coj(&f.universe, &j.eq, &j.omega).map_err(err)?;
    let jps = enumerate_jp(&d, LIMIT).map_err(err)?;
    let fillers = enumerate_fillers(&d, LIMIT).map_err(err)?;
    if jps.is_empty() || jps.len() != fillers.len() {
        return Err(format!("{} sections, {} fillers", jps.len(), fillers.len()));
    }
    for jp in &jps {
        if filler_to_j(&d, &j_to_filler(&d, jp).map_err(err)?).map_err(err)? != *jp {
            return Err("filler_to_j∘j_to_filler ≠ id".into());
        }
    }
    for fl in &fillers {
        if j_to_filler(&d, &filler_to_j(&d, fl).map_err(err)?).map_err(err)? != *fl {
            return Err("j_to_filler∘filler_to_j ≠ id".into());
        }
    }
    all_pass("filler", &[check_filler_bijection(&d, LIMIT)])?;
    Ok(format!(
        "{} sections ↔ {} fillers",
        jps.len(),
        fillers.len()
    ))
}

fn pair(tc: &str, fb: &str) -> ClassPair<FinSet> {
    ClassPair {
        tc: MorphismFamily::by_name(tc).unwrap(),
        fb: MorphismFamily::by_name(fb).unwrap(),
    }
}

fn c8() -> Verdict {
    let c = FinSet::default();
    let (ia, is) = (pair("isos", "all"), pair("injections", "surjections"));
    let mut n = all_pass(
        "cond2 (isos, all)",
        &check_conditions(&c, &ia, Conditions::Cond2, 4),
    )?;
    n += all_pass(
        "cond2 (inj, surj)",
        &check_conditions(&c, &is, Conditions::Cond2, 4),
    )?;
    let big = FinSet::new(ccj::suite::LIFTING_CAP);
    n += all_pass("lemmas (isos, all)", &check_closure_lemmas(&big, &ia, 4))?;
    n += all_pass("lemmas (inj, surj)", &check_closure_lemmas(&big, &is, 4))?;
    let mut out = vec![format!("{n} condition and lemma instances")];
    for (spec, p, th) in [
        (CodedFamilySpec::u3(), &ia, Theorem::Th1),
        (CodedFamilySpec::u1(), &is, Theorem::Th2),
    ] {
        let f = fx(spec);
        let e = extensional_j(&f).map_err(err)?;
        let dj = derive_j(&f.universe, &e.eq, &e.omega, p, th, 4).map_err(err)?;
        all_pass(f.name(), &check_univ_j(&f.universe, &dj))?;
        let cc = build_cc(&f.universe);
        out.push(format!(
            "{} {th:?}: {}",
            f.name(),
            j2_and_unique(f.name(), &cc, &dj)?
        ));
    }
    Ok(out.join("; "))
}

fn c9() -> Verdict {
    let small = fx(CodedFamilySpec::small());
    let big = fx(CodedFamilySpec::u3());
    let mut n = 0;
    for (name, f, j) in [
        (
            "incl",
            code_inclusion(&small, &big),
            extensional_pair(&small, &big),
        ),
        ("id", identity_functor(&big), extensional_pair(&big, &big)),
    ] {
        let (f, j) = (f.map_err(err)?, j.map_err(err)?);
        n += all_pass(name, &check_ucfunctor(&f, Some(&j), 2))?;
        let h = h_of(&f).map_err(err)?;
        n += all_pass(name, &check_h(&h, 2))?;
        n += all_pass(name, &check_h_j_compat(&h, &j, 2, 2).map_err(err)?)?;
    }
    Ok(format!("{n} instances for the inclusion and the identity"))
}

fn c10() -> Verdict {
    let f = fx(CodedFamilySpec::u3());
    let j = extensional_j(&f).map_err(err)?;
    let e = f.universe.e_universe(&j.eq).map_err(err)?.universe;
    let n = all_pass("lcc", &check_lcc_laws(&f.universe, &[e], 2))?;
    Ok(format!("{n} instances"))
}

fn c11() -> Verdict {
    let mut seen = Vec::new();
    let mut note = |s: &str| seen.push(s.to_string());

    let c = corrupted_category().map_err(err)?;
    let ch = check_category_axioms(&c, c.objects().len());
    fails_with(
        "corrupted composition",
        std::slice::from_ref(&ch),
        "category-axioms",
    )?;
    if ch.violations != 1 {
        return Err(format!(
            "corrupted composition: {} violations",
            ch.violations
        ));
    }
    note("category-axioms");

    let (pc, sq) = parallel_category().map_err(err)?;
    let w = WrongImage {
        at: pc.arrow("b").unwrap(),
        to: pc.arrow("c").unwrap(),
    };
    fails_with(
        "wrong image",
        &[check_functor(&pc, &pc, &w, &sq)],
        "functor-laws",
    )?;
    note("functor-laws");

    let u3 = fx(CodedFamilySpec::u3());
    let cc = Arc::new(build_cc(&u3.universe));
    let bad = corrupt_ft(cc.clone()).map_err(err)?;
    fails_with(
        "corrupted ft",
        &[check_csystem_axioms(&bad, 2)],
        "csystem-axioms",
    )?;
    note("csystem-axioms");

    let ej = extensional_j(&u3).map_err(err)?;
    let bd = transfer_bundle(&cc, &ej).map_err(err)?;
    let (tw, _) = tweak_j(&*cc, &bd, 1).map_err(err)?;
    fails_with(
        "tweaked J",
        &check_j2(&*cc, &tw, 1),
        ccj::jcs::CHECK_IOTA_RULE,
    )?;
    note("iota-rule");

    let mr = mismatched_refl(&*cc, &bd, 2).map_err(err)?;
    let hs = check_hom_j(&*cc, &*cc, &IdentityHom, &bd, &mr, 2, 1);
    fails_with("mismatched bundle", &hs, ccj::jcs::CHECK_HOM_J1)?;
    note("hom-j1");

    let om = constant_omega(&u3, &ej, &fiber_val("2", 0)).map_err(err)?;
    fails_with(
        "Ω off the diagonal",
        &check_univ_j(&u3.universe, &om),
        ccj::juniv::CHECK_OMEGA_SQUARE,
    )?;
    note("omega-square");

    let pj = permuted_jp(&ej).map_err(err)?;
    fails_with(
        "permuted Jp",
        &check_univ_j(&u3.universe, &pj),
        ccj::juniv::CHECK_JP_SECTION,
    )?;
    note("jp-section");

    let fs = FinSet::default();
    let cs = check_conditions(&fs, &pair("injections", "all"), Conditions::Cond2, 3);
    fails_with("(injections, all)", &cs, ccj::lifting::CHECK_COND2_RLP)?;
    note("cond2-fb-is-rlp-of-tc");

    let e = derive_j(
        &u3.universe,
        &ej.eq,
        &ej.omega,
        &pair("injections", "surjections"),
        Theorem::Th1,
        3,
    );
    match e {
        Err(Error::Hypothesis(m)) if m.starts_with("p-in-fb") => note("p-in-fb"),
        other => return Err(format!("U3 with (inj, surj): {:?}", other.map(|_| ()))),
    }

    let small = fx(CodedFamilySpec::small());
    let incl = code_inclusion(&small, &u3).map_err(err)?;
    let moved: Val = fiber_val("2", 1);
    let bad_f = with_phi_t_value(&incl, &fiber_val("1", 0), &moved).map_err(err)?;
    fails_with(
        "moved fiber point",
        &check_ucfunctor(&bad_f, None, 2),
        ccj::functors::CHECK_UNIV_SQUARE,
    )?;
    note("universe-square-pullback");

    let jp = extensional_pair(&small, &u3).map_err(err)?;
    let bad_j = with_target_omega(&jp, &fiber_val("2", 0)).map_err(err)?;
    fails_with(
        "incompatible Ω′",
        &check_ucfunctor(&incl, Some(&bad_j), 2),
        ccj::functors::CHECK_OMEGA_COMPAT,
    )?;
    let h = h_of(&incl).map_err(err)?;
    match check_h_j_compat(&h, &bad_j, 2, 1) {
        Err(Error::Hypothesis(m)) if m.starts_with(ccj::functors::CHECK_OMEGA_COMPAT) => {
            note("omega-compatibility")
        }
        other => {
            return Err(format!(
                "incompatible Ω′ reached the H checks: {:?}",
                other.map(|_| ())
            ))
        }
    }

    let doc: FixtureDoc =
        FixtureDoc::parse(include_str!("../../../fixtures/bad-fiber-map.toml")).map_err(err)?;
    let r = verify(&doc, &[Suite::Functors], &Bounds::default()).map_err(err)?;
    if !r.failing_ids().contains(&"broken/comparison-iso") {
        return Err(format!("defect fixture: {:?}", r.failing_ids()));
    }
    note("broken/comparison-iso");

    Ok(format!(
        "{} defects detected: {}",
        seen.len(),
        seen.join(", ")
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("category and universe soundness", c1),
        ("chooser independence", c2),
        ("C-system axioms", c3),
        ("J0/J1 transfer", c4),
        ("bridge lemmas", c5),
        ("J2 transfer and uniqueness", c6),
        ("filler bijection", c7),
        ("lifting theorems", c8),
        ("functoriality", c9),
        ("lcc soundness", c10),
        ("negative paths", c11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match v {
            Ok(d) => println!("criterion {:>2} PASS {name}: {d} ({secs:.1}s)", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {d} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
