//! Fixture documents, named check suites over them, and deterministic dumps
//! of the constructions.

use crate::cc_univ::{build_cc, canonical_graph, canonical_obj, Cc, CcObj};
use crate::csystem::{check_csystem_axioms, check_csystem_derived, objects, CSystem, CsHom};
use crate::error::{Error, Result};
use crate::fincat::{check_category_axioms, FinCategory, IdentityFunctor};
use crate::finset::{FinMor, FinSet, Val};
use crate::functors::{
    check_h, check_h_j_compat, check_ucfunctor, h_of, with_phi_t_value, with_target_omega,
    FunctorJ, UnivCatFunctor,
};
use crate::jcs::{check_extensional, check_idxt_rf, check_j01, check_j2, jdom_enum, JBundle};
use crate::juniv::{build_coj, check_filler_bijection, check_univ_j, UnivJ};
use crate::lcc::check_lcc_laws;
use crate::lifting::{
    check_closure_lemmas, check_conditions, derive_j, derive_j_given, ClassPair, MorphismFamily,
    Theorem,
};
use crate::models::{code_val, coded_universe, extensional_j, fiber_val, CodedFamilySpec, Fixture};
use crate::report::{Check, Report, Tally};
use crate::transfer::{check_transfer_lemmas, transfer_bundle};
use crate::universe::check_canonical_squares;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

pub const FIXTURE_FORMAT: &str = "ccj-fixture/1";
pub const CONSTRUCT_FORMAT: &str = "ccj-construct/1";

/// Largest accepted C-system length bound.
pub const MAX_BOUND: usize = 3;
/// Largest accepted bound for `IdxT`, `rf` and `J` enumeration.
pub const MAX_J2_BOUND: usize = 2;
/// Largest accepted size of fragment sets for lifting enumeration.
pub const MAX_LIFTING_BOUND: usize = 4;
/// Materialization cap of the category used for the closure lemmas.
pub const LIFTING_CAP: usize = 4096;
/// Limit on enumerated sections and fillers.
pub const SEARCH_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeEntry {
    pub name: String,
    pub fiber: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSel {
    IsosAll,
    InjSurj,
}

impl PairSel {
    pub fn pair(self) -> ClassPair<FinSet> {
        match self {
            PairSel::IsosAll => ClassPair {
                tc: MorphismFamily::isos(),
                fb: MorphismFamily::all(),
            },
            PairSel::InjSurj => ClassPair {
                tc: MorphismFamily::injections(),
                fb: MorphismFamily::surjections(),
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairSel::IsosAll => "isos-all",
            PairSel::InjSurj => "inj-surj",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skew: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j2_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifting_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseBlock {
    pub name: String,
    pub codes: Vec<CodeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberRef {
    pub code: String,
    pub index: usize,
}

impl FiberRef {
    pub fn val(&self) -> Val {
        fiber_val(&self.code, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberOverride {
    pub from: FiberRef,
    pub to: FiberRef,
}

/// `(Id, φ, φ̃)` with `φ` given on codes and `φ̃` sending `el(a,i)` to
/// `el(φ(a),i)` unless overridden.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorBlock {
    pub name: String,
    pub source: String,
    pub target: String,
    pub code_map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fiber_override: Vec<FiberOverride>,
    /// Replaces the target `Ω′` by the constant map at this point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_omega: Option<FiberRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureDoc {
    pub format: String,
    pub name: String,
    pub codes: Vec<CodeEntry>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub universe: Vec<UniverseBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functor: Vec<FunctorBlock>,
}

fn is_default(o: &Options) -> bool {
    *o == Options::default()
}

impl FixtureDoc {
    pub fn from_spec(spec: &CodedFamilySpec) -> FixtureDoc {
        FixtureDoc {
            format: FIXTURE_FORMAT.to_string(),
            name: spec.name.clone(),
            codes: entries(&spec.codes),
            options: Options {
                skew: (spec.skew != 0).then_some(spec.skew),
                ..Options::default()
            },
            universe: Vec::new(),
            functor: Vec::new(),
        }
    }

    /// Parses and validates.
    pub fn parse(text: &str) -> Result<FixtureDoc> {
        let doc: FixtureDoc = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.format != FIXTURE_FORMAT {
            return Err(Error::Parse(format!(
                "unsupported format {:?}, expected {FIXTURE_FORMAT:?}",
                self.format
            )));
        }
        let mut names = vec![self.name.as_str()];
        for u in &self.universe {
            if names.contains(&u.name.as_str()) {
                return Err(Error::Spec(format!("duplicate universe name {}", u.name)));
            }
            names.push(&u.name);
        }
        for n in &names {
            self.spec(n)?.validate()?;
        }
        if self.options.skew.is_some_and(|k| k > i64::MAX as u64) {
            return Err(Error::Spec("skew seeds are limited to 63 bits".into()));
        }
        if let Some(th) = &self.options.theorem {
            Theorem::parse(th)?;
        }
        let mut seen = Vec::new();
        for f in &self.functor {
            if seen.contains(&&f.name) {
                return Err(Error::Spec(format!("duplicate functor name {}", f.name)));
            }
            seen.push(&f.name);
            self.check_functor_block(f)?;
        }
        Ok(())
    }

    fn check_functor_block(&self, f: &FunctorBlock) -> Result<()> {
        let src = self.spec(&f.source)?;
        let dst = self.spec(&f.target)?;
        let fiber =
            |s: &CodedFamilySpec, c: &str| s.codes.iter().find(|(n, _)| n == c).map(|(_, k)| *k);
        for (a, _) in &src.codes {
            let Some(b) = f.code_map.get(a) else {
                return Err(Error::Spec(format!(
                    "functor {}: code {a} is not mapped",
                    f.name
                )));
            };
            match fiber(&dst, b) {
                None => {
                    return Err(Error::Spec(format!(
                        "functor {}: {b} is not a code of {}",
                        f.name, f.target
                    )))
                }
                Some(k) if Some(k) != fiber(&src, a) => {
                    return Err(Error::Spec(format!(
                        "functor {}: fibers of {a} and {b} differ in size",
                        f.name
                    )))
                }
                _ => {}
            }
        }
        if let Some(extra) = f.code_map.keys().find(|a| fiber(&src, a).is_none()) {
            return Err(Error::Spec(format!(
                "functor {}: {extra} is not a code of {}",
                f.name, f.source
            )));
        }
        let point = |s: &CodedFamilySpec, r: &FiberRef| match fiber(s, &r.code) {
            Some(k) if r.index < k => Ok(()),
            _ => Err(Error::Spec(format!(
                "functor {}: el({},{}) is not a point of {}",
                f.name, r.code, r.index, s.name
            ))),
        };
        for o in &f.fiber_override {
            point(&src, &o.from)?;
            point(&dst, &o.to)?;
        }
        if let Some(r) = &f.target_omega {
            point(&dst, r)?;
        }
        Ok(())
    }

    /// The spec of the main fixture or of a named universe block, with the
    /// document options applied.
    pub fn spec(&self, name: &str) -> Result<CodedFamilySpec> {
        let codes = if name == self.name {
            &self.codes
        } else {
            &self
                .universe
                .iter()
                .find(|u| u.name == name)
                .ok_or_else(|| Error::Spec(format!("unknown universe {name}")))?
                .codes
        };
        let mut spec = CodedFamilySpec {
            name: name.to_string(),
            codes: codes.iter().map(|c| (c.name.clone(), c.fiber)).collect(),
            skew: self.options.skew.unwrap_or(0),
            cap: crate::finset::DEFAULT_CAP,
        };
        if let Some(cap) = self.options.cap {
            spec.cap = cap;
        }
        Ok(spec)
    }

    pub fn fixture(&self, name: &str) -> Result<Fixture> {
        coded_universe(&self.spec(name)?)
    }

    pub fn functor(&self, name: &str) -> Result<(UnivCatFunctor<FinSet>, FunctorJ<FinSet>)> {
        let blk = self
            .functor
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::Spec(format!("unknown functor {name}")))?;
        functor_from_block(self, blk)
    }
}

fn entries(codes: &[(String, usize)]) -> Vec<CodeEntry> {
    codes
        .iter()
        .map(|(n, k)| CodeEntry {
            name: n.clone(),
            fiber: *k,
        })
        .collect()
}

pub fn functor_from_block(
    doc: &FixtureDoc,
    blk: &FunctorBlock,
) -> Result<(UnivCatFunctor<FinSet>, FunctorJ<FinSet>)> {
    let src = doc.fixture(&blk.source)?;
    let dst = doc.fixture(&blk.target)?;
    let mut codes = HashMap::new();
    let mut points = HashMap::new();
    for (a, k) in &src.spec.codes {
        let b = &blk.code_map[a];
        codes.insert(code_val(a), code_val(b));
        for i in 0..*k {
            points.insert(fiber_val(a, i), fiber_val(b, i));
        }
    }
    let look = |m: &HashMap<Val, Val>, v: &Val| {
        m.get(v)
            .cloned()
            .ok_or_else(|| Error::Spec(format!("{v} is not mapped")))
    };
    let c = &*dst.cat;
    let phi = c.from_fn(&src.u(), &dst.u(), |v| look(&codes, v))?;
    let phi_t = c.from_fn(&src.ut(), &dst.ut(), |v| look(&points, v))?;
    let mut f = UnivCatFunctor::new(
        src.universe.clone(),
        dst.universe.clone(),
        Arc::new(IdentityFunctor),
        phi,
        phi_t,
    )?;
    for o in &blk.fiber_override {
        f = with_phi_t_value(&f, &o.from.val(), &o.to.val())?;
    }
    let mut j = FunctorJ {
        src: extensional_j(&src)?,
        dst: extensional_j(&dst)?,
    };
    if let Some(r) = &blk.target_omega {
        j = with_target_omega(&j, &r.val())?;
    }
    Ok((f, j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Category,
    Lcc,
    Csystem,
    J01,
    Bridge,
    J2,
    Filler,
    Lifting,
    Functors,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Category,
        Suite::Lcc,
        Suite::Csystem,
        Suite::J01,
        Suite::Bridge,
        Suite::J2,
        Suite::Filler,
        Suite::Lifting,
        Suite::Functors,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Category => "category",
            Suite::Lcc => "lcc",
            Suite::Csystem => "csystem",
            Suite::J01 => "j01",
            Suite::Bridge => "bridge",
            Suite::J2 => "j2",
            Suite::Filler => "filler",
            Suite::Lifting => "lifting",
            Suite::Functors => "functors",
        }
    }

    /// A suite name, or `all`.
    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .map(|x| vec![x])
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::Spec(format!(
                    "unknown suite {s}; expected all or one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Enumeration bounds; `None` falls back to the document options, then to
/// the defaults `2`, `1` and `4`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Bounds {
    pub bound: Option<usize>,
    pub j2_bound: Option<usize>,
    pub lifting_bound: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolved {
    pub bound: usize,
    pub j2_bound: usize,
    pub lifting_bound: usize,
}

impl Bounds {
    pub fn resolve(&self, o: &Options) -> Result<Resolved> {
        let r = Resolved {
            bound: self.bound.or(o.bound).unwrap_or(2),
            j2_bound: self.j2_bound.or(o.j2_bound).unwrap_or(1),
            lifting_bound: self.lifting_bound.or(o.lifting_bound).unwrap_or(4),
        };
        let over = |what: &str, v: usize, max: usize| {
            if v > max {
                Err(Error::Bound(format!(
                    "{what} {v} exceeds the enumeration limit {max}"
                )))
            } else {
                Ok(())
            }
        };
        over("bound", r.bound, MAX_BOUND)?;
        over("j2 bound", r.j2_bound, MAX_J2_BOUND)?;
        over("lifting bound", r.lifting_bound, MAX_LIFTING_BOUND)?;
        Ok(r)
    }
}

/// The main fixture with everything the suites share.
pub struct Loaded {
    pub doc: FixtureDoc,
    pub fixture: Fixture,
    pub cc: Cc<FinSet>,
    /// The extensional structure, or why there is none.
    pub j: std::result::Result<UnivJ<FinSet>, String>,
}

impl Loaded {
    pub fn new(doc: &FixtureDoc) -> Result<Loaded> {
        let fixture = doc.fixture(&doc.name)?;
        let cc = build_cc(&fixture.universe);
        let j = match fixture.spec.validate_extensional() {
            Ok(()) => Ok(extensional_j(&fixture)?),
            Err(e) => Err(e.to_string()),
        };
        Ok(Loaded {
            doc: doc.clone(),
            fixture,
            cc,
            j,
        })
    }

    fn bundle(&self) -> Result<JBundle<Cc<FinSet>>> {
        transfer_bundle(
            &self.cc,
            self.j.as_ref().map_err(|e| Error::Spec(e.clone()))?,
        )
    }
}

fn skipped(ids: &[&str], why: &str) -> Vec<Check> {
    ids.iter().map(|id| Check::skipped(id, why)).collect()
}

fn prefixed(name: &str, cs: Vec<Check>) -> Vec<Check> {
    cs.into_iter()
        .map(|mut c| {
            c.id = format!("{name}/{}", c.id);
            c
        })
        .collect()
}

pub const CHECK_DERIVE_J: &str = "derive-j";

pub fn run_suite(l: &Loaded, s: Suite, b: Resolved) -> Result<Vec<Check>> {
    let fx = &l.fixture;
    let u = &fx.universe;
    let c = &*fx.cat;
    let no_j = |ids: &[&str]| skipped(ids, l.j.as_ref().err().map(String::as_str).unwrap_or(""));
    Ok(match s {
        Suite::Category => {
            let mut out = vec![check_category_axioms(c, c.objects().len())];
            let mut base = check_canonical_squares(u, b.bound);
            base.id = format!("{}/base", base.id);
            out.push(base);
            match &l.j {
                Ok(j) => {
                    let mut e = check_canonical_squares(&u.e_universe(&j.eq)?.universe, b.bound);
                    e.id = format!("{}/e-universe", e.id);
                    out.push(e);
                }
                Err(_) => out.extend(no_j(&["canonical-squares-pullback/e-universe"])),
            }
            out
        }
        Suite::Lcc => {
            let mut comp = Vec::new();
            if let Ok(j) = &l.j {
                comp.push(u.e_universe(&j.eq)?.universe);
            }
            check_lcc_laws(u, &comp, b.bound)
        }
        Suite::Csystem => vec![
            check_csystem_axioms(&l.cc, b.bound),
            check_csystem_derived(&l.cc, b.bound),
        ],
        Suite::J01 => match &l.j {
            Ok(_) => {
                let bd = l.bundle()?;
                let mut out = check_j01(&l.cc, &bd, b.bound);
                out.push(check_extensional(&l.cc, &*bd.idt, b.bound));
                out
            }
            Err(_) => no_j(&[
                crate::jcs::CHECK_J0_NATURALITY,
                crate::jcs::CHECK_J1_NATURALITY,
                crate::jcs::CHECK_REFL_BOUNDARY,
                crate::jcs::CHECK_EXTENSIONAL,
            ]),
        },
        Suite::Bridge => match &l.j {
            Ok(j) => {
                let bd = l.bundle()?;
                let mut out = check_idxt_rf(&l.cc, &bd, b.j2_bound);
                out.extend(check_transfer_lemmas(&l.cc, j, b.j2_bound));
                out
            }
            Err(_) => no_j(&[
                crate::jcs::CHECK_IDXT_NATURALITY,
                crate::jcs::CHECK_IDXT_DELTA,
                crate::jcs::CHECK_RF_NATURALITY,
                crate::transfer::CHECK_IDXT_INT,
                crate::transfer::CHECK_RF_OMEGA,
            ]),
        },
        Suite::J2 => match &l.j {
            Ok(_) => check_j2(&l.cc, &l.bundle()?, b.j2_bound),
            Err(_) => no_j(&[crate::jcs::CHECK_J2_NATURALITY, crate::jcs::CHECK_IOTA_RULE]),
        },
        Suite::Filler => match &l.j {
            Ok(j) => {
                let mut out = check_univ_j(u, j);
                let d = build_coj(u, &j.eq, &j.omega)?;
                out.push(check_filler_bijection(&d, SEARCH_LIMIT));
                out
            }
            Err(_) => no_j(&[
                crate::juniv::CHECK_OMEGA_SQUARE,
                crate::juniv::CHECK_JP_SECTION,
                crate::juniv::CHECK_FILLER_BIJECTION,
            ]),
        },
        Suite::Lifting => {
            let sel = l.doc.options.pair.unwrap_or(PairSel::IsosAll);
            let pair = sel.pair();
            let th = theorem(&l.doc)?;
            let conds = check_conditions(c, &pair, th.conditions(), b.lifting_bound);
            let mut out = conds.clone();
            out.extend(check_closure_lemmas(
                &FinSet::new(LIFTING_CAP),
                &pair,
                b.lifting_bound,
            ));
            match &l.j {
                Ok(j) => out.push(derived_check(l, j, &pair, th, &conds, b)),
                Err(_) => out.extend(no_j(&[CHECK_DERIVE_J])),
            }
            out
        }
        Suite::Functors => {
            let mut out = Vec::new();
            for blk in &l.doc.functor {
                out.extend(prefixed(&blk.name, functor_checks(&l.doc, blk, b)?));
            }
            out
        }
    })
}

pub fn theorem(doc: &FixtureDoc) -> Result<Theorem> {
    doc.options
        .theorem
        .as_deref()
        .map(Theorem::parse)
        .transpose()
        .map(|t| t.unwrap_or(Theorem::Th1))
}

fn derived_check(
    l: &Loaded,
    j: &UnivJ<FinSet>,
    pair: &ClassPair<FinSet>,
    th: Theorem,
    conds: &[Check],
    b: Resolved,
) -> Check {
    let mut t = Tally::new(CHECK_DERIVE_J);
    t.note(format!("{th:?} with ({}, {})", pair.tc.name, pair.fb.name));
    let dj = build_coj(&l.fixture.universe, &j.eq, &j.omega)
        .and_then(|d| derive_j_given(&d, pair, th, conds));
    match dj {
        Ok(dj) => {
            let mut sub = check_univ_j(&l.fixture.universe, &dj);
            match transfer_bundle(&l.cc, &dj) {
                Ok(bd) => sub.extend(check_j2(&l.cc, &bd, b.j2_bound)),
                Err(e) => t.fail(format!("transfer of the derived structure: {e}")),
            }
            for ch in sub {
                t.expect(ch.passed(), || {
                    format!(
                        "{}: {}",
                        ch.id,
                        ch.counterexamples.first().cloned().unwrap_or_default()
                    )
                });
            }
        }
        Err(e) => t.fail(e.to_string()),
    }
    t.finish()
}

fn functor_checks(doc: &FixtureDoc, blk: &FunctorBlock, b: Resolved) -> Result<Vec<Check>> {
    let (f, j) = functor_from_block(doc, blk)?;
    let mut out = check_ucfunctor(&f, Some(&j), b.bound);
    let hom_ids = [
        crate::jcs::CHECK_HOM_J0,
        crate::jcs::CHECK_HOM_J1,
        crate::jcs::CHECK_HOM_IDXT_RF,
        crate::jcs::CHECK_HOM_J2,
        crate::functors::CHECK_D_ELEMENTS,
    ];
    let structural = out.iter().take(7).all(Check::passed);
    let h = if structural { h_of(&f).ok() } else { None };
    match h {
        Some(h) => {
            out.extend(check_h(&h, b.bound));
            match check_h_j_compat(&h, &j, b.bound, b.j2_bound) {
                Ok(cs) => out.extend(cs),
                Err(e) => out.extend(skipped(&hom_ids, &e.to_string())),
            }
        }
        None => {
            let ids = [
                crate::functors::CHECK_PSI_ISO,
                crate::functors::CHECK_PSI_DEFINING,
                crate::functors::CHECK_PSI_PROJ,
                crate::functors::CHECK_H_INJECTIVE,
                crate::csystem::CHECK_CSYSTEM_HOM,
            ];
            out.extend(skipped(&ids, "not a universe category functor"));
            out.extend(skipped(&hom_ids, "not a universe category functor"));
        }
    }
    Ok(out)
}

/// Runs the selected suites in their fixed order.
pub fn verify(doc: &FixtureDoc, suites: &[Suite], b: &Bounds) -> Result<Report> {
    let r = b.resolve(&doc.options)?;
    let l = Loaded::new(doc)?;
    let mut rep = Report::new(&doc.name);
    let mut ss = suites.to_vec();
    ss.sort();
    ss.dedup();
    for s in ss {
        rep.extend(run_suite(&l, s, r)?);
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Cc,
    JUniverse,
    JCc,
    DeriveJ,
    HOf,
}

impl Target {
    pub fn parse(s: &str) -> Result<Target> {
        Ok(match s {
            "cc" => Target::Cc,
            "j-universe" => Target::JUniverse,
            "j-cc" => Target::JCc,
            "derive-j" => Target::DeriveJ,
            "h-of" => Target::HOf,
            _ => {
                return Err(Error::Spec(format!(
                    "unknown target {s}; expected cc, j-universe, j-cc, derive-j or h-of"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::Cc => "cc",
            Target::JUniverse => "j-universe",
            Target::JCc => "j-cc",
            Target::DeriveJ => "derive-j",
            Target::HOf => "h-of",
        }
    }

    /// The construction executed.
    pub fn anchor(self) -> &'static str {
        match self {
            Target::Cc => "cc-of-universe",
            Target::JUniverse => "extensional-eq-omega-jp",
            Target::JCc => "j-from-jp",
            Target::DeriveJ => "jp-from-lifting",
            Target::HOf => "h-of-functor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub format: String,
    pub target: String,
    pub anchor: String,
    pub fixture: String,
    pub codes: Vec<CodeEntry>,
    pub skew: u64,
    pub sections: Vec<Section>,
}

impl Construction {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let codes: Vec<String> = self
            .codes
            .iter()
            .map(|c| format!("{}:{}", c.name, c.fiber))
            .collect();
        let _ = writeln!(s, "# {} {}", self.format, self.target);
        let _ = writeln!(s, "# construction: {}", self.anchor);
        let _ = writeln!(
            s,
            "# fixture: {} codes [{}] skew {}",
            self.fixture,
            codes.join(" "),
            self.skew
        );
        for sec in &self.sections {
            let _ = writeln!(s, "\n[{}]", sec.title);
            for l in &sec.lines {
                let _ = writeln!(s, "{l}");
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("construction serializes")
    }
}

fn show_seq(v: &[Val]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// `Γ` as its decoded code tables, `[F1 | F2 | …]`.
pub fn show_obj(cc: &Cc<FinSet>, g: &CcObj<FinSet>) -> Result<String> {
    let layers: Vec<String> = canonical_obj(cc, g)?
        .into_iter()
        .map(|gr| {
            let es: Vec<String> = gr
                .iter()
                .map(|(x, a)| format!("{}↦{a}", show_seq(x)))
                .collect();
            es.join(" ")
        })
        .collect();
    Ok(format!("[{}]", layers.join(" | ")))
}

fn show_mor(cc: &Cc<FinSet>, m: &crate::cc_univ::CcMor<FinSet>) -> Result<String> {
    let es: Vec<String> = canonical_graph(cc, m)?
        .into_iter()
        .map(|(x, y)| format!("{}↦{}", show_seq(&x), show_seq(&y)))
        .collect();
    Ok(format!("{{{}}}", es.join(" ")))
}

fn show_finmor(m: &FinMor) -> String {
    let es: Vec<String> = m.graph().iter().map(|(x, y)| format!("{x}↦{y}")).collect();
    format!("{{{}}}", es.join(" "))
}

/// Points of `(Ũ;p)` and `EŨ` named by their chooser-independent
/// components.
fn decode_ue(
    u: &crate::universe::Universe<FinSet>,
    eq: &FinMor,
) -> Result<(HashMap<Val, String>, HashMap<Val, String>)> {
    let up = u.ext(u.p())?;
    let mut parts = HashMap::new();
    for (i, z) in up.apex.elems().iter().enumerate() {
        let i = i as u32;
        let x = up.proj.cod().elem(up.proj.at(i)).clone();
        let y = up.q.cod().elem(up.q.at(i)).clone();
        parts.insert(z.clone(), vec![x, y]);
    }
    let es = u.ext(eq)?;
    let mut e_names = HashMap::new();
    for (i, z) in es.apex.elems().iter().enumerate() {
        let i = i as u32;
        let mut v = parts[es.proj.cod().elem(es.proj.at(i))].clone();
        v.push(es.q.cod().elem(es.q.at(i)).clone());
        e_names.insert(z.clone(), show_seq(&v));
    }
    let up_names = parts.into_iter().map(|(z, v)| (z, show_seq(&v))).collect();
    Ok((up_names, e_names))
}

pub fn construct(doc: &FixtureDoc, target: Target, b: &Bounds) -> Result<Construction> {
    let r = b.resolve(&doc.options)?;
    let l = Loaded::new(doc)?;
    let need_j = || l.j.as_ref().map_err(|e| Error::Spec(e.clone()));
    let mut sections = Vec::new();
    match target {
        Target::Cc => {
            let objs = objects(&l.cc, r.bound)?;
            let mut counts = vec![0usize; r.bound + 1];
            for g in &objs {
                counts[l.cc.length(g)] += 1;
            }
            sections.push(Section {
                title: "objects by length".into(),
                lines: counts
                    .iter()
                    .enumerate()
                    .map(|(n, k)| format!("{n}: {k}"))
                    .collect(),
            });
            let mut lines = Vec::new();
            for g in &objs {
                lines.push(format!("l={} {}", l.cc.length(g), show_obj(&l.cc, g)?));
            }
            lines.sort();
            sections.push(Section {
                title: "objects".into(),
                lines,
            });
        }
        Target::JUniverse => {
            let j = need_j()?;
            let u = &l.fixture.universe;
            let (up, e) = decode_ue(u, &j.eq)?;
            let d = build_coj(u, &j.eq, &j.omega)?;
            let mut eq: Vec<String> =
                j.eq.graph()
                    .iter()
                    .map(|(z, a)| format!("{}↦{a}", up[z]))
                    .collect();
            eq.sort();
            sections.push(Section {
                title: "Eq: (Ũ;p) → U".into(),
                lines: eq,
            });
            sections.push(Section {
                title: "Ω: Ũ → Ũ".into(),
                lines: vec![show_finmor(&j.omega)],
            });
            let mut w: Vec<String> =
                d.w.graph()
                    .iter()
                    .map(|(x, z)| format!("{x}↦{}", e[z]))
                    .collect();
            w.sort();
            sections.push(Section {
                title: "ω: Ũ → EŨ".into(),
                lines: w,
            });
            sections.push(Section {
                title: "sizes".into(),
                lines: vec![
                    format!("|EŨ| = {}", d.e.total().len()),
                    format!("|Fp| = {}", d.fp.apex.len()),
                    format!("|I_pEŨ(Ũ)| = {}", d.ie_ut.obj().len()),
                ],
            });
            sections.push(Section {
                title: "Jp: Fp → I_pEŨ(Ũ) (labels depend on the chooser)".into(),
                lines: j
                    .jp
                    .graph()
                    .iter()
                    .map(|(x, y)| format!("{x}↦{y}"))
                    .collect(),
            });
        }
        Target::JCc => {
            let bd = l.bundle()?;
            sections.push(j_table(&l.cc, &bd, r.j2_bound)?);
        }
        Target::DeriveJ => {
            let j = need_j()?;
            let sel = doc.options.pair.unwrap_or(PairSel::IsosAll);
            let th = theorem(doc)?;
            let dj = derive_j(
                &l.fixture.universe,
                &j.eq,
                &j.omega,
                &sel.pair(),
                th,
                r.lifting_bound,
            )?;
            sections.push(Section {
                title: "derivation".into(),
                lines: vec![
                    format!("theorem: {th:?}"),
                    format!("pair: {}", sel.name()),
                    format!("hypotheses: verified at lifting bound {}", r.lifting_bound),
                    format!("equals the extensional Jp: {}", dj.jp == j.jp),
                ],
            });
            let bd = transfer_bundle(&l.cc, &dj)?;
            sections.push(j_table(&l.cc, &bd, r.j2_bound)?);
        }
        Target::HOf => {
            let blk = doc
                .functor
                .first()
                .ok_or_else(|| Error::Spec("h-of needs a functor block".into()))?;
            let (f, _) = functor_from_block(doc, blk)?;
            let h = h_of(&f)?;
            let mut lines = Vec::new();
            for g in objects(&h.src, r.bound)? {
                let hg = h.obj(&g)?;
                lines.push(format!(
                    "{} ↦ {}",
                    show_obj(&h.src, &g)?,
                    show_obj(&h.dst, &hg)?
                ));
            }
            lines.sort();
            sections.push(Section {
                title: format!("H({}) on objects", blk.name),
                lines,
            });
        }
    }
    Ok(Construction {
        format: CONSTRUCT_FORMAT.into(),
        target: target.name().into(),
        anchor: target.anchor().into(),
        fixture: doc.name.clone(),
        codes: doc.codes.clone(),
        skew: doc.options.skew.unwrap_or(0),
        sections,
    })
}

fn j_table(cc: &Cc<FinSet>, bd: &JBundle<Cc<FinSet>>, bound: usize) -> Result<Section> {
    let j =
        bd.j.as_ref()
            .ok_or_else(|| Error::Spec("bundle has no J2-structure".into()))?;
    let mut lines = Vec::new();
    for e in jdom_enum(cc, bd, bound)? {
        let v = j.j(cc, &e)?;
        lines.push(format!(
            "T={} P={} s0={} ↦ J={}",
            show_obj(cc, &e.t)?,
            show_obj(cc, &e.p)?,
            show_mor(cc, &e.s0)?,
            show_mor(cc, &v)?
        ));
    }
    lines.sort();
    Ok(Section {
        title: "J(Γ,T,P,s0)".into(),
        lines,
    })
}
