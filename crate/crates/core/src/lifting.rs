//! Classes of morphisms, the right lifting property by search, the two
//! sets of conditions on a pair `(TC, FB)`, fibrancy, and the synthesis of
//! `Jp` from a lift of the filler square.

use crate::error::{Error, Result};
use crate::fincat::{Category, FinCategory};
use crate::finset::{FinMor, FinObj, FinSet};
use crate::juniv::{build_coj, filler_to_j, JUniverseData, UnivJ};
use crate::lcc::{adj, i_p_mor_between, i_p_obj, Lcc};
use crate::report::{Check, Tally};
use crate::universe::Universe;
use std::collections::HashMap;
use std::sync::Arc;

type Member<C> = dyn Fn(&C, &<C as Category>::Mor) -> bool + Send + Sync;

/// A decidable class of morphisms.
pub struct MorphismFamily<C: Category> {
    pub name: String,
    member: Arc<Member<C>>,
}

impl<C: Category> Clone for MorphismFamily<C> {
    fn clone(&self) -> Self {
        MorphismFamily {
            name: self.name.clone(),
            member: self.member.clone(),
        }
    }
}

impl<C: Category> std::fmt::Debug for MorphismFamily<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MorphismFamily({})", self.name)
    }
}

impl<C: Category> MorphismFamily<C> {
    pub fn new(name: &str, member: impl Fn(&C, &C::Mor) -> bool + Send + Sync + 'static) -> Self {
        MorphismFamily {
            name: name.to_string(),
            member: Arc::new(member),
        }
    }

    pub fn contains(&self, c: &C, f: &C::Mor) -> bool {
        (self.member)(c, f)
    }

    pub fn isos() -> Self {
        MorphismFamily::new("isomorphisms", |c: &C, f: &C::Mor| c.is_iso(f))
    }

    pub fn all() -> Self {
        MorphismFamily::new("all", |_: &C, _: &C::Mor| true)
    }
}

impl MorphismFamily<FinSet> {
    pub fn injections() -> Self {
        MorphismFamily::new("injections", |_: &FinSet, f: &FinMor| f.is_injective())
    }

    pub fn surjections() -> Self {
        MorphismFamily::new("surjections", |_: &FinSet, f: &FinMor| f.is_surjective())
    }

    /// `all`, `isomorphisms`, `injections` or `surjections`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "all" => Ok(Self::all()),
            "isomorphisms" | "isos" => Ok(Self::isos()),
            "injections" => Ok(Self::injections()),
            "surjections" => Ok(Self::surjections()),
            _ => Err(Error::Spec(format!("unknown morphism class {name}"))),
        }
    }
}

/// Objects used to enumerate lifting problems and condition instances.
pub trait BoundedFragment: FinCategory {
    fn fragment(&self, bound: usize) -> Vec<Self::Obj>;
}

impl BoundedFragment for FinSet {
    /// Skeletal sets of size `0..=bound`.
    fn fragment(&self, bound: usize) -> Vec<FinObj> {
        (0..=bound).map(|n| self.skeletal(n)).collect()
    }
}

/// Every morphism between fragment objects.
pub fn fragment_morphisms<C: BoundedFragment>(c: &C, bound: usize) -> Result<Vec<C::Mor>> {
    let objs = c.fragment(bound);
    let mut out = Vec::new();
    for a in &objs {
        for b in &objs {
            out.extend(c.hom(a, b)?);
        }
    }
    Ok(out)
}

/// Members of `l` between fragment objects.
pub fn enumerate_family<C: BoundedFragment>(
    c: &C,
    l: &MorphismFamily<C>,
    bound: usize,
) -> Result<Vec<C::Mor>> {
    Ok(fragment_morphisms(c, bound)?
        .into_iter()
        .filter(|f| l.contains(c, f))
        .collect())
}

/// `(TC, FB)`.
pub struct ClassPair<C: Category> {
    pub tc: MorphismFamily<C>,
    pub fb: MorphismFamily<C>,
}

impl<C: Category> Clone for ClassPair<C> {
    fn clone(&self) -> Self {
        ClassPair {
            tc: self.tc.clone(),
            fb: self.fb.clone(),
        }
    }
}

pub fn find_lift<C: FinCategory>(
    c: &C,
    i: &C::Mor,
    p: &C::Mor,
    fz: &C::Mor,
    fw: &C::Mor,
) -> Result<Option<C::Mor>> {
    c.find_lift(i, p, fz, fw)
}

/// The first lifting problem of `i` against `p` without a solution.
pub fn unliftable<C: FinCategory>(
    c: &C,
    i: &C::Mor,
    p: &C::Mor,
) -> Result<Option<(C::Mor, C::Mor)>> {
    let (z, w) = (c.dom(i), c.cod(i));
    let (e, b) = (c.dom(p), c.cod(p));
    let mut by_base: HashMap<C::Mor, Vec<C::Mor>> = HashMap::new();
    for fz in c.hom(&z, &e)? {
        by_base.entry(c.compose(&fz, p)?).or_default().push(fz);
    }
    for fw in c.hom(&w, &b)? {
        let Some(fzs) = by_base.get(&c.compose(i, &fw)?) else {
            continue;
        };
        for fz in fzs {
            if c.find_lift(i, p, fz, &fw)?.is_none() {
                return Ok(Some((fz.clone(), fw)));
            }
        }
    }
    Ok(None)
}

/// `p` has the right lifting property for every member of `l` in the
/// fragment at `bound`.
pub fn has_rlp<C: BoundedFragment>(c: &C, p: &C::Mor, l: &MorphismFamily<C>, bound: usize) -> bool {
    rlp_witness(c, p, l, bound)
        .map(|w| w.is_none())
        .unwrap_or(false)
}

/// A member `i` of `l` and a lifting problem of `i` against `p` that has
/// no solution.
pub fn rlp_witness<C: BoundedFragment>(
    c: &C,
    p: &C::Mor,
    l: &MorphismFamily<C>,
    bound: usize,
) -> Result<Option<(C::Mor, C::Mor, C::Mor)>> {
    for i in enumerate_family(c, l, bound)? {
        if let Some((fz, fw)) = unliftable(c, &i, p)? {
            return Ok(Some((i, fz, fw)));
        }
    }
    Ok(None)
}

/// `B → pt ∈ FB`.
pub fn is_fibrant<C: Lcc>(c: &C, b: &C::Obj, fb: &MorphismFamily<C>) -> bool {
    fb.contains(c, &c.to_terminal(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditions {
    /// Conditions relative to fibrant objects.
    Cond1,
    /// `FB` is exactly the right lifting class of `TC`.
    Cond2,
}

impl Conditions {
    pub fn parse(s: &str) -> Result<Conditions> {
        match s {
            "cond1" => Ok(Conditions::Cond1),
            "cond2" => Ok(Conditions::Cond2),
            _ => Err(Error::Spec(format!("unknown conditions {s}"))),
        }
    }
}

pub const CHECK_COND2_RLP: &str = "cond2-fb-is-rlp-of-tc";
pub const CHECK_COND2_PRODUCT: &str = "cond2-id-times-tc-in-tc";
pub const CHECK_COND1_ID_PT: &str = "cond1-id-pt-in-fb";
pub const CHECK_COND1_RLP: &str = "cond1-fb-over-fibrant-is-rlp";
pub const CHECK_COND1_PULLBACK: &str = "cond1-tc-times-id-in-tc";

pub fn check_conditions<C: BoundedFragment + Lcc>(
    c: &C,
    pair: &ClassPair<C>,
    which: Conditions,
    bound: usize,
) -> Vec<Check> {
    match which {
        Conditions::Cond2 => vec![
            check_rlp_characterization(c, pair, bound, false, CHECK_COND2_RLP),
            check_cond2_product(c, pair, bound),
        ],
        Conditions::Cond1 => {
            let mut t = Tally::new(CHECK_COND1_ID_PT);
            let pt = c.terminal();
            t.expect(pair.fb.contains(c, &c.id(&pt)), || {
                "Id_pt is not in FB".into()
            });
            vec![
                t.finish(),
                check_rlp_characterization(c, pair, bound, true, CHECK_COND1_RLP),
                check_cond1_pullback(c, pair, bound),
            ]
        }
    }
}

fn check_rlp_characterization<C: BoundedFragment + Lcc>(
    c: &C,
    pair: &ClassPair<C>,
    bound: usize,
    fibrant_only: bool,
    id: &str,
) -> Check {
    let mut t = Tally::new(id);
    let r = (|| -> Result<()> {
        let tcs = enumerate_family(c, &pair.tc, bound)?;
        for p in fragment_morphisms(c, bound)? {
            if fibrant_only && !is_fibrant(c, &c.cod(&p), &pair.fb) {
                continue;
            }
            let mut witness = None;
            for i in &tcs {
                if let Some(w) = unliftable(c, i, &p)? {
                    witness = Some((i.clone(), w));
                    break;
                }
            }
            let in_fb = pair.fb.contains(c, &p);
            t.expect(in_fb == witness.is_none(), || match &witness {
                Some((i, (fz, fw))) => format!(
                    "{p:?} is in FB but has no lift against {i:?} for f_Z = {fz:?}, f_W = {fw:?}"
                ),
                None => format!("{p:?} has the RLP for TC but is not in FB"),
            });
        }
        Ok(())
    })();
    if let Err(e) = r {
        t.fail(e.to_string());
    }
    t.note(format!("verified at bound {bound}"));
    t.finish()
}

fn check_cond2_product<C: BoundedFragment + Lcc>(
    c: &C,
    pair: &ClassPair<C>,
    bound: usize,
) -> Check {
    let mut t = Tally::new(CHECK_COND2_PRODUCT);
    let r = (|| -> Result<()> {
        let objs = c.fragment(bound);
        let tcs = enumerate_family(c, &pair.tc, bound)?;
        for b in &objs {
            let fbs: Vec<C::Mor> = objs
                .iter()
                .map(|e| c.hom(e, b))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .filter(|p| pair.fb.contains(c, p))
                .collect();
            for b2 in &objs {
                for f in c.hom(b2, b)? {
                    for p2 in &fbs {
                        let fp2 = c.fiber_product(&f, p2)?;
                        for i in tcs.iter().filter(|i| c.cod(i) == c.dom(p2)) {
                            let p1 = c.compose(i, p2)?;
                            if !pair.fb.contains(c, &p1) {
                                continue;
                            }
                            let fp1 = c.fiber_product(&f, &p1)?;
                            let v = c.compose(&fp1.pr2, i)?;
                            let m = c.fp_pair(&fp2, &fp1.pr1, &v)?;
                            t.expect(pair.tc.contains(c, &m), || {
                                format!("Id×{i:?} over f = {f:?} is not in TC")
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        t.fail(e.to_string());
    }
    t.note(format!("verified at bound {bound}"));
    t.finish()
}

fn check_cond1_pullback<C: BoundedFragment + Lcc>(
    c: &C,
    pair: &ClassPair<C>,
    bound: usize,
) -> Check {
    let mut t = Tally::new(CHECK_COND1_PULLBACK);
    let r = (|| -> Result<()> {
        let objs = c.fragment(bound);
        let tcs = enumerate_family(c, &pair.tc, bound)?;
        for b in objs.iter().filter(|b| is_fibrant(c, b, &pair.fb)) {
            for e in &objs {
                for p in c.hom(e, b)? {
                    if !pair.fb.contains(c, &p) {
                        continue;
                    }
                    for i in &tcs {
                        for f in c.hom(&c.cod(i), b)? {
                            let fw = c.fiber_product(&f, &p)?;
                            let fz = c.fiber_product(&c.compose(i, &f)?, &p)?;
                            let m = c.fp_pair(&fw, &c.compose(&fz.pr1, i)?, &fz.pr2)?;
                            t.expect(pair.tc.contains(c, &m), || {
                                format!("{i:?}×Id over f = {f:?}, p = {p:?} is not in TC")
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        t.fail(e.to_string());
    }
    t.note(format!("verified at bound {bound}"));
    t.finish()
}

pub const CHECK_LEMMA_PULLBACK: &str = "fb-pullback-over-fibrant";
pub const CHECK_LEMMA_COMPOSITE: &str = "fb-composite-over-fibrant";
pub const CHECK_LEMMA_PR_I: &str = "pr-i-in-fb";
pub const CHECK_LEMMA_I_R: &str = "i-p-of-fb-in-fb";

/// Closure properties of `FB` that hold under the fibrant-relative
/// conditions, checked on every instance in the fragment.
pub fn check_closure_lemmas<C: BoundedFragment + Lcc>(
    c: &C,
    pair: &ClassPair<C>,
    bound: usize,
) -> Vec<Check> {
    let ids = [
        CHECK_LEMMA_PULLBACK,
        CHECK_LEMMA_COMPOSITE,
        CHECK_LEMMA_PR_I,
        CHECK_LEMMA_I_R,
    ];
    let mut ts: Vec<Tally> = ids.iter().map(|id| Tally::new(id)).collect();
    if let Err(e) = closure_lemmas(c, pair, bound, &mut ts) {
        ts[0].fail(e.to_string());
    }
    ts.into_iter()
        .map(|mut t| {
            t.note(format!("verified at bound {bound}"));
            t.finish()
        })
        .collect()
}

fn closure_lemmas<C: BoundedFragment + Lcc>(
    c: &C,
    pair: &ClassPair<C>,
    bound: usize,
    ts: &mut [Tally],
) -> Result<()> {
    let fb = &pair.fb;
    let objs = c.fragment(bound);
    let fibrant: Vec<C::Obj> = objs
        .iter()
        .filter(|b| is_fibrant(c, b, fb))
        .cloned()
        .collect();
    let into = |b: &C::Obj| -> Result<Vec<C::Mor>> {
        let mut out = Vec::new();
        for e in &objs {
            out.extend(c.hom(e, b)?.into_iter().filter(|p| fb.contains(c, p)));
        }
        Ok(out)
    };
    for b in &fibrant {
        let ps = into(b)?;
        for b2 in &fibrant {
            for f in c.hom(b2, b)? {
                for p in &ps {
                    let pb = c.fiber_product(&f, p)?;
                    ts[0].expect(fb.contains(c, &pb.pr1), || {
                        format!("pullback of {p:?} along {f:?} is not in FB")
                    });
                }
            }
        }
        for p1 in &ps {
            for p2 in into(&c.dom(p1))? {
                let m = c.compose(&p2, p1)?;
                ts[1].expect(fb.contains(c, &m), || {
                    format!("{p2:?} then {p1:?} is not in FB")
                });
            }
        }
    }
    for u in &fibrant {
        for p in into(u)? {
            let mut ips = HashMap::new();
            for o in &objs {
                ips.insert(o.clone(), i_p_obj(c, &p, o)?);
            }
            for v in &fibrant {
                let ip = &ips[v];
                ts[2].expect(fb.contains(c, ip.proj()), || {
                    format!("prI_p(V) is not in FB for p = {p:?}, V = {v:?}")
                });
                for r in into(v)? {
                    let m = i_p_mor_between(c, &ips[&c.dom(&r)], ip, &r)?;
                    ts[3].expect(fb.contains(c, &m), || {
                        format!("I_p(r) is not in FB for p = {p:?}, r = {r:?}")
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Under the lifting-class conditions: lift `Id×ω` against `p`.
    Th1,
    /// Under the fibrant-relative conditions: lift `ω×Id` against `Id×p`.
    Th2,
}

impl Theorem {
    pub fn parse(s: &str) -> Result<Theorem> {
        match s {
            "th1" => Ok(Theorem::Th1),
            "th2" => Ok(Theorem::Th2),
            _ => Err(Error::Spec(format!("unknown theorem {s}"))),
        }
    }

    pub fn conditions(self) -> Conditions {
        match self {
            Theorem::Th1 => Conditions::Cond2,
            Theorem::Th2 => Conditions::Cond1,
        }
    }
}

fn require(ok: bool, name: &str, why: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{name}: {}", why())))
    }
}

/// Theorem hypotheses and proof obligations, in order; the first failure
/// is returned as a named hypothesis error.
pub fn check_hypotheses<C: BoundedFragment + Lcc>(
    d: &JUniverseData<C>,
    pair: &ClassPair<C>,
    th: Theorem,
    bound: usize,
) -> Result<()> {
    let conds = check_conditions(d.cat(), pair, th.conditions(), bound);
    check_hypotheses_given(d, pair, th, &conds)
}

/// As [`check_hypotheses`] with the condition checks for `th` already run.
pub fn check_hypotheses_given<C: BoundedFragment + Lcc>(
    d: &JUniverseData<C>,
    pair: &ClassPair<C>,
    th: Theorem,
    conds: &[Check],
) -> Result<()> {
    let c = d.cat();
    let (fb, tc) = (&pair.fb, &pair.tc);
    let p = d.base.p();
    if th == Theorem::Th2 {
        require(is_fibrant(c, &d.base.base(), fb), "u-fibrant", || {
            "U → pt is not in FB".into()
        })?;
    }
    require(fb.contains(c, p), "p-in-fb", || {
        format!("{p:?} is not in {}", fb.name)
    })?;
    require(tc.contains(c, &d.w), "omega-in-tc", || {
        format!("ω = {:?} is not in {}", d.w, tc.name)
    })?;
    for chk in conds {
        require(chk.passed(), &chk.id, || {
            chk.counterexamples.first().cloned().unwrap_or_default()
        })?;
    }
    require(fb.contains(c, d.e.p()), "pe-in-fb", || {
        "pEŨ is not in FB".into()
    })?;
    match th {
        Theorem::Th1 => {
            require(
                tc.contains(c, &d.filler.id_x_omega),
                "id-x-omega-in-tc",
                || "Id_Fp×ω is not in TC".into(),
            )?;
        }
        Theorem::Th2 => {
            require(fb.contains(c, d.ie_u.proj()), "pr-i-pe-in-fb", || {
                "prI_{pEŨ}(U) is not in FB".into()
            })?;
            require(fb.contains(c, &d.fp.pr1), "fp-pr1-in-fb", || {
                "pr_1: Fp → I_{pEŨ}(U) is not in FB".into()
            })?;
            require(fb.contains(c, &d.p_fp), "pfp-in-fb", || {
                "pFp is not in FB".into()
            })?;
            let sq = permuted_square(d)?;
            require(fb.contains(c, &sq.right), "id-u-x-p-in-fb", || {
                "Id_U×p is not in FB".into()
            })?;
            require(tc.contains(c, &sq.left), "omega-x-id-in-tc", || {
                "ω×Id_Fp is not in TC".into()
            })?;
        }
    }
    Ok(())
}

/// The filler square with the factors of both fiber products swapped,
/// valued in `U×Ũ` over `U×U`.
pub struct PermutedSquare<C: Category> {
    pub left: C::Mor,
    pub right: C::Mor,
    pub top: C::Mor,
    pub bottom: C::Mor,
    /// `σ′⁻¹: Fp×_U EŨ → EŨ×_U Fp`.
    pub unswap: C::Mor,
}

pub fn permuted_square<C: Lcc>(d: &JUniverseData<C>) -> Result<PermutedSquare<C>> {
    let c = d.cat();
    let (p, pe) = (d.base.p(), d.e.p());
    let s = &d.filler;
    let small2 = c.fiber_product(p, &d.p_fp)?;
    let big2 = c.fiber_product(pe, &d.p_fp)?;
    let sigma = c.fp_pair(&s.small, &small2.pr2, &small2.pr1)?;
    let sigma2 = c.fp_pair(&s.big, &big2.pr2, &big2.pr1)?;
    let unswap = c.fp_pair(&big2, &s.big.pr2, &s.big.pr1)?;
    let left = c.fp_pair(&big2, &c.compose(&small2.pr1, &d.w)?, &small2.pr2)?;
    let uut = &d.ip_ut.prod;
    let uu = &d.ie_u.prod;
    let right = c.fp_pair(uu, &uut.pr1, &c.compose(&uut.pr2, p)?)?;
    let top = c.compose(&sigma, &adj(c, &d.ip_ut.hom, &d.fp.pr2)?)?;
    let bottom = c.compose(&sigma2, &adj(c, &d.ie_u.hom, &d.fp.pr1)?)?;
    Ok(PermutedSquare {
        left,
        right,
        top,
        bottom,
        unswap,
    })
}

/// A filler of the square of `d`, by the route of the chosen theorem.
pub fn solve_filler<C: Lcc + FinCategory>(d: &JUniverseData<C>, th: Theorem) -> Result<C::Mor> {
    let c = d.cat();
    let none = || Error::Invariant("no lift found although the hypotheses hold".into());
    match th {
        Theorem::Th1 => {
            let s = &d.filler;
            c.find_lift(&s.id_x_omega, d.base.p(), &s.top, &s.bottom)?
                .ok_or_else(none)
        }
        Theorem::Th2 => {
            let sq = permuted_square(d)?;
            let g = c
                .find_lift(&sq.left, &sq.right, &sq.top, &sq.bottom)?
                .ok_or_else(none)?;
            c.chain(&[&sq.unswap, &g, &d.ip_ut.prod.pr2])
        }
    }
}

/// Extends `(Eq, Ω)` to a full J-structure when the hypotheses of the
/// chosen theorem hold at `bound`.
pub fn derive_j<C: BoundedFragment + Lcc>(
    u: &Universe<C>,
    eq: &C::Mor,
    omega: &C::Mor,
    pair: &ClassPair<C>,
    th: Theorem,
    bound: usize,
) -> Result<UnivJ<C>> {
    let d = build_coj(u, eq, omega)?;
    let conds = check_conditions(d.cat(), pair, th.conditions(), bound);
    derive_j_given(&d, pair, th, &conds)
}

/// As [`derive_j`] on prepared data with the condition checks already run.
pub fn derive_j_given<C: BoundedFragment + Lcc>(
    d: &JUniverseData<C>,
    pair: &ClassPair<C>,
    th: Theorem,
    conds: &[Check],
) -> Result<UnivJ<C>> {
    check_hypotheses_given(d, pair, th, conds)?;
    let filler = solve_filler(d, th)?;
    let jp = filler_to_j(d, &filler)?;
    Ok(UnivJ {
        eq: d.eq.clone(),
        omega: d.omega.clone(),
        jp,
    })
}

/// Which of the two extra hypotheses on a model structure is assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelClause {
    /// `Id×i` of a trivial cofibration between fibrations is one.
    ProductStable,
    /// `U` is fibrant and trivial cofibrations pull back along fibrations.
    FibrantBase,
}

/// Dispatch from fibrations and trivial cofibrations to the matching
/// theorem.
pub fn model_j<C: BoundedFragment + Lcc>(
    u: &Universe<C>,
    eq: &C::Mor,
    omega: &C::Mor,
    fibrations: &MorphismFamily<C>,
    trivial_cofibrations: &MorphismFamily<C>,
    clause: ModelClause,
    bound: usize,
) -> Result<UnivJ<C>> {
    let pair = ClassPair {
        tc: trivial_cofibrations.clone(),
        fb: fibrations.clone(),
    };
    let th = match clause {
        ModelClause::ProductStable => Theorem::Th1,
        ModelClause::FibrantBase => Theorem::Th2,
    };
    derive_j(u, eq, omega, &pair, th, bound)
}
