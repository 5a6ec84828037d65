//! J0/J1/J2-structures on a C-system: `IdT`, `refl`, `J`, the derived
//! `IdxT(T)` and `rf_T`, the domain `Jdom`, extensionality, and
//! compatibility of homomorphisms with J-structures.

use crate::csystem::{
    delta, objects, pullback_obj, pullback_q, pullback_section, pullback_section1, s_of, CSystem,
    CsHom,
};
use crate::error::{Error, Result};
use crate::report::{Check, Tally};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub trait J0<S: CSystem>: Send + Sync {
    /// `IdT_Γ(o,o′) ∈ Ob_1(Γ)` for sections with `∂(o) = ∂(o′) ∈ Ob_1(Γ)`.
    fn idt(&self, cs: &S, o: &S::Mor, o2: &S::Mor) -> Result<S::Obj>;
}

pub trait J1<S: CSystem>: Send + Sync {
    /// `refl(o) ∈ Õb_1(Γ)`.
    fn refl(&self, cs: &S, o: &S::Mor) -> Result<S::Mor>;
}

pub trait J2<S: CSystem>: Send + Sync {
    /// `J(Γ,T,P,s0) ∈ Õb(P)`.
    fn j(&self, cs: &S, e: &JdomEntry<S>) -> Result<S::Mor>;
}

/// `(Γ,T,P,s0)` with `ft(T) = Γ`, `ft(P) = IdxT(T)`, `∂(s0) = rf_T*(P)`.
pub struct JdomEntry<S: CSystem> {
    pub gamma: S::Obj,
    pub t: S::Obj,
    pub p: S::Obj,
    pub s0: S::Mor,
}

impl<S: CSystem> Clone for JdomEntry<S> {
    fn clone(&self) -> Self {
        JdomEntry {
            gamma: self.gamma.clone(),
            t: self.t.clone(),
            p: self.p.clone(),
            s0: self.s0.clone(),
        }
    }
}

impl<S: CSystem> PartialEq for JdomEntry<S> {
    fn eq(&self, o: &Self) -> bool {
        self.t == o.t && self.p == o.p && self.s0 == o.s0 && self.gamma == o.gamma
    }
}

impl<S: CSystem> Eq for JdomEntry<S> {}

impl<S: CSystem> fmt::Debug for JdomEntry<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(T={:?}, P={:?}, s0={:?})", self.t, self.p, self.s0)
    }
}

/// `(IdT, refl, J)`; `J` may be absent for J1-level checks.
pub struct JBundle<S: CSystem> {
    pub idt: Arc<dyn J0<S>>,
    pub refl: Arc<dyn J1<S>>,
    pub j: Option<Arc<dyn J2<S>>>,
}

impl<S: CSystem> Clone for JBundle<S> {
    fn clone(&self) -> Self {
        JBundle {
            idt: self.idt.clone(),
            refl: self.refl.clone(),
            j: self.j.clone(),
        }
    }
}

/// The pieces of `IdxT(T) = IdT_A(p_A*(δ(T)), δ(A))`, `A = p_T*(T)`.
pub struct Idx<S: CSystem> {
    pub a: S::Obj,
    pub o: S::Mor,
    pub o2: S::Mor,
    pub obj: S::Obj,
}

pub fn idxt_parts<S: CSystem>(cs: &S, idt: &dyn J0<S>, t: &S::Obj) -> Result<Idx<S>> {
    let d = delta(cs, t)?;
    let a = cs.cod(&d);
    let pa = cs.proj(&a)?;
    let o = pullback_section1(cs, &pa, &d)?;
    let o2 = delta(cs, &a)?;
    let obj = idt.idt(cs, &o, &o2)?;
    Ok(Idx { a, o, o2, obj })
}

/// `IdxT(T) ∈ Ob_3(ft T)`.
pub fn idxt<S: CSystem>(cs: &S, idt: &dyn J0<S>, t: &S::Obj) -> Result<S::Obj> {
    Ok(idxt_parts(cs, idt, t)?.obj)
}

/// `rf_T = refl(δ(T))∘q(δ(T), IdxT(T)): T → IdxT(T)`.
pub fn rf<S: CSystem>(cs: &S, b: &JBundle<S>, t: &S::Obj) -> Result<S::Mor> {
    let ix = idxt(cs, &*b.idt, t)?;
    let d = delta(cs, t)?;
    let (dstar, q) = cs.base_change(&d, &ix)?;
    let r = b.refl.refl(cs, &d)?;
    if cs.cod(&r) != dstar {
        return Err(Error::Invariant(
            "refl(δ(T)) does not land in δ(T)*(IdxT(T))".into(),
        ));
    }
    cs.compose(&r, &q)
}

/// Pairs `(o,o′)` of sections over `Γ` with a common boundary.
pub fn parallel_pairs<S: CSystem>(cs: &S, g: &S::Obj) -> Result<Vec<(S::Mor, S::Mor)>> {
    let mut out = Vec::new();
    for t in cs.objects_over(g)? {
        let ss = cs.sections(&t)?;
        for a in &ss {
            for b in &ss {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// `Õb_1(Γ)`.
pub fn sections_over<S: CSystem>(cs: &S, g: &S::Obj) -> Result<Vec<S::Mor>> {
    let mut out = Vec::new();
    for t in cs.objects_over(g)? {
        out.extend(cs.sections(&t)?);
    }
    Ok(out)
}

/// `Jdom` for `l(Γ) ≤ bound`, in enumeration order of `Γ, T, P, s0`.
pub fn jdom_enum<S: CSystem>(cs: &S, b: &JBundle<S>, bound: usize) -> Result<Vec<JdomEntry<S>>> {
    let mut out = Vec::new();
    for g in objects(cs, bound)? {
        for t in cs.objects_over(&g)? {
            out.extend(jdom_over(cs, b, &g, &t)?);
        }
    }
    Ok(out)
}

pub fn jdom_over<S: CSystem>(
    cs: &S,
    b: &JBundle<S>,
    g: &S::Obj,
    t: &S::Obj,
) -> Result<Vec<JdomEntry<S>>> {
    let mut out = Vec::new();
    let ix = idxt(cs, &*b.idt, t)?;
    let r = rf(cs, b, t)?;
    for p in cs.objects_over(&ix)? {
        let (rp, _) = cs.base_change(&r, &p)?;
        for s0 in cs.sections(&rp)? {
            out.push(JdomEntry {
                gamma: g.clone(),
                t: t.clone(),
                p: p.clone(),
                s0,
            });
        }
    }
    Ok(out)
}

/// Membership equations of `Jdom`.
pub fn is_jdom_entry<S: CSystem>(cs: &S, b: &JBundle<S>, e: &JdomEntry<S>) -> Result<bool> {
    if cs.ft(&e.t) != e.gamma || cs.length(&e.t) == 0 {
        return Ok(false);
    }
    let ix = idxt(cs, &*b.idt, &e.t)?;
    if cs.length(&e.p) == 0 || cs.ft(&e.p) != ix {
        return Ok(false);
    }
    let r = rf(cs, b, &e.t)?;
    let (rp, _) = cs.base_change(&r, &e.p)?;
    Ok(cs.cod(&e.s0) == rp && crate::csystem::is_section(cs, &e.s0)?)
}

/// `f*(Γ,T,P,s0) = (Γ′, f*(T), f*(P,4), f*(s0,2))`.
pub fn pullback_entry<S: CSystem>(cs: &S, f: &S::Mor, e: &JdomEntry<S>) -> Result<JdomEntry<S>> {
    Ok(JdomEntry {
        gamma: cs.dom(f),
        t: pullback_obj(cs, f, &e.t, 1)?,
        p: pullback_obj(cs, f, &e.p, 4)?,
        s0: pullback_section(cs, f, &e.s0, 2)?,
    })
}

pub const CHECK_J0_NATURALITY: &str = "j0-naturality";
pub const CHECK_J1_NATURALITY: &str = "j1-naturality";
pub const CHECK_REFL_BOUNDARY: &str = "refl-boundary";
pub const CHECK_IDXT_NATURALITY: &str = "idxt-naturality";
pub const CHECK_IDXT_DELTA: &str = "idxt-delta-pullback";
pub const CHECK_RF_NATURALITY: &str = "rf-naturality";
pub const CHECK_J2_NATURALITY: &str = "j2-naturality";
pub const CHECK_IOTA_RULE: &str = "iota-rule";
pub const CHECK_EXTENSIONAL: &str = "extensional";

/// J0 and J1 laws for `l(Γ), l(Γ′) ≤ bound` and every `f: Γ′ → Γ`.
pub fn check_j01<S: CSystem>(cs: &S, b: &JBundle<S>, bound: usize) -> Vec<Check> {
    let mut n0 = Tally::new(CHECK_J0_NATURALITY);
    let mut n1 = Tally::new(CHECK_J1_NATURALITY);
    let mut bd = Tally::new(CHECK_REFL_BOUNDARY);
    let run = |n0: &mut Tally, n1: &mut Tally, bd: &mut Tally| -> Result<()> {
        let objs = objects(cs, bound)?;
        for g in &objs {
            let pairs = parallel_pairs(cs, g)?;
            let singles = sections_over(cs, g)?;
            let ids: Vec<S::Obj> = pairs
                .iter()
                .map(|(o, o2)| b.idt.idt(cs, o, o2))
                .collect::<Result<_>>()?;
            let refls: Vec<S::Mor> = singles
                .iter()
                .map(|o| b.refl.refl(cs, o))
                .collect::<Result<_>>()?;
            for ((o, o2), y) in pairs.iter().zip(&ids) {
                n0.expect(cs.ft(y) == *g && cs.length(y) == cs.length(g) + 1, || {
                    format!("IdT({o:?},{o2:?}) is not in Ob_1(Γ)")
                });
            }
            for (o, r) in singles.iter().zip(&refls) {
                let id = b.idt.idt(cs, o, o)?;
                bd.expect(cs.cod(r) == id, || format!("∂(refl({o:?})) ≠ IdT(o,o)"));
                bd.expect_res(crate::csystem::is_section(cs, r), || {
                    format!("refl({o:?}) is not a section")
                });
            }
            for g2 in &objs {
                for f in cs.hom(g2, g)? {
                    for ((o, o2), y) in pairs.iter().zip(&ids) {
                        let lhs = pullback_obj(cs, &f, y, 1)?;
                        let fo = pullback_section(cs, &f, o, 1)?;
                        let fo2 = pullback_section(cs, &f, o2, 1)?;
                        let rhs = b.idt.idt(cs, &fo, &fo2)?;
                        n0.expect(lhs == rhs, || {
                            format!("f*(IdT(o,o′)) ≠ IdT(f*o,f*o′) for f = {f:?}, o = {o:?}, o′ = {o2:?}")
                        });
                    }
                    for (o, r) in singles.iter().zip(&refls) {
                        let lhs = pullback_section(cs, &f, r, 1)?;
                        let rhs = b.refl.refl(cs, &pullback_section(cs, &f, o, 1)?)?;
                        n1.expect(lhs == rhs, || {
                            format!("f*(refl(o)) ≠ refl(f*o) for f = {f:?}, o = {o:?}")
                        });
                    }
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut n0, &mut n1, &mut bd) {
        n0.fail(e.to_string());
    }
    vec![n0.finish(), n1.finish(), bd.finish()]
}

/// `IdxT` and `rf` laws for `T` over `Γ` with `l(Γ) ≤ bound`.
pub fn check_idxt_rf<S: CSystem>(cs: &S, b: &JBundle<S>, bound: usize) -> Vec<Check> {
    let mut nat = Tally::new(CHECK_IDXT_NATURALITY);
    let mut dl = Tally::new(CHECK_IDXT_DELTA);
    let mut rn = Tally::new(CHECK_RF_NATURALITY);
    let run = |nat: &mut Tally, dl: &mut Tally, rn: &mut Tally| -> Result<()> {
        let objs = objects(cs, bound)?;
        for g in &objs {
            for t in cs.objects_over(g)? {
                let ix = idxt(cs, &*b.idt, &t)?;
                let d = delta(cs, &t)?;
                let (dstar, _) = cs.base_change(&d, &ix)?;
                let expect = b.idt.idt(cs, &d, &d)?;
                dl.expect(dstar == expect, || {
                    format!("δ(T)*(IdxT(T)) ≠ IdT_T(δ(T),δ(T)) at T = {t:?}")
                });
                dl.expect(
                    cs.length(&ix) == cs.length(g) + 3 && crate::csystem::ft_n(cs, &ix, 3) == *g,
                    || format!("IdxT({t:?}) is not in Ob_3(Γ)"),
                );
                let r = rf(cs, b, &t)?;
                for g2 in &objs {
                    for f in cs.hom(g2, g)? {
                        let ft = pullback_obj(cs, &f, &t, 1)?;
                        let fix = pullback_obj(cs, &f, &ix, 3)?;
                        let ix2 = idxt(cs, &*b.idt, &ft)?;
                        nat.expect(fix == ix2, || {
                            format!("f*(IdxT(T)) ≠ IdxT(f*T) for f = {f:?}, T = {t:?}")
                        });
                        if fix != ix2 {
                            continue;
                        }
                        let r2 = rf(cs, b, &ft)?;
                        let qi = pullback_q(cs, &f, &ix, 3)?;
                        let qt = pullback_q(cs, &f, &t, 1)?;
                        let lhs = cs.compose(&r2, &qi)?;
                        let rhs = cs.compose(&qt, &r)?;
                        rn.expect(lhs == rhs, || {
                            format!("rf_{{f*T}}∘q ≠ q∘rf_T for f = {f:?}, T = {t:?}")
                        });
                    }
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut nat, &mut dl, &mut rn) {
        nat.fail(e.to_string());
    }
    vec![nat.finish(), dl.finish(), rn.finish()]
}

/// J2 naturality along every `f: Γ′ → Γ` with `l(Γ′) ≤ bound` and the
/// ι-rule, on `Jdom` at `bound`.
pub fn check_j2<S: CSystem>(cs: &S, b: &JBundle<S>, bound: usize) -> Vec<Check> {
    let mut nat = Tally::new(CHECK_J2_NATURALITY);
    let mut iota = Tally::new(CHECK_IOTA_RULE);
    let Some(j) = b.j.as_ref() else {
        return vec![
            Check::skipped(CHECK_J2_NATURALITY, "no J2-structure"),
            Check::skipped(CHECK_IOTA_RULE, "no J2-structure"),
        ];
    };
    let run = |nat: &mut Tally, iota: &mut Tally| -> Result<()> {
        let objs = objects(cs, bound)?;
        let entries = jdom_enum(cs, b, bound)?;
        for e in &entries {
            let v = j.j(cs, e)?;
            let ok = cs.cod(&v) == e.p && crate::csystem::is_section(cs, &v)?;
            iota.expect(ok, || format!("J{e:?} is not a section of P"));
            if !ok {
                continue;
            }
            let r = rf(cs, b, &e.t)?;
            let back = s_of(cs, &cs.compose(&r, &v)?)?;
            iota.expect(back == e.s0, || format!("rf_T*(J{e:?}) ≠ s0"));
            for g2 in &objs {
                for f in cs.hom(g2, &e.gamma)? {
                    let fe = pullback_entry(cs, &f, e)?;
                    let lhs = pullback_section(cs, &f, &v, 4)?;
                    let rhs = j.j(cs, &fe)?;
                    nat.expect(lhs == rhs, || format!("f*(J{e:?}) ≠ J(f*…) for f = {f:?}"));
                }
            }
        }
        iota.note(format!("{} Jdom entries", entries.len()));
        Ok(())
    };
    if let Err(e) = run(&mut nat, &mut iota) {
        iota.fail(e.to_string());
    }
    vec![nat.finish(), iota.finish()]
}

/// All of the J0, J1, IdxT/rf and (when present) J2 checks.
pub fn check_j<S: CSystem>(cs: &S, b: &JBundle<S>, bound: usize, j2_bound: usize) -> Vec<Check> {
    let mut out = check_j01(cs, b, bound);
    out.extend(check_idxt_rf(cs, b, j2_bound));
    out.extend(check_j2(cs, b, j2_bound));
    out
}

/// `|Õb(IdT(o,o′))|` is 1 on the diagonal and 0 off it, for every `T`
/// with `l(T) ≤ bound`.
pub fn check_extensional<S: CSystem>(cs: &S, idt: &dyn J0<S>, bound: usize) -> Check {
    let mut t = Tally::new(CHECK_EXTENSIONAL);
    if bound == 0 {
        return t.finish();
    }
    let run = |t: &mut Tally| -> Result<()> {
        for g in objects(cs, bound - 1)? {
            for (o, o2) in parallel_pairs(cs, &g)? {
                let n = cs.sections(&idt.idt(cs, &o, &o2)?)?.len();
                let want = usize::from(o == o2);
                t.expect(n == want, || {
                    format!("IdT({o:?},{o2:?}) has {n} sections, expected {want}")
                });
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut t) {
        t.fail(e.to_string());
    }
    t.finish()
}

pub fn is_extensional<S: CSystem>(cs: &S, idt: &dyn J0<S>, bound: usize) -> bool {
    check_extensional(cs, idt, bound).passed()
}

/// Number of natural, extensional J0-structures on contexts of length
/// `≤ bound`, by backtracking over the candidates of each pair.
pub fn count_extensional_j0<S: CSystem>(cs: &S, bound: usize, limit: usize) -> Result<usize> {
    let objs = objects(cs, bound)?;
    let mut vars: Vec<(S::Obj, S::Mor, S::Mor)> = Vec::new();
    let mut index: HashMap<(S::Mor, S::Mor), usize> = HashMap::new();
    let mut domains: Vec<Vec<S::Obj>> = Vec::new();
    for g in &objs {
        let over = cs.objects_over(g)?;
        let counts: Vec<usize> = over
            .iter()
            .map(|y| cs.sections(y).map(|v| v.len()))
            .collect::<Result<_>>()?;
        for (o, o2) in parallel_pairs(cs, g)? {
            let want = usize::from(o == o2);
            let dom: Vec<S::Obj> = over
                .iter()
                .zip(&counts)
                .filter(|(_, &n)| n == want)
                .map(|(y, _)| y.clone())
                .collect();
            index.insert((o.clone(), o2.clone()), vars.len());
            vars.push((g.clone(), o, o2));
            domains.push(dom);
        }
    }
    // (src, f, dst): f*(value[src]) = value[dst].
    let mut cons: Vec<Vec<(usize, S::Mor, usize)>> = vec![Vec::new(); vars.len()];
    for (k, (g, o, o2)) in vars.iter().enumerate() {
        for g2 in &objs {
            for f in cs.hom(g2, g)? {
                let fo = pullback_section(cs, &f, o, 1)?;
                let fo2 = pullback_section(cs, &f, o2, 1)?;
                let dst = *index
                    .get(&(fo, fo2))
                    .ok_or_else(|| Error::Invariant("pulled back pair is not enumerated".into()))?;
                cons[k.max(dst)].push((k, f, dst));
            }
        }
    }
    let mut value: Vec<usize> = vec![0; vars.len()];
    let mut count = 0usize;
    search(cs, &domains, &cons, 0, &mut value, &mut count, limit)?;
    Ok(count)
}

fn search<S: CSystem>(
    cs: &S,
    domains: &[Vec<S::Obj>],
    cons: &[Vec<(usize, S::Mor, usize)>],
    k: usize,
    value: &mut Vec<usize>,
    count: &mut usize,
    limit: usize,
) -> Result<()> {
    if k == domains.len() {
        *count += 1;
        if *count > limit {
            return Err(Error::Bound(format!("more than {limit} J0-structures")));
        }
        return Ok(());
    }
    'cand: for c in 0..domains[k].len() {
        value[k] = c;
        for (src, f, dst) in &cons[k] {
            let y = &domains[*src][value[*src]];
            let fy = pullback_obj(cs, f, y, 1)?;
            if fy != domains[*dst][value[*dst]] {
                continue 'cand;
            }
        }
        search(cs, domains, cons, k + 1, value, count, limit)?;
    }
    Ok(())
}

pub const CHECK_HOM_J0: &str = "hom-j0";
pub const CHECK_HOM_J1: &str = "hom-j1";
pub const CHECK_HOM_IDXT_RF: &str = "hom-idxt-rf";
pub const CHECK_HOM_J2: &str = "hom-j2";

/// `H(IdT(o,o′)) = IdT′(Ho,Ho′)`, `H(refl o) = refl′(H o)`,
/// `H(IdxT T) = IdxT′(H T)`, `H(rf_T) = rf′_{H T}` and
/// `H(J(e)) = J′(H e)` for sources of length `≤ bound`.
pub fn check_hom_j<S, T, H>(
    src: &S,
    dst: &T,
    h: &H,
    b: &JBundle<S>,
    b2: &JBundle<T>,
    bound: usize,
    j2_bound: usize,
) -> Vec<Check>
where
    S: CSystem,
    T: CSystem,
    H: CsHom<S, T> + ?Sized,
{
    let mut c0 = Tally::new(CHECK_HOM_J0);
    let mut c1 = Tally::new(CHECK_HOM_J1);
    let mut cx = Tally::new(CHECK_HOM_IDXT_RF);
    let mut c2 = Tally::new(CHECK_HOM_J2);
    let r01 = (|| -> Result<()> {
        for g in objects(src, bound)? {
            for (o, o2) in parallel_pairs(src, &g)? {
                let lhs = h.obj(&b.idt.idt(src, &o, &o2)?)?;
                let rhs = b2.idt.idt(dst, &h.mor(&o)?, &h.mor(&o2)?)?;
                c0.expect(lhs == rhs, || {
                    format!("H(IdT({o:?},{o2:?})) ≠ IdT′(H o, H o′)")
                });
            }
            for o in sections_over(src, &g)? {
                let lhs = h.mor(&b.refl.refl(src, &o)?)?;
                let rhs = b2.refl.refl(dst, &h.mor(&o)?)?;
                c1.expect(lhs == rhs, || format!("H(refl({o:?})) ≠ refl′(H o)"));
            }
        }
        Ok(())
    })();
    if let Err(e) = r01 {
        c0.fail(e.to_string());
    }
    let r2 = (|| -> Result<()> {
        for g in objects(src, j2_bound)? {
            for t in src.objects_over(&g)? {
                let ht = h.obj(&t)?;
                cx.expect(
                    h.obj(&idxt(src, &*b.idt, &t)?)? == idxt(dst, &*b2.idt, &ht)?,
                    || format!("H(IdxT({t:?})) ≠ IdxT′(H T)"),
                );
                cx.expect(h.mor(&rf(src, b, &t)?)? == rf(dst, b2, &ht)?, || {
                    format!("H(rf_{t:?}) ≠ rf′_{{H T}}")
                });
                let (Some(j), Some(j2)) = (b.j.as_ref(), b2.j.as_ref()) else {
                    continue;
                };
                for e in jdom_over(src, b, &g, &t)? {
                    let he = JdomEntry {
                        gamma: h.obj(&e.gamma)?,
                        t: ht.clone(),
                        p: h.obj(&e.p)?,
                        s0: h.mor(&e.s0)?,
                    };
                    let lhs = h.mor(&j.j(src, &e)?)?;
                    let rhs = j2.j(dst, &he)?;
                    c2.expect(lhs == rhs, || format!("H(J{e:?}) ≠ J′(H …)"));
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r2 {
        cx.fail(e.to_string());
    }
    let mut out = vec![c0.finish(), c1.finish(), cx.finish()];
    if b.j.is_some() && b2.j.is_some() {
        out.push(c2.finish());
    } else {
        out.push(Check::skipped(CHECK_HOM_J2, "no J2-structures"));
    }
    out
}

/// `IdT` with one value replaced.
pub struct PatchedJ0<S: CSystem> {
    pub inner: Arc<dyn J0<S>>,
    pub at: (S::Mor, S::Mor),
    pub value: S::Obj,
}

impl<S: CSystem> J0<S> for PatchedJ0<S> {
    fn idt(&self, cs: &S, o: &S::Mor, o2: &S::Mor) -> Result<S::Obj> {
        if *o == self.at.0 && *o2 == self.at.1 {
            return Ok(self.value.clone());
        }
        self.inner.idt(cs, o, o2)
    }
}

/// `refl` with one value replaced.
pub struct PatchedJ1<S: CSystem> {
    pub inner: Arc<dyn J1<S>>,
    pub at: S::Mor,
    pub value: S::Mor,
}

impl<S: CSystem> J1<S> for PatchedJ1<S> {
    fn refl(&self, cs: &S, o: &S::Mor) -> Result<S::Mor> {
        if *o == self.at {
            return Ok(self.value.clone());
        }
        self.inner.refl(cs, o)
    }
}

/// `J` with one value replaced.
pub struct PatchedJ2<S: CSystem> {
    pub inner: Arc<dyn J2<S>>,
    pub at: JdomEntry<S>,
    pub value: S::Mor,
}

impl<S: CSystem> J2<S> for PatchedJ2<S> {
    fn j(&self, cs: &S, e: &JdomEntry<S>) -> Result<S::Mor> {
        if *e == self.at {
            return Ok(self.value.clone());
        }
        self.inner.j(cs, e)
    }
}
