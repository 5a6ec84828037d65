//! Transport of a J-structure `(Eq, Ω, Jp)` on a universe `p` to the
//! structures `(IdT, refl, J)` on `CC(C,p)`, and the supporting lemmas as
//! checks.

use crate::cc_univ::{Cc, CcMor, CcObj};
use crate::csystem::{ft_n, objects, proj_n, pullback_q, CSystem};
use crate::error::{Error, Result};
use crate::fincat::{Category, FinCategory};
use crate::jcs::{
    idxt, is_jdom_entry, jdom_over, rf, sections_over, JBundle, JdomEntry, J0, J1, J2,
};
use crate::juniv::{build_coj, JUniverseData, UnivJ};
use crate::lcc::{eta, eta_bang, DpElement, Lcc};
use crate::report::{Check, Tally};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// `IdT(o,o′) = u_1⁻¹((ũ_1(o)*ũ_1(o′))∘Eq)`.
pub struct IdtFromEq<C: Lcc> {
    pub eq: C::Mor,
}

impl<C: Lcc + FinCategory> J0<Cc<C>> for IdtFromEq<C> {
    fn idt(&self, cs: &Cc<C>, o: &CcMor<C>, o2: &CcMor<C>) -> Result<CcObj<C>> {
        if o.cod != o2.cod || o.dom != o2.dom {
            return Err(Error::Shape(
                "IdT of sections with different boundaries".into(),
            ));
        }
        let u = cs.universe();
        let c = cs.cat();
        let uu = u.pair(u.p(), &cs.u1_tilde(o)?, &cs.u1_tilde(o2)?)?;
        cs.u1_inv(&o.dom, &c.compose(&uu, &self.eq)?)
    }
}

/// `refl(s) = ũ_1⁻¹(ũ_1(s)∘Ω)`.
pub struct ReflFromOmega<C: Lcc> {
    pub omega: C::Mor,
}

impl<C: Lcc + FinCategory> J1<Cc<C>> for ReflFromOmega<C> {
    fn refl(&self, cs: &Cc<C>, s: &CcMor<C>) -> Result<CcMor<C>> {
        let h = cs.cat().compose(&cs.u1_tilde(s)?, &self.omega)?;
        cs.u1_tilde_inv(&s.dom, &h)
    }
}

pub fn idt_from_eq<C: Lcc + FinCategory>(cs: &Cc<C>, eq: &C::Mor) -> Result<IdtFromEq<C>> {
    let u = cs.universe();
    let c = cs.cat();
    let up = u.ext(u.p())?;
    if c.dom(eq) != up.apex || c.cod(eq) != u.base() {
        return Err(Error::Shape("Eq must be a map (Ũ;p) → U".into()));
    }
    Ok(IdtFromEq { eq: eq.clone() })
}

pub fn refl_from_omega<C: Lcc + FinCategory>(
    cs: &Cc<C>,
    eq: &C::Mor,
    omega: &C::Mor,
) -> Result<ReflFromOmega<C>> {
    crate::juniv::build_omega(cs.universe(), eq, omega)?;
    Ok(ReflFromOmega {
        omega: omega.clone(),
    })
}

/// `φ(Γ,T,P,s0) = (η_{pEŨ}(F,G), η_p(F,H̃)): int(Γ) → Fp`.
pub struct PhiContext<C: Category> {
    pub f: C::Mor,
    pub g: C::Mor,
    pub h: C::Mor,
    pub eta_e: C::Mor,
    pub eta_p: C::Mor,
    pub phi: C::Mor,
}

/// The two legs of `φ`; fails if they disagree over `I_p(U)`.
pub fn phi<C: Lcc + FinCategory>(
    cs: &Cc<C>,
    d: &JUniverseData<C>,
    e: &JdomEntry<Cc<C>>,
) -> Result<PhiContext<C>> {
    let c = cs.cat();
    let f = cs.u1(&e.t)?;
    let g = cs.u1(&e.p)?;
    let h = cs.u1_tilde(&e.s0)?;
    let eta_e = eta(
        &d.e.universe,
        &DpElement {
            code: f.clone(),
            value: g.clone(),
        },
        &d.base.base(),
    )?;
    let eta_p = eta(
        &d.base,
        &DpElement {
            code: f.clone(),
            value: h.clone(),
        },
        &d.base.total(),
    )?;
    if c.compose(&eta_e, &d.iw_u)? != c.compose(&eta_p, &d.ip_p)? {
        return Err(Error::NotCommuting(
            "φ: η_{pEŨ}(F,G)∘I^ω(U) ≠ η_p(F,H̃)∘I_p(p)".into(),
        ));
    }
    let phi = c.fp_pair(&d.fp, &eta_e, &eta_p)?;
    Ok(PhiContext {
        f,
        g,
        h,
        eta_e,
        eta_p,
        phi,
    })
}

type JKey<C> = (CcObj<C>, CcObj<C>, CcMor<C>);

/// `J = ũ_1⁻¹(F_2)` where `(F_1,F_2) = η!_{pEŨ}(φ∘Jp)`.
pub struct JFromJp<C: Lcc + FinCategory> {
    pub data: Arc<JUniverseData<C>>,
    pub jp: C::Mor,
    base: JBundle<Cc<C>>,
    memo: Mutex<HashMap<JKey<C>, CcMor<C>>>,
}

impl<C: Lcc + FinCategory> JFromJp<C> {
    fn solve(&self, cs: &Cc<C>, e: &JdomEntry<Cc<C>>) -> Result<CcMor<C>> {
        if !is_jdom_entry(cs, &self.base, e)? {
            return Err(Error::Invariant(format!("{e:?} is not in Jdom")));
        }
        let c = cs.cat();
        let d = &*self.data;
        let ph = phi(cs, d, e)?;
        let ix = cs.ft(&e.p);
        let esq = d.e.universe.ext(&ph.f)?;
        if *ix.int() != esq.apex {
            return Err(Error::Invariant("int(IdxT(T)) ≠ (int(Γ);F)_E".into()));
        }
        let k = c.compose(&ph.phi, &self.jp)?;
        let DpElement { code, value } = eta_bang(&d.e.universe, &k, &d.base.total())?;
        if code != ph.f || c.compose(&value, d.base.p())? != ph.g {
            return Err(Error::Invariant("η!(φ∘Jp) does not lie over (F,G)".into()));
        }
        let j = cs.u1_tilde_inv(&ix, &value)?;
        if j.cod != e.p {
            return Err(Error::Invariant("∂(J) ≠ P".into()));
        }
        Ok(j)
    }
}

impl<C: Lcc + FinCategory> J2<Cc<C>> for JFromJp<C> {
    fn j(&self, cs: &Cc<C>, e: &JdomEntry<Cc<C>>) -> Result<CcMor<C>> {
        let key = (e.t.clone(), e.p.clone(), e.s0.clone());
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = self.solve(cs, e)?;
        self.memo.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }
}

/// The J0 and J1 parts only.
pub fn transfer_j1<C: Lcc + FinCategory>(
    cs: &Cc<C>,
    eq: &C::Mor,
    omega: &C::Mor,
) -> Result<JBundle<Cc<C>>> {
    Ok(JBundle {
        idt: Arc::new(idt_from_eq(cs, eq)?),
        refl: Arc::new(refl_from_omega(cs, eq, omega)?),
        j: None,
    })
}

pub fn j_from_jp<C: Lcc + FinCategory>(cs: &Cc<C>, b: &UnivJ<C>) -> Result<JFromJp<C>> {
    let data = build_coj(cs.universe(), &b.eq, &b.omega)?;
    if !data.is_section(&b.jp)? {
        return Err(Error::Invariant("jp-section: Jp∘coJ ≠ Id".into()));
    }
    Ok(JFromJp {
        data: Arc::new(data),
        jp: b.jp.clone(),
        base: transfer_j1(cs, &b.eq, &b.omega)?,
        memo: Mutex::new(HashMap::new()),
    })
}

/// `(IdT_Eq, refl_Ω, J_Jp)`.
pub fn transfer_bundle<C: Lcc + FinCategory>(cs: &Cc<C>, b: &UnivJ<C>) -> Result<JBundle<Cc<C>>> {
    let j = j_from_jp(cs, b)?;
    let mut out = j.base.clone();
    out.j = Some(Arc::new(j));
    Ok(out)
}

pub const CHECK_IDXT_INT: &str = "idxt-int-e-extension";
pub const CHECK_REFL_Q: &str = "refl-q-identity";
pub const CHECK_RF_OMEGA: &str = "rf-equals-pullback-of-omega";
pub const CHECK_Q3: &str = "q3-equals-e-square-q";
pub const CHECK_PHI_LEGS: &str = "phi-legs-agree";
pub const CHECK_J_DEFINING: &str = "j-defining-equation";

/// The lemmas behind the transfer, for `T` over `Γ` with `l(Γ) ≤ bound`.
pub fn check_transfer_lemmas<C: Lcc + FinCategory>(
    cs: &Cc<C>,
    b: &UnivJ<C>,
    bound: usize,
) -> Vec<Check> {
    let ids = [
        CHECK_IDXT_INT,
        CHECK_REFL_Q,
        CHECK_RF_OMEGA,
        CHECK_Q3,
        CHECK_PHI_LEGS,
        CHECK_J_DEFINING,
    ];
    let mut ts: Vec<Tally> = ids.iter().map(|id| Tally::new(id)).collect();
    if let Err(e) = lemmas(cs, b, bound, &mut ts) {
        ts[0].fail(e.to_string());
    }
    ts.into_iter().map(Tally::finish).collect()
}

fn lemmas<C: Lcc + FinCategory>(
    cs: &Cc<C>,
    b: &UnivJ<C>,
    bound: usize,
    ts: &mut [Tally],
) -> Result<()> {
    let j = j_from_jp(cs, b)?;
    let bundle = transfer_bundle(cs, b)?;
    let d = &*j.data;
    let c = cs.cat();
    let eu = &d.e.universe;
    let (refl, idt) = (&*bundle.refl, &*bundle.idt);
    let objs = objects(cs, bound)?;
    for g in &objs {
        for s in sections_over(cs, g)? {
            let f = cs.u1(&s.cod)?;
            let sqf = cs.universe().ext(&f)?;
            let top = c.chain(&[&s.mor, &sqf.q, &d.omega])?;
            let code = c.compose(&top, d.base.p())?;
            let r = refl.refl(cs, &s)?;
            let lhs = c.compose(&r.mor, &cs.universe().ext(&code)?.q)?;
            ts[1].expect(lhs == top, || {
                format!("refl(s)∘Q(s∘Q(F)∘Ω∘p) ≠ s∘Q(F)∘Ω at s = {s:?}")
            });
        }
        for t in cs.objects_over(g)? {
            let f = cs.u1(&t)?;
            let ix = idxt(cs, idt, &t)?;
            let esq = eu.ext(&f)?;
            let lay = d.e.layers(&f)?;
            ts[0].expect(*ix.int() == esq.apex, || {
                format!("int(IdxT({t:?})) ≠ (int(Γ);F)_E")
            });
            ts[0].expect(
                ft_n(cs, &ix, 3) == *g && proj_n(cs, &ix, 3)?.mor == esq.proj,
                || format!("p_{{IdxT,3}} ≠ p^E at T = {t:?}"),
            );
            ts[0].expect(c.compose(&esq.q, &d.e.eu.q)? == lay.third.q, || {
                format!("Q(F)_E∘Q(Eq) ≠ Q(Q(Q(F),p)∘Eq) at T = {t:?}")
            });
            let r = rf(cs, &bundle, &t)?;
            let star = eu.star(&d.base, &f, &d.w)?;
            ts[2].expect(r.mor == star, || format!("rf_T ≠ F*(ω) at T = {t:?}"));
            for g2 in &objs {
                for m in cs.hom(g2, g)? {
                    let q3 = pullback_q(cs, &m, &ix, 3)?;
                    let qe = eu.q_of(&m.mor, &f)?;
                    ts[3].expect(q3.mor == qe, || {
                        format!("q(f,IdxT,3) ≠ Q(f,F)_E for f = {m:?}, T = {t:?}")
                    });
                }
            }
            for e in jdom_over(cs, &bundle, g, &t)? {
                let ph = match phi(cs, d, &e) {
                    Ok(ph) => ph,
                    Err(err) => {
                        ts[4].fail(format!("{e:?}: {err}"));
                        continue;
                    }
                };
                ts[4].expect(true, String::new);
                let v = j.j(cs, &e)?;
                let lhs = eta(
                    eu,
                    &DpElement {
                        code: ph.f.clone(),
                        value: cs.u1_tilde(&v)?,
                    },
                    &d.base.total(),
                )?;
                ts[5].expect(lhs == c.compose(&ph.phi, &j.jp)?, || {
                    format!("η_{{pEŨ}}(F, ũ_1(J)) ≠ φ∘Jp at {e:?}")
                });
            }
        }
    }
    Ok(())
}
