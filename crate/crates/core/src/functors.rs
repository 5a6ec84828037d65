//! Universe category functors `(Φ, φ, φ̃)`, the comparison morphisms they
//! induce, their compatibility with `(Eq, Ω, Jp)`, and the homomorphism
//! `H(Φ)` of C-systems with its isomorphisms `ψ_Γ`.

use crate::cc_univ::{build_cc, Cc, CcMor, CcObj};
use crate::csystem::{check_csystem_hom, ft_n, objects, proj_n, CSystem, CsHom};
use crate::error::{Error, Result};
use crate::fincat::{
    is_final, verify_pullback, Category, CommSquare, FinCategory, Functor, IdentityFunctor,
};
use crate::finset::{FinMor, FinSet, Val};
use crate::jcs::{check_hom_j, idxt, JBundle};
use crate::juniv::{build_coj, JUniverseData, UnivJ};
use crate::lcc::{
    d_p_act, d_p_map, d_reindex, eta, eta_bang, i_hom, i_p_mor, i_p_obj, DpElement, Lcc,
};
use crate::models::{extensional_j, Fixture};
use crate::report::{Check, Tally};
use crate::transfer::transfer_bundle;
use crate::universe::Universe;
use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

pub struct UnivCatFunctor<C: Category> {
    pub src: Universe<C>,
    pub dst: Universe<C>,
    pub fun: Arc<dyn Functor<C, C>>,
    /// `φ: Φ(U) → U′`.
    pub phi: C::Mor,
    /// `φ̃: Φ(Ũ) → Ũ′`.
    pub phi_t: C::Mor,
}

impl<C: Category> Clone for UnivCatFunctor<C> {
    fn clone(&self) -> Self {
        UnivCatFunctor {
            src: self.src.clone(),
            dst: self.dst.clone(),
            fun: self.fun.clone(),
            phi: self.phi.clone(),
            phi_t: self.phi_t.clone(),
        }
    }
}

/// J-structures on the source and target universes.
pub struct FunctorJ<C: Category> {
    pub src: UnivJ<C>,
    pub dst: UnivJ<C>,
}

impl<C: Category> Clone for FunctorJ<C> {
    fn clone(&self) -> Self {
        FunctorJ {
            src: self.src.clone(),
            dst: self.dst.clone(),
        }
    }
}

impl<C: Lcc + FinCategory> UnivCatFunctor<C> {
    pub fn new(
        src: Universe<C>,
        dst: Universe<C>,
        fun: Arc<dyn Functor<C, C>>,
        phi: C::Mor,
        phi_t: C::Mor,
    ) -> Result<Self> {
        let c = dst.cat();
        if c.dom(&phi) != fun.obj(&src.base()) || c.cod(&phi) != dst.base() {
            return Err(Error::Shape("φ must be a map Φ(U) → U′".into()));
        }
        if c.dom(&phi_t) != fun.obj(&src.total()) || c.cod(&phi_t) != dst.total() {
            return Err(Error::Shape("φ̃ must be a map Φ(Ũ) → Ũ′".into()));
        }
        Ok(UnivCatFunctor {
            src,
            dst,
            fun,
            phi,
            phi_t,
        })
    }

    fn c(&self) -> &C {
        self.dst.cat()
    }

    pub fn fo(&self, x: &C::Obj) -> C::Obj {
        self.fun.obj(x)
    }

    pub fn fm(&self, f: &C::Mor) -> C::Mor {
        self.fun.mor(f)
    }

    /// `Φ(F)∘φ`.
    pub fn code(&self, f: &C::Mor) -> Result<C::Mor> {
        self.c().compose(&self.fm(f), &self.phi)
    }

    /// `Φ_{X,F} = Φ(p_{X,F}) * (Φ(Q(F))∘φ̃): Φ((X;F)) → (Φ(X);Φ(F)∘φ)`.
    pub fn phi_xf(&self, code: &C::Mor) -> Result<C::Mor> {
        let c = self.c();
        let sq = self.src.ext(code)?;
        let g = c.compose(&self.fm(&sq.q), &self.phi_t)?;
        self.dst.pair(&self.code(code)?, &self.fm(&sq.proj), &g)
    }

    /// `ι = Φ_{X,F}⁻¹`.
    pub fn iota(&self, code: &C::Mor) -> Result<C::Mor> {
        let m = self.phi_xf(code)?;
        self.c().inverse(&m).ok_or_else(|| {
            Error::Invariant(format!(
                "{CHECK_PHI_XF_ISO}: Φ_{{X,F}} is not invertible for {code:?}"
            ))
        })
    }

    /// `ΦŨp = Φ_{Ũ,p}∘Q′(φ̃,p′): Φ((Ũ;p)) → (Ũ′;p′)`.
    pub fn phi_up(&self) -> Result<C::Mor> {
        let a = self.phi_xf(self.src.p())?;
        let q = self.dst.q_of(&self.phi_t, self.dst.p())?;
        self.c().compose(&a, &q)
    }

    /// `(Φ(p_{Ũ,p})∘φ̃)*(Φ(Q(p))∘φ̃)`.
    pub fn phi_up_alt(&self) -> Result<C::Mor> {
        let c = self.c();
        let up = self.src.ext(self.src.p())?;
        self.dst.pair(
            self.dst.p(),
            &c.compose(&self.fm(&up.proj), &self.phi_t)?,
            &c.compose(&self.fm(&up.q), &self.phi_t)?,
        )
    }

    /// `φ̃_E = (Φ(p_{(Ũ;p),Eq})∘ΦŨp)*(Φ(Q(Eq))∘φ̃): Φ(EŨ) → EŨ′`.
    pub fn phi_t_e(&self, eq: &C::Mor, eq2: &C::Mor) -> Result<C::Mor> {
        let c = self.c();
        let eu = self.src.ext(eq)?;
        let f = c.compose(&self.fm(&eu.proj), &self.phi_up()?)?;
        let g = c.compose(&self.fm(&eu.q), &self.phi_t)?;
        self.dst.pair(eq2, &f, &g)
    }

    /// `Φ_E = (Φ, φ, φ̃_E)` between the `pEŨ` universes.
    pub fn e_functor(&self, eq: &C::Mor, eq2: &C::Mor) -> Result<UnivCatFunctor<C>> {
        Ok(UnivCatFunctor {
            src: self.src.e_universe(eq)?.universe,
            dst: self.dst.e_universe(eq2)?.universe,
            fun: self.fun.clone(),
            phi: self.phi.clone(),
            phi_t: self.phi_t_e(eq, eq2)?,
        })
    }
}

/// `Φ²(F,a) = (Φ(F)∘φ, ι∘Φ(a))`.
pub fn phi2<C: Lcc + FinCategory>(f: &UnivCatFunctor<C>, d: &DpElement<C>) -> Result<DpElement<C>> {
    let value = f.c().compose(&f.iota(&d.code)?, &f.fm(&d.value))?;
    Ok(DpElement {
        code: f.code(&d.code)?,
        value,
    })
}

/// `χ(V) = η′(Φ²(η!(Id_{I_p(V)}))): Φ(I_p(V)) → I_{p′}(Φ(V))`.
pub fn chi<C: Lcc + FinCategory>(f: &UnivCatFunctor<C>, v: &C::Obj) -> Result<C::Mor> {
    let sc = f.src.cat();
    let ip = i_p_obj(sc, f.src.p(), v)?;
    let d = eta_bang(&f.src, &sc.id(ip.obj()), v)?;
    eta(&f.dst, &phi2(f, &d)?, &f.fo(v))
}

/// `χ(V)∘I_{p′}(m)` for `m: Φ(V) → V′`.
pub fn chi_then<C: Lcc + FinCategory>(
    f: &UnivCatFunctor<C>,
    v: &C::Obj,
    m: &C::Mor,
) -> Result<C::Mor> {
    let c = f.c();
    c.compose(&chi(f, v)?, &i_p_mor(c, f.dst.p(), m)?)
}

/// `ξ = χ(U)∘I_{p′}(φ)`.
pub fn xi<C: Lcc + FinCategory>(f: &UnivCatFunctor<C>) -> Result<C::Mor> {
    chi_then(f, &f.src.base(), &f.phi)
}

/// `ξ̃ = χ(Ũ)∘I_{p′}(φ̃)`.
pub fn xi_t<C: Lcc + FinCategory>(f: &UnivCatFunctor<C>) -> Result<C::Mor> {
    chi_then(f, &f.src.total(), &f.phi_t)
}

pub struct XiZeta<C: Category> {
    /// `ξ: Φ(I_p(U)) → I_{p′}(U′)`.
    pub xi: C::Mor,
    /// `ξ̃: Φ(I_p(Ũ)) → I_{p′}(Ũ′)`.
    pub xi_t: C::Mor,
    /// `ζ = χ_E(U)∘I_{pEŨ′}(φ)`.
    pub zeta: C::Mor,
    /// `ζ̃ = χ_E(Ũ)∘I_{pEŨ′}(φ̃)`.
    pub zeta_t: C::Mor,
}

/// `(ξ, ξ̃, ζ, ζ̃)`; fails unless `Φ` is compatible with `Eq` and `Eq′`.
pub fn xi_zeta<C: Lcc + FinCategory>(
    f: &UnivCatFunctor<C>,
    eq: &C::Mor,
    eq2: &C::Mor,
) -> Result<XiZeta<C>> {
    require_eq_compat(f, eq, eq2)?;
    let fe = f.e_functor(eq, eq2)?;
    Ok(XiZeta {
        xi: xi(f)?,
        xi_t: xi_t(f)?,
        zeta: chi_then(&fe, &f.src.base(), &f.phi)?,
        zeta_t: chi_then(&fe, &f.src.total(), &f.phi_t)?,
    })
}

fn require_eq_compat<C: Lcc + FinCategory>(
    f: &UnivCatFunctor<C>,
    eq: &C::Mor,
    eq2: &C::Mor,
) -> Result<()> {
    let c = f.c();
    let lhs = c.compose(&f.fm(eq), &f.phi)?;
    let rhs = c.compose(&f.phi_up()?, eq2)?;
    if lhs != rhs {
        return Err(Error::Hypothesis(format!(
            "{CHECK_EQ_COMPAT}: Φ(Eq)∘φ ≠ ΦŨp∘Eq′"
        )));
    }
    Ok(())
}

/// `R_Φ: Φ(Fp) → Fp′`, the pairing of `Φ(pr1)∘ζ` and `Φ(pr2)∘ξ̃`.
pub fn r_phi<C: Lcc + FinCategory>(f: &UnivCatFunctor<C>, j: &FunctorJ<C>) -> Result<C::Mor> {
    let ds = build_coj(&f.src, &j.src.eq, &j.src.omega)?;
    let dd = build_coj(&f.dst, &j.dst.eq, &j.dst.omega)?;
    r_phi_with(f, &ds, &dd, &xi_zeta(f, &j.src.eq, &j.dst.eq)?)
}

fn r_phi_with<C: Lcc + FinCategory>(
    f: &UnivCatFunctor<C>,
    ds: &JUniverseData<C>,
    dd: &JUniverseData<C>,
    xz: &XiZeta<C>,
) -> Result<C::Mor> {
    let c = f.c();
    let a = c.compose(&f.fm(&ds.fp.pr1), &xz.zeta)?;
    let b = c.compose(&f.fm(&ds.fp.pr2), &xz.xi_t)?;
    c.fp_pair(&dd.fp, &a, &b)
}

/// `p1`, `p2` over a common `U` with `g: Ũ1 → Ũ2`, their primed
/// counterparts with `g′`, and functors `(Φ,φ,φ̃1)`, `(Φ,φ,φ̃2)`.
pub struct TwoUniverseSetup<C: Category> {
    pub f1: UnivCatFunctor<C>,
    pub f2: UnivCatFunctor<C>,
    pub g: C::Mor,
    pub g2: C::Mor,
}

/// `(p1, p2, g) = (p, pEŨ, ω)` and likewise on the target.
pub fn two_universe_from_j<C: Lcc + FinCategory>(
    f: &UnivCatFunctor<C>,
    j: &FunctorJ<C>,
) -> Result<TwoUniverseSetup<C>> {
    require_eq_compat(f, &j.src.eq, &j.dst.eq)?;
    let ds = build_coj(&f.src, &j.src.eq, &j.src.omega)?;
    let dd = build_coj(&f.dst, &j.dst.eq, &j.dst.omega)?;
    Ok(TwoUniverseSetup {
        f1: f.clone(),
        f2: f.e_functor(&j.src.eq, &j.dst.eq)?,
        g: ds.w,
        g2: dd.w,
    })
}

pub const CHECK_UCF_FINAL: &str = "functor-preserves-final";
pub const CHECK_UCF_SQUARES: &str = "functor-canonical-squares-to-pullbacks";
pub const CHECK_UNIV_SQUARE: &str = "universe-square-pullback";
pub const CHECK_PHI_XF_ISO: &str = "comparison-iso";
pub const CHECK_PHI_UP_FORMULA: &str = "phi-up-pairing-formula";
pub const CHECK_PHI_UP_PULLBACK: &str = "phi-up-square-pullback";
pub const CHECK_PHI_PAIRING: &str = "phi-pairing-identity";
pub const CHECK_EQ_COMPAT: &str = "eq-compatibility";
pub const CHECK_E_LAYER_PULLBACK: &str = "e-layer-square-pullback";
pub const CHECK_E_FUNCTOR_PULLBACK: &str = "e-functor-square-pullback";
pub const CHECK_OMEGA_COMPAT: &str = "omega-compatibility";
pub const CHECK_OMEGA_TRANSPORT: &str = "omega-transport-square";
pub const CHECK_G_SQUARE: &str = "two-universe-g-square";
pub const CHECK_PHI2_REINDEX: &str = "phi2-reindex-square";
pub const CHECK_CHI_REINDEX: &str = "chi-reindex-square";
pub const CHECK_CHI_NATURALITY: &str = "chi-naturality-identity";
pub const CHECK_TWO_UNIV_FACES: &str = "two-universe-faces";
pub const CHECK_XI_ZETA_FACES: &str = "xi-zeta-square-morphism";
pub const CHECK_ZETA_DISTINCT: &str = "zeta-t-differs-from-xi-t-of-e";
pub const CHECK_R_PHI: &str = "r-phi-projections";
pub const CHECK_JP_COMPAT: &str = "jp-compatibility";

/// The first `bound + 1` enumerated objects.
fn probes<C: FinCategory>(c: &C, bound: usize) -> Vec<C::Obj> {
    c.objects().into_iter().take(bound + 1).collect()
}

fn pullback<C: FinCategory>(
    t: &mut Tally,
    c: &C,
    sq: Result<CommSquare<C::Mor>>,
    what: impl Fn() -> String,
) {
    match sq {
        Ok(sq) => {
            t.expect_res(verify_pullback(c, &sq), &what);
        }
        Err(e) => t.fail(format!("{}: {e}", what())),
    }
}

fn eq_res<M: PartialEq>(a: Result<M>, b: Result<M>) -> Result<bool> {
    Ok(a? == b?)
}

/// Structural invariants, then the `Eq`, `Ω` and `Jp` clauses when
/// J-structures are supplied. `bound` limits the probe objects over which
/// canonical squares and pairings are enumerated.
pub fn check_ucfunctor<C: Lcc + FinCategory>(
    f: &UnivCatFunctor<C>,
    j: Option<&FunctorJ<C>>,
    bound: usize,
) -> Vec<Check> {
    let mut out = structural(f, bound);
    if let Some(j) = j {
        out.extend(compat(f, j, bound));
    }
    out
}

fn structural<C: Lcc + FinCategory>(f: &UnivCatFunctor<C>, bound: usize) -> Vec<Check> {
    let sc = f.src.cat();
    let c = f.c();
    let mut fin = Tally::new(CHECK_UCF_FINAL);
    fin.expect(is_final(c, &f.fo(&sc.terminal())), || {
        "Φ(pt) is not final".into()
    });

    let mut sqs = Tally::new(CHECK_UCF_SQUARES);
    let mut iso = Tally::new(CHECK_PHI_XF_ISO);
    let mut xs = probes(sc, bound);
    let up = f.src.ext(f.src.p());
    for x in [f.src.base(), f.src.total()]
        .into_iter()
        .chain(up.iter().map(|s| s.apex.clone()))
    {
        if !xs.contains(&x) {
            xs.push(x);
        }
    }
    for x in &xs {
        let codes = match sc.hom(x, &f.src.base()) {
            Ok(h) => h,
            Err(e) => {
                sqs.fail(format!("hom({x:?}, U): {e}"));
                continue;
            }
        };
        for code in &codes {
            let img = f.src.square(code).map(|s| {
                CommSquare::new(f.fm(&s.top), f.fm(&s.left), f.fm(&s.right), f.fm(&s.bottom))
            });
            pullback(&mut sqs, c, img, || {
                format!("Φ of the canonical square of {code:?} is not a pullback")
            });
            iso.expect_res(f.phi_xf(code).map(|m| c.is_iso(&m)), || {
                format!("Φ_{{X,F}} is not an isomorphism for {code:?}")
            });
        }
    }

    let mut e10 = Tally::new(CHECK_UNIV_SQUARE);
    pullback(
        &mut e10,
        c,
        Ok(CommSquare::new(
            f.phi_t.clone(),
            f.fm(f.src.p()),
            f.dst.p().clone(),
            f.phi.clone(),
        )),
        || "(φ̃, Φ(p), p′, φ) is not a pullback".into(),
    );

    let mut l5 = Tally::new(CHECK_PHI_UP_FORMULA);
    l5.expect_res(eq_res(f.phi_up(), f.phi_up_alt()), || {
        "Φ_{Ũ,p}∘Q′(φ̃,p′) ≠ (Φ(p_{Ũ,p})∘φ̃)*(Φ(Q(p))∘φ̃)".into()
    });
    let mut l5sq = Tally::new(CHECK_PHI_UP_PULLBACK);
    let sq = (|| {
        let up = f.src.ext(f.src.p())?;
        let up2 = f.dst.ext(f.dst.p())?;
        Ok(CommSquare::new(
            f.phi_up()?,
            f.fm(&up.proj),
            up2.proj,
            f.phi_t.clone(),
        ))
    })();
    pullback(&mut l5sq, c, sq, || {
        "(ΦŨp, Φ(p_{Ũ,p}), p′_{Ũ′,p′}, φ̃) is not a pullback".into()
    });

    let mut l6 = Tally::new(CHECK_PHI_PAIRING);
    let r = (|| -> Result<()> {
        let pu = f.phi_up()?;
        l6.expect_res(
            eq_res(
                c.compose(&f.fm(&f.src.delta()?), &pu),
                f.dst.pair(f.dst.p(), &f.phi_t, &f.phi_t),
            ),
            || "Φ(Δ)∘ΦŨp ≠ φ̃*φ̃".into(),
        );
        for y in probes(sc, bound) {
            let ss = sc.hom(&y, &f.src.total())?;
            for s in &ss {
                let sp = sc.compose(s, f.src.p())?;
                for s2 in &ss {
                    if sc.compose(s2, f.src.p())? != sp {
                        continue;
                    }
                    let lhs = c.compose(&f.fm(&f.src.pair(f.src.p(), s, s2)?), &pu)?;
                    let rhs = f.dst.pair(
                        f.dst.p(),
                        &c.compose(&f.fm(s), &f.phi_t)?,
                        &c.compose(&f.fm(s2), &f.phi_t)?,
                    )?;
                    l6.expect(lhs == rhs, || {
                        format!("Φ(s*s′)∘ΦŨp ≠ Φ(s)φ̃*Φ(s′)φ̃ at ({s:?},{s2:?})")
                    });
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        l6.fail(e.to_string());
    }
    vec![
        fin.finish(),
        sqs.finish(),
        iso.finish(),
        e10.finish(),
        l5.finish(),
        l5sq.finish(),
        l6.finish(),
    ]
}

const COMPAT_IDS: [&str; 13] = [
    CHECK_E_LAYER_PULLBACK,
    CHECK_E_FUNCTOR_PULLBACK,
    CHECK_OMEGA_COMPAT,
    CHECK_OMEGA_TRANSPORT,
    CHECK_G_SQUARE,
    CHECK_PHI2_REINDEX,
    CHECK_CHI_REINDEX,
    CHECK_CHI_NATURALITY,
    CHECK_TWO_UNIV_FACES,
    CHECK_XI_ZETA_FACES,
    CHECK_ZETA_DISTINCT,
    CHECK_R_PHI,
    CHECK_JP_COMPAT,
];

fn compat<C: Lcc + FinCategory>(
    f: &UnivCatFunctor<C>,
    j: &FunctorJ<C>,
    bound: usize,
) -> Vec<Check> {
    let c = f.c();
    let (eq, eq2) = (&j.src.eq, &j.dst.eq);
    let mut d4 = Tally::new(CHECK_EQ_COMPAT);
    let ok4 = d4.expect_res(
        eq_res(
            c.compose(&f.fm(eq), &f.phi),
            f.phi_up().and_then(|m| c.compose(&m, eq2)),
        ),
        || "Φ(Eq)∘φ ≠ ΦŨp∘Eq′".into(),
    );
    let mut out = vec![d4.finish()];
    if !ok4 {
        out.extend(
            COMPAT_IDS
                .iter()
                .map(|id| Check::skipped(id, "Φ is not compatible with Eq and Eq′")),
        );
        return out;
    }

    let mut l4 = Tally::new(CHECK_E_LAYER_PULLBACK);
    let sq = (|| {
        let eu = f.src.ext(eq)?;
        let eu2 = f.dst.ext(eq2)?;
        Ok(CommSquare::new(
            f.phi_t_e(eq, eq2)?,
            f.fm(&eu.proj),
            eu2.proj,
            f.phi_up()?,
        ))
    })();
    pullback(&mut l4, c, sq, || {
        "(φ̃_E, Φ(p_{(Ũ;p),Eq}), p_{(Ũ′;p′),Eq′}, ΦŨp) is not a pullback".into()
    });
    out.push(l4.finish());

    let fe = match f.e_functor(eq, eq2) {
        Ok(fe) => fe,
        Err(e) => {
            let mut t = Tally::new(CHECK_E_FUNCTOR_PULLBACK);
            t.fail(e.to_string());
            out.push(t.finish());
            out.extend(
                COMPAT_IDS[2..]
                    .iter()
                    .map(|id| Check::skipped(id, "no Φ_E")),
            );
            return out;
        }
    };
    let mut l6 = Tally::new(CHECK_E_FUNCTOR_PULLBACK);
    pullback(
        &mut l6,
        c,
        Ok(CommSquare::new(
            fe.phi_t.clone(),
            f.fm(fe.src.p()),
            fe.dst.p().clone(),
            f.phi.clone(),
        )),
        || "(φ̃_E, Φ(pEŨ), pEŨ′, φ) is not a pullback".into(),
    );
    out.push(l6.finish());

    let mut d5 = Tally::new(CHECK_OMEGA_COMPAT);
    let ok5 = d5.expect_res(
        eq_res(
            c.compose(&f.fm(&j.src.omega), &f.phi_t),
            c.compose(&f.phi_t, &j.dst.omega),
        ),
        || "Φ(Ω)∘φ̃ ≠ φ̃∘Ω′".into(),
    );
    out.push(d5.finish());
    if !ok5 {
        out.extend(
            COMPAT_IDS[3..]
                .iter()
                .map(|id| Check::skipped(id, "Φ is not compatible with Ω and Ω′")),
        );
        return out;
    }

    let data = (|| -> Result<_> {
        let ds = build_coj(&f.src, eq, &j.src.omega)?;
        let dd = build_coj(&f.dst, eq2, &j.dst.omega)?;
        let two = two_universe_from_j(f, j)?;
        let xz = xi_zeta(f, eq, eq2)?;
        Ok((ds, dd, two, xz))
    })();
    let (ds, dd, two, xz) = match data {
        Ok(d) => d,
        Err(e) => {
            let mut t = Tally::new(CHECK_OMEGA_TRANSPORT);
            t.fail(e.to_string());
            out.push(t.finish());
            out.extend(
                COMPAT_IDS[4..]
                    .iter()
                    .map(|id| Check::skipped(id, "J1 data invalid")),
            );
            return out;
        }
    };

    let mut l7 = Tally::new(CHECK_OMEGA_TRANSPORT);
    l7.expect_res(
        eq_res(
            c.compose(&f.fm(&ds.w), &fe.phi_t),
            c.compose(&f.phi_t, &dd.w),
        ),
        || "Φ(ω)∘φ̃_E ≠ φ̃∘ω′".into(),
    );
    out.push(l7.finish());

    out.extend(check_two_universe(&two, bound));
    out.push(check_xi_zeta_faces(f, &ds, &dd, &xz));

    let mut dz = Tally::new(CHECK_ZETA_DISTINCT);
    dz.expect_res(
        chi_then(&fe, &fe.src.total(), &fe.phi_t).map(|x| x != xz.zeta_t),
        || "ζ̃ coincides with ξ̃ of Φ_E".into(),
    );
    out.push(dz.finish());

    let mut rp = Tally::new(CHECK_R_PHI);
    let mut d6 = Tally::new(CHECK_JP_COMPAT);
    match r_phi_with(f, &ds, &dd, &xz) {
        Ok(r) => {
            rp.expect_res(
                eq_res(
                    c.compose(&r, &dd.fp.pr1),
                    c.compose(&f.fm(&ds.fp.pr1), &xz.zeta),
                ),
                || "R_Φ∘pr1′ ≠ Φ(pr1)∘ζ".into(),
            );
            rp.expect_res(
                eq_res(
                    c.compose(&r, &dd.fp.pr2),
                    c.compose(&f.fm(&ds.fp.pr2), &xz.xi_t),
                ),
                || "R_Φ∘pr2′ ≠ Φ(pr2)∘ξ̃".into(),
            );
            match (
                c.compose(&f.fm(&j.src.jp), &xz.zeta_t),
                c.compose(&r, &j.dst.jp),
            ) {
                (Ok(a), Ok(b)) => {
                    let dom = c.dom(&a);
                    let pts = c.hom(&c.terminal(), &dom).unwrap_or_default();
                    if pts.is_empty() {
                        d6.expect(a == b, || "Φ(Jp)∘ζ̃ ≠ R_Φ∘Jp′".into());
                    }
                    for x in &pts {
                        d6.expect_res(eq_res(c.compose(x, &a), c.compose(x, &b)), || {
                            format!("Φ(Jp)∘ζ̃ ≠ R_Φ∘Jp′ at {x:?}")
                        });
                    }
                }
                (Err(e), _) | (_, Err(e)) => d6.fail(e.to_string()),
            }
        }
        Err(e) => {
            rp.fail(e.to_string());
            d6.fail("no R_Φ");
        }
    }
    out.push(rp.finish());
    out.push(d6.finish());
    out
}

/// The four faces `Φ(I^ω(Ũ))∘ξ̃ = ζ̃∘I^{ω′}(Ũ′)`,
/// `Φ(I^ω(U))∘ξ = ζ∘I^{ω′}(U′)`, `Φ(I_{pEŨ}(p))∘ζ = ζ̃∘I_{pEŨ′}(p′)` and
/// `Φ(I_p(p))∘ξ = ξ̃∘I_{p′}(p′)`.
fn check_xi_zeta_faces<C: Lcc + FinCategory>(
    f: &UnivCatFunctor<C>,
    ds: &JUniverseData<C>,
    dd: &JUniverseData<C>,
    xz: &XiZeta<C>,
) -> Check {
    let c = f.c();
    let mut t = Tally::new(CHECK_XI_ZETA_FACES);
    let faces = [
        ("top", &ds.iw_ut, &xz.xi_t, &xz.zeta_t, &dd.iw_ut),
        ("bottom", &ds.iw_u, &xz.xi, &xz.zeta, &dd.iw_u),
        ("left", &ds.ie_p, &xz.zeta, &xz.zeta_t, &dd.ie_p),
        ("right", &ds.ip_p, &xz.xi, &xz.xi_t, &dd.ip_p),
    ];
    for (name, a, b, x, y) in faces {
        t.expect_res(eq_res(c.compose(&f.fm(a), b), c.compose(x, y)), || {
            format!("{name} face does not commute")
        });
    }
    t.finish()
}

/// The `D^g` square for `Φ²`, the `I^g` square for `χ`, the identity
/// `η′(Φ²(η!(a))) = Φ(a)∘χ(V)`, and the four two-stage diagrams whose outer
/// squares make `(ζ_1, ζ_2, ζ̃_1, ζ̃_2)` a morphism of squares.
pub fn check_two_universe<C: Lcc + FinCategory>(
    s: &TwoUniverseSetup<C>,
    bound: usize,
) -> Vec<Check> {
    let (f1, f2) = (&s.f1, &s.f2);
    let sc = f1.src.cat();
    let c = f1.c();
    let mut gs = Tally::new(CHECK_G_SQUARE);
    gs.expect_res(
        eq_res(
            c.compose(&f1.fm(&s.g), &f2.phi_t),
            c.compose(&f1.phi_t, &s.g2),
        ),
        || "Φ(g)∘φ̃2 ≠ φ̃1∘g′".into(),
    );
    gs.expect_res(
        sc.compose(&s.g, f2.src.p()).map(|m| m == *f1.src.p()),
        || "g is not over U".into(),
    );
    gs.expect_res(
        c.compose(&s.g2, f2.dst.p()).map(|m| m == *f1.dst.p()),
        || "g′ is not over U′".into(),
    );

    let vs = [f1.src.base(), f1.src.total(), sc.terminal()];
    let mut l1 = Tally::new(CHECK_PHI2_REINDEX);
    let r = (|| -> Result<()> {
        for x in probes(sc, bound) {
            for v in &vs {
                for d in dp_elements(&f2.src, &x, v)? {
                    let lhs = d_reindex(&f2.dst, &f1.dst, &s.g2, &phi2(f2, &d)?)?;
                    let rhs = phi2(f1, &d_reindex(&f2.src, &f1.src, &s.g, &d)?)?;
                    l1.expect(lhs == rhs, || format!("D^{{g′}}∘Φ²_2 ≠ Φ²_1∘D^g at {d:?}"));
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        l1.fail(e.to_string());
    }

    let mut l7 = Tally::new(CHECK_CHI_REINDEX);
    let mut nat = Tally::new(CHECK_CHI_NATURALITY);
    let r = (|| -> Result<()> {
        for v in &vs {
            let fv = f1.fo(v);
            let ig = i_hom(sc, &s.g, f2.src.p(), f1.src.p(), v)?;
            let ig2 = i_hom(c, &s.g2, f2.dst.p(), f1.dst.p(), &fv)?;
            let chi1 = chi(f1, v)?;
            let chi2 = chi(f2, v)?;
            l7.expect(
                c.compose(&chi2, &ig2)? == c.compose(&f1.fm(&ig), &chi1)?,
                || format!("χ_2(V)∘I^{{g′}} ≠ Φ(I^g)∘χ_1(V) at V = {v:?}"),
            );
            for (fk, chik) in [(f1, &chi1), (f2, &chi2)] {
                let ip = i_p_obj(sc, fk.src.p(), v)?;
                let mut xs = probes(sc, bound);
                xs.push(sc.terminal());
                for x in xs {
                    for a in sc.hom(&x, ip.obj())? {
                        let lhs = eta(&fk.dst, &phi2(fk, &eta_bang(&fk.src, &a, v)?)?, &fv)?;
                        nat.expect(lhs == c.compose(&fk.fm(&a), chik)?, || {
                            format!("η′(Φ²(η!(a))) ≠ Φ(a)∘χ(V) at a = {a:?}")
                        });
                    }
                }
            }
            let a = ig.clone();
            let lhs = eta(&f1.dst, &phi2(f1, &eta_bang(&f1.src, &a, v)?)?, &fv)?;
            nat.expect(lhs == c.compose(&f1.fm(&a), &chi1)?, || {
                format!("η′(Φ²(η!(I^g(V)))) ≠ Φ(I^g(V))∘χ_1(V) at V = {v:?}")
            });
        }
        Ok(())
    })();
    if let Err(e) = r {
        l7.fail(e.to_string());
    }

    let mut faces = Tally::new(CHECK_TWO_UNIV_FACES);
    faces.note("vertical legs are I(p1); I(p2) legs do not compose with I(Ũ1)");
    if let Err(e) = two_universe_faces(s, &mut faces) {
        faces.fail(e.to_string());
    }
    vec![
        gs.finish(),
        l1.finish(),
        l7.finish(),
        nat.finish(),
        faces.finish(),
    ]
}

fn two_universe_faces<C: Lcc + FinCategory>(s: &TwoUniverseSetup<C>, t: &mut Tally) -> Result<()> {
    let (f1, f2) = (&s.f1, &s.f2);
    let sc = f1.src.cat();
    let c = f1.c();
    let (u, ut) = (f1.src.base(), f1.src.total());
    let (p1, p2) = (f1.src.p(), f2.src.p());
    let (q1, q2) = (f1.dst.p(), f2.dst.p());
    let (u2, ut2) = (f1.dst.base(), f1.dst.total());
    let phi = &f1.phi;
    let phit = &f1.phi_t;
    let mut sq = |name: &str, a: C::Mor, b: C::Mor, x: C::Mor, y: C::Mor| -> Result<()> {
        let ok = c.compose(&a, &b)? == c.compose(&x, &y)?;
        t.expect(ok, || format!("{name} does not commute"));
        Ok(())
    };
    let zt = |fk: &UnivCatFunctor<C>| chi_then(fk, &ut, phit);
    let z = |fk: &UnivCatFunctor<C>| chi_then(fk, &u, phi);

    // I^g legs at V = Ũ1 and V = U
    for (v, v2, m, label) in [(&ut, &ut2, phit, "Ũ1"), (&u, &u2, phi, "U")] {
        let fv = f1.fo(v);
        let ig = i_hom(sc, &s.g, p2, p1, v)?;
        let ig_f = i_hom(c, &s.g2, q2, q1, &fv)?;
        let ig_t = i_hom(c, &s.g2, q2, q1, v2)?;
        sq(
            &format!("left square at {label}"),
            f1.fm(&ig),
            chi(f1, v)?,
            chi(f2, v)?,
            ig_f.clone(),
        )?;
        sq(
            &format!("right square at {label}"),
            ig_f,
            i_p_mor(c, q1, m)?,
            i_p_mor(c, q2, m)?,
            ig_t.clone(),
        )?;
        let (zk1, zk2) = if label == "U" {
            (z(f1)?, z(f2)?)
        } else {
            (zt(f1)?, zt(f2)?)
        };
        sq(
            &format!("outer square at {label}"),
            f1.fm(&ig),
            zk1,
            zk2,
            ig_t,
        )?;
    }
    // I_{p_i}(p1) legs
    for (k, fk) in [(2, f2), (1, f1)] {
        let pk = fk.src.p();
        let qk = fk.dst.p();
        let ipp = i_p_mor(sc, pk, p1)?;
        let ipp_f = i_p_mor(c, qk, &f1.fm(p1))?;
        sq(
            &format!("left square of I_{{p{k}}}(p1)"),
            f1.fm(&ipp),
            chi(fk, &u)?,
            chi(fk, &ut)?,
            ipp_f.clone(),
        )?;
        sq(
            &format!("right square of I_{{p{k}}}(p1)"),
            ipp_f,
            i_p_mor(c, qk, phi)?,
            i_p_mor(c, qk, phit)?,
            i_p_mor(c, qk, q1)?,
        )?;
        sq(
            &format!("outer square of I_{{p{k}}}(p1)"),
            f1.fm(&ipp),
            z(fk)?,
            zt(fk)?,
            i_p_mor(c, qk, q1)?,
        )?;
    }
    Ok(())
}

/// All of `D_p(X,V)`.
pub fn dp_elements<C: Lcc + FinCategory>(
    u: &Universe<C>,
    x: &C::Obj,
    v: &C::Obj,
) -> Result<Vec<DpElement<C>>> {
    let c = u.cat();
    let mut out = Vec::new();
    for code in c.hom(x, &u.base())? {
        let sq = u.ext(&code)?;
        for value in c.hom(&sq.apex, v)? {
            out.push(DpElement {
                code: code.clone(),
                value,
            });
        }
    }
    Ok(out)
}

type PsiEntry<C> = (CcObj<C>, <C as Category>::Mor, <C as Category>::Mor);

/// `H(Φ): CC(C,p) → CC(C′,p′)` with `ψ_Γ: int′(H(Γ)) → Φ(int(Γ))`.
pub struct HOf<C: Lcc + FinCategory> {
    pub f: UnivCatFunctor<C>,
    pub src: Cc<C>,
    pub dst: Cc<C>,
    psi0: C::Mor,
    memo: Mutex<HashMap<CcObj<C>, PsiEntry<C>>>,
}

pub fn h_of<C: Lcc + FinCategory>(f: &UnivCatFunctor<C>) -> Result<HOf<C>> {
    let c = f.c();
    let fpt = f.fo(&f.src.cat().terminal());
    let hs = c.hom(&c.terminal(), &fpt)?;
    if hs.len() != 1 {
        return Err(Error::Hypothesis(format!(
            "{CHECK_UCF_FINAL}: Φ(pt) is not final"
        )));
    }
    Ok(HOf {
        f: f.clone(),
        src: build_cc(&f.src),
        dst: build_cc(&f.dst),
        psi0: hs.into_iter().next().expect("one map"),
        memo: Mutex::new(HashMap::new()),
    })
}

impl<C: Lcc + FinCategory> HOf<C> {
    /// `(H(Γ), ψ_Γ, ψ_Γ⁻¹)`.
    fn entry(&self, g: &CcObj<C>) -> Result<PsiEntry<C>> {
        if let Some(e) = self.memo.lock().unwrap().get(g) {
            return Ok(e.clone());
        }
        let c = self.f.c();
        let (hg, psi) = if g.is_empty() {
            (self.dst.root(), self.psi0.clone())
        } else {
            let (hp, psi_p, _) = self.entry(&g.prefix(g.len() - 1))?;
            let code = self.src.u1(g)?;
            let fcode = self.f.code(&code)?;
            let hcode = c.compose(&psi_p, &fcode)?;
            let hg = self.dst.extend(&hp, &hcode)?;
            let psi = c.compose(&self.f.dst.q_of(&psi_p, &fcode)?, &self.f.iota(&code)?)?;
            (hg, psi)
        };
        let inv = c.inverse(&psi).ok_or_else(|| {
            Error::Invariant(format!("{CHECK_PSI_ISO}: ψ is not invertible at {g:?}"))
        })?;
        let e = (hg, psi, inv);
        self.memo.lock().unwrap().insert(g.clone(), e.clone());
        Ok(e)
    }

    pub fn psi(&self, g: &CcObj<C>) -> Result<C::Mor> {
        Ok(self.entry(g)?.1)
    }
}

impl<C: Lcc + FinCategory> CsHom<Cc<C>, Cc<C>> for HOf<C> {
    fn obj(&self, x: &CcObj<C>) -> Result<CcObj<C>> {
        Ok(self.entry(x)?.0)
    }

    fn mor(&self, f: &CcMor<C>) -> Result<CcMor<C>> {
        let (hd, psi, _) = self.entry(&f.dom)?;
        let (hc, _, inv) = self.entry(&f.cod)?;
        let m = self.f.c().chain(&[&psi, &self.f.fm(&f.mor), &inv])?;
        self.dst.mor(&hd, &hc, m)
    }
}

pub const CHECK_PSI_ISO: &str = "psi-iso";
pub const CHECK_PSI_DEFINING: &str = "psi-defining-equations";
pub const CHECK_PSI_PROJ: &str = "psi-projection-square";
pub const CHECK_H_INJECTIVE: &str = "h-injective-on-objects";

/// `ψ_Γ` is an isomorphism satisfying its two defining equations and
/// commuting with `p_{Γ,n}`; `H` is a C-system homomorphism, injective on
/// objects, for `l(Γ) ≤ bound`.
pub fn check_h<C: Lcc + FinCategory>(h: &HOf<C>, bound: usize) -> Vec<Check> {
    let mut iso = Tally::new(CHECK_PSI_ISO);
    let mut def = Tally::new(CHECK_PSI_DEFINING);
    let mut proj = Tally::new(CHECK_PSI_PROJ);
    let mut inj = Tally::new(CHECK_H_INJECTIVE);
    let r = (|| -> Result<()> {
        let c = h.f.c();
        let mut seen = HashSet::new();
        for g in objects(&h.src, bound)? {
            let (hg, psi) = match h.entry(&g) {
                Ok((hg, psi, _)) => (hg, psi),
                Err(e) => {
                    iso.fail(e.to_string());
                    continue;
                }
            };
            iso.expect(true, String::new);
            inj.expect(seen.insert(hg.clone()), || {
                format!("H is not injective at {g:?}")
            });
            if g.is_empty() {
                continue;
            }
            let code = h.src.u1(&g)?;
            let sq = h.f.src.ext(&code)?;
            let psi_p = h.psi(&g.prefix(g.len() - 1))?;
            let hcode = c.compose(&psi_p, &h.f.code(&code)?)?;
            let sq2 = h.f.dst.ext(&hcode)?;
            def.expect(
                c.chain(&[&psi, &h.f.fm(&sq.q), &h.f.phi_t])? == sq2.q,
                || format!("ψ∘Φ(Q(F))∘φ̃ ≠ Q′(ψ∘Φ(F)∘φ) at {g:?}"),
            );
            def.expect(
                c.compose(&psi, &h.f.fm(&sq.proj))? == c.compose(&sq2.proj, &psi_p)?,
                || format!("ψ∘Φ(p) ≠ p_H∘ψ at {g:?}"),
            );
            for n in 1..=g.len() {
                let gn = ft_n(&h.src, &g, n);
                let lhs = c.compose(&psi, &h.f.fm(&proj_n(&h.src, &g, n)?.mor))?;
                let rhs = c.compose(&proj_n(&h.dst, &hg, n)?.mor, &h.psi(&gn)?)?;
                proj.expect(lhs == rhs, || {
                    format!("ψ∘Φ(p_{{Γ,{n}}}) ≠ p_{{HΓ,{n}}}∘ψ at {g:?}")
                });
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        def.fail(e.to_string());
    }
    vec![
        iso.finish(),
        def.finish(),
        proj.finish(),
        inj.finish(),
        check_csystem_hom(&h.src, &h.dst, h, bound),
    ]
}

pub const CHECK_D_ELEMENTS: &str = "h-d-element-identities";

/// `H` against the transferred bundles on both sides, after checking the
/// `Eq`, `Ω` and `Jp` compatibility clauses; `bound` is for `IdT` and
/// `refl`, `j2_bound` for `IdxT`, `rf`, `J` and the `D`-element identities.
pub fn check_h_j_compat<C: Lcc + FinCategory>(
    h: &HOf<C>,
    j: &FunctorJ<C>,
    bound: usize,
    j2_bound: usize,
) -> Result<Vec<Check>> {
    let f = &h.f;
    for ch in compat(f, j, 0) {
        if !ch.passed() {
            let why = ch.counterexamples.first().cloned().unwrap_or_default();
            return Err(Error::Hypothesis(format!("{}: {why}", ch.id)));
        }
    }
    let b = transfer_bundle(&h.src, &j.src)?;
    let b2 = transfer_bundle(&h.dst, &j.dst)?;
    let mut out = check_hom_j(&h.src, &h.dst, h, &b, &b2, bound, j2_bound);
    out.push(check_d_elements(h, j, &b, j2_bound));
    Ok(out)
}

/// `(u′_1(H T), u′_1(H P)) = D(ψ_Γ,−)(D(−,φ)(Φ_E²(u_1 T, u_1 P)))` and
/// `(u′_1(H T), ũ′_1(H o)) = D(ψ_Γ,−)(D(−,φ̃)(Φ_E²(u_1 T, ũ_1 o)))`.
fn check_d_elements<C: Lcc + FinCategory>(
    h: &HOf<C>,
    j: &FunctorJ<C>,
    b: &JBundle<Cc<C>>,
    bound: usize,
) -> Check {
    let mut t = Tally::new(CHECK_D_ELEMENTS);
    let r = (|| -> Result<()> {
        let f = &h.f;
        let fe = f.e_functor(&j.src.eq, &j.dst.eq)?;
        let eu2 = &fe.dst;
        let (src, dst) = (&h.src, &h.dst);
        for g in objects(src, bound)? {
            let psi = h.psi(&g)?;
            for tt in src.objects_over(&g)? {
                let ft = src.u1(&tt)?;
                let ht = h.obj(&tt)?;
                let ix = idxt(src, &*b.idt, &tt)?;
                for p in src.objects_over(&ix)? {
                    let hp = h.obj(&p)?;
                    let lhs = DpElement::<C> {
                        code: dst.u1(&ht)?,
                        value: dst.u1(&hp)?,
                    };
                    let d = phi2(
                        &fe,
                        &DpElement {
                            code: ft.clone(),
                            value: src.u1(&p)?,
                        },
                    )?;
                    let rhs = d_p_act(eu2, &psi, &d_p_map(eu2, &d, &f.phi)?)?;
                    t.expect(lhs == rhs, || format!("type identity fails at P = {p:?}"));
                    for o in src.sections(&p)? {
                        let lhs = DpElement::<C> {
                            code: dst.u1(&ht)?,
                            value: dst.u1_tilde(&h.mor(&o)?)?,
                        };
                        let d = phi2(
                            &fe,
                            &DpElement {
                                code: ft.clone(),
                                value: src.u1_tilde(&o)?,
                            },
                        )?;
                        let rhs = d_p_act(eu2, &psi, &d_p_map(eu2, &d, &f.phi_t)?)?;
                        t.expect(lhs == rhs, || format!("term identity fails at o = {o:?}"));
                    }
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        t.fail(e.to_string());
    }
    t.finish()
}

/// `(Id, Id_U, Id_Ũ)` on a fixture.
pub fn identity_functor(fx: &Fixture) -> Result<UnivCatFunctor<FinSet>> {
    let c = &*fx.cat;
    UnivCatFunctor::new(
        fx.universe.clone(),
        fx.universe.clone(),
        Arc::new(IdentityFunctor),
        c.id(&fx.u()),
        c.id(&fx.ut()),
    )
}

/// The identity functor with `φ` and `φ̃` the inclusions of the codes and
/// fibers of `small` into those of `big`.
pub fn code_inclusion(small: &Fixture, big: &Fixture) -> Result<UnivCatFunctor<FinSet>> {
    let c = &*big.cat;
    UnivCatFunctor::new(
        small.universe.clone(),
        big.universe.clone(),
        Arc::new(IdentityFunctor),
        c.inclusion(&small.u(), &big.u())?,
        c.inclusion(&small.ut(), &big.ut())?,
    )
}

/// The extensional structures on both sides.
pub fn extensional_pair(small: &Fixture, big: &Fixture) -> Result<FunctorJ<FinSet>> {
    Ok(FunctorJ {
        src: extensional_j(small)?,
        dst: extensional_j(big)?,
    })
}

/// `φ̃` with the image of `at` replaced by `to`.
pub fn with_phi_t_value(
    f: &UnivCatFunctor<FinSet>,
    at: &Val,
    to: &Val,
) -> Result<UnivCatFunctor<FinSet>> {
    let (dom, cod) = (f.phi_t.dom(), f.phi_t.cod());
    let i = dom
        .index_of(at)
        .ok_or_else(|| Error::Shape(format!("{at:?} is not in Φ(Ũ)")))?;
    let k = cod
        .index_of(to)
        .ok_or_else(|| Error::Shape(format!("{to:?} is not in Ũ′")))?;
    let mut map = f.phi_t.table().to_vec();
    map[i as usize] = k;
    let phi_t = f.c().from_table(dom, cod, map)?;
    Ok(UnivCatFunctor { phi_t, ..f.clone() })
}

/// The target `Ω′` replaced by the constant map at `to`.
pub fn with_target_omega(j: &FunctorJ<FinSet>, to: &Val) -> Result<FunctorJ<FinSet>> {
    let om: &FinMor = &j.dst.omega;
    let ut = om.cod();
    if !ut.contains(to) {
        return Err(Error::Shape(format!("{to:?} is not in Ũ′")));
    }
    let omega = FinSet::default().constant(om.dom(), ut, to)?;
    let mut out = j.clone();
    out.dst.omega = omega;
    Ok(out)
}
