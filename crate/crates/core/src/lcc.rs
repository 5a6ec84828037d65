//! Chosen locally cartesian closed structure and the functors built from
//! it: fiber products, slice homs with `adj`, `I_p`, `I^h`, `D_p` and the
//! bijection `η` between `D_p(X,V)` and `Hom(X, I_p(V))`.

use crate::error::{Error, Result};
use crate::fincat::{Category, FinCategory};
use crate::report::{Check, Tally};
use crate::universe::Universe;

/// `(B′,f)×_B(E,p)` with its projections.
pub struct FiberProduct<C: Category> {
    pub apex: C::Obj,
    pub pr1: C::Mor,
    pub pr2: C::Mor,
    /// The cospan `f: B′→B`, `p: E→B`.
    pub left: C::Mor,
    pub right: C::Mor,
}

impl<C: Category> Clone for FiberProduct<C> {
    fn clone(&self) -> Self {
        FiberProduct {
            apex: self.apex.clone(),
            pr1: self.pr1.clone(),
            pr2: self.pr2.clone(),
            left: self.left.clone(),
            right: self.right.clone(),
        }
    }
}

impl<C: Category> FiberProduct<C> {
    /// The composite projection to the common base.
    pub fn diagonal(&self, c: &C) -> Result<C::Mor> {
        c.compose(&self.pr1, &self.left)
    }
}

/// `Hom_B((E,p),(F,q))` with its projection to `B` and evaluation.
pub struct SliceHom<C: Category> {
    pub obj: C::Obj,
    pub proj: C::Mor,
    /// `ev: Hom_B(E,F) ×_B E → F`.
    pub ev: C::Mor,
    pub ev_dom: FiberProduct<C>,
    pub source: C::Mor,
    pub target: C::Mor,
}

impl<C: Category> Clone for SliceHom<C> {
    fn clone(&self) -> Self {
        SliceHom {
            obj: self.obj.clone(),
            proj: self.proj.clone(),
            ev: self.ev.clone(),
            ev_dom: self.ev_dom.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
        }
    }
}

pub trait Lcc: Category + Sized {
    fn terminal(&self) -> Self::Obj;
    fn to_terminal(&self, x: &Self::Obj) -> Self::Mor;
    fn fiber_product(&self, f: &Self::Mor, p: &Self::Mor) -> Result<FiberProduct<Self>>;
    /// The unique `w` with `w∘pr1 = u` and `w∘pr2 = v`.
    fn fp_pair(&self, fp: &FiberProduct<Self>, u: &Self::Mor, v: &Self::Mor) -> Result<Self::Mor>;
    fn slice_hom(&self, p: &Self::Mor, q: &Self::Mor) -> Result<SliceHom<Self>>;
    /// `adj_inv`: from `g: A×_B E → F` over `B` (with `A` over `B` via
    /// `alpha`) to the corresponding `A → Hom_B(E,F)`.
    fn curry(&self, hom: &SliceHom<Self>, alpha: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
}

pub fn product<C: Lcc>(c: &C, x: &C::Obj, y: &C::Obj) -> Result<FiberProduct<C>> {
    c.fiber_product(&c.to_terminal(x), &c.to_terminal(y))
}

/// `adj(f) = (f×id)∘ev` for `f: A → Hom_B(E,F)`.
pub fn adj<C: Lcc>(c: &C, hom: &SliceHom<C>, f: &C::Mor) -> Result<C::Mor> {
    if c.cod(f) != hom.obj {
        return Err(Error::Shape("adj of a map not into the slice hom".into()));
    }
    let alpha = c.compose(f, &hom.proj)?;
    let fa = c.fiber_product(&alpha, &hom.source)?;
    let fx = c.fp_pair(&hom.ev_dom, &c.compose(&fa.pr1, f)?, &fa.pr2)?;
    c.compose(&fx, &hom.ev)
}

/// Inverse of [`adj`]; `alpha` is the structure map of the domain.
pub fn adj_inv<C: Lcc>(c: &C, hom: &SliceHom<C>, alpha: &C::Mor, g: &C::Mor) -> Result<C::Mor> {
    c.curry(hom, alpha, g)
}

/// `I_p(V) = Hom_U((Ũ,p),(U×V,pr1))`.
pub struct IpObject<C: Category> {
    pub v: C::Obj,
    pub prod: FiberProduct<C>,
    pub hom: SliceHom<C>,
}

impl<C: Category> Clone for IpObject<C> {
    fn clone(&self) -> Self {
        IpObject {
            v: self.v.clone(),
            prod: self.prod.clone(),
            hom: self.hom.clone(),
        }
    }
}

impl<C: Category> IpObject<C> {
    pub fn obj(&self) -> &C::Obj {
        &self.hom.obj
    }

    /// `prI_p(V): I_p(V) → U`.
    pub fn proj(&self) -> &C::Mor {
        &self.hom.proj
    }
}

pub fn i_p_obj<C: Lcc>(c: &C, p: &C::Mor, v: &C::Obj) -> Result<IpObject<C>> {
    let prod = product(c, &c.cod(p), v)?;
    let hom = c.slice_hom(p, &prod.pr1)?;
    Ok(IpObject {
        v: v.clone(),
        prod,
        hom,
    })
}

/// `I_p(f): I_p(V) → I_p(V′)`, postcomposition with `Id_U × f`.
pub fn i_p_mor<C: Lcc>(c: &C, p: &C::Mor, f: &C::Mor) -> Result<C::Mor> {
    let src = i_p_obj(c, p, &c.dom(f))?;
    let dst = i_p_obj(c, p, &c.cod(f))?;
    i_p_mor_between(c, &src, &dst, f)
}

/// `I_p(f)` with `I_p(dom f)` and `I_p(cod f)` already built.
pub fn i_p_mor_between<C: Lcc>(
    c: &C,
    src: &IpObject<C>,
    dst: &IpObject<C>,
    f: &C::Mor,
) -> Result<C::Mor> {
    let idf = c.fp_pair(&dst.prod, &src.prod.pr1, &c.compose(&src.prod.pr2, f)?)?;
    let g = c.compose(&src.hom.ev, &idf)?;
    c.curry(&dst.hom, src.proj(), &g)
}

/// `I^h(V): I_p(V) → I_{p′}(V)` for `h: Ũ′→Ũ` with `h∘p = p′`,
/// precomposition with `h`.
pub fn i_hom<C: Lcc>(c: &C, h: &C::Mor, p: &C::Mor, p2: &C::Mor, v: &C::Obj) -> Result<C::Mor> {
    if c.compose(h, p)? != *p2 {
        return Err(Error::NotOverBase("I^h needs h∘p = p′".into()));
    }
    let src = i_p_obj(c, p, v)?;
    let dst = i_p_obj(c, p2, v)?;
    let fa = c.fiber_product(src.proj(), p2)?;
    let idh = c.fp_pair(&src.hom.ev_dom, &fa.pr1, &c.compose(&fa.pr2, h)?)?;
    let g = c.compose(&idh, &src.hom.ev)?;
    c.curry(&dst.hom, src.proj(), &g)
}

/// An element `(F, a)` of `D_p(X,V)`: `F: X→U`, `a: (X;F)→V`.
pub struct DpElement<C: Category> {
    pub code: C::Mor,
    pub value: C::Mor,
}

impl<C: Category> Clone for DpElement<C> {
    fn clone(&self) -> Self {
        DpElement {
            code: self.code.clone(),
            value: self.value.clone(),
        }
    }
}

impl<C: Category> PartialEq for DpElement<C> {
    fn eq(&self, o: &Self) -> bool {
        self.code == o.code && self.value == o.value
    }
}

impl<C: Category> std::fmt::Debug for DpElement<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?})", self.code, self.value)
    }
}

impl<C: Category> DpElement<C> {
    pub fn new(u: &Universe<C>, code: C::Mor, value: C::Mor) -> Result<DpElement<C>> {
        let sq = u.ext(&code)?;
        if u.cat().dom(&value) != sq.apex {
            return Err(Error::Shape("D_p element value must start at (X;F)".into()));
        }
        Ok(DpElement { code, value })
    }

    pub fn base(&self, c: &C) -> C::Obj {
        c.dom(&self.code)
    }

    pub fn target(&self, c: &C) -> C::Obj {
        c.cod(&self.value)
    }
}

/// `D_p(f,V)(F,a) = (f∘F, Q(f,F)∘a)`.
pub fn d_p_act<C: Lcc>(u: &Universe<C>, f: &C::Mor, d: &DpElement<C>) -> Result<DpElement<C>> {
    let c = u.cat();
    let code = c.compose(f, &d.code)?;
    let value = c.compose(&u.q_of(f, &d.code)?, &d.value)?;
    Ok(DpElement { code, value })
}

/// `D_p(X,f)(F,a) = (F, a∘f)`.
pub fn d_p_map<C: Lcc>(u: &Universe<C>, d: &DpElement<C>, f: &C::Mor) -> Result<DpElement<C>> {
    Ok(DpElement {
        code: d.code.clone(),
        value: u.cat().compose(&d.value, f)?,
    })
}

/// `D^f(X,V): D_p(X,V) → D_{p′}(X,V)`, `(F,a) ↦ (F, F*(f)∘a)`, where
/// `f: Ũ′→Ũ` is over `U`, `u` is the universe `p` and `u2` is `p′`.
pub fn d_reindex<C: Lcc>(
    u: &Universe<C>,
    u2: &Universe<C>,
    f: &C::Mor,
    d: &DpElement<C>,
) -> Result<DpElement<C>> {
    let star = u.star(u2, &d.code, f)?;
    Ok(DpElement {
        code: d.code.clone(),
        value: u.cat().compose(&star, &d.value)?,
    })
}

/// Comparison `ι: (X;F) → X×_U Ũ` between the canonical square and the
/// chosen fiber product.
fn iota<C: Lcc>(u: &Universe<C>, code: &C::Mor) -> Result<(C::Mor, FiberProduct<C>)> {
    let c = u.cat();
    let sq = u.ext(code)?;
    let fp = c.fiber_product(code, u.p())?;
    Ok((c.fp_pair(&fp, &sq.proj, &sq.q)?, fp))
}

/// `st: (I_p(V);pr) → V`, the composite `ι∘ev∘pr_2`.
fn st<C: Lcc>(u: &Universe<C>, ip: &IpObject<C>) -> Result<C::Mor> {
    let c = u.cat();
    let (i, fp) = iota(u, ip.proj())?;
    debug_assert!(fp.apex == ip.hom.ev_dom.apex);
    c.chain(&[&i, &ip.hom.ev, &ip.prod.pr2])
}

/// `η: D_p(X,V) → Hom(X, I_p(V))`.
pub fn eta<C: Lcc>(u: &Universe<C>, d: &DpElement<C>, v: &C::Obj) -> Result<C::Mor> {
    let c = u.cat();
    if c.cod(&d.value) != *v {
        return Err(Error::Shape("η: value does not land in V".into()));
    }
    let ip = i_p_obj(c, u.p(), v)?;
    let fp = c.fiber_product(&d.code, u.p())?;
    let back = u.pair(&d.code, &fp.pr1, &fp.pr2)?;
    let g = c.fp_pair(
        &ip.prod,
        &c.compose(&fp.pr2, u.p())?,
        &c.compose(&back, &d.value)?,
    )?;
    c.curry(&ip.hom, &d.code, &g)
}

/// `η!(g) = (g∘pr, Q(g,pr)∘st)` for `g: X → I_p(V)`.
pub fn eta_bang<C: Lcc>(u: &Universe<C>, g: &C::Mor, v: &C::Obj) -> Result<DpElement<C>> {
    let c = u.cat();
    let ip = i_p_obj(c, u.p(), v)?;
    if c.cod(g) != *ip.obj() {
        return Err(Error::Shape("η!: map does not land in I_p(V)".into()));
    }
    let code = c.compose(g, ip.proj())?;
    let value = c.compose(&u.q_of(g, ip.proj())?, &st(u, &ip)?)?;
    Ok(DpElement { code, value })
}

pub const CHECK_ETA_ROUNDTRIP: &str = "lcc-eta-roundtrip";
pub const CHECK_ADJ_ROUNDTRIP: &str = "lcc-adj-roundtrip";
pub const CHECK_REINDEX_ETA: &str = "lcc-reindex-eta-square";
pub const CHECK_IHOM_NAT: &str = "lcc-ihom-naturality-square";

/// `η` and `η!` are mutually inverse, `adj` and `adj_inv` are mutually
/// inverse on `I_p(V)`, `η′(D^f(d)) = η(d)∘I^f(V)` and
/// `I^h(V)∘I_{p′}(f) = I_p(f)∘I^h(V′)`, for `X` and `V` among the first
/// `bound + 1` objects together with `U` and `Ũ`, and every `h` over `U`
/// between the total objects of `u` and `companions`.
pub fn check_lcc_laws<C: Lcc + FinCategory>(
    u: &Universe<C>,
    companions: &[Universe<C>],
    bound: usize,
) -> Vec<Check> {
    let c = u.cat();
    let xs: Vec<C::Obj> = c.objects().into_iter().take(bound + 1).collect();
    let mut vs = xs.clone();
    for v in [u.base(), u.total()] {
        if !vs.contains(&v) {
            vs.push(v);
        }
    }
    let mut all = vec![u.clone()];
    all.extend(companions.iter().cloned());

    let mut eta_t = Tally::new(CHECK_ETA_ROUNDTRIP);
    let mut adj_t = Tally::new(CHECK_ADJ_ROUNDTRIP);
    let r = (|| -> Result<()> {
        for w in &all {
            for v in &vs {
                let ip = i_p_obj(c, w.p(), v)?;
                for x in &xs {
                    for g in c.hom(x, ip.obj())? {
                        let d = eta_bang(w, &g, v)?;
                        eta_t.expect(eta(w, &d, v)? == g, || format!("η(η!(g)) ≠ g at {g:?}"));
                        let a = adj(c, &ip.hom, &g)?;
                        let alpha = c.compose(&g, ip.proj())?;
                        adj_t.expect(adj_inv(c, &ip.hom, &alpha, &a)? == g, || {
                            format!("adj_inv(adj(g)) ≠ g at {g:?}")
                        });
                    }
                    for code in c.hom(x, &w.base())? {
                        let fp = c.fiber_product(&code, &ip.hom.source)?;
                        for g in c.hom(&fp.apex, &ip.prod.apex)? {
                            if c.compose(&g, &ip.prod.pr1)? != c.compose(&fp.pr1, &code)? {
                                continue;
                            }
                            let f = adj_inv(c, &ip.hom, &code, &g)?;
                            adj_t.expect(adj(c, &ip.hom, &f)? == g, || {
                                format!("adj(adj_inv(g)) ≠ g at {g:?}")
                            });
                        }
                        let sq = w.ext(&code)?;
                        for value in c.hom(&sq.apex, v)? {
                            let d = DpElement {
                                code: code.clone(),
                                value,
                            };
                            let back = eta_bang(w, &eta(w, &d, v)?, v)?;
                            eta_t.expect(back == d, || format!("η!(η(d)) ≠ d at {d:?}"));
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        eta_t.fail(e.to_string());
    }

    let mut l4 = Tally::new(CHECK_REINDEX_ETA);
    let mut l2 = Tally::new(CHECK_IHOM_NAT);
    let r = (|| -> Result<()> {
        for a in &all {
            for b in &all {
                if a.base() != b.base() {
                    continue;
                }
                for h in c.hom(&b.total(), &a.total())? {
                    if c.compose(&h, a.p())? != *b.p() {
                        continue;
                    }
                    for v in &vs {
                        let ih = i_hom(c, &h, a.p(), b.p(), v)?;
                        for x in &xs {
                            for code in c.hom(x, &a.base())? {
                                let sq = a.ext(&code)?;
                                for value in c.hom(&sq.apex, v)? {
                                    let d = DpElement {
                                        code: code.clone(),
                                        value,
                                    };
                                    let lhs = eta(b, &d_reindex(a, b, &h, &d)?, v)?;
                                    let rhs = c.compose(&eta(a, &d, v)?, &ih)?;
                                    l4.expect(lhs == rhs, || {
                                        format!("η′(D^h(d)) ≠ η(d)∘I^h(V) at h = {h:?}, d = {d:?}")
                                    });
                                }
                            }
                        }
                        for v2 in &vs {
                            let ih2 = i_hom(c, &h, a.p(), b.p(), v2)?;
                            for f in c.hom(v, v2)? {
                                let lhs = c.compose(&ih, &i_p_mor(c, b.p(), &f)?)?;
                                let rhs = c.compose(&i_p_mor(c, a.p(), &f)?, &ih2)?;
                                l2.expect(lhs == rhs, || {
                                    format!("I^h(V)∘I_{{p′}}(f) ≠ I_p(f)∘I^h(V′) at h = {h:?}, f = {f:?}")
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        l4.fail(e.to_string());
    }
    vec![eta_t.finish(), adj_t.finish(), l4.finish(), l2.finish()]
}
