//! C-systems: graded objects with `ft`, canonical projections and base
//! change, and the derived operations `p_{Γ,n}`, `s_f`, `δ(T)` and the
//! iterated pullbacks `f*(X,i)`, `f*(s,i)`.

use crate::error::{Error, Result};
use crate::report::{Check, Tally};
use std::fmt::Debug;
use std::hash::Hash;

pub trait CSystem: Send + Sync {
    type Obj: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static;
    type Mor: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static;

    fn length(&self, x: &Self::Obj) -> usize;
    fn pt(&self) -> Self::Obj;
    /// `ft(pt) = pt`.
    fn ft(&self, x: &Self::Obj) -> Self::Obj;
    /// `p_X: X → ft(X)`, for `l(X) ≥ 1`.
    fn proj(&self, x: &Self::Obj) -> Result<Self::Mor>;
    /// `(f*(X), q(f,X))` for `f: Y → ft(X)`.
    fn base_change(&self, f: &Self::Mor, x: &Self::Obj) -> Result<(Self::Obj, Self::Mor)>;
    /// The map `m: W → f*(X)` with `m∘p = a` and `m∘q(f,X) = b`.
    fn q_pair(
        &self,
        f: &Self::Mor,
        x: &Self::Obj,
        a: &Self::Mor,
        b: &Self::Mor,
    ) -> Result<Self::Mor>;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn id(&self, x: &Self::Obj) -> Self::Mor;
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;

    /// `Ob_1(X)`: the objects `Y` with `ft(Y) = X`.
    fn objects_over(&self, x: &Self::Obj) -> Result<Vec<Self::Obj>>;
    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Vec<Self::Mor>>;
    /// `Õb(X)`: the sections of `p_X`.
    fn sections(&self, x: &Self::Obj) -> Result<Vec<Self::Mor>>;

    /// Whether the q-square of `f*(X)` is a pullback, when decidable.
    fn q_square_is_pullback(&self, _f: &Self::Mor, _x: &Self::Obj) -> Option<Result<bool>> {
        None
    }
}

/// All objects of length `≤ max_len`, by length, then in enumeration order.
pub fn objects<S: CSystem + ?Sized>(cs: &S, max_len: usize) -> Result<Vec<S::Obj>> {
    let mut out = vec![cs.pt()];
    let mut layer = vec![cs.pt()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for x in &layer {
            next.extend(cs.objects_over(x)?);
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

pub fn ft_n<S: CSystem + ?Sized>(cs: &S, x: &S::Obj, n: usize) -> S::Obj {
    let mut y = x.clone();
    for _ in 0..n {
        y = cs.ft(&y);
    }
    y
}

/// `p_{Γ,n}: Γ → ft^n(Γ)`.
pub fn proj_n<S: CSystem + ?Sized>(cs: &S, x: &S::Obj, n: usize) -> Result<S::Mor> {
    if n > cs.length(x) {
        return Err(Error::Shape(format!(
            "p_{{Γ,{n}}} for an object of length {}",
            cs.length(x)
        )));
    }
    let mut m = cs.id(x);
    let mut y = x.clone();
    for _ in 0..n {
        m = cs.compose(&m, &cs.proj(&y)?)?;
        y = cs.ft(&y);
    }
    Ok(m)
}

pub fn is_section<S: CSystem + ?Sized>(cs: &S, s: &S::Mor) -> Result<bool> {
    let x = cs.cod(s);
    if cs.length(&x) == 0 || cs.dom(s) != cs.ft(&x) {
        return Ok(false);
    }
    Ok(cs.compose(s, &cs.proj(&x)?)? == cs.id(&cs.dom(s)))
}

/// `∂(s)`.
pub fn boundary<S: CSystem + ?Sized>(cs: &S, s: &S::Mor) -> S::Obj {
    cs.cod(s)
}

/// `s_f ∈ Õb((f∘p_Γ)*(Γ))` for `f: A → Γ`: the map with `s_f∘p = id`
/// and `s_f∘q(f∘p_Γ, Γ) = f`.
pub fn s_of<S: CSystem + ?Sized>(cs: &S, f: &S::Mor) -> Result<S::Mor> {
    let g = cs.cod(f);
    if cs.length(&g) == 0 {
        return Err(Error::Shape("s_f needs a target of positive length".into()));
    }
    let a = cs.dom(f);
    let fp = cs.compose(f, &cs.proj(&g)?)?;
    cs.q_pair(&fp, &g, &cs.id(&a), f)
}

/// `δ(T) = s_{Id_T}: T → p_T*(T)`.
pub fn delta<S: CSystem + ?Sized>(cs: &S, t: &S::Obj) -> Result<S::Mor> {
    s_of(cs, &cs.id(t))
}

/// `f*(s) = s_{f∘s} ∈ Õb(f*(∂s))` for `f: Y → ft(∂s)`.
pub fn pullback_section1<S: CSystem + ?Sized>(cs: &S, f: &S::Mor, s: &S::Mor) -> Result<S::Mor> {
    s_of(cs, &cs.compose(f, s)?)
}

/// `f*(X,i)` for `f: Y → Γ` and `ft^i(X) = Γ`.
pub fn pullback_obj<S: CSystem + ?Sized>(
    cs: &S,
    f: &S::Mor,
    x: &S::Obj,
    i: usize,
) -> Result<S::Obj> {
    Ok(cs.dom(&pullback_q(cs, f, x, i)?))
}

/// `q(f,X,i): f*(X,i) → X`; `q(f,X,0) = f`.
pub fn pullback_q<S: CSystem + ?Sized>(cs: &S, f: &S::Mor, x: &S::Obj, i: usize) -> Result<S::Mor> {
    if cs.length(x) < i || ft_n(cs, x, i) != cs.cod(f) {
        return Err(Error::Shape(format!(
            "f*(X,{i}): X is not at depth {i} over the target of f"
        )));
    }
    if i == 0 {
        return Ok(f.clone());
    }
    let below = pullback_q(cs, f, &cs.ft(x), i - 1)?;
    Ok(cs.base_change(&below, x)?.1)
}

/// `f*(s,i)` for a section `s` with `∂(s)` at depth `i ≥ 1` over the
/// target of `f`.
pub fn pullback_section<S: CSystem + ?Sized>(
    cs: &S,
    f: &S::Mor,
    s: &S::Mor,
    i: usize,
) -> Result<S::Mor> {
    if i == 0 {
        return Err(Error::Shape("sections are pulled back at depth ≥ 1".into()));
    }
    let x = cs.cod(s);
    let below = pullback_q(cs, f, &cs.ft(&x), i - 1)?;
    pullback_section1(cs, &below, s)
}

pub const CHECK_CSYSTEM_AXIOMS: &str = "csystem-axioms";
pub const CHECK_CSYSTEM_DERIVED: &str = "csystem-derived";

/// Length/ft laws for objects of length `≤ bound`; base change along
/// every `f: Γ′ → ft(Γ)` with `l(Γ′) ≤ bound−1`; unit and composition
/// laws of base change along `g: Γ″ → Γ′` with `l(Γ″) ≤ bound−2`.
pub fn check_csystem_axioms<S: CSystem + ?Sized>(cs: &S, bound: usize) -> Check {
    let mut t = Tally::new(CHECK_CSYSTEM_AXIOMS);
    let objs = match objects(cs, bound) {
        Ok(o) => o,
        Err(e) => {
            t.fail(format!("object enumeration: {e}"));
            t.incomplete();
            return t.finish();
        }
    };
    let pt = cs.pt();
    t.expect(cs.length(&pt) == 0 && cs.ft(&pt) == pt, || {
        "l(pt) = 0 and ft(pt) = pt fail".into()
    });
    for x in &objs {
        let n = cs.length(x);
        if n == 0 {
            t.expect(*x == pt, || format!("{x:?} has length 0 but is not pt"));
            continue;
        }
        let fx = cs.ft(x);
        t.expect(cs.length(&fx) + 1 == n, || format!("l(ft {x:?}) ≠ l − 1"));
        t.expect_res(
            cs.proj(x).map(|p| cs.dom(&p) == *x && cs.cod(&p) == fx),
            || format!("p_X has the wrong endpoints at {x:?}"),
        );
    }
    let sources: Vec<&S::Obj> = objs.iter().filter(|y| cs.length(y) + 1 <= bound).collect();
    let inner: Vec<&S::Obj> = objs.iter().filter(|y| cs.length(y) + 2 <= bound).collect();
    for x in objs.iter().filter(|x| cs.length(x) >= 1) {
        let fx = cs.ft(x);
        if let Err(e) = base_change_laws(cs, x, &fx, &sources, &inner, &mut t) {
            t.fail(format!("at {x:?}: {e}"));
        }
    }
    t.note(format!("{} objects of length ≤ {bound}", objs.len()));
    t.finish()
}

fn base_change_laws<S: CSystem + ?Sized>(
    cs: &S,
    x: &S::Obj,
    fx: &S::Obj,
    sources: &[&S::Obj],
    inner: &[&S::Obj],
    t: &mut Tally,
) -> Result<()> {
    let px = cs.proj(x)?;
    let (idx, idq) = cs.base_change(&cs.id(fx), x)?;
    t.expect(idx == *x, || format!("id*(X) ≠ X at {x:?}"));
    t.expect(idq == cs.id(x), || format!("q(id,X) ≠ id at {x:?}"));
    for y in sources {
        for f in cs.hom(y, fx)? {
            let (fx_star, q) = cs.base_change(&f, x)?;
            t.expect(cs.ft(&fx_star) == **y, || {
                format!("ft(f*X) ≠ Y for f = {f:?}")
            });
            t.expect(cs.length(&fx_star) == cs.length(y) + 1, || {
                format!("l(f*X) ≠ l(Y)+1 for f = {f:?}")
            });
            t.expect(cs.dom(&q) == fx_star && cs.cod(&q) == *x, || {
                format!("q(f,X) has the wrong endpoints for f = {f:?}")
            });
            let lhs = cs.compose(&q, &px)?;
            let rhs = cs.compose(&cs.proj(&fx_star)?, &f)?;
            t.expect(lhs == rhs, || {
                format!("q(f,X)∘p_X ≠ p_{{f*X}}∘f for f = {f:?}")
            });
            if let Some(r) = cs.q_square_is_pullback(&f, x) {
                t.expect_res(r, || format!("q-square of f = {f:?} is not a pullback"));
            }
            for z in inner {
                for g in cs.hom(z, y)? {
                    let gf = cs.compose(&g, &f)?;
                    let (a, qa) = cs.base_change(&gf, x)?;
                    let (b, qb) = cs.base_change(&g, &fx_star)?;
                    t.expect(a == b, || {
                        format!("(g∘f)*X ≠ g*(f*X) for g = {g:?}, f = {f:?}")
                    });
                    t.expect(qa == cs.compose(&qb, &q)?, || {
                        format!("q(g∘f,X) ≠ q(g,f*X)∘q(f,X) for g = {g:?}, f = {f:?}")
                    });
                }
            }
        }
    }
    Ok(())
}

/// `δ(T)` and `s_f` laws: `δ(T)∘p = id`, `δ(T)∘q(p_T,T) = id`,
/// `s_s = s` for sections, and `f*(δ(T)) = s_f` for `f: Y → T`.
pub fn check_csystem_derived<S: CSystem + ?Sized>(cs: &S, bound: usize) -> Check {
    let mut t = Tally::new(CHECK_CSYSTEM_DERIVED);
    let objs = match objects(cs, bound) {
        Ok(o) => o,
        Err(e) => {
            t.fail(format!("object enumeration: {e}"));
            return t.finish();
        }
    };
    for x in objs.iter().filter(|x| cs.length(x) >= 1) {
        if let Err(e) = derived_at(cs, x, &objs, bound, &mut t) {
            t.fail(format!("at {x:?}: {e}"));
        }
    }
    t.finish()
}

fn derived_at<S: CSystem + ?Sized>(
    cs: &S,
    x: &S::Obj,
    objs: &[S::Obj],
    bound: usize,
    t: &mut Tally,
) -> Result<()> {
    let d = delta(cs, x)?;
    let px = cs.proj(x)?;
    let (ptx, qp) = cs.base_change(&px, x)?;
    t.expect(cs.cod(&d) == ptx, || {
        format!("δ(T) does not land in p_T*(T) at {x:?}")
    });
    t.expect_res(is_section(cs, &d), || format!("δ(T)∘p ≠ id at {x:?}"));
    t.expect(cs.compose(&d, &qp)? == cs.id(x), || {
        format!("δ(T)∘q(p_T,T) ≠ id at {x:?}")
    });
    if cs.length(x) + 1 <= bound {
        for s in cs.sections(x)? {
            t.expect(s_of(cs, &s)? == s, || format!("s_s ≠ s for {s:?}"));
        }
    }
    for y in objs.iter().filter(|y| cs.length(y) + 1 <= bound) {
        for f in cs.hom(y, x)? {
            let lhs = pullback_section1(cs, &f, &d)?;
            t.expect(lhs == s_of(cs, &f)?, || {
                format!("f*(δ(T)) ≠ s_f for f = {f:?}")
            });
        }
    }
    Ok(())
}

/// Structure-preserving assignment between C-systems.
pub trait CsHom<S: CSystem, T: CSystem>: Send + Sync {
    fn obj(&self, x: &S::Obj) -> Result<T::Obj>;
    fn mor(&self, f: &S::Mor) -> Result<T::Mor>;
}

pub struct IdentityHom;

impl<S: CSystem> CsHom<S, S> for IdentityHom {
    fn obj(&self, x: &S::Obj) -> Result<S::Obj> {
        Ok(x.clone())
    }
    fn mor(&self, f: &S::Mor) -> Result<S::Mor> {
        Ok(f.clone())
    }
}

pub const CHECK_CSYSTEM_HOM: &str = "csystem-homomorphism";

/// Preservation of `l`, `pt`, `ft`, `p_X`, base change with `q`,
/// identities and composition of morphisms, for sources of length
/// `≤ bound`.
pub fn check_csystem_hom<S, T, H>(src: &S, dst: &T, h: &H, bound: usize) -> Check
where
    S: CSystem,
    T: CSystem,
    H: CsHom<S, T> + ?Sized,
{
    let mut t = Tally::new(CHECK_CSYSTEM_HOM);
    let run = |t: &mut Tally| -> Result<()> {
        t.expect(h.obj(&src.pt())? == dst.pt(), || "H(pt) ≠ pt".into());
        let objs = objects(src, bound)?;
        for x in &objs {
            let hx = h.obj(x)?;
            t.expect(dst.length(&hx) == src.length(x), || {
                format!("l(H {x:?}) ≠ l")
            });
            t.expect(h.mor(&src.id(x))? == dst.id(&hx), || {
                format!("H(id) ≠ id at {x:?}")
            });
            if src.length(x) == 0 {
                continue;
            }
            let fx = src.ft(x);
            t.expect(dst.ft(&hx) == h.obj(&fx)?, || {
                format!("H(ft X) ≠ ft(H X) at {x:?}")
            });
            t.expect(h.mor(&src.proj(x)?)? == dst.proj(&hx)?, || {
                format!("H(p_X) ≠ p_{{H X}} at {x:?}")
            });
            for y in objs.iter().filter(|y| src.length(y) < bound) {
                for f in src.hom(y, &fx)? {
                    let hf = h.mor(&f)?;
                    let (a, qa) = src.base_change(&f, x)?;
                    let (b, qb) = dst.base_change(&hf, &hx)?;
                    t.expect(h.obj(&a)? == b, || {
                        format!("H(f*X) ≠ H(f)*(H X) for f = {f:?}")
                    });
                    t.expect(h.mor(&qa)? == qb, || {
                        format!("H(q(f,X)) ≠ q(H f, H X) for f = {f:?}")
                    });
                    let qp = src.compose(&qa, &src.proj(x)?)?;
                    let hqp = dst.compose(&h.mor(&qa)?, &h.mor(&src.proj(x)?)?)?;
                    t.expect(h.mor(&qp)? == hqp, || {
                        format!("H(q∘p_X) ≠ H(q)∘H(p_X) for f = {f:?}")
                    });
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut t) {
        t.fail(e.to_string());
    }
    t.finish()
}
