//! Deliberately broken structures, one per checker, used to confirm that
//! each check reports its own id when its property fails.

use crate::csystem::CSystem;
use crate::error::{Error, Result};
use crate::fincat::{CommSquare, Functor, TableCategory};
use crate::finset::{FinMor, FinSet, Val};
use crate::jcs::{jdom_enum, JBundle, JdomEntry, PatchedJ1, PatchedJ2};
use crate::juniv::UnivJ;
use crate::models::Fixture;
use std::sync::Arc;

/// Free category on `a: 0→1`, `b, c: 1→2`, `d: 2→3` with `a∘b` set to `a∘c`.
/// Exactly one associativity triple, `(a, b, d)`, fails.
pub fn corrupted_category() -> Result<TableCategory> {
    let mut c =
        TableCategory::free_on_graph(4, &[(0, 1, "a"), (1, 2, "b"), (1, 2, "c"), (2, 3, "d")])?;
    let arrow = |c: &TableCategory, n: &str| {
        c.arrow(n)
            .ok_or_else(|| Error::Shape(format!("no arrow {n}")))
    };
    let (a, b, ac) = (arrow(&c, "a")?, arrow(&c, "b")?, arrow(&c, "ac")?);
    c.corrupt(a, b, ac)?;
    Ok(c)
}

/// The graph `a: 0→1`, `b, c: 1→2` with the commuting square of `a∘b`.
pub fn parallel_category() -> Result<(TableCategory, Vec<CommSquare<usize>>)> {
    let c = TableCategory::free_on_graph(3, &[(0, 1, "a"), (1, 2, "b"), (1, 2, "c")])?;
    let n = |s: &str| {
        c.arrow(s)
            .ok_or_else(|| Error::Shape(format!("no arrow {s}")))
    };
    let sq = CommSquare::new(n("a")?, n("id0")?, n("b")?, n("ab")?);
    Ok((c, vec![sq]))
}

/// The identity functor except that one morphism goes to `to`.
pub struct WrongImage {
    pub at: usize,
    pub to: usize,
}

impl Functor<TableCategory, TableCategory> for WrongImage {
    fn obj(&self, x: &usize) -> usize {
        *x
    }
    fn mor(&self, f: &usize) -> usize {
        if *f == self.at {
            self.to
        } else {
            *f
        }
    }
}

/// A C-system with `ft` replaced at one object.
pub struct CorruptFt<S: CSystem> {
    pub inner: Arc<S>,
    pub at: S::Obj,
    pub value: S::Obj,
}

impl<S: CSystem> CSystem for CorruptFt<S> {
    type Obj = S::Obj;
    type Mor = S::Mor;

    fn length(&self, x: &S::Obj) -> usize {
        self.inner.length(x)
    }
    fn pt(&self) -> S::Obj {
        self.inner.pt()
    }
    fn ft(&self, x: &S::Obj) -> S::Obj {
        if *x == self.at {
            self.value.clone()
        } else {
            self.inner.ft(x)
        }
    }
    fn proj(&self, x: &S::Obj) -> Result<S::Mor> {
        self.inner.proj(x)
    }
    fn base_change(&self, f: &S::Mor, x: &S::Obj) -> Result<(S::Obj, S::Mor)> {
        self.inner.base_change(f, x)
    }
    fn q_pair(&self, f: &S::Mor, x: &S::Obj, a: &S::Mor, b: &S::Mor) -> Result<S::Mor> {
        self.inner.q_pair(f, x, a, b)
    }
    fn dom(&self, f: &S::Mor) -> S::Obj {
        self.inner.dom(f)
    }
    fn cod(&self, f: &S::Mor) -> S::Obj {
        self.inner.cod(f)
    }
    fn id(&self, x: &S::Obj) -> S::Mor {
        self.inner.id(x)
    }
    fn compose(&self, f: &S::Mor, g: &S::Mor) -> Result<S::Mor> {
        self.inner.compose(f, g)
    }
    fn objects_over(&self, x: &S::Obj) -> Result<Vec<S::Obj>> {
        self.inner.objects_over(x)
    }
    fn hom(&self, a: &S::Obj, b: &S::Obj) -> Result<Vec<S::Mor>> {
        self.inner.hom(a, b)
    }
    fn sections(&self, x: &S::Obj) -> Result<Vec<S::Mor>> {
        self.inner.sections(x)
    }
}

/// `ft` of the first length-2 object replaced by another length-1 object.
pub fn corrupt_ft<S: CSystem>(cs: Arc<S>) -> Result<CorruptFt<S>> {
    let ones = cs.objects_over(&cs.pt())?;
    for g in &ones {
        if let Some(x) = cs.objects_over(g)?.into_iter().next() {
            if let Some(other) = ones.iter().find(|o| *o != g) {
                return Ok(CorruptFt {
                    at: x,
                    value: other.clone(),
                    inner: cs,
                });
            }
        }
    }
    Err(Error::Shape(
        "no length-2 object with a second length-1 object".into(),
    ))
}

/// `J` changed, at the first entry with a choice, to a different section.
pub fn tweak_j<S: CSystem + 'static>(
    cs: &S,
    b: &JBundle<S>,
    bound: usize,
) -> Result<(JBundle<S>, JdomEntry<S>)> {
    let j =
        b.j.clone()
            .ok_or_else(|| Error::Shape("bundle has no J2-structure".into()))?;
    for e in jdom_enum(cs, b, bound)? {
        let v = j.j(cs, &e)?;
        if let Some(w) = cs.sections(&e.p)?.into_iter().find(|w| *w != v) {
            let mut out = b.clone();
            out.j = Some(Arc::new(PatchedJ2 {
                inner: j,
                at: e.clone(),
                value: w,
            }));
            return Ok((out, e));
        }
    }
    Err(Error::Shape("no Jdom entry admits a second section".into()))
}

/// `refl` changed at the first section `o` for which another section of
/// some object over `Γ.T` exists.
pub fn mismatched_refl<S: CSystem + 'static>(
    cs: &S,
    b: &JBundle<S>,
    bound: usize,
) -> Result<JBundle<S>> {
    for g in crate::csystem::objects(cs, bound)? {
        for t in cs.objects_over(&g)? {
            for o in cs.sections(&t)? {
                let r = b.refl.refl(cs, &o)?;
                let target = cs.cod(&r);
                if let Some(w) = cs.sections(&target)?.into_iter().find(|w| *w != r) {
                    let mut out = b.clone();
                    out.refl = Arc::new(PatchedJ1 {
                        inner: b.refl.clone(),
                        at: o,
                        value: w,
                    });
                    return Ok(out);
                }
                for other in cs.objects_over(&cs.dom(&r))? {
                    if other == target {
                        continue;
                    }
                    if let Some(w) = cs.sections(&other)?.into_iter().next() {
                        let mut out = b.clone();
                        out.refl = Arc::new(PatchedJ1 {
                            inner: b.refl.clone(),
                            at: o,
                            value: w,
                        });
                        return Ok(out);
                    }
                }
            }
        }
    }
    Err(Error::Shape("no section admits a different refl".into()))
}

/// `Ω` replaced by the constant map at `to`, which breaks `Δ∘Eq = Ω∘p`
/// unless `to` lies over the code `Eq` assigns to the diagonal.
pub fn constant_omega(fx: &Fixture, b: &UnivJ<FinSet>, to: &Val) -> Result<UnivJ<FinSet>> {
    let ut = fx.ut();
    let omega = fx.cat.constant(&ut, &ut, to)?;
    Ok(UnivJ { omega, ..b.clone() })
}

/// `Jp` with the images of two points of `Fp` exchanged.
pub fn permuted_jp(b: &UnivJ<FinSet>) -> Result<UnivJ<FinSet>> {
    let jp: &FinMor = &b.jp;
    let t = jp.table();
    for i in 0..t.len() {
        for k in i + 1..t.len() {
            if t[i] != t[k] {
                let mut map = t.to_vec();
                map.swap(i, k);
                let jp = FinSet::default().from_table(jp.dom(), jp.cod(), map)?;
                return Ok(UnivJ { jp, ..b.clone() });
            }
        }
    }
    Err(Error::Shape("Jp is constant".into()))
}
