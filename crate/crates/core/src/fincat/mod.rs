//! Finite categories, functors, commutative squares and exhaustive
//! verification of category axioms and pullbacks.
//!
//! Composition is written in diagrammatic order throughout the crate:
//! `compose(f, g)` is "first `f`, then `g`".

mod table;

pub use table::TableCategory;

use crate::error::{Error, Result};
use crate::report::{Check, Tally};
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

pub trait Category: Send + Sync + 'static {
    type Obj: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static;
    type Mor: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn id(&self, x: &Self::Obj) -> Self::Mor;
    /// `f` then `g`.
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    /// Two-sided inverse, if `f` is an isomorphism.
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;

    /// Composite of a nonempty chain, left to right.
    fn chain(&self, fs: &[&Self::Mor]) -> Result<Self::Mor> {
        let (first, rest) = fs
            .split_first()
            .ok_or_else(|| Error::Shape("empty composition chain".into()))?;
        let mut acc = (*first).clone();
        for g in rest {
            acc = self.compose(&acc, g)?;
        }
        Ok(acc)
    }

    fn is_iso(&self, f: &Self::Mor) -> bool {
        self.inverse(f).is_some()
    }
}

/// A category whose verification enumerator and hom-sets are finite.
pub trait FinCategory: Category {
    /// Exhaustive object enumerator used only by verifiers.
    fn objects(&self) -> Vec<Self::Obj>;

    /// Test objects for cone enumeration in pullback checks.
    fn cone_objects(&self) -> Vec<Self::Obj> {
        self.objects()
    }

    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Vec<Self::Mor>>;

    /// All sections `s` of `p` (`s∘p = id`), in hom order.
    fn sections(&self, p: &Self::Mor) -> Result<Vec<Self::Mor>> {
        let b = self.cod(p);
        let idb = self.id(&b);
        let mut out = Vec::new();
        for s in self.hom(&b, &self.dom(p))? {
            if self.compose(&s, p)? == idb {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// Canonical solution of a lifting problem `i: Z→W`, `p: E→B`,
    /// `fz: Z→E`, `fw: W→B`: the first `g: W→E` in hom order with
    /// `i∘g = fz` and `g∘p = fw`.
    fn find_lift(
        &self,
        i: &Self::Mor,
        p: &Self::Mor,
        fz: &Self::Mor,
        fw: &Self::Mor,
    ) -> Result<Option<Self::Mor>> {
        lift_problem_commutes(self, i, p, fz, fw)?;
        for g in self.hom(&self.cod(i), &self.dom(p))? {
            if self.compose(i, &g)? == *fz && self.compose(&g, p)? == *fw {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

pub(crate) fn lift_problem_commutes<C: Category + ?Sized>(
    c: &C,
    i: &C::Mor,
    p: &C::Mor,
    fz: &C::Mor,
    fw: &C::Mor,
) -> Result<()> {
    if c.compose(fz, p)? != c.compose(i, fw)? {
        return Err(Error::NotCommuting("lifting problem: fz∘p ≠ i∘fw".into()));
    }
    Ok(())
}

/// ```text
///   A --top--> B
///   |          |
///  left      right
///   v          v
///   C -bottom-> D
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommSquare<M> {
    pub top: M,
    pub left: M,
    pub right: M,
    pub bottom: M,
}

impl<M> CommSquare<M> {
    pub fn new(top: M, left: M, right: M, bottom: M) -> Self {
        CommSquare {
            top,
            left,
            right,
            bottom,
        }
    }
}

pub fn commutes<C: Category + ?Sized>(c: &C, sq: &CommSquare<C::Mor>) -> Result<bool> {
    Ok(c.compose(&sq.top, &sq.right)? == c.compose(&sq.left, &sq.bottom)?)
}

/// True iff every commuting cone over the cospan of `sq` factors uniquely
/// through its apex, for every cone test object. A square that does not
/// commute is an error rather than `false`.
pub fn verify_pullback<C: FinCategory + ?Sized>(c: &C, sq: &CommSquare<C::Mor>) -> Result<bool> {
    if !commutes(c, sq)? {
        return Err(Error::NotCommuting(format!(
            "top∘right ≠ left∘bottom for square with apex {:?}",
            c.dom(&sq.top)
        )));
    }
    let apex = c.dom(&sq.top);
    let b = c.cod(&sq.top);
    let cc = c.cod(&sq.left);
    for w in c.cone_objects() {
        let hb = c.hom(&w, &b)?;
        let hc = c.hom(&w, &cc)?;
        let mut by_d: HashMap<C::Mor, usize> = HashMap::new();
        for u in &hb {
            *by_d.entry(c.compose(u, &sq.right)?).or_default() += 1;
        }
        let mut cones = 0usize;
        for v in &hc {
            cones += by_d.get(&c.compose(v, &sq.bottom)?).copied().unwrap_or(0);
        }
        let ha = c.hom(&w, &apex)?;
        if ha.len() != cones {
            return Ok(false);
        }
        let mut seen = std::collections::HashSet::new();
        for m in &ha {
            if !seen.insert((c.compose(m, &sq.top)?, c.compose(m, &sq.left)?)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Unit and associativity laws over the first `bound` enumerated objects.
pub fn check_category_axioms<C: FinCategory + ?Sized>(c: &C, bound: usize) -> Check {
    let mut t = Tally::new("category-axioms");
    let mut objs = c.objects();
    if objs.len() > bound {
        objs.truncate(bound);
        t.incomplete();
        t.note(format!("object enumeration truncated at {bound}"));
    }
    let n = objs.len();
    let mut homs: Vec<Vec<Vec<C::Mor>>> = Vec::with_capacity(n);
    for a in &objs {
        let mut row = Vec::with_capacity(n);
        for b in &objs {
            match c.hom(a, b) {
                Ok(h) => row.push(h),
                Err(e) => {
                    t.fail(format!("hom({a:?},{b:?}): {e}"));
                    row.push(Vec::new());
                }
            }
        }
        homs.push(row);
    }
    for (ia, a) in objs.iter().enumerate() {
        let ida = c.id(a);
        t.expect(c.dom(&ida) == *a && c.cod(&ida) == *a, || {
            format!("identity of {a:?} has wrong endpoints")
        });
        for (ib, b) in objs.iter().enumerate() {
            let idb = c.id(b);
            for f in &homs[ia][ib] {
                t.expect_res(c.compose(&ida, f).map(|g| g == *f), || {
                    format!("left unit fails for {f:?}")
                });
                t.expect_res(c.compose(f, &idb).map(|g| g == *f), || {
                    format!("right unit fails for {f:?}")
                });
            }
        }
    }
    for ia in 0..n {
        for ib in 0..n {
            if homs[ia][ib].is_empty() {
                continue;
            }
            for ic in 0..n {
                if homs[ib][ic].is_empty() {
                    continue;
                }
                let fg: Vec<Vec<Option<C::Mor>>> = homs[ia][ib]
                    .iter()
                    .map(|f| homs[ib][ic].iter().map(|g| c.compose(f, g).ok()).collect())
                    .collect();
                for id in 0..n {
                    let hs = &homs[ic][id];
                    if hs.is_empty() {
                        continue;
                    }
                    let gh: Vec<Vec<Option<C::Mor>>> = homs[ib][ic]
                        .iter()
                        .map(|g| hs.iter().map(|h| c.compose(g, h).ok()).collect())
                        .collect();
                    for (fi, f) in homs[ia][ib].iter().enumerate() {
                        for gi in 0..homs[ib][ic].len() {
                            for (hi, h) in hs.iter().enumerate() {
                                let lhs = fg[fi][gi].as_ref().and_then(|x| c.compose(x, h).ok());
                                let rhs = gh[gi][hi].as_ref().and_then(|x| c.compose(f, x).ok());
                                t.expect(lhs.is_some() && lhs == rhs, || {
                                    format!(
                                        "associativity fails for ({f:?}, {:?}, {h:?})",
                                        homs[ib][ic][gi]
                                    )
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

/// True iff every enumerated object has exactly one morphism to `x`.
pub fn is_final<C: FinCategory + ?Sized>(c: &C, x: &C::Obj) -> bool {
    c.objects()
        .iter()
        .all(|y| matches!(c.hom(y, x), Ok(h) if h.len() == 1))
}

pub trait Functor<C: Category, D: Category>: Send + Sync {
    fn obj(&self, x: &C::Obj) -> D::Obj;
    fn mor(&self, f: &C::Mor) -> D::Mor;
}

/// The identity functor of any category.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityFunctor;

impl<C: Category> Functor<C, C> for IdentityFunctor {
    fn obj(&self, x: &C::Obj) -> C::Obj {
        x.clone()
    }
    fn mor(&self, f: &C::Mor) -> C::Mor {
        f.clone()
    }
}

/// Identity, endpoint and composition preservation over the source
/// enumerator, plus pullback preservation for the designated squares.
pub fn check_functor<C, D, F>(src: &C, dst: &D, fun: &F, squares: &[CommSquare<C::Mor>]) -> Check
where
    C: FinCategory,
    D: FinCategory,
    F: Functor<C, D> + ?Sized,
{
    let mut t = Tally::new("functor-laws");
    let objs = src.objects();
    let mut homs = Vec::new();
    for a in &objs {
        t.expect(fun.mor(&src.id(a)) == dst.id(&fun.obj(a)), || {
            format!("identity of {a:?} not preserved")
        });
        let mut row = Vec::new();
        for b in &objs {
            let h = src.hom(a, b).unwrap_or_default();
            for f in &h {
                let ff = fun.mor(f);
                t.expect(
                    dst.dom(&ff) == fun.obj(a) && dst.cod(&ff) == fun.obj(b),
                    || format!("endpoints of {f:?} not preserved"),
                );
            }
            row.push(h);
        }
        homs.push(row);
    }
    let n = objs.len();
    for ia in 0..n {
        for ib in 0..n {
            for ic in 0..n {
                for f in &homs[ia][ib] {
                    for g in &homs[ib][ic] {
                        let lhs = src.compose(f, g).map(|fg| fun.mor(&fg));
                        let rhs = dst.compose(&fun.mor(f), &fun.mor(g));
                        t.expect(matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b), || {
                            format!("composition of ({f:?}, {g:?}) not preserved")
                        });
                    }
                }
            }
        }
    }
    for sq in squares {
        let img = CommSquare::new(
            fun.mor(&sq.top),
            fun.mor(&sq.left),
            fun.mor(&sq.right),
            fun.mor(&sq.bottom),
        );
        t.expect_res(verify_pullback(dst, &img), || {
            format!(
                "image of square at {:?} is not a pullback",
                src.dom(&sq.top)
            )
        });
    }
    t.finish()
}
