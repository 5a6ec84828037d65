//! The C-system `CC(C,p)` of a universe category: objects are code
//! sequences `(F_1,…,F_n)` with `int(Γ,F) = (int(Γ);F)`, morphisms are
//! morphisms between the `int` objects.

use crate::csystem::CSystem;
use crate::error::{Error, Result};
use crate::fincat::{verify_pullback, Category, CommSquare, FinCategory};
use crate::finset::{FinMor, FinSet, Val};
use crate::lcc::Lcc;
use crate::universe::Universe;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub struct CcObj<C: Category> {
    codes: Arc<[C::Mor]>,
    /// `ints[k]` is `int` of the prefix of length `k`.
    ints: Arc<[C::Obj]>,
}

impl<C: Category> Clone for CcObj<C> {
    fn clone(&self) -> Self {
        CcObj {
            codes: self.codes.clone(),
            ints: self.ints.clone(),
        }
    }
}

impl<C: Category> PartialEq for CcObj<C> {
    fn eq(&self, o: &Self) -> bool {
        self.codes == o.codes
    }
}

impl<C: Category> Eq for CcObj<C> {}

impl<C: Category> Hash for CcObj<C> {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.codes.hash(h)
    }
}

impl<C: Category> PartialOrd for CcObj<C> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<C: Category> Ord for CcObj<C> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.codes
            .len()
            .cmp(&o.codes.len())
            .then_with(|| self.codes.cmp(&o.codes))
    }
}

impl<C: Category> fmt::Debug for CcObj<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CC{:?}", &self.codes[..])
    }
}

impl<C: Category> CcObj<C> {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[C::Mor] {
        &self.codes
    }

    pub fn int(&self) -> &C::Obj {
        &self.ints[self.codes.len()]
    }

    pub fn last(&self) -> Option<&C::Mor> {
        self.codes.last()
    }

    pub fn prefix(&self, n: usize) -> CcObj<C> {
        CcObj {
            codes: self.codes[..n].into(),
            ints: self.ints[..=n].into(),
        }
    }
}

pub struct CcMor<C: Category> {
    pub dom: CcObj<C>,
    pub cod: CcObj<C>,
    pub mor: C::Mor,
}

impl<C: Category> Clone for CcMor<C> {
    fn clone(&self) -> Self {
        CcMor {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            mor: self.mor.clone(),
        }
    }
}

impl<C: Category> PartialEq for CcMor<C> {
    fn eq(&self, o: &Self) -> bool {
        self.mor == o.mor && self.dom == o.dom && self.cod == o.cod
    }
}

impl<C: Category> Eq for CcMor<C> {}

impl<C: Category> Hash for CcMor<C> {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.mor.hash(h);
        self.dom.hash(h);
        self.cod.hash(h);
    }
}

impl<C: Category> PartialOrd for CcMor<C> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<C: Category> Ord for CcMor<C> {
    fn cmp(&self, o: &Self) -> Ordering {
        (&self.dom, &self.cod, &self.mor).cmp(&(&o.dom, &o.cod, &o.mor))
    }
}

impl<C: Category> fmt::Debug for CcMor<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.mor)
    }
}

/// `CC(C,p)`.
pub struct Cc<C: Lcc> {
    u: Universe<C>,
}

impl<C: Lcc> Clone for Cc<C> {
    fn clone(&self) -> Self {
        Cc { u: self.u.clone() }
    }
}

pub fn build_cc<C: Lcc>(u: &Universe<C>) -> Cc<C> {
    Cc { u: u.clone() }
}

impl<C: Lcc> Cc<C> {
    pub fn universe(&self) -> &Universe<C> {
        &self.u
    }

    pub fn cat(&self) -> &C {
        self.u.cat()
    }

    pub fn root(&self) -> CcObj<C> {
        CcObj {
            codes: Arc::from(Vec::new()),
            ints: Arc::from(vec![self.cat().terminal()]),
        }
    }

    /// `(Γ,F)` for `F: int(Γ) → U`.
    pub fn extend(&self, g: &CcObj<C>, f: &C::Mor) -> Result<CcObj<C>> {
        let c = self.cat();
        if c.dom(f) != *g.int() {
            return Err(Error::Shape(format!(
                "code {f:?} is not a family over int(Γ)"
            )));
        }
        let sq = self.u.ext(f)?;
        let mut codes = g.codes.to_vec();
        codes.push(f.clone());
        let mut ints = g.ints.to_vec();
        ints.push(sq.apex);
        Ok(CcObj {
            codes: codes.into(),
            ints: ints.into(),
        })
    }

    pub fn from_codes(&self, codes: &[C::Mor]) -> Result<CcObj<C>> {
        let mut g = self.root();
        for f in codes {
            g = self.extend(&g, f)?;
        }
        Ok(g)
    }

    pub fn mor(&self, dom: &CcObj<C>, cod: &CcObj<C>, m: C::Mor) -> Result<CcMor<C>> {
        let c = self.cat();
        if c.dom(&m) != *dom.int() || c.cod(&m) != *cod.int() {
            return Err(Error::Shape(format!(
                "{m:?} is not a morphism int({dom:?}) → int({cod:?})"
            )));
        }
        Ok(CcMor {
            dom: dom.clone(),
            cod: cod.clone(),
            mor: m,
        })
    }

    /// `u_1(T)`: the last code of `T`.
    pub fn u1(&self, t: &CcObj<C>) -> Result<C::Mor> {
        t.last()
            .cloned()
            .ok_or_else(|| Error::Shape("u_1 of the empty context".into()))
    }

    /// `u_1⁻¹(F) = (Γ,F)`.
    pub fn u1_inv(&self, g: &CcObj<C>, f: &C::Mor) -> Result<CcObj<C>> {
        self.extend(g, f)
    }

    /// `ũ_1(s) = s∘Q(u_1(∂(s)))`.
    pub fn u1_tilde(&self, s: &CcMor<C>) -> Result<C::Mor> {
        let f = self.u1(&s.cod)?;
        let sq = self.u.ext(&f)?;
        self.cat().compose(&s.mor, &sq.q)
    }

    /// `ũ_1⁻¹(H)`: the section `Id*H` of `(Γ, H∘p)`.
    pub fn u1_tilde_inv(&self, g: &CcObj<C>, h: &C::Mor) -> Result<CcMor<C>> {
        let c = self.cat();
        let code = c.compose(h, self.u.p())?;
        let t = self.extend(g, &code)?;
        let s = self.u.pair(&code, &c.id(g.int()), h)?;
        self.mor(g, &t, s)
    }
}

impl<C: Lcc + FinCategory> CSystem for Cc<C> {
    type Obj = CcObj<C>;
    type Mor = CcMor<C>;

    fn length(&self, x: &CcObj<C>) -> usize {
        x.len()
    }

    fn pt(&self) -> CcObj<C> {
        self.root()
    }

    fn ft(&self, x: &CcObj<C>) -> CcObj<C> {
        x.prefix(x.len().saturating_sub(1))
    }

    fn proj(&self, x: &CcObj<C>) -> Result<CcMor<C>> {
        let f = self.u1(x)?;
        let sq = self.u.ext(&f)?;
        Ok(CcMor {
            dom: x.clone(),
            cod: self.ft(x),
            mor: sq.proj,
        })
    }

    fn base_change(&self, f: &CcMor<C>, x: &CcObj<C>) -> Result<(CcObj<C>, CcMor<C>)> {
        let code = self.u1(x)?;
        if f.cod != self.ft(x) {
            return Err(Error::Shape(format!(
                "base change of {x:?} along a map not into ft"
            )));
        }
        let c = self.cat();
        let fx = self.extend(&f.dom, &c.compose(&f.mor, &code)?)?;
        let q = self.u.q_of(&f.mor, &code)?;
        Ok((
            fx.clone(),
            CcMor {
                dom: fx,
                cod: x.clone(),
                mor: q,
            },
        ))
    }

    fn q_pair(&self, f: &CcMor<C>, x: &CcObj<C>, a: &CcMor<C>, b: &CcMor<C>) -> Result<CcMor<C>> {
        let code = self.u1(x)?;
        let c = self.cat();
        if a.cod != f.dom || b.cod != *x || a.dom != b.dom || f.cod != self.ft(x) {
            return Err(Error::Shape("pairing into a base change".into()));
        }
        let sq = self.u.ext(&code)?;
        if c.compose(&a.mor, &f.mor)? != c.compose(&b.mor, &sq.proj)? {
            return Err(Error::NotCommuting("cone into f*(X): a∘f ≠ b∘p_X".into()));
        }
        let fcode = c.compose(&f.mor, &code)?;
        let m = self.u.pair(&fcode, &a.mor, &c.compose(&b.mor, &sq.q)?)?;
        let target = self.extend(&f.dom, &fcode)?;
        self.mor(&a.dom, &target, m)
    }

    fn dom(&self, f: &CcMor<C>) -> CcObj<C> {
        f.dom.clone()
    }

    fn cod(&self, f: &CcMor<C>) -> CcObj<C> {
        f.cod.clone()
    }

    fn id(&self, x: &CcObj<C>) -> CcMor<C> {
        CcMor {
            dom: x.clone(),
            cod: x.clone(),
            mor: self.cat().id(x.int()),
        }
    }

    fn compose(&self, f: &CcMor<C>, g: &CcMor<C>) -> Result<CcMor<C>> {
        if f.cod != g.dom {
            return Err(Error::Compose {
                left: format!("{:?}", f.cod),
                right: format!("{:?}", g.dom),
            });
        }
        Ok(CcMor {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            mor: self.cat().compose(&f.mor, &g.mor)?,
        })
    }

    fn objects_over(&self, x: &CcObj<C>) -> Result<Vec<CcObj<C>>> {
        self.cat()
            .hom(x.int(), &self.u.base())?
            .iter()
            .map(|f| self.extend(x, f))
            .collect()
    }

    fn hom(&self, a: &CcObj<C>, b: &CcObj<C>) -> Result<Vec<CcMor<C>>> {
        Ok(self
            .cat()
            .hom(a.int(), b.int())?
            .into_iter()
            .map(|m| CcMor {
                dom: a.clone(),
                cod: b.clone(),
                mor: m,
            })
            .collect())
    }

    fn sections(&self, x: &CcObj<C>) -> Result<Vec<CcMor<C>>> {
        let p = self.proj(x)?;
        let fx = self.ft(x);
        Ok(self
            .cat()
            .sections(&p.mor)?
            .into_iter()
            .map(|m| CcMor {
                dom: fx.clone(),
                cod: x.clone(),
                mor: m,
            })
            .collect())
    }

    fn q_square_is_pullback(&self, f: &CcMor<C>, x: &CcObj<C>) -> Option<Result<bool>> {
        let r = (|| {
            let (fx, q) = self.base_change(f, x)?;
            let sq = CommSquare::new(q.mor, self.proj(&fx)?.mor, self.proj(x)?.mor, f.mor.clone());
            verify_pullback(self.cat(), &sq)
        })();
        Some(r)
    }
}

/// Chooser-independent name of a point of `int(Γ)`: the list of its
/// `Ũ`-components `Q(F_k)` along the tower of projections.
pub fn decode_point(cc: &Cc<FinSet>, g: &CcObj<FinSet>, i: u32) -> Result<Vec<Val>> {
    let mut out = Vec::with_capacity(g.len());
    let mut cur = i;
    for k in (0..g.len()).rev() {
        let sq = cc.universe().ext(&g.codes()[k])?;
        out.push(sq.q.cod().elem(sq.q.at(cur)).clone());
        cur = sq.proj.at(cur);
    }
    out.reverse();
    Ok(out)
}

/// Graph of a morphism between `int` objects in decoded form, sorted.
pub fn canonical_graph(cc: &Cc<FinSet>, m: &CcMor<FinSet>) -> Result<Vec<(Vec<Val>, Vec<Val>)>> {
    let mut out = Vec::with_capacity(m.mor.dom().len());
    for i in 0..m.mor.dom().len() as u32 {
        out.push((
            decode_point(cc, &m.dom, i)?,
            decode_point(cc, &m.cod, m.mor.at(i))?,
        ));
    }
    out.sort();
    Ok(out)
}

/// Decoded code sequence: each code as the graph from decoded points of
/// the previous context to codes.
pub fn canonical_obj(cc: &Cc<FinSet>, g: &CcObj<FinSet>) -> Result<Vec<Vec<(Vec<Val>, Val)>>> {
    let mut out = Vec::with_capacity(g.len());
    for k in 0..g.len() {
        let pre = g.prefix(k);
        let f: &FinMor = &g.codes()[k];
        let mut gr = Vec::with_capacity(f.dom().len());
        for i in 0..f.dom().len() as u32 {
            gr.push((decode_point(cc, &pre, i)?, f.cod().elem(f.at(i)).clone()));
        }
        gr.sort();
        out.push(gr);
    }
    Ok(out)
}
