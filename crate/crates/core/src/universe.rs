//! Universe structures: a morphism `p: Ũ→U` with a chosen pullback square
//! for every `F: X→U`, the derived operations `f*g`, `Q(f,F)`, `F*(f)`,
//! `Δ`, and the universe structure on `pEŨ`.

use crate::error::{Error, Result};
use crate::fincat::{verify_pullback, Category, CommSquare, FinCategory};
use crate::report::{Check, Tally};
use std::sync::Arc;

/// ```text
/// (X;F) --Q(F)--> Ũ
///   |             |
/// p_{X,F}         p
///   v             v
///   X ----F-----> U
/// ```
pub struct CanonicalSquare<C: Category> {
    pub apex: C::Obj,
    pub q: C::Mor,
    pub proj: C::Mor,
    pub code: C::Mor,
}

impl<C: Category> Clone for CanonicalSquare<C> {
    fn clone(&self) -> Self {
        CanonicalSquare {
            apex: self.apex.clone(),
            q: self.q.clone(),
            proj: self.proj.clone(),
            code: self.code.clone(),
        }
    }
}

/// Chooses canonical squares. Implementations must be deterministic.
pub trait Chooser<C: Category>: Send + Sync {
    fn square(&self, c: &C, code: &C::Mor) -> Result<CanonicalSquare<C>>;
    /// The mediating map into the canonical square of `code` for a cone
    /// `f: W→X`, `g: W→Ũ` that is already known to commute.
    fn pair(&self, c: &C, code: &C::Mor, f: &C::Mor, g: &C::Mor) -> Result<C::Mor>;
}

pub struct Universe<C: Category> {
    cat: Arc<C>,
    p: C::Mor,
    chooser: Arc<dyn Chooser<C>>,
}

impl<C: Category> Clone for Universe<C> {
    fn clone(&self) -> Self {
        Universe {
            cat: self.cat.clone(),
            p: self.p.clone(),
            chooser: self.chooser.clone(),
        }
    }
}

impl<C: Category> Universe<C> {
    pub fn new(cat: Arc<C>, p: C::Mor, chooser: Arc<dyn Chooser<C>>) -> Self {
        Universe { cat, p, chooser }
    }

    pub fn cat(&self) -> &C {
        &self.cat
    }

    pub fn cat_arc(&self) -> &Arc<C> {
        &self.cat
    }

    pub fn p(&self) -> &C::Mor {
        &self.p
    }

    /// `Ũ`.
    pub fn total(&self) -> C::Obj {
        self.cat.dom(&self.p)
    }

    /// `U`.
    pub fn base(&self) -> C::Obj {
        self.cat.cod(&self.p)
    }

    /// Same universe morphism with a different chooser.
    pub fn with_chooser(&self, chooser: Arc<dyn Chooser<C>>) -> Self {
        Universe {
            cat: self.cat.clone(),
            p: self.p.clone(),
            chooser,
        }
    }

    pub fn ext(&self, code: &C::Mor) -> Result<CanonicalSquare<C>> {
        if self.cat.cod(code) != self.base() {
            return Err(Error::Shape(format!(
                "family {code:?} does not land in the universe base"
            )));
        }
        self.chooser.square(&self.cat, code)
    }

    pub fn square(&self, code: &C::Mor) -> Result<CommSquare<C::Mor>> {
        let s = self.ext(code)?;
        Ok(CommSquare::new(s.q, s.proj, self.p.clone(), s.code))
    }

    /// `f*g: W → (X;F)`, the unique map with `(f*g)∘p_{X,F} = f` and
    /// `(f*g)∘Q(F) = g`.
    pub fn pair(&self, code: &C::Mor, f: &C::Mor, g: &C::Mor) -> Result<C::Mor> {
        let c = &*self.cat;
        if c.cod(f) != c.dom(code) || c.cod(g) != self.total() || c.dom(f) != c.dom(g) {
            return Err(Error::Shape("pairing into a canonical square".into()));
        }
        if c.compose(f, code)? != c.compose(g, &self.p)? {
            return Err(Error::NotCommuting(
                "cone into a canonical square: f∘F ≠ g∘p".into(),
            ));
        }
        self.chooser.pair(c, code, f, g)
    }

    /// `Q(f,F) = (p_{X′,f∘F}∘f)*Q(f∘F): (X′;f∘F) → (X;F)`.
    pub fn q_of(&self, f: &C::Mor, code: &C::Mor) -> Result<C::Mor> {
        let c = &*self.cat;
        let ff = c.compose(f, code)?;
        let s = self.ext(&ff)?;
        self.pair(code, &c.compose(&s.proj, f)?, &s.q)
    }

    /// `F*(f): (X;F)′ → (X;F)` for `f: Ũ′→Ũ` over `U`, where `other` is
    /// the universe `p′`; defined by `F*(f)∘Q(F) = Q′(F)∘f` and
    /// `F*(f)∘p_{X,F} = p′_{X,F}`.
    pub fn star(&self, other: &Universe<C>, code: &C::Mor, f: &C::Mor) -> Result<C::Mor> {
        let c = &*self.cat;
        if c.compose(f, &self.p)? != *other.p() {
            return Err(Error::NotOverBase("F*(f) needs f∘p = p′".into()));
        }
        let s2 = other.ext(code)?;
        self.pair(code, &s2.proj, &c.compose(&s2.q, f)?)
    }

    /// `Δ = Id*Id: Ũ → (Ũ;p)`.
    pub fn delta(&self) -> Result<C::Mor> {
        let id = self.cat.id(&self.total());
        self.pair(&self.p, &id, &id)
    }

    /// The universe structure on `pEŨ` determined by `eq: (Ũ;p)→U`.
    pub fn e_universe(&self, eq: &C::Mor) -> Result<EUniverse<C>> {
        let c = &*self.cat;
        let up = self.ext(&self.p)?;
        if c.dom(eq) != up.apex || c.cod(eq) != self.base() {
            return Err(Error::Shape("Eq must be a map (Ũ;p) → U".into()));
        }
        let eu = self.ext(eq)?;
        let p_e = c.chain(&[&eu.proj, &up.proj, &self.p])?;
        let chooser = Arc::new(EChooser {
            base: self.clone(),
            eq: eq.clone(),
            eu: eu.clone(),
            up: up.clone(),
        });
        Ok(EUniverse {
            base: self.clone(),
            eq: eq.clone(),
            up,
            eu,
            universe: Universe::new(self.cat.clone(), p_e, chooser),
        })
    }
}

/// `EŨ = (Ũ;p,Eq)` with its projection and universe structure.
pub struct EUniverse<C: Category> {
    pub base: Universe<C>,
    pub eq: C::Mor,
    /// Canonical square of `p` over `Ũ`, apex `(Ũ;p)`.
    pub up: CanonicalSquare<C>,
    /// Canonical square of `Eq` over `(Ũ;p)`, apex `EŨ`.
    pub eu: CanonicalSquare<C>,
    pub universe: Universe<C>,
}

impl<C: Category> Clone for EUniverse<C> {
    fn clone(&self) -> Self {
        EUniverse {
            base: self.base.clone(),
            eq: self.eq.clone(),
            up: self.up.clone(),
            eu: self.eu.clone(),
            universe: self.universe.clone(),
        }
    }
}

impl<C: Category> EUniverse<C> {
    /// `EŨ`.
    pub fn total(&self) -> C::Obj {
        self.eu.apex.clone()
    }

    /// `pEŨ`.
    pub fn p(&self) -> &C::Mor {
        self.universe.p()
    }

    /// The three stacked canonical squares defining `(X;F)_E`.
    pub fn layers(&self, code: &C::Mor) -> Result<ELayers<C>> {
        layers(&self.base, &self.eq, code)
    }
}

/// For `F: X→U`: `(X;F)`, `((X;F);Q(F)∘p)` and `(…;Q(Q(F),p)∘Eq)` with
/// `Q(Q(F),p)`.
pub struct ELayers<C: Category> {
    pub first: CanonicalSquare<C>,
    pub second: CanonicalSquare<C>,
    pub third: CanonicalSquare<C>,
    pub qqp: C::Mor,
}

fn layers<C: Category>(base: &Universe<C>, eq: &C::Mor, code: &C::Mor) -> Result<ELayers<C>> {
    let c = base.cat();
    let first = base.ext(code)?;
    let qp = c.compose(&first.q, base.p())?;
    let second = base.ext(&qp)?;
    let qqp = base.q_of(&first.q, base.p())?;
    let third = base.ext(&c.compose(&qqp, eq)?)?;
    Ok(ELayers {
        first,
        second,
        third,
        qqp,
    })
}

struct EChooser<C: Category> {
    base: Universe<C>,
    eq: C::Mor,
    eu: CanonicalSquare<C>,
    up: CanonicalSquare<C>,
}

impl<C: Category> Chooser<C> for EChooser<C> {
    fn square(&self, c: &C, code: &C::Mor) -> Result<CanonicalSquare<C>> {
        let l = layers(&self.base, &self.eq, code)?;
        let q = self.base.q_of(&l.qqp, &self.eq)?;
        let proj = c.chain(&[&l.third.proj, &l.second.proj, &l.first.proj])?;
        Ok(CanonicalSquare {
            apex: l.third.apex,
            q,
            proj,
            code: code.clone(),
        })
    }

    fn pair(&self, c: &C, code: &C::Mor, f: &C::Mor, g: &C::Mor) -> Result<C::Mor> {
        let b = &self.base;
        let l = layers(b, &self.eq, code)?;
        let g1 = c.compose(g, &self.eu.proj)?;
        let g2 = c.compose(&g1, &self.up.proj)?;
        let m1 = b.pair(code, f, &g2)?;
        let m2 = b.pair(&l.second.code, &m1, &c.compose(&g1, &self.up.q)?)?;
        b.pair(&l.third.code, &m2, &c.compose(g, &self.eu.q)?)
    }
}

pub const CHECK_CANONICAL_SQUARES: &str = "canonical-squares-pullback";

/// Every chosen square over the first `bound + 1` objects, `U`, `Ũ` and
/// `(Ũ;p)` is a pullback.
pub fn check_canonical_squares<C: FinCategory>(u: &Universe<C>, bound: usize) -> Check {
    let c = u.cat();
    let mut t = Tally::new(CHECK_CANONICAL_SQUARES);
    let r = (|| -> Result<()> {
        let mut xs: Vec<C::Obj> = c.objects().into_iter().take(bound + 1).collect();
        let mut extra = vec![u.base(), u.total()];
        extra.push(u.ext(u.p())?.apex);
        for x in extra {
            if !xs.contains(&x) {
                xs.push(x);
            }
        }
        for x in &xs {
            for code in c.hom(x, &u.base())? {
                t.expect_res(verify_pullback(c, &u.square(&code)?), || {
                    format!("the chosen square of {code:?} is not a pullback")
                });
            }
        }
        Ok(())
    })();
    if let Err(e) = r {
        t.fail(e.to_string());
    }
    t.finish()
}
