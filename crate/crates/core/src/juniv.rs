//! J-structures on a universe: `Eq`, `Ω`, the induced `ω: Ũ→EŨ`, the
//! fiber product `Fp`, `coJ`, its sections `Jp`, and the bijection between
//! sections of `coJ` and fillers of the lifting square.

use crate::error::{Error, Result};
use crate::fincat::Category;
use crate::finset::{FinMor, FinSet};
use crate::lcc::{adj, i_hom, i_p_mor, i_p_obj, FiberProduct, IpObject, Lcc};
use crate::report::{Check, Tally};
use crate::universe::{EUniverse, Universe};

/// `(Eq, Ω, Jp)`.
pub struct UnivJ<C: Category> {
    pub eq: C::Mor,
    pub omega: C::Mor,
    pub jp: C::Mor,
}

impl<C: Category> Clone for UnivJ<C> {
    fn clone(&self) -> Self {
        UnivJ {
            eq: self.eq.clone(),
            omega: self.omega.clone(),
            jp: self.jp.clone(),
        }
    }
}

impl<C: Category> std::fmt::Debug for UnivJ<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "UnivJ {{ eq: {:?}, omega: {:?}, jp: {:?} }}",
            self.eq, self.omega, self.jp
        )
    }
}

/// The square to be split by a filler `Fp×_U EŨ → Ũ`:
///
/// ```text
/// Fp×_U Ũ  --adj(pr2)∘pr_2-->  Ũ
///    |                          |
///  Id×ω                         p
///    v                          v
/// Fp×_U EŨ --adj(pr1)∘pr_2-->  U
/// ```
pub struct FillerSquare<C: Category> {
    pub small: FiberProduct<C>,
    pub big: FiberProduct<C>,
    pub id_x_omega: C::Mor,
    pub top: C::Mor,
    pub bottom: C::Mor,
}

/// Everything derived from `(Eq, Ω)`.
pub struct JUniverseData<C: Category> {
    pub base: Universe<C>,
    pub e: EUniverse<C>,
    pub eq: C::Mor,
    pub omega: C::Mor,
    pub delta: C::Mor,
    /// `ω: Ũ → EŨ`.
    pub w: C::Mor,
    pub ip_u: IpObject<C>,
    pub ip_ut: IpObject<C>,
    pub ie_u: IpObject<C>,
    pub ie_ut: IpObject<C>,
    /// `I^ω(U): I_{pEŨ}(U) → I_p(U)`.
    pub iw_u: C::Mor,
    /// `I^ω(Ũ): I_{pEŨ}(Ũ) → I_p(Ũ)`.
    pub iw_ut: C::Mor,
    /// `I_p(p): I_p(Ũ) → I_p(U)`.
    pub ip_p: C::Mor,
    /// `I_{pEŨ}(p): I_{pEŨ}(Ũ) → I_{pEŨ}(U)`.
    pub ie_p: C::Mor,
    pub fp: FiberProduct<C>,
    /// `pFp: Fp → U`.
    pub p_fp: C::Mor,
    pub coj: C::Mor,
    pub filler: FillerSquare<C>,
}

/// `ω = Δ*Ω`, after checking `Δ∘Eq = Ω∘p`.
pub fn build_omega<C: Lcc + 'static>(
    u: &Universe<C>,
    eq: &C::Mor,
    omega: &C::Mor,
) -> Result<C::Mor> {
    let c = u.cat();
    let delta = u.delta()?;
    if c.dom(omega) != u.total() || c.cod(omega) != u.total() {
        return Err(Error::Shape("Ω must be an endomorphism of Ũ".into()));
    }
    if c.compose(&delta, eq)? != c.compose(omega, u.p())? {
        return Err(Error::Invariant("omega-square: Δ∘Eq ≠ Ω∘p".into()));
    }
    u.pair(eq, &delta, omega)
}

pub fn build_coj<C: Lcc + 'static>(
    u: &Universe<C>,
    eq: &C::Mor,
    omega: &C::Mor,
) -> Result<JUniverseData<C>> {
    let c = u.cat();
    let e = u.e_universe(eq)?;
    let w = build_omega(u, eq, omega)?;
    let (p, pe) = (u.p(), e.p());
    let (bu, but) = (u.base(), u.total());
    let ip_u = i_p_obj(c, p, &bu)?;
    let ip_ut = i_p_obj(c, p, &but)?;
    let ie_u = i_p_obj(c, pe, &bu)?;
    let ie_ut = i_p_obj(c, pe, &but)?;
    let iw_u = i_hom(c, &w, pe, p, &bu)?;
    let iw_ut = i_hom(c, &w, pe, p, &but)?;
    let ip_p = i_p_mor(c, p, p)?;
    let ie_p = i_p_mor(c, pe, p)?;
    let fp = c.fiber_product(&iw_u, &ip_p)?;
    let p_fp = c.compose(&fp.pr1, ie_u.proj())?;
    let coj = c.fp_pair(&fp, &ie_p, &iw_ut)?;

    let small = c.fiber_product(&p_fp, p)?;
    let big = c.fiber_product(&p_fp, pe)?;
    let id_x_omega = c.fp_pair(&big, &small.pr1, &c.compose(&small.pr2, &w)?)?;
    let top = c.compose(&adj(c, &ip_ut.hom, &fp.pr2)?, &ip_ut.prod.pr2)?;
    let bottom = c.compose(&adj(c, &ie_u.hom, &fp.pr1)?, &ie_u.prod.pr2)?;
    Ok(JUniverseData {
        base: u.clone(),
        delta: u.delta()?,
        e,
        eq: eq.clone(),
        omega: omega.clone(),
        w,
        ip_u,
        ip_ut,
        ie_u,
        ie_ut,
        iw_u,
        iw_ut,
        ip_p,
        ie_p,
        fp,
        p_fp,
        coj,
        filler: FillerSquare {
            small,
            big,
            id_x_omega,
            top,
            bottom,
        },
    })
}

impl<C: Lcc + 'static> JUniverseData<C> {
    pub fn cat(&self) -> &C {
        self.base.cat()
    }

    pub fn is_section(&self, jp: &C::Mor) -> Result<bool> {
        let c = self.cat();
        if c.dom(jp) != self.fp.apex || c.cod(jp) != *self.ie_ut.obj() {
            return Ok(false);
        }
        Ok(c.compose(jp, &self.coj)? == c.id(&self.fp.apex))
    }

    /// Both triangles of the filler square.
    pub fn filler_triangles(&self, f: &C::Mor) -> Result<(bool, bool)> {
        let c = self.cat();
        let s = &self.filler;
        if c.dom(f) != s.big.apex || c.cod(f) != self.base.total() {
            return Ok((false, false));
        }
        Ok((
            c.compose(&s.id_x_omega, f)? == s.top,
            c.compose(f, self.base.p())? == s.bottom,
        ))
    }
}

/// `Jp = adj_inv(⟨π_U, filler⟩)`, where `⟨π_U, filler⟩` is the
/// `U×Ũ`-valued repackaging of the filler.
pub fn filler_to_j<C: Lcc + 'static>(d: &JUniverseData<C>, filler: &C::Mor) -> Result<C::Mor> {
    match d.filler_triangles(filler)? {
        (true, true) => {}
        (false, _) => {
            return Err(Error::Invariant(
                "filler-bijection: upper triangle (Id×ω)∘f = adj(pr2)∘pr_2 fails".into(),
            ))
        }
        (_, false) => {
            return Err(Error::Invariant(
                "filler-bijection: lower triangle f∘p = adj(pr1)∘pr_2 fails".into(),
            ))
        }
    }
    let jp = d.cat().curry(&d.ie_ut.hom, &d.p_fp, &repack(d, filler)?)?;
    debug_assert!(d.is_section(&jp)?);
    Ok(jp)
}

/// `⟨π_U, f⟩: Fp×_U EŨ → U×Ũ`.
pub fn repack<C: Lcc + 'static>(d: &JUniverseData<C>, f: &C::Mor) -> Result<C::Mor> {
    let c = d.cat();
    let base = d.filler.big.diagonal(c)?;
    c.fp_pair(&d.ie_ut.prod, &base, f)
}

/// Inverse of [`repack`]: the `Ũ` component.
pub fn unpack<C: Lcc + 'static>(d: &JUniverseData<C>, g: &C::Mor) -> Result<C::Mor> {
    d.cat().compose(g, &d.ie_ut.prod.pr2)
}

/// `filler = adj(Jp)∘pr_2`.
pub fn j_to_filler<C: Lcc + 'static>(d: &JUniverseData<C>, jp: &C::Mor) -> Result<C::Mor> {
    if !d.is_section(jp)? {
        return Err(Error::Invariant("jp-section: Jp∘coJ ≠ Id".into()));
    }
    unpack(d, &adj(d.cat(), &d.ie_ut.hom, jp)?)
}

pub const CHECK_OMEGA_SQUARE: &str = "omega-square";
pub const CHECK_JP_SECTION: &str = "jp-section";
pub const CHECK_JP_LEGS: &str = "jp-projection-legs";
pub const CHECK_COJ_SECTIONS: &str = "coj-section-characterization";
pub const CHECK_FILLER_BIJECTION: &str = "filler-bijection";

/// Shapes, the `Ω` square, `Jp∘coJ = Id` and its two consequences.
pub fn check_univ_j<C: Lcc + 'static>(u: &Universe<C>, b: &UnivJ<C>) -> Vec<Check> {
    let c = u.cat();
    let mut sq = Tally::new(CHECK_OMEGA_SQUARE);
    let mut sec = Tally::new(CHECK_JP_SECTION);
    let mut legs = Tally::new(CHECK_JP_LEGS);
    let data = match build_coj(u, &b.eq, &b.omega) {
        Ok(d) => {
            sq.expect(true, String::new);
            d
        }
        Err(e) => {
            sq.fail(format!("J1 data invalid: {e}"));
            sec.fail("no coJ without valid J1 data");
            legs.fail("no coJ without valid J1 data");
            return vec![sq.finish(), sec.finish(), legs.finish()];
        }
    };
    let jp = &b.jp;
    if c.dom(jp) != data.fp.apex || c.cod(jp) != *data.ie_ut.obj() {
        sec.fail("Jp does not have shape Fp → I_{pEŨ}(Ũ)");
    } else {
        match c.compose(jp, &data.coj) {
            Ok(r) => {
                let id = c.id(&data.fp.apex);
                elementwise(c, &r, &id, &mut sec, "Jp∘coJ");
            }
            Err(e) => sec.fail(e.to_string()),
        }
        legs.expect_res(c.compose(jp, &data.iw_ut).map(|x| x == data.fp.pr2), || {
            "Jp∘I^ω(Ũ) ≠ pr2".into()
        });
        legs.expect_res(c.compose(jp, &data.ie_p).map(|x| x == data.fp.pr1), || {
            "Jp∘I_{pEŨ}(p) ≠ pr1".into()
        });
    }
    vec![sq.finish(), sec.finish(), legs.finish()]
}

/// Records a single equality of morphisms, naming the first differing
/// point when the category can show one.
fn elementwise<C: Category>(_c: &C, lhs: &C::Mor, rhs: &C::Mor, t: &mut Tally, what: &str) {
    t.expect(lhs == rhs, || format!("{what}: {lhs:?} ≠ {rhs:?}"));
}

/// All sections of `coJ`, enumerated fiberwise in table order.
pub fn enumerate_jp(d: &JUniverseData<FinSet>, limit: usize) -> Result<Vec<FinMor>> {
    let c = d.cat();
    let fibers = d.coj.fibers();
    let choices: Vec<Vec<u32>> = fibers;
    product_tables(c, &d.fp.apex, d.ie_ut.obj(), &choices, limit)
}

/// All fillers of the filler square.
pub fn enumerate_fillers(d: &JUniverseData<FinSet>, limit: usize) -> Result<Vec<FinMor>> {
    let c = d.cat();
    let s = &d.filler;
    let pf = d.base.p().fibers();
    let mut choices: Vec<Vec<u32>> = (0..s.big.apex.len() as u32)
        .map(|w| pf[s.bottom.at(w) as usize].clone())
        .collect();
    for z in 0..s.small.apex.len() as u32 {
        let w = s.id_x_omega.at(z) as usize;
        let forced = s.top.at(z);
        choices[w].retain(|&e| e == forced);
    }
    product_tables(c, &s.big.apex, &d.base.total(), &choices, limit)
}

fn product_tables(
    c: &FinSet,
    dom: &crate::finset::FinObj,
    cod: &crate::finset::FinObj,
    choices: &[Vec<u32>],
    limit: usize,
) -> Result<Vec<FinMor>> {
    let count: f64 = choices.iter().map(|v| v.len() as f64).product();
    if count > limit as f64 {
        return Err(Error::Bound(format!(
            "{count} candidate tables exceed {limit}"
        )));
    }
    if choices.iter().any(|v| v.is_empty()) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; choices.len()];
    loop {
        let map = cur.iter().zip(choices).map(|(&k, v)| v[k]).collect();
        out.push(c.from_table(dom, cod, map)?);
        let mut k = choices.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < choices[k].len() {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// Counts and roundtrips the two sides of the filler bijection.
pub fn check_filler_bijection(d: &JUniverseData<FinSet>, limit: usize) -> Check {
    let mut t = Tally::new(CHECK_FILLER_BIJECTION);
    let (jps, fillers) = match (enumerate_jp(d, limit), enumerate_fillers(d, limit)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            t.fail(e.to_string());
            t.incomplete();
            return t.finish();
        }
    };
    t.expect(jps.len() == fillers.len(), || {
        format!(
            "{} sections of coJ but {} fillers",
            jps.len(),
            fillers.len()
        )
    });
    for jp in &jps {
        t.expect_res(
            j_to_filler(d, jp)
                .and_then(|f| filler_to_j(d, &f))
                .map(|j| j == *jp),
            || format!("roundtrip fails at Jp {jp:?}"),
        );
    }
    for f in &fillers {
        t.expect_res(
            filler_to_j(d, f)
                .and_then(|j| j_to_filler(d, &j))
                .map(|g| g == *f),
            || format!("roundtrip fails at filler {f:?}"),
        );
    }
    t.note(format!(
        "{} sections of coJ, {} fillers",
        jps.len(),
        fillers.len()
    ));
    t.finish()
}
