//! The category of finite sets of coded values, with explicit function
//! tables and the canonical set-theoretic locally cartesian closed
//! structure.

use crate::error::{Error, Result};
use crate::fincat::{lift_problem_commutes, Category, FinCategory};
use crate::lcc::{FiberProduct, Lcc, SliceHom};
use rustc_hash::{FxHashMap as HashMap, FxHasher};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

pub const DEFAULT_CAP: usize = 64;
const HOM_CAP: usize = 4_000_000;

/// An element of a finite set: a tagged tuple tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Val {
    Int(i64),
    Sym(Arc<str>),
    Node(&'static str, Arc<[Val]>),
}

impl Val {
    pub fn sym(s: &str) -> Val {
        Val::Sym(Arc::from(s))
    }

    pub fn node(tag: &'static str, kids: Vec<Val>) -> Val {
        Val::Node(tag, Arc::from(kids))
    }

    pub fn unit() -> Val {
        Val::node("pt", Vec::new())
    }

    pub fn children(&self) -> &[Val] {
        match self {
            Val::Node(_, k) => k,
            _ => &[],
        }
    }

    pub fn tag(&self) -> Option<&'static str> {
        match self {
            Val::Node(t, _) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Int(i) => write!(f, "{i}"),
            Val::Sym(s) => write!(f, "{s}"),
            Val::Node("pt", k) if k.is_empty() => write!(f, "•"),
            Val::Node(t, k) => {
                write!(f, "{t}(")?;
                for (i, v) in k.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct ObjData {
    elems: Vec<Val>,
    index: HashMap<Val, u32>,
    hash: u64,
}

/// A finite set; elements are kept sorted so equal sets are equal objects.
#[derive(Clone)]
pub struct FinObj(Arc<ObjData>);

impl FinObj {
    fn from_sorted(elems: Vec<Val>) -> FinObj {
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        let mut h = FxHasher::default();
        elems.hash(&mut h);
        FinObj(Arc::new(ObjData {
            hash: h.finish(),
            elems,
            index,
        }))
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    pub fn elems(&self) -> &[Val] {
        &self.0.elems
    }

    pub fn elem(&self, i: u32) -> &Val {
        &self.0.elems[i as usize]
    }

    pub fn index_of(&self, v: &Val) -> Option<u32> {
        self.0.index.get(v).copied()
    }

    pub fn contains(&self, v: &Val) -> bool {
        self.0.index.contains_key(v)
    }

    fn describe(&self) -> String {
        let shown: Vec<String> = self.0.elems.iter().take(4).map(|v| v.to_string()).collect();
        let more = if self.len() > 4 { ",…" } else { "" };
        format!("{}-set{{{}{more}}}", self.len(), shown.join(","))
    }
}

impl PartialEq for FinObj {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.elems == other.0.elems)
    }
}

impl Eq for FinObj {}

impl Hash for FinObj {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for FinObj {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FinObj {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self == other {
            return std::cmp::Ordering::Equal;
        }
        self.0.elems.cmp(&other.0.elems)
    }
}

impl fmt::Debug for FinObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// A function table between finite sets; equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinMor {
    dom: FinObj,
    cod: FinObj,
    map: Arc<[u32]>,
}

impl FinMor {
    pub fn dom(&self) -> &FinObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinObj {
        &self.cod
    }

    pub fn table(&self) -> &[u32] {
        &self.map
    }

    pub fn at(&self, i: u32) -> u32 {
        self.map[i as usize]
    }

    /// Image of an element of the domain.
    pub fn apply(&self, v: &Val) -> Option<&Val> {
        self.dom.index_of(v).map(|i| self.cod.elem(self.at(i)))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.map
            .iter()
            .all(|&j| !std::mem::replace(&mut seen[j as usize], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        for &j in self.map.iter() {
            seen[j as usize] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    /// Domain indices over each codomain index, in domain order.
    pub fn fibers(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.cod.len()];
        for (i, &j) in self.map.iter().enumerate() {
            out[j as usize].push(i as u32);
        }
        out
    }

    /// `(element, image)` pairs in domain order.
    pub fn graph(&self) -> Vec<(Val, Val)> {
        (0..self.dom.len() as u32)
            .map(|i| (self.dom.elem(i).clone(), self.cod.elem(self.at(i)).clone()))
            .collect()
    }
}

impl fmt::Debug for FinMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}→{:?}[", self.dom, self.cod)?;
        for (k, (a, b)) in self.graph().iter().take(6).enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}↦{b}")?;
        }
        if self.dom.len() > 6 {
            write!(f, ",…")?;
        }
        write!(f, "]")
    }
}

type PairKey = (FinMor, FinMor);

#[derive(Default)]
struct Caches {
    fiber: Mutex<HashMap<PairKey, FiberProduct<FinSet>>>,
    slice: Mutex<HashMap<PairKey, SliceHom<FinSet>>>,
}

/// FinSet with a materialization cap and a verification enumerator.
pub struct FinSet {
    cap: usize,
    probe_card: usize,
    cone_card: usize,
    extra: Vec<FinObj>,
    terminal: FinObj,
    caches: Caches,
}

impl Default for FinSet {
    fn default() -> Self {
        FinSet::new(DEFAULT_CAP)
    }
}

impl FinSet {
    pub fn new(cap: usize) -> FinSet {
        FinSet {
            cap,
            probe_card: 3,
            cone_card: 1,
            extra: Vec::new(),
            terminal: FinObj::from_sorted(vec![Val::unit()]),
            caches: Caches::default(),
        }
    }

    /// Skeletal sets of cardinality `0..=n` in the verification enumerator.
    pub fn with_probe_card(mut self, n: usize) -> FinSet {
        self.probe_card = n;
        self
    }

    /// Cone test objects for pullback checks are skeletal sets of
    /// cardinality `0..=n`. One-point cones already decide pullbacks of
    /// finite sets, so the default is 1.
    pub fn with_cone_card(mut self, n: usize) -> FinSet {
        self.cone_card = n;
        self
    }

    /// Adds named fixture objects to the verification enumerator.
    pub fn with_probes(mut self, objs: impl IntoIterator<Item = FinObj>) -> FinSet {
        for o in objs {
            if !self.extra.contains(&o) {
                self.extra.push(o);
            }
        }
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Builds a set; fails if it exceeds the cap.
    pub fn obj(&self, what: &str, elems: impl IntoIterator<Item = Val>) -> Result<FinObj> {
        let mut v: Vec<Val> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        if v.len() > self.cap {
            return Err(Error::Capacity {
                construction: what.to_string(),
                size: v.len(),
                cap: self.cap,
            });
        }
        Ok(FinObj::from_sorted(v))
    }

    pub fn skeletal(&self, n: usize) -> FinObj {
        FinObj::from_sorted((0..n as i64).map(Val::Int).collect())
    }

    pub fn point(&self) -> FinObj {
        self.terminal.clone()
    }

    pub fn from_table(&self, dom: &FinObj, cod: &FinObj, map: Vec<u32>) -> Result<FinMor> {
        if map.len() != dom.len() || map.iter().any(|&j| j as usize >= cod.len()) {
            return Err(Error::Shape(format!(
                "table of length {} does not define a map {:?}→{:?}",
                map.len(),
                dom,
                cod
            )));
        }
        Ok(FinMor {
            dom: dom.clone(),
            cod: cod.clone(),
            map: Arc::from(map),
        })
    }

    /// Morphism from an elementwise rule.
    pub fn from_fn(
        &self,
        dom: &FinObj,
        cod: &FinObj,
        mut f: impl FnMut(&Val) -> Result<Val>,
    ) -> Result<FinMor> {
        let mut map = Vec::with_capacity(dom.len());
        for v in dom.elems() {
            let w = f(v)?;
            let j = cod
                .index_of(&w)
                .ok_or_else(|| Error::Shape(format!("image {w} of {v} is not in {cod:?}")))?;
            map.push(j);
        }
        Ok(FinMor {
            dom: dom.clone(),
            cod: cod.clone(),
            map: Arc::from(map),
        })
    }

    pub fn constant(&self, dom: &FinObj, cod: &FinObj, v: &Val) -> Result<FinMor> {
        self.from_fn(dom, cod, |_| Ok(v.clone()))
    }

    /// The map from the terminal object picking out `v`.
    pub fn point_at(&self, cod: &FinObj, v: &Val) -> Result<FinMor> {
        self.constant(&self.terminal, cod, v)
    }

    /// Inclusion of a subset.
    pub fn inclusion(&self, dom: &FinObj, cod: &FinObj) -> Result<FinMor> {
        self.from_fn(dom, cod, |v| Ok(v.clone()))
    }

    fn skeletal_upto(&self, n: usize) -> Vec<FinObj> {
        (0..=n).map(|k| self.skeletal(k)).collect()
    }
}

impl Category for FinSet {
    type Obj = FinObj;
    type Mor = FinMor;

    fn dom(&self, f: &FinMor) -> FinObj {
        f.dom.clone()
    }
    fn cod(&self, f: &FinMor) -> FinObj {
        f.cod.clone()
    }
    fn id(&self, x: &FinObj) -> FinMor {
        FinMor {
            dom: x.clone(),
            cod: x.clone(),
            map: (0..x.len() as u32).collect(),
        }
    }
    fn compose(&self, f: &FinMor, g: &FinMor) -> Result<FinMor> {
        if f.cod != g.dom {
            return Err(Error::Compose {
                left: f.cod.describe(),
                right: g.dom.describe(),
            });
        }
        Ok(FinMor {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            map: f.map.iter().map(|&j| g.map[j as usize]).collect(),
        })
    }
    fn inverse(&self, f: &FinMor) -> Option<FinMor> {
        if !f.is_bijective() {
            return None;
        }
        let mut inv = vec![0u32; f.dom.len()];
        for (i, &j) in f.map.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Some(FinMor {
            dom: f.cod.clone(),
            cod: f.dom.clone(),
            map: Arc::from(inv),
        })
    }
}

impl FinCategory for FinSet {
    fn objects(&self) -> Vec<FinObj> {
        let mut v = self.skeletal_upto(self.probe_card);
        for o in std::iter::once(&self.terminal).chain(self.extra.iter()) {
            if !v.contains(o) {
                v.push(o.clone());
            }
        }
        v
    }

    fn cone_objects(&self) -> Vec<FinObj> {
        self.skeletal_upto(self.cone_card)
    }

    /// All functions in lexicographic order of their tables.
    fn hom(&self, a: &FinObj, b: &FinObj) -> Result<Vec<FinMor>> {
        let (n, m) = (a.len(), b.len());
        let count = (m as f64).powi(n as i32);
        if count > HOM_CAP as f64 {
            return Err(Error::Bound(format!(
                "hom({a:?},{b:?}) has {m}^{n} elements"
            )));
        }
        if m == 0 {
            return Ok(if n == 0 { vec![self.id(a)] } else { Vec::new() });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut cur = vec![0u32; n];
        loop {
            out.push(FinMor {
                dom: a.clone(),
                cod: b.clone(),
                map: Arc::from(cur.clone()),
            });
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                cur[k] += 1;
                if (cur[k] as usize) < m {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    fn sections(&self, p: &FinMor) -> Result<Vec<FinMor>> {
        let fibers = p.fibers();
        let count: f64 = fibers.iter().map(|v| v.len() as f64).product();
        if count > HOM_CAP as f64 {
            return Err(Error::Bound(format!("{count} sections of {p:?}")));
        }
        if fibers.iter().any(|v| v.is_empty()) {
            return Ok(Vec::new());
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut cur = vec![0usize; fibers.len()];
        loop {
            let map: Vec<u32> = cur.iter().zip(&fibers).map(|(&k, f)| f[k]).collect();
            out.push(FinMor {
                dom: p.cod.clone(),
                cod: p.dom.clone(),
                map: Arc::from(map),
            });
            let mut k = fibers.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < fibers[k].len() {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    /// Lifts of finite sets are solved pointwise; taking the least
    /// admissible value at every point gives the lexicographically first
    /// lift, the same one hom enumeration would find.
    fn find_lift(
        &self,
        i: &FinMor,
        p: &FinMor,
        fz: &FinMor,
        fw: &FinMor,
    ) -> Result<Option<FinMor>> {
        lift_problem_commutes(self, i, p, fz, fw)?;
        let w = &i.cod;
        let mut forced: Vec<Option<u32>> = vec![None; w.len()];
        for (z, &wz) in i.map.iter().enumerate() {
            let e = fz.map[z];
            match forced[wz as usize] {
                Some(prev) if prev != e => return Ok(None),
                _ => forced[wz as usize] = Some(e),
            }
        }
        let fibers = p.fibers();
        let mut map = Vec::with_capacity(w.len());
        for (wi, f) in forced.iter().enumerate() {
            match f {
                Some(e) => map.push(*e),
                None => match fibers[fw.map[wi] as usize].first() {
                    Some(e) => map.push(*e),
                    None => return Ok(None),
                },
            }
        }
        Ok(Some(FinMor {
            dom: w.clone(),
            cod: p.dom.clone(),
            map: Arc::from(map),
        }))
    }
}

impl Lcc for FinSet {
    fn terminal(&self) -> FinObj {
        self.terminal.clone()
    }

    fn to_terminal(&self, x: &FinObj) -> FinMor {
        FinMor {
            dom: x.clone(),
            cod: self.terminal.clone(),
            map: vec![0u32; x.len()].into(),
        }
    }

    fn fiber_product(&self, f: &FinMor, g: &FinMor) -> Result<FiberProduct<FinSet>> {
        if f.cod != g.cod {
            return Err(Error::Shape(format!(
                "fiber product of maps into {:?} and {:?}",
                f.cod, g.cod
            )));
        }
        let key = (f.clone(), g.clone());
        if let Some(fp) = self.caches.fiber.lock().unwrap().get(&key) {
            return Ok(fp.clone());
        }
        let gf = g.fibers();
        let mut elems = Vec::new();
        for (a, &d) in f.map.iter().enumerate() {
            for &b in &gf[d as usize] {
                elems.push(Val::node(
                    "fp",
                    vec![f.dom.elem(a as u32).clone(), g.dom.elem(b).clone()],
                ));
            }
        }
        let apex = self.obj("fiber product", elems)?;
        let pr1 = self.from_fn(&apex, &f.dom, |v| Ok(v.children()[0].clone()))?;
        let pr2 = self.from_fn(&apex, &g.dom, |v| Ok(v.children()[1].clone()))?;
        let fp = FiberProduct {
            apex,
            pr1,
            pr2,
            left: f.clone(),
            right: g.clone(),
        };
        self.caches.fiber.lock().unwrap().insert(key, fp.clone());
        Ok(fp)
    }

    fn fp_pair(&self, fp: &FiberProduct<FinSet>, u: &FinMor, v: &FinMor) -> Result<FinMor> {
        if u.dom != v.dom || u.cod != fp.left.dom || v.cod != fp.right.dom {
            return Err(Error::Shape("pairing into a fiber product".into()));
        }
        if self.compose(u, &fp.left)? != self.compose(v, &fp.right)? {
            return Err(Error::NotCommuting("cone over a fiber product".into()));
        }
        let mut map = Vec::with_capacity(u.dom.len());
        for w in 0..u.dom.len() as u32 {
            let key = Val::node(
                "fp",
                vec![u.cod.elem(u.at(w)).clone(), v.cod.elem(v.at(w)).clone()],
            );
            map.push(
                fp.apex
                    .index_of(&key)
                    .expect("cone lands in the fiber product"),
            );
        }
        self.from_table(&u.dom, &fp.apex, map)
    }

    fn slice_hom(&self, p: &FinMor, q: &FinMor) -> Result<SliceHom<FinSet>> {
        if p.cod != q.cod {
            return Err(Error::Shape("slice hom over different bases".into()));
        }
        let key = (p.clone(), q.clone());
        if let Some(h) = self.caches.slice.lock().unwrap().get(&key) {
            return Ok(h.clone());
        }
        let base = &p.cod;
        let pf = p.fibers();
        let qf = q.fibers();
        let mut total = 0usize;
        let mut elems = Vec::new();
        for b in 0..base.len() {
            let (ne, nf) = (pf[b].len(), qf[b].len());
            let count = (nf as f64).powi(ne as i32);
            total += count as usize;
            if count > self.cap as f64 || total > self.cap {
                return Err(Error::Capacity {
                    construction: "slice hom".into(),
                    size: total.max(count as usize),
                    cap: self.cap,
                });
            }
            if nf == 0 && ne > 0 {
                continue;
            }
            let mut cur = vec![0usize; ne];
            loop {
                let tbl: Vec<Val> = cur.iter().map(|&k| q.dom.elem(qf[b][k]).clone()).collect();
                elems.push(Val::node(
                    "hom",
                    vec![base.elem(b as u32).clone(), Val::node("tbl", tbl)],
                ));
                let mut k = ne;
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    cur[k] += 1;
                    if cur[k] < nf {
                        done = false;
                        break;
                    }
                    cur[k] = 0;
                }
                if done {
                    break;
                }
            }
        }
        let obj = self.obj("slice hom", elems)?;
        let proj = self.from_fn(&obj, base, |v| Ok(v.children()[0].clone()))?;
        let ev_dom = self.fiber_product(&proj, p)?;
        let ev = self.from_fn(&ev_dom.apex, &q.dom, |v| {
            let (h, e) = (&v.children()[0], &v.children()[1]);
            let b = base.index_of(&h.children()[0]).expect("base element");
            let ei = p.dom.index_of(e).expect("fiber element");
            let pos = pf[b as usize]
                .iter()
                .position(|&x| x == ei)
                .expect("in fiber");
            Ok(h.children()[1].children()[pos].clone())
        })?;
        let h = SliceHom {
            obj,
            proj,
            ev,
            ev_dom,
            source: p.clone(),
            target: q.clone(),
        };
        self.caches.slice.lock().unwrap().insert(key, h.clone());
        Ok(h)
    }

    fn curry(&self, hom: &SliceHom<FinSet>, alpha: &FinMor, g: &FinMor) -> Result<FinMor> {
        let fp = self.fiber_product(alpha, &hom.source)?;
        if g.dom != fp.apex || g.cod != hom.target.dom {
            return Err(Error::Shape("curried map has the wrong shape".into()));
        }
        if self.compose(g, &hom.target)? != self.compose(&fp.pr1, alpha)? {
            return Err(Error::NotOverBase("map out of a fiber product".into()));
        }
        let pf = hom.source.fibers();
        let base = &alpha.cod;
        let mut map = Vec::with_capacity(alpha.dom.len());
        for a in 0..alpha.dom.len() as u32 {
            let b = alpha.at(a);
            let av = alpha.dom.elem(a);
            let tbl: Vec<Val> = pf[b as usize]
                .iter()
                .map(|&e| {
                    let k = Val::node("fp", vec![av.clone(), hom.source.dom.elem(e).clone()]);
                    g.apply(&k).expect("point of the fiber product").clone()
                })
                .collect();
            let key = Val::node("hom", vec![base.elem(b).clone(), Val::node("tbl", tbl)]);
            map.push(
                hom.obj.index_of(&key).ok_or_else(|| {
                    Error::Invariant("curried table missing from slice hom".into())
                })?,
            );
        }
        self.from_table(&alpha.dom, &hom.obj, map)
    }
}
