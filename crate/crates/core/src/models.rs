//! Finite-set fixtures: coded-family universes, the extensional
//! J-structure and the skewed chooser.

use crate::error::{Error, Result};
use crate::fincat::Category;
use crate::finset::{FinMor, FinObj, FinSet, Val, DEFAULT_CAP};
use crate::juniv::{self, UnivJ};
use crate::universe::{CanonicalSquare, Chooser, Universe};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodedFamilySpec {
    pub name: String,
    /// `(code name, fiber size)` in declaration order.
    pub codes: Vec<(String, usize)>,
    /// Chooser seed; 0 is the normalized chooser.
    #[serde(default)]
    pub skew: u64,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

impl CodedFamilySpec {
    pub fn new(name: &str, codes: &[(&str, usize)]) -> CodedFamilySpec {
        CodedFamilySpec {
            name: name.to_string(),
            codes: codes.iter().map(|(n, k)| (n.to_string(), *k)).collect(),
            skew: 0,
            cap: DEFAULT_CAP,
        }
    }

    /// Codes `0,1,2` with fibers of sizes `0,1,2`.
    pub fn u3() -> CodedFamilySpec {
        CodedFamilySpec::new("U3", &[("0", 0), ("1", 1), ("2", 2)])
    }

    /// Codes `1a,1b`, both with singleton fibers.
    pub fn u1() -> CodedFamilySpec {
        CodedFamilySpec::new("U1", &[("1a", 1), ("1b", 1)])
    }

    /// Codes `0,1`, the source of the code inclusion into [`Self::u3`].
    pub fn small() -> CodedFamilySpec {
        CodedFamilySpec::new("U01", &[("0", 0), ("1", 1)])
    }

    pub fn with_skew(mut self, seed: u64) -> CodedFamilySpec {
        self.skew = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.codes.is_empty() {
            return Err(Error::Spec(format!("fixture {} has no codes", self.name)));
        }
        let mut seen = std::collections::HashSet::new();
        for (n, _) in &self.codes {
            if n.is_empty() {
                return Err(Error::Spec("empty code name".into()));
            }
            if !seen.insert(n) {
                return Err(Error::Spec(format!("duplicate code {n}")));
            }
        }
        Ok(())
    }

    /// Codes required by the extensional structure: a singleton code, and
    /// an empty code as soon as some fiber has two or more points.
    pub fn validate_extensional(&self) -> Result<()> {
        self.validate()?;
        if !self.codes.iter().any(|(_, k)| *k == 1) {
            return Err(Error::Spec(format!(
                "fixture {}: the extensional structure needs a code with a singleton fiber",
                self.name
            )));
        }
        let big = self.codes.iter().any(|(_, k)| *k >= 2);
        if big && !self.codes.iter().any(|(_, k)| *k == 0) {
            return Err(Error::Spec(format!(
                "fixture {}: the extensional structure needs a code with an empty fiber",
                self.name
            )));
        }
        Ok(())
    }

    pub fn singleton_code(&self) -> Option<&str> {
        self.codes
            .iter()
            .find(|(_, k)| *k == 1)
            .map(|(n, _)| n.as_str())
    }

    pub fn empty_code(&self) -> Option<&str> {
        self.codes
            .iter()
            .find(|(_, k)| *k == 0)
            .map(|(n, _)| n.as_str())
    }
}

pub fn code_val(name: &str) -> Val {
    Val::sym(name)
}

pub fn fiber_val(code: &str, i: usize) -> Val {
    Val::node("el", vec![Val::sym(code), Val::Int(i as i64)])
}

/// A universe over finite sets built from a [`CodedFamilySpec`].
#[derive(Clone)]
pub struct Fixture {
    pub spec: CodedFamilySpec,
    pub cat: Arc<FinSet>,
    pub universe: Universe<FinSet>,
}

impl Fixture {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn u(&self) -> FinObj {
        self.universe.base()
    }

    pub fn ut(&self) -> FinObj {
        self.universe.total()
    }

    pub fn code(&self, name: &str) -> Result<Val> {
        let v = code_val(name);
        if self.u().contains(&v) {
            Ok(v)
        } else {
            Err(Error::Spec(format!("unknown code {name}")))
        }
    }

    /// The point `pt → U` at a code.
    pub fn code_point(&self, name: &str) -> Result<FinMor> {
        self.cat.point_at(&self.u(), &self.code(name)?)
    }
}

pub fn coded_universe(spec: &CodedFamilySpec) -> Result<Fixture> {
    spec.validate()?;
    let base = FinSet::new(spec.cap);
    let u = base.obj("universe base", spec.codes.iter().map(|(n, _)| code_val(n)))?;
    let ut = base.obj(
        "universe total",
        spec.codes
            .iter()
            .flat_map(|(n, k)| (0..*k).map(move |i| fiber_val(n, i))),
    )?;
    let cat = Arc::new(base.with_probes([u.clone(), ut.clone()]));
    let p = cat.from_fn(&ut, &u, |v| Ok(v.children()[0].clone()))?;
    let chooser = Arc::new(CodedChooser::new(&p, spec.skew));
    Ok(Fixture {
        spec: spec.clone(),
        universe: Universe::new(cat.clone(), p, chooser),
        cat,
    })
}

/// Same universe, chooser replaced by the one for `seed`.
pub fn skew_structure(f: &Fixture, seed: u64) -> Fixture {
    let chooser = Arc::new(CodedChooser::new(f.universe.p(), seed));
    let mut spec = f.spec.clone();
    spec.skew = seed;
    Fixture {
        spec,
        cat: f.cat.clone(),
        universe: f.universe.with_chooser(chooser),
    }
}

struct Chosen {
    square: CanonicalSquare<FinSet>,
    lookup: HashMap<(u32, u32), u32>,
}

/// Canonical squares with apex `{(x,k) : k < |fiber(F x)|}`. For a nonzero
/// seed the assignment `k ↦ Q(F)(x,k)` is rotated by a seeded nonzero
/// amount on every fiber with two or more points.
pub struct CodedChooser {
    total: FinObj,
    fibers: Vec<Vec<u32>>,
    seed: u64,
    cache: Mutex<HashMap<FinMor, Arc<Chosen>>>,
}

impl CodedChooser {
    pub fn new(p: &FinMor, seed: u64) -> CodedChooser {
        CodedChooser {
            total: p.dom().clone(),
            fibers: p.fibers(),
            seed,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn rotation(&self, code: &FinMor, x: u32, n: usize) -> usize {
        if self.seed == 0 || n < 2 {
            return 0;
        }
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.seed.hash(&mut h);
        code.table().hash(&mut h);
        code.dom().elem(x).hash(&mut h);
        1 + (h.finish() as usize) % (n - 1)
    }

    fn chosen(&self, c: &FinSet, code: &FinMor) -> Result<Arc<Chosen>> {
        if let Some(ch) = self.cache.lock().unwrap().get(code) {
            return Ok(ch.clone());
        }
        let x = code.dom();
        let mut elems = Vec::new();
        for xi in 0..x.len() as u32 {
            let n = self.fibers[code.at(xi) as usize].len();
            for k in 0..n {
                elems.push(Val::node(
                    "ext",
                    vec![x.elem(xi).clone(), Val::Int(k as i64)],
                ));
            }
        }
        let apex = c.obj("canonical square", elems)?;
        let mut qmap = Vec::with_capacity(apex.len());
        let mut pmap = Vec::with_capacity(apex.len());
        let mut lookup = HashMap::new();
        for (ai, v) in apex.elems().iter().enumerate() {
            let xi = x.index_of(&v.children()[0]).expect("apex point over X");
            let k = match v.children()[1] {
                Val::Int(k) => k as usize,
                _ => unreachable!("apex index is an integer"),
            };
            let fib = &self.fibers[code.at(xi) as usize];
            let r = self.rotation(code, xi, fib.len());
            let e = fib[(k + r) % fib.len()];
            qmap.push(e);
            pmap.push(xi);
            lookup.insert((xi, e), ai as u32);
        }
        let square = CanonicalSquare {
            q: c.from_table(&apex, &self.total, qmap)?,
            proj: c.from_table(&apex, x, pmap)?,
            apex,
            code: code.clone(),
        };
        let ch = Arc::new(Chosen { square, lookup });
        self.cache
            .lock()
            .unwrap()
            .entry(code.clone())
            .or_insert_with(|| ch.clone());
        Ok(ch)
    }
}

impl Chooser<FinSet> for CodedChooser {
    fn square(&self, c: &FinSet, code: &FinMor) -> Result<CanonicalSquare<FinSet>> {
        Ok(self.chosen(c, code)?.square.clone())
    }

    fn pair(&self, c: &FinSet, code: &FinMor, f: &FinMor, g: &FinMor) -> Result<FinMor> {
        let ch = self.chosen(c, code)?;
        let map = (0..f.dom().len() as u32)
            .map(|w| ch.lookup[&(f.at(w), g.at(w))])
            .collect();
        c.from_table(f.dom(), &ch.square.apex, map)
    }
}

/// The extensional J-structure: `Eq(x,y)` is the singleton code when
/// `x = y` and the empty code otherwise, `Ω` is constant at the point of
/// the singleton fiber, and `Jp` comes from inverting `Id×ω`.
pub fn extensional_j(f: &Fixture) -> Result<UnivJ<FinSet>> {
    f.spec.validate_extensional()?;
    let c = &*f.cat;
    let u = &f.universe;
    let one = f.code(f.spec.singleton_code().expect("validated"))?;
    let zero = f.spec.empty_code().map(|n| f.code(n)).transpose()?;
    let up = u.ext(u.p())?;
    let eq = c.from_fn(&up.apex, &f.u(), |z| {
        let x = up.proj.apply(z).expect("apex point");
        let y = up.q.apply(z).expect("apex point");
        if x == y {
            Ok(one.clone())
        } else {
            zero.clone()
                .ok_or_else(|| Error::Spec("no empty code".into()))
        }
    })?;
    let star = fiber_val(f.spec.singleton_code().expect("validated"), 0);
    let omega = c.constant(&f.ut(), &f.ut(), &star)?;
    let data = juniv::build_coj(u, &eq, &omega)?;
    let inv = c.inverse(&data.filler.id_x_omega).ok_or_else(|| {
        Error::Invariant("Id×ω is not invertible for the extensional structure".into())
    })?;
    let filler = c.compose(&inv, &data.filler.top)?;
    let jp = juniv::filler_to_j(&data, &filler)?;
    Ok(UnivJ { eq, omega, jp })
}
