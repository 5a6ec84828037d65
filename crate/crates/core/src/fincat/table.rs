use super::{Category, FinCategory};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// A finite category given by explicit tables. Objects and morphisms are
/// indices; composition is a lookup, so a corrupted table is representable.
#[derive(Debug, Clone, Default)]
pub struct TableCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    ident: Vec<usize>,
    table: HashMap<(usize, usize), usize>,
}

#[derive(Debug, Clone)]
struct Arrow {
    dom: usize,
    cod: usize,
    name: String,
}

impl TableCategory {
    pub fn empty() -> TableCategory {
        TableCategory::default()
    }

    /// Free category on an acyclic graph with `n` objects: morphisms are
    /// paths, composition is concatenation.
    pub fn free_on_graph(n: usize, edges: &[(usize, usize, &str)]) -> Result<TableCategory> {
        let mut c = TableCategory {
            objects: (0..n).map(|i| i.to_string()).collect(),
            ..Default::default()
        };
        let mut paths: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            c.arrows.push(Arrow {
                dom: i,
                cod: i,
                name: format!("id{i}"),
            });
            c.ident.push(i);
            paths.push(Vec::new());
        }
        let mut frontier: Vec<usize> = Vec::new();
        for (k, &(d, t, name)) in edges.iter().enumerate() {
            if d >= n || t >= n {
                return Err(Error::Shape(format!("edge {name} out of range")));
            }
            frontier.push(c.arrows.len());
            c.arrows.push(Arrow {
                dom: d,
                cod: t,
                name: name.to_string(),
            });
            paths.push(vec![k]);
        }
        while let Some(m) = frontier.pop() {
            for (k, &(d, t, name)) in edges.iter().enumerate() {
                if d != c.arrows[m].cod {
                    continue;
                }
                if paths.len() > 10_000 {
                    return Err(Error::Bound("graph is not acyclic".into()));
                }
                let mut p = paths[m].clone();
                p.push(k);
                frontier.push(c.arrows.len());
                c.arrows.push(Arrow {
                    dom: c.arrows[m].dom,
                    cod: t,
                    name: format!("{}{}", c.arrows[m].name, name),
                });
                paths.push(p);
            }
        }
        let by_path: HashMap<(usize, Vec<usize>), usize> = paths
            .iter()
            .enumerate()
            .map(|(i, p)| ((c.arrows[i].dom, p.clone()), i))
            .collect();
        for f in 0..c.arrows.len() {
            for g in 0..c.arrows.len() {
                if c.arrows[f].cod != c.arrows[g].dom {
                    continue;
                }
                let mut p = paths[f].clone();
                p.extend(&paths[g]);
                c.table.insert((f, g), by_path[&(c.arrows[f].dom, p)]);
            }
        }
        Ok(c)
    }

    /// Looks up a morphism by name.
    pub fn arrow(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Overwrites one entry of the composition table, keeping endpoints.
    pub fn corrupt(&mut self, f: usize, g: usize, result: usize) -> Result<()> {
        let (d, t) = (self.arrows[f].dom, self.arrows[g].cod);
        if self.arrows[result].dom != d || self.arrows[result].cod != t {
            return Err(Error::Shape("corrupted entry must keep endpoints".into()));
        }
        if !self.table.contains_key(&(f, g)) {
            return Err(Error::Shape("pair is not composable".into()));
        }
        self.table.insert((f, g), result);
        Ok(())
    }
}

impl Category for TableCategory {
    type Obj = usize;
    type Mor = usize;

    fn dom(&self, f: &usize) -> usize {
        self.arrows[*f].dom
    }
    fn cod(&self, f: &usize) -> usize {
        self.arrows[*f].cod
    }
    fn id(&self, x: &usize) -> usize {
        self.ident[*x]
    }
    fn compose(&self, f: &usize, g: &usize) -> Result<usize> {
        self.table
            .get(&(*f, *g))
            .copied()
            .ok_or_else(|| Error::Compose {
                left: self.objects[self.arrows[*f].cod].clone(),
                right: self.objects[self.arrows[*g].dom].clone(),
            })
    }
    fn inverse(&self, f: &usize) -> Option<usize> {
        let (d, t) = (self.dom(f), self.cod(f));
        (0..self.arrows.len()).find(|g| {
            self.table.get(&(*f, *g)) == Some(&self.ident[d])
                && self.table.get(&(*g, *f)) == Some(&self.ident[t])
        })
    }
}

impl FinCategory for TableCategory {
    fn objects(&self) -> Vec<usize> {
        (0..self.objects.len()).collect()
    }
    fn hom(&self, a: &usize, b: &usize) -> Result<Vec<usize>> {
        Ok((0..self.arrows.len())
            .filter(|&f| self.arrows[f].dom == *a && self.arrows[f].cod == *b)
            .collect())
    }
}
