//! Union-find feature graphs.
//!
//! Every feature node lives in one flat arena. Unification merges classes in
//! place; `compact` rebuilds a canonical, garbage-free copy whose first
//! `base` nodes keep their indices. Two compacted graphs with the same base
//! compare equal exactly when they encode the same constraints, which is what
//! the chart relies on for item identity.

use super::features::{FeatureStructure, FeatureValue};
use super::symbol::Sym;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Link(u32),
    Atom(Sym),
    /// Sorted by attribute. An empty list is an unconstrained node.
    Attrs(Vec<(Sym, u32)>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FeatureGraph {
    cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClashKind {
    Atoms(Sym, Sym),
    AtomVsStructure(Sym),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clash {
    pub path: Vec<Sym>,
    pub kind: ClashKind,
}

impl Clash {
    pub fn path_string(&self) -> String {
        self.path.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(".")
    }
}

impl fmt::Display for Clash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "<root>".to_string() } else { self.path_string() };
        match &self.kind {
            ClashKind::Atoms(a, b) => write!(f, "{path} ({a} vs {b})"),
            ClashKind::AtomVsStructure(a) => write!(f, "{path} ({a} vs structure)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReadbackError {
    Cyclic,
}

const NO_PARENT: u32 = u32::MAX;

impl FeatureGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with `n` unconstrained nodes.
    pub fn with_base(n: usize) -> Self {
        FeatureGraph { cells: vec![Cell::Attrs(Vec::new()); n] }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn fresh(&mut self) -> u32 {
        self.cells.push(Cell::Attrs(Vec::new()));
        (self.cells.len() - 1) as u32
    }

    pub fn atom(&mut self, a: Sym) -> u32 {
        self.cells.push(Cell::Atom(a));
        (self.cells.len() - 1) as u32
    }

    pub fn find(&self, mut n: u32) -> u32 {
        while let Cell::Link(next) = self.cells[n as usize] {
            n = next;
        }
        n
    }

    pub fn cell(&self, n: u32) -> &Cell {
        &self.cells[self.find(n) as usize]
    }

    /// True if the node's class carries no constraint at all.
    pub fn is_unconstrained(&self, n: u32) -> bool {
        matches!(self.cell(n), Cell::Attrs(a) if a.is_empty())
    }

    pub fn attr(&self, n: u32, key: Sym) -> Option<u32> {
        match self.cell(n) {
            Cell::Attrs(attrs) => attrs.binary_search_by_key(&key, |e| e.0).ok().map(|i| attrs[i].1),
            _ => None,
        }
    }

    pub fn get_path(&self, n: u32, path: &[Sym]) -> Option<u32> {
        let mut cur = n;
        for key in path {
            cur = self.attr(cur, *key)?;
        }
        Some(cur)
    }

    /// Atom value at a path, if the path is bound to one.
    pub fn atom_at(&self, n: u32, path: &[Sym]) -> Option<Sym> {
        match self.cell(self.get_path(n, path)?) {
            Cell::Atom(a) => Some(*a),
            _ => None,
        }
    }

    /// Child of `n` under `key`, creating an unconstrained one if absent.
    pub fn child_or_create(&mut self, n: u32, key: Sym) -> Result<u32, Clash> {
        let rep = self.find(n);
        match &self.cells[rep as usize] {
            Cell::Atom(a) => Err(Clash { path: vec![key], kind: ClashKind::AtomVsStructure(*a) }),
            Cell::Attrs(attrs) => match attrs.binary_search_by_key(&key, |e| e.0) {
                Ok(i) => Ok(attrs[i].1),
                Err(i) => {
                    let child = self.fresh();
                    if let Cell::Attrs(attrs) = &mut self.cells[rep as usize] {
                        attrs.insert(i, (key, child));
                    }
                    Ok(child)
                }
            },
            Cell::Link(_) => unreachable!("find returns a representative"),
        }
    }

    /// Node reached from `n` by `path`, created on demand.
    pub fn path_or_create(&mut self, n: u32, path: &[Sym]) -> Result<u32, Clash> {
        let mut cur = n;
        for (k, key) in path.iter().enumerate() {
            cur = self.child_or_create(cur, *key).map_err(|mut c| {
                c.path = path[..=k].to_vec();
                c
            })?;
        }
        Ok(cur)
    }

    /// Copies `other` after the existing nodes and returns the index offset.
    pub fn append(&mut self, other: &FeatureGraph) -> u32 {
        let off = self.cells.len() as u32;
        self.cells.extend(other.cells.iter().map(|c| match c {
            Cell::Link(n) => Cell::Link(n + off),
            Cell::Atom(a) => Cell::Atom(*a),
            Cell::Attrs(attrs) => Cell::Attrs(attrs.iter().map(|&(k, v)| (k, v + off)).collect()),
        }));
        off
    }

    /// Unifies two nodes. On failure the graph is left partially merged and
    /// should be discarded.
    pub fn unify(&mut self, a: u32, b: u32) -> Result<(), Clash> {
        let mut trail: Vec<(u32, Sym)> = Vec::new();
        let mut stack: Vec<(u32, u32, u32)> = vec![(a, b, NO_PARENT)];
        while let Some((x, y, at)) = stack.pop() {
            let rx = self.find(x);
            let ry = self.find(y);
            if rx == ry {
                continue;
            }
            let (keep, gone) = if rx < ry { (rx, ry) } else { (ry, rx) };
            let kept = std::mem::replace(&mut self.cells[keep as usize], Cell::Link(0));
            let moved = std::mem::replace(&mut self.cells[gone as usize], Cell::Link(keep));
            let merged = match (kept, moved) {
                (Cell::Atom(p), Cell::Atom(q)) => {
                    if p != q {
                        return Err(Clash { path: trail_path(&trail, at), kind: ClashKind::Atoms(p, q) });
                    }
                    Cell::Atom(p)
                }
                (Cell::Atom(p), Cell::Attrs(attrs)) | (Cell::Attrs(attrs), Cell::Atom(p)) => {
                    if !attrs.is_empty() {
                        return Err(Clash { path: trail_path(&trail, at), kind: ClashKind::AtomVsStructure(p) });
                    }
                    Cell::Atom(p)
                }
                (Cell::Attrs(left), Cell::Attrs(right)) => {
                    if right.is_empty() {
                        Cell::Attrs(left)
                    } else if left.is_empty() {
                        Cell::Attrs(right)
                    } else {
                        let mut out = Vec::with_capacity(left.len() + right.len());
                        let (mut i, mut j) = (0, 0);
                        while i < left.len() && j < right.len() {
                            let (ka, va) = left[i];
                            let (kb, vb) = right[j];
                            if ka == kb {
                                trail.push((at, ka));
                                stack.push((va, vb, (trail.len() - 1) as u32));
                                out.push((ka, va));
                                i += 1;
                                j += 1;
                            } else if ka < kb {
                                out.push((ka, va));
                                i += 1;
                            } else {
                                out.push((kb, vb));
                                j += 1;
                            }
                        }
                        out.extend_from_slice(&left[i..]);
                        out.extend_from_slice(&right[j..]);
                        Cell::Attrs(out)
                    }
                }
                _ => unreachable!("representatives are never links"),
            };
            self.cells[keep as usize] = merged;
        }
        Ok(())
    }

    /// Adds the constraints of `fs` to node `n`. Variables are resolved
    /// through `vars`, which is extended with first occurrences.
    pub fn add_structure(
        &mut self,
        n: u32,
        fs: &FeatureStructure,
        vars: &mut HashMap<String, u32>,
    ) -> Result<(), Clash> {
        // an explicit structure is never an atom
        if let Cell::Atom(a) = self.cell(n) {
            if !fs.is_empty() {
                return Err(Clash { path: Vec::new(), kind: ClashKind::AtomVsStructure(*a) });
            }
        }
        for (attr, value) in fs.iter() {
            let key = Sym::new(attr);
            let child = self.child_or_create(n, key)?;
            self.add_value(child, value, vars).map_err(|mut c| {
                c.path.insert(0, key);
                c
            })?;
        }
        Ok(())
    }

    pub fn add_value(
        &mut self,
        n: u32,
        value: &FeatureValue,
        vars: &mut HashMap<String, u32>,
    ) -> Result<(), Clash> {
        match value {
            FeatureValue::Atom(a) => {
                let atom = self.atom(Sym::new(a));
                self.unify(n, atom)
            }
            FeatureValue::Struct(s) => self.add_structure(n, s, vars),
            FeatureValue::Var(name) => match vars.get(name) {
                Some(&other) => self.unify(n, other),
                None => {
                    vars.insert(name.clone(), n);
                    Ok(())
                }
            },
            FeatureValue::Tagged(name, inner) => {
                self.add_value(n, &FeatureValue::Var(name.clone()), vars)?;
                self.add_value(n, inner, vars)
            }
        }
    }

    /// Canonical garbage-free copy. Nodes `0..base` keep their indices; a
    /// base node that shares a class with a lower base node becomes a link
    /// to the lowest one. Other reachable nodes are renumbered breadth-first.
    pub fn compact(&self, base: usize) -> FeatureGraph {
        self.extract(0..base as u32)
    }

    /// Like [`compact`](Self::compact), but the `i`-th root becomes node `i`
    /// of the result. Used to cut the externally visible part out of a graph.
    pub fn extract(&self, roots: impl IntoIterator<Item = u32>) -> FeatureGraph {
        const UNSET: u32 = u32::MAX;
        let mut map = vec![UNSET; self.cells.len()];
        let mut cells: Vec<Cell> = Vec::new();
        let mut queue: Vec<u32> = Vec::new();
        for (i, root) in roots.into_iter().enumerate() {
            let i = i as u32;
            let r = self.find(root) as usize;
            if map[r] == UNSET {
                map[r] = i;
                cells.push(Cell::Attrs(Vec::new()));
                queue.push(r as u32);
            } else {
                cells.push(Cell::Link(map[r]));
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let r = queue[head];
            head += 1;
            let new_index = map[r as usize] as usize;
            let cell = match &self.cells[r as usize] {
                Cell::Atom(a) => Cell::Atom(*a),
                Cell::Attrs(attrs) => Cell::Attrs(
                    attrs
                        .iter()
                        .map(|&(k, v)| {
                            let cr = self.find(v) as usize;
                            if map[cr] == UNSET {
                                map[cr] = cells.len() as u32;
                                cells.push(Cell::Attrs(Vec::new()));
                                queue.push(cr as u32);
                            }
                            (k, map[cr])
                        })
                        .collect(),
                ),
                Cell::Link(_) => unreachable!(),
            };
            cells[new_index] = cell;
        }
        FeatureGraph { cells }
    }

    /// Conjunction of two graphs over the same first `base` nodes, compacted.
    pub fn merge(&self, other: &FeatureGraph, base: usize) -> Result<FeatureGraph, Clash> {
        let mut g = self.clone();
        let off = g.append(other);
        for i in 0..base as u32 {
            g.unify(i, off + i)?;
        }
        Ok(g.compact(base))
    }

    /// Reads node `n` back as a feature value. Classes reachable along more
    /// than one path, and unconstrained non-root classes, become variables
    /// named `0`, `1`, ... in first-occurrence order with attributes visited
    /// alphabetically.
    pub fn readback(&self, n: u32) -> Result<FeatureValue, ReadbackError> {
        let mut refs: HashMap<u32, u32> = HashMap::new();
        let mut on_stack = Vec::new();
        self.count_refs(self.find(n), &mut refs, &mut on_stack)?;
        let mut names: HashMap<u32, String> = HashMap::new();
        let root = self.find(n);
        Ok(self.emit(root, true, &refs, &mut names))
    }

    fn sorted_attrs(&self, r: u32) -> Vec<(&'static str, u32)> {
        match &self.cells[r as usize] {
            Cell::Attrs(attrs) => {
                let mut v: Vec<_> = attrs.iter().map(|&(k, c)| (k.as_str(), self.find(c))).collect();
                v.sort_by(|a, b| a.0.cmp(b.0));
                v
            }
            _ => Vec::new(),
        }
    }

    fn count_refs(
        &self,
        r: u32,
        refs: &mut HashMap<u32, u32>,
        on_stack: &mut Vec<u32>,
    ) -> Result<(), ReadbackError> {
        if on_stack.contains(&r) {
            return Err(ReadbackError::Cyclic);
        }
        let count = refs.entry(r).or_insert(0);
        *count += 1;
        if *count > 1 {
            return Ok(());
        }
        on_stack.push(r);
        for (_, c) in self.sorted_attrs(r) {
            self.count_refs(c, refs, on_stack)?;
        }
        on_stack.pop();
        Ok(())
    }

    fn emit(&self, r: u32, is_root: bool, refs: &HashMap<u32, u32>, names: &mut HashMap<u32, String>) -> FeatureValue {
        if let Some(name) = names.get(&r) {
            return FeatureValue::Var(name.clone());
        }
        let unconstrained = matches!(&self.cells[r as usize], Cell::Attrs(a) if a.is_empty());
        let shared = !is_root && (refs.get(&r).copied().unwrap_or(0) > 1 || unconstrained);
        let name = if shared {
            let name = names.len().to_string();
            names.insert(r, name.clone());
            Some(name)
        } else {
            None
        };
        let content = match &self.cells[r as usize] {
            Cell::Atom(a) => FeatureValue::Atom(a.as_str().to_string()),
            _ => {
                let mut fs = FeatureStructure::new();
                for (k, c) in self.sorted_attrs(r) {
                    let v = self.emit(c, false, refs, names);
                    fs.insert(k, v);
                }
                FeatureValue::Struct(fs)
            }
        };
        match name {
            Some(name) if unconstrained => FeatureValue::Var(name),
            Some(name) => FeatureValue::Tagged(name, Box::new(content)),
            None => content,
        }
    }

    /// Longest attribute path below `n`. The graph must be acyclic.
    pub fn depth(&self, n: u32) -> usize {
        match self.cell(n) {
            Cell::Attrs(attrs) => attrs.iter().map(|&(_, c)| 1 + self.depth(c)).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Readback of node `n` as a structure; atoms and cycles yield `None`.
    pub fn structure_at(&self, n: u32) -> Option<FeatureStructure> {
        match self.readback(n).ok()? {
            FeatureValue::Struct(s) => Some(s),
            _ => None,
        }
    }
}

fn trail_path(trail: &[(u32, Sym)], mut at: u32) -> Vec<Sym> {
    let mut path = Vec::new();
    while at != NO_PARENT {
        let (parent, key) = trail[at as usize];
        path.push(key);
        at = parent;
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_of(base: usize, specs: &[(u32, &str)]) -> FeatureGraph {
        let mut g = FeatureGraph::with_base(base);
        let mut vars = HashMap::new();
        for (n, text) in specs {
            let fs: FeatureStructure = text.parse().unwrap();
            g.add_structure(*n, &fs, &mut vars).unwrap();
        }
        g
    }

    #[test]
    fn compact_is_canonical_regardless_of_history() {
        let mut a = graph_of(2, &[(0, "{agr: {num: sing}}"), (1, "{mode: ind}")]);
        a.fresh();
        let b = graph_of(2, &[(1, "{mode: ind}"), (0, "{agr: {num: sing}}")]);
        assert_eq!(a.compact(2), b.compact(2));
    }

    #[test]
    fn shared_base_nodes_link_to_lowest() {
        let mut g = graph_of(3, &[(2, "{x: a}")]);
        g.unify(2, 1).unwrap();
        let c = g.compact(3);
        assert_eq!(c.cells()[2], Cell::Link(1));
        assert_eq!(c.atom_at(2, &[Sym::new("x")]), Some(Sym::new("a")));
    }

    #[test]
    fn clash_reports_nested_path() {
        let mut g = graph_of(2, &[(0, "{agr: {num: sing}}"), (1, "{agr: {num: plur}}")]);
        let err = g.unify(0, 1).unwrap_err();
        assert_eq!(err.path_string(), "agr.num");
    }

    #[test]
    fn empty_node_absorbs_atom() {
        let mut g = FeatureGraph::with_base(1);
        let a = g.atom(Sym::new("x"));
        g.unify(0, a).unwrap();
        assert_eq!(g.cell(0), &Cell::Atom(Sym::new("x")));
    }

    #[test]
    fn readback_names_shared_nodes() {
        let g = graph_of(1, &[(0, "{a: ?x, b: ?x={c: d}, e: ?y}")]);
        let v = g.readback(0).unwrap();
        assert_eq!(v.to_string(), "{a: ?0={c: d}, b: ?0, e: ?1}");
    }
}
