//! Agenda-driven chart.
//!
//! Items name a node of one anchored instance, a state, a span and, when the
//! node dominates the foot of an auxiliary tree, the foot's span. `Partial(k)`
//! means the first `k` children are recognized; `Below` means the whole
//! subtree is; `Above` means the node is finished, either adjoined into or
//! with its top and bottom unified.
//!
//! Every item also carries its instance's feature graph after all checks made
//! so far, compacted so equal constraint sets compare equal. Two derivations
//! reach the same item only if they leave the instance in the same feature
//! state, which keeps packing sound. Completed trees pass only their outward
//! interface up: the root top for substitution, and root top plus foot bottom
//! for adjunction.

use super::{ParseError, ParserOptions};
use crate::grammar::fgraph::Cell;
use crate::grammar::{bottom_id, top_id, AnchoredTree, FeatureGraph, NodeKind, Sym, TreeKind};
use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum State {
    Partial(u16),
    Below,
    Above,
}

#[derive(Clone, Debug)]
pub(crate) struct Item {
    pub inst: u32,
    pub node: u32,
    pub state: State,
    pub i: u16,
    pub j: u16,
    pub foot: Option<(u16, u16)>,
    pub env: Arc<FeatureGraph>,
}

/// Environments are interned, so pointer identity is content identity.
type Key = (u32, u32, State, u16, u16, Option<(u16, u16)>, usize);

impl Item {
    fn key(&self) -> Key {
        (self.inst, self.node, self.state, self.i, self.j, self.foot, Arc::as_ptr(&self.env) as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Back {
    Scan,
    Foot,
    FirstChild(u32),
    Extend(u32, u32),
    NoAdjoin(u32),
    Adjoin { aux: u32, below: u32 },
    Subst(u32),
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct ChartStats {
    pub items: usize,
    pub instances: usize,
    pub goals: usize,
}

/// Packed result of one chart run.
#[derive(Clone, Debug)]
pub struct ParseForest {
    pub tokens: Vec<String>,
    pub instances: Vec<Arc<AnchoredTree>>,
    /// Tokens that neither anchor a candidate tree nor match one of their
    /// terminals.
    pub uncovered: Vec<usize>,
    pub stats: ChartStats,
    pub(crate) items: Vec<Item>,
    pub(crate) backs: Vec<Vec<Back>>,
    pub(crate) goals: Vec<u32>,
}

impl ParseForest {
    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }

    /// Number of elementary instances that entered the chart.
    pub fn instance_count(&self) -> usize {
        self.instances.len()
    }
}

/// Where a node's subtree lies relative to one anchor, counting the
/// frontier leaves in between. Every leaf covers at least one token, and
/// adjunction can only add more, so the counts are lower bounds.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    /// Ends `gap` leaves before the anchor.
    Left { gap: u16 },
    /// Starts `gap` leaves after the anchor.
    Right { gap: u16 },
    /// Covers the anchor with `before`/`after` leaves on either side.
    Contains { before: u16, after: u16 },
}

struct InstInfo {
    inst: Arc<AnchoredTree>,
    base: Arc<FeatureGraph>,
    base_len: usize,
    /// Per node, per anchor: side and the anchor's token position.
    sides: Vec<Vec<(Side, u16)>>,
    min_len: Vec<u16>,
}

impl InstInfo {
    fn new(inst: Arc<AnchoredTree>, features: bool) -> Self {
        let tree = &inst.tree;
        let flat = tree.flat();
        let frontier = tree.frontier();
        let mut leaf_of = vec![usize::MAX; flat.len()];
        for (x, &k) in frontier.iter().enumerate() {
            leaf_of[k as usize] = x;
        }
        // leaf range per node; preorder means children follow parents
        let mut range = vec![(usize::MAX, 0usize); flat.len()];
        for k in (0..flat.len()).rev() {
            let node = &flat[k];
            range[k] = if node.children.is_empty() {
                (leaf_of[k], leaf_of[k] + 1)
            } else {
                let lo = node.children.iter().map(|&c| range[c as usize].0).min().unwrap();
                let hi = node.children.iter().map(|&c| range[c as usize].1).max().unwrap();
                (lo, hi)
            };
        }
        let min_len = range.iter().map(|&(lo, hi)| (hi - lo) as u16).collect();
        let anchors: Vec<(usize, u16)> = tree
            .anchors()
            .iter()
            .zip(&inst.anchors)
            .filter_map(|(&k, a)| a.position.map(|p| (leaf_of[k as usize], p as u16)))
            .collect();
        let sides = range
            .iter()
            .map(|&(lo, hi)| {
                anchors
                    .iter()
                    .map(|&(leaf, p)| {
                        let side = if leaf < lo {
                            Side::Right { gap: (lo - leaf - 1) as u16 }
                        } else if leaf >= hi {
                            Side::Left { gap: (leaf - hi) as u16 }
                        } else {
                            Side::Contains { before: (leaf - lo) as u16, after: (hi - leaf - 1) as u16 }
                        };
                        (side, p)
                    })
                    .collect()
            })
            .collect();
        let base_len = 2 * tree.node_count();
        let base = if features { inst.graph().clone() } else { FeatureGraph::new() };
        InstInfo { base: Arc::new(base), base_len, sides, min_len, inst }
    }

    fn fits(&self, node: u32, i: u16, j: u16) -> bool {
        if j - i < self.min_len[node as usize] {
            return false;
        }
        self.sides[node as usize].iter().all(|&(side, p)| match side {
            Side::Left { gap } => j + gap <= p,
            Side::Right { gap } => i > p + gap,
            Side::Contains { before, after } => i + before <= p && p + after < j,
        })
    }
}

struct Chart<'a> {
    opts: &'a ParserOptions,
    /// Off when disabled or when no instance carries any constraint.
    features: bool,
    tokens: Vec<String>,
    infos: Vec<InstInfo>,
    items: Vec<Item>,
    backs: Vec<Vec<Back>>,
    index: HashMap<Key, u32>,
    agenda: VecDeque<u32>,
    envs: HashSet<Arc<FeatureGraph>>,
    above_by_start: HashMap<(u32, u32, u16), Vec<u32>>,
    partial_by_end: HashMap<(u32, u32, u16, u16), Vec<u32>>,
    below_by_span: HashMap<(Sym, u16, u16), Vec<u32>>,
    aux_by_foot: HashMap<(Sym, u16, u16), Vec<u32>>,
    slots_by_label: HashMap<Sym, Vec<(u32, u32)>>,
    aux_by_label: HashMap<Sym, Vec<u32>>,
    interface: HashMap<u32, Arc<FeatureGraph>>,
}

/// Recognizes `tokens` with the given candidate trees per token.
pub fn parse(tokens: &[String], anchored: &[Vec<AnchoredTree>], opts: &ParserOptions) -> Result<ParseForest, ParseError> {
    if tokens.len() != anchored.len() {
        return Err(ParseError::LengthMismatch { tokens: tokens.len(), lists: anchored.len() });
    }
    let instances: Vec<Arc<AnchoredTree>> = anchored.iter().flatten().map(|a| Arc::new(a.clone())).collect();
    let terminals: HashSet<String> = instances
        .iter()
        .flat_map(|i| i.tree.flat().iter().filter(|n| n.kind == NodeKind::Terminal).map(|n| n.label.as_str().to_lowercase()))
        .collect();
    let co_anchored: HashSet<usize> = instances.iter().flat_map(|i| i.anchors.iter().filter_map(|a| a.position)).collect();
    let uncovered: Vec<usize> = anchored
        .iter()
        .enumerate()
        .filter(|(i, l)| {
            l.is_empty() && !co_anchored.contains(i) && !terminals.contains(&tokens[*i].to_lowercase())
        })
        .map(|(i, _)| i)
        .collect();
    if !uncovered.is_empty() || tokens.is_empty() {
        let stats = ChartStats { items: 0, instances: instances.len(), goals: 0 };
        return Ok(ParseForest {
            tokens: tokens.to_vec(),
            instances,
            uncovered,
            stats,
            items: Vec::new(),
            backs: Vec::new(),
            goals: Vec::new(),
        });
    }
    let mut chart = Chart::new(tokens, &instances, opts);
    chart.seed()?;
    chart.run()?;
    let goals = chart.goals();
    let stats = ChartStats { items: chart.items.len(), instances: instances.len(), goals: goals.len() };
    Ok(ParseForest {
        tokens: tokens.to_vec(),
        instances,
        uncovered,
        stats,
        items: chart.items,
        backs: chart.backs,
        goals,
    })
}

impl<'a> Chart<'a> {
    fn new(tokens: &[String], instances: &[Arc<AnchoredTree>], opts: &'a ParserOptions) -> Self {
        let features = opts.use_features
            && instances.iter().any(|i| i.graph().cells().iter().any(|c| !matches!(c, Cell::Attrs(a) if a.is_empty())));
        let infos: Vec<InstInfo> = instances.iter().map(|i| InstInfo::new(i.clone(), features)).collect();
        let mut slots_by_label: HashMap<Sym, Vec<(u32, u32)>> = HashMap::new();
        let mut aux_by_label: HashMap<Sym, Vec<u32>> = HashMap::new();
        for (x, info) in infos.iter().enumerate() {
            let tree = &info.inst.tree;
            for (k, node) in tree.flat().iter().enumerate() {
                if node.kind == NodeKind::Substitution {
                    slots_by_label.entry(node.label).or_default().push((x as u32, k as u32));
                }
            }
            if tree.kind == TreeKind::Auxiliary {
                aux_by_label.entry(tree.root_label()).or_default().push(x as u32);
            }
        }
        let mut chart = Chart {
            opts,
            features,
            tokens: tokens.iter().map(|t| t.to_lowercase()).collect(),
            infos,
            items: Vec::new(),
            backs: Vec::new(),
            index: HashMap::new(),
            agenda: VecDeque::new(),
            envs: HashSet::new(),
            above_by_start: HashMap::new(),
            partial_by_end: HashMap::new(),
            below_by_span: HashMap::new(),
            aux_by_foot: HashMap::new(),
            slots_by_label,
            aux_by_label,
            interface: HashMap::new(),
        };
        for x in 0..chart.infos.len() {
            let base = (*chart.infos[x].base).clone();
            chart.infos[x].base = chart.intern(base);
        }
        chart
    }

    fn intern(&mut self, g: FeatureGraph) -> Arc<FeatureGraph> {
        if let Some(a) = self.envs.get(&g) {
            return a.clone();
        }
        let a = Arc::new(g);
        self.envs.insert(a.clone());
        a
    }

    fn add(&mut self, item: Item, back: Back) -> Result<(), ParseError> {
        let whole = !matches!(item.state, State::Partial(_));
        if whole && !self.infos[item.inst as usize].fits(item.node, item.i, item.j) {
            return Ok(());
        }
        let key = item.key();
        if let Some(&id) = self.index.get(&key) {
            self.backs[id as usize].push(back);
            return Ok(());
        }
        if self.items.len() >= self.opts.item_cap {
            return Err(ParseError::ItemCap { cap: self.opts.item_cap });
        }
        let id = self.items.len() as u32;
        self.items.push(item);
        self.backs.push(vec![back]);
        self.index.insert(key, id);
        self.agenda.push_back(id);
        Ok(())
    }

    fn seed(&mut self) -> Result<(), ParseError> {
        let n = self.tokens.len() as u16;
        for x in 0..self.infos.len() {
            let info = &self.infos[x];
            let tree = info.inst.tree.clone();
            let base = info.base.clone();
            let positions: Vec<Option<usize>> = info.inst.anchors.iter().map(|a| a.position).collect();
            for (&k, p) in tree.anchors().iter().zip(positions) {
                let Some(p) = p else { continue };
                let p = p as u16;
                let item = Item { inst: x as u32, node: k, state: State::Below, i: p, j: p + 1, foot: None, env: base.clone() };
                self.add(item, Back::Scan)?;
            }
            for (k, node) in tree.flat().iter().enumerate() {
                if node.kind != NodeKind::Terminal {
                    continue;
                }
                let word = node.label.as_str().to_lowercase();
                for q in 0..n {
                    if self.tokens[q as usize] == word {
                        let item = Item {
                            inst: x as u32,
                            node: k as u32,
                            state: State::Above,
                            i: q,
                            j: q + 1,
                            foot: None,
                            env: base.clone(),
                        };
                        self.add(item, Back::Scan)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), ParseError> {
        while let Some(id) = self.agenda.pop_front() {
            let it = self.items[id as usize].clone();
            match it.state {
                State::Above => self.on_above(id, &it)?,
                State::Partial(k) => self.on_partial(id, &it, k)?,
                State::Below => self.on_below(id, &it)?,
            }
        }
        Ok(())
    }

    fn on_above(&mut self, id: u32, it: &Item) -> Result<(), ParseError> {
        let tree = self.infos[it.inst as usize].inst.tree.clone();
        let flat = tree.flat();
        let node = &flat[it.node as usize];
        match node.parent {
            None => {
                let label = node.label;
                if tree.kind == TreeKind::Initial {
                    if it.foot.is_none() {
                        self.substitute_everywhere(id, it, label)?;
                    }
                } else if let Some((fl, fr)) = it.foot {
                    self.aux_by_foot.entry((label, fl, fr)).or_default().push(id);
                    let hosts = self.below_by_span.get(&(label, fl, fr)).cloned().unwrap_or_default();
                    for b in hosts {
                        self.adjoin(id, b)?;
                    }
                }
            }
            Some(p) => {
                let siblings = &flat[p as usize].children;
                let k = siblings.iter().position(|&c| c == it.node).unwrap();
                if k == 0 {
                    let state = if siblings.len() == 1 { State::Below } else { State::Partial(1) };
                    let item = Item { node: p, state, ..it.clone() };
                    self.add(item, Back::FirstChild(id))?;
                } else {
                    let lefts = self.partial_by_end.get(&(it.inst, p, k as u16, it.i)).cloned().unwrap_or_default();
                    for y in lefts {
                        self.extend(y, id)?;
                    }
                }
                self.above_by_start.entry((it.inst, it.node, it.i)).or_default().push(id);
            }
        }
        Ok(())
    }

    fn on_partial(&mut self, id: u32, it: &Item, k: u16) -> Result<(), ParseError> {
        let tree = self.infos[it.inst as usize].inst.tree.clone();
        let next = tree.flat()[it.node as usize].children[k as usize];
        let rights = self.above_by_start.get(&(it.inst, next, it.j)).cloned().unwrap_or_default();
        for z in rights {
            self.extend(id, z)?;
        }
        self.partial_by_end.entry((it.inst, it.node, k, it.j)).or_default().push(id);
        Ok(())
    }

    fn on_below(&mut self, id: u32, it: &Item) -> Result<(), ParseError> {
        let info = &self.infos[it.inst as usize];
        let tree = info.inst.tree.clone();
        let node = &tree.flat()[it.node as usize];
        if let Some(env) = self.unify_pair(it.inst, &it.env, top_id(it.node), bottom_id(it.node)) {
            let item = Item { state: State::Above, env, ..it.clone() };
            self.add(item, Back::NoAdjoin(id))?;
        }
        if node.na || !matches!(node.kind, NodeKind::Internal | NodeKind::Anchor) {
            return Ok(());
        }
        let label = node.label;
        self.below_by_span.entry((label, it.i, it.j)).or_default().push(id);
        let auxes = self.aux_by_foot.get(&(label, it.i, it.j)).cloned().unwrap_or_default();
        for a in auxes {
            self.adjoin(a, id)?;
        }
        let candidates = self.aux_by_label.get(&label).cloned().unwrap_or_default();
        for x in candidates {
            let info = &self.infos[x as usize];
            let foot = info.inst.tree.foot().expect("auxiliary trees have a foot");
            let item = Item {
                inst: x,
                node: foot,
                state: State::Above,
                i: it.i,
                j: it.j,
                foot: Some((it.i, it.j)),
                env: info.base.clone(),
            };
            self.add(item, Back::Foot)?;
        }
        Ok(())
    }

    fn extend(&mut self, left: u32, right: u32) -> Result<(), ParseError> {
        let (y, z) = (&self.items[left as usize], &self.items[right as usize]);
        let foot = match (y.foot, z.foot) {
            (Some(_), Some(_)) => return Ok(()),
            (a, b) => a.or(b),
        };
        let State::Partial(k) = y.state else { unreachable!("extend takes a partial item") };
        let (inst, node, i, j) = (y.inst, y.node, y.i, z.j);
        let (ye, ze) = (y.env.clone(), z.env.clone());
        let arity = self.infos[inst as usize].inst.tree.flat()[node as usize].children.len() as u16;
        let state = if k + 1 == arity { State::Below } else { State::Partial(k + 1) };
        let Some(env) = self.merge(inst, &ye, &ze) else { return Ok(()) };
        self.add(Item { inst, node, state, i, j, foot, env }, Back::Extend(left, right))
    }

    fn substitute_everywhere(&mut self, id: u32, filler: &Item, label: Sym) -> Result<(), ParseError> {
        let slots = self.slots_by_label.get(&label).cloned().unwrap_or_default();
        if slots.is_empty() {
            return Ok(());
        }
        let iface = self.interface_of(id, &[top_id(0)]);
        for (x, slot) in slots {
            if !self.infos[x as usize].fits(slot, filler.i, filler.j) {
                continue;
            }
            let base = self.infos[x as usize].base.clone();
            let Some(env) = self.attach(x, &base, &iface, &[top_id(slot)]) else { continue };
            let item = Item { inst: x, node: slot, state: State::Above, i: filler.i, j: filler.j, foot: None, env };
            self.add(item, Back::Subst(id))?;
        }
        Ok(())
    }

    fn adjoin(&mut self, aux: u32, below: u32) -> Result<(), ParseError> {
        let a = self.items[aux as usize].clone();
        let b = self.items[below as usize].clone();
        let foot = self.infos[a.inst as usize].inst.tree.foot().unwrap();
        let iface = self.interface_of(aux, &[top_id(0), bottom_id(foot)]);
        let Some(env) = self.attach(b.inst, &b.env, &iface, &[top_id(b.node), bottom_id(b.node)]) else {
            return Ok(());
        };
        let item = Item { inst: b.inst, node: b.node, state: State::Above, i: a.i, j: a.j, foot: b.foot, env };
        self.add(item, Back::Adjoin { aux, below })
    }

    /// The outward part of a completed tree's features.
    fn interface_of(&mut self, id: u32, roots: &[u32]) -> Arc<FeatureGraph> {
        if let Some(g) = self.interface.get(&id) {
            return g.clone();
        }
        let g = if self.features {
            self.items[id as usize].env.extract(roots.iter().copied())
        } else {
            FeatureGraph::new()
        };
        let g = self.intern(g);
        self.interface.insert(id, g.clone());
        g
    }

    /// Adds `iface` to `env` and unifies its `i`-th root with `targets[i]`.
    fn attach(&mut self, inst: u32, env: &Arc<FeatureGraph>, iface: &FeatureGraph, targets: &[u32]) -> Option<Arc<FeatureGraph>> {
        if !self.features {
            return Some(env.clone());
        }
        let mut g = (**env).clone();
        let off = g.append(iface);
        for (x, &t) in targets.iter().enumerate() {
            g.unify(t, off + x as u32).ok()?;
        }
        let g = g.compact(self.infos[inst as usize].base_len);
        Some(self.intern(g))
    }

    fn unify_pair(&mut self, inst: u32, env: &Arc<FeatureGraph>, a: u32, b: u32) -> Option<Arc<FeatureGraph>> {
        if !self.features {
            return Some(env.clone());
        }
        let mut g = (**env).clone();
        if g.find(a) == g.find(b) {
            return Some(env.clone());
        }
        g.unify(a, b).ok()?;
        let g = g.compact(self.infos[inst as usize].base_len);
        Some(self.intern(g))
    }

    fn merge(&mut self, inst: u32, a: &Arc<FeatureGraph>, b: &Arc<FeatureGraph>) -> Option<Arc<FeatureGraph>> {
        let base = &self.infos[inst as usize].base;
        if !self.features || Arc::ptr_eq(b, base) || a == b {
            return Some(a.clone());
        }
        if Arc::ptr_eq(a, base) {
            return Some(b.clone());
        }
        let g = a.merge(b, self.infos[inst as usize].base_len).ok()?;
        Some(self.intern(g))
    }

    fn goals(&self) -> Vec<u32> {
        let n = self.tokens.len() as u16;
        let start = self.opts.start;
        let label = start.root_label();
        let constraint = start.constraint();
        self.items
            .iter()
            .enumerate()
            .filter(|(_, it)| {
                let info = &self.infos[it.inst as usize];
                it.node == 0
                    && it.state == State::Above
                    && it.i == 0
                    && it.j == n
                    && it.foot.is_none()
                    && info.inst.tree.kind == TreeKind::Initial
                    && info.inst.tree.root_label().as_str() == label
            })
            .filter(|(_, it)| {
                if !self.features || constraint.is_empty() {
                    return true;
                }
                let mut g = (*it.env).clone();
                g.add_structure(top_id(0), &constraint, &mut HashMap::new()).is_ok()
            })
            .map(|(id, _)| id as u32)
            .collect()
    }
}
