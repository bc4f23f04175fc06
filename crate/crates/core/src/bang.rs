//! Pattern graphs with flat !-boxes and their expansion into concrete
//! diagrams and rules.
//!
//! A box marks a set of vertices that may be copied any number of times.
//! Edges from a boxed vertex to an outside vertex are copied along with it,
//! the outside vertex growing a fresh port at the end of its port list.
//! Boxed vertices may not touch the diagram boundary.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::diagram::{
    Builder, Decoration, Diagram, DiagramError, Direction, Edge, EdgeId, Owner, Port, VertexId, VertexKind,
};
use crate::iso::is_isomorphic;
use crate::rules::{RewriteRule, RuleError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BangError {
    #[error("no box `{0}`")]
    NoSuchBox(String),
    #[error("box `{0}` cannot be merged with itself")]
    SameBox(String),
    #[error("no count given for box `{0}`")]
    MissingCount(String),
    #[error("box `{name}` needs a count of at least {min}, got {got}")]
    CountBelowMinimum { name: String, min: usize, got: usize },
    #[error("box `{0}` overlaps another box or names a missing vertex")]
    BadBox(String),
    #[error("box `{0}` contains a vertex wired to the boundary")]
    BoxTouchesBoundary(String),
    #[error("duplicate box id `{0}`")]
    DuplicateBox(String),
    #[error("pattern rule `{0}`: boxes are not paired one to one")]
    BadPairing(String),
    #[error("pattern rule `{name}`: sides have signatures {lhs:?} and {rhs:?}")]
    BoundaryMismatch {
        name: String,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("vertex {0} would change arity but is a parameter point")]
    FixedArity(VertexId),
    #[error("vertex {0} would be left with no legs")]
    Legless(VertexId),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BangBox {
    pub id: String,
    pub contents: BTreeSet<VertexId>,
}

impl BangBox {
    pub fn new(id: impl Into<String>, contents: impl IntoIterator<Item = VertexId>) -> Self {
        BangBox {
            id: id.into(),
            contents: contents.into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    base: Diagram,
    boxes: Vec<BangBox>,
}

impl PatternGraph {
    /// Checks that `base` is valid and the boxes are disjoint, name
    /// existing vertices, and stay clear of the boundary.
    pub fn new(base: Diagram, boxes: Vec<BangBox>) -> Result<Self, BangError> {
        let base = base.checked()?;
        let mut seen = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for b in &boxes {
            if !ids.insert(b.id.clone()) {
                return Err(BangError::DuplicateBox(b.id.clone()));
            }
            for v in &b.contents {
                if base.vertex(*v).is_none() || !seen.insert(*v) {
                    return Err(BangError::BadBox(b.id.clone()));
                }
            }
        }
        for e in base.edges() {
            let touches = |p: Port| p.vertex().is_some_and(|v| seen.contains(&v));
            if (e.src.is_boundary() && touches(e.dst)) || (e.dst.is_boundary() && touches(e.src)) {
                let owner = [e.src, e.dst].into_iter().find_map(|p| p.vertex()).unwrap();
                let b = boxes.iter().find(|b| b.contents.contains(&owner)).unwrap();
                return Err(BangError::BoxTouchesBoundary(b.id.clone()));
            }
        }
        Ok(PatternGraph { base, boxes })
    }

    /// A pattern with no boxes.
    pub fn concrete(base: Diagram) -> Result<Self, BangError> {
        PatternGraph::new(base, Vec::new())
    }

    pub fn base(&self) -> &Diagram {
        &self.base
    }

    pub fn boxes(&self) -> &[BangBox] {
        &self.boxes
    }

    pub fn signature(&self) -> (usize, usize) {
        self.base.signature()
    }

    pub fn get_box(&self, id: &str) -> Result<&BangBox, BangError> {
        self.boxes
            .iter()
            .find(|b| b.id == id)
            .ok_or_else(|| BangError::NoSuchBox(id.to_string()))
    }

    fn fresh_box_id(&self, stem: &str) -> String {
        (1..)
            .map(|k| format!("{stem}.{k}"))
            .find(|c| self.boxes.iter().all(|b| &b.id != c))
            .unwrap()
    }

    /// COPY, returning the new pattern and the id of the new box.
    pub fn copy_box_named(&self, id: &str) -> Result<(PatternGraph, String), BangError> {
        let bx = self.get_box(id)?.clone();
        let mut d = self.base.clone();
        let copies: HashMap<VertexId, VertexId> = bx
            .contents
            .iter()
            .map(|v| {
                let old = self.base.vertex(*v).unwrap();
                (*v, d.push_vertex(old.kind.clone(), old.inputs, old.outputs))
            })
            .collect();
        let inside = |p: Port| p.vertex().is_some_and(|v| bx.contents.contains(&v));
        let edges: Vec<Edge> = self.base.edges().copied().collect();
        for e in edges {
            match (inside(e.src), inside(e.dst)) {
                (false, false) => {}
                (true, true) => {
                    d.push_edge(moved(e.src, &copies), moved(e.dst, &copies), e.deco);
                }
                (true, false) => {
                    let dst = grow_port(&mut d, e.dst)?;
                    d.push_edge(moved(e.src, &copies), dst, e.deco);
                }
                (false, true) => {
                    let src = grow_port(&mut d, e.src)?;
                    d.push_edge(src, moved(e.dst, &copies), e.deco);
                }
            }
        }
        let new_id = self.fresh_box_id(id);
        let mut boxes = self.boxes.clone();
        boxes.push(BangBox::new(new_id.clone(), copies.values().copied()));
        Ok((PatternGraph::new(d, boxes)?, new_id))
    }

    /// COPY: duplicates a box, its contents and every edge touching them.
    pub fn copy_box(&self, id: &str) -> Result<PatternGraph, BangError> {
        Ok(self.copy_box_named(id)?.0)
    }

    /// MERGE: replaces two boxes by one holding both sets of contents,
    /// keeping the id of the first.
    pub fn merge_boxes(&self, a: &str, b: &str) -> Result<PatternGraph, BangError> {
        if a == b {
            self.get_box(a)?;
            return Err(BangError::SameBox(a.to_string()));
        }
        let second = self.get_box(b)?.clone();
        self.get_box(a)?;
        let boxes = self
            .boxes
            .iter()
            .filter(|x| x.id != b)
            .map(|x| {
                let mut x = x.clone();
                if x.id == a {
                    x.contents.extend(second.contents.iter().copied());
                }
                x
            })
            .collect();
        PatternGraph::new(self.base.clone(), boxes)
    }

    /// DROP: forgets a box, leaving its contents in place.
    pub fn drop_box(&self, id: &str) -> Result<PatternGraph, BangError> {
        self.get_box(id)?;
        let boxes = self.boxes.iter().filter(|b| b.id != id).cloned().collect();
        PatternGraph::new(self.base.clone(), boxes)
    }

    /// KILL: deletes a box together with its contents. Outside vertices lose
    /// the ports that led into the box and the remaining ports close ranks.
    pub fn kill_box(&self, id: &str) -> Result<PatternGraph, BangError> {
        let bx = self.get_box(id)?.clone();
        let inside = |p: Port| p.vertex().is_some_and(|v| bx.contents.contains(&v));
        let mut lost: BTreeMap<(VertexId, Direction), BTreeSet<usize>> = BTreeMap::new();
        for e in self.base.edges() {
            match (inside(e.src), inside(e.dst)) {
                (true, false) => {
                    lost.entry((e.dst.vertex().unwrap(), Direction::Consumer))
                        .or_default()
                        .insert(e.dst.index);
                }
                (false, true) => {
                    lost.entry((e.src.vertex().unwrap(), Direction::Producer))
                        .or_default()
                        .insert(e.src.index);
                }
                _ => {}
            }
        }
        let mut d = self.base.clone();
        let doomed: Vec<EdgeId> = self
            .base
            .edges()
            .filter(|e| inside(e.src) || inside(e.dst))
            .map(|e| e.id)
            .collect();
        for e in doomed {
            d.remove_edge(e);
        }
        for v in &bx.contents {
            d.remove_vertex(*v);
        }
        for ((v, dir), removed) in &lost {
            let vert = d.vertex(*v).unwrap().clone();
            if !vert.kind.is_spider() {
                return Err(BangError::FixedArity(*v));
            }
            let (inputs, outputs) = match dir {
                Direction::Consumer => (vert.inputs - removed.len(), vert.outputs),
                Direction::Producer => (vert.inputs, vert.outputs - removed.len()),
            };
            if inputs + outputs == 0 {
                return Err(BangError::Legless(*v));
            }
            let m = d.vertex_mut(*v).unwrap();
            m.inputs = inputs;
            m.outputs = outputs;
        }
        let ids: Vec<EdgeId> = d.edges().map(|e| e.id).collect();
        for id in ids {
            let e = d.edge_mut(id).unwrap();
            e.src = closed_ranks(e.src, &lost);
            e.dst = closed_ranks(e.dst, &lost);
        }
        let boxes = self.boxes.iter().filter(|b| b.id != id).cloned().collect();
        PatternGraph::new(d, boxes)
    }

    /// COPY `k - 1` times and DROP every copy for `k >= 1`, KILL for `k = 0`.
    pub fn instantiate(&self, counts: &BTreeMap<String, usize>) -> Result<Diagram, BangError> {
        for b in &self.boxes {
            if !counts.contains_key(&b.id) {
                return Err(BangError::MissingCount(b.id.clone()));
            }
        }
        let mut p = self.clone();
        for b in &self.boxes {
            let k = counts[&b.id];
            if k == 0 {
                p = p.kill_box(&b.id)?;
                continue;
            }
            let mut made = vec![b.id.clone()];
            for _ in 1..k {
                let (next, id) = p.copy_box_named(&b.id)?;
                p = next;
                made.push(id);
            }
            for id in made {
                p = p.drop_box(&id)?;
            }
        }
        Ok(p.base)
    }

    /// Instantiates a single-box pattern.
    pub fn instantiate_one(&self, k: usize) -> Result<Diagram, BangError> {
        let counts = self.boxes.iter().map(|b| (b.id.clone(), k)).collect();
        self.instantiate(&counts)
    }
}

fn moved(p: Port, copies: &HashMap<VertexId, VertexId>) -> Port {
    Port {
        owner: Owner::Vertex(copies[&p.vertex().unwrap()]),
        ..p
    }
}

/// Adds a port after the last one of the same direction on `p`'s owner.
fn grow_port(d: &mut Diagram, p: Port) -> Result<Port, BangError> {
    let v = p.vertex().expect("boxed vertices never touch the boundary");
    let vert = d.vertex_mut(v).unwrap();
    if !vert.kind.is_spider() {
        return Err(BangError::FixedArity(v));
    }
    Ok(match p.direction {
        Direction::Consumer => {
            vert.inputs += 1;
            Port::into(v, vert.inputs - 1)
        }
        Direction::Producer => {
            vert.outputs += 1;
            Port::out_of(v, vert.outputs - 1)
        }
    })
}

fn closed_ranks(p: Port, lost: &BTreeMap<(VertexId, Direction), BTreeSet<usize>>) -> Port {
    let Some(v) = p.vertex() else { return p };
    match lost.get(&(v, p.direction)) {
        Some(removed) => Port {
            index: p.index - removed.range(..p.index).count(),
            ..p
        },
        None => p,
    }
}

/// Every concrete diagram reachable from `p` by COPY, MERGE, DROP and KILL
/// whose vertex count stays within `max_vertices`, up to isomorphism. This
/// is the brute-force reading of what a pattern denotes.
pub fn enumerate_by_operations(p: &PatternGraph, max_vertices: usize) -> Result<Vec<Diagram>, BangError> {
    let mut found: Vec<Diagram> = Vec::new();
    let mut seen: Vec<PatternGraph> = Vec::new();
    let mut stack = vec![p.clone()];
    while let Some(q) = stack.pop() {
        if q.base.vertex_count() > max_vertices || seen.iter().any(|s| same_pattern(s, &q)) {
            continue;
        }
        seen.push(q.clone());
        if q.boxes.is_empty() {
            if !found.iter().any(|f| is_isomorphic(f, &q.base)) {
                found.push(q.base.clone());
            }
            continue;
        }
        let ids: Vec<String> = q.boxes.iter().map(|b| b.id.clone()).collect();
        for a in &ids {
            stack.push(q.copy_box(a)?);
            stack.push(q.drop_box(a)?);
            match q.kill_box(a) {
                Ok(k) => stack.push(k),
                Err(BangError::Legless(_)) | Err(BangError::FixedArity(_)) => {}
                Err(e) => return Err(e),
            }
            for b in &ids {
                if a < b {
                    stack.push(q.merge_boxes(a, b)?);
                }
            }
        }
    }
    Ok(found)
}

/// Patterns equal up to renaming of boxes and isomorphism of the base that
/// respects box sizes; good enough to prune repeated states.
fn same_pattern(a: &PatternGraph, b: &PatternGraph) -> bool {
    let sizes = |p: &PatternGraph| {
        let mut s: Vec<usize> = p.boxes.iter().map(|x| x.contents.len()).collect();
        s.sort();
        s
    };
    let boxed = |p: &PatternGraph| p.boxes.iter().map(|x| x.contents.len()).sum::<usize>();
    sizes(a) == sizes(b) && boxed(a) == boxed(b) && is_isomorphic(&a.base, &b.base)
}

/// `instantiate` for each count in `0..=max`, for a single-box pattern.
pub fn enumerate_instances(p: &PatternGraph, max: usize) -> Result<Vec<Diagram>, BangError> {
    (0..=max).map(|k| p.instantiate_one(k)).collect()
}

/// A rule between two pattern graphs whose boxes are paired one to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternRule {
    pub name: String,
    pub lhs: PatternGraph,
    pub rhs: PatternGraph,
    /// `(lhs box, rhs box)` pairs.
    pub pairing: Vec<(String, String)>,
    /// Smallest count allowed for an LHS box; absent means 0.
    pub min_counts: BTreeMap<String, usize>,
    pub provenance: String,
    pub scalar_exact: bool,
}

impl PatternRule {
    pub fn new(
        name: impl Into<String>,
        lhs: PatternGraph,
        rhs: PatternGraph,
        pairing: Vec<(String, String)>,
        provenance: impl Into<String>,
        scalar_exact: bool,
    ) -> Result<Self, BangError> {
        let name = name.into();
        if lhs.signature() != rhs.signature() {
            return Err(BangError::BoundaryMismatch {
                name,
                lhs: lhs.signature(),
                rhs: rhs.signature(),
            });
        }
        let left: BTreeSet<&String> = pairing.iter().map(|(l, _)| l).collect();
        let right: BTreeSet<&String> = pairing.iter().map(|(_, r)| r).collect();
        let lhs_ids: BTreeSet<&String> = lhs.boxes.iter().map(|b| &b.id).collect();
        let rhs_ids: BTreeSet<&String> = rhs.boxes.iter().map(|b| &b.id).collect();
        if left.len() != pairing.len() || right.len() != pairing.len() || left != lhs_ids || right != rhs_ids {
            return Err(BangError::BadPairing(name));
        }
        Ok(PatternRule {
            name,
            lhs,
            rhs,
            pairing,
            min_counts: BTreeMap::new(),
            provenance: provenance.into(),
            scalar_exact,
        })
    }

    pub fn with_min_count(mut self, lhs_box: &str, min: usize) -> Self {
        self.min_counts.insert(lhs_box.to_string(), min);
        self
    }

    pub fn box_ids(&self) -> Vec<String> {
        self.lhs.boxes.iter().map(|b| b.id.clone()).collect()
    }

    pub fn min_count(&self, lhs_box: &str) -> usize {
        self.min_counts.get(lhs_box).copied().unwrap_or(0)
    }

    /// Name of the concrete rule for the given counts, e.g. `delta1_prime#2`.
    pub fn expansion_name(&self, counts: &BTreeMap<String, usize>) -> String {
        let ks: Vec<String> = self
            .lhs
            .boxes
            .iter()
            .map(|b| counts.get(&b.id).map_or("?".into(), |k| k.to_string()))
            .collect();
        format!("{}#{}", self.name, ks.join(","))
    }
}

/// Instantiates both sides with paired counts, keyed on LHS box ids.
pub fn expand_rule(pr: &PatternRule, counts: &BTreeMap<String, usize>) -> Result<RewriteRule, BangError> {
    let mut rhs_counts = BTreeMap::new();
    for (l, r) in &pr.pairing {
        let k = *counts.get(l).ok_or_else(|| BangError::MissingCount(l.clone()))?;
        let min = pr.min_count(l);
        if k < min {
            return Err(BangError::CountBelowMinimum {
                name: l.clone(),
                min,
                got: k,
            });
        }
        rhs_counts.insert(r.clone(), k);
    }
    let lhs = pr.lhs.instantiate(counts)?;
    let rhs = pr.rhs.instantiate(&rhs_counts)?;
    Ok(RewriteRule::new(
        pr.expansion_name(counts),
        lhs,
        rhs,
        pr.provenance.clone(),
        pr.scalar_exact,
    )?)
}

/// Every count vector with each entry between the box's minimum and `max`.
pub fn count_vectors(pr: &PatternRule, max: usize) -> Vec<BTreeMap<String, usize>> {
    let mut out = vec![BTreeMap::new()];
    for id in pr.box_ids() {
        let lo = pr.min_count(&id);
        out = out
            .into_iter()
            .flat_map(|c| {
                let id = id.clone();
                (lo..=max.max(lo)).map(move |k| {
                    let mut c = c.clone();
                    c.insert(id.clone(), k);
                    c
                })
            })
            .collect();
    }
    out
}

/// Bounded expansion: the concrete rules for every allowed count vector
/// with entries up to `max`.
pub fn expand_all(pr: &PatternRule, max: usize) -> Result<Vec<RewriteRule>, BangError> {
    count_vectors(pr, max).iter().map(|c| expand_rule(pr, c)).collect()
}

pub fn counts<const N: usize>(pairs: [(&str, usize); N]) -> BTreeMap<String, usize> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// One boxed white unit feeding a `(1, 1)` black spider: instances are the
/// encoded naturals, `k` boxes giving `k`.
pub fn nat_pattern() -> PatternGraph {
    let mut b = Builder::new(0, 1);
    let (w, u) = nat_into(&mut b).expect("fresh ports");
    b.connect(Port::out_of(w, 0), Port::output(0), Decoration::PLAIN)
        .expect("free");
    PatternGraph::new(b.finish().expect("valid"), vec![BangBox::new("n", [u])]).expect("well formed")
}

/// Adds a `(1, 1)` black spider fed by one white unit; returns both ids.
fn nat_into(b: &mut Builder) -> Result<(VertexId, VertexId), DiagramError> {
    let u = b.vertex(VertexKind::GhzSpider, 0, 1)?;
    let w = b.vertex(VertexKind::WSpider, 1, 1)?;
    b.link(u, 0, w, 0)?;
    Ok((w, u))
}

fn spider(b: &mut Builder, kind: VertexKind, m: usize, n: usize) -> VertexId {
    b.vertex(kind, m, n).expect("legal arity")
}

fn plain(b: &mut Builder, src: Port, dst: Port) {
    b.connect(src, dst, Decoration::PLAIN).expect("free ports");
}

fn delta1_prime() -> PatternRule {
    use VertexKind::{GhzSpider as G, WSpider as W};
    let lhs = {
        let mut b = Builder::new(2, 1);
        let add = spider(&mut b, W, 2, 1);
        let mul = spider(&mut b, G, 2, 1);
        let (nat, u) = nat_into(&mut b).unwrap();
        plain(&mut b, Port::input(0), Port::into(add, 0));
        plain(&mut b, Port::input(1), Port::into(add, 1));
        b.link(add, 0, mul, 0).unwrap();
        b.link(nat, 0, mul, 1).unwrap();
        plain(&mut b, Port::out_of(mul, 0), Port::output(0));
        PatternGraph::new(b.finish().unwrap(), vec![BangBox::new("n", [u])]).unwrap()
    };
    let rhs = {
        let mut b = Builder::new(2, 1);
        let mut units = Vec::new();
        let add = spider(&mut b, W, 2, 1);
        for i in 0..2 {
            let mul = spider(&mut b, G, 2, 1);
            let (nat, u) = nat_into(&mut b).unwrap();
            units.push(u);
            plain(&mut b, Port::input(i), Port::into(mul, 0));
            b.link(nat, 0, mul, 1).unwrap();
            b.link(mul, 0, add, i).unwrap();
        }
        plain(&mut b, Port::out_of(add, 0), Port::output(0));
        PatternGraph::new(b.finish().unwrap(), vec![BangBox::new("n", units)]).unwrap()
    };
    PatternRule::new(
        "delta1_prime",
        lhs,
        rhs,
        vec![("n".into(), "n".into())],
        "a natural-number phase distributes over black multiplication",
        true,
    )
    .unwrap()
}

fn delta2_prime() -> PatternRule {
    use VertexKind::{GhzSpider as G, WSpider as W};
    let lhs = {
        let mut b = Builder::new(0, 1);
        let zero = spider(&mut b, W, 0, 1);
        let mul = spider(&mut b, G, 2, 1);
        let (nat, u) = nat_into(&mut b).unwrap();
        b.link(zero, 0, mul, 0).unwrap();
        b.link(nat, 0, mul, 1).unwrap();
        plain(&mut b, Port::out_of(mul, 0), Port::output(0));
        PatternGraph::new(b.finish().unwrap(), vec![BangBox::new("n", [u])]).unwrap()
    };
    let rhs = {
        let mut b = Builder::new(0, 1);
        let zero = spider(&mut b, W, 0, 1);
        plain(&mut b, Port::out_of(zero, 0), Port::output(0));
        PatternGraph::new(b.finish().unwrap(), vec![BangBox::new("n", [])]).unwrap()
    };
    PatternRule::new(
        "delta2_prime",
        lhs,
        rhs,
        vec![("n".into(), "n".into())],
        "the black unit absorbs multiplication by a natural number",
        true,
    )
    .unwrap()
}

fn delta3_prime() -> PatternRule {
    use VertexKind::{GhzSpider as G, WSpider as W};
    let lhs = {
        let mut b = Builder::new(1, 1);
        let mut units = Vec::new();
        let mut muls = Vec::new();
        for deco in [Decoration::PLAIN, Decoration::TICK] {
            let mul = spider(&mut b, G, 2, 1);
            let add = spider(&mut b, W, 2, 1);
            let fixed = spider(&mut b, G, 0, 1);
            let boxed = spider(&mut b, G, 0, 1);
            b.link(fixed, 0, add, 0).unwrap();
            b.link(boxed, 0, add, 1).unwrap();
            b.connect(Port::out_of(add, 0), Port::into(mul, 1), deco).unwrap();
            units.push(boxed);
            muls.push(mul);
        }
        plain(&mut b, Port::input(0), Port::into(muls[0], 0));
        b.link(muls[0], 0, muls[1], 0).unwrap();
        plain(&mut b, Port::out_of(muls[1], 0), Port::output(0));
        PatternGraph::new(b.finish().unwrap(), vec![BangBox::new("n", units)]).unwrap()
    };
    let rhs = PatternGraph::new(Diagram::identity(1), vec![BangBox::new("n", [])]).unwrap();
    PatternRule::new(
        "delta3_prime",
        lhs,
        rhs,
        vec![("n".into(), "n".into())],
        "a positive natural times its reciprocal is one, up to a scalar",
        false,
    )
    .unwrap()
    .with_min_count("n", 1)
}

fn ghz_fusion() -> PatternRule {
    use VertexKind::GhzSpider as G;
    let leg = || VertexKind::param("leg");
    let lhs = {
        let mut b = Builder::new(1, 1);
        let upper = spider(&mut b, G, 2, 1);
        let lower = spider(&mut b, G, 2, 1);
        let a = spider(&mut b, leg(), 0, 1);
        let c = spider(&mut b, leg(), 0, 1);
        plain(&mut b, Port::input(0), Port::into(upper, 0));
        b.link(a, 0, upper, 1).unwrap();
        b.link(upper, 0, lower, 0).unwrap();
        b.link(c, 0, lower, 1).unwrap();
        plain(&mut b, Port::out_of(lower, 0), Port::output(0));
        PatternGraph::new(
            b.finish().unwrap(),
            vec![BangBox::new("a", [a]), BangBox::new("b", [c])],
        )
        .unwrap()
    };
    let rhs = {
        let mut b = Builder::new(1, 1);
        let fused = spider(&mut b, G, 3, 1);
        let a = spider(&mut b, leg(), 0, 1);
        let c = spider(&mut b, leg(), 0, 1);
        plain(&mut b, Port::input(0), Port::into(fused, 0));
        b.link(a, 0, fused, 1).unwrap();
        b.link(c, 0, fused, 2).unwrap();
        plain(&mut b, Port::out_of(fused, 0), Port::output(0));
        PatternGraph::new(
            b.finish().unwrap(),
            vec![BangBox::new("a", [a]), BangBox::new("b", [c])],
        )
        .unwrap()
    };
    PatternRule::new(
        "ghz_fusion",
        lhs,
        rhs,
        vec![("a".into(), "a".into()), ("b".into(), "b".into())],
        "white spiders joined by a plain wire fuse",
        true,
    )
    .unwrap()
}

/// `delta1_prime`, `delta2_prime`, `delta3_prime` and `ghz_fusion`.
pub fn builtin_pattern_rules() -> Vec<PatternRule> {
    vec![delta1_prime(), delta2_prime(), delta3_prime(), ghz_fusion()]
}

pub fn builtin_pattern_rule(name: &str) -> Option<PatternRule> {
    builtin_pattern_rules().into_iter().find(|r| r.name == name)
}
