//! Matching and double-pushout rewriting of concrete rules.
//!
//! Matching is exact-arity: an LHS vertex only matches a host vertex with
//! the same kind and arities, and every edge decoration has to agree bit
//! for bit. An LHS boundary edge claims the whole host edge it lands on, so
//! a host wire with decorations of its own only matches a rule that carries
//! the same decorations on that boundary.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::diagram::{Decoration, Diagram, DiagramError, Edge, EdgeId, Owner, Port, VertexId, VertexKind};
use crate::rules::{RewriteRule, RuleSet};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("invalid match: {0}")]
    InvalidMatch(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("rule `{rule}` has no match at {fingerprint}")]
    NoSuchMatch { rule: String, fingerprint: String },
    #[error("malformed trace line {line}: `{text}`")]
    BadTraceLine { line: usize, text: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// An occurrence of a rule's LHS in a host diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    /// LHS edges between two vertices, mapped to host edges.
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    /// Each LHS boundary port, mapped to the host edge its wire lands on.
    pub boundary_map: BTreeMap<Port, EdgeId>,
}

impl Match {
    /// Host vertices of the image, listed in LHS vertex order.
    pub fn fingerprint(&self) -> String {
        let ids: Vec<String> = self.vertex_map.values().map(|v| v.to_string()).collect();
        ids.join(",")
    }

    fn sort_key(&self) -> (Vec<VertexId>, Vec<VertexId>) {
        let ordered: Vec<VertexId> = self.vertex_map.values().copied().collect();
        let mut sorted = ordered.clone();
        sorted.sort();
        (sorted, ordered)
    }
}

struct Sides<'a> {
    lhs: &'a Diagram,
    host: &'a Diagram,
    lhs_at: HashMap<Port, EdgeId>,
    host_at: HashMap<Port, EdgeId>,
}

impl<'a> Sides<'a> {
    fn new(lhs: &'a Diagram, host: &'a Diagram) -> Self {
        Sides {
            lhs,
            host,
            lhs_at: lhs.incidence(),
            host_at: host.incidence(),
        }
    }

    fn lhs_edge(&self, port: Port) -> Option<&'a Edge> {
        self.lhs.edge(*self.lhs_at.get(&port)?)
    }

    fn host_edge(&self, port: Port) -> Option<&'a Edge> {
        self.host.edge(*self.host_at.get(&port)?)
    }
}

fn image(port: Port, map: &BTreeMap<VertexId, VertexId>) -> Option<Port> {
    match port.owner {
        Owner::Vertex(v) => Some(Port {
            owner: Owner::Vertex(*map.get(&v)?),
            ..port
        }),
        Owner::Boundary => None,
    }
}

fn other_end(e: &Edge, port: Port) -> Port {
    if e.src == port {
        e.dst
    } else {
        e.src
    }
}

fn is_interior(e: &Edge) -> bool {
    !e.src.is_boundary() && !e.dst.is_boundary()
}

/// Connected components of the LHS along interior edges, each listed from
/// its smallest vertex id.
fn components(lhs: &Diagram) -> Vec<VertexId> {
    let mut seen = HashSet::new();
    let mut roots = Vec::new();
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for e in lhs.edges().filter(|e| is_interior(e)) {
        let (a, b) = (e.src.vertex().unwrap(), e.dst.vertex().unwrap());
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    for v in lhs.vertices() {
        if !seen.insert(v.id) {
            continue;
        }
        roots.push(v.id);
        let mut stack = vec![v.id];
        while let Some(x) = stack.pop() {
            for &y in adj.get(&x).into_iter().flatten() {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    roots
}

#[derive(Clone, Default)]
struct Partial {
    map: BTreeMap<VertexId, VertexId>,
    used: HashSet<VertexId>,
}

fn assign(s: &Sides, v: VertexId, x: VertexId, p: &mut Partial, queue: &mut Vec<VertexId>) -> bool {
    if let Some(&y) = p.map.get(&v) {
        return y == x;
    }
    let (Some(lv), Some(hv)) = (s.lhs.vertex(v), s.host.vertex(x)) else {
        return false;
    };
    if p.used.contains(&x) || lv.signature() != hv.signature() {
        return false;
    }
    p.map.insert(v, x);
    p.used.insert(x);
    queue.push(v);
    true
}

/// Forces the rest of a component along interior edges.
fn propagate(s: &Sides, p: &mut Partial, queue: &mut Vec<VertexId>) -> bool {
    while let Some(v) = queue.pop() {
        let lv = s.lhs.vertex(v).unwrap();
        let ports = (0..lv.inputs)
            .map(|i| Port::into(v, i))
            .chain((0..lv.outputs).map(|j| Port::out_of(v, j)));
        for port in ports {
            let Some(le) = s.lhs_edge(port) else { return false };
            if !is_interior(le) {
                continue;
            }
            let Some(he) = s.host_edge(image(port, &p.map).unwrap()) else {
                return false;
            };
            if he.deco != le.deco {
                return false;
            }
            let lo = other_end(le, port);
            let ho = other_end(he, image(port, &p.map).unwrap());
            if ho.direction != lo.direction || ho.index != lo.index {
                return false;
            }
            let (Owner::Vertex(w), Owner::Vertex(y)) = (lo.owner, ho.owner) else {
                return false;
            };
            if !assign(s, w, y, p, queue) {
                return false;
            }
        }
    }
    true
}

/// Builds the edge and boundary maps for a full vertex map and checks
/// decorations and injectivity on edges.
fn complete(s: &Sides, map: &BTreeMap<VertexId, VertexId>) -> Option<Match> {
    let mut edge_map = BTreeMap::new();
    let mut boundary_map = BTreeMap::new();
    let mut preimages: BTreeMap<EdgeId, Vec<&Edge>> = BTreeMap::new();
    for le in s.lhs.edges() {
        let (key, vertex_port) = match (le.src.owner, le.dst.owner) {
            (Owner::Vertex(_), Owner::Vertex(_)) => (None, le.src),
            (Owner::Boundary, Owner::Vertex(_)) => (Some(le.src), le.dst),
            (Owner::Vertex(_), Owner::Boundary) => (Some(le.dst), le.src),
            (Owner::Boundary, Owner::Boundary) => return None,
        };
        let he = s.host_edge(image(vertex_port, map)?)?;
        match key {
            None => {
                if he.src != image(le.src, map)? || he.dst != image(le.dst, map)? {
                    return None;
                }
                edge_map.insert(le.id, he.id);
            }
            Some(b) => {
                boundary_map.insert(b, he.id);
            }
        }
        preimages.entry(he.id).or_default().push(le);
    }
    let image_vertices: HashSet<VertexId> = map.values().copied().collect();
    let in_image = |p: Port| p.vertex().is_some_and(|v| image_vertices.contains(&v));
    for (hid, les) in &preimages {
        let he = s.host.edge(*hid)?;
        match les.as_slice() {
            [le] if is_interior(le) => {
                if he.deco != le.deco {
                    return None;
                }
            }
            [le] => {
                let outside = if le.src.is_boundary() { he.src } else { he.dst };
                if in_image(outside) || he.deco != le.deco {
                    return None;
                }
            }
            [a, b] if !is_interior(a) && !is_interior(b) => {
                // a host wire leaving the image and coming straight back
                let (into, out_of) = if a.src.is_boundary() { (a, b) } else { (b, a) };
                if !into.src.is_boundary() || !out_of.dst.is_boundary() {
                    return None;
                }
                if he.deco != (into.deco ^ out_of.deco) {
                    return None;
                }
            }
            _ => return None,
        }
    }
    Some(Match {
        vertex_map: map.clone(),
        edge_map,
        boundary_map,
    })
}

fn extend(s: &Sides, roots: &[VertexId], p: Partial, out: &mut Vec<Match>) {
    let Some((&root, rest)) = roots.split_first() else {
        if let Some(m) = complete(s, &p.map) {
            out.push(m);
        }
        return;
    };
    let sig = s.lhs.vertex(root).unwrap().signature();
    for hv in s.host.vertices() {
        if p.used.contains(&hv.id) || hv.signature() != sig {
            continue;
        }
        let mut next = p.clone();
        let mut queue = Vec::new();
        if assign(s, root, hv.id, &mut next, &mut queue) && propagate(s, &mut next, &mut queue) {
            extend(s, rest, next, out);
        }
    }
}

/// All matches of `lhs` in `host`, ordered by the sorted host vertex ids of
/// their image and then by the vertex map itself.
pub fn find_lhs_matches(lhs: &Diagram, host: &Diagram) -> Vec<Match> {
    if lhs.vertex_count() == 0 || lhs.vertex_count() > host.vertex_count() {
        return Vec::new();
    }
    let s = Sides::new(lhs, host);
    let roots = components(lhs);
    let mut out = Vec::new();
    extend(&s, &roots, Partial::default(), &mut out);
    out.sort_by_key(|m| m.sort_key());
    out
}

pub fn find_matches(rule: &RewriteRule, host: &Diagram) -> Vec<Match> {
    find_lhs_matches(&rule.lhs, host)
}

/// The first match in [`find_matches`] order, without enumerating the rest
/// when the LHS is connected.
pub fn first_match(rule: &RewriteRule, host: &Diagram) -> Option<Match> {
    find_matches(rule, host).into_iter().next()
}

/// Checks that `m` is exactly what matching would produce for its vertex
/// map in this host.
pub fn check_match(rule: &RewriteRule, host: &Diagram, m: &Match) -> Result<(), RewriteError> {
    let lhs_ids: Vec<VertexId> = rule.lhs.vertices().map(|v| v.id).collect();
    let keys: Vec<VertexId> = m.vertex_map.keys().copied().collect();
    if lhs_ids != keys {
        return Err(RewriteError::InvalidMatch(
            "vertex map does not cover the left-hand side".into(),
        ));
    }
    let targets: HashSet<VertexId> = m.vertex_map.values().copied().collect();
    if targets.len() != keys.len() {
        return Err(RewriteError::InvalidMatch("vertex map is not injective".into()));
    }
    for (l, h) in &m.vertex_map {
        let Some(hv) = host.vertex(*h) else {
            return Err(RewriteError::InvalidMatch(format!("host has no vertex {h}")));
        };
        if rule.lhs.vertex(*l).unwrap().signature() != hv.signature() {
            return Err(RewriteError::InvalidMatch(format!(
                "{l} and {h} differ in kind or arity"
            )));
        }
    }
    let s = Sides::new(&rule.lhs, host);
    match complete(&s, &m.vertex_map) {
        Some(ref fresh) if fresh == m => Ok(()),
        Some(_) => Err(RewriteError::InvalidMatch("edge maps disagree with the host".into())),
        None => Err(RewriteError::InvalidMatch("edges or decorations do not match".into())),
    }
}

/// Where a rule boundary wire continues once the matched region is cut out.
#[derive(Clone, Copy, Debug)]
enum Outside {
    Host(Port),
    /// The wire re-enters the region at this boundary index of the other
    /// direction.
    Loop(usize),
}

/// Replaces the image of the LHS by a fresh copy of the RHS.
pub fn apply_match(rule: &RewriteRule, host: &Diagram, m: &Match) -> Result<Diagram, RewriteError> {
    check_match(rule, host, m)?;
    let lhs = &rule.lhs;
    let rhs = &rule.rhs;
    let lhs_at = lhs.incidence();
    let inverse: HashMap<VertexId, VertexId> = m.vertex_map.iter().map(|(l, h)| (*h, *l)).collect();
    let preimage = |p: Port| -> Option<Port> {
        match p.owner {
            Owner::Vertex(h) => inverse.get(&h).map(|l| Port {
                owner: Owner::Vertex(*l),
                ..p
            }),
            Owner::Boundary => None,
        }
    };

    let mut ins = Vec::with_capacity(lhs.n_inputs());
    for i in 0..lhs.n_inputs() {
        let he = host.edge(m.boundary_map[&Port::input(i)]).unwrap();
        ins.push(match preimage(he.src) {
            None => Outside::Host(he.src),
            Some(q) => Outside::Loop(lhs.edge(lhs_at[&q]).unwrap().dst.index),
        });
    }
    let mut outs = Vec::with_capacity(lhs.n_outputs());
    for j in 0..lhs.n_outputs() {
        let he = host.edge(m.boundary_map[&Port::output(j)]).unwrap();
        outs.push(match preimage(he.dst) {
            None => Outside::Host(he.dst),
            Some(p) => Outside::Loop(lhs.edge(lhs_at[&p]).unwrap().src.index),
        });
    }

    let mut out = host.clone();
    for h in m.edge_map.values().chain(m.boundary_map.values()) {
        out.remove_edge(*h);
    }
    for h in m.vertex_map.values() {
        out.remove_vertex(*h);
    }
    let fresh: HashMap<VertexId, VertexId> = rhs
        .vertices()
        .map(|v| (v.id, out.push_vertex(v.kind.clone(), v.inputs, v.outputs)))
        .collect();
    let relabel = |p: Port| Port {
        owner: Owner::Vertex(fresh[&p.vertex().unwrap()]),
        ..p
    };

    let rhs_at = rhs.incidence();
    let from_input = |i: usize| *rhs.edge(rhs_at[&Port::input(i)]).unwrap();
    let mut visited = vec![false; rhs.n_inputs()];

    enum End {
        At(Port, Decoration),
        Cycle(Decoration),
    }
    // Walks from an RHS edge through boundary stitches until it reaches a
    // consumer port of the result.
    let follow = |mut e: Edge, visited: &mut Vec<bool>| -> End {
        let mut deco = Decoration::PLAIN;
        loop {
            deco = deco ^ e.deco;
            if !e.dst.is_boundary() {
                return End::At(relabel(e.dst), deco);
            }
            match outs[e.dst.index] {
                Outside::Host(p) => return End::At(p, deco),
                Outside::Loop(i) => {
                    if visited[i] {
                        return End::Cycle(deco);
                    }
                    visited[i] = true;
                    e = from_input(i);
                }
            }
        }
    };

    let mut new_edges = Vec::new();
    for e in rhs.edges().filter(|e| !e.src.is_boundary()) {
        match follow(*e, &mut visited) {
            End::At(dst, deco) => new_edges.push((relabel(e.src), dst, deco)),
            End::Cycle(_) => unreachable!("a walk from a vertex cannot close up"),
        }
    }
    for (i, outside) in ins.iter().enumerate() {
        if let Outside::Host(src) = *outside {
            visited[i] = true;
            match follow(from_input(i), &mut visited) {
                End::At(dst, deco) => new_edges.push((src, dst, deco)),
                End::Cycle(_) => unreachable!("a walk from the host cannot close up"),
            }
        }
    }
    let mut loops = Vec::new();
    for i in 0..rhs.n_inputs() {
        if !visited[i] {
            visited[i] = true;
            match follow(from_input(i), &mut visited) {
                End::Cycle(deco) => loops.push(deco),
                End::At(..) => unreachable!("unvisited stitches lie on closed loops"),
            }
        }
    }
    for (src, dst, deco) in new_edges {
        out.push_edge(src, dst, deco);
    }
    // a closed wire becomes an identity spider on a self-loop
    for deco in loops {
        let v = out.push_vertex(VertexKind::GhzSpider, 1, 1);
        out.push_edge(Port::out_of(v, 0), Port::into(v, 0), deco);
    }
    Ok(out.checked()?)
}

/// Applies `rule` at its `k`-th match.
pub fn rewrite_at(rule: &RewriteRule, host: &Diagram, k: usize) -> Result<Diagram, RewriteError> {
    let matches = find_matches(rule, host);
    let m = matches.get(k).ok_or_else(|| RewriteError::NoSuchMatch {
        rule: rule.name.clone(),
        fingerprint: format!("#{k}"),
    })?;
    apply_match(rule, host, m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub fingerprint: String,
    pub before: (usize, usize),
    pub after: (usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
    /// Set when normalization stopped because it ran out of steps while a
    /// rule still matched.
    pub step_limit_exceeded: bool,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One line per step: `rule-name @ fingerprint`.
    pub fn to_text(&self) -> String {
        self.steps
            .iter()
            .map(|s| format!("{} @ {}\n", s.rule, s.fingerprint))
            .collect()
    }

    /// Parses the line format back into `(rule, fingerprint)` pairs.
    pub fn parse_text(text: &str) -> Result<Vec<(String, String)>, RewriteError> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(n, l)| {
                let (rule, fp) = l.split_once(" @ ").ok_or_else(|| RewriteError::BadTraceLine {
                    line: n + 1,
                    text: l.to_string(),
                })?;
                Ok((rule.trim().to_string(), fp.trim().to_string()))
            })
            .collect()
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Applies the first rule, in set order, at its first match, until nothing
/// matches or `max_steps` rewrites have been made.
pub fn normalize(d: &Diagram, rules: &RuleSet, max_steps: usize) -> (Diagram, RewriteTrace) {
    let mut current = d.clone();
    let mut trace = RewriteTrace::default();
    loop {
        let next = rules.iter().find_map(|r| first_match(r, &current).map(|m| (r, m)));
        let Some((rule, m)) = next else { break };
        if trace.steps.len() >= max_steps {
            trace.step_limit_exceeded = true;
            break;
        }
        let after = apply_match(rule, &current, &m).expect("matches found by the matcher apply");
        trace.steps.push(TraceStep {
            rule: rule.name.clone(),
            fingerprint: m.fingerprint(),
            before: (current.vertex_count(), current.edge_count()),
            after: (after.vertex_count(), after.edge_count()),
        });
        current = after;
    }
    (current, trace)
}

/// Re-runs a list of `(rule, fingerprint)` steps from `start`.
pub fn replay(start: &Diagram, steps: &[(String, String)], rules: &RuleSet) -> Result<Diagram, RewriteError> {
    let mut current = start.clone();
    for (name, fp) in steps {
        let rule = rules.get(name).ok_or_else(|| RewriteError::UnknownRule(name.clone()))?;
        let m = find_matches(rule, &current)
            .into_iter()
            .find(|m| &m.fingerprint() == fp)
            .ok_or_else(|| RewriteError::NoSuchMatch {
                rule: name.clone(),
                fingerprint: fp.clone(),
            })?;
        current = apply_match(rule, &current, &m)?;
    }
    Ok(current)
}

pub fn replay_trace(start: &Diagram, trace: &RewriteTrace, rules: &RuleSet) -> Result<Diagram, RewriteError> {
    let steps: Vec<(String, String)> = trace
        .steps
        .iter()
        .map(|s| (s.rule.clone(), s.fingerprint.clone()))
        .collect();
    replay(start, &steps, rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;
    use crate::rules::builtin_rules;
    use crate::semantics::{evaluate, proj_equal, Environment};
    use crate::shapes::{comult, mult, par, seq, unit, wire, Colour};

    fn rule(name: &str) -> RewriteRule {
        builtin_rules().get(name).cloned().unwrap()
    }

    fn reducing() -> RuleSet {
        RuleSet::from_rules(["ghz_special", "ghz_identity", "w_identity"].map(rule)).unwrap()
    }

    fn ghz_loop() -> Diagram {
        seq(&comult(Colour::White), &mult(Colour::White))
    }

    #[test]
    fn ghz_special_matches_its_loop_once() {
        let r = rule("ghz_special");
        assert_eq!(find_matches(&r, &ghz_loop()).len(), 1);
        assert!(find_matches(&r, &wire()).is_empty());
        let out = rewrite_at(&r, &ghz_loop(), 0).unwrap();
        assert!(is_isomorphic(&out, &wire()));
    }

    #[test]
    fn rewrite_inside_context_keeps_the_rest() {
        let host = seq(&par(&ghz_loop(), &unit(Colour::Black)), &mult(Colour::Black));
        let r = rule("ghz_special");
        let out = rewrite_at(&r, &host, 0).unwrap();
        let expected = seq(&par(&wire(), &unit(Colour::Black)), &mult(Colour::Black));
        assert!(is_isomorphic(&out, &expected));
    }

    #[test]
    fn boundary_decorations_must_agree() {
        let r = rule("ghz_special");
        let host = crate::shapes::decorate_input(&ghz_loop(), 0, Decoration::TICK);
        assert!(find_matches(&r, &host).is_empty());
    }

    #[test]
    fn feedback_edges_become_loops() {
        // identity spider whose output feeds its own input: the circle
        let mut b = crate::diagram::Builder::new(0, 0);
        let v = b.vertex(VertexKind::WSpider, 1, 1).unwrap();
        b.connect(Port::out_of(v, 0), Port::into(v, 0), Decoration::PLAIN)
            .unwrap();
        let host = b.finish().unwrap();
        let r = rule("w_identity");
        // the loop carries a tick that the two boundary wires of the rule do not
        let ticked = {
            let mut b = crate::diagram::Builder::new(0, 0);
            let v = b.vertex(VertexKind::WSpider, 1, 1).unwrap();
            b.connect(Port::out_of(v, 0), Port::into(v, 0), Decoration::TICK)
                .unwrap();
            b.finish().unwrap()
        };
        assert!(find_matches(&r, &ticked).is_empty());
        let out = rewrite_at(&r, &host, 0).unwrap();
        assert_eq!(out.vertex_count(), 1);
        let env = Environment::new();
        assert_eq!(evaluate(&out, &env).unwrap(), evaluate(&host, &env).unwrap());
    }

    #[test]
    fn stale_match_is_rejected() {
        let r = rule("ghz_special");
        let m = find_matches(&r, &ghz_loop()).remove(0);
        let other = seq(&unit(Colour::Black), &crate::shapes::counit(Colour::Black));
        assert!(matches!(
            apply_match(&r, &other, &m),
            Err(RewriteError::InvalidMatch(_))
        ));
    }

    #[test]
    fn normalize_ghz_loop_in_one_step() {
        let (out, trace) = normalize(&ghz_loop(), &reducing(), 10);
        assert!(is_isomorphic(&out, &wire()));
        assert_eq!(trace.len(), 1);
        let (same, trace) = normalize(&wire(), &reducing(), 10);
        assert!(is_isomorphic(&same, &wire()));
        assert!(trace.is_empty());
    }

    #[test]
    fn step_limit_is_reported() {
        let host = par(&ghz_loop(), &ghz_loop());
        let rules = RuleSet::from_rules([rule("ghz_special")]).unwrap();
        let (_, trace) = normalize(&host, &rules, 1);
        assert_eq!(trace.len(), 1);
        assert!(trace.step_limit_exceeded);
    }

    #[test]
    fn trace_text_round_trips() {
        let host = par(&ghz_loop(), &ghz_loop());
        let rules = reducing();
        let (out, trace) = normalize(&host, &rules, 10);
        assert_eq!(trace.len(), 2);
        let steps = RewriteTrace::parse_text(&trace.to_text()).unwrap();
        let again = replay(&host, &steps, &rules).unwrap();
        assert!(is_isomorphic(&out, &again));
        let env = Environment::new();
        let (a, b) = (evaluate(&host, &env).unwrap(), evaluate(&out, &env).unwrap());
        assert!(proj_equal(&a, &b).unwrap().is_some());
    }
}
