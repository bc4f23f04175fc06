//! Isomorphism of diagrams.
//!
//! Vertices are linear and ports are ordered, so once one vertex of a
//! connected component is placed, the rest of the component is forced by
//! walking edges port by port. Search only branches on the first vertex of
//! each component that does not touch the boundary.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::diagram::{Diagram, EdgeId, Owner, Port, VertexId};

struct Side<'a> {
    d: &'a Diagram,
    at: HashMap<Port, EdgeId>,
}

impl<'a> Side<'a> {
    fn new(d: &'a Diagram) -> Self {
        Side { d, at: d.incidence() }
    }

    /// The port across the edge attached to `port`, and that edge's id.
    fn across(&self, port: Port) -> Option<(Port, EdgeId)> {
        let id = *self.at.get(&port)?;
        let e = self.d.edge(id)?;
        Some((if e.src == port { e.dst } else { e.src }, id))
    }
}

#[derive(Clone, Default)]
struct State {
    map: BTreeMap<VertexId, VertexId>,
    used: HashSet<VertexId>,
}

/// Returns a vertex bijection witnessing `a ≅ b`, if there is one.
pub fn find_isomorphism(a: &Diagram, b: &Diagram) -> Option<BTreeMap<VertexId, VertexId>> {
    if a.signature() != b.signature() || a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let mut sig_a: Vec<_> = a.vertices().map(|v| v.signature()).collect();
    let mut sig_b: Vec<_> = b.vertices().map(|v| v.signature()).collect();
    sig_a.sort();
    sig_b.sort();
    if sig_a != sig_b {
        return None;
    }

    let sa = Side::new(a);
    let sb = Side::new(b);
    let mut state = State::default();
    let mut queue = Vec::new();

    let boundary = (0..a.n_inputs())
        .map(Port::input)
        .chain((0..a.n_outputs()).map(Port::output));
    for port in boundary {
        let (pa, ea) = sa.across(port)?;
        let (pb, eb) = sb.across(port)?;
        if !same_edge_shape(&sa, ea, &sb, eb, port) {
            return None;
        }
        if !pair_ports(pa, pb, &mut state, &mut queue, b) {
            return None;
        }
    }
    if !propagate(&sa, &sb, &mut state, &mut queue) {
        return None;
    }
    search(&sa, &sb, state)
}

pub fn is_isomorphic(a: &Diagram, b: &Diagram) -> bool {
    find_isomorphism(a, b).is_some()
}

fn search(sa: &Side, sb: &Side, state: State) -> Option<BTreeMap<VertexId, VertexId>> {
    let Some(v) = sa.d.vertices().map(|v| v.id).find(|v| !state.map.contains_key(v)) else {
        return Some(state.map);
    };
    let sig = sa.d.vertex(v)?.signature();
    for w in sb.d.vertices() {
        if state.used.contains(&w.id) || w.signature() != sig {
            continue;
        }
        let mut next = state.clone();
        let mut queue = Vec::new();
        if assign(v, w.id, &mut next, &mut queue, sb.d) && propagate(sa, sb, &mut next, &mut queue) {
            if let Some(found) = search(sa, sb, next) {
                return Some(found);
            }
        }
    }
    None
}

fn assign(v: VertexId, w: VertexId, state: &mut State, queue: &mut Vec<VertexId>, b: &Diagram) -> bool {
    match state.map.get(&v) {
        Some(&existing) => existing == w,
        None => {
            if state.used.contains(&w) || b.vertex(w).is_none() {
                return false;
            }
            state.map.insert(v, w);
            state.used.insert(w);
            queue.push(v);
            true
        }
    }
}

/// Pairs two edge endpoints: boundary ports must coincide, vertex ports
/// must agree on direction and index and their owners get identified.
fn pair_ports(pa: Port, pb: Port, state: &mut State, queue: &mut Vec<VertexId>, b: &Diagram) -> bool {
    if pa.direction != pb.direction || pa.index != pb.index {
        return false;
    }
    match (pa.owner, pb.owner) {
        (Owner::Boundary, Owner::Boundary) => true,
        (Owner::Vertex(u), Owner::Vertex(x)) => assign(u, x, state, queue, b),
        _ => false,
    }
}

fn same_edge_shape(sa: &Side, ea: EdgeId, sb: &Side, eb: EdgeId, port: Port) -> bool {
    let (Some(a), Some(b)) = (sa.d.edge(ea), sb.d.edge(eb)) else {
        return false;
    };
    // the shared endpoint sits on the same end of both edges
    a.deco == b.deco && (a.src == port) == (b.src == port)
}

fn propagate(sa: &Side, sb: &Side, state: &mut State, queue: &mut Vec<VertexId>) -> bool {
    while let Some(v) = queue.pop() {
        let w = state.map[&v];
        let (Some(va), Some(vb)) = (sa.d.vertex(v), sb.d.vertex(w)) else {
            return false;
        };
        if va.signature() != vb.signature() {
            return false;
        }
        let ports = (0..va.inputs)
            .map(|i| (Port::into(v, i), Port::into(w, i)))
            .chain((0..va.outputs).map(|j| (Port::out_of(v, j), Port::out_of(w, j))));
        for (pa, pb) in ports {
            let (Some((oa, ea)), Some((ob, eb))) = (sa.across(pa), sb.across(pb)) else {
                return false;
            };
            let (Some(edge_a), Some(edge_b)) = (sa.d.edge(ea), sb.d.edge(eb)) else {
                return false;
            };
            if edge_a.deco != edge_b.deco {
                return false;
            }
            if !pair_ports(oa, ob, state, queue, sb.d) {
                return false;
            }
        }
    }
    true
}
