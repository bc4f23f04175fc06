//! Open port graphs for GHZ/W string diagrams.
//!
//! A [`Diagram`] is a set of generator vertices joined by directed edges.
//! Every vertex has an ordered list of input ports (consumers) and output
//! ports (producers); the diagram itself owns a second, distinguished set of
//! ports: its inputs act as producers and its outputs as consumers. A valid
//! diagram is *linear*: every port, vertex or boundary, is the endpoint of
//! exactly one edge.
//!
//! Edges carry two involutive decorations, a tick (Pauli X) and a cross
//! (-Z). On a single edge the tick is applied first, reading from source to
//! destination.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::BitXor;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// The generator set: the two spider families and named parameter points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    /// White spider, the special Frobenius algebra `|0..0><0..0| + |1..1><1..1|`.
    GhzSpider,
    /// Black spider, the anti-special Frobenius algebra whose unit is `|1>`.
    WSpider,
    /// A named point `I -> Q`, valued by an [`Environment`](crate::semantics::Environment).
    ParamState(String),
}

impl VertexKind {
    pub fn param(name: impl Into<String>) -> Self {
        VertexKind::ParamState(name.into())
    }

    pub fn is_spider(&self) -> bool {
        !matches!(self, VertexKind::ParamState(_))
    }

    /// Checks the arity constraints a vertex of this kind must satisfy.
    pub fn check_arity(&self, inputs: usize, outputs: usize) -> Result<(), DiagramError> {
        match self {
            VertexKind::ParamState(_) if inputs != 0 || outputs != 1 => Err(DiagramError::ArityViolation {
                kind: self.clone(),
                inputs,
                outputs,
            }),
            VertexKind::ParamState(_) => Ok(()),
            _ if inputs == 0 && outputs == 0 => Err(DiagramError::ZeroArity(self.clone())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::GhzSpider => f.write_str("ghz"),
            VertexKind::WSpider => f.write_str("w"),
            VertexKind::ParamState(name) => write!(f, "param({name})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: VertexId,
    pub kind: VertexKind,
    pub inputs: usize,
    pub outputs: usize,
}

impl Vertex {
    pub fn arity(&self, direction: Direction) -> usize {
        match direction {
            Direction::Consumer => self.inputs,
            Direction::Producer => self.outputs,
        }
    }

    /// Kind and arities, the part of a vertex that morphisms must preserve.
    pub fn signature(&self) -> (&VertexKind, usize, usize) {
        (&self.kind, self.inputs, self.outputs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Owner {
    Boundary,
    Vertex(VertexId),
}

/// Producers are vertex outputs and diagram inputs; consumers are vertex
/// inputs and diagram outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Producer,
    Consumer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub owner: Owner,
    pub direction: Direction,
    pub index: usize,
}

impl Port {
    /// Diagram input `index`.
    pub fn input(index: usize) -> Self {
        Port {
            owner: Owner::Boundary,
            direction: Direction::Producer,
            index,
        }
    }

    /// Diagram output `index`.
    pub fn output(index: usize) -> Self {
        Port {
            owner: Owner::Boundary,
            direction: Direction::Consumer,
            index,
        }
    }

    /// Output `index` of vertex `v`.
    pub fn out_of(v: VertexId, index: usize) -> Self {
        Port {
            owner: Owner::Vertex(v),
            direction: Direction::Producer,
            index,
        }
    }

    /// Input `index` of vertex `v`.
    pub fn into(v: VertexId, index: usize) -> Self {
        Port {
            owner: Owner::Vertex(v),
            direction: Direction::Consumer,
            index,
        }
    }

    pub fn vertex(&self) -> Option<VertexId> {
        match self.owner {
            Owner::Vertex(v) => Some(v),
            Owner::Boundary => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        self.owner == Owner::Boundary
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.owner, self.direction) {
            (Owner::Boundary, Direction::Producer) => write!(f, "in[{}]", self.index),
            (Owner::Boundary, Direction::Consumer) => write!(f, "out[{}]", self.index),
            (Owner::Vertex(v), Direction::Producer) => write!(f, "{v}.out[{}]", self.index),
            (Owner::Vertex(v), Direction::Consumer) => write!(f, "{v}.in[{}]", self.index),
        }
    }
}

/// Tick and cross parities carried by a wire.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decoration {
    pub tick: bool,
    pub cross: bool,
}

impl Decoration {
    pub const PLAIN: Decoration = Decoration {
        tick: false,
        cross: false,
    };
    pub const TICK: Decoration = Decoration {
        tick: true,
        cross: false,
    };
    pub const CROSS: Decoration = Decoration {
        tick: false,
        cross: true,
    };

    pub fn new(tick: bool, cross: bool) -> Self {
        Decoration { tick, cross }
    }

    pub fn is_plain(&self) -> bool {
        !self.tick && !self.cross
    }
}

impl BitXor for Decoration {
    type Output = Decoration;

    fn bitxor(self, rhs: Decoration) -> Decoration {
        Decoration {
            tick: self.tick ^ rhs.tick,
            cross: self.cross ^ rhs.cross,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub src: Port,
    pub dst: Port,
    pub deco: Decoration,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("vertex kind {kind} cannot have arity ({inputs}, {outputs})")]
    ArityViolation {
        kind: VertexKind,
        inputs: usize,
        outputs: usize,
    },
    #[error("spider {0} with no legs")]
    ZeroArity(VertexKind),
    #[error("port {0} is already connected")]
    PortTaken(Port),
    #[error("edge {src} -> {dst} must run from a producer to a consumer")]
    DirectionMismatch { src: Port, dst: Port },
    #[error("no such vertex {0}")]
    NoSuchVertex(VertexId),
    #[error("port {0} is out of range")]
    PortOutOfRange(Port),
    #[error("cannot compose: {outputs} outputs against {inputs} inputs")]
    BoundaryMismatch { outputs: usize, inputs: usize },
    #[error("diagram is not valid: {0:?}")]
    Invalid(Vec<Violation>),
}

/// A broken [`Diagram`] invariant, as reported by [`Diagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnconnectedPort(Port),
    DanglingEdge(EdgeId),
    PortReused { port: Port, edges: Vec<EdgeId> },
    PortOutOfRange { edge: EdgeId, port: Port },
    WrongDirection(EdgeId),
    Arity(VertexId, DiagramError),
}

/// An open directed port graph over the GHZ/W generators.
///
/// Ids are opaque; two diagrams that differ only in ids are isomorphic and
/// that is the only notion of identity tests should rely on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    vertices: BTreeMap<VertexId, Vertex>,
    edges: BTreeMap<EdgeId, Edge>,
    n_inputs: usize,
    n_outputs: usize,
    next_vertex: u32,
    next_edge: u32,
}

impl Diagram {
    /// A fragment with the given boundary and nothing else; it only becomes
    /// valid once every boundary port has been connected.
    pub fn with_boundary(n_inputs: usize, n_outputs: usize) -> Self {
        Diagram {
            n_inputs,
            n_outputs,
            ..Diagram::default()
        }
    }

    /// The empty diagram, the scalar 1.
    pub fn empty() -> Self {
        Diagram::default()
    }

    /// `k` parallel wires.
    pub fn identity(k: usize) -> Self {
        let mut d = Diagram::with_boundary(k, k);
        for i in 0..k {
            d.push_edge(Port::input(i), Port::output(i), Decoration::PLAIN);
        }
        d
    }

    /// One wire carrying `deco`.
    pub fn wire(deco: Decoration) -> Self {
        let mut d = Diagram::with_boundary(1, 1);
        d.push_edge(Port::input(0), Port::output(0), deco);
        d
    }

    /// Two crossed wires.
    pub fn swap() -> Self {
        let mut d = Diagram::with_boundary(2, 2);
        d.push_edge(Port::input(0), Port::output(1), Decoration::PLAIN);
        d.push_edge(Port::input(1), Port::output(0), Decoration::PLAIN);
        d
    }

    /// A single vertex whose inputs and outputs are the diagram boundary, in
    /// order.
    pub fn generator(kind: VertexKind, inputs: usize, outputs: usize) -> Result<Self, DiagramError> {
        kind.check_arity(inputs, outputs)?;
        let mut d = Diagram::with_boundary(inputs, outputs);
        let v = d.push_vertex(kind, inputs, outputs);
        for i in 0..inputs {
            d.push_edge(Port::input(i), Port::into(v, i), Decoration::PLAIN);
        }
        for j in 0..outputs {
            d.push_edge(Port::out_of(v, j), Port::output(j), Decoration::PLAIN);
        }
        Ok(d)
    }

    /// Spider of `kind` with `inputs` inputs and `outputs` outputs.
    ///
    /// Panics on a legless spider; use [`Diagram::generator`] for a fallible
    /// version.
    pub fn spider(kind: VertexKind, inputs: usize, outputs: usize) -> Self {
        Diagram::generator(kind, inputs, outputs).expect("spider arity")
    }

    /// The named parameter point, a `(0, 1)` diagram.
    pub fn param(name: impl Into<String>) -> Self {
        Diagram::spider(VertexKind::param(name), 0, 1)
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.n_inputs, self.n_outputs)
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    /// Vertices in id order.
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> + '_ {
        self.vertices.values()
    }

    /// Edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.values()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Returns a copy with a new, unconnected vertex.
    pub fn add_vertex(
        &self,
        kind: VertexKind,
        inputs: usize,
        outputs: usize,
    ) -> Result<(Diagram, VertexId), DiagramError> {
        kind.check_arity(inputs, outputs)?;
        let mut d = self.clone();
        let v = d.push_vertex(kind, inputs, outputs);
        Ok((d, v))
    }

    /// Returns a copy with an edge from `src` to `dst`.
    pub fn connect(&self, src: Port, dst: Port, deco: Decoration) -> Result<Diagram, DiagramError> {
        let mut d = self.clone();
        d.try_push_edge(src, dst, deco)?;
        Ok(d)
    }

    /// Sequential composition: `self` on top, `next` below. Output `i` of
    /// `self` is fused with input `i` of `next` and the decorations of the
    /// two fused wire halves add up by parity.
    pub fn compose_seq(&self, next: &Diagram) -> Result<Diagram, DiagramError> {
        if self.n_outputs != next.n_inputs {
            return Err(DiagramError::BoundaryMismatch {
                outputs: self.n_outputs,
                inputs: next.n_inputs,
            });
        }
        let mut out = Diagram::with_boundary(self.n_inputs, next.n_outputs);
        let first = out.absorb_vertices(self);
        let second = out.absorb_vertices(next);

        let upper_out: HashMap<usize, &Edge> = self
            .edges
            .values()
            .filter(|e| e.dst.is_boundary())
            .map(|e| (e.dst.index, e))
            .collect();

        for e in self.edges.values().filter(|e| !e.dst.is_boundary()) {
            out.push_edge(relabel(e.src, &first), relabel(e.dst, &first), e.deco);
        }
        for e in next.edges.values() {
            let dst = match e.dst.owner {
                Owner::Boundary => e.dst,
                Owner::Vertex(_) => relabel(e.dst, &second),
            };
            match e.src.owner {
                Owner::Vertex(_) => out.push_edge(relabel(e.src, &second), dst, e.deco),
                Owner::Boundary => {
                    let upper = upper_out[&e.src.index];
                    let src = match upper.src.owner {
                        Owner::Boundary => upper.src,
                        Owner::Vertex(_) => relabel(upper.src, &first),
                    };
                    out.push_edge(src, dst, upper.deco ^ e.deco)
                }
            };
        }
        Ok(out)
    }

    /// Monoidal product: `self` to the left of `other`.
    pub fn compose_par(&self, other: &Diagram) -> Diagram {
        let mut out = Diagram::with_boundary(self.n_inputs + other.n_inputs, self.n_outputs + other.n_outputs);
        let left = out.absorb_vertices(self);
        let right = out.absorb_vertices(other);
        for e in self.edges.values() {
            out.push_edge(shift(e.src, &left, 0, 0), shift(e.dst, &left, 0, 0), e.deco);
        }
        for e in other.edges.values() {
            out.push_edge(
                shift(e.src, &right, self.n_inputs, self.n_outputs),
                shift(e.dst, &right, self.n_inputs, self.n_outputs),
                e.deco,
            );
        }
        out
    }

    /// Monoidal product of several diagrams, left to right.
    pub fn tensor_all<'a>(parts: impl IntoIterator<Item = &'a Diagram>) -> Diagram {
        parts.into_iter().fold(Diagram::empty(), |acc, d| acc.compose_par(d))
    }

    /// Lists every broken invariant; empty iff the diagram is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for v in self.vertices.values() {
            if let Err(e) = v.kind.check_arity(v.inputs, v.outputs) {
                violations.push(Violation::Arity(v.id, e));
            }
        }
        let mut uses: BTreeMap<Port, Vec<EdgeId>> = BTreeMap::new();
        for e in self.edges.values() {
            if e.src.direction != Direction::Producer || e.dst.direction != Direction::Consumer {
                violations.push(Violation::WrongDirection(e.id));
            }
            let mut dangling = false;
            for port in [e.src, e.dst] {
                match self.port_arity(port) {
                    None => dangling = true,
                    Some(arity) if port.index >= arity => {
                        violations.push(Violation::PortOutOfRange { edge: e.id, port })
                    }
                    Some(_) => uses.entry(port).or_default().push(e.id),
                }
            }
            if dangling {
                violations.push(Violation::DanglingEdge(e.id));
            }
        }
        for port in self.all_ports() {
            match uses.get(&port) {
                None => violations.push(Violation::UnconnectedPort(port)),
                Some(edges) if edges.len() > 1 => violations.push(Violation::PortReused {
                    port,
                    edges: edges.clone(),
                }),
                Some(_) => {}
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Returns `self` if valid, otherwise the list of violations as an error.
    pub fn checked(self) -> Result<Self, DiagramError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(DiagramError::Invalid(violations))
        }
    }

    /// Every port of the diagram, boundary first, then vertices in id order.
    pub fn all_ports(&self) -> Vec<Port> {
        let mut ports: Vec<Port> = (0..self.n_inputs).map(Port::input).collect();
        ports.extend((0..self.n_outputs).map(Port::output));
        for v in self.vertices.values() {
            ports.extend((0..v.inputs).map(|i| Port::into(v.id, i)));
            ports.extend((0..v.outputs).map(|j| Port::out_of(v.id, j)));
        }
        ports
    }

    /// Map from each connected port to its edge.
    pub fn incidence(&self) -> HashMap<Port, EdgeId> {
        let mut map = HashMap::with_capacity(self.edges.len() * 2);
        for e in self.edges.values() {
            map.insert(e.src, e.id);
            map.insert(e.dst, e.id);
        }
        map
    }

    /// The edge attached to `port`, if any.
    pub fn edge_at(&self, port: Port) -> Option<&Edge> {
        self.edges.values().find(|e| e.src == port || e.dst == port)
    }

    fn port_arity(&self, port: Port) -> Option<usize> {
        match port.owner {
            Owner::Boundary => Some(match port.direction {
                Direction::Producer => self.n_inputs,
                Direction::Consumer => self.n_outputs,
            }),
            Owner::Vertex(v) => self.vertices.get(&v).map(|v| v.arity(port.direction)),
        }
    }

    fn check_free(&self, port: Port, expected: Direction) -> Result<(), DiagramError> {
        let arity = match port.owner {
            Owner::Vertex(v) => self
                .vertices
                .get(&v)
                .ok_or(DiagramError::NoSuchVertex(v))?
                .arity(port.direction),
            Owner::Boundary => self.port_arity(port).unwrap_or(0),
        };
        if port.index >= arity {
            return Err(DiagramError::PortOutOfRange(port));
        }
        if port.direction != expected {
            return Err(DiagramError::DirectionMismatch { src: port, dst: port });
        }
        if self.edge_at(port).is_some() {
            return Err(DiagramError::PortTaken(port));
        }
        Ok(())
    }

    // In-place building blocks. They do not check linearity; the public
    // constructors either check first or build by construction.

    pub(crate) fn push_vertex(&mut self, kind: VertexKind, inputs: usize, outputs: usize) -> VertexId {
        let id = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertices.insert(
            id,
            Vertex {
                id,
                kind,
                inputs,
                outputs,
            },
        );
        id
    }

    pub(crate) fn push_edge(&mut self, src: Port, dst: Port, deco: Decoration) -> EdgeId {
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(id, Edge { id, src, dst, deco });
        id
    }

    pub(crate) fn try_push_edge(&mut self, src: Port, dst: Port, deco: Decoration) -> Result<EdgeId, DiagramError> {
        if src.direction != Direction::Producer || dst.direction != Direction::Consumer {
            return Err(DiagramError::DirectionMismatch { src, dst });
        }
        self.check_free(src, Direction::Producer)?;
        self.check_free(dst, Direction::Consumer)?;
        Ok(self.push_edge(src, dst, deco))
    }

    pub(crate) fn remove_vertex(&mut self, id: VertexId) -> Option<Vertex> {
        self.vertices.remove(&id)
    }

    pub(crate) fn remove_edge(&mut self, id: EdgeId) -> Option<Edge> {
        self.edges.remove(&id)
    }

    pub(crate) fn vertex_mut(&mut self, id: VertexId) -> Option<&mut Vertex> {
        self.vertices.get_mut(&id)
    }

    pub(crate) fn edge_mut(&mut self, id: EdgeId) -> Option<&mut Edge> {
        self.edges.get_mut(&id)
    }

    /// Copies the vertices of `other` in with fresh ids, returning the id map.
    fn absorb_vertices(&mut self, other: &Diagram) -> HashMap<VertexId, VertexId> {
        other
            .vertices
            .values()
            .map(|v| (v.id, self.push_vertex(v.kind.clone(), v.inputs, v.outputs)))
            .collect()
    }
}

fn relabel(port: Port, map: &HashMap<VertexId, VertexId>) -> Port {
    match port.owner {
        Owner::Vertex(v) => Port {
            owner: Owner::Vertex(map[&v]),
            ..port
        },
        Owner::Boundary => port,
    }
}

fn shift(port: Port, map: &HashMap<VertexId, VertexId>, inputs: usize, outputs: usize) -> Port {
    match (port.owner, port.direction) {
        (Owner::Vertex(_), _) => relabel(port, map),
        (Owner::Boundary, Direction::Producer) => Port::input(port.index + inputs),
        (Owner::Boundary, Direction::Consumer) => Port::output(port.index + outputs),
    }
}

/// Incremental, in-place construction of a diagram.
///
/// ```
/// use ghzw_core::diagram::{Builder, Decoration, Port, VertexKind};
///
/// let mut b = Builder::new(0, 1);
/// let unit = b.vertex(VertexKind::WSpider, 0, 1).unwrap();
/// b.connect(Port::out_of(unit, 0), Port::output(0), Decoration::TICK).unwrap();
/// let d = b.finish().unwrap();
/// assert_eq!(d.vertex_count(), 1);
/// ```
#[derive(Clone, Debug, Default)]
pub struct Builder {
    diagram: Diagram,
}

impl Builder {
    pub fn new(n_inputs: usize, n_outputs: usize) -> Self {
        Builder {
            diagram: Diagram::with_boundary(n_inputs, n_outputs),
        }
    }

    pub fn vertex(&mut self, kind: VertexKind, inputs: usize, outputs: usize) -> Result<VertexId, DiagramError> {
        kind.check_arity(inputs, outputs)?;
        Ok(self.diagram.push_vertex(kind, inputs, outputs))
    }

    pub fn connect(&mut self, src: Port, dst: Port, deco: Decoration) -> Result<EdgeId, DiagramError> {
        self.diagram.try_push_edge(src, dst, deco)
    }

    /// Plain edge from output `from_port` of `from` to input `to_port` of `to`.
    pub fn link(
        &mut self,
        from: VertexId,
        from_port: usize,
        to: VertexId,
        to_port: usize,
    ) -> Result<EdgeId, DiagramError> {
        self.connect(
            Port::out_of(from, from_port),
            Port::into(to, to_port),
            Decoration::PLAIN,
        )
    }

    /// The diagram so far, without validation.
    pub fn peek(&self) -> &Diagram {
        &self.diagram
    }

    /// Validates and returns the diagram.
    pub fn finish(self) -> Result<Diagram, DiagramError> {
        self.diagram.checked()
    }
}
