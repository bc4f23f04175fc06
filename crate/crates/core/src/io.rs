//! JSON documents for diagrams, pattern graphs and rules.
//!
//! The schema is strict: unknown fields are rejected and every document
//! carries a `version`. Output is canonical: vertices are renumbered in id
//! order starting from 0, edges are sorted, and keys come out in a fixed
//! order, so equal inputs serialize to identical bytes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bang::{BangBox, BangError, PatternGraph};
use crate::diagram::{Builder, Decoration, Diagram, DiagramError, Direction, Owner, Port, VertexId, VertexKind};
use crate::rules::{RewriteRule, RuleError};
use crate::semantics::{Environment, Scalar};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unsupported version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error("validation error: {0}")]
    Validation(#[from] DiagramError),
    #[error("box error: {0}")]
    Box(#[from] BangError),
    #[error("rule error: {0}")]
    Rule(#[from] RuleError),
    #[error("expected a {expected} document, found a {found} document")]
    WrongDocument {
        expected: &'static str,
        found: &'static str,
    },
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Schema(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Ghz,
    W,
    Param,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: u32,
    kind: KindDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(rename = "in")]
    inputs: usize,
    #[serde(rename = "out")]
    outputs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum OwnerDoc {
    Vertex(u32),
    Boundary(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    src: (OwnerDoc, usize),
    dst: (OwnerDoc, usize),
    #[serde(default)]
    tick: bool,
    #[serde(default)]
    cross: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxDoc {
    id: String,
    vertices: Vec<u32>,
}

type ParamsDoc = BTreeMap<String, [[i64; 2]; 2]>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    version: u32,
    inputs: usize,
    outputs: usize,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boxes: Option<Vec<BoxDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<ParamsDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    version: u32,
    name: String,
    #[serde(default)]
    provenance: String,
    #[serde(default)]
    scalar_exact: bool,
    lhs: DiagramDoc,
    rhs: DiagramDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvDoc {
    version: u32,
    params: ParamsDoc,
}

/// A parsed document of any of the three kinds. Parameter values given in
/// a diagram or pattern document come back as an [`Environment`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Diagram(Diagram, Environment),
    Pattern(PatternGraph, Environment),
    Rule(RewriteRule),
}

impl Document {
    fn kind(&self) -> &'static str {
        match self {
            Document::Diagram(..) => "diagram",
            Document::Pattern(..) => "pattern",
            Document::Rule(_) => "rule",
        }
    }
}

fn check_version(v: u32) -> Result<(), IoError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(IoError::Version(v))
    }
}

fn owner_doc(owner: Owner, dense: &BTreeMap<VertexId, u32>, direction: Direction) -> OwnerDoc {
    match owner {
        Owner::Vertex(v) => OwnerDoc::Vertex(dense[&v]),
        Owner::Boundary => OwnerDoc::Boundary(
            match direction {
                Direction::Producer => "in",
                Direction::Consumer => "out",
            }
            .to_string(),
        ),
    }
}

fn scalar_pair(s: &Scalar) -> Result<[i64; 2], IoError> {
    let p: i64 = s
        .numer()
        .try_into()
        .map_err(|_| IoError::Schema(format!("scalar {s} does not fit in 64 bits")))?;
    let q: i64 = s
        .denom()
        .try_into()
        .map_err(|_| IoError::Schema(format!("scalar {s} does not fit in 64 bits")))?;
    Ok([p, q])
}

fn params_doc(env: &Environment) -> Result<Option<ParamsDoc>, IoError> {
    if env.is_empty() {
        return Ok(None);
    }
    env.iter()
        .map(|(k, [a, b])| Ok((k.clone(), [scalar_pair(a)?, scalar_pair(b)?])))
        .collect::<Result<_, IoError>>()
        .map(Some)
}

fn params_env(doc: Option<&ParamsDoc>) -> Result<Environment, IoError> {
    let mut env = Environment::new();
    for (name, pair) in doc.into_iter().flatten() {
        let mut v = Vec::new();
        for [p, q] in pair {
            if *q == 0 {
                return Err(IoError::Schema(format!("param `{name}` has a zero denominator")));
            }
            v.push(BigRational::new(BigInt::from(*p), BigInt::from(*q)));
        }
        let b = v.pop().unwrap();
        let a = v.pop().unwrap();
        env.insert(name.clone(), a, b);
    }
    Ok(env)
}

fn diagram_doc(d: &Diagram, boxes: &[BangBox], env: &Environment) -> Result<DiagramDoc, IoError> {
    let dense: BTreeMap<VertexId, u32> = d.vertices().enumerate().map(|(i, v)| (v.id, i as u32)).collect();
    let vertices = d
        .vertices()
        .map(|v| {
            let (kind, name) = match &v.kind {
                VertexKind::GhzSpider => (KindDoc::Ghz, None),
                VertexKind::WSpider => (KindDoc::W, None),
                VertexKind::ParamState(n) => (KindDoc::Param, Some(n.clone())),
            };
            VertexDoc {
                id: dense[&v.id],
                kind,
                name,
                inputs: v.inputs,
                outputs: v.outputs,
            }
        })
        .collect();
    // sort on the renumbered ports so the order does not depend on old ids
    let key = |p: Port| {
        let owner = match p.owner {
            Owner::Boundary => None,
            Owner::Vertex(v) => Some(dense[&v]),
        };
        (owner, p.direction, p.index)
    };
    let mut edges: Vec<_> = d.edges().collect();
    edges.sort_by_key(|e| (key(e.src), key(e.dst)));
    let edges = edges
        .into_iter()
        .map(|e| EdgeDoc {
            src: (owner_doc(e.src.owner, &dense, Direction::Producer), e.src.index),
            dst: (owner_doc(e.dst.owner, &dense, Direction::Consumer), e.dst.index),
            tick: e.deco.tick,
            cross: e.deco.cross,
        })
        .collect();
    let boxes = if boxes.is_empty() {
        None
    } else {
        Some(
            boxes
                .iter()
                .map(|b| BoxDoc {
                    id: b.id.clone(),
                    vertices: b.contents.iter().map(|v| dense[v]).collect(),
                })
                .collect(),
        )
    };
    Ok(DiagramDoc {
        version: FORMAT_VERSION,
        inputs: d.n_inputs(),
        outputs: d.n_outputs(),
        vertices,
        edges,
        boxes,
        params: params_doc(env)?,
    })
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn serialize_diagram(d: &Diagram) -> String {
    serialize_diagram_with(d, &Environment::new()).expect("no parameters to encode")
}

/// A diagram together with parameter values.
pub fn serialize_diagram_with(d: &Diagram, env: &Environment) -> Result<String, IoError> {
    Ok(to_text(&diagram_doc(d, &[], env)?))
}

pub fn serialize_pattern(p: &PatternGraph) -> String {
    to_text(&diagram_doc(p.base(), p.boxes(), &Environment::new()).expect("no parameters to encode"))
}

pub fn serialize_rule(r: &RewriteRule) -> String {
    let none = Environment::new();
    to_text(&RuleDoc {
        version: FORMAT_VERSION,
        name: r.name.clone(),
        provenance: r.provenance.clone(),
        scalar_exact: r.scalar_exact,
        lhs: diagram_doc(&r.lhs, &[], &none).expect("no parameters"),
        rhs: diagram_doc(&r.rhs, &[], &none).expect("no parameters"),
    })
}

pub fn serialize_environment(env: &Environment) -> Result<String, IoError> {
    Ok(to_text(&EnvDoc {
        version: FORMAT_VERSION,
        params: params_doc(env)?.unwrap_or_default(),
    }))
}

fn port(
    owner: &OwnerDoc,
    index: usize,
    direction: Direction,
    ids: &BTreeMap<u32, VertexId>,
    edge: usize,
) -> Result<Port, IoError> {
    match owner {
        OwnerDoc::Vertex(id) => {
            let v = ids
                .get(id)
                .ok_or_else(|| IoError::Schema(format!("edge {edge} refers to missing vertex {id}")))?;
            Ok(Port {
                owner: Owner::Vertex(*v),
                direction,
                index,
            })
        }
        OwnerDoc::Boundary(s) => match (s.as_str(), direction) {
            ("in", Direction::Producer) => Ok(Port::input(index)),
            ("out", Direction::Consumer) => Ok(Port::output(index)),
            _ => Err(IoError::Schema(format!(
                "edge {edge}: boundary owner `{s}` cannot be an edge {}",
                if direction == Direction::Producer {
                    "source"
                } else {
                    "target"
                }
            ))),
        },
    }
}

fn build(doc: &DiagramDoc) -> Result<(Diagram, BTreeMap<u32, VertexId>), IoError> {
    check_version(doc.version)?;
    let mut b = Builder::new(doc.inputs, doc.outputs);
    let mut ids = BTreeMap::new();
    for v in &doc.vertices {
        let kind = match (v.kind, &v.name) {
            (KindDoc::Ghz, None) => VertexKind::GhzSpider,
            (KindDoc::W, None) => VertexKind::WSpider,
            (KindDoc::Param, Some(n)) => VertexKind::ParamState(n.clone()),
            (KindDoc::Param, None) => return Err(IoError::Schema(format!("param vertex {} has no name", v.id))),
            (_, Some(_)) => {
                return Err(IoError::Schema(format!(
                    "vertex {} is not a param and cannot have a name",
                    v.id
                )))
            }
        };
        let id = b.vertex(kind, v.inputs, v.outputs)?;
        if ids.insert(v.id, id).is_some() {
            return Err(IoError::Schema(format!("duplicate vertex id {}", v.id)));
        }
    }
    for (n, e) in doc.edges.iter().enumerate() {
        let src = port(&e.src.0, e.src.1, Direction::Producer, &ids, n)?;
        let dst = port(&e.dst.0, e.dst.1, Direction::Consumer, &ids, n)?;
        b.connect(src, dst, Decoration::new(e.tick, e.cross))?;
    }
    Ok((b.finish()?, ids))
}

fn pattern_from(doc: &DiagramDoc) -> Result<PatternGraph, IoError> {
    let (d, ids) = build(doc)?;
    let mut boxes = Vec::new();
    for b in doc.boxes.iter().flatten() {
        let mut contents = Vec::new();
        for v in &b.vertices {
            contents.push(
                *ids.get(v)
                    .ok_or_else(|| IoError::Schema(format!("box `{}` refers to missing vertex {v}", b.id)))?,
            );
        }
        boxes.push(BangBox::new(b.id.clone(), contents));
    }
    Ok(PatternGraph::new(d, boxes)?)
}

/// Parses any document; the kind is recognised by its keys: `lhs` for a
/// rule, `boxes` for a pattern, otherwise a diagram.
pub fn parse(text: &str) -> Result<Document, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let has = |k: &str| value.get(k).is_some();
    if has("lhs") {
        let doc: RuleDoc = serde_json::from_value(value)?;
        check_version(doc.version)?;
        let (lhs, _) = build(&doc.lhs)?;
        let (rhs, _) = build(&doc.rhs)?;
        return Ok(Document::Rule(RewriteRule::new(
            doc.name,
            lhs,
            rhs,
            doc.provenance,
            doc.scalar_exact,
        )?));
    }
    let doc: DiagramDoc = serde_json::from_value(value)?;
    let env = params_env(doc.params.as_ref())?;
    if doc.boxes.is_some() {
        Ok(Document::Pattern(pattern_from(&doc)?, env))
    } else {
        Ok(Document::Diagram(build(&doc)?.0, env))
    }
}

pub fn parse_diagram(text: &str) -> Result<(Diagram, Environment), IoError> {
    match parse(text)? {
        Document::Diagram(d, env) => Ok((d, env)),
        other => Err(IoError::WrongDocument {
            expected: "diagram",
            found: other.kind(),
        }),
    }
}

pub fn parse_pattern(text: &str) -> Result<PatternGraph, IoError> {
    match parse(text)? {
        Document::Pattern(p, _) => Ok(p),
        Document::Diagram(d, _) => Ok(PatternGraph::concrete(d)?),
        other => Err(IoError::WrongDocument {
            expected: "pattern",
            found: other.kind(),
        }),
    }
}

pub fn parse_rule(text: &str) -> Result<RewriteRule, IoError> {
    match parse(text)? {
        Document::Rule(r) => Ok(r),
        other => Err(IoError::WrongDocument {
            expected: "rule",
            found: other.kind(),
        }),
    }
}

pub fn parse_environment(text: &str) -> Result<Environment, IoError> {
    let doc: EnvDoc = serde_json::from_str(text)?;
    check_version(doc.version)?;
    params_env(Some(&doc.params))
}
