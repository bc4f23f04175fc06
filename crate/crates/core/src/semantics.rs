//! Exact evaluation of diagrams as qubit tensors.
//!
//! Every wire is `C^2` with basis `|0>, |1>`, and every scalar is an exact
//! rational. A diagram with `m` inputs and `n` outputs denotes a tensor of
//! `2^(m+n)` entries, indexed inputs-then-outputs with the lowest-numbered
//! wire as the most significant bit.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::diagram::{Decoration, Diagram, Port, VertexKind, Violation};

pub type Scalar = BigRational;

pub fn scalar(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(p))
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value bound for parameter `{0}`")]
    UnknownParam(String),
    #[error("diagram is not valid: {0:?}")]
    InvalidDiagram(Vec<Violation>),
    #[error("expected a closed diagram, got signature ({0}, {1})")]
    NotClosed(usize, usize),
    #[error("tensor shapes differ: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
}

/// Values for named parameter points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Environment {
    params: BTreeMap<String, [Scalar; 2]>,
}

impl Environment {
    pub fn new() -> Self {
        Environment::default()
    }

    pub fn with(mut self, name: impl Into<String>, zero: Scalar, one: Scalar) -> Self {
        self.insert(name, zero, one);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, zero: Scalar, one: Scalar) {
        self.params.insert(name.into(), [zero, one]);
    }

    pub fn get(&self, name: &str) -> Option<&[Scalar; 2]> {
        self.params.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &[Scalar; 2])> {
        self.params.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Binds every name of `other` over the bindings of `self`.
    pub fn overlay(&self, other: &Environment) -> Environment {
        let mut out = self.clone();
        for (k, v) in &other.params {
            out.params.insert(k.clone(), v.clone());
        }
        out
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .params
            .iter()
            .map(|(k, [a, b])| format!("{k}={}|0>+{}|1>", format_scalar(a), format_scalar(b)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A dense tensor with an input/output split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    n_inputs: usize,
    n_outputs: usize,
    entries: Vec<Scalar>,
}

impl Tensor {
    pub fn new(n_inputs: usize, n_outputs: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), 1 << (n_inputs + n_outputs), "tensor length");
        Tensor {
            n_inputs,
            n_outputs,
            entries,
        }
    }

    pub fn zeros(n_inputs: usize, n_outputs: usize) -> Self {
        Tensor::new(n_inputs, n_outputs, vec![Scalar::zero(); 1 << (n_inputs + n_outputs)])
    }

    pub fn from_ints(n_inputs: usize, n_outputs: usize, entries: &[i64]) -> Self {
        Tensor::new(n_inputs, n_outputs, entries.iter().map(|&x| int(x)).collect())
    }

    /// Builds a `rows x cols` matrix view, `rows = 2^outputs`, in the usual
    /// `out <- in` orientation.
    pub fn from_matrix(n_inputs: usize, n_outputs: usize, rows: &[&[i64]]) -> Self {
        let mut t = Tensor::zeros(n_inputs, n_outputs);
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                t.entries[(c << n_outputs) | r] = int(x);
            }
        }
        t
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Entry at the given input and output basis indices.
    pub fn get(&self, input: usize, output: usize) -> &Scalar {
        &self.entries[(input << self.n_outputs) | output]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, by: &Scalar) -> Tensor {
        Tensor {
            n_inputs: self.n_inputs,
            n_outputs: self.n_outputs,
            entries: self.entries.iter().map(|x| x * by).collect(),
        }
    }

    /// Matrix product `self ∘ first` (apply `first`, then `self`).
    pub fn after(&self, first: &Tensor) -> Tensor {
        assert_eq!(first.n_outputs, self.n_inputs, "composable tensors");
        let mut out = Tensor::zeros(first.n_inputs, self.n_outputs);
        for i in 0..1usize << first.n_inputs {
            for k in 0..1usize << first.n_outputs {
                let a = first.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..1usize << self.n_outputs {
                    let b = self.get(k, j);
                    if !b.is_zero() {
                        out.entries[(i << self.n_outputs) | j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Tensor (Kronecker) product, `self` on the left.
    pub fn kron(&self, other: &Tensor) -> Tensor {
        let (mi, mo, ni, no) = (self.n_inputs, self.n_outputs, other.n_inputs, other.n_outputs);
        let mut out = Tensor::zeros(mi + ni, mo + no);
        for i1 in 0..1usize << mi {
            for o1 in 0..1usize << mo {
                let a = self.get(i1, o1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..1usize << ni {
                    for o2 in 0..1usize << no {
                        let b = other.get(i2, o2);
                        let idx = (((i1 << ni) | i2) << (mo + no)) | (o1 << no) | o2;
                        out.entries[idx] = a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tensor {} -> {}", self.n_inputs, self.n_outputs)?;
        for i in 0..1usize << self.n_inputs {
            let row: Vec<String> = (0..1usize << self.n_outputs)
                .map(|o| format_scalar(self.get(i, o)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `λ` with `a = λ·b` and `λ ≠ 0`, if one exists. Two zero tensors are
/// related by `λ = 1`.
pub fn proj_equal(a: &Tensor, b: &Tensor) -> Result<Option<Scalar>, EvalError> {
    if (a.n_inputs, a.n_outputs) != (b.n_inputs, b.n_outputs) {
        return Err(EvalError::ShapeMismatch(
            a.n_inputs,
            a.n_outputs,
            b.n_inputs,
            b.n_outputs,
        ));
    }
    let Some(k) = b.entries.iter().position(|x| !x.is_zero()) else {
        return Ok(a.is_zero().then(Scalar::one));
    };
    let lambda = &a.entries[k] / &b.entries[k];
    if lambda.is_zero() {
        return Ok(None);
    }
    let same = a.entries.iter().zip(&b.entries).all(|(x, y)| *x == &lambda * y);
    Ok(same.then_some(lambda))
}

/// Boolean shorthand for [`proj_equal`].
pub fn projectively_equal(a: &Tensor, b: &Tensor) -> bool {
    matches!(proj_equal(a, b), Ok(Some(_)))
}

/// The tensor of a single generator with its ports in order.
pub fn generator_tensor(
    kind: &VertexKind,
    inputs: usize,
    outputs: usize,
    env: &Environment,
) -> Result<Tensor, EvalError> {
    let mut t = Tensor::zeros(inputs, outputs);
    for (i, x) in generator_entries(kind, inputs, outputs, env)? {
        t.entries[i] = x;
    }
    Ok(t)
}

/// The nonzero entries of a generator, by index `(in << outputs) | out`.
/// W spiders have only `n + 1` of them, so this stays small where the
/// dense tensor would not.
fn generator_entries(
    kind: &VertexKind,
    inputs: usize,
    outputs: usize,
    env: &Environment,
) -> Result<Vec<(usize, Scalar)>, EvalError> {
    let mut out = Vec::new();
    match kind {
        VertexKind::GhzSpider => {
            let top = (((1usize << inputs) - 1) << outputs) | ((1usize << outputs) - 1);
            if top == 0 {
                out.push((0, int(2)));
            } else {
                out.push((0, Scalar::one()));
                out.push((top, Scalar::one()));
            }
        }
        VertexKind::WSpider => {
            // multiplication: all ones -> |1>, exactly one zero -> |0>;
            // comultiplication: |0> -> |0..0>, |1> -> sum of single ones
            let all = (1usize << inputs) - 1;
            for o in 0..outputs {
                out.push(((all << outputs) | (1 << o), Scalar::one()));
            }
            for z in 0..inputs {
                out.push(((all & !(1 << z)) << outputs, Scalar::one()));
            }
        }
        VertexKind::ParamState(name) => {
            let v = env.get(name).ok_or_else(|| EvalError::UnknownParam(name.clone()))?;
            if inputs == 0 && outputs == 1 {
                out.extend(v.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()));
            }
        }
    }
    Ok(out)
}

/// The 2x2 matrix of a decorated wire, as `[dst][src]`.
fn decoration_matrix(deco: Decoration) -> [[i64; 2]; 2] {
    let tick = if deco.tick { [[0, 1], [1, 0]] } else { [[1, 0], [0, 1]] };
    // cross = diag(-1, 1), applied after the tick
    let sign = if deco.cross { [-1, 1] } else { [1, 1] };
    [
        [sign[0] * tick[0][0], sign[0] * tick[0][1]],
        [sign[1] * tick[1][0], sign[1] * tick[1][1]],
    ]
}

/// A sparse tensor whose legs carry contraction labels. Bit `rank - 1 - k`
/// of an index is the value on leg `k`.
#[derive(Clone, Debug)]
struct Labelled {
    legs: Vec<usize>,
    data: HashMap<usize, Scalar>,
}

impl Labelled {
    fn new(legs: Vec<usize>, entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let data = entries.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        Labelled { legs, data }
    }

    /// Gathers the bits of `index` at leg positions `at` into a packed key.
    fn gather(index: usize, at: &[usize], rank: usize) -> usize {
        at.iter()
            .fold(0, |key, &leg| (key << 1) | ((index >> (rank - 1 - leg)) & 1))
    }

    /// Sums over the shared legs, joining entries on their shared bits.
    fn contract(&self, other: &Labelled) -> Labelled {
        let shared_a: Vec<usize> = (0..self.legs.len())
            .filter(|&i| other.legs.contains(&self.legs[i]))
            .collect();
        let shared_b: Vec<usize> = shared_a
            .iter()
            .map(|&i| other.legs.iter().position(|l| *l == self.legs[i]).unwrap())
            .collect();
        let free_a: Vec<usize> = (0..self.legs.len()).filter(|i| !shared_a.contains(i)).collect();
        let free_b: Vec<usize> = (0..other.legs.len()).filter(|j| !shared_b.contains(j)).collect();
        let legs: Vec<usize> = free_a
            .iter()
            .map(|&i| self.legs[i])
            .chain(free_b.iter().map(|&j| other.legs[j]))
            .collect();
        let (ra, rb) = (self.legs.len(), other.legs.len());

        let mut index: HashMap<usize, Vec<(usize, &Scalar)>> = HashMap::new();
        for (&ib, b) in &other.data {
            let key = Self::gather(ib, &shared_b, rb);
            index.entry(key).or_default().push((Self::gather(ib, &free_b, rb), b));
        }
        let mut data: HashMap<usize, Scalar> = HashMap::new();
        for (&ia, a) in &self.data {
            let Some(hits) = index.get(&Self::gather(ia, &shared_a, ra)) else {
                continue;
            };
            let high = Self::gather(ia, &free_a, ra) << free_b.len();
            for (low, b) in hits {
                *data.entry(high | low).or_insert_with(Scalar::zero) += a * *b;
            }
        }
        data.retain(|_, x| !x.is_zero());
        Labelled { legs, data }
    }

    fn is_zero(&self) -> bool {
        self.data.is_empty()
    }
}

/// Contracts the tensor network of `d`.
///
/// Each edge `e` contributes a 2x2 tensor on labels `2e` (source end) and
/// `2e+1` (destination end); each vertex a generator tensor on the labels of
/// its ports. Pairs are contracted greedily by smallest resulting rank, and
/// whatever remains disconnected is joined by outer product.
pub fn evaluate(d: &Diagram, env: &Environment) -> Result<Tensor, EvalError> {
    let violations = d.validate();
    if !violations.is_empty() {
        return Err(EvalError::InvalidDiagram(violations));
    }

    let mut end_label = HashMap::new();
    let mut network = Vec::with_capacity(d.vertex_count() + d.edge_count());
    for (k, e) in d.edges().enumerate() {
        let (s, t) = (2 * k, 2 * k + 1);
        // a plain edge between different owners is just a shared label
        let shared = e.deco.is_plain() && e.src.owner != e.dst.owner;
        end_label.insert(e.src, s);
        end_label.insert(e.dst, if shared { s } else { t });
        if !shared {
            let m = decoration_matrix(e.deco);
            let entries = [(0, m[0][0]), (1, m[1][0]), (2, m[0][1]), (3, m[1][1])];
            network.push(Labelled::new(vec![s, t], entries.map(|(i, x)| (i, int(x)))));
        }
    }
    for v in d.vertices() {
        let entries = generator_entries(&v.kind, v.inputs, v.outputs, env)?;
        let legs = (0..v.inputs)
            .map(|i| end_label[&Port::into(v.id, i)])
            .chain((0..v.outputs).map(|j| end_label[&Port::out_of(v.id, j)]))
            .collect();
        network.push(Labelled::new(legs, entries));
    }

    let free: Vec<usize> = (0..d.n_inputs())
        .map(|i| end_label[&Port::input(i)])
        .chain((0..d.n_outputs()).map(|j| end_label[&Port::output(j)]))
        .collect();

    if network.iter().any(Labelled::is_zero) {
        return Ok(Tensor::zeros(d.n_inputs(), d.n_outputs()));
    }

    // tensors are addressed by slot; contracted ones leave a None behind
    let mut slots: Vec<Option<Labelled>> = network.into_iter().map(Some).collect();
    let mut holders: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, t) in slots.iter().enumerate() {
        for &l in &t.as_ref().unwrap().legs {
            holders.entry(l).or_default().push(i);
        }
    }
    let mut live = slots.len();
    while live > 1 {
        let mut shared: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for h in holders.values() {
            if let [a, b] = h[..] {
                *shared.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let best = shared
            .iter()
            .map(|(&(i, j), &s)| {
                let rank = slots[i].as_ref().unwrap().legs.len() + slots[j].as_ref().unwrap().legs.len() - 2 * s;
                (rank, i, j)
            })
            .min();
        let (i, j) = match best {
            Some((_, i, j)) => (i, j),
            None => {
                // disconnected pieces: take an outer product of the first two
                let mut it = (0..slots.len()).filter(|&k| slots[k].is_some());
                (it.next().unwrap(), it.next().unwrap())
            }
        };
        let a = slots[i].take().unwrap();
        let b = slots[j].take().unwrap();
        let c = a.contract(&b);
        if c.is_zero() {
            return Ok(Tensor::zeros(d.n_inputs(), d.n_outputs()));
        }
        for l in a.legs.iter().chain(&b.legs) {
            if let Some(h) = holders.get_mut(l) {
                h.retain(|&k| k != i && k != j);
                if h.is_empty() {
                    holders.remove(l);
                }
            }
        }
        let k = slots.len();
        for &l in &c.legs {
            holders.entry(l).or_default().push(k);
        }
        slots.push(Some(c));
        live -= 1;
    }
    let mut network: Vec<Labelled> = slots.into_iter().flatten().collect();

    let result = network
        .pop()
        .unwrap_or_else(|| Labelled::new(Vec::new(), [(0, Scalar::one())]));
    Ok(Tensor::new(d.n_inputs(), d.n_outputs(), permute(&result, &free)))
}

fn permute(t: &Labelled, order: &[usize]) -> Vec<Scalar> {
    let rank = order.len();
    let positions: Vec<usize> = order
        .iter()
        .map(|l| t.legs.iter().position(|m| m == l).expect("free leg"))
        .collect();
    let mut out = vec![Scalar::zero(); 1 << rank];
    for (&src, x) in &t.data {
        out[Labelled::gather(src, &positions, rank)] = x.clone();
    }
    out
}

/// The value of a closed diagram.
pub fn scalar_value(d: &Diagram, env: &Environment) -> Result<Scalar, EvalError> {
    if d.signature() != (0, 0) {
        return Err(EvalError::NotClosed(d.n_inputs(), d.n_outputs()));
    }
    Ok(evaluate(d, env)?.entries[0].clone())
}
