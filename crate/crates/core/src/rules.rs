//! Concrete rewrite rules, their semantic soundness oracle, and the
//! plugging-based equality check.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::diagram::{Builder, Decoration, Diagram, Port, VertexKind};
use crate::semantics::{evaluate, int, proj_equal, scalar, Environment, EvalError, Scalar};
use crate::shapes::{
    self, circle, comult, counit, decorate_input, decorate_output, mult, par, seq, unit, wire, Colour,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule `{name}`: sides have signatures {lhs:?} and {rhs:?}")]
    BoundaryMismatch {
        name: String,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("rule `{0}`: a side is not a valid diagram")]
    InvalidSide(String),
    #[error("rule `{0}`: left-hand side has a wire running straight from input to output")]
    BareLhsWire(String),
    #[error("rule `{0}`: left-hand side has no vertices")]
    EmptyLhs(String),
    #[error("duplicate rule name `{0}`")]
    DuplicateName(String),
    #[error("wire {wire} out of range for {inputs} inputs")]
    BadWireIndex { wire: usize, inputs: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A directed equation `lhs => rhs` between diagrams with the same boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: Diagram,
    pub rhs: Diagram,
    pub provenance: String,
    /// Both sides denote the same tensor, not merely proportional ones.
    pub scalar_exact: bool,
}

impl RewriteRule {
    /// Checks the shape constraints the matcher relies on: equal
    /// signatures, valid sides, and an LHS whose boundary wires all end on
    /// vertices.
    pub fn new(
        name: impl Into<String>,
        lhs: Diagram,
        rhs: Diagram,
        provenance: impl Into<String>,
        scalar_exact: bool,
    ) -> Result<Self, RuleError> {
        let name = name.into();
        if lhs.signature() != rhs.signature() {
            return Err(RuleError::BoundaryMismatch {
                name,
                lhs: lhs.signature(),
                rhs: rhs.signature(),
            });
        }
        if !lhs.is_valid() || !rhs.is_valid() {
            return Err(RuleError::InvalidSide(name));
        }
        if lhs.vertex_count() == 0 {
            return Err(RuleError::EmptyLhs(name));
        }
        if lhs.edges().any(|e| e.src.is_boundary() && e.dst.is_boundary()) {
            return Err(RuleError::BareLhsWire(name));
        }
        Ok(RewriteRule {
            name,
            lhs,
            rhs,
            provenance: provenance.into(),
            scalar_exact,
        })
    }

    /// Names of all parameter points on either side.
    pub fn param_names(&self) -> BTreeSet<String> {
        param_names(&self.lhs).union(&param_names(&self.rhs)).cloned().collect()
    }

    /// The same rule read right to left.
    pub fn reversed(&self) -> Result<Self, RuleError> {
        RewriteRule::new(
            format!("{}_rev", self.name),
            self.rhs.clone(),
            self.lhs.clone(),
            self.provenance.clone(),
            self.scalar_exact,
        )
    }
}

pub fn param_names(d: &Diagram) -> BTreeSet<String> {
    d.vertices()
        .filter_map(|v| match &v.kind {
            VertexKind::ParamState(name) => Some(name.clone()),
            _ => None,
        })
        .collect()
}

/// An ordered list of rules with unique names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<RewriteRule>,
}

impl RuleSet {
    pub fn new() -> Self {
        RuleSet::default()
    }

    pub fn from_rules(rules: impl IntoIterator<Item = RewriteRule>) -> Result<Self, RuleError> {
        let mut set = RuleSet::new();
        for r in rules {
            set.push(r)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, rule: RewriteRule) -> Result<(), RuleError> {
        if self.get(&rule.name).is_some() {
            return Err(RuleError::DuplicateName(rule.name));
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RewriteRule> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().map(|r| r.name.as_str())
    }
}

impl<'a> IntoIterator for &'a RuleSet {
    type Item = &'a RewriteRule;
    type IntoIter = std::slice::Iter<'a, RewriteRule>;

    fn into_iter(self) -> Self::IntoIter {
        self.rules.iter()
    }
}

/// Outcome of one environment in a soundness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome {
    pub env: Environment,
    pub lambda: Option<Scalar>,
    pub pass: bool,
    pub error: Option<EvalError>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub rule: String,
    pub samples: Vec<SampleOutcome>,
    pub pass: bool,
}

impl SoundnessReport {
    pub fn first_counterexample(&self) -> Option<&SampleOutcome> {
        self.samples.iter().find(|s| !s.pass)
    }
}

/// Evaluates both sides under each environment and compares projectively,
/// demanding `λ = 1` when the rule claims to be scalar-exact.
pub fn check_rule_soundness(rule: &RewriteRule, envs: &[Environment]) -> SoundnessReport {
    let default = [Environment::new()];
    let envs = if envs.is_empty() { &default[..] } else { envs };
    let samples: Vec<SampleOutcome> = envs
        .iter()
        .map(|env| {
            let sides = evaluate(&rule.lhs, env).and_then(|l| Ok((l, evaluate(&rule.rhs, env)?)));
            match sides.and_then(|(l, r)| proj_equal(&l, &r)) {
                Ok(lambda) => {
                    let pass = match &lambda {
                        Some(l) => !rule.scalar_exact || *l == int(1),
                        None => false,
                    };
                    SampleOutcome {
                        env: env.clone(),
                        lambda,
                        pass,
                        error: None,
                    }
                }
                Err(e) => SampleOutcome {
                    env: env.clone(),
                    lambda: None,
                    pass: false,
                    error: Some(e),
                },
            }
        })
        .collect();
    let pass = samples.iter().all(|s| s.pass);
    SoundnessReport {
        rule: rule.name.clone(),
        samples,
        pass,
    }
}

/// A nonzero vector with entries in `{-3..3}/{1..3}`.
pub fn random_vector(rng: &mut impl Rng) -> [Scalar; 2] {
    loop {
        let a = scalar(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        let b = scalar(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        if a != int(0) || b != int(0) {
            return [a, b];
        }
    }
}

/// `count` environments binding every name to an independent random vector.
pub fn random_environments<'a>(
    names: impl IntoIterator<Item = &'a String> + Clone,
    count: usize,
    seed: u64,
) -> Vec<Environment> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut env = Environment::new();
            for name in names.clone() {
                let [a, b] = random_vector(&mut rng);
                env.insert(name.clone(), a, b);
            }
            env
        })
        .collect()
}

/// Environments binding every name to the encoded natural `n`, i.e.
/// `n|0> + |1>`, for each `n` in `range`.
pub fn nat_environments<'a>(
    names: impl IntoIterator<Item = &'a String> + Clone,
    range: std::ops::RangeInclusive<i64>,
) -> Vec<Environment> {
    range
        .map(|n| {
            let mut env = Environment::new();
            for name in names.clone() {
                env.insert(name.clone(), int(n), int(1));
            }
            env
        })
        .collect()
}

/// The standard sample set for a rule: 20 random environments plus the
/// encoded naturals 0..=4. Rules without parameters get a single empty
/// environment.
pub fn standard_samples(rule: &RewriteRule, seed: u64) -> Vec<Environment> {
    samples(rule, 20, seed)
}

/// As [`standard_samples`] with `count` random environments.
pub fn samples(rule: &RewriteRule, count: usize, seed: u64) -> Vec<Environment> {
    let names = rule.param_names();
    if names.is_empty() {
        return vec![Environment::new()];
    }
    let mut envs = random_environments(&names, count, seed);
    envs.extend(nat_environments(&names, 0..=4));
    envs
}

fn rule(name: &str, lhs: Diagram, rhs: Diagram, provenance: &str) -> RewriteRule {
    RewriteRule::new(name, lhs, rhs, provenance, true).expect("well-formed builtin rule")
}

/// W multiplication with its output fed back into its second input: the
/// `(1, 0)` loop.
fn black_loop_effect() -> Diagram {
    let mut b = Builder::new(1, 0);
    let v = b.vertex(VertexKind::WSpider, 2, 1).expect("arity");
    b.connect(Port::input(0), Port::into(v, 0), Decoration::PLAIN)
        .expect("free");
    b.link(v, 0, v, 1).expect("free");
    b.finish().expect("valid")
}

/// W comultiplication with its second output fed back into its input: the
/// `(0, 1)` loop, drawn as a lollipop.
fn black_lollipop() -> Diagram {
    let mut b = Builder::new(0, 1);
    let v = b.vertex(VertexKind::WSpider, 1, 2).expect("arity");
    b.link(v, 1, v, 0).expect("free");
    b.connect(Port::out_of(v, 0), Port::output(0), Decoration::PLAIN)
        .expect("free");
    b.finish().expect("valid")
}

fn frobenius_rules(c: Colour) -> Vec<RewriteRule> {
    let n = c.name();
    let (m, d, u, e) = (mult(c), comult(c), unit(c), counit(c));
    let w = wire();
    let prov = "commutative Frobenius algebra axioms";
    vec![
        rule(
            &format!("{n}_assoc"),
            seq(&par(&m, &w), &m),
            seq(&par(&w, &m), &m),
            prov,
        ),
        rule(&format!("{n}_comm"), seq(&Diagram::swap(), &m), m.clone(), prov),
        rule(&format!("{n}_unit"), seq(&par(&u, &w), &m), w.clone(), prov),
        rule(&format!("{n}_unit_right"), seq(&par(&w, &u), &m), w.clone(), prov),
        rule(
            &format!("{n}_coassoc"),
            seq(&d, &par(&d, &w)),
            seq(&d, &par(&w, &d)),
            prov,
        ),
        rule(&format!("{n}_cocomm"), seq(&d, &Diagram::swap()), d.clone(), prov),
        rule(&format!("{n}_counit"), seq(&d, &par(&e, &w)), w.clone(), prov),
        rule(&format!("{n}_counit_right"), seq(&d, &par(&w, &e)), w.clone(), prov),
        rule(
            &format!("{n}_frobenius"),
            seq(&par(&w, &d), &par(&m, &w)),
            seq(&m, &d),
            "Frobenius law",
        ),
        rule(
            &format!("{n}_identity"),
            shapes::spider(c, 1, 1),
            w,
            "spider normal form: a two-legged spider is the identity",
        ),
    ]
}

fn build_builtin_rules() -> RuleSet {
    let (b, wh) = (Colour::Black, Colour::White);
    let psi = Diagram::param("psi");
    let tick_unit = decorate_output(&unit(b), 0, Decoration::TICK);
    let mut rules = frobenius_rules(wh);
    rules.extend(frobenius_rules(b));

    rules.push(rule(
        "ghz_special",
        seq(&comult(wh), &mult(wh)),
        wire(),
        "GHZ structure is special: its loop map is the identity",
    ));
    rules.push(rule(
        "w_antispecial",
        par(&circle(b), &seq(&comult(b), &mult(b))),
        seq(&black_loop_effect(), &black_lollipop()),
        "W structure is anti-special: the loop map times the circle disconnects",
    ));
    rules.push(rule(
        "alpha",
        shapes::tick_composite(b),
        shapes::tick_composite(wh),
        "GHZ/W pair axiom alpha: both cap/cup composites define the tick",
    ));
    rules.push(rule(
        "tick_def",
        shapes::tick_composite(b),
        Diagram::wire(Decoration::TICK),
        "the tick composite is the Pauli X gate",
    ));
    rules.push(rule(
        "beta",
        seq(&unit(b), &comult(wh)),
        par(&unit(b), &unit(b)),
        "GHZ/W pair axiom beta: white comultiplication copies the black unit",
    ));
    rules.push(rule(
        "gamma",
        decorate_input(&comult(wh), 0, Decoration::TICK),
        decorate_output(&decorate_output(&comult(wh), 0, Decoration::TICK), 1, Decoration::TICK),
        "GHZ/W pair axiom gamma: white comultiplication commutes with the tick",
    ));
    rules.push(rule(
        "xi",
        par(&circle(b), &tick_unit),
        black_lollipop(),
        "GHZ/W pair axiom xi: circle times the ticked black unit is the lollipop",
    ));
    rules.push(rule(
        "beta_prime",
        seq(&tick_unit, &comult(wh)),
        par(&tick_unit, &tick_unit),
        "consequence of beta and gamma: white comultiplication copies the ticked black unit",
    ));
    rules.push(rule(
        "tick_involution",
        decorate_input(
            &decorate_output(&shapes::spider(wh, 1, 1), 0, Decoration::TICK),
            0,
            Decoration::TICK,
        ),
        wire(),
        "the tick is an involution",
    ));
    rules.push(rule(
        "cross_involution",
        decorate_input(
            &decorate_output(&shapes::spider(wh, 1, 1), 0, Decoration::CROSS),
            0,
            Decoration::CROSS,
        ),
        wire(),
        "the cross is an involution",
    ));
    rules.push(rule(
        "cross_phase_slide",
        decorate_output(&mult(wh), 0, Decoration::CROSS),
        decorate_input(&mult(wh), 0, Decoration::CROSS),
        "the cross is a phase for white multiplication",
    ));
    rules.push(rule(
        "cross_black_homom",
        decorate_output(&mult(b), 0, Decoration::CROSS),
        decorate_input(&decorate_input(&mult(b), 0, Decoration::CROSS), 1, Decoration::CROSS),
        "the cross distributes over black multiplication",
    ));
    rules.push(rule(
        "cross_kills_black_unit",
        decorate_output(&unit(b), 0, Decoration::CROSS),
        unit(b),
        "the cross fixes the black unit",
    ));
    let sum = seq(&par(&psi, &decorate_output(&psi, 0, Decoration::CROSS)), &mult(b));
    rules.push(rule(
        "add_inverse",
        sum.clone(),
        par(&seq(&sum, &counit(wh)), &unit(b)),
        "the cross is additive inverse",
    ));

    let set = RuleSet::from_rules(rules).expect("unique builtin names");
    for (i, r) in set.iter().enumerate() {
        let report = check_rule_soundness(r, &standard_samples(r, 0x5eed + i as u64));
        assert!(
            report.pass,
            "builtin rule `{}` failed its soundness check: {:?}",
            r.name,
            report.first_counterexample()
        );
    }
    set
}

/// The catalogue of concrete rules. Every rule is checked against the
/// semantics the first time this is called; an unsound rule panics.
pub fn builtin_rules() -> RuleSet {
    static RULES: OnceLock<RuleSet> = OnceLock::new();
    RULES.get_or_init(build_builtin_rules).clone()
}

/// Fusion of two same-coloured spiders joined by one plain wire, at fixed
/// arities: a `(a, 1)` spider feeding input `p` of a `(b, 1)` spider becomes
/// one `(a + b - 1, 1)` spider. Generated for `a <= max_legs`,
/// `1 <= b <= max_legs`.
pub fn fusion_rules(c: Colour, max_legs: usize) -> Vec<RewriteRule> {
    let mut out = Vec::new();
    for b in 1..=max_legs {
        for a in 0..=max_legs {
            for p in 0..b {
                let upper = Diagram::tensor_all(&[
                    Diagram::identity(p),
                    shapes::spider(c, a, 1),
                    Diagram::identity(b - 1 - p),
                ]);
                let lhs = seq(&upper, &shapes::spider(c, b, 1));
                let rhs = shapes::spider(c, a + b - 1, 1);
                out.push(
                    RewriteRule::new(
                        format!("{}_fuse_{a}_{b}_{p}", c.name()),
                        lhs,
                        rhs,
                        "spider fusion along a single wire",
                        true,
                    )
                    .expect("fusion rule shape"),
                );
            }
        }
    }
    out
}

/// The two plugging points of a colour: `{|1>, X|1>}` for black and
/// `{|0>+|1>, cross(|0>+|1>)}` for white.
pub fn plugging_set(c: Colour) -> [Diagram; 2] {
    let u = unit(c);
    let deco = match c {
        Colour::Black => Decoration::TICK,
        Colour::White => Decoration::CROSS,
    };
    let second = decorate_output(&u, 0, deco);
    [u, second]
}

/// Plugs each point of the colour's plugging set into input `wire` of both
/// sides and compares the results exactly. Comparing each pair only up to
/// its own scalar would not be enough: `diag(1, 2)` and the identity agree
/// projectively on both black points.
pub fn verify_by_plugging(
    lhs: &Diagram,
    rhs: &Diagram,
    wire: usize,
    colour: Colour,
    env: &Environment,
) -> Result<bool, RuleError> {
    if lhs.signature() != rhs.signature() {
        return Err(RuleError::BoundaryMismatch {
            name: "plugging".into(),
            lhs: lhs.signature(),
            rhs: rhs.signature(),
        });
    }
    if wire >= lhs.n_inputs() {
        return Err(RuleError::BadWireIndex {
            wire,
            inputs: lhs.n_inputs(),
        });
    }
    for point in plugging_set(colour) {
        let l = evaluate(&shapes::plug(lhs, wire, &point), env)?;
        let r = evaluate(&shapes::plug(rhs, wire, &point), env)?;
        if l.n_inputs() != r.n_inputs() || l != r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A `(0, 0)` diagram of the loop used as the circle scalar.
pub fn circle_scalar() -> Diagram {
    circle(Colour::Black)
}
