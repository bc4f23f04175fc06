//! Rewriting and exact semantics for the GHZ/W graphical calculus.
//!
//! Diagrams are open port graphs over two commutative Frobenius algebras on
//! a qubit: the GHZ (white) structure, which acts as multiplication on
//! encoded numbers, and the W (black) structure, which acts as addition.
//! Every diagram can be evaluated exactly over the rationals, rewritten by
//! double-pushout rules, and, for `(0, 1)` diagrams, decoded as a number.

pub mod arith;
pub mod bang;
pub mod diagram;
pub mod io;
pub mod iso;
pub mod random;
pub mod rewrite;
pub mod rules;
pub mod semantics;
pub mod shapes;
pub mod strategy;
pub mod theorems;

pub use arith::{apply_arith, decode, encode_nat, encode_rational, eval_expression, ArithOp, ExtendedRational};
pub use bang::{expand_rule, BangBox, PatternGraph, PatternRule};
pub use diagram::{Builder, Decoration, Diagram, DiagramError, Port, VertexId, VertexKind};
pub use iso::is_isomorphic;
pub use rewrite::{apply_match, find_matches, normalize, Match, RewriteError, RewriteTrace};
pub use rules::{builtin_rules, check_rule_soundness, verify_by_plugging, RewriteRule, RuleError, RuleSet};
pub use semantics::{evaluate, proj_equal, scalar_value, Environment, EvalError, Scalar, Tensor};
pub use shapes::Colour;
