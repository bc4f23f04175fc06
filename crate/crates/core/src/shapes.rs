//! Small diagrams used as building blocks: units, (co)multiplications,
//! cups, caps, phases and pluggings, for either colour.

use crate::diagram::{Decoration, Diagram, VertexKind};

/// Black is the W structure, white the GHZ structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Colour {
    Black,
    White,
}

impl Colour {
    pub fn kind(self) -> VertexKind {
        match self {
            Colour::Black => VertexKind::WSpider,
            Colour::White => VertexKind::GhzSpider,
        }
    }

    pub fn other(self) -> Colour {
        match self {
            Colour::Black => Colour::White,
            Colour::White => Colour::Black,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Colour::Black => "w",
            Colour::White => "ghz",
        }
    }
}

pub fn spider(c: Colour, inputs: usize, outputs: usize) -> Diagram {
    Diagram::spider(c.kind(), inputs, outputs)
}

pub fn mult(c: Colour) -> Diagram {
    spider(c, 2, 1)
}

pub fn comult(c: Colour) -> Diagram {
    spider(c, 1, 2)
}

pub fn unit(c: Colour) -> Diagram {
    spider(c, 0, 1)
}

pub fn counit(c: Colour) -> Diagram {
    spider(c, 1, 0)
}

pub fn cup(c: Colour) -> Diagram {
    spider(c, 0, 2)
}

pub fn cap(c: Colour) -> Diagram {
    spider(c, 2, 0)
}

/// Closed loop `cap ∘ cup`.
pub fn circle(c: Colour) -> Diagram {
    seq(&cup(c), &cap(c))
}

pub fn wire() -> Diagram {
    Diagram::identity(1)
}

/// `a` then `b`; panics on a boundary mismatch, which is a bug in the caller.
pub fn seq(a: &Diagram, b: &Diagram) -> Diagram {
    a.compose_seq(b).expect("composable diagrams")
}

/// Chains several diagrams top to bottom.
pub fn chain(parts: &[&Diagram]) -> Diagram {
    let (first, rest) = parts.split_first().expect("at least one diagram");
    rest.iter().fold((*first).clone(), |acc, d| seq(&acc, d))
}

pub fn par(a: &Diagram, b: &Diagram) -> Diagram {
    a.compose_par(b)
}

/// Appends `deco` to output `index` of `d`.
pub fn decorate_output(d: &Diagram, index: usize, deco: Decoration) -> Diagram {
    let n = d.n_outputs();
    let layer = Diagram::tensor_all(&[
        Diagram::identity(index),
        Diagram::wire(deco),
        Diagram::identity(n - index - 1),
    ]);
    seq(d, &layer)
}

/// Prepends `deco` to input `index` of `d`.
pub fn decorate_input(d: &Diagram, index: usize, deco: Decoration) -> Diagram {
    let n = d.n_inputs();
    let layer = Diagram::tensor_all(&[
        Diagram::identity(index),
        Diagram::wire(deco),
        Diagram::identity(n - index - 1),
    ]);
    seq(&layer, d)
}

/// Plugs the point `point` (a `(0, 1)` diagram) into input `index` of `d`.
pub fn plug(d: &Diagram, index: usize, point: &Diagram) -> Diagram {
    let n = d.n_inputs();
    let layer = Diagram::tensor_all(&[
        Diagram::identity(index),
        point.clone(),
        Diagram::identity(n - index - 1),
    ]);
    seq(&layer, d)
}

/// The white phase of a point: the wire enters the GHZ multiplication on
/// input 0, the point on input 1.
pub fn phase(point: &Diagram) -> Diagram {
    seq(&par(&wire(), point), &mult(Colour::White))
}

/// The phase of the ticked point, `1/ψ` for `ψ`.
pub fn inverse_phase(point: &Diagram) -> Diagram {
    phase(&decorate_output(point, 0, Decoration::TICK))
}

/// `⟨0|ψ`: the point followed by the black counit.
pub fn point_dot(point: &Diagram) -> Diagram {
    seq(point, &counit(Colour::Black))
}

/// `⟨0|Xψ`: the ticked point followed by the black counit.
pub fn point_tick_dot(point: &Diagram) -> Diagram {
    seq(&decorate_output(point, 0, Decoration::TICK), &counit(Colour::Black))
}

/// The snake built from a cap of colour `cap_colour` and a cup of the other
/// colour; for the black cap this is the Pauli X composite.
pub fn tick_composite(cap_colour: Colour) -> Diagram {
    let top = par(&wire(), &cup(cap_colour.other()));
    let bottom = par(&cap(cap_colour), &wire());
    seq(&top, &bottom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{evaluate, Environment, Tensor};

    #[test]
    fn tick_composites_are_not() {
        let env = Environment::new();
        let x = Tensor::from_matrix(1, 1, &[&[0, 1], &[1, 0]]);
        assert_eq!(evaluate(&tick_composite(Colour::Black), &env).unwrap(), x);
        assert_eq!(evaluate(&tick_composite(Colour::White), &env).unwrap(), x);
    }

    #[test]
    fn plug_and_decorate() {
        let env = Environment::new();
        let d = plug(&mult(Colour::White), 1, &unit(Colour::Black));
        assert_eq!(d.signature(), (1, 1));
        assert_eq!(
            evaluate(&d, &env).unwrap(),
            Tensor::from_matrix(1, 1, &[&[0, 0], &[0, 1]])
        );
        let t = decorate_input(&counit(Colour::Black), 0, Decoration::TICK);
        assert_eq!(evaluate(&t, &env).unwrap(), Tensor::from_ints(1, 0, &[0, 1]));
    }
}
