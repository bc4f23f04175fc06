//! The three phase identities for a white phase `ψ`, built as diagram
//! pairs over an arbitrary `(0, 1)` point.
//!
//! Each comes in an exact form, where the pendant scalars `⟨0|ψ` and
//! `⟨0|Xψ` sit beside one side, and a scalar-free form that only holds up
//! to those scalars.

use crate::diagram::{Decoration, Diagram};
use crate::shapes::{decorate_output, inverse_phase, mult, par, phase, point_dot, point_tick_dot, seq, unit, Colour};

/// A theorem instance: two diagrams with the same boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub name: &'static str,
    pub lhs: Diagram,
    pub rhs: Diagram,
    /// Scalar diagrams dropped by the scalar-free form.
    pub pendants: Vec<Diagram>,
}

/// `⟨0|Xψ · (black mult ; phase ψ) = (phase ψ ⊗ phase ψ) ; black mult`.
pub fn delta1(point: &Diagram) -> Identity {
    let p = phase(point);
    Identity {
        name: "delta1",
        lhs: par(&point_tick_dot(point), &seq(&mult(Colour::Black), &p)),
        rhs: seq(&par(&p, &p), &mult(Colour::Black)),
        pendants: vec![point_tick_dot(point)],
    }
}

/// `black unit ; phase ψ = ⟨0|Xψ · black unit`.
pub fn delta2(point: &Diagram) -> Identity {
    Identity {
        name: "delta2",
        lhs: seq(&unit(Colour::Black), &phase(point)),
        rhs: par(&point_tick_dot(point), &unit(Colour::Black)),
        pendants: vec![point_tick_dot(point)],
    }
}

/// `phase ψ ; phase (Xψ) = ⟨0|ψ · ⟨0|Xψ · wire`.
pub fn delta3(point: &Diagram) -> Identity {
    Identity {
        name: "delta3",
        lhs: seq(&phase(point), &inverse_phase(point)),
        rhs: Diagram::tensor_all(&[point_dot(point), point_tick_dot(point), Diagram::identity(1)]),
        pendants: vec![point_dot(point), point_tick_dot(point)],
    }
}

pub fn exact_forms(point: &Diagram) -> [Identity; 3] {
    [delta1(point), delta2(point), delta3(point)]
}

/// The same identities with the pendant scalars removed from both sides.
pub fn scalar_free_forms(point: &Diagram) -> [Identity; 3] {
    let p = phase(point);
    [
        Identity {
            name: "delta1",
            lhs: seq(&mult(Colour::Black), &p),
            rhs: seq(&par(&p, &p), &mult(Colour::Black)),
            pendants: vec![point_tick_dot(point)],
        },
        Identity {
            name: "delta2",
            lhs: seq(&unit(Colour::Black), &p),
            rhs: unit(Colour::Black),
            pendants: vec![point_tick_dot(point)],
        },
        Identity {
            name: "delta3",
            lhs: seq(&p, &inverse_phase(point)),
            rhs: Diagram::identity(1),
            pendants: vec![point_dot(point), point_tick_dot(point)],
        },
    ]
}

/// Scalar (i): the ticked point closed by the black counit, `⟨0|Xψ`.
pub fn pendant_scalar_i(point: &Diagram) -> Diagram {
    point_tick_dot(point)
}

/// Scalar (ii): the point closed by the black counit, `⟨0|ψ`.
pub fn pendant_scalar_ii(point: &Diagram) -> Diagram {
    point_dot(point)
}

/// The ticked copy of a point, `Xψ`.
pub fn tick_point(point: &Diagram) -> Diagram {
    decorate_output(point, 0, Decoration::TICK)
}
