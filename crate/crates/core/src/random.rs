//! Random valid diagrams, for fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{Builder, Decoration, Diagram, Port, VertexKind};

#[derive(Clone, Debug)]
pub struct DiagramGen {
    /// Upper bound on the vertex count of generated diagrams.
    pub max_vertices: usize,
    /// Upper bound on each side of a spider.
    pub max_arity: usize,
    /// Names to draw parameter points from; empty means no parameters.
    pub params: Vec<String>,
    pub decorations: bool,
}

impl Default for DiagramGen {
    fn default() -> Self {
        DiagramGen {
            max_vertices: 10,
            max_arity: 3,
            params: Vec::new(),
            decorations: true,
        }
    }
}

impl DiagramGen {
    pub fn diagram(&self, rng: &mut impl Rng, n_inputs: usize, n_outputs: usize) -> Diagram {
        self.build(rng, n_inputs, n_outputs, false, false)
    }

    /// A diagram with a random number of inputs and outputs, each at most 3.
    pub fn any(&self, rng: &mut impl Rng) -> Diagram {
        let n_inputs = rng.gen_range(0..=3);
        let n_outputs = rng.gen_range(0..=3);
        self.diagram(rng, n_inputs, n_outputs)
    }

    /// A random host in which `pattern` occurs: random diagrams are composed
    /// above and below it and one more is put beside it. Edges that reach
    /// the pattern's boundary are left undecorated so the occurrence
    /// matches.
    pub fn host_containing(&self, rng: &mut impl Rng, pattern: &Diagram) -> Diagram {
        let top_in = rng.gen_range(0..=2);
        let bottom_out = rng.gen_range(0..=2);
        let top = self.build(rng, top_in, pattern.n_inputs(), false, true);
        let bottom = self.build(rng, pattern.n_outputs(), bottom_out, true, false);
        let middle = top
            .compose_seq(pattern)
            .and_then(|d| d.compose_seq(&bottom))
            .expect("signatures line up by construction");
        let beside_in = rng.gen_range(0..=1);
        let beside_out = rng.gen_range(0..=1);
        let beside = self.build(rng, beside_in, beside_out, false, false);
        if rng.gen_bool(0.5) {
            middle.compose_par(&beside)
        } else {
            beside.compose_par(&middle)
        }
    }

    fn spider(&self, rng: &mut impl Rng) -> (VertexKind, usize, usize) {
        if !self.params.is_empty() && rng.gen_ratio(1, 6) {
            let name = self.params.choose(rng).unwrap().clone();
            return (VertexKind::ParamState(name), 0, 1);
        }
        let kind = if rng.gen_bool(0.5) {
            VertexKind::GhzSpider
        } else {
            VertexKind::WSpider
        };
        loop {
            let m = rng.gen_range(0..=self.max_arity);
            let n = rng.gen_range(0..=self.max_arity);
            if m + n > 0 {
                return (kind, m, n);
            }
        }
    }

    fn build(&self, rng: &mut impl Rng, n_inputs: usize, n_outputs: usize, plain_in: bool, plain_out: bool) -> Diagram {
        let mut b = Builder::new(n_inputs, n_outputs);
        let mut producers: Vec<Port> = (0..n_inputs).map(Port::input).collect();
        let mut consumers: Vec<Port> = (0..n_outputs).map(Port::output).collect();
        let count = rng.gen_range(0..=self.max_vertices);
        for _ in 0..count {
            let (kind, m, n) = self.spider(rng);
            let v = b.vertex(kind, m, n).expect("arity chosen to be valid");
            consumers.extend((0..m).map(|i| Port::into(v, i)));
            producers.extend((0..n).map(|i| Port::out_of(v, i)));
        }
        // balance the two sides with units and counits
        while producers.len() < consumers.len() {
            let v = b.vertex(self.colour(rng), 0, 1).unwrap();
            producers.push(Port::out_of(v, 0));
        }
        while consumers.len() < producers.len() {
            let v = b.vertex(self.colour(rng), 1, 0).unwrap();
            consumers.push(Port::into(v, 0));
        }
        consumers.shuffle(rng);
        for (src, dst) in producers.into_iter().zip(consumers) {
            let plain = !self.decorations || (plain_in && src.is_boundary()) || (plain_out && dst.is_boundary());
            let deco = if plain {
                Decoration::PLAIN
            } else {
                Decoration::new(rng.gen_ratio(1, 4), rng.gen_ratio(1, 4))
            };
            b.connect(src, dst, deco).expect("every port is used once");
        }
        b.finish().expect("generated diagrams are valid")
    }

    fn colour(&self, rng: &mut impl Rng) -> VertexKind {
        if rng.gen_bool(0.5) {
            VertexKind::GhzSpider
        } else {
            VertexKind::WSpider
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_diagrams_validate() {
        let mut rng = StdRng::seed_from_u64(3);
        let gen = DiagramGen {
            params: vec!["psi".into()],
            ..DiagramGen::default()
        };
        for _ in 0..200 {
            let d = gen.diagram(&mut rng, 1, 2);
            assert!(d.is_valid());
            assert_eq!(d.signature(), (1, 2));
        }
    }

    #[test]
    fn hosts_contain_the_pattern() {
        let mut rng = StdRng::seed_from_u64(4);
        let lhs = crate::shapes::mult(crate::shapes::Colour::White);
        for _ in 0..50 {
            let host = DiagramGen::default().host_containing(&mut rng, &lhs);
            assert!(!crate::rewrite::find_lhs_matches(&lhs, &host).is_empty());
        }
    }
}
