//! The evaluator against a direct state sum and against the algebra of
//! tensors it is meant to respect.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use ghzw_core::diagram::Owner;
use ghzw_core::random::DiagramGen;
use ghzw_core::rules::random_vector;
use ghzw_core::semantics::{generator_tensor, int};
use ghzw_core::{evaluate, proj_equal, Diagram, Environment, Port, Scalar, Tensor};

fn env(rng: &mut StdRng) -> Environment {
    let [a, b] = random_vector(rng);
    Environment::new().with("psi", a, b)
}

/// Sums over every assignment of a bit to the source end of each edge; the
/// other end is fixed by the decoration (tick flips, cross negates `|0>`).
fn state_sum(d: &Diagram, env: &Environment) -> Tensor {
    let edges: Vec<_> = d.edges().copied().collect();
    let mut out = Tensor::zeros(d.n_inputs(), d.n_outputs()).entries().to_vec();
    for bits in 0..1usize << edges.len() {
        let mut at = std::collections::HashMap::<Port, usize>::new();
        let mut weight = int(1);
        for (k, e) in edges.iter().enumerate() {
            let s = (bits >> k) & 1;
            let t = s ^ e.deco.tick as usize;
            if e.deco.cross && t == 0 {
                weight = -weight;
            }
            at.insert(e.src, s);
            at.insert(e.dst, t);
        }
        for v in d.vertices() {
            let g = generator_tensor(&v.kind, v.inputs, v.outputs, env).unwrap();
            let i = (0..v.inputs).fold(0, |acc, k| (acc << 1) | at[&Port::into(v.id, k)]);
            let o = (0..v.outputs).fold(0, |acc, k| (acc << 1) | at[&Port::out_of(v.id, k)]);
            weight *= g.get(i, o);
        }
        let i = (0..d.n_inputs()).fold(0, |acc, k| (acc << 1) | at[&Port::input(k)]);
        let o = (0..d.n_outputs()).fold(0, |acc, k| (acc << 1) | at[&Port::output(k)]);
        out[(i << d.n_outputs()) | o] += weight;
    }
    Tensor::new(d.n_inputs(), d.n_outputs(), out)
}

fn gen(max_vertices: usize) -> DiagramGen {
    DiagramGen {
        max_vertices,
        max_arity: 2,
        params: vec!["psi".into()],
        decorations: true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn contraction_matches_the_state_sum(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = gen(4).any(&mut rng);
        prop_assume!(d.edge_count() <= 14);
        let e = env(&mut rng);
        prop_assert_eq!(evaluate(&d, &e).unwrap(), state_sum(&d, &e));
    }

    #[test]
    fn sequential_composition_is_matrix_product(seed in any::<u64>(), mid in 0usize..3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = gen(4);
        let a = g.diagram(&mut rng, 1, mid);
        let b = g.diagram(&mut rng, mid, 2);
        let e = env(&mut rng);
        let whole = evaluate(&a.compose_seq(&b).unwrap(), &e).unwrap();
        let parts = evaluate(&b, &e).unwrap().after(&evaluate(&a, &e).unwrap());
        // a fused wire stores tick-then-cross, so a cross from `a` meeting a
        // tick from `b` turns X(-Z) into (-Z)X = -X(-Z)
        let flips = (0..mid)
            .filter(|&i| a.edge_at(Port::output(i)).unwrap().deco.cross && b.edge_at(Port::input(i)).unwrap().deco.tick)
            .count();
        let sign = if flips % 2 == 0 { int(1) } else { int(-1) };
        prop_assert_eq!(whole, parts.scale(&sign));
    }

    #[test]
    fn undecorated_composition_is_exact(seed in any::<u64>(), mid in 0usize..3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = DiagramGen { decorations: false, ..gen(4) };
        let a = g.diagram(&mut rng, 2, mid);
        let b = g.diagram(&mut rng, mid, 1);
        let e = env(&mut rng);
        let whole = evaluate(&a.compose_seq(&b).unwrap(), &e).unwrap();
        prop_assert_eq!(whole, evaluate(&b, &e).unwrap().after(&evaluate(&a, &e).unwrap()));
    }

    #[test]
    fn parallel_composition_is_kronecker_product(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = gen(3);
        let (a, b) = (g.any(&mut rng), g.any(&mut rng));
        let e = env(&mut rng);
        let whole = evaluate(&a.compose_par(&b), &e).unwrap();
        let parts = evaluate(&a, &e).unwrap().kron(&evaluate(&b, &e).unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn projective_equality_is_an_equivalence(seed in any::<u64>(), p in 1i64..5, q in -4i64..5) {
        prop_assume!(q != 0);
        let mut rng = StdRng::seed_from_u64(seed);
        let d = gen(4).diagram(&mut rng, 1, 1);
        let e = env(&mut rng);
        let a = evaluate(&d, &e).unwrap();
        let b = a.scale(&Scalar::new(p.into(), 3.into()));
        let c = b.scale(&Scalar::new(q.into(), 1.into()));
        prop_assert!(proj_equal(&a, &a).unwrap().is_some());
        let ab = proj_equal(&a, &b).unwrap();
        let ba = proj_equal(&b, &a).unwrap();
        prop_assert_eq!(ab.is_some(), ba.is_some());
        if let (Some(x), Some(y)) = (&ab, &ba) {
            prop_assert_eq!(x * y, int(1));
        }
        if ab.is_some() && proj_equal(&b, &c).unwrap().is_some() {
            prop_assert!(proj_equal(&a, &c).unwrap().is_some());
        }
    }
}

#[test]
fn self_loops_are_traces() {
    // a GHZ (1, 1) spider with its output fed back: trace of the identity
    let mut b = ghzw_core::Builder::new(0, 0);
    let v = b.vertex(ghzw_core::VertexKind::GhzSpider, 1, 1).unwrap();
    b.link(v, 0, v, 0).unwrap();
    let d = b.finish().unwrap();
    assert_eq!(
        evaluate(&d, &Environment::new()).unwrap(),
        state_sum(&d, &Environment::new())
    );
    assert_eq!(evaluate(&d, &Environment::new()).unwrap().get(0, 0), &int(2));
    assert!(d.edges().all(|e| e.src.owner == Owner::Vertex(v)));
}
