//! Acceptance checks. Runs without the libtest harness so every criterion
//! prints one PASS or FAIL line in the ordinary `cargo test` output.
//!
//! All comparisons are exact over the rationals. Where a check says
//! "projective" it asks for a nonzero `λ` with `a = λ·b`; everywhere else
//! tensors and decoded values must be equal entry for entry.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ghzw_core::arith::{apply_arith, decode, encode_nat, encode_rational, ArithOp, ExtendedRational};
use ghzw_core::bang::{builtin_pattern_rule, enumerate_by_operations, expand_all, nat_pattern};
use ghzw_core::io::{parse_diagram, serialize_diagram};
use ghzw_core::random::DiagramGen;
use ghzw_core::rewrite::{apply_match, find_matches, normalize};
use ghzw_core::rules::{builtin_rules, check_rule_soundness, random_vector, standard_samples, verify_by_plugging};
use ghzw_core::semantics::{evaluate, int, proj_equal, scalar_value, Environment, Tensor};
use ghzw_core::shapes::{comult, counit, decorate_output, mult, tick_composite, unit, Colour};
use ghzw_core::strategy::{lookup_rule, shipped_rules, strategy};
use ghzw_core::theorems::{exact_forms, pendant_scalar_i, pendant_scalar_ii, scalar_free_forms};
use ghzw_core::{is_isomorphic, Decoration, Diagram};

type Check = Result<(), String>;

/// Number, name, time limit in seconds, and the check itself.
type Criterion = (u32, &'static str, f64, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn empty() -> Environment {
    Environment::new()
}

fn eval(d: &Diagram, env: &Environment) -> Result<Tensor, String> {
    evaluate(d, env).map_err(|e| e.to_string())
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn fraction(p: i64, q: i64) -> Result<Diagram, String> {
    encode_rational(p, q).map_err(|e| e.to_string())
}

fn arith(op: ArithOp, args: &[Diagram]) -> Result<Diagram, String> {
    apply_arith(op, args).map_err(|e| e.to_string())
}

fn value(d: &Diagram) -> Result<ExtendedRational, String> {
    decode(d, &empty()).map_err(|e| e.to_string())
}

fn psi_env(v: [BigRational; 2]) -> Environment {
    let [a, b] = v;
    Environment::new().with("psi", a, b)
}

/// `ψ` over the encoded naturals 0..=4 and 20 random vectors.
fn psi_samples(seed: u64) -> Vec<Environment> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out: Vec<Environment> = (0..=4).map(|n| psi_env([int(n), int(1)])).collect();
    out.extend((0..20).map(|_| psi_env(random_vector(&mut rng))));
    out
}

fn generator_fidelity() -> Check {
    // entries listed input-major: index = (input bits << outputs) | output bits
    let expected = [
        (mult(Colour::White), Tensor::from_ints(2, 1, &[1, 0, 0, 0, 0, 0, 0, 1])),
        (unit(Colour::White), Tensor::from_ints(0, 1, &[1, 1])),
        (
            comult(Colour::White),
            Tensor::from_ints(1, 2, &[1, 0, 0, 0, 0, 0, 0, 1]),
        ),
        (counit(Colour::White), Tensor::from_ints(1, 0, &[1, 1])),
        (mult(Colour::Black), Tensor::from_ints(2, 1, &[0, 0, 1, 0, 1, 0, 0, 1])),
        (unit(Colour::Black), Tensor::from_ints(0, 1, &[0, 1])),
        (
            comult(Colour::Black),
            Tensor::from_ints(1, 2, &[1, 0, 0, 0, 0, 1, 1, 0]),
        ),
        (counit(Colour::Black), Tensor::from_ints(1, 0, &[1, 0])),
    ];
    for (i, (d, t)) in expected.iter().enumerate() {
        let got = eval(d, &empty())?;
        ensure(&got == t, || format!("generator {i}: got {got} expected {t}"))?;
    }
    Ok(())
}

fn sound(name: &str) -> Check {
    let rule = builtin_rules().get(name).cloned().ok_or(format!("no rule {name}"))?;
    let report = check_rule_soundness(&rule, &standard_samples(&rule, 7));
    ensure(report.pass, || {
        format!("{name} unsound: {:?}", report.first_counterexample())
    })
}

fn structure_laws() -> Check {
    let rules = builtin_rules();
    let special = rules.get("ghz_special").ok_or("no ghz_special")?;
    let identity = Tensor::from_ints(1, 1, &[1, 0, 0, 1]);
    ensure(eval(&special.lhs, &empty())? == identity, || {
        "GHZ loop is not the identity".into()
    })?;
    ensure(eval(&special.rhs, &empty())? == identity, || {
        "GHZ loop rule has a non-identity side".into()
    })?;

    let anti = rules.get("w_antispecial").ok_or("no w_antispecial")?;
    let lambda = proj_equal(&eval(&anti.lhs, &empty())?, &eval(&anti.rhs, &empty())?).map_err(|e| e.to_string())?;
    ensure(lambda == Some(int(1)), || format!("anti-special law off by {lambda:?}"))?;

    let x = Tensor::from_ints(1, 1, &[0, 1, 1, 0]);
    let tick = eval(&tick_composite(Colour::Black), &empty())?;
    ensure(tick == x, || format!("tick composite is {tick}"))?;
    ensure(eval(&Diagram::wire(Decoration::TICK), &empty())? == x, || {
        "tick wire is not X".into()
    })?;

    for name in ["alpha", "beta", "gamma", "xi", "beta_prime"] {
        sound(name)?;
    }
    Ok(())
}

fn soundness_sweep() -> Check {
    let rules = shipped_rules(4);
    for name in [
        "delta1_prime#0",
        "delta1_prime#4",
        "delta2_prime#4",
        "delta3_prime#1",
        "delta3_prime#4",
        "ghz_fusion#4,4",
    ] {
        ensure(rules.iter().any(|r| r.name == name), || {
            format!("{name} missing from the sweep")
        })?;
    }
    for rule in &rules {
        let report = check_rule_soundness(rule, &standard_samples(rule, 11));
        ensure(report.pass, || {
            format!("{} unsound: {:?}", rule.name, report.first_counterexample())
        })?;
    }
    let status = Command::new(env!("CARGO_BIN_EXE_ghzw"))
        .arg("check-rules")
        .output()
        .map_err(|e| e.to_string())?
        .status;
    ensure(status.code() == Some(0), || format!("check-rules exited with {status}"))
}

fn theorems() -> Check {
    let psi = Diagram::param("psi");
    for env in psi_samples(5) {
        let [a, b] = env.get("psi").cloned().unwrap();
        // the phase of ψ = a|0> + b|1> is diag(a, b)
        let phase = eval(&ghzw_core::shapes::phase(&psi), &env)?;
        let diag = Tensor::new(1, 1, vec![a.clone(), int(0), int(0), b.clone()]);
        ensure(phase == diag, || format!("phase at {env} is {phase}"))?;
        for id in exact_forms(&psi) {
            let (l, r) = (eval(&id.lhs, &env)?, eval(&id.rhs, &env)?);
            ensure(l == r, || format!("{} exact form fails at {env}", id.name))?;
        }
        for id in scalar_free_forms(&psi) {
            let mut nonzero = true;
            for p in &id.pendants {
                nonzero &= !scalar_value(p, &env).map_err(|e| e.to_string())?.is_zero();
            }
            if !nonzero {
                continue;
            }
            let (l, r) = (eval(&id.lhs, &env)?, eval(&id.rhs, &env)?);
            let lambda = proj_equal(&l, &r).map_err(|e| e.to_string())?;
            ensure(lambda.is_some(), || {
                format!("{} scalar-free form fails at {env}", id.name)
            })?;
        }
    }
    for n in 0..=12 {
        let s_i = scalar_value(&pendant_scalar_i(&encode_nat(n)), &empty()).map_err(|e| e.to_string())?;
        let s_ii = scalar_value(&pendant_scalar_ii(&encode_nat(n)), &empty()).map_err(|e| e.to_string())?;
        ensure(s_i == int(1), || format!("scalar (i) at {n} is {s_i}"))?;
        ensure(s_ii == int(n as i64), || format!("scalar (ii) at {n} is {s_ii}"))?;
    }
    Ok(())
}

fn random_fraction(rng: &mut StdRng) -> (i64, i64) {
    (rng.gen_range(-12..=12), rng.gen_range(1..=12))
}

fn homomorphism() -> Check {
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..500 {
        let (a, b) = random_fraction(&mut rng);
        let (c, d) = random_fraction(&mut rng);
        let (x, y) = (ratio(a, b), ratio(c, d));
        let (ex, ey) = (fraction(a, b)?, fraction(c, d)?);
        let fin = ExtendedRational::Finite;
        let cases = [
            ("add", arith(ArithOp::Add, &[ex.clone(), ey.clone()])?, fin(&x + &y)),
            ("mul", arith(ArithOp::Mul, &[ex.clone(), ey.clone()])?, fin(&x * &y)),
            ("neg", arith(ArithOp::Neg, std::slice::from_ref(&ex))?, fin(-&x)),
        ];
        for (op, diagram, want) in cases {
            let got = value(&diagram)?;
            ensure(got == want, || format!("{op} of {x}, {y}: got {got}, expected {want}"))?;
        }
        if !x.is_zero() {
            let got = value(&arith(ArithOp::Inv, &[ex])?)?;
            let want = fin(x.recip());
            ensure(got == want, || format!("inverse of {x}: got {got}, expected {want}"))?;
        }
    }
    for n in 0..=4 {
        for n2 in 0..=4 {
            for m in 1..=4 {
                for m2 in 1..=4 {
                    let sum = arith(ArithOp::Add, &[fraction(n, m)?, fraction(n2, m2)?])?;
                    let want = ExtendedRational::Finite(ratio(n * m2 + m * n2, m * m2));
                    let got = value(&sum)?;
                    ensure(got == want, || format!("{n}/{m} + {n2}/{m2}: got {got}"))?;
                }
            }
        }
    }
    Ok(())
}

fn model_law() -> Check {
    for n in 0..=20usize {
        let t = eval(&encode_nat(n), &empty())?;
        ensure(t == Tensor::from_ints(0, 1, &[n as i64, 1]), || {
            format!("enc({n}) evaluates to {t}")
        })?;
    }
    Ok(())
}

fn well_definedness() -> Check {
    for p in -2..=2 {
        for q in 1..=5 {
            let base = eval(&fraction(p, q)?, &empty())?;
            for k in [2, 3] {
                let scaled = eval(&fraction(p * k, q * k)?, &empty())?;
                let lambda = proj_equal(&base, &scaled).map_err(|e| e.to_string())?;
                ensure(lambda.is_some(), || format!("{p}/{q} and {}/{} differ", p * k, q * k))?;
            }
        }
    }
    Ok(())
}

fn dpo_preservation() -> Check {
    let mut rng = StdRng::seed_from_u64(99);
    let mut rules = shipped_rules(3);
    rules.extend(
        ["w_fuse_2_2_1", "ghz_fuse_1_3_2", "w_fuse_0_2_0"]
            .iter()
            .filter_map(|n| lookup_rule(n)),
    );
    let gen = DiagramGen {
        max_vertices: 3,
        max_arity: 2,
        params: vec!["psi".into(), "phi".into()],
        decorations: true,
    };
    let mut done = 0;
    let mut attempts = 0;
    while done < 200 {
        attempts += 1;
        ensure(attempts < 10_000, || {
            format!("only {done} triples after {attempts} attempts")
        })?;
        let rule = &rules[rng.gen_range(0..rules.len())];
        let host = gen.host_containing(&mut rng, &rule.lhs);
        let matches = find_matches(rule, &host);
        ensure(!matches.is_empty(), || {
            format!("{} does not match its own host", rule.name)
        })?;
        let m = &matches[rng.gen_range(0..matches.len())];
        let after = apply_match(rule, &host, m).map_err(|e| format!("{}: {e}", rule.name))?;
        ensure(after.validate().is_empty(), || {
            format!("{} left an invalid diagram", rule.name)
        })?;
        let mut env = Environment::new();
        let mut names: BTreeSet<String> = rule.param_names();
        names.extend(["psi".to_string(), "phi".to_string()]);
        for name in &names {
            let [a, b] = random_vector(&mut rng);
            env.insert(name.clone(), a, b);
        }
        let (before_t, after_t) = (eval(&host, &env)?, eval(&after, &env)?);
        if before_t.is_zero() && after_t.is_zero() {
            continue;
        }
        let lambda = proj_equal(&before_t, &after_t).map_err(|e| e.to_string())?;
        ensure(lambda.is_some(), || {
            format!("{} at {} changed the semantics at {env}", rule.name, m.fingerprint())
        })?;
        done += 1;
    }
    Ok(())
}

fn bang_boxes() -> Check {
    let nat = nat_pattern();
    let mut family = Vec::new();
    for k in 0..=3 {
        let d = nat.instantiate_one(k).map_err(|e| e.to_string())?;
        ensure(is_isomorphic(&d, &encode_nat(k)), || {
            format!("instance {k} is not enc({k})")
        })?;
        let v = value(&d)?;
        ensure(v == ExtendedRational::from_ints(k as i64, 1), || {
            format!("instance {k} decodes to {v}")
        })?;
        family.push(d);
    }
    // one W vertex plus at most three boxed units
    let brute = enumerate_by_operations(&nat, 4).map_err(|e| e.to_string())?;
    ensure(brute.len() == family.len(), || {
        format!("{} brute-force instances, expected {}", brute.len(), family.len())
    })?;
    for d in &brute {
        ensure(family.iter().any(|f| is_isomorphic(f, d)), || {
            "brute force found an unexpected instance".into()
        })?;
    }
    // every shipped expansion instantiates both sides consistently
    let pr = builtin_pattern_rule("delta3_prime").ok_or("no delta3_prime")?;
    let names: BTreeSet<String> = expand_all(&pr, 3)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|r| r.name)
        .collect();
    ensure(!names.contains("delta3_prime#0"), || {
        "delta3_prime expanded below its minimum".into()
    })
}

fn additive_inverse() -> Check {
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..20 {
        let (p, q) = random_fraction(&mut rng);
        let e = fraction(p, q)?;
        let sum = arith(ArithOp::Add, &[e.clone(), arith(ArithOp::Neg, &[e])?])?;
        let v = value(&sum)?;
        ensure(v == ExtendedRational::from_ints(0, 1), || {
            format!("{p}/{q} - {p}/{q} decodes to {v}")
        })?;
    }
    let u = unit(Colour::Black);
    let crossed = decorate_output(&u, 0, Decoration::CROSS);
    ensure(eval(&crossed, &empty())? == eval(&u, &empty())?, || {
        "cross moves the black unit".into()
    })
}

fn plugging() -> Check {
    let psi = Diagram::param("psi");
    for env in psi_samples(8) {
        let [d1, ..] = exact_forms(&psi);
        // δ1 has the pendant scalar on the left; plug into the first input
        let ok = verify_by_plugging(&d1.lhs, &d1.rhs, 0, Colour::Black, &env).map_err(|e| e.to_string())?;
        ensure(ok, || format!("plugging rejects delta1 at {env}"))?;
    }
    let unequal = verify_by_plugging(&mult(Colour::White), &mult(Colour::Black), 0, Colour::Black, &empty())
        .map_err(|e| e.to_string())?;
    ensure(!unequal, || "plugging accepts GHZ mult = W mult".into())?;
    // dropping the pendant scalar breaks exact equality when it is not 1
    let env = psi_env([int(1), int(3)]);
    let [free, ..] = scalar_free_forms(&psi);
    let scaled = verify_by_plugging(&free.lhs, &free.rhs, 0, Colour::Black, &env).map_err(|e| e.to_string())?;
    ensure(!scaled, || "plugging ignores a scalar of 3".into())
}

fn round_trip_and_determinism() -> Check {
    let mut rng = StdRng::seed_from_u64(1234);
    let gen = DiagramGen {
        params: vec!["psi".into()],
        ..DiagramGen::default()
    };
    for i in 0..1000 {
        let d = gen.any(&mut rng);
        let text = serialize_diagram(&d);
        let (back, _) = parse_diagram(&text).map_err(|e| format!("diagram {i}: {e}"))?;
        ensure(is_isomorphic(&d, &back), || {
            format!("diagram {i} changed in a round trip")
        })?;
        ensure(serialize_diagram(&back) == text, || {
            format!("diagram {i} is not canonical")
        })?;
    }
    let arith_rules = strategy("arith").ok_or("no arith strategy")?;
    let simplify = strategy("simplify").ok_or("no simplify strategy")?;
    let inputs = [
        arith(ArithOp::Add, &[fraction(1, 2)?, fraction(2, 3)?])?,
        arith(ArithOp::Mul, &[encode_nat(2), encode_nat(3)])?,
        arith(
            ArithOp::Add,
            &[fraction(3, 4)?, arith(ArithOp::Neg, &[fraction(3, 4)?])?],
        )?,
    ];
    for d in &inputs {
        let (_, a) = normalize(d, &arith_rules, 200);
        let (_, b) = normalize(d, &arith_rules, 200);
        ensure(a.to_text() == b.to_text(), || "arith traces differ between runs".into())?;
    }
    for _ in 0..50 {
        let d = gen.any(&mut rng);
        let (ra, a) = normalize(&d, &simplify, 100);
        let (rb, b) = normalize(&d, &simplify, 100);
        ensure(a.to_text() == b.to_text(), || {
            "simplify traces differ between runs".into()
        })?;
        ensure(serialize_diagram(&ra) == serialize_diagram(&rb), || {
            "normal forms differ between runs".into()
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "generator fidelity", 1.0, generator_fidelity),
        (2, "structure laws", 1.0, structure_laws),
        (3, "rule soundness sweep", 30.0, soundness_sweep),
        (4, "phase theorems with pendant scalars", 10.0, theorems),
        (5, "arithmetic homomorphism", 30.0, homomorphism),
        (6, "encoding model law", 1.0, model_law),
        (7, "well-definedness (projective)", 5.0, well_definedness),
        (8, "DPO preservation (projective)", 60.0, dpo_preservation),
        (9, "!-box semantics", 10.0, bang_boxes),
        (10, "additive inverse", 5.0, additive_inverse),
        (11, "plugging verifier", 5.0, plugging),
        (12, "round trip and determinism", 30.0, round_trip_and_determinism),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let result = result.and_then(|()| ensure(secs <= limit, || format!("took {secs:.2}s, limit {limit}s")));
        match result {
            Ok(()) => println!("acceptance {n:>2} PASS {name} ({secs:.2}s, limit {limit}s)"),
            Err(e) => {
                failed += 1;
                println!("acceptance {n:>2} FAIL {name}: {e}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
