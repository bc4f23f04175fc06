use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use ghzw_core::arith::{apply_arith, decode, encode_nat, encode_rational, eval_expression, ArithOp, ExtendedRational};
use ghzw_core::theorems::{pendant_scalar_i, pendant_scalar_ii};
use ghzw_core::{evaluate, proj_equal, scalar_value, Environment};

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn value(d: &ghzw_core::Diagram) -> ExtendedRational {
    decode(d, &Environment::new()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operations_match_rational_arithmetic(a in -12i64..=12, b in 1i64..=12, c in -12i64..=12, d in 1i64..=12) {
        let (x, y) = (ratio(a, b), ratio(c, d));
        let (ex, ey) = (encode_rational(a, b).unwrap(), encode_rational(c, d).unwrap());
        let fin = ExtendedRational::Finite;
        prop_assert_eq!(value(&apply_arith(ArithOp::Add, &[ex.clone(), ey.clone()]).unwrap()), fin(&x + &y));
        prop_assert_eq!(value(&apply_arith(ArithOp::Mul, &[ex.clone(), ey.clone()]).unwrap()), fin(&x * &y));
        prop_assert_eq!(value(&apply_arith(ArithOp::Neg, std::slice::from_ref(&ey)).unwrap()), fin(-&y));
        let inv = value(&apply_arith(ArithOp::Inv, &[ex]).unwrap());
        if x.is_zero() {
            prop_assert_eq!(inv, ExtendedRational::Infinity);
        } else {
            prop_assert_eq!(inv, fin(x.recip()));
        }
    }

    #[test]
    fn expressions_agree_with_their_oracle(a in 0i64..=9, b in 1i64..=9, c in 0i64..=9) {
        let text = format!("({a} - {c}) / {b} + {c} * -{b}");
        let (_, decoded, oracle) = eval_expression(&text).unwrap();
        prop_assert_eq!(decoded, oracle);
    }
}

#[test]
fn distributivity_up_to_scalar() {
    let env = Environment::new();
    for a in 0..=5 {
        for b in 0..=5 {
            for c in 0..=5 {
                let (ea, eb, ec) = (encode_nat(a), encode_nat(b), encode_nat(c));
                let left = apply_arith(
                    ArithOp::Mul,
                    &[
                        ea.clone(),
                        apply_arith(ArithOp::Add, &[eb.clone(), ec.clone()]).unwrap(),
                    ],
                )
                .unwrap();
                let right = apply_arith(
                    ArithOp::Add,
                    &[
                        apply_arith(ArithOp::Mul, &[ea.clone(), eb]).unwrap(),
                        apply_arith(ArithOp::Mul, &[ea, ec]).unwrap(),
                    ],
                )
                .unwrap();
                let (l, r) = (evaluate(&left, &env).unwrap(), evaluate(&right, &env).unwrap());
                assert!(proj_equal(&l, &r).unwrap().is_some(), "{a} * ({b} + {c})");
            }
        }
    }
}

#[test]
fn model_law_and_pendant_scalars() {
    let env = Environment::new();
    for n in 0..=20usize {
        let t = evaluate(&encode_nat(n), &env).unwrap();
        assert_eq!(t.entries(), &[ratio(n as i64, 1), ratio(1, 1)]);
        // scalar (i) is 1 for every n; scalar (ii) is n
        assert_eq!(
            scalar_value(&pendant_scalar_i(&encode_nat(n)), &env).unwrap(),
            ratio(1, 1)
        );
        assert_eq!(
            scalar_value(&pendant_scalar_ii(&encode_nat(n)), &env).unwrap(),
            ratio(n as i64, 1)
        );
    }
}

#[test]
fn equal_fractions_are_projectively_equal() {
    let env = Environment::new();
    for p in -4..=4 {
        for q in 1..=4 {
            let base = evaluate(&encode_rational(p, q).unwrap(), &env).unwrap();
            for k in 2..=3 {
                let scaled = evaluate(&encode_rational(p * k, q * k).unwrap(), &env).unwrap();
                assert!(proj_equal(&base, &scaled).unwrap().is_some(), "{p}/{q} x {k}");
            }
        }
    }
}
