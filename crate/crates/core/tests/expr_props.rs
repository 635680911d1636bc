mod common;

use gendrv_core::expr::{parse, BinOp, Expr, Func};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Var),
        (0.0..1e6f64).prop_map(Expr::Num),
        (0u32..1000).prop_map(|n| Expr::Num(f64::from(n))),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
        let func = prop_oneof![Just(Func::Sin), Just(Func::Cos), Just(Func::Exp), Just(Func::Log), Just(Func::Sqrt)];
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::Binary(op, Box::new(l), Box::new(r))),
            (inner.clone(), -6i32..7).prop_map(|(b, n)| Expr::Pow(Box::new(b), n)),
            (func, inner).prop_map(|(f, a)| Expr::Call(f, Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn printing_then_parsing_is_identity(e in arb_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn jet_value_is_plain_value(e in arb_expr(), x in -5.0..5.0f64) {
        if let (Ok(v), Ok(j)) = (e.eval(x), e.eval_jet(x)) {
            prop_assert_eq!(v.to_bits(), j.v.to_bits());
        }
    }
}

#[test]
fn jets_match_central_differences_per_function_class() {
    let classes = [
        ("x^5 - 3*x^2 + 1", -2.0, 2.0),
        ("sin(3*x)", -3.0, 3.0),
        ("cos(x)^2", -3.0, 3.0),
        ("exp(x/2)", -3.0, 3.0),
        ("log(x)", 0.5, 5.0),
        ("sqrt(x)", 0.5, 5.0),
        ("1/(x + 4)", -2.0, 2.0),
        ("x^-3", 0.7, 3.0),
    ];
    for (src, lo, hi) in classes {
        let e = parse(src).unwrap();
        for i in 0..=20 {
            let x = lo + (hi - lo) * f64::from(i) / 20.0;
            let check = common::check_jet_against_fd(&e, x).unwrap_or_else(|| panic!("{src} rejected at {x}"));
            assert!(check.ok, "{}", check.detail);
        }
    }
}

#[test]
fn random_expressions_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 300 {
        let e = common::random_expr(&mut rng, 3);
        let x = rand::Rng::gen_range(&mut rng, -2.0..2.0);
        if let Some(check) = common::check_jet_against_fd(&e, x) {
            assert!(check.ok, "{}", check.detail);
            checked += 1;
        }
    }
}
