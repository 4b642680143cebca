#![allow(dead_code)]

use pathart::expr::{Func, NumExpr, Predicate, RelOp, FUNCTIONS};
use pathart::{parse_condition, parse_domain, InputBox, PathCondition};
use proptest::prelude::*;

pub const FOO: &str = "(y <= 8*sin(0.2*x+7)+4) && (y <= sqrt(x)+8) && (x <= 16-y)";
pub const FOO_DOMAIN: &str = "x:int:0..15;y:int:0..15";

pub fn foo() -> (PathCondition, InputBox) {
    (parse_condition(FOO).unwrap(), parse_domain(FOO_DOMAIN).unwrap())
}

/// Direct transcription of the example program's branch condition.
pub fn foo_holds(x: f64, y: f64) -> bool {
    y <= 8.0 * (0.2 * x + 7.0).sin() + 4.0 && y <= x.sqrt() + 8.0 && x <= 16.0 - y
}

pub fn constant() -> impl Strategy<Value = f64> {
    prop_oneof![
        4 => (-20i32..=20).prop_map(f64::from),
        2 => prop::sample::select(vec![0.5, 0.2, 0.1, 1.5, 2.25, 1e-3, 2.5e2, 3.25, 7.0e-5, 1e6]),
        1 => -1.0e3..1.0e3f64,
    ]
}

fn var(vars: &'static [&'static str]) -> impl Strategy<Value = NumExpr> {
    prop::sample::select(vars).prop_map(NumExpr::var)
}

/// Expressions over `vars` with at most `depth` levels of operators.
pub fn num_expr(vars: &'static [&'static str], depth: u32) -> BoxedStrategy<NumExpr> {
    let leaf = prop_oneof![constant().prop_map(NumExpr::Const), var(vars)].boxed();
    leaf.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| NumExpr::Neg(Box::new(e))),
            (inner.clone(), inner.clone(), 0..4u8).prop_map(|(a, b, op)| {
                let (a, b) = (Box::new(a), Box::new(b));
                match op {
                    0 => NumExpr::Add(a, b),
                    1 => NumExpr::Sub(a, b),
                    2 => NumExpr::Mul(a, b),
                    _ => NumExpr::Div(a, b),
                }
            }),
            (prop::sample::select(FUNCTIONS.to_vec()), inner.clone(), inner).prop_map(|((_, f, arity), a, b)| {
                let args = if arity == 1 { vec![a] } else { vec![a, b] };
                NumExpr::call(f, args).unwrap()
            }),
        ]
    })
    .boxed()
}

pub fn rel_op() -> impl Strategy<Value = RelOp> {
    prop::sample::select(RelOp::ALL.to_vec())
}

pub fn predicate(vars: &'static [&'static str], depth: u32) -> impl Strategy<Value = Predicate> {
    (num_expr(vars, depth), rel_op(), num_expr(vars, depth)).prop_map(|(l, op, r)| Predicate::new(l, op, r))
}

/// Boolean trees of predicates; total depth stays within `depth` + `leaf_depth`.
pub fn condition(vars: &'static [&'static str], depth: u32, leaf_depth: u32) -> BoxedStrategy<PathCondition> {
    predicate(vars, leaf_depth)
        .prop_map(PathCondition::Leaf)
        .boxed()
        .prop_recursive(depth, 24, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(PathCondition::And),
                prop::collection::vec(inner.clone(), 2..4).prop_map(PathCondition::Or),
                inner.prop_map(|c| PathCondition::Not(Box::new(c))),
            ]
        })
        .boxed()
}

/// Integer boxes over x and y with at most `max_side` values per side.
pub fn int_box_xy(max_side: i64) -> impl Strategy<Value = InputBox> {
    (-30i64..30, 0..max_side, -30i64..30, 0..max_side)
        .prop_map(|(x, w, y, h)| parse_domain(&format!("x:int:{x}..{};y:int:{y}..{}", x + w, y + h)).unwrap())
}

/// Mixed boxes: x integer, y real.
pub fn mixed_box_xy() -> impl Strategy<Value = InputBox> {
    (-30i64..30, 0i64..40, -30.0f64..30.0, 0.0f64..40.0)
        .prop_map(|(x, w, y, h)| parse_domain(&format!("x:int:{x}..{};y:real:{y:?}..{:?}", x + w, y + h)).unwrap())
}

pub fn func_names() -> Vec<&'static str> {
    FUNCTIONS.iter().map(|(n, _, _)| *n).collect()
}

pub fn is_call(e: &NumExpr, f: Func) -> bool {
    matches!(e, NumExpr::Call(g, _) if *g == f)
}
