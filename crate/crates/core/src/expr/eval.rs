//! Concrete double-precision evaluation.
//!
//! Partial functions applied outside their domain (square root of a negative,
//! logarithm of a non-positive, division by zero) make an expression
//! undefined, as does any non-finite intermediate. Undefinedness propagates
//! strictly through every enclosing expression. At the predicate level an
//! undefined side makes the comparison false, so a point whose constraints
//! cannot be evaluated is never reported as satisfying. `!` over such a
//! predicate is consequently true.

use std::collections::{BTreeMap, HashMap};

use super::{Func, NumExpr, PathCondition, Predicate};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}

/// Variable lookup used during evaluation.
pub trait Valuation {
    fn get(&self, name: &str) -> Option<f64>;
}

impl Valuation for HashMap<String, f64> {
    fn get(&self, name: &str) -> Option<f64> {
        HashMap::get(self, name).copied()
    }
}

impl Valuation for BTreeMap<String, f64> {
    fn get(&self, name: &str) -> Option<f64> {
        BTreeMap::get(self, name).copied()
    }
}

impl Valuation for [(&str, f64)] {
    fn get(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }
}

impl<const N: usize> Valuation for [(&str, f64); N] {
    fn get(&self, name: &str) -> Option<f64> {
        <[(&str, f64)] as Valuation>::get(self.as_slice(), name)
    }
}

fn defined(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub(crate) fn apply(func: Func, args: &[f64]) -> Option<f64> {
    let x = args[0];
    let v = match func {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Sqrt if x < 0.0 => return None,
        Func::Sqrt => x.sqrt(),
        Func::Abs => x.abs(),
        Func::Exp => x.exp(),
        Func::Log if x <= 0.0 => return None,
        Func::Log => x.ln(),
        Func::Pow => x.powf(args[1]),
        Func::Min => x.min(args[1]),
        Func::Max => x.max(args[1]),
    };
    defined(v)
}

/// Evaluates `e`; `Ok(None)` means the value is undefined at this point.
pub fn eval_num<V: Valuation + ?Sized>(e: &NumExpr, v: &V) -> Result<Option<f64>, EvalError> {
    Ok(match e {
        NumExpr::Const(c) => defined(*c),
        NumExpr::Var(name) => {
            let x = v.get(name).ok_or_else(|| EvalError::UnboundVariable(name.clone()))?;
            defined(x)
        }
        NumExpr::Neg(a) => eval_num(a, v)?.map(|a| -a),
        NumExpr::Add(a, b) => binary(a, b, v, |a, b| defined(a + b))?,
        NumExpr::Sub(a, b) => binary(a, b, v, |a, b| defined(a - b))?,
        NumExpr::Mul(a, b) => binary(a, b, v, |a, b| defined(a * b))?,
        NumExpr::Div(a, b) => binary(a, b, v, |a, b| if b == 0.0 { None } else { defined(a / b) })?,
        NumExpr::Call(func, args) => {
            let mut vals = [0.0; 2];
            let mut undefined = false;
            // Every argument is evaluated so unbound variables are always reported.
            for (slot, a) in vals.iter_mut().zip(args) {
                match eval_num(a, v)? {
                    Some(x) => *slot = x,
                    None => undefined = true,
                }
            }
            if undefined {
                None
            } else {
                apply(*func, &vals[..args.len()])
            }
        }
    })
}

fn binary<V: Valuation + ?Sized>(
    a: &NumExpr,
    b: &NumExpr,
    v: &V,
    op: impl Fn(f64, f64) -> Option<f64>,
) -> Result<Option<f64>, EvalError> {
    let a = eval_num(a, v)?;
    let b = eval_num(b, v)?;
    Ok(match (a, b) {
        (Some(a), Some(b)) => op(a, b),
        _ => None,
    })
}

pub fn eval_predicate<V: Valuation + ?Sized>(p: &Predicate, v: &V) -> Result<bool, EvalError> {
    let lhs = eval_num(&p.lhs, v)?;
    let rhs = eval_num(&p.rhs, v)?;
    Ok(match (lhs, rhs) {
        (Some(a), Some(b)) => p.op.holds(a, b),
        _ => false,
    })
}

/// Truth of `pc` at `v`. Every leaf is evaluated (no short-circuit) so an
/// unbound variable anywhere in the tree is an error regardless of the point.
pub fn eval_condition<V: Valuation + ?Sized>(pc: &PathCondition, v: &V) -> Result<bool, EvalError> {
    match pc {
        PathCondition::Leaf(p) => eval_predicate(p, v),
        PathCondition::And(cs) => {
            let mut all = true;
            for c in cs {
                all &= eval_condition(c, v)?;
            }
            Ok(all)
        }
        PathCondition::Or(cs) => {
            let mut any = false;
            for c in cs {
                any |= eval_condition(c, v)?;
            }
            Ok(any)
        }
        PathCondition::Not(c) => Ok(!eval_condition(c, v)?),
    }
}
