//! Numeric expressions and path conditions.
//!
//! A path condition is a boolean tree over numeric comparisons. Expressions
//! are parsed from a small C-like DSL ([`parse_condition`]), printed back in
//! a fully parenthesized canonical form (the `Display` impls), and evaluated
//! concretely in IEEE double precision ([`eval_num`], [`eval_condition`]).

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{eval_condition, eval_num, eval_predicate, EvalError, Valuation};
pub use parse::{parse_condition, parse_expr, ParseError, MAX_NESTING};

/// Built-in functions callable from the DSL.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Sqrt,
    Abs,
    Exp,
    Log,
    Pow,
    Min,
    Max,
}

/// Registration table: DSL name, function, arity.
pub const FUNCTIONS: &[(&str, Func, usize)] = &[
    ("sin", Func::Sin, 1),
    ("cos", Func::Cos, 1),
    ("sqrt", Func::Sqrt, 1),
    ("abs", Func::Abs, 1),
    ("exp", Func::Exp, 1),
    ("log", Func::Log, 1),
    ("pow", Func::Pow, 2),
    ("min", Func::Min, 2),
    ("max", Func::Max, 2),
];

impl Func {
    pub fn lookup(name: &str) -> Option<Func> {
        FUNCTIONS
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|&(_, f, _)| f)
    }

    pub fn name(self) -> &'static str {
        FUNCTIONS.iter().find(|(_, f, _)| *f == self).unwrap().0
    }

    pub fn arity(self) -> usize {
        FUNCTIONS.iter().find(|(_, f, _)| *f == self).unwrap().2
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NumExpr {
    Const(f64),
    Var(String),
    Neg(Box<NumExpr>),
    Add(Box<NumExpr>, Box<NumExpr>),
    Sub(Box<NumExpr>, Box<NumExpr>),
    Mul(Box<NumExpr>, Box<NumExpr>),
    Div(Box<NumExpr>, Box<NumExpr>),
    /// Arity is checked by the parser and by [`NumExpr::call`].
    Call(Func, Vec<NumExpr>),
}

impl NumExpr {
    pub fn var(name: impl Into<String>) -> Self {
        NumExpr::Var(name.into())
    }

    /// Builds a call, returning `None` when the argument count is wrong.
    pub fn call(func: Func, args: Vec<NumExpr>) -> Option<Self> {
        (args.len() == func.arity()).then_some(NumExpr::Call(func, args))
    }

    pub fn free_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            NumExpr::Const(_) => {}
            NumExpr::Var(v) => {
                out.insert(v.as_str());
            }
            NumExpr::Neg(e) => e.collect_vars(out),
            NumExpr::Add(a, b) | NumExpr::Sub(a, b) | NumExpr::Mul(a, b) | NumExpr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            NumExpr::Call(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelOp {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl RelOp {
    pub const ALL: [RelOp; 6] = [RelOp::Le, RelOp::Lt, RelOp::Ge, RelOp::Gt, RelOp::Eq, RelOp::Ne];

    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Le => "<=",
            RelOp::Lt => "<",
            RelOp::Ge => ">=",
            RelOp::Gt => ">",
            RelOp::Eq => "==",
            RelOp::Ne => "!=",
        }
    }

    /// Exact IEEE comparison, no epsilon.
    pub fn holds(self, a: f64, b: f64) -> bool {
        match self {
            RelOp::Le => a <= b,
            RelOp::Lt => a < b,
            RelOp::Ge => a >= b,
            RelOp::Gt => a > b,
            RelOp::Eq => a == b,
            RelOp::Ne => a != b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Predicate {
    pub lhs: NumExpr,
    pub op: RelOp,
    pub rhs: NumExpr,
}

impl Predicate {
    pub fn new(lhs: NumExpr, op: RelOp, rhs: NumExpr) -> Self {
        Predicate { lhs, op, rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PathCondition {
    Leaf(Predicate),
    /// At least two children.
    And(Vec<PathCondition>),
    /// At least two children.
    Or(Vec<PathCondition>),
    Not(Box<PathCondition>),
}

impl PathCondition {
    /// Conjunction of `parts`; a single part is returned unwrapped.
    ///
    /// # Panics
    /// If `parts` is empty.
    pub fn and(mut parts: Vec<PathCondition>) -> Self {
        assert!(!parts.is_empty(), "empty conjunction");
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            PathCondition::And(parts)
        }
    }

    /// Disjunction of `parts`; a single part is returned unwrapped.
    ///
    /// # Panics
    /// If `parts` is empty.
    pub fn or(mut parts: Vec<PathCondition>) -> Self {
        assert!(!parts.is_empty(), "empty disjunction");
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            PathCondition::Or(parts)
        }
    }

    pub fn free_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            PathCondition::Leaf(p) => {
                p.lhs.collect_vars(out);
                p.rhs.collect_vars(out);
            }
            PathCondition::And(cs) | PathCondition::Or(cs) => {
                cs.iter().for_each(|c| c.collect_vars(out))
            }
            PathCondition::Not(c) => c.collect_vars(out),
        }
    }
}

impl fmt::Display for NumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Debug keeps a fraction or exponent and round-trips exactly.
            NumExpr::Const(c) => write!(f, "{c:?}"),
            NumExpr::Var(v) => f.write_str(v),
            // The parenthesized child stops `-(2.0)` from folding into a literal.
            NumExpr::Neg(e) => write!(f, "-({e})"),
            NumExpr::Add(a, b) => write!(f, "({a} + {b})"),
            NumExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            NumExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            NumExpr::Div(a, b) => write!(f, "({a} / {b})"),
            NumExpr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.lhs, self.op.symbol(), self.rhs)
    }
}

impl fmt::Display for PathCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathCondition::Leaf(p) => write!(f, "{p}"),
            PathCondition::And(cs) | PathCondition::Or(cs) => {
                let sep = if matches!(self, PathCondition::And(_)) { " && " } else { " || " };
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            PathCondition::Not(c) => write!(f, "!{c}"),
        }
    }
}

/// Canonical text of a condition; re-parses to an identical tree.
pub fn print_condition(pc: &PathCondition) -> String {
    pc.to_string()
}
