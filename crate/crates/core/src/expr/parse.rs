//! Recursive-descent parser for the condition DSL.
//!
//! ```text
//! condition  = or ;
//! or         = and , { "||" , and } ;
//! and        = not , { "&&" , not } ;
//! not        = "!" , not | "(" , condition , ")" | comparison ;
//! comparison = arith , relop , arith ;
//! arith      = term , { ( "+" | "-" ) , term } ;
//! term       = unary , { ( "*" | "/" ) , unary } ;
//! unary      = "-" , unary | atom ;
//! atom       = number | ident | ident , "(" , arith , { "," , arith } , ")" | "(" , arith , ")" ;
//! ```
//!
//! A `(` in `not` position may open either a boolean group or an arithmetic
//! one. Each group's sort is decided up front by a linear scan over the token
//! stream: a group is boolean when it holds a relational or logical operator
//! at its own nesting level, or when its only content is a boolean group.

use std::fmt;

use super::{Func, NumExpr, PathCondition, Predicate, RelOp};

/// Deepest nesting of parentheses, unary operators and calls accepted.
pub const MAX_NESTING: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Rel(RelOp),
    AndAnd,
    OrOr,
    Bang,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Rel(op) => format!("`{}`", op.symbol()),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let start_col = col;
        let two = chars.get(i + 1).copied();
        let (tok, len) = match (c, two) {
            ('<', Some('=')) => (Tok::Rel(RelOp::Le), 2),
            ('>', Some('=')) => (Tok::Rel(RelOp::Ge), 2),
            ('=', Some('=')) => (Tok::Rel(RelOp::Eq), 2),
            ('!', Some('=')) => (Tok::Rel(RelOp::Ne), 2),
            ('&', Some('&')) => (Tok::AndAnd, 2),
            ('|', Some('|')) => (Tok::OrOr, 2),
            ('<', _) => (Tok::Rel(RelOp::Lt), 1),
            ('>', _) => (Tok::Rel(RelOp::Gt), 1),
            ('!', _) => (Tok::Bang, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            _ if c.is_ascii_digit() => {
                let len = scan_number(&chars[i..]);
                let lit: String = chars[i..i + len].iter().collect();
                let v: f64 = lit.parse().map_err(|_| {
                    ParseError::new(line, start_col, format!("malformed number `{lit}`"))
                })?;
                if !v.is_finite() {
                    return Err(ParseError::new(
                        line,
                        start_col,
                        format!("number `{lit}` is out of range"),
                    ));
                }
                (Tok::Num(v), len)
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                (Tok::Ident(chars[i..i + len].iter().collect()), len)
            }
            _ => {
                return Err(ParseError::new(
                    line,
                    start_col,
                    format!("unexpected character `{}`", c.escape_debug()),
                ))
            }
        };
        out.push(Token { tok, line, col: start_col });
        i += len;
        col += len;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Length of the longest number literal at the start of `s`:
/// digits, optional `.digits`, optional exponent.
fn scan_number(s: &[char]) -> usize {
    let digits = |from: usize| s[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    let mut n = digits(0);
    if s.get(n) == Some(&'.') && s.get(n + 1).is_some_and(|c| c.is_ascii_digit()) {
        n += 1 + digits(n + 1);
    }
    if matches!(s.get(n), Some('e') | Some('E')) {
        let mut m = n + 1;
        if matches!(s.get(m), Some('+') | Some('-')) {
            m += 1;
        }
        let exp = digits(m);
        if exp > 0 {
            n = m + exp;
        }
    }
    n
}

/// For every `(` token, whether its group is boolean-sorted.
fn classify_groups(toks: &[Token]) -> Vec<bool> {
    struct Open {
        at: usize,
        is_call: bool,
        has_logic: bool,
        items: usize,
        only_bool_group: bool,
    }
    let mut boolean = vec![false; toks.len()];
    let mut stack: Vec<Open> = Vec::new();
    for (i, t) in toks.iter().enumerate() {
        match t.tok {
            Tok::LParen => {
                let is_call = i > 0 && matches!(toks[i - 1].tok, Tok::Ident(_));
                stack.push(Open { at: i, is_call, has_logic: false, items: 0, only_bool_group: false });
            }
            Tok::RParen => {
                if let Some(g) = stack.pop() {
                    let is_bool = !g.is_call && (g.has_logic || (g.items == 1 && g.only_bool_group));
                    boolean[g.at] = is_bool;
                    if let Some(parent) = stack.last_mut() {
                        if g.is_call {
                            // The callee identifier was already counted.
                        } else {
                            parent.items += 1;
                            parent.only_bool_group = is_bool;
                        }
                    }
                }
            }
            _ => {
                if let Some(parent) = stack.last_mut() {
                    if matches!(t.tok, Tok::Rel(_) | Tok::AndAnd | Tok::OrOr | Tok::Bang) {
                        parent.has_logic = true;
                    }
                    parent.items += 1;
                    parent.only_bool_group = false;
                }
            }
        }
    }
    boolean
}

struct Parser {
    toks: Vec<Token>,
    boolean_group: Vec<bool>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let toks = lex(text)?;
        let boolean_group = classify_groups(&toks);
        Ok(Parser { toks, boolean_group, pos: 0, depth: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::new(t.line, t.col, format!("expected {expected}, found {}", t.tok.describe()))
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let t = &self.toks[self.pos];
            return Err(ParseError::new(
                t.line,
                t.col,
                format!("nesting deeper than {MAX_NESTING} levels"),
            ));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            Tok::RParen => Err(self.error_here("end of input (unbalanced `)`)")),
            _ => Err(self.error_here("`&&`, `||` or end of input")),
        }
    }

    fn condition(&mut self) -> Result<PathCondition, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::OrOr {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(PathCondition::or(parts))
    }

    fn conjunction(&mut self) -> Result<PathCondition, ParseError> {
        let mut parts = vec![self.negation()?];
        while *self.peek() == Tok::AndAnd {
            self.bump();
            parts.push(self.negation()?);
        }
        Ok(PathCondition::and(parts))
    }

    fn negation(&mut self) -> Result<PathCondition, ParseError> {
        self.enter()?;
        let out = match self.peek() {
            Tok::Bang => {
                self.bump();
                self.negation().map(|c| PathCondition::Not(Box::new(c)))
            }
            Tok::LParen if self.boolean_group[self.pos] => {
                self.bump();
                let inner = self.condition();
                inner.and_then(|c| self.expect(Tok::RParen, "`)`").map(|_| c))
            }
            _ => self.comparison().map(PathCondition::Leaf),
        };
        self.leave();
        out
    }

    fn comparison(&mut self) -> Result<Predicate, ParseError> {
        let lhs = self.arith()?;
        let op = match self.peek() {
            Tok::Rel(op) => *op,
            _ => return Err(self.error_here("comparison operator")),
        };
        self.bump();
        let rhs = self.arith()?;
        if let Tok::Rel(_) = self.peek() {
            return Err(self.error_here("`&&`, `||` or `)` (comparisons do not chain)"));
        }
        Ok(Predicate::new(lhs, op, rhs))
    }

    fn arith(&mut self) -> Result<NumExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            let ctor: fn(Box<NumExpr>, Box<NumExpr>) -> NumExpr = match self.peek() {
                Tok::Plus => NumExpr::Add,
                Tok::Minus => NumExpr::Sub,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            acc = ctor(Box::new(acc), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<NumExpr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let ctor: fn(Box<NumExpr>, Box<NumExpr>) -> NumExpr = match self.peek() {
                Tok::Star => NumExpr::Mul,
                Tok::Slash => NumExpr::Div,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.unary()?;
            acc = ctor(Box::new(acc), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<NumExpr, ParseError> {
        self.enter()?;
        let out = if *self.peek() == Tok::Minus {
            self.bump();
            // `-` directly before a literal is a negative literal.
            if let Tok::Num(v) = *self.peek() {
                self.bump();
                Ok(NumExpr::Const(-v))
            } else {
                self.unary().map(|e| NumExpr::Neg(Box::new(e)))
            }
        } else {
            self.atom()
        };
        self.leave();
        out
    }

    fn atom(&mut self) -> Result<NumExpr, ParseError> {
        let t = self.toks[self.pos].clone();
        match t.tok {
            Tok::Num(v) => {
                self.bump();
                Ok(NumExpr::Const(v))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(NumExpr::Var(name));
                }
                let func = Func::lookup(&name).ok_or_else(|| {
                    ParseError::new(t.line, t.col, format!("unknown function `{name}`"))
                })?;
                self.bump();
                let mut args = vec![self.arith()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.arith()?);
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                if args.len() != func.arity() {
                    return Err(ParseError::new(
                        t.line,
                        t.col,
                        format!(
                            "function `{name}` takes {} argument{}, found {}",
                            func.arity(),
                            if func.arity() == 1 { "" } else { "s" },
                            args.len()
                        ),
                    ));
                }
                Ok(NumExpr::Call(func, args))
            }
            Tok::LParen => {
                if self.boolean_group[self.pos] {
                    return Err(ParseError::new(
                        t.line,
                        t.col,
                        "boolean expression used where a number is expected",
                    ));
                }
                self.bump();
                let e = self.arith()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.error_here("number, identifier or `(`")),
        }
    }
}

/// Parses a path condition from DSL text.
pub fn parse_condition(text: &str) -> Result<PathCondition, ParseError> {
    let mut p = Parser::new(text)?;
    let pc = p.condition()?;
    p.finish()?;
    Ok(pc)
}

/// Parses a bare numeric expression.
pub fn parse_expr(text: &str) -> Result<NumExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.arith()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        _ => Err(p.error_here("operator or end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> NumExpr {
        NumExpr::var(n)
    }

    fn c(v: f64) -> NumExpr {
        NumExpr::Const(v)
    }

    fn bx(e: NumExpr) -> Box<NumExpr> {
        Box::new(e)
    }

    #[test]
    fn foo_condition_is_a_three_way_conjunction() {
        let pc = parse_condition("(y <= 8*sin(0.2*x+7)+4) && (y <= sqrt(x)+8) && (x <= 16-y)")
            .unwrap();
        let PathCondition::And(parts) = &pc else { panic!("expected And, got {pc:?}") };
        assert_eq!(parts.len(), 3);
        let first = Predicate::new(
            var("y"),
            RelOp::Le,
            NumExpr::Add(
                bx(NumExpr::Mul(
                    bx(c(8.0)),
                    bx(NumExpr::Call(
                        Func::Sin,
                        vec![NumExpr::Add(bx(NumExpr::Mul(bx(c(0.2)), bx(var("x")))), bx(c(7.0)))],
                    )),
                )),
                bx(c(4.0)),
            ),
        );
        assert_eq!(parts[0], PathCondition::Leaf(first));
        assert_eq!(
            parts[2],
            PathCondition::Leaf(Predicate::new(var("x"), RelOp::Le, NumExpr::Sub(bx(c(16.0)), bx(var("y")))))
        );
    }

    #[test]
    fn tautology_leaf() {
        assert_eq!(
            parse_condition("x <= x").unwrap(),
            PathCondition::Leaf(Predicate::new(var("x"), RelOp::Le, var("x")))
        );
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let err = parse_condition("sin(x, y) <= 0").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        assert!(err.message.contains("takes 1 argument"), "{err}");
    }

    #[test]
    fn unknown_function_is_rejected() {
        let err = parse_condition("x <= tan(x)").unwrap_err();
        assert_eq!(err.column, 6);
        assert!(err.message.contains("unknown function"));
    }

    #[test]
    fn boolean_inside_arithmetic_is_rejected() {
        let err = parse_condition("(x < 1) + 2 <= 3").unwrap_err();
        assert!(err.message.contains("expected"), "{err}");
        let err = parse_condition("x + (y < 1) <= 3").unwrap_err();
        assert_eq!(err.column, 5);
        assert!(err.message.contains("boolean"), "{err}");
    }

    #[test]
    fn precedence() {
        // ! binds tighter than &&, which binds tighter than ||.
        let pc = parse_condition("!a < 1 && b < 1 || c < 1").unwrap();
        let PathCondition::Or(or) = pc else { panic!() };
        let PathCondition::And(and) = &or[0] else { panic!() };
        assert!(matches!(and[0], PathCondition::Not(_)));
        // unary minus > * > +
        let e = parse_expr("1 + -x * 2").unwrap();
        assert_eq!(
            e,
            NumExpr::Add(bx(c(1.0)), bx(NumExpr::Mul(bx(NumExpr::Neg(bx(var("x")))), bx(c(2.0)))))
        );
        // left associativity
        assert_eq!(
            parse_expr("a - b - c").unwrap(),
            NumExpr::Sub(bx(NumExpr::Sub(bx(var("a")), bx(var("b")))), bx(var("c")))
        );
    }

    #[test]
    fn parenthesized_arithmetic_in_condition_position() {
        let pc = parse_condition("(x + 1) * 2 <= (y)").unwrap();
        assert!(matches!(pc, PathCondition::Leaf(_)));
        let pc = parse_condition("((x) <= 3)").unwrap();
        assert!(matches!(pc, PathCondition::Leaf(_)));
        let pc = parse_condition("(((x < 1)))").unwrap();
        assert!(matches!(pc, PathCondition::Leaf(_)));
        let pc = parse_condition("(!(x < 1) || max(x, y) >= 2)").unwrap();
        assert!(matches!(pc, PathCondition::Or(_)));
    }

    #[test]
    fn whitespace_and_newlines_are_ignored() {
        let a = parse_condition("x<=1&&y>=2").unwrap();
        let b = parse_condition("  x <=\n 1 &&\ty >= 2 ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_expr("1.5e3").unwrap(), c(1500.0));
        assert_eq!(parse_expr("2E-1").unwrap(), c(0.2));
        assert!(parse_expr("1e999").is_err());
        // `1.` is a number followed by a stray dot
        assert!(parse_expr("1.").is_err());
    }

    #[test]
    fn error_positions_track_lines() {
        let err = parse_condition("x <= 1 &&\n  y <= $").unwrap_err();
        assert_eq!((err.line, err.column), (2, 8));
    }

    #[test]
    fn malformed_fixtures_give_positioned_errors() {
        for text in [
            "", "(", ")", "x", "x <=", "<= 1", "x <= 1 &&", "x < 1 < 2", "((x <= 1)", "x <= 1)",
            "x <= (1", "f(x) <= 1", "pow(x) <= 1", "x <= ,", "x <= 1 y", "!", "x <== 1",
            "x & y", "x | y", "1 <= 2 @", "sin() <= 1", "x <= 1 || ", "x = 1",
        ] {
            let err = parse_condition(text).expect_err(text);
            assert!(err.line >= 1 && err.column >= 1, "{text:?}: {err}");
        }
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let deep = format!("{}x{} <= 1", "(".repeat(100_000), ")".repeat(100_000));
        let err = parse_condition(&deep).unwrap_err();
        assert!(err.message.contains("nesting"));
        let deep = format!("{}x <= 1", "!".repeat(100_000));
        assert!(parse_condition(&deep).is_err());
        let deep = format!("x <= {}1", "-".repeat(100_000));
        assert!(parse_condition(&deep).is_err());
    }
}
