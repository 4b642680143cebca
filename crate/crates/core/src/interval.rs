//! Sound interval evaluation and refutation of path conditions over boxes.
//!
//! [`iv_eval`] is the natural interval extension of an expression: every
//! defined concrete value of the expression at a point of the box lies inside
//! the result. Arithmetic bounds are rounded outward whenever the floating
//! point operation was inexact (the residual is recovered exactly with
//! two-sum or an FMA), so exact operations on exact inputs stay tight.
//! Library functions are widened by two ULPs on each side.
//!
//! [`refute_pc`] only ever proves impossibility: `Unsat` means no point of
//! the box satisfies the condition.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::domain::InputBox;
use crate::expr::{EvalError, Func, NumExpr, PathCondition, Predicate, RelOp};

/// A closed set of reals, or empty. `maybe_undefined` records that some point
/// of the box might make the expression undefined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    bounds: Option<(f64, f64)>,
    maybe_undefined: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        normalize(lo, hi, false)
    }

    pub fn point(v: f64) -> Self {
        Self::new(v, v)
    }

    pub fn empty() -> Self {
        Interval { bounds: None, maybe_undefined: true }
    }

    pub fn entire() -> Self {
        Interval { bounds: Some((f64::NEG_INFINITY, f64::INFINITY)), maybe_undefined: true }
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    pub fn lo(&self) -> Option<f64> {
        self.bounds.map(|b| b.0)
    }

    pub fn hi(&self) -> Option<f64> {
        self.bounds.map(|b| b.1)
    }

    pub fn maybe_undefined(&self) -> bool {
        self.maybe_undefined
    }

    pub fn contains(&self, v: f64) -> bool {
        matches!(self.bounds, Some((lo, hi)) if lo <= v && v <= hi)
    }

    /// Set inclusion, ignoring the undefinedness flag.
    pub fn subset_of(&self, other: &Interval) -> bool {
        match (self.bounds, other.bounds) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((a, b)), Some((c, d))) => c <= a && b <= d,
        }
    }

    fn flagged(mut self, undef: bool) -> Self {
        self.maybe_undefined |= undef;
        self
    }
}

fn normalize(lo: f64, hi: f64, undef: bool) -> Interval {
    if lo.is_nan() || hi.is_nan() {
        return Interval::entire();
    }
    if lo == f64::INFINITY || hi == f64::NEG_INFINITY || lo > hi {
        // Every value overflowed.
        return Interval::empty();
    }
    // An infinite bound means some point may overflow, which is undefined.
    let undef = undef || lo.is_infinite() || hi.is_infinite();
    Interval { bounds: Some((lo, hi)), maybe_undefined: undef }
}

/// Results this close to zero use unconditional widening: residuals of
/// subnormal results are not reliable.
const TINY: f64 = 1e-290;

fn add_round(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if !s.is_finite() {
        return (s, s);
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    round_by_residual(s, err)
}

/// `err` is the sign of `exact - s`.
fn round_by_residual(s: f64, err: f64) -> (f64, f64) {
    if err > 0.0 {
        (s, s.next_up())
    } else if err < 0.0 {
        (s.next_down(), s)
    } else {
        (s, s)
    }
}

fn mul_round(a: f64, b: f64) -> (f64, f64) {
    // 0 * inf is taken as 0: infinities here are limits, not values.
    if a == 0.0 || b == 0.0 {
        return (0.0, 0.0);
    }
    let p = a * b;
    if !p.is_finite() {
        return (p, p);
    }
    if p.abs() < TINY {
        return (p.next_down(), p.next_up());
    }
    round_by_residual(p, a.mul_add(b, -p))
}

fn div_round(a: f64, b: f64) -> (f64, f64) {
    let q = a / b;
    if !q.is_finite() || a.is_infinite() {
        return (q, q);
    }
    if b.is_infinite() {
        return (q.next_down(), q.next_up());
    }
    if q.abs() < TINY || b.abs() < TINY {
        return (q.next_down(), q.next_up());
    }
    // a - q*b has the sign of (exact - q) * sign(b)
    let r = (-q).mul_add(b, a);
    round_by_residual(q, if b > 0.0 { r } else { -r })
}

fn sqrt_round(x: f64) -> (f64, f64) {
    let s = x.sqrt();
    if !s.is_finite() || s == 0.0 {
        return (s, s);
    }
    if x < TINY {
        return (s.next_down().max(0.0), s.next_up());
    }
    round_by_residual(s, (-s).mul_add(s, x))
}

fn widen2(v: f64) -> (f64, f64) {
    if !v.is_finite() {
        return (v, v);
    }
    (v.next_down().next_down(), v.next_up().next_up())
}

fn add(a: Interval, b: Interval) -> Interval {
    let undef = a.maybe_undefined || b.maybe_undefined;
    match (a.bounds, b.bounds) {
        (Some((al, ah)), Some((bl, bh))) => normalize(add_round(al, bl).0, add_round(ah, bh).1, undef),
        _ => Interval::empty(),
    }
}

fn neg(a: Interval) -> Interval {
    match a.bounds {
        Some((lo, hi)) => Interval { bounds: Some((-hi, -lo)), maybe_undefined: a.maybe_undefined },
        None => a,
    }
}

fn mul(a: Interval, b: Interval) -> Interval {
    let undef = a.maybe_undefined || b.maybe_undefined;
    let (Some((al, ah)), Some((bl, bh))) = (a.bounds, b.bounds) else {
        return Interval::empty();
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (x, y) in [(al, bl), (al, bh), (ah, bl), (ah, bh)] {
        let (l, h) = mul_round(x, y);
        lo = lo.min(l);
        hi = hi.max(h);
    }
    normalize(lo, hi, undef)
}

fn div(a: Interval, b: Interval) -> Interval {
    let undef = a.maybe_undefined || b.maybe_undefined;
    let (Some((al, ah)), Some((bl, bh))) = (a.bounds, b.bounds) else {
        return Interval::empty();
    };
    if bl == 0.0 && bh == 0.0 {
        return Interval::empty();
    }
    if bl <= 0.0 && bh >= 0.0 {
        return Interval::entire();
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (x, y) in [(al, bl), (al, bh), (ah, bl), (ah, bh)] {
        let (l, h) = div_round(x, y);
        lo = lo.min(l);
        hi = hi.max(h);
    }
    normalize(lo, hi, undef)
}

/// Whether `[a, b]` may contain a point `phase + 2kπ`, with a guard band.
fn hits_phase(a: f64, b: f64, phase: f64) -> bool {
    const GUARD: f64 = 1e-9;
    let ka = ((a - phase) / TAU - GUARD).ceil();
    let kb = ((b - phase) / TAU + GUARD).floor();
    ka <= kb
}

/// Beyond this magnitude the periodic functions are bounded by [-1, 1] only.
const TRIG_LIMIT: f64 = 1e6;

fn periodic(a: Interval, f: fn(f64) -> f64, max_phase: f64, min_phase: f64) -> Interval {
    let Some((lo, hi)) = a.bounds else { return a };
    if hi - lo >= TAU || lo.abs() > TRIG_LIMIT || hi.abs() > TRIG_LIMIT {
        return Interval { bounds: Some((-1.0, 1.0)), maybe_undefined: a.maybe_undefined };
    }
    let (fl, fh) = (f(lo), f(hi));
    let top = if hits_phase(lo, hi, max_phase) { 1.0 } else { widen2(fl.max(fh)).1.min(1.0) };
    let bottom = if hits_phase(lo, hi, min_phase) { -1.0 } else { widen2(fl.min(fh)).0.max(-1.0) };
    Interval { bounds: Some((bottom, top)), maybe_undefined: a.maybe_undefined }
}

fn sqrt(a: Interval) -> Interval {
    let Some((lo, hi)) = a.bounds else { return a };
    if hi < 0.0 {
        return Interval::empty();
    }
    let clipped = lo < 0.0;
    normalize(sqrt_round(lo.max(0.0)).0, sqrt_round(hi).1, a.maybe_undefined || clipped)
}

fn log(a: Interval) -> Interval {
    let Some((lo, hi)) = a.bounds else { return a };
    if hi <= 0.0 {
        return Interval::empty();
    }
    let clipped = lo <= 0.0;
    let l = if clipped { f64::NEG_INFINITY } else { widen2(lo.ln()).0 };
    // log is at least 0 on [1, inf) and at most 0 below 1
    let h = if hi <= 1.0 { widen2(hi.ln()).1.min(0.0) } else { widen2(hi.ln()).1 };
    let l = if lo >= 1.0 { l.max(0.0) } else { l };
    normalize(l, h, a.maybe_undefined || clipped)
}

fn exp(a: Interval) -> Interval {
    let Some((lo, hi)) = a.bounds else { return a };
    // exp is at least 1 on [0, inf) and at most 1 below 0
    let l = widen2(lo.exp()).0.max(if lo >= 0.0 { 1.0 } else { 0.0 });
    let h = if hi <= 0.0 { widen2(hi.exp()).1.min(1.0) } else { widen2(hi.exp()).1 };
    normalize(l, h, a.maybe_undefined)
}

fn abs(a: Interval) -> Interval {
    let Some((lo, hi)) = a.bounds else { return a };
    let b = if lo >= 0.0 {
        (lo, hi)
    } else if hi <= 0.0 {
        (-hi, -lo)
    } else {
        (0.0, hi.max(-lo))
    };
    Interval { bounds: Some(b), maybe_undefined: a.maybe_undefined }
}

fn lattice(a: Interval, b: Interval, f: fn(f64, f64) -> f64) -> Interval {
    let undef = a.maybe_undefined || b.maybe_undefined;
    match (a.bounds, b.bounds) {
        (Some((al, ah)), Some((bl, bh))) => Interval { bounds: Some((f(al, bl), f(ah, bh))), maybe_undefined: undef },
        _ => Interval::empty(),
    }
}

/// `x^k` for a nonzero integer `k`.
fn powi(a: Interval, k: f64) -> Interval {
    if k < 0.0 {
        // Reciprocal first, so x^k that underflows to 0 is not lost as 1/inf.
        let r = div(Interval::point(1.0), a);
        return powi(r, -k).flagged(r.maybe_undefined);
    }
    let Some((lo, hi)) = a.bounds else { return a };
    let m = k.abs();
    let even = m % 2.0 == 0.0;
    let p = |x: f64| x.powf(m);
    let (l, h) = if even {
        if lo >= 0.0 {
            (widen2(p(lo)).0, widen2(p(hi)).1)
        } else if hi <= 0.0 {
            (widen2(p(-hi)).0, widen2(p(-lo)).1)
        } else {
            (0.0, widen2(p(lo.abs().max(hi))).1)
        }
    } else {
        (widen2(p(lo)).0, widen2(p(hi)).1)
    };
    let l = if even { l.max(0.0) } else { l };
    normalize(l, h, a.maybe_undefined)
}

fn pow(base: Interval, exponent: &NumExpr, exp_iv: Interval) -> Interval {
    if let NumExpr::Const(k) = exponent {
        if k.fract() == 0.0 && k.abs() <= 1e9 {
            if *k == 0.0 {
                return match base.bounds {
                    Some(_) => Interval { bounds: Some((1.0, 1.0)), maybe_undefined: base.maybe_undefined },
                    None => base,
                };
            }
            return powi(base, *k);
        }
    }
    let undef = base.maybe_undefined || exp_iv.maybe_undefined;
    match (base.bounds, exp_iv.bounds) {
        (None, _) | (_, None) => Interval::empty(),
        // A negative base is defined for integral exponents of either sign.
        (Some((lo, _)), _) if lo < 0.0 => Interval::entire(),
        (Some((_, hi)), Some((el, eh))) if hi <= 0.0 => {
            // pow(0, b) is 1 at b = 0, 0 above and undefined below.
            let undef = undef || el < 0.0;
            match (el <= 0.0, eh > 0.0) {
                (true, true) => normalize(0.0, 1.0, undef),
                (true, false) if eh == 0.0 => normalize(1.0, 1.0, undef),
                (true, false) => Interval::empty(),
                (false, _) => normalize(0.0, 0.0, undef),
            }
        }
        _ => {
            let lg = log(Interval { bounds: base.bounds, maybe_undefined: false });
            // log clipping at 0 is not undefinedness here: pow(0, b) is 0 or 1 for b >= 0.
            let lg = Interval { bounds: lg.bounds, maybe_undefined: false };
            exp(mul(exp_iv, lg)).flagged(undef)
        }
    }
}

/// Encloses every defined value of `e` over `bx`.
pub fn iv_eval(e: &NumExpr, bx: &InputBox) -> Result<Interval, EvalError> {
    Ok(match e {
        NumExpr::Const(c) => normalize(*c, *c, false),
        NumExpr::Var(name) => {
            let i = bx.index_of(name).ok_or_else(|| EvalError::UnboundVariable(name.clone()))?;
            let b = bx.dims()[i].bounds();
            Interval::new(b.lo(), b.hi())
        }
        NumExpr::Neg(a) => neg(iv_eval(a, bx)?),
        NumExpr::Add(a, b) => add(iv_eval(a, bx)?, iv_eval(b, bx)?),
        NumExpr::Sub(a, b) => add(iv_eval(a, bx)?, neg(iv_eval(b, bx)?)),
        NumExpr::Mul(a, b) => mul(iv_eval(a, bx)?, iv_eval(b, bx)?),
        NumExpr::Div(a, b) => div(iv_eval(a, bx)?, iv_eval(b, bx)?),
        NumExpr::Call(func, args) => {
            let x = iv_eval(&args[0], bx)?;
            match func {
                Func::Sin => periodic(x, f64::sin, FRAC_PI_2, -FRAC_PI_2),
                Func::Cos => periodic(x, f64::cos, 0.0, PI),
                Func::Sqrt => sqrt(x),
                Func::Abs => abs(x),
                Func::Exp => exp(x),
                Func::Log => log(x),
                Func::Pow => pow(x, &args[1], iv_eval(&args[1], bx)?),
                Func::Min => lattice(x, iv_eval(&args[1], bx)?, f64::min),
                Func::Max => lattice(x, iv_eval(&args[1], bx)?, f64::max),
            }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No point of the box satisfies the constraint.
    Unsat,
    /// Satisfiability was not ruled out.
    Unknown,
}

pub fn refute_predicate(p: &Predicate, bx: &InputBox) -> Result<Verdict, EvalError> {
    let l = iv_eval(&p.lhs, bx)?;
    let r = iv_eval(&p.rhs, bx)?;
    let (Some((l1, l2)), Some((r1, r2))) = (l.bounds, r.bounds) else {
        return Ok(Verdict::Unsat);
    };
    let unsat = match p.op {
        RelOp::Le => l1 > r2,
        RelOp::Lt => l1 >= r2,
        RelOp::Ge => l2 < r1,
        RelOp::Gt => l2 <= r1,
        RelOp::Eq => l2 < r1 || r2 < l1,
        RelOp::Ne => {
            l1 == l2 && r1 == r2 && l1 == r1 && !l.maybe_undefined && !r.maybe_undefined
        }
    };
    Ok(if unsat { Verdict::Unsat } else { Verdict::Unknown })
}

pub fn refute_pc(pc: &PathCondition, bx: &InputBox) -> Result<Verdict, EvalError> {
    Ok(match pc {
        PathCondition::Leaf(p) => refute_predicate(p, bx)?,
        PathCondition::And(cs) => {
            // every child is visited so unbound variables always surface
            let mut verdict = Verdict::Unknown;
            for c in cs {
                if refute_pc(c, bx)? == Verdict::Unsat {
                    verdict = Verdict::Unsat;
                }
            }
            verdict
        }
        PathCondition::Or(cs) => {
            let mut verdict = Verdict::Unsat;
            for c in cs {
                if refute_pc(c, bx)? == Verdict::Unknown {
                    verdict = Verdict::Unknown;
                }
            }
            verdict
        }
        PathCondition::Not(c) => {
            refute_pc(c, bx)?;
            Verdict::Unknown
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::parse_domain;
    use crate::expr::{parse_condition, parse_expr};

    fn iv(text: &str, domain: &str) -> Interval {
        iv_eval(&parse_expr(text).unwrap(), &parse_domain(domain).unwrap()).unwrap()
    }

    fn refute(text: &str, domain: &str) -> Verdict {
        refute_pc(&parse_condition(text).unwrap(), &parse_domain(domain).unwrap()).unwrap()
    }

    const FOO: &str = "(y <= 8*sin(0.2*x+7)+4) && (y <= sqrt(x)+8) && (x <= 16-y)";

    #[test]
    fn monotone_addition_is_exact() {
        assert_eq!(iv("2 + x", "x:int:1..3"), Interval::new(3.0, 5.0));
        assert!(!iv("2 + x", "x:int:1..3").maybe_undefined());
    }

    #[test]
    fn sine_across_a_maximum() {
        let r = iv("sin(x)", "x:real:0..3.2");
        let (lo, hi) = r.bounds().unwrap();
        assert_eq!(hi, 1.0);
        // sin(3.2) = -0.058374143427580086 (python math.sin)
        assert!(lo <= -0.058374143427580086 && lo > -0.0583741434276);
    }

    #[test]
    fn cosine_rules() {
        assert_eq!(iv("cos(x)", "x:real:-1..1").hi(), Some(1.0));
        assert_eq!(iv("cos(x)", "x:real:3..3.5").lo(), Some(-1.0));
        let (lo, hi) = iv("cos(x)", "x:real:0.5..1").bounds().unwrap();
        assert!(lo <= 1f64.cos() && hi >= 0.5f64.cos() && hi < 1.0);
        assert_eq!(iv("sin(x)", "x:real:0..7").bounds(), Some((-1.0, 1.0)));
    }

    #[test]
    fn sqrt_outside_domain_is_empty() {
        let r = iv("sqrt(x)", "x:real:-4..-1");
        assert!(r.is_empty() && r.maybe_undefined());
        let r = iv("sqrt(x)", "x:real:-4..4");
        assert_eq!(r.bounds(), Some((0.0, 2.0)));
        assert!(r.maybe_undefined());
        assert!(iv("log(x)", "x:real:-2..0").is_empty());
        assert_eq!(iv("log(x)", "x:real:0..1").bounds(), Some((f64::NEG_INFINITY, 0.0)));
    }

    #[test]
    fn division_rules() {
        let r = iv("1 / x", "x:int:-1..1");
        assert_eq!(r.bounds(), Some((f64::NEG_INFINITY, f64::INFINITY)));
        assert!(r.maybe_undefined());
        assert!(iv("1 / (x - x)", "x:int:3..3").is_empty());
        assert_eq!(iv("6 / x", "x:int:2..3").bounds(), Some((2.0, 3.0)));
        let (lo, hi) = iv("1 / x", "x:int:3..3").bounds().unwrap();
        assert!(lo <= 1.0 / 3.0 && hi >= 1.0 / 3.0 && hi - lo < 1e-15);
    }

    #[test]
    fn powers() {
        assert_eq!(iv("pow(x, 0)", "x:real:-5..5").bounds(), Some((1.0, 1.0)));
        let (lo, hi) = iv("pow(x, 2)", "x:int:-3..2").bounds().unwrap();
        assert!(lo == 0.0 && (9.0..9.00001).contains(&hi));
        let (lo, hi) = iv("pow(x, 3)", "x:int:-2..1").bounds().unwrap();
        assert!((-8.00001..=-8.0).contains(&lo) && (1.0..1.00001).contains(&hi));
        let r = iv("pow(x, -1)", "x:int:-1..1");
        assert!(r.maybe_undefined());
        let (lo, hi) = iv("pow(exp(x), -2)", "x:int:645..646").bounds().unwrap();
        assert!(lo <= 0.0 && hi >= 0.0);
        assert_eq!(iv("pow(-x, 0.5)", "x:int:0..0").bounds(), Some((0.0, 0.0)));
        assert!(iv("pow(x, -0.5)", "x:int:0..0").is_empty());
        let (lo, hi) = iv("pow(x, 0.5)", "x:int:0..4").bounds().unwrap();
        assert!(lo <= 0.0 && hi >= 2.0);
        assert_eq!(iv("pow(x, y)", "x:int:-2..2;y:int:0..3").bounds(), Some((f64::NEG_INFINITY, f64::INFINITY)));
    }

    #[test]
    fn predicate_refutation() {
        assert_eq!(refute("x <= -1", "x:int:0..3"), Verdict::Unsat);
        assert_eq!(refute("x < 0", "x:int:0..3"), Verdict::Unsat);
        assert_eq!(refute("x <= 0", "x:int:0..3"), Verdict::Unknown);
        assert_eq!(refute("x > 3", "x:int:0..3"), Verdict::Unsat);
        assert_eq!(refute("x >= 3", "x:int:0..3"), Verdict::Unknown);
        assert_eq!(refute("x == 5", "x:int:0..3"), Verdict::Unsat);
        assert_eq!(refute("x != 2", "x:int:2..2"), Verdict::Unsat);
        assert_eq!(refute("x != 2", "x:int:2..3"), Verdict::Unknown);
        assert_eq!(refute("sqrt(x) >= 0", "x:int:-3..-1"), Verdict::Unsat);
    }

    #[test]
    fn foo_over_the_4x4_cells() {
        // D1 = x in [0..3], y in [12..15]: the first conjunct's rhs stays below 12
        let d1 = "x:int:0..3;y:int:12..15";
        let first = parse_condition("y <= 8*sin(0.2*x+7)+4").unwrap();
        let PathCondition::Leaf(p) = &first else { unreachable!() };
        assert_eq!(refute_predicate(p, &parse_domain(d1).unwrap()).unwrap(), Verdict::Unsat);
        let rhs = iv("8*sin(0.2*x+7)+4", "x:int:0..3");
        // 8*sin(7.6)+4 = 11.74335737625189 (python)
        assert!((rhs.hi().unwrap() - 11.74335737625189).abs() < 1e-9);
        assert_eq!(refute(FOO, d1), Verdict::Unsat);
        // D10 = x in [8..11], y in [8..11]
        assert_eq!(refute("y <= sqrt(x)+8", "x:int:8..11;y:int:8..11"), Verdict::Unknown);
        let r = iv("sqrt(x)+8", "x:int:8..11");
        assert!(r.lo().unwrap() <= 10.8285 && r.hi().unwrap() >= 11.3166);
        // D16 holds (12, 0)
        assert_eq!(refute(FOO, "x:int:12..15;y:int:0..3"), Verdict::Unknown);
    }

    #[test]
    fn boolean_structure() {
        assert_eq!(refute("!(x <= -1)", "x:int:0..3"), Verdict::Unknown);
        assert_eq!(refute("!(x <= 10)", "x:int:0..3"), Verdict::Unknown);
        assert_eq!(refute("x <= -1 || x >= 9", "x:int:0..3"), Verdict::Unsat);
        assert_eq!(refute("x <= -1 || x >= 2", "x:int:0..3"), Verdict::Unknown);
        assert_eq!(refute("x <= 1 && x >= 2", "x:int:0..3"), Verdict::Unknown);
        assert_eq!(refute("x <= 1 && x >= 5", "x:int:0..3"), Verdict::Unsat);
        let err = refute_pc(&parse_condition("!(z < 1)").unwrap(), &parse_domain("x:int:0..3").unwrap());
        assert_eq!(err, Err(EvalError::UnboundVariable("z".into())));
    }

    #[test]
    fn directed_rounding_brackets_inexact_results() {
        let (lo, hi) = add_round(0.1, 0.2);
        assert!(lo < hi && (lo == 0.1 + 0.2 || hi == 0.1 + 0.2));
        assert_eq!(add_round(1.0, 2.0), (3.0, 3.0));
        assert_eq!(mul_round(3.0, 7.0), (21.0, 21.0));
        let (lo, hi) = mul_round(0.1, 3.0);
        assert!(lo < hi);
        assert_eq!(div_round(1.0, 4.0), (0.25, 0.25));
        let (lo, hi) = div_round(1.0, 3.0);
        assert_eq!(hi, lo.next_up());
        assert_eq!(sqrt_round(16.0), (4.0, 4.0));
        let (lo, hi) = sqrt_round(2.0);
        assert_eq!(hi, lo.next_up());
    }
}
