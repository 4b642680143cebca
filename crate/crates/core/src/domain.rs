//! Variable domains, input boxes and points.

use std::fmt;
use std::str::FromStr;

use crate::expr::{ParseError, Valuation};

/// Integer bounds are limited to ±2^53 so every value is exact as `f64`.
pub const MAX_INT_MAGNITUDE: i64 = 1 << 53;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bounds {
    /// Inclusive integer range.
    Int { lo: i64, hi: i64 },
    /// Closed real range; sampled as `[lo, hi)`.
    Real { lo: f64, hi: f64 },
}

impl Bounds {
    pub fn lo(&self) -> f64 {
        match *self {
            Bounds::Int { lo, .. } => lo as f64,
            Bounds::Real { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> f64 {
        match *self {
            Bounds::Int { hi, .. } => hi as f64,
            Bounds::Real { hi, .. } => hi,
        }
    }

    pub fn is_int(&self) -> bool {
        matches!(self, Bounds::Int { .. })
    }

    pub fn contains(&self, v: f64) -> bool {
        match *self {
            Bounds::Int { lo, hi } => v.fract() == 0.0 && v >= lo as f64 && v <= hi as f64,
            Bounds::Real { lo, hi } => v >= lo && v <= hi,
        }
    }

    /// Number of integers in an int range.
    pub fn int_size(&self) -> Option<u64> {
        match *self {
            Bounds::Int { lo, hi } => Some((hi - lo) as u64 + 1),
            Bounds::Real { .. } => None,
        }
    }

    /// `self` is a sub-range of `outer` (same kind).
    pub fn within(&self, outer: &Bounds) -> bool {
        match (*self, *outer) {
            (Bounds::Int { lo, hi }, Bounds::Int { lo: a, hi: b }) => lo >= a && hi <= b,
            (Bounds::Real { lo, hi }, Bounds::Real { lo: a, hi: b }) => lo >= a && hi <= b,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("domain `{0}`: lo exceeds hi")]
    LoExceedsHi(String),
    #[error("domain `{0}`: integer bound beyond ±2^53")]
    IntOutOfRange(String),
    #[error("domain `{0}`: bounds must be finite")]
    NonFinite(String),
    #[error("invalid variable name `{0}`")]
    BadName(String),
    #[error("duplicate variable `{0}`")]
    Duplicate(String),
    #[error("input box needs at least one variable")]
    Empty,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarDomain {
    name: String,
    bounds: Bounds,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarDomain {
    pub fn new(name: impl Into<String>, bounds: Bounds) -> Result<Self, DomainError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(DomainError::BadName(name));
        }
        match bounds {
            Bounds::Int { lo, hi } => {
                if lo.abs() > MAX_INT_MAGNITUDE || hi.abs() > MAX_INT_MAGNITUDE {
                    return Err(DomainError::IntOutOfRange(name));
                }
                if lo > hi {
                    return Err(DomainError::LoExceedsHi(name));
                }
            }
            Bounds::Real { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() {
                    return Err(DomainError::NonFinite(name));
                }
                if lo > hi {
                    return Err(DomainError::LoExceedsHi(name));
                }
            }
        }
        Ok(VarDomain { name, bounds })
    }

    pub fn int(name: impl Into<String>, lo: i64, hi: i64) -> Result<Self, DomainError> {
        Self::new(name, Bounds::Int { lo, hi })
    }

    pub fn real(name: impl Into<String>, lo: f64, hi: f64) -> Result<Self, DomainError> {
        Self::new(name, Bounds::Real { lo, hi })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub(crate) fn with_bounds(&self, bounds: Bounds) -> Self {
        VarDomain { name: self.name.clone(), bounds }
    }
}

/// A hyper-rectangle of variable domains, in declaration order.
#[derive(Clone, Debug, PartialEq)]
pub struct InputBox {
    dims: Vec<VarDomain>,
}

impl InputBox {
    pub fn new(dims: Vec<VarDomain>) -> Result<Self, DomainError> {
        if dims.is_empty() {
            return Err(DomainError::Empty);
        }
        for (i, d) in dims.iter().enumerate() {
            if dims[..i].iter().any(|e| e.name == d.name) {
                return Err(DomainError::Duplicate(d.name.clone()));
            }
        }
        Ok(InputBox { dims })
    }

    pub fn dims(&self) -> &[VarDomain] {
        &self.dims
    }

    pub fn dim_count(&self) -> usize {
        self.dims.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.dims.iter().map(|d| d.name.as_str())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.dims.iter().position(|d| d.name == name)
    }

    pub fn all_int(&self) -> bool {
        self.dims.iter().all(|d| d.bounds.is_int())
    }

    /// Number of integer points, when every dimension is int and the count fits.
    pub fn int_point_count(&self) -> Option<u64> {
        self.dims
            .iter()
            .try_fold(1u64, |acc, d| acc.checked_mul(d.bounds.int_size()?))
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.len() == self.dims.len() && self.dims.iter().zip(p.coords()).all(|(d, &v)| d.bounds.contains(v))
    }

    /// Every dimension of `self` lies inside the same-named one of `outer`.
    pub fn within(&self, outer: &InputBox) -> bool {
        self.dims.len() == outer.dims.len()
            && self.dims.iter().zip(&outer.dims).all(|(a, b)| a.name == b.name && a.bounds.within(&b.bounds))
    }

    /// The common part of two boxes over the same variables, or `None` if it is
    /// empty or the variables differ. Mixed kinds take the integer kind.
    pub fn intersect(&self, other: &InputBox) -> Option<InputBox> {
        if self.dims.len() != other.dims.len() {
            return None;
        }
        let mut dims = Vec::with_capacity(self.dims.len());
        for (a, b) in self.dims.iter().zip(&other.dims) {
            if a.name != b.name {
                return None;
            }
            let bounds = match (a.bounds, b.bounds) {
                (Bounds::Real { lo: l1, hi: h1 }, Bounds::Real { lo: l2, hi: h2 }) => {
                    let (lo, hi) = (l1.max(l2), h1.min(h2));
                    if lo > hi {
                        return None;
                    }
                    Bounds::Real { lo, hi }
                }
                (x, y) => {
                    let lo = x.lo().max(y.lo()).ceil();
                    let hi = x.hi().min(y.hi()).floor();
                    if lo > hi {
                        return None;
                    }
                    Bounds::Int { lo: lo as i64, hi: hi as i64 }
                }
            };
            dims.push(a.with_bounds(bounds));
        }
        Some(InputBox { dims })
    }

    /// Pairs `p`'s coordinates with this box's variable names.
    pub fn bind<'a>(&'a self, p: &'a Point) -> Binding<'a> {
        debug_assert_eq!(p.len(), self.dims.len());
        Binding { bx: self, point: p }
    }

    /// Calls `f` on every integer point, in lexicographic order (last dimension fastest).
    /// Returns `false` without calling `f` if some dimension is real.
    pub fn for_each_int_point(&self, mut f: impl FnMut(&Point)) -> bool {
        let mut ranges = Vec::with_capacity(self.dims.len());
        for d in &self.dims {
            match d.bounds {
                Bounds::Int { lo, hi } => ranges.push((lo, hi)),
                Bounds::Real { .. } => return false,
            }
        }
        let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let mut p = Point::new(cur.iter().map(|&v| v as f64).collect());
        loop {
            f(&p);
            let mut k = cur.len();
            loop {
                if k == 0 {
                    return true;
                }
                k -= 1;
                if cur[k] < ranges[k].1 {
                    cur[k] += 1;
                    p.0[k] = cur[k] as f64;
                    break;
                }
                cur[k] = ranges[k].0;
                p.0[k] = cur[k] as f64;
            }
        }
    }

    /// Formats one coordinate per its dimension kind.
    pub fn format_point(&self, p: &Point) -> String {
        let mut out = String::new();
        for (i, (d, v)) in self.dims.iter().zip(p.coords()).enumerate() {
            if i > 0 {
                out.push(',');
            }
            if d.bounds.is_int() {
                out.push_str(&format!("{}", *v as i64));
            } else {
                out.push_str(&format!("{v:?}"));
            }
        }
        out
    }
}

pub struct Binding<'a> {
    bx: &'a InputBox,
    point: &'a Point,
}

impl Valuation for Binding<'_> {
    fn get(&self, name: &str) -> Option<f64> {
        self.bx.index_of(name).map(|i| self.point.0[i])
    }
}

/// One value per dimension of the box it was drawn from.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

impl fmt::Display for VarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bounds {
            Bounds::Int { lo, hi } => write!(f, "{}:int:{lo}..{hi}", self.name),
            Bounds::Real { lo, hi } => write!(f, "{}:real:{lo:?}..{hi:?}", self.name),
        }
    }
}

impl fmt::Display for InputBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Parses a domain specification such as `x:int:0..15;y:real:-1.5..2e3`.
///
/// Entries are `name:kind:lo..hi` separated by `;` (a trailing `;` is
/// allowed); whitespace around fields is ignored.
pub fn parse_domain(text: &str) -> Result<InputBox, ParseError> {
    let mut dims: Vec<VarDomain> = Vec::new();
    let mut offset = 0;
    let entries: Vec<&str> = text.split(';').collect();
    for (i, entry) in entries.iter().enumerate() {
        let start = offset;
        offset += entry.chars().count() + 1;
        if entry.trim().is_empty() && i + 1 == entries.len() && i > 0 {
            break;
        }
        dims.push(parse_entry(text, entry, start)?);
        let d = dims.last().unwrap();
        if dims[..dims.len() - 1].iter().any(|e| e.name == d.name) {
            return Err(position(text, start, format!("duplicate variable `{}`", d.name)));
        }
    }
    InputBox::new(dims).map_err(|e| position(text, 0, e.to_string()))
}

impl FromStr for InputBox {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_domain(s)
    }
}

/// Error at char offset `at` of `text`, converted to line/column.
fn position(text: &str, at: usize, message: impl Into<String>) -> ParseError {
    let (mut line, mut col) = (1, 1);
    for c in text.chars().take(at) {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    ParseError::new(line, col, message)
}

fn parse_entry(text: &str, entry: &str, start: usize) -> Result<VarDomain, ParseError> {
    let fields: Vec<&str> = entry.splitn(3, ':').collect();
    if fields.len() != 3 {
        return Err(position(text, start, format!("expected `name:kind:lo..hi`, found `{}`", entry.trim())));
    }
    let name = fields[0].trim();
    if !is_identifier(name) {
        return Err(position(text, start, format!("invalid variable name `{name}`")));
    }
    let kind_at = start + fields[0].chars().count() + 1;
    let range_at = kind_at + fields[1].chars().count() + 1;
    let range = fields[2];
    let Some(sep) = range.find("..") else {
        return Err(position(text, range_at, format!("expected `lo..hi`, found `{}`", range.trim())));
    };
    let (lo_s, hi_s) = (range[..sep].trim(), range[sep + 2..].trim());
    let hi_at = range_at + range[..sep + 2].chars().count();
    let bounds = match fields[1].trim() {
        "int" => {
            let lo = parse_int(lo_s).ok_or_else(|| position(text, range_at, format!("invalid integer `{lo_s}`")))?;
            let hi = parse_int(hi_s).ok_or_else(|| position(text, hi_at, format!("invalid integer `{hi_s}`")))?;
            Bounds::Int { lo, hi }
        }
        "real" => {
            let lo = parse_real(lo_s).ok_or_else(|| position(text, range_at, format!("invalid number `{lo_s}`")))?;
            let hi = parse_real(hi_s).ok_or_else(|| position(text, hi_at, format!("invalid number `{hi_s}`")))?;
            Bounds::Real { lo, hi }
        }
        other => {
            return Err(position(text, kind_at, format!("unknown kind `{}` (expected `int` or `real`)", other)))
        }
    };
    VarDomain::new(name, bounds).map_err(|e| position(text, range_at, e.to_string()))
}

fn parse_int(s: &str) -> Option<i64> {
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Same literal shape as the condition DSL, with an optional sign.
fn parse_real(s: &str) -> Option<f64> {
    let body = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    let b = body.as_bytes();
    let digits = |from: usize| b[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    let mut n = digits(0);
    if n == 0 {
        return None;
    }
    if b.get(n) == Some(&b'.') {
        let f = digits(n + 1);
        if f == 0 {
            return None;
        }
        n += 1 + f;
    }
    if matches!(b.get(n), Some(b'e') | Some(b'E')) {
        let mut m = n + 1;
        if matches!(b.get(m), Some(b'+') | Some(b'-')) {
            m += 1;
        }
        let e = digits(m);
        if e == 0 {
            return None;
        }
        n = m + e;
    }
    if n != b.len() {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}
