//! Equal-cell grids over input boxes.
//!
//! Every dimension is cut into the same number `n` of cells. An integer
//! dimension whose size is not a multiple of `n` is enlarged upward by the
//! smallest amount that makes it one, so all integer cells hold the same
//! number of values. Real dimensions are cut into `n` slabs of equal width,
//! half-open except the last.

use std::fmt;

use crate::domain::{Bounds, InputBox, Point, MAX_INT_MAGNITUDE};

/// Upper bound on `n^d`.
pub const MAX_CELLS: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid resolution must be at least 1")]
    ZeroResolution,
    #[error("domain `{dim}` is too small to hold {n} cells")]
    DegenerateDomain { dim: String, n: u32 },
    #[error("{n}^{d} cells exceeds the limit of {MAX_CELLS}")]
    TooManyCells { n: u32, d: usize },
    #[error("cells {neighbor} and {valid} are not adjacent")]
    NotAdjacent { neighbor: CellId, valid: CellId },
    #[error("band fraction {0} is outside (0, 1]")]
    InvalidBeta(f64),
}

/// Cell coordinates, one index per dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId(Vec<u32>);

impl CellId {
    pub fn new(idx: Vec<u32>) -> Self {
        CellId(idx)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    base: InputBox,
    n: u32,
}

/// Partitions `bx` into `n` cells per dimension, enlarging int dimensions as needed.
pub fn partition(bx: &InputBox, n: u32) -> Result<GridSpec, GridError> {
    if n == 0 {
        return Err(GridError::ZeroResolution);
    }
    let d = bx.dim_count();
    match (n as u64).checked_pow(d as u32) {
        Some(c) if c <= MAX_CELLS => {}
        _ => return Err(GridError::TooManyCells { n, d }),
    }
    let mut dims = Vec::with_capacity(d);
    for dom in bx.dims() {
        let degenerate = || GridError::DegenerateDomain { dim: dom.name().to_string(), n };
        let bounds = match dom.bounds() {
            Bounds::Int { lo, hi } => {
                let size = (hi - lo) as u64 + 1;
                if size < n as u64 {
                    return Err(degenerate());
                }
                let enlarged = size.div_ceil(n as u64) * n as u64;
                let hi = lo + enlarged as i64 - 1;
                if hi > MAX_INT_MAGNITUDE {
                    return Err(degenerate());
                }
                Bounds::Int { lo, hi }
            }
            Bounds::Real { lo, hi } => {
                if n > 1 && lo == hi {
                    return Err(degenerate());
                }
                Bounds::Real { lo, hi }
            }
        };
        dims.push(dom.with_bounds(bounds));
    }
    let base = InputBox::new(dims).expect("names were already unique");
    Ok(GridSpec { base, n })
}

impl GridSpec {
    /// The (possibly enlarged) box the cells tile.
    pub fn base(&self) -> &InputBox {
        &self.base
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim_count(&self) -> usize {
        self.base.dim_count()
    }

    pub fn cell_count(&self) -> usize {
        (self.n as usize).pow(self.dim_count() as u32)
    }

    pub fn contains_cell(&self, c: &CellId) -> bool {
        c.0.len() == self.dim_count() && c.0.iter().all(|&i| i < self.n)
    }

    /// Dense index with dimension 0 most significant (so it orders like `CellId`).
    pub fn linear(&self, c: &CellId) -> usize {
        c.0.iter().fold(0usize, |acc, &i| acc * self.n as usize + i as usize)
    }

    pub fn cell_at(&self, mut linear: usize) -> CellId {
        let n = self.n as usize;
        let mut idx = vec![0u32; self.dim_count()];
        for slot in idx.iter_mut().rev() {
            *slot = (linear % n) as u32;
            linear /= n;
        }
        CellId(idx)
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cell_count()).map(|i| self.cell_at(i))
    }

    /// Edge `i` (0..=n) of a real dimension.
    fn real_edge(&self, lo: f64, hi: f64, i: u32) -> f64 {
        if i == 0 {
            return lo;
        }
        if i == self.n {
            return hi;
        }
        let t = i as f64 / self.n as f64;
        let w = hi - lo;
        let e = if w.is_finite() { lo + w * t } else { lo * (1.0 - t) + hi * t };
        e.clamp(lo, hi)
    }

    fn dim_cell(&self, k: usize, i: u32) -> Bounds {
        match self.base.dims()[k].bounds() {
            Bounds::Int { lo, hi } => {
                let w = (hi - lo + 1) / self.n as i64;
                let a = lo + i as i64 * w;
                Bounds::Int { lo: a, hi: a + w - 1 }
            }
            Bounds::Real { lo, hi } => Bounds::Real {
                lo: self.real_edge(lo, hi, i),
                hi: self.real_edge(lo, hi, i + 1),
            },
        }
    }

    /// The closed sub-box of cell `c`.
    ///
    /// # Panics
    /// If `c` does not belong to this grid.
    pub fn cell_box(&self, c: &CellId) -> InputBox {
        assert!(self.contains_cell(c), "cell {c} outside {}^{} grid", self.n, self.dim_count());
        let dims = self
            .base
            .dims()
            .iter()
            .enumerate()
            .map(|(k, d)| d.with_bounds(self.dim_cell(k, c.0[k])))
            .collect();
        InputBox::new(dims).unwrap()
    }

    /// Cell holding `p`, if `p` lies in the base box. Interior real edges
    /// belong to the upper cell.
    pub fn locate(&self, p: &Point) -> Option<CellId> {
        if !self.base.contains(p) {
            return None;
        }
        let n = self.n;
        let idx = self
            .base
            .dims()
            .iter()
            .zip(p.coords())
            .map(|(d, &v)| match d.bounds() {
                Bounds::Int { lo, hi } => {
                    let w = (hi - lo + 1) / n as i64;
                    ((v as i64 - lo) / w) as u32
                }
                Bounds::Real { lo, hi } => {
                    let guess = if hi > lo { ((v - lo) / (hi - lo) * n as f64).floor() } else { 0.0 };
                    let mut i = guess.clamp(0.0, (n - 1) as f64) as u32;
                    while i > 0 && v < self.real_edge(lo, hi, i) {
                        i -= 1;
                    }
                    while i + 1 < n && v >= self.real_edge(lo, hi, i + 1) {
                        i += 1;
                    }
                    i
                }
            })
            .collect();
        Some(CellId(idx))
    }

    /// Cells at Chebyshev distance exactly 1 from `c`, in `CellId` order.
    pub fn neighbors_moore(&self, c: &CellId) -> Vec<CellId> {
        let d = self.dim_count();
        let mut out = Vec::new();
        let mut offs = vec![-1i64; d];
        loop {
            if offs.iter().any(|&o| o != 0) {
                let idx: Option<Vec<u32>> = c
                    .0
                    .iter()
                    .zip(&offs)
                    .map(|(&i, &o)| {
                        let j = i as i64 + o;
                        (0..self.n as i64).contains(&j).then_some(j as u32)
                    })
                    .collect();
                if let Some(idx) = idx {
                    out.push(CellId(idx));
                }
            }
            let mut k = d;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if offs[k] < 1 {
                    offs[k] += 1;
                    break;
                }
                offs[k] = -1;
            }
        }
    }

    pub fn are_adjacent(&self, a: &CellId, b: &CellId) -> bool {
        a.0.len() == b.0.len()
            && a != b
            && a.0.iter().zip(&b.0).all(|(&x, &y)| x.abs_diff(y) <= 1)
    }

    /// The `beta` slice of `neighbor` that borders `valid`.
    ///
    /// Along dimensions where the two cells share an index the band spans the
    /// neighbor's full extent; along the others it keeps the `beta` fraction
    /// on the side facing `valid` (at least one value for int dimensions).
    pub fn boundary_band(&self, neighbor: &CellId, valid: &CellId, beta: f64) -> Result<InputBox, GridError> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(GridError::InvalidBeta(beta));
        }
        if !self.contains_cell(neighbor) || !self.contains_cell(valid) || !self.are_adjacent(neighbor, valid) {
            return Err(GridError::NotAdjacent { neighbor: neighbor.clone(), valid: valid.clone() });
        }
        let dims = self
            .base
            .dims()
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let (u, v) = (neighbor.0[k], valid.0[k]);
                let cell = self.dim_cell(k, u);
                let band = if u == v {
                    cell
                } else {
                    let toward_low = u > v;
                    match cell {
                        Bounds::Int { lo, hi } => {
                            let w = (hi - lo + 1) as f64;
                            let keep = ((beta * w).ceil() as i64).clamp(1, hi - lo + 1);
                            if toward_low {
                                Bounds::Int { lo, hi: lo + keep - 1 }
                            } else {
                                Bounds::Int { lo: hi - keep + 1, hi }
                            }
                        }
                        Bounds::Real { lo, hi } => {
                            let keep = (hi - lo) * beta;
                            if toward_low {
                                Bounds::Real { lo, hi: (lo + keep).min(hi) }
                            } else {
                                Bounds::Real { lo: (hi - keep).max(lo), hi }
                            }
                        }
                    }
                };
                d.with_bounds(band)
            })
            .collect();
        Ok(InputBox::new(dims).unwrap())
    }

    /// Column-major label `D_i` of a 2-d cell: `D_1` is the lowest first-dimension
    /// block with the highest second-dimension block.
    pub fn label(&self, c: &CellId) -> Option<usize> {
        if self.dim_count() != 2 || !self.contains_cell(c) {
            return None;
        }
        let n = self.n as usize;
        let (i, j) = (c.0[0] as usize, c.0[1] as usize);
        Some(i * n + (n - 1 - j) + 1)
    }

    /// Inverse of [`GridSpec::label`].
    pub fn cell_from_label(&self, label: usize) -> Option<CellId> {
        let n = self.n as usize;
        if self.dim_count() != 2 || label == 0 || label > n * n {
            return None;
        }
        let k = label - 1;
        Some(CellId(vec![(k / n) as u32, (n - 1 - k % n) as u32]))
    }
}
