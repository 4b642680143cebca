//! Ground truth for small domains: count the satisfying points of a box and
//! mark which grid cells hold at least one of them.

use crate::domain::{InputBox, Point};
use crate::expr::{EvalError, PathCondition};
use crate::grid::{partition, CellId, GridError, GridSpec};
use crate::sample::{sample_uniform, stream};
use crate::target::Target;

/// Default cap on the number of points enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000_000;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Every integer point of an all-integer box holding at most `limit` points.
    Exhaustive { limit: u64 },
    /// `samples` uniform points drawn from a stream seeded with `seed`.
    MonteCarlo { samples: u64, seed: u64 },
}

impl Default for OracleMode {
    fn default() -> Self {
        OracleMode::Exhaustive { limit: EXHAUSTIVE_LIMIT }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellMap {
    pub grid: GridSpec,
    /// Indexed by [`GridSpec::linear`].
    pub valid: Vec<bool>,
}

impl CellMap {
    pub fn is_valid(&self, c: &CellId) -> bool {
        self.grid.contains_cell(c) && self.valid[self.grid.linear(c)]
    }

    pub fn valid_cells(&self) -> Vec<CellId> {
        self.grid.cells().filter(|c| self.valid[self.grid.linear(c)]).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub mode: OracleMode,
    /// Points enumerated or sampled.
    pub total: u64,
    pub satisfying: u64,
    pub fraction: f64,
    /// 95% Wilson score interval of the fraction, Monte Carlo mode only.
    pub wilson: Option<(f64, f64)>,
    /// Cells holding a satisfying point. In Monte Carlo mode only cells hit by
    /// a sampled satisfier are marked.
    pub cells: Option<CellMap>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("the box has {points} integer points, above the exhaustive limit of {limit}")]
    TooLarge { points: String, limit: u64 },
    #[error("exhaustive enumeration needs an all-integer box")]
    RealDomain,
    #[error("Monte Carlo sampling needs at least one sample")]
    NoSamples,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

pub fn run_oracle(pc: &PathCondition, bx: &InputBox, n: Option<u32>, mode: OracleMode) -> Result<OracleReport, OracleError> {
    let target = Target::new(pc, bx)?;
    let grid = n.map(|n| partition(bx, n)).transpose()?;
    let mut valid = vec![false; grid.as_ref().map_or(0, GridSpec::cell_count)];
    let mut satisfying = 0u64;
    let mut visit = |p: &Point| {
        if target.accepts(p) {
            satisfying += 1;
            if let Some(c) = grid.as_ref().and_then(|g| g.locate(p)) {
                valid[grid.as_ref().unwrap().linear(&c)] = true;
            }
        }
    };
    let (total, wilson) = match mode {
        OracleMode::Exhaustive { limit } => {
            if !bx.all_int() {
                return Err(OracleError::RealDomain);
            }
            let points = bx.int_point_count();
            match points {
                Some(p) if p <= limit => {
                    bx.for_each_int_point(&mut visit);
                    (p, None)
                }
                _ => {
                    let points = points.map_or_else(|| "more than 2^64".to_string(), |p| p.to_string());
                    return Err(OracleError::TooLarge { points, limit });
                }
            }
        }
        OracleMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(OracleError::NoSamples);
            }
            let mut rng = stream(seed);
            for _ in 0..samples {
                visit(&sample_uniform(bx, &mut rng));
            }
            (samples, Some(()))
        }
    };
    let fraction = satisfying as f64 / total as f64;
    Ok(OracleReport {
        mode,
        total,
        satisfying,
        fraction,
        wilson: wilson.map(|()| wilson_interval(satisfying, total)),
        cells: grid.map(|grid| CellMap { grid, valid }),
    })
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// All satisfying integer points of an all-integer box, in lexicographic order.
pub fn satisfying_points(pc: &PathCondition, bx: &InputBox, limit: u64) -> Result<Vec<Point>, OracleError> {
    let target = Target::new(pc, bx)?;
    if !bx.all_int() {
        return Err(OracleError::RealDomain);
    }
    match bx.int_point_count() {
        Some(p) if p <= limit => {}
        p => {
            let points = p.map_or_else(|| "more than 2^64".to_string(), |p| p.to_string());
            return Err(OracleError::TooLarge { points, limit });
        }
    }
    let mut out = Vec::new();
    bx.for_each_int_point(|p| {
        if target.accepts(p) {
            out.push(p.clone());
        }
    });
    Ok(out)
}
