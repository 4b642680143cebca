//! Test suite generation by rejection sampling.
//!
//! All three methods draw points until `count` of them satisfy the path
//! condition. They differ only in where the points are drawn from:
//!
//! - `rt` samples the whole input box.
//! - `prt` partitions the box into `k^d` cells, drops every cell interval
//!   arithmetic proves unsatisfiable, and samples the surviving cells.
//! - `art` runs the grid search of [`crate::search`] and samples the cells it
//!   found valid.
//!
//! Cells of one grid have equal size, so picking a cell uniformly and then a
//! point uniformly inside it is uniform over their union.

use std::fmt;

use crate::domain::{InputBox, Point};
use crate::expr::{EvalError, PathCondition};
use crate::grid::{partition, CellId, GridError, GridSpec};
use crate::interval::{refute_pc, Verdict};
use crate::sample::{draw_index, sample_uniform, stream, Stream};
use crate::search::{expand_with_budget, find_first_valid, FirstValid, SearchConfig, SearchError};
use crate::target::Target;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodKind {
    Rt,
    Prt,
    Art,
}

impl MethodKind {
    pub const ALL: [MethodKind; 3] = [MethodKind::Rt, MethodKind::Prt, MethodKind::Art];

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Rt => "rt",
            MethodKind::Prt => "prt",
            MethodKind::Art => "art",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        MethodKind::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A generation method with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Method {
    Rt,
    Prt { k: u32 },
    Art(SearchConfig),
}

impl Method {
    pub fn kind(&self) -> MethodKind {
        match self {
            Method::Rt => MethodKind::Rt,
            Method::Prt { .. } => MethodKind::Prt,
            Method::Art(_) => MethodKind::Art,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenOptions {
    /// Give up once `cap_factor * count` points were generated.
    pub cap_factor: u64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { cap_factor: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenReport {
    pub method: Method,
    pub seed: u64,
    pub requested: u64,
    pub accepted: Vec<Point>,
    /// Every concrete evaluation of the condition, search probes included.
    pub generated_total: u64,
    pub rejected: u64,
    /// Evaluations spent before generation began.
    pub search_probes: u64,
    /// The grid sampled from (`None` for `rt`).
    pub grid: Option<GridSpec>,
    /// The cells sampled from, in `CellId` order (empty for `rt`).
    pub cells: Vec<CellId>,
    /// The search ran out of probe budget while expanding the valid region.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("acceptance too low: {accepted} of {requested} points accepted after {generated} generated")]
    AcceptanceTooLow { generated: u64, accepted: u64, requested: u64 },
    #[error("interval refutation proves the condition unsatisfiable over the box")]
    UnsatProven,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Generates `count` satisfying points with `method`, seeding a fresh stream with `seed`.
pub fn generate(
    method: &Method,
    pc: &PathCondition,
    bx: &InputBox,
    count: u64,
    seed: u64,
    opts: GenOptions,
) -> Result<GenReport, GenError> {
    generate_with_rejects(method, pc, bx, count, seed, opts, &mut |_| {})
}

/// As [`generate`], calling `on_reject` for every rejected generation-phase point.
pub fn generate_with_rejects(
    method: &Method,
    pc: &PathCondition,
    bx: &InputBox,
    count: u64,
    seed: u64,
    opts: GenOptions,
    on_reject: &mut dyn FnMut(&Point),
) -> Result<GenReport, GenError> {
    if count == 0 {
        return Err(GenError::InvalidArgument("requested count must be at least 1".into()));
    }
    if opts.cap_factor == 0 {
        return Err(GenError::InvalidArgument("cap factor must be at least 1".into()));
    }
    let target = Target::new(pc, bx)?;
    let mut rng = stream(seed);
    let mut search_probes = 0;
    let mut truncated = false;
    let (grid, cells) = match method {
        Method::Rt => (None, Vec::new()),
        Method::Prt { k } => {
            if *k == 0 {
                return Err(GenError::InvalidArgument("k must be at least 1".into()));
            }
            let grid = partition(bx, *k)?;
            let mut cells = Vec::new();
            for c in grid.cells() {
                // Only the part of the cell inside the box can hold accepted points.
                let Some(clipped) = grid.cell_box(&c).intersect(bx) else { continue };
                if refute_pc(pc, &clipped)? != Verdict::Unsat {
                    cells.push(c);
                }
            }
            if cells.is_empty() {
                return Err(GenError::UnsatProven);
            }
            (Some(grid), cells)
        }
        Method::Art(cfg) => {
            let first = first_valid_for_generation(pc, bx, cfg, &mut rng)?;
            let budget = cfg.probe_budget - first.probes;
            let region = if budget == 0 {
                truncated = true;
                None
            } else {
                Some(expand_with_budget(pc, bx, &first.grid, &first.cell, &first.witness, cfg, budget, &mut rng)?)
            };
            search_probes = first.probes;
            let cells = match region {
                Some(r) => {
                    search_probes += r.probes_used;
                    truncated |= r.truncated;
                    r.cells.into_keys().collect()
                }
                None => vec![first.cell],
            };
            (Some(first.grid), cells)
        }
    };

    let boxes: Vec<InputBox> = match &grid {
        Some(g) => cells.iter().map(|c| g.cell_box(c)).collect(),
        None => vec![bx.clone()],
    };
    let cap = opts.cap_factor.saturating_mul(count);
    let mut generated = search_probes;
    let accepted = fill(&target, &boxes, count, cap, &mut generated, &mut rng, on_reject)?;
    Ok(GenReport {
        method: method.clone(),
        seed,
        requested: count,
        accepted,
        generated_total: generated,
        rejected: generated - count,
        search_probes,
        grid,
        cells,
        truncated,
    })
}

/// In single-resolution mode (`n0 == n_max`) a scan that runs out of
/// candidates is started over at the same resolution until the probe budget
/// is spent, so that `n = 1` keeps drawing from the whole box as `rt` does.
fn first_valid_for_generation(
    pc: &PathCondition,
    bx: &InputBox,
    cfg: &SearchConfig,
    rng: &mut Stream,
) -> Result<FirstValid, SearchError> {
    if cfg.n0 != cfg.n_max {
        return find_first_valid(pc, bx, cfg, rng);
    }
    let mut spent = 0u64;
    loop {
        let round = SearchConfig { probe_budget: cfg.probe_budget - spent, ..cfg.clone() };
        match find_first_valid(pc, bx, &round, rng) {
            Ok(mut fv) => {
                fv.probes += spent;
                return Ok(fv);
            }
            Err(SearchError::Exhausted { probes_used, last_n }) => {
                spent += probes_used;
                if spent >= cfg.probe_budget {
                    return Err(SearchError::Exhausted { probes_used: spent, last_n });
                }
            }
            Err(e) => return Err(e),
        }
    }
}

fn fill(
    target: &Target<'_>,
    boxes: &[InputBox],
    count: u64,
    cap: u64,
    generated: &mut u64,
    rng: &mut Stream,
    on_reject: &mut dyn FnMut(&Point),
) -> Result<Vec<Point>, GenError> {
    let mut accepted = Vec::with_capacity(count.min(1 << 20) as usize);
    while (accepted.len() as u64) < count {
        if *generated >= cap {
            return Err(GenError::AcceptanceTooLow {
                generated: *generated,
                accepted: accepted.len() as u64,
                requested: count,
            });
        }
        // A single box costs no draw, so rt and prt with k = 1 consume a stream identically.
        let bx = if boxes.len() == 1 { &boxes[0] } else { &boxes[draw_index(rng, boxes.len())] };
        let p = sample_uniform(bx, rng);
        *generated += 1;
        if target.accepts(&p) {
            accepted.push(p);
        } else {
            on_reject(&p);
        }
    }
    Ok(accepted)
}

pub fn generate_rt(pc: &PathCondition, bx: &InputBox, count: u64, seed: u64, cap_factor: u64) -> Result<GenReport, GenError> {
    generate(&Method::Rt, pc, bx, count, seed, GenOptions { cap_factor })
}

pub fn generate_prt(
    pc: &PathCondition,
    bx: &InputBox,
    k: u32,
    count: u64,
    seed: u64,
    cap_factor: u64,
) -> Result<GenReport, GenError> {
    generate(&Method::Prt { k }, pc, bx, count, seed, GenOptions { cap_factor })
}

pub fn generate_art(
    pc: &PathCondition,
    bx: &InputBox,
    cfg: &SearchConfig,
    count: u64,
    seed: u64,
    cap_factor: u64,
) -> Result<GenReport, GenError> {
    generate(&Method::Art(cfg.clone()), pc, bx, count, seed, GenOptions { cap_factor })
}
