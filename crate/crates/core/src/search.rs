//! Grid search for the sub-domains of an input box that satisfy a path condition.
//!
//! [`find_first_valid`] partitions the box into an `n`-per-dimension grid and
//! probes one random point in a randomly chosen candidate cell at a time. A
//! failed probe removes the cell and its Moore neighbors from the candidate
//! set, spreading later probes away from it. When no candidates remain, the
//! grid is discarded and the box is partitioned again at `n + 1`, with no
//! memory of the previous resolution.
//!
//! [`expand_valid`] grows the region from the first valid cell breadth-first:
//! each neighbor of a valid cell is probed in the band of the neighbor that
//! borders the valid cell.

use std::collections::{BTreeMap, VecDeque};

use rand_chacha::rand_core::RngCore;

use crate::domain::{InputBox, Point};
use crate::expr::{EvalError, PathCondition};
use crate::grid::{partition, CellId, GridError, GridSpec};
use crate::sample::{draw_index, sample_uniform};
use crate::target::Target;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellState {
    Candidate,
    Excluded,
    Valid,
    Invalid,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// First grid resolution.
    pub n0: u32,
    /// Finest resolution tried before giving up.
    pub n_max: u32,
    /// Probes per neighbor during expansion. The first-valid search always
    /// probes each cell once.
    pub samples_per_cell: u32,
    /// Fraction of a neighbor cell, on the side facing the valid cell, that
    /// expansion probes are drawn from.
    pub beta: f64,
    /// Cap on concrete condition evaluations for search plus expansion.
    pub probe_budget: u64,
    /// Re-probe an invalid cell when it is reached from another valid neighbor.
    pub retest: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n0: 2,
            n_max: 64,
            samples_per_cell: 1,
            beta: 0.25,
            probe_budget: 1_000_000,
            retest: true,
        }
    }
}

impl SearchConfig {
    /// Single-resolution search at `n`, other knobs at their defaults.
    pub fn fixed(n: u32) -> Self {
        SearchConfig { n0: n, n_max: n, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::InvalidConfig(m.to_string()));
        if self.n0 == 0 {
            return bad("n0 must be at least 1");
        }
        if self.n0 > self.n_max {
            return bad("n0 exceeds n_max");
        }
        if self.samples_per_cell == 0 {
            return bad("samples per cell must be at least 1");
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return bad("beta must lie in (0, 1]");
        }
        if self.probe_budget == 0 {
            return bad("probe budget must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SearchError {
    /// No valid cell up to the last resolution tried, or the probe budget ran out.
    #[error("no valid sub-domain found (resolution {last_n}, {probes_used} probes); the condition may be unsatisfiable or need a grid finer than n_max")]
    Exhausted { probes_used: u64, last_n: u32 },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("seed point does not satisfy the condition inside the seed cell")]
    InvalidSeed,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Candidate bookkeeping for one resolution of the first-valid search.
#[derive(Clone, Debug)]
pub struct ResolutionScan {
    grid: GridSpec,
    states: Vec<CellState>,
    candidates: Vec<usize>,
    /// Position of each cell in `candidates`, `usize::MAX` once removed.
    slot: Vec<usize>,
}

impl ResolutionScan {
    pub fn new(grid: GridSpec) -> Self {
        let count = grid.cell_count();
        ResolutionScan {
            grid,
            states: vec![CellState::Candidate; count],
            candidates: (0..count).collect(),
            slot: (0..count).collect(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn state(&self, c: &CellId) -> CellState {
        self.states[self.grid.linear(c)]
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    /// Remaining candidates in `CellId` order.
    pub fn candidates(&self) -> Vec<CellId> {
        let mut v: Vec<usize> = self.candidates.clone();
        v.sort_unstable();
        v.into_iter().map(|i| self.grid.cell_at(i)).collect()
    }

    /// A uniformly chosen candidate (one draw), or `None` when none remain.
    pub fn pick<R: RngCore + ?Sized>(&self, rng: &mut R) -> Option<CellId> {
        if self.candidates.is_empty() {
            return None;
        }
        Some(self.grid.cell_at(self.candidates[draw_index(rng, self.candidates.len())]))
    }

    fn remove(&mut self, i: usize, to: CellState) -> bool {
        if self.states[i] != CellState::Candidate {
            return false;
        }
        self.states[i] = to;
        let at = self.slot[i];
        self.candidates.swap_remove(at);
        if let Some(&moved) = self.candidates.get(at) {
            self.slot[moved] = at;
        }
        self.slot[i] = usize::MAX;
        true
    }

    pub fn mark_valid(&mut self, c: &CellId) {
        let i = self.grid.linear(c);
        self.remove(i, CellState::Valid);
    }

    /// Excludes `c` and its Moore neighbors; returns how many were still candidates.
    pub fn exclude_around(&mut self, c: &CellId) -> usize {
        let mut removed = usize::from(self.remove(self.grid.linear(c), CellState::Excluded));
        for nb in self.grid.neighbors_moore(c) {
            removed += usize::from(self.remove(self.grid.linear(&nb), CellState::Excluded));
        }
        removed
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstValid {
    pub grid: GridSpec,
    pub cell: CellId,
    pub witness: Point,
    /// Condition evaluations spent, across all resolutions.
    pub probes: u64,
}

/// Finds one cell holding a satisfying point, refining the grid from
/// `cfg.n0` up to `cfg.n_max`.
pub fn find_first_valid<R: RngCore + ?Sized>(
    pc: &PathCondition,
    bx: &InputBox,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<FirstValid, SearchError> {
    cfg.validate()?;
    let target = Target::new(pc, bx)?;
    let mut probes = 0u64;
    let mut last_n = cfg.n0;
    for n in cfg.n0..=cfg.n_max {
        let grid = match partition(bx, n) {
            Ok(g) => g,
            // No finer grid exists; report what was tried.
            Err(GridError::DegenerateDomain { .. } | GridError::TooManyCells { .. }) if n > cfg.n0 => break,
            Err(e) => return Err(e.into()),
        };
        last_n = n;
        let mut scan = ResolutionScan::new(grid);
        while let Some(cell) = scan.pick(rng) {
            if probes >= cfg.probe_budget {
                return Err(SearchError::Exhausted { probes_used: probes, last_n });
            }
            let point = sample_uniform(&scan.grid.cell_box(&cell), rng);
            probes += 1;
            if target.accepts(&point) {
                return Ok(FirstValid { grid: scan.grid, cell, witness: point, probes });
            }
            scan.exclude_around(&cell);
        }
    }
    Err(SearchError::Exhausted { probes_used: probes, last_n })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidRegion {
    pub grid: GridSpec,
    /// Valid cells with a satisfying witness point each.
    pub cells: BTreeMap<CellId, Point>,
    /// Cells probed without success and never validated.
    pub invalid: Vec<CellId>,
    /// Condition evaluations spent by the expansion.
    pub probes_used: u64,
    /// The probe budget ran out before the expansion finished.
    pub truncated: bool,
}

impl ValidRegion {
    pub fn contains(&self, c: &CellId) -> bool {
        self.cells.contains_key(c)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Grows the valid region breadth-first from `seed_cell`.
#[allow(clippy::too_many_arguments)]
pub fn expand_valid<R: RngCore + ?Sized>(
    pc: &PathCondition,
    bx: &InputBox,
    grid: &GridSpec,
    seed_cell: &CellId,
    seed_witness: &Point,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<ValidRegion, SearchError> {
    expand_with_budget(pc, bx, grid, seed_cell, seed_witness, cfg, cfg.probe_budget, rng)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn expand_with_budget<R: RngCore + ?Sized>(
    pc: &PathCondition,
    bx: &InputBox,
    grid: &GridSpec,
    seed_cell: &CellId,
    seed_witness: &Point,
    cfg: &SearchConfig,
    budget: u64,
    rng: &mut R,
) -> Result<ValidRegion, SearchError> {
    cfg.validate()?;
    let target = Target::new(pc, bx)?;
    if !grid.contains_cell(seed_cell)
        || !grid.cell_box(seed_cell).contains(seed_witness)
        || !target.accepts(seed_witness)
    {
        return Err(SearchError::InvalidSeed);
    }
    let mut states = vec![CellState::Candidate; grid.cell_count()];
    let mut cells = BTreeMap::new();
    states[grid.linear(seed_cell)] = CellState::Valid;
    cells.insert(seed_cell.clone(), seed_witness.clone());
    let mut queue = VecDeque::from([seed_cell.clone()]);
    let mut probes = 0u64;
    let mut truncated = false;

    'bfs: while let Some(valid) = queue.pop_front() {
        for nb in grid.neighbors_moore(&valid) {
            let i = grid.linear(&nb);
            match states[i] {
                CellState::Valid => continue,
                CellState::Invalid if !cfg.retest => continue,
                _ => {}
            }
            let band = grid.boundary_band(&nb, &valid, cfg.beta)?;
            let mut witness = None;
            for _ in 0..cfg.samples_per_cell {
                if probes >= budget {
                    truncated = true;
                    break 'bfs;
                }
                let p = sample_uniform(&band, rng);
                probes += 1;
                if target.accepts(&p) {
                    witness = Some(p);
                    break;
                }
            }
            match witness {
                Some(p) => {
                    states[i] = CellState::Valid;
                    cells.insert(nb.clone(), p);
                    queue.push_back(nb);
                }
                None => states[i] = CellState::Invalid,
            }
        }
    }

    let invalid = states
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == CellState::Invalid)
        .map(|(i, _)| grid.cell_at(i))
        .collect();
    Ok(ValidRegion { grid: grid.clone(), cells, invalid, probes_used: probes, truncated })
}
