//! Repeated seeded trials of the generation methods, summarized per
//! (method, n, requested) row.
//!
//! Every trial seeds a fresh stream with [`trial_seed`], so a trial's result
//! depends only on its own coordinates: adding methods, resolutions or trials
//! leaves the other trials unchanged.

use rayon::prelude::*;

use crate::domain::InputBox;
use crate::expr::PathCondition;
use crate::search::SearchConfig;
use crate::suite::{generate, GenError, GenOptions, Method, MethodKind};

pub const CSV_HEADER: &str =
    "method,n,requested,trials,mean_generated,sd_generated,min_generated,max_generated,mean_rejected,mean_search_probes";

const COLUMNS: [&str; 10] = [
    "method",
    "n",
    "requested",
    "trials",
    "mean_generated",
    "sd_generated",
    "min_generated",
    "max_generated",
    "mean_rejected",
    "mean_search_probes",
];

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The seed of one trial: the splitmix64 finalizer folded over
/// `base, method id (rt 1, prt 2, art 3), n (0 for rt), requested, trial`.
pub fn trial_seed(base: u64, method: MethodKind, n: u32, requested: u64, trial: u32) -> u64 {
    let id = match method {
        MethodKind::Rt => 1,
        MethodKind::Prt => 2,
        MethodKind::Art => 3,
    };
    [id, u64::from(n), requested, u64::from(trial)]
        .into_iter()
        .fold(splitmix64(base), |h, v| splitmix64(h ^ v))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    pub methods: Vec<MethodKind>,
    /// Grid resolutions for prt and art; rt ignores them.
    pub ns: Vec<u32>,
    pub requested: Vec<u64>,
    pub trials: u32,
    pub base_seed: u64,
    /// Knobs for art. `n0` and `n_max` are replaced per row.
    pub search: SearchConfig,
    /// Finest art resolution; `None` searches at the row's `n` only.
    pub n_max: Option<u32>,
    pub cap_factor: u64,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            methods: MethodKind::ALL.to_vec(),
            ns: vec![4, 5, 6],
            requested: vec![100, 500, 1000, 2000, 5000, 10000],
            trials: 30,
            base_seed: 42,
            search: SearchConfig::default(),
            n_max: None,
            cap_factor: GenOptions::default().cap_factor,
            jobs: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum BenchError {
    #[error("invalid benchmark: {0}")]
    Invalid(String),
    #[error("cannot start worker threads: {0}")]
    Threads(String),
}

/// One row of the result table.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub method: MethodKind,
    /// `None` for rt.
    pub n: Option<u32>,
    pub requested: u64,
    pub trials: u32,
    /// `None` when some trial failed.
    pub stats: Option<TrialStats>,
    pub note: Option<String>,
    /// `generated_total` of every successful trial, in trial order.
    pub generated: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialStats {
    pub mean_generated: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub sd_generated: f64,
    pub min_generated: u64,
    pub max_generated: u64,
    pub mean_rejected: f64,
    pub mean_search_probes: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub generated_total: u64,
    pub rejected: u64,
    pub search_probes: u64,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Invalid(m.to_string()));
        if self.methods.is_empty() {
            return bad("no methods");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.requested.is_empty() || self.requested.contains(&0) {
            return bad("requested counts must be at least 1");
        }
        let gridded = self.methods.iter().any(|m| *m != MethodKind::Rt);
        if gridded && (self.ns.is_empty() || self.ns.contains(&0)) {
            return bad("prt and art need resolutions of at least 1");
        }
        if self.cap_factor == 0 {
            return bad("cap factor must be at least 1");
        }
        Ok(())
    }

    /// Row coordinates in output order: methods as given (duplicates
    /// dropped), then `n`, then `requested`.
    pub fn rows(&self) -> Vec<(MethodKind, Option<u32>, u64)> {
        let mut methods = self.methods.clone();
        let mut seen = Vec::new();
        methods.retain(|m| {
            let fresh = !seen.contains(m);
            seen.push(*m);
            fresh
        });
        let mut out = Vec::new();
        for m in methods {
            let ns: Vec<Option<u32>> = if m == MethodKind::Rt { vec![None] } else { self.ns.iter().map(|&n| Some(n)).collect() };
            for n in ns {
                for &r in &self.requested {
                    out.push((m, n, r));
                }
            }
        }
        out
    }

    pub fn method(&self, kind: MethodKind, n: Option<u32>) -> Method {
        match (kind, n) {
            (MethodKind::Rt, _) | (_, None) => Method::Rt,
            (MethodKind::Prt, Some(k)) => Method::Prt { k },
            (MethodKind::Art, Some(n)) => Method::Art(SearchConfig {
                n0: n,
                n_max: self.n_max.unwrap_or(n).max(n),
                ..self.search.clone()
            }),
        }
    }

    /// Runs one trial of one row.
    pub fn run_trial(
        &self,
        pc: &PathCondition,
        bx: &InputBox,
        kind: MethodKind,
        n: Option<u32>,
        requested: u64,
        trial: u32,
    ) -> Result<TrialOutcome, GenError> {
        let seed = trial_seed(self.base_seed, kind, n.unwrap_or(0), requested, trial);
        let r = generate(&self.method(kind, n), pc, bx, requested, seed, GenOptions { cap_factor: self.cap_factor })?;
        Ok(TrialOutcome { generated_total: r.generated_total, rejected: r.rejected, search_probes: r.search_probes })
    }
}

/// Runs every trial of every row, `spec.jobs` at a time.
pub fn run_bench(pc: &PathCondition, bx: &InputBox, spec: &BenchSpec) -> Result<Vec<BenchRow>, BenchError> {
    spec.validate()?;
    let rows = spec.rows();
    let tasks: Vec<(usize, u32)> = (0..rows.len()).flat_map(|r| (0..spec.trials).map(move |t| (r, t))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| BenchError::Threads(e.to_string()))?;
    let outcomes: Vec<Result<TrialOutcome, GenError>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(r, t)| {
                let (kind, n, requested) = rows[r];
                spec.run_trial(pc, bx, kind, n, requested, t)
            })
            .collect()
    });
    let per_row = spec.trials as usize;
    Ok(rows
        .iter()
        .zip(outcomes.chunks(per_row))
        .map(|(&(method, n, requested), results)| summarize(method, n, requested, spec.trials, results))
        .collect())
}

fn summarize(
    method: MethodKind,
    n: Option<u32>,
    requested: u64,
    trials: u32,
    results: &[Result<TrialOutcome, GenError>],
) -> BenchRow {
    let failures: Vec<(usize, &GenError)> =
        results.iter().enumerate().filter_map(|(i, r)| r.as_ref().err().map(|e| (i, e))).collect();
    let ok: Vec<TrialOutcome> = results.iter().filter_map(|r| r.as_ref().ok().copied()).collect();
    let generated = ok.iter().map(|o| o.generated_total).collect();
    if let Some(&(first, err)) = failures.first() {
        let note = format!("{} of {} trials failed; trial {first}: {err}", failures.len(), trials);
        return BenchRow { method, n, requested, trials, stats: None, note: Some(note), generated };
    }
    let count = ok.len() as f64;
    let mean = |f: fn(&TrialOutcome) -> u64| ok.iter().map(|o| f(o) as f64).sum::<f64>() / count;
    let mean_generated = mean(|o| o.generated_total);
    let sd_generated = if ok.len() > 1 {
        (ok.iter().map(|o| (o.generated_total as f64 - mean_generated).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
    } else {
        0.0
    };
    let stats = TrialStats {
        mean_generated,
        sd_generated,
        min_generated: ok.iter().map(|o| o.generated_total).min().unwrap_or(0),
        max_generated: ok.iter().map(|o| o.generated_total).max().unwrap_or(0),
        mean_rejected: mean(|o| o.rejected),
        mean_search_probes: mean(|o| o.search_probes),
    };
    BenchRow { method, n, requested, trials, stats: Some(stats), note: None, generated }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Tsv,
    Markdown,
}

impl TableFormat {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(TableFormat::Csv),
            "tsv" => Some(TableFormat::Tsv),
            "markdown" | "md" => Some(TableFormat::Markdown),
            _ => None,
        }
    }
}

fn fields(row: &BenchRow) -> [String; 10] {
    let n = row.n.map_or_else(|| "-".to_string(), |n| n.to_string());
    let head = [row.method.name().to_string(), n, row.requested.to_string(), row.trials.to_string()];
    let tail = match &row.stats {
        Some(s) => [
            format!("{:.2}", s.mean_generated),
            format!("{:.2}", s.sd_generated),
            s.min_generated.to_string(),
            s.max_generated.to_string(),
            format!("{:.2}", s.mean_rejected),
            format!("{:.2}", s.mean_search_probes),
        ],
        None => std::array::from_fn(|_| "NaN".to_string()),
    };
    let mut out: [String; 10] = Default::default();
    for (slot, v) in out.iter_mut().zip(head.into_iter().chain(tail)) {
        *slot = v;
    }
    out
}

/// Renders the table. Notes on failed rows appear only in the markdown form,
/// as footnotes, so CSV and TSV rows always have exactly ten fields.
pub fn render_table(rows: &[BenchRow], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv | TableFormat::Tsv => {
            let sep = if format == TableFormat::Csv { "," } else { "\t" };
            out.push_str(&COLUMNS.join(sep));
            out.push('\n');
            for row in rows {
                out.push_str(&fields(row).join(sep));
                out.push('\n');
            }
        }
        TableFormat::Markdown => {
            out.push_str(&format!("| {} |\n", COLUMNS.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(COLUMNS.len())));
            let mut notes = Vec::new();
            for row in rows {
                let mut f = fields(row);
                if let Some(note) = &row.note {
                    notes.push(note.clone());
                    f[0] = format!("{} [{}]", f[0], notes.len());
                }
                out.push_str(&format!("| {} |\n", f.join(" | ")));
            }
            if !notes.is_empty() {
                out.push('\n');
                for (i, note) in notes.iter().enumerate() {
                    out.push_str(&format!("[{}] {}\n", i + 1, note));
                }
            }
        }
    }
    out
}
