//! Path-oriented random test data generation.
//!
//! A path condition over integer or real inputs is parsed from a small DSL
//! ([`expr`]), the input box is partitioned into a grid ([`grid`]), and test
//! data satisfying the condition is generated by one of three methods
//! ([`suite`]): plain random testing, random testing restricted to the grid
//! cells that interval arithmetic ([`interval`]) cannot refute, and random
//! testing restricted to the cells found by an adaptive grid search
//! ([`search`]). [`bench`] compares the methods over many seeded trials and
//! [`oracle`] enumerates the satisfying points of small integer domains.

pub mod bench;
pub mod domain;
pub mod expr;
pub mod grid;
pub mod interval;
pub mod oracle;
pub mod sample;
pub mod search;
pub mod suite;
pub mod target;

pub use domain::{parse_domain, Bounds, InputBox, Point, VarDomain};
pub use expr::{eval_condition, parse_condition, parse_expr, NumExpr, ParseError, PathCondition};
pub use grid::{partition, CellId, GridSpec};
pub use interval::{iv_eval, refute_pc, Interval, Verdict};
pub use search::{expand_valid, find_first_valid, SearchConfig, SearchError, ValidRegion};
pub use suite::{generate, generate_art, generate_prt, generate_rt, GenError, GenOptions, GenReport, Method, MethodKind};
pub use target::Target;
pub use bench::{render_table, run_bench, trial_seed, BenchRow, BenchSpec, TableFormat};
pub use oracle::{run_oracle, OracleMode, OracleReport};
