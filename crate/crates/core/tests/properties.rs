mod common;

use std::collections::{BTreeSet, VecDeque};

use common::*;
use pathart::expr::{eval_num, Func, NumExpr, Predicate, RelOp};
use pathart::grid::partition;
use pathart::oracle::{run_oracle, OracleMode};
use pathart::sample::{sample_uniform, stream};
use pathart::search::{expand_valid, find_first_valid, ResolutionScan, SearchConfig};
use pathart::{eval_condition, iv_eval, parse_condition, parse_domain, parse_expr, refute_pc, CellId, InputBox, PathCondition, Point, Verdict};
use proptest::prelude::*;

const XY: &[&str] = &["x", "y"];

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn satisfiers(pc: &PathCondition, bx: &InputBox) -> Vec<Point> {
    let mut out = Vec::new();
    bx.for_each_int_point(|p| {
        if eval_condition(pc, &bx.bind(p)).unwrap() {
            out.push(p.clone());
        }
    });
    out
}

/// True when some sin or cos in `e` sees an argument past the range where
/// the interval engine reduces arguments.
fn trig_saturates(e: &NumExpr, vals: &[(&str, f64)]) -> bool {
    match e {
        NumExpr::Const(_) | NumExpr::Var(_) => false,
        NumExpr::Neg(a) => trig_saturates(a, vals),
        NumExpr::Add(a, b) | NumExpr::Sub(a, b) | NumExpr::Mul(a, b) | NumExpr::Div(a, b) => {
            trig_saturates(a, vals) || trig_saturates(b, vals)
        }
        NumExpr::Call(_, args) => {
            let huge = (is_call(e, Func::Sin) || is_call(e, Func::Cos))
                && eval_num(&args[0], vals).unwrap().is_none_or(|v| v.abs() > 1e6);
            huge || args.iter().any(|a| trig_saturates(a, vals))
        }
    }
}

/// Largest and smallest nonzero magnitudes of the subexpressions at the
/// point. The largest bounds the absolute rounding error of the whole.
fn magnitudes(e: &NumExpr, vals: &[(&str, f64)]) -> (f64, f64) {
    let own = eval_num(e, vals).unwrap().map_or(0.0, f64::abs);
    let kids: Vec<&NumExpr> = match e {
        NumExpr::Const(_) | NumExpr::Var(_) => vec![],
        NumExpr::Neg(a) => vec![a],
        NumExpr::Add(a, b) | NumExpr::Sub(a, b) | NumExpr::Mul(a, b) | NumExpr::Div(a, b) => vec![a, b],
        NumExpr::Call(_, args) => args.iter().collect(),
    };
    let start = (own, if own == 0.0 { f64::INFINITY } else { own });
    kids.into_iter().map(|k| magnitudes(k, vals)).fold(start, |(hi, lo), (h, l)| (hi.max(h), lo.min(l)))
}

proptest! {
    #![proptest_config(config(2000))]

    #[test]
    fn printed_conditions_parse_back(pc in condition(XY, 3, 3)) {
        let text = pc.to_string();
        prop_assert_eq!(parse_condition(&text).unwrap(), pc, "{}", text);
    }

    #[test]
    fn printed_expressions_parse_back(e in num_expr(XY, 6)) {
        let text = e.to_string();
        prop_assert_eq!(parse_expr(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn parser_never_panics(s in "[-+*/()!&|<>=xy0-9. ,a-z]{0,40}") {
        let _ = parse_condition(&s);
        let _ = parse_expr(&s);
    }

    #[test]
    fn undefined_is_strict(e in num_expr(XY, 3), x in -5.0f64..5.0, y in -5.0f64..5.0) {
        // replace every variable y by sqrt(-1): if y occurs the value must be undefined
        fn poison(e: &NumExpr) -> NumExpr {
            match e {
                NumExpr::Var(v) if v == "y" => parse_expr("sqrt(-1)").unwrap(),
                NumExpr::Const(_) | NumExpr::Var(_) => e.clone(),
                NumExpr::Neg(a) => NumExpr::Neg(Box::new(poison(a))),
                NumExpr::Add(a, b) => NumExpr::Add(Box::new(poison(a)), Box::new(poison(b))),
                NumExpr::Sub(a, b) => NumExpr::Sub(Box::new(poison(a)), Box::new(poison(b))),
                NumExpr::Mul(a, b) => NumExpr::Mul(Box::new(poison(a)), Box::new(poison(b))),
                NumExpr::Div(a, b) => NumExpr::Div(Box::new(poison(a)), Box::new(poison(b))),
                NumExpr::Call(f, args) => NumExpr::Call(*f, args.iter().map(poison).collect()),
            }
        }
        let p = poison(&e);
        let v = eval_num(&p, &[("x", x), ("y", y)]).unwrap();
        if e.free_vars().contains("y") {
            prop_assert_eq!(v, None);
        }
    }

    #[test]
    fn le_matches_ieee(a in prop::num::f64::NORMAL | prop::num::f64::ZERO, b in prop::num::f64::NORMAL | prop::num::f64::ZERO) {
        let pc = PathCondition::Leaf(Predicate::new(NumExpr::Const(a), RelOp::Le, NumExpr::Const(b)));
        prop_assert_eq!(eval_condition(&pc, &[("x", 0.0)]).unwrap(), a <= b);
    }

    #[test]
    fn intervals_contain_concrete_values(e in num_expr(XY, 4), bx in prop_oneof![int_box_xy(40), mixed_box_xy()], seed in any::<u64>()) {
        let iv = iv_eval(&e, &bx).unwrap();
        let mut rng = stream(seed);
        for _ in 0..100 {
            let p = sample_uniform(&bx, &mut rng);
            match eval_num(&e, &bx.bind(&p)).unwrap() {
                Some(v) => prop_assert!(iv.contains(v), "{} at {:?}: {} not in {:?}", e, p, v, iv),
                None => prop_assert!(iv.maybe_undefined(), "{} undefined at {:?} but {:?}", e, p, iv),
            }
        }
    }

    #[test]
    fn shrinking_the_box_shrinks_the_interval(e in num_expr(XY, 4), bx in int_box_xy(30), cut in (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0)) {
        let d = bx.dims();
        let (xl, xh, yl, yh) = (d[0].bounds().lo(), d[0].bounds().hi(), d[1].bounds().lo(), d[1].bounds().hi());
        let pick = |lo: f64, hi: f64, a: f64, b: f64| {
            let (a, b) = (a.min(b), a.max(b));
            ((lo + (hi - lo) * a).round() as i64, (lo + (hi - lo) * b).round() as i64)
        };
        let (x0, x1) = pick(xl, xh, cut.0, cut.1);
        let (y0, y1) = pick(yl, yh, cut.2, cut.3);
        let inner = parse_domain(&format!("x:int:{x0}..{x1};y:int:{y0}..{y1}")).unwrap();
        let (outer_iv, inner_iv) = (iv_eval(&e, &bx).unwrap(), iv_eval(&e, &inner).unwrap());
        prop_assert!(inner_iv.subset_of(&outer_iv), "{}: {:?} not within {:?}", e, inner_iv, outer_iv);
        prop_assert!(!inner_iv.maybe_undefined() || outer_iv.maybe_undefined());
    }

    #[test]
    fn single_points_are_tight(e in num_expr(XY, 4), x in -30i64..30, y in -30i64..30) {
        let bx = parse_domain(&format!("x:int:{x}..{x};y:int:{y}..{y}")).unwrap();
        let iv = iv_eval(&e, &bx).unwrap();
        match eval_num(&e, &[("x", x as f64), ("y", y as f64)]).unwrap() {
            Some(v) => {
                let (lo, hi) = iv.bounds().unwrap();
                prop_assert!(lo <= v && v <= hi);
                let vals = [("x", x as f64), ("y", y as f64)];
                // outward rounding leaves at most a few ulps per operation
                let (big, small) = magnitudes(&e, &vals);
                let slack = 1e-9 * (1.0 + big);
                // subnormal intermediates carry only a few significant bits
                let saturated = trig_saturates(&e, &vals) || small < 1e-290;
                prop_assert!(hi - lo <= slack || saturated || !hi.is_finite() || !lo.is_finite() || e.to_string().contains("pow"), "{}: {:?} around {}", e, iv, v);
            }
            None => prop_assert!(iv.is_empty() || iv.maybe_undefined()),
        }
    }

    #[test]
    fn exact_arithmetic_on_points_is_exact(a in -1000i64..1000, b in -1000i64..1000, x in -100i64..100) {
        let e = parse_expr(&format!("({a} * x + {b}) - x * x")).unwrap();
        let bx = parse_domain(&format!("x:int:{x}..{x}")).unwrap();
        let v = (a * x + b - x * x) as f64;
        prop_assert_eq!(iv_eval(&e, &bx).unwrap().bounds(), Some((v, v)));
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn unsat_verdicts_hold_under_enumeration(pc in condition(XY, 2, 2), bx in int_box_xy(100)) {
        if refute_pc(&pc, &bx).unwrap() == Verdict::Unsat {
            prop_assert!(satisfiers(&pc, &bx).is_empty(), "{} over {}", pc, bx);
        }
    }

    #[test]
    fn comparisons_with_constants_refute_soundly(e in num_expr(XY, 3), op in rel_op(), c in -40i32..40, bx in int_box_xy(100)) {
        let pc = PathCondition::Leaf(Predicate::new(e, op, NumExpr::Const(f64::from(c))));
        if refute_pc(&pc, &bx).unwrap() == Verdict::Unsat {
            prop_assert!(satisfiers(&pc, &bx).is_empty(), "{} over {}", pc, bx);
        }
    }
}

/// Moore-connected cells reachable from `start` within `set`.
fn reachable(set: &BTreeSet<CellId>, start: &CellId, grid: &pathart::GridSpec) -> BTreeSet<CellId> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(c) = queue.pop_front() {
        for nb in grid.neighbors_moore(&c) {
            if set.contains(&nb) && seen.insert(nb.clone()) {
                queue.push_back(nb);
            }
        }
    }
    seen
}

fn linear_pcs() -> impl Strategy<Value = PathCondition> {
    // half-planes and discs, small enough to enumerate
    (-3i32..=3, -3i32..=3, -40i32..40, 0i32..400, -10i32..25, -10i32..25, any::<bool>()).prop_map(|(a, b, c, r2, cx, cy, disc)| {
        let text = if disc {
            format!("(x - {cx}) * (x - {cx}) + (y - {cy}) * (y - {cy}) <= {r2}")
        } else {
            format!("{a} * x + {b} * y <= {c}")
        };
        parse_condition(&text).unwrap()
    })
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn search_invariants(pc in linear_pcs(), side in 4i64..32, n in 2u32..8, seed in any::<u64>(), retest in any::<bool>(), s in 1u32..4, beta in prop::sample::select(vec![0.25, 0.5, 1.0])) {
        let bx = parse_domain(&format!("x:int:0..{};y:int:0..{}", side - 1, side - 1)).unwrap();
        prop_assume!(partition(&bx, n).is_ok());
        let cfg = SearchConfig { n0: n, n_max: n, samples_per_cell: s, beta, retest, ..SearchConfig::default() };
        let run = |seed| -> Option<(pathart::search::FirstValid, pathart::ValidRegion)> {
            let mut rng = stream(seed);
            let fv = find_first_valid(&pc, &bx, &cfg, &mut rng).ok()?;
            let region = expand_valid(&pc, &bx, &fv.grid, &fv.cell, &fv.witness, &cfg, &mut rng).unwrap();
            Some((fv, region))
        };
        let Some((fv, region)) = run(seed) else { return Ok(()) };
        // determinism
        prop_assert_eq!(run(seed), Some((fv.clone(), region.clone())));
        let oracle = run_oracle(&pc, &bx, Some(n), OracleMode::default()).unwrap().cells.unwrap();
        let target = pathart::Target::new(&pc, &bx).unwrap();
        for (c, w) in &region.cells {
            prop_assert!(target.accepts(w), "witness");
            prop_assert!(region.grid.cell_box(c).contains(w));
            prop_assert!(oracle.is_valid(c), "cell {} not valid in the oracle", c);
        }
        let cells: BTreeSet<CellId> = region.cells.keys().cloned().collect();
        prop_assert!(cells.contains(&fv.cell));
        prop_assert_eq!(reachable(&cells, &fv.cell, &region.grid), cells);
        let per_cell = u64::from(s) * 8;
        prop_assert!(region.probes_used <= per_cell * region.grid.cell_count() as u64);
    }

    #[test]
    fn exclusion_arithmetic(n in 1u32..10, seed in any::<u64>()) {
        let bx = parse_domain("x:int:0..39;y:int:0..39").unwrap();
        let grid = partition(&bx, n).unwrap();
        let mut scan = ResolutionScan::new(grid.clone());
        let mut rng = stream(seed);
        let mut probes = 0;
        while let Some(c) = scan.pick(&mut rng) {
            let before = scan.candidate_count();
            let expected = std::iter::once(c.clone())
                .chain(grid.neighbors_moore(&c))
                .filter(|x| scan.state(x) == pathart::search::CellState::Candidate)
                .count();
            prop_assert_eq!(scan.exclude_around(&c), expected);
            prop_assert_eq!(scan.candidate_count(), before - expected);
            prop_assert!(expected >= 1);
            probes += 1;
        }
        prop_assert!(probes <= grid.cell_count());
    }
}

#[test]
fn foo_regions_stay_inside_the_oracle_map_for_100_seeds() {
    let (pc, bx) = foo();
    let oracle = run_oracle(&pc, &bx, Some(4), OracleMode::default()).unwrap().cells.unwrap();
    let cfg = SearchConfig::fixed(4);
    for seed in 0..100 {
        let mut rng = stream(seed);
        let Ok(fv) = find_first_valid(&pc, &bx, &cfg, &mut rng) else { continue };
        let region = expand_valid(&pc, &bx, &fv.grid, &fv.cell, &fv.witness, &cfg, &mut rng).unwrap();
        for (c, w) in &region.cells {
            assert!(oracle.is_valid(c));
            assert!(foo_holds(w.coords()[0], w.coords()[1]));
        }
    }
}

#[test]
fn foo_expansion_from_d16_covers_the_declared_cells() {
    // s = 8 from D_16 with witness (12, 0): the nine declared cells in at least 95 of 100 seeds
    let (pc, bx) = foo();
    let grid = partition(&bx, 4).unwrap();
    let d16 = grid.cell_from_label(16).unwrap();
    let declared: Vec<CellId> = [2, 3, 4, 6, 7, 8, 11, 12, 16].iter().map(|&l| grid.cell_from_label(l).unwrap()).collect();
    let cfg = SearchConfig { samples_per_cell: 8, ..SearchConfig::fixed(4) };
    let hits = (0..100)
        .filter(|&seed| {
            let region = expand_valid(&pc, &bx, &grid, &d16, &Point::new(vec![12.0, 0.0]), &cfg, &mut stream(seed)).unwrap();
            declared.iter().all(|c| region.contains(c))
        })
        .count();
    assert!(hits >= 95, "{hits}");
}

#[test]
fn oracle_agrees_with_the_transcribed_condition() {
    let (pc, bx) = foo();
    let mut count = 0;
    for x in 0..16 {
        for y in 0..16 {
            let (xf, yf) = (f64::from(x), f64::from(y));
            let expected = foo_holds(xf, yf);
            assert_eq!(eval_condition(&pc, &[("x", xf), ("y", yf)]).unwrap(), expected, "({x},{y})");
            count += usize::from(expected);
        }
    }
    assert_eq!(count, 122);
    assert_eq!(run_oracle(&pc, &bx, None, OracleMode::default()).unwrap().satisfying, 122);
}
