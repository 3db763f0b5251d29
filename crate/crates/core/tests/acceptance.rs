//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p superpoly-core --test acceptance`. Each check
//! returns a short detail string on success and a description of the first
//! violation on failure; runtime budgets are enforced per criterion.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::Rng;

use common::{grow_inside, poly_strategy, random_graph, random_poly, random_setcover, rng, row};
use superpoly::coloring::{
    build_instance as build_coloring, build_vertex_polyomino, deck_solve, from_two_color, threshold_k,
    threshold_k_two_color, to_two_color, to_two_color_instance, Graph, TwoColorCodec,
};
use superpoly::geometry::{compatible, is_superpolyomino, superimpose, Offset, Polyomino};
use superpoly::instance::{evaluate_layout, Instance};
use superpoly::oracles::{chromatic_number, min_set_cover};
use superpoly::setcover::{self, aligned_solve, audit_misalignment, audit_window, SetCoverInstance};
use superpoly::solver::{solve, solve_brute, solve_greedy, solve_line_single_color, SolveMode, SolverConfig};
use superpoly::text::{emit_polyomino, parse_polyomino};

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, Check); 10] = [
        (1, "gadget size window", secs(1), c1_gadget_sizes),
        (2, "compatibility iff independence", secs(10), c2_compat_independence),
        (
            3,
            "deck threshold equals chromatic number",
            secs(120),
            c3_deck_threshold,
        ),
        (
            4,
            "exact contact search equals deck solve",
            secs(1800),
            c4_exact_vs_deck,
        ),
        (5, "two-color scaling", secs(10), c5_two_color),
        (6, "aligned cover equals minimum cover", secs(60), c6_aligned_cover),
        (7, "misalignment audit", secs(300), c7_misalignment_audit),
        (8, "solver oracle equivalence", secs(300), c8_solver_oracles),
        (9, "one-dimensional sanity", secs(60), c9_line_sanity),
        (10, "relation axioms", secs(30), c10_relation_axioms),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; over budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2}: {name} ({detail}) [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2}: {name} ({why}) [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_gadget_sizes() -> Result<String, String> {
    let mut r = rng(1);
    let mut pieces = 0;
    for _ in 0..20 {
        let nv = r.gen_range(3..=5);
        let g = random_graph(&mut r, nv);
        for v in 0..nv {
            let p = build_vertex_polyomino(&g, v).map_err(|e| e.to_string())?;
            let counted = p.cells().len();
            let expected = 2 * nv * nv - (nv - 1 - g.degree(v));
            ensure(counted == expected, || {
                format!("|V|={nv} v={v}: {counted} cells, expected {expected}")
            })?;
            ensure((2 * nv * nv - nv + 1..=2 * nv * nv).contains(&counted), || {
                format!("|V|={nv} v={v}: {counted} outside the window")
            })?;
            pieces += 1;
        }
    }
    Ok(format!("{pieces} vertex pieces over 20 graphs"))
}

fn c2_compat_independence() -> Result<String, String> {
    let mut pairs = 0;
    for nv in [3, 4] {
        for g in Graph::census(nv) {
            let polys: Vec<Polyomino> = (0..nv).map(|v| build_vertex_polyomino(&g, v).unwrap()).collect();
            for u in 0..nv {
                for v in 0..nv {
                    if u == v {
                        continue;
                    }
                    let c = compatible(&polys[u], &polys[v], Offset::ZERO);
                    ensure(c == !g.adjacent(u, v), || {
                        format!(
                            "|V|={nv} edges={:?} pair ({u},{v}): compatible={c}",
                            g.edges().collect::<Vec<_>>()
                        )
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} ordered pairs over 72 graphs"))
}

fn deck_k(g: &Graph) -> Result<usize, String> {
    let ci = build_coloring(g).map_err(|e| e.to_string())?;
    let res = deck_solve(&ci).map_err(|e| e.to_string())?;
    let union = evaluate_layout(ci.instance(), &res.layout).map_err(|e| e.to_string())?;
    ensure(union == res.size, || {
        format!("reported size {} but layout has {union}", res.size)
    })?;
    Ok(threshold_k(res.size, g.vertex_count()))
}

fn c3_deck_threshold() -> Result<String, String> {
    let mut graphs: Vec<Graph> = Graph::census(3).into_iter().chain(Graph::census(4)).collect();
    let mut r = rng(3);
    graphs.extend((0..20).map(|_| random_graph(&mut r, 5)));
    for g in &graphs {
        let k = deck_k(g)?;
        let chi = chromatic_number(g).map_err(|e| e.to_string())?.k();
        ensure(k == chi, || {
            format!(
                "edges={:?}: deck threshold {k}, chromatic number {chi}",
                g.edges().collect::<Vec<_>>()
            )
        })?;
    }
    Ok(format!("{} graphs", graphs.len()))
}

fn c4_exact_vs_deck() -> Result<String, String> {
    let census = Graph::census(3);
    let mut nodes = 0;
    for g in &census {
        let ci = build_coloring(g).map_err(|e| e.to_string())?;
        let inst = ci.instance();
        let window: i32 = inst.polyominoes().map(|p| p.width() + p.height()).sum();
        let cfg = SolverConfig::new(SolveMode::ExactContact)
            .with_window(window)
            .with_workers(4);
        let exact = solve(inst, &cfg).map_err(|e| e.to_string())?;
        let deck = deck_solve(&ci).map_err(|e| e.to_string())?;
        ensure(exact.optimal, || {
            format!("edges={:?}: search did not finish", g.edges().collect::<Vec<_>>())
        })?;
        ensure(exact.size == deck.size, || {
            format!(
                "finding: edges={:?} exact {} at {:?} vs deck {}",
                g.edges().collect::<Vec<_>>(),
                exact.size,
                exact.layout.offsets(),
                deck.size
            )
        })?;
        nodes += exact.stats.nodes;
    }
    Ok(format!("{} graphs, {nodes} search nodes", census.len()))
}

fn c5_two_color() -> Result<String, String> {
    let codec = TwoColorCodec::default();
    let mut corpus: Vec<Polyomino> = Vec::new();
    for nv in [3, 4] {
        for g in Graph::census(nv) {
            corpus.extend(build_coloring(&g).unwrap().instance().polyominoes().cloned());
        }
    }
    corpus.extend(
        setcover::build_instance(&SetCoverInstance::worked_example())
            .polyominoes()
            .cloned(),
    );
    for p in &corpus {
        let big = to_two_color(p, &codec).map_err(|e| e.to_string())?;
        ensure(big.size() == 64 * p.size(), || {
            format!("{} cells became {}", p.size(), big.size())
        })?;
    }
    let mut r = rng(5);
    for _ in 0..30 {
        let p = random_poly(&mut r, 12, 7);
        let back = to_two_color(&p, &codec).and_then(|big| from_two_color(&big, &codec));
        ensure(back.as_ref() == Ok(&p), || {
            format!("round trip failed for\n{}", emit_polyomino(&p))
        })?;
    }
    let g = Graph::complete(3);
    let ci = to_two_color_instance(&build_coloring(&g).unwrap(), &codec).map_err(|e| e.to_string())?;
    let res = deck_solve(&ci).map_err(|e| e.to_string())?;
    let k = threshold_k_two_color(res.size, 3);
    let chi = chromatic_number(&g).unwrap().k();
    ensure(k == chi, || {
        format!("two-color K3 threshold {k}, chromatic number {chi}")
    })?;
    Ok(format!(
        "{} corpus pieces, 30 round trips, K3 size {} -> k={k}",
        corpus.len(),
        res.size
    ))
}

fn check_cover(sc: &SetCoverInstance) -> Result<(usize, BTreeSet<usize>), String> {
    let (res, cover) = aligned_solve(sc).map_err(|e| e.to_string())?;
    let inst = setcover::build_instance(sc);
    let pbar = inst.piece(0).size();
    let union = evaluate_layout(&inst, &res.layout).map_err(|e| e.to_string())?;
    ensure(union == res.size, || {
        format!("reported {} but layout has {union}", res.size)
    })?;
    ensure(sc.is_cover(&cover), || format!("{cover:?} is not a cover"))?;
    let k = res.size - pbar;
    ensure(k == cover.len(), || {
        format!("size {} - |Pbar| {pbar} != |cover| {}", res.size, cover.len())
    })?;
    let oracle = min_set_cover(sc).map_err(|e| e.to_string())?;
    ensure(k == oracle.k(), || {
        format!("sets {:?}: aligned k={k}, oracle k={}", sc.sets(), oracle.k())
    })?;
    Ok((res.size, cover))
}

fn c6_aligned_cover() -> Result<String, String> {
    let fig = SetCoverInstance::worked_example();
    let pbar = setcover::build_instance(&fig).piece(0).size();
    ensure(pbar == 167, || format!("worked example |Pbar| = {pbar}"))?;
    let (size, cover) = check_cover(&fig)?;
    ensure(size == 169, || format!("worked example size {size}"))?;
    ensure(cover == BTreeSet::from([1, 3]), || {
        format!("worked example cover {cover:?}")
    })?;
    let mut r = rng(6);
    for _ in 0..20 {
        let n = r.gen_range(2..=5);
        let m = r.gen_range(1..=5);
        check_cover(&random_setcover(&mut r, n, m))?;
    }
    Ok("worked example 169 with {1,3}; 20 random instances".into())
}

fn c7_misalignment_audit() -> Result<String, String> {
    let sc = SetCoverInstance::worked_example();
    let n = sc.universe_size();
    let (lo, hi) = audit_window(&sc);
    let audit = audit_misalignment(&sc, lo, hi);
    ensure(audit.min_size >= audit.bound(n), || {
        format!(
            "element {} at {:?} gives {} < {}",
            audit.argmin.0,
            audit.argmin.1,
            audit.min_size,
            audit.bound(n)
        )
    })?;

    // Recount the union sizes independently for every cheating placement.
    let inst = setcover::build_instance(&sc);
    let pbar = inst.piece(0);
    let mut placements = 0;
    let mut min = usize::MAX;
    for i in 1..=n {
        let elem = inst.piece(i);
        for dy in lo..=hi {
            for dx in lo..=hi {
                let o = Offset::new(dx, dy);
                let aligned =
                    dy == 0 && (1..=sc.set_count()).any(|j| sc.contains(j, i) && dx == (n as i32 + 2) * (j as i32 - 1));
                if aligned {
                    continue;
                }
                placements += 1;
                min = min.min(superimpose(pbar, elem, o).unwrap().len());
            }
        }
    }
    ensure(placements == audit.placements, || {
        format!("{placements} placements recounted, audit saw {}", audit.placements)
    })?;
    ensure(min == audit.min_size, || {
        format!("recount minimum {min}, audit {}", audit.min_size)
    })?;
    Ok(format!(
        "{placements} placements over [{lo},{hi}]^2, minimum {min} >= {}",
        audit.bound(n)
    ))
}

fn c8_solver_oracles() -> Result<String, String> {
    let mut r = rng(8);
    let cases = 60;
    for case in 0..cases {
        let k = r.gen_range(1..=3);
        let inst = Instance::from_polyominoes((0..k).map(|_| random_poly(&mut r, 8, 2)).collect()).unwrap();
        let describe = || {
            inst.pieces()
                .iter()
                .map(|(_, p)| emit_polyomino(p))
                .collect::<Vec<_>>()
                .join("--\n")
        };
        let brute = solve_brute(&inst, inst.default_window()).map_err(|e| e.to_string())?;
        let contact = solve(&inst, &SolverConfig::new(SolveMode::ExactContact)).map_err(|e| e.to_string())?;
        let steiner = solve(&inst, &SolverConfig::new(SolveMode::ExactSteiner)).map_err(|e| e.to_string())?;
        let greedy = solve_greedy(&inst).map_err(|e| e.to_string())?;
        ensure(contact.size == brute.size, || {
            format!(
                "case {case}: exact {} vs brute {}\n{}",
                contact.size,
                brute.size,
                describe()
            )
        })?;
        ensure(steiner.size == contact.size, || {
            format!(
                "case {case}: steiner {} vs contact {}\n{}",
                steiner.size,
                contact.size,
                describe()
            )
        })?;
        ensure(greedy.size >= contact.size, || {
            format!(
                "case {case}: greedy {} below exact {}\n{}",
                greedy.size,
                contact.size,
                describe()
            )
        })?;
        for res in [&contact, &greedy] {
            ensure(evaluate_layout(&inst, &res.layout) == Ok(res.size), || {
                format!("case {case}: layout does not evaluate to {}", res.size)
            })?;
        }
    }
    Ok(format!("{cases} instances"))
}

fn c9_line_sanity() -> Result<String, String> {
    let mut r = rng(9);
    for case in 0..20 {
        let k = r.gen_range(1..=3);
        let rows: Vec<Polyomino> = (0..k).map(|_| row(&vec![0; r.gen_range(1..=5)])).collect();
        let inst = Instance::from_polyominoes(rows).unwrap();
        let line = solve_line_single_color(&inst).map_err(|e| e.to_string())?;
        let brute = solve_brute(&inst, inst.default_window()).map_err(|e| e.to_string())?;
        ensure(line.size == brute.size, || {
            format!("case {case}: line {} vs brute {}", line.size, brute.size)
        })?;
    }
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        // Four-row instances stay short enough for the exhaustive window.
        let k = r.gen_range(2..=4);
        let lens: Vec<usize> = loop {
            let lens: Vec<usize> = (0..k).map(|_| r.gen_range(1..=5)).collect();
            if k < 4 || lens.iter().sum::<usize>() <= 6 {
                break lens;
            }
        };
        let rows: Vec<Polyomino> = lens
            .iter()
            .map(|&len| row(&(0..len).map(|_| r.gen_range(0..3)).collect::<Vec<u8>>()))
            .collect();
        let inst = Instance::from_polyominoes(rows).unwrap();
        let greedy = solve_greedy(&inst).map_err(|e| e.to_string())?;
        let brute = solve_brute(&inst, inst.default_window()).map_err(|e| e.to_string())?;
        ensure(greedy.size <= 3 * brute.size, || {
            format!("case {case}: greedy {} > 3 x brute {}", greedy.size, brute.size)
        })?;
        worst = worst.max(greedy.size as f64 / brute.size as f64);
    }
    Ok(format!("20 single-color, 20 multicolor, worst greedy ratio {worst:.2}"))
}

fn c10_relation_axioms() -> Result<String, String> {
    let cases = 256;
    let runner = || {
        TestRunner::new(Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        })
    };

    runner()
        .run(&poly_strategy(12, 4), |p| {
            check(is_superpolyomino(&p, &p).contains(&Offset::ZERO) && compatible(&p, &p, Offset::ZERO))
        })
        .map_err(|e| fail("reflexivity", e))?;

    runner()
        .run(
            &(
                poly_strategy(14, 3),
                (0usize..64, proptest::collection::vec(0usize..64, 0..10)),
                (0usize..64, proptest::collection::vec(0usize..64, 0..6)),
            ),
            |(a, (s1, st1), (s2, st2))| {
                let (b, ob) = grow_inside(&a, s1, &st1);
                let (c, oc) = grow_inside(&b, s2, &st2);
                check(
                    is_superpolyomino(&a, &b).contains(&ob)
                        && is_superpolyomino(&b, &c).contains(&oc)
                        && is_superpolyomino(&a, &c).contains(&(ob + oc)),
                )
            },
        )
        .map_err(|e| fail("transitivity", e))?;

    runner()
        .run(
            &(poly_strategy(8, 3), poly_strategy(8, 3), -6i32..=6, -6i32..=6),
            |(p, q, dx, dy)| {
                let o = Offset::new(dx, dy);
                check(compatible(&p, &q, o) == compatible(&q, &p, -o))
            },
        )
        .map_err(|e| fail("compatibility symmetry", e))?;

    runner()
        .run(&poly_strategy(16, 7), |p| {
            check(parse_polyomino(&emit_polyomino(&p)).as_ref() == Ok(&p))
        })
        .map_err(|e| fail("parse/emit round trip", e))?;

    Ok(format!("4 properties x {cases} cases"))
}

fn fail<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
    format!("{name}: {e}")
}

fn check(ok: bool) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail("property violated"))
    }
}
