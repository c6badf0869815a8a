//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! if any criterion fails.

use std::collections::{HashMap, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lattice_packing::bounds::{
    corollary_bound, distance_check, published_tables, reproduce_tables, PublishedValue,
};
use lattice_packing::coloring::verify_s_coloring;
use lattice_packing::coloring::{
    derive_33_coloring, find_plan, plan_catalog, shipped_pattern, verify_plan, verify_torus,
};
use lattice_packing::density::{
    feasibility_sum, k_area_direct, k_area_formula, rational, DEFAULT_HORIZON,
};
use lattice_packing::lattice::{ball, ball_size_formula, neighbors, sphere, sphere_size_formula};
use lattice_packing::packings::{base_packing, scheme_catalog};
use lattice_packing::{distance, LatticeKind, SequenceSpec, Vertex};

use LatticeKind::{Hex, Square, Tri};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bfs(kind: LatticeKind, source: Vertex, reach: i64) -> HashMap<Vertex, u64> {
    let mut dist = HashMap::from([(source, 0u64)]);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for w in neighbors(kind, v) {
            if (w - source).max_abs() <= reach && !dist.contains_key(&w) {
                dist.insert(w, d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn distance_oracle() -> Check {
    let mut compared = 0;
    for kind in LatticeKind::ALL {
        // A second source of the other hexagonal vertex type.
        for source in [Vertex::new(0, 0), Vertex::new(1, 0)] {
            let dist = bfs(kind, source, 100);
            for a in -20..=20 {
                for b in -20..=20 {
                    let w = source + Vertex::new(a, b);
                    let closed = distance(kind, source, w);
                    ensure(dist[&w] == closed, || {
                        format!("{kind} {source}->{w}: bfs {} closed {closed}", dist[&w])
                    })?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} pairs"))
}

fn ball_and_area() -> Check {
    for kind in LatticeKind::ALL {
        for n in 1..=30u64 {
            let b = ball(kind, Vertex::ORIGIN, n).len() as u64;
            let s = sphere(kind, Vertex::ORIGIN, n).len() as u64;
            let bf = ball_size_formula(kind, n as i64).map_err(|e| e.to_string())?;
            let sf = sphere_size_formula(kind, n as i64).map_err(|e| e.to_string())?;
            ensure(b == bf && s == sf, || {
                format!("{kind} n={n}: ball {b}/{bf} sphere {s}/{sf}")
            })?;
        }
        for k in 1..=16 {
            let f = k_area_formula(kind, k).map_err(|e| e.to_string())?;
            for center in [Vertex::new(0, 0), Vertex::new(1, 0)] {
                let d = k_area_direct(kind, k, center).map_err(|e| e.to_string())?;
                ensure(d == f, || {
                    format!("{kind} A({k}) at {center}: direct {d} formula {f}")
                })?;
            }
        }
    }
    let a1 = k_area_formula(Tri, 1).map_err(|e| e.to_string())?;
    let a2 = k_area_formula(Tri, 2).map_err(|e| e.to_string())?;
    ensure(a1 == rational(3, 1) && a2 == rational(7, 1), || {
        format!("tri A(1)={a1} A(2)={a2}")
    })?;
    Ok("n<=30, k<=16".into())
}

fn packing_certificates() -> Check {
    let expected: [(LatticeKind, u64, u64); 9] = [
        (Hex, 2, 4),
        (Hex, 3, 6),
        (Hex, 4, 11),
        (Square, 2, 5),
        (Square, 3, 8),
        (Square, 4, 13),
        (Tri, 1, 3),
        (Tri, 2, 7),
        (Tri, 3, 12),
    ];
    for (kind, i, index) in expected {
        let x = base_packing(kind, i).ok_or_else(|| format!("{kind} X_{i} missing"))?;
        let cert = x.min_pair_distance(i);
        ensure(cert.min_distance == i + 1, || {
            format!("{kind} X_{i}: min distance {}", cert.min_distance)
        })?;
        ensure(x.density() == rational(1, index as i64), || {
            format!("{kind} X_{i}: density {}", x.density())
        })?;
    }
    Ok("9 base packings".into())
}

fn scheme_suite() -> Check {
    let mut failed = Vec::new();
    let mut total = 0;
    for entry in scheme_catalog() {
        for (k, m) in entry.default_params(3) {
            total += 1;
            let scheme = entry
                .instantiate(k, m)
                .map_err(|e| format!("{} k={k} m={m}: {e}", entry.id))?;
            let report = scheme.verify();
            if !report.passed() || !scheme.density_identity_holds() {
                failed.push(report.name.clone());
            }
        }
    }
    ensure(failed.is_empty(), || {
        format!("{} of {total} failed: {}", failed.len(), failed.join(", "))
    })?;
    Ok(format!("{total} instances"))
}

fn coloring_suite() -> Check {
    let expected: &[(&str, usize)] = &[
        ("(2,2)-hex", 8),
        ("(2,3)-hex", 5),
        ("(2,4)-hex", 4),
        ("(3,2)-hex", 35),
        ("(3,3)-hex", 13),
        ("(3,4)-hex", 10),
        ("(3,5)-hex", 8),
        ("(3,6)-hex", 6),
        ("(4,3)-hex", 58),
        ("(4,4)-hex", 27),
        ("(4,5)-hex", 21),
        ("(4,6)-hex", 18),
        ("(4,11)-hex", 11),
        ("(2,2)-square", 20),
        ("(2,3)-square", 8),
        ("(2,4)-square", 6),
        ("(2,5)-square", 5),
        ("(3,4)-square", 20),
        ("(3,5)-square", 17),
        ("(3,6)-square", 14),
        ("(3,8)-square", 8),
        ("(4,4)-square", 56),
        ("(4,5)-square", 34),
        ("(4,6)-square", 28),
        ("(4,13)-square", 13),
        ("(1,2)-tri", 6),
        ("(1,3)-tri", 3),
        ("(2,4)-tri", 16),
        ("(2,5)-tri", 13),
        ("(2,6)-tri", 10),
        ("(2,7)-tri", 7),
        ("(3,4)-tri", 72),
        ("(3,5)-tri", 38),
        ("(3,6)-tri", 26),
        ("(3,12)-tri", 12),
    ];
    for &(name, colors) in expected {
        let plan = find_plan(name).map_err(|e| e.to_string())?;
        ensure(plan.name == name, || {
            format!("{name} missing from the catalog")
        })?;
        let (report, _) = verify_plan(plan);
        ensure(
            report.passed() && report.color_count() == Some(colors),
            || format!("{name}: {report}, expected {colors}"),
        )?;
    }
    for plan in plan_catalog() {
        let (report, _) = verify_plan(plan);
        ensure(report.passed(), || format!("{}: {report}", plan.name))?;
    }
    Ok(format!("{} catalog plans", plan_catalog().len()))
}

fn pattern_pipeline() -> Check {
    let grid = shipped_pattern().map_err(|e| e.to_string())?;
    let torus = verify_torus(
        &grid.to_coloring(),
        &SequenceSpec::Explicit((1..=17).collect()),
    );
    ensure(torus.ok, || format!("torus: {torus}"))?;
    let derived = derive_33_coloring(&grid).map_err(|e| e.to_string())?;
    for claim in &derived.claims {
        ensure(claim.holds, || {
            format!("claim fails: {} ({})", claim.statement, claim.detail)
        })?;
    }
    ensure(derived.flags.is_empty(), || derived.flags.join("; "))?;
    let report = verify_s_coloring(&derived.coloring, &SequenceSpec::dn(3, 3));
    ensure(report.ok && report.color_count <= 33, || {
        format!("derived: {report}")
    })?;
    Ok(format!(
        "{} claims, derived {} colors",
        derived.claims.len(),
        report.color_count
    ))
}

fn infinity_certificates() -> Check {
    let statements: [(LatticeKind, u64, u64, i64); 18] = [
        (Hex, 2, 1, 994),
        (Hex, 5, 2, 955),
        (Hex, 8, 3, 935),
        (Hex, 11, 4, 925),
        (Hex, 13, 5, 986),
        (Hex, 16, 6, 968),
        (Square, 2, 1, 764),
        (Square, 4, 2, 877),
        (Square, 6, 3, 917),
        (Square, 8, 4, 938),
        (Square, 10, 5, 951),
        (Square, 12, 6, 959),
        (Tri, 1, 1, 854),
        (Tri, 3, 2, 755),
        (Tri, 4, 3, 883),
        (Tri, 5, 4, 966),
        (Tri, 7, 5, 887),
        (Tri, 8, 6, 940),
    ];
    for (kind, d, n, milli) in statements {
        let cert = feasibility_sum(kind, &SequenceSpec::dn(d, n), DEFAULT_HORIZON)
            .map_err(|e| e.to_string())?;
        ensure(cert.is_infeasible(), || {
            format!("{kind} ({d},{n}) not certified")
        })?;
        ensure(cert.partial_sum_at_most_milli(milli), || {
            format!(
                "{kind} ({d},{n}): partial sum {} above 0.{milli}",
                cert.partial_sum_decimal_up(3)
            )
        })?;
    }
    Ok("18 statements".into())
}

fn table_reproduction() -> Check {
    let report = reproduce_tables();
    let lower_bounds = [
        (Hex, 3, 2, 15),
        (Hex, 4, 2, 61),
        (Square, 2, 2, 11),
        (Square, 3, 2, 57),
        (Square, 5, 3, 199),
        (Tri, 2, 2, 127),
        (Tri, 4, 4, 104),
    ];
    for (kind, d, n, lower) in lower_bounds {
        let cell = report
            .cell(kind, d, n)
            .ok_or_else(|| format!("{kind} ({d},{n}) missing"))?;
        ensure(cell.lower == Some(lower), || {
            format!("{kind} ({d},{n}) lower {:?}, expected {lower}", cell.lower)
        })?;
    }
    let bad: Vec<String> = report
        .mismatches()
        .iter()
        .map(|c| {
            format!(
                "{} ({},{}) reproduced {}",
                c.kind,
                c.d,
                c.n,
                c.display_value()
            )
        })
        .collect();
    ensure(bad.is_empty(), || {
        format!("{} mismatches: {}", bad.len(), bad.join(", "))
    })?;
    Ok(format!("{} cells", report.cells.len()))
}

fn corollary_checks() -> Check {
    let w = corollary_bound(Hex, &[2; 10])
        .map_err(|e| e.to_string())?
        .ok_or("no witness for (2,2,...)")?;
    ensure(w.bound() == 4 && w.validate().is_ok(), || {
        format!("(2,2,...): {w}")
    })?;
    let mut seq = vec![2, 3, 3, 5, 5, 5, 5];
    seq.extend([7; 8]);
    let w = corollary_bound(Hex, &seq)
        .map_err(|e| e.to_string())?
        .ok_or("no witness for (2,3,3,5,...)")?;
    ensure(w.bound() == 15 && w.validate().is_ok(), || {
        format!("(2,3,3,5,...): {w}")
    })?;
    let (report, _) = verify_plan(&w.to_plan());
    ensure(report.passed(), || format!("witness coloring: {report}"))?;

    let tables = published_tables();
    for (kind, d) in [(Hex, 1), (Hex, 3), (Hex, 4), (Square, 2), (Tri, 1)] {
        let check = distance_check(kind, d);
        let n = check.formula;
        let cell = tables
            .iter()
            .find(|c| c.0 == kind)
            .and_then(|(_, cells)| cells.iter().find(|c| c.d == d && c.n == n));
        match cell {
            Some(cell) => ensure(cell.value == PublishedValue::Exact(n), || {
                format!("{kind} d={d}: formula {n}, table {:?}", cell.value)
            })?,
            // Beyond the printed columns: the matching catalog plan must attain it.
            None => {
                let name = format!("({d},{n})-{}", kind.name());
                let plan = find_plan(&name).map_err(|e| e.to_string())?;
                let (report, _) = verify_plan(plan);
                ensure(
                    plan.name == name && report.color_count() == Some(n as usize),
                    || format!("{name}: {report}"),
                )?;
            }
        }
        ensure(check.flag.is_none(), || {
            format!("{kind} d={d}: {:?}", check.flag)
        })?;
    }
    let hex2 = distance_check(Hex, 2);
    ensure(hex2.flag.is_some(), || "hex d=2 should be flagged".into())?;
    Ok(format!(
        "bounds 4 and 15; hex d=2 flagged: formula {}, partition {:?}",
        hex2.formula, hex2.partition
    ))
}

type Criterion = (&'static str, fn() -> Check, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("distance oracle", distance_oracle, Duration::from_secs(5)),
        (
            "ball and k-area formulas",
            ball_and_area,
            Duration::from_secs(10),
        ),
        (
            "base packing certificates",
            packing_certificates,
            Duration::from_secs(5),
        ),
        ("scheme suite", scheme_suite, Duration::from_secs(60)),
        ("coloring suite", coloring_suite, Duration::from_secs(300)),
        (
            "pattern pipeline",
            pattern_pipeline,
            Duration::from_secs(30),
        ),
        (
            "infinity certificates",
            infinity_certificates,
            Duration::from_secs(30),
        ),
        (
            "table reproduction",
            table_reproduction,
            Duration::from_secs(120),
        ),
        (
            "corollary checkers",
            corollary_checks,
            Duration::from_secs(60),
        ),
    ];
    let mut failures = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > *budget => {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
