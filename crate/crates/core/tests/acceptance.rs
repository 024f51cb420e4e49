//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use pentaflip::hyperbolic::{crosscheck_trials, random_polygon_trials, CROSSCHECK_TOL, GEOMETRY_TOL};
use pentaflip::korepanov::{
    area_map_check, inverse_2x2, non_involution_witness, quad_matrix_for, verify_matrix_pentagon, RFMatrix,
};
use pentaflip::polygon::flip_graph;
use pentaflip::ptolemy::{laurent_walks, relation_suite, verify_lemma1, LabelledTriangulation};
use pentaflip::symexpr::BigRational;

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.pass = false;
            out.detail = format!("{}; took {elapsed:?}, limit {limit:?}", out.detail);
            return out;
        }
    }
    out.detail = format!("{} ({elapsed:.2?})", out.detail);
    out
}

fn lemma1() -> Outcome {
    let report = verify_lemma1();
    let pass = report.identity && report.all_applied() && report.final_state == LabelledTriangulation::pentagon_fan();
    Outcome { pass, detail: "five-flip cycle restores the labelled pentagon fan".into() }
}

fn matrix_pentagon() -> Outcome {
    let r = verify_matrix_pentagon();
    Outcome { pass: r.identity, detail: format!("product of the five factors is I3, residual entries {:?}", r.residual_entries) }
}

fn column_sums() -> Outcome {
    let m = quad_matrix_for([1, 2, 3, 4]);
    let inv = inverse_2x2(&m);
    let pass = area_map_check(&m) && inv.as_ref().is_ok_and(area_map_check);
    Outcome { pass, detail: "quad matrix and its inverse have column sums (1,1)".into() }
}

fn inverse_closed_form() -> Outcome {
    let m = RFMatrix::from_exprs(&[&["a", "b"], &["1 - a", "1 - b"]]);
    let expected = RFMatrix::from_exprs(&[&["(1 - b)/(a - b)", "-b/(a - b)"], &["(a - 1)/(a - b)", "a/(a - b)"]]);
    let pass = inverse_2x2(&m).is_ok_and(|inv| inv == expected);
    Outcome { pass, detail: "inverse of [[a,b],[1-a,1-b]] matches the closed form".into() }
}

fn relations() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [5, 6] {
        let suite = relation_suite(n).expect("n in range");
        pass &= suite.holds;
        for f in &suite.families {
            parts.push(format!("n={n} {:?}: {}/{} checked, {} failures", f.kind, f.checked, f.instances, f.failures.len()));
        }
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn non_involution() -> Outcome {
    match non_involution_witness() {
        Some((zeta, sq)) => {
            let shown: Vec<String> = zeta.iter().map(ToString::to_string).collect();
            let identity = (0..2).all(|i| (0..2).all(|j| {
                let v = sq.get(i, j).constant_value().unwrap_or_else(BigRational::zero);
                if i == j { v.is_one() } else { v.is_zero() }
            }));
            Outcome { pass: !identity, detail: format!("zeta = ({}) gives M^2 = {:?}", shown.join(", "), sq) }
        }
        None => Outcome { pass: false, detail: "no witness found".into() },
    }
}

fn laurent() -> Outcome {
    let r = laurent_walks(8, 10, 2024, 100).expect("n in range");
    Outcome {
        pass: r.holds && r.trials == 100,
        detail: format!("{} labels over {} walks at n=8, {} non-Laurent", r.labels_checked, r.trials, r.violations.len()),
    }
}

fn flip_graphs() -> Outcome {
    let expected = [(4, 2), (5, 5), (6, 14), (7, 42), (8, 132)];
    let mut pass = true;
    let mut orders = Vec::new();
    for (n, order) in expected {
        let g = flip_graph(n).expect("n in range");
        pass &= g.order() == order && (0..g.order()).all(|v| g.neighbors(v).len() == n - 3) && g.is_connected();
        orders.push(g.order().to_string());
    }
    Outcome { pass, detail: format!("orders {} for n=4..8, regular of degree n-3, connected", orders.join(", ")) }
}

fn hyperbolic() -> Outcome {
    let quads = random_polygon_trials(4, 9, 100).expect("valid n");
    let cross = crosscheck_trials(5, None, 9, 100).expect("valid n");
    let cross_err = cross.max_crosscheck_error.unwrap_or(f64::INFINITY);
    let pass = quads.max_ptolemy_residual < GEOMETRY_TOL
        && quads.max_round_trip_error < GEOMETRY_TOL
        && cross.max_round_trip_error < GEOMETRY_TOL
        && cross_err < CROSSCHECK_TOL;
    Outcome {
        pass,
        detail: format!(
            "residual {:.1e}, round trip {:.1e}, pentagon cross-check {:.1e}",
            quads.max_ptolemy_residual,
            quads.max_round_trip_error.max(cross.max_round_trip_error),
            cross_err
        ),
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: Vec<Criterion> = vec![
        ("1 five-flip label cycle", Some(secs(1)), lemma1),
        ("2 matrix pentagon identity", Some(secs(5)), matrix_pentagon),
        ("3 column sums", None, column_sums),
        ("4 inverse closed form", None, inverse_closed_form),
        ("5 relation suite n=5,6", Some(secs(60)), relations),
        ("6 non-involution witness", None, non_involution),
        ("7 Laurent property", Some(secs(120)), laurent),
        ("8 flip-graph counts", None, flip_graphs),
        ("9 hyperbolic oracle", Some(secs(10)), hyperbolic),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let outcome = timed(limit, check);
        println!("criterion {name}: {} - {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("{} criteria failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
