//! Acceptance suite: one test per criterion, each ending with an explicit
//! PASS line (visible under `cargo test -- --nocapture`).
//!
//! Random sweeps use fixed ChaCha8 seeds so every run checks the same
//! inputs.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bbstep::bench::{
    run_benchmark, BenchConfig, ALPHA0_SWEEP, DEFAULT_ALPHA0, DEFAULT_EPSILONS,
};
use bbstep::{
    bb1, bb2, bb3, bb3_from_components, finite_diff_grad, quadratic, rosenbrock, run, scalar_dls,
    scalar_ols, scalar_tls, verify_bb3, Method, QuadraticSpec, RunStatus, Safeguard,
    ScalarLSInstance, SecantPair, SolverConfig, StoppingRule,
};

/// Draws a pair with `sy > 0` in dimensions 1..=10.
fn positive_pair(rng: &mut ChaCha8Rng) -> SecantPair {
    loop {
        let dim = rng.gen_range(1..=10);
        let s: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let mut y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let pair = SecantPair::new(s.clone(), y.clone()).unwrap();
        if pair.sy() == 0.0 {
            continue;
        }
        if pair.sy() < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        return SecantPair::new(s, y).unwrap();
    }
}

/// Like [`positive_pair`], but keeps the angle between `s` and `y` bounded
/// away from 90 degrees. Near-orthogonal pairs make the total-least-squares
/// misfit so flat that no value-comparison search (and no reformulation via
/// the near-cancelling `bb2 - 1/bb1`) can resolve the last digits; the
/// closed forms themselves stay exact there.
fn regular_pair(rng: &mut ChaCha8Rng) -> SecantPair {
    loop {
        let pair = positive_pair(rng);
        if pair.sy() >= 0.05 * (pair.ss() * pair.yy()).sqrt() {
            return pair;
        }
    }
}

fn rel_err(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / f64::max(1.0, reference.abs())
}

#[test]
fn acceptance_1_sandwich_ordering() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..100_000 {
        let pair = positive_pair(&mut rng);
        let a1 = bb1(&pair).unwrap().value();
        let a2 = bb2(&pair).unwrap().value();
        let a3 = bb3(&pair).unwrap().value();
        let slack = 1e-12 * f64::max(1.0, f64::max(a1.abs(), a2.abs()));
        assert!(a1 <= a2 + slack, "pair {i}: bb1={a1} > bb2={a2}");
        assert!(
            a1 <= a3 + slack && a3 <= a2 + slack,
            "pair {i}: ordering violated: bb1={a1} bb3={a3} bb2={a2}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5 s");
    println!("ACCEPTANCE 1 (sandwich ordering, 1e5 pairs): PASS in {elapsed:?}");
}

#[test]
fn acceptance_2_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..10_000 {
        let pair = regular_pair(&mut rng);
        let report = verify_bb3(&pair, 1e-6).unwrap();
        assert!(
            report.agree,
            "pair {i}: closed form {} vs oracle {}",
            report.closed_form, report.oracle
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    println!("ACCEPTANCE 2 (closed form vs search oracle, 1e4 pairs): PASS in {elapsed:?}");
}

#[test]
fn acceptance_3_reformulation_and_inverse_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..10_000 {
        let pair = regular_pair(&mut rng);
        let direct = bb3(&pair).unwrap().value();

        let recombined = bb3_from_components(bb1(&pair).unwrap(), bb2(&pair).unwrap())
            .unwrap()
            .value();
        assert!(
            rel_err(recombined, direct) <= 1e-12,
            "pair {i}: recombined {recombined} vs direct {direct}"
        );

        // fitting the inverse equation with roles swapped inverts the value
        let swapped = ScalarLSInstance::new(pair.s().to_vec(), pair.y().to_vec()).unwrap();
        let beta = scalar_tls(&swapped).unwrap();
        assert!(
            rel_err(1.0 / beta, direct) <= 1e-12,
            "pair {i}: 1/beta {} vs direct {direct}",
            1.0 / beta
        );
    }
    println!("ACCEPTANCE 3 (reformulation + inverse identities, 1e4 pairs): PASS");
}

#[test]
fn acceptance_4_limits_along_scaling_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let unit = |rng: &mut ChaCha8Rng, dim: usize| loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|x| x / norm).collect::<Vec<f64>>();
        }
    };
    for i in 0..100 {
        let dim = rng.gen_range(2..=10);
        let u = unit(&mut rng, dim);
        let mut y = unit(&mut rng, dim);
        let uy: f64 = u.iter().zip(&y).map(|(a, b)| a * b).sum();
        if uy == 0.0 {
            continue;
        }
        if uy < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }

        let stretched: Vec<f64> = u.iter().map(|v| v * 1e6).collect();
        let pair = SecantPair::new(stretched, y.clone()).unwrap();
        let ratio = bb3(&pair).unwrap().value() / bb2(&pair).unwrap().value();
        assert!(
            (ratio - 1.0).abs() <= 1e-5,
            "case {i}: bb3/bb2 = {ratio} at t = 1e6"
        );

        let shrunk: Vec<f64> = u.iter().map(|v| v * 1e-6).collect();
        let pair = SecantPair::new(shrunk, y).unwrap();
        let ratio = bb3(&pair).unwrap().value() / bb1(&pair).unwrap().value();
        assert!(
            (ratio - 1.0).abs() <= 1e-5,
            "case {i}: bb3/bb1 = {ratio} at t = 1e-6"
        );
    }
    println!("ACCEPTANCE 4 (scaling-path limits at t = 1e6 and 1e-6): PASS");
}

#[test]
fn acceptance_5_least_squares_triad_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 10_000 {
        let dim = rng.gen_range(1..=10);
        let a: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let inst = ScalarLSInstance::new(a.clone(), b.clone()).unwrap();
        let forward = match scalar_tls(&inst) {
            Ok(v) => v,
            Err(_) => continue, // a.b == 0
        };

        let swapped = ScalarLSInstance::new(b.clone(), a.clone()).unwrap();
        let dls = scalar_dls(&inst).unwrap();
        let ols_swapped = scalar_ols(&swapped).unwrap();
        assert!(
            (dls * ols_swapped - 1.0).abs() <= 1e-12,
            "dls(a,b) * ols(b,a) = {}",
            dls * ols_swapped
        );

        let backward = scalar_tls(&swapped).unwrap();
        assert!(
            (forward * backward - 1.0).abs() <= 1e-12,
            "tls(a,b) * tls(b,a) = {}",
            forward * backward
        );

        // the same data read as a secant pair: s = b, y = a
        let pair = SecantPair::new(b, a).unwrap();
        let a1 = bb1(&pair).unwrap().value();
        let a2 = bb2(&pair).unwrap().value();
        let a3 = bb3(&pair).unwrap().value();
        assert!(rel_err(scalar_ols(&inst).unwrap(), a1) <= 1e-12);
        assert!(rel_err(dls, a2) <= 1e-12);
        assert!(rel_err(forward, a3) <= 1e-12);
        checked += 1;
    }
    println!("ACCEPTANCE 5 (triad duality, reciprocity and bb identities, 1e4 instances): PASS");
}

#[test]
fn acceptance_6_rosenbrock_gradient_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let problem = rosenbrock();
    for _ in 0..100 {
        let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let analytic = problem.grad(&x);
        let numeric = finite_diff_grad(&problem, &x, 1e-5);
        for (n, a) in numeric.iter().zip(&analytic) {
            assert!(
                rel_err(*n, *a) <= 1e-6,
                "gradient mismatch at {x:?}: numeric {numeric:?} analytic {analytic:?}"
            );
        }
    }
    println!("ACCEPTANCE 6 (analytic vs central-difference gradient, 100 points): PASS");
}

#[test]
fn acceptance_7_rosenbrock_benchmark_properties() {
    let started = Instant::now();
    let config = BenchConfig::table1_preset();
    let rows = run_benchmark(&config).unwrap();
    assert_eq!(rows.len(), 3 * 4 * 4, "methods x epsilons x bootstrap sweep");

    println!("measured grid (rows: method, epsilon, status, iterations, alpha0):");
    for r in &rows {
        println!(
            "  {:5} eps={:<5e} alpha0={:<5e} {:10} {}",
            r.method.to_string(),
            r.epsilon,
            r.alpha0,
            r.status.to_string(),
            r.iterations
        );
    }
    println!(
        "reference counts: bb1 = 154/160/166/172, bb3 = 32/38/44/46, bb2 = cap at every eps"
    );

    // (a) bb1 and bb3 reach every tolerance at the default bootstrap.
    let at_default = |method: Method| -> Vec<&bbstep::bench::SummaryRow> {
        rows.iter()
            .filter(|r| r.method == method && r.alpha0 == DEFAULT_ALPHA0)
            .collect()
    };
    for method in [Method::Bb1, Method::Bb3] {
        let method_rows = at_default(method);
        assert_eq!(method_rows.len(), DEFAULT_EPSILONS.len());
        for row in &method_rows {
            assert_eq!(
                row.status,
                RunStatus::Converged,
                "(a) {method} at eps {} did not converge",
                row.epsilon
            );
            assert!(
                row.final_distance.unwrap() <= row.epsilon,
                "(a) converged row must satisfy the stop rule"
            );
        }
    }

    // (b) bb3 converges strictly faster than bb1 at every tolerance.
    for (bb1_row, bb3_row) in at_default(Method::Bb1).iter().zip(at_default(Method::Bb3)) {
        assert_eq!(bb1_row.epsilon, bb3_row.epsilon);
        assert!(
            bb3_row.iterations < bb1_row.iterations,
            "(b) at eps {}: bb3 {} !< bb1 {}",
            bb1_row.epsilon,
            bb3_row.iterations,
            bb1_row.iterations
        );
    }

    // (c) tighter tolerances never take fewer iterations.
    for method in [Method::Bb1, Method::Bb3] {
        let counts: Vec<usize> = at_default(method).iter().map(|r| r.iterations).collect();
        assert!(
            counts.windows(2).all(|w| w[0] <= w[1]),
            "(c) {method}: iterations {counts:?} not nondecreasing as eps shrinks"
        );
    }

    // (d) bb2 fails to converge for at least one bootstrap in the sweep.
    let bb2_failures = rows
        .iter()
        .filter(|r| {
            r.method == Method::Bb2
                && ALPHA0_SWEEP.contains(&r.alpha0)
                && matches!(r.status, RunStatus::MaxIter | RunStatus::Diverged)
        })
        .count();
    assert!(bb2_failures > 0, "(d) bb2 should fail somewhere in the sweep");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30 s");
    println!("ACCEPTANCE 7 (rosenbrock benchmark properties a-d): PASS in {elapsed:?}");
}

#[test]
fn acceptance_8_quadratic_sanity() {
    let problem = quadratic(&QuadraticSpec {
        diag: vec![1.0, 10.0],
        shift: vec![0.0, 0.0],
    })
    .unwrap()
    .with_start(vec![1.0, 1.0]);
    for method in Method::ALL_BB {
        let config = SolverConfig {
            method,
            alpha0: 0.1,
            max_iter: 100,
            stopping: StoppingRule::GradientNorm { epsilon: 1e-8 },
            safeguard: Safeguard::None,
        };
        let result = run(&problem, &config).unwrap();
        assert_eq!(
            result.status,
            RunStatus::Converged,
            "{method} did not reach |g| <= 1e-8 within 100 iterations"
        );
    }
    println!("ACCEPTANCE 8 (bb1/bb2/bb3 converge on diag(1,10) quadratic within 100): PASS");
}

#[test]
fn acceptance_9_determinism_and_replay() {
    use bbstep::bench::{emit_summary, parse_trace_csv, render_trace, OutputFormat};

    let dir = tempfile::tempdir().unwrap();
    let make_config = |tag: &str| BenchConfig {
        trace_dir: Some(dir.path().join(tag)),
        ..BenchConfig::table1_preset()
    };

    let rows_a = run_benchmark(&make_config("a")).unwrap();
    let rows_b = run_benchmark(&make_config("b")).unwrap();
    let summary_a = dir.path().join("summary_a.csv");
    let summary_b = dir.path().join("summary_b.csv");
    emit_summary(&rows_a, OutputFormat::Csv, &summary_a).unwrap();
    emit_summary(&rows_b, OutputFormat::Csv, &summary_b).unwrap();
    assert_eq!(
        std::fs::read(&summary_a).unwrap(),
        std::fs::read(&summary_b).unwrap(),
        "summary files must be byte-identical"
    );

    let problem = rosenbrock();
    let mut traces = 0;
    for entry in std::fs::read_dir(dir.path().join("a")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let twin = dir.path().join("b").join(path.file_name().unwrap());
        assert_eq!(
            text.as_bytes(),
            std::fs::read(&twin).unwrap(),
            "trace files must be byte-identical"
        );

        // replay: recompute every iterate from its predecessor and the
        // recorded steplength; re-rendering must reproduce the file exactly
        let records = parse_trace_csv(&text).unwrap();
        let mut replayed = vec![records[0].clone()];
        for window in records.windows(2) {
            let alpha = window[1].alpha.expect("updates carry their steplength");
            let g = problem.grad(&window[0].x);
            let x: Vec<f64> = window[0]
                .x
                .iter()
                .zip(&g)
                .map(|(xi, gi)| xi - alpha * gi)
                .collect();
            let grad = problem.grad(&x);
            replayed.push(bbstep::IterationRecord {
                k: window[1].k,
                f_value: problem.f(&x),
                grad_norm: grad.iter().map(|v| v * v).sum::<f64>().sqrt(),
                x,
                alpha: Some(alpha),
            });
        }
        assert_eq!(
            render_trace(&replayed),
            text,
            "replay of {} must reproduce the recorded digits",
            path.display()
        );
        traces += 1;
    }
    assert_eq!(traces, 48, "one trace per grid cell");
    println!("ACCEPTANCE 9 (byte-identical reruns, exact trace replay): PASS");
}
