//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).

use banachproj::bounds::{
    hilbert_set_bounds, theorem1_outcome, third_problem_outcome, EPS_CMP,
};
use banachproj::harness::{self, trial_rng, Suite, SuiteConfig};
use banachproj::projection::{self, brute_force_project};
use banachproj::space::{dual_pairing, figiel_check, random_unit, FigielConstant};
use banachproj::{
    project_default, run_suite, ConvexSetDescriptor, Point, SetPair, SpaceSpec,
};
use rand::Rng;

const EXPONENTS: [f64; 4] = [1.5, 2.0, 3.0, 4.0];
const DIMS: [usize; 3] = [2, 8, 20];

fn verdict(id: u32, name: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} ({name}): {status}{detail}");
    assert!(ok, "criterion {id} ({name}) failed{detail}");
}

fn suite_config(suite: Suite, p: Vec<f64>, dim: Vec<usize>, trials: usize) -> SuiteConfig {
    let mut c = SuiteConfig::new(suite);
    c.p = p;
    c.dim = dim;
    c.trials = trials;
    c.seed = 20_240_817;
    c
}

#[test]
fn criterion_01_duality_identities() {
    let mut failures = 0_usize;
    for &p in &EXPONENTS {
        for &dim in &DIMS {
            let space = SpaceSpec::new(dim, p).unwrap();
            let mut rng = trial_rng(1, p, dim, 0);
            for _ in 0..10_000 {
                let x = Point::new((0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect());
                let jx = space.duality_map(&x).unwrap();
                let n = space.norm(&x).unwrap();
                let pairing = dual_pairing(&jx, &x).unwrap();
                if (pairing - n * n).abs() > 1e-10 * (1.0 + n * n) {
                    failures += 1;
                }
                if (space.dual_norm(&jx).unwrap() - n).abs() > 1e-10 * (1.0 + n) {
                    failures += 1;
                }
                if p == 2.0 && jx.as_slice() != x.as_slice() {
                    failures += 1;
                }
            }
        }
    }
    verdict(
        1,
        "duality-map identities",
        failures == 0,
        &format!(" [failures = {failures}]"),
    );
}

#[test]
fn criterion_02_lemma1() {
    let report = run_suite(&suite_config(
        Suite::Lemma1,
        EXPONENTS.to_vec(),
        DIMS.to_vec(),
        10_000,
    ))
    .unwrap();
    // margin tolerance 1e-9 per the criterion, tighter than the default
    let ok = report.violations == 0 && report.min_margin.unwrap() >= -1e-9;
    verdict(
        2,
        "duality monotonicity bound",
        ok,
        &format!(
            " [trials = {}, min margin = {:.3e}]",
            report.trials_run,
            report.min_margin.unwrap()
        ),
    );
}

#[test]
fn criterion_03_lemma2() {
    let mut config = suite_config(Suite::Lemma2, EXPONENTS.to_vec(), DIMS.to_vec(), 10_000);
    config.perturbation_scale = 5e-4;
    let report = run_suite(&config).unwrap();
    let ok = report.violations == 0 && report.informative_fraction >= 0.95;
    verdict(
        3,
        "duality continuity bound",
        ok,
        &format!(
            " [violations = {}, informative fraction = {:.4}]",
            report.violations, report.informative_fraction
        ),
    );
}

#[test]
fn criterion_04_figiel_grid() {
    let l = FigielConstant::default();
    let mut worst = f64::INFINITY;
    let mut count = 0_usize;
    for &p in &EXPONENTS {
        let q = p / (p - 1.0);
        for r in [p, q] {
            for j in 1..=40 {
                let eta = 0.05 * j as f64;
                for i in 1..=j {
                    let eps = 0.05 * i as f64;
                    let m = figiel_check(r, eps, eta, &l).unwrap();
                    worst = worst.min(m);
                    count += 1;
                }
            }
        }
    }
    verdict(
        4,
        "modulus scaling inequality grid",
        worst >= 0.0,
        &format!(" [{count} grid points, worst margin = {worst:.3e}]"),
    );
}

#[test]
fn criterion_05_solver_oracle() {
    let mut worst_gap_ratio: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    let mut worst_idem: f64 = 0.0;
    let mut ok = true;
    for &p in &EXPONENTS {
        let space = SpaceSpec::new(2, p).unwrap();
        let mut rng = trial_rng(5, p, 2, 0);
        for trial in 0..200 {
            let set = if trial % 2 == 0 {
                ConvexSetDescriptor::Box {
                    lower: Point::new(vec![rng.gen_range(-2.0..0.0), rng.gen_range(-2.0..0.0)]),
                    upper: Point::new(vec![rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)]),
                }
            } else {
                let m = rng.gen_range(3..=8);
                ConvexSetDescriptor::VPolytope {
                    vertices: (0..m)
                        .map(|_| {
                            Point::new(vec![rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)])
                        })
                        .collect(),
                }
            };
            let x = Point::new(vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]);
            let res = project_default(&space, &set, &x).unwrap();
            if !res.converged {
                ok = false;
                continue;
            }
            let oracle = brute_force_project(&space, &set, &x, 40).unwrap();
            let gap = space.norm(&res.point.sub(&oracle.point)).unwrap();
            worst_gap_ratio = worst_gap_ratio.max(gap / (2.0 * oracle.resolution));
            worst_residual = worst_residual.max(res.vi_residual);
            let again = project_default(&space, &set, &res.point).unwrap();
            worst_idem = worst_idem.max(space.norm(&again.point.sub(&res.point)).unwrap());
        }
    }
    ok = ok && worst_gap_ratio <= 1.0 && worst_residual <= 1e-8 && worst_idem <= 1e-9;
    verdict(
        5,
        "solver vs grid oracle",
        ok,
        &format!(
            " [gap/(2 res) = {worst_gap_ratio:.3}, residual = {worst_residual:.2e}, idempotence = {worst_idem:.2e}]"
        ),
    );
}

#[test]
fn criterion_06_hilbert_properties() {
    let space = SpaceSpec::new(3, 2.0).unwrap();
    let mut rng = trial_rng(6, 2.0, 3, 0);
    let mut worst_expansion: f64 = f64::NEG_INFINITY;
    let mut worst_best_approx: f64 = f64::NEG_INFINITY;
    let mut worst_residual: f64 = 0.0;
    for _ in 0..1000 {
        let set = harness::random_set(&mut rng, &space);
        let x = Point::new((0..3).map(|_| rng.gen_range(-4.0..4.0)).collect());
        let y = Point::new((0..3).map(|_| rng.gen_range(-4.0..4.0)).collect());
        let px = project_default(&space, &set, &x).unwrap();
        let py = project_default(&space, &set, &y).unwrap();
        assert!(px.converged && py.converged);
        // nonexpansiveness: ||Px - Py|| <= ||x - y||
        let lhs = space.norm(&px.point.sub(&py.point)).unwrap();
        let rhs = space.norm(&x.sub(&y)).unwrap();
        worst_expansion = worst_expansion.max(lhs - rhs);
        // absolutely best approximation over sampled xi in the set:
        // ||Px - xi||^2 <= ||x - xi||^2 - ||x - Px||^2
        for _ in 0..8 {
            let base = py.point.clone();
            let dir = random_unit(&mut rng, &space);
            let xi_try = base.add(&dir.scale(rng.gen_range(0.0..0.5)));
            let xi = project_default(&space, &set, &xi_try).unwrap().point;
            let a = space.norm(&px.point.sub(&xi)).unwrap().powi(2);
            let b = space.norm(&x.sub(&xi)).unwrap().powi(2);
            let c = space.norm(&x.sub(&px.point)).unwrap().powi(2);
            worst_best_approx = worst_best_approx.max(a - (b - c));
        }
        worst_residual = worst_residual.max(px.vi_residual).max(py.vi_residual);
    }
    let ok = worst_expansion <= 1e-6 && worst_best_approx <= 1e-6 && worst_residual <= 1e-8;
    verdict(
        6,
        "Hilbert projection properties",
        ok,
        &format!(
            " [expansion = {worst_expansion:.2e}, best-approx = {worst_best_approx:.2e}, residual = {worst_residual:.2e}]"
        ),
    );
}

#[test]
fn criterion_07_argument_perturbation() {
    let mut violations = 0_usize;
    let mut detail = String::new();
    let mut fraction_at_small_scale = 1.0_f64;
    for &scale in &[1e-3, 1e-2] {
        let mut config = suite_config(Suite::Theorem1, vec![2.0, 3.0], vec![2], 1000);
        config.perturbation_scale = scale;
        let report = run_suite(&config).unwrap();
        violations += report.violations;
        if scale == 1e-3 {
            fraction_at_small_scale = report.informative_fraction;
        }
        detail.push_str(&format!(
            " [scale {scale:.0e}: violations = {}, informative fraction = {:.4}, solver failures = {}]",
            report.violations, report.informative_fraction, report.solver_failures
        ));
    }
    let ok = violations == 0 && fraction_at_small_scale >= 0.5;
    verdict(7, "projection continuity in argument", ok, &detail);
}

#[test]
fn criterion_08_set_perturbation() {
    let mut ok = true;
    let mut detail = String::new();
    for suite in [Suite::Theorem2, Suite::Remark5] {
        let report = run_suite(&suite_config(suite, vec![2.0, 3.0], vec![2], 1000)).unwrap();
        ok = ok && report.violations == 0 && report.passed();
        detail.push_str(&format!(
            " [{}: violations = {}, informative fraction = {:.3}]",
            report.suite, report.violations, report.informative_fraction
        ));
    }
    verdict(8, "projection continuity in set", ok, &detail);
}

#[test]
fn criterion_09_hilbert_set_bound() {
    // formula level: our bound never exceeds the comparison bound
    let mut exceptions = 0_usize;
    for i in 0..=20 {
        for j in 0..=20 {
            for k in 0..=20 {
                let (sigma, r, d) = (0.5 * i as f64, 0.5 * j as f64, 0.5 * k as f64);
                let (ours, comparison) = hilbert_set_bounds(sigma, r, d).unwrap();
                if ours > comparison + 1e-12 {
                    exceptions += 1;
                }
            }
        }
    }
    // instance level: the bound holds against solved projections
    let report = run_suite(&suite_config(Suite::HilbertF9, vec![2.0], vec![2], 1000)).unwrap();
    let ok = exceptions == 0 && report.violations == 0 && report.passed();
    verdict(
        9,
        "Hilbert set-perturbation bound",
        ok,
        &format!(
            " [grid exceptions = {exceptions}, instance violations = {}, min margin = {:.3e}]",
            report.violations,
            report.min_margin.unwrap()
        ),
    );
}

#[test]
fn criterion_10_composite_bound() {
    let report = run_suite(&suite_config(Suite::ThirdProblem, vec![2.0, 3.0], vec![2], 250)).unwrap();
    let mut ok = report.violations == 0 && report.passed();

    // sigma = 0 must reduce to the argument-perturbation bound bit-for-bit
    let l = FigielConstant::default();
    for &p in &[2.0, 3.0] {
        let space = SpaceSpec::new(2, p).unwrap();
        let mut rng = trial_rng(10, p, 2, 0);
        for _ in 0..50 {
            let set = harness::random_set(&mut rng, &space);
            let pair = SetPair {
                omega1: set.canonical(),
                omega2: set.canonical(),
                sigma: 0.0,
            };
            let x = Point::new(vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]);
            let dir = random_unit(&mut rng, &space);
            let y = x.add(&dir.scale(1e-3 * rng.gen_range(0.5..1.5)));
            let px = project_default(&space, &pair.omega1, &x).unwrap();
            let py = project_default(&space, &pair.omega1, &y).unwrap();
            let composite =
                third_problem_outcome(&space, &pair, &x, &y, &px, &py, &py, &l).unwrap();
            let argument =
                theorem1_outcome(&space, &pair.omega1, &x, &y, &px, &py, &l).unwrap();
            if composite.rhs != argument.rhs || composite.lhs != argument.lhs {
                ok = false;
            }
        }
    }
    verdict(
        10,
        "composite bound",
        ok,
        &format!(
            " [violations = {}, informative fraction = {:.3}]",
            report.violations, report.informative_fraction
        ),
    );
}

#[test]
fn criterion_11_determinism() {
    let mut config = suite_config(Suite::Theorem2, vec![3.0], vec![2], 100);
    config.record_trials = true;
    let a = run_suite(&config).unwrap().without_timing();
    let b = run_suite(&config).unwrap().without_timing();
    let ok = serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();
    verdict(11, "report determinism", ok, "");
}

// shared sanity: the comparison tolerance used throughout is positive
#[test]
fn comparison_tolerance_is_fixed() {
    assert_eq!(EPS_CMP, 1e-7);
    assert_eq!(projection::DEFAULT_TOL, 1e-10);
    assert_eq!(projection::DEFAULT_MAX_ITER, 50_000);
}
