//! Running the randomized verification suites from code: configure, run in
//! parallel, and inspect the aggregated report.
//!
//! Run with: cargo run --example verify_suites

use banachproj::{run_suite, Suite, SuiteConfig};

fn main() -> banachproj::Result<()> {
    for suite in [
        Suite::DualityIdentities,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Figiel,
        Suite::Theorem2,
        Suite::HilbertF9,
    ] {
        let mut config = SuiteConfig::new(suite);
        config.p = if suite == Suite::HilbertF9 {
            vec![2.0]
        } else {
            vec![2.0, 3.0]
        };
        config.dim = vec![2, 4];
        config.trials = 200;
        config.seed = 42;
        let report = run_suite(&config)?;
        println!(
            "{:<20} trials = {:>4}  violations = {}  informative = {:.2}  \
             min margin = {:>12}  solver failures = {}",
            report.suite,
            report.trials_run,
            report.violations,
            report.informative_fraction,
            report
                .min_margin
                .map(|m| format!("{m:.3e}"))
                .unwrap_or_else(|| "-".into()),
            report.solver_failures,
        );
        assert!(report.passed(), "suite {} failed", report.suite);
    }
    println!("all suites passed");
    Ok(())
}
