//! Runs the full property suite on an instance file (or a random instance)
//! and prints one line per check.
//!
//! cargo run --release --example verify_suite -- [instance.json]

use obliv_match::analysis::suite::{run_suite, SuiteConfig};
use obliv_match::io::read_instance;
use obliv_match::{generate_random, WeightDist};

fn main() -> Result<(), obliv_match::Error> {
    let (inst, real) = match std::env::args().nth(1) {
        Some(path) => read_instance(path)?,
        None => generate_random(
            8,
            8,
            &WeightDist::Uniform {
                low: 0.0,
                high: 1.0,
            },
            0.5,
            11,
        )?,
    };
    let config = SuiteConfig {
        trials: 2_000,
        ..SuiteConfig::default()
    };
    let report = run_suite(&inst, &real, &config)?;
    for r in &report.rows {
        println!(
            "{:<5} {:<21} {:<22} observed {:>12.4e}  threshold {:>12.4e}",
            if r.pass { "ok" } else { "FAIL" },
            r.check,
            r.subject,
            r.observed,
            r.threshold
        );
    }
    println!(
        "{}",
        if report.pass() {
            "all checks passed"
        } else {
            "some checks failed"
        }
    );
    Ok(())
}
