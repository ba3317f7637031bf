//! Acceptance battery: one line per criterion. Set TMZV_ACCEPT_VERBOSE=1 for per-check output.

use std::time::Instant;

use tmzv::suites::{run, Suite, SuiteConfig};

fn main() {
    let cfg = SuiteConfig::default();
    let verbose = std::env::var("TMZV_ACCEPT_VERBOSE").is_ok_and(|v| v == "1");
    let mut failed = 0;
    for suite in Suite::ALL {
        let start = Instant::now();
        let rep = run(suite, &cfg);
        let secs = start.elapsed().as_secs_f64();
        let bad = rep.checks.iter().filter(|c| !c.passed).count();
        println!(
            "criterion {} [{}] {}: {}/{} checks, tolerance {}, {:.1}s",
            rep.criterion,
            rep.suite,
            if rep.passed { "PASS" } else { "FAIL" },
            rep.checks.len() - bad,
            rep.checks.len(),
            rep.tolerance,
            secs
        );
        for c in rep.checks.iter().filter(|c| verbose || !c.passed) {
            println!("    {} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
        if !rep.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
