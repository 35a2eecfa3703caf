//! One pass/fail line per acceptance criterion; tolerances live in `suites`.

use std::time::Instant;
use weighted_fourier_cli::suites::{self, NAMES};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for name in NAMES {
        let start = Instant::now();
        let r = suites::run(name).expect("known suite");
        println!("{}  [{:.1}s]", r.line(), start.elapsed().as_secs_f64());
        if !r.pass {
            failed.push(r.criterion);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
