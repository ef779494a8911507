//! Prints the feasible level counts for the default family.
//!
//! `cargo run --release --example levels -- 10`

use touching_lines::{run_search, ForbiddenFamily, SearchOptions};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let fam = ForbiddenFamily::default_family();
    let report = run_search(&fam, n, &SearchOptions::default()).expect("search runs");
    for (stats, t) in report.levels.iter().zip(&report.timings) {
        println!("F{:<2} {:>6}  ({:.3}s)", stats.k, stats.count, t.seconds);
    }
    println!("{:?}", report.verdict);
}
