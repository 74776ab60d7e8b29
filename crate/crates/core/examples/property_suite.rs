//! The seeded property suite, run from the library.
//!
//! `cargo run --release --example property_suite -- 42 100 8`

use oblique::cli::suite::run_suite;
use oblique::ToleranceProfile;

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer argument"));
    let seed = args.next().unwrap_or(42);
    let cases = args.next().unwrap_or(100);
    let dim = args.next().unwrap_or(8) as usize;

    let summary = run_suite(seed, cases, dim.max(2), &ToleranceProfile::default());
    for family in &summary.families {
        println!(
            "{:<16} {:>5}/{:<5} passed",
            family.name, family.passed, family.cases
        );
        for failure in family.failures.iter().take(3) {
            println!(
                "    case {} (n = {}): {}",
                failure.index, failure.n, failure.reason
            );
        }
    }
    println!(
        "{} cases, {} failures",
        summary.total_cases, summary.total_failures
    );
}
