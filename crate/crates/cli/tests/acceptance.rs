//! The eight acceptance criteria, one pass/fail line each. Runs without the
//! libtest harness so every line is printed.

use std::process::ExitCode;
use std::time::Instant;

use hecke_cli::checks::{run, CRITERIA};

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    for &(id, _, _) in CRITERIA.iter() {
        let t = Instant::now();
        let o = run(id);
        println!("{}  ({:.1}s)", o.line(), t.elapsed().as_secs_f64());
        failed += usize::from(o.result.is_err());
    }
    println!("acceptance: {} of {} criteria passed in {:.1}s", CRITERIA.len() - failed, CRITERIA.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
