//! Checks the Fourier inversion formula on every basis class for g = 1, 2, 3.
//!
//!     cargo run --release --example fm_inversion

use std::time::Instant;

use chow_orbits::fourier::check_inversion;

fn main() {
    for g in 1..=3 {
        let start = Instant::now();
        let report = check_inversion(g).expect("g is small");
        let failed = report.failures().count();
        println!(
            "g = {g}: {:>2} basis classes, {failed} failures, {:.1?}",
            report.entries.len(),
            start.elapsed()
        );
        for e in report.failures() {
            println!("  {} -> {} (expected {})", e.basis, e.image, e.expected);
        }
    }
}
