//! The competitive operator (|u'|^{q-2}u' - |u'|^{p-2}u')': fronts exist
//! only while the shoot stays inside the invertibility region of Q. For
//! f = u(1-u) the speed c = 2 is admissible with plenty of margin; for
//! f = u(4-u) every scanned speed breaches the region and no front exists.
//!
//! ```bash
//! cargo run --release --example competitive_window
//! ```

use pqfront::operator::Operator;
use pqfront::reaction::Reaction;
use pqfront::shooting::{competitive_window, ShootSettings};

fn main() {
    let op = Operator::competitive(4.0, 2.0).unwrap();
    let (s0, y_max) = op.invertibility_limit();
    println!("competitive p=4, q=2: invertible up to s0 = {s0:.5}, y_max = {y_max:.5}");

    for h in [1.0, 4.0] {
        let r = Reaction::power_logistic(1.0, 1.0, h, op.q_conj()).unwrap();
        let scaled = r.rescale_to_unit();
        let scan = competitive_window(&op, &scaled.reaction, &ShootSettings::default()).unwrap();
        println!();
        println!(
            "H = {h}: sandwich [{:.4}, {:.4}] (unit problem), window cap {:.4}{}",
            scan.bounds.c_lower,
            scan.bounds.c_upper_for_cstar,
            scan.bounds.c_max,
            if scan.bounds.window_empty { " — analytic window empty" } else { "" }
        );
        match scan.interval {
            Some((lo, hi)) => println!(
                "  shooting finds admissible speeds in [{:.4}, {:.4}] (H-problem: [{:.4}, {:.4}])",
                lo,
                hi,
                lo / h,
                hi / h
            ),
            None => println!("  shooting finds no admissible speed"),
        }
        let breaches = scan
            .rows
            .iter()
            .filter(|row| row.outcome == pqfront::shooting::ScanOutcome::DomainBreach)
            .count();
        println!("  {breaches}/{} scanned speeds left the invertibility region", scan.rows.len());
    }
}
