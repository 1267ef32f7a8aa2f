//! Bracket the critical front speed by backward shooting for the reference
//! configuration p = 4, q = 2, f(u) = u(1-u), and compare against the
//! analytic sandwich.
//!
//! ```bash
//! cargo run --release --example critical_speed
//! ```

use pqfront::operator::Operator;
use pqfront::reaction::Reaction;
use pqfront::shooting::{critical_speed, ShootSettings};

fn main() {
    for (p, q) in [(4.0, 2.0), (3.0, 2.0), (5.0, 3.0), (2.0, 2.0)] {
        let op = Operator::cooperative(p, q).unwrap();
        // f(u) = u^{q'-1}(1-u): slope constants L0 = L+ = 1.
        let r = Reaction::power_logistic(op.q_conj() - 1.0, 1.0, 1.0, op.q_conj()).unwrap();
        let result = critical_speed(&op, &r, &ShootSettings::default()).unwrap();
        println!(
            "p={p}, q={q}: c* = {:.6} in [{:.6}, {:.6}], sandwich [{:.4}, {:.4}], {} shots",
            result.c_star,
            result.bracket.0,
            result.bracket.1,
            result.bounds.lower.unwrap(),
            result.bounds.upper_analytic.unwrap(),
            result.iterations
        );
    }

    // Doubled operator with L0 = L+ has an exact critical speed.
    let op = Operator::cooperative(2.0, 2.0).unwrap();
    let r = Reaction::classical_logistic(1.0, 1.0, op.q_conj()).unwrap();
    let result = critical_speed(&op, &r, &ShootSettings::default()).unwrap();
    println!(
        "doubled p=q=2: c* = {:.8} (2*sqrt(2) = {:.8})",
        result.c_star,
        2.0 * 2.0f64.sqrt()
    );
}
