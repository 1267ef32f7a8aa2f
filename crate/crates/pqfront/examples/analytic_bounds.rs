//! Evaluate every analytic and numeric speed bound for a few operator and
//! reaction-slope configurations, including the interaction case where the
//! numeric subsolution search genuinely sharpens the analytic formula.
//!
//! ```bash
//! cargo run --release --example analytic_bounds
//! ```

use pqfront::bounds::{bound_set, g_script, minimize_g_script};
use pqfront::operator::Operator;

fn main() {
    println!("{:<28} {:>9} {:>12} {:>7} {:>12}", "configuration", "lower", "upper (c+)", "case", "numeric c+");
    for (p, q, l) in [
        (4.0, 2.0, 1.0),
        (4.0, 2.0, 7.0),
        (3.0, 2.0, 1.0),
        (4.0, 3.0, 6.0), // interaction range: p+q-2 < L+ <= (p-1)(p+q-2)/(q-1)
        (5.0, 3.0, 30.0),
        (2.0, 2.0, 1.0), // doubled operator: both ends coincide when L0 = L+
        (3.0, 3.0, 1.0),
    ] {
        let op = Operator::cooperative(p, q).unwrap();
        let set = bound_set(&op, l, l);
        println!(
            "p={p:<4} q={q:<4} L0=L+={l:<6} {:>9.4} {:>12.4} {:>7} {:>12.4}",
            set.lower.unwrap(),
            set.upper_analytic.unwrap(),
            set.upper_case.unwrap().to_string(),
            set.upper_numeric.unwrap(),
        );
    }

    // The interaction case in detail: at the case-(i) speed the subsolution
    // functional has no nonpositive value, so that formula cannot certify
    // the speed and the piecewise bound jumps to the case-(ii) value.
    let op = Operator::cooperative(4.0, 3.0).unwrap();
    let lplus = 6.0f64;
    let c_i = f64::powf(lplus, 2.0 / 3.0) * 1.5 * 5.0f64.powf(1.0 / 3.0);
    let min = minimize_g_script(&op, lplus, c_i);
    println!();
    println!("interaction case p=4, q=3, L+=6:");
    println!("  case-(i) formula value:  c = {c_i:.5}");
    println!("  min_beta G_c(beta) there: {:+.5} at beta = {:.5} (positive: not certified)", min.value, min.beta);
    let min10 = minimize_g_script(&op, lplus, 10.0);
    println!("  at the case-(ii) value 10: {:+.5} at beta = {:.5}", min10.value, min10.beta);
    println!("  G_10(1) = {:+.3}", g_script(&op, lplus, 10.0, 1.0));
}
