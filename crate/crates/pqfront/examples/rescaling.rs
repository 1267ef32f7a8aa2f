//! The rescaling identity between the problem on [0, H] and the unit
//! problem: y_c(u) solves the H-problem iff w(v) = y_c(Hv) solves the unit
//! problem with speed Hc and reaction g(v) = H f(Hv). For the pure
//! q-Laplacian the critical-speed formula is invariant under this map.
//!
//! ```bash
//! cargo run --release --example rescaling
//! ```

use pqfront::operator::Operator;
use pqfront::reaction::Reaction;
use pqfront::shooting::{critical_speed, integrate_backward, ShootSettings};

fn main() {
    let op = Operator::single_q(2.0).unwrap();
    let h = 7.0;
    let r = Reaction::power_logistic(1.0, 1.0, h, op.q_conj()).unwrap();
    let scaled = r.rescale_to_unit();
    let settings = ShootSettings::default();

    let (l0, lp) = r.slope_limits();
    let (m0, mp) = scaled.reaction.slope_limits();
    println!("slopes: H-problem ({l0}, {lp}), unit problem ({m0}, {mp}) = H^q' * ({l0}, {lp})");

    let c = 2.0 * h.sqrt();
    let shoot_h = integrate_backward(&op, &r, c, &settings).unwrap();
    let shoot_unit =
        integrate_backward(&op, &scaled.reaction, scaled.speed_factor * c, &settings).unwrap();
    let max_diff = shoot_h
        .samples
        .iter()
        .zip(shoot_unit.samples.iter())
        .map(|(a, b)| (a.y - b.y).abs())
        .fold(0.0f64, f64::max);
    println!("max |w(v) - y(Hv)| over the shared grid: {max_diff:.3e}");

    let result = critical_speed(&op, &scaled.reaction, &settings).unwrap();
    println!(
        "critical speed: unit problem {:.6}, mapped back {:.6}, formula 2*sqrt(L) = {:.6}",
        result.c_star,
        result.c_star / scaled.speed_factor,
        2.0 * h.sqrt()
    );
}
