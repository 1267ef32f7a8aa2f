//! Cross-validate a reduced-problem speed against the full PDE: lay the
//! reconstructed profile onto a grid, advance u_t = (flux)_x + f(u) with
//! the explicit scheme, track the half-level crossing and fit its drift.
//!
//! ```bash
//! cargo run --release --example pde_validation
//! ```

use pqfront::operator::Operator;
use pqfront::pdesim::{profile_initial, run, GridSpec};
use pqfront::profile::reconstruct_profile;
use pqfront::reaction::Reaction;
use pqfront::shooting::{critical_speed, integrate_backward, ShootSettings};

fn main() {
    let op = Operator::cooperative(2.0, 2.0).unwrap();
    let r = Reaction::classical_logistic(1.0, 1.0, op.q_conj()).unwrap();
    let settings = ShootSettings::default();

    let c_star = critical_speed(&op, &r, &settings).unwrap().c_star;
    let c = c_star + 0.5;
    println!("doubled p=q=2: c* = {c_star:.5}, validating the profile at c = {c:.5}");

    let shoot = integrate_backward(&op, &r, c, &settings).unwrap();
    let profile = reconstruct_profile(&op, &shoot, 1e-6).unwrap();

    // Moderate resolution keeps this example quick; the acceptance suite
    // runs the same check at nx = 4000.
    let grid = GridSpec {
        x_min: -35.0,
        x_max: 35.0,
        nx: 1400,
        dt: 1.0,
        t_end: 6.0,
        snapshot_stride: 400,
    };
    let u0 = profile_initial(&grid, &profile, 1.0);
    let out = run(&u0, &op, &r, &grid).unwrap();
    let fitted = out.track.fitted_speed.expect("front tracked");
    println!(
        "PDE run: {} steps, status {}, fitted front speed {:.5} ({:+.2}% of c)",
        out.steps_taken,
        out.status,
        fitted,
        100.0 * (fitted - c) / c
    );
    println!(
        "front drifts {} (increasing profiles travel toward negative x under z = x + ct)",
        if out.track.signed_slope.unwrap() < 0.0 { "leftward" } else { "rightward" }
    );
}
