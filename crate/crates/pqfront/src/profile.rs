//! Wave-profile reconstruction from an admissible backward shoot.
//!
//! Once the reduced problem has a solution `y(v)` on `[0, 1]`, the front
//! itself is recovered, up to translation, from
//!
//! ```text
//! du/dz = R(y(u)),       u(0) = 1/2,
//! ```
//!
//! integrated in both directions until the tails enter `[0, tail_tol]` and
//! `[1 - tail_tol, 1]`. The profile is defined and strictly monotone on
//! the whole line whenever `f` admits a linear cap `f(s) <= k(1-s)`, so the
//! truncation is purely numerical. The sampled shoot is interpolated with
//! a shape-preserving cubic so `y` stays nonnegative along the way.

use serde::Serialize;
use thiserror::Error;

use crate::interp::MonotoneCubic;
use crate::ode::{self, OdeSettings};
use crate::operator::Operator;
use crate::shooting::{ShootOutcome, SpeedClass};

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("profile reconstruction requires an admissible shoot, got {0:?}")]
    NotAdmissible(SpeedClass),
    #[error("shoot does not cover the full interval (v_stop = {v_stop}); cannot reconstruct")]
    IncompleteShoot { v_stop: f64 },
    #[error("tail_tol = {0} must lie in (0, 1)")]
    InvalidTailTol(f64),
    #[error("not enough tail samples below u = {threshold} for a decay fit (need {needed}, have {have})")]
    NotAvailable { threshold: f64, needed: usize, have: usize },
    #[error("integration failed during reconstruction: {0}")]
    Integration(#[from] ode::OdeError),
}

/// One sampled point of the reconstructed front.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfileSample {
    pub z: f64,
    pub u: f64,
    pub du_dz: f64,
}

/// A reconstructed traveling front `u(z)`, strictly increasing, anchored at
/// `u(0) = 1/2` and truncated where the tails pass `tail_tol`.
#[derive(Debug, Clone, Serialize)]
pub struct WaveProfile {
    pub c: f64,
    /// Ascending in `z`, containing the anchor sample exactly.
    pub samples: Vec<ProfileSample>,
    pub z_span: (f64, f64),
    pub tail_tol: f64,
    /// Set when the shoot interpolant had to be clamped up to zero.
    pub clamped_negative_y: bool,
}

impl WaveProfile {
    /// Linear interpolation of `u` at `z`, clamped to the end states
    /// outside the truncated span. Used to lay the profile onto PDE grids.
    pub fn sample_at(&self, z: f64) -> f64 {
        let s = &self.samples;
        if z <= s[0].z {
            return s[0].u;
        }
        if z >= s[s.len() - 1].z {
            return s[s.len() - 1].u;
        }
        let mut lo = 0;
        let mut hi = s.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if s[mid].z <= z {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = (z - s[lo].z) / (s[hi].z - s[lo].z);
        s[lo].u + t * (s[hi].u - s[lo].u)
    }
}

const Z_HARD_CAP: f64 = 1e4;
const RESAMPLE_PER_SIDE: usize = 1024;

/// Reconstruct the profile anchored at `u(0) = 1/2`.
pub fn reconstruct_profile(
    op: &Operator,
    shoot: &ShootOutcome,
    tail_tol: f64,
) -> Result<WaveProfile, ProfileError> {
    reconstruct_profile_anchored(op, shoot, tail_tol, 0.5)
}

/// Reconstruction with a custom anchor value `u(0) = anchor` (the standard
/// normalization is 1/2).
pub fn reconstruct_profile_anchored(
    op: &Operator,
    shoot: &ShootOutcome,
    tail_tol: f64,
    anchor: f64,
) -> Result<WaveProfile, ProfileError> {
    if shoot.classification != SpeedClass::Admissible {
        return Err(ProfileError::NotAdmissible(shoot.classification));
    }
    if shoot.v_stop != 0.0 {
        return Err(ProfileError::IncompleteShoot { v_stop: shoot.v_stop });
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(ProfileError::InvalidTailTol(tail_tol));
    }
    assert!(anchor > 0.0 && anchor < 1.0);

    let v_last = shoot.samples.last().expect("nonempty shoot").v;
    let ys: Vec<f64> = shoot.samples.iter().map(|s| s.y).collect();
    let interp = MonotoneCubic::uniform(0.0, v_last, &ys);
    let mut clamped = false;
    let rhs_of = |u: f64| -> f64 {
        let y = interp.eval(u.clamp(0.0, 1.0));
        op.r_saturating(y.max(0.0))
    };
    // Detect whether clamping was ever needed (shape preservation should
    // prevent it, but a warning flag is cheap to carry).
    for i in 0..=400 {
        if interp.eval(i as f64 / 400.0) < 0.0 {
            clamped = true;
            break;
        }
    }

    if tail_tol >= 0.5 {
        // The two tolerance bands meet at the midpoint: degenerate profile.
        let s = ProfileSample { z: 0.0, u: anchor, du_dz: rhs_of(anchor) };
        return Ok(WaveProfile {
            c: shoot.c,
            samples: vec![s],
            z_span: (0.0, 0.0),
            tail_tol,
            clamped_negative_y: clamped,
        });
    }

    let ode_settings = OdeSettings {
        abs_tol: 1e-13,
        rel_tol: 1e-10,
        h_max: Some(0.05),
        ..OdeSettings::default()
    };

    // Rightward: du/dz = R(y(u)) until u enters [1 - tail_tol, 1].
    let up = 1.0 - tail_tol;
    let fwd = ode::integrate(|_, u| rhs_of(u), 0.0, Z_HARD_CAP, anchor, &ode_settings, |_, u| {
        u >= up
    })?;
    // Leftward: flip the axis, dz -> -dz.
    let bwd = ode::integrate(
        |_, u| -rhs_of(u),
        0.0,
        Z_HARD_CAP,
        anchor,
        &ode_settings,
        |_, u| u <= tail_tol,
    )?;

    let z_max = fwd.last().t;
    let z_min = -bwd.last().t;

    // Resample each side onto a uniform grid that contains z = 0 exactly.
    let mut samples = Vec::with_capacity(2 * RESAMPLE_PER_SIDE - 1);
    let n = RESAMPLE_PER_SIDE;
    let left_ts: Vec<f64> = (0..n).map(|i| -z_min * i as f64 / (n - 1) as f64).collect();
    let left_us = ode::resample(&bwd.steps, &left_ts);
    for i in (1..n).rev() {
        let u = left_us[i].clamp(0.0, 1.0);
        samples.push(ProfileSample { z: -left_ts[i], u, du_dz: rhs_of(u) });
    }
    samples.push(ProfileSample { z: 0.0, u: anchor, du_dz: rhs_of(anchor) });
    let right_ts: Vec<f64> = (0..n).map(|i| z_max * i as f64 / (n - 1) as f64).collect();
    let right_us = ode::resample(&fwd.steps, &right_ts);
    for i in 1..n {
        let u = right_us[i].clamp(0.0, 1.0);
        samples.push(ProfileSample { z: right_ts[i], u, du_dz: rhs_of(u) });
    }

    // Monotone by construction (du/dz > 0); drop any flat rounding
    // duplicates so the stored profile is strictly increasing.
    let mut cleaned: Vec<ProfileSample> = Vec::with_capacity(samples.len());
    for s in samples {
        match cleaned.last() {
            Some(prev) if s.u <= prev.u => {}
            _ => cleaned.push(s),
        }
    }

    Ok(WaveProfile {
        c: shoot.c,
        samples: cleaned,
        z_span: (z_min, z_max),
        tail_tol,
        clamped_negative_y: clamped,
    })
}

/// Fit log-linear decay rates of the two tails: `u ~ e^{rate_left z}` as
/// `z -> -inf` and `1 - u ~ e^{-rate_right z}` as `z -> +inf`. Diagnostic
/// only; degenerate diffusion can make the true tails algebraic or even
/// compactly supported, in which case the fitted rate is just an effective
/// slope.
pub fn tail_exponents(profile: &WaveProfile) -> Result<(f64, f64), ProfileError> {
    // Window of tail amplitudes used for the fit. The lower edge stays two
    // decades above the zero_tol floor left in the shoot (which would
    // otherwise bend the deep tail), the upper edge keeps the nonlinear
    // correction at the percent level.
    const FIT_MIN: f64 = 3e-3;
    const FIT_MAX: f64 = 3e-2;
    const MIN_SAMPLES: usize = 8;
    if profile.tail_tol > 1e-3 {
        return Err(ProfileError::NotAvailable {
            threshold: FIT_MAX,
            needed: MIN_SAMPLES,
            have: 0,
        });
    }
    let left: Vec<(f64, f64)> = profile
        .samples
        .iter()
        .filter(|s| s.u >= FIT_MIN && s.u <= FIT_MAX)
        .map(|s| (s.z, s.u.ln()))
        .collect();
    let right: Vec<(f64, f64)> = profile
        .samples
        .iter()
        .filter(|s| 1.0 - s.u >= FIT_MIN && 1.0 - s.u <= FIT_MAX)
        .map(|s| (s.z, (1.0 - s.u).ln()))
        .collect();
    for side in [&left, &right] {
        if side.len() < MIN_SAMPLES {
            return Err(ProfileError::NotAvailable {
                threshold: FIT_MAX,
                needed: MIN_SAMPLES,
                have: side.len(),
            });
        }
    }
    let rate_left = lsq_slope(&left);
    let rate_right = -lsq_slope(&right);
    Ok((rate_left, rate_right))
}

fn lsq_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
