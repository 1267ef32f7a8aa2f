//! Adaptive scalar ODE integration (Dormand-Prince 5(4) embedded pair).
//!
//! The reduced traveling-front problem and the profile reconstruction are
//! both scalar first-order equations, so the integrator works on `f64`
//! state. Accepted steps are recorded with their derivatives; trajectories
//! can be resampled onto arbitrary grids through cubic Hermite
//! interpolation of those records.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget of {max_steps} exhausted at t = {t}")]
    StepBudget { t: f64, max_steps: usize },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

/// Tolerances and guards for one integration.
#[derive(Debug, Clone, Copy)]
pub struct OdeSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
    /// Project accepted states below this value back onto it (used by the
    /// shooting module to keep `y >= 0` where the exact solution is
    /// nonnegative but rounding may dip below).
    pub floor: Option<f64>,
    /// Cap on the step size. Trajectories meant for cubic Hermite
    /// resampling need this: the interpolation error is O(h^4), so smooth
    /// stretches where the integrator would take huge steps must stay
    /// resolved.
    pub h_max: Option<f64>,
}

impl Default for OdeSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_steps: 2_000_000,
            floor: None,
            h_max: None,
        }
    }
}

/// One accepted integration step: state and derivative at `t`.
#[derive(Debug, Clone, Copy)]
pub struct OdeStep {
    pub t: f64,
    pub y: f64,
    pub dy: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub steps: Vec<OdeStep>,
    /// True when an event callback stopped the integration before `t1`.
    pub stopped_early: bool,
}

impl Trajectory {
    pub fn last(&self) -> &OdeStep {
        self.steps.last().expect("trajectory has at least the initial step")
    }
}

// Dormand-Prince 5(4) coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

/// Integrate `y' = rhs(t, y)` from `t0` to `t1 > t0`, recording accepted
/// steps. `stop` is checked after each accepted step; returning `true`
/// halts the integration early (the triggering step is kept).
pub fn integrate<F, E>(
    rhs: F,
    t0: f64,
    t1: f64,
    y0: f64,
    settings: &OdeSettings,
    mut stop: E,
) -> Result<Trajectory, OdeError>
where
    F: Fn(f64, f64) -> f64,
    E: FnMut(f64, f64) -> bool,
{
    assert!(t1 > t0, "integration interval must be forward-oriented");
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut dy = rhs(t, y);
    let mut steps = Vec::with_capacity(256);
    steps.push(OdeStep { t, y, dy });
    if stop(t, y) {
        return Ok(Trajectory { steps, stopped_early: true });
    }

    let h_cap = settings.h_max.unwrap_or(f64::INFINITY);
    let mut h = initial_step(&rhs, t0, y0, dy, span, settings).min(h_cap);
    let h_min = span * 1e-14;
    let mut n_steps = 0usize;

    while t < t1 {
        if n_steps >= settings.max_steps {
            return Err(OdeError::StepBudget { t, max_steps: settings.max_steps });
        }
        n_steps += 1;
        h = h.min(t1 - t);
        if h < h_min && t + h < t1 {
            return Err(OdeError::StepUnderflow { t, h });
        }

        let k1 = dy;
        let k2 = rhs(t + C2 * h, y + h * (A21 * k1));
        let k3 = rhs(t + C3 * h, y + h * (A31 * k1 + A32 * k2));
        let k4 = rhs(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = rhs(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        let k6 = rhs(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        let y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        let k7 = rhs(t + h, y_new);

        let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let scale = settings.abs_tol + settings.rel_tol * y.abs().max(y_new.abs());
        let err_norm = (err / scale).abs();

        if !y_new.is_finite() || !err_norm.is_finite() {
            // Retry with a much smaller step before giving up.
            h *= 0.1;
            if h < h_min {
                return Err(OdeError::NonFinite { t });
            }
            continue;
        }

        if err_norm <= 1.0 {
            t += h;
            y = y_new;
            if let Some(floor) = settings.floor {
                if y < floor {
                    y = floor;
                }
            }
            dy = if settings.floor.is_some() && y != y_new { rhs(t, y) } else { k7 };
            steps.push(OdeStep { t, y, dy });
            if stop(t, y) {
                return Ok(Trajectory { steps, stopped_early: true });
            }
        }

        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).min(h_cap);
    }

    Ok(Trajectory { steps, stopped_early: false })
}

/// Starting step size, following the usual two-stage heuristic: a first
/// guess from the magnitudes of state and slope, refined by an Euler probe
/// of the second derivative.
fn initial_step<F>(rhs: &F, t0: f64, y0: f64, dy0: f64, span: f64, settings: &OdeSettings) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let sc = settings.abs_tol + settings.rel_tol * y0.abs();
    let d0 = y0.abs() / sc;
    let d1 = dy0.abs() / sc;
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span
    } else {
        0.01 * (d0 / d1)
    };
    let h0 = h0.min(span);

    let y1 = y0 + h0 * dy0;
    let dy1 = rhs(t0 + h0, y1);
    let d2 = (dy1 - dy0).abs() / sc / h0;
    let d_max = d1.max(d2);
    let h1 = if d_max <= 1e-15 {
        (h0 * 1e-3).max(1e-6 * span)
    } else {
        (0.01 / d_max).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Resample a trajectory at the given ordered abscissae by cubic Hermite
/// interpolation on the accepted steps. Points outside the covered range
/// clamp to the nearest endpoint state.
pub fn resample(steps: &[OdeStep], ts: &[f64]) -> Vec<f64> {
    assert!(!steps.is_empty());
    let mut out = Vec::with_capacity(ts.len());
    let mut seg = 0usize;
    for &t in ts {
        if t <= steps[0].t {
            out.push(steps[0].y);
            continue;
        }
        if t >= steps[steps.len() - 1].t {
            out.push(steps[steps.len() - 1].y);
            continue;
        }
        while seg + 2 < steps.len() && steps[seg + 1].t < t {
            seg += 1;
        }
        // Resampling grids are ordered, but guard against a caller that is not.
        while seg > 0 && steps[seg].t > t {
            seg -= 1;
        }
        let a = &steps[seg];
        let b = &steps[seg + 1];
        let hseg = b.t - a.t;
        if hseg <= 0.0 {
            out.push(b.y);
            continue;
        }
        let s = (t - a.t) / hseg;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        out.push(h00 * a.y + h10 * hseg * a.dy + h01 * b.y + h11 * hseg * b.dy);
    }
    out
}
