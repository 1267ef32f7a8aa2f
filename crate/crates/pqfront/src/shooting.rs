//! Backward shooting on the reduced first-order problem and bisection
//! bracketing of the critical speed.
//!
//! A speed `c` is admissible exactly when the backward Cauchy problem
//!
//! ```text
//! y' = c R(y) - f(v),      y(1) = 0,
//! ```
//!
//! integrated from `v = 1` down to `v = 0`, arrives at `y(0) = 0`. The sign
//! of `f` keeps the solution positive inside `(0, 1)`, and larger `c`
//! presses it down pointwise, so `y(0)` is non-increasing in `c` and the
//! admissible speeds form an upper half-line: bisection applies. The
//! terminal point is degenerate (`R` is not Lipschitz at 0 and `f(1) = 0`),
//! so the integration starts from a regularized seed `y(1) = seed_delta`;
//! every classification is double-checked at half the seed, and speeds
//! whose `y(0)` lands between the admit and reject thresholds are reported
//! as indeterminate rather than guessed.
//!
//! The integrator runs on the rescaled variable `t = H - v`; shoots over a
//! general `[0, H]` interval are supported directly (they are the same ODE),
//! while classification and bracketing insist on the unit-rescaled problem
//! because their thresholds are calibrated there.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundError, BoundSet, CompetitiveBounds};
use crate::ode::{self, OdeError, OdeSettings};
use crate::operator::{Mode, Operator};
use crate::reaction::Reaction;

#[derive(Debug, Error)]
pub enum ShootError {
    #[error("integration step underflow at v = {v:.6} (c = {c})")]
    StepUnderflow { c: f64, v: f64 },
    #[error("integration step budget exhausted at v = {v:.6} (c = {c})")]
    StepBudget { c: f64, v: f64 },
    #[error("non-finite state during backward shoot at v = {v:.6} (c = {c})")]
    NonFinite { c: f64, v: f64 },
    #[error(
        "classification of c = {c} is indeterminate: y(0) = {y_full:.3e} (seed) vs {y_half:.3e} \
         (half seed) falls between zero_tol and promote_tol; adjust tolerances"
    )]
    Indeterminate { c: f64, y_full: f64, y_half: f64 },
    #[error("operation requires the unit-rescaled problem (H = 1), got H = {h}; rescale first")]
    NotUnitScaled { h: f64 },
    #[error("bracket expansion exceeded {limit:.3} without finding an admissible speed; \
             this signals a tolerance or seed problem, not a mathematical one")]
    BracketFailure { c_hi: f64, limit: f64 },
    #[error("{operation} does not apply to {mode} mode")]
    WrongMode { operation: &'static str, mode: Mode },
    #[error(transparent)]
    Bounds(#[from] BoundError),
}

/// Tolerances and knobs for the shooting pipeline. The defaults match the
/// values used throughout the test suite; `zero_tol` and `promote_tol`
/// refer to `y(0)` of the unit-rescaled problem and are kept two orders of
/// magnitude apart so seed perturbations cannot flip a classification.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShootSettings {
    /// Regularized terminal value `y(1)`.
    pub seed_delta: f64,
    /// `y(0)` at or below this is admissible.
    pub zero_tol: f64,
    /// `y(0)` above this is inadmissible; in between is indeterminate.
    pub promote_tol: f64,
    /// Absolute integration tolerance.
    pub abs_tol: f64,
    /// Relative integration tolerance.
    pub rel_tol: f64,
    /// Relative width of the final bisection bracket.
    pub bisect_tol: f64,
    /// Number of points of the uniform output grid.
    pub samples: usize,
    /// Number of speeds tried by a competitive window scan.
    pub scan_points: usize,
    /// Upper end of the window scan; defaults to 1.5x the larger of the
    /// sandwich upper end and the well-posedness cap.
    pub scan_cap: Option<f64>,
    /// How many times the bisection bracket may double past the analytic
    /// upper bound before giving up.
    pub max_doublings: u32,
}

impl Default for ShootSettings {
    fn default() -> Self {
        Self {
            seed_delta: 1e-12,
            zero_tol: 1e-6,
            promote_tol: 1e-4,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            bisect_tol: 1e-4,
            samples: 2048,
            scan_points: 33,
            scan_cap: None,
            max_doublings: 10,
        }
    }
}

/// Admissibility of one speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedClass {
    Admissible,
    Inadmissible,
    /// Competitive mode only: the shoot left the invertibility region of Q.
    DomainBreach,
}

impl std::fmt::Display for SpeedClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpeedClass::Admissible => write!(f, "admissible"),
            SpeedClass::Inadmissible => write!(f, "inadmissible"),
            SpeedClass::DomainBreach => write!(f, "domain_breach"),
        }
    }
}

/// One sampled point of a backward shoot; `phi = R(y)` is the gradient of
/// the corresponding profile.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShootSample {
    pub v: f64,
    pub y: f64,
    pub phi: f64,
}

/// A backward shoot at one speed, resampled onto a uniform `v`-grid.
#[derive(Debug, Clone, Serialize)]
pub struct ShootOutcome {
    pub c: f64,
    /// Ascending in `v`; spans `[v_stop, H]` (with `v_stop > 0` only after
    /// a domain breach).
    pub samples: Vec<ShootSample>,
    /// `y(0)`; absent when the shoot stopped early.
    pub y_at_zero: Option<f64>,
    pub classification: SpeedClass,
    pub max_y: f64,
    /// Smallest `v` reached.
    pub v_stop: f64,
}

/// Critical-speed bracket together with the analytic bounds it was checked
/// against and the tolerances that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalSpeedResult {
    pub c_star: f64,
    pub bracket: (f64, f64),
    pub bounds: BoundSet,
    pub iterations: u32,
    pub zero_tol: f64,
    pub seed_delta: f64,
}

/// Row of a competitive speed scan. Unlike [`SpeedClass`] this keeps
/// indeterminate outcomes visible instead of failing the whole scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanOutcome {
    Admissible,
    Inadmissible,
    DomainBreach,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanRow {
    pub c: f64,
    pub outcome: ScanOutcome,
    pub max_y: f64,
    pub y_at_zero: Option<f64>,
}

/// Result of scanning speeds in competitive mode. `interval` spans the
/// admissible speeds found; `contiguous` records whether they formed one
/// unbroken run of the scan grid.
#[derive(Debug, Clone, Serialize)]
pub struct WindowScan {
    pub rows: Vec<ScanRow>,
    pub interval: Option<(f64, f64)>,
    pub contiguous: bool,
    pub bounds: CompetitiveBounds,
}

struct RawShoot {
    steps: Vec<ode::OdeStep>,
    breached: bool,
    max_y: f64,
    h: f64,
}

fn map_ode_err(e: OdeError, c: f64, h: f64) -> ShootError {
    match e {
        OdeError::StepUnderflow { t, .. } => ShootError::StepUnderflow { c, v: h - t },
        OdeError::StepBudget { t, .. } => ShootError::StepBudget { c, v: h - t },
        OdeError::NonFinite { t } => ShootError::NonFinite { c, v: h - t },
    }
}

/// Integrate the backward problem with reaction values supplied by a
/// closure. Factored out so degenerate right-hand sides (`f = 0`) can be
/// exercised directly in tests.
fn shoot_raw<F>(
    op: &Operator,
    f: F,
    h: f64,
    c: f64,
    settings: &ShootSettings,
    seed: f64,
) -> Result<RawShoot, ShootError>
where
    F: Fn(f64) -> f64,
{
    assert!(c >= 0.0, "backward shooting expects a nonnegative speed");
    let (_, y_max) = op.invertibility_limit();
    let rhs = |t: f64, y: f64| f(h - t) - c * op.r_saturating(y);
    let ode_settings = OdeSettings {
        abs_tol: settings.abs_tol,
        rel_tol: settings.rel_tol,
        floor: Some(0.0),
        // Keep the accepted steps dense enough for accurate Hermite
        // resampling onto the output grid.
        h_max: Some(h / 1024.0),
        ..OdeSettings::default()
    };
    let traj = ode::integrate(rhs, 0.0, h, seed, &ode_settings, |_, y| y > y_max)
        .map_err(|e| map_ode_err(e, c, h))?;
    let max_y = traj.steps.iter().map(|s| s.y).fold(0.0f64, f64::max);
    Ok(RawShoot { breached: traj.stopped_early, max_y, steps: traj.steps, h })
}

/// Backward shoot at speed `c` over `[0, H]` from the regularized seed
/// `y(H) = seed_delta`. Competitive shoots stop with a domain breach as
/// soon as `y` exceeds the invertibility limit.
pub fn integrate_backward(
    op: &Operator,
    r: &Reaction,
    c: f64,
    settings: &ShootSettings,
) -> Result<ShootOutcome, ShootError> {
    let raw = shoot_raw(op, |v| r.eval_clamped(v), r.h(), c, settings, settings.seed_delta)?;
    let h = raw.h;
    let t_last = raw.steps.last().expect("at least the seed step").t;
    let v_stop = h - t_last;
    let n = settings.samples.max(2);
    let ts: Vec<f64> = (0..n).map(|i| t_last * i as f64 / (n - 1) as f64).collect();
    let ys = ode::resample(&raw.steps, &ts);
    let mut samples: Vec<ShootSample> = ts
        .iter()
        .zip(ys.iter())
        .map(|(&t, &y)| {
            let y = y.max(0.0);
            ShootSample { v: h - t, y, phi: op.r_saturating(y) }
        })
        .collect();
    samples.reverse();

    let (y_at_zero, classification) = if raw.breached {
        (None, SpeedClass::DomainBreach)
    } else {
        let y0 = raw.steps.last().unwrap().y.max(0.0);
        let class = if y0 <= settings.zero_tol {
            SpeedClass::Admissible
        } else {
            SpeedClass::Inadmissible
        };
        (Some(y0), class)
    };

    Ok(ShootOutcome {
        c,
        samples,
        y_at_zero,
        classification,
        max_y: raw.max_y,
        v_stop: if raw.breached { v_stop } else { 0.0 },
    })
}

fn require_unit(r: &Reaction) -> Result<(), ShootError> {
    if (r.h() - 1.0).abs() > 1e-12 {
        Err(ShootError::NotUnitScaled { h: r.h() })
    } else {
        Ok(())
    }
}

enum Robust {
    Class(SpeedClass),
    Indeterminate { y_full: f64, y_half: f64 },
}

fn classify_robust(
    op: &Operator,
    r: &Reaction,
    c: f64,
    settings: &ShootSettings,
) -> Result<Robust, ShootError> {
    let full = integrate_backward(op, r, c, settings)?;
    let half = ShootSettings { seed_delta: settings.seed_delta / 2.0, ..*settings };
    let half = integrate_backward(op, r, c, &half)?;
    if full.classification == SpeedClass::DomainBreach
        || half.classification == SpeedClass::DomainBreach
    {
        return Ok(Robust::Class(SpeedClass::DomainBreach));
    }
    let y_full = full.y_at_zero.unwrap();
    let y_half = half.y_at_zero.unwrap();
    if y_full > settings.promote_tol && y_half > settings.promote_tol {
        return Ok(Robust::Class(SpeedClass::Inadmissible));
    }
    // Below the promote threshold the raw value of y(0) cannot decide on
    // its own: approaching the critical speed from below, the true y(0)
    // stays positive but collapses through every fixed tolerance. What
    // distinguishes it from an admissible shoot is seed independence: an
    // inadmissible speed has a genuine positive limit that both seeds
    // reproduce, while at an admissible speed y(0) sits at the integration
    // noise floor and scatters with the seed. The floor itself scales with
    // the seed (the backward contraction leaves a residual of a few times
    // seed_delta) and with the absolute integration tolerance.
    let noise_floor = (50.0 * settings.abs_tol).max(50.0 * settings.seed_delta);
    let seed_converged = y_full >= noise_floor
        && y_half >= noise_floor
        && (y_full - y_half).abs() <= 0.1 * y_full.max(y_half);
    if seed_converged {
        return Ok(Robust::Class(SpeedClass::Inadmissible));
    }
    if y_full <= settings.zero_tol && y_half <= settings.zero_tol {
        Ok(Robust::Class(SpeedClass::Admissible))
    } else {
        Ok(Robust::Indeterminate { y_full, y_half })
    }
}

/// Classify one speed of the unit-rescaled problem, robust against the
/// seed regularization: the verdict must agree at `seed_delta` and
/// `seed_delta / 2`, otherwise the speed is reported indeterminate. A
/// seed-independent positive `y(0)` counts as inadmissible even below
/// `zero_tol` (see `classify_robust`).
pub fn classify_speed(
    op: &Operator,
    r: &Reaction,
    c: f64,
    settings: &ShootSettings,
) -> Result<SpeedClass, ShootError> {
    require_unit(r)?;
    match classify_robust(op, r, c, settings)? {
        Robust::Class(class) => Ok(class),
        Robust::Indeterminate { y_full, y_half } => {
            Err(ShootError::Indeterminate { c, y_full, y_half })
        }
    }
}

/// Bracket the critical speed of the unit-rescaled cooperative or single-q
/// problem by bisection between the analytic bounds. The right end doubles
/// past the analytic upper bound when tolerance artifacts leave it
/// misclassified; indeterminate midpoints count as not-yet-admissible so
/// the returned `c_star` is always a speed that classified admissibly.
pub fn critical_speed(
    op: &Operator,
    r: &Reaction,
    settings: &ShootSettings,
) -> Result<CriticalSpeedResult, ShootError> {
    require_unit(r)?;
    if op.mode() == Mode::Competitive {
        return Err(ShootError::WrongMode { operation: "critical_speed", mode: op.mode() });
    }
    let (l0, lplus) = r.slope_limits();
    let bounds = bounds::bound_set(op, l0, lplus);
    let lower = bounds
        .lower
        .ok_or(BoundError::UndefinedBound { name: "L0", value: l0 })?;
    let upper = bounds
        .upper_analytic
        .ok_or(BoundError::UndefinedBound { name: "L+", value: lplus })?;

    let mut iterations = 0u32;
    let mut admissible = |c: f64| -> Result<bool, ShootError> {
        iterations += 1;
        Ok(matches!(
            classify_robust(op, r, c, settings)?,
            Robust::Class(SpeedClass::Admissible)
        ))
    };

    if admissible(lower)? {
        return Ok(CriticalSpeedResult {
            c_star: lower,
            bracket: (lower, lower),
            bounds,
            iterations,
            zero_tol: settings.zero_tol,
            seed_delta: settings.seed_delta,
        });
    }

    let mut c_lo = lower;
    let mut c_hi = upper;
    let limit = upper * 2.0f64.powi(settings.max_doublings as i32);
    while !admissible(c_hi)? {
        // Admissible speeds form an upper half-line, so an inadmissible
        // right end is also a valid new left end.
        c_lo = c_hi;
        c_hi *= 2.0;
        if c_hi > limit {
            return Err(ShootError::BracketFailure { c_hi, limit });
        }
    }
    while c_hi - c_lo > settings.bisect_tol * c_hi {
        let mid = 0.5 * (c_lo + c_hi);
        if admissible(mid)? {
            c_hi = mid;
        } else {
            c_lo = mid;
        }
    }

    Ok(CriticalSpeedResult {
        c_star: c_hi,
        bracket: (c_lo, c_hi),
        bounds,
        iterations,
        zero_tol: settings.zero_tol,
        seed_delta: settings.seed_delta,
    })
}

/// Scan speeds of the unit-rescaled competitive problem between the
/// analytic lower bound and a cap, classifying each one. Domain breaches
/// are recorded per row (inadmissibility by degeneration); an empty result
/// is a valid answer.
pub fn competitive_window(
    op: &Operator,
    r: &Reaction,
    settings: &ShootSettings,
) -> Result<WindowScan, ShootError> {
    require_unit(r)?;
    if op.mode() != Mode::Competitive {
        return Err(ShootError::WrongMode { operation: "competitive_window", mode: op.mode() });
    }
    let (l0, lplus) = r.slope_limits();
    if !lplus.is_finite() {
        return Err(ShootError::Bounds(BoundError::UndefinedBound { name: "L+", value: lplus }));
    }
    let cb = bounds::competitive_bounds(op, l0.max(0.0), lplus)?;
    let c_from = cb.c_lower;
    let mut cap = settings
        .scan_cap
        .unwrap_or(1.5 * cb.c_upper_for_cstar.max(cb.c_max));
    if cap <= c_from {
        cap = 1.5 * c_from + 0.5;
    }
    let n = settings.scan_points.max(2);
    let speeds: Vec<f64> =
        (0..n).map(|i| c_from + (cap - c_from) * i as f64 / (n - 1) as f64).collect();

    let rows: Vec<ScanRow> = speeds
        .par_iter()
        .map(|&c| -> Result<ScanRow, ShootError> {
            let full = integrate_backward(op, r, c, settings)?;
            let outcome = match classify_robust(op, r, c, settings)? {
                Robust::Class(SpeedClass::Admissible) => ScanOutcome::Admissible,
                Robust::Class(SpeedClass::Inadmissible) => ScanOutcome::Inadmissible,
                Robust::Class(SpeedClass::DomainBreach) => ScanOutcome::DomainBreach,
                Robust::Indeterminate { .. } => ScanOutcome::Indeterminate,
            };
            Ok(ScanRow { c, outcome, max_y: full.max_y, y_at_zero: full.y_at_zero })
        })
        .collect::<Result<_, _>>()?;

    let admissible_idx: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, row)| row.outcome == ScanOutcome::Admissible)
        .map(|(i, _)| i)
        .collect();
    let (interval, contiguous) = match (admissible_idx.first(), admissible_idx.last()) {
        (Some(&first), Some(&last)) => {
            let contiguous = last - first + 1 == admissible_idx.len();
            (Some((rows[first].c, rows[last].c)), contiguous)
        }
        _ => (None, true),
    };

    Ok(WindowScan { rows, interval, contiguous, bounds: cb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Operator;
    use crate::reaction::Reaction;

    fn fisher_like(op: &Operator, h: f64) -> Reaction {
        // f(u) = u^{q'-1}(H - u), the reference reaction of the figure configs.
        Reaction::power_logistic(op.q_conj() - 1.0, 1.0, h, op.q_conj()).unwrap()
    }

    #[test]
    fn zero_reaction_decays_from_seed() {
        let op = Operator::cooperative(4.0, 2.0).unwrap();
        let settings = ShootSettings::default();
        let raw = shoot_raw(&op, |_| 0.0, 1.0, 1.5, &settings, settings.seed_delta).unwrap();
        assert!(!raw.breached);
        let y0 = raw.steps.last().unwrap().y;
        assert!(y0 <= settings.seed_delta, "y(0) = {y0:e} must not exceed the seed");
        // Seed zero gives the zero solution exactly.
        let raw = shoot_raw(&op, |_| 0.0, 1.0, 1.5, &settings, 0.0).unwrap();
        assert_eq!(raw.steps.last().unwrap().y, 0.0);
        assert_eq!(raw.max_y, 0.0);
    }

    #[test]
    fn classify_around_known_bounds() {
        let op = Operator::cooperative(4.0, 2.0).unwrap();
        let r = fisher_like(&op, 1.0);
        let settings = ShootSettings::default();
        // Above the apparent critical speed.
        assert_eq!(classify_speed(&op, &r, 2.5, &settings).unwrap(), SpeedClass::Admissible);
        // Below the analytic lower bound 2: guaranteed inadmissible.
        assert_eq!(classify_speed(&op, &r, 1.0, &settings).unwrap(), SpeedClass::Inadmissible);
    }

    #[test]
    fn interior_positivity_and_monotonicity_in_c() {
        let op = Operator::cooperative(4.0, 2.0).unwrap();
        let r = fisher_like(&op, 1.0);
        let settings = ShootSettings::default();
        let mut prev_y0 = f64::INFINITY;
        for c in [1.0, 1.5, 2.0, 2.5, 3.0] {
            let out = integrate_backward(&op, &r, c, &settings).unwrap();
            for s in &out.samples[1..out.samples.len() - 1] {
                assert!(s.y > 0.0, "interior sample y({}) = {} at c={c}", s.v, s.y);
            }
            let y0 = out.y_at_zero.unwrap();
            assert!(
                y0 <= prev_y0 * (1.0 + 1e-6) + 1e-12,
                "y(0) must be non-increasing in c: {y0:e} after {prev_y0:e}"
            );
            prev_y0 = y0;
        }
    }

    #[test]
    fn seed_robustness_on_reference_config() {
        let op = Operator::cooperative(4.0, 2.0).unwrap();
        let r = fisher_like(&op, 1.0);
        let settings = ShootSettings::default();
        for c in [1.5, 2.5] {
            let full = integrate_backward(&op, &r, c, &settings).unwrap();
            let half = ShootSettings { seed_delta: settings.seed_delta / 2.0, ..settings };
            let half = integrate_backward(&op, &r, c, &half).unwrap();
            let (a, b) = (full.y_at_zero.unwrap(), half.y_at_zero.unwrap());
            assert!(
                (a - b).abs() < 0.1 * settings.zero_tol,
                "halving the seed moved y(0) by {:e} at c={c}",
                (a - b).abs()
            );
        }
    }

    #[test]
    fn competitive_admissible_stays_invertible() {
        // p=4, q=2, f = u(1-u), c = 2: admissible with y well below y_max = 1/12.
        let op = Operator::competitive(4.0, 2.0).unwrap();
        let r = fisher_like(&op, 1.0);
        let settings = ShootSettings::default();
        let out = integrate_backward(&op, &r, 2.0, &settings).unwrap();
        assert_eq!(out.classification, SpeedClass::Admissible);
        assert!(out.max_y < 1.0 / 12.0, "max_y = {} must stay below 1/12", out.max_y);
        assert_eq!(classify_speed(&op, &r, 2.0, &settings).unwrap(), SpeedClass::Admissible);
    }

    #[test]
    fn competitive_large_equilibrium_breaches() {
        // f = u(4-u) on [0,4] rescaled to the unit problem; the H-problem
        // speed 2 sqrt(4) = 4 maps to 16.
        let op = Operator::competitive(4.0, 2.0).unwrap();
        let r = fisher_like(&op, 4.0);
        let scaled = r.rescale_to_unit();
        let c_unit = scaled.speed_factor * 4.0;
        let settings = ShootSettings::default();
        let out = integrate_backward(&op, &scaled.reaction, c_unit, &settings).unwrap();
        assert_eq!(out.classification, SpeedClass::DomainBreach);
        assert!(out.v_stop > 0.0);
        assert!(out.y_at_zero.is_none());
        assert_eq!(
            classify_speed(&op, &scaled.reaction, c_unit, &settings).unwrap(),
            SpeedClass::DomainBreach
        );
    }

    #[test]
    fn critical_speed_single_q_fisher() {
        let op = Operator::single_q(2.0).unwrap();
        let r = Reaction::classical_logistic(1.0, 1.0, 2.0).unwrap();
        let result = critical_speed(&op, &r, &ShootSettings::default()).unwrap();
        assert!(
            (result.c_star - 2.0).abs() <= 1e-3,
            "classical Fisher critical speed: got {}",
            result.c_star
        );
        assert!(result.bracket.1 - result.bracket.0 <= 1e-4 * result.bracket.1 + 1e-12);
    }

    #[test]
    fn critical_speed_rejects_bad_inputs() {
        let op = Operator::competitive(4.0, 2.0).unwrap();
        let r = fisher_like(&op, 1.0);
        assert!(matches!(
            critical_speed(&op, &r, &ShootSettings::default()),
            Err(ShootError::WrongMode { .. })
        ));
        let op = Operator::cooperative(4.0, 2.0).unwrap();
        let r = fisher_like(&op, 7.0);
        assert!(matches!(
            critical_speed(&op, &r, &ShootSettings::default()),
            Err(ShootError::NotUnitScaled { .. })
        ));
        // Divergent L0 (gamma < q'-1) refuses the bracket.
        let r = Reaction::power_logistic(0.5, 1.0, 1.0, 2.0).unwrap();
        assert!(matches!(
            critical_speed(&op, &r, &ShootSettings::default()),
            Err(ShootError::Bounds(BoundError::UndefinedBound { .. }))
        ));
    }

    #[test]
    fn window_scan_finds_admissible_speeds() {
        let op = Operator::competitive(4.0, 2.0).unwrap();
        let r = fisher_like(&op, 1.0);
        let scan = competitive_window(&op, &r, &ShootSettings::default()).unwrap();
        let (lo, hi) = scan.interval.expect("c = 2 must be admissible");
        assert!(lo <= 2.0 + 1e-9 && hi >= 2.0);
        assert!(scan.bounds.window_empty, "analytic window is empty, shooting is not");
    }

    #[test]
    fn window_scan_empty_on_breaching_config() {
        let op = Operator::competitive(4.0, 2.0).unwrap();
        let scaled = fisher_like(&op, 4.0).rescale_to_unit();
        let scan = competitive_window(&op, &scaled.reaction, &ShootSettings::default()).unwrap();
        assert!(scan.interval.is_none(), "no admissible speed expected");
        assert!(scan
            .rows
            .iter()
            .all(|row| row.outcome != ScanOutcome::Admissible));
        assert!(scan
            .rows
            .iter()
            .any(|row| row.outcome == ScanOutcome::DomainBreach));
    }
}
