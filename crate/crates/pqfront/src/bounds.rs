//! Closed-form bounds for the critical front speed and the numerically
//! refined subsolution bound.
//!
//! The critical speed of the cooperative problem is sandwiched by
//!
//! ```text
//! L0^{1/q'} q'^{1/q'} q^{1/q}  <=  c*  <=  c+,
//! ```
//!
//! where `c+` is a three-case piecewise expression in `L+` (small, middle,
//! large reaction slope; only the middle case feels both powers at once).
//! For `p = q` both ends pick up a factor `2^{1/q}` and coincide when
//! `L0 = L+`, giving the exact critical speed. The upper bound comes from
//! the subsolution ansatz `y(u) = Q(beta u^{q'-1})`: the speed `c` is
//! certified admissible as soon as
//!
//! ```text
//! G_c(beta) = (p-1)/(q-1) beta^p + beta^q - c beta + L+  <=  0
//! ```
//!
//! for some `beta > 0`. Minimizing `G_c` in `beta` and bisecting in `c`
//! yields an upper bound at least as sharp as the analytic `c+` (the
//! analytic cases control `G_c` through a one-power majorant, which is why
//! they can be loose near the case boundaries).
//!
//! The competitive operator admits the same sandwich without the p-term,
//! but the certificate additionally needs `beta <= s0` to stay inside the
//! invertibility region; certified speeds are confined to the window
//! `[c*, q((q-1)/(p-1))^{(q-1)/(p-q)}]`, which may well be empty. The
//! window cap is sufficient-only: shooting can still find admissible
//! speeds outside it.

use serde::Serialize;
use thiserror::Error;

use crate::operator::{Mode, Operator};

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("{name} = {value} does not define a bound (need a finite positive value)")]
    UndefinedBound { name: &'static str, value: f64 },
    #[error("{operation} does not apply to {mode} mode")]
    WrongMode { operation: &'static str, mode: Mode },
    #[error("no subsolution certificate exists below the well-posedness cap c_max = {c_cap:.6}")]
    NoCertificate { c_cap: f64 },
}

/// Which branch of the piecewise upper bound applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CplusCase {
    /// `L+ <= p+q-2`: q-dominated branch.
    #[serde(rename = "case_i")]
    CaseI,
    /// `p+q-2 < L+ <= (p-1)(p+q-2)/(q-1)`: both powers interact.
    #[serde(rename = "case_ii")]
    CaseII,
    /// larger `L+`: p-dominated branch.
    #[serde(rename = "case_iii")]
    CaseIII,
    /// `p = q` collapse (cases i and iii coincide, case ii is empty).
    #[serde(rename = "pq_equal")]
    PqEqual,
    /// Pure q-Laplacian certificate.
    #[serde(rename = "single_q")]
    SingleQ,
    /// Competitive sandwich upper end.
    #[serde(rename = "competitive")]
    Competitive,
}

impl std::fmt::Display for CplusCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CplusCase::CaseI => write!(f, "(i)"),
            CplusCase::CaseII => write!(f, "(ii)"),
            CplusCase::CaseIII => write!(f, "(iii)"),
            CplusCase::PqEqual => write!(f, "p=q"),
            CplusCase::SingleQ => write!(f, "single-q"),
            CplusCase::Competitive => write!(f, "competitive"),
        }
    }
}

/// All analytic and numeric bounds for one configuration. Fields are absent
/// when the corresponding slope constant is zero or divergent, so callers
/// get one-sided information instead of a fabricated number.
#[derive(Debug, Clone, Serialize)]
pub struct BoundSet {
    pub lower: Option<f64>,
    pub upper_analytic: Option<f64>,
    pub upper_case: Option<CplusCase>,
    pub upper_numeric: Option<f64>,
    pub competitive: Option<CompetitiveBounds>,
}

/// The competitive-mode sandwich for `c*` and the admissibility window cap.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CompetitiveBounds {
    pub c_lower: f64,
    pub c_upper_for_cstar: f64,
    /// Right end of the certified window `[c*, c_max]`.
    pub c_max: f64,
    /// Set when `c_upper_for_cstar > c_max`, i.e. the certified window is
    /// empty by the analytic sandwich alone.
    pub window_empty: bool,
}

/// Location and value of the minimum of `G_c` over admissible `beta`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GScriptMin {
    pub beta: f64,
    pub value: f64,
}

fn q_certificate_threshold(op: &Operator, l: f64) -> f64 {
    let q = op.q();
    let qc = op.q_conj();
    l.powf(1.0 / qc) * qc.powf(1.0 / qc) * q.powf(1.0 / q)
}

fn require_positive(name: &'static str, value: f64) -> Result<f64, BoundError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(BoundError::UndefinedBound { name, value })
    }
}

/// Lower bound for the critical speed, `L0^{1/q'} q'^{1/q'} q^{1/q}`, valid
/// in every mode; the cooperative `p = q` case carries the extra `2^{1/q}`
/// of the doubled operator.
pub fn lower_bound(op: &Operator, l0: f64) -> Result<f64, BoundError> {
    let l0 = require_positive("L0", l0)?;
    let base = q_certificate_threshold(op, l0);
    if op.mode() == Mode::Cooperative && op.p() == op.q() {
        Ok(2.0f64.powf(1.0 / op.q()) * base)
    } else {
        Ok(base)
    }
}

/// The piecewise analytic upper bound `c+` of the cooperative problem.
pub fn upper_bound_cplus(op: &Operator, lplus: f64) -> Result<(f64, CplusCase), BoundError> {
    if op.mode() != Mode::Cooperative {
        return Err(BoundError::WrongMode { operation: "upper_bound_cplus", mode: op.mode() });
    }
    let lplus = require_positive("L+", lplus)?;
    let (p, q) = (op.p(), op.q());
    if p == q {
        let value = 2.0f64.powf(1.0 / q) * q_certificate_threshold(op, lplus);
        return Ok((value, CplusCase::PqEqual));
    }
    let t1 = p + q - 2.0;
    let t2 = (p - 1.0) / (q - 1.0) * t1;
    if lplus <= t1 {
        let value = lplus.powf(1.0 / op.q_conj()) * q / (q - 1.0) * t1.powf(1.0 / q);
        Ok((value, CplusCase::CaseI))
    } else if lplus <= t2 {
        Ok((p * t1 / (q - 1.0), CplusCase::CaseII))
    } else {
        let value = lplus.powf(1.0 / op.p_conj()) * p
            / ((q - 1.0).powf(1.0 / p) * (p - 1.0).powf((p - 1.0) / p))
            * t1.powf(1.0 / p);
        Ok((value, CplusCase::CaseIII))
    }
}

/// The subsolution functional. Cooperative mode evaluates the full
/// `G_c(beta)`; competitive and single-q modes use the u-independent
/// sufficient form `beta^q - c beta + L+` (the competitive p-term only
/// helps, so dropping it is sound).
pub fn g_script(op: &Operator, lplus: f64, c: f64, beta: f64) -> f64 {
    let (p, q) = (op.p(), op.q());
    let q_part = beta.powf(q) - c * beta + lplus;
    match op.mode() {
        Mode::Cooperative => (p - 1.0) / (q - 1.0) * beta.powf(p) + q_part,
        Mode::Competitive | Mode::SingleQ => q_part,
    }
}

/// Minimize `G_c` over its admissible `beta` range. `G_c` is strictly
/// convex for `beta > 0` (all exponents are >= 2), so the cooperative
/// stationarity equation has a unique root; it is found by Newton from the
/// minimizer of the one-power majorant as warm start, safeguarded by bisection on
/// `[1e-12, beta_cap]`. Competitive mode clamps the minimizer to the
/// invertibility region `beta <= s0`.
pub fn minimize_g_script(op: &Operator, lplus: f64, c: f64) -> GScriptMin {
    assert!(c > 0.0, "certificates only make sense for positive speeds");
    let (p, q) = (op.p(), op.q());
    let beta = match op.mode() {
        Mode::SingleQ => (c / q).powf(1.0 / (q - 1.0)),
        Mode::Competitive => {
            let (s0, _) = op.invertibility_limit();
            (c / q).powf(1.0 / (q - 1.0)).min(s0 * (1.0 - 1e-9))
        }
        Mode::Cooperative => {
            let dg = |b: f64| {
                p * (p - 1.0) / (q - 1.0) * b.powf(p - 1.0) + q * b.powf(q - 1.0) - c
            };
            let mut lo = 1e-12f64;
            let mut hi = (c * (q - 1.0) / (p - 1.0)).powf(1.0 / (p - 1.0)) + 1.0;
            debug_assert!(dg(lo) < 0.0 && dg(hi) > 0.0);
            let mut b = (c * (q - 1.0) / (q * (p + q - 2.0))).powf(1.0 / (q - 1.0)).clamp(lo, hi);
            for _ in 0..120 {
                let g1 = dg(b);
                if g1 == 0.0 {
                    break;
                }
                if g1 > 0.0 {
                    hi = b;
                } else {
                    lo = b;
                }
                let g2 = p * (p - 1.0) * (p - 1.0) / (q - 1.0) * b.powf(p - 2.0)
                    + q * (q - 1.0) * b.powf(q - 2.0);
                let newton = b - g1 / g2;
                b = if newton.is_finite() && newton > lo && newton < hi {
                    newton
                } else {
                    0.5 * (lo + hi)
                };
                if hi - lo <= 1e-14 * b.max(1e-30) {
                    break;
                }
            }
            b
        }
    };
    GScriptMin { beta, value: g_script(op, lplus, c, beta) }
}

/// Smallest speed (to 1e-6 absolute) whose subsolution certificate closes,
/// i.e. `min_beta G_c(beta) <= 0`, found by bisection in `c`. The left end
/// of the bracket is infeasible because `G_c` strictly dominates the pure
/// q-power functional whose threshold it is; the right end starts at the
/// analytic bound and is expanded by doubling if rounding leaves it
/// marginal. Competitive certificates past the well-posedness cap of the
/// admissibility window are rejected as no-certificate.
pub fn numeric_cplus(op: &Operator, lplus: f64) -> Result<f64, BoundError> {
    let lplus = require_positive("L+", lplus)?;
    let base = q_certificate_threshold(op, lplus);
    let feasible = |c: f64| minimize_g_script(op, lplus, c).value <= 0.0;

    let (mut lo, mut hi) = match op.mode() {
        Mode::Cooperative if op.p() > op.q() => {
            let (analytic, _) = upper_bound_cplus(op, lplus)?;
            (base, analytic * (1.0 + 1e-9))
        }
        Mode::Cooperative => {
            let (analytic, _) = upper_bound_cplus(op, lplus)?;
            (0.999 * analytic, analytic * (1.0 + 1e-9))
        }
        Mode::SingleQ => (0.999 * base, base * (1.0 + 1e-9)),
        Mode::Competitive => {
            let (s0, _) = op.invertibility_limit();
            let s_bar = s0 * (1.0 - 1e-9);
            let clamped = (s_bar.powf(op.q()) + lplus) / s_bar;
            (0.999 * base, base.max(clamped) * (1.0 + 1e-9))
        }
    };

    if feasible(lo) {
        return Ok(lo);
    }
    let hi_limit = hi * 1024.0;
    while !feasible(hi) {
        hi *= 2.0;
        if hi > hi_limit {
            return Err(BoundError::NoCertificate { c_cap: hi_limit });
        }
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    if op.mode() == Mode::Competitive {
        let cb = competitive_bounds(op, lplus, lplus)?;
        if hi > cb.c_max * (1.0 + 1e-9) {
            return Err(BoundError::NoCertificate { c_cap: cb.c_max });
        }
    }
    Ok(hi)
}

/// The competitive sandwich for `c*` together with the window cap
/// `c_max = q ((q-1)/(p-1))^{(q-1)/(p-q)}`. Degenerate slope constants
/// propagate through the formulas (`L0 -> 0` gives a vanishing lower end).
pub fn competitive_bounds(op: &Operator, l0: f64, lplus: f64) -> Result<CompetitiveBounds, BoundError> {
    if op.mode() != Mode::Competitive {
        return Err(BoundError::WrongMode { operation: "competitive_bounds", mode: op.mode() });
    }
    assert!(l0 >= 0.0 && lplus >= 0.0);
    let (p, q) = (op.p(), op.q());
    let c_lower = q_certificate_threshold(op, l0);
    let c_upper_for_cstar = q_certificate_threshold(op, lplus);
    let c_max = q * ((q - 1.0) / (p - 1.0)).powf((q - 1.0) / (p - q));
    Ok(CompetitiveBounds {
        c_lower,
        c_upper_for_cstar,
        c_max,
        window_empty: c_upper_for_cstar > c_max,
    })
}

/// Assemble every bound available for the given operator and slope
/// constants. Pieces whose hypotheses fail are simply absent.
pub fn bound_set(op: &Operator, l0: f64, lplus: f64) -> BoundSet {
    let lower = lower_bound(op, l0).ok();
    match op.mode() {
        Mode::Cooperative => {
            let analytic = upper_bound_cplus(op, lplus).ok();
            BoundSet {
                lower,
                upper_analytic: analytic.map(|(v, _)| v),
                upper_case: analytic.map(|(_, c)| c),
                upper_numeric: numeric_cplus(op, lplus).ok(),
                competitive: None,
            }
        }
        Mode::SingleQ => {
            let analytic = require_positive("L+", lplus)
                .map(|l| q_certificate_threshold(op, l))
                .ok();
            BoundSet {
                lower,
                upper_analytic: analytic,
                upper_case: analytic.map(|_| CplusCase::SingleQ),
                upper_numeric: numeric_cplus(op, lplus).ok(),
                competitive: None,
            }
        }
        Mode::Competitive => {
            let cb = competitive_bounds(op, l0.max(0.0), lplus.max(0.0)).ok();
            BoundSet {
                lower,
                upper_analytic: cb.map(|c| c.c_upper_for_cstar),
                upper_case: cb.map(|_| CplusCase::Competitive),
                upper_numeric: numeric_cplus(op, lplus).ok(),
                competitive: cb,
            }
        }
    }
}
