//! Fisher-type reaction terms on `[0, H]`.
//!
//! A reaction `f` vanishes at the equilibria `0` and `H` and is strictly
//! positive in between. The speed bounds consume two slope constants
//! measured against the critical power `u^{q'-1}`:
//!
//! ```text
//! L0 = lim_{s->0+} f(s)/s^{q'-1},      L+ = sup_{(0,H]} f(s)/s^{q'-1},
//! ```
//!
//! plus, on the unit-rescaled problem, the smallest `k` with
//! `f(s) <= k(1-s)` (which is what guarantees globally defined profiles).
//! Reactions on `[0, H]` reduce to the unit interval through
//! `g(v) = H f(Hv)`; a front of speed `c` for the `H`-problem corresponds
//! to speed `H c` for the rescaled one, and the slope constants pick up the
//! factor `H^{q'}`.

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReactionError {
    #[error("u = {u} outside the reaction domain [0, {h}]")]
    DomainError { u: f64, h: f64 },
    #[error("invalid reaction parameters: {0}")]
    InvalidParams(String),
    #[error("operation requires the unit-rescaled problem (H = 1), got H = {h}")]
    NotUnitScaled { h: f64 },
    #[error("tabulated reaction rejected: {0}")]
    InvalidTable(String),
    #[error("failed to read tabulated reaction: {0}")]
    Io(#[from] std::io::Error),
}

/// Built-in reaction families plus tabulated data.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    /// `f(u) = a u^gamma (H - u)`; the figures use `gamma = q' - 1`.
    PowerLogistic { gamma: f64, amplitude: f64 },
    /// `f(u) = a u (H - u)`.
    ClassicalLogistic { amplitude: f64 },
    /// Piecewise-linear interpolation of `(u, f)` pairs.
    Tabulated { u: Vec<f64>, f: Vec<f64> },
}

/// A Fisher-type reaction together with the conjugate exponent `q'`
/// against which its slopes are measured.
#[derive(Debug, Clone, Serialize)]
pub struct Reaction {
    #[serde(flatten)]
    family: Family,
    h: f64,
    q_conj: f64,
}

/// Result of [`Reaction::rescale_to_unit`]: the reaction `g(v) = H f(Hv)`
/// on `[0, 1]` and the factor mapping `H`-problem speeds to unit-problem
/// speeds (`c_unit = speed_factor * c`).
#[derive(Debug, Clone)]
pub struct UnitScaled {
    pub reaction: Reaction,
    pub speed_factor: f64,
}

fn check_common(h: f64, q_conj: f64) -> Result<(), ReactionError> {
    if !h.is_finite() || h <= 0.0 {
        return Err(ReactionError::InvalidParams(format!("H must be positive, got {h}")));
    }
    if !q_conj.is_finite() || q_conj <= 1.0 || q_conj > 2.0 {
        return Err(ReactionError::InvalidParams(format!(
            "q' must lie in (1, 2] (q >= 2), got {q_conj}"
        )));
    }
    Ok(())
}

impl Reaction {
    pub fn power_logistic(gamma: f64, amplitude: f64, h: f64, q_conj: f64) -> Result<Self, ReactionError> {
        check_common(h, q_conj)?;
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(ReactionError::InvalidParams(format!("gamma must be positive, got {gamma}")));
        }
        if !amplitude.is_finite() || amplitude <= 0.0 {
            return Err(ReactionError::InvalidParams(format!(
                "amplitude must be positive, got {amplitude}"
            )));
        }
        Ok(Self { family: Family::PowerLogistic { gamma, amplitude }, h, q_conj })
    }

    pub fn classical_logistic(amplitude: f64, h: f64, q_conj: f64) -> Result<Self, ReactionError> {
        check_common(h, q_conj)?;
        if !amplitude.is_finite() || amplitude <= 0.0 {
            return Err(ReactionError::InvalidParams(format!(
                "amplitude must be positive, got {amplitude}"
            )));
        }
        Ok(Self { family: Family::ClassicalLogistic { amplitude }, h, q_conj })
    }

    /// Tabulated reaction: strictly increasing `u` from 0 to `H`, zero at
    /// both endpoints, strictly positive inside.
    pub fn tabulated(u: Vec<f64>, f: Vec<f64>, q_conj: f64) -> Result<Self, ReactionError> {
        if u.len() != f.len() {
            return Err(ReactionError::InvalidTable("u and f columns differ in length".into()));
        }
        if u.len() < 3 {
            return Err(ReactionError::InvalidTable("need at least 3 rows".into()));
        }
        if u[0] != 0.0 {
            return Err(ReactionError::InvalidTable(format!("u must start at 0, got {}", u[0])));
        }
        for w in u.windows(2) {
            if w[1] <= w[0] || w[1].is_nan() {
                return Err(ReactionError::InvalidTable(format!(
                    "u must be strictly increasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        let h = *u.last().unwrap();
        check_common(h, q_conj)?;
        let f_scale = f.iter().cloned().fold(0.0f64, f64::max);
        if !f_scale.is_finite() || f_scale <= 0.0 {
            return Err(ReactionError::InvalidTable("f must be positive somewhere".into()));
        }
        let mut f = f;
        for (i, fv) in f.iter_mut().enumerate() {
            let interior = i > 0 && i < u.len() - 1;
            if interior {
                if *fv <= 0.0 || fv.is_nan() {
                    return Err(ReactionError::InvalidTable(format!(
                        "f must be strictly positive inside (0, H); f({}) = {}",
                        u[i], fv
                    )));
                }
            } else if fv.abs() <= 1e-12 * f_scale {
                *fv = 0.0; // snap near-zero endpoints to the equilibria
            } else {
                return Err(ReactionError::InvalidTable(format!(
                    "f must vanish at the endpoints; f({}) = {}",
                    u[i], fv
                )));
            }
        }
        Ok(Self { family: Family::Tabulated { u, f }, h, q_conj })
    }

    /// Load a tabulated reaction from a two-column CSV with header `u,f`.
    pub fn tabulated_from_csv<P: AsRef<Path>>(path: P, q_conj: f64) -> Result<Self, ReactionError> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| ReactionError::InvalidTable("empty file".into()))?
            .trim();
        if header != "u,f" {
            return Err(ReactionError::InvalidTable(format!(
                "expected header 'u,f', got '{header}'"
            )));
        }
        let mut us = Vec::new();
        let mut fs = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64, ReactionError> {
                s.ok_or_else(|| {
                    ReactionError::InvalidTable(format!("line {}: missing column", lineno + 2))
                })?
                .trim()
                .parse::<f64>()
                .map_err(|e| ReactionError::InvalidTable(format!("line {}: {e}", lineno + 2)))
            };
            us.push(parse(cols.next())?);
            fs.push(parse(cols.next())?);
        }
        Self::tabulated(us, fs, q_conj)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn q_conj(&self) -> f64 {
        self.q_conj
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `f(u)` on `[0, H]`; values outside the domain are an error.
    pub fn evaluate(&self, u: f64) -> Result<f64, ReactionError> {
        if !(0.0..=self.h).contains(&u) {
            return Err(ReactionError::DomainError { u, h: self.h });
        }
        Ok(self.eval_inner(u))
    }

    /// `f` with the argument clamped into `[0, H]`; integrators use this so
    /// round-off excursions past the equilibria read the equilibrium value.
    pub fn eval_clamped(&self, u: f64) -> f64 {
        self.eval_inner(u.clamp(0.0, self.h))
    }

    fn eval_inner(&self, u: f64) -> f64 {
        match &self.family {
            Family::PowerLogistic { gamma, amplitude } => {
                amplitude * u.powf(*gamma) * (self.h - u)
            }
            Family::ClassicalLogistic { amplitude } => amplitude * u * (self.h - u),
            Family::Tabulated { u: us, f: fs } => {
                // binary search for the bracketing segment
                let i = match us.binary_search_by(|x| x.partial_cmp(&u).unwrap()) {
                    Ok(i) => return fs[i],
                    Err(i) => i.clamp(1, us.len() - 1),
                };
                let t = (u - us[i - 1]) / (us[i] - us[i - 1]);
                fs[i - 1] + t * (fs[i] - fs[i - 1])
            }
        }
    }

    /// The slope constants `(L0, L+)` of `f(s)/s^{q'-1}`. A divergent limit
    /// is reported as `+inf` and a vanishing one as `0`; the bound formulas
    /// downstream refuse the corresponding estimate.
    pub fn slope_limits(&self) -> (f64, f64) {
        let alpha = self.q_conj - 1.0;
        match &self.family {
            Family::PowerLogistic { gamma, amplitude } => {
                self.power_slopes(*gamma, *amplitude, alpha)
            }
            Family::ClassicalLogistic { amplitude } => self.power_slopes(1.0, *amplitude, alpha),
            Family::Tabulated { .. } => {
                let l0 = self.tabulated_l0(alpha);
                let lplus = self.tabulated_lplus(alpha, l0);
                (l0, lplus)
            }
        }
    }

    fn power_slopes(&self, gamma: f64, a: f64, alpha: f64) -> (f64, f64) {
        let delta = gamma - alpha;
        if delta.abs() <= 1e-12 {
            // ratio = a (H - s): limit and sup both a*H
            let l = a * self.h;
            (l, l)
        } else if delta > 0.0 {
            // ratio = a s^delta (H - s): vanishes at 0, interior maximum
            let s_star = delta * self.h / (delta + 1.0);
            let lplus = a * s_star.powf(delta) * (self.h - s_star);
            (0.0, lplus)
        } else {
            (f64::INFINITY, f64::INFINITY)
        }
    }

    /// Richardson-style limit probe: the quotient is evaluated at three
    /// scales near zero and accepted when the spread is below 1%; a strong
    /// monotone trend instead flags the limit as 0 or divergent.
    fn tabulated_l0(&self, alpha: f64) -> f64 {
        let probes = [1e-3, 1e-4, 1e-5].map(|eps| {
            let s = self.h * eps;
            self.eval_inner(s) / s.powf(alpha)
        });
        let [r1, r2, r3] = probes;
        let mid = r2.abs().max(1e-300);
        let spread = probes.iter().cloned().fold(f64::MIN, f64::max)
            - probes.iter().cloned().fold(f64::MAX, f64::min);
        if spread <= 0.01 * mid {
            r3
        } else if r3 > r2 && r2 > r1 && r3 > 2.0 * r1 {
            f64::INFINITY
        } else if r3 < r2 && r2 < r1 && r3 < 0.5 * r1 {
            0.0
        } else {
            r3
        }
    }

    /// Sup of the quotient: best point of a 10^4 uniform grid refined by
    /// golden-section search in its neighbourhood.
    fn tabulated_lplus(&self, alpha: f64, l0: f64) -> f64 {
        if !l0.is_finite() {
            return f64::INFINITY;
        }
        const N: usize = 10_000;
        let ratio = |s: f64| self.eval_inner(s) / s.powf(alpha);
        let mut best_i = 1;
        let mut best = f64::MIN;
        for i in 1..=N {
            let s = self.h * i as f64 / N as f64;
            let r = ratio(s);
            if r > best {
                best = r;
                best_i = i;
            }
        }
        let lo = self.h * (best_i.saturating_sub(1)) as f64 / N as f64;
        let hi = self.h * (best_i + 1).min(N) as f64 / N as f64;
        let refined = golden_max(ratio, lo.max(self.h * 1e-9), hi);
        refined.max(l0)
    }

    /// Smallest `k` with `f(s) <= k(1-s)` on `[0, 1]` (unit-rescaled
    /// problems only). A finite `k` is what guarantees the reconstructed
    /// profile is defined on the whole line.
    pub fn linear_cap_k(&self) -> Result<f64, ReactionError> {
        if (self.h - 1.0).abs() > 1e-12 {
            return Err(ReactionError::NotUnitScaled { h: self.h });
        }
        match &self.family {
            // f/(1-s) = a s^gamma, increasing: sup = a at s = 1.
            Family::PowerLogistic { gamma: _, amplitude } => Ok(*amplitude),
            Family::ClassicalLogistic { amplitude } => Ok(*amplitude),
            Family::Tabulated { u: us, f: fs } => {
                let mut k: f64 = 0.0;
                for i in 1..us.len() - 1 {
                    k = k.max(fs[i] / (1.0 - us[i]));
                }
                // Right-endpoint limit f(s)/(1-s) -> |f'(1)| from the last segment.
                let n = us.len();
                let slope = (fs[n - 1] - fs[n - 2]) / (us[n - 1] - us[n - 2]);
                Ok(k.max(slope.abs()))
            }
        }
    }

    /// Rescale to the unit interval: `g(v) = H f(Hv)` with the induced speed
    /// map `c -> H c`. Slope constants transform as `H^{q'} (L0, L+)`.
    pub fn rescale_to_unit(&self) -> UnitScaled {
        let h = self.h;
        let reaction = match &self.family {
            Family::PowerLogistic { gamma, amplitude } => Reaction {
                family: Family::PowerLogistic {
                    gamma: *gamma,
                    amplitude: amplitude * h.powf(gamma + 2.0),
                },
                h: 1.0,
                q_conj: self.q_conj,
            },
            Family::ClassicalLogistic { amplitude } => Reaction {
                family: Family::ClassicalLogistic { amplitude: amplitude * h.powi(3) },
                h: 1.0,
                q_conj: self.q_conj,
            },
            Family::Tabulated { u, f } => Reaction {
                family: Family::Tabulated {
                    u: u.iter().map(|x| x / h).collect(),
                    f: f.iter().map(|y| y * h).collect(),
                },
                h: 1.0,
                q_conj: self.q_conj,
            },
        };
        UnitScaled { reaction, speed_factor: h }
    }
}

/// Golden-section search for the maximum of a unimodal-enough function on
/// `[lo, hi]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-12 * b.abs().max(1.0) {
            break;
        }
    }
    fc.max(fd)
}
