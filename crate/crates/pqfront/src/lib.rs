//! Numerical laboratory for monotone heteroclinic traveling fronts of the
//! one-dimensional reaction-diffusion equation
//!
//! ```text
//! u_t = (|u_x|^{p-2} u_x + |u_x|^{q-2} u_x)_x + f(u),      2 <= q <= p,
//! ```
//!
//! where the diffusion is driven by a (p,q)-Laplacian operator and `f` is a
//! Fisher-type reaction (`f(0) = f(H) = 0`, `f > 0` in between). Searching for
//! monotone fronts `u(t,x) = v(x + ct)` and taking `v` as the independent
//! variable reduces the profile equation to the scalar two-point problem
//!
//! ```text
//! y' = c R(y) - f(v),     y(0) = 0 = y(1),   y > 0 on (0,1),
//! ```
//!
//! with `y = Q(v')`, `Q` the gradient-flux primitive and `R` its inverse.
//! The crate provides:
//!
//! - [`operator`]: `Q`, its inverse `R`, invertibility threshold of the
//!   competitive variant, and the power-law asymptotics of `R`;
//! - [`reaction`]: reaction families on `[0, H]`, the slope constants that
//!   enter the speed bounds, and the rescaling to the unit interval;
//! - [`bounds`]: closed-form lower/upper bounds for the critical speed `c*`
//!   plus a numerically sharpened upper bound from the subsolution criterion;
//! - [`shooting`]: backward integration of the reduced problem, admissibility
//!   classification, and bisection bracketing of `c*`;
//! - [`profile`]: reconstruction of the wave profile `u(z)` from an
//!   admissible shoot and tail-decay diagnostics;
//! - [`pdesim`]: explicit finite-difference simulation of the full PDE used
//!   to cross-validate predicted speeds;
//! - [`cli`]: the `pqfront` command-line front end (subcommands `bounds`,
//!   `classify`, `critical-speed`, `profile`, `simulate`, `figure`, `sweep`).
//!
//! Every computation is a pure function of its inputs; parameter sweeps can
//! run concurrently without shared state.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod interp;
pub mod ode;
pub mod operator;
pub mod pdesim;
pub mod profile;
pub mod reaction;
pub mod shooting;

pub use bounds::{BoundSet, CompetitiveBounds, CplusCase};
pub use operator::{Mode, Operator, OperatorError};
pub use profile::WaveProfile;
pub use reaction::{Reaction, ReactionError};
pub use shooting::{CriticalSpeedResult, ShootOutcome, ShootSettings, SpeedClass};
