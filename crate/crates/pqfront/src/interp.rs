//! Shape-preserving piecewise-cubic interpolation on a uniform grid
//! (Fritsch-Carlson slope limiting, as in PCHIP).
//!
//! The profile reconstruction feeds the sampled shoot `y(v)` through this
//! interpolant; shape preservation matters there because overshoot below
//! zero would put `R(y)` outside its domain.

/// Monotone (shape-preserving) cubic interpolant over a uniform grid.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x0: f64,
    dx: f64,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// Build from nodes `x0 + i*dx` spanning `[x0, x1]`, `ys.len() >= 2`.
    pub fn uniform(x0: f64, x1: f64, ys: &[f64]) -> Self {
        let n = ys.len();
        assert!(n >= 2, "need at least two nodes");
        assert!(x1 > x0);
        let dx = (x1 - x0) / (n - 1) as f64;
        let delta: Vec<f64> = ys.windows(2).map(|w| (w[1] - w[0]) / dx).collect();
        let mut d = vec![0.0; n];

        let far_left = if n >= 3 { delta[1] } else { delta[0] };
        let far_right = if n >= 3 { delta[n - 3] } else { delta[n - 2] };
        d[0] = endpoint_slope(delta[0], far_left);
        d[n - 1] = endpoint_slope(delta[n - 2], far_right);
        for i in 1..n - 1 {
            let (dl, dr) = (delta[i - 1], delta[i]);
            d[i] = if dl * dr <= 0.0 {
                0.0
            } else {
                // Harmonic mean of the adjacent secants; guarantees the
                // Fritsch-Carlson monotonicity region on a uniform grid.
                2.0 * dl * dr / (dl + dr)
            };
        }
        // Endpoint slopes must not exceed three times the boundary secant.
        clamp_endpoint(&mut d[0], delta[0]);
        let last_delta = delta[n - 2];
        clamp_endpoint(&mut d[n - 1], last_delta);

        Self { x0, dx, y: ys.to_vec(), d }
    }

    /// Evaluate at `x`, clamped to the grid range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let xr = (x - self.x0) / self.dx;
        if xr <= 0.0 {
            return self.y[0];
        }
        if xr >= (n - 1) as f64 {
            return self.y[n - 1];
        }
        let i = (xr.floor() as usize).min(n - 2);
        let s = xr - i as f64;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        h00 * self.y[i] + h10 * self.dx * self.d[i] + h01 * self.y[i + 1]
            + h11 * self.dx * self.d[i + 1]
    }
}

fn endpoint_slope(d_near: f64, d_far: f64) -> f64 {
    // Standard PCHIP one-sided three-point estimate on a uniform grid.
    let slope = 1.5 * d_near - 0.5 * d_far;
    if slope * d_near <= 0.0 {
        0.0
    } else {
        slope
    }
}

fn clamp_endpoint(d: &mut f64, delta: f64) {
    if delta == 0.0 {
        *d = 0.0;
    } else if *d / delta > 3.0 {
        *d = 3.0 * delta;
    }
}
