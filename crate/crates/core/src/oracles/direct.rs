//! Fully resolved simulation of `u_t + (u^3)_x = eps u_xx + delta eps^2 u_xxx`
//! with second-order central differences and classical RK4, independent of
//! the WCD stencils and time stepper.

use crate::error::{Error, Result};
use crate::field::{BoundaryCondition, FieldState, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectSimulationConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub jump_location: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// Mesh size in units of `epsilon`.
    pub cells_per_epsilon: f64,
    pub t_end: f64,
    /// Fraction of the RK4 stability limit used for the step.
    pub safety: f64,
}

impl DirectSimulationConfig {
    pub fn riemann(u_left: f64, u_right: f64, delta: f64, epsilon: f64) -> Self {
        DirectSimulationConfig {
            epsilon,
            delta,
            u_left,
            u_right,
            jump_location: 0.5,
            x_min: 0.0,
            x_max: 1.0,
            cells_per_epsilon: 10.0,
            t_end: 0.01,
            safety: 0.5,
        }
    }
}

/// Returns the field at `t_end` on a grid with constant extrapolation.
pub fn direct_regularized_cubic(config: &DirectSimulationConfig) -> Result<FieldState> {
    let c = *config;
    if !(c.epsilon > 0.0) || !(c.delta >= 0.0) || !(c.cells_per_epsilon > 0.0) || !(c.t_end > 0.0) {
        return Err(Error::InvalidParameter(
            "direct simulation needs epsilon, resolution and t_end positive".into(),
        ));
    }
    let dx_target = c.epsilon / c.cells_per_epsilon;
    let n = ((c.x_max - c.x_min) / dx_target).ceil() as usize;
    let grid = GridSpec::new(c.x_min, c.x_max, n, BoundaryCondition::OutflowExtrapolation)?;
    let dx = grid.dx();
    let mut u: Vec<f64> = (0..n)
        .map(|i| {
            if grid.x(i) < c.jump_location {
                c.u_left
            } else {
                c.u_right
            }
        })
        .collect();

    let umax = c.u_left.abs().max(c.u_right.abs());
    // spectral radii of the three central operators
    let advection = 3.0 * umax * umax / dx;
    let diffusion = 4.0 * c.epsilon / (dx * dx);
    let dispersion = 1.5 * 3f64.sqrt() * c.delta * c.epsilon * c.epsilon / (dx * dx * dx);
    let dt_max = c.safety * 2.5 / (advection + diffusion + dispersion);
    let steps = (c.t_end / dt_max).ceil() as usize;
    let dt = c.t_end / steps as f64;

    let eps = c.epsilon;
    let disp = c.delta * eps * eps;
    let rhs = |v: &[f64], out: &mut [f64]| {
        let at = |i: isize| v[i.clamp(0, n as isize - 1) as usize];
        for (i, o) in out.iter_mut().enumerate() {
            let i = i as isize;
            let (m2, m1, z, p1, p2) = (at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2));
            let flux = (p1 * p1 * p1 - m1 * m1 * m1) / (2.0 * dx);
            let second = (p1 - 2.0 * z + m1) / (dx * dx);
            let third = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * dx * dx * dx);
            *o = -flux + eps * second + disp * third;
        }
    };
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for step in 0..steps {
        rhs(&u, &mut k1);
        for i in 0..n {
            tmp[i] = u[i] + 0.5 * dt * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = u[i] + 0.5 * dt * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = u[i] + dt * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..n {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if step % 256 == 0 && !u.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                step,
                time: step as f64 * dt,
            });
        }
    }
    let mut out = FieldState::scalar(grid, u)?;
    out.time = c.t_end;
    if !out.all_finite() {
        return Err(Error::NonFinite {
            step: steps,
            time: c.t_end,
        });
    }
    Ok(out)
}
