//! First-order Lax-Friedrichs reference scheme.

use crate::error::{Error, Result};
use crate::field::{with_ghosts, FieldState};
use crate::models::Model;
use crate::scheme::DEFAULT_CFL;

#[derive(Debug, Clone, PartialEq)]
pub struct LaxFriedrichsConfig {
    pub model: Model,
    pub initial: FieldState,
    pub cfl: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
}

impl LaxFriedrichsConfig {
    pub fn new(model: Model, initial: FieldState, t_end: f64) -> Self {
        LaxFriedrichsConfig {
            model,
            initial,
            cfl: DEFAULT_CFL,
            t_end,
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineTrajectory {
    /// Snapshots in increasing time, ending at `t_end`.
    pub snapshots: Vec<FieldState>,
    pub dts: Vec<f64>,
}

impl BaselineTrajectory {
    pub fn final_state(&self) -> &FieldState {
        self.snapshots
            .last()
            .expect("trajectory has a final snapshot")
    }
}

/// `u_i <- (u_{i-1} + u_{i+1})/2 - dt/(2 dx) (f_{i+1} - f_{i-1})` with
/// `dt = cfl dx / max wave speed`, clipped onto every output time.
pub fn lax_friedrichs_baseline(config: &LaxFriedrichsConfig) -> Result<BaselineTrajectory> {
    let model = config.model;
    let mut state = config.initial.clone();
    let grid = state.grid;
    if state.dim() != model.dim() {
        return Err(Error::ShapeMismatch(format!(
            "{} expects {} components",
            model.name(),
            model.dim()
        )));
    }
    if !(config.cfl > 0.0) || !(config.t_end >= state.time) {
        return Err(Error::InvalidParameter(
            "need cfl > 0 and t_end >= initial time".into(),
        ));
    }
    let n = grid.n_cells;
    let dx = grid.dx();
    let dim = model.dim();
    let mut targets: Vec<f64> = config
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t >= state.time && t < config.t_end)
        .collect();
    targets.sort_by(f64::total_cmp);
    targets.dedup();
    targets.push(config.t_end);

    let mut ext = vec![Vec::new(); dim];
    let mut flux = vec![vec![0.0; n + 2]; dim];
    let mut node = vec![0.0; dim];
    let mut snapshots = Vec::new();
    let mut dts = Vec::new();
    for &target in &targets {
        while state.time < target {
            for (k, comp) in state.components.iter().enumerate() {
                with_ghosts(comp, 1, grid.bc, &mut ext[k]);
            }
            let mut speed: f64 = 0.0;
            for i in 0..n + 2 {
                for k in 0..dim {
                    node[k] = ext[k][i];
                }
                speed = speed.max(model.wave_speed_bound(&node));
                let f = model.evaluate_flux(&node)?;
                for k in 0..dim {
                    flux[k][i] = f[k];
                }
            }
            let remaining = target - state.time;
            let mut dt = if speed > 0.0 {
                config.cfl * dx / speed
            } else {
                remaining
            };
            let landing = dt >= remaining * (1.0 - 1e-12);
            if landing {
                dt = remaining;
            }
            let ratio = dt / (2.0 * dx);
            for k in 0..dim {
                let (e, f) = (&ext[k], &flux[k]);
                for (i, u) in state.components[k].iter_mut().enumerate() {
                    *u = 0.5 * (e[i] + e[i + 2]) - ratio * (f[i + 2] - f[i]);
                }
            }
            state.time = if landing { target } else { state.time + dt };
            dts.push(dt);
            if !state.all_finite() {
                return Err(Error::NonFinite {
                    step: dts.len() - 1,
                    time: state.time,
                });
            }
        }
        snapshots.push(state.clone());
    }
    Ok(BaselineTrajectory { snapshots, dts })
}
