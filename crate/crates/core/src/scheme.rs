//! Semi-discrete WCD operators and the SSP-RK3 time loop.
//!
//! For the cubic law the scheme reads
//!
//! ```text
//! du_i/dt = -(1/dx) sum_j alpha_j f(u_{i+j})
//!           + (c/dx) sum_j beta_j u_{i+j} + (delta c^2/dx) sum_j gamma_j u_{i+j}
//! ```
//!
//! and the systems apply the diffusion and dispersion weights through the
//! constant matrices `D1` and `D2` of the model.

use crate::error::{Error, Result};
use crate::field::{with_ghosts, FieldState, GridSpec};
use crate::models::{CubicModel, DispersionKind, Model, SystemKind, SystemModel};
use crate::stencil::{tail_sums, SeriesBounds, StencilSet, DEFAULT_TAIL_TOLERANCE};
use crate::wcd::{global_coefficient, CoefficientMode, WcdConfig};

pub const DEFAULT_CFL: f64 = 0.45;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeVariant {
    StandardWcd,
    /// Two-point entropy conservative flux in place of `f(u_{i+j})`; scalar only.
    EntropyConservativeWcd,
}

/// Tadmor's entropy conservative flux for the cubic law with entropy `u^2/2`:
/// `[[u f - F]] / [[u]] = (a^3 + a^2 b + a b^2 + b^3) / 4`.
#[inline]
pub fn entropy_conservative_flux_scalar(u_l: f64, u_r: f64, _model: &CubicModel) -> f64 {
    let (a, b) = (u_l, u_r);
    0.25 * (a + b) * (a * a + b * b)
}

/// Reusable spatial operator bound to one model, stencil and grid.
#[derive(Debug, Clone)]
pub struct SpatialOperator {
    model: Model,
    stencils: StencilSet,
    variant: SchemeVariant,
    grid: GridSpec,
    ext: Vec<Vec<f64>>,
    flux: Vec<Vec<f64>>,
}

impl SpatialOperator {
    pub fn new(
        model: Model,
        stencils: StencilSet,
        variant: SchemeVariant,
        grid: GridSpec,
    ) -> Result<Self> {
        grid.check_stencil(stencils.p)?;
        if variant == SchemeVariant::EntropyConservativeWcd && !matches!(model, Model::Cubic(_)) {
            return Err(Error::Unsupported(
                "the entropy conservative variant is available for the scalar model only".into(),
            ));
        }
        let needs_gamma = match &model {
            Model::Cubic(m) => m.delta != 0.0,
            Model::System(s) => s.dispersion_kind == DispersionKind::ThirdOrderCapillarity,
        };
        if needs_gamma && stencils.gamma.is_none() {
            return Err(Error::DispersionNeedsWiderStencil);
        }
        let dim = model.dim();
        Ok(SpatialOperator {
            model,
            stencils,
            variant,
            grid,
            ext: vec![Vec::new(); dim],
            flux: vec![Vec::new(); dim],
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn stencils(&self) -> &StencilSet {
        &self.stencils
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Effective signal speed for the time-step restriction.
    pub fn effective_speed(&self, u: &[Vec<f64>], c: f64) -> f64 {
        let n = self.grid.n_cells;
        let mut node = vec![0.0; u.len()];
        let mut speed: f64 = 0.0;
        for i in 0..n {
            for (k, comp) in u.iter().enumerate() {
                node[k] = comp[i];
            }
            speed = speed.max(self.model.wave_speed_bound(&node));
        }
        let beta = self.stencils.beta_abs_sum();
        let gamma = self.stencils.gamma_abs_sum();
        match &self.model {
            Model::Cubic(m) => speed + c * beta + m.delta.abs() * c * c * gamma,
            Model::System(s) => match s.dispersion_kind {
                DispersionKind::ThirdOrderCapillarity => {
                    speed + c * beta + s.coeff.abs() * c * c * gamma
                }
                DispersionKind::SecondOrderHall => speed + c * (1.0 + s.coeff.abs()) * beta,
            },
        }
    }

    /// Write `du/dt` for the state `u` and coefficient `c` into `out`.
    pub fn residual(&mut self, u: &[Vec<f64>], c: f64, out: &mut [Vec<f64>]) -> Result<()> {
        let n = self.grid.n_cells;
        let p = self.stencils.p;
        if u.len() != self.model.dim() || u.iter().any(|v| v.len() != n) {
            return Err(Error::ShapeMismatch("state does not match operator".into()));
        }
        for (k, comp) in u.iter().enumerate() {
            with_ghosts(comp, p, self.grid.bc, &mut self.ext[k]);
        }
        let model = self.model;
        match model {
            Model::Cubic(m) => self.scalar_residual(&m, c, &mut out[0]),
            Model::System(s) => self.system_residual(&s, c, out)?,
        }
        if out.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                step: 0,
                time: f64::NAN,
            });
        }
        Ok(())
    }

    fn scalar_residual(&mut self, m: &CubicModel, c: f64, out: &mut [f64]) {
        let p = self.stencils.p;
        let n = self.grid.n_cells;
        let inv_dx = 1.0 / self.grid.dx();
        let ext = &self.ext[0];
        let alpha = &self.stencils.alpha[p + 1..];
        let beta_half = &self.stencils.beta[p + 1..];
        let dc2 = m.delta * c * c;
        let gamma: Option<&[f64]> = if dc2 != 0.0 {
            self.stencils.gamma.as_deref().map(|g| &g[p + 1..])
        } else {
            None
        };

        let fl = &mut self.flux[0];
        match self.variant {
            SchemeVariant::StandardWcd => {
                fl.clear();
                fl.extend(ext.iter().map(|&v| m.flux(v)));
            }
            SchemeVariant::EntropyConservativeWcd => {}
        }

        for i in 0..n {
            let centre = i + p;
            let adv = match self.variant {
                SchemeVariant::StandardWcd => anti(alpha, &fl[i..i + 2 * p + 1]),
                SchemeVariant::EntropyConservativeWcd => {
                    let ui = ext[centre];
                    alpha
                        .iter()
                        .enumerate()
                        .map(|(k, a)| {
                            2.0 * a
                                * (entropy_conservative_flux_scalar(ui, ext[centre + k + 1], m)
                                    - entropy_conservative_flux_scalar(ui, ext[centre - k - 1], m))
                        })
                        .sum::<f64>()
                }
            };
            let window = &ext[i..i + 2 * p + 1];
            let mut reg = c * sym(beta_half, window);
            if let Some(g) = gamma {
                reg += dc2 * anti(g, window);
            }
            out[i] = (reg - adv) * inv_dx;
        }
    }

    fn system_residual(&mut self, s: &SystemModel, c: f64, out: &mut [Vec<f64>]) -> Result<()> {
        let p = self.stencils.p;
        let n = self.grid.n_cells;
        let inv_dx = 1.0 / self.grid.dx();
        let len = self.ext[0].len();
        for k in 0..2 {
            self.flux[k].resize(len, 0.0);
        }
        for idx in 0..len {
            let node = [self.ext[0][idx], self.ext[1][idx]];
            if let SystemKind::VanDerWaals { .. } = s.kind {
                if !(node[0] > 1.0 / 3.0) {
                    return Err(Error::Domain {
                        model: "vdw-elasticity",
                        detail: format!("specific volume w = {} must exceed 1/3", node[0]),
                    });
                }
            }
            let f = s.flux_unchecked(node);
            self.flux[0][idx] = f[0];
            self.flux[1][idx] = f[1];
        }
        let alpha = &self.stencils.alpha[p + 1..];
        let beta = &self.stencils.beta[p + 1..];
        let hall = s.dispersion_kind == DispersionKind::SecondOrderHall;
        let (second_weights, second_scale): (&[f64], f64) = if hall {
            (beta, s.coeff * c)
        } else {
            (&self.stencils.gamma()?[p + 1..], s.coeff * c * c)
        };
        let second = |w: &[f64], v: &[f64]| if hall { sym(w, v) } else { anti(w, v) };
        let (d1, d2) = (s.d1, s.d2);
        for i in 0..n {
            let w = i..i + 2 * p + 1;
            let adv = [
                anti(alpha, &self.flux[0][w.clone()]),
                anti(alpha, &self.flux[1][w.clone()]),
            ];
            let bu = [
                sym(beta, &self.ext[0][w.clone()]),
                sym(beta, &self.ext[1][w.clone()]),
            ];
            let gu = [
                second(second_weights, &self.ext[0][w.clone()]),
                second(second_weights, &self.ext[1][w]),
            ];
            for k in 0..2 {
                let diff = d1[k][0] * bu[0] + d1[k][1] * bu[1];
                let disp = d2[k][0] * gu[0] + d2[k][1] * gu[1];
                out[k][i] = (c * diff + second_scale * disp - adv[k]) * inv_dx;
            }
        }
        Ok(())
    }
}

/// `sum_j w_j (v_{+j} - v_{-j})` over a centred window, `half` holding `w_1..w_p`.
#[inline]
fn anti(half: &[f64], window: &[f64]) -> f64 {
    let p = half.len();
    half.iter()
        .enumerate()
        .map(|(k, w)| w * (window[p + k + 1] - window[p - k - 1]))
        .sum()
}

/// `sum_j w_j v_j` for an even family with zero sum, as `sum_{j>0} w_j (v_{+j} - 2 v_0 + v_{-j})`.
#[inline]
fn sym(half: &[f64], window: &[f64]) -> f64 {
    let p = half.len();
    let centre = window[p];
    half.iter()
        .enumerate()
        .map(|(k, w)| w * ((window[p + k + 1] - centre) + (window[p - k - 1] - centre)))
        .sum()
}

fn residual_of(
    state: &FieldState,
    model: Model,
    stencils: &StencilSet,
    variant: SchemeVariant,
    c: f64,
) -> Result<Vec<Vec<f64>>> {
    let mut op = SpatialOperator::new(model, stencils.clone(), variant, state.grid)?;
    let mut out = vec![vec![0.0; state.len()]; state.dim()];
    op.residual(&state.components, c, &mut out)?;
    Ok(out)
}

/// `du/dt` of the standard WCD scheme for the cubic law.
pub fn spatial_residual_scalar(
    state: &FieldState,
    stencils: &StencilSet,
    c: f64,
    model: &CubicModel,
) -> Result<Vec<f64>> {
    Ok(residual_of(
        state,
        Model::Cubic(*model),
        stencils,
        SchemeVariant::StandardWcd,
        c,
    )?
    .remove(0))
}

/// `du/dt` of the entropy conservative WCD scheme for the cubic law.
pub fn spatial_residual_entropy_stable(
    state: &FieldState,
    stencils: &StencilSet,
    c: f64,
    model: &CubicModel,
) -> Result<Vec<f64>> {
    Ok(residual_of(
        state,
        Model::Cubic(*model),
        stencils,
        SchemeVariant::EntropyConservativeWcd,
        c,
    )?
    .remove(0))
}

/// `dU/dt` of the WCD scheme for a 2x2 system.
pub fn spatial_residual_system(
    state: &FieldState,
    stencils: &StencilSet,
    c: f64,
    model: &SystemModel,
) -> Result<Vec<Vec<f64>>> {
    residual_of(
        state,
        Model::System(*model),
        stencils,
        SchemeVariant::StandardWcd,
        c,
    )
}

/// One Shu-Osher SSP-RK3 step of size `dt` for `du/dt = L(u)`.
pub fn ssp_rk3_step<L>(state: &FieldState, dt: f64, mut residual: L) -> Result<FieldState>
where
    L: FnMut(&[Vec<f64>], &mut [Vec<f64>]) -> Result<()>,
{
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let u0 = &state.components;
    let mut l = vec![vec![0.0; state.len()]; state.dim()];

    residual(u0, &mut l)?;
    let u1: Vec<Vec<f64>> = u0
        .iter()
        .zip(&l)
        .map(|(u, r)| u.iter().zip(r).map(|(a, b)| a + dt * b).collect())
        .collect();

    residual(&u1, &mut l)?;
    let u2: Vec<Vec<f64>> = u0
        .iter()
        .zip(u1.iter().zip(&l))
        .map(|(u, (v, r))| {
            u.iter()
                .zip(v.iter().zip(r))
                .map(|(a, (b, d))| 0.75 * a + 0.25 * (b + dt * d))
                .collect()
        })
        .collect();

    residual(&u2, &mut l)?;
    let next: Vec<Vec<f64>> = u0
        .iter()
        .zip(u2.iter().zip(&l))
        .map(|(u, (v, r))| {
            u.iter()
                .zip(v.iter().zip(r))
                .map(|(a, (b, d))| a / 3.0 + 2.0 / 3.0 * (b + dt * d))
                .collect()
        })
        .collect();

    let out = FieldState {
        grid: state.grid,
        components: next,
        time: state.time + dt,
    };
    if !out.all_finite() {
        return Err(Error::NonFinite {
            step: 0,
            time: out.time,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub initial: FieldState,
    pub variant: SchemeVariant,
    pub wcd: WcdConfig,
    pub cfl: f64,
    pub t_end: f64,
    /// Extra output times in `(0, t_end)`; `t_end` is always recorded.
    pub snapshot_times: Vec<f64>,
    pub tail_tolerance: f64,
    pub max_steps: Option<usize>,
}

impl RunConfig {
    pub fn new(model: Model, initial: FieldState, wcd: WcdConfig, t_end: f64) -> Self {
        RunConfig {
            model,
            initial,
            variant: SchemeVariant::StandardWcd,
            wcd,
            cfl: DEFAULT_CFL,
            t_end,
            snapshot_times: Vec::new(),
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
            max_steps: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    /// Time at the start of the step.
    pub time: f64,
    pub dt: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Snapshots in increasing time; the last one is the state at `t_end`.
    pub snapshots: Vec<FieldState>,
    pub steps: Vec<StepRecord>,
    pub bounds: SeriesBounds,
}

impl Trajectory {
    pub fn final_state(&self) -> &FieldState {
        self.snapshots
            .last()
            .expect("trajectory has a final snapshot")
    }
}

/// Time-march `config.initial` to `config.t_end`.
pub fn run(config: &RunConfig) -> Result<Trajectory> {
    let grid = config.initial.grid;
    if config.initial.dim() != config.model.dim() {
        return Err(Error::ShapeMismatch(format!(
            "{} expects {} components, initial data has {}",
            config.model.name(),
            config.model.dim(),
            config.initial.dim()
        )));
    }
    if !(config.cfl > 0.0) || !(config.t_end >= config.initial.time) {
        return Err(Error::InvalidParameter(format!(
            "need cfl > 0 and t_end >= initial time (cfl = {}, t_end = {})",
            config.cfl, config.t_end
        )));
    }
    if !config.initial.all_finite() {
        return Err(Error::NonFinite {
            step: 0,
            time: config.initial.time,
        });
    }
    let stencils = StencilSet::build(config.wcd.p)?;
    let bounds = tail_sums(&stencils, config.tail_tolerance)?;
    config.wcd.validate(&config.model, &bounds)?;
    let mut op = SpatialOperator::new(config.model, stencils, config.variant, grid)?;

    let mut targets: Vec<f64> = config
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t >= config.initial.time && t < config.t_end)
        .collect();
    targets.sort_by(f64::total_cmp);
    targets.dedup();
    targets.push(config.t_end);

    let mut state = config.initial.clone();
    let mut snapshots = Vec::with_capacity(targets.len());
    let mut steps = Vec::new();
    let dx = grid.dx();

    for &target in &targets {
        while state.time < target {
            if config.max_steps.is_some_and(|m| steps.len() >= m) {
                return Err(Error::InvalidParameter(format!(
                    "step budget of {} exhausted at t = {}",
                    steps.len(),
                    state.time
                )));
            }
            let c = match config.wcd.mode {
                CoefficientMode::Fixed(c) => c,
                CoefficientMode::Adaptive => {
                    global_coefficient(&state, &config.model, &bounds, &config.wcd)?
                }
            };
            let speed = op.effective_speed(&state.components, c);
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
            let step = steps.len();
            let t0 = state.time;
            let mut next =
                ssp_rk3_step(&state, dt, |u, out| op.residual(u, c, out)).map_err(|e| match e {
                    Error::NonFinite { .. } => Error::NonFinite { step, time: t0 },
                    other => other,
                })?;
            if landing {
                next.time = target;
            }
            steps.push(StepRecord {
                step,
                time: t0,
                dt,
                c,
            });
            state = next;
        }
        let mut snap = state.clone();
        snap.time = target;
        snapshots.push(snap);
    }
    Ok(Trajectory {
        snapshots,
        steps,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BoundaryCondition;
    use approx::assert_abs_diff_eq;

    fn periodic(n: usize) -> GridSpec {
        GridSpec::new(0.0, 1.0, n, BoundaryCondition::Periodic).unwrap()
    }

    #[test]
    fn entropy_flux_examples() {
        let m = CubicModel::new(1.0).unwrap();
        assert_eq!(
            entropy_conservative_flux_scalar(1.5, 1.5, &m),
            1.5f64.powi(3)
        );
        assert_eq!(entropy_conservative_flux_scalar(0.0, 2.0, &m), 2.0);
        assert_eq!(entropy_conservative_flux_scalar(-1.3, 1.3, &m), 0.0);
        // [[u f - F]] / [[u]] with u f - F = u^4 / 4
        let (a, b): (f64, f64) = (0.7, -1.9);
        let direct = (b.powi(4) / 4.0 - a.powi(4) / 4.0) / (b - a);
        assert_abs_diff_eq!(
            entropy_conservative_flux_scalar(a, b, &m),
            direct,
            epsilon = 1e-14
        );
    }

    #[test]
    fn constant_field_has_zero_residual() {
        let m = CubicModel::new(1.0).unwrap();
        let s = StencilSet::build(4).unwrap();
        let f = FieldState::scalar(periodic(40), vec![1.7; 40]).unwrap();
        for r in [
            spatial_residual_scalar(&f, &s, 3.0, &m).unwrap(),
            spatial_residual_entropy_stable(&f, &s, 3.0, &m).unwrap(),
        ] {
            assert!(r.iter().all(|&v| v == 0.0), "{r:?}");
        }
        let sys = SystemModel::vdw_elasticity(1.0);
        let g = GridSpec::new(0.0, 1.0, 30, BoundaryCondition::OutflowExtrapolation).unwrap();
        let f = FieldState::new(g, vec![vec![0.9; 30], vec![0.4; 30]], 0.0).unwrap();
        let r = spatial_residual_system(&f, &s, 2.0, &sys).unwrap();
        assert!(r.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn jump_residual_matches_hand_expansion() {
        // p = 1, delta = 0: centred flux difference plus c times the Laplacian
        let m = CubicModel::new(0.0).unwrap();
        let s = StencilSet::build(1).unwrap();
        let g = GridSpec::new(0.0, 5.0, 5, BoundaryCondition::OutflowExtrapolation).unwrap();
        let u = vec![1.0, 1.0, 1.0, -1.0, -1.0];
        let f = FieldState::scalar(g, u.clone()).unwrap();
        let c = 0.7;
        let r = spatial_residual_scalar(&f, &s, c, &m).unwrap();
        let ext = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
        for i in 0..5 {
            let (l, cc, rr) = (ext[i], ext[i + 1], ext[i + 2]);
            let expected = -(rr * rr * rr - l * l * l) / 2.0 + c * (l - 2.0 * cc + rr);
            assert_abs_diff_eq!(r[i], expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn elasticity_without_dissipation_is_centred_differencing() {
        let sys = SystemModel::vdw_elasticity(1.0);
        let s = StencilSet::build(2).unwrap();
        let g = GridSpec::new(0.0, 1.0, 9, BoundaryCondition::Periodic).unwrap();
        let w: Vec<f64> = (0..9).map(|i| 0.8 + 0.1 * i as f64).collect();
        let v: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).sin()).collect();
        let f = FieldState::new(g, vec![w.clone(), v.clone()], 0.0).unwrap();
        let r = spatial_residual_system(&f, &s, 0.0, &sys).unwrap();
        let a = &s.alpha;
        for i in 0..9 {
            let at = |k: i64| ((i as i64 + k).rem_euclid(9)) as usize;
            let mut rw = 0.0;
            let mut rv = 0.0;
            for (idx, j) in (-2i64..=2).enumerate() {
                rw += a[idx] * v[at(j)];
                rv += a[idx] * sys.stress(w[at(j)]);
            }
            assert_abs_diff_eq!(r[0][i], rw * 9.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r[1][i], rv * 9.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn rk3_examples() {
        let g = periodic(3);
        let f = FieldState::scalar(g, vec![1.0; 3]).unwrap();
        let same = ssp_rk3_step(&f, 0.3, |_, out| {
            out[0].iter_mut().for_each(|v| *v = 0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(same.components, f.components);
        let decay = ssp_rk3_step(&f, 0.1, |u, out| {
            for (o, v) in out[0].iter_mut().zip(&u[0]) {
                *o = -v;
            }
            Ok(())
        })
        .unwrap();
        let z: f64 = -0.1;
        assert_abs_diff_eq!(
            decay.components[0][0],
            1.0 + z + z * z / 2.0 + z.powi(3) / 6.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(decay.time, 0.1);
        assert!(ssp_rk3_step(&f, 0.0, |_, _| Ok(())).is_err());
    }

    #[test]
    fn entropy_variant_rejects_systems() {
        let s = StencilSet::build(2).unwrap();
        let err = SpatialOperator::new(
            Model::System(SystemModel::hall_mhd(1.0)),
            s,
            SchemeVariant::EntropyConservativeWcd,
            periodic(20),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn dispersion_requires_p2() {
        let s = StencilSet::build(1).unwrap();
        let m = Model::Cubic(CubicModel::new(1.0).unwrap());
        assert_eq!(
            SpatialOperator::new(m, s, SchemeVariant::StandardWcd, periodic(20)).unwrap_err(),
            Error::DispersionNeedsWiderStencil
        );
    }

    #[test]
    fn constant_run_stays_constant() {
        let m = Model::Cubic(CubicModel::new(1.0).unwrap());
        let g = GridSpec::new(0.0, 1.0, 50, BoundaryCondition::OutflowExtrapolation).unwrap();
        let f = FieldState::scalar(g, vec![-0.8; 50]).unwrap();
        let mut cfg = RunConfig::new(m, f.clone(), WcdConfig::adaptive(3, 0.1), 0.2);
        cfg.snapshot_times = vec![0.05, 0.1];
        let traj = run(&cfg).unwrap();
        assert_eq!(traj.snapshots.len(), 3);
        assert_eq!(traj.snapshots[1].time, 0.1);
        assert_eq!(traj.final_state().time, 0.2);
        assert_eq!(traj.final_state().components, f.components);
        assert!(traj.steps.iter().all(|s| s.c == 0.0));
    }

    #[test]
    fn domain_error_in_elasticity_run() {
        let m = Model::System(SystemModel::vdw_elasticity(1.0));
        let g = GridSpec::new(0.0, 1.0, 30, BoundaryCondition::OutflowExtrapolation).unwrap();
        let f = FieldState::new(g, vec![vec![0.3; 30], vec![0.0; 30]], 0.0).unwrap();
        let err = run(&RunConfig::new(m, f, WcdConfig::adaptive(3, 0.1), 0.1)).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }
}
