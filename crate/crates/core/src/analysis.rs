//! Middle-state extraction, shock tracking and kinetic-function sweeps.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::field::{BoundaryCondition, FieldState, GridSpec};
use crate::models::{CubicModel, Model, RiemannData, SystemModel};
use crate::scheme::{run, RunConfig, DEFAULT_CFL};
use crate::wcd::WcdConfig;

/// Thresholds for plateau detection, relative to the largest adjacent jump `J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauConfig {
    /// A pair of nodes is flat when their jump is below `flat_tol * J`.
    pub flat_tol: f64,
    /// A plateau ends once its values drift more than `drift_tol * J` from its first node.
    pub drift_tol: f64,
    /// Minimum number of nodes in a plateau.
    pub min_width: usize,
}

impl Default for PlateauConfig {
    fn default() -> Self {
        PlateauConfig {
            flat_tol: 1e-3,
            drift_tol: 1e-2,
            min_width: 10,
        }
    }
}

/// Maximal run of nearly constant nodes `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    fn touches_boundary(&self, n: usize) -> bool {
        self.start == 0 || self.end + 1 == n
    }
}

fn largest_jump(jumps: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &d) in jumps.iter().enumerate() {
        if best.is_none_or(|(_, b)| d > b) {
            best = Some((i, d));
        }
    }
    best.filter(|&(_, d)| d > 0.0)
}

/// Flat segments scanned left to right.
pub fn flat_segments(state: &FieldState, cfg: &PlateauConfig) -> Vec<Segment> {
    let n = state.len();
    let jumps = state.adjacent_jumps();
    let Some((_, big)) = largest_jump(&jumps) else {
        return vec![Segment {
            start: 0,
            end: n - 1,
        }];
    };
    let flat = cfg.flat_tol * big;
    let drift = cfg.drift_tol * big;
    let distance = |a: usize, b: usize| {
        state
            .components
            .iter()
            .map(|c| (c[a] - c[b]).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..n - 1 {
        if !(jumps[i] < flat && distance(i + 1, start) <= drift) {
            out.push(Segment { start, end: i });
            start = i + 1;
        }
    }
    out.push(Segment { start, end: n - 1 });
    out
}

/// A plateau stays flat through its central half; rarefaction pieces cut by the
/// drift limit drift steadily and fail this test.
fn is_plateau(state: &FieldState, seg: Segment, cfg: &PlateauConfig) -> bool {
    let jumps = state.adjacent_jumps();
    let Some((_, big)) = largest_jump(&jumps) else {
        return true;
    };
    let quarter = seg.len() / 4;
    let (a, b) = (seg.start + quarter, seg.end - quarter);
    let spread = state
        .components
        .iter()
        .map(|c| {
            let w = &c[a..=b];
            let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
            (hi - lo).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    spread <= 0.25 * cfg.drift_tol * big
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn segment_value(state: &FieldState, seg: Segment) -> Vec<f64> {
    state
        .components
        .iter()
        .map(|c| median(c[seg.start..=seg.end].to_vec()))
        .collect()
}

/// Middle state of a two-wave Riemann solution: the componentwise median of
/// the longest flat segment that touches neither end of the domain.
pub fn extract_middle_state(state: &FieldState, cfg: &PlateauConfig) -> Result<Vec<f64>> {
    let n = state.len();
    let best = flat_segments(state, cfg)
        .into_iter()
        .filter(|s| !s.touches_boundary(n) && is_plateau(state, *s, cfg))
        .fold(None::<Segment>, |acc, s| match acc {
            Some(a) if a.len() >= s.len() => Some(a),
            _ => Some(s),
        });
    match best {
        Some(seg) if seg.len() >= cfg.min_width => Ok(segment_value(state, seg)),
        Some(seg) => Err(Error::NoPlateau(format!(
            "widest interior plateau has {} nodes, need {}",
            seg.len(),
            cfg.min_width
        ))),
        None => Err(Error::NoPlateau(
            "no interior plateau between two waves".into(),
        )),
    }
}

/// Nearest flat states of at least `min_width` nodes on each side of the
/// interface `i`, which joins nodes `i` and `i + 1`.
pub fn side_states(
    state: &FieldState,
    interface: usize,
    cfg: &PlateauConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let segs = flat_segments(state, cfg);
    let left = segs
        .iter()
        .rev()
        .find(|s| s.end <= interface && s.len() >= cfg.min_width && is_plateau(state, **s, cfg))
        .ok_or_else(|| Error::NoPlateau(format!("no flat state left of interface {interface}")))?;
    let right = segs
        .iter()
        .find(|s| s.start > interface && s.len() >= cfg.min_width && is_plateau(state, **s, cfg))
        .ok_or_else(|| Error::NoPlateau(format!("no flat state right of interface {interface}")))?;
    Ok((segment_value(state, *left), segment_value(state, *right)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockSelector {
    /// The wave with the largest adjacent jump.
    Largest,
    /// The right one of the two largest waves.
    Leading,
    /// The left one of the two largest waves.
    Trailing,
}

/// Wave layer: interfaces `start..=end` with jumps above the detection threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveLayer {
    pub start: usize,
    pub end: usize,
    /// Interface carrying the largest jump; leftmost on ties.
    pub peak: usize,
    pub peak_jump: f64,
}

/// Fraction of the largest jump above which an interface belongs to a wave.
const WAVE_THRESHOLD: f64 = 0.02;
/// Layers closer than this many interfaces are merged.
const WAVE_GAP: usize = 3;

/// Wave layers ordered from left to right.
pub fn wave_layers(state: &FieldState) -> Vec<WaveLayer> {
    let jumps = state.adjacent_jumps();
    let Some((_, big)) = largest_jump(&jumps) else {
        return Vec::new();
    };
    let mut layers: Vec<WaveLayer> = Vec::new();
    for (i, &d) in jumps.iter().enumerate() {
        if d < WAVE_THRESHOLD * big {
            continue;
        }
        match layers.last_mut() {
            Some(l) if i <= l.end + WAVE_GAP => {
                l.end = i;
                if d > l.peak_jump {
                    l.peak = i;
                    l.peak_jump = d;
                }
            }
            _ => layers.push(WaveLayer {
                start: i,
                end: i,
                peak: i,
                peak_jump: d,
            }),
        }
    }
    layers
}

/// Position of the selected wave: the interface carrying its largest jump.
pub fn shock_position(state: &FieldState, which: ShockSelector) -> Result<f64> {
    let layers = wave_layers(state);
    let mut ranked: Vec<&WaveLayer> = layers.iter().collect();
    ranked.sort_by(|a, b| {
        b.peak_jump
            .total_cmp(&a.peak_jump)
            .then(a.peak.cmp(&b.peak))
    });
    let layer = match which {
        ShockSelector::Largest => ranked
            .first()
            .copied()
            .ok_or_else(|| Error::Tracking("field has no jump".into()))?,
        ShockSelector::Leading | ShockSelector::Trailing => {
            if ranked.len() < 2 {
                return Err(Error::Tracking(format!(
                    "{} wave layer(s) found, two are needed to tell leading from trailing",
                    ranked.len()
                )));
            }
            let (a, b) = (ranked[0], ranked[1]);
            let (left, right) = if a.peak < b.peak { (a, b) } else { (b, a) };
            if which == ShockSelector::Leading {
                right
            } else {
                left
            }
        }
    };
    Ok(state.grid.interface(layer.peak))
}

/// Speed of the selected wave between the first and last snapshot.
pub fn shock_speed_estimate(snapshots: &[FieldState], which: ShockSelector) -> Result<f64> {
    let (Some(a), Some(b)) = (snapshots.first(), snapshots.last()) else {
        return Err(Error::Tracking("no snapshots".into()));
    };
    let dt = b.time - a.time;
    if !(dt > 0.0) {
        return Err(Error::Tracking(
            "snapshots must be at distinct increasing times".into(),
        ));
    }
    let stationary = a.components == b.components;
    if stationary {
        return Ok(0.0);
    }
    Ok((shock_position(b, which)? - shock_position(a, which)?) / dt)
}

/// `phi(s) = -s [[|U|^2]] / 2 + 3 [[|U|^4]] / 4` across a shock of speed `s`.
pub fn mhd_entropy_dissipation(u_minus: [f64; 2], u_plus: [f64; 2], s: f64) -> f64 {
    let q = |u: [f64; 2]| u[0] * u[0] + u[1] * u[1];
    let (a, b) = (q(u_minus), q(u_plus));
    -s * 0.5 * (b - a) + 0.75 * (b * b - a * a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticRecord {
    pub left_state: Vec<f64>,
    pub middle_state: Option<Vec<f64>>,
    pub shock_speed: Option<f64>,
    pub phi: Option<f64>,
    pub mesh_cells: usize,
    pub p: usize,
    pub tau: f64,
    /// Reason the sample produced no value.
    pub failure: Option<String>,
}

impl KineticRecord {
    fn new(left_state: Vec<f64>, mesh_cells: usize, p: usize, tau: f64) -> Self {
        KineticRecord {
            left_state,
            middle_state: None,
            shock_speed: None,
            phi: None,
            mesh_cells,
            p,
            tau,
            failure: None,
        }
    }

    pub fn phi_over_s2(&self) -> Option<f64> {
        match (self.phi, self.shock_speed) {
            (Some(phi), Some(s)) if s != 0.0 => Some(phi / (s * s)),
            _ => None,
        }
    }
}

/// Run `work` over `items` on all available cores, keeping input order.
fn parallel_map<T: Sync, R: Send>(items: &[T], work: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(items.len().max(1));
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = work(&items[i]);
                out.lock().expect("result slot poisoned")[i] = Some(r);
            });
        }
    });
    out.into_inner()
        .expect("result slot poisoned")
        .into_iter()
        .map(|r| r.expect("every sample ran"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticSweepConfig {
    pub delta: f64,
    pub u_left: Vec<f64>,
    pub u_right: f64,
    pub n_cells: usize,
    pub p: usize,
    pub tau: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub jump_location: f64,
    pub cfl: f64,
    /// Fixed final time; by default waves travel 90% of the way to the right end.
    pub t_end: Option<f64>,
    pub plateau: PlateauConfig,
}

impl KineticSweepConfig {
    pub fn new(delta: f64, u_left: Vec<f64>, u_right: f64, n_cells: usize) -> Self {
        KineticSweepConfig {
            delta,
            u_left,
            u_right,
            n_cells,
            p: 4,
            tau: 0.1,
            x_min: 0.0,
            x_max: 1.0,
            jump_location: 0.1,
            cfl: DEFAULT_CFL,
            t_end: None,
            plateau: PlateauConfig::default(),
        }
    }

    /// Final time for left state `u_l`: the fastest characteristic `3 max(u^2)`
    /// covers 90% of the distance from the jump to the right boundary.
    pub fn final_time(&self, u_l: f64) -> f64 {
        self.t_end.unwrap_or_else(|| {
            let speed = 3.0 * (u_l * u_l).max(self.u_right * self.u_right);
            0.9 * (self.x_max - self.jump_location) / speed
        })
    }

    pub fn run_config(&self, u_l: f64) -> Result<RunConfig> {
        let model = Model::Cubic(CubicModel::new(self.delta)?);
        let grid = GridSpec::new(
            self.x_min,
            self.x_max,
            self.n_cells,
            BoundaryCondition::OutflowExtrapolation,
        )?;
        let initial = FieldState::riemann(
            grid,
            &RiemannData::scalar(u_l, self.u_right, self.jump_location),
        )?;
        let mut cfg = RunConfig::new(
            model,
            initial,
            WcdConfig::adaptive(self.p, self.tau),
            self.final_time(u_l),
        );
        cfg.cfl = self.cfl;
        Ok(cfg)
    }
}

/// One WCD run per left state; extraction failures are recorded per sample.
pub fn kinetic_sweep(config: &KineticSweepConfig) -> Result<Vec<KineticRecord>> {
    if config.u_left.is_empty() {
        return Err(Error::InvalidParameter(
            "kinetic sweep needs at least one u_L".into(),
        ));
    }
    // surface configuration errors before spawning work
    config.run_config(config.u_left[0])?;
    Ok(parallel_map(&config.u_left, |&u_l| {
        let mut rec = KineticRecord::new(vec![u_l], config.n_cells, config.p, config.tau);
        let outcome = config
            .run_config(u_l)
            .and_then(|cfg| run(&cfg))
            .and_then(|traj| extract_middle_state(traj.final_state(), &config.plateau));
        match outcome {
            Ok(m) => rec.middle_state = Some(m),
            Err(e) => rec.failure = Some(e.to_string()),
        }
        rec
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MhdSweepConfig {
    pub alpha: f64,
    pub r_left: Vec<f64>,
    pub right_ratio: f64,
    pub theta_left: f64,
    pub theta_right: f64,
    pub jump_location: f64,
    pub n_cells: usize,
    pub p: usize,
    pub tau: f64,
    pub cfl: f64,
    /// Final time for `r_L = 1`; each run ends at `t_ref / r_L^2`.
    pub t_ref: f64,
    pub plateau: PlateauConfig,
}

impl MhdSweepConfig {
    pub fn new(alpha: f64, r_left: Vec<f64>, n_cells: usize) -> Self {
        MhdSweepConfig {
            alpha,
            r_left,
            right_ratio: 0.6,
            theta_left: 0.3 * PI,
            theta_right: 1.3 * PI,
            jump_location: 0.25,
            n_cells,
            p: 2,
            tau: 0.1,
            cfl: DEFAULT_CFL,
            t_ref: 0.2,
            plateau: PlateauConfig::default(),
        }
    }

    pub fn run_config(&self, r_l: f64) -> Result<RunConfig> {
        let grid = GridSpec::new(
            0.0,
            1.0,
            self.n_cells,
            BoundaryCondition::OutflowExtrapolation,
        )?;
        let data = RiemannData::polar(
            r_l,
            self.theta_left,
            self.right_ratio * r_l,
            self.theta_right,
            self.jump_location,
        );
        let initial = FieldState::riemann(grid, &data)?;
        let t_end = self.t_ref / (r_l * r_l);
        let mut cfg = RunConfig::new(
            Model::System(SystemModel::hall_mhd(self.alpha)),
            initial,
            WcdConfig::adaptive(self.p, self.tau),
            t_end,
        );
        cfg.cfl = self.cfl;
        cfg.snapshot_times = vec![0.5 * t_end];
        Ok(cfg)
    }
}

/// States on both sides of the strongest wave layer. Every characteristic
/// speed of the Hall system is nonnegative, so the undisturbed left boundary
/// state feeds that shock; its right state is the median over the central half
/// of the gap before the next layer (or the right boundary).
pub fn mhd_shock_states(state: &FieldState, cfg: &PlateauConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let layers = wave_layers(state);
    let (idx, main) = layers
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| {
            a.peak_jump
                .total_cmp(&b.peak_jump)
                .then(b.peak.cmp(&a.peak))
        })
        .ok_or_else(|| Error::Tracking("no shock in final state".into()))?;
    let first = main.end + 1;
    let last = layers.get(idx + 1).map_or(state.len() - 1, |l| l.start);
    if last < first || last - first + 1 < cfg.min_width {
        return Err(Error::NoPlateau(format!(
            "gap behind the strongest layer spans {} nodes, need {}",
            (last + 1).saturating_sub(first),
            cfg.min_width
        )));
    }
    let quarter = (last - first + 1) / 4;
    let seg = Segment {
        start: first + quarter,
        end: last - quarter,
    };
    Ok((state.node(0), segment_value(state, seg)))
}

/// Least-squares Rankine-Hugoniot speed `<[[F]], [[U]]> / |[[U]]|^2` of the
/// Hall flux `|u|^2 u`. Tracking the argmax jump is unreliable once the
/// dispersive train is wider than the shock itself.
pub fn hall_jump_speed(u_minus: [f64; 2], u_plus: [f64; 2]) -> f64 {
    let f = |u: [f64; 2]| {
        let q = u[0] * u[0] + u[1] * u[1];
        [q * u[0], q * u[1]]
    };
    let (fm, fp) = (f(u_minus), f(u_plus));
    let du = [u_plus[0] - u_minus[0], u_plus[1] - u_minus[1]];
    let norm = du[0] * du[0] + du[1] * du[1];
    if norm == 0.0 {
        return 0.0;
    }
    ((fp[0] - fm[0]) * du[0] + (fp[1] - fm[1]) * du[1]) / norm
}

/// Entropy dissipation and speed of the strongest shock in each run.
pub fn mhd_kinetic_sweep(config: &MhdSweepConfig) -> Result<Vec<KineticRecord>> {
    if config.r_left.is_empty() {
        return Err(Error::InvalidParameter(
            "MHD sweep needs at least one r_L".into(),
        ));
    }
    config.run_config(config.r_left[0])?;
    Ok(parallel_map(&config.r_left, |&r_l| {
        let mut rec = KineticRecord::new(
            vec![r_l * config.theta_left.cos(), r_l * config.theta_left.sin()],
            config.n_cells,
            config.p,
            config.tau,
        );
        let outcome = config
            .run_config(r_l)
            .and_then(|cfg| run(&cfg))
            .and_then(|traj| {
                let (um, up) = mhd_shock_states(traj.final_state(), &config.plateau)?;
                let s = hall_jump_speed([um[0], um[1]], [up[0], up[1]]);
                Ok((um, up, s))
            });
        match outcome {
            Ok((um, up, s)) => {
                rec.phi = Some(mhd_entropy_dissipation([um[0], um[1]], [up[0], up[1]], s));
                rec.shock_speed = Some(s);
                rec.middle_state = Some(up);
            }
            Err(e) => rec.failure = Some(e.to_string()),
        }
        rec
    }))
}
