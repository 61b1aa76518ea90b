//! Choice of the numerical dissipation coefficient `c` so that, at a single
//! shock, the high-order remainder of the equivalent equation stays below
//! `tau` times its leading diffusion-dispersion terms.
//!
//! Each interface `(u_i, u_{i+1})` is treated as a shock; the coefficient of
//! the whole scheme is the maximum over interfaces.

use crate::error::{Error, Result};
use crate::field::{BoundaryCondition, FieldState};
use crate::models::{CubicModel, DispersionKind, Mat2, Model, SystemModel};
use crate::stencil::SeriesBounds;

pub const DEFAULT_SAFETY_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientMode {
    Fixed(f64),
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WcdConfig {
    pub tau: f64,
    pub p: usize,
    pub mode: CoefficientMode,
    /// Relative enlargement applied to the critical root.
    pub safety_margin: f64,
}

impl WcdConfig {
    pub fn adaptive(p: usize, tau: f64) -> Self {
        WcdConfig {
            tau,
            p,
            mode: CoefficientMode::Adaptive,
            safety_margin: DEFAULT_SAFETY_MARGIN,
        }
    }

    pub fn fixed(p: usize, c: f64) -> Self {
        WcdConfig {
            tau: 0.1,
            p,
            mode: CoefficientMode::Fixed(c),
            safety_margin: DEFAULT_SAFETY_MARGIN,
        }
    }

    /// Parameter checks plus, in adaptive mode, feasibility of the WCD
    /// condition for `model` with the given tail sums.
    pub fn validate(&self, model: &Model, bounds: &SeriesBounds) -> Result<()> {
        if !(self.safety_margin >= 0.0) || !self.safety_margin.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "safety margin must be nonnegative, got {}",
                self.safety_margin
            )));
        }
        match self.mode {
            CoefficientMode::Fixed(c) => {
                if !(c >= 0.0) || !c.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "fixed coefficient must be nonnegative, got {c}"
                    )));
                }
                Ok(())
            }
            CoefficientMode::Adaptive => {
                check_tau(self.tau)?;
                match model {
                    Model::Cubic(m) => scalar_feasibility(m.delta, bounds, self.tau),
                    Model::System(s) => match s.dispersion_kind {
                        DispersionKind::ThirdOrderCapillarity => {
                            scalar_feasibility(s.coeff, bounds, self.tau)
                        }
                        DispersionKind::SecondOrderHall => hall_feasibility(bounds, self.tau),
                    },
                }
            }
        }
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance tau must lie in (0, 1), got {tau}"
        )));
    }
    Ok(())
}

fn scalar_feasibility(delta: f64, bounds: &SeriesBounds, tau: f64) -> Result<()> {
    if delta != 0.0 {
        let s_c = bounds.s_c_hat()?;
        if s_c / tau >= 1.0 {
            return Err(Error::InfeasibleTolerance {
                tau,
                p: bounds.p,
                detail: format!(
                    "dispersion tail sum S^C = {s_c:.6e} must satisfy S^C / tau < 1 for a positive c"
                ),
            });
        }
    } else if bounds.s_d_hat / tau >= 1.0 {
        return Err(Error::InfeasibleTolerance {
            tau,
            p: bounds.p,
            detail: format!(
                "without dispersion the diffusion tail sum S^D = {:.6e} must satisfy S^D / tau < 1",
                bounds.s_d_hat
            ),
        });
    }
    Ok(())
}

fn hall_feasibility(bounds: &SeriesBounds, tau: f64) -> Result<()> {
    if bounds.s_d_hat / tau >= 1.0 {
        return Err(Error::InfeasibleTolerance {
            tau,
            p: bounds.p,
            detail: format!(
                "the linear Hall condition needs S^D / tau < 1, got S^D = {:.6e}",
                bounds.s_d_hat
            ),
        });
    }
    Ok(())
}

/// Positive root of `a c^2 + b c - r = 0` with `a >= 0`, `r >= 0`.
fn positive_root(a: f64, b: f64, r: f64) -> Option<f64> {
    if r <= 0.0 {
        return Some(0.0);
    }
    if a == 0.0 {
        return (b > 0.0).then(|| r / b);
    }
    let disc = (b * b + 4.0 * a * r).sqrt();
    Some(if b > 0.0 {
        2.0 * r / (b + disc)
    } else {
        (disc - b) / (2.0 * a)
    })
}

/// Coefficients `(a, b, r)` of the scalar WCD quadratic `a c^2 + b c - r`.
pub fn scalar_quadratic(
    delta: f64,
    sigma: f64,
    bounds: &SeriesBounds,
    tau: f64,
) -> (f64, f64, f64) {
    let s_c = bounds.s_c_hat.unwrap_or(0.0);
    let d = delta.abs();
    (
        d - s_c * d / tau,
        1.0 - bounds.s_d_hat / tau,
        (1.0 + bounds.s_f_hat / tau) * sigma,
    )
}

/// Critical (margin-free) root of the scalar WCD quadratic for shock speed `sigma`.
pub fn scalar_critical_root(
    delta: f64,
    sigma: f64,
    bounds: &SeriesBounds,
    tau: f64,
) -> Result<f64> {
    check_tau(tau)?;
    scalar_feasibility(delta, bounds, tau)?;
    let (a, b, r) = scalar_quadratic(delta, sigma, bounds, tau);
    positive_root(a, b, r).ok_or_else(|| Error::InfeasibleTolerance {
        tau,
        p: bounds.p,
        detail: "the WCD quadratic has no positive root".into(),
    })
}

/// Dissipation coefficient for the interface `(u_l, u_r)` of the cubic law.
pub fn wcd_scalar(
    u_l: f64,
    u_r: f64,
    model: &CubicModel,
    bounds: &SeriesBounds,
    tau: f64,
    safety_margin: f64,
) -> Result<f64> {
    check_tau(tau)?;
    scalar_feasibility(model.delta, bounds, tau)?;
    if u_l == u_r {
        return Ok(0.0);
    }
    let sigma = model.chord_speed(u_l, u_r);
    Ok((1.0 + safety_margin) * scalar_critical_root(model.delta, sigma, bounds, tau)?)
}

fn row_dot(m: &Mat2, i: usize, v: [f64; 2]) -> f64 {
    m[i][0] * v[0] + m[i][1] * v[1]
}

/// Rough system shock speed `|[[F]]| / |[[U]]|` in the Euclidean norm.
pub fn system_shock_speed(model: &SystemModel, u_l: [f64; 2], u_r: [f64; 2]) -> Result<f64> {
    let fl = model.flux(u_l)?;
    let fr = model.flux(u_r)?;
    let ju = ((u_r[0] - u_l[0]).powi(2) + (u_r[1] - u_l[1]).powi(2)).sqrt();
    let jf = ((fr[0] - fl[0]).powi(2) + (fr[1] - fl[1]).powi(2)).sqrt();
    Ok(if ju == 0.0 { 0.0 } else { jf / ju })
}

/// Per-component coefficients `(c_1, c_2)` for the capillarity system with
/// shock speed `sigma`, before the safety margin.
pub fn capillarity_components(
    model: &SystemModel,
    jump: [f64; 2],
    sigma: f64,
    bounds: &SeriesBounds,
    tau: f64,
) -> Result<[f64; 2]> {
    let mut c = [0.0; 2];
    for (i, ci) in c.iter_mut().enumerate() {
        let d1 = row_dot(&model.d1, i, jump).abs();
        if d1 == 0.0 {
            continue;
        }
        let d2 = row_dot(&model.d2, i, jump).abs();
        let s_c = bounds.s_c_hat()?;
        let delta = model.coeff.abs();
        let a = (delta - s_c * delta / tau) * d2;
        let b = (1.0 - bounds.s_d_hat / tau) * d1;
        let r = (1.0 + bounds.s_f_hat / tau) * sigma * jump[i].abs();
        *ci = positive_root(a, b, r).ok_or_else(|| Error::InfeasibleTolerance {
            tau,
            p: bounds.p,
            detail: format!("component {} quadratic has no positive root", i + 1),
        })?;
    }
    Ok(c)
}

pub fn wcd_capillarity_system(
    u_l: [f64; 2],
    u_r: [f64; 2],
    model: &SystemModel,
    bounds: &SeriesBounds,
    tau: f64,
    safety_margin: f64,
) -> Result<f64> {
    if model.dispersion_kind != DispersionKind::ThirdOrderCapillarity {
        return Err(Error::InvalidParameter(
            "capillarity WCD rule applied to a non-capillarity model".into(),
        ));
    }
    check_tau(tau)?;
    scalar_feasibility(model.coeff, bounds, tau)?;
    if u_l == u_r {
        return Ok(0.0);
    }
    let jump = [u_r[0] - u_l[0], u_r[1] - u_l[1]];
    let sigma = system_shock_speed(model, u_l, u_r)?;
    let c = capillarity_components(model, jump, sigma, bounds, tau)?;
    Ok((1.0 + safety_margin) * c[0].max(c[1]))
}

/// Per-component solutions of the linear Hall condition, before the margin.
pub fn hall_components(
    model: &SystemModel,
    jump: [f64; 2],
    sigma: f64,
    bounds: &SeriesBounds,
    tau: f64,
) -> Result<[f64; 2]> {
    let alpha = model.coeff.abs();
    let mut c = [0.0; 2];
    for (i, ci) in c.iter_mut().enumerate() {
        let d1 = row_dot(&model.d1, i, jump).abs();
        let d2 = row_dot(&model.d2, i, jump).abs();
        if d1 == 0.0 && d2 == 0.0 {
            continue;
        }
        let bracket =
            (alpha - bounds.s_d_hat * alpha / tau) * d2 + (1.0 - bounds.s_d_hat / tau) * d1;
        if !(bracket > 0.0) {
            return Err(Error::InfeasibleTolerance {
                tau,
                p: bounds.p,
                detail: format!(
                    "the coefficient of c_{} is not positive ({bracket:.3e})",
                    i + 1
                ),
            });
        }
        *ci = (1.0 + bounds.s_f_hat / tau) * sigma * jump[i].abs() / bracket;
    }
    Ok(c)
}

pub fn wcd_hall_system(
    u_l: [f64; 2],
    u_r: [f64; 2],
    model: &SystemModel,
    bounds: &SeriesBounds,
    tau: f64,
    safety_margin: f64,
) -> Result<f64> {
    if model.dispersion_kind != DispersionKind::SecondOrderHall {
        return Err(Error::InvalidParameter(
            "Hall WCD rule applied to a non-Hall model".into(),
        ));
    }
    check_tau(tau)?;
    hall_feasibility(bounds, tau)?;
    if u_l == u_r {
        return Ok(0.0);
    }
    let jump = [u_r[0] - u_l[0], u_r[1] - u_l[1]];
    let sigma = system_shock_speed(model, u_l, u_r)?;
    let c = hall_components(model, jump, sigma, bounds, tau)?;
    Ok((1.0 + safety_margin) * c[0].max(c[1]))
}

/// Coefficient `c(t)` of the whole scheme for the current state.
pub fn global_coefficient(
    state: &FieldState,
    model: &Model,
    bounds: &SeriesBounds,
    config: &WcdConfig,
) -> Result<f64> {
    if let CoefficientMode::Fixed(c) = config.mode {
        return Ok(c);
    }
    let n = state.len();
    let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if state.grid.bc == BoundaryCondition::Periodic {
        pairs.push((n - 1, 0));
    }
    let (tau, margin) = (config.tau, config.safety_margin);
    let mut c_max: f64 = 0.0;
    match model {
        Model::Cubic(m) => {
            let u = &state.components[0];
            for (i, j) in pairs {
                c_max = c_max.max(wcd_scalar(u[i], u[j], m, bounds, tau, margin)?);
            }
        }
        Model::System(s) => {
            let (a, b) = (&state.components[0], &state.components[1]);
            for (i, j) in pairs {
                let ul = [a[i], b[i]];
                let ur = [a[j], b[j]];
                let c = match s.dispersion_kind {
                    DispersionKind::ThirdOrderCapillarity => {
                        wcd_capillarity_system(ul, ur, s, bounds, tau, margin)?
                    }
                    DispersionKind::SecondOrderHall => {
                        wcd_hall_system(ul, ur, s, bounds, tau, margin)?
                    }
                };
                c_max = c_max.max(c);
            }
        }
    }
    Ok(c_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GridSpec;
    use crate::stencil::{tail_sums, StencilSet};
    use approx::assert_abs_diff_eq;

    fn limiting() -> SeriesBounds {
        SeriesBounds::limiting(50)
    }

    #[test]
    fn zero_jump_gives_zero() {
        let m = CubicModel::new(1.0).unwrap();
        let b = tail_sums(&StencilSet::build(4).unwrap(), 1e-14).unwrap();
        assert_eq!(wcd_scalar(3.0, 3.0, &m, &b, 0.1, 0.01).unwrap(), 0.0);
    }

    #[test]
    fn limiting_quadratic_roots() {
        assert_abs_diff_eq!(
            scalar_critical_root(1.0, 2.0, &limiting(), 0.5).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            scalar_critical_root(0.0, 3.0, &limiting(), 0.5).unwrap(),
            3.0,
            epsilon = 1e-15
        );
        // sigma = |1 + 1*(-... )|: choose states with chord speed 2
        let m = CubicModel::new(1.0).unwrap();
        let (ul, ur) = (2f64.sqrt(), 0.0);
        let c = wcd_scalar(ul, ur, &m, &limiting(), 0.5, 0.01).unwrap();
        assert_abs_diff_eq!(c, 1.01, epsilon = 1e-12);
    }

    #[test]
    fn infeasible_tau_is_reported() {
        let m = CubicModel::new(1.0).unwrap();
        let b = tail_sums(&StencilSet::build(2).unwrap(), 1e-14).unwrap();
        let err = wcd_scalar(1.0, -1.0, &m, &b, 0.1, 0.01).unwrap_err();
        assert!(matches!(err, Error::InfeasibleTolerance { p: 2, .. }));
        assert!(err.to_string().contains("increase the stencil half-width"));
        assert!(wcd_scalar(1.0, -1.0, &m, &b, 0.3, 0.01).is_ok());
        assert!(wcd_scalar(1.0, -1.0, &m, &b, 1.5, 0.01).is_err());
    }

    #[test]
    fn capillarity_examples() {
        let m = SystemModel::vdw_elasticity(1.0);
        let b = limiting();
        assert_eq!(
            wcd_capillarity_system([1.0, 0.3], [1.0, 0.3], &m, &b, 0.5, 0.0).unwrap(),
            0.0
        );
        // first component never receives dissipation
        let c = capillarity_components(&m, [0.7, -0.2], 1.3, &b, 0.5).unwrap();
        assert_eq!(c[0], 0.0);
        assert!(c[1] > 0.0);
        // [[U]] = (0, 1): second row of D2 annihilates the jump, linear root
        let c = capillarity_components(&m, [0.0, 1.0], 2.0, &b, 0.5).unwrap();
        assert_abs_diff_eq!(c[1], 2.0, epsilon = 1e-15);
        // a generic component reproducing the scalar limiting quadratic c^2 + c - 2
        let c = capillarity_components(&m, [-1.0, 1.0], 2.0, &b, 0.5).unwrap();
        assert_abs_diff_eq!(c[1], 1.0, epsilon = 1e-15);
        // same quadratic when the second row of D2 sees the jump (0, 1)
        let diag = SystemModel {
            d2: [[0.0, 0.0], [0.0, 1.0]],
            ..m
        };
        let c = capillarity_components(&diag, [0.0, 1.0], 2.0, &b, 0.5).unwrap();
        assert_abs_diff_eq!(c[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hall_examples() {
        let m = SystemModel::hall_mhd(1.0);
        let b = limiting();
        assert_eq!(
            wcd_hall_system([1.0, 2.0], [1.0, 2.0], &m, &b, 0.5, 0.0).unwrap(),
            0.0
        );
        let sigma = 1.7;
        let c = hall_components(&m, [1.0, 0.0], sigma, &b, 0.5).unwrap();
        assert_abs_diff_eq!(c[0], sigma, epsilon = 1e-15);
        assert_eq!(c[1], 0.0);
        let bad = SeriesBounds {
            s_d_hat: 0.2,
            ..limiting()
        };
        assert!(hall_components(&m, [1.0, 0.0], sigma, &bad, 0.1).is_err());
    }

    #[test]
    fn global_coefficient_modes() {
        let g = GridSpec::new(0.0, 1.0, 2, BoundaryCondition::OutflowExtrapolation).unwrap();
        let m = Model::Cubic(CubicModel::new(1.0).unwrap());
        let b = limiting();
        let field = FieldState::scalar(g, vec![2.0, -2.0]).unwrap();
        let cfg = WcdConfig {
            safety_margin: 0.0,
            ..WcdConfig::adaptive(50, 0.5)
        };
        // sigma = 4, c^2 + c - 4 = 0
        let expected = (-1.0 + 17f64.sqrt()) / 2.0;
        assert_abs_diff_eq!(
            global_coefficient(&field, &m, &b, &cfg).unwrap(),
            expected,
            epsilon = 1e-14
        );
        let flat = FieldState::scalar(g, vec![1.5, 1.5]).unwrap();
        assert_eq!(global_coefficient(&flat, &m, &b, &cfg).unwrap(), 0.0);
        assert_eq!(
            global_coefficient(&field, &m, &b, &WcdConfig::fixed(3, 5.0)).unwrap(),
            5.0
        );
    }
}
