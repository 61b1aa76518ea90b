//! Model equations: the cubic scalar law with linear diffusion and
//! dispersion, van der Waals elasticity with capillarity, and the Hall-MHD
//! system.

use crate::error::{Error, Result};

pub type Mat2 = [[f64; 2]; 2];

/// Scalar law `u_t + (u^3)_x = eps u_xx + delta eps^2 u_xxx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicModel {
    /// Ratio of dispersion to squared diffusion.
    pub delta: f64,
}

impl CubicModel {
    pub fn new(delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "delta must be finite and nonnegative, got {delta}"
            )));
        }
        Ok(CubicModel { delta })
    }

    #[inline]
    pub fn flux(&self, u: f64) -> f64 {
        u * u * u
    }

    #[inline]
    pub fn dflux(&self, u: f64) -> f64 {
        3.0 * u * u
    }

    /// `|[[f]] / [[u]]|`, written so it is exactly symmetric in its arguments
    /// and exactly invariant under `u -> -u`.
    #[inline]
    pub fn chord_speed(&self, a: f64, b: f64) -> f64 {
        ((a * a + b * b) + a * b).abs()
    }

    pub fn wave_speed_bound(&self, u: f64) -> f64 {
        self.dflux(u)
    }

    /// Quadratic entropy `u^2/2`, its flux `3u^4/4` and the entropy variable `u`.
    pub fn entropy_pair(&self, u: f64) -> EntropyValues {
        EntropyValues {
            entropy: 0.5 * u * u,
            entropy_flux: 0.75 * u * u * u * u,
            variable: vec![u],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyValues {
    pub entropy: f64,
    pub entropy_flux: f64,
    /// Gradient of the entropy with respect to the conserved variables.
    pub variable: Vec<f64>,
}

/// Structure of the regularization in a 2x2 system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionKind {
    /// `eps D1 U_xx + coeff eps^2 D2 U_xxx`.
    ThirdOrderCapillarity,
    /// `eps D1 U_xx + coeff eps D2 U_xx`.
    SecondOrderHall,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemKind {
    /// Unknowns `(w, v)`, flux `(-v, -sigma(w))`.
    VanDerWaals { gas_constant: f64, temperature: f64 },
    /// Unknowns `(v, w)`, flux `(v^2 + w^2) (v, w)`.
    HallMhd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemModel {
    pub kind: SystemKind,
    pub d1: Mat2,
    pub d2: Mat2,
    pub dispersion_kind: DispersionKind,
    /// Capillarity coefficient for elasticity, Hall parameter for MHD.
    pub coeff: f64,
}

pub const VDW_GAS_CONSTANT: f64 = 8.0 / 3.0;
pub const VDW_TEMPERATURE: f64 = 1.005;

impl SystemModel {
    pub fn vdw_elasticity(coeff: f64) -> Self {
        Self::vdw_elasticity_with(coeff, VDW_GAS_CONSTANT, VDW_TEMPERATURE)
    }

    pub fn vdw_elasticity_with(coeff: f64, gas_constant: f64, temperature: f64) -> Self {
        SystemModel {
            kind: SystemKind::VanDerWaals {
                gas_constant,
                temperature,
            },
            d1: [[0.0, 0.0], [0.0, 1.0]],
            d2: [[0.0, 0.0], [-1.0, 0.0]],
            dispersion_kind: DispersionKind::ThirdOrderCapillarity,
            coeff,
        }
    }

    pub fn hall_mhd(alpha: f64) -> Self {
        SystemModel {
            kind: SystemKind::HallMhd,
            d1: [[1.0, 0.0], [0.0, 1.0]],
            d2: [[0.0, 1.0], [-1.0, 0.0]],
            dispersion_kind: DispersionKind::SecondOrderHall,
            coeff: alpha,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SystemKind::VanDerWaals { .. } => "vdw-elasticity",
            SystemKind::HallMhd => "hall-mhd",
        }
    }

    pub fn component_names(&self) -> [&'static str; 2] {
        match self.kind {
            SystemKind::VanDerWaals { .. } => ["w", "v"],
            SystemKind::HallMhd => ["v", "w"],
        }
    }

    fn check(&self, u: [f64; 2]) -> Result<()> {
        if let SystemKind::VanDerWaals { .. } = self.kind {
            if !(u[0] > 1.0 / 3.0) {
                return Err(Error::Domain {
                    model: "vdw-elasticity",
                    detail: format!("specific volume w = {} must exceed 1/3", u[0]),
                });
            }
        }
        Ok(())
    }

    /// Van der Waals stress `-RT/(w - 1/3) + 3/w^2`. Caller guarantees `w > 1/3`.
    #[inline]
    pub fn stress(&self, w: f64) -> f64 {
        match self.kind {
            SystemKind::VanDerWaals {
                gas_constant,
                temperature,
            } => -gas_constant * temperature / (w - 1.0 / 3.0) + 3.0 / (w * w),
            SystemKind::HallMhd => f64::NAN,
        }
    }

    #[inline]
    pub fn stress_prime(&self, w: f64) -> f64 {
        match self.kind {
            SystemKind::VanDerWaals {
                gas_constant,
                temperature,
            } => {
                let s = w - 1.0 / 3.0;
                gas_constant * temperature / (s * s) - 6.0 / (w * w * w)
            }
            SystemKind::HallMhd => f64::NAN,
        }
    }

    #[inline]
    pub fn stress_second(&self, w: f64) -> f64 {
        match self.kind {
            SystemKind::VanDerWaals {
                gas_constant,
                temperature,
            } => {
                let s = w - 1.0 / 3.0;
                -2.0 * gas_constant * temperature / (s * s * s) + 18.0 / (w * w * w * w)
            }
            SystemKind::HallMhd => f64::NAN,
        }
    }

    /// Flux without the admissibility check; used in the inner loops after
    /// the state has been validated.
    #[inline]
    pub fn flux_unchecked(&self, u: [f64; 2]) -> [f64; 2] {
        match self.kind {
            SystemKind::VanDerWaals { .. } => [-u[1], -self.stress(u[0])],
            SystemKind::HallMhd => {
                let r2 = u[0] * u[0] + u[1] * u[1];
                [r2 * u[0], r2 * u[1]]
            }
        }
    }

    pub fn flux(&self, u: [f64; 2]) -> Result<[f64; 2]> {
        self.check(u)?;
        Ok(self.flux_unchecked(u))
    }

    /// Bound on the spectral radius of the flux Jacobian.
    pub fn wave_speed_bound(&self, u: [f64; 2]) -> f64 {
        match self.kind {
            SystemKind::VanDerWaals { .. } => self.stress_prime(u[0]).max(0.0).sqrt(),
            SystemKind::HallMhd => 3.0 * (u[0] * u[0] + u[1] * u[1]),
        }
    }

    pub fn entropy_pair(&self, u: [f64; 2]) -> Result<EntropyValues> {
        self.check(u)?;
        match self.kind {
            SystemKind::HallMhd => {
                let r2 = u[0] * u[0] + u[1] * u[1];
                Ok(EntropyValues {
                    entropy: 0.5 * r2,
                    entropy_flux: 0.75 * r2 * r2,
                    variable: vec![u[0], u[1]],
                })
            }
            SystemKind::VanDerWaals { .. } => Err(Error::Unsupported(
                "the elasticity entropy pair is not evaluated at runtime".into(),
            )),
        }
    }
}

/// Any model the solvers accept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Cubic(CubicModel),
    System(SystemModel),
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::Cubic(_) => 1,
            Model::System(_) => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Cubic(_) => "cubic",
            Model::System(s) => s.name(),
        }
    }

    pub fn component_names(&self) -> Vec<&'static str> {
        match self {
            Model::Cubic(_) => vec!["u"],
            Model::System(s) => s.component_names().to_vec(),
        }
    }

    /// Flux of one node; `state` and `out` have length `dim()`.
    pub fn evaluate_flux(&self, state: &[f64]) -> Result<Vec<f64>> {
        self.expect_dim(state)?;
        match self {
            Model::Cubic(m) => Ok(vec![m.flux(state[0])]),
            Model::System(s) => Ok(s.flux([state[0], state[1]])?.to_vec()),
        }
    }

    pub fn entropy_pair(&self, state: &[f64]) -> Result<EntropyValues> {
        self.expect_dim(state)?;
        match self {
            Model::Cubic(m) => Ok(m.entropy_pair(state[0])),
            Model::System(s) => s.entropy_pair([state[0], state[1]]),
        }
    }

    pub fn wave_speed_bound(&self, state: &[f64]) -> f64 {
        match self {
            Model::Cubic(m) => m.wave_speed_bound(state[0]),
            Model::System(s) => s.wave_speed_bound([state[0], state[1]]),
        }
    }

    fn expect_dim(&self, state: &[f64]) -> Result<()> {
        if state.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} expects {} components, got {}",
                self.name(),
                self.dim(),
                state.len()
            )));
        }
        Ok(())
    }
}

/// Piecewise-constant initial data with a single jump.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannData {
    pub left_state: Vec<f64>,
    pub right_state: Vec<f64>,
    pub jump_location: f64,
}

impl RiemannData {
    pub fn new(left_state: Vec<f64>, right_state: Vec<f64>, jump_location: f64) -> Result<Self> {
        if left_state.len() != right_state.len() {
            return Err(Error::ShapeMismatch(
                "left and right Riemann states differ in dimension".into(),
            ));
        }
        Ok(RiemannData {
            left_state,
            right_state,
            jump_location,
        })
    }

    pub fn scalar(u_left: f64, u_right: f64, jump_location: f64) -> Self {
        RiemannData {
            left_state: vec![u_left],
            right_state: vec![u_right],
            jump_location,
        }
    }

    /// Two-component data given in polar form `(r cos theta, r sin theta)`.
    pub fn polar(r_left: f64, theta_left: f64, r_right: f64, theta_right: f64, jump: f64) -> Self {
        RiemannData {
            left_state: vec![r_left * theta_left.cos(), r_left * theta_left.sin()],
            right_state: vec![r_right * theta_right.cos(), r_right * theta_right.sin()],
            jump_location: jump,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.left_state == self.right_state
    }

    pub fn state_at(&self, x: f64) -> &[f64] {
        if x < self.jump_location {
            &self.left_state
        } else {
            &self.right_state
        }
    }
}
