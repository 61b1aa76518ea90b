//! Kinetic function of the cubic law regularized by `eps u_xx + delta eps^2 u_xxx`,
//! obtained by shooting saddle-to-saddle traveling waves.
//!
//! With `xi = (x - s t) / eps` a profile `w(xi)` joining `u_minus` to `u_plus`
//! solves
//!
//! ```text
//! w' = z,   delta z' = g(w) - z,   g(w) = w^3 - u_minus^3 - s (w - u_minus)
//! ```
//!
//! with `s = u_minus^2 + u_minus u_plus + u_plus^2`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingWaveProblem {
    pub u_minus: f64,
    pub delta: f64,
    /// Bisection stops once the bracket on `u_plus` is this narrow.
    pub tolerance: f64,
    /// Cap on the phase-plane arc length of each shot, in units of `u_minus - u_plus`.
    pub max_arc_length: f64,
}

impl TravelingWaveProblem {
    pub fn new(u_minus: f64, delta: f64) -> Self {
        TravelingWaveProblem {
            u_minus,
            delta,
            tolerance: 1e-12,
            max_arc_length: 1e4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticConnection {
    pub u_minus: f64,
    pub u_plus: f64,
    pub speed: f64,
    /// Width of the final bisection bracket.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Landing {
    /// The orbit crossed below `u_plus`.
    Overshoot,
    /// The orbit turned back before reaching `u_plus`.
    Undershoot,
}

/// Connecting state for `u_minus`, negated for `u_minus < 0`.
pub fn traveling_wave_kinetic(problem: &TravelingWaveProblem) -> Result<KineticConnection> {
    let TravelingWaveProblem {
        u_minus,
        delta,
        tolerance,
        max_arc_length,
    } = *problem;
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if !(tolerance > 0.0) || !(max_arc_length > 0.0) || !u_minus.is_finite() {
        return Err(Error::InvalidParameter(
            "tolerance and arc length must be positive".into(),
        ));
    }
    if u_minus < 0.0 {
        let mut c = traveling_wave_kinetic(&TravelingWaveProblem {
            u_minus: -u_minus,
            ..*problem
        })?;
        c.u_minus = -c.u_minus;
        c.u_plus = -c.u_plus;
        return Ok(c);
    }
    if u_minus == 0.0 {
        return Err(Error::NoConnection("u_minus = 0 admits no shock".into()));
    }

    let shoot = |u_plus: f64| shoot(u_minus, u_plus, delta, max_arc_length);
    let mut lo = -u_minus;
    let mut hi = -0.5 * u_minus;
    let span = hi - lo;
    let pad = 1e-9 * span;
    let land_lo = shoot(lo + pad)?;
    let land_hi = shoot(hi - pad)?;
    if land_lo == land_hi {
        return Err(Error::NoConnection(format!(
            "no undercompressive connection from u_minus = {u_minus} with delta = {delta}"
        )));
    }
    let tol = tolerance * u_minus.abs().max(1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if shoot(mid)? == land_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u_plus = 0.5 * (lo + hi);
    Ok(KineticConnection {
        u_minus,
        u_plus,
        speed: u_minus * u_minus + u_minus * u_plus + u_plus * u_plus,
        residual: hi - lo,
    })
}

fn shoot(u_minus: f64, u_plus: f64, delta: f64, max_arc: f64) -> Result<Landing> {
    let s = u_minus * u_minus + u_minus * u_plus + u_plus * u_plus;
    let g = |w: f64| {
        // (w - u_minus)(w - u_plus)(w + u_minus + u_plus) without cancellation
        (w - u_minus) * (w - u_plus) * (w + u_minus + u_plus)
    };
    let slope = 3.0 * u_minus * u_minus - s;
    if !(slope > 0.0) {
        return Err(Error::NoConnection(format!(
            "u_minus = {u_minus} is not a saddle"
        )));
    }
    let lambda = (-1.0 + (1.0 + 4.0 * delta * slope).sqrt()) / (2.0 * delta);
    let jump = u_minus - u_plus;
    let eta = 1e-10 * jump;
    let rhs = |y: [f64; 2]| [y[1], (g(y[0]) - y[1]) / delta];
    let mut y = [u_minus - eta, -lambda * eta];
    let event = |y: &[f64; 2]| -> Option<Landing> {
        if y[0] < u_plus {
            Some(Landing::Overshoot)
        } else if y[1] >= 0.0 {
            Some(Landing::Undershoot)
        } else {
            None
        }
    };
    let mut h = 0.1 / lambda.max(1.0);
    let mut arc = 0.0;
    let mut accepted = 0usize;
    let atol = 1e-13 * jump;
    let rtol = 1e-11;
    while arc < max_arc && accepted < MAX_STEPS {
        let (y5, err) = dopri_step(&rhs, y, h);
        let scale = |k: usize| atol + rtol * y[k].abs().max(y5[k].abs());
        let e = (0..2)
            .map(|k| (err[k] / scale(k)).powi(2))
            .sum::<f64>()
            .sqrt()
            / 2f64.sqrt();
        if !e.is_finite() {
            h *= 0.2;
            continue;
        }
        if e <= 1.0 {
            arc += ((y5[0] - y[0]).powi(2) + (y5[1] - y[1]).powi(2)).sqrt() / jump;
            accepted += 1;
            y = y5;
            if let Some(l) = event(&y) {
                return Ok(l);
            }
        }
        let factor = if e == 0.0 {
            5.0
        } else {
            (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < 1e-14 {
            return Err(Error::NoConnection(
                "step size underflow while shooting".into(),
            ));
        }
    }
    // the orbit lingers near a rest point: classify by its final position
    Ok(if y[0] < u_plus {
        Landing::Overshoot
    } else {
        Landing::Undershoot
    })
}

const MAX_STEPS: usize = 1_000_000;

// Dormand-Prince 5(4) tableau
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One autonomous Dormand-Prince step: fifth-order solution and error estimate.
pub(crate) fn dopri_step<F>(f: &F, y: [f64; 2], h: f64) -> ([f64; 2], [f64; 2])
where
    F: Fn([f64; 2]) -> [f64; 2],
{
    let add = |coef: &[(f64, [f64; 2])]| {
        let mut out = y;
        for (c, k) in coef {
            out[0] += h * c * k[0];
            out[1] += h * c * k[1];
        }
        out
    };
    let k1 = f(y);
    let k2 = f(add(&[(A21, k1)]));
    let k3 = f(add(&[(A31, k1), (A32, k2)]));
    let k4 = f(add(&[(A41, k1), (A42, k2), (A43, k3)]));
    let k5 = f(add(&[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]));
    let k6 = f(add(&[
        (A61, k1),
        (A62, k2),
        (A63, k3),
        (A64, k4),
        (A65, k5),
    ]));
    let y5 = add(&[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
    let k7 = f(y5);
    let mut err = [0.0; 2];
    for i in 0..2 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y5, err)
}
