//! Central finite-difference weights on the nodes `-p..=p` and the absolute
//! tail sums that bound the high-order remainder of the equivalent equation.
//!
//! Weights for the first, second and third derivative are obtained from the
//! moment conditions `sum_j j^l w_j = d! * [l == d]`, `0 <= l <= 2p`, solved in
//! exact rational arithmetic and rounded to `f64` only at the end.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Derivative targeted by a weight family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Derivative {
    First = 1,
    Second = 2,
    Third = 3,
}

impl Derivative {
    pub fn order(self) -> u32 {
        self as u32
    }

    pub fn from_order(d: u32) -> Result<Self> {
        match d {
            1 => Ok(Derivative::First),
            2 => Ok(Derivative::Second),
            3 => Ok(Derivative::Third),
            _ => Err(Error::InvalidParameter(format!(
                "derivative order must be 1, 2 or 3, got {d}"
            ))),
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn check_request(p: usize, d: Derivative) -> Result<()> {
    if p < 1 {
        return Err(Error::InvalidParameter(format!(
            "stencil half-width must be at least 1, got {p}"
        )));
    }
    if d == Derivative::Third && p == 1 {
        return Err(Error::DispersionNeedsWiderStencil);
    }
    Ok(())
}

/// Exact solution of the `(2p+1) x (2p+1)` moment system for derivative `d`,
/// indexed `j = -p..=p`.
pub fn exact_weights(p: usize, d: Derivative) -> Result<Vec<BigRational>> {
    check_request(p, d)?;
    let n = 2 * p + 1;
    let pi = p as i64;
    // Row l holds j^l for j = -p..=p, augmented with the right-hand side.
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|l| {
            let mut row: Vec<BigRational> = (-pi..=pi)
                .map(|j| BigRational::from_integer(BigInt::from(j).pow(l as u32)))
                .collect();
            let rhs = if l as u32 == d.order() {
                BigRational::from_integer(factorial(d.order()))
            } else {
                BigRational::zero()
            };
            row.push(rhs);
            row
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .expect("Vandermonde matrix on distinct nodes is nonsingular");
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
    }
    Ok(rows.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

type WeightCache = Mutex<HashMap<(usize, Derivative), Arc<[f64]>>>;

fn cache() -> &'static WeightCache {
    static CACHE: OnceLock<WeightCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Floating-point weights `w_{-p}, ..., w_p` for derivative `d`. Results are
/// cached per `(p, d)`.
pub fn solve_order_conditions(p: usize, d: Derivative) -> Result<Arc<[f64]>> {
    check_request(p, d)?;
    if let Some(w) = cache().lock().unwrap().get(&(p, d)) {
        return Ok(Arc::clone(w));
    }
    let exact = exact_weights(p, d)?;
    let mut w: Vec<f64> = exact
        .iter()
        .map(|q| q.to_f64().expect("finite rational"))
        .collect();
    // Round-to-nearest is odd-symmetric, but enforce the parity exactly anyway.
    let sign = if d == Derivative::Second { 1.0 } else { -1.0 };
    for k in 1..=p {
        w[p - k] = sign * w[p + k];
    }
    if sign < 0.0 {
        w[p] = 0.0;
    }
    let w: Arc<[f64]> = w.into();
    cache().lock().unwrap().insert((p, d), Arc::clone(&w));
    Ok(w)
}

/// Advection, diffusion and dispersion weights of one stencil half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilSet {
    pub p: usize,
    /// First-derivative weights, `sum_j j alpha_j = 1`.
    pub alpha: Arc<[f64]>,
    /// Second-derivative weights, `sum_j j^2 beta_j = 2`.
    pub beta: Arc<[f64]>,
    /// Third-derivative weights, `sum_j j^3 gamma_j = 6`; absent for `p = 1`.
    pub gamma: Option<Arc<[f64]>>,
}

impl StencilSet {
    pub fn build(p: usize) -> Result<Self> {
        let alpha = solve_order_conditions(p, Derivative::First)?;
        let beta = solve_order_conditions(p, Derivative::Second)?;
        let gamma = if p >= 2 {
            Some(solve_order_conditions(p, Derivative::Third)?)
        } else {
            None
        };
        Ok(StencilSet {
            p,
            alpha,
            beta,
            gamma,
        })
    }

    /// Stencil set for a scheme of formal order `2p`.
    pub fn for_order(order: usize) -> Result<Self> {
        if order < 2 || !order.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "scheme order must be an even integer >= 2, got {order}"
            )));
        }
        Self::build(order / 2)
    }

    pub fn order(&self) -> usize {
        2 * self.p
    }

    pub fn gamma(&self) -> Result<&[f64]> {
        self.gamma
            .as_deref()
            .ok_or(Error::DispersionNeedsWiderStencil)
    }

    pub fn beta_abs_sum(&self) -> f64 {
        self.beta.iter().map(|w| w.abs()).sum()
    }

    pub fn gamma_abs_sum(&self) -> f64 {
        self.gamma
            .as_deref()
            .map_or(0.0, |g| g.iter().map(|w| w.abs()).sum())
    }
}

/// Build the stencil set for half-width `p`.
pub fn build_stencil_set(p: usize) -> Result<StencilSet> {
    StencilSet::build(p)
}

/// Absolute tail sums of the equivalent-equation remainder coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBounds {
    pub p: usize,
    pub s_f_hat: f64,
    pub s_d_hat: f64,
    /// `None` when the stencil carries no dispersion weights (`p = 1`).
    pub s_c_hat: Option<f64>,
    /// Last summed index `K`.
    pub k_truncation: u32,
    /// Upper bound on the dropped tail `k > K`, for every weight family.
    pub remainder_bound: f64,
}

impl SeriesBounds {
    /// Bounds of an infinitely wide stencil, where every tail vanishes.
    pub fn limiting(p: usize) -> Self {
        SeriesBounds {
            p,
            s_f_hat: 0.0,
            s_d_hat: 0.0,
            s_c_hat: Some(0.0),
            k_truncation: 0,
            remainder_bound: 0.0,
        }
    }

    pub fn s_c_hat(&self) -> Result<f64> {
        self.s_c_hat.ok_or(Error::DispersionNeedsWiderStencil)
    }
}

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-14;

/// Bound on `sum_{k > K} p^k / k!` via a geometric majorant, valid for `K + 2 > p`.
fn exp_tail_bound(p: usize, big_k: u32) -> f64 {
    let pf = p as f64;
    let mut term = 1.0;
    for k in 1..=big_k + 1 {
        term *= pf / k as f64;
    }
    let ratio = pf / (big_k + 2) as f64;
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        term / (1.0 - ratio)
    }
}

/// Compute `sum_{k >= 2p+1} |sum_j w_j j^k / k!|` for every weight family of
/// `stencil`, truncated once the analytic remainder falls below `tol_tail`.
pub fn tail_sums(stencil: &StencilSet, tol_tail: f64) -> Result<SeriesBounds> {
    if !(tol_tail > 0.0) || !tol_tail.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tail tolerance must be positive, got {tol_tail}"
        )));
    }
    let p = stencil.p;
    let mut families = vec![
        exact_weights(p, Derivative::First)?,
        exact_weights(p, Derivative::Second)?,
    ];
    if stencil.gamma.is_some() {
        families.push(exact_weights(p, Derivative::Third)?);
    }
    let abs_mass: Vec<f64> = families
        .iter()
        .map(|w| w.iter().map(|q| q.abs().to_f64().unwrap()).sum())
        .collect();
    let max_mass = abs_mass.iter().cloned().fold(0.0, f64::max);

    let first = 2 * p as u32 + 1;
    let mut big_k = first;
    while max_mass * exp_tail_bound(p, big_k) >= tol_tail {
        big_k += 1;
    }
    let remainder_bound = max_mass * exp_tail_bound(p, big_k);

    let pi = p as i64;
    let sums: Vec<f64> = families
        .iter()
        .map(|w| {
            (first..=big_k)
                .map(|k| {
                    let moment: BigRational = (-pi..=pi)
                        .zip(w)
                        .map(|(j, wj)| wj * BigRational::from_integer(BigInt::from(j).pow(k)))
                        .fold(BigRational::zero(), |acc, t| acc + t);
                    (moment / BigRational::from_integer(factorial(k)))
                        .abs()
                        .to_f64()
                        .unwrap()
                })
                .sum()
        })
        .collect();

    Ok(SeriesBounds {
        p,
        s_f_hat: sums[0],
        s_d_hat: sums[1],
        s_c_hat: sums.get(2).copied(),
        k_truncation: big_k,
        remainder_bound,
    })
}
